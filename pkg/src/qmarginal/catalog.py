"""Registry of the printed spectral-constraint families.

Each family carries its own ordering and normalization convention;
``check_family`` canonicalizes the input bundle (re-sorting and
re-normalizing as declared, recording that it did) before evaluating.
Family ids are stable strings and part of the CLI contract.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .spectra import Spectrum, renormalize, spectrum
from .systems import SystemDescriptor, parse_system


class CatalogError(ValueError):
    """Raised for unknown families, rank mismatches or unavailable lists."""


@dataclass(frozen=True)
class InequalityRecord:
    """One linear constraint over named spectrum slots.

    ``terms`` maps slot names to coefficient tuples; the constraint is
    sum(coeffs . values) <= bound (or == for equalities).
    """

    terms: tuple
    relation: str = "<="
    bound: object = 0
    label: str = field(default="", compare=False)
    meta: object = field(default=None, compare=False, hash=False)

    def lhs(self, values: dict) -> float:
        total = 0.0
        for slot, coeffs in self.terms:
            vec = values[slot]
            if len(vec) != len(coeffs):
                raise CatalogError(
                    f"slot {slot!r} expects {len(coeffs)} entries, got {len(vec)}"
                )
            total += sum(float(c) * float(v) for c, v in zip(coeffs, vec))
        return total

    def slack(self, values: dict) -> float:
        lhs = self.lhs(values)
        if self.relation == "<=":
            return float(self.bound) - lhs
        return -abs(lhs - float(self.bound))


@dataclass(frozen=True)
class SpectraBundle:
    """Marginal data handed to a family check.

    ``sites`` are per-subsystem spectra, ``joint`` the global state
    spectrum, ``one_body`` the fermionic one-particle spectrum.
    """

    sites: tuple = ()
    joint: Spectrum = None
    one_body: Spectrum = None


@dataclass(frozen=True)
class CheckReport:
    family_id: str
    satisfied: bool
    worst_slack: float
    violated: tuple
    n_inequalities: int
    tolerance: float
    notes: tuple = ()


def _report(family_id, slacks, labels, tol, notes=()):
    worst = min(slacks) if slacks else 0.0
    violated = tuple(lbl for s, lbl in zip(slacks, labels) if s < -tol)
    return CheckReport(
        family_id=family_id,
        satisfied=worst >= -tol,
        worst_slack=worst,
        violated=violated,
        n_inequalities=len(slacks),
        tolerance=tol,
        notes=tuple(notes),
    )


def _eval_records(family_id, records, values, tol, notes=()):
    slacks = [r.slack(values) for r in records]
    labels = [r.label or f"#{i}" for i, r in enumerate(records)]
    return _report(family_id, slacks, labels, tol, notes)


def _desc(spec: Spectrum):
    return tuple(sorted(spec.as_floats(), reverse=True))


def _need_sites(bundle, count, size, family_id):
    if len(bundle.sites) != count:
        raise CatalogError(f"{family_id} needs {count} site spectra")
    for s in bundle.sites:
        if len(s) != size:
            raise CatalogError(f"{family_id} needs site spectra of length {size}")
    return [_desc(s) for s in bundle.sites]


def _need_joint(bundle, size, family_id):
    if bundle.joint is None or len(bundle.joint) != size:
        raise CatalogError(f"{family_id} needs a joint spectrum of length {size}")
    return _desc(bundle.joint)


def _need_one_body(bundle, r, n, family_id):
    lam = bundle.one_body
    if lam is None or len(lam) != r:
        raise CatalogError(f"{family_id} needs a one-body spectrum of length {r}")
    notes = []
    if abs(float(lam.trace_tag) - n) > 1e-10:
        lam = renormalize(lam, float(n))
        notes.append(f"renormalized one-body spectrum to trace {n}")
    return tuple(sorted(lam.as_floats(), reverse=True)), notes


# ---------------------------------------------------------------------------
# Static family data

def _rec(slot_coeffs, bound, relation="<=", label=""):
    terms = tuple((slot, tuple(Fraction(c) for c in coeffs)) for slot, coeffs in slot_coeffs)
    return InequalityRecord(terms, relation, Fraction(bound), label)


# Borland-Dennis system (three particles, six orbitals), chemist trace 3.
BD6_RECORDS = (
    _rec((("lam", (1, 0, 0, 0, 0, 1)),), 1, "=", "l1+l6=1"),
    _rec((("lam", (0, 1, 0, 0, 1, 0)),), 1, "=", "l2+l5=1"),
    _rec((("lam", (0, 0, 1, 1, 0, 0)),), 1, "=", "l3+l4=1"),
    _rec((("lam", (0, 0, 0, 1, -1, -1)),), 0, "<=", "l4<=l5+l6"),
)

# Seven-orbital three-particle system: conjectured-by-experiment form
# (sums of three occupations bounded below by 1).
F7_BD_TRIPLES = ((1, 6, 7), (2, 5, 7), (3, 4, 7), (3, 5, 6))
F7_BD_RECORDS = tuple(
    _rec(
        (("lam", tuple(-1 if i + 1 in t else 0 for i in range(7))),),
        -1,
        "<=",
        f"l{t[0]}+l{t[1]}+l{t[2]}>=1",
    )
    for t in F7_BD_TRIPLES
)

# The same system in zero-sum test-spectrum form with coefficients 3/-4.
# The third row is printed with a sign typo in the source; the coefficient
# of l5 must be +3 for the row to be a permuted zero-sum test spectrum.
F7_LIST_ROWS = (
    (-4, 3, 3, 3, 3, -4, -4),
    (3, -4, 3, 3, -4, 3, -4),
    (3, 3, -4, -4, 3, 3, -4),
    (3, 3, -4, 3, -4, -4, 3),
)
F7_LIST_RECORDS = tuple(
    _rec((("lam", row),), 2, "<=", f"row{i+1}") for i, row in enumerate(F7_LIST_ROWS)
)

# Eight-orbital three-particle system: 31 inequalities grouped by extremal
# edge, group sizes 1, 4, 5, 2, 3, 2, 6, 4, 4.
F8_31_GROUPS = (
    (1, ((3, -1, -1, -1, -1, -1, -1, 3),)),
    (1, (
        (-1, 1, 1, 1, 1, -1, -1, -1),
        (1, 1, -1, -1, 1, 1, -1, -1),
        (1, 1, -1, 1, -1, -1, 1, -1),
        (1, -1, 1, 1, -1, 1, -1, -1),
    )),
    (1, (
        (2, 1, -2, -1, 0, -1, 0, 1),
        (2, -1, 0, -1, 0, 1, -2, 1),
        (0, 0, 1, 2, -2, -1, -1, 1),
        (1, 2, -2, 0, -1, -1, 0, 1),
        (2, -1, 0, 1, -2, -1, 0, 1),
    )),
    (3, (
        (5, 5, -7, -3, -3, 1, 1, 1),
        (5, -3, -3, 1, 1, 5, -7, 1),
    )),
    (3, (
        (5, 1, -3, 1, -3, 1, -3, 1),
        (1, 1, 1, 5, -3, -3, -3, 1),
        (1, 5, -3, 1, 1, -3, -3, 1),
    )),
    (3, (
        (9, 1, -7, -7, -7, 1, 1, 9),
        (9, -7, -7, 1, 1, 1, -7, 9),
    )),
    (5, (
        (7, -1, -1, -1, -1, 7, -9, -1),
        (7, -1, -1, 7, -9, -1, -1, -1),
        (7, 7, -9, -1, -1, -1, -1, -1),
        (-1, -1, 7, 7, -1, -1, -9, -1),
        (-1, 7, -1, 7, -1, -9, -1, -1),
        (-1, 7, -1, -1, 7, -1, -9, -1),
    )),
    (7, (
        (-3, 5, 5, 13, -11, -3, -11, 5),
        (5, 13, -11, 5, -11, -3, -3, 5),
        (5, -3, 5, 13, -11, -11, -3, 5),
        (5, 13, -11, -3, 5, -11, -3, 5),
    )),
    (9, (
        (19, 11, -21, -13, -5, -5, 3, 11),
        (19, -13, -5, -5, 3, 11, -21, 11),
        (11, 19, -21, -5, -13, -5, 3, 11),
        (-5, 3, 11, 19, -21, -13, -5, 11),
    )),
)
F8_31_RECORDS = tuple(
    _rec((("lam", row),), bound, "<=", f"g{gi+1}r{ri+1}")
    for gi, (bound, rows) in enumerate(F8_31_GROUPS)
    for ri, row in enumerate(rows)
)

# Eight-orbital four-particle system: 14 inequalities, two edge groups.
F84_14_GROUPS = (
    (4, (
        (5, 1, 1, -3, 1, -3, -3, 1),
        (1, 1, 5, -3, 1, 1, -3, -3),
        (1, 1, 1, 1, 5, -3, -3, -3),
        (1, 5, 1, -3, 1, -3, 1, -3),
        (5, -3, 1, 1, 1, 1, -3, -3),
        (5, 1, 1, -3, -3, 1, 1, -3),
        (5, 1, -3, 1, 1, -3, 1, -3),
    )),
    (4, (
        (-1, 3, 3, -1, 3, -1, -1, -5),
        (3, 3, -1, -1, 3, -5, -1, -1),
        (3, 3, 3, -5, -1, -1, -1, -1),
        (3, -1, 3, -1, 3, -1, -5, -1),
        (3, 3, -1, -1, -1, -1, 3, -5),
        (3, -1, -1, 3, 3, -1, -1, -5),
        (3, -1, 3, -1, -1, 3, -1, -5),
    )),
)
F84_14_RECORDS = tuple(
    _rec((("lam", row),), bound, "<=", f"g{gi+1}r{ri+1}")
    for gi, (bound, rows) in enumerate(F84_14_GROUPS)
    for ri, row in enumerate(rows)
)

# Absolute-value form of the same system: |x_1| + ... + |x_7| <= 4 with the
# seven printed sign patterns (rows are coefficients of lambda_1..lambda_8).
F84_ABS_PATTERNS = (
    (1, 1, 1, 1, -1, -1, -1, -1),
    (1, 1, -1, -1, 1, 1, -1, -1),
    (1, -1, 1, -1, 1, -1, 1, -1),
    (1, -1, -1, 1, -1, 1, 1, -1),
    (-1, 1, 1, -1, -1, 1, 1, -1),
    (-1, 1, -1, 1, 1, -1, 1, -1),
    (-1, -1, 1, 1, 1, 1, -1, -1),
)

# Two-particle four-orbital mixed system; both spectra normalized to the
# same trace (canonicalized to 1 here), written in decreasing order.
W2H4_ROWS = (
    ((2, 0, 0, 0), (-1, -1, -1, 0, 0, 0), "2l1<=n1+n2+n3"),
    ((0, 0, 0, -2), (0, 0, 0, 1, 1, 1), "2l4>=n4+n5+n6"),
    ((2, 0, 0, -2), (-1, -1, 0, 0, 1, 1), "2(l1-l4)<=n1+n2-n5-n6"),
    ((1, 1, -1, -1), (-1, 0, 0, 0, 0, 1), "l1+l2-l3-l4<=n1-n6"),
    ((1, -1, 1, -1), (-1, 0, 0, 0, 1, 0), "alt<=n1-n5"),
    ((1, -1, 1, -1), (0, -1, 0, 0, 0, 1), "alt<=n2-n6"),
    ((1, -1, -1, 1), (-1, 0, 0, 1, 0, 0), "abs+<=n1-n4"),
    ((1, -1, -1, 1), (0, -1, 0, 0, 1, 0), "abs+<=n2-n5"),
    ((1, -1, -1, 1), (0, 0, -1, 0, 0, 1), "abs+<=n3-n6"),
    ((-1, 1, 1, -1), (-1, 0, 0, 1, 0, 0), "abs-<=n1-n4"),
    ((-1, 1, 1, -1), (0, -1, 0, 0, 1, 0), "abs-<=n2-n5"),
    ((-1, 1, 1, -1), (0, 0, -1, 0, 0, 1), "abs-<=n3-n6"),
    ((2, 0, -2, 0), (-1, 0, -1, 0, 1, 1), "2(l1-l3)<=n1+n3-n5-n6"),
    ((2, 0, -2, 0), (-1, -1, 0, 1, 0, 1), "2(l1-l3)<=n1+n2-n4-n6"),
    ((0, 2, 0, -2), (-1, 0, -1, 0, 1, 1), "2(l2-l4)<=n1+n3-n5-n6"),
    ((0, 2, 0, -2), (-1, -1, 0, 1, 0, 1), "2(l2-l4)<=n1+n2-n4-n6"),
    ((2, -2, 0, 0), (-1, 0, -1, 1, 0, 1), "2(l1-l2)<=n1+n3-n4-n6"),
    ((2, -2, 0, 0), (0, -1, -1, 0, 1, 1), "2(l1-l2)<=n2+n3-n5-n6"),
    ((2, -2, 0, 0), (-1, -1, 0, 1, 1, 0), "2(l1-l2)<=n1+n2-n4-n5"),
    ((0, 0, 2, -2), (-1, 0, -1, 1, 0, 1), "2(l3-l4)<=n1+n3-n4-n6"),
    ((0, 0, 2, -2), (0, -1, -1, 0, 1, 1), "2(l3-l4)<=n2+n3-n5-n6"),
    ((0, 0, 2, -2), (-1, -1, 0, 1, 1, 0), "2(l3-l4)<=n1+n2-n4-n5"),
)
W2H4_RECORDS = tuple(
    _rec((("lam", lam), ("nu", nu)), 0, "<=", label) for lam, nu, label in W2H4_ROWS
)

# Three-qubit mixed system: ten inequalities grouped by extremal edge; the
# site gaps Delta_i are expected sorted increasing.
THREE_QUBIT_ROWS = (
    ((0, 0, 1), (1, 1, 1, 1, -1, -1, -1, -1)),
    ((0, 1, 1), (2, 2, 0, 0, 0, 0, -2, -2)),
    ((1, 1, 1), (3, 1, 1, 1, -1, -1, -1, -3)),
    ((-1, 1, 1), (1, 3, 1, 1, -1, -1, -1, -3)),
    ((-1, 1, 1), (3, 1, 1, 1, -1, -1, -3, -1)),
    ((1, 1, 2), (4, 2, 2, 0, 0, -2, -2, -4)),
    ((-1, 1, 2), (2, 4, 2, 0, 0, -2, -2, -4)),
    ((-1, 1, 2), (4, 2, 0, 2, 0, -2, -2, -4)),
    ((-1, 1, 2), (4, 2, 2, 0, -2, 0, -2, -4)),
    ((-1, 1, 2), (4, 2, 2, 0, 0, -2, -4, -2)),
)
THREE_QUBIT_RECORDS = tuple(
    _rec(
        (("delta", d), ("joint", tuple(-c for c in rhs))),
        0,
        "<=",
        f"edge{d}#{i+1}",
    )
    for i, (d, rhs) in enumerate(THREE_QUBIT_ROWS)
)

# Franz / Higuchi three-qutrit system: seven base rows per site permutation,
# marginal spectra in increasing order; duplicates removed exactly.
_FRANZ_BASE = (
    ((1, 1, 0), (1, 1, 0), (1, 1, 0)),
    ((1, 0, 1), (1, 1, 0), (1, 0, 1)),
    ((0, 1, 1), (1, 1, 0), (0, 1, 1)),
    ((1, 2, 0), (1, 2, 0), (1, 2, 0)),
    ((2, 1, 0), (1, 2, 0), (2, 1, 0)),
    ((0, 2, 1), (1, 2, 0), (0, 2, 1)),
    ((0, 2, 1), (2, 1, 0), (0, 1, 2)),
)


def _franz_records():
    from itertools import permutations

    records = []
    for row_i, (ca, cb, cc) in enumerate(_FRANZ_BASE):
        for sites in permutations((0, 1, 2)):
            coeffs = [(0, 0, 0)] * 3
            coeffs[sites[0]] = ca
            coeffs[sites[1]] = tuple(-x for x in cb)
            coeffs[sites[2]] = tuple(-x for x in cc)
            records.append(
                _rec(
                    (
                        ("site0", coeffs[0]),
                        ("site1", coeffs[1]),
                        ("site2", coeffs[2]),
                    ),
                    0,
                    "<=",
                    f"row{row_i+1}({sites})",
                )
            )
    return tuple(dict.fromkeys(records))


FRANZ_RECORDS = _franz_records()

# Bravyi two-qubit mixed system: seven inequalities on the minimal marginal
# eigenvalues and the global spectrum.
BRAVYI_ROWS = (
    ((-1, 0), (0, 0, 1, 1), "lA>=l3+l4"),
    ((0, -1), (0, 0, 1, 1), "lB>=l3+l4"),
    ((-1, -1), (0, 1, 1, 2), "lA+lB>=l2+l3+2l4"),
    ((1, -1), (-1, 0, 1, 0), "lA-lB<=l1-l3"),
    ((-1, 1), (-1, 0, 1, 0), "lB-lA<=l1-l3"),
    ((1, -1), (0, -1, 0, 1), "lA-lB<=l2-l4"),
    ((-1, 1), (0, -1, 0, 1), "lB-lA<=l2-l4"),
)
BRAVYI_RECORDS = tuple(
    _rec((("mins", m), ("joint", j)), 0, "<=", label) for m, j, label in BRAVYI_ROWS
)


def _chsh_records_full():
    base = ((-1, 1), (-1, -1))
    out = []
    for transpose in (False, True):
        for swap_a in (False, True):
            for e1 in (1, -1):
                for e2 in (1, -1):
                    mat = [[0, 0], [0, 0]]
                    eps = (e1, e2)
                    for i in range(2):
                        row = 1 - i if swap_a else i
                        for j in range(2):
                            mat[row][j] += eps[i] * base[i][j]
                    if transpose:
                        mat = [[mat[0][0], mat[1][0]], [mat[0][1], mat[1][1]]]
                    out.append(
                        _rec(
                            (("corr", (mat[0][0], mat[0][1], mat[1][0], mat[1][1])),),
                            2,
                            "<=",
                            f"t={int(transpose)} s={int(swap_a)} e=({e1},{e2})",
                        )
                    )
    return tuple(out)


CHSH_RECORDS = _chsh_records_full()


# ---------------------------------------------------------------------------
# Family checkers

def _check_polygon(fam, bundle, tol):
    if len(bundle.sites) < 2:
        raise CatalogError("POLYGON needs at least two site spectra")
    mins = []
    for s in bundle.sites:
        if len(s) != 2:
            raise CatalogError("POLYGON applies to qubit marginals")
        mins.append(min(s.as_floats()))
    slacks = [sum(mins) - 2 * m for m in mins]
    labels = [f"site{i}" for i in range(len(mins))]
    return _report(fam.family_id, slacks, labels, tol)


def _check_bravyi(fam, bundle, tol):
    sites = _need_sites(bundle, 2, 2, fam.family_id)
    joint = _need_joint(bundle, 4, fam.family_id)
    values = {"mins": (sites[0][1], sites[1][1]), "joint": joint}
    return _eval_records(fam.family_id, fam.records, values, tol)


def _check_franz(fam, bundle, tol):
    sites = _need_sites(bundle, 3, 3, fam.family_id)
    asc = [tuple(reversed(s)) for s in sites]
    values = {f"site{i}": asc[i] for i in range(3)}
    return _eval_records(
        fam.family_id, fam.records, values, tol, notes=("sites sorted increasing",)
    )


def _check_basic(fam, bundle, tol):
    if len(bundle.sites) != 2:
        raise CatalogError("BASIC needs two site spectra")
    a = _desc(bundle.sites[0])
    b = _desc(bundle.sites[1])
    ab = _need_joint(bundle, len(a) * len(b), fam.family_id)
    m, n = len(a), len(b)
    slacks, labels = [], []
    for k in range(1, m + 1):
        slacks.append(sum(ab[: k * n]) - sum(a[:k]))
        labels.append(f"A{k}")
    for l in range(1, n + 1):
        slacks.append(sum(ab[: m * l]) - sum(b[:l]))
        labels.append(f"B{l}")
    return _report(fam.family_id, slacks, labels, tol)


def _check_three_qubit(fam, bundle, tol):
    sites = _need_sites(bundle, 3, 2, fam.family_id)
    joint = _need_joint(bundle, 8, fam.family_id)
    deltas = sorted(s[0] - s[1] for s in sites)
    values = {"delta": tuple(deltas), "joint": joint}
    return _eval_records(
        fam.family_id, fam.records, values, tol, notes=("gaps sorted increasing",)
    )


def _check_pauli(fam, bundle, tol):
    # The occupation-box criterion applies to the spectrum as given; the
    # chemist normalization (trace n) is the caller's contract.
    lam = bundle.one_body
    if lam is None:
        raise CatalogError("PAULI needs a one-body spectrum")
    vals = tuple(sorted(lam.as_floats(), reverse=True))
    slacks, labels = [], []
    for i, v in enumerate(vals):
        slacks.append(v)
        labels.append(f"l{i+1}>=0")
        slacks.append(1.0 - v)
        labels.append(f"l{i+1}<=1")
    return _report(fam.family_id, slacks, labels, tol)


def _check_even_degeneracy(fam, bundle, tol):
    r, n = fam.meta["r"], fam.meta["n"]
    if n not in (2, r - 2):
        raise CatalogError(
            f"even-degeneracy criterion applies to two particles or two "
            f"holes, not (r={r}, n={n})"
        )
    lam, notes = _need_one_body(bundle, r, n, fam.family_id)
    pair_tol = 1e-8
    vals = list(lam)
    leftover = None
    if r % 2 == 1:
        if n == 2:
            leftover = abs(vals.pop())       # the odd eigenvalue must be 0
        else:
            leftover = abs(vals.pop(0) - 1)  # holes: the odd eigenvalue is 1
    defect = 0.0
    for i in range(0, len(vals), 2):
        defect = max(defect, abs(vals[i] - vals[i + 1]))
    if leftover is not None:
        defect = max(defect, leftover)
    slacks = [pair_tol - defect]
    return _report(
        fam.family_id,
        slacks,
        ["even-degeneracy defect"],
        0.0,
        tuple(notes) + (f"pairing tolerance {pair_tol}",),
    )


def _check_fermi_records(fam, bundle, tol):
    r, n = fam.meta["r"], fam.meta["n"]
    lam, notes = _need_one_body(bundle, r, n, fam.family_id)
    return _eval_records(fam.family_id, fam.records, {"lam": lam}, tol, notes)


def _check_f84_abs(fam, bundle, tol):
    lam, notes = _need_one_body(bundle, 8, 4, fam.family_id)
    total = 0.0
    for pattern in F84_ABS_PATTERNS:
        total += abs(sum(c * v for c, v in zip(pattern, lam)))
    return _report(fam.family_id, [4.0 - total], ["sum|x|<=4"], tol, notes)


def _check_w2h4(fam, bundle, tol):
    r, n = 4, 2
    lam = bundle.one_body
    if lam is None or len(lam) != r:
        raise CatalogError(f"{fam.family_id} needs a one-body spectrum of length {r}")
    notes = []
    if abs(float(lam.trace_tag) - 1.0) > 1e-10:
        lam = renormalize(lam, 1.0)
        notes.append("renormalized one-body spectrum to trace 1")
    nu = _need_joint(bundle, 6, fam.family_id)
    values = {"lam": tuple(sorted(lam.as_floats(), reverse=True)), "nu": nu}
    return _eval_records(fam.family_id, fam.records, values, tol, notes)


def _check_w2h5_meta(fam, bundle, tol):
    raise CatalogError(
        "W2H5 is recorded as metadata only (460 independent inequalities); "
        "the list is not reproduced"
    )


def _check_chsh_records(fam, bundle, tol):
    raise CatalogError("use check_chsh for correlation data")


# ---------------------------------------------------------------------------
# Registry

@dataclass(frozen=True)
class Family:
    family_id: str
    system: str
    conventions: str
    declared_count: int
    records: tuple
    checker: object = field(compare=False)
    matcher: object = field(compare=False)
    meta: dict = field(default=None, compare=False)


def _m_polygon(d: SystemDescriptor):
    return d.pure and d.kind in ("tensor", "qubits") and len(d.dims) >= 2 and all(
        x == 2 for x in d.dims
    )


def _m_fermi(r, n, pure):
    def match(d: SystemDescriptor):
        return d.kind == "fermion" and d.r == r and d.n == n and d.pure == pure
    return match


FAMILIES = {}


def _add(family):
    FAMILIES[family.family_id] = family


_add(Family(
    "POLYGON", "qubit arrays, pure",
    "minimal marginal eigenvalues; each bounded by the sum of the others",
    0, (), _check_polygon, _m_polygon, {},
))
_add(Family(
    "BRAVYI_2Q", "2x2 mixed",
    "minimal marginal eigenvalues and the global spectrum sorted decreasing",
    7, BRAVYI_RECORDS, _check_bravyi,
    lambda d: (not d.pure) and d.kind in ("tensor", "qubits") and d.dims == (2, 2),
    {},
))
_add(Family(
    "FRANZ_3QUTRIT", "3x3x3 pure",
    "marginal spectra sorted increasing; all site permutations, deduplicated",
    36, FRANZ_RECORDS, _check_franz,
    lambda d: d.pure and d.kind == "tensor" and d.dims == (3, 3, 3),
    {},
))
_add(Family(
    "BASIC", "bipartite m x n mixed",
    "partial sums of marginal spectra bounded by partial sums of the joint",
    0, (), _check_basic,
    lambda d: (not d.pure) and d.kind in ("tensor", "qubits") and len(d.dims) == 2,
    {},
))
_add(Family(
    "THREE_QUBIT_MIXED", "2x2x2 mixed",
    "site gaps sorted increasing, joint spectrum decreasing; as printed",
    10, THREE_QUBIT_RECORDS, _check_three_qubit,
    lambda d: (not d.pure) and d.kind in ("tensor", "qubits") and d.dims == (2, 2, 2),
    {},
))
_add(Family(
    "PAULI", "fermionic (r, n)",
    "occupation numbers in [0, 1], chemist trace n",
    0, (), _check_pauli,
    lambda d: d.kind == "fermion", {"r": None, "n": None},
))
_add(Family(
    "TWO_PARTICLE_PURE", "fermionic (r, 2) or (r, r-2) pure",
    "even degeneracy of occupation numbers; odd leftover 0 (particles) or 1 (holes)",
    1, (), _check_even_degeneracy,
    lambda d: d.kind == "fermion" and d.pure and (d.n == 2 or d.n == d.r - 2),
    {"r": None, "n": None},
))
_add(Family(
    "BD6", "fermionic (6, 3) pure",
    "three pair equalities and l4 <= l5 + l6, chemist trace 3",
    4, BD6_RECORDS, _check_fermi_records, _m_fermi(6, 3, True), {"r": 6, "n": 3},
))
_add(Family(
    "F7_BD", "fermionic (7, 3) pure",
    "four triple sums bounded below by 1, chemist trace 3",
    4, F7_BD_RECORDS, _check_fermi_records, _m_fermi(7, 3, True), {"r": 7, "n": 3},
))
_add(Family(
    "F7_LIST", "fermionic (7, 3) pure",
    "zero-sum test-spectrum form, coefficients 3 / -4, bound 2",
    4, F7_LIST_RECORDS, _check_fermi_records, _m_fermi(7, 3, True), {"r": 7, "n": 3},
))
_add(Family(
    "F8_31", "fermionic (8, 3) pure",
    "31 inequalities grouped by extremal edge, chemist trace 3",
    31, F8_31_RECORDS, _check_fermi_records, _m_fermi(8, 3, True), {"r": 8, "n": 3},
))
_add(Family(
    "F84_14", "fermionic (8, 4) pure",
    "14 inequalities in two edge groups, chemist trace 4",
    14, F84_14_RECORDS, _check_fermi_records, _m_fermi(8, 4, True), {"r": 8, "n": 4},
))
_add(Family(
    "F84_ABS", "fermionic (8, 4) pure",
    "absolute-value form sum_i |x_i| <= 4 over seven sign patterns",
    1, (), _check_f84_abs, _m_fermi(8, 4, True), {"r": 8, "n": 4},
))
_add(Family(
    "W2H4_MIXED", "fermionic (4, 2) mixed",
    "both spectra normalized to equal trace (canonical 1), decreasing order",
    22, W2H4_RECORDS, _check_w2h4, _m_fermi(4, 2, False), {"r": 4, "n": 2},
))
_add(Family(
    "W2H5_META", "fermionic (5, 2) mixed",
    "460 independent inequalities recorded as metadata; list not reproduced",
    460, (), _check_w2h5_meta, _m_fermi(5, 2, False), {"r": 5, "n": 2},
))
_add(Family(
    "CHSH_16", "two-qubit correlations, two settings per site",
    "sixteen sign/swap images of the base correlation inequality",
    16, CHSH_RECORDS, _check_chsh_records, lambda d: False, {},
))


def get_family(family_id: str) -> Family:
    try:
        return FAMILIES[family_id]
    except KeyError:
        raise CatalogError(f"unknown family {family_id!r}") from None


def family_ids():
    return tuple(sorted(FAMILIES))


def applicable_families(system) -> tuple:
    """All registry entries matching a system descriptor."""
    if isinstance(system, str):
        system = parse_system(system)
    out = []
    for fid in sorted(FAMILIES):
        fam = FAMILIES[fid]
        try:
            if fam.matcher(system):
                out.append(fid)
        except AttributeError:
            continue
    return tuple(out)


def check_family(family_id: str, bundle: SpectraBundle, tolerance: float = 1e-10) -> CheckReport:
    """Evaluate every inequality of a family on a spectra bundle.

    Input spectra are canonicalized per the family's declared conventions
    (re-sorted, re-normalized); equalities are checked two-sided.
    """
    fam = get_family(family_id)
    meta = dict(fam.meta or {})
    if fam.meta is not None and "r" in fam.meta and fam.meta["r"] is None:
        # Families parameterized by the system take (r, n) from the bundle.
        lam = bundle.one_body
        if lam is None:
            raise CatalogError(f"{family_id} needs a one-body spectrum")
        meta["r"] = len(lam)
        meta["n"] = int(round(float(lam.trace_tag)))
        fam = Family(
            fam.family_id, fam.system, fam.conventions, fam.declared_count,
            fam.records, fam.checker, fam.matcher, meta,
        )
    return fam.checker(fam, bundle, tolerance)


def check_chsh(correlations, tolerance: float = 1e-10) -> CheckReport:
    """Evaluate all sixteen correlation inequalities.

    ``correlations`` is (c11, c12, c21, c22) with entries in [-1, 1], where
    c_ij is the expectation of the product of the i-th A-site and j-th
    B-site measurements.
    """
    corr = tuple(float(c) for c in correlations)
    if len(corr) != 4:
        raise CatalogError("expected four correlation values")
    for c in corr:
        if abs(c) > 1 + 1e-12:
            raise CatalogError(f"correlation {c} outside [-1, 1]")
    fam = get_family("CHSH_16")
    return _eval_records("CHSH_16", fam.records, {"corr": corr}, tolerance)


@dataclass(frozen=True)
class EquivalenceReport:
    family_a: str
    family_b: str
    samples: int
    disagreements: int
    first_disagreement: tuple = None


def _sample_valid_occupation(rng, r, n, perturbed: bool):
    """Sorted trace-n vector inside the Pauli box [0, 1]^r, by rejection."""
    import numpy as np

    for _ in range(10000):
        if perturbed:
            vals = np.abs(n / r + 0.3 * rng.standard_normal(r))
            vals *= n / vals.sum()
        else:
            vals = rng.dirichlet(np.ones(r)) * n
        if vals.max() <= 1.0:
            return sorted(vals, reverse=True)
    raise CatalogError(f"could not sample a valid occupation spectrum for ({r}, {n})")


def check_equivalence(family_a: str, family_b: str, samples: int, seed: int,
                      tolerance: float = 1e-10) -> EquivalenceReport:
    """Compare two families of the same system on random sorted, correctly
    normalized valid spectra (a mix of simplex-like and perturbed points,
    all inside the Pauli box).
    """
    from .tensor import rng_from_seed

    fa, fb = get_family(family_a), get_family(family_b)
    if (fa.meta or {}).get("r") != (fb.meta or {}).get("r") or (
        (fa.meta or {}).get("n") != (fb.meta or {}).get("n")
    ):
        raise CatalogError(f"{family_a} and {family_b} apply to different systems")
    r, n = fa.meta["r"], fa.meta["n"]
    rng = rng_from_seed(seed)
    disagreements = 0
    first = None
    for trial in range(samples):
        vals = _sample_valid_occupation(rng, r, n, perturbed=trial % 2 == 1)
        lam = spectrum(vals, trace_tag=float(n))
        bundle = SpectraBundle(one_body=lam)
        ra = check_family(family_a, bundle, tolerance)
        rb = check_family(family_b, bundle, tolerance)
        if ra.satisfied != rb.satisfied:
            disagreements += 1
            if first is None:
                first = tuple(lam.as_floats())
    return EquivalenceReport(family_a, family_b, samples, disagreements, first)
