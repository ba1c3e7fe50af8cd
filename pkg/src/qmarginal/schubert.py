"""Exact Schubert calculus for marginal-inequality coefficients.

Permutations in one-line notation, integer multivariate polynomials,
divided differences, Schubert polynomials, the structure coefficients
attached to a pair of test spectra (two-sided and fermionic), and
inequality generation from extremal edges.

All arithmetic is exact; no floating point enters coefficient computation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .catalog import InequalityRecord
from .rational import to_fractions


class SchubertError(ValueError):
    """Raised for malformed permutations or polynomial-calculus misuse."""


class TieError(SchubertError):
    """A test spectrum lies on a cubicle wall: two combined sums tie."""


# ---------------------------------------------------------------------------
# Permutations (one-line notation, values 1..n)

def check_perm(w) -> tuple:
    word = tuple(int(x) for x in w)
    if sorted(word) != list(range(1, len(word) + 1)):
        raise SchubertError(f"not a permutation of 1..{len(word)}: {w}")
    return word


def identity_perm(n: int) -> tuple:
    return tuple(range(1, n + 1))


def perm_mul(u, v) -> tuple:
    """(u v)(i) = u(v(i))."""
    return tuple(u[v[i] - 1] for i in range(len(v)))


def perm_inverse(w) -> tuple:
    inv = [0] * len(w)
    for i, x in enumerate(w):
        inv[x - 1] = i + 1
    return tuple(inv)


def length(w) -> int:
    """Number of inversions."""
    w = check_perm(w)
    return sum(1 for i in range(len(w)) for j in range(i + 1, len(w)) if w[i] > w[j])


def minimal_word(w) -> tuple:
    """A reduced word (i_1, ..., i_l) with w = s_{i_1} ... s_{i_l}.

    Uses the lexicographically first descent at each step; recomposing the
    word reproduces w.
    """
    w = list(check_perm(w))
    collected = []
    while True:
        i = next((k for k in range(len(w) - 1) if w[k] > w[k + 1]), None)
        if i is None:
            break
        w[i], w[i + 1] = w[i + 1], w[i]
        collected.append(i + 1)
    return tuple(reversed(collected))


def compose_word(word, n: int) -> tuple:
    """Product s_{i_1} ... s_{i_l} as a permutation of 1..n."""
    p = identity_perm(n)
    for i in word:
        s = list(identity_perm(n))
        s[i - 1], s[i] = s[i], s[i - 1]
        p = perm_mul(p, tuple(s))
    return p


# ---------------------------------------------------------------------------
# Exact integer polynomials

class Poly:
    """Sparse multivariate polynomial with integer coefficients.

    Monomial keys are exponent tuples with trailing zeros stripped, so the
    variable count is open-ended.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for exp, coeff in terms.items():
                coeff = int(coeff)
                if coeff:
                    self.terms[_trim(exp)] = coeff

    @staticmethod
    def constant(c: int) -> "Poly":
        return Poly({(): int(c)} if c else {})

    @staticmethod
    def variable(i: int) -> "Poly":
        """x_i for 1-based i."""
        exp = [0] * i
        exp[i - 1] = 1
        return Poly({tuple(exp): 1})

    @staticmethod
    def monomial(exponents, coeff: int = 1) -> "Poly":
        return Poly({tuple(exponents): coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self):
        """The integer value if the polynomial is constant, else None."""
        if not self.terms:
            return 0
        if len(self.terms) == 1 and () in self.terms:
            return self.terms[()]
        return None

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        out = dict(self.terms)
        for exp, c in other.terms.items():
            val = out.get(exp, 0) + c
            if val:
                out[exp] = val
            else:
                out.pop(exp, None)
        res = Poly()
        res.terms = out
        return res

    def __neg__(self):
        res = Poly()
        res.terms = {e: -c for e, c in self.terms.items()}
        return res

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return Poly()
            res = Poly()
            res.terms = {e: c * other for e, c in self.terms.items()}
            return res
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = _mul_exp(e1, e2)
                val = out.get(exp, 0) + c1 * c2
                if val:
                    out[exp] = val
                else:
                    out.pop(exp, None)
        res = Poly()
        res.terms = out
        return res

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = Poly.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for exp in sorted(self.terms, key=lambda e: (-sum(e), e)):
            c = self.terms[exp]
            mono = "*".join(
                f"x{i+1}" + (f"^{p}" if p > 1 else "")
                for i, p in enumerate(exp)
                if p
            )
            parts.append(f"{c}" if not mono else f"{c}*{mono}" if c != 1 else mono)
        return " + ".join(parts)


def _trim(exp):
    exp = tuple(int(e) for e in exp)
    while exp and exp[-1] == 0:
        exp = exp[:-1]
    return exp


def _mul_exp(e1, e2):
    if len(e1) < len(e2):
        e1, e2 = e2, e1
    return _trim(tuple(a + (e2[i] if i < len(e2) else 0) for i, a in enumerate(e1)))


def divided_difference(i: int, p: Poly) -> Poly:
    """The finite-difference operator (f - s_i f) / (x_i - x_{i+1}).

    The quotient is always an exact polynomial; 1-based variable index.
    """
    if i < 1:
        raise SchubertError(f"divided difference index must be >= 1, got {i}")
    out = Poly()
    for exp, coeff in p.terms.items():
        a = exp[i - 1] if i - 1 < len(exp) else 0
        b = exp[i] if i < len(exp) else 0
        if a == b:
            continue
        width = max(len(exp), i + 1)
        base = list(exp) + [0] * (width - len(exp))
        sign = 1 if a > b else -1
        lo, hi = min(a, b), max(a, b)
        for j in range(hi - lo):
            mono = base[:]
            mono[i - 1] = lo + j
            mono[i] = hi - 1 - j
            out = out + Poly.monomial(mono, sign * coeff)
    return out


def apply_chain(word, p: Poly, offset: int = 0) -> Poly:
    """Apply the divided-difference chain of a reduced word.

    The operator for w = s_{i_1} ... s_{i_l} applies the last letter first.
    ``offset`` shifts variable indices (for a second variable block).
    """
    for i in reversed(word):
        p = divided_difference(offset + i, p)
        if p.is_zero():
            break
    return p


@lru_cache(maxsize=None)
def schubert_poly(w: tuple) -> Poly:
    """Schubert polynomial of w via divided differences from the staircase
    monomial x_1^{n-1} x_2^{n-2} ... x_{n-1}.

    Homogeneous of degree l(w), nonnegative integer coefficients, and
    independent of the reduced word used for the chain.
    """
    w = check_perm(w)
    n = len(w)
    w0 = tuple(range(n, 0, -1))
    chain = perm_mul(perm_inverse(w), w0)
    staircase = Poly.monomial(tuple(range(n - 1, 0, -1)))
    return apply_chain(minimal_word(chain), staircase)


# ---------------------------------------------------------------------------
# Test spectra and combined-sum orders

def check_test_spectrum(a) -> tuple:
    vals = to_fractions(a)
    if any(x < y for x, y in zip(vals, vals[1:])):
        raise SchubertError(f"test spectrum must be nonincreasing: {a}")
    if sum(vals, Fraction(0)) != 0:
        raise SchubertError(f"test spectrum must have zero sum: {a}")
    return vals


def sum_order(a, b) -> tuple:
    """Pairs (i, j), 1-based, listing a_i + b_j in decreasing order.

    Exact rational comparison.  A tie between two distinct pairs means the
    point lies on a cubicle wall and raises TieError; callers should use an
    interior point of a chamber.
    """
    a = check_test_spectrum(a)
    b = check_test_spectrum(b)
    sums = [(a[i] + b[j], (i + 1, j + 1)) for i in range(len(a)) for j in range(len(b))]
    sums.sort(key=lambda t: t[0], reverse=True)
    for (v1, p1), (v2, p2) in zip(sums, sums[1:]):
        if v1 == v2:
            raise TieError(f"combined sums tie at {v1} for pairs {p1}, {p2}")
    return tuple(p for _, p in sums)


def fermi_sum_order(a, n: int) -> tuple:
    """n-subsets of {1..r} listed by decreasing sum of a-entries, exact."""
    a = check_test_spectrum(a)
    r = len(a)
    sums = [
        (sum((a[i - 1] for i in s), Fraction(0)), s)
        for s in combinations(range(1, r + 1), n)
    ]
    sums.sort(key=lambda t: t[0], reverse=True)
    for (v1, s1), (v2, s2) in zip(sums, sums[1:]):
        if v1 == v2:
            raise TieError(f"subset sums tie at {v1} for {s1}, {s2}")
    return tuple(s for _, s in sums)


# ---------------------------------------------------------------------------
# Structure coefficients

def coeff_two(u, v, w, order) -> int:
    """Coefficient activating the two-sided inequality for (u, v, w).

    Substitutes z_k = x^A_i + x^B_j per the combined-sum order, then applies
    the divided-difference chains for u in the A block and v in the B block.
    Zero when l(w) != l(u) + l(v); the surviving polynomial must be a
    constant, and that integer is returned.
    """
    u, v, w = check_perm(u), check_perm(v), check_perm(w)
    m, n = len(u), len(v)
    if len(w) != m * n or len(order) != m * n:
        raise SchubertError(
            f"need w and order of size {m * n}, got {len(w)}, {len(order)}"
        )
    if length(w) != length(u) + length(v):
        return 0
    sub = _substitute_pairs(schubert_poly(w), order, m)
    res = apply_chain(minimal_word(u), sub, offset=0)
    res = apply_chain(minimal_word(v), res, offset=m)
    value = res.constant_term()
    if value is None:
        raise SchubertError(
            "divided-difference chains left a non-constant residue; "
            "this indicates an implementation bug"
        )
    return value


def _substitute_pairs(poly: Poly, order, m: int) -> Poly:
    lins = []
    for (i, j) in order:
        lins.append(Poly.variable(i) + Poly.variable(m + j))
    return _substitute(poly, lins)


def coeff_fermi(v, w, order) -> int:
    """Fermionic coefficient: substitute z_k = sum of x over the k-th
    subset, then apply the chain for v.
    """
    v, w = check_perm(v), check_perm(w)
    if len(w) != len(order):
        raise SchubertError(f"need order of size {len(w)}, got {len(order)}")
    if length(w) != length(v):
        return 0
    lins = []
    for subset in order:
        acc = Poly()
        for i in subset:
            acc = acc + Poly.variable(i)
        lins.append(acc)
    sub = _substitute(schubert_poly(w), lins)
    res = apply_chain(minimal_word(v), sub)
    value = res.constant_term()
    if value is None:
        raise SchubertError(
            "divided-difference chain left a non-constant residue; "
            "this indicates an implementation bug"
        )
    return value


def _substitute(poly: Poly, images) -> Poly:
    out = Poly()
    cache = {}
    for exp, coeff in poly.terms.items():
        term = Poly.constant(coeff)
        for k, e in enumerate(exp):
            if e:
                key = (k, e)
                if key not in cache:
                    cache[key] = images[k] ** e
                term = term * cache[key]
        out = out + term
    return out


# ---------------------------------------------------------------------------
# Inequality generation

def _sorted_pair_sums(a, b):
    sums = [a[i] + b[j] for i in range(len(a)) for j in range(len(b))]
    return tuple(sorted(sums, reverse=True))


def generate_inequality(a, b, u, v, w) -> InequalityRecord:
    """Two-sided marginal inequality for test spectra (a, b) and the
    permutation triple (u, v, w); rejected when the coefficient vanishes.
    """
    a, b = check_test_spectrum(a), check_test_spectrum(b)
    u, v, w = check_perm(u), check_perm(v), check_perm(w)
    m, n = len(a), len(b)
    if (len(u), len(v), len(w)) != (m, n, m * n):
        raise SchubertError("permutation sizes do not match the test spectra")
    trivial = (
        u == identity_perm(m) and v == identity_perm(n) and w == identity_perm(m * n)
    )
    if trivial:
        coeff = 1
    else:
        coeff = coeff_two(u, v, w, sum_order(a, b))
        if coeff == 0:
            raise SchubertError(f"vanishing coefficient for {(u, v, w)}")
    return _two_sided_record(a, b, u, v, w, coeff)


def enumerate_inequalities(a, b, max_length: int = 6, coeff_filter: str = "unit"):
    """All inequality records of one cubicle, by permutation-triple scan.

    Triples (u, v, w) with l(w) = l(u) + l(v) <= max_length are kept when
    the structure coefficient passes the filter: "unit" keeps c == 1 (the
    array theorem), "odd" keeps odd c, "nonzero" keeps everything active.
    The cap controls the combinatorial blow-up at desk scale.
    """
    if coeff_filter not in ("unit", "odd", "nonzero"):
        raise SchubertError(f"unknown coefficient filter {coeff_filter!r}")
    a, b = check_test_spectrum(a), check_test_spectrum(b)
    order = sum_order(a, b)
    m, n = len(a), len(b)
    from itertools import permutations as _iperm

    us = {}
    for u in _iperm(range(1, m + 1)):
        us.setdefault(length(u), []).append(u)
    vs = {}
    for v in _iperm(range(1, n + 1)):
        vs.setdefault(length(v), []).append(v)
    records = []
    for w in _iperm(range(1, m * n + 1)):
        lw = length(w)
        if lw > max_length:
            continue
        for lu, ulist in us.items():
            for v in vs.get(lw - lu, ()):
                for u in ulist:
                    c = coeff_two(u, v, w, order)
                    if c == 0:
                        continue
                    if coeff_filter == "unit" and c != 1:
                        continue
                    if coeff_filter == "odd" and c % 2 == 0:
                        continue
                    records.append(_two_sided_record(a, b, u, v, w, c))
    return records


def _two_sided_record(a, b, u, v, w, coeff) -> InequalityRecord:
    m, n = len(a), len(b)
    coef_a = [Fraction(0)] * m
    for i in range(m):
        coef_a[u[i] - 1] = a[i]
    coef_b = [Fraction(0)] * n
    for j in range(n):
        coef_b[v[j] - 1] = b[j]
    sums = _sorted_pair_sums(a, b)
    coef_ab = [Fraction(0)] * (m * n)
    for k in range(m * n):
        coef_ab[w[k] - 1] -= sums[k]
    return InequalityRecord(
        terms=(("A", tuple(coef_a)), ("B", tuple(coef_b)), ("AB", tuple(coef_ab))),
        relation="<=",
        bound=Fraction(0),
        label=f"edge a={_fmt(a)} b={_fmt(b)} u={u} v={v} w={w} c={coeff}",
        meta={"a": a, "b": b, "u": u, "v": v, "w": w, "coeff": coeff},
    )


def _fmt(vals):
    return "(" + ",".join(str(v) for v in vals) + ")"


def generate_fermi_inequality(a, v, w) -> InequalityRecord:
    """Fermionic mixed-state inequality for the test spectrum a and the
    permutation pair (v, w); lambda is the one-particle spectrum and nu the
    state spectrum.
    """
    a = check_test_spectrum(a)
    v, w = check_perm(v), check_perm(w)
    r = len(a)
    n = _infer_subset_size(r, len(w))
    trivial = v == identity_perm(r) and w == identity_perm(len(w))
    if trivial:
        coeff = 1
    else:
        coeff = coeff_fermi(v, w, fermi_sum_order(a, n))
        if coeff == 0:
            raise SchubertError(f"vanishing coefficient for {(v, w)}")
    coef_lam = [Fraction(0)] * r
    for i in range(r):
        coef_lam[v[i] - 1] = a[i]
    sums = sorted(
        (sum((a[i - 1] for i in s), Fraction(0)) for s in combinations(range(1, r + 1), n)),
        reverse=True,
    )
    coef_nu = [Fraction(0)] * len(w)
    for k in range(len(w)):
        coef_nu[w[k] - 1] -= sums[k]
    return InequalityRecord(
        terms=(("lam", tuple(coef_lam)), ("nu", tuple(coef_nu))),
        relation="<=",
        bound=Fraction(0),
        label=f"fermi edge a={_fmt(a)} v={v} w={w} c={coeff}",
        meta={"a": a, "v": v, "w": w, "coeff": coeff},
    )


def _infer_subset_size(r: int, dim: int) -> int:
    from math import comb

    for n in range(1, r):
        if comb(r, n) == dim:
            return n
    raise SchubertError(f"no subset size n gives C({r}, n) = {dim}")


# ---------------------------------------------------------------------------
# Qubit arrays

@dataclass(frozen=True)
class QubitArrayGroup:
    """One extremal edge's inequality group for an array of qubits."""

    edge: tuple
    records: tuple


def _sign_sums(a):
    from itertools import product

    sums = []
    for eps in product((1, -1), repeat=len(a)):
        sums.append(sum((e * x for e, x in zip(eps, a)), Fraction(0)))
    return tuple(sorted(sums, reverse=True))


def _qubit_record(delta_coeffs, rhs_coeffs, edge) -> InequalityRecord:
    return InequalityRecord(
        terms=(
            ("delta", tuple(delta_coeffs)),
            ("joint", tuple(-c for c in rhs_coeffs)),
        ),
        relation="<=",
        bound=Fraction(0),
        label=f"qubit edge {_fmt(edge)}",
        meta={"edge": tuple(edge)},
    )


def generate_qubit_array(a, with_modifications: bool = True, irredundant: bool = True) -> QubitArrayGroup:
    """Inequality group of one qubit-array extremal edge.

    The basic record bounds sum_i a_i (site gap i) by the sign-sum spectrum
    combination; modified records flip one summand's sign and transpose one
    odd-position pair on the right.  Trivial transpositions are skipped,
    exact duplicates removed, and (by default) records implied by the rest
    of the group under the gap/spectrum ordering ambience are dropped.

    Site values must be nonnegative and are expected sorted increasing to
    match gaps arranged in increasing order.
    """
    a = tuple(Fraction(x) for x in a)
    if any(x < 0 for x in a):
        raise SchubertError(f"per-site test values must be nonnegative: {a}")
    n = len(a)
    rhs = _sign_sums(a)
    records = [_qubit_record(a, rhs, a)]
    if with_modifications:
        for site in range(n):
            if a[site] == 0:
                continue
            flipped = list(a)
            flipped[site] = -flipped[site]
            for k in range(1, 2 ** n, 2):
                if rhs[k - 1] == rhs[k]:
                    continue
                swapped = list(rhs)
                swapped[k - 1], swapped[k] = swapped[k], swapped[k - 1]
                records.append(_qubit_record(flipped, swapped, a))
    records = list(dict.fromkeys(records))
    if irredundant and len(records) > 1:
        records = _filter_qubit_group(records, n)
    return QubitArrayGroup(a, tuple(records))


def _filter_qubit_group(records, n):
    """LP redundancy filter over independent (gaps, spectrum) variables."""
    from .chambers import canon_inequality, redundancy_filter

    size = 2 ** n
    d = n + size

    def flat(rec):
        terms = dict(rec.terms)
        return canon_inequality(
            tuple(terms["delta"]) + tuple(terms["joint"]), Fraction(rec.bound)
        )

    ambient_ub = []
    ambient_eq = []
    row = [Fraction(0)] * d
    row[0] = Fraction(-1)
    ambient_ub.append((tuple(row), Fraction(0)))          # delta_1 >= 0
    for i in range(n - 1):
        row = [Fraction(0)] * d
        row[i] = Fraction(1)
        row[i + 1] = Fraction(-1)
        ambient_ub.append((tuple(row), Fraction(0)))      # delta_i <= delta_{i+1}
    for k in range(size - 1):
        row = [Fraction(0)] * d
        row[n + k] = Fraction(-1)
        row[n + k + 1] = Fraction(1)
        ambient_ub.append((tuple(row), Fraction(0)))      # lambda nonincreasing
    row = [Fraction(0)] * d
    row[n + size - 1] = Fraction(-1)
    ambient_ub.append((tuple(row), Fraction(0)))          # lambda_last >= 0
    row = [Fraction(0)] * n + [Fraction(1)] * size
    ambient_eq.append((tuple(row), Fraction(1)))          # unit trace

    flats = [flat(r) for r in records]
    kept = redundancy_filter(flats, ambient_ub, ambient_eq)
    kept_set = set(kept)
    return [r for r in records if flat(r) in kept_set]
