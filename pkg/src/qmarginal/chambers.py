"""Exact rational polyhedral geometry.

Cubicle hyperplane arrangements for test spectra, chamber enumeration by
incremental double description, extremal-edge extraction, convex hulls of
rational point sets, and LP-based redundancy filtering.  No floating point
enters this module.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

from .rational import (
    canon_hyperplane,
    dot,
    lp_max,
    nullspace,
    primitive,
    rank,
    solve_any,
    solve_square,
    to_fractions,
)
from .systems import SystemDescriptor, SystemError, parse_system

DIM_CAP = 7


class GeometryError(ValueError):
    """Raised for unsupported dimensions or degenerate inputs."""


@dataclass(frozen=True)
class Cone:
    """Pointed polyhedral cone carried in both representations.

    ``ineqs`` are integer normals (h.x >= 0); ``rays`` are the primitive
    extreme rays.  Both parts are kept consistent by the constructors in
    this module.
    """

    ineqs: tuple
    rays: tuple

    @property
    def dim(self):
        return len(self.rays[0]) if self.rays else len(self.ineqs[0])


def _canon_ray(vec):
    return primitive(vec)


def positive_orthant(d: int) -> Cone:
    ineqs = tuple(tuple(int(i == j) for j in range(d)) for i in range(d))
    rays = ineqs
    return Cone(ineqs, rays)


def sorted_nonneg_cone(d: int) -> Cone:
    """{0 <= x1 <= x2 <= ... <= xd}; rays have k trailing ones."""
    ineqs = [tuple(int(j == 0) for j in range(d))]
    for i in range(d - 1):
        row = [0] * d
        row[i] = -1
        row[i + 1] = 1
        ineqs.append(tuple(row))
    rays = tuple(tuple(int(j >= d - k) for j in range(d)) for k in range(1, d + 1))
    return Cone(tuple(ineqs), rays)


def _adjacent(ineqs, rays, p, q):
    """Combinatorial adjacency of extreme rays p, q of the cone."""
    tight = [h for h in ineqs if dot(h, p) == 0 and dot(h, q) == 0]
    for r in rays:
        if r == p or r == q:
            continue
        if all(dot(h, r) == 0 for h in tight):
            return False
    return True


def split_cone(cone: Cone, h):
    """Split a cone by the hyperplane h.x = 0.

    Returns (plus, minus); a side is None when the hyperplane does not cut
    the cone's interior (the cone then lies weakly on the other side).
    """
    h = tuple(Fraction(x) for x in h)
    vals = [dot(h, r) for r in cone.rays]
    pos = [r for r, v in zip(cone.rays, vals) if v > 0]
    neg = [r for r, v in zip(cone.rays, vals) if v < 0]
    zer = [r for r, v in zip(cone.rays, vals) if v == 0]
    # positive scaling only: the halfspace is directed
    hplus = primitive(h)
    if not neg:
        return Cone(cone.ineqs + (hplus,), cone.rays), None
    if not pos:
        return None, Cone(cone.ineqs + (tuple(-x for x in hplus),), cone.rays)
    combos = []
    for p in pos:
        for q in neg:
            if _adjacent(cone.ineqs, cone.rays, p, q):
                vp, vq = dot(h, p), dot(h, q)
                new = tuple(vp * b - vq * a for a, b in zip(p, q))
                combos.append(_canon_ray(new))
    combos = list(dict.fromkeys(combos))
    plus = Cone(
        cone.ineqs + (hplus,),
        tuple(dict.fromkeys([_canon_ray(r) for r in pos + zer] + combos)),
    )
    minus = Cone(
        cone.ineqs + (tuple(-x for x in hplus),),
        tuple(dict.fromkeys([_canon_ray(r) for r in neg + zer] + combos)),
    )
    return plus, minus


def rays_from_inequalities(ineqs, d: int) -> tuple:
    """Extreme rays of the pointed cone {x : ineqs . x >= 0}.

    Starts from an invertible subset of the normals and inserts the rest by
    double description steps.
    """
    rows = [to_fractions(r) for r in ineqs]
    base_idx = []
    chosen = []
    for i, row in enumerate(rows):
        if rank(chosen + [row]) > len(chosen):
            chosen.append(row)
            base_idx.append(i)
        if len(chosen) == d:
            break
    if len(chosen) < d:
        raise GeometryError("cone is not pointed (normals do not span)")
    rays = []
    for j in range(d):
        e = [Fraction(0)] * d
        e[j] = Fraction(1)
        col = solve_square([list(r) for r in chosen], e)
        rays.append(_canon_ray(col))
    cone = Cone(tuple(tuple(map(Fraction, r)) for r in chosen), tuple(rays))
    for i, row in enumerate(rows):
        if i in base_idx:
            continue
        plus, _ = split_cone(cone, row)
        if plus is None:
            # Cone is entirely on the negative side: empty interior.
            return tuple()
        cone = plus
    return cone.rays


@dataclass(frozen=True)
class Chamber:
    """Full-dimensional sign chamber of an arrangement."""

    signs: tuple   # one of '+', '-' per hyperplane
    cone: Cone

    def barycenter(self):
        d = len(self.cone.rays[0])
        total = [Fraction(0)] * d
        for r in self.cone.rays:
            for j in range(d):
                total[j] += Fraction(r[j])
        return tuple(total)


@dataclass(frozen=True)
class Arrangement:
    """Cubicle arrangement of a system's test-spectrum cone."""

    system: SystemDescriptor
    cone: Cone
    hyperplanes: tuple
    chart: object = field(compare=False)

    @property
    def dim(self):
        return self.cone.dim


def _cuts_interior(h, cone: Cone) -> bool:
    vals = [dot(to_fractions(h), r) for r in cone.rays]
    return any(v > 0 for v in vals) and any(v < 0 for v in vals)


class QubitChart:
    """Coordinates are per-site test values 0 <= a_1 <= ... <= a_n."""

    def __init__(self, n):
        self.n = n

    def to_test_spectra(self, vec):
        return tuple((Fraction(v), -Fraction(v)) for v in vec)


class TensorChart:
    """Coordinates are successive differences of the two test spectra."""

    def __init__(self, m, n):
        self.m = m
        self.n = n

    def to_test_spectra(self, vec):
        m, n = self.m, self.n
        t = [Fraction(v) for v in vec[: m - 1]]
        s = [Fraction(v) for v in vec[m - 1:]]
        return _diffs_to_spectrum(t, m), _diffs_to_spectrum(s, n)


class FermiChart:
    """Coordinates are successive differences of the single test spectrum."""

    def __init__(self, r):
        self.r = r

    def to_test_spectra(self, vec):
        return (_diffs_to_spectrum([Fraction(v) for v in vec], self.r),)


def _diffs_to_spectrum(diffs, size):
    """Nonincreasing zero-sum vector with the given successive differences."""
    tail = [Fraction(0)] * size
    for i in range(size - 2, -1, -1):
        tail[i] = tail[i + 1] + diffs[i]
    shift = sum(tail, Fraction(0)) / size
    return tuple(v - shift for v in tail)


def _qubit_hyperplanes(n, cone):
    seen = {}
    for eps in product((-1, 0, 1), repeat=n):
        if all(e == 0 for e in eps):
            continue
        h = canon_hyperplane(eps)
        if h not in seen and _cuts_interior(h, cone):
            seen[h] = True
    return tuple(sorted(seen))


def _tensor_hyperplanes(m, n, cone):
    pairs = [(i, j) for i in range(m) for j in range(n)]
    d = (m - 1) + (n - 1)
    seen = {}
    for (i, j), (k, l) in combinations(pairs, 2):
        row = [0] * d
        lo, hi = min(i, k), max(i, k)
        sgn = 1 if i < k else -1
        for p in range(lo, hi):
            row[p] += sgn
        lo, hi = min(j, l), max(j, l)
        sgn = 1 if j < l else -1
        for p in range(lo, hi):
            row[m - 1 + p] += sgn
        if all(x == 0 for x in row):
            continue
        h = canon_hyperplane(row)
        if h not in seen and _cuts_interior(h, cone):
            seen[h] = True
    return tuple(sorted(seen))


def _fermi_hyperplanes(r, n, cone):
    subsets = list(combinations(range(r), n))
    seen = {}
    for s, t in combinations(subsets, 2):
        d = [0] * r
        for i in s:
            d[i] += 1
        for i in t:
            d[i] -= 1
        if all(x == 0 for x in d):
            continue
        # Coefficient of the p-th difference is the prefix sum of d.
        row = []
        acc = 0
        for p in range(r - 1):
            acc += d[p]
            row.append(acc)
        if all(x == 0 for x in row):
            continue
        h = canon_hyperplane(row)
        if h not in seen and _cuts_interior(h, cone):
            seen[h] = True
    return tuple(sorted(seen))


def cubicle_arrangement(system) -> Arrangement:
    """Ambient test-spectrum cone and the tie hyperplanes that cut it.

    Qubit arrays use the per-site values a_i >= 0 sorted increasing; tensor
    and fermionic systems use the dominance cone of nonincreasing zero-sum
    spectra in successive-difference coordinates.
    """
    if isinstance(system, str):
        system = parse_system(system)
    if system.kind == "qubits":
        n = len(system.dims)
        cone = sorted_nonneg_cone(n)
        return Arrangement(system, cone, _qubit_hyperplanes(n, cone), QubitChart(n))
    if system.kind == "tensor":
        if len(system.dims) != 2:
            raise SystemError(
                "cubicle arrangements support two-sided tensor formats; "
                "use qubits:<n> for arrays"
            )
        m, n = system.dims
        cone = positive_orthant((m - 1) + (n - 1))
        return Arrangement(
            system, cone, _tensor_hyperplanes(m, n, cone), TensorChart(m, n)
        )
    if system.kind == "fermion":
        cone = positive_orthant(system.r - 1)
        return Arrangement(
            system,
            cone,
            _fermi_hyperplanes(system.r, system.n, cone),
            FermiChart(system.r),
        )
    raise SystemError(f"unknown system kind {system.kind!r}")


def enumerate_chambers(arrangement: Arrangement, dim_cap: int = DIM_CAP):
    """All full-dimensional sign chambers meeting the cone's interior."""
    d = arrangement.dim
    if d > dim_cap:
        raise GeometryError(
            f"chamber enumeration in dimension {d} exceeds the cap {dim_cap}"
        )
    chambers = [((), arrangement.cone)]
    for h in arrangement.hyperplanes:
        nxt = []
        for signs, cone in chambers:
            plus, minus = split_cone(cone, h)
            if plus is not None:
                nxt.append((signs + ("+",), plus))
            if minus is not None:
                nxt.append((signs + ("-",), minus))
        chambers = nxt
    out = []
    for signs, cone in chambers:
        if rank(cone.rays) == d:
            out.append(Chamber(signs, cone))
    return out


def extremal_edges(chambers) -> tuple:
    """Union of all chambers' extreme rays, deduplicated canonically."""
    seen = dict()
    for ch in chambers:
        for r in ch.cone.rays:
            seen[_canon_ray(r)] = True
    return tuple(sorted(seen))


@dataclass(frozen=True)
class HullResult:
    """Facets and affine hull of a rational point set.

    Facet inequalities are (normal, rhs) pairs meaning normal.x <= rhs;
    equalities describe the affine span.  ``dim`` is the hull dimension.
    """

    facets: tuple
    equalities: tuple
    dim: int


def convex_hull(points, dim_cap: int = DIM_CAP) -> HullResult:
    """Irredundant facet description of the convex hull of rational points.

    Works inside the affine span of the points (dual double description on
    the homogenized cone).
    """
    pts = [to_fractions(p) for p in points]
    pts = list(dict.fromkeys(pts))
    if not pts:
        raise GeometryError("convex hull of an empty point set")
    D = len(pts[0])
    p0 = pts[0]
    diffs = [tuple(a - b for a, b in zip(p, p0)) for p in pts[1:]]
    from .rational import row_space_basis

    basis, _ = row_space_basis(diffs)
    k = len(basis)
    if k > dim_cap:
        raise GeometryError(f"hull dimension {k} exceeds the cap {dim_cap}")

    equalities = []
    for nv in nullspace(diffs if diffs else [[Fraction(0)] * D], ncols=D):
        nv = canon_hyperplane(nv)
        equalities.append((nv, dot(to_fractions(nv), p0)))
    if k == 0:
        return HullResult((), tuple(sorted(equalities)), 0)

    gram = [[dot(b1, b2) for b2 in basis] for b1 in basis]
    coords = []
    for p in pts:
        diff = tuple(a - b for a, b in zip(p, p0))
        rhs = [dot(b, diff) for b in basis]
        coords.append(solve_square(gram, rhs))

    rows = [(Fraction(1),) + tuple(-z for z in zc) for zc in coords]
    rays = rays_from_inequalities(rows, k + 1)
    facets = []
    for ray in rays:
        gamma0, gamma = Fraction(ray[0]), ray[1:]
        if all(g == 0 for g in gamma):
            continue
        # Lift the facet normal back to the original coordinates.
        lift = solve_any([list(b) for b in basis], list(gamma))
        if lift is None:
            raise GeometryError("facet lift failed (inconsistent basis)")
        rhs = gamma0 + dot(to_fractions(lift), p0)
        normal, rhs = _canon_facet(lift, rhs)
        facets.append((normal, rhs))
    return HullResult(tuple(sorted(facets)), tuple(sorted(equalities)), k)


def canon_inequality(normal, rhs):
    """Jointly primitive canonical form of (normal, rhs) for normal.x <= rhs."""
    scaled = primitive(tuple(normal) + (rhs,))
    return scaled[:-1], Fraction(scaled[-1])


_canon_facet = canon_inequality


def redundancy_filter(inequalities, ambient_ineqs=(), ambient_eqs=()):
    """Drop every inequality implied by the others plus the ambient system.

    Inequalities are (normal, rhs) pairs meaning normal.x <= rhs, all exact
    rationals.  Raises GeometryError if the ambient system is infeasible.
    """
    ineqs = [(_canon_facet(n, r)) for n, r in inequalities]
    ineqs = list(dict.fromkeys(ineqs))
    amb_ub = [list(map(Fraction, n)) + [Fraction(r)] for n, r in ambient_ineqs]
    amb_eq = [list(map(Fraction, n)) + [Fraction(r)] for n, r in ambient_eqs]
    if ineqs:
        d = len(ineqs[0][0])
    elif amb_ub:
        d = len(amb_ub[0]) - 1
    else:
        return []
    feas = lp_max(
        [Fraction(0)] * d,
        [row[:-1] for row in amb_ub],
        [row[-1] for row in amb_ub],
        [row[:-1] for row in amb_eq],
        [row[-1] for row in amb_eq],
    )
    if feas.status == "infeasible":
        raise GeometryError("ambient system is infeasible")

    kept = list(ineqs)
    i = 0
    while i < len(kept):
        normal, rhs = kept[i]
        others = kept[:i] + kept[i + 1:]
        res = lp_max(
            list(normal),
            [list(n) for n, _ in others] + [row[:-1] for row in amb_ub],
            [r for _, r in others] + [row[-1] for row in amb_ub],
            [row[:-1] for row in amb_eq],
            [row[-1] for row in amb_eq],
        )
        if res.status == "optimal" and res.value <= rhs:
            kept.pop(i)
        else:
            i += 1
    return kept
