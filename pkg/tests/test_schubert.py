"""Schubert engine: divided differences, polynomials, coefficients,
inequality generation.

The expansion oracle reconstructs a substituted polynomial in the tensored
Schubert basis (indexed by Lehmer codes supported on each variable block)
and cross-checks every coefficient the engine reports.
"""

import random
from fractions import Fraction as F
from itertools import permutations as iperm

import pytest

from qmarginal.catalog import THREE_QUBIT_RECORDS
from qmarginal.schubert import (
    Poly,
    SchubertError,
    TieError,
    apply_chain,
    coeff_fermi,
    coeff_two,
    compose_word,
    divided_difference,
    enumerate_inequalities,
    fermi_sum_order,
    generate_fermi_inequality,
    generate_inequality,
    generate_qubit_array,
    identity_perm,
    length,
    minimal_word,
    perm_inverse,
    perm_mul,
    schubert_poly,
    sum_order,
)


# ---------------------------------------------------------------------------
# Permutations

def test_length_and_word_basics():
    assert length((1, 2, 3)) == 0
    assert minimal_word((1, 2, 3)) == ()
    assert length((4, 3, 2, 1)) == 6


def test_word_recomposition_random():
    rng = random.Random(0)
    for _ in range(50):
        n = rng.randint(2, 7)
        w = tuple(rng.sample(range(1, n + 1), n))
        word = minimal_word(w)
        assert len(word) == length(w)
        assert compose_word(word, n) == w


def test_perm_algebra():
    u, v = (2, 3, 1), (3, 1, 2)
    assert perm_mul(u, perm_inverse(u)) == (1, 2, 3)
    assert perm_mul(u, v) == tuple(u[v[i] - 1] for i in range(3))


# ---------------------------------------------------------------------------
# Divided differences

def _random_poly(rng, nvars=5, max_deg=6, terms=6):
    p = Poly()
    for _ in range(terms):
        exp = [0] * nvars
        budget = rng.randint(0, max_deg)
        for _ in range(budget):
            exp[rng.randrange(nvars)] += 1
        p = p + Poly.monomial(exp, rng.randint(-9, 9))
    return p


def test_dd_trivial_cases():
    x1, x2 = Poly.variable(1), Poly.variable(2)
    assert divided_difference(1, x1) == Poly.constant(1)
    assert divided_difference(1, x1 * x2).is_zero()
    assert divided_difference(1, x1 * x1) == x1 + x2


def test_dd_nilpotence_and_braid_on_random_polys():
    rng = random.Random(42)
    for _ in range(100):
        p = _random_poly(rng)
        i = rng.randint(1, 4)
        assert divided_difference(i, divided_difference(i, p)).is_zero()
        lhs = divided_difference(i, divided_difference(i + 1, divided_difference(i, p)))
        rhs = divided_difference(i + 1, divided_difference(i, divided_difference(i + 1, p)))
        assert lhs == rhs


def test_dd_commutes_at_distance():
    rng = random.Random(7)
    for _ in range(30):
        p = _random_poly(rng)
        a = divided_difference(1, divided_difference(3, p))
        b = divided_difference(3, divided_difference(1, p))
        assert a == b


# ---------------------------------------------------------------------------
# Schubert polynomials

def test_schubert_small_table():
    assert schubert_poly((1, 2, 3)) == Poly.constant(1)
    assert schubert_poly((2, 1, 3)) == Poly.variable(1)
    assert schubert_poly((1, 3, 2)) == Poly.variable(1) + Poly.variable(2)
    assert schubert_poly((2, 3, 1)) == Poly.variable(1) * Poly.variable(2)
    assert schubert_poly((3, 1, 2)) == Poly.variable(1) * Poly.variable(1)
    assert schubert_poly((3, 2, 1)) == Poly.monomial((2, 1))


def test_schubert_identity_and_top():
    for n in (2, 3, 4, 5):
        assert schubert_poly(identity_perm(n)) == Poly.constant(1)
        top = tuple(range(n, 0, -1))
        assert schubert_poly(top) == Poly.monomial(tuple(range(n - 1, 0, -1)))


def _all_reduced_words(w):
    if length(w) == 0:
        yield ()
        return
    n = len(w)
    for i in range(1, n):
        if w[i - 1] > w[i]:
            prev = list(w)
            prev[i - 1], prev[i] = prev[i], prev[i - 1]
            for word in _all_reduced_words(tuple(prev)):
                yield word + (i,)


def test_schubert_reduced_word_independence_all_s4():
    for w in iperm((1, 2, 3, 4)):
        w0 = (4, 3, 2, 1)
        chain = perm_mul(perm_inverse(w), w0)
        words = list(_all_reduced_words(chain))
        staircase = Poly.monomial((3, 2, 1))
        results = {apply_chain(word, staircase) for word in words[:6]}
        assert len(results) == 1
        assert results.pop() == schubert_poly(w)


def test_schubert_degree_and_positivity():
    for w in iperm((1, 2, 3, 4)):
        p = schubert_poly(w)
        assert p.degree() == length(w)
        assert all(c > 0 for c in p.terms.values())


# ---------------------------------------------------------------------------
# Orders

def test_sum_order_example():
    order = sum_order((1, -1), (3, 2, -5))
    assert order == ((1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (2, 3))


def test_sum_order_tie_errors():
    with pytest.raises(TieError):
        sum_order((1, -1), (2, 0, -2))
    with pytest.raises(TieError):
        sum_order((1, -1), (1, -1))


def test_sum_order_scale_invariance():
    base = sum_order((1, -1), (3, 2, -5))
    assert sum_order((F(1, 3), F(-1, 3)), (1, F(2, 3), F(-5, 3))) == base
    assert sum_order((7, -7), (21, 14, -35)) == base


def test_sum_order_validates_test_spectra():
    with pytest.raises(SchubertError):
        sum_order((1, 1), (1, -1))       # nonzero sum
    with pytest.raises(SchubertError):
        sum_order((-1, 1), (1, -1))      # increasing


def test_fermi_sum_order():
    order = fermi_sum_order((5, 1, -2, -4), 2)
    assert order == ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))
    with pytest.raises(TieError):
        fermi_sum_order((3, 1, -1, -3), 2)


# ---------------------------------------------------------------------------
# Coefficients

def _order_for_chamber(arr, chamber):
    return sum_order(*arr.chart.to_test_spectra(chamber.barycenter()))


def test_identity_coefficient_is_one_over_all_small_chambers():
    from qmarginal.chambers import cubicle_arrangement, enumerate_chambers

    for fmt, (m, n) in (("2x2", (2, 2)), ("2x3", (2, 3))):
        arr = cubicle_arrangement(fmt)
        chambers = enumerate_chambers(arr)
        assert chambers
        for chamber in chambers:
            order = _order_for_chamber(arr, chamber)
            value = coeff_two(
                identity_perm(m), identity_perm(n), identity_perm(m * n), order
            )
            assert value == 1


def test_degree_mismatch_is_zero():
    order = sum_order((1, -1), (2, -2))
    assert coeff_two((2, 1), (2, 1), (2, 1, 3, 4), order) == 0
    assert coeff_fermi((2, 1, 3, 4), identity_perm(6),
                       fermi_sum_order((5, 1, -2, -4), 2)) == 0


def _perm_from_code(code, size):
    avail = list(range(1, size + 1))
    out = []
    padded = list(code) + [0] * (size - len(code))
    for c in padded:
        out.append(avail.pop(c))
    return tuple(out)


def _codes(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _codes(total - first, parts - 1):
            yield (first,) + rest


def _shift_poly(p, offset):
    out = Poly()
    for exp, c in p.terms.items():
        out = out + Poly.monomial((0,) * offset + tuple(exp), c)
    return out


def _expand_in_schubert_pairs(w, order, m, n):
    """All coefficients of the substituted S_w over S_u(x_A) * S_v(x_B).

    Works in a wide variable layout (the B block starts at m + deg) so the
    divided-difference chains of codes with a descent at the block boundary
    stay inside their own block; verifies exact reconstruction.
    """
    from qmarginal.schubert import _substitute

    deg = length(w)
    wide = m + deg
    lins = [Poly.variable(i) + Poly.variable(wide + j) for (i, j) in order]
    f = _substitute(schubert_poly(w), lins)
    coeffs = {}
    rebuilt = Poly()
    for da in range(deg + 1):
        db = deg - da
        for code_a in _codes(da, m):
            u = _perm_from_code(code_a, m + da)
            for code_b in _codes(db, n):
                v = _perm_from_code(code_b, n + db)
                res = apply_chain(minimal_word(u), f, offset=0)
                res = apply_chain(minimal_word(v), res, offset=wide)
                c = res.constant_term()
                assert c is not None, "chain left non-constant residue"
                if c:
                    coeffs[(u, v)] = c
                    term = schubert_poly(u) * _shift_poly(schubert_poly(v), wide)
                    rebuilt = rebuilt + term * c
    assert rebuilt == f, "Schubert-pair expansion failed to reconstruct"
    return coeffs


def test_coeff_two_agrees_with_expansion_oracle():
    """At least 10 non-identity triples in the 2x2 system, both chambers."""
    from qmarginal.chambers import cubicle_arrangement, enumerate_chambers

    arr = cubicle_arrangement("2x2")
    chambers = enumerate_chambers(arr)
    s2 = [(1, 2), (2, 1)]
    s4_all = list(iperm((1, 2, 3, 4)))
    checked = 0
    for chamber in chambers:
        order = _order_for_chamber(arr, chamber)
        for u in s2:
            for v in s2:
                lw = length(u) + length(v)
                if lw == 0:
                    continue
                for w in s4_all:
                    if length(w) != lw:
                        continue
                    oracle = _expand_in_schubert_pairs(w, order, 2, 2)
                    pad_u = u + tuple(range(3, 3 + lw))
                    pad_v = v + tuple(range(3, 3 + lw))
                    expected = 0
                    for (ou, ov), val in oracle.items():
                        if ou[:2] == u and _is_padded_identity(ou, 2) and \
                           ov[:2] == v and _is_padded_identity(ov, 2):
                            expected = val
                    got = coeff_two(u, v, w, order)
                    assert got == expected, (u, v, w, order)
                    checked += 1
    assert checked >= 10


def _is_padded_identity(perm, prefix):
    return perm[prefix:] == tuple(range(prefix + 1, len(perm) + 1))


def test_coeff_fermi_agrees_with_expansion_oracle():
    from qmarginal.schubert import _substitute

    a = (5, 1, -2, -4)
    order = fermi_sum_order(a, 2)
    s6_len1 = [w for w in iperm((1, 2, 3, 4, 5, 6)) if length(w) == 1]
    for w in s6_len1:
        lins = []
        for subset in order:
            acc = Poly()
            for i in subset:
                acc = acc + Poly.variable(i)
            lins.append(acc)
        f = _substitute(schubert_poly(w), lins)
        # oracle: single-block expansion over codes of length 4
        deg = f.degree()
        rebuilt = Poly()
        values = {}
        for code in _codes(deg, 4):
            v = _perm_from_code(code, 4 + deg)
            c = apply_chain(minimal_word(v), f).constant_term()
            assert c is not None
            if c:
                values[v] = c
                rebuilt = rebuilt + schubert_poly(v) * c
        assert rebuilt == f
        padded = {
            k[:4]: val for k, val in values.items()
            if k[4:] == tuple(range(5, len(k) + 1))
        }
        for v4 in iperm((1, 2, 3, 4)):
            if length(v4) != 1:
                continue
            assert coeff_fermi(v4, w, order) == padded.get(v4, 0)


def test_coeff_fermi_identity():
    a = (5, 1, -2, -4)
    order = fermi_sum_order(a, 2)
    assert coeff_fermi(identity_perm(4), identity_perm(6), order) == 1


# ---------------------------------------------------------------------------
# Inequality generation

def test_generate_basic_inequality_identity_triple():
    rec = generate_inequality((1, -1), (1, 0, -1), (1, 2), (1, 2, 3),
                              identity_perm(6))
    terms = dict(rec.terms)
    assert terms["A"] == (1, -1)
    assert terms["B"] == (1, 0, -1)
    # pair sums (2, 1, 0, 0, -1, -2), negated on the right-hand side
    assert terms["AB"] == (-2, -1, 0, 0, 1, 2)
    assert rec.meta["coeff"] == 1


def test_generate_rejects_vanishing_coefficient():
    order_spectra = ((1, -1), (2, -2))
    with pytest.raises(SchubertError):
        generate_inequality((1, -1), (2, -2), (2, 1), (1, 2), (1, 3, 2, 4))


def test_generated_inequalities_hold_on_sampled_2x2_states():
    """Every nonzero-coefficient record from the 2x2 cubicles holds on
    10^4 sampled mixed two-qubit states (slack >= -1e-10)."""
    from qmarginal.chambers import cubicle_arrangement, enumerate_chambers
    from qmarginal.schubert import enumerate_inequalities
    from qmarginal.tensor import partial_trace, random_density, rng_from_seed, spectrum_of

    arr = cubicle_arrangement("2x2")
    records = []
    for chamber in enumerate_chambers(arr):
        a, b = arr.chart.to_test_spectra(chamber.barycenter())
        records.extend(enumerate_inequalities(a, b, coeff_filter="nonzero"))
    assert len(records) >= 6
    rng = rng_from_seed(2718)
    worst = 0.0
    for trial in range(10000):
        rho = random_density((2, 2), rng)
        values = {
            "A": spectrum_of(partial_trace(rho, [0])).as_floats(),
            "B": spectrum_of(partial_trace(rho, [1])).as_floats(),
            "AB": spectrum_of(rho).as_floats(),
        }
        worst = min(worst, min(rec.slack(values) for rec in records))
    assert worst >= -1e-10


def test_enumerate_inequalities_filters():
    """Both printed coefficient conditions are exposed: the unit filter is
    a subset of the odd filter, which is a subset of all active records."""
    arr_a = (F(1), F(-1))
    arr_b = (F(2), F(-2))
    unit = enumerate_inequalities(arr_a, arr_b, coeff_filter="unit")
    odd = enumerate_inequalities(arr_a, arr_b, coeff_filter="odd")
    every = enumerate_inequalities(arr_a, arr_b, coeff_filter="nonzero")
    assert set(unit) <= set(odd) <= set(every)
    assert all(rec.meta["coeff"] == 1 for rec in unit)
    assert all(rec.meta["coeff"] % 2 == 1 for rec in odd)
    with pytest.raises(SchubertError):
        enumerate_inequalities(arr_a, arr_b, coeff_filter="bogus")


def test_basic_partial_sums_arise_from_step_test_spectra():
    """The identity-triple record for a step test spectrum against b = 0 is
    exactly the partial-sum bound: its slack equals the independently coded
    partial-sum slack on sampled mixed states."""
    from qmarginal.tensor import partial_trace, random_density, rng_from_seed, spectrum_of

    rec = generate_inequality(
        (F(1, 2), F(-1, 2)), (0, 0), (1, 2), (1, 2), identity_perm(4)
    )
    rng = rng_from_seed(808)
    for trial in range(100):
        rho = random_density((2, 2), rng)
        la = spectrum_of(partial_trace(rho, [0])).as_floats()
        lab = spectrum_of(rho).as_floats()
        got = rec.slack({
            "A": la,
            "B": spectrum_of(partial_trace(rho, [1])).as_floats(),
            "AB": lab,
        })
        partial_sum_slack = (lab[0] + lab[1]) - la[0]
        assert abs(got - partial_sum_slack) < 1e-12


def test_generated_fermi_identity_records_hold_on_mixed_states():
    """Identity-pair fermionic records hold on sampled fixed-spectrum mixed
    states of two particles in four orbitals."""
    import numpy as np

    from qmarginal.fermion import fermion_basis, one_rdm_mixed
    from qmarginal.tensor import haar_unitary, rng_from_seed, spectrum_of

    recs = [
        generate_fermi_inequality((5, 1, -2, -4), identity_perm(4), identity_perm(6)),
        generate_fermi_inequality((1, 1, -1, -1), identity_perm(4), identity_perm(6)),
    ]
    basis = fermion_basis(4, 2)
    rng = rng_from_seed(909)
    for trial in range(200):
        nu = np.sort(rng.dirichlet(np.ones(basis.dim)))[::-1]
        u = haar_unitary(basis.dim, rng)
        rho = (u * nu) @ u.conj().T
        lam = spectrum_of(one_rdm_mixed(rho, basis)).as_floats()
        values = {"lam": lam, "nu": tuple(nu)}
        for rec in recs:
            assert rec.slack(values) >= -1e-10


def test_generate_fermi_identity():
    rec = generate_fermi_inequality((5, 1, -2, -4), identity_perm(4),
                                    identity_perm(6))
    terms = dict(rec.terms)
    assert terms["lam"] == (5, 1, -2, -4)
    assert terms["nu"][0] == -6  # largest pair sum 5+1


# ---------------------------------------------------------------------------
# Qubit arrays

def test_qubit_array_groups_match_printed_three_qubit_list():
    printed = {
        (dict(r.terms)["delta"], dict(r.terms)["joint"])
        for r in THREE_QUBIT_RECORDS
    }
    generated = set()
    for edge in ((0, 0, 1), (0, 1, 1), (1, 1, 1), (1, 1, 2)):
        group = generate_qubit_array(edge)
        for rec in group.records:
            t = dict(rec.terms)
            generated.add((t["delta"], t["joint"]))
    assert generated == printed


def test_qubit_array_group_sizes():
    sizes = {
        (0, 0, 1): 1,
        (0, 1, 1): 1,
        (1, 1, 1): 3,
        (1, 1, 2): 5,
    }
    for edge, size in sizes.items():
        assert len(generate_qubit_array(edge).records) == size


def test_qubit_array_raw_includes_redundant_modifications():
    raw = generate_qubit_array((1, 1, 1), irredundant=False)
    assert len(raw.records) == 7  # basic + 3 sites x 2 nontrivial swaps


def test_qubit_array_rejects_negative_site_values():
    with pytest.raises(SchubertError):
        generate_qubit_array((-1, 1))


def test_two_qubit_edge_bounds_consistent_with_bravyi_on_pure_states():
    """Pure two-qubit states: the 2-qubit array records from edge (0, 1)
    never fire while the Bravyi family (with nu pure) is satisfied."""
    from qmarginal.catalog import SpectraBundle, check_family
    from qmarginal.spectra import spectrum
    from qmarginal.tensor import haar_pure, pure_marginal, spectrum_of

    group = generate_qubit_array((0, 1))
    for trial in range(200):
        psi = haar_pure((2, 2), 1234, stream=trial)
        sites = [spectrum_of(pure_marginal(psi, [i])) for i in range(2)]
        joint = spectrum((1.0, 0.0, 0.0, 0.0), 1.0)
        deltas = sorted(s.as_floats()[0] - s.as_floats()[1] for s in sites)
        values = {"delta": tuple(deltas), "joint": joint.as_floats()}
        for rec in group.records:
            assert rec.slack(values) >= -1e-10
        bundle = SpectraBundle(sites=tuple(sites), joint=joint)
        assert check_family("BRAVYI_2Q", bundle).satisfied
