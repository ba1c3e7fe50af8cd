"""Fermionic layer: sign bookkeeping, RDMs, energy reduction, sampling.

The oracles here are deliberately independent of the library's sparse-table
path: explicit operator application by loops, and embedding into the full
tensor power followed by a partial trace.
"""

import math
from itertools import combinations, permutations

import numpy as np
import pytest

from qmarginal.fermion import (
    FermionError,
    FermionState,
    contract_two_rdm,
    energy_from_two_rdm,
    fermion_basis,
    haar_fermion,
    one_rdm,
    one_rdm_mixed,
    slater,
    two_rdm,
)
from qmarginal.tensor import PureState, pure_marginal, spectrum_of


# ---------------------------------------------------------------------------
# Independent oracles

def _ann(subset, orb):
    if orb not in subset:
        return None, 0
    pos = subset.index(orb)
    return subset[:pos] + subset[pos + 1:], (-1) ** pos


def _cre(subset, orb):
    if orb in subset:
        return None, 0
    pos = sum(1 for x in subset if x < orb)
    return tuple(sorted(subset + (orb,))), (-1) ** pos


def _embed_in_tensor_power(psi: FermionState) -> PureState:
    """Antisymmetric embedding into (C^r)^(tensor n)."""
    basis = psi.basis
    r, n = basis.r, basis.n
    tensor = np.zeros((r,) * n, dtype=complex)
    scale = 1 / math.sqrt(math.factorial(n))
    for idx, subset in enumerate(basis.subsets):
        c = psi.amplitudes[idx]
        if c == 0:
            continue
        for perm in permutations(range(n)):
            sign = _perm_sign(perm)
            pos = tuple(subset[perm[k]] - 1 for k in range(n))
            tensor[pos] += sign * c * scale
    return PureState(tensor.reshape(-1), (r,) * n)


def _perm_sign(perm):
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def _one_rdm_oracle(psi: FermionState) -> np.ndarray:
    """Chemist 1-RDM via the tensor-power embedding and a partial trace."""
    embedded = _embed_in_tensor_power(psi)
    rho = pure_marginal(embedded, [0])
    return psi.basis.n * rho.entries


def _full_hamiltonian(basis, h1, h12, pairs):
    """Explicit second-quantized Hamiltonian matrix on the n-sector."""
    dim, r = basis.dim, basis.r
    mat = np.zeros((dim, dim), dtype=complex)
    for si, subset in enumerate(basis.subsets):
        for q in subset:
            t, s1 = _ann(subset, q)
            for p in range(1, r + 1):
                u, s2 = _cre(t, p)
                if u is not None:
                    mat[basis.index[u], si] += h1[p - 1, q - 1] * s1 * s2
        for (k, l) in combinations(subset, 2):
            t1, sa = _ann(subset, k)
            t2, sb = _ann(t1, l)
            ki = pairs.index((k, l))
            for pi, (i, j) in enumerate(pairs):
                u1, sc = _cre(t2, j)
                if u1 is None:
                    continue
                u2, sd = _cre(u1, i)
                if u2 is None:
                    continue
                mat[basis.index[u2], si] += h12[pi, ki] * sa * sb * sc * sd
    return mat


# ---------------------------------------------------------------------------
# Basis and Slater determinants

def test_basis_lexicographic():
    basis = fermion_basis(6, 3)
    assert basis.dim == 20
    assert basis.subsets[0] == (1, 2, 3)
    assert basis.subsets[-1] == (4, 5, 6)
    assert basis.index[(1, 2, 4)] == 1


def test_slater_positions():
    assert slater(6, 3, (1, 2, 3)).amplitudes[0] == 1.0
    assert slater(6, 3, (4, 5, 6)).amplitudes[-1] == 1.0


def test_slater_rejects_bad_subsets():
    with pytest.raises(FermionError):
        slater(6, 3, (1, 2))
    with pytest.raises(FermionError):
        slater(6, 3, (1, 2, 7))
    with pytest.raises(FermionError):
        slater(6, 3, (1, 1, 2))


def test_slater_one_rdm_is_projector():
    for subset in ((1, 2, 3), (2, 4, 6), (4, 5, 6)):
        gamma = one_rdm(slater(6, 3, subset)).entries
        expect = np.diag([1.0 if i + 1 in subset else 0.0 for i in range(6)])
        assert np.allclose(gamma, expect, atol=1e-14)


def test_two_slater_superposition():
    basis = fermion_basis(6, 3)
    amps = np.zeros(basis.dim, dtype=complex)
    a, b = 0.3, 0.7
    amps[basis.index[(1, 2, 3)]] = math.sqrt(a)
    amps[basis.index[(4, 5, 6)]] = math.sqrt(b)
    gamma = one_rdm(FermionState(basis, amps)).entries
    assert np.allclose(np.diag(gamma), [a, a, a, b, b, b], atol=1e-12)
    assert np.max(np.abs(gamma - np.diag(np.diag(gamma)))) < 1e-12


# ---------------------------------------------------------------------------
# One-particle RDM against the embedding oracle

@pytest.mark.parametrize("r,n,seed", [(4, 2, 1), (5, 2, 2), (5, 3, 3), (6, 3, 4)])
def test_one_rdm_matches_embedding_oracle(r, n, seed):
    psi = haar_fermion(r, n, seed)
    gamma = one_rdm(psi).entries
    oracle = _one_rdm_oracle(psi)
    assert np.max(np.abs(gamma - oracle)) < 1e-12


def test_one_rdm_mixed_consistency():
    basis = fermion_basis(5, 2)
    psi = haar_fermion(5, 2, 9)
    rho = np.outer(psi.amplitudes, psi.amplitudes.conj())
    gamma_pure = one_rdm(psi).entries
    gamma_mixed = one_rdm_mixed(rho, basis).entries
    assert np.max(np.abs(gamma_pure - gamma_mixed)) < 1e-12


def test_borland_dennis_structure():
    for seed in range(5):
        lam = spectrum_of(one_rdm(haar_fermion(6, 3, seed))).as_floats()
        for i in range(3):
            assert abs(lam[i] + lam[5 - i] - 1) < 1e-10
        assert lam[3] <= lam[4] + lam[5] + 1e-10


# ---------------------------------------------------------------------------
# Two-particle RDM

def test_two_rdm_slater_pair():
    rdm = two_rdm(slater(4, 2, (1, 2)))
    expect = np.zeros((6, 6))
    expect[0, 0] = 2.0
    assert np.allclose(rdm.matrix, expect, atol=1e-14)
    assert rdm.trace_convention == "n(n-1)"


def test_two_rdm_trace_and_contraction():
    for (r, n, seed) in [(5, 2, 11), (6, 3, 12), (5, 3, 13)]:
        psi = haar_fermion(r, n, seed)
        rdm = two_rdm(psi)
        assert abs(np.trace(rdm.matrix).real - n * (n - 1)) < 1e-10
        contr = contract_two_rdm(rdm, r, n)
        gamma = one_rdm(psi).entries
        assert np.max(np.abs(contr - (n - 1) * gamma)) < 1e-10


def test_two_rdm_requires_two_particles():
    with pytest.raises(FermionError):
        two_rdm(haar_fermion(4, 1, 0))


def test_two_rdm_psd():
    psi = haar_fermion(6, 3, 21)
    eigs = np.linalg.eigvalsh(two_rdm(psi).matrix)
    assert eigs.min() > -1e-12


# ---------------------------------------------------------------------------
# Energy formula against the full-Hamiltonian oracle

def _random_hermitian(rng, d):
    m = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (m + m.conj().T) / 2


def test_energy_two_particles_is_identity():
    rng = np.random.default_rng(0)
    r, n = 4, 2
    basis = fermion_basis(r, n)
    pairs = list(combinations(range(1, r + 1), 2))
    psi = haar_fermion(r, n, 100)
    h1 = _random_hermitian(rng, r)
    h12 = _random_hermitian(rng, len(pairs))
    full = _full_hamiltonian(basis, h1, h12, pairs)
    exact = np.vdot(psi.amplitudes, full @ psi.amplitudes).real
    assert abs(energy_from_two_rdm(h1, h12, psi) - exact) < 1e-10


def test_energy_one_body_only():
    rng = np.random.default_rng(1)
    r, n = 6, 3
    psi = haar_fermion(r, n, 101)
    h1 = _random_hermitian(rng, r)
    npairs = len(list(combinations(range(r), 2)))
    h12 = np.zeros((npairs, npairs))
    gamma = one_rdm(psi).entries
    expect = np.trace(h1 @ gamma).real
    assert abs(energy_from_two_rdm(h1, h12, psi) - expect) < 1e-10


def test_energy_full_oracle():
    rng = np.random.default_rng(2)
    r, n = 6, 3
    basis = fermion_basis(r, n)
    pairs = list(combinations(range(1, r + 1), 2))
    psi = haar_fermion(r, n, 102)
    h1 = _random_hermitian(rng, r)
    h12 = _random_hermitian(rng, len(pairs))
    full = _full_hamiltonian(basis, h1, h12, pairs)
    exact = np.vdot(psi.amplitudes, full @ psi.amplitudes).real
    assert abs(energy_from_two_rdm(h1, h12, psi) - exact) < 1e-10


# ---------------------------------------------------------------------------
# Sampling

def test_haar_fermion_determinism_and_norm():
    a = haar_fermion(6, 3, 7)
    b = haar_fermion(6, 3, 7)
    assert np.array_equal(a.amplitudes, b.amplitudes)
    assert abs(np.linalg.norm(a.amplitudes) - 1) < 1e-12
    with pytest.raises(FermionError):
        haar_fermion(3, 3, 0)


def test_pauli_bounds_sampled():
    for t in range(200):
        lam = spectrum_of(one_rdm(haar_fermion(6, 3, 777, stream=t))).as_floats()
        assert all(-1e-10 <= x <= 1 + 1e-10 for x in lam)
        assert abs(sum(lam) - 3) < 1e-10


@pytest.mark.parametrize("r", [4, 5, 6])
def test_two_particle_even_degeneracy(r):
    for t in range(200):
        lam = list(spectrum_of(one_rdm(haar_fermion(r, 2, 55, stream=t))).as_floats())
        if r % 2 == 1:
            tail = lam.pop()
            assert abs(tail) < 1e-8
        for i in range(0, len(lam), 2):
            assert abs(lam[i] - lam[i + 1]) < 1e-8
