"""Verify harness: campaign determinism, worker independence, witness."""

import numpy as np
import pytest

from qmarginal.harness import (
    isospectrality_campaign,
    mc_verify,
    witness_search,
)
from qmarginal.spectra import spectrum
from qmarginal.tensor import haar_pure, pure_marginal, spectrum_of


def test_mc_verify_bd6_small():
    rep = mc_verify("BD6", "fermi:6:3:pure", trials=200, seed=7)
    assert rep.violations == 0
    assert rep.min_slack >= -1e-10


def test_mc_verify_deterministic():
    a = mc_verify("POLYGON", "qubits:3:pure", trials=100, seed=5)
    b = mc_verify("POLYGON", "qubits:3:pure", trials=100, seed=5)
    assert a.min_slack == b.min_slack
    assert a.violations == b.violations
    c = mc_verify("POLYGON", "qubits:3:pure", trials=100, seed=6)
    assert c.min_slack != a.min_slack


def test_mc_verify_worker_count_independent():
    a = mc_verify("BD6", "fermi:6:3:pure", trials=64, seed=11, jobs=1)
    b = mc_verify("BD6", "fermi:6:3:pure", trials=64, seed=11, jobs=2)
    assert a.min_slack == b.min_slack
    assert a.violations == b.violations


def test_mc_verify_fixed_spectrum():
    nu = spectrum((0.5, 0.3, 0.15, 0.05))
    rep = mc_verify("BRAVYI_2Q", "2x2:mixed", trials=150, seed=13, nu=nu)
    assert rep.violations == 0


def test_mc_verify_rejects_unknown_family():
    from qmarginal.catalog import CatalogError

    with pytest.raises(CatalogError):
        mc_verify("NOPE", "2x2:mixed", trials=1, seed=0)


def test_isospectrality_campaign():
    rep = isospectrality_campaign(["2x2", "2x3", "3x3", "3x4"], 50, 3)
    assert rep.max_discrepancy < 1e-10


def test_pauli_invariant_ten_thousand_samples():
    rep = mc_verify("PAULI", "fermi:6:3:pure", trials=10000, seed=31)
    assert rep.violations == 0
    assert rep.min_slack >= -1e-10


@pytest.mark.parametrize("r", [4, 5, 6])
def test_even_degeneracy_invariant_ten_thousand_samples(r):
    rep = mc_verify("TWO_PARTICLE_PURE", f"fermi:{r}:2:pure", trials=10000, seed=37)
    assert rep.violations == 0


def test_witness_self_consistency():
    psi = haar_pure((2, 2, 2), 42)
    targets = [spectrum_of(pure_marginal(psi, [i])).as_floats() for i in range(3)]
    rep = witness_search(targets, "qubits:3", restarts=20, iters=200, seed=1)
    assert rep.success
    assert rep.residual < 1e-3


def test_witness_ghz_point():
    rep = witness_search([(0.5, 0.5)] * 3, "qubits:3", restarts=10, iters=200, seed=2)
    assert rep.success


def test_witness_infeasible_target_reports_failure():
    rep = witness_search(
        [(0.6, 0.4), (0.9, 0.1), (0.9, 0.1)], "qubits:3",
        restarts=10, iters=200, seed=3,
    )
    assert not rep.success
    assert rep.residual > 0.01


def test_witness_validates_targets():
    with pytest.raises(ValueError):
        witness_search([(0.5, 0.5)], "qubits:3", seed=0)
    with pytest.raises(ValueError):
        witness_search([(0.5, 0.5), (1.0,), (0.5, 0.5)], "qubits:3", seed=0)


def test_witness_amplitudes_realize_targets():
    psi = haar_pure((2, 2, 2), 99)
    targets = [spectrum_of(pure_marginal(psi, [i])).as_floats() for i in range(3)]
    rep = witness_search(targets, "qubits:3", restarts=20, iters=300, seed=4)
    assert rep.success
    amps = np.array([re + 1j * im for re, im in rep.amplitudes])
    from qmarginal.tensor import PureState

    found = PureState(amps, (2, 2, 2))
    for i in range(3):
        got = spectrum_of(pure_marginal(found, [i])).as_floats()
        assert max(abs(a - b) for a, b in zip(got, targets[i])) < 2e-3
