"""Seeded Monte-Carlo campaigns and witness search.

Ties the samplers to the catalog checks: each campaign draws states of the
matching system (Haar pure, fixed-spectrum mixed, or fermionic), computes
marginal spectra and runs the family check.  Per-trial seeds are derived
from the campaign seed by counter offset, so reports are independent of
worker count and bit-reproducible.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .catalog import (
    CatalogError,
    SpectraBundle,
    check_equivalence,
    check_family,
    get_family,
)
from .fermion import fermion_basis, haar_fermion, one_rdm, one_rdm_mixed
from .spectra import Spectrum, spectrum
from .systems import SystemDescriptor, parse_system
from .tensor import (
    PureState,
    haar_pure,
    haar_unitary,
    pure_marginal,
    random_density,
    rng_from_seed,
    spectrum_of,
)


@dataclass(frozen=True)
class CampaignReport:
    family_id: str
    system: str
    trials: int
    seed: int
    min_slack: float
    violations: int
    wall_time: float
    tolerance: float
    notes: tuple = ()


def _pure_site_bundle(psi: PureState) -> SpectraBundle:
    sites = tuple(
        spectrum_of(pure_marginal(psi, [i])) for i in range(len(psi.dims))
    )
    size = math.prod(psi.dims)
    joint = Spectrum((1.0,) + (0.0,) * (size - 1), 1.0)
    return SpectraBundle(sites=sites, joint=joint)


def _mixed_site_bundle(rho) -> SpectraBundle:
    from .tensor import partial_trace

    sites = tuple(
        spectrum_of(partial_trace(rho, [i])) for i in range(len(rho.dims))
    )
    return SpectraBundle(sites=sites, joint=spectrum_of(rho))


def _fermi_fixed_spectrum_bundle(r, n, nu, rng) -> SpectraBundle:
    basis = fermion_basis(r, n)
    vals = np.array(nu.as_floats())
    if len(vals) != basis.dim:
        raise CatalogError(
            f"state spectrum needs {basis.dim} entries for (r={r}, n={n})"
        )
    u = haar_unitary(basis.dim, rng)
    rho = (u * np.clip(vals, 0.0, None)) @ u.conj().T
    rho = (rho + rho.conj().T) / 2
    gamma = one_rdm_mixed(rho, basis)
    return SpectraBundle(one_body=spectrum_of(gamma), joint=spectrum(vals, 1.0))


def sample_bundle(family_id: str, system: SystemDescriptor, seed: int,
                  trial: int, nu: Spectrum = None) -> SpectraBundle:
    """Draw one state of the system as the family demands and reduce it."""
    if system.kind == "fermion":
        if system.pure:
            psi = haar_fermion(system.r, system.n, seed, stream=trial)
            basis = psi.basis
            joint = Spectrum((1.0,) + (0.0,) * (basis.dim - 1), 1.0)
            return SpectraBundle(one_body=spectrum_of(one_rdm(psi)), joint=joint)
        rng = rng_from_seed(seed, stream=trial)
        if nu is None:
            dim = fermion_basis(system.r, system.n).dim
            nu = spectrum(rng.dirichlet(np.ones(dim)), 1.0)
        return _fermi_fixed_spectrum_bundle(system.r, system.n, nu, rng)
    if system.pure:
        return _pure_site_bundle(haar_pure(system.dims, seed, stream=trial))
    rng = rng_from_seed(seed, stream=trial)
    if nu is not None:
        from .tensor import random_mixed_with_spectrum

        rho = random_mixed_with_spectrum(nu, system.dims, seed, stream=trial)
    else:
        rho = random_density(system.dims, rng)
    return _mixed_site_bundle(rho)


def _bipartitions(dims):
    if len(dims) == 2:
        return [((0,), (1,))]
    return [
        ((i,), tuple(j for j in range(len(dims)) if j != i))
        for i in range(len(dims))
    ]


def _basic_bundles(system: SystemDescriptor, seed, trial, nu):
    """BASIC applies to bipartitions; multi-factor systems check every
    single-site-versus-rest split of the same sampled state."""
    from .tensor import partial_trace, random_density, random_mixed_with_spectrum

    rng = rng_from_seed(seed, stream=trial)
    if nu is not None:
        rho = random_mixed_with_spectrum(nu, system.dims, seed, stream=trial)
    else:
        rho = random_density(system.dims, rng)
    out = []
    joint = spectrum_of(rho)
    for left, right in _bipartitions(system.dims):
        sites = (
            spectrum_of(partial_trace(rho, list(left))),
            spectrum_of(partial_trace(rho, list(right))),
        )
        out.append(SpectraBundle(sites=sites, joint=joint))
    return out


def _run_trial(family_id, system, seed, trial, nu, tolerance):
    if family_id == "BASIC" and system.kind in ("tensor", "qubits"):
        bundles = _basic_bundles(system, seed, trial, nu)
    else:
        bundles = [sample_bundle(family_id, system, seed, trial, nu)]
    worst = math.inf
    violated = 0
    for bundle in bundles:
        report = check_family(family_id, bundle, tolerance)
        worst = min(worst, report.worst_slack)
    if worst < -tolerance:
        violated = 1
    return worst, violated


def _campaign_chunk(args):
    family_id, system_str, seed, lo, hi, nu_vals, tolerance = args
    system = parse_system(system_str)
    nu = spectrum(nu_vals, 1.0) if nu_vals is not None else None
    worst = math.inf
    violations = 0
    for trial in range(lo, hi):
        slack, bad = _run_trial(family_id, system, seed, trial, nu, tolerance)
        worst = min(worst, slack)
        violations += bad
    return worst, violations


def mc_verify(family_id: str, system, trials: int, seed: int,
              tolerance: float = 1e-10, nu: Spectrum = None,
              jobs: int = 1) -> CampaignReport:
    """Monte-Carlo soundness campaign for one family on one system.

    Deterministic per (family, system, trials, seed) and independent of the
    worker count: the min-slack/violation-count reduction is associative.
    """
    if isinstance(system, str):
        system = parse_system(system)
    get_family(family_id)
    start = time.perf_counter()
    nu_vals = None if nu is None else tuple(nu.as_floats())
    if jobs > 1 and trials >= 4 * jobs:
        bounds = np.linspace(0, trials, jobs + 1, dtype=int)
        chunks = [
            (family_id, str(system), seed, int(lo), int(hi), nu_vals, tolerance)
            for lo, hi in zip(bounds, bounds[1:])
            if hi > lo
        ]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            partials = list(pool.map(_campaign_chunk, chunks))
        worst = min(p[0] for p in partials)
        violations = sum(p[1] for p in partials)
    else:
        worst, violations = _campaign_chunk(
            (family_id, str(system), seed, 0, trials, nu_vals, tolerance)
        )
    return CampaignReport(
        family_id=family_id,
        system=str(system),
        trials=trials,
        seed=seed,
        min_slack=worst,
        violations=violations,
        wall_time=time.perf_counter() - start,
        tolerance=tolerance,
    )


@dataclass(frozen=True)
class IsospectralityReport:
    formats: tuple
    trials: int
    seed: int
    max_discrepancy: float
    wall_time: float


def isospectrality_campaign(formats, trials: int, seed: int) -> IsospectralityReport:
    """Max deviation between the two marginal spectra of bipartite Haar
    states, over all formats; nonzero parts compared, trailing zeros checked.
    """
    start = time.perf_counter()
    worst = 0.0
    for fmt_i, fmt in enumerate(formats):
        system = parse_system(fmt) if isinstance(fmt, str) else fmt
        m, n = system.dims
        k = min(m, n)
        for trial in range(trials):
            psi = haar_pure((m, n), seed, stream=fmt_i * trials + trial)
            sa = spectrum_of(pure_marginal(psi, [0])).as_floats()
            sb = spectrum_of(pure_marginal(psi, [1])).as_floats()
            diff = max(abs(a - b) for a, b in zip(sa[:k], sb[:k]))
            tail = max((abs(x) for x in list(sa[k:]) + list(sb[k:])), default=0.0)
            worst = max(worst, diff, tail)
    return IsospectralityReport(
        tuple(str(f) for f in formats), trials, seed, worst,
        time.perf_counter() - start,
    )


equivalence_campaign = check_equivalence


@dataclass(frozen=True)
class WitnessReport:
    success: bool
    residual: float
    targets: tuple
    amplitudes: tuple = None
    restarts: int = 0
    notes: tuple = ()


def _sorted_marginal_spectra(x: np.ndarray, dims):
    psi = x[: x.size // 2] + 1j * x[x.size // 2:]
    norm = np.linalg.norm(psi)
    if norm == 0:
        return None
    psi = psi / norm
    tensor = psi.reshape(dims)
    specs = []
    for i in range(len(dims)):
        mat = np.moveaxis(tensor, i, 0).reshape(dims[i], -1)
        rho = mat @ mat.conj().T
        specs.append(np.sort(np.linalg.eigvalsh(rho))[::-1])
    return specs


def witness_search(targets, system, restarts: int = 20, iters: int = 200,
                   seed: int = 0) -> WitnessReport:
    """Best-effort search for a pure state with the given marginal spectra.

    Local minimization of the summed squared sorted-spectrum distance over
    the unit sphere with random restarts.  Success means every marginal
    matches within 1e-3 (in the summed-square residual); failure is a
    report with the best residual, never a claim of infeasibility.
    """
    from scipy.optimize import minimize

    if isinstance(system, str):
        system = parse_system(system)
    dims = system.dims
    goals = [np.sort(np.array(t, dtype=float))[::-1] for t in targets]
    if len(goals) != len(dims):
        raise ValueError(f"need {len(dims)} target spectra, got {len(goals)}")
    for g, d in zip(goals, dims):
        if len(g) != d:
            raise ValueError(f"target {tuple(g)} does not match site dimension {d}")

    size = math.prod(dims)

    def objective(x):
        specs = _sorted_marginal_spectra(x, dims)
        if specs is None:
            return 1e6
        return sum(
            float(np.sum((s - g) ** 2)) for s, g in zip(specs, goals)
        )

    best_val = math.inf
    best_x = None
    rng = rng_from_seed(seed)
    for _ in range(restarts):
        x0 = rng.standard_normal(2 * size)
        res = minimize(
            objective, x0, method="L-BFGS-B",
            options={"maxiter": iters, "ftol": 1e-16, "gtol": 1e-12},
        )
        if res.fun < best_val:
            best_val = float(res.fun)
            best_x = res.x
        if best_val < 1e-10:
            break
    residual = math.sqrt(max(best_val, 0.0))
    psi = None
    if best_x is not None:
        amps = best_x[:size] + 1j * best_x[size:]
        amps /= np.linalg.norm(amps)
        psi = tuple((float(a.real), float(a.imag)) for a in amps)
    return WitnessReport(
        success=residual < 1e-3,
        residual=residual,
        targets=tuple(tuple(float(v) for v in g) for g in goals),
        amplitudes=psi,
        restarts=restarts,
    )
