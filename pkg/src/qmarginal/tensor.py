"""Dense complex linear algebra for multipartite states.

Marginals, spectra, Schmidt decomposition, purification, Gram matrices of
tensor slices, and seeded Haar sampling.  Index flattening is row-major
throughout: the first factor is the slowest index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectra import Spectrum

HERM_TOL = 1e-10
PSD_CLAMP = 1e-12
NORM_TOL = 1e-12


class StateError(ValueError):
    """Raised for states that violate their structural invariants."""


@dataclass(frozen=True)
class PureState:
    """Unit-norm amplitude vector over a tensor product of factors."""

    amplitudes: np.ndarray
    dims: tuple

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        dims = tuple(int(d) for d in self.dims)
        if any(d <= 0 for d in dims):
            raise StateError(f"factor dimensions must be positive: {dims}")
        if math.prod(dims) != amps.size:
            raise StateError(
                f"amplitude count {amps.size} does not match dims {dims}"
            )
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > 1e-12:
            raise StateError(f"state norm^2 = {norm2}, expected 1")
        amps = amps.reshape(-1)
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "dims", dims)

    @property
    def nfactors(self) -> int:
        return len(self.dims)

    def density_matrix(self) -> "DensityMatrix":
        rho = np.outer(self.amplitudes, self.amplitudes.conj())
        return DensityMatrix(rho, self.dims, trace=1.0)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian PSD matrix over a tensor product of factors.

    ``trace`` is the declared normalization (1 for states, n for the
    chemists' one-particle density matrix).
    """

    entries: np.ndarray
    dims: tuple
    trace: float = 1.0

    def __post_init__(self):
        mat = np.asarray(self.entries, dtype=complex)
        dims = tuple(int(d) for d in self.dims)
        size = math.prod(dims)
        if mat.shape != (size, size):
            raise StateError(f"matrix shape {mat.shape} does not match dims {dims}")
        if np.max(np.abs(mat - mat.conj().T)) > HERM_TOL:
            raise StateError("density matrix is not Hermitian")
        eigs = np.linalg.eigvalsh(mat)
        if eigs.min() < -PSD_CLAMP:
            raise StateError(f"density matrix has negative eigenvalue {eigs.min()}")
        tr = float(np.trace(mat).real)
        if abs(tr - float(self.trace)) > HERM_TOL:
            raise StateError(f"trace {tr} does not match declared {self.trace}")
        mat = mat.copy()
        mat.setflags(write=False)
        object.__setattr__(self, "entries", mat)
        object.__setattr__(self, "dims", dims)


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Trace out every factor not listed in ``keep``.

    ``keep`` is a nonempty proper subset of factor indices (0-based).  The
    result satisfies Tr(rho_keep X) = Tr(rho (X tensor 1)) for observables X
    on the kept factors, and inherits the trace normalization.
    """
    keep = sorted(set(int(k) for k in keep))
    nf = len(rho.dims)
    if not keep or len(keep) >= nf:
        raise StateError(f"keep must be a nonempty proper subset, got {keep}")
    if keep[0] < 0 or keep[-1] >= nf:
        raise StateError(f"factor index out of range in {keep}")
    drop = [i for i in range(nf) if i not in keep]
    tensor = rho.entries.reshape(rho.dims + rho.dims)
    # Contract dropped row indices against dropped column indices.
    for offset, i in enumerate(drop):
        axis = i - offset
        ncur = tensor.ndim // 2
        tensor = np.trace(tensor, axis1=axis, axis2=axis + ncur)
    kept_dims = tuple(rho.dims[i] for i in keep)
    size = math.prod(kept_dims)
    return DensityMatrix(tensor.reshape(size, size), kept_dims, trace=rho.trace)


def pure_marginal(psi: PureState, keep) -> DensityMatrix:
    """Marginal of a pure state without forming the full density matrix."""
    keep = sorted(set(int(k) for k in keep))
    nf = len(psi.dims)
    if not keep or len(keep) >= nf:
        raise StateError(f"keep must be a nonempty proper subset, got {keep}")
    drop = [i for i in range(nf) if i not in keep]
    tensor = psi.amplitudes.reshape(psi.dims)
    perm = keep + drop
    kept_size = math.prod(psi.dims[i] for i in keep)
    mat = tensor.transpose(perm).reshape(kept_size, -1)
    rho = mat @ mat.conj().T
    return DensityMatrix(rho, tuple(psi.dims[i] for i in keep), trace=1.0)


def spectrum_of(hermitian, trace_tag=None, tol: float = HERM_TOL) -> Spectrum:
    """Nonincreasing eigenvalues of a Hermitian matrix as a Spectrum.

    Eigenvalues in (-PSD_CLAMP, 0) are clamped to zero before validation.
    """
    if isinstance(hermitian, DensityMatrix):
        if trace_tag is None:
            trace_tag = hermitian.trace
        hermitian = hermitian.entries
    mat = np.asarray(hermitian, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise StateError(f"expected square matrix, got shape {mat.shape}")
    if np.max(np.abs(mat - mat.conj().T)) > tol:
        raise StateError("matrix is not Hermitian")
    eigs = np.linalg.eigvalsh(mat)[::-1]
    eigs = np.where((eigs > -PSD_CLAMP) & (eigs < 0.0), 0.0, eigs)
    if trace_tag is None:
        trace_tag = float(np.trace(mat).real)
    return Spectrum(tuple(float(e) for e in eigs), float(trace_tag))


def _canonical_phase(vectors: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Fix each column's phase so its first significant entry is real positive."""
    out = vectors.copy()
    for k in range(out.shape[1]):
        col = out[:, k]
        idx = np.argmax(np.abs(col) > tol)
        pivot = col[idx]
        if abs(pivot) > tol:
            out[:, k] = col * (abs(pivot) / pivot)
    return out


def schmidt(psi: PureState):
    """Schmidt decomposition of a bipartite pure state.

    Returns (coefficients, left_basis, right_basis) with nonincreasing
    nonnegative coefficients whose squares sum to 1; the bases are
    orthonormal columns and sum_i c_i (left_i tensor right_i) reconstructs
    the state.
    """
    if psi.nfactors != 2:
        raise StateError(f"Schmidt decomposition needs two factors, got {psi.nfactors}")
    da, db = psi.dims
    mat = psi.amplitudes.reshape(da, db)
    u, s, vh = np.linalg.svd(mat)
    k = min(da, db)
    left = _canonical_phase(u[:, :k])
    # Keep the reconstruction exact under the phase change of the left basis.
    phases = np.array(
        [np.vdot(left[:, i], u[:, i]) for i in range(k)], dtype=complex
    )
    right = vh[:k, :].T * phases
    return s[:k].copy(), left, right


def purify(rho: DensityMatrix) -> PureState:
    """Two-factor pure state whose first marginal is ``rho``.

    The second factor has dimension rank(rho).
    """
    if abs(rho.trace - 1.0) > HERM_TOL:
        raise StateError("purification requires a trace-1 state")
    eigs, vecs = np.linalg.eigh(rho.entries)
    order = np.argsort(eigs)[::-1]
    eigs, vecs = eigs[order], vecs[:, order]
    rank = int(np.sum(eigs > PSD_CLAMP))
    rank = max(rank, 1)
    d = rho.entries.shape[0]
    amps = np.zeros((d, rank), dtype=complex)
    for i in range(rank):
        amps[:, i] = math.sqrt(max(float(eigs[i]), 0.0)) * vecs[:, i]
    amps /= np.linalg.norm(amps)
    return PureState(amps.reshape(-1), (d, rank))


def gram_of_slices(array, axis: int) -> np.ndarray:
    """Gram matrix of parallel slices of a three-index array.

    Entry (s, t) is the Hermitian inner product of slices s and t taken
    along ``axis`` (1-based, in {1, 2, 3}).  For a unit-norm array this is
    the corresponding one-factor marginal of the flattened pure state.
    """
    arr = np.asarray(array, dtype=complex)
    if arr.ndim != 3:
        raise StateError(f"expected a three-index array, got ndim={arr.ndim}")
    if axis not in (1, 2, 3):
        raise StateError(f"axis must be 1, 2 or 3, got {axis}")
    ax = axis - 1
    moved = np.moveaxis(arr, ax, 0)
    flat = moved.reshape(moved.shape[0], -1)
    return flat @ flat.conj().T


def rng_from_seed(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator (Philox) keyed by a 64-bit seed.

    ``stream`` selects an independent substream; identical (seed, stream)
    pairs reproduce identical output on any platform.
    """
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(stream),))
    return np.random.Generator(np.random.Philox(ss))


def haar_pure(dims, seed: int, stream: int = 0) -> PureState:
    """Haar-random pure state: normalized i.i.d. standard complex Gaussians."""
    dims = tuple(int(d) for d in dims)
    rng = rng_from_seed(seed, stream)
    size = math.prod(dims)
    vec = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    vec /= np.linalg.norm(vec)
    return PureState(vec, dims)


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR with phase correction."""
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return q * phases


def random_mixed_with_spectrum(nu: Spectrum, dims, seed: int, stream: int = 0) -> DensityMatrix:
    """Density matrix with exactly the given spectrum, Haar-random basis."""
    dims = tuple(int(d) for d in dims)
    size = math.prod(dims)
    vals = np.array(nu.as_floats())
    if len(vals) != size:
        raise StateError(f"spectrum length {len(vals)} does not match dims {dims}")
    if vals.min() < -1e-12 or abs(vals.sum() - 1.0) > 1e-10:
        raise StateError("spectrum must be nonnegative with unit sum")
    rng = rng_from_seed(seed, stream)
    u = haar_unitary(size, rng)
    rho = (u * np.clip(vals, 0.0, None)) @ u.conj().T
    rho = (rho + rho.conj().T) / 2
    return DensityMatrix(rho, dims, trace=1.0)


def random_density(dims, rng: np.random.Generator) -> DensityMatrix:
    """Hilbert-Schmidt random density matrix (GG*/Tr normalization)."""
    dims = tuple(int(d) for d in dims)
    size = math.prod(dims)
    g = rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    return DensityMatrix(rho, dims, trace=1.0)
