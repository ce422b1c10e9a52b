"""Bipartite density matrices and Schmidt-correlated (SC) states.

An SC state on ``N x N`` is stored only through its ``N x N`` coefficient
matrix ``coeff``.  The convention follows the mixture formula

    coeff[m, n] = sum_i p_i * c_n^i * conj(c_m^i)

so ``coeff[m, n]`` is the amplitude of ``|n><m| (x) |n><m|`` and lands at flat
row ``n*N + n``, column ``m*N + m`` of the embedded density matrix.

Random generators use numpy's ``default_rng`` (PCG64 bit generator), which is
portable and reproducible across platforms for a fixed integer seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import (
    BadWeights,
    DimensionMismatch,
    MixedDimensions,
    NotHermitian,
    NotPositive,
    TraceNotOne,
    ValidationFailed,
)
from .linalg import VALIDATION_TOL, as_matrix, dagger, hermiticity_defect, hermitian_eig

WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class BipartiteDims:
    n1: int
    n2: int

    def __post_init__(self):
        if self.n1 < 1 or self.n2 < 1:
            raise DimensionMismatch(f"local dimensions must be positive, got ({self.n1}, {self.n2})")

    @property
    def total(self) -> int:
        return self.n1 * self.n2

    def flat(self, m: int, n: int) -> int:
        return m * self.n2 + n


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    dims: BipartiteDims
    mat: np.ndarray

    @property
    def dim(self) -> int:
        return self.mat.shape[0]


@dataclass(frozen=True, eq=False)
class PureSchmidtVector:
    amps: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=np.complex128).reshape(-1)
        if amps.size < 1 or not np.all(np.isfinite(amps)):
            raise ValidationFailed("Schmidt amplitudes must be a non-empty finite vector")
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > WEIGHT_TOL:
            raise ValidationFailed(f"Schmidt amplitudes are not normalized: sum |c|^2 = {norm!r}")
        object.__setattr__(self, "amps", amps)

    @property
    def n(self) -> int:
        return self.amps.size


@dataclass(frozen=True, eq=False)
class SchmidtCorrelatedState:
    coeff: np.ndarray

    @property
    def n(self) -> int:
        return self.coeff.shape[0]


def _check_density_like(mat: np.ndarray, tol: float) -> None:
    defect = hermiticity_defect(mat)
    if defect > tol:
        raise NotHermitian(f"matrix is not Hermitian: max|M - M^H| = {defect:.3g}")
    tr = np.trace(mat)
    if abs(tr - 1.0) > tol:
        raise TraceNotOne(f"trace is {tr.real:.12g}{tr.imag:+.3g}j, expected 1")
    lowest = float(hermitian_eig(mat, tol).eigenvalues[0])
    if lowest < -tol:
        raise NotPositive(lowest, tol)


def validate_density(mat, dims: BipartiteDims, tol: float = VALIDATION_TOL) -> DensityMatrix:
    """Check a matrix is a bipartite density matrix; never repairs the input."""
    mat = as_matrix(mat)
    if mat.shape[0] != dims.total:
        raise DimensionMismatch(
            f"matrix has dimension {mat.shape[0]} but dims {dims.n1}x{dims.n2} require {dims.total}"
        )
    _check_density_like(mat, tol)
    return DensityMatrix(dims=dims, mat=mat.copy())


def validate_sc(coeff, tol: float = VALIDATION_TOL) -> SchmidtCorrelatedState:
    """Check that ``coeff`` is itself a valid ``N x N`` density matrix."""
    coeff = as_matrix(coeff)
    _check_density_like(coeff, tol)
    return SchmidtCorrelatedState(coeff=coeff.copy())


def _check_weights(weights: Sequence[float]) -> np.ndarray:
    w = np.asarray(weights, dtype=float).reshape(-1)
    if w.size == 0:
        raise BadWeights("at least one weight is required")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise BadWeights(f"weights must be finite and nonnegative: {w.tolist()}")
    if abs(w.sum() - 1.0) > WEIGHT_TOL:
        raise BadWeights(f"weights sum to {w.sum()!r}, expected 1")
    return w


def sc_from_mixture(weights: Sequence[float], states: Sequence[PureSchmidtVector]) -> SchmidtCorrelatedState:
    """Coefficient matrix of ``sum_i p_i |psi_i><psi_i|`` for pure states in common Schmidt bases."""
    w = _check_weights(weights)
    if len(states) != w.size:
        raise BadWeights(f"{w.size} weights for {len(states)} states")
    sizes = {s.n for s in states}
    if len(sizes) != 1:
        raise MixedDimensions(f"pure states have differing Schmidt dimensions {sorted(sizes)}")
    amps = np.stack([s.amps for s in states])
    # coeff[m, n] = sum_i w_i conj(c_m^i) c_n^i
    coeff = np.einsum("i,im,in->mn", w, np.conj(amps), amps)
    return SchmidtCorrelatedState(coeff=coeff)


def sc_embed(sc: SchmidtCorrelatedState) -> DensityMatrix:
    """Materialize the ``N^2 x N^2`` density matrix of an SC state."""
    n = sc.n
    rho = np.zeros((n * n, n * n), dtype=np.complex128)
    diag_idx = np.arange(n) * (n + 1)
    rho[np.ix_(diag_idx, diag_idx)] = sc.coeff.T
    return DensityMatrix(dims=BipartiteDims(n, n), mat=rho)


def detect_sc(rho: DensityMatrix, tol: float = VALIDATION_TOL) -> Optional[SchmidtCorrelatedState]:
    """Read off the SC coefficient matrix if ``rho`` has SC support in the computational basis.

    Returns ``None`` if any entry outside the ``(n*N+n, m*N+m)`` pattern
    exceeds ``tol`` in modulus.
    """
    if rho.dims.n1 != rho.dims.n2:
        raise DimensionMismatch(
            f"SC recognition needs equal local dimensions, got {rho.dims.n1}x{rho.dims.n2}"
        )
    n = rho.dims.n1
    diag_idx = np.arange(n) * (n + 1)
    outside = np.abs(rho.mat).copy()
    outside[np.ix_(diag_idx, diag_idx)] = 0.0
    if np.max(outside) > tol:
        return None
    return SchmidtCorrelatedState(coeff=rho.mat[np.ix_(diag_idx, diag_idx)].T.copy())


def partial_trace(rho: DensityMatrix, keep: int) -> np.ndarray:
    """Reduced state of subsystem ``keep`` (1 or 2)."""
    n1, n2 = rho.dims.n1, rho.dims.n2
    t = rho.mat.reshape(n1, n2, n1, n2)
    if keep == 1:
        return np.einsum("ajbj->ab", t)
    if keep == 2:
        return np.einsum("iaib->ab", t)
    raise ValueError("keep must be 1 or 2")


def random_unit_vector(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


def random_simplex(rng: np.random.Generator, k: int) -> np.ndarray:
    w = rng.dirichlet(np.ones(k))
    return w / w.sum()


def random_sc(n: int, rank: int, seed: int) -> SchmidtCorrelatedState:
    """Mix ``rank`` random unit vectors with Dirichlet(1) weights."""
    if rank < 1:
        raise ValueError("rank must be at least 1")
    rng = np.random.default_rng(seed)
    states = [PureSchmidtVector(random_unit_vector(rng, n)) for _ in range(rank)]
    return sc_from_mixture(random_simplex(rng, rank), states)


def random_banded_sc(n: int, delta: int, rank: int, seed: int) -> SchmidtCorrelatedState:
    """Random SC state whose coefficients vanish for ``|m - n| > delta``.

    Each pure component lives on a window of ``delta + 1`` consecutive Schmidt
    indices, so every outer product (and hence the mixture) is banded.
    """
    if not 0 <= delta < n:
        raise ValueError(f"need 0 <= delta < n, got delta={delta}, n={n}")
    rng = np.random.default_rng(seed)
    states = []
    for _ in range(rank):
        start = int(rng.integers(0, n - delta))
        v = np.zeros(n, dtype=np.complex128)
        v[start:start + delta + 1] = random_unit_vector(rng, delta + 1)
        states.append(PureSchmidtVector(v))
    return sc_from_mixture(random_simplex(rng, rank), states)


def random_density(dims: BipartiteDims, rank: int, seed: int) -> DensityMatrix:
    """Random mixed state of the given rank (Ginibre construction)."""
    rng = np.random.default_rng(seed)
    d = dims.total
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ dagger(g)
    rho /= np.trace(rho).real
    rho = 0.5 * (rho + dagger(rho))
    return DensityMatrix(dims=dims, mat=rho)


def pure_density(psi, dims: BipartiteDims, tol: float = VALIDATION_TOL) -> DensityMatrix:
    """``|psi><psi|`` for a normalized product-basis vector ``psi``."""
    psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
    return validate_density(np.outer(psi, np.conj(psi)), dims, tol)


def bell_sc() -> SchmidtCorrelatedState:
    return SchmidtCorrelatedState(coeff=np.full((2, 2), 0.5, dtype=np.complex128))
