"""Dense complex linear algebra: Kronecker products, a Hermitian Jacobi
eigensolver and the entrywise norms the distances are built on.

Matrices are plain ``numpy`` arrays of dtype ``complex128`` indexed ``(row, column)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NotHermitian, ValidationFailed

VALIDATION_TOL = 1e-9
RECONSTRUCTION_TOL = 1e-10
JACOBI_THRESHOLD = 1e-13
JACOBI_MAX_SWEEPS = 100


def as_matrix(m) -> np.ndarray:
    """Coerce to a finite, square complex128 array."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise DimensionMismatch(f"expected a non-empty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationFailed("matrix contains NaN or infinite entries")
    return arr


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def kron(a, b) -> np.ndarray:
    """Kronecker product; entry ``(i1*db + i2, j1*db + j2)`` is ``a[i1, j1] * b[i2, j2]``."""
    a = as_matrix(a)
    b = as_matrix(b)
    da, db = a.shape[0], b.shape[0]
    out = a[:, None, :, None] * b[None, :, None, :]
    return out.reshape(da * db, da * db)


def alpha_norm(m) -> float:
    """Sum of the moduli of all entries."""
    return float(np.sum(np.abs(np.asarray(m))))


def hermiticity_defect(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - dagger(m))))


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending eigenvalues with matching unit eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ dagger(v)


@lru_cache(maxsize=None)
def _round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Disjoint pair schedule covering every (p, q), p < q, once per sweep."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for k in range(m // 2):
            p, q = players[k], players[m - 1 - k]
            if p >= n or q >= n:
                continue
            ps.append(min(p, q))
            qs.append(max(p, q))
        rounds.append((np.array(ps, dtype=np.intp), np.array(qs, dtype=np.intp)))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def hermitian_eig(m, tol: float = VALIDATION_TOL, *, max_sweeps: int = JACOBI_MAX_SWEEPS) -> EigenDecomposition:
    """Diagonalize a Hermitian matrix by cyclic complex Jacobi sweeps.

    Each sweep visits every index pair once, in a round-robin order that lets
    the rotations of one round (which touch disjoint pairs) be applied together.
    Iteration stops once the off-diagonal Frobenius mass drops below
    ``1e-13 * dim`` (scaled by the Frobenius norm of the input when that
    exceeds one).

    Raises
    ------
    NotHermitian
        If ``max|m - m^H| > tol``.
    NoConvergence
        If the threshold is not met within ``max_sweeps`` sweeps.
    """
    a = as_matrix(m)
    defect = hermiticity_defect(a)
    if defect > tol:
        raise NotHermitian(f"matrix is not Hermitian: max|M - M^H| = {defect:.3g} > {tol:.1g}")
    a = 0.5 * (a + dagger(a))
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = max(1.0, float(np.linalg.norm(a)))
    threshold = JACOBI_THRESHOLD * n * scale

    sweeps = 0
    while _off_norm(a) > threshold:
        if sweeps >= max_sweeps:
            raise NoConvergence(
                f"Jacobi iteration left off-diagonal mass {_off_norm(a):.3g} after {sweeps} sweeps"
            )
        for ps, qs in _round_robin(n):
            _rotate(a, v, ps, qs)
        sweeps += 1

    w = np.real(np.diag(a)).copy()
    order = np.argsort(w, kind="stable")
    return EigenDecomposition(eigenvalues=w[order], eigenvectors=v[:, order])


def _rotate(a: np.ndarray, v: np.ndarray, ps: np.ndarray, qs: np.ndarray) -> None:
    """Annihilate a[p, q] for every pair of one round, in place."""
    app = np.real(a[ps, ps])
    aqq = np.real(a[qs, qs])
    b = a[ps, qs]
    r = np.abs(b)
    phase = np.ones_like(b)
    nz = r > np.finfo(float).tiny
    phase[nz] = b[nz] / r[nz]
    theta = 0.5 * np.arctan2(2.0 * r, aqq - app)
    theta = np.where(theta > np.pi / 4, theta - np.pi / 2, theta)
    c = np.cos(theta)
    s = np.sin(theta)
    # J restricted to (p, q) is [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
    jpp = c
    jpq = s
    jqp = -s * np.conj(phase)
    jqq = c * np.conj(phase)

    colp = a[:, ps].copy()
    colq = a[:, qs]
    a[:, ps] = colp * jpp + colq * jqp
    a[:, qs] = colp * jpq + colq * jqq

    rowp = a[ps, :].copy()
    rowq = a[qs, :]
    a[ps, :] = np.conj(jpp)[:, None] * rowp + np.conj(jqp)[:, None] * rowq
    a[qs, :] = np.conj(jpq)[:, None] * rowp + np.conj(jqq)[:, None] * rowq
    a[qs, ps] = 0.0
    a[ps, qs] = 0.0

    vp = v[:, ps].copy()
    vq = v[:, qs]
    v[:, ps] = vp * jpp + vq * jqp
    v[:, qs] = vp * jpq + vq * jqq


def trace_norm(m, tol: float = VALIDATION_TOL) -> float:
    """Sum of the absolute eigenvalues of a Hermitian matrix."""
    return float(np.sum(np.abs(hermitian_eig(m, tol).eigenvalues)))


def is_unitary(u, tol: float = RECONSTRUCTION_TOL) -> bool:
    u = np.asarray(u, dtype=np.complex128)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.max(np.abs(dagger(u) @ u - np.eye(u.shape[0]))) <= tol)
