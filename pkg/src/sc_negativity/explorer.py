"""Search over local bases for the smallest half off-diagonal modulus sum.

Because ``||X||_1 <= sum_ij |X_ij|`` and partial transposition only permutes
entries, the negativity can never exceed half the off-diagonal sum in any
product basis.  The search below looks for counterexamples anyway: it is the
empirical side of that comparison, and ``satisfied`` only means no violation
was found at the bound actually reached.

The minimization is coordinate descent over two-index rotations
``G(theta, phi)`` acting on one local factor, with ``phi`` fixed to 0 (real
Givens rotation) or pi/2 (imaginary one).  Diagonal phases leave the
objective unchanged, so these two generators per pair suffice.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
from numba import njit

from .errors import NotUnitary
from .linalg import dagger, is_unitary, kron
from .negativity import negativity_exact, negativity_sc_closed_form
from .states import DensityMatrix, SchmidtCorrelatedState, sc_embed

SATISFIED_SLACK = 1e-8
SWEEP_IMPROVEMENT_TOL = 1e-10
MAX_SWEEPS = 500
GRID_POINTS = 24
GOLDEN_TOL = 1e-10
DEFAULT_RESTARTS = 20
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True, eq=False)
class LocalBasisPair:
    u1: np.ndarray
    u2: np.ndarray

    def __post_init__(self):
        for name in ("u1", "u2"):
            u = np.asarray(getattr(self, name), dtype=np.complex128)
            if not is_unitary(u):
                raise NotUnitary(f"{name} is not unitary to 1e-10")
            object.__setattr__(self, name, u)

    @classmethod
    def identity(cls, n1: int, n2: int) -> "LocalBasisPair":
        return cls(np.eye(n1, dtype=np.complex128), np.eye(n2, dtype=np.complex128))

    def product(self) -> np.ndarray:
        return kron(self.u1, self.u2)


@dataclass(frozen=True, eq=False)
class ConjectureReport:
    exact_negativity: float
    best_bound: float
    best_basis: LocalBasisPair
    trials: int
    initial_bound: float
    restart_values: tuple[float, ...] = field(default=())

    @property
    def satisfied(self) -> bool:
        return self.exact_negativity <= self.best_bound + SATISFIED_SLACK

    def to_dict(self) -> dict:
        return {
            "exact": self.exact_negativity,
            "best_bound": self.best_bound,
            "satisfied": self.satisfied,
            "trials": self.trials,
            "basis": {
                "u1": _encode(self.best_basis.u1),
                "u2": _encode(self.best_basis.u2),
            },
        }


def _encode(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def _half_off_sum(x: np.ndarray) -> float:
    return 0.5 * float(np.sum(np.abs(x)) - np.sum(np.abs(np.diag(x))))


def local_basis_distance(rho: DensityMatrix, basis: LocalBasisPair) -> float:
    """Half the off-diagonal modulus sum of ``rho`` expressed in the given local bases."""
    if basis.u1.shape[0] != rho.dims.n1 or basis.u2.shape[0] != rho.dims.n2:
        raise NotUnitary("basis dimensions do not match the state")
    u = basis.product()
    return _half_off_sum(u @ rho.mat @ dagger(u))


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Gram-Schmidt (via QR) of a complex Gaussian matrix, phases fixed by R's diagonal."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def _rotation(n: int, p: int, q: int, theta: float, phi: float) -> np.ndarray:
    g = np.eye(n, dtype=np.complex128)
    c, s = math.cos(theta), math.sin(theta)
    e = complex(math.cos(phi), math.sin(phi))
    g[p, p] = c
    g[p, q] = -e * s
    g[q, p] = np.conj(e) * s
    g[q, q] = c
    return g


@njit(cache=True)
def _trig_abs_sum(coefs: np.ndarray, theta: float) -> float:
    c1, s1 = math.cos(theta), math.sin(theta)
    c2, s2 = math.cos(2.0 * theta), math.sin(2.0 * theta)
    total = 0.0
    for j in range(coefs.shape[1]):
        total += abs(coefs[0, j] + c1 * coefs[1, j] + s1 * coefs[2, j] + c2 * coefs[3, j] + s2 * coefs[4, j])
    return 0.5 * total


@njit(cache=True)
def _minimize_trig_abs(coefs: np.ndarray, grid_points: int, tol: float):
    """Grid scan over one period, then golden-section inside the best cell."""
    step = math.pi / grid_points
    best_theta, best_val = 0.0, _trig_abs_sum(coefs, 0.0)
    k_best = grid_points // 2
    for k in range(grid_points):
        theta = -0.5 * math.pi + step * k
        v = _trig_abs_sum(coefs, theta)
        if v < best_val:
            best_theta, best_val, k_best = theta, v, k
    lo = -0.5 * math.pi + step * (k_best - 1)
    hi = -0.5 * math.pi + step * (k_best + 1)
    x1 = hi - _INV_PHI * (hi - lo)
    x2 = lo + _INV_PHI * (hi - lo)
    f1, f2 = _trig_abs_sum(coefs, x1), _trig_abs_sum(coefs, x2)
    while hi - lo > tol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INV_PHI * (hi - lo)
            f1 = _trig_abs_sum(coefs, x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INV_PHI * (hi - lo)
            f2 = _trig_abs_sum(coefs, x2)
    if f1 < best_val:
        best_theta, best_val = x1, f1
    if f2 < best_val:
        best_theta, best_val = x2, f2
    return best_theta, best_val


class _Descent:
    """Coordinate descent state for one restart."""

    def __init__(self, rho: DensityMatrix, u1: np.ndarray, u2: np.ndarray):
        self.rho = rho.mat
        self.n1, self.n2 = rho.dims.n1, rho.dims.n2
        self.u1, self.u2 = u1.copy(), u2.copy()
        self.off = ~np.eye(self.n1 * self.n2, dtype=bool)
        self._cache = {}
        self._refresh()

    def _refresh(self):
        u = kron(self.u1, self.u2)
        self.current = u @ self.rho @ dagger(u)
        self.value = _half_off_sum(self.current)

    def _lift(self, factor: int, g: np.ndarray) -> np.ndarray:
        if factor == 1:
            return np.kron(g, np.eye(self.n2))
        return np.kron(np.eye(self.n1), g)

    def _generators(self, factor: int, p: int, q: int, phi: float):
        key = (factor, p, q, phi)
        if key not in self._cache:
            n = self.n1 if factor == 1 else self.n2
            fixed = np.eye(n, dtype=np.complex128)
            fixed[p, p] = fixed[q, q] = 0.0
            block = np.zeros((n, n), dtype=np.complex128)
            block[p, p] = block[q, q] = 1.0
            e = complex(math.cos(phi), math.sin(phi))
            skew = np.zeros((n, n), dtype=np.complex128)
            skew[p, q] = -e
            skew[q, p] = np.conj(e)
            self._cache[key] = tuple(self._lift(factor, g) for g in (fixed, block, skew))
        return self._cache[key]

    def _line_search(self, factor: int, p: int, q: int, phi: float) -> None:
        x = self.current
        # G(theta) = L0 + cos(theta) L1 + sin(theta) K, so every entry of
        # G X G^H is a trigonometric polynomial of degree 2 in theta
        l0, l1, k = self._generators(factor, p, q, phi)
        a0, a1, ak = l0 @ x, l1 @ x, k @ x
        l0h, l1h, kh = dagger(l0), dagger(l1), dagger(k)
        c11, ckk = a1 @ l1h, ak @ kh
        c1k = a1 @ kh + ak @ l1h
        coefs = np.stack([
            (a0 @ l0h + 0.5 * (c11 + ckk))[self.off],
            (a0 @ l1h + a1 @ l0h)[self.off],
            (a0 @ kh + ak @ l0h)[self.off],
            (0.5 * (c11 - ckk))[self.off],
            (0.5 * c1k)[self.off],
        ])
        best_theta, best_val = _minimize_trig_abs(coefs, GRID_POINTS, GOLDEN_TOL)
        if best_val < self.value:
            n = self.n1 if factor == 1 else self.n2
            g = _rotation(n, p, q, best_theta, phi)
            if factor == 1:
                self.u1 = g @ self.u1
            else:
                self.u2 = g @ self.u2
            big = self._lift(factor, g)
            self.current = big @ x @ dagger(big)
            self.value = _half_off_sum(self.current)

    def sweep(self) -> None:
        for factor, n in ((1, self.n1), (2, self.n2)):
            for p in range(n):
                for q in range(p + 1, n):
                    for phi in (0.0, 0.5 * math.pi):
                        self._line_search(factor, p, q, phi)
        # rebuild from the unitaries to keep rounding drift out of the iterate
        self._refresh()

    def run(self, max_sweeps: int = MAX_SWEEPS) -> float:
        for _ in range(max_sweeps):
            start = self.value
            self.sweep()
            if start - self.value < SWEEP_IMPROVEMENT_TOL:
                break
        return self.value


def _restart(args) -> tuple[float, np.ndarray, np.ndarray]:
    rho, seed_seq, from_identity = args
    if from_identity:
        u1 = np.eye(rho.dims.n1, dtype=np.complex128)
        u2 = np.eye(rho.dims.n2, dtype=np.complex128)
    else:
        rng = np.random.default_rng(seed_seq)
        u1 = random_unitary(rng, rho.dims.n1)
        u2 = random_unitary(rng, rho.dims.n2)
    d = _Descent(rho, u1, u2)
    value = d.run()
    return value, d.u1, d.u2


def minimize_over_local_bases(
    rho: DensityMatrix, restarts: int = DEFAULT_RESTARTS, seed: int = 0, *, jobs: int = 1
) -> ConjectureReport:
    """Multi-restart minimization of ``local_basis_distance`` over product unitaries.

    Restart 0 starts from the computational basis, so the result is never
    worse than the starting bound; the rest start from random product
    unitaries drawn from independent child streams of ``seed``.
    """
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    children = np.random.SeedSequence(seed).spawn(restarts)
    work = [(rho, children[i], i == 0) for i in range(restarts)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_restart, work))
    else:
        results = [_restart(w) for w in work]
    best = min(range(restarts), key=lambda i: (results[i][0], i))
    value, u1, u2 = results[best]
    return ConjectureReport(
        exact_negativity=negativity_exact(rho).value,
        best_bound=float(value),
        best_basis=LocalBasisPair(u1, u2),
        trials=restarts,
        initial_bound=local_basis_distance(rho, LocalBasisPair.identity(rho.dims.n1, rho.dims.n2)),
        restart_values=tuple(float(r[0]) for r in results),
    )


def sc_minimality_check(sc: SchmidtCorrelatedState, restarts: int = DEFAULT_RESTARTS, seed: int = 0, *, jobs: int = 1) -> float:
    """``best_bound`` minus the closed-form negativity; negative values would beat the Schmidt basis."""
    report = minimize_over_local_bases(sc_embed(sc), restarts, seed, jobs=jobs)
    return report.best_bound - negativity_sc_closed_form(sc).value


def write_counterexample(path, rho: DensityMatrix, report: ConjectureReport, label: Optional[str] = None) -> Path:
    """Persist a state that violated the bound, with the basis that achieved it."""
    from .io import encode_state, write_atomic

    payload = {"label": label, "state": encode_state(rho), "report": report.to_dict()}
    return write_atomic(path, json.dumps(payload, indent=2) + "\n")
