"""Pure dephasing with an additive conserved observable.

The generator is ``d rho/dt = -[A1,[A1,rho]] - [A2,[A2,rho]]`` with ``A1``
and ``A2`` acting on their own factor.  Starting from a pure Schmidt state in
the joint eigenbasis, every coherence ``(m, n)`` decays with exponent
``(a1_m - a1_n)^2 + (a2_m - a2_n)^2`` and the state stays Schmidt-correlated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, ValidationFailed
from .linalg import as_matrix, hermiticity_defect, kron
from .states import (
    BipartiteDims,
    DensityMatrix,
    PureSchmidtVector,
    SchmidtCorrelatedState,
    random_unit_vector,
    validate_density,
)

RK4_VALIDATION_TOL = 1e-6
RK4_VALIDATE_EVERY = 100


@dataclass(frozen=True, eq=False)
class DephasingModel:
    spectrum1: np.ndarray
    spectrum2: np.ndarray
    initial: PureSchmidtVector

    def __post_init__(self):
        s1 = np.asarray(self.spectrum1, dtype=float).reshape(-1)
        s2 = np.asarray(self.spectrum2, dtype=float).reshape(-1)
        if not (s1.size == s2.size == self.initial.n):
            raise DimensionMismatch(
                f"spectra of length {s1.size} and {s2.size} do not match {self.initial.n} amplitudes"
            )
        if not (np.all(np.isfinite(s1)) and np.all(np.isfinite(s2))):
            raise ValidationFailed("spectra must be finite")
        object.__setattr__(self, "spectrum1", s1)
        object.__setattr__(self, "spectrum2", s2)

    @property
    def n(self) -> int:
        return self.initial.n

    def decay_exponents(self) -> np.ndarray:
        d1 = self.spectrum1[:, None] - self.spectrum1[None, :]
        d2 = self.spectrum2[:, None] - self.spectrum2[None, :]
        return d1**2 + d2**2

    def observable(self) -> "AdditiveObservable":
        return AdditiveObservable(np.diag(self.spectrum1), np.diag(self.spectrum2))


@dataclass(frozen=True, eq=False)
class AdditiveObservable:
    """``A = A1 (x) I + I (x) A2``."""

    a1: np.ndarray
    a2: np.ndarray

    def __post_init__(self):
        a1, a2 = as_matrix(self.a1), as_matrix(self.a2)
        for name, a in (("a1", a1), ("a2", a2)):
            if hermiticity_defect(a) > 1e-9:
                raise ValidationFailed(f"{name} is not Hermitian")
        object.__setattr__(self, "a1", a1)
        object.__setattr__(self, "a2", a2)

    @property
    def dims(self) -> BipartiteDims:
        return BipartiteDims(self.a1.shape[0], self.a2.shape[0])

    def lifted(self) -> tuple[np.ndarray, np.ndarray]:
        eye1 = np.eye(self.a1.shape[0])
        eye2 = np.eye(self.a2.shape[0])
        return kron(self.a1, eye2), kron(eye1, self.a2)

    def total(self) -> np.ndarray:
        big1, big2 = self.lifted()
        return big1 + big2


@dataclass(frozen=True)
class TimeSeries:
    times: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.times) != len(self.values):
            raise ValueError("times and values differ in length")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise ValueError("times must be strictly increasing")


def evolve_closed_form(model: DephasingModel, t: float) -> SchmidtCorrelatedState:
    """SC coefficients at time ``t``: the initial coherences times ``exp(-exponent * t)``."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    c = model.initial.amps
    # same convention as sc_from_mixture: coeff[m, n] = conj(c_m) c_n
    coeff = np.outer(np.conj(c), c) * np.exp(-model.decay_exponents() * t)
    return SchmidtCorrelatedState(coeff=coeff)


def negativity_time_series(model: DephasingModel, times: Sequence[float]) -> TimeSeries:
    times = [float(t) for t in times]
    if any(t < 0 for t in times):
        raise ValueError("times must be nonnegative")
    mod = np.abs(model.initial.amps)
    weight = np.outer(mod, mod)
    iu = np.triu_indices(model.n, k=1)
    w, g = weight[iu], model.decay_exponents()[iu]
    values = [float(np.sum(w * np.exp(-g * t))) for t in times]
    return TimeSeries(tuple(times), tuple(values))


def liouville_rhs(rho, obs: AdditiveObservable) -> np.ndarray:
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (obs.dims.total, obs.dims.total):
        raise DimensionMismatch(f"state of shape {rho.shape} does not match observable dims {obs.dims}")
    out = np.zeros_like(rho)
    for a in obs.lifted():
        inner = a @ rho - rho @ a
        out -= a @ inner - inner @ a
    return out


def _rk4_steps(rho: np.ndarray, obs: AdditiveObservable, h: float, steps: int, dims: BipartiteDims):
    big1, big2 = obs.lifted()

    def rhs(x):
        out = np.zeros_like(x)
        for a in (big1, big2):
            inner = a @ x - x @ a
            out -= a @ inner - inner @ a
        return out

    for step in range(1, steps + 1):
        k1 = rhs(rho)
        k2 = rhs(rho + 0.5 * h * k1)
        k3 = rhs(rho + 0.5 * h * k2)
        k4 = rhs(rho + h * k3)
        rho = rho + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if step % RK4_VALIDATE_EVERY == 0:
            validate_density(rho, dims, RK4_VALIDATION_TOL)
    return rho


def integrate_rk4(rho0: DensityMatrix, obs: AdditiveObservable, t: float, dt: float) -> DensityMatrix:
    """Classical RK4 from 0 to ``t``.

    The step is ``t / ceil(t / dt)`` so the grid lands on ``t`` exactly.  Keep
    ``dt`` below about ``0.01 / max|spectrum|^2``.
    """
    if dt <= 0 or t < 0:
        raise ValueError("need dt > 0 and t >= 0")
    return rk4_trajectory(rho0, obs, [t], dt)[0]


def rk4_trajectory(rho0: DensityMatrix, obs: AdditiveObservable, times: Iterable[float], dt: float) -> list[DensityMatrix]:
    """RK4 states at each of the ascending ``times`` (measured from 0)."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    if rho0.dims != obs.dims:
        raise DimensionMismatch(f"state dims {rho0.dims} differ from observable dims {obs.dims}")
    out = []
    rho = rho0.mat.copy()
    now = 0.0
    for t in times:
        span = float(t) - now
        if span < 0:
            raise ValueError("times must be ascending and nonnegative")
        if span > 0:
            steps = max(1, math.ceil(span / dt - 1e-9))
            rho = _rk4_steps(rho, obs, span / steps, steps, rho0.dims)
        now = float(t)
        out.append(validate_density(rho, rho0.dims, RK4_VALIDATION_TOL))
    return out


def conservation_residual(series: Sequence[DensityMatrix], obs: AdditiveObservable) -> float:
    """Largest drift of ``tr(A rho(t))`` from its initial value."""
    if not series:
        return 0.0
    a = obs.total()
    vals = [np.trace(a @ r.mat) for r in series]
    return float(max(abs(v - vals[0]) for v in vals))


def random_model(n: int, seed: int, spread: float = 2.0) -> DephasingModel:
    rng = np.random.default_rng(seed)
    return DephasingModel(
        spectrum1=rng.uniform(0.0, spread, n),
        spectrum2=rng.uniform(0.0, spread, n),
        initial=PureSchmidtVector(random_unit_vector(rng, n)),
    )


def bell_model() -> DephasingModel:
    return DephasingModel([0.0, 1.0], [0.0, 1.0], PureSchmidtVector(np.full(2, 1 / math.sqrt(2))))
