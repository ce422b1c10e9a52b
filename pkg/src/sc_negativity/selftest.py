"""Embedded invariant suites run by ``sc-negativity selftest``."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .dynamics import AdditiveObservable, evolve_closed_form, integrate_rk4, random_model
from .linalg import hermitian_eig
from .mixtures import component_negativity_sum, mixture_negativity_bound, random_mixture, assemble_mixture
from .negativity import (
    distance_to_diagonal,
    negativity_exact,
    negativity_sc_closed_form,
    partial_transpose,
    pt_eigensystem_sc,
)
from .states import random_sc, sc_embed


@dataclass(frozen=True)
class SuiteResult:
    name: str
    cases: int
    max_error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.max_error <= self.tolerance)


def _sc_distance_case(seed: int) -> float:
    rng = np.random.default_rng(seed)
    sc = random_sc(int(rng.integers(2, 7)), int(rng.integers(1, 5)), seed)
    rho = sc_embed(sc)
    exact = negativity_exact(rho).value
    return max(abs(exact - 0.5 * distance_to_diagonal(rho)), abs(exact - negativity_sc_closed_form(sc).value))


def _eigensystem_case(seed: int) -> float:
    rng = np.random.default_rng(seed)
    sc = random_sc(int(rng.integers(2, 6)), int(rng.integers(1, 4)), seed)
    pt = partial_transpose(sc_embed(sc))
    pairs = pt_eigensystem_sc(sc)
    if len(pairs) != sc.n**2:
        return np.inf
    analytic = np.sort([p.eigenvalue for p in pairs])
    numeric = hermitian_eig(pt).eigenvalues
    residual = max(float(np.linalg.norm(pt @ p.vector - p.eigenvalue * p.vector)) for p in pairs)
    return max(float(np.max(np.abs(analytic - numeric))), residual)


def _mixture_bound_case(seed: int) -> float:
    mix = random_mixture(seed)
    rho = assemble_mixture(mix)
    bound = mixture_negativity_bound(mix)
    excess = negativity_exact(rho).value - bound
    return max(excess, abs(bound - component_negativity_sum(mix)), 0.0)


def _rk4_case(seed: int) -> float:
    rng = np.random.default_rng(seed)
    model = random_model(int(rng.integers(2, 5)), seed)
    rho0 = sc_embed(evolve_closed_form(model, 0.0))
    obs = AdditiveObservable(np.diag(model.spectrum1), np.diag(model.spectrum2))
    numeric = integrate_rk4(rho0, obs, 1.0, 1e-3).mat
    exact = sc_embed(evolve_closed_form(model, 1.0)).mat
    return float(np.max(np.abs(numeric - exact)))


SUITES: tuple[tuple[str, Callable[[int], float], int, float], ...] = (
    ("sc-distance-equality", _sc_distance_case, 100, 1e-10),
    ("eigensystem-completeness", _eigensystem_case, 50, 1e-10),
    ("mixture-bound", _mixture_bound_case, 50, 1e-10),
    ("rk4-vs-closed-form", _rk4_case, 10, 1e-6),
)


def run_selftest(seed: int = 0, jobs: int = 1, corrupt: Optional[str] = None) -> list[SuiteResult]:
    """Run every suite; ``corrupt`` names a suite whose errors are inflated (negative control)."""
    results = []
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        for name, case, count, tol in SUITES:
            seeds = [seed * 100_003 + i for i in range(count)]
            errors = list(pool.map(case, seeds)) if pool else [case(s) for s in seeds]
            worst = float(max(errors))
            if corrupt == name:
                worst += 1.0
            results.append(SuiteResult(name, count, worst, tol))
    finally:
        if pool:
            pool.shutdown()
    return results


def format_table(results: list[SuiteResult]) -> str:
    lines = [f"{'suite':<26} {'cases':>5} {'max error':>12} {'tolerance':>10}  result"]
    for r in results:
        lines.append(
            f"{r.name:<26} {r.cases:>5} {r.max_error:>12.6g} {r.tolerance:>10.1g}  {'PASS' if r.passed else 'FAIL'}"
        )
    lines.append(f"overall: {'PASS' if all(r.passed for r in results) else 'FAIL'}")
    return "\n".join(lines) + "\n"
