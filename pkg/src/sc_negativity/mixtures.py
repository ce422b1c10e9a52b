"""Mixtures of lambda-SC components.

A component lives on the span of ``|m>|f(m)>`` for an injective partial map
``f`` between the local bases.  Its coefficient matrix uses the SC convention:
``coeff[a, b]`` is the amplitude of ``|pair_b><pair_a|``, indices running over
the map's pair list.  When no two maps share a pair, components never touch
the same matrix entry and the entrywise norm of the mixture is additive.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np

from .errors import (
    BadWeights,
    DegenerateSpectrum,
    DimensionMismatch,
    DisjointnessViolated,
    ValidationFailed,
)
from .linalg import VALIDATION_TOL, alpha_norm, as_matrix
from .negativity import distance_to_diagonal
from .states import (
    WEIGHT_TOL,
    BipartiteDims,
    DensityMatrix,
    random_simplex,
    random_unit_vector,
    validate_density,
    validate_sc,
)

SUM_GROUPING_TOL = 1e-9


@dataclass(frozen=True)
class LambdaMap:
    label: Hashable
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple((int(m), int(n)) for m, n in self.pairs)
        ms = [m for m, _ in pairs]
        ns = [n for _, n in pairs]
        if len(set(ms)) != len(ms) or len(set(ns)) != len(ns):
            raise ValidationFailed(f"map {self.label!r} is not injective: {pairs}")
        object.__setattr__(self, "pairs", pairs)

    def __len__(self):
        return len(self.pairs)


@dataclass(frozen=True, eq=False)
class LambdaComponent:
    map: LambdaMap
    weight: float
    coeff: np.ndarray


@dataclass(frozen=True, eq=False)
class LambdaMixture:
    dims: BipartiteDims
    components: tuple[LambdaComponent, ...]


def disjointness_conflicts(maps: Sequence[LambdaMap]) -> list[tuple[int, int, int, int]]:
    """``(i, j, m, n)`` for every pair ``(m, n)`` claimed by maps ``i < j``."""
    owner: dict[tuple[int, int], int] = {}
    conflicts = []
    for j, lm in enumerate(maps):
        for pair in lm.pairs:
            if pair in owner:
                conflicts.append((owner[pair], j, *pair))
            else:
                owner[pair] = j
    return conflicts


def validate_disjointness(maps: Sequence[LambdaMap]) -> bool:
    """True iff distinct maps never send the same ``m`` to the same ``n``."""
    return not disjointness_conflicts(maps)


def lambda_maps_from_spectra(spectrum1: Sequence[float], spectrum2: Sequence[float]) -> list[LambdaMap]:
    """Group product-basis pairs by the eigenvalue ``a1_m + a2_n`` of the additive observable.

    Sums within 1e-9 of each other are grouped; labels are the group's first
    (smallest) sum.  Maps come out in ascending label order.
    """
    s1 = np.asarray(spectrum1, dtype=float).reshape(-1)
    s2 = np.asarray(spectrum2, dtype=float).reshape(-1)
    for name, s in (("spectrum1", s1), ("spectrum2", s2)):
        gaps = np.abs(s[:, None] - s[None, :]) + np.eye(s.size)
        if s.size > 1 and np.min(gaps) <= 1e-12:
            raise DegenerateSpectrum(f"{name} has repeated eigenvalues: {s.tolist()}")
    entries = sorted(
        ((s1[m] + s2[n], m, n) for m in range(s1.size) for n in range(s2.size)),
        key=lambda e: (e[0], e[1]),
    )
    groups: list[tuple[float, list[tuple[int, int]]]] = []
    for lam, m, n in entries:
        if groups and lam - groups[-1][0] <= SUM_GROUPING_TOL:
            groups[-1][1].append((m, n))
        else:
            groups.append((lam, [(m, n)]))
    return [LambdaMap(label=lam, pairs=tuple(sorted(p))) for lam, p in groups]


def make_mixture(dims: BipartiteDims, components: Sequence[LambdaComponent], tol: float = VALIDATION_TOL) -> LambdaMixture:
    """Validate weights, map ranges, per-component states and disjointness."""
    weights = np.array([c.weight for c in components], dtype=float)
    if weights.size == 0 or np.any(weights < 0) or abs(weights.sum() - 1.0) > WEIGHT_TOL:
        raise BadWeights(f"component weights must be nonnegative and sum to 1: {weights.tolist()}")
    checked = []
    for i, comp in enumerate(components):
        for m, n in comp.map.pairs:
            if not (0 <= m < dims.n1 and 0 <= n < dims.n2):
                raise DimensionMismatch(f"component {i}: pair ({m},{n}) outside {dims.n1}x{dims.n2}")
        coeff = as_matrix(comp.coeff)
        if coeff.shape[0] != len(comp.map):
            raise DimensionMismatch(
                f"component {i}: coefficient matrix of size {coeff.shape[0]} for {len(comp.map)} pairs"
            )
        validate_sc(coeff, tol)
        checked.append(LambdaComponent(comp.map, float(comp.weight), coeff))
    conflicts = disjointness_conflicts([c.map for c in checked])
    if conflicts:
        raise DisjointnessViolated(conflicts)
    return LambdaMixture(dims=dims, components=tuple(checked))


def embed_component(dims: BipartiteDims, comp: LambdaComponent) -> np.ndarray:
    """Unweighted component placed on its support pattern."""
    idx = np.array([dims.flat(m, n) for m, n in comp.map.pairs], dtype=np.intp)
    out = np.zeros((dims.total, dims.total), dtype=np.complex128)
    out[np.ix_(idx, idx)] = np.asarray(comp.coeff).T
    return out


def assemble_mixture(mix: LambdaMixture) -> DensityMatrix:
    conflicts = disjointness_conflicts([c.map for c in mix.components])
    if conflicts:
        raise DisjointnessViolated(conflicts)
    rho = sum(c.weight * embed_component(mix.dims, c) for c in mix.components)
    return validate_density(rho, mix.dims)


def component_negativity_sum(mix: LambdaMixture) -> float:
    """Weighted sum of the closed-form negativities of the components."""
    total = 0.0
    for c in mix.components:
        coeff = np.asarray(c.coeff)
        total += c.weight * float(np.sum(np.abs(coeff[np.triu_indices(coeff.shape[0], k=1)])))
    return total


def mixture_negativity_bound(mix: LambdaMixture) -> float:
    """Half the entrywise distance of the mixture from its diagonal part."""
    return 0.5 * distance_to_diagonal(assemble_mixture(mix))


def norm_additivity_residual(mix: LambdaMixture) -> float:
    """Largest entrywise gap between ``sum_l p_l |rho_l|`` and ``|sum_l p_l rho_l|``."""
    parts = [c.weight * embed_component(mix.dims, c) for c in mix.components]
    return float(np.max(np.abs(sum(np.abs(p) for p in parts) - np.abs(sum(parts)))))


def norm_additivity_gap(mix: LambdaMixture) -> float:
    parts = [c.weight * embed_component(mix.dims, c) for c in mix.components]
    return abs(sum(alpha_norm(p) for p in parts) - alpha_norm(sum(parts)))


def random_coeff(rng: np.random.Generator, k: int, rank: int) -> np.ndarray:
    vecs = [random_unit_vector(rng, k) for _ in range(rank)]
    w = random_simplex(rng, rank)
    coeff = sum(wi * np.outer(np.conj(v), v) for wi, v in zip(w, vecs))
    return 0.5 * (coeff + np.conj(coeff).T)


def random_integer_spectrum(rng: np.random.Generator, n: int, span: int = 6) -> np.ndarray:
    """Distinct integers, so that sums from the two sides collide often."""
    return np.sort(rng.choice(np.arange(span), size=n, replace=False)).astype(float)


def random_mixture(seed: int, max_dim: int = 4, max_components: int = 3) -> LambdaMixture:
    """Random mixture over the lambda-maps of random non-degenerate spectra."""
    rng = np.random.default_rng(seed)
    n1 = int(rng.integers(2, max_dim + 1))
    n2 = int(rng.integers(2, max_dim + 1))
    maps = lambda_maps_from_spectra(random_integer_spectrum(rng, n1), random_integer_spectrum(rng, n2))
    big = [m for m in maps if len(m) > 1] or maps
    k = int(rng.integers(1, min(max_components, len(maps)) + 1))
    chosen_idx = rng.choice(len(big), size=min(k, len(big)), replace=False)
    chosen = [big[i] for i in sorted(chosen_idx)]
    weights = random_simplex(rng, len(chosen))
    comps = [
        LambdaComponent(m, float(w), random_coeff(rng, len(m), int(rng.integers(1, len(m) + 1))))
        for m, w in zip(chosen, weights)
    ]
    return make_mixture(BipartiteDims(n1, n2), comps)
