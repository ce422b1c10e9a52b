"""Negativity of bipartite states and its closed form for SC states.

For an SC state the partial transpose splits into ``1x1`` blocks on
``|k>|k>`` (eigenvalue ``coeff[k, k]``) and ``2x2`` blocks on
``{|k>|l>, |l>|k>}`` with eigenvalues ``+-|coeff[k, l]|``.  The negativity is
therefore ``sum_{k<l} |coeff[k, l]|``, which equals half the entrywise
distance between the state and its diagonal part.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .errors import NumericalInconsistency
from .linalg import alpha_norm, hermitian_eig
from .states import DensityMatrix, SchmidtCorrelatedState

NEGATIVE_CUTOFF = 1e-12
SUPPORT_TOL = 1e-12
ROUTE_AGREEMENT_TOL = 1e-10

Method = Literal["exact-eigen", "sc-closed-form", "trace-norm"]


@dataclass(frozen=True)
class NegativityReport:
    value: float
    method: Method
    negative_eigenvalues: tuple[float, ...] = ()
    # eigenvalues in [-cutoff, 0) are treated as zero
    cutoff: float = NEGATIVE_CUTOFF


@dataclass(frozen=True, eq=False)
class PtEigenPair:
    """Analytic eigenpair of the partial transpose of an SC state.

    ``label`` is ``("plus", k, l)``, ``("minus", k, l)`` or ``("diag", k, k)``;
    the sign in the label is the sign of the eigenvalue.  Vectors are left
    unnormalized.
    """

    eigenvalue: float
    vector: np.ndarray
    label: tuple[str, int, int]

    @property
    def normalized(self) -> bool:
        return abs(np.linalg.norm(self.vector) - 1.0) <= 1e-12


def partial_transpose(rho: DensityMatrix) -> np.ndarray:
    """Transpose on subsystem 2: ``out[(m1,n1),(m2,n2)] = in[(m1,n2),(m2,n1)]``."""
    n1, n2 = rho.dims.n1, rho.dims.n2
    t = rho.mat.reshape(n1, n2, n1, n2)
    return t.transpose(0, 3, 2, 1).reshape(n1 * n2, n1 * n2).copy()


def negativity_exact(rho: DensityMatrix, *, check_routes: bool = True) -> NegativityReport:
    """Negativity from the numerically diagonalized partial transpose.

    The trace-norm route ``(||rho^PT||_1 - tr rho^PT) / 2`` is evaluated on the
    same spectrum and must agree to 1e-10.
    """
    pt = partial_transpose(rho)
    w = hermitian_eig(pt).eigenvalues
    neg = w[w < -NEGATIVE_CUTOFF]
    value = abs(float(np.sum(neg)))
    if check_routes:
        via_trace = 0.5 * (float(np.sum(np.abs(w))) - float(np.real(np.trace(pt))))
        if abs(via_trace - value) > ROUTE_AGREEMENT_TOL:
            raise NumericalInconsistency(
                f"eigenvalue route {value!r} and trace-norm route {via_trace!r} disagree"
            )
    return NegativityReport(value=value, method="exact-eigen", negative_eigenvalues=tuple(neg.tolist()))


def negativity_trace_norm(rho: DensityMatrix) -> NegativityReport:
    pt = partial_transpose(rho)
    w = hermitian_eig(pt).eigenvalues
    value = 0.5 * (float(np.sum(np.abs(w))) - float(np.real(np.trace(pt))))
    neg = w[w < -NEGATIVE_CUTOFF]
    return NegativityReport(value=max(value, 0.0), method="trace-norm", negative_eigenvalues=tuple(neg.tolist()))


def negativity_sc_closed_form(sc: SchmidtCorrelatedState) -> NegativityReport:
    """``sum_{m<n} |coeff[m, n]|``, i.e. half the off-diagonal modulus sum."""
    upper = np.abs(sc.coeff[np.triu_indices(sc.n, k=1)])
    neg = -upper[upper > 0]
    return NegativityReport(
        value=float(np.sum(upper)), method="sc-closed-form", negative_eigenvalues=tuple(neg.tolist())
    )


def pt_eigensystem_sc(sc: SchmidtCorrelatedState) -> list[PtEigenPair]:
    """All ``N^2`` eigenpairs of the partial transpose, in closed form.

    For ``k < l`` with ``coeff[k, l] != 0`` the vectors
    ``-coeff[l, k]|k>|l> -+ |coeff[k, l]| |l>|k>`` carry eigenvalues
    ``+-|coeff[k, l]|``.  A vanishing coefficient gives the degenerate pair
    ``|k>|l>``, ``|l>|k>`` at eigenvalue zero.
    """
    n = sc.n
    c = sc.coeff
    pairs = []
    for k in range(n):
        v = np.zeros(n * n, dtype=np.complex128)
        v[k * n + k] = 1.0
        pairs.append(PtEigenPair(float(np.real(c[k, k])), v, ("diag", k, k)))
    for k in range(n):
        for l in range(k + 1, n):
            kl, lk = k * n + l, l * n + k
            mod = abs(c[k, l])
            plus = np.zeros(n * n, dtype=np.complex128)
            minus = np.zeros(n * n, dtype=np.complex128)
            if mod > SUPPORT_TOL:
                plus[kl], plus[lk] = -c[l, k], -mod
                minus[kl], minus[lk] = -c[l, k], mod
                pairs.append(PtEigenPair(float(mod), plus, ("plus", k, l)))
                pairs.append(PtEigenPair(-float(mod), minus, ("minus", k, l)))
            else:
                plus[lk] = 1.0
                minus[kl] = 1.0
                pairs.append(PtEigenPair(0.0, plus, ("plus", k, l)))
                pairs.append(PtEigenPair(0.0, minus, ("minus", k, l)))
    return pairs


def diagonal_projection(rho: DensityMatrix) -> DensityMatrix:
    """Zero every off-diagonal entry; the result is a separable product-diagonal state."""
    return DensityMatrix(dims=rho.dims, mat=np.diag(np.diag(rho.mat)).astype(np.complex128))


def distance_to_diagonal(rho: DensityMatrix) -> float:
    """Entrywise (alpha-norm) distance to the diagonal projection."""
    return alpha_norm(rho.mat - diagonal_projection(rho).mat)


def band_bound(sc: SchmidtCorrelatedState) -> tuple[int, float]:
    """Bandwidth of the coefficient support and the resulting negativity bound."""
    m, n = np.nonzero(np.abs(sc.coeff) > SUPPORT_TOL)
    delta = int(np.max(np.abs(m - n))) if m.size else 0
    return delta, float(delta)


@dataclass(frozen=True)
class BandChain:
    """Successive upper bounds for the off-diagonal modulus sum of a banded SC state.

    ``off_diagonal <= sqrt_bound <= mean_bound <= 2 * delta``, the sums running
    over off-diagonal index pairs inside the band.
    """

    delta: int
    off_diagonal: float
    sqrt_bound: float
    mean_bound: float
    ceiling: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "ceiling", 2.0 * self.delta)

    def holds(self, slack: float = 1e-12) -> bool:
        return (
            self.off_diagonal <= self.sqrt_bound + slack
            and self.sqrt_bound <= self.mean_bound + slack
            and self.mean_bound <= self.ceiling + slack
        )


def band_chain(sc: SchmidtCorrelatedState) -> BandChain:
    delta, _ = band_bound(sc)
    n = sc.n
    p = np.clip(np.real(np.diag(sc.coeff)), 0.0, None)
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    band = (np.abs(i - j) <= delta) & (i != j)
    off = float(np.sum(np.abs(sc.coeff)[i != j]))
    sqrt_bound = float(np.sum(np.sqrt(np.outer(p, p))[band]))
    mean_bound = float(np.sum((0.5 * (p[:, None] + p[None, :]))[band]))
    return BandChain(delta=delta, off_diagonal=off, sqrt_bound=sqrt_bound, mean_bound=mean_bound)


def is_entangled(rho: DensityMatrix, tol: float = 1e-9) -> bool:
    """True when the negativity certifies entanglement.

    ``False`` is not a separability claim except for SC states.
    """
    return negativity_exact(rho).value > tol
