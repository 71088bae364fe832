"""Second fundamental form, mean curvature vector and the Gauss-map Laplacian terms.

Conventions: ``h[alpha, j, l] = <n_alpha, (tau_l . ∂) tau_j>``, shape bivectors
``S_j = sum_{l, alpha} h[alpha, j, l] tau_l ^ n_alpha`` and the mean curvature
vector ``H = sum_alpha (sum_l h[alpha, l, l]) n_alpha`` (no 1/m factor).  With
outward normals on convex hypersurfaces ``H`` points inward.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .algebra import Multivector, commutator, grade_projection, inner_product
from .blades import blade_inverse
from .manifold import (
    DEFAULT_FD,
    Chart,
    FDConfig,
    FramePoint,
    MultivectorField,
    _central,
    _tangent_frame,
    curl,
    directional_derivative,
    frame_at,
    gauss_map,
    laplace_beltrami,
    normal_frame_field,
    vector_derivative,
)

log = logging.getLogger(__name__)


class CodimensionError(ValueError):
    """Operation needs a different codimension."""


@dataclass(frozen=True)
class SecondFundamentalData:
    h: np.ndarray  # (k, m, m), indexed [alpha, j, l]
    S: tuple[Multivector, ...]
    H: np.ndarray
    B2: float
    S4: Multivector
    frame: FramePoint

    @property
    def symmetry_defect(self) -> float:
        return float(np.max(np.abs(self.h - self.h.transpose(0, 2, 1)), initial=0.0))


def second_fundamental(chart: Chart, u, cfg: FDConfig = DEFAULT_FD) -> SecondFundamentalData:
    u = np.asarray(u, dtype=float)
    fp = frame_at(chart, u, cfg)
    m, N = chart.m, chart.N

    def frame_flat(v):
        return _tangent_frame(chart.jacobian(v), cfg.rank_tol).ravel()

    # dtau[l, j] = (tau_l . ∂) tau_j
    dtau = np.array([
        _central(frame_flat, chart, u, fp.pullback(fp.tangent[l]), cfg.h1, cfg.richardson).reshape(m, N)
        for l in range(m)
    ])
    h = np.einsum("an,ljn->ajl", fp.normal, dtau)
    tau = [Multivector.vector(t) for t in fp.tangent]
    nrm = [Multivector.vector(n) for n in fp.normal]
    S = []
    for j in range(m):
        Sj = Multivector.zero(N)
        for l in range(m):
            for a in range(fp.k):
                Sj = Sj + h[a, j, l] * (tau[l] ^ nrm[a])
        S.append(Sj)
    H = np.einsum("all,an->n", h, fp.normal) if fp.k else np.zeros(N)
    S4 = Multivector.zero(N)
    for Sj in S:
        S4 = S4 + (Sj ^ Sj)
    return SecondFundamentalData(h, tuple(S), H, float(np.sum(h * h)), S4, fp)


def shape_bivectors_via_gauss(chart: Chart, u, cfg: FDConfig = DEFAULT_FD) -> list[Multivector]:
    """``S_j = -((tau_j . ∂) T) T^-1`` from the derivative of the Gauss map."""
    fp = frame_at(chart, u, cfg)
    T = gauss_map(chart)
    Tinv = blade_inverse(T(u))
    return [-(directional_derivative(T, u, t, cfg, fp) * Tinv) for t in fp.tangent]


def mean_curvature(chart: Chart, u, cfg: FDConfig = DEFAULT_FD) -> np.ndarray:
    """H from the trace of the second fundamental form."""
    return second_fundamental(chart, u, cfg).H


def mean_curvature_via_gauss(chart: Chart, u, cfg: FDConfig = DEFAULT_FD) -> np.ndarray:
    """H as the vector part of ``-(∂T) T^-1``."""
    T = gauss_map(chart)
    full = -(vector_derivative(T, u, cfg) * blade_inverse(T(u)))
    off = (full - grade_projection(full, 1)).norm()
    if off > 1e-5:
        log.warning("-(∂T)T^-1 has off-grade part of size %.3g at u=%s", off, np.asarray(u).tolist())
    return full.vector_part


def mean_curvature_via_normal_frame(chart: Chart, u, cfg: FDConfig = DEFAULT_FD) -> np.ndarray:
    """H = -sum_alpha <∂, n_alpha> n_alpha with a frozen-pivot normal frame."""
    fp = frame_at(chart, u, cfg)
    H = np.zeros(chart.N)
    for a in range(fp.k):
        n_field = normal_frame_field(chart, a, fp.normal_pivots, cfg)
        H -= vector_derivative(n_field, u, cfg).scalar_part * fp.normal[a]
    return H


def mean_curvature_field(chart: Chart, cfg: FDConfig = DEFAULT_FD) -> MultivectorField:
    return MultivectorField(chart, lambda v: Multivector.vector(mean_curvature(chart, v, cfg)), 1, "H")


def curl_of_H(chart: Chart, u, cfg: FDConfig = DEFAULT_FD) -> Multivector:
    """The bivector ``∂ ^ H``; zero exactly when H is parallel."""
    return curl(mean_curvature_field(chart, cfg), u, cfg)


@dataclass(frozen=True)
class JacobiTerms:
    lap_T: Multivector
    b2_T: Multivector
    four_vector_term: Multivector
    curl_h_T: Multivector

    @property
    def boxed(self) -> Multivector:
        """``Δ T + |B|² T - <(S(∂_a) ^ S_a) T>_m``, which should equal ◇T."""
        return self.lap_T + self.b2_T - self.four_vector_term

    @property
    def jacobi_residual(self) -> Multivector:
        return self.boxed + self.curl_h_T


def shape_of_derivative_terms(chart: Chart, u, cfg: FDConfig = DEFAULT_FD,
                              sf: SecondFundamentalData | None = None) -> JacobiTerms:
    sf = second_fundamental(chart, u, cfg) if sf is None else sf
    Tf = gauss_map(chart)
    T = Tf(u)
    return JacobiTerms(
        lap_T=laplace_beltrami(Tf, u, cfg),
        b2_T=sf.B2 * T,
        four_vector_term=grade_projection(sf.S4 * T, chart.m),
        curl_h_T=curl_of_H(chart, u, cfg) * T,
    )


@dataclass(frozen=True)
class HypersurfaceData:
    n: np.ndarray
    mean_curvature: float
    grad_mean_curvature: np.ndarray
    shape_spread: float


def scalar_mean_curvature(chart: Chart, u, cfg: FDConfig = DEFAULT_FD) -> float:
    """``ℋ = -<∂, n>`` for a hypersurface."""
    if chart.k != 1:
        raise CodimensionError(f"hypersurface quantity needs codimension 1, got {chart.k}")
    fp = frame_at(chart, u, cfg)
    n_field = normal_frame_field(chart, 0, fp.normal_pivots, cfg)
    return -vector_derivative(n_field, u, cfg).scalar_part


def hypersurface_quantities(chart: Chart, u, cfg: FDConfig = DEFAULT_FD) -> HypersurfaceData:
    if chart.k != 1:
        raise CodimensionError(f"hypersurface quantity needs codimension 1, got {chart.k}")
    u = np.asarray(u, dtype=float)
    fp = frame_at(chart, u, cfg)
    n_field = normal_frame_field(chart, 0, fp.normal_pivots, cfg)
    n = Multivector.vector(fp.normal[0])
    dn = [directional_derivative(n_field, u, t, cfg, fp) for t in fp.tangent]
    H_scalar = -sum(Multivector.vector(t) << d for t, d in zip(fp.tangent, dn)).scalar_part
    Hfield = MultivectorField(chart, lambda v: Multivector.scalar(scalar_mean_curvature(chart, v, cfg), chart.N),
                              1, "H_scalar")
    grad = vector_derivative(Hfield, u, cfg).vector_part
    sf = second_fundamental(chart, u, cfg)
    spread = max(((n ^ d) - Sj).norm() for d, Sj in zip(dn, sf.S))
    return HypersurfaceData(fp.normal[0].copy(), float(H_scalar), grad, float(spread))


class BladePositivityError(ValueError):
    """<T, I> is not positive where the log-Laplacian needs it."""


@dataclass(frozen=True)
class LogLaplacian:
    lhs: float
    rhs: float
    B2: float

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs)

    @property
    def margin(self) -> float:
        """``lhs - |B|²``; nonnegative on constant-mean-curvature hypersurfaces."""
        return self.lhs - self.B2


def log_blade_field(chart: Chart, I: Multivector) -> MultivectorField:
    Tf = gauss_map(chart)

    def rule(v):
        f = inner_product(Tf(v), I)
        if f <= 0.0:
            raise BladePositivityError(f"<T, I> = {f:.3g} <= 0 at u={v.tolist()}")
        return Multivector.scalar(np.log(f), chart.N)

    return MultivectorField(chart, rule, 0, "ln<T,I>")


def log_blade_laplacian(chart: Chart, u, I, cfg: FDConfig = DEFAULT_FD) -> LogLaplacian:
    I = getattr(I, "mv", I)
    lhs = -laplace_beltrami(log_blade_field(chart, I), u, cfg).scalar_part
    sf = second_fundamental(chart, u, cfg)
    T = gauss_map(chart)(u)
    f0 = inner_product(T, I)
    if f0 <= 0.0:
        raise BladePositivityError(f"<T, I> = {f0:.3g} <= 0")
    grad2 = sum(inner_product(Sj * T, I) ** 2 for Sj in sf.S)
    rhs = sf.B2 + (grad2 - inner_product(sf.S4 * T, I) * f0) / f0**2
    return LogLaplacian(float(lhs), float(rhs), sf.B2)


def shape_commutator_defect(sf: SecondFundamentalData) -> float:
    """max over frame pairs of ``|(S_b × S_a) × T|``."""
    T = sf.frame.T
    return max(
        (commutator(commutator(Sb, Sa), T).norm() for Sa in sf.S for Sb in sf.S),
        default=0.0,
    )


def normB_via_shape(S) -> float:
    """``<S(∂_a), S_a> = sum_j |S_j|²`` for any list of shape bivectors."""
    return float(sum(inner_product(Sj, Sj) for Sj in S))


def wedge_frame_defect(sf: SecondFundamentalData) -> float:
    """``|sum_j tau_j ^ S_j|``, which vanishes identically."""
    total = Multivector.zero(sf.frame.tangent.shape[1])
    for t, Sj in zip(sf.frame.tangent, sf.S):
        total = total + (Multivector.vector(t) ^ Sj)
    return total.norm()


__all__ = [
    "BladePositivityError",
    "CodimensionError",
    "HypersurfaceData",
    "JacobiTerms",
    "LogLaplacian",
    "SecondFundamentalData",
    "curl_of_H",
    "hypersurface_quantities",
    "log_blade_laplacian",
    "mean_curvature",
    "mean_curvature_field",
    "mean_curvature_via_gauss",
    "mean_curvature_via_normal_frame",
    "normB_via_shape",
    "scalar_mean_curvature",
    "second_fundamental",
    "shape_bivectors_via_gauss",
    "shape_commutator_defect",
    "shape_of_derivative_terms",
    "wedge_frame_defect",
]
