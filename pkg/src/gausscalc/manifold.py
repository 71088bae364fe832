"""Parametric submanifolds and the vector derivative on them.

A :class:`Chart` maps a box ``U`` in R^m into R^N.  Multivector-valued fields
are functions of the parameter point; all derivatives are central finite
differences taken along the chart, with tangent directions pulled back to
parameter space by least squares against the Jacobian.

Fields carry an ``order``: 0 for fields evaluated in closed form from the
chart, ``n + 1`` for fields that are themselves built from n-th order finite
differences.  Order-0 fields are differentiated with step ``h1``, everything
else with the coarser ``h2`` so round-off is not amplified twice.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .algebra import Multivector, project_grades, wedge
from .blades import (
    RankDeficiencyError,
    UnitBlade,
    hodge_dual,
    pivoted_completion,
    project,
    wedge_vectors,
)


class StencilError(ValueError):
    """A point or finite-difference stencil leaves the chart domain."""


class NotTangentError(ValueError):
    """A direction passed to a derivative is not tangent to the manifold."""


@dataclass(frozen=True)
class FDConfig:
    h1: float = 1e-5
    h2: float = 1e-4
    richardson: bool = False
    rank_tol: float = 1e-8
    frame_tol: float = 1e-9
    tangent_tol: float = 1e-6

    def __post_init__(self):
        if not 0.0 < self.h1 < 1.0:
            raise ValueError("h1 must lie in (0, 1)")
        if not self.h2 > 0.0:
            raise ValueError("h2 must be positive")

    def step(self, order: int) -> float:
        return self.h1 if order == 0 else self.h2


DEFAULT_FD = FDConfig()


class Chart:
    """Parametrisation ``phi: U -> R^N`` of an m-dimensional submanifold."""

    def __init__(
        self,
        func: Callable[[np.ndarray], np.ndarray],
        m: int,
        N: int,
        domain: Sequence[Sequence[float]],
        jacobian: Callable[[np.ndarray], np.ndarray] | None = None,
        name: str = "chart",
    ):
        domain = np.asarray(domain, dtype=float).reshape(m, 2)
        if np.any(domain[:, 0] >= domain[:, 1]):
            raise ValueError("empty chart domain")
        if not 1 <= m <= N:
            raise ValueError("need 1 <= m <= N")
        self.func = func
        self.m = m
        self.N = N
        self.k = N - m
        self.domain = domain
        self._jacobian = jacobian
        self.name = name

    def __repr__(self):
        return f"Chart({self.name!r}, m={self.m}, N={self.N})"

    def __call__(self, u) -> np.ndarray:
        return np.asarray(self.func(np.asarray(u, dtype=float)), dtype=float)

    @property
    def has_analytic_jacobian(self) -> bool:
        return self._jacobian is not None

    def contains(self, u) -> bool:
        u = np.asarray(u, dtype=float)
        return bool(np.all(u >= self.domain[:, 0]) and np.all(u <= self.domain[:, 1]))

    def require_inside(self, u) -> None:
        if not self.contains(u):
            raise StencilError(f"parameter point {np.asarray(u).tolist()} outside domain of {self.name}")

    def center(self) -> np.ndarray:
        return self.domain.mean(axis=1)

    def jacobian(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if self._jacobian is not None:
            return np.asarray(self._jacobian(u), dtype=float).reshape(self.N, self.m)
        # numeric fallback; analytic Jacobians are far more accurate under nesting
        h = 6e-6 * np.maximum(1.0, np.abs(u))
        cols = []
        for i in range(self.m):
            e = np.zeros(self.m)
            e[i] = h[i]
            cols.append((self(u + e) - self(u - e)) / (2 * h[i]))
        return np.array(cols).T


@dataclass(frozen=True)
class FramePoint:
    u: np.ndarray
    x: np.ndarray
    tangent: np.ndarray
    normal: np.ndarray
    T: Multivector
    Nps: Multivector
    jac: np.ndarray
    metric: np.ndarray
    normal_pivots: tuple[int, ...] = field(default=())

    @property
    def m(self) -> int:
        return self.tangent.shape[0]

    @property
    def k(self) -> int:
        return self.normal.shape[0]

    @property
    def T_blade(self) -> UnitBlade:
        return UnitBlade(self.T, self.m)

    @property
    def Nps_blade(self) -> UnitBlade:
        return UnitBlade(self.Nps, self.k)

    def tangent_projector(self) -> np.ndarray:
        return self.tangent.T @ self.tangent

    def pullback(self, a) -> np.ndarray:
        return np.linalg.lstsq(self.jac, np.asarray(a, dtype=float), rcond=None)[0]


def _tangent_frame(J: np.ndarray, rank_tol: float) -> np.ndarray:
    sv = np.linalg.svd(J, compute_uv=False)
    if sv[-1] <= rank_tol:
        raise RankDeficiencyError(f"Jacobian rank deficient (smallest singular value {sv[-1]:.3g})")
    out = J.T.copy()
    for i in range(len(out)):
        for j in range(i):
            out[i] -= (out[j] @ out[i]) * out[j]
        out[i] /= np.linalg.norm(out[i])
    return out


def _normal_frame(tangent: np.ndarray, N: int, pivots=None) -> tuple[np.ndarray, list[int]]:
    k = N - tangent.shape[0]
    if k == 0:
        return np.zeros((0, N)), []
    normal, order = pivoted_completion(tangent, N, k, pivots)
    if np.linalg.det(np.vstack([tangent, normal])) < 0.0:
        normal[-1] *= -1.0
    return normal, order


def frame_at(chart: Chart, u, cfg: FDConfig = DEFAULT_FD, normal_pivots=None) -> FramePoint:
    """Orthonormal tangent and normal frames at ``phi(u)``.

    The tangent frame is Gram-Schmidt of the Jacobian columns in coordinate
    order; the normal frame completes it so that ``tau_1^...^tau_m^n_1^...^n_k = i``.
    """
    u = np.asarray(u, dtype=float)
    chart.require_inside(u)
    J = chart.jacobian(u)
    tangent = _tangent_frame(J, cfg.rank_tol)
    normal, order = _normal_frame(tangent, chart.N, normal_pivots)
    T = wedge_vectors(tangent, chart.N)
    return FramePoint(
        u=u,
        x=chart(u),
        tangent=tangent,
        normal=normal,
        T=T,
        Nps=hodge_dual(T),
        jac=J,
        metric=J.T @ J,
        normal_pivots=tuple(order),
    )


# ---------------------------------------------------------------------------
# fields

@dataclass(frozen=True)
class MultivectorField:
    chart: Chart
    rule: Callable[[np.ndarray], Multivector]
    order: int = 0
    name: str = "F"

    def __call__(self, u) -> Multivector:
        out = self.rule(np.asarray(u, dtype=float))
        if not isinstance(out, Multivector):
            out = Multivector.scalar(float(out), self.chart.N)
        return out

    def coeffs(self, u) -> np.ndarray:
        return self(u).coeffs


_MINOR_CACHE: dict[tuple[int, int], tuple[np.ndarray, np.ndarray]] = {}


def _minor_layout(N: int, m: int):
    key = (N, m)
    if key not in _MINOR_CACHE:
        rows = np.array(list(itertools.combinations(range(N), m)), dtype=int).reshape(-1, m)
        idx = np.array([sum(1 << int(r) for r in row) for row in rows], dtype=int)
        _MINOR_CACHE[key] = (rows, idx)
    return _MINOR_CACHE[key]


def jacobian_blade(J: np.ndarray) -> Multivector:
    """Unit m-blade of the Jacobian columns, via the m x m minors."""
    N, m = J.shape
    rows, idx = _minor_layout(N, m)
    c = np.zeros(1 << N)
    c[idx] = np.linalg.det(J[rows]) if m else 1.0
    n = np.linalg.norm(c)
    if n <= 1e-300:
        raise RankDeficiencyError("Jacobian columns are dependent")
    return Multivector(c / n, N)


def gauss_map(chart: Chart) -> MultivectorField:
    """``u -> T(u)``, the normalised wedge of the Jacobian columns."""
    return MultivectorField(chart, lambda u: jacobian_blade(chart.jacobian(u)), 0, "T")


def normal_map(chart: Chart) -> MultivectorField:
    """``u -> ★T(u)``, the unit normal blade."""
    return MultivectorField(chart, lambda u: hodge_dual(jacobian_blade(chart.jacobian(u))), 0, "N")


def identity_field(chart: Chart) -> MultivectorField:
    return MultivectorField(chart, lambda u: Multivector.vector(chart(u)), 0, "x")


def ambient_field(chart: Chart, f: Callable[[np.ndarray], object], name: str = "f") -> MultivectorField:
    """Field ``u -> f(phi(u))``; ``f`` may return a float or a Multivector."""

    def rule(u):
        val = f(chart(u))
        if isinstance(val, Multivector):
            return val
        return Multivector.scalar(float(val), chart.N)

    return MultivectorField(chart, rule, 0, name)


def tangent_frame_field(chart: Chart, j: int, cfg: FDConfig = DEFAULT_FD) -> MultivectorField:
    return MultivectorField(
        chart, lambda u: Multivector.vector(_tangent_frame(chart.jacobian(u), cfg.rank_tol)[j]), 0, f"tau{j + 1}"
    )


def normal_frame_field(chart: Chart, alpha: int, pivots: Sequence[int], cfg: FDConfig = DEFAULT_FD) -> MultivectorField:
    """n_alpha as a smooth field: completion pivots are frozen to ``pivots``."""
    pivots = tuple(pivots)

    def rule(u):
        tangent = _tangent_frame(chart.jacobian(u), cfg.rank_tol)
        normal, _ = _normal_frame(tangent, chart.N, pivots)
        return Multivector.vector(normal[alpha])

    return MultivectorField(chart, rule, 0, f"n{alpha + 1}")


# ---------------------------------------------------------------------------
# finite differences

def _central(fun: Callable[[np.ndarray], np.ndarray], chart: Chart, u: np.ndarray, direction: np.ndarray,
             h: float, richardson: bool) -> np.ndarray:
    def diff(step):
        up = u + step * direction
        dn = u - step * direction
        chart.require_inside(up)
        chart.require_inside(dn)
        return (fun(up) - fun(dn)) / (2.0 * step)

    d = diff(h)
    if richardson:
        d = (4.0 * diff(0.5 * h) - d) / 3.0
    return d


def directional_derivative(F: MultivectorField, u, a, cfg: FDConfig = DEFAULT_FD,
                           fp: FramePoint | None = None) -> Multivector:
    """``(a . ∂) F`` at ``phi(u)`` for a tangent vector ``a``."""
    u = np.asarray(u, dtype=float)
    a = np.asarray(a, dtype=float)
    fp = frame_at(F.chart, u, cfg) if fp is None else fp
    off = a - fp.tangent_projector() @ a
    if np.linalg.norm(off) > cfg.tangent_tol * max(1.0, np.linalg.norm(a)):
        raise NotTangentError(f"direction has normal component of size {np.linalg.norm(off):.3g}")
    udot = fp.pullback(a)
    d = _central(F.coeffs, F.chart, u, udot, cfg.step(F.order), cfg.richardson)
    return Multivector(d, F.chart.N)


def frame_derivatives(F: MultivectorField, u, cfg: FDConfig = DEFAULT_FD, frame: np.ndarray | None = None,
                      fp: FramePoint | None = None) -> tuple[np.ndarray, list[Multivector]]:
    """Tangent frame rows at ``u`` and the directional derivatives of ``F`` along them."""
    u = np.asarray(u, dtype=float)
    fp = frame_at(F.chart, u, cfg) if fp is None else fp
    tau = fp.tangent if frame is None else np.atleast_2d(np.asarray(frame, dtype=float))
    if tau.shape != fp.tangent.shape:
        raise ValueError("replacement frame must have m rows of length N")
    return tau, [directional_derivative(F, u, t, cfg, fp) for t in tau]


def _frame_sum(tau, derivs, op) -> Multivector:
    out = Multivector.zero(tau.shape[1])
    for t, d in zip(tau, derivs):
        out = out + op(Multivector.vector(t), d)
    return out


def vector_derivative(F: MultivectorField, u, cfg: FDConfig = DEFAULT_FD, frame=None) -> Multivector:
    """Left vector derivative ``∂F = sum_j tau_j (tau_j . ∂) F``."""
    tau, d = frame_derivatives(F, u, cfg, frame)
    return _frame_sum(tau, d, lambda t, D: t * D)


def vector_derivative_right(F: MultivectorField, u, cfg: FDConfig = DEFAULT_FD, frame=None) -> Multivector:
    """Right vector derivative ``F∂ = sum_j ((tau_j . ∂) F) tau_j``."""
    tau, d = frame_derivatives(F, u, cfg, frame)
    return _frame_sum(tau, d, lambda t, D: D * t)


def divergence(F: MultivectorField, u, cfg: FDConfig = DEFAULT_FD, frame=None) -> Multivector:
    tau, d = frame_derivatives(F, u, cfg, frame)
    return _frame_sum(tau, d, lambda t, D: t << D)


def curl(F: MultivectorField, u, cfg: FDConfig = DEFAULT_FD, frame=None) -> Multivector:
    tau, d = frame_derivatives(F, u, cfg, frame)
    return _frame_sum(tau, d, lambda t, D: t ^ D)


def divergence_right(F: MultivectorField, u, cfg: FDConfig = DEFAULT_FD, frame=None) -> Multivector:
    """``F ⌞ ∂``."""
    tau, d = frame_derivatives(F, u, cfg, frame)
    return _frame_sum(tau, d, lambda t, D: D >> t)


def curl_right(F: MultivectorField, u, cfg: FDConfig = DEFAULT_FD, frame=None) -> Multivector:
    """``F ∧ ∂``."""
    tau, d = frame_derivatives(F, u, cfg, frame)
    return _frame_sum(tau, d, lambda t, D: wedge(D, t))


_DERIVATIVES = {
    "left": vector_derivative,
    "right": vector_derivative_right,
    "div": divergence,
    "curl": curl,
}


def derivative_field(F: MultivectorField, kind: str = "left", cfg: FDConfig = DEFAULT_FD) -> MultivectorField:
    """The field ``u -> ∂F(u)`` (or right / divergence / curl variant)."""
    op = _DERIVATIVES[kind]
    return MultivectorField(F.chart, lambda u: op(F, u, cfg), F.order + 1, f"{kind}({F.name})")


def second_derivative(F: MultivectorField, u, cfg: FDConfig = DEFAULT_FD) -> Multivector:
    """``∂²F = ∂(∂F)``."""
    return vector_derivative(derivative_field(F, "left", cfg), u, cfg)


def second_derivative_right(F: MultivectorField, u, cfg: FDConfig = DEFAULT_FD) -> Multivector:
    """``F∂² = (F∂)∂``."""
    return vector_derivative_right(derivative_field(F, "right", cfg), u, cfg)


def _grades_at(F: MultivectorField, u) -> frozenset[int]:
    val = F(u)
    return val.grade_set(tol=1e-9 * max(1.0, val.norm()))


def graded_laplacian(F: MultivectorField, u, cfg: FDConfig = DEFAULT_FD, route: str = "grade",
                     grades: Sequence[int] | None = None) -> Multivector:
    """Grade-preserving part of ``∂²F``.

    ``route="grade"`` projects ``∂²F`` onto the grades present in ``F(u)``;
    ``"mean"`` uses ``(∂²F + F∂²)/2``; ``"split"`` uses
    ``∂⌟(∂∧F) + ∂∧(∂⌟F)``.
    """
    if route == "grade":
        gs = _grades_at(F, u) if grades is None else grades
        return project_grades(second_derivative(F, u, cfg), gs)
    if route == "mean":
        return 0.5 * (second_derivative(F, u, cfg) + second_derivative_right(F, u, cfg))
    if route == "split":
        return (divergence(derivative_field(F, "curl", cfg), u, cfg)
                + curl(derivative_field(F, "div", cfg), u, cfg))
    raise ValueError(f"unknown route {route!r}")


def coordinate_partials(F: MultivectorField, u, cfg: FDConfig = DEFAULT_FD) -> np.ndarray:
    """Array of shape (m, 2**N): central differences of F along each coordinate."""
    u = np.asarray(u, dtype=float)
    h = cfg.step(F.order)
    eye = np.eye(F.chart.m)
    return np.array([_central(F.coeffs, F.chart, u, eye[i], h, cfg.richardson) for i in range(F.chart.m)])


def laplace_beltrami(F: MultivectorField, u, cfg: FDConfig = DEFAULT_FD) -> Multivector:
    """Coefficientwise ``(1/√g) ∂_i(√g g^{ij} ∂_j F)`` from the chart metric.

    Deliberately independent of the vector-derivative machinery.
    """
    chart = F.chart
    u = np.asarray(u, dtype=float)
    chart.require_inside(u)

    def flux(v):
        J = chart.jacobian(v)
        g = J.T @ J
        return np.sqrt(np.linalg.det(g)) * np.linalg.solve(g, coordinate_partials(F, v, cfg))

    h = cfg.step(F.order + 1)
    eye = np.eye(chart.m)
    total = np.zeros(1 << chart.N)
    for i in range(chart.m):
        total += _central(lambda v: flux(v)[i], chart, u, eye[i], h, cfg.richardson)
    J = chart.jacobian(u)
    return Multivector(total / np.sqrt(np.linalg.det(J.T @ J)), chart.N)


def covariant_derivative(F: MultivectorField, u, cfg: FDConfig = DEFAULT_FD) -> Multivector:
    """``∇F = sum_j tau_j P_T((tau_j . ∂) F)``: the tangential vector derivative."""
    fp = frame_at(F.chart, u, cfg)
    tau, d = frame_derivatives(F, u, cfg, fp=fp)
    return _frame_sum(tau, d, lambda t, D: t * project(D, fp.T))
