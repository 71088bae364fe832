"""Registry of named residual checks evaluated over a parameter grid.

Each check evaluates one or more residual *components* per grid point, every
component with its own tolerance.  The per-point residual reported for the
check is the worst component rescaled to the check's headline tolerance, so
``pass <=> max_residual <= tolerance`` holds for multi-component checks too.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .algebra import Multivector, inner_product
from .catalog import CatalogEntry, Expected
from .curvature import (
    CodimensionError,
    curl_of_H,
    hypersurface_quantities,
    log_blade_laplacian,
    mean_curvature_field,
    mean_curvature_via_gauss,
    mean_curvature_via_normal_frame,
    normB_via_shape,
    second_fundamental,
    shape_bivectors_via_gauss,
    shape_commutator_defect,
    shape_of_derivative_terms,
)
from .manifold import (
    DEFAULT_FD,
    Chart,
    FDConfig,
    StencilError,
    covariant_derivative,
    curl,
    divergence,
    frame_at,
    gauss_map,
    graded_laplacian,
    identity_field,
    laplace_beltrami,
    normal_frame_field,
    normal_map,
    vector_derivative,
    vector_derivative_right,
)

log = logging.getLogger(__name__)

LOG_BLADE_MIN = 0.25


class UnknownCheckError(KeyError):
    pass


@dataclass(frozen=True)
class Grid:
    counts: tuple[int, ...]
    inset: float = 0.1

    def __post_init__(self):
        if any(c < 2 for c in self.counts):
            raise ValueError("grid counts must be >= 2")
        if self.inset <= 0.0:
            raise ValueError("grid inset must be positive")

    @classmethod
    def default(cls, m: int) -> "Grid":
        return cls((5,) * m if m <= 2 else (3,) * m)

    @classmethod
    def parse(cls, text: str, inset: float = 0.1) -> "Grid":
        """``"5x5"`` -> ``Grid((5, 5))``."""
        try:
            counts = tuple(int(p) for p in text.lower().split("x"))
        except ValueError:
            raise ValueError(f"bad grid {text!r}; expected e.g. 5x5") from None
        return cls(counts, inset)

    def points(self, chart: Chart) -> list[np.ndarray]:
        if len(self.counts) != chart.m:
            raise ValueError(f"grid has {len(self.counts)} axes, chart has {chart.m}")
        axes = []
        for (lo, hi), n in zip(chart.domain, self.counts):
            if hi - lo <= 2 * self.inset:
                raise ValueError("grid inset swallows the chart domain")
            axes.append(np.linspace(lo + self.inset, hi - self.inset, n))
        return [np.array(p) for p in itertools.product(*axes)]


@dataclass
class CheckResult:
    check_id: str
    anchor: str
    points: list[list[float]]
    residuals: list[float]
    tolerance: float
    components: dict[str, dict] = field(default_factory=dict)
    error: str | None = None

    @property
    def max_residual(self) -> float:
        if self.error is not None:
            return float("inf")
        return max(self.residuals, default=0.0)

    @property
    def passed(self) -> bool:
        return self.error is None and self.max_residual <= self.tolerance


@dataclass(frozen=True)
class Check:
    check_id: str
    anchor: str
    components: dict[str, float]
    evaluate: Callable[..., dict[str, float] | None]
    codim1_only: bool = False
    minimal_only: bool = False
    parallel_only: bool = False

    @property
    def tolerance(self) -> float:
        """Headline tolerance: the first component's."""
        return next(iter(self.components.values()))

    def applicable(self, chart: Chart, expected: Expected | None) -> bool:
        if self.codim1_only and chart.k != 1:
            return False
        if expected is None:
            return not (self.minimal_only or self.parallel_only)
        if self.minimal_only and not expected.is_minimal:
            return False
        if self.parallel_only and not expected.is_parallel_H:
            return False
        return True


# ---------------------------------------------------------------------------
# per-point evaluators: (chart, u, cfg, ctx) -> {component: residual}

def _vec(v) -> Multivector:
    return Multivector.vector(v)


def _gauss_derivative(chart, u, cfg, ctx):
    T = gauss_map(chart)
    H = second_fundamental(chart, u, cfg).H
    return {"dT+HT": (vector_derivative(T, u, cfg) + _vec(H) * T(u)).norm()}


def _minimal_monogenic(chart, u, cfg, ctx):
    T = gauss_map(chart)
    return {
        "dT": vector_derivative(T, u, cfg).norm(),
        "Td": vector_derivative_right(T, u, cfg).norm(),
        "div T": divergence(T, u, cfg).norm(),
        "curl T": curl(T, u, cfg).norm(),
        "|H|": float(np.linalg.norm(second_fundamental(chart, u, cfg).H)),
        "diamond T": graded_laplacian(T, u, cfg).norm(),
    }


def _graded_laplace_gauss(chart, u, cfg, ctx):
    T = gauss_map(chart)
    return {"diamond T+(d^H)T": (graded_laplacian(T, u, cfg) + curl_of_H(chart, u, cfg) * T(u)).norm()}


def _normal_versions(chart, u, cfg, ctx):
    Nf = normal_map(chart)
    Nu = Nf(u)
    H = second_fundamental(chart, u, cfg).H
    return {
        "dN+HN": (vector_derivative(Nf, u, cfg) + _vec(H) * Nu).norm(),
        "diamond N+(d^H)N": (graded_laplacian(Nf, u, cfg) + curl_of_H(chart, u, cfg) * Nu).norm(),
    }


def _normal_divergence(chart, u, cfg, ctx):
    fp = frame_at(chart, u, cfg)
    H = second_fundamental(chart, u, cfg).H
    out = {"X=H": abs(divergence(mean_curvature_field(chart, cfg), u, cfg).scalar_part + H @ H)}
    worst = 0.0
    for a in range(fp.k):
        n_field = normal_frame_field(chart, a, fp.normal_pivots, cfg)
        worst = max(worst, abs(divergence(n_field, u, cfg).scalar_part + H @ fp.normal[a]))
    out["X=n_a"] = worst
    return out


def _parallel_curlfree(chart, u, cfg, ctx):
    return {"d^H": curl_of_H(chart, u, cfg).norm()}


def _mean_curvature_routes(chart, u, cfg, ctx):
    H1 = second_fundamental(chart, u, cfg).H
    H2 = mean_curvature_via_gauss(chart, u, cfg)
    H3 = mean_curvature_via_normal_frame(chart, u, cfg)
    scale = max(1.0, float(np.linalg.norm(H1)))
    spread = max(np.linalg.norm(H1 - H2), np.linalg.norm(H1 - H3), np.linalg.norm(H2 - H3))
    return {"route spread (rel)": float(spread) / scale}


def _boxed(chart, u, cfg, ctx):
    terms = shape_of_derivative_terms(chart, u, cfg)
    return {"diamond T-boxed": (graded_laplacian(gauss_map(chart), u, cfg) - terms.boxed).norm()}


def _jacobi_general(chart, u, cfg, ctx):
    return {"jacobi": shape_of_derivative_terms(chart, u, cfg).jacobi_residual.norm()}


def _jacobi_hypersurface(chart, u, cfg, ctx):
    if chart.k != 1:
        raise CodimensionError("jacobi-hypersurface needs codimension 1")
    fp = frame_at(chart, u, cfg)
    sf = second_fundamental(chart, u, cfg)
    hq = hypersurface_quantities(chart, u, cfg)
    n_field = normal_frame_field(chart, 0, fp.normal_pivots, cfg)
    n = _vec(hq.n)
    lap_n = laplace_beltrami(n_field, u, cfg)
    return {
        "lap n+|B|^2 n+grad H": (lap_n + sf.B2 * n + _vec(hq.grad_mean_curvature)).norm(),
        "diamond n-(lap n+|B|^2 n)": (graded_laplacian(n_field, u, cfg) - (lap_n + sf.B2 * n)).norm(),
        "S(d_a)^S_a": sf.S4.norm(),
        "S_a=n^(a.d)n": hq.shape_spread,
    }


def _shape_jacobi(chart, u, cfg, ctx):
    return {"(S_b x S_a) x T": shape_commutator_defect(second_fundamental(chart, u, cfg))}


def _normB(chart, u, cfg, ctx):
    sf = second_fundamental(chart, u, cfg)
    via_gauss = normB_via_shape(shape_bivectors_via_gauss(chart, u, cfg))
    return {"|B|^2 routes (rel)": abs(sf.B2 - via_gauss) / max(1.0, sf.B2)}


def _identity_map(chart, u, cfg, ctx):
    x = identity_field(chart)
    H = second_fundamental(chart, u, cfg).H
    lap = laplace_beltrami(x, u, cfg).vector_part
    return {
        "dx-m": (vector_derivative(x, u, cfg) - float(chart.m)).norm(),
        "diamond x": graded_laplacian(x, u, cfg, grades=[1]).norm(),
        "lap x-H (rel)": float(np.linalg.norm(lap - H)) / max(1.0, float(np.linalg.norm(H))),
    }


def _covariant_flat(chart, u, cfg, ctx):
    return {"nabla T": covariant_derivative(gauss_map(chart), u, cfg).norm()}


def _log_superharmonic(chart, u, cfg, ctx):
    I = ctx["I"]
    if inner_product(gauss_map(chart)(u), I) < LOG_BLADE_MIN:
        return None
    ll = log_blade_laplacian(chart, u, I, cfg)
    out = {"lhs-rhs": ll.residual}
    if chart.k == 1:
        out["|B|^2-lhs"] = max(0.0, -ll.margin)
    return out


CHECKS: dict[str, Check] = {c.check_id: c for c in [
    Check("gauss-derivative", "∂T = -H T (derivative of the Gauss map)",
          {"dT+HT": 1e-5}, _gauss_derivative),
    Check("minimal-monogenic", "H ≡ 0 ⇔ Gauss map monogenic; monogenic ⇔ divergence- and curl-free ⇒ graded-harmonic",
          {"dT": 1e-5, "Td": 1e-5, "div T": 1e-5, "curl T": 1e-5, "|H|": 1e-6, "diamond T": 1e-3},
          _minimal_monogenic, minimal_only=True),
    Check("graded-laplace-gauss", "◇T = -(∂∧H) T (graded Laplacian of the Gauss map)",
          {"diamond T+(d^H)T": 1e-3}, _graded_laplace_gauss),
    Check("normal-versions", "∂N = -H N and ◇N = -(∂∧H) N for the normal blade N = ★T",
          {"dN+HN": 1e-5, "diamond N+(d^H)N": 1e-3}, _normal_versions),
    Check("normal-divergence-lemma", "<∂, X> + <H, X> ≡ 0 for normal fields X",
          {"X=H": 1e-4, "X=n_a": 1e-4}, _normal_divergence),
    Check("parallel-curlfree", "H parallel ⇔ ∂∧H ≡ 0",
          {"d^H": 1e-4}, _parallel_curlfree, parallel_only=True),
    Check("mean-curvature-routes", "H = ∂_a⌟S_a = -(∂T)T^-1 = -Σ<∂, n_α> n_α",
          {"route spread (rel)": 1e-4}, _mean_curvature_routes),
    Check("boxed-decomposition", "◇T = Δ T + |B|² T - <(S(∂_a)∧S_a) T>_m",
          {"diamond T-boxed": 1e-3}, _boxed),
    Check("jacobi-general", "Δ T + |B|² T - <(S(∂_a)∧S_a) T>_m + (∂∧H) T ≡ 0 (Jacobi field equation)",
          {"jacobi": 1e-3}, _jacobi_general),
    Check("jacobi-hypersurface", "Δn + |B|² n + ∂ℋ = 0, ◇n = Δn + |B|² n, S(∂_a)∧S_a ≡ 0 on hypersurfaces",
          {"lap n+|B|^2 n+grad H": 1e-3, "diamond n-(lap n+|B|^2 n)": 1e-3, "S(d_a)^S_a": 1e-6,
           "S_a=n^(a.d)n": 1e-5},
          _jacobi_hypersurface, codim1_only=True),
    Check("shape-jacobi-lemma", "(S_b × S_a) × T = 0",
          {"(S_b x S_a) x T": 1e-6}, _shape_jacobi),
    Check("normB-consistency", "|B|² = Σ h² = <S(∂_a), S_a>",
          {"|B|^2 routes (rel)": 1e-6}, _normB),
    Check("identity-map", "∂x = m, ◇x = 0 while Δx = H",
          {"dx-m": 1e-5, "diamond x": 1e-4, "lap x-H (rel)": 1e-4}, _identity_map),
    Check("covariant-flat", "∇T ≡ 0 (tangential derivative of the Gauss map)",
          {"nabla T": 1e-6}, _covariant_flat),
    Check("log-superharmonic", "-Δ ln<T, I> = |B|² + (|∂_a<S_a T, I>|² - <(S(∂_a)∧S_a)T, I><T, I>)/<T, I>², ≥ |B|² on CMC hypersurfaces",
          {"lhs-rhs": 1e-3, "|B|^2-lhs": 1e-3}, _log_superharmonic, parallel_only=True),
]}


def check_ids() -> list[str]:
    return list(CHECKS)


def _resolve(target) -> tuple[Chart, Expected | None, str]:
    if isinstance(target, CatalogEntry):
        return target.chart, target.expected, target.name
    if isinstance(target, Chart):
        return target, None, target.name
    raise TypeError("target must be a CatalogEntry or a Chart")


def _context(chart: Chart, grid: Grid, cfg: FDConfig) -> dict:
    pts = grid.points(chart)
    center = pts[len(pts) // 2]
    return {"I": gauss_map(chart)(center)}


def run_check(check_id: str, target, grid: Grid | Sequence[int] | None = None, cfg: FDConfig = DEFAULT_FD,
              tol_scale: float = 1.0, ctx: dict | None = None) -> CheckResult:
    """Evaluate one registered check at every grid point.

    Raises :class:`UnknownCheckError`, :class:`CodimensionError` or
    :class:`~gausscalc.manifold.StencilError`.
    """
    try:
        check = CHECKS[check_id]
    except KeyError:
        raise UnknownCheckError(f"unknown check {check_id!r}; choose from {', '.join(CHECKS)}") from None
    chart, expected, _ = _resolve(target)
    if check.codim1_only and chart.k != 1:
        raise CodimensionError(f"{check_id} needs codimension 1, chart has {chart.k}")
    if grid is None:
        grid = Grid.default(chart.m)
    elif not isinstance(grid, Grid):
        grid = Grid(tuple(grid))
    ctx = _context(chart, grid, cfg) if ctx is None else ctx
    head = check.tolerance * tol_scale
    worst = {name: 0.0 for name in check.components}
    points, residuals = [], []
    for u in grid.points(chart):
        comps = check.evaluate(chart, u, cfg, ctx)
        if comps is None:
            continue
        scaled = 0.0
        for name, r in comps.items():
            r = float(r)
            worst[name] = max(worst[name], r)
            scaled = max(scaled, r * check.tolerance / check.components[name])
        points.append([float(c) for c in u])
        residuals.append(scaled)
    components = {
        name: {
            "max_residual": worst[name],
            "tolerance": tol * tol_scale,
            "pass": worst[name] <= tol * tol_scale,
        }
        for name, tol in check.components.items()
    }
    return CheckResult(check_id, check.anchor, points, residuals, head, components)


def applicable_checks(target) -> list[str]:
    chart, expected, _ = _resolve(target)
    return [cid for cid, c in CHECKS.items() if c.applicable(chart, expected)]


def run_all(target, grid: Grid | Sequence[int] | None = None, cfg: FDConfig = DEFAULT_FD,
            tol_scale: float = 1.0, only: Sequence[str] | None = None) -> list[CheckResult]:
    """Run every applicable check in registry order; failures are recorded, never raised."""
    chart, _, _ = _resolve(target)
    if grid is None:
        grid = Grid.default(chart.m)
    elif not isinstance(grid, Grid):
        grid = Grid(tuple(grid))
    ids = applicable_checks(target) if only is None else list(only)
    ctx = _context(chart, grid, cfg)
    results = []
    for cid in ids:
        try:
            results.append(run_check(cid, target, grid, cfg, tol_scale, ctx))
        except (StencilError, CodimensionError, ValueError, ArithmeticError) as exc:
            log.warning("check %s failed to evaluate: %s", cid, exc)
            anchor = CHECKS[cid].anchor if cid in CHECKS else ""
            tol = CHECKS[cid].tolerance * tol_scale if cid in CHECKS else 0.0
            results.append(CheckResult(cid, anchor, [], [], tol, error=f"{type(exc).__name__}: {exc}"))
    return results


__all__ = [
    "CHECKS",
    "COVERAGE",
    "Check",
    "CheckResult",
    "Grid",
    "UnknownCheckError",
    "applicable_checks",
    "check_ids",
    "run_all",
    "run_check",
]


# Every named result about the Gauss map, mean curvature and shape bivectors
# that the library reproduces, with the checks exercising it.
COVERAGE: dict[str, tuple[str, ...]] = {
    "identity map: ∂x = m, ◇x = 0, Δx = H": ("identity-map",),
    "mean curvature vector from shape bivectors and Gauss map": ("mean-curvature-routes",),
    "derivative of the Gauss map: ∂T = -HT": ("gauss-derivative",),
    "minimal iff the Gauss map is monogenic": ("minimal-monogenic",),
    "divergence of normal fields: <∂,X> + <H,X> = 0": ("normal-divergence-lemma",),
    "parallel iff curl-free mean curvature": ("parallel-curlfree",),
    "graded Laplacian of the Gauss map: ◇T = -(∂∧H)T": ("graded-laplace-gauss",),
    "parallel mean curvature gives a graded-harmonic Gauss map": ("graded-laplace-gauss", "parallel-curlfree"),
    "normal pseudoscalar versions of the Gauss map formulas": ("normal-versions",),
    "|B|² as sum of h² and as <S(∂_a), S_a>": ("normB-consistency",),
    "shape bivectors commute through T: (S_b×S_a)×T = 0": ("shape-jacobi-lemma",),
    "decomposition of ◇T into Laplace-Beltrami, |B|² and four-vector terms": ("boxed-decomposition",),
    "Jacobi field equation for the Gauss map": ("jacobi-general",),
    "Laplacian of ln<T, I>": ("log-superharmonic",),
    "hypersurface Jacobi equation and vanishing four-vector term": ("jacobi-hypersurface",),
    "ln<T, I> superharmonic on constant mean curvature hypersurfaces": ("log-superharmonic",),
    "tangential derivative of the Gauss map vanishes": ("covariant-flat",),
}
