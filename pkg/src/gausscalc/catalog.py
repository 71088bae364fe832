"""Built-in charts with known curvature, used as ground-truth fixtures."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .manifold import Chart

PI = np.pi
POLE_MARGIN = 0.2


@dataclass(frozen=True)
class Expected:
    codim: int
    is_minimal: bool
    is_parallel_H: bool
    B2: Callable[[np.ndarray], float] | None = None
    H_norm: Callable[[np.ndarray], float] | None = None

    def __post_init__(self):
        if self.is_minimal and not self.is_parallel_H:
            raise ValueError("a minimal entry must have parallel mean curvature")


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    chart: Chart
    expected: Expected
    params: dict = field(default_factory=dict)


def _plane(m: int = 2, N: int = 3) -> CatalogEntry:
    m, N = int(m), int(N)
    E = np.eye(N)[:, :m]
    chart = Chart(lambda u: E @ u, m, N, [[-1.0, 1.0]] * m, lambda u: E, "plane")
    zero = lambda u: 0.0
    return CatalogEntry("plane", chart, Expected(N - m, True, True, zero, zero), {"m": m, "N": N})


def _graph_quantities(a, b, c, u):
    grad = np.array([2 * a * u[0] + c * u[1], 2 * b * u[1] + c * u[0]])
    hess = np.array([[2 * a, c], [c, 2 * b]])
    w = np.sqrt(1.0 + grad @ grad)
    g = np.eye(2) + np.outer(grad, grad)
    shape = np.linalg.solve(g, hess / w)
    return shape


def _graph2d(a: float = 1.0, b: float = 0.0, c: float = 0.0) -> CatalogEntry:
    a, b, c = float(a), float(b), float(c)

    def phi(u):
        return np.array([u[0], u[1], a * u[0] ** 2 + b * u[1] ** 2 + c * u[0] * u[1]])

    def jac(u):
        return np.array([[1.0, 0.0], [0.0, 1.0], [2 * a * u[0] + c * u[1], 2 * b * u[1] + c * u[0]]])

    B2 = lambda u: float(np.trace(_graph_quantities(a, b, c, u) @ _graph_quantities(a, b, c, u)))
    H = lambda u: float(abs(np.trace(_graph_quantities(a, b, c, u))))
    flat = a == b == c == 0.0
    chart = Chart(phi, 2, 3, [[-1.0, 1.0], [-1.0, 1.0]], jac, "graph2d")
    return CatalogEntry("graph2d", chart, Expected(1, flat, flat, B2, H), {"a": a, "b": b, "c": c})


def _sphere(r: float = 1.0, m: int = 2) -> CatalogEntry:
    r, m = float(r), int(m)
    lo, hi = POLE_MARGIN, PI - POLE_MARGIN
    if m == 2:
        def phi(u):
            t, p = u
            return r * np.array([np.sin(t) * np.cos(p), np.sin(t) * np.sin(p), np.cos(t)])

        def jac(u):
            t, p = u
            return r * np.array([
                [np.cos(t) * np.cos(p), -np.sin(t) * np.sin(p)],
                [np.cos(t) * np.sin(p), np.sin(t) * np.cos(p)],
                [-np.sin(t), 0.0],
            ])

        domain = [[lo, hi], [-PI, PI]]
    elif m == 3:
        # (psi, theta, phi) hyperspherical, last angle reversed so the induced normal points outward
        def phi(u):
            s, t, p = u
            return r * np.array([
                np.cos(s),
                np.sin(s) * np.cos(t),
                np.sin(s) * np.sin(t) * np.cos(p),
                -np.sin(s) * np.sin(t) * np.sin(p),
            ])

        def jac(u):
            s, t, p = u
            cs, ss, ct, st, cp, sp = np.cos(s), np.sin(s), np.cos(t), np.sin(t), np.cos(p), np.sin(p)
            return r * np.array([
                [-ss, 0.0, 0.0],
                [cs * ct, -ss * st, 0.0],
                [cs * st * cp, ss * ct * cp, -ss * st * sp],
                [-cs * st * sp, -ss * ct * sp, -ss * st * cp],
            ])

        domain = [[lo, hi], [lo, hi], [-PI, PI]]
    else:
        raise ValueError("sphere supports m in {2, 3}")
    chart = Chart(phi, m, m + 1, domain, jac, "sphere")
    return CatalogEntry(
        "sphere", chart,
        Expected(1, False, True, lambda u: m / r**2, lambda u: m / r),
        {"r": r, "m": m},
    )


def _cylinder(r: float = 1.0) -> CatalogEntry:
    r = float(r)
    phi = lambda u: np.array([r * np.cos(u[0]), r * np.sin(u[0]), u[1]])
    jac = lambda u: np.array([[-r * np.sin(u[0]), 0.0], [r * np.cos(u[0]), 0.0], [0.0, 1.0]])
    chart = Chart(phi, 2, 3, [[-PI, PI], [-1.0, 1.0]], jac, "cylinder")
    return CatalogEntry(
        "cylinder", chart,
        Expected(1, False, True, lambda u: 1 / r**2, lambda u: 1 / r),
        {"r": r},
    )


def _torus(R: float = 2.0, r: float = 1.0) -> CatalogEntry:
    R, r = float(R), float(r)
    if not R > r > 0:
        raise ValueError("torus needs R > r > 0")

    def phi(u):
        a, b = u
        return np.array([(R + r * np.cos(b)) * np.cos(a), (R + r * np.cos(b)) * np.sin(a), r * np.sin(b)])

    def jac(u):
        a, b = u
        w = R + r * np.cos(b)
        return np.array([
            [-w * np.sin(a), -r * np.sin(b) * np.cos(a)],
            [w * np.cos(a), -r * np.sin(b) * np.sin(a)],
            [0.0, r * np.cos(b)],
        ])

    def kappas(u):
        return np.cos(u[1]) / (R + r * np.cos(u[1])), 1.0 / r

    B2 = lambda u: float(sum(k * k for k in kappas(u)))
    H = lambda u: float(abs(sum(kappas(u))))
    chart = Chart(phi, 2, 3, [[-PI, PI], [-PI, PI]], jac, "torus")
    return CatalogEntry("torus", chart, Expected(1, False, False, B2, H), {"R": R, "r": r})


def _catenoid(c: float = 1.0) -> CatalogEntry:
    c = float(c)

    def phi(u):
        a, v = u
        return np.array([c * np.cosh(v / c) * np.cos(a), c * np.cosh(v / c) * np.sin(a), v])

    def jac(u):
        a, v = u
        ch, sh = np.cosh(v / c), np.sinh(v / c)
        return np.array([[-c * ch * np.sin(a), sh * np.cos(a)], [c * ch * np.cos(a), sh * np.sin(a)], [0.0, 1.0]])

    B2 = lambda u: float(2.0 / (c**2 * np.cosh(u[1] / c) ** 4))
    chart = Chart(phi, 2, 3, [[-PI, PI], [-1.0, 1.0]], jac, "catenoid")
    return CatalogEntry("catenoid", chart, Expected(1, True, True, B2, lambda u: 0.0), {"c": c})


def _helicoid(c: float = 1.0) -> CatalogEntry:
    c = float(c)
    phi = lambda u: np.array([u[1] * np.cos(u[0]), u[1] * np.sin(u[0]), c * u[0]])
    jac = lambda u: np.array([
        [-u[1] * np.sin(u[0]), np.cos(u[0])],
        [u[1] * np.cos(u[0]), np.sin(u[0])],
        [c, 0.0],
    ])
    B2 = lambda u: float(2.0 * c**2 / (c**2 + u[1] ** 2) ** 2)
    chart = Chart(phi, 2, 3, [[-PI, PI], [-1.0, 1.0]], jac, "helicoid")
    return CatalogEntry("helicoid", chart, Expected(1, True, True, B2, lambda u: 0.0), {"c": c})


def _clifford_torus(r: float = 1.0 / np.sqrt(2.0)) -> CatalogEntry:
    r = float(r)
    phi = lambda u: r * np.array([np.cos(u[0]), np.sin(u[0]), np.cos(u[1]), np.sin(u[1])])
    jac = lambda u: r * np.array([
        [-np.sin(u[0]), 0.0],
        [np.cos(u[0]), 0.0],
        [0.0, -np.sin(u[1])],
        [0.0, np.cos(u[1])],
    ])
    chart = Chart(phi, 2, 4, [[-PI, PI], [-PI, PI]], jac, "clifford_torus")
    return CatalogEntry(
        "clifford_torus", chart,
        Expected(2, False, True, lambda u: 2.0 / r**2, lambda u: np.sqrt(2.0) / r),
        {"r": r},
    )


_REGISTRY: dict[str, Callable[..., CatalogEntry]] = {
    "plane": _plane,
    "graph2d": _graph2d,
    "sphere": _sphere,
    "cylinder": _cylinder,
    "torus": _torus,
    "catenoid": _catenoid,
    "helicoid": _helicoid,
    "clifford_torus": _clifford_torus,
}


def names() -> list[str]:
    return list(_REGISTRY)


def get(name: str, **params) -> CatalogEntry:
    try:
        factory = _REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown manifold {name!r}; choose from {', '.join(_REGISTRY)}") from None
    return factory(**params)


def parse_params(text: str | None) -> dict[str, float]:
    """``"r=2,m=3"`` -> ``{"r": 2.0, "m": 3.0}``."""
    out: dict[str, float] = {}
    if not text:
        return out
    for item in text.split(","):
        key, sep, val = item.partition("=")
        if not sep or not key.strip():
            raise ValueError(f"bad parameter {item!r}; expected key=value")
        out[key.strip()] = float(val)
    return out
