"""Clifford algebra of Euclidean space with a dense bitmask basis.

A multivector of ``R^N`` stores ``2**N`` coefficients.  Index ``b`` holds the
coefficient of the basis blade whose vector factors are the set bits of ``b``
in increasing order, so ``0b101`` is ``e1^e3``.  Basis vectors are numbered
from 1 in names (``e1``) and from 0 in bit positions.

Operator summary::

    A * B     geometric product        A ^ B     exterior product
    A << B    left contraction         A >> B    right contraction
    ~A        reversion                A.involute()  grade involution
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from . import _accel

MAX_DIM = 12
EQ_RTOL = 1e-12

_GRADE_CACHE: dict[int, np.ndarray] = {}


def grades_of_indices(dim: int) -> np.ndarray:
    g = _GRADE_CACHE.get(dim)
    if g is None:
        g = np.bitwise_count(np.arange(1 << dim)).astype(np.int64)
        g.setflags(write=False)
        _GRADE_CACHE[dim] = g
    return g


class DimensionError(ValueError):
    """Operands live in algebras of different dimension."""


def _as_mv(x, dim: int) -> "Multivector":
    if isinstance(x, Multivector):
        if x.dim != dim:
            raise DimensionError(f"dimension mismatch: {x.dim} != {dim}")
        return x
    if np.isscalar(x):
        return Multivector.scalar(float(x), dim)
    return NotImplemented


class Multivector:
    __slots__ = ("dim", "coeffs")
    __array_priority__ = 100

    def __init__(self, coeffs, dim: int | None = None):
        c = np.array(coeffs, dtype=float)
        if c.ndim != 1:
            raise ValueError("coefficients must be one-dimensional")
        n = c.shape[0]
        if dim is None:
            dim = n.bit_length() - 1
        if not 0 <= dim <= MAX_DIM or n != 1 << dim:
            raise ValueError(f"need 2**dim coefficients with dim <= {MAX_DIM}, got {n}")
        if not np.all(np.isfinite(c)):
            raise ValueError("multivector coefficients must be finite")
        c.setflags(write=False)
        self.dim = dim
        self.coeffs = c

    # -- construction -----------------------------------------------------
    @classmethod
    def zero(cls, dim: int) -> "Multivector":
        return cls(np.zeros(1 << dim), dim)

    @classmethod
    def scalar(cls, value: float, dim: int) -> "Multivector":
        c = np.zeros(1 << dim)
        c[0] = value
        return cls(c, dim)

    @classmethod
    def vector(cls, v: Sequence[float]) -> "Multivector":
        v = np.asarray(v, dtype=float)
        dim = v.shape[0]
        c = np.zeros(1 << dim)
        c[1 << np.arange(dim)] = v
        return cls(c, dim)

    @classmethod
    def blade(cls, dim: int, *indices: int, value: float = 1.0) -> "Multivector":
        """Basis blade ``e_{i1} e_{i2} ...`` (1-based, any order, repeats allowed)."""
        out = cls.scalar(value, dim)
        for i in indices:
            if not 1 <= i <= dim:
                raise ValueError(f"basis index {i} outside 1..{dim}")
            c = np.zeros(1 << dim)
            c[1 << (i - 1)] = 1.0
            out = out * cls(c, dim)
        return out

    @classmethod
    def random(cls, dim: int, rng: np.random.Generator, grades: Iterable[int] | None = None):
        c = rng.uniform(-1.0, 1.0, 1 << dim)
        if grades is not None:
            c[~np.isin(grades_of_indices(dim), list(grades))] = 0.0
        return cls(c, dim)

    # -- basic views ------------------------------------------------------
    def __repr__(self) -> str:
        terms = []
        for b in np.flatnonzero(self.coeffs):
            name = "".join(str(i + 1) for i in range(self.dim) if b >> i & 1)
            terms.append(f"{self.coeffs[b]:.6g}" + (f"*e{name}" if name else ""))
        return f"Multivector({' + '.join(terms) or '0'}, dim={self.dim})"

    @property
    def scalar_part(self) -> float:
        return float(self.coeffs[0])

    @property
    def vector_part(self) -> np.ndarray:
        return self.coeffs[1 << np.arange(self.dim)].copy()

    def grade_set(self, tol: float = 0.0) -> frozenset[int]:
        g = grades_of_indices(self.dim)
        present = np.abs(self.coeffs) > tol
        return frozenset(int(r) for r in np.unique(g[present]))

    def grade(self, r: int) -> "Multivector":
        return grade_projection(self, r)

    def involute(self) -> "Multivector":
        return grade_involution(self)

    def norm(self) -> float:
        return float(np.sqrt(norm_squared(self)))

    def isclose(self, other, rtol: float = EQ_RTOL, atol: float | None = None) -> bool:
        other = _as_mv(other, self.dim)
        a, b = self.coeffs, other.coeffs
        if atol is None:
            scale = np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))
            return bool(np.all(np.abs(a - b) <= rtol * scale))
        return bool(np.all(np.abs(a - b) <= atol))

    def __eq__(self, other):
        if not isinstance(other, Multivector) and not np.isscalar(other):
            return NotImplemented
        try:
            return self.isclose(other)
        except DimensionError:
            return False

    __hash__ = None

    # -- linear structure -------------------------------------------------
    def __add__(self, other):
        other = _as_mv(other, self.dim)
        if other is NotImplemented:
            return other
        return Multivector(self.coeffs + other.coeffs, self.dim)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_mv(other, self.dim)
        if other is NotImplemented:
            return other
        return Multivector(self.coeffs - other.coeffs, self.dim)

    def __rsub__(self, other):
        other = _as_mv(other, self.dim)
        if other is NotImplemented:
            return other
        return Multivector(other.coeffs - self.coeffs, self.dim)

    def __neg__(self):
        return Multivector(-self.coeffs, self.dim)

    def __pos__(self):
        return self

    def __truediv__(self, other):
        if np.isscalar(other):
            return Multivector(self.coeffs / float(other), self.dim)
        return NotImplemented

    # -- products ---------------------------------------------------------
    def __mul__(self, other):
        if np.isscalar(other):
            return Multivector(self.coeffs * float(other), self.dim)
        if isinstance(other, Multivector):
            return geometric_product(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if np.isscalar(other):
            return Multivector(self.coeffs * float(other), self.dim)
        return NotImplemented

    def __xor__(self, other):
        other = _as_mv(other, self.dim)
        if other is NotImplemented:
            return other
        return wedge(self, other)

    def __rxor__(self, other):
        other = _as_mv(other, self.dim)
        if other is NotImplemented:
            return other
        return wedge(other, self)

    def __lshift__(self, other):
        other = _as_mv(other, self.dim)
        if other is NotImplemented:
            return other
        return contract_left(self, other)

    def __rshift__(self, other):
        other = _as_mv(other, self.dim)
        if other is NotImplemented:
            return other
        return contract_right(self, other)

    def __invert__(self):
        return reversion(self)


def _pair(A: Multivector, B: Multivector) -> tuple[np.ndarray, np.ndarray]:
    if A.dim != B.dim:
        raise DimensionError(f"dimension mismatch: {A.dim} != {B.dim}")
    return A.coeffs, B.coeffs


def _prod(A: Multivector, B: Multivector, mode: int) -> Multivector:
    a, b = _pair(A, B)
    return Multivector(_accel.product(a, b, mode), A.dim)


def geometric_product(A: Multivector, B: Multivector) -> Multivector:
    return _prod(A, B, _accel.GEOMETRIC)


def wedge(A: Multivector, B: Multivector) -> Multivector:
    return _prod(A, B, _accel.WEDGE)


def contract_left(A: Multivector, B: Multivector) -> Multivector:
    """``A ⌟ B``: grade ``s - r`` part of ``A_r B_s``, summed over grade pairs."""
    return _prod(A, B, _accel.LEFT)


def contract_right(A: Multivector, B: Multivector) -> Multivector:
    """``A ⌞ B``: grade ``r - s`` part of ``A_r B_s``, summed over grade pairs."""
    return _prod(A, B, _accel.RIGHT)


def scalar_product(A: Multivector, B: Multivector) -> float:
    """``A * B = <AB>_0`` (no reversion, so ``e12 * e12 = -1``)."""
    a, b = _pair(A, B)
    return float(_accel.product(a, b, _accel.SCALAR)[0])


def inner_product(A: Multivector, B: Multivector) -> float:
    """Positive definite ``<A, B> = A * reversion(B)``."""
    return scalar_product(A, reversion(B))


def norm_squared(A: Multivector) -> float:
    return inner_product(A, A)


def norm(A: Multivector) -> float:
    return float(np.sqrt(max(norm_squared(A), 0.0)))


def reversion(A: Multivector) -> Multivector:
    g = grades_of_indices(A.dim)
    sign = np.where((g * (g - 1) // 2) % 2 == 0, 1.0, -1.0)
    return Multivector(A.coeffs * sign, A.dim)


def grade_involution(A: Multivector) -> Multivector:
    g = grades_of_indices(A.dim)
    return Multivector(np.where(g % 2 == 0, A.coeffs, -A.coeffs), A.dim)


def commutator(A: Multivector, B: Multivector) -> Multivector:
    """``A × B = (AB - BA) / 2``."""
    a, b = _pair(A, B)
    ab = _accel.product(a, b, _accel.GEOMETRIC)
    ba = _accel.product(b, a, _accel.GEOMETRIC)
    return Multivector(0.5 * (ab - ba), A.dim)


def grade_projection(A: Multivector, r: int) -> Multivector:
    if not 0 <= r <= A.dim:
        raise ValueError(f"grade {r} outside 0..{A.dim}")
    g = grades_of_indices(A.dim)
    return Multivector(np.where(g == r, A.coeffs, 0.0), A.dim)


def project_grades(A: Multivector, grades: Iterable[int]) -> Multivector:
    g = grades_of_indices(A.dim)
    return Multivector(np.where(np.isin(g, list(grades)), A.coeffs, 0.0), A.dim)


def pseudoscalar(dim: int) -> Multivector:
    c = np.zeros(1 << dim)
    c[-1] = 1.0
    return Multivector(c, dim)


def basis_blades(dim: int) -> dict[str, Multivector]:
    """Name -> basis blade, e.g. ``{'1': 1, 'e1': e1, ..., 'e123': e1^e2^e3}``."""
    out = {}
    for b in range(1 << dim):
        name = "".join(str(i + 1) for i in range(dim) if b >> i & 1)
        c = np.zeros(1 << dim)
        c[b] = 1.0
        out["e" + name if name else "1"] = Multivector(c, dim)
    return out


def coefficient_residual(A: Multivector, B: Multivector) -> float:
    """Largest coefficient gap scaled by ``max(1, |a|, |b|)``."""
    a, b = _pair(A, B)
    scale = np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))
    return float(np.max(np.abs(a - b) / scale))


# ---------------------------------------------------------------------------
# randomized identity suite (exposed on the command line as algebra-selftest)

def _case_associativity(rng, dim):
    A, B, C = (Multivector.random(dim, rng) for _ in range(3))
    return coefficient_residual((A * B) * C, A * (B * C))


def _case_vector_split(rng, dim):
    a = Multivector.random(dim, rng, grades=[1])
    B = Multivector.random(dim, rng)
    return coefficient_residual(a * B, (a << B) + (a ^ B))


def _case_adjunction(rng, dim):
    X, A, B = (Multivector.random(dim, rng) for _ in range(3))
    l1, l2 = scalar_product(X ^ A, B), scalar_product(X, A << B)
    r1, r2 = scalar_product(A, B ^ X), scalar_product(A >> B, X)
    return max(abs(l1 - l2) / max(1.0, abs(l1), abs(l2)),
               abs(r1 - r2) / max(1.0, abs(r1), abs(r2)))


def _case_bivector_split(rng, dim):
    Bv = Multivector.random(dim, rng, grades=[2])
    A = Multivector.random(dim, rng)
    return coefficient_residual(Bv * A, (Bv << A) + commutator(Bv, A) + (Bv ^ A))


def _case_norm(rng, dim):
    A = Multivector.random(dim, rng)
    n2 = norm_squared(A)
    if n2 <= 0.0:
        return np.inf
    return abs(n2 - float(A.coeffs @ A.coeffs)) / max(1.0, n2)


SELFTEST_CASES = {
    "associativity": _case_associativity,
    "vector-split": _case_vector_split,
    "contraction-adjunction": _case_adjunction,
    "bivector-split": _case_bivector_split,
    "positive-norm": _case_norm,
}


def selftest(n_cases: int = 500, dims: Sequence[int] = (3, 4, 5, 6), seed: int = 0,
             tol: float = 1e-12) -> list[tuple[str, float, bool]]:
    """Run every randomized algebra identity; returns ``(name, max residual, ok)``."""
    rng = np.random.default_rng(seed)
    results = []
    for name, case in SELFTEST_CASES.items():
        worst = 0.0
        for dim in dims:
            for _ in range(n_cases):
                worst = max(worst, case(rng, dim))
        if name == "positive-norm" and norm_squared(Multivector.zero(dims[0])) != 0.0:
            worst = np.inf
        results.append((name, float(worst), bool(worst < tol)))
    return results
