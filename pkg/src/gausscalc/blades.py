"""Unit blades as oriented subspaces of R^N."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import (
    Multivector,
    contract_left,
    grades_of_indices,
    norm,
    pseudoscalar,
    reversion,
)

UNIT_TOL = 1e-10
FRAME_TOL = 1e-10
RANK_RTOL = 1e-8


class RankDeficiencyError(ValueError):
    """A set of vectors is (numerically) linearly dependent."""


class NotSimpleError(ValueError):
    """A multivector is not a blade."""


def wedge_kernel_dim(A: Multivector, rtol: float = RANK_RTOL) -> int:
    """Dimension of the kernel of ``v -> v ^ A`` on R^N."""
    N = A.dim
    scale = norm(A)
    if scale == 0.0:
        return N
    cols = [(Multivector.vector(np.eye(N)[i]) ^ A).coeffs for i in range(N)]
    sv = np.linalg.svd(np.array(cols).T, compute_uv=False)
    return int(np.sum(sv <= rtol * scale))


def is_homogeneous(A: Multivector, r: int, tol: float = UNIT_TOL) -> bool:
    g = grades_of_indices(A.dim)
    return bool(np.all(np.abs(A.coeffs[g != r]) <= tol * max(1.0, norm(A))))


def is_simple(A: Multivector, m: int | None = None) -> bool:
    """True when ``A`` is a nonzero m-blade, judged by the rank of ``v -> v ^ A``."""
    if m is None:
        grades = A.grade_set(tol=UNIT_TOL * max(1.0, norm(A)))
        if len(grades) != 1:
            return False
        (m,) = grades
    return is_homogeneous(A, m) and wedge_kernel_dim(A) == m


@dataclass(frozen=True)
class UnitBlade:
    mv: Multivector
    grade: int

    def __post_init__(self):
        if not is_homogeneous(self.mv, self.grade):
            raise NotSimpleError(f"not homogeneous of grade {self.grade}")
        if abs(norm(self.mv) - 1.0) > UNIT_TOL:
            raise ValueError(f"blade norm {norm(self.mv)!r} is not 1")
        if wedge_kernel_dim(self.mv) != self.grade:
            raise NotSimpleError("multivector is not simple")

    @classmethod
    def from_multivector(cls, A: Multivector) -> "UnitBlade":
        n = norm(A)
        if n == 0.0:
            raise NotSimpleError("zero multivector is not a blade")
        grades = A.grade_set(tol=UNIT_TOL * n)
        if len(grades) != 1:
            raise NotSimpleError(f"mixed grades {sorted(grades)}")
        return cls(A / n, next(iter(grades)))

    @property
    def dim(self) -> int:
        return self.mv.dim


def _mv(B) -> Multivector:
    return B.mv if isinstance(B, UnitBlade) else B


def check_orthonormal(frame: np.ndarray, tol: float = FRAME_TOL) -> None:
    frame = np.atleast_2d(frame)
    G = frame @ frame.T
    if not np.allclose(G, np.eye(len(frame)), atol=tol, rtol=0.0):
        raise ValueError("frame is not orthonormal")


def gram_schmidt(vs: np.ndarray, rtol: float = RANK_RTOL) -> np.ndarray:
    """Modified Gram-Schmidt on the rows of ``vs`` in the given order."""
    vs = np.array(vs, dtype=float)
    if vs.shape[0] == 0:
        return vs
    sv = np.linalg.svd(vs, compute_uv=False)
    if sv[-1] <= rtol * max(sv[0], 1.0) or vs.shape[0] > vs.shape[1]:
        raise RankDeficiencyError(f"smallest singular value {sv[-1]:.3g} below threshold")
    out = vs.copy()
    for i in range(len(out)):
        for j in range(i):
            out[i] -= (out[j] @ out[i]) * out[j]
        out[i] /= np.linalg.norm(out[i])
    return out


def wedge_vectors(frame: np.ndarray, dim: int | None = None) -> Multivector:
    frame = np.atleast_2d(np.asarray(frame, dtype=float))
    dim = frame.shape[1] if dim is None else dim
    out = Multivector.scalar(1.0, dim)
    for v in frame:
        out = out ^ Multivector.vector(v)
    return out


def blade_from_frame(vs: Sequence[Sequence[float]]) -> UnitBlade:
    """Orthonormalize ``vs`` in order and wedge; orientation follows input order."""
    vs = np.atleast_2d(np.asarray(vs, dtype=float))
    frame = gram_schmidt(vs)
    return UnitBlade(wedge_vectors(frame), len(frame))


def pivoted_completion(
    basis: np.ndarray,
    dim: int,
    count: int,
    pivots: Sequence[int] | None = None,
) -> tuple[np.ndarray, list[int]]:
    """Orthonormal vectors orthogonal to ``basis`` built from standard basis vectors.

    Without ``pivots``, each step takes the standard basis vector with the largest
    remaining component (lowest index on ties).  With ``pivots`` the given order
    is reused verbatim, which keeps the result smooth under small perturbations.
    """
    basis = np.zeros((0, dim)) if basis is None else np.atleast_2d(basis).reshape(-1, dim)
    cand = np.eye(dim) - (basis.T @ basis) if len(basis) else np.eye(dim)
    chosen: list[np.ndarray] = []
    order: list[int] = []
    for step in range(count):
        resid = cand.copy()
        for q in chosen:
            resid -= np.outer(resid @ q, q)
        if pivots is None:
            norms = np.linalg.norm(resid, axis=1)
            norms[order] = -1.0
            idx = int(np.argmax(norms))
        else:
            idx = int(pivots[step])
        v = resid[idx]
        nv = np.linalg.norm(v)
        if nv <= RANK_RTOL:
            raise RankDeficiencyError("cannot complete frame: pivot vector vanished")
        chosen.append(v / nv)
        order.append(idx)
    return np.array(chosen).reshape(count, dim), order


def factor_blade(B) -> np.ndarray:
    """Orthonormal frame (rows) whose wedge reproduces the unit blade ``B``."""
    A = _mv(B)
    if not isinstance(B, UnitBlade):
        B = UnitBlade.from_multivector(A)
        A = B.mv
    m, N = B.grade, A.dim
    if m == 0:
        return np.zeros((0, N))
    # project every standard basis vector onto the blade, then pivot greedily
    projected = np.array([project(Multivector.vector(e), B).vector_part for e in np.eye(N)])
    chosen: list[np.ndarray] = []
    used: list[int] = []
    for _ in range(m):
        resid = projected.copy()
        for q in chosen:
            resid -= np.outer(resid @ q, q)
        norms = np.linalg.norm(resid, axis=1)
        norms[used] = -1.0
        idx = int(np.argmax(norms))
        chosen.append(resid[idx] / norms[idx])
        used.append(idx)
    frame = np.array(chosen)
    if (wedge_vectors(frame) - A).norm() > (wedge_vectors(frame) + A).norm():
        frame[-1] *= -1.0
    return frame


def is_member(v: Sequence[float], B, tol: float = 1e-10) -> bool:
    v = np.asarray(v, dtype=float)
    A = _mv(B)
    return norm(Multivector.vector(v) ^ A) <= tol * np.linalg.norm(v) or not np.any(v)


def blade_inverse(B) -> Multivector:
    A = _mv(B)
    return reversion(A) / (A.coeffs @ A.coeffs)


def project(A: Multivector, B) -> Multivector:
    """Orthogonal projection onto the subspace of blade ``B``: ``(A ⌟ B) ⌟ B^-1``."""
    Bm = _mv(B)
    return contract_left(contract_left(A, Bm), blade_inverse(Bm))


def reject(A: Multivector, B) -> Multivector:
    return A - project(A, B)


def hodge_dual(A: Multivector, dim: int | None = None) -> Multivector:
    """``★A = reversion(A) ⌟ i``."""
    if dim is not None and dim != A.dim:
        raise ValueError(f"multivector lives in R^{A.dim}, not R^{dim}")
    return contract_left(reversion(A), pseudoscalar(A.dim))
