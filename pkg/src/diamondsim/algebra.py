"""Minimal dense complex-matrix kernel.

Hermitian eigendecomposition and linear solves for the small matrices this
package works with (4x4 coupling matrices, 16x16 generators).  Both routines
are written out explicitly instead of delegating to LAPACK so that results
are bit-reproducible across environments and failure modes carry precise
diagnostics (pivot index, convergence state).  Everything here is O(n^3),
which is irrelevant at these sizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SimulationError

__all__ = [
    "EigenDecomposition",
    "SingularMatrixError",
    "herm_eigen",
    "matrix_inf_norm",
    "solve_linear",
]

# Jacobi sweeps stop once the off-diagonal Frobenius mass drops below this
# fraction of the total; 4x4 Hermitian inputs typically need 4-6 sweeps.
_JACOBI_REL_TOL = 1e-14
_JACOBI_MAX_SWEEPS = 100

# Relative pivot magnitude below which elimination declares the matrix singular.
_PIVOT_REL_TOL = 1e-14

_HERMITICITY_REL_TOL = 1e-12
_RESIDUAL_REL_TOL = 1e-10
_ORTHONORMALITY_TOL = 1e-12


class SingularMatrixError(SimulationError):
    """Linear system is numerically singular.

    Attributes:
        pivot_index: elimination column whose pivot fell under the threshold.
    """

    def __init__(self, pivot_index: int, pivot_magnitude: float, threshold: float):
        self.pivot_index = pivot_index
        super().__init__(
            f"matrix is numerically singular at pivot {pivot_index} "
            f"(|pivot| = {pivot_magnitude:.3e}, threshold = {threshold:.3e})"
        )


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues in ascending order and matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def matrix_inf_norm(a: np.ndarray) -> float:
    """Induced infinity norm (maximum absolute row sum)."""
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.max(np.sum(np.abs(a), axis=1)))


def _require_square(a: np.ndarray, where: str) -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{where} requires a square matrix, got shape {a.shape}")


def herm_eigen(a) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Rotations run in a fixed (p, q) order until the off-diagonal Frobenius
    mass falls below 1e-14 of the total, capped at 100 sweeps.  Eigenvalues
    come back ascending; eigenvector column k pairs with eigenvalue k.  The
    phase of each eigenvector is pinned by making its largest-magnitude
    component real and positive (ties broken at the lowest index), so
    identical inputs give bit-identical output.

    Raises ValueError for non-square or non-Hermitian input and RuntimeError
    if the decomposition fails its own residual checks.
    """
    mat = np.asarray(a, dtype=np.complex128)
    _require_square(mat, "herm_eigen")
    scale = matrix_inf_norm(mat)
    if matrix_inf_norm(mat - mat.conj().T) >= _HERMITICITY_REL_TOL * (1.0 + scale):
        raise ValueError("herm_eigen requires a Hermitian matrix")

    values, vectors = _jacobi(mat.copy())
    order = np.argsort(values, kind="stable")
    values = values[order]
    vectors = vectors[:, order]
    for k in range(vectors.shape[1]):
        col = vectors[:, k]
        lead = int(np.argmax(np.abs(col)))
        mag = abs(col[lead])
        if mag > 0.0:
            vectors[:, k] = col * (col[lead].conjugate() / mag)

    residual = np.max(np.abs(mat @ vectors - vectors * values[np.newaxis, :]))
    if residual >= _RESIDUAL_REL_TOL * (1.0 + scale):
        raise RuntimeError(f"eigendecomposition residual {residual:.3e} out of tolerance")
    gram = vectors.conj().T @ vectors - np.eye(mat.shape[0])
    if np.max(np.abs(gram)) >= _ORTHONORMALITY_TOL:
        raise RuntimeError("eigenvector columns lost orthonormality")
    return EigenDecomposition(eigenvalues=values, eigenvectors=vectors)


def _jacobi(work: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = work.shape[0]
    vectors = np.eye(n, dtype=np.complex128)
    total = float(np.linalg.norm(work))
    if total == 0.0:
        return np.zeros(n, dtype=np.float64), vectors
    for _ in range(_JACOBI_MAX_SWEEPS):
        off = float(np.linalg.norm(work - np.diag(np.diagonal(work))))
        if off < _JACOBI_REL_TOL * total:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                _rotate(work, vectors, p, q)
    else:
        raise RuntimeError("Jacobi iteration did not converge within 100 sweeps")
    return np.diagonal(work).real.copy(), vectors


def _rotate(work: np.ndarray, vectors: np.ndarray, p: int, q: int) -> None:
    apq = work[p, q]
    babs = abs(apq)
    if babs == 0.0:
        return
    phase = apq / babs
    app = work[p, p].real
    aqq = work[q, q].real
    tau = (aqq - app) / (2.0 * babs)
    # Smaller root of t^2 + 2*tau*t - 1 = 0, for the rotation angle <= pi/4.
    if tau >= 0.0:
        t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
    else:
        t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
    c = 1.0 / math.sqrt(1.0 + t * t)
    s = t * c

    # Unitary J: J[p,p] = c*phase, J[p,q] = s*phase, J[q,p] = -s, J[q,q] = c;
    # work <- J^H work J zeroes the (p, q) element.
    col_p = work[:, p].copy()
    col_q = work[:, q].copy()
    work[:, p] = c * phase * col_p - s * col_q
    work[:, q] = s * phase * col_p + c * col_q
    row_p = work[p, :].copy()
    row_q = work[q, :].copy()
    pc = phase.conjugate()
    work[p, :] = c * pc * row_p - s * row_q
    work[q, :] = s * pc * row_p + c * row_q
    work[p, p] = app - t * babs
    work[q, q] = aqq + t * babs
    work[p, q] = 0.0
    work[q, p] = 0.0

    vcol_p = vectors[:, p].copy()
    vcol_q = vectors[:, q].copy()
    vectors[:, p] = c * phase * vcol_p - s * vcol_q
    vectors[:, q] = s * phase * vcol_p + c * vcol_q


def solve_linear(a, b) -> np.ndarray:
    """Solve the dense complex system a @ x = b.

    Gaussian elimination with partial pivoting.  A pivot whose magnitude
    falls below 1e-14 * ||a||_inf raises SingularMatrixError carrying the
    pivot index; the computed solution is verified against the residual
    bound ||a x - b||_inf < 1e-10 * (1 + ||a||_inf * ||x||_inf).
    """
    a0 = np.asarray(a, dtype=np.complex128)
    _require_square(a0, "solve_linear")
    rhs0 = np.asarray(b, dtype=np.complex128)
    n = a0.shape[0]
    if rhs0.shape != (n,):
        raise ValueError(f"solve_linear needs a right-hand side of shape ({n},), got {rhs0.shape}")

    norm_a = matrix_inf_norm(a0)
    threshold = _PIVOT_REL_TOL * norm_a
    work = a0.copy()
    rhs = rhs0.copy()
    for k in range(n):
        lead = int(np.argmax(np.abs(work[k:, k]))) + k
        pivot = abs(work[lead, k])
        if pivot <= threshold:
            raise SingularMatrixError(k, pivot, threshold)
        if lead != k:
            work[[k, lead]] = work[[lead, k]]
            rhs[[k, lead]] = rhs[[lead, k]]
        factors = work[k + 1 :, k] / work[k, k]
        work[k + 1 :, k + 1 :] -= np.outer(factors, work[k, k + 1 :])
        work[k + 1 :, k] = 0.0
        rhs[k + 1 :] -= factors * rhs[k]

    x = np.zeros(n, dtype=np.complex128)
    for k in range(n - 1, -1, -1):
        x[k] = (rhs[k] - work[k, k + 1 :] @ x[k + 1 :]) / work[k, k]

    residual = float(np.max(np.abs(a0 @ x - rhs0)))
    bound = _RESIDUAL_REL_TOL * (1.0 + norm_a * float(np.max(np.abs(x), initial=0.0)))
    if residual >= bound:
        raise SimulationError(
            f"linear solve residual {residual:.3e} exceeds bound {bound:.3e}; system is ill-conditioned"
        )
    return x
