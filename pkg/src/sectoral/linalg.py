"""Dense complex linear algebra kernel.

Everything downstream (contour quadrature, projections, experiments) reduces
to shifted solves, eigendecompositions, and operator norms of dense complex
matrices, all of which live here.  Matrices are plain square ``numpy``
arrays of ``complex128``; helpers validate shape and finiteness at the
boundaries.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NotHermitian, NotPositiveDefinite, SingularMatrix

PIVOT_REL_THRESHOLD = 1e-13


def as_matrix(a) -> np.ndarray:
    """Validate and return `a` as a square complex matrix."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not (np.all(np.isfinite(m.real)) and np.all(np.isfinite(m.imag))):
        raise ValueError("matrix entries must be finite")
    return m


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues (sorted lexicographically by (real, imag)), matching right
    eigenvectors as columns, and the reciprocal of the smallest singular
    value of the eigenvector matrix as a defectiveness indicator."""

    values: np.ndarray
    right_vectors: np.ndarray
    condition_estimate: float


def solve(A, B) -> np.ndarray:
    """Solve A X = B with partial pivoting.

    Raises SingularMatrix when a pivot falls below
    ``PIVOT_REL_THRESHOLD * max|A|``.
    """
    A = as_matrix(A)
    B = np.asarray(B, dtype=complex)
    if B.shape[0] != A.shape[0]:
        raise ValueError("dimension mismatch between A and B")
    with warnings.catch_warnings():
        # exact zero pivots are reported via SingularMatrix below
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    pivots = np.abs(np.diag(lu))
    threshold = PIVOT_REL_THRESHOLD * max(np.abs(A).max(), 1e-300)
    min_pivot = pivots.min() if pivots.size else 0.0
    if min_pivot < threshold:
        raise SingularMatrix(min_pivot)
    return scipy.linalg.lu_solve((lu, piv), B, check_finite=False)


def eig(A) -> EigenDecomposition:
    """Full eigendecomposition with lexicographic (real, imag) ordering.

    Never refuses defective input; the caller decides via
    ``condition_estimate`` whether diagonalization-based results are usable.
    """
    A = as_matrix(A)
    if A.shape[0] > 1024:
        raise ValueError("eig is limited to dim <= 1024")
    values, vectors = np.linalg.eig(A)
    order = np.lexsort((values.imag, values.real))
    values = values[order]
    vectors = vectors[:, order]
    smin = np.linalg.svd(vectors, compute_uv=False)[-1]
    cond = 1.0 / smin if smin > 0 else np.inf
    return EigenDecomposition(values, vectors, float(cond))


def operator_norm_2(A) -> float:
    """Largest singular value."""
    A = as_matrix(A)
    if A.size == 0:
        return 0.0
    return float(np.linalg.svd(A, compute_uv=False)[0])


def inv_sqrt_hpd(H) -> np.ndarray:
    """Inverse square root of a Hermitian positive definite matrix."""
    H = as_matrix(H)
    scale = operator_norm_2(H)
    if np.linalg.norm(H - H.conj().T) > 1e-10 * max(scale, 1e-300):
        raise NotHermitian("input deviates from Hermitian beyond tolerance")
    w, U = np.linalg.eigh(H)
    if w.min() <= 0:
        raise NotPositiveDefinite(float(w.min()))
    return (U * (w ** -0.5)) @ U.conj().T


def schur_bound(K) -> float:
    """Schur-test upper bound sqrt(C1*C2) on the operator 2-norm, from the
    maximal row and column l1-sums of absolute entries."""
    K = as_matrix(K)
    if K.size == 0:
        return 0.0
    absK = np.abs(K)
    return float(np.sqrt(absK.sum(axis=1).max() * absK.sum(axis=0).max()))


def format_matrix(A) -> str:
    """Serialize to the fixture text format: first line dim, then dim rows
    of "re+imj" tokens.  Lossless for 17-significant-digit decimals."""
    A = as_matrix(A)
    lines = [str(A.shape[0])]
    for row in A:
        lines.append(" ".join(f"{z.real:.17g}{z.imag:+.17g}j" for z in row))
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> np.ndarray:
    """Inverse of :func:`format_matrix`."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix text")
    dim = int(lines[0])
    if len(lines) != dim + 1:
        raise ValueError(f"expected {dim} rows, got {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        tokens = ln.split()
        if len(tokens) != dim:
            raise ValueError(f"expected {dim} entries per row, got {len(tokens)}")
        rows.append([complex(tok) for tok in tokens])
    return as_matrix(rows)
