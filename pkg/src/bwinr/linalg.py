"""Dense symmetric linear algebra used by the conditioning diagnostics.

Matrices are plain float64 2-D ``numpy`` arrays (row-major). Eigenvalues
of symmetric matrices are delegated to LAPACK via ``numpy.linalg.eigvalsh``,
which meets the accuracy contract here (all matrices are dense, n <= ~1000).
Condition numbers of near-singular positive semidefinite matrices are
floored so that downstream logs stay finite; the floor is always flagged.
"""

from typing import NamedTuple

import numpy as np

from .errors import InvalidInputError, ShapeError

# Relative floor applied to the smallest eigenvalue when computing
# condition numbers of PSD matrices. Feature Grams of ReLU networks are
# routinely numerically singular, so a finite, flagged value is reported
# instead of inf.
COND_FLOOR_REL = 1e-14

SYM_TOL_DEFAULT = 1e-10


def _as_matrix(a, name="matrix"):
    a = np.asarray(a, dtype=float)
    if a.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got ndim={a.ndim}")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    return a


def matmul(a, b):
    """Matrix product with explicit shape validation."""
    a = _as_matrix(a, "a")
    b = _as_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(
            f"inner dimensions differ: {a.shape} x {b.shape}"
        )
    return a @ b


def sym_eigvals(a, tol=SYM_TOL_DEFAULT):
    """Eigenvalues of a symmetric matrix, sorted ascending.

    ``a`` must be square and symmetric up to ``tol`` relative to its
    largest entry; the symmetrized matrix (a + a.T)/2 is what gets
    decomposed, so the result is insensitive to round-off asymmetry.
    """
    a = _as_matrix(a)
    n, m = a.shape
    if n != m:
        raise ShapeError(f"matrix must be square, got {a.shape}")
    scale = max(1.0, float(np.abs(a).max()))
    asym = float(np.abs(a - a.T).max())
    if asym > tol * scale:
        raise InvalidInputError(
            f"matrix is not symmetric: max |a - a.T| = {asym:.3e} "
            f"exceeds {tol:.1e} * {scale:.3e}"
        )
    return np.linalg.eigvalsh((a + a.T) / 2.0)


class ConditionNumber(NamedTuple):
    """Condition number lambda_max / lambda_min of a symmetric PSD matrix.

    When lambda_min falls below the relative floor, ``value`` is computed
    against the floor instead and ``floored`` is set.
    """

    value: float
    floored: bool
    floor: float


def condition_number(a, tol=SYM_TOL_DEFAULT):
    """Condition number of a symmetric PSD matrix, with singularity floor."""
    eigs = sym_eigvals(a, tol=tol)
    lam_max = float(eigs[-1])
    lam_min = float(eigs[0])
    if lam_max <= 0.0:
        raise InvalidInputError(
            f"matrix has no positive eigenvalue (lambda_max={lam_max:.3e})"
        )
    floor = COND_FLOOR_REL * lam_max
    if lam_min < floor:
        return ConditionNumber(lam_max / floor, True, floor)
    return ConditionNumber(lam_max / lam_min, False, floor)


def gershgorin_discs(a):
    """Per-row Gershgorin discs as (center, radius) pairs.

    Center is the diagonal entry, radius the absolute sum of the row's
    off-diagonal entries. Every eigenvalue lies in the union of the discs.
    """
    a = _as_matrix(a)
    n, m = a.shape
    if n != m:
        raise ShapeError(f"matrix must be square, got {a.shape}")
    abs_a = np.abs(a)
    radii = abs_a.sum(axis=1) - np.diag(abs_a)
    return list(zip(np.diag(a).tolist(), radii.tolist()))
