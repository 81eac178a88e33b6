"""Triangular factorizations of unimodular matrices and the maps built on them.

Two factorizations are implemented.

* ``kan_factorize``: orthogonal x positive-diagonal x unit-upper, by
  modified Gram-Schmidt on columns (with a second orthogonalization pass
  so the orthogonality residual stays at machine level).

* ``unbar_factorize``: upper-triangular-positive-diagonal x unit-lower x
  sign-diagonal, for special orthogonal input. It exists exactly when all
  trailing principal minors (bottom-right j x j blocks) are nonzero, and
  is computed by Crout elimination on the antidiagonally flipped matrix,
  whose leading minors are those trailing minors.

On top of these sit the projection ``f_map`` onto the unit-lower factor,
its inverse, the Gram-Schmidt embedding of unit lower triangular
matrices into the special orthogonal group, and the comparison maps
``phi`` / ``phi_sigma`` obtained by composing the two projections (with a
permutation conjugation in between for ``phi_sigma``).
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import FactorizationError
from .linalg_core import as_matrix, require_unit_lower
from .weyl_profiles import Permutation, l_sigma_membership, perm_matrix

__all__ = [
    "KANFactors",
    "UNbarFactors",
    "CellStatus",
    "ChevalleyResult",
    "kan_factorize",
    "unbar_factorize",
    "chevalley_test",
    "f_map",
    "f_inverse",
    "gs_embed",
    "phi",
    "phi_sigma",
    "unit_lower_inverse",
    "trailing_minors",
]

# Below this magnitude a Crout pivot is declared a vanishing trailing
# minor; inputs are orthogonal matrices with O(1) entries.
PIVOT_TOL = 1e-13

_DET_TOL = 1e-8
_ORTHO_TOL = 1e-10


def _require_special_orthogonal(k, tol=_ORTHO_TOL):
    k = as_matrix(k)
    n = k.shape[0]
    if np.linalg.norm(k.T @ k - np.eye(n)) > tol:
        raise ValueError("matrix is not orthogonal")
    if abs(np.linalg.det(k) - 1.0) > tol:
        raise ValueError("matrix is orthogonal but has determinant -1")
    return k


@dataclass(frozen=True)
class KANFactors:
    """k orthogonal, a positive diagonal with unit product, n unit upper."""

    k: np.ndarray
    a: np.ndarray
    n: np.ndarray


@dataclass(frozen=True)
class UNbarFactors:
    """u upper with positive diagonal, nbar unit lower, m = diag(+-1), det m = +1."""

    u: np.ndarray
    nbar: np.ndarray
    m: np.ndarray


class CellStatus(Enum):
    IN_C = "in_c"
    IN_CM_ONLY = "in_cm_only"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class ChevalleyResult:
    status: CellStatus
    m: np.ndarray | None = None
    minor_index: int | None = None


def kan_factorize(g) -> KANFactors:
    """Gram-Schmidt split g = k a n of a determinant-one matrix.

    Column j of k is the normalized j-th Gram-Schmidt vector of g's
    columns; a holds the (positive) normalization factors and n the
    unit-upper change of basis. The triangular zero patterns and the
    unit diagonal of n are written exactly, not rounded.
    """
    g = as_matrix(g)
    det = float(np.linalg.det(g))
    if abs(det - 1.0) > _DET_TOL:
        raise ValueError(f"input must have determinant one, got {det!r}")

    n = g.shape[0]
    q = np.zeros((n, n))
    r = np.zeros((n, n))
    for j in range(n):
        v = g[:, j].copy()
        for _ in range(2):
            for i in range(j):
                c = float(q[:, i] @ v)
                v -= c * q[:, i]
                r[i, j] += c
        norm = float(np.linalg.norm(v))
        if norm < 1e-12:
            raise ValueError(f"column {j + 1} is numerically dependent on earlier columns")
        r[j, j] = norm
        q[:, j] = v / norm

    diag = np.diag(r).copy()
    a = np.diag(diag)
    unit_upper = np.triu(r / diag[:, None])
    np.fill_diagonal(unit_upper, 1.0)
    return KANFactors(k=q, a=a, n=unit_upper)


def unbar_factorize(k) -> UNbarFactors:
    """Split special orthogonal k into u nbar m by Crout elimination.

    Flipping k about the antidiagonal turns trailing principal minors
    into leading ones; Crout LU of the flip (lower x unit-upper), with
    the pivot signs pulled into a sign diagonal and everything flipped
    back, gives k = u nbar m. det(m) = +1 is forced by det(k) = 1 and
    the positive diagonal of u.

    Raises FactorizationError with the failing minor index when a pivot
    falls below PIVOT_TOL.
    """
    k = _require_special_orthogonal(k)
    n = k.shape[0]
    flipped = k[::-1, ::-1].copy()

    low = np.zeros((n, n))
    upp = np.eye(n)
    for c in range(n):
        for i in range(c, n):
            low[i, c] = flipped[i, c] - low[i, :c] @ upp[:c, c]
        pivot = low[c, c]
        if abs(pivot) < PIVOT_TOL:
            raise FactorizationError(
                f"not factorizable: trailing principal minor of size {c + 1} "
                f"vanishes (pivot {pivot:.2e})",
                minor_index=c + 1,
            )
        for j in range(c + 1, n):
            upp[c, j] = (flipped[c, j] - low[c, :c] @ upp[:c, j]) / pivot

    signs = np.sign(np.diag(low))
    u = (low * signs)[::-1, ::-1].copy()
    nbar = (signs[:, None] * upp * signs[None, :])[::-1, ::-1].copy()
    m = np.diag(signs[::-1]).copy()
    if float(np.prod(signs)) != 1.0:
        raise FactorizationError("sign factor has determinant -1; input was not special orthogonal")
    return UNbarFactors(u=u, nbar=nbar, m=m)


def trailing_minors(k) -> np.ndarray:
    """Determinants of the bottom-right j x j blocks, j = 1..n-1."""
    k = as_matrix(k)
    n = k.shape[0]
    return np.array([np.linalg.det(k[n - j:, n - j:]) for j in range(1, n)])


def chevalley_test(k) -> ChevalleyResult:
    """Locate k relative to the big cell.

    IN_C: factorizable with trivial sign factor. IN_CM_ONLY: factorizable
    but only up to a nontrivial sign diagonal. OUTSIDE: some trailing
    principal minor vanishes (its index is reported).
    """
    try:
        factors = unbar_factorize(k)
    except FactorizationError as err:
        if err.minor_index is None:
            raise
        return ChevalleyResult(CellStatus.OUTSIDE, minor_index=err.minor_index)
    if np.array_equal(factors.m, np.eye(factors.m.shape[0])):
        return ChevalleyResult(CellStatus.IN_C, m=factors.m)
    return ChevalleyResult(CellStatus.IN_CM_ONLY, m=factors.m)


def f_map(k) -> np.ndarray:
    """Unit-lower factor of k = u nbar; defined only on the big cell."""
    factors = unbar_factorize(k)
    if not np.array_equal(factors.m, np.eye(factors.m.shape[0])):
        raise FactorizationError(
            "matrix factors only up to a nontrivial sign diagonal; it is outside the big cell"
        )
    return factors.nbar


def unit_lower_inverse(nbar) -> np.ndarray:
    """Inverse of a unit lower triangular matrix by forward substitution."""
    nbar = require_unit_lower(nbar)
    n = nbar.shape[0]
    inv = np.eye(n)
    for c in range(n):
        for i in range(c + 1, n):
            inv[i, c] = -(nbar[i, c:i] @ inv[c:i, c])
    return inv


def f_inverse(nbar) -> np.ndarray:
    """The unique big-cell matrix whose unit-lower factor is nbar.

    Computed by inverting nbar, taking the orthogonal factor of the
    Gram-Schmidt split of the inverse, and transposing.
    """
    nbar = require_unit_lower(nbar)
    return kan_factorize(unit_lower_inverse(nbar)).k.T


def gs_embed(g) -> np.ndarray:
    """Orthogonal factor of the Gram-Schmidt split of a unit lower g.

    Distinct from f_inverse in general; the composition f_map(gs_embed)
    is the nontrivial comparison map phi.
    """
    g = require_unit_lower(g)
    return kan_factorize(g).k


def phi(g) -> np.ndarray:
    """Compare the two triangular splittings: f_map after gs_embed."""
    return f_map(gs_embed(g))


def phi_sigma(sigma: Permutation, g, tol: float = 1e-12) -> np.ndarray:
    """Pivoted comparison map: Gram-Schmidt embed, conjugate, project.

    Requires g to stay lower triangular under conjugation by sigma^-1;
    the result then stays lower triangular under conjugation by sigma.
    The conjugation sandwiches the embedded frame between the inverse
    representative and the representative; that orientation is the one
    that maps between the stated subgroups. The conjugated frame landing
    outside the big cell would contradict the precondition, so such a
    failure propagates as an internal FactorizationError rather than a
    user error.

    The inverse map is phi_sigma_inverse, not phi_sigma with the inverse
    permutation: undoing the construction requires undoing the two
    projections in the opposite order, which is a different composition.
    """
    g = require_unit_lower(g, tol)
    if not l_sigma_membership(g, sigma.inverse(), tol):
        raise ValueError(
            "matrix does not stay lower triangular under conjugation by the inverse permutation"
        )
    p = perm_matrix(sigma)
    return f_map(p.T @ gs_embed(g) @ p)


def gs_embed_inverse(k) -> np.ndarray:
    """Unit lower triangular g whose Gram-Schmidt orthogonal factor is k.

    Such a g exists exactly when k is in the big cell; it is the
    unit-lower factor of k written as unit-lower times
    upper-positive-diagonal, recovered here from the factorization of the
    transpose.
    """
    return unit_lower_inverse(f_map(as_matrix(k).T))


def phi_sigma_inverse(sigma: Permutation, y, tol: float = 1e-12) -> np.ndarray:
    """Exact inverse of phi_sigma(sigma, .): maps its image back to its domain."""
    y = require_unit_lower(y, tol)
    if not l_sigma_membership(y, sigma, tol):
        raise ValueError(
            "matrix does not stay lower triangular under conjugation by the permutation"
        )
    p = perm_matrix(sigma)
    return gs_embed_inverse(p @ f_inverse(y) @ p.T)
