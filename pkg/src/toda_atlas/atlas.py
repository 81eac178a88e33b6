"""Weyl-indexed charts on the manifold of symmetric matrices with fixed
simple spectrum, and their relation to the Bruhat-cell decomposition.

A flag point is a symmetric traceless matrix with the given strictly
decreasing spectrum h. The chart indexed by a permutation w identifies a
dense open subset of those points with the affine space of strictly
lower perturbations of the permuted diagonal matrix ``h_conjugate(h, w)``.
The forward map diagonalizes, strips the permutation, factors the
orthogonal frame through the unit-lower projection, and conjugates the
permuted diagonal; the inverse runs the same pipeline backwards.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ChartDomainError
from .factorizations import trailing_minors, unbar_factorize, unit_lower_inverse, f_inverse
from .linalg_core import Spectrum, as_matrix, symmetric_eigen
from .weyl_profiles import Permutation, InversionSets, inversion_sets, lower_pairs, perm_matrix

__all__ = [
    "FlagPoint",
    "ChartCoords",
    "BruhatClass",
    "h_conjugate",
    "nbar_from_affine",
    "chart_inverse",
    "chart_domain_test",
    "chart_forward",
    "coords_from_frame",
    "bruhat_affine_image",
    "bruhat_classify",
]

# Points whose frame has a trailing minor at or below this are treated as
# outside the chart; callers fall back to another chart (one always
# accepts). Strictly wider than the factorization pivot threshold, so an
# accepted point never hits a vanishing pivot downstream.
DOMAIN_MINOR_TOL = 1e-11

_SYMMETRY_TOL = 1e-10
_EIGENVALUE_TOL = 1e-8
_FIBER_TOL = 1e-12


@dataclass(frozen=True)
class FlagPoint:
    """A symmetric matrix with the fixed simple spectrum h."""

    y: np.ndarray
    h: Spectrum

    def __post_init__(self):
        y = as_matrix(self.y).copy()
        y.setflags(write=False)
        object.__setattr__(self, "y", y)
        if y.shape[0] != self.h.n:
            raise ValueError(f"dimension mismatch: matrix is {y.shape[0]}, spectrum is {self.h.n}")
        scale = max(1.0, float(np.linalg.norm(y)))
        if np.linalg.norm(y - y.T) > _SYMMETRY_TOL * scale:
            raise ValueError("flag point matrix is not symmetric")
        eigs = np.linalg.eigvalsh(y)[::-1]
        if np.max(np.abs(eigs - np.array(self.h.values))) > _EIGENVALUE_TOL:
            raise ValueError(
                f"matrix eigenvalues {tuple(eigs)} do not match the declared spectrum {self.h.values}"
            )


@dataclass(frozen=True)
class ChartCoords:
    """Chart value: strictly lower coordinates around the origin at w."""

    w: Permutation
    lower: np.ndarray
    h: Spectrum

    def __post_init__(self):
        lower = as_matrix(self.lower).copy()
        if lower.shape[0] != self.h.n or self.w.n != self.h.n:
            raise ValueError("permutation, spectrum, and coordinate sizes disagree")
        if np.any(np.triu(lower) != 0.0):
            raise ValueError("coordinates must be strictly lower triangular (exact zeros above)")
        lower.setflags(write=False)
        object.__setattr__(self, "lower", lower)


class BruhatClass(Enum):
    IN_BRUHAT = "in_bruhat"
    IN_OPPOSITE = "in_opposite"
    NEITHER = "neither"
    BOTH = "both"


def h_conjugate(h: Spectrum, w: Permutation) -> np.ndarray:
    """Diagonal matrix with entry i equal to h[w^-1(i)] (conjugation by w)."""
    if h.n != w.n:
        raise ValueError("spectrum and permutation sizes disagree")
    inv = w.inverse()
    return np.diag([h.values[inv(i) - 1] for i in range(1, h.n + 1)])


def nbar_from_affine(b, w: Permutation, h: Spectrum) -> np.ndarray:
    """Unit lower triangular g with g D g^-1 = b, D the permuted diagonal.

    Solved column by column by forward substitution; solvable because the
    diagonal gaps of a regular permuted diagonal never vanish.
    """
    b = as_matrix(b)
    d = np.diag(h_conjugate(h, w))
    offset = b - np.diag(d)
    if np.max(np.abs(np.triu(offset))) > _FIBER_TOL:
        raise ValueError("matrix is not in the affine fiber: nonzero entries on or above the diagonal")
    x = np.tril(offset, -1)

    n = h.n
    g = np.eye(n)
    for j in range(n):
        for i in range(j + 1, n):
            g[i, j] = (x[i, j:i] @ g[j:i, j]) / (d[j] - d[i])
    return g


def chart_inverse(c: ChartCoords) -> FlagPoint:
    """Flag point with the given chart coordinates.

    Pipeline: affine point -> unit lower conjugator -> big-cell frame ->
    conjugate the spectrum by frame times permutation. Globally defined on
    the whole coordinate space.
    """
    dmat = h_conjugate(c.h, c.w)
    g = nbar_from_affine(dmat + c.lower, c.w, c.h)
    k = f_inverse(g)
    frame = k @ perm_matrix(c.w)
    y = frame @ c.h.diag() @ frame.T
    return FlagPoint(0.5 * (y + y.T), c.h)


def _frame(y: FlagPoint, w: Permutation) -> np.ndarray:
    """Special orthogonal candidate frame Q P_w^-1 for the chart at w."""
    _, q = symmetric_eigen(np.asarray(y.y))
    kp = q @ perm_matrix(w).T
    if np.linalg.det(kp) < 0.0:
        q = q.copy()
        q[:, -1] = -q[:, -1]
        kp = q @ perm_matrix(w).T
    return kp


def chart_domain_test(y: FlagPoint, w: Permutation) -> bool:
    """Whether y lies in the chart at w.

    True when every trailing principal minor of the de-permuted
    eigenframe exceeds DOMAIN_MINOR_TOL in magnitude. Minor magnitudes do
    not depend on the eigenvector sign choices.
    """
    kp = _frame(y, w)
    return bool(np.min(np.abs(trailing_minors(kp))) > DOMAIN_MINOR_TOL)


def coords_from_frame(kp, w: Permutation, h: Spectrum) -> ChartCoords:
    """Chart coordinates from a special orthogonal frame Q P_w^-1.

    The sign factor of the factorization absorbs the eigenvector sign
    ambiguity, so the value does not depend on which admissible frame is
    supplied.
    """
    nbar = unbar_factorize(kp).nbar
    dmat = h_conjugate(h, w)
    b = nbar @ dmat @ unit_lower_inverse(nbar)
    return ChartCoords(w=w, lower=np.tril(b - dmat, -1), h=h)


def chart_forward(y: FlagPoint, w: Permutation) -> ChartCoords:
    """Chart coordinates of y in the chart at w.

    Raises ChartDomainError when a trailing minor of the frame is at or
    below the domain threshold.
    """
    kp = _frame(y, w)
    minors = np.abs(trailing_minors(kp))
    if np.min(minors) <= DOMAIN_MINOR_TOL:
        j = int(np.argmin(minors)) + 1
        raise ChartDomainError(
            f"point is outside the chart at {w.images}: trailing minor of size {j} "
            f"is {minors[j - 1]:.2e}"
        )
    return coords_from_frame(kp, w, y.h)


def bruhat_affine_image(w: Permutation) -> InversionSets:
    """Coordinate subspaces cut out by the cells in the chart at w.

    Coordinates supported on the unstable pairs make up the image of the
    cell at w; coordinates supported on the stable pairs make up the
    image of the opposite cell.
    """
    return inversion_sets(w)


def bruhat_classify(y: FlagPoint, w: Permutation, tol: float) -> BruhatClass:
    """Classify y against the two cells at w by its coordinate support."""
    coords = chart_forward(y, w)
    sets = bruhat_affine_image(w)
    support = {
        (i, j)
        for i, j in lower_pairs(w.n)
        if abs(coords.lower[i - 1, j - 1]) > tol
    }
    in_cell = support <= sets.unstable
    in_opposite = support <= sets.stable
    if in_cell and in_opposite:
        return BruhatClass.BOTH
    if in_cell:
        return BruhatClass.IN_BRUHAT
    if in_opposite:
        return BruhatClass.IN_OPPOSITE
    return BruhatClass.NEITHER
