"""Dense small-matrix primitives shared by every other module.

Matrices are plain float numpy arrays (2 <= n <= 12 is the supported
range; nothing here is tuned for large n). The two structured values,
:class:`Spectrum` and :class:`IsospectralWitness`, are immutable and
validated on construction. All operations are pure functions, so the
whole module is safe to call concurrently.

The inner product throughout is the trace form ``trace(X Y)``. It is a
positive multiple of the Killing form, and only signs and monotonicity
of norms ever matter here, so the constant is dropped.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Spectrum",
    "IsospectralWitness",
    "as_matrix",
    "require_unit_lower",
    "commutator",
    "pi_k",
    "pi_u",
    "theta",
    "btheta_norm_sq",
    "symmetric_eigen",
    "isospectral_witness",
]

TRACE_TOL = 1e-12
GAP_TOL = 1e-8

# Cyclic Jacobi eigensolver controls: small n, bit-reproducible, and free
# of external dependencies.
_JACOBI_SWEEP_TOL = 1e-13
_JACOBI_MAX_SWEEPS = 50


def as_matrix(x) -> np.ndarray:
    """Validate and return a finite square float matrix with n >= 2."""
    a = np.asarray(x, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] < 2:
        raise ValueError(f"matrices must be at least 2x2, got {a.shape[0]}x{a.shape[0]}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def require_unit_lower(g, tol: float = 1e-12) -> np.ndarray:
    """Validate that g is unit lower triangular within tol."""
    g = as_matrix(g)
    if np.max(np.abs(np.diag(g) - 1.0)) > tol:
        raise ValueError("matrix is not unit lower triangular: diagonal differs from 1")
    if np.max(np.abs(np.triu(g, 1))) > tol:
        raise ValueError("matrix is not unit lower triangular: nonzero entries above the diagonal")
    return g


@dataclass(frozen=True)
class Spectrum:
    """Strictly decreasing real eigenvalues summing to zero.

    The decreasing order pins the base point ``diag(values)`` inside the
    positive Weyl chamber; every chart and flow statement in the package
    relies on that normalization.
    """

    values: tuple

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) < 2:
            raise ValueError("a spectrum needs at least two eigenvalues")
        if not all(a > b for a, b in zip(vals, vals[1:])):
            raise ValueError(f"eigenvalues must be strictly decreasing: {vals}")
        total = sum(vals)
        if abs(total) > TRACE_TOL:
            raise ValueError(f"eigenvalues must sum to zero, got {total!r}")

    @property
    def n(self) -> int:
        return len(self.values)

    def diag(self) -> np.ndarray:
        return np.diag(self.values)

    def min_gap(self) -> float:
        return min(a - b for a, b in zip(self.values, self.values[1:]))


@dataclass(frozen=True)
class IsospectralWitness:
    """Power traces trace(x), trace(x^2), ..., trace(x^n).

    A smooth, well-conditioned stand-in for the spectrum itself: two
    matrices related by a similarity transform have identical witnesses,
    so drift of the witness along a trajectory measures loss of
    isospectrality without re-running an eigensolver. The Frobenius norm
    of the source matrix is kept so drift can be measured relative to
    the natural scale of each power (a trace of k-th powers is a sum of
    terms of size norm^k; power traces that happen to vanish, as all odd
    ones do for a symmetric spectrum, would otherwise be held to an
    absolute ruler).
    """

    power_traces: tuple
    frobenius: float = 1.0

    def drift_from(self, reference: "IsospectralWitness") -> float:
        """Largest relative deviation from a reference witness."""
        if len(self.power_traces) != len(reference.power_traces):
            raise ValueError("witnesses have different lengths")
        return max(
            abs(a - b) / max(1.0, abs(b), reference.frobenius ** k)
            for k, (a, b) in enumerate(
                zip(self.power_traces, reference.power_traces), start=1
            )
        )


def commutator(a, b) -> np.ndarray:
    """Matrix commutator a b - b a."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a @ b - b @ a


def pi_k(x) -> np.ndarray:
    """Skew-symmetric component of the skew + upper-triangular splitting.

    Returns ``low - low.T`` where ``low`` is the strictly lower part of x.
    """
    x = as_matrix(x)
    low = np.tril(x, -1)
    return low - low.T


def pi_u(x) -> np.ndarray:
    """Upper-triangular component of the skew + upper-triangular splitting."""
    x = as_matrix(x)
    return x - pi_k(x)


def theta(x) -> np.ndarray:
    """Cartan involution -x.T; fixes skew matrices, negates symmetric ones."""
    return -as_matrix(x).T


def btheta_norm_sq(x) -> float:
    """Frobenius norm square trace(x x.T)."""
    x = as_matrix(x)
    return float(np.sum(x * x))


def isospectral_witness(x) -> IsospectralWitness:
    """Power traces of x up to order n."""
    x = as_matrix(x)
    traces = []
    power = np.eye(x.shape[0])
    for _ in range(x.shape[0]):
        power = power @ x
        traces.append(float(np.trace(power)))
    return IsospectralWitness(tuple(traces), float(np.linalg.norm(x)))


def _jacobi_rotate(a, q, p, r):
    """Zero a[p, r] with a two-sided rotation, accumulating into q's columns."""
    apr = a[p, r]
    if apr == 0.0:
        return
    tau = (a[r, r] - a[p, p]) / (2.0 * apr)
    if tau >= 0.0:
        t = 1.0 / (tau + np.hypot(tau, 1.0))
    else:
        t = -1.0 / (-tau + np.hypot(tau, 1.0))
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c

    col_p = a[:, p].copy()
    col_r = a[:, r].copy()
    a[:, p] = c * col_p - s * col_r
    a[:, r] = s * col_p + c * col_r
    row_p = a[p, :].copy()
    row_r = a[r, :].copy()
    a[p, :] = c * row_p - s * row_r
    a[r, :] = s * row_p + c * row_r
    a[p, r] = 0.0
    a[r, p] = 0.0

    qc_p = q[:, p].copy()
    qc_r = q[:, r].copy()
    q[:, p] = c * qc_p - s * qc_r
    q[:, r] = s * qc_p + c * qc_r


def symmetric_eigen(y):
    """Diagonalize a symmetric traceless matrix by cyclic Jacobi sweeps.

    Returns ``(spectrum, q)`` with q special orthogonal (det +1, one
    column sign flipped if needed), columns ordered by strictly
    decreasing eigenvalue, and ``q @ spectrum.diag() @ q.T`` equal to y
    within 1e-10.

    Raises ValueError for non-symmetric input or when two eigenvalues
    collide below the regularity gap (the constructions downstream need
    a simple spectrum).
    """
    y = as_matrix(y)
    scale = max(1.0, float(np.linalg.norm(y)))
    if np.linalg.norm(y - y.T) > 1e-10 * scale:
        raise ValueError("matrix is not symmetric")

    n = y.shape[0]
    a = 0.5 * (y + y.T)
    q = np.eye(n)
    for _ in range(_JACOBI_MAX_SWEEPS):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= _JACOBI_SWEEP_TOL * scale:
            break
        for p in range(n - 1):
            for r in range(p + 1, n):
                _jacobi_rotate(a, q, p, r)
    else:
        raise RuntimeError("Jacobi sweeps did not converge")

    eigs = np.diag(a).copy()
    order = np.argsort(-eigs, kind="stable")
    lam = eigs[order]
    q = q[:, order]

    gaps = -np.diff(lam)
    if np.any(gaps <= GAP_TOL):
        i = int(np.argmin(gaps))
        raise ValueError(
            f"eigenvalue collision: gap {gaps[i]:.3e} between eigenvalues "
            f"{i + 1} and {i + 2} is below {GAP_TOL:.0e}"
        )

    if np.linalg.det(q) < 0.0:
        q = q.copy()
        q[:, -1] = -q[:, -1]

    spectrum = Spectrum(tuple(lam))
    residual = np.linalg.norm(q @ spectrum.diag() @ q.T - y)
    if residual > 1e-10 * scale:
        raise RuntimeError(f"eigendecomposition residual {residual:.3e} too large")
    return spectrum, q
