"""Verification harness tying the other modules together.

Each experiment returns a :class:`CheckReport` whose pass verdict is a
pure function of its measured residual and its fixed tolerance. The
suites at the bottom bundle experiments into the groups the command line
exposes; every suite is deterministic given a seed.
"""

import math
from dataclasses import dataclass

import numpy as np

from .atlas import (
    BruhatClass,
    ChartCoords,
    FlagPoint,
    _frame,
    bruhat_classify,
    chart_forward,
    chart_inverse,
    chart_domain_test,
    coords_from_frame,
    h_conjugate,
)
from .errors import ChartDomainError
from .factorizations import (
    CellStatus,
    chevalley_test,
    f_inverse,
    f_map,
    gs_embed,
    kan_factorize,
    phi,
    phi_sigma,
    phi_sigma_inverse,
    unbar_factorize,
)
from .flows import (
    IntegratorConfig,
    chart_flow_exact,
    chart_linear_field,
    integrate,
    propagate,
    stable_step_for_sorting,
    stable_step_for_symmetrization,
    sym_field,
    toda_field,
)
from .linalg_core import Spectrum, btheta_norm_sq
from .sampling import (
    default_spectrum,
    random_chart_coords,
    random_flag_point,
    random_permutation,
    random_profile,
    random_special_orthogonal,
    random_symmetric_with_spectrum,
    random_unit_lower,
    rng_from_seed,
)
from .weyl_profiles import (
    Permutation,
    hessenberg_profile,
    inversion_sets,
    l_sigma_membership,
    lower_pairs,
    perm_matrix,
    profile_project,
    v_p_membership,
)

__all__ = [
    "CheckReport",
    "pushforward_check",
    "pushforward_richardson",
    "unstable_manifold_experiment",
    "sym_linearization_spectrum",
    "fiber_experiment",
    "example4_frame_check",
    "sl2_matrix",
    "sl2_coords",
    "sl2_cubic_model",
    "factor_suite",
    "atlas_suite",
    "toda_suite",
    "sym_suite",
    "full_suite",
]


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one verification experiment."""

    name: str
    max_residual: float
    samples: int
    tolerance: float
    passed: bool
    details: dict

    def __post_init__(self):
        if self.passed != (self.max_residual < self.tolerance):
            raise ValueError("pass verdict must equal (max_residual < tolerance)")

    @classmethod
    def create(cls, name, max_residual, samples, tolerance, details=None):
        residual = float(max_residual)
        return cls(
            name=name,
            max_residual=residual,
            samples=int(samples),
            tolerance=float(tolerance),
            passed=bool(residual < tolerance),
            details=details or {},
        )


# ---------------------------------------------------------------------------
# 2x2 traceless coordinates (diagonal, symmetric, skew basis)

_SL2_E1 = np.array([[1.0, 0.0], [0.0, -1.0]])
_SL2_E2 = np.array([[0.0, 1.0], [1.0, 0.0]])
_SL2_E3 = np.array([[0.0, -1.0], [1.0, 0.0]])


def sl2_matrix(v) -> np.ndarray:
    """2x2 traceless matrix with coordinates (x, y, z) in the basis above."""
    x, y, z = (float(c) for c in v)
    return x * _SL2_E1 + y * _SL2_E2 + z * _SL2_E3


def sl2_coords(m) -> np.ndarray:
    """Coordinates of a 2x2 traceless matrix in the basis above."""
    m = np.asarray(m, dtype=float)
    return np.array(
        [m[0, 0], 0.5 * (m[0, 1] + m[1, 0]), 0.5 * (m[1, 0] - m[0, 1])]
    )


def sl2_cubic_model(v) -> np.ndarray:
    """Quarter-scale cubic model of the symmetrization field in sl2 coordinates.

    The coordinate expression of sym_field equals exactly four times this
    cubic; the model is kept at the quarter scale because every claim
    checked against it (stationary set, tangencies, frame directions) is
    insensitive to a positive constant.
    """
    x, y, z = (float(c) for c in v)
    return np.array(
        [
            -2.0 * z * x * (y + z),
            2.0 * z * x * x - 2.0 * z * z * y,
            -2.0 * z * x * x - 2.0 * z * y * y,
        ]
    )


# ---------------------------------------------------------------------------
# Chart linearization of the sorting flow

def _pushforward_residual(y: FlagPoint, w: Permutation, fd_step: float) -> float:
    """Frobenius gap between the differenced chart image of the flow and
    the linear chart field, at one point."""
    coords = chart_forward(y, w)
    predicted = chart_linear_field(coords)
    step = float(fd_step)
    for _ in range(4):
        try:
            ahead = chart_forward(FlagPoint(propagate(toda_field, y.y, step), y.h), w)
            behind = chart_forward(FlagPoint(propagate(toda_field, y.y, -step), y.h), w)
        except ChartDomainError:
            step *= 0.5
            continue
        differenced = (ahead.lower - behind.lower) / (2.0 * step)
        return float(np.linalg.norm(differenced - predicted))
    raise ChartDomainError(
        f"flow exits the chart at {w.images} within the differencing step even after 3 halvings"
    )


def pushforward_check(
    y: FlagPoint, w: Permutation, fd_step: float = 1e-5, tol: float = 1e-6
) -> CheckReport:
    """Check that the chart takes the sorting field to its linear model.

    Central differences along the integrated flow, so the residual decays
    quadratically in fd_step until roundoff.
    """
    residual = _pushforward_residual(y, w, fd_step)
    return CheckReport.create(
        "pushforward",
        residual,
        1,
        tol,
        {"w": list(w.images), "fd_step": fd_step},
    )


def pushforward_richardson(
    y: FlagPoint, w: Permutation, base_step: float = 2e-3
) -> CheckReport:
    """Second-order convergence of the differenced pushforward.

    The residual at base_step over the residual at base_step/2 must sit
    in [3.5, 4.5]; reported as distance of the ratio from 4.
    """
    coarse = _pushforward_residual(y, w, base_step)
    fine = _pushforward_residual(y, w, base_step / 2.0)
    ratio = coarse / fine if fine > 0.0 else math.inf
    return CheckReport.create(
        "pushforward_richardson",
        abs(ratio - 4.0),
        2,
        0.5,
        {"ratio": ratio, "coarse": coarse, "fine": fine, "w": list(w.images)},
    )


# ---------------------------------------------------------------------------
# Stable/unstable manifolds versus cells

def _single_pair_coords(w, h, i, j, eps) -> ChartCoords:
    lower = np.zeros((h.n, h.n))
    lower[i - 1, j - 1] = eps
    return ChartCoords(w=w, lower=lower, h=h)


def unstable_manifold_experiment(
    w: Permutation,
    h: Spectrum,
    eps: float = 1e-4,
    cfg: IntegratorConfig | None = None,
    dist_tol: float = 1e-7,
) -> CheckReport:
    """Check the cell picture of the saddle at the permuted diagonal.

    For every unstable pair, the backward flow from an eps-perturbation
    returns to the permuted diagonal; for every stable pair the forward
    flow does; a generic unstable perturbation escapes forward past ten
    times eps. Perturbed points must also classify into the matching
    cell by their coordinate support.

    Each convergence leg runs for a fixed horizon chosen from the pair's
    own diagonal gap. Transverse integration noise is amplified by the
    largest opposing gap while a leg lingers near the saddle, so a fixed
    horizon with a final field-norm sanity bound (1e-6) is the reliable
    stopping rule here; a tiny field-norm stop would never trigger.
    """
    if cfg is None:
        cfg = IntegratorConfig(
            rel_tol=1e-12,
            abs_tol=1e-13,
            max_step=min(0.5, stable_step_for_sorting(h)),
            t_max=60.0,
            stop_field_norm=1e-13,
        )
    sets = inversion_sets(w)
    target = h_conjugate(h, w)
    diag = np.diag(target)
    worst = 0.0
    per_pair = {}
    field_tol = 1e-6
    coord_target = dist_tol / 5.0

    def run_leg(i, j, sign):
        nonlocal worst
        gap = abs(diag[i - 1] - diag[j - 1])
        horizon = min(cfg.t_max, math.log(eps / coord_target) / gap)
        start = chart_inverse(_single_pair_coords(w, h, i, j, eps))
        wanted = BruhatClass.IN_BRUHAT if sign < 0 else BruhatClass.IN_OPPOSITE
        classified = bruhat_classify(start, w, tol=eps * 1e-3)
        leg_cfg = IntegratorConfig(
            rel_tol=cfg.rel_tol,
            abs_tol=cfg.abs_tol,
            max_step=cfg.max_step,
            t_max=horizon,
            stop_field_norm=cfg.stop_field_norm,
        )
        field = (lambda x: -toda_field(x)) if sign < 0 else toda_field
        traj = integrate(field, start.y, leg_cfg)
        dist = float(np.linalg.norm(traj.final_state - target))
        ok = classified is wanted and traj.final_field_norm < field_tol
        worst = max(worst, dist if ok else math.inf)
        per_pair[f"{i},{j}"] = {
            "direction": "backward" if sign < 0 else "forward",
            "distance": dist,
            "field_norm": traj.final_field_norm,
            "classified": classified.value,
            "horizon": horizon,
        }

    for i, j in sorted(sets.unstable):
        run_leg(i, j, -1)
    for i, j in sorted(sets.stable):
        run_leg(i, j, +1)

    escape = None
    if sets.unstable:
        lower = np.zeros((h.n, h.n))
        for i, j in sets.unstable:
            lower[i - 1, j - 1] = eps / math.sqrt(len(sets.unstable))
        start = chart_inverse(ChartCoords(w=w, lower=lower, h=h))
        esc_cfg = IntegratorConfig(t_max=15.0, stop_field_norm=1e-13)
        traj = integrate(toda_field, start.y, esc_cfg)
        radius = max(float(np.linalg.norm(s - target)) for s in traj.states)
        escape = {"max_radius": radius, "threshold": 10.0 * eps}
        if radius <= 10.0 * eps:
            worst = math.inf

    samples = len(sets.stable) + len(sets.unstable) + (1 if escape else 0)
    return CheckReport.create(
        f"unstable_manifold.{'-'.join(map(str, w.images))}",
        worst,
        samples,
        dist_tol,
        {"eps": eps, "pairs": per_pair, "escape": escape},
    )


# ---------------------------------------------------------------------------
# Linearization of the symmetrization field along its zero set

def sym_linearization_spectrum(
    h: Spectrum, fd_step: float = 1e-5, rel_tol: float = 1e-5
) -> CheckReport:
    """Eigenvalues of the differenced Jacobian of the symmetrization field.

    At diag(h), restricted to the off-diagonal directions, the nonzero
    eigenvalues must be -2 (h_i - h_j)^2 over pairs i < j, each once, and
    the kernel must have dimension n(n-1)/2.
    """
    n = h.n
    base = h.diag()
    pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    dim = len(pairs)
    jac = np.zeros((dim, dim))
    for col, (i, j) in enumerate(pairs):
        e = np.zeros((n, n))
        e[i - 1, j - 1] = 1.0
        der = (sym_field(base + fd_step * e) - sym_field(base - fd_step * e)) / (2.0 * fd_step)
        jac[:, col] = [der[a - 1, b - 1] for a, b in pairs]

    eigs = np.linalg.eigvals(jac)
    if np.max(np.abs(eigs.imag)) > 1e-6:
        return CheckReport.create(
            "sym_linearization_spectrum", math.inf, dim, rel_tol,
            {"error": "complex eigenvalues in the differenced Jacobian"},
        )
    eigs = np.sort(eigs.real)

    expected = sorted(
        -2.0 * (h.values[i] - h.values[j]) ** 2
        for i in range(n)
        for j in range(i + 1, n)
    )
    cut = 0.5 * min(abs(v) for v in expected)
    nonzero = [v for v in eigs if abs(v) > cut]
    kernel_dim = dim - len(nonzero)

    details = {
        "eigenvalues": [float(v) for v in eigs],
        "expected_nonzero": expected,
        "kernel_dim": kernel_dim,
    }
    if kernel_dim != n * (n - 1) // 2 or len(nonzero) != len(expected):
        return CheckReport.create(
            "sym_linearization_spectrum", math.inf, dim, rel_tol, details
        )
    residual = max(
        abs(got - want) / abs(want) for got, want in zip(sorted(nonzero), expected)
    )
    return CheckReport.create(
        "sym_linearization_spectrum", residual, dim, rel_tol, details
    )


def fiber_experiment(
    w: Permutation,
    h: Spectrum,
    cfg: IntegratorConfig | None = None,
    samples: int = 20,
    scale: float = 1.0,
    rng: np.random.Generator | None = None,
    tol: float = 1e-6,
) -> CheckReport:
    """Strictly upper perturbations of a permuted diagonal flow back to it.

    The affine space of upper-triangular matrices over the permuted
    diagonal is a single fiber of the symmetrization flow, so every
    perturbed start must come back to the unperturbed diagonal, staying
    upper triangular the whole way (machine-exact zeros below the
    diagonal are expected and checked at 1e-9).
    """
    if cfg is None:
        cfg = IntegratorConfig(t_max=40.0, max_step=stable_step_for_symmetrization(h))
    if rng is None:
        rng = rng_from_seed(0)
    base = h_conjugate(h, w)
    n = h.n
    worst = 0.0
    lower_leak = 0.0
    for _ in range(samples):
        x0 = base + np.triu(scale * rng.standard_normal((n, n)), 1)
        traj = integrate(sym_field, x0, cfg)
        if traj.final_field_norm >= cfg.stop_field_norm:
            worst = math.inf
            continue
        worst = max(worst, float(np.linalg.norm(traj.final_state - base)))
        for state in traj.states:
            lower_leak = max(lower_leak, float(np.max(np.abs(np.tril(state, -1)))))
    if lower_leak > 1e-9:
        worst = math.inf
    return CheckReport.create(
        f"fiber.{'-'.join(map(str, w.images))}",
        worst,
        samples,
        tol,
        {"lower_leak": lower_leak, "scale": scale},
    )


def example4_frame_check(
    radius: float = 2.0, samples: int = 16, fd_step: float = 1e-6, tol: float = 1e-6
) -> CheckReport:
    """Vertical frame of the symmetrization fibration over the circle.

    Applying the differenced Jacobian of the cubic model at circle points
    (x, y, 0), radius fixed, to the frame (y, -x, sqrt(x^2+y^2)) must give
    a vector collinear with (x y, -x^2, x^2 + y^2).
    """
    worst = 0.0
    per_point = []
    for theta in np.linspace(0.0, 2.0 * math.pi, samples, endpoint=False):
        x, y = radius * math.cos(theta), radius * math.sin(theta)
        point = np.array([x, y, 0.0])
        jac = np.zeros((3, 3))
        for col in range(3):
            e = np.zeros(3)
            e[col] = fd_step
            jac[:, col] = (sl2_cubic_model(point + e) - sl2_cubic_model(point - e)) / (
                2.0 * fd_step
            )
        pushed = jac @ np.array([y, -x, math.hypot(x, y)])
        vertical = np.array([x * y, -x * x, x * x + y * y])
        unit = vertical / np.linalg.norm(vertical)
        residual = float(
            np.linalg.norm(pushed - (pushed @ unit) * unit) / np.linalg.norm(pushed)
        )
        worst = max(worst, residual)
        per_point.append(residual)
    return CheckReport.create(
        "example4_frame", worst, samples, tol, {"radius": radius, "residuals": per_point}
    )


# ---------------------------------------------------------------------------
# Suites

def _spectrum_for(n: int) -> Spectrum:
    return default_spectrum(n)


def _charts_for(n: int, rng, cap: int = 12):
    perms = Permutation.all(n)
    if len(perms) <= cap:
        return perms
    picks = rng.choice(len(perms), size=cap, replace=False)
    return [perms[int(i)] for i in sorted(picks)]


def factor_suite(n: int = 3, seed: int = 0) -> list:
    rng = rng_from_seed(seed)
    reports = []

    worst = 0.0
    for _ in range(25):
        g = rng.standard_normal((n, n))
        det = np.linalg.det(g)
        if det < 0:
            g[:, 0] = -g[:, 0]
            det = -det
        g /= det ** (1.0 / n)
        fac = kan_factorize(g)
        worst = max(
            worst,
            float(np.linalg.norm(fac.k @ fac.a @ fac.n - g)),
            float(np.linalg.norm(fac.k.T @ fac.k - np.eye(n))),
            abs(float(np.prod(np.diag(fac.a))) - 1.0),
        )
    reports.append(CheckReport.create("factor.kan_recomposition", worst, 25, 1e-10))

    worst = 0.0
    for _ in range(25):
        k = random_special_orthogonal(n, rng)
        fac = unbar_factorize(k)
        worst = max(worst, float(np.linalg.norm(fac.u @ fac.nbar @ fac.m - k)))
    reports.append(CheckReport.create("factor.unbar_recomposition", worst, 25, 1e-10))

    worst = 0.0
    for _ in range(25):
        nbar = random_unit_lower(n, rng)
        k = f_inverse(nbar)
        worst = max(worst, float(np.linalg.norm(f_map(k) - nbar)))
        if chevalley_test(k.T).status is not CellStatus.IN_C:
            worst = math.inf
    reports.append(CheckReport.create("factor.f_round_trip_and_inverse_closure", worst, 25, 1e-10))

    worst = 0.0
    for _ in range(50):
        x, y, z = rng.uniform(-1.5, 1.5, 3)
        g = np.array([[1.0, 0.0, 0.0], [x, 1.0, 0.0], [y, z, 1.0]])
        n1 = math.sqrt(1.0 + x * x + y * y)
        n2 = math.sqrt(1.0 + z * z + (x * z - y) ** 2)
        expected = np.array(
            [
                [1.0, 0.0, 0.0],
                [(x + y * z) / n2, 1.0, 0.0],
                [n2 * y / n1, (z + z * x * x - y * x) / n1, 1.0],
            ]
        )
        worst = max(worst, float(np.max(np.abs(phi(g) - expected))))
    reports.append(CheckReport.create("factor.phi_closed_form_3x3", worst, 50, 1e-10))

    worst = 0.0
    identity_worst = 0.0
    for _ in range(20):
        sigma = random_permutation(n, rng)
        allowed = np.zeros((n, n))
        inv = sigma.inverse()
        for i, j in lower_pairs(n):
            if inv(i) > inv(j):
                allowed[i - 1, j - 1] = 1.0
        g = np.eye(n) + allowed * rng.standard_normal((n, n))
        out = phi_sigma(sigma, g)
        if not l_sigma_membership(out, sigma, 1e-10):
            worst = math.inf
        back = phi_sigma_inverse(sigma, out)
        worst = max(worst, float(np.linalg.norm(back - g)))
        p = perm_matrix(sigma)
        conj = p.T @ gs_embed(g) @ p
        fac = unbar_factorize(conj)
        identity_worst = max(
            identity_worst, float(np.linalg.norm(fac.u @ out - conj))
        )
        if np.min(np.diag(fac.u)) <= 0.0:
            identity_worst = math.inf
    reports.append(CheckReport.create("factor.phi_sigma_round_trip", worst, 20, 1e-9))
    reports.append(CheckReport.create("factor.phi_sigma_defining_identity", identity_worst, 20, 1e-10))
    return reports


def atlas_suite(n: int = 3, seed: int = 0) -> list:
    rng = rng_from_seed(seed)
    h = _spectrum_for(n)
    charts = _charts_for(n, rng)
    reports = []

    round_worst = 0.0
    spectrum_worst = 0.0
    origin_worst = 0.0
    for w in charts:
        origin = chart_inverse(ChartCoords(w=w, lower=np.zeros((n, n)), h=h))
        origin_worst = max(
            origin_worst, float(np.linalg.norm(origin.y - h_conjugate(h, w)))
        )
        for _ in range(10):
            coords = random_chart_coords(w, h, rng)
            point = chart_inverse(coords)
            eigs = np.linalg.eigvalsh(point.y)[::-1]
            spectrum_worst = max(
                spectrum_worst, float(np.max(np.abs(eigs - np.array(h.values))))
            )
            back = chart_forward(point, w)
            round_worst = max(
                round_worst, float(np.linalg.norm(back.lower - coords.lower))
            )
    reports.append(
        CheckReport.create("atlas.round_trip", round_worst, 10 * len(charts), 1e-9)
    )
    reports.append(
        CheckReport.create("atlas.spectrum", spectrum_worst, 10 * len(charts), 1e-9)
    )
    reports.append(
        CheckReport.create("atlas.origin", origin_worst, len(charts), 1e-12)
    )

    cover_worst = 0.0
    accepted_fraction = []
    all_perms = Permutation.all(n) if n <= 4 else charts
    for _ in range(30):
        y = random_flag_point(h, rng)
        hits = sum(1 for w in all_perms if chart_domain_test(y, w))
        accepted_fraction.append(hits / len(all_perms))
        if hits == 0:
            cover_worst = math.inf
    reports.append(
        CheckReport.create(
            "atlas.cover",
            cover_worst,
            30,
            0.5,
            {"mean_accepting_fraction": float(np.mean(accepted_fraction))},
        )
    )

    sign_worst = 0.0
    for _ in range(10):
        w = charts[int(rng.integers(len(charts)))]
        coords = random_chart_coords(w, h, rng)
        point = chart_inverse(coords)
        frame = _frame(point, w)
        reference = coords_from_frame(frame, w, h)
        signs = np.ones(n)
        flip = rng.choice(n, size=2, replace=False)
        signs[flip] = -1.0
        twisted = coords_from_frame(frame * signs[None, :], w, h)
        sign_worst = max(
            sign_worst, float(np.linalg.norm(twisted.lower - reference.lower))
        )
    reports.append(CheckReport.create("atlas.sign_independence", sign_worst, 10, 1e-10))

    profile_worst = 0.0
    for _ in range(10):
        p = random_profile(n, rng)
        w = charts[int(rng.integers(len(charts)))]
        coords = random_chart_coords(w, h, rng)
        coords = ChartCoords(w=w, lower=profile_project(coords.lower, p), h=h)
        point = chart_inverse(coords)
        if not v_p_membership(point.y, p, 1e-9):
            profile_worst = math.inf
        back = chart_forward(point, w)
        outside = [
            abs(back.lower[i - 1, j - 1])
            for i, j in lower_pairs(n)
            if (i, j) not in p.pairs
        ]
        if outside:
            profile_worst = max(profile_worst, max(outside))
    reports.append(CheckReport.create("atlas.profile_compat", profile_worst, 10, 1e-9))
    return reports


def toda_suite(n: int = 3, seed: int = 0) -> list:
    rng = rng_from_seed(seed)
    h = _spectrum_for(n)
    charts = _charts_for(n, rng)
    reports = []

    worst = 0.0
    for _ in range(50):
        a, b = rng.uniform(-2.0, 2.0, 2)
        y = np.array([[a, b], [b, -a]])
        expected = np.array([[2 * b * b, -2 * a * b], [-2 * a * b, -2 * b * b]])
        worst = max(worst, float(np.max(np.abs(toda_field(y) - expected))))
    reports.append(CheckReport.create("toda.field_formula_2x2", worst, 50, 1e-12))

    h2 = Spectrum((0.5, -0.5))
    coords2 = ChartCoords(
        w=Permutation.identity(2), lower=np.array([[0.0, 0.0], [0.8, 0.0]]), h=h2
    )
    point2 = chart_inverse(coords2)
    residual2 = _pushforward_residual(point2, Permutation.identity(2), 1e-5)
    reports.append(CheckReport.create("toda.pushforward_2x2", residual2, 1, 1e-10))

    worst = 0.0
    for _ in range(10):
        w = charts[int(rng.integers(len(charts)))]
        point = chart_inverse(random_chart_coords(w, h, rng))
        worst = max(worst, _pushforward_residual(point, w, 1e-5))
    reports.append(CheckReport.create("toda.pushforward", worst, 10, 1e-6))

    w = charts[0]
    point = chart_inverse(random_chart_coords(w, h, rng, scale=0.8))
    reports.append(pushforward_richardson(point, w))

    flow_cfg = IntegratorConfig(t_max=2.0, stop_field_norm=1e-13)
    worst = 0.0
    drift_worst = 0.0
    symmetry_worst = 0.0
    for _ in range(3):
        w = charts[int(rng.integers(len(charts)))]
        coords = random_chart_coords(w, h, rng)
        start = chart_inverse(coords)
        for t in (0.5, 1.0, 2.0):
            cfg = IntegratorConfig(t_max=t, stop_field_norm=1e-13)
            traj = integrate(toda_field, start.y, cfg)
            predicted = chart_inverse(chart_flow_exact(coords, t))
            worst = max(worst, float(np.linalg.norm(traj.final_state - predicted.y)))
            drift_worst = max(drift_worst, traj.power_trace_drift)
            symmetry_worst = max(
                symmetry_worst,
                max(float(np.linalg.norm(s - s.T)) for s in traj.states),
            )
    reports.append(CheckReport.create("toda.exact_vs_integrated", worst, 9, 1e-7))
    reports.append(CheckReport.create("toda.isospectral_drift", drift_worst, 9, 1e-8))
    reports.append(CheckReport.create("toda.symmetry_preservation", symmetry_worst, 9, 1e-9))

    bookkeeping = 0.0
    for w in Permutation.all(n) if n <= 4 else charts:
        sets = inversion_sets(w)
        if len(sets.stable) + len(sets.unstable) != n * (n - 1) // 2:
            bookkeeping = math.inf
        if len(sets.unstable) != w.inversion_count():
            bookkeeping = math.inf
    reports.append(CheckReport.create("toda.dimension_bookkeeping", bookkeeping, 1, 0.5))

    experiment_charts = Permutation.all(n) if n <= 3 else charts[: min(4, len(charts))]
    for w in experiment_charts:
        reports.append(unstable_manifold_experiment(w, h))

    sort_cfg = IntegratorConfig(t_max=60.0, max_step=stable_step_for_sorting(h))
    target = h.diag()
    worst = 0.0
    drift_worst = 0.0
    for _ in range(10):
        x0 = random_symmetric_with_spectrum(h, rng)
        traj = integrate(toda_field, x0, sort_cfg)
        if traj.final_field_norm >= sort_cfg.stop_field_norm:
            worst = math.inf
            continue
        worst = max(worst, float(np.linalg.norm(traj.final_state - target)))
        drift_worst = max(drift_worst, traj.power_trace_drift)
    reports.append(CheckReport.create("toda.sorting_attractor", worst, 10, 1e-7))
    reports.append(CheckReport.create("toda.sorting_drift", drift_worst, 10, 1e-8))
    return reports


def sym_suite(n: int = 3, seed: int = 0) -> list:
    rng = rng_from_seed(seed)
    h = _spectrum_for(n)
    reports = []

    worst = 0.0
    for _ in range(50):
        v = rng.uniform(-1.5, 1.5, 3)
        got = sl2_coords(sym_field(sl2_matrix(v)))
        worst = max(worst, float(np.max(np.abs(got - 4.0 * sl2_cubic_model(v)))))
    reports.append(CheckReport.create("sym.cubic_closed_form_2x2", worst, 50, 1e-12))

    worst = 0.0
    for _ in range(10):
        symmetric = random_symmetric_with_spectrum(h, rng)
        worst = max(worst, float(np.linalg.norm(sym_field(symmetric))))
        skew = rng.standard_normal((n, n))
        skew = skew - skew.T
        worst = max(worst, float(np.linalg.norm(sym_field(skew))))
        lopsided = symmetric + np.triu(rng.standard_normal((n, n)), 1)
        if np.linalg.norm(sym_field(lopsided)) < 1e-8:
            worst = math.inf
    reports.append(CheckReport.create("sym.normal_zero_set", worst, 30, 1e-12))

    fiber_cfg = IntegratorConfig(t_max=40.0, max_step=stable_step_for_symmetrization(h))
    monotone_worst = 0.0
    profile_worst = 0.0
    drift_worst = 0.0
    p = hessenberg_profile(n)
    for _ in range(4):
        w = random_permutation(n, rng)
        u = np.eye(n) + 0.4 * np.triu(rng.standard_normal((n, n)), 1)
        symmetric_start = chart_inverse(
            ChartCoords(
                w=w,
                lower=profile_project(
                    np.tril(rng.uniform(-0.8, 0.8, (n, n)), -1), p
                ),
                h=h,
            )
        )
        x0 = u @ symmetric_start.y @ np.linalg.inv(u)
        for field in (toda_field, sym_field):
            traj = integrate(field, x0, IntegratorConfig(t_max=3.0, stop_field_norm=1e-13))
            drift_worst = max(drift_worst, traj.power_trace_drift)
            for state in traj.states:
                if not v_p_membership(state, p, 1e-9):
                    profile_worst = math.inf
        traj = integrate(sym_field, x0, fiber_cfg)
        norms = [btheta_norm_sq(s) for s in traj.states]
        for earlier, later in zip(norms, norms[1:]):
            monotone_worst = max(monotone_worst, later - earlier)
    reports.append(CheckReport.create("sym.profile_preservation", profile_worst, 8, 1e-9))
    reports.append(CheckReport.create("sym.norm_monotone", monotone_worst, 4, 1e-10))
    reports.append(CheckReport.create("sym.isospectral_drift", drift_worst, 8, 1e-8))

    reports.append(
        fiber_experiment(Permutation.identity(n), h, samples=5, rng=rng)
    )
    reports.append(
        fiber_experiment(random_permutation(n, rng), h, samples=5, rng=rng)
    )
    reports.append(sym_linearization_spectrum(h))
    reports.append(example4_frame_check())
    return reports


def full_suite(n: int = 3, seed: int = 0) -> list:
    reports = []
    reports.extend(factor_suite(n, seed))
    reports.extend(atlas_suite(n, seed))
    reports.extend(toda_suite(n, seed))
    reports.extend(sym_suite(n, seed))
    return reports
