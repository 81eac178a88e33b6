import numpy as np
import pytest

from toda_atlas.analysis import (
    CheckReport,
    example4_frame_check,
    fiber_experiment,
    pushforward_check,
    pushforward_richardson,
    sl2_coords,
    sl2_cubic_model,
    sl2_matrix,
    sym_linearization_spectrum,
    unstable_manifold_experiment,
)
from toda_atlas.atlas import ChartCoords, FlagPoint, chart_inverse, h_conjugate
from toda_atlas.flows import integrate, sym_field
from toda_atlas.linalg_core import Spectrum
from toda_atlas.sampling import default_spectrum, random_chart_coords, rng_from_seed
from toda_atlas.weyl_profiles import Permutation

RNG = rng_from_seed(55)


def chart_point(w, h, rng, scale=1.0):
    return chart_inverse(random_chart_coords(w, h, rng, scale=scale))


class TestCheckReport:
    def test_pass_verdict_is_derived(self):
        report = CheckReport.create("x", 0.5, 1, 1.0)
        assert report.passed
        report = CheckReport.create("x", 2.0, 1, 1.0)
        assert not report.passed

    def test_inconsistent_verdict_rejected(self):
        with pytest.raises(ValueError, match="verdict"):
            CheckReport("x", 2.0, 1, 1.0, True, {})


class TestPushforward:
    def test_two_by_two_tight(self):
        h = Spectrum((0.5, -0.5))
        w = Permutation.identity(2)
        lower = np.zeros((2, 2))
        lower[1, 0] = 0.8
        point = chart_inverse(ChartCoords(w=w, lower=lower, h=h))
        report = pushforward_check(point, w, fd_step=1e-5, tol=1e-10)
        assert report.passed, report.max_residual

    def test_critical_point_is_exact(self):
        h = default_spectrum(3)
        w = Permutation((3, 1, 2))
        origin = FlagPoint(h_conjugate(h, w), h)
        report = pushforward_check(origin, w, tol=1e-10)
        assert report.passed

    def test_random_charts_n3_n4(self):
        for n in (3, 4):
            h = default_spectrum(n)
            for _ in range(10):
                w = Permutation(tuple(int(v) + 1 for v in RNG.permutation(n)))
                report = pushforward_check(chart_point(w, h, RNG), w)
                assert report.passed, (n, w.images, report.max_residual)

    def test_richardson_ratio_near_four(self):
        h = default_spectrum(3)
        w = Permutation((2, 3, 1))
        report = pushforward_richardson(chart_point(w, h, RNG, scale=0.8), w)
        assert report.passed, report.details


class TestUnstableManifold:
    def test_identity_chart_all_stable(self):
        h = default_spectrum(3)
        report = unstable_manifold_experiment(Permutation.identity(3), h)
        assert report.passed
        assert report.details["escape"] is None
        assert all(
            info["direction"] == "forward" for info in report.details["pairs"].values()
        )

    def test_longest_chart_all_unstable(self):
        h = default_spectrum(3)
        report = unstable_manifold_experiment(Permutation.longest(3), h)
        assert report.passed
        assert all(
            info["direction"] == "backward" for info in report.details["pairs"].values()
        )
        assert report.details["escape"]["max_radius"] > report.details["escape"]["threshold"]

    def test_saddle_chart_classification(self):
        h = Spectrum((2.0, 0.0, -2.0))
        report = unstable_manifold_experiment(Permutation((2, 1, 3)), h)
        assert report.passed
        pairs = report.details["pairs"]
        assert pairs["2,1"]["direction"] == "backward"
        assert pairs["3,1"]["direction"] == "forward"
        assert pairs["3,2"]["direction"] == "forward"

    def test_conclusions_stable_under_halving_eps(self):
        h = default_spectrum(3)
        w = Permutation((2, 1, 3))
        full = unstable_manifold_experiment(w, h, eps=1e-4)
        halved = unstable_manifold_experiment(w, h, eps=5e-5)
        assert full.passed == halved.passed


class TestSymLinearization:
    def test_two_by_two_single_eigenvalue(self):
        report = sym_linearization_spectrum(Spectrum((1.0, -1.0)))
        assert report.passed
        nonzero = [v for v in report.details["eigenvalues"] if abs(v) > 1.0]
        assert len(nonzero) == 1
        assert nonzero[0] == pytest.approx(-8.0, rel=1e-5)

    def test_three_by_three_multiset(self):
        report = sym_linearization_spectrum(Spectrum((2.0, 0.0, -2.0)))
        assert report.passed
        assert report.details["expected_nonzero"] == [-32.0, -8.0, -8.0]
        assert report.details["kernel_dim"] == 3

    def test_four_by_four(self):
        report = sym_linearization_spectrum(Spectrum((3.0, 1.0, -1.0, -3.0)))
        assert report.passed
        assert report.details["kernel_dim"] == 6
        assert report.details["expected_nonzero"] == sorted(
            -2.0 * g * g for g in (2, 4, 6, 2, 4, 2)
        )


class TestFiber:
    def test_zero_perturbation_is_stationary(self):
        h = default_spectrum(3)
        base = h_conjugate(h, Permutation((2, 3, 1)))
        traj = integrate(sym_field, base)
        assert len(traj.states) == 1

    def test_identity_chart_fiber(self):
        h = default_spectrum(3)
        report = fiber_experiment(
            Permutation.identity(3), h, samples=5, rng=rng_from_seed(5)
        )
        assert report.passed, report.max_residual
        assert report.details["lower_leak"] == 0.0

    def test_permuted_diagonal_fiber(self):
        h = default_spectrum(4)
        report = fiber_experiment(
            Permutation((3, 1, 4, 2)), h, samples=5, rng=rng_from_seed(6)
        )
        assert report.passed, report.max_residual


class TestFrameCheck:
    def test_sixteen_circle_points(self):
        report = example4_frame_check(radius=2.0, samples=16)
        assert report.passed, report.max_residual

    def test_frame_directions_at_axes(self):
        lam = 2.0
        # differenced Jacobian applied to the frame at the two axis points
        for point, expected in (
            (np.array([lam, 0.0, 0.0]), np.array([0.0, -lam * lam, lam * lam])),
            (np.array([0.0, lam, 0.0]), np.array([0.0, 0.0, lam * lam])),
        ):
            jac = np.zeros((3, 3))
            for col in range(3):
                e = np.zeros(3)
                e[col] = 1e-6
                jac[:, col] = (
                    sl2_cubic_model(point + e) - sl2_cubic_model(point - e)
                ) / 2e-6
            pushed = jac @ np.array([point[1], -point[0], lam])
            unit = expected / np.linalg.norm(expected)
            residual = np.linalg.norm(pushed - (pushed @ unit) * unit)
            assert residual < 1e-6 * np.linalg.norm(pushed)

    def test_cubic_model_matches_field_direction(self):
        for _ in range(20):
            v = RNG.uniform(-1.5, 1.5, 3)
            np.testing.assert_allclose(
                sl2_coords(sym_field(sl2_matrix(v))), 4.0 * sl2_cubic_model(v), atol=1e-12
            )
