"""Acceptance-level properties of exponents, dimensions and certificates.

These runs integrate over long horizons and are marked ``slow``; select
them with ``pytest -m slow``.
"""

import numpy as np
import pytest

from chua_lyapunov.analytic import (
    corollary1_exact_dimension,
    corollary2_bound,
    lemma1_check,
    symmetrized_spectrum,
    theorem3_search,
    theorem4_convergence,
)
from chua_lyapunov.lyapunov import (
    entropy_upper_bound,
    kaplan_yorke,
    local_dimension,
    sample_attractor,
)
from chua_lyapunov.model import Parameters, equilibria, jacobian_at_origin
from chua_lyapunov.variational import (
    IntegratorConfig,
    finite_time_les_benettin,
    finite_time_les_svd,
    integrate_batch,
    lyapunov_batch,
)

# alpha = beta = 1 makes J(0) symmetric, so finite-time exponents at the
# origin equal eig J(0) for every t.
SYMMETRIC_LINEAR = [
    Parameters(alpha=1.0, beta=1.0, gamma=2.0, m0=0.5, m1=0.0),
    Parameters(alpha=1.0, beta=1.0, gamma=1.0, m0=2.0, m1=0.0),
    Parameters(alpha=1.0, beta=1.0, gamma=3.0, m0=0.0, m1=0.0),
]

# alpha = 9, beta = 14 with m1 = 0 is a non-normal linear flow with real
# eigenvalues near 3.60, -3.45 and -10.16 and an eigenbasis of condition
# about 3.6, so exponents at t = 200 sit within log(3.6) / 200 of them.
NON_NORMAL_LINEAR = Parameters(alpha=9.0, beta=14.0, gamma=0.0, m0=0.0, m1=0.0)

# Mild dissipation keeps the fundamental matrix well conditioned up to t = 20,
# which the determinant step of the singular-value route needs.
WELL_CONDITIONED = Parameters(alpha=0.1, beta=-0.2, gamma=0.5, m0=1.5, m1=0.1)

STEP = IntegratorConfig(dt=1e-2, qr_interval=0.5)
FINE_STEP = IntegratorConfig(dt=1e-3, qr_interval=0.5)


def _random_double_scroll(rng: np.random.Generator) -> Parameters:
    return Parameters(
        alpha=float(rng.uniform(8.0, 11.0)),
        beta=float(rng.uniform(-16.0, -12.0)),
        gamma=0.0,
        m0=float(rng.uniform(1.1, 1.25)),
        m1=float(rng.uniform(0.05, 0.1)),
    )


def _random_dissipative(rng: np.random.Generator) -> Parameters:
    # beta < 0 < gamma keeps every trajectory bounded; m0 <= 1 makes trace J(0) < 0.
    return Parameters(
        alpha=float(rng.uniform(0.5, 3.0)),
        beta=float(rng.uniform(-3.0, -0.5)),
        gamma=float(rng.uniform(0.5, 2.0)),
        m0=float(rng.uniform(-1.0, 1.0)),
        m1=float(rng.uniform(0.1, 1.0)),
    )


@pytest.mark.integration
@pytest.mark.slow
class TestLinearOracle:
    """Exponents of linear flows against the characteristic polynomial."""

    @pytest.mark.parametrize("p", SYMMETRIC_LINEAR, ids=["set-a", "set-b", "set-c"])
    def test_should_match_eigenvalues_at_long_horizon(self, p: Parameters) -> None:
        """Verify Benettin exponents at t = 200 equal the roots of det(lambda I - J0)."""
        oracle = np.sort(np.roots(np.poly(jacobian_at_origin(p))).real)[::-1]

        spectrum = finite_time_les_benettin(p, [0.0, 0.0, 0.0], 200.0, FINE_STEP)

        assert spectrum.les == pytest.approx(tuple(oracle), abs=1e-3)

    def test_should_converge_to_real_parts_for_non_normal_jacobian(self) -> None:
        """Verify exponents of a non-normal linear flow approach Re eig J0."""
        j0 = jacobian_at_origin(NON_NORMAL_LINEAR)
        eigenvalues = np.linalg.eigvals(j0)
        oracle = np.sort(eigenvalues.real)[::-1]

        spectrum = finite_time_les_benettin(
            NON_NORMAL_LINEAR, [0.0, 0.0, 0.0], 200.0, FINE_STEP
        )

        assert not np.allclose(j0, j0.T)
        assert np.all(np.abs(eigenvalues.imag) < 1e-12)
        assert np.min(np.diff(oracle[::-1])) > 1.0
        assert spectrum.les == pytest.approx(tuple(oracle), abs=1e-2)
        assert sum(spectrum.les) == pytest.approx(float(np.trace(j0)), abs=1e-6)


@pytest.mark.integration
@pytest.mark.slow
class TestLiouvilleIdentity:
    """The exponent sum equals the time average of trace J."""

    def test_should_hold_on_random_parameters_and_points(self, rng: np.random.Generator) -> None:
        """Verify |sum les - avg trace J| < 1e-6 at t = 100 on 20 pairs."""
        for _ in range(4):
            p = _random_double_scroll(rng)
            starts = rng.uniform(-1.0, 1.0, size=(5, 3))

            batch = lyapunov_batch(p, starts, [100.0], FINE_STEP)

            assert np.all(batch.alive)
            sums = batch.les[0].sum(axis=1)
            assert np.max(np.abs(sums - batch.trace_average[0])) < 1e-6


@pytest.mark.integration
@pytest.mark.slow
class TestRouteEquivalence:
    """Benettin and singular-value routes agree."""

    def test_should_agree_on_random_points(self, rng: np.random.Generator) -> None:
        """Verify agreement to 1e-6 at t = 20 on 50 random points."""
        for u0 in rng.uniform(-1.0, 1.0, size=(50, 3)):
            benettin = finite_time_les_benettin(WELL_CONDITIONED, u0, 20.0, STEP)
            svd = finite_time_les_svd(WELL_CONDITIONED, u0, 20.0, STEP)

            assert benettin.les == pytest.approx(svd.les, abs=1e-6)


@pytest.mark.integration
@pytest.mark.slow
class TestDomination:
    """Symmetrized spectra are dominated by their value at the origin."""

    def test_should_dominate_on_random_pairs(self, rng: np.random.Generator) -> None:
        """Verify lambda_j(u) <= lambda_j(0) and the KY ordering on 1000 pairs."""
        for _ in range(100):
            sign = 1.0 if rng.uniform() < 0.5 else -1.0
            p = Parameters(
                alpha=sign * float(rng.uniform(0.1, 20.0)),
                beta=float(rng.uniform(-20.0, 20.0)),
                gamma=float(rng.uniform(-2.0, 2.0)),
                m0=float(rng.uniform(-2.0, 3.0)),
                m1=sign * float(rng.uniform(0.01, 2.0)),
            )
            points = rng.uniform(-5.0, 5.0, size=(10, 3))

            assert lemma1_check(p, points).holds
            d0 = kaplan_yorke(symmetrized_spectrum(p, np.zeros(3)).values)
            for u in points:
                assert kaplan_yorke(symmetrized_spectrum(p, u).values) <= d0 + 1e-9


@pytest.mark.integration
@pytest.mark.slow
class TestExactDimension:
    """Local dimension at the origin tends to KY(eig J(0))."""

    @pytest.mark.parametrize(
        "p",
        [
            Parameters(alpha=1.0, beta=1.0, gamma=2.0, m0=0.5, m1=0.5),
            Parameters(alpha=1.0, beta=1.0, gamma=1.0, m0=2.0, m1=0.2),
        ],
        ids=["set-a", "set-b"],
    )
    def test_should_converge_at_origin(self, p: Parameters) -> None:
        """Verify the finite-time local dimension at t = 100 is within 1e-3."""
        exact = corollary1_exact_dimension(p)
        assert exact.real_simple
        assert exact.value is not None

        assert local_dimension(p, [0.0, 0.0, 0.0], 100.0, STEP) == pytest.approx(
            exact.value, abs=1e-3
        )


@pytest.mark.integration
@pytest.mark.slow
class TestDoubleScrollBounds:
    """Finite-time dimensions and entropy on the double scroll."""

    def test_should_stay_below_analytic_bounds(self, chaotic_params: Parameters) -> None:
        """Verify local dimensions at t = 50 stay below the bound and entropy below its bound."""
        sample = sample_attractor(chaotic_params, [[0.1, 0.0, 0.0]], 50.0, 20.0, 2.0, STEP)
        bound = corollary2_bound(chaotic_params)
        entropy = entropy_upper_bound(symmetrized_spectrum(chaotic_params, np.zeros(3)))

        batch = lyapunov_batch(chaotic_params, sample.array, [50.0], STEP)

        assert np.all(batch.alive)
        for les in batch.les[0]:
            assert kaplan_yorke(les) <= bound + 0.05
            assert entropy_upper_bound(les) <= entropy + 1e-3


@pytest.mark.integration
@pytest.mark.slow
class TestCertificateSoundness:
    """Finite-time local dimensions never exceed the certified bound."""

    def test_should_bound_local_dimensions_on_random_parameters(
        self, rng: np.random.Generator
    ) -> None:
        """Verify local dimensions at t = 20 on sampled points stay below j + s."""
        for _ in range(10):
            p = _random_dissipative(rng)
            certificate = theorem3_search(p)
            sample = sample_attractor(p, [[0.1, 0.0, 0.0]], 20.0, 15.0, 5.0, STEP)

            assert len(sample) == 3
            for u in sample.array:
                assert local_dimension(p, u, 20.0, STEP) <= certificate.bound + 1e-6


@pytest.mark.integration
@pytest.mark.slow
class TestGlobalConvergence:
    """Certified parameters send every bounded trajectory to an equilibrium."""

    @pytest.mark.parametrize("name", ["converging_params", "bistable_params"])
    def test_should_reach_stationary_set(
        self, name: str, request: pytest.FixtureRequest, rng: np.random.Generator
    ) -> None:
        """Verify 100 trajectories end within 1e-4 of an equilibrium and exponents are negative."""
        p: Parameters = request.getfixturevalue(name)
        assert theorem4_convergence(p).converges
        stationary = np.array([eq.point for eq in equilibria(p)])
        starts = rng.uniform(-2.0, 2.0, size=(100, 3))

        states, blow_times = integrate_batch(p, starts, [0.0, 500.0], STEP)

        assert np.all(np.isnan(blow_times))
        finals = states[:, -1, :]
        gaps = np.min(np.linalg.norm(finals[:, None, :] - stationary[None], axis=2), axis=1)
        assert np.max(gaps) < 1e-4

        batch = lyapunov_batch(p, starts, [200.0], STEP)
        entropy = entropy_upper_bound(symmetrized_spectrum(p, np.zeros(3)))
        assert np.all(batch.les[0, :, 0] < 1e-3)
        for les in batch.les[0]:
            assert entropy_upper_bound(les) <= entropy + 1e-3
