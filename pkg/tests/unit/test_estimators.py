"""
Unit tests for the estimators package: batch means, batch schedules, SIP
rates, regenerative estimators and PSD projection.
"""

import numpy as np
import pytest
from pydantic import ValidationError

from estimators.batch_means import (
    batch_means,
    check_batch_consistency,
    check_batch_schedule,
    standard_errors,
)
from estimators.linalg import psd_project, relative_frobenius_error
from estimators.rates import sip_rate_exponent
from estimators.regenerative import (
    regen_mean,
    regen_mu_hat,
    regen_sigma_f_hat,
    regen_sigma_z_hat,
)
from models.chain import TourSequence
from models.estimate import BatchSchedule, CovEstimate
from utils.errors import InputError, NoRegenerationsError
from utils.rng import make_rng


def tours_of(z, tau) -> TourSequence:
    return TourSequence(z=np.asarray(z, dtype=float), tau=np.asarray(tau))


class TestBatchMeans:
    """Test suite for batch_means."""

    def test_constant_sequence_gives_zero(self):
        estimate = batch_means([1.0, 1.0, 1.0, 1.0], BatchSchedule(batch_size=2))

        np.testing.assert_allclose(estimate.matrix, [[0.0]])

    def test_hand_example(self):
        """(1, 2, 3, 4) with b = 2: batch means 1.5, 3.5 around 2.5 give 2 * 2 / 1 = 4."""
        # Act
        estimate = batch_means([1.0, 2.0, 3.0, 4.0], BatchSchedule(batch_size=2))

        # Assert
        np.testing.assert_allclose(estimate.matrix, [[4.0]])
        assert estimate.kind == 'batch-means'
        assert estimate.n == 4
        assert estimate.tuning['batches'] == 2

    def test_trailing_partial_batch_is_dropped(self):
        estimate = batch_means([1.0, 2.0, 3.0, 4.0, 100.0], BatchSchedule(batch_size=2))

        np.testing.assert_allclose(estimate.matrix, [[4.0]])

    def test_fewer_than_two_batches_is_rejected(self):
        with pytest.raises(InputError):
            batch_means([1.0, 2.0, 3.0], BatchSchedule(batch_size=2))

    def test_multivariate_identical_columns(self):
        x = np.arange(1.0, 9.0)
        estimate = batch_means(np.column_stack([x, x]), BatchSchedule(batch_size=2))

        assert estimate.d == 2
        assert np.allclose(estimate.matrix, estimate.matrix[0, 0])

    def test_power_schedule_batch_size(self):
        schedule = BatchSchedule(nu=0.5)

        assert schedule.batch_size_for(100) == 10
        assert schedule.batch_size_for(99) == 9

    def test_iid_normal_is_near_one(self):
        x = make_rng(0).standard_normal(100_000)

        estimate = batch_means(x, BatchSchedule(nu=0.5))

        assert estimate.matrix[0, 0] == pytest.approx(1.0, abs=0.3)

    def test_standard_errors(self):
        estimate = CovEstimate(matrix=np.diag([4.0, 9.0]), kind='batch-means', n=100)

        np.testing.assert_allclose(standard_errors(estimate), [0.2, 0.3])
        np.testing.assert_allclose(standard_errors(estimate, n=400), [0.1, 0.15])


class TestBatchSchedule:
    """Test suite for BatchSchedule and check_batch_schedule."""

    @pytest.mark.parametrize('kwargs', [
        {},
        {'nu': 0.5, 'batch_size': 10},
        {'nu': 0.5, 'sizes': [1, 2, 3]},
    ])
    def test_exactly_one_rule(self, kwargs):
        with pytest.raises(ValidationError):
            BatchSchedule(**kwargs)

    @pytest.mark.parametrize('nu,passed,part_a,c', [
        (0.5, True, True, 3.0),
        (0.6, True, True, 3.0),
        (0.75, True, True, 5.0),
        (1.0, False, False, None),
        (0.0, False, False, 2.0),
    ])
    def test_power_schedules(self, nu: float, passed: bool, part_a: bool, c):
        # Act
        check = check_batch_schedule(BatchSchedule(nu=nu))

        # Assert
        assert check.passed is passed
        assert check.part_a is part_a
        assert check.c == c
        if not passed:
            assert check.reasons

    def test_fixed_batch_size_never_satisfies_growth(self):
        check = check_batch_schedule(BatchSchedule(batch_size=50))

        assert check.passed is False
        assert check.part_a is False

    def test_explicit_square_root_schedule_passes(self):
        sizes = [int(np.floor(n ** 0.5)) for n in range(1, 1001)]

        check = check_batch_schedule(BatchSchedule(sizes=sizes))

        assert check.passed is True
        assert check.c is not None and check.c <= 3.0

    def test_explicit_constant_schedule_fails(self):
        check = check_batch_schedule(BatchSchedule(sizes=[5] * 100))

        assert check.passed is False
        assert check.part_a is False

    def test_explicit_linear_schedule_fails_summability(self):
        """b_n = n / 2 never makes (b_n / n)^c summable."""
        sizes = [max(1, n // 2) for n in range(1, 201)]

        check = check_batch_schedule(BatchSchedule(sizes=sizes))

        assert check.part_b is False
        assert check.passed is False

    def test_short_explicit_schedule_is_untestable(self):
        check = check_batch_schedule(BatchSchedule(sizes=[1, 2, 3]))

        assert check.passed is False


class TestRates:
    """Test suite for sip_rate_exponent and check_batch_consistency."""

    def test_thm1_example(self):
        report = sip_rate_exponent(2.0, 4.0)

        assert report.beta_thm1 == pytest.approx(0.25)
        assert report.beta == pytest.approx(0.25)
        assert report.nu_lower == pytest.approx(0.5)

    def test_geometric_example(self):
        report = sip_rate_exponent(0.5, geometric=True)

        assert report.beta_thm3 == pytest.approx(0.4)
        assert report.beta == pytest.approx(0.4)
        assert report.nu_lower == pytest.approx(0.8)
        assert report.beta_thm1 is None

    def test_large_moments_approach_quarter(self):
        report = sip_rate_exponent(1e9, 1e9)

        assert report.beta_thm1 == pytest.approx(0.25)

    def test_small_p_dominates(self):
        report = sip_rate_exponent(10.0, 1.5)

        assert report.beta_thm1 == pytest.approx(1.0 / 3.0)

    @pytest.mark.parametrize('delta,p', [
        (np.int64(2), np.int64(4)),
        (np.float32(2.0), 4),
        (2, np.float64(4.0)),
    ])
    def test_numpy_scalars_accepted(self, delta, p):
        report = sip_rate_exponent(delta, p)

        assert report.beta_thm1 == pytest.approx(0.25)
        assert report.nu_lower == pytest.approx(0.5)

    @pytest.mark.parametrize('delta,p,geometric', [
        (True, 4.0, False),
        (0.0, 4.0, False),
        (-1.0, 4.0, False),
        (2.0, 1.0, False),
        (2.0, None, False),
        (float('nan'), 4.0, False),
    ])
    def test_out_of_range(self, delta, p, geometric):
        with pytest.raises(InputError):
            sip_rate_exponent(delta, p, geometric=geometric)

    def test_consistency_holds_above_twice_beta(self):
        holds, reasons = check_batch_consistency(BatchSchedule(nu=0.6), sip_rate_exponent(2.0, 4.0))

        assert holds is True
        assert reasons is None

    def test_consistency_fails_below_twice_beta(self):
        holds, reasons = check_batch_consistency(
            BatchSchedule(nu=0.6), sip_rate_exponent(0.5, geometric=True)
        )

        assert holds is False
        assert 'must exceed' in reasons[0]

    def test_consistency_undecidable_for_explicit_sizes(self):
        holds, reasons = check_batch_consistency(
            BatchSchedule(sizes=list(range(1, 20))), sip_rate_exponent(2.0, 4.0)
        )

        assert holds is False
        assert reasons


class TestRegenerativeEstimators:
    """Test suite for regen_mean, regen_mu_hat, regen_sigma_z_hat and regen_sigma_f_hat."""

    def test_regen_mean_hand_example(self):
        assert regen_mean(tours_of([6, 22, 50], [3, 4, 5]))[0] == pytest.approx(6.5)

    def test_regen_mean_constant_f_is_exact(self):
        tau = np.array([1, 4, 2, 7])

        assert regen_mean(tours_of(2.5 * tau, tau))[0] == pytest.approx(2.5)

    @pytest.mark.parametrize('tau,expected', [([2, 3, 4], 3.0), ([1, 1, 1, 1], 1.0)])
    def test_mu_hat(self, tau, expected):
        assert regen_mu_hat(tours_of(np.zeros(len(tau)), tau)) == pytest.approx(expected)

    def test_no_tours_raise(self):
        empty = TourSequence(z=np.zeros((0, 1)), tau=np.zeros(0))

        with pytest.raises(NoRegenerationsError):
            regen_mean(empty)
        with pytest.raises(NoRegenerationsError):
            regen_mu_hat(empty)
        with pytest.raises(NoRegenerationsError):
            regen_sigma_f_hat(empty)

    def test_sigma_z_hand_example(self):
        """Z = (1, 2, 3) with unit tours: lag-0 term 2/3, lag-1 terms 0."""
        sigma = regen_sigma_z_hat(tours_of([1, 2, 3], [1, 1, 1]))

        np.testing.assert_allclose(sigma, [[2.0 / 3.0]])

    def test_sigma_f_tour_mean_hand_example(self):
        """Z = (1, 2, 3), tau = (2, 3, 4): (2/3) / 3 = 2/9."""
        estimate = regen_sigma_f_hat(tours_of([1, 2, 3], [2, 3, 4]), centering='tour-mean')

        np.testing.assert_allclose(estimate.matrix, [[2.0 / 9.0]])
        assert estimate.kind == 'regenerative'
        assert estimate.n == 9
        assert estimate.tuning['mu_hat'] == pytest.approx(3.0)

    def test_sigma_f_ratio_hand_example(self):
        """Ratio centering at f~ = 2/3 gives W = (-1/3, 0, 1/3), so (2/27) / 3 = 2/81."""
        estimate = regen_sigma_f_hat(tours_of([1, 2, 3], [2, 3, 4]))

        np.testing.assert_allclose(estimate.matrix, [[2.0 / 81.0]])

    def test_centerings_agree_only_for_constant_lengths(self):
        # Arrange
        z = [1.0, 4.0, 2.0, 7.0, 3.0]
        constant = tours_of(z, [3, 3, 3, 3, 3])
        varying = tours_of(z, [1, 5, 2, 6, 3])

        # Act / Assert
        np.testing.assert_allclose(regen_sigma_z_hat(constant, 'ratio'),
                                   regen_sigma_z_hat(constant, 'tour-mean'))
        assert not np.allclose(regen_sigma_z_hat(varying, 'ratio'),
                               regen_sigma_z_hat(varying, 'tour-mean'))

    @pytest.mark.parametrize('centering', ['ratio', 'tour-mean'])
    def test_equal_tours_give_zero(self, centering):
        estimate = regen_sigma_f_hat(tours_of([5, 5, 5, 5], [2, 2, 2, 2]), centering=centering)

        np.testing.assert_allclose(estimate.matrix, [[0.0]], atol=1e-15)

    def test_single_tour_is_rejected(self):
        with pytest.raises(InputError):
            regen_sigma_z_hat(tours_of([1.0], [1]))

    def test_unknown_centering_is_rejected(self):
        with pytest.raises(InputError):
            regen_sigma_z_hat(tours_of([1, 2, 3], [1, 1, 1]), centering='median')

    def test_lag_one_terms_on_ma1_tours(self):
        """Z_i = e_i + e_{i+1}: gamma_0 = 2, gamma_1 = 1, so Sigma_Z = 4."""
        # Arrange
        e = make_rng(5).standard_normal(200_001)
        z = e[:-1] + e[1:]

        # Act
        sigma = regen_sigma_z_hat(tours_of(z, np.ones(z.size, dtype=int)))

        # Assert
        assert sigma[0, 0] == pytest.approx(4.0, abs=0.15)

    def test_multivariate_result_is_symmetric(self):
        z = make_rng(6).standard_normal((500, 3))
        tau = make_rng(7).integers(1, 5, 500)

        sigma = regen_sigma_z_hat(tours_of(z, tau))

        np.testing.assert_allclose(sigma, sigma.T)

    def test_psd_flag_projects(self):
        """Strong negative lag-1 correlation can make the raw estimate indefinite."""
        z = np.array([[1.0, -1.0], [-1.0, 1.0], [1.0, 1.0], [-1.0, -1.0]])

        estimate = regen_sigma_f_hat(tours_of(z, [1, 1, 1, 1]), centering='tour-mean', psd=True)

        assert np.linalg.eigvalsh(estimate.matrix).min() >= -1e-12
        assert estimate.tuning['psd'] is True


class TestLinalg:
    """Test suite for psd_project and relative_frobenius_error."""

    def test_identity_is_unchanged(self):
        np.testing.assert_allclose(psd_project(np.eye(3)), np.eye(3))

    def test_indefinite_example(self):
        """Eigenvalues 3 and -1: clipping -1 leaves 3 (1, 1)(1, 1)^T / 2."""
        np.testing.assert_allclose(psd_project([[1.0, 2.0], [2.0, 1.0]]), [[1.5, 1.5], [1.5, 1.5]])

    def test_psd_input_is_returned_as_copy(self):
        m = np.diag([0.0, 5.0])

        out = psd_project(m)

        np.testing.assert_array_equal(out, m)
        assert out is not m

    def test_asymmetric_is_rejected(self):
        with pytest.raises(InputError):
            psd_project([[1.0, 2.0], [0.0, 1.0]])

    def test_relative_error(self):
        assert relative_frobenius_error([[1.1]], [[1.0]]) == pytest.approx(0.1)

    def test_zero_reference_is_rejected(self):
        with pytest.raises(InputError):
            relative_frobenius_error([[1.0]], [[0.0]])
