"""Offender decision rule, utilities, and participation accounting."""

import math
import random

import pytest

from heritagecrime.econ_core import (
    CRRA,
    Decision,
    OffenderProfile,
    ReferencePoint,
    RiskNeutral,
    certainty_equivalent,
    decide_crime,
    net_expected_return,
    participation_decompose,
    utility_value,
)
from heritagecrime.errors import DomainError, RangeError

ALL_UTILITIES = [RiskNeutral(), CRRA(rho=2.0), CRRA(rho=0.5),
                 ReferencePoint(ref_income=50.0, loss_aversion=2.0)]


def profile(crime_gain, legal_income, penalty, p):
    return OffenderProfile(crime_gain=crime_gain, legal_income=legal_income,
                           penalty=penalty, detention_prob=p)


class TestUtilityValue:
    def test_risk_neutral_is_identity(self):
        assert utility_value(RiskNeutral(), 123.4) == 123.4

    @pytest.mark.parametrize("utility", ALL_UTILITIES)
    def test_strictly_increasing(self, utility):
        xs = [0.0, 0.5, 1.0, 10.0, 49.9, 50.0, 51.7, 200.0]
        values = [utility_value(utility, x) for x in xs]
        assert all(a < b for a, b in zip(values, values[1:]))

    def test_crra_rejects_negative_income(self):
        with pytest.raises(DomainError):
            utility_value(CRRA(rho=2.0), -1.0)

    def test_crra_clamps_zero_income(self):
        # rho > 1 diverges at 0; the clamp keeps it huge but finite
        value = utility_value(CRRA(rho=2.0), 0.0)
        assert math.isfinite(value) and value < -1e8

    def test_reference_point_kink(self):
        u = ReferencePoint(ref_income=100.0, loss_aversion=3.0)
        assert utility_value(u, 110.0) == pytest.approx(10.0)
        assert utility_value(u, 90.0) == pytest.approx(-30.0)

    def test_crra_validation(self):
        with pytest.raises(RangeError):
            CRRA(rho=0.0)
        with pytest.raises(RangeError):
            CRRA(rho=1.0)
        with pytest.raises(RangeError):
            ReferencePoint(ref_income=0.0, loss_aversion=0.5)


class TestDecideCrime:
    def test_commits_when_undetectable_and_crime_pays(self):
        # p = 0 reduces the rule to crime_gain > legal_income
        assert decide_crime(profile(100, 50, 0, 0.0), RiskNeutral()) is Decision.COMMIT

    @pytest.mark.parametrize("utility", ALL_UTILITIES)
    def test_abstains_on_tie(self, utility):
        assert decide_crime(profile(50, 50, 0, 0.0), utility) is Decision.ABSTAIN

    def test_abstains_at_zero_expected_margin(self):
        # 0.5*100 - 0.5*100 = 0 is not strictly above 0
        assert decide_crime(profile(100, 0, 100, 0.5), RiskNeutral()) is Decision.ABSTAIN

    def test_crra_domain_error_on_negative_gain(self):
        with pytest.raises(DomainError):
            decide_crime(profile(-5.0, 1.0, 1.0, 0.1), CRRA(rho=2.0))

    def test_profile_validation(self):
        with pytest.raises(RangeError):
            profile(1, 1, 1, 1.5)
        with pytest.raises(RangeError):
            profile(1, 1, -0.1, 0.5)
        with pytest.raises(RangeError):
            profile(math.inf, 1, 0, 0.5)

    def test_monotone_in_each_argument(self):
        # raising the gain never flips commit -> abstain; raising the
        # penalty or the legal wage never flips abstain -> commit; raising
        # p never flips abstain -> commit while the rule is deterrent in p
        # (U(gain) + U(penalty) >= 0, see decide_crime)
        rng = random.Random(7)
        for _ in range(400):
            utility = rng.choice(ALL_UTILITIES)
            base = profile(rng.uniform(0, 200), rng.uniform(0, 200),
                           rng.uniform(0, 100), rng.random())
            before = decide_crime(base, utility)
            richer = profile(base.crime_gain + rng.uniform(0, 50),
                             base.legal_income, base.penalty, base.detention_prob)
            if before is Decision.COMMIT:
                assert decide_crime(richer, utility) is Decision.COMMIT
            if before is Decision.ABSTAIN:
                for bumped in (
                    profile(base.crime_gain, base.legal_income + rng.uniform(0, 50),
                            base.penalty, base.detention_prob),
                    profile(base.crime_gain, base.legal_income,
                            base.penalty + rng.uniform(0, 50), base.detention_prob),
                ):
                    assert decide_crime(bumped, utility) is Decision.ABSTAIN
                deterrent = (utility_value(utility, base.crime_gain)
                             + utility_value(utility, base.penalty)) >= 0
                if deterrent:
                    riskier = profile(base.crime_gain, base.legal_income, base.penalty,
                                      min(1.0, base.detention_prob + rng.random() * 0.5))
                    assert decide_crime(riskier, utility) is Decision.ABSTAIN

    def test_detention_rewards_crime_when_penalty_utility_is_deeply_negative(self):
        # known consequence of subtracting U(penalty): with CRRA and a tiny
        # penalty, U(penalty) is hugely negative and higher p adds
        # -p*U(penalty) > 0 to the crime side
        utility = CRRA(rho=2.0)
        near_zero_penalty = profile(100.0, 200.0, 0.5, 0.0)
        assert decide_crime(near_zero_penalty, utility) is Decision.ABSTAIN
        riskier = profile(100.0, 200.0, 0.5, 1.0)
        assert decide_crime(riskier, utility) is Decision.COMMIT

    def test_risk_neutral_reduction(self):
        # under identity utility the rule is exactly net return > 0
        rng = random.Random(11)
        for _ in range(400):
            prof = profile(rng.uniform(-100, 300), rng.uniform(-100, 300),
                           rng.uniform(0, 150), rng.random())
            expected = Decision.COMMIT if net_expected_return(prof) > 0 else Decision.ABSTAIN
            assert decide_crime(prof, RiskNeutral()) is expected


class TestNetExpectedReturn:
    def test_symmetric_cancellation(self):
        assert net_expected_return(profile(100, 100, 0, 0.0)) == 0.0

    def test_worked_example(self):
        assert net_expected_return(profile(100, 30, 50, 0.2)) == pytest.approx(40.0)

    def test_certain_detention(self):
        assert net_expected_return(profile(500, 0, 10, 1.0)) == pytest.approx(-10.0)


class TestParticipation:
    def test_no_participants(self):
        assert participation_decompose(0.0, 5.0).crimes_per_capita == 0.0

    def test_worked_example(self):
        stats = participation_decompose(0.05, 4.0)
        assert stats.crimes_per_capita == pytest.approx(0.2)

    def test_round_trip(self):
        stats = participation_decompose(0.05, 4.0)
        assert stats.implied_crimes_per_offender == pytest.approx(4.0, rel=1e-12)

    def test_identity_reconstruction_random(self):
        rng = random.Random(3)
        for _ in range(200):
            rate = rng.uniform(1e-6, 1.0)
            intensity = rng.uniform(0.0, 50.0)
            stats = participation_decompose(rate, intensity)
            assert stats.crimes_per_capita == rate * intensity
            if intensity > 0:
                assert stats.implied_crimes_per_offender == pytest.approx(
                    intensity, rel=1e-12)

    def test_range_errors(self):
        with pytest.raises(RangeError):
            participation_decompose(1.2, 1.0)
        with pytest.raises(RangeError):
            participation_decompose(0.5, -1.0)

    def test_zero_rate_has_no_implied_intensity(self):
        with pytest.raises(DomainError):
            _ = participation_decompose(0.0, 5.0).implied_crimes_per_offender


class TestCertaintyEquivalent:
    def test_risk_neutral_is_mean(self):
        assert certainty_equivalent(RiskNeutral(), [(0.5, 0.0), (0.5, 100.0)]) == pytest.approx(50.0)

    def test_crra_below_mean_closed_form_vs_bisection(self):
        utility = CRRA(rho=2.0)
        lottery = [(0.5, 50.0), (0.5, 150.0)]
        ce = certainty_equivalent(utility, lottery)
        assert ce < 100.0
        # independent oracle: bisect U(x) = E[U] directly
        eu = sum(p * utility_value(utility, x) for p, x in lottery)
        lo, hi = 50.0, 150.0
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if utility_value(utility, mid) < eu:
                lo = mid
            else:
                hi = mid
        assert ce == pytest.approx(0.5 * (lo + hi), abs=1e-8)

    @pytest.mark.parametrize("utility", ALL_UTILITIES)
    def test_degenerate_lottery(self, utility):
        assert certainty_equivalent(utility, [(1.0, 42.0)]) == pytest.approx(42.0, abs=1e-8)

    def test_crra_strictly_below_expectation_randomized(self):
        rng = random.Random(5)
        for _ in range(100):
            outcomes = sorted(rng.uniform(1, 500) for _ in range(3))
            if outcomes[2] - outcomes[0] < 1.0:
                continue
            w = [rng.uniform(0.1, 1.0) for _ in range(3)]
            total = sum(w)
            lottery = [(wi / total, x) for wi, x in zip(w, outcomes)]
            mean = sum(p * x for p, x in lottery)
            assert certainty_equivalent(CRRA(rho=2.0), lottery) < mean
            assert certainty_equivalent(RiskNeutral(), lottery) == pytest.approx(mean)

    def test_reference_point_bisection_accuracy(self):
        utility = ReferencePoint(ref_income=60.0, loss_aversion=2.0)
        lottery = [(0.25, 20.0), (0.75, 100.0)]
        ce = certainty_equivalent(utility, lottery)
        eu = sum(p * utility_value(utility, x) for p, x in lottery)
        assert utility_value(utility, ce) == pytest.approx(eu, abs=1e-6)

    def test_probability_sum_checked(self):
        with pytest.raises(RangeError):
            certainty_equivalent(RiskNeutral(), [(0.5, 0.0), (0.4, 1.0)])
        with pytest.raises(RangeError):
            certainty_equivalent(RiskNeutral(), [])
