"""Total economic value: direct, additional, and non-use components."""

import math
import random

import pytest

from heritagecrime.errors import (
    DuplicateComponentError,
    EmptyComponentWarning,
    InvariantError,
    MissingEstimateWarning,
    NoComparablesError,
    RangeError,
)
from heritagecrime.valuation import (
    Comparable,
    ComparableSource,
    DirectApproach,
    DirectValueInput,
    NonUseComponent,
    NonUseKind,
    SecondaryActivityLedger,
    SecondaryStream,
    SurveyResponse,
    additional_monetary_value,
    aggregate_wtp,
    direct_value,
    tev_total,
    tourism_baseline,
)


def comp(source, amount):
    return Comparable(source=ComparableSource(source), amount=amount)


class TestDirectValue:
    def test_normative_caps_the_estimate(self):
        inp = DirectValueInput(
            approach=DirectApproach.NORMATIVE,
            comparables=(comp("auction", 10_000.0),),
        )
        assert direct_value(inp) == 2500.0

    def test_normative_below_cap_passes_through(self):
        inp = DirectValueInput(
            approach=DirectApproach.NORMATIVE,
            comparables=(comp("ticket_revenue", 900.0),),
        )
        assert direct_value(inp) == 900.0

    def test_normative_without_estimate_warns_and_returns_cap(self):
        inp = DirectValueInput(approach=DirectApproach.NORMATIVE)
        with pytest.warns(MissingEstimateWarning):
            assert direct_value(inp) == 2500.0

    def test_market_single_comparable(self):
        inp = DirectValueInput(
            approach=DirectApproach.MARKET,
            comparables=(comp("auction", 1_000_000.0),),
        )
        assert direct_value(inp) == 1_000_000.0

    def test_market_takes_maximum(self):
        inp = DirectValueInput(
            approach=DirectApproach.MARKET,
            comparables=(comp("auction", 5e6), comp("insurance", 8e6),
                         comp("ticket_revenue", 1e5)),
        )
        assert direct_value(inp) == 8e6

    def test_market_combine_alternatives(self):
        inp = DirectValueInput(
            approach=DirectApproach.MARKET,
            comparables=(comp("auction", 10.0), comp("insurance", 20.0),
                         comp("black_market", 90.0)),
        )
        assert direct_value(inp, combine="mean") == pytest.approx(40.0)
        assert direct_value(inp, combine="median") == pytest.approx(20.0)
        with pytest.raises(RangeError):
            direct_value(inp, combine="sum")

    def test_market_requires_comparables(self):
        with pytest.raises(NoComparablesError):
            direct_value(DirectValueInput(approach=DirectApproach.MARKET))

    def test_normative_never_exceeds_cap_randomized(self):
        rng = random.Random(9)
        for _ in range(200):
            comparables = tuple(
                comp(rng.choice(list(ComparableSource)).value, rng.uniform(0, 1e7))
                for _ in range(rng.randint(0, 4))
            )
            inp = DirectValueInput(approach=DirectApproach.NORMATIVE,
                                   comparables=comparables)
            if comparables:
                assert direct_value(inp) <= inp.normative_cap
            else:
                with pytest.warns(MissingEstimateWarning):
                    assert direct_value(inp) <= inp.normative_cap

    def test_negative_comparable_rejected(self):
        with pytest.raises(RangeError):
            comp("auction", -1.0)


def ledger(label, **streams):
    return SecondaryActivityLedger(
        period_label=label,
        streams={SecondaryStream(k): v for k, v in streams.items()},
    )


class TestAdditionalMonetaryValue:
    def test_identical_ledgers_cancel(self):
        a = ledger("before", restaurants=100.0, hotels=200.0)
        assert additional_monetary_value(a, a) == 0.0

    def test_worked_example(self):
        before = ledger("before", restaurants=100.0, hotels=200.0)
        during = ledger("during", restaurants=180.0, hotels=260.0)
        assert additional_monetary_value(before, during) == pytest.approx(140.0)

    def test_missing_stream_defaults_to_zero(self):
        before = ledger("before", advertising=50.0)
        during = ledger("during")
        assert additional_monetary_value(before, during) == pytest.approx(-50.0)

    def test_antisymmetric_randomized(self):
        rng = random.Random(13)
        streams = list(SecondaryStream)
        for _ in range(100):
            a = ledger("a", **{s.value: rng.uniform(0, 1000)
                               for s in rng.sample(streams, rng.randint(0, 5))})
            b = ledger("b", **{s.value: rng.uniform(0, 1000)
                               for s in rng.sample(streams, rng.randint(0, 5))})
            assert additional_monetary_value(a, b) == pytest.approx(
                -additional_monetary_value(b, a))

    def test_negative_revenue_rejected(self):
        with pytest.raises(RangeError):
            ledger("x", hotels=-5.0)


def response(kind, wtp, protest=False, rid="r"):
    return SurveyResponse(respondent_id=rid, component=NonUseKind(kind),
                          wtp=wtp, protest_flag=protest)


class TestAggregateWtp:
    def test_mean_times_population(self):
        responses = [response("existence", 10.0), response("existence", 20.0)]
        with pytest.warns(EmptyComponentWarning):
            out = aggregate_wtp(responses, population=1000)
        assert out[NonUseKind.EXISTENCE] == pytest.approx(15_000.0)

    def test_trim_drops_outlier(self):
        responses = [response("existence", 10.0), response("existence", 20.0),
                     response("existence", 10_000.0)]
        with pytest.warns(EmptyComponentWarning):
            out = aggregate_wtp(responses, population=1000, trim_fraction=0.25)
        assert out[NonUseKind.EXISTENCE] == pytest.approx(15_000.0)

    def test_all_protest_gives_zeros_with_warnings(self):
        responses = [response("existence", 10.0, protest=True),
                     response("option", 5.0, protest=True)]
        with pytest.warns(EmptyComponentWarning):
            out = aggregate_wtp(responses, population=100)
        assert all(v == 0.0 for v in out.values())
        assert set(out) == set(NonUseKind)

    def test_matches_brute_force_on_random_surveys(self):
        rng = random.Random(21)
        for _ in range(60):
            responses = [
                response(rng.choice(list(NonUseKind)).value,
                         round(rng.uniform(0, 500), 2),
                         protest=rng.random() < 0.2, rid=f"r{i}")
                for i in range(rng.randint(0, 50))
            ]
            population = rng.randint(1, 100_000)
            trim = rng.choice([0.0, 0.1, 0.25])
            import warnings as _w
            with _w.catch_warnings():
                _w.simplefilter("ignore")
                got = aggregate_wtp(responses, population, trim)
            # independent recomputation with plain loops
            for kind in NonUseKind:
                bids = sorted(r.wtp for r in responses
                              if r.component is kind and not r.protest_flag)
                drop = math.ceil(len(bids) * trim)
                kept = bids[:len(bids) - drop] if drop else bids
                want = (sum(kept) / len(kept)) * population if kept else 0.0
                assert got[kind] == pytest.approx(want, rel=1e-12, abs=1e-9)

    def test_validation(self):
        with pytest.raises(RangeError):
            aggregate_wtp([], population=0)
        with pytest.raises(RangeError):
            aggregate_wtp([], population=10, trim_fraction=0.3)
        with pytest.raises(RangeError):
            response("existence", -1.0)


class TestTevTotal:
    def test_all_zero(self):
        assert tev_total(0.0, 0.0, []).tev == 0.0

    def test_worked_example(self):
        breakdown = tev_total(2500.0, 140.0, [
            NonUseComponent(kind=NonUseKind.EXISTENCE, amount=15_000.0),
            NonUseComponent(kind=NonUseKind.DONATION, amount=5_000.0),
        ])
        assert breakdown.tev == pytest.approx(22_640.0)
        assert breakdown.indirect_total == pytest.approx(20_000.0)

    def test_duplicate_kind_rejected(self):
        with pytest.raises(DuplicateComponentError):
            tev_total(0.0, 0.0, [
                NonUseComponent(kind=NonUseKind.EXISTENCE, amount=1.0),
                NonUseComponent(kind=NonUseKind.EXISTENCE, amount=2.0),
            ])

    def test_additivity_exact_randomized(self):
        rng = random.Random(17)
        kinds = list(NonUseKind)
        for _ in range(300):
            picked = rng.sample(kinds, rng.randint(0, 5))
            components = [NonUseComponent(kind=k, amount=rng.uniform(0, 1e6))
                          for k in picked]
            direct = rng.uniform(0, 1e6)
            additional = rng.uniform(-1e5, 1e6)
            breakdown = tev_total(direct, additional, components)
            assert breakdown.tev == direct + additional + math.fsum(
                c.amount for c in components)

    def test_excluded_value_names_are_unrepresentable(self):
        assert len(NonUseKind) == 5
        for name in ("aesthetic", "spiritual", "social", "symbolic",
                     "Aesthetic"):
            with pytest.raises(ValueError):
                NonUseKind(name)

    def test_scientific_subvalue_rules(self):
        educational = NonUseComponent(kind=NonUseKind.EDUCATIONAL, amount=100.0,
                                      scientific_subvalue=40.0)
        assert educational.scientific_subvalue == 40.0
        with pytest.raises(InvariantError):
            NonUseComponent(kind=NonUseKind.PRESTIGE, amount=100.0,
                            scientific_subvalue=10.0)
        with pytest.raises(InvariantError):
            NonUseComponent(kind=NonUseKind.EDUCATIONAL, amount=100.0,
                            scientific_subvalue=150.0)


class TestTourismBaseline:
    def test_consistent_with_billion_levs_claim(self):
        revenue = tourism_baseline(82e9, 0.136, 0.12)
        assert revenue == pytest.approx(1.33824e9)
        assert revenue > 1e9

    def test_zero_share(self):
        assert tourism_baseline(5e10, 0.0, 0.5) == 0.0

    def test_full_shares_identity(self):
        assert tourism_baseline(7e9, 1.0, 1.0) == 7e9

    def test_share_range_errors(self):
        with pytest.raises(RangeError):
            tourism_baseline(1e9, 1.5, 0.1)
        with pytest.raises(RangeError):
            tourism_baseline(1e9, 0.5, -0.1)
