import json
import math

import pytest

from eqsplit.probability import (
    BinomialSpec,
    MC_CLAIMS,
    bernstein_upper_bound,
    binomial_pmf,
    binsmall_lower_bound,
    exact_even_probability,
    exact_two_sided_tail,
    monte_carlo_verdict,
    parity_probability,
    spacesplit_lower_bound,
)


class TestPmf:
    def test_single_trial(self):
        assert binomial_pmf(BinomialSpec(1, 0.5), 0) == 0.5

    def test_four_choose_two(self):
        assert binomial_pmf(BinomialSpec(4, 0.5), 2) == 0.375

    def test_normalization(self):
        spec = BinomialSpec(30, 0.37)
        total = sum(binomial_pmf(spec, k) for k in range(31))
        assert abs(total - 1.0) < 1e-12

    def test_degenerate_p(self):
        assert binomial_pmf(BinomialSpec(5, 0.0), 0) == 1.0
        assert binomial_pmf(BinomialSpec(5, 1.0), 5) == 1.0

    def test_out_of_range_k(self):
        with pytest.raises(ValueError):
            binomial_pmf(BinomialSpec(4, 0.5), 5)

    def test_large_n_close_to_exact_scaling(self):
        # log-gamma path agrees with a rational computation at the crossover
        from fractions import Fraction

        n, p, k = 80, 0.3, 24
        exact = float(math.comb(n, k) * Fraction(p) ** k * (1 - Fraction(p)) ** (n - k))
        assert abs(binomial_pmf(BinomialSpec(n, p), k) - exact) < 1e-12


class TestParity:
    def test_single_trial(self):
        assert parity_probability(BinomialSpec(1, 0.3)) == pytest.approx(0.7)

    def test_half_is_half(self):
        for n in (1, 5, 33):
            assert parity_probability(BinomialSpec(n, 0.5)) == 0.5

    def test_p_one_even_trials(self):
        assert parity_probability(BinomialSpec(2, 1.0)) == 1.0

    def test_matches_pmf_summation(self):
        for n in (1, 7, 20, 64):
            for tenths in range(0, 11):
                spec = BinomialSpec(n, tenths / 10.0)
                assert abs(parity_probability(spec) - exact_even_probability(spec)) < 1e-12


class TestBinsmall:
    def test_example_k1(self):
        spec = BinomialSpec(10, 0.1)
        bound = binsmall_lower_bound(spec, 1)
        assert bound == pytest.approx(math.exp(-10.0), rel=1e-12)
        assert binomial_pmf(spec, 1) >= bound

    def test_example_k0(self):
        spec = BinomialSpec(20, 0.05)
        assert binsmall_lower_bound(spec, 0) == pytest.approx(math.exp(-10.0))
        assert binomial_pmf(spec, 0) >= binsmall_lower_bound(spec, 0)

    def test_zero_mean(self):
        assert binsmall_lower_bound(BinomialSpec(5, 0.0), 0) == 1.0

    def test_rejects_large_p(self):
        with pytest.raises(ValueError):
            binsmall_lower_bound(BinomialSpec(10, 0.6), 1)

    def test_bound_below_pmf_on_grid(self):
        for n in (5, 10, 30, 64):
            for tenths in range(0, 6):
                spec = BinomialSpec(n, tenths / 10.0)
                for k in range(0, min(n, int(spec.mean) + 3) + 1):
                    assert binomial_pmf(spec, k) >= binsmall_lower_bound(spec, k) - 1e-15


class TestBernstein:
    def test_example(self):
        spec = BinomialSpec(100, 0.5)
        bound = bernstein_upper_bound(spec, 30.0)
        assert bound == pytest.approx(math.exp(-900.0 / 70.0))
        assert exact_two_sided_tail(spec, 30.0) <= bound

    def test_impossible_deviation(self):
        assert exact_two_sided_tail(BinomialSpec(10, 0.5), 10.0) == 0.0

    def test_skewed(self):
        spec = BinomialSpec(64, 0.9)
        assert exact_two_sided_tail(spec, 16.0) <= bernstein_upper_bound(spec, 16.0)

    def test_grid(self):
        for n in (10, 30, 64):
            for tenths in range(1, 10):
                spec = BinomialSpec(n, tenths / 10.0)
                for t in (1.0, 2.0, n / 4.0, n / 2.0):
                    assert exact_two_sided_tail(spec, t) <= bernstein_upper_bound(spec, t) + 1e-15

    def test_rejects_nonpositive_t(self):
        with pytest.raises(ValueError):
            bernstein_upper_bound(BinomialSpec(10, 0.5), 0.0)


class TestSpacesplit:
    def test_p_one(self):
        assert spacesplit_lower_bound(1.0) == 1.0

    def test_binomial_example(self):
        spec = BinomialSpec(10, 0.5)
        exact = sum(binomial_pmf(spec, k) for k in range(3, 11))
        assert exact == pytest.approx(1.0 - 56.0 / 1024.0)
        assert exact >= spacesplit_lower_bound(0.5)

    def test_two_point_tight_direction(self):
        # X in {0, N} with P(X=N)=p: P(X >= Np/2) = p >= p/(2-p)
        for tenths in range(1, 11):
            p = tenths / 10.0
            assert p >= spacesplit_lower_bound(p)

    def test_binomial_grid(self):
        for n in (5, 10, 20, 50):
            for tenths in range(1, 11):
                p = tenths / 10.0
                spec = BinomialSpec(n, p)
                half = n * p / 2.0
                prob = sum(binomial_pmf(spec, k) for k in range(n + 1) if k >= half)
                assert prob >= spacesplit_lower_bound(p) - 1e-12


class TestMonteCarloVerdicts:
    def test_unknown_claim(self):
        with pytest.raises(ValueError):
            monte_carlo_verdict("nosuch")

    def test_too_few_trials(self):
        with pytest.raises(ValueError):
            monte_carlo_verdict("binparity", trials=10)

    def test_binparity_holds(self):
        v = monte_carlo_verdict("binparity", trials=100_000, seed=3)
        assert v.holds

    def test_deterministic_bytes(self):
        a = monte_carlo_verdict("bernstein", trials=20_000, seed=11).dumps()
        b = monte_carlo_verdict("bernstein", trials=20_000, seed=11).dumps()
        assert a == b

    def test_json_schema(self):
        v = monte_carlo_verdict("spacesplit", trials=10_000, seed=0)
        record = json.loads(v.dumps())
        assert sorted(record) == [
            "bound",
            "claim",
            "holds",
            "params",
            "probability",
            "seed",
            "trials",
        ]

    @pytest.mark.parametrize("claim", MC_CLAIMS)
    def test_all_claims_hold_at_default_params(self, claim):
        trials = 20_000 if claim == "binclose" else 50_000
        assert monte_carlo_verdict(claim, trials=trials, seed=0).holds

    def test_binclose_rejects_small_p(self):
        with pytest.raises(ValueError):
            monte_carlo_verdict("binclose", params={"p": 0.3}, trials=10_000)
