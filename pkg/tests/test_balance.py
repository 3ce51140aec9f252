import random

import pytest
from hypothesis import given, strategies as st

from eqsplit.balance import group_by_value, pick_agreeing_pair, sign_balance
from eqsplit.graph import Graph, complete_graph, difference_neighbourhood


class TestSignBalance:
    def test_hits_target_exactly(self):
        out = sign_balance([2, 2, 3], 1)
        assert out.signs == (1, 1, -1)
        assert out.residual == 0

    def test_single_value(self):
        out = sign_balance([5], 5)
        assert out.signs == (1,)
        assert out.residual == 0

    def test_empty_zero_target(self):
        assert sign_balance([], 0).residual == 0

    def test_empty_nonzero_rejected(self):
        with pytest.raises(ValueError):
            sign_balance([], 3)

    def test_target_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            sign_balance([2, 2], 5)

    def test_negative_values_rejected(self):
        with pytest.raises(ValueError):
            sign_balance([1, -1], 0)

    def test_residual_bound_random(self):
        rnd = random.Random(0)
        for _ in range(10_000):
            t = rnd.randrange(1, 30)
            values = [rnd.randrange(1, 11) for _ in range(t)]
            a = min(values)
            target = rnd.randrange(-t * a, t * a + 1)
            out = sign_balance(values, target)
            assert out.residual <= max(values)
            assert abs(target - sum(s * v for s, v in zip(out.signs, values))) == out.residual

    def test_matches_or_bounds_exhaustive_optimum(self):
        # greedy residual is within [optimum, max(values)] against all 2^t sign vectors
        from itertools import product

        rnd = random.Random(5)
        for _ in range(50):
            t = rnd.randrange(1, 9)
            values = [rnd.randrange(1, 7) for _ in range(t)]
            target = rnd.randrange(-t * min(values), t * min(values) + 1)
            best = min(
                abs(target - sum(s * v for s, v in zip(signs, values)))
                for signs in product((1, -1), repeat=t)
            )
            out = sign_balance(values, target)
            assert best <= out.residual <= max(values)


class TestGroupByValue:
    def test_sweep_example(self):
        out = group_by_value([0, 0, 1, 1, 2, 2], b=1, group_size=2)
        assert len(out.groups) >= 1  # bound floor(6/2) - ceil(2/1) = 1
        assert len(out.groups) == 3
        for grp in out.groups:
            vals = [[0, 0, 1, 1, 2, 2][i] for i in grp]
            assert max(vals) - min(vals) <= 1

    def test_all_equal(self):
        out = group_by_value([4] * 10, b=0.5, group_size=3)
        assert len(out.groups) == 3

    def test_fewer_than_group_size(self):
        assert group_by_value([1, 2], b=10, group_size=3).groups == ()

    def test_groups_disjoint_and_bound_holds(self):
        import math

        rnd = random.Random(1)
        for _ in range(2_000):
            t = rnd.randrange(0, 40)
            a = rnd.randrange(1, 50)
            values = [rnd.randrange(0, a + 1) for _ in range(t)]
            b = rnd.randrange(1, 10)
            n_grp = rnd.randrange(1, 5)
            out = group_by_value(values, b=b, group_size=n_grp)
            seen = set()
            for grp in out.groups:
                assert len(grp) == n_grp
                vals = [values[i] for i in grp]
                assert max(vals) - min(vals) <= b
                assert not (set(grp) & seen)
                seen.update(grp)
            assert len(out.groups) >= max(0, t // n_grp - math.ceil(a / b))

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            group_by_value([1], b=0, group_size=1)
        with pytest.raises(ValueError):
            group_by_value([1], b=1, group_size=0)
        with pytest.raises(ValueError):
            group_by_value([-1], b=1, group_size=1)


class TestPickAgreeingPair:
    def test_complete_any_pair(self):
        g = complete_graph(6)
        pair = pick_agreeing_pair(g, 0, 1, 2, range(6))
        assert pair == (0, 1)  # zero disagreements everywhere, tie to smallest

    def test_star_leaves_qualify(self):
        g = Graph(4, [(0, 1), (0, 2), (0, 3)])
        assert pick_agreeing_pair(g, 0, 1, 2, range(4)) == (1, 2)

    def test_requires_distinct(self):
        with pytest.raises(ValueError):
            pick_agreeing_pair(complete_graph(4), 0, 0, 1, range(4))

    def test_two_thirds_bound_random(self):
        rnd = random.Random(9)
        for _ in range(1_000):
            n = 50
            edges = [
                (u, v) for u in range(n) for v in range(u + 1, n) if rnd.random() < 0.5
            ]
            g = Graph(n, edges)
            x, y, z = rnd.sample(range(n), 3)
            a, c = pick_agreeing_pair(g, x, y, z, range(n))
            assert {a, c} <= {x, y, z}
            assert 3 * len(difference_neighbourhood(g, a, c)) <= 2 * n


@given(
    st.lists(st.integers(min_value=1, max_value=20), min_size=1, max_size=30),
    st.data(),
)
def test_sign_balance_residual_property(values, data):
    a = min(values)
    target = data.draw(st.integers(-len(values) * a, len(values) * a))
    out = sign_balance(values, target)
    assert out.residual <= max(values)
