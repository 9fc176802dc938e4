"""Solvers: brute force, index rule, subset DP, local search, thresholds,
prior sweeps.  Dual-route checks pit each fast path against genuine
enumeration on the same instance."""
import io
import itertools
from fractions import Fraction as F

import pytest

from jss import (
    Belief,
    Instance,
    Journal,
    SearchOrder,
    SolverError,
    belief_grid,
    brute_force_optimal,
    evaluate,
    example_pair,
    index_order_no_feedback,
    monotone_order,
    pairwise_swap_local_search,
    payoff_sweep,
    prior_threshold_2box,
    subset_dp_optimal,
    value_difference,
)
from jss.catalog import BY_NAME


@pytest.fixture
def pair():
    return example_pair("1/2")


# ---------------------------------------------------------------------------
# brute force


def test_brute_force_two_box_sides(pair):
    below = brute_force_optimal(pair.with_prior(F(17, 29) - F(1, 10 ** 6)))
    above = brute_force_optimal(pair.with_prior(F(17, 29) + F(1, 10 ** 6)))
    assert below.best_order.perm == (1, 0)
    assert above.best_order.perm == (0, 1)
    assert len(below.argmax_set) == len(above.argmax_set) == 1


def test_brute_force_tie_at_boundary(pair):
    res = brute_force_optimal(pair.with_prior(F(17, 29)))
    assert res.best_value == F(109, 145)
    assert [o.perm for o in res.argmax_set] == [(0, 1), (1, 0)]


def test_brute_force_agrees_with_plain_evaluation():
    # small random-ish instance, value checked against direct enumeration
    js = (
        Journal("A", 4, F(1, 3), F(1, 4)),
        Journal("B", 3, F(2, 5), F(1, 8), c=F(1, 10)),
        Journal("C", 1, F(3, 4), F(1, 2)),
    )
    inst = Instance(js, Belief(F(3, 7)), outside_option=F(1, 5))
    res = brute_force_optimal(inst)
    by_hand = {
        perm: evaluate(inst, SearchOrder(perm)).total
        for perm in itertools.permutations(range(3))
    }
    best = max(by_hand.values())
    assert res.best_value == best
    assert set(o.perm for o in res.argmax_set) == {
        p for p, v in by_hand.items() if v == best
    }


def test_brute_force_cap():
    js = tuple(Journal(f"J{i}", 20 - i, F(1, 2), 0) for i in range(11))
    with pytest.raises(SolverError):
        brute_force_optimal(Instance(js, Belief(F(1, 2))))


def test_brute_force_thread_count_does_not_change_answer(pair):
    inst = pair.with_prior(F(17, 29))
    solo = brute_force_optimal(inst, threads=1)
    split = brute_force_optimal(inst, threads=2)
    assert solo.best_value == split.best_value
    assert [o.perm for o in solo.argmax_set] == [o.perm for o in split.argmax_set]


def test_brute_force_float_mode(pair):
    inst = pair.with_prior(F(7, 10))
    res = brute_force_optimal(inst, mode="float")
    assert res.best_order.perm == (0, 1)
    assert res.best_value == pytest.approx(443 / 500, abs=1e-12)


# ---------------------------------------------------------------------------
# index rule (no feedback)


def test_index_rule_prefers_cost_adjusted_rate_over_raw_payoff():
    # u - c/a: 10 - 2 = 8 loses to 9 - 0.1 = 8.9 despite the higher payoff
    hi = Journal("HI", 10, F(1, 2), 0, c=1)
    lo = Journal("LO", 9, F(9, 10), 0, c=F(9, 100))
    for prior in (F(1, 3), F(1), F(1, 100)):
        inst = Instance((hi, lo), Belief(prior))
        res = index_order_no_feedback(inst)
        assert res.best_order.perm == (1, 0)
        brute = brute_force_optimal(inst)
        assert res.best_value == brute.best_value
        assert res.best_order in brute.argmax_set


def test_index_rule_rejects_feedback(pair):
    with pytest.raises(SolverError, match="J1, J2"):
        index_order_no_feedback(pair)


def test_index_rule_never_accepting_journal_sorts_last():
    js = (
        Journal("DEAD", 100, 0, 0),
        Journal("B", 2, F(1, 2), 0),
        Journal("A", 5, F(1, 4), 0),
    )
    inst = Instance(js, Belief(F(1, 2)))
    res = index_order_no_feedback(inst)
    assert inst.journal_names()[res.best_order.perm[-1]] == "DEAD"
    brute = brute_force_optimal(inst)
    assert res.best_value == brute.best_value
    assert res.best_order in brute.argmax_set


def test_index_rule_tie_expansion():
    twin1 = Journal("T1", 2, F(1, 2), 0)
    twin2 = Journal("T2", 2, F(1, 2), 0)
    other = Journal("O", 5, F(1, 3), 0)
    inst = Instance((twin1, twin2, other), Belief(F(2, 3)))
    res = index_order_no_feedback(inst)
    brute = brute_force_optimal(inst)
    assert res.best_value == brute.best_value
    assert sorted(o.perm for o in res.argmax_set) == sorted(
        o.perm for o in brute.argmax_set
    )
    assert res.details["tie_orders"] == 2


# ---------------------------------------------------------------------------
# subset DP


def _oi_instance():
    # a_i q_j = a_j q_i via a shared feedback-to-acceptance ratio 1/2
    js = (
        Journal("A", 6, F(2, 5), F(1, 5), c=F(1, 25)),
        Journal("B", 3, F(1, 2), F(1, 4)),
        Journal("C", 2, F(1, 5), F(1, 10), c=F(1, 50)),
        Journal("D", 1, F(4, 5), F(2, 5)),
    )
    return Instance(js, Belief(F(3, 5)), outside_option=F(1, 10))


def test_subset_dp_matches_brute_force():
    inst = _oi_instance()
    dp = subset_dp_optimal(inst)
    brute = brute_force_optimal(inst)
    assert dp.best_value == brute.best_value
    assert sorted(o.perm for o in dp.argmax_set) == sorted(
        o.perm for o in brute.argmax_set
    )


def test_subset_dp_rejects_order_dependent_updates(pair):
    with pytest.raises(SolverError, match="order-independent"):
        subset_dp_optimal(pair)


def test_subset_dp_ties_behind_a_sure_acceptance():
    # after the a=1 journal rejects a certainly-high paper, nothing is
    # reachable: every completion ties, and both routes must say so
    js = (
        Journal("A", 4, F(1, 2), 0),
        Journal("SURE", 2, 1, 0),
        Journal("C", 1, F(1, 3), 0),
        Journal("D", F(1, 2), F(1, 4), 0),
    )
    inst = Instance(js, Belief(F(1)))
    dp = subset_dp_optimal(inst)
    brute = brute_force_optimal(inst)
    assert dp.best_value == brute.best_value == F(3)
    assert sorted(o.perm for o in dp.argmax_set) == sorted(
        o.perm for o in brute.argmax_set
    )
    assert {o.perm for o in dp.argmax_set} == {(0, 1, 2, 3), (0, 1, 3, 2)}


def test_subset_dp_float_mode():
    inst = _oi_instance()
    dp = subset_dp_optimal(inst, mode="float")
    assert dp.best_value == pytest.approx(float(subset_dp_optimal(inst).best_value),
                                          abs=1e-12)


# ---------------------------------------------------------------------------
# local search


def test_local_search_climbs_to_the_optimum(pair):
    inst = pair.with_prior(F(7, 10))
    res = pairwise_swap_local_search(inst, start=SearchOrder((1, 0)))
    assert res.best_order.perm == (0, 1)
    assert res.best_value == F(443, 500)
    assert res.details["swaps"] == 1
    assert res.details["certified_global"] is False


def test_local_search_defaults_to_monotone_start(pair):
    res = pairwise_swap_local_search(pair)  # prior 1/2: swapped order wins
    assert res.best_order.perm == (1, 0)
    assert res.best_value == F(7, 10)


# ---------------------------------------------------------------------------
# two-box thresholds


def test_threshold_showcase_endpoints(pair):
    j1, j2 = pair.journals
    res = prior_threshold_2box(j1, j2)
    assert res.kind == "threshold"
    assert res.mu_star == F(17, 29)
    assert res.direction == "above"
    assert res.diff_at_0 == F(-17, 50)
    assert res.diff_at_1 == F(6, 25)


@pytest.mark.parametrize(
    "case, boundary",
    [
        ("strong_feedback_showcase", F(17, 29)),
        ("acceptance_rate_inverted", F(1, 2)),
        ("worthless_feedback_box", F(3, 5)),
        ("weak_feedback_floor", F(1, 16)),
    ],
)
def test_threshold_catalog_boundaries(case, boundary):
    inst = BY_NAME[case].instance("1/2")
    res = prior_threshold_2box(inst.journals[0], inst.journals[1])
    assert res.kind == "threshold"
    assert res.mu_star == boundary
    assert res.direction == "above"
    # the certificate matches direct evaluation on either side
    eps = F(1, 1000)
    assert value_difference(inst, boundary) == 0
    assert value_difference(inst, boundary + eps) > 0
    assert value_difference(inst, boundary - eps) < 0


def test_threshold_direction_below():
    # feedback favors the expensive slow box at low priors; its poor
    # cost-adjusted index loses at high priors, so the flip points down
    j1 = Journal("FB", 10, F(1, 10), F(1, 2), c=1)
    j2 = Journal("PAY", 1, 1, 0)
    res = prior_threshold_2box(j1, j2)
    assert res.kind == "threshold"
    assert res.mu_star == F(5, 6)
    assert res.direction == "below"
    assert res.diff_at_0 == F(1, 2) and res.diff_at_1 == F(-1, 10)
    inst = Instance((j1, j2), Belief(F(1, 2)))
    assert value_difference(inst, F(5, 6) - F(1, 100)) > 0
    assert value_difference(inst, F(5, 6) + F(1, 100)) < 0


def test_threshold_always_and_never():
    twin = Journal("T", 1, F(1, 2), F(1, 4))
    res = prior_threshold_2box(twin, twin)
    assert res.kind == "always" and res.degenerate

    slow = Journal("SLOW", 1, F(1, 5), 0, c=F(1, 10))
    fast = Journal("FAST", 1, F(1, 2), 0)
    res = prior_threshold_2box(slow, fast)
    assert res.kind == "never" and not res.degenerate
    assert res.mu_star is None


def test_value_difference_is_affine_in_the_prior(pair):
    d0 = value_difference(pair, F(0))
    d1 = value_difference(pair, F(1))
    for mu in (F(1, 7), F(1, 2), F(12, 13)):
        assert value_difference(pair, mu) == (1 - mu) * d0 + mu * d1


# ---------------------------------------------------------------------------
# grids and sweeps


def test_belief_grid_exact_endpoints():
    grid = belief_grid(0, 1, 5)
    assert grid == (F(0), F(1, 4), F(1, 2), F(3, 4), F(1))
    narrow = belief_grid("1/3", "2/3", 3)
    assert narrow == (F(1, 3), F(1, 2), F(2, 3))
    with pytest.raises(SolverError):
        belief_grid(0, 1, 1)


def test_payoff_sweep_single_flip(pair):
    table = payoff_sweep(pair, belief_grid(0, 1, 101))
    assert len(table.rows) == 101
    assert table.flip_count("J1>J2", "J2>J1") == 1
    # the winning label changes exactly at the threshold
    winners = [row["best"] for row in table.rows]
    assert winners[0] == "J2>J1" and winners[-1] == "J1>J2"


def test_payoff_sweep_tie_row_prefers_lexicographic(pair):
    table = payoff_sweep(pair, (F(17, 29), F(1, 2), F(7, 10)))
    assert table.rows[0]["tie"] is True
    assert table.rows[0]["best"] == "J1>J2"
    assert table.rows[1]["best"] == "J2>J1"
    assert table.rows[2]["best"] == "J1>J2"


def test_payoff_sweep_csv_shape(pair):
    buf = io.StringIO()
    payoff_sweep(pair, (F(1, 2), F(7, 10))).write_csv(buf)
    lines = buf.getvalue().strip().splitlines()
    assert lines[0] == "mu,value_J1>J2,value_J2>J1,best_order"
    assert lines[1] == "1/2,13/20,7/10,J2>J1"
    assert lines[2] == "7/10,443/500,41/50,J1>J2"


def test_payoff_sweep_best_only_path(pair):
    table = payoff_sweep(pair, (F(1, 2), F(7, 10)), per_order=False)
    assert table.labels == ("best",)
    assert [row["best"] for row in table.rows] == ["J2>J1", "J1>J2"]
    assert table.rows[0]["values"] == (F(7, 10),)


# ---------------------------------------------------------------------------
# invariances


def test_positive_scaling_preserves_argmax(pair):
    inst = pair.with_prior(F(17, 29))
    scaled = Instance(
        tuple(Journal(j.name, 7 * j.u, j.a, j.q, c=7 * j.c) for j in inst.journals),
        inst.prior,
        7 * inst.outside_option,
    )
    base = brute_force_optimal(inst)
    big = brute_force_optimal(scaled)
    assert big.best_value == 7 * base.best_value
    assert [o.perm for o in big.argmax_set] == [o.perm for o in base.argmax_set]


def test_monotone_order_helper(pair):
    assert monotone_order(pair).perm == (0, 1)
