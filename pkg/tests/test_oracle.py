from __future__ import annotations

import random
from fractions import Fraction

import pytest

from repairalloc.allocation import allocate_budgeted, run_online_policy
from repairalloc.demos import DEMOS, mixed_costs, online_suboptimal, repair_dominant
from repairalloc.engine import simulate, verify_trace
from repairalloc.errors import InstanceTooLarge
from repairalloc.model import Allocation, EntitySpec, NodeSpec, Scenario
from repairalloc.oracle import (
    enumerate_feasible_allocations,
    optimal_sequencing_reward,
    oracle_optimal,
    sequencing_reward_no_memo,
)
from repairalloc.policies import LeastModifiedHealth

from generators import random_repair_dominant, random_uniform_regime

F = Fraction


def two_nodes(budget=None) -> Scenario:
    ids = ["a", "b"]
    return Scenario(
        nodes=(NodeSpec("a", F("0.5"), F("0.1")), NodeSpec("b", F("0.3"), F("0.1"))),
        entities=(EntitySpec("e", F(2), {nid: F("0.7") for nid in ids}),),
        budget=budget,
    )


def test_enumerate_counts_unbudgeted_pair():
    allocations = list(enumerate_feasible_allocations(two_nodes()))
    assert len(allocations) == 4
    assert allocations[0].sets == {"e": frozenset()}
    seen = {tuple(sorted(a.sets["e"])) for a in allocations}
    assert seen == {(), ("a",), ("b",), ("a", "b")}


def test_enumerate_counts_three_node_two_entity_demo():
    assert len(list(enumerate_feasible_allocations(online_suboptimal()))) == 27


def test_enumerate_zero_budget_leaves_only_empty():
    allocations = list(enumerate_feasible_allocations(two_nodes(budget=F(0))))
    assert len(allocations) == 1
    assert allocations[0].allocated_nodes == frozenset()


def test_enumerate_respects_cap():
    with pytest.raises(InstanceTooLarge, match="81 assignments exceed the enumeration cap of 80"):
        list(enumerate_feasible_allocations(repair_dominant(), cap=80))


def test_sequencing_reward_demo_allocation():
    scenario = repair_dominant()
    allocation = Allocation.build(scenario, {"e": {"a", "b"}})
    reward, trace = optimal_sequencing_reward(scenario, allocation)
    assert reward == 2
    verify_trace(scenario, allocation, trace)


def test_sequencing_reward_offline_split_saves_all_three():
    scenario = online_suboptimal()
    allocation = Allocation.build(scenario, {"d": {"a", "b"}, "e": {"c"}})
    reward, trace = optimal_sequencing_reward(scenario, allocation)
    assert reward == 3
    verify_trace(scenario, allocation, trace)


def test_sequencing_reward_empty_allocation():
    scenario = repair_dominant()
    allocation = Allocation.build(scenario, {})
    reward, trace = optimal_sequencing_reward(scenario, allocation)
    assert reward == 0
    assert all(h == 0 for h in trace.steps[-1].healths)


def test_sequencing_reward_single_entity_cannot_save_all_five():
    # one cheap entity holding every node: the best schedule still loses one
    scenario = mixed_costs()
    allocation = Allocation.build(scenario, {"f": {"a", "b", "c", "d", "e"}})
    reward, _ = optimal_sequencing_reward(scenario, allocation)
    assert reward == 4


def test_sequencing_reward_respects_memo_cap():
    scenario = two_nodes()
    allocation = Allocation.build(scenario, {"e": {"a", "b"}})
    with pytest.raises(InstanceTooLarge, match="search exceeded the state cap of 3"):
        optimal_sequencing_reward(scenario, allocation, memo_cap=3)


def test_oracle_demo_optima():
    assert oracle_optimal(repair_dominant()).optimal_reward == 2
    assert oracle_optimal(mixed_costs()).optimal_reward == 4

    result = oracle_optimal(online_suboptimal())
    assert result.optimal_reward == 3
    assert result.witness_allocation.sets == {
        "d": frozenset({"a", "b"}),
        "e": frozenset({"c"}),
    }

    mixed = oracle_optimal(DEMOS["mixed_rates"]())
    assert mixed.optimal_reward == 5
    assert mixed.witness_allocation.sets == {
        "f": frozenset({"a", "b", "c", "e"}),
        "g": frozenset({"d"}),
    }


def test_oracle_witnesses_replay_on_every_demo():
    for name, build in DEMOS.items():
        scenario = build()
        result = oracle_optimal(scenario)
        verify_trace(scenario, result.witness_allocation, result.witness_trace)
        assert result.witness_outcome.reward == result.optimal_reward, name
        assert result.witness_allocation.fits_budget(scenario), name


def test_oracle_dominates_bundled_strategies():
    for name, build in DEMOS.items():
        scenario = build()
        optimal = oracle_optimal(scenario).optimal_reward
        online = run_online_policy(scenario, force=True)
        assert optimal >= online.outcome.reward, name

    scenario = repair_dominant()
    allocation = allocate_budgeted(scenario)
    _, outcome = simulate(scenario, allocation, LeastModifiedHealth())
    assert oracle_optimal(scenario).optimal_reward >= outcome.reward


def test_oracle_pruning_matches_plain_maximum():
    rng = random.Random(4411)
    for _ in range(25):
        if rng.random() < 0.5:
            scenario = random_repair_dominant(rng, max_nodes=3, max_entities=2)
        else:
            scenario = random_uniform_regime(rng, max_nodes=3, max_entities=2)
        plain = max(
            optimal_sequencing_reward(scenario, allocation)[0]
            for allocation in enumerate_feasible_allocations(scenario)
        )
        assert oracle_optimal(scenario).optimal_reward == plain


def short_decay_trio() -> Scenario:
    # every node absorbs within two steps of attention either way, so the
    # exponential reference search stays tiny
    ids = ["a", "b", "c"]
    return Scenario(
        nodes=tuple(NodeSpec(nid, F("1/2"), F("1/2")) for nid in ids),
        entities=(
            EntitySpec("u", F(1), {nid: F("1/2") for nid in ids}),
            EntitySpec("v", F(1), {nid: F("1/2") for nid in ids}),
        ),
        budget=None,
    )


def test_memoized_search_agrees_with_no_memo_reference():
    for scenario in (two_nodes(), short_decay_trio()):
        for allocation in enumerate_feasible_allocations(scenario):
            memoized, _ = optimal_sequencing_reward(scenario, allocation)
            assert memoized == sequencing_reward_no_memo(scenario, allocation)

    # random repair-dominant draws, kept to horizons the exponential
    # reference can enumerate: short lifetimes and quick repairs
    rng = random.Random(5513)
    accepted = 0
    while accepted < 15:
        scenario = random_repair_dominant(rng, max_nodes=3, max_entities=2)
        quick = all(
            node.v0 / node.delta_dec <= 5
            and all((1 - node.v0) / e.repair_rate[node.id] <= 3 for e in scenario.entities)
            for node in scenario.nodes
        )
        if not quick:
            continue
        accepted += 1
        allocations = list(enumerate_feasible_allocations(scenario))
        for allocation in rng.sample(allocations, min(3, len(allocations))):
            memoized, _ = optimal_sequencing_reward(scenario, allocation)
            assert memoized == sequencing_reward_no_memo(scenario, allocation)


def test_oracle_witness_is_deterministic():
    first = oracle_optimal(online_suboptimal())
    second = oracle_optimal(online_suboptimal())
    assert first.witness_allocation.sets == second.witness_allocation.sets
    assert first.witness_trace == second.witness_trace
    assert first.optimal_reward == second.optimal_reward
