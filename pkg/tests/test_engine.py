"""Simulator behavior: absorption, action validation, jumps, replay."""

from __future__ import annotations

from fractions import Fraction

import pytest

from repairalloc.engine import Trace, TraceStep, count_jumps, scripted_actions, simulate, verify_trace
from repairalloc.errors import BudgetExceeded, NonAbsorbingPolicy, PolicyViolation, TraceMismatch
from repairalloc.model import Allocation, EntitySpec, NodeSpec, Scenario
from repairalloc.policies import LeastModifiedHealth, Scripted

F = Fraction


def build(nodes, entities, budget=None) -> Scenario:
    return Scenario(nodes=tuple(nodes), entities=tuple(entities), budget=budget)


def pair(v0_a="0.5", v0_b="0.3", dec="0.1", inc="0.7", cost=2, budget=None) -> Scenario:
    ids = ["a", "b"]
    return build(
        [NodeSpec("a", F(v0_a), F(dec)), NodeSpec("b", F(v0_b), F(dec))],
        [EntitySpec("e", F(cost), {nid: F(inc) for nid in ids})],
        budget,
    )


def test_unallocated_nodes_decay_to_failure():
    scenario = pair()
    trace, outcome = simulate(scenario, Allocation.build(scenario, {}), Scripted([]))
    assert outcome.reward == 0
    assert outcome.repaired == frozenset()
    assert outcome.failed == frozenset({"a", "b"})
    # a starts at 0.5 and loses 0.1 per step: absorbed after 5 steps
    assert trace.terminal_step == 5
    assert trace.health_at(3, "a") == F("0.2")
    assert trace.steps[-1].healths == (F(0), F(0))


def test_scripted_run_exact_health_sequence():
    scenario = pair()
    allocation = Allocation.build(scenario, {"e": {"a", "b"}})
    script = [{"e": "b"}, {"e": "a"}]
    trace, outcome = simulate(scenario, allocation, Scripted(script))
    # b: 0.3 -> 1.0 (clamped), a decays then gets repaired
    assert trace.health_at(1, "b") == F(1)
    assert trace.health_at(1, "a") == F("0.4")
    assert trace.health_at(2, "a") == F(1)
    assert outcome.reward == 2
    assert outcome.failed == frozenset()
    assert trace.terminal_step == 2


def test_simulate_rejects_over_budget_allocation():
    scenario = pair(budget=F(2))
    allocation = Allocation.build(scenario, {"e": {"a", "b"}})
    with pytest.raises(BudgetExceeded):
        simulate(scenario, allocation, Scripted([]))


def test_simulate_rejects_target_outside_allocated_set():
    scenario = pair()
    allocation = Allocation.build(scenario, {"e": {"a"}})
    with pytest.raises(PolicyViolation):
        simulate(scenario, allocation, Scripted([{"e": "b"}]))


def test_simulate_rejects_target_on_absorbed_node():
    scenario = pair()
    allocation = Allocation.build(scenario, {"e": {"a", "b"}})
    # b is repaired after the first step; targeting it again is illegal
    with pytest.raises(PolicyViolation) as err:
        simulate(scenario, allocation, Scripted([{"e": "b"}, {"e": "b"}]))
    assert "repaired" in str(err.value)


def test_simulate_rejects_unknown_entity_action():
    scenario = pair()
    allocation = Allocation.build(scenario, {"e": {"a"}})
    with pytest.raises(PolicyViolation):
        simulate(scenario, allocation, Scripted([{"e": "a", "q": "b"}]))


def test_cycle_detection_raises_non_absorbing():
    # equal decay, repair rate equal to decay: least-modified-health
    # alternates between the two nodes and the health vector repeats
    scenario = pair(v0_a="0.5", v0_b="0.5", dec="0.1", inc="0.1")
    allocation = Allocation.build(scenario, {"e": {"a", "b"}})
    with pytest.raises(NonAbsorbingPolicy) as err:
        simulate(scenario, allocation, LeastModifiedHealth())
    assert "repeats" in str(err.value)


def test_max_steps_cutoff_raises_non_absorbing():
    scenario = pair(v0_a="0.5", v0_b="0.5", dec="0.1", inc="0.1")
    allocation = Allocation.build(scenario, {"e": {"a", "b"}})
    script = [{"e": "a"}, {"e": "b"}] * 50
    with pytest.raises(NonAbsorbingPolicy) as err:
        simulate(scenario, allocation, Scripted(script), max_steps=10)
    assert "within 10 steps" in str(err.value)


def test_count_jumps_switch_before_repair():
    scenario = pair(v0_a="0.2", inc="0.3")
    allocation = Allocation.build(scenario, {"e": {"a", "b"}})
    # e targets a (not finished), abandons it for b, then repairs b
    script = [{"e": "a"}, {"e": "b"}, {"e": "b"}, {"e": "b"}]
    trace, outcome = simulate(scenario, allocation, Scripted(script))
    assert trace.health_at(1, "a") == F("0.5")
    assert trace.health_at(4, "b") == F(1)
    assert outcome.jumps == 1
    assert outcome.repaired == frozenset({"b"})
    assert outcome.failed == frozenset({"a"})


def test_count_jumps_switch_after_repair_is_free():
    scenario = pair()
    allocation = Allocation.build(scenario, {"e": {"a", "b"}})
    trace, outcome = simulate(scenario, allocation, Scripted([{"e": "b"}, {"e": "a"}]))
    assert trace.health_at(1, "b") == F(1)
    assert outcome.jumps == 0


def test_count_jumps_going_idle_counts():
    scenario = pair(v0_a="0.2", inc="0.3")
    allocation = Allocation.build(scenario, {"e": {"a"}})
    # target a once, idle while a is still active, then finish it
    script = [{"e": "a"}, {"e": None}, {"e": "a"}, {"e": "a"}]
    trace, outcome = simulate(scenario, allocation, Scripted(script))
    assert outcome.jumps == 1
    assert outcome.reward == 1
    assert trace.terminal_step == 4


def test_verify_trace_accepts_simulator_output():
    scenario = pair()
    allocation = Allocation.build(scenario, {"e": {"a", "b"}})
    trace, _ = simulate(scenario, allocation, Scripted([{"e": "b"}, {"e": "a"}]))
    verify_trace(scenario, allocation, trace)


def test_verify_trace_catches_tampered_health():
    scenario = pair()
    allocation = Allocation.build(scenario, {"e": {"a", "b"}})
    trace, _ = simulate(scenario, allocation, Scripted([{"e": "b"}, {"e": "a"}]))
    rows = list(trace.steps)
    healths = list(rows[1].healths)
    healths[0] += F(1, 100)
    rows[1] = TraceStep(tuple(healths), rows[1].actions)
    bad = Trace(trace.node_ids, trace.entity_ids, tuple(rows))
    with pytest.raises(TraceMismatch):
        verify_trace(scenario, allocation, bad)


def test_verify_trace_catches_wrong_initial_row():
    scenario = pair()
    allocation = Allocation.build(scenario, {"e": {"a", "b"}})
    trace, _ = simulate(scenario, allocation, Scripted([{"e": "b"}, {"e": "a"}]))
    rows = list(trace.steps)
    rows[0] = TraceStep((F("0.9"), F("0.9")), rows[0].actions)
    with pytest.raises(TraceMismatch) as err:
        verify_trace(scenario, allocation, Trace(trace.node_ids, trace.entity_ids, tuple(rows)))
    assert "v0" in str(err.value)


def test_verify_trace_catches_truncated_trace():
    scenario = pair()
    allocation = Allocation.build(scenario, {"e": {"a", "b"}})
    trace, _ = simulate(scenario, allocation, Scripted([{"e": "b"}, {"e": "a"}]))
    truncated = Trace(trace.node_ids, trace.entity_ids, trace.steps[:-1])
    with pytest.raises(TraceMismatch) as err:
        verify_trace(scenario, allocation, truncated)
    assert "Active" in str(err.value)


def test_scripted_actions_replays_identically():
    scenario = pair()
    allocation = Allocation.build(scenario, {"e": {"a", "b"}})
    trace, _ = simulate(scenario, allocation, Scripted([{"e": "b"}, {"e": "a"}]))
    replay, _ = simulate(scenario, allocation, Scripted(scripted_actions(trace)))
    assert replay.steps == trace.steps


def test_count_jumps_on_hand_built_trace():
    trace = Trace(
        node_ids=("a", "b"),
        entity_ids=("e",),
        steps=(
            TraceStep((F("0.5"), F("0.5")), {"e": "a"}),
            TraceStep((F("0.6"), F("0.4")), {"e": "b"}),  # a at 0.6 < 1: jump
            TraceStep((F("0.5"), F("0.5")), {"e": "b"}),
            TraceStep((F("0.4"), F(1)), {"e": None}),  # b reached 1: no jump
        ),
    )
    assert count_jumps(trace) == 1
