"""Allocation algorithms: who gets which nodes.

Two allocators are provided.  ``allocate_budgeted`` hands disjoint node
sets to entities once at t=0, cheapest entity first, using a greedy
largest-repairable-subset construction that is optimal in the
repair-dominant regime.  ``run_online_policy`` assigns nodes one at a time
as entities free up, healthiest node first, which carries a factor-1/2
guarantee in the decay-dominant uniform regime.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from repairalloc.engine import Outcome, Trace, TraceStep, count_jumps
from repairalloc.errors import AssumptionViolated
from repairalloc.model import (
    Allocation,
    NodeSpec,
    NodeState,
    Scenario,
    check_assumption1,
    check_assumption2,
    step_health,
)
from repairalloc.policies import healthiest_target
from repairalloc.rational import ceil_div


def lifetime_index(node: NodeSpec) -> int:
    """Steps until an untargeted node hits health 0: ceil(v0 / delta_dec)."""
    return ceil_div(node.v0 / node.delta_dec)


def feasible_ordered_set(nodes: Iterable[NodeSpec]) -> bool:
    """Whether an ordered list of nodes can all be saved by one entity.

    The list (n_1, ..., n_z) is feasible when every node outlives the work
    queued behind it: v0 of the j-th node must strictly exceed
    (z - j) * delta_dec of that node.  The last element has the weakest
    constraint, so orderings place the most urgent node last.
    """
    ordered = list(nodes)
    z = len(ordered)
    for j, node in enumerate(ordered, start=1):
        if node.v0 <= (z - j) * node.delta_dec:
            return False
    return True


def largest_repairable_subset(candidates: Iterable[NodeSpec]) -> list[NodeSpec]:
    """Greedy maximum set of nodes one entity can repair, in pick order.

    Repeatedly picks, among remaining candidates whose lifetime index
    strictly exceeds the number already picked, the one with the smallest
    lifetime index (ties by smallest id).  The pick order runs most urgent
    first; reversing it yields an order accepted by
    ``feasible_ordered_set``.
    """
    remaining = sorted(candidates, key=lambda n: (lifetime_index(n), n.id))
    picked: list[NodeSpec] = []
    while True:
        choice = next((n for n in remaining if lifetime_index(n) > len(picked)), None)
        if choice is None:
            return picked
        picked.append(choice)
        remaining.remove(choice)


def allocate_budgeted(scenario: Scenario, force: bool = False) -> Allocation:
    """Allocate disjoint node sets at t=0 under the budget.

    Entities are processed in increasing cost order (ties by id).  Each
    receives as many nodes of its greedy largest-repairable-subset as the
    remaining budget affords, taken in pick order.  Processing stops when
    the remaining budget cannot pay for a single node of any remaining
    entity.

    Outside the repair-dominant regime this construction loses its
    optimality guarantee, so it refuses to run unless ``force`` is set.
    """
    report = check_assumption1(scenario)
    if not report.holds and not force:
        raise AssumptionViolated(
            "the repair-dominant rate condition fails; pass force=True to run anyway:\n  "
            + "\n  ".join(report.violations)
        )
    remaining_nodes: list[NodeSpec] = list(scenario.nodes)
    remaining_entities = sorted(scenario.entities, key=lambda e: (e.cost, e.id))
    budget = scenario.budget
    sets: dict[str, frozenset[str]] = {}
    while remaining_entities:
        cheapest = remaining_entities[0].cost
        if budget is not None and budget < cheapest:
            break
        entity = remaining_entities.pop(0)
        subset = largest_repairable_subset(remaining_nodes)
        if budget is None or entity.cost == 0:
            take = len(subset)
        else:
            take = min(int(budget / entity.cost), len(subset))
        chosen = subset[:take]
        sets[entity.id] = frozenset(n.id for n in chosen)
        for node in chosen:
            remaining_nodes.remove(node)
        if budget is not None:
            budget -= entity.cost * take
    return Allocation.build(scenario, sets)


@dataclass(frozen=True)
class OnlineRunResult:
    """Everything the incremental assignment run produced."""

    allocation: Allocation
    assignment_times: Mapping[str, int]
    trace: Trace
    outcome: Outcome
    budget_remaining: Optional[Fraction]


def run_online_policy(scenario: Scenario, force: bool = False) -> OnlineRunResult:
    """Assign nodes to entities on the fly and run to absorption.

    At every step each free entity (smallest id first) is offered the
    healthiest never-assigned Active node (ties by smallest id) and takes
    it if the remaining budget covers that entity's cost.  An entity then
    targets its node every step until repaired, so the run never jumps.

    The factor-1/2 guarantee holds in the decay-dominant uniform regime;
    outside it the run refuses to start unless ``force`` is set.  With
    heterogeneous costs (force only) each assignment deducts the receiving
    entity's own cost.
    """
    report = check_assumption2(scenario)
    if not report.holds and not force:
        raise AssumptionViolated(
            "the decay-dominant uniform rate condition fails; pass force=True to run anyway:\n  "
            + "\n  ".join(report.violations)
        )
    states: dict[str, NodeState] = {n.id: NodeState(n.id, n.v0) for n in scenario.nodes}
    budget = scenario.budget
    current_target: dict[str, Optional[str]] = {e.id: None for e in scenario.entities}
    assigned_ever: set[str] = set()
    assignment_times: dict[str, int] = {}
    sets: dict[str, set[str]] = {e.id: set() for e in scenario.entities}
    rows: list[TraceStep] = []
    t = 0
    while True:
        healths = tuple(states[n.id].health for n in scenario.nodes)
        if not any(0 < h < 1 for h in healths):
            rows.append(TraceStep(healths, {e.id: None for e in scenario.entities}))
            break

        for entity in scenario.entities:
            target = current_target[entity.id]
            if target is not None and not states[target].is_active:
                current_target[entity.id] = None

        for entity in sorted(scenario.entities, key=lambda e: e.id):
            if current_target[entity.id] is not None:
                continue
            candidates = [
                s for nid, s in states.items() if s.is_active and nid not in assigned_ever
            ]
            if not candidates:
                continue
            if budget is not None and budget < entity.cost:
                continue
            pick = healthiest_target(candidates)
            assert pick is not None  # candidates is non-empty here
            current_target[entity.id] = pick
            assigned_ever.add(pick)
            assignment_times[pick] = t
            sets[entity.id].add(pick)
            if budget is not None:
                budget -= entity.cost

        actions = dict(current_target)
        rows.append(TraceStep(healths, actions))
        targeted_by = {target: eid for eid, target in actions.items() if target is not None}
        states = {
            nid: step_health(state, targeted_by.get(nid), scenario) for nid, state in states.items()
        }
        t += 1

    allocation = Allocation.build(scenario, {eid: frozenset(nodes) for eid, nodes in sets.items()})
    trace = Trace(
        node_ids=scenario.node_ids,
        entity_ids=scenario.entity_ids,
        steps=tuple(rows),
    )
    final = rows[-1].healths
    repaired = frozenset(nid for nid, h in zip(trace.node_ids, final) if h >= 1)
    failed = frozenset(nid for nid, h in zip(trace.node_ids, final) if h <= 0)
    outcome = Outcome(
        reward=len(repaired),
        repaired=repaired,
        failed=failed,
        jumps=count_jumps(trace),
    )
    return OnlineRunResult(
        allocation=allocation,
        assignment_times=assignment_times,
        trace=trace,
        outcome=outcome,
        budget_remaining=budget,
    )
