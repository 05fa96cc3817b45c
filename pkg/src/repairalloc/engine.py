"""Synchronous simulation of repair schedules.

The simulator advances a scenario under a fixed allocation and a
sequencing policy until every node is absorbed (health 0 or 1).  The
resulting trace records the exact health vector and every entity's action
at each step, so it can be replayed through the health update rule and
checked bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Protocol, Sequence

from repairalloc.errors import NonAbsorbingPolicy, PolicyViolation, TraceMismatch
from repairalloc.model import Allocation, NodeState, Scenario, step_health

# An action map assigns each entity id a targeted node id, or None for idle.
Actions = Mapping[str, Optional[str]]


class SequencingPolicy(Protocol):
    """Decides, per step, which allocated Active node each entity targets.

    ``time_invariant`` declares that the decision depends only on the
    current health vector (not on t); the simulator uses it to detect
    cycles that would never absorb.
    """

    time_invariant: bool

    def select(
        self,
        t: int,
        states: Mapping[str, NodeState],
        allocation: Allocation,
        scenario: Scenario,
    ) -> Actions: ...


@dataclass(frozen=True)
class TraceStep:
    healths: tuple[Fraction, ...]
    actions: Actions


@dataclass(frozen=True)
class Trace:
    """Rows t = 0 .. terminal_step; the last row has no actions.

    ``healths`` in each row is aligned with ``scenario.nodes`` order and
    holds the value at the start of the step, before that step's actions
    take effect.
    """

    node_ids: tuple[str, ...]
    entity_ids: tuple[str, ...]
    steps: tuple[TraceStep, ...]

    @property
    def terminal_step(self) -> int:
        return len(self.steps) - 1

    def health_at(self, t: int, node_id: str) -> Fraction:
        return self.steps[t].healths[self.node_ids.index(node_id)]


@dataclass(frozen=True)
class Outcome:
    reward: int
    repaired: frozenset[str]
    failed: frozenset[str]
    jumps: int


def count_jumps(trace: Trace) -> int:
    """Count target switches away from a not-yet-repaired node.

    An entity jumps at step t when it targeted node j at t-1, j's health at
    t is still below 1, and its action at t (another node, or idle) is not
    j.  Switching away from a node whose health just reached 1 is the
    normal end of a repair, not a jump.
    """
    jumps = 0
    for t in range(1, len(trace.steps)):
        prev_actions = trace.steps[t - 1].actions
        cur_actions = trace.steps[t].actions
        for entity_id, prev_target in prev_actions.items():
            if prev_target is None:
                continue
            health_now = trace.steps[t].healths[trace.node_ids.index(prev_target)]
            if health_now < 1 and cur_actions.get(entity_id) != prev_target:
                jumps += 1
    return jumps


def simulate(
    scenario: Scenario,
    allocation: Allocation,
    policy: SequencingPolicy,
    max_steps: Optional[int] = None,
) -> tuple[Trace, Outcome]:
    """Run to absorption and return the exact trace and outcome.

    Raises BudgetExceeded if the allocation does not fit the budget,
    PolicyViolation on an illegal action, and NonAbsorbingPolicy if a
    time-invariant policy provably cycles (or ``max_steps`` runs out).
    """
    allocation.require_budget(scenario)
    states: dict[str, NodeState] = {n.id: NodeState(n.id, n.v0) for n in scenario.nodes}
    rows: list[TraceStep] = []
    seen_healths: dict[tuple[Fraction, ...], int] = {}
    t = 0
    while True:
        healths = tuple(states[n.id].health for n in scenario.nodes)
        if not any(0 < h < 1 for h in healths):
            rows.append(TraceStep(healths, {e.id: None for e in scenario.entities}))
            break
        if policy.time_invariant:
            if healths in seen_healths:
                raise NonAbsorbingPolicy(
                    f"health vector at step {t} repeats step {seen_healths[healths]}; the run would never absorb"
                )
            seen_healths[healths] = t
        if max_steps is not None and t >= max_steps:
            raise NonAbsorbingPolicy(f"no absorption within {max_steps} steps")

        actions = dict(policy.select(t, states, allocation, scenario))
        _validate_actions(actions, states, allocation, scenario)
        rows.append(TraceStep(healths, actions))

        targeted_by: dict[str, str] = {}
        for entity_id, target in actions.items():
            if target is not None:
                targeted_by[target] = entity_id
        states = {
            node_id: step_health(state, targeted_by.get(node_id), scenario)
            for node_id, state in states.items()
        }
        t += 1

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
    return trace, outcome


def _validate_actions(
    actions: Actions,
    states: Mapping[str, NodeState],
    allocation: Allocation,
    scenario: Scenario,
) -> None:
    for entity_id in scenario.entity_ids:
        target = actions.get(entity_id)
        if target is None:
            continue
        if target not in allocation.nodes_of(entity_id):
            raise PolicyViolation(f"entity {entity_id!r} targeted {target!r} outside its allocated set")
        if not states[target].is_active:
            raise PolicyViolation(
                f"entity {entity_id!r} targeted {target!r} which is {states[target].status.value}"
            )
    unknown = set(actions) - set(scenario.entity_ids)
    if unknown:
        raise PolicyViolation(f"actions for unknown entities: {sorted(unknown)}")


def verify_trace(scenario: Scenario, allocation: Allocation, trace: Trace) -> None:
    """Replay a trace through the health update rule; raise on any drift.

    Checks the initial row against v0, every targeted node's membership
    and Active status, the exact health evolution, and that the final row
    (and only the final row) has no Active node.
    """
    if trace.node_ids != scenario.node_ids:
        raise TraceMismatch("trace node columns do not match the scenario")
    expected0 = tuple(n.v0 for n in scenario.nodes)
    if trace.steps[0].healths != expected0:
        raise TraceMismatch("initial healths differ from the scenario's v0")
    for t, row in enumerate(trace.steps[:-1]):
        states = {nid: NodeState(nid, h) for nid, h in zip(trace.node_ids, row.healths)}
        if not any(s.is_active for s in states.values()):
            raise TraceMismatch(f"no Active node at non-terminal step {t}")
        _validate_actions(row.actions, states, allocation, scenario)
        targeted_by: dict[str, str] = {}
        for entity_id, target in row.actions.items():
            if target is not None:
                targeted_by[target] = entity_id
        stepped = tuple(
            step_health(states[nid], targeted_by.get(nid), scenario).health for nid in trace.node_ids
        )
        if stepped != trace.steps[t + 1].healths:
            raise TraceMismatch(f"healths at step {t + 1} do not replay exactly")
    last = trace.steps[-1]
    if any(0 < h < 1 for h in last.healths):
        raise TraceMismatch("terminal row still has an Active node")


def scripted_actions(trace: Trace) -> Sequence[Actions]:
    """The action maps of a trace, usable to replay it via Scripted."""
    return [row.actions for row in trace.steps[:-1]]
