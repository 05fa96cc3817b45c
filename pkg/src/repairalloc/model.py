"""Core model: nodes, entities, scenarios, and the exact health update.

A scenario describes N deteriorating nodes and M repair entities.  Node
health lives in [0, 1] with two absorbing boundaries: a node that reaches 0
has permanently failed, a node that reaches 1 is permanently repaired.  At
each discrete time step every Active node either gains its targeting
entity's repair rate (clamped at 1) or loses its own deterioration rate
(clamped at 0).  All arithmetic is exact; there is no floating point
anywhere in the decision path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Mapping, Optional

from repairalloc.errors import BudgetExceeded


class Status(Enum):
    ACTIVE = "active"
    REPAIRED = "repaired"
    FAILED = "failed"


@dataclass(frozen=True, slots=True)
class NodeSpec:
    """A deteriorating node: identifier, initial health, decay per step."""

    id: str
    v0: Fraction
    delta_dec: Fraction

    def __post_init__(self) -> None:
        if not isinstance(self.v0, Fraction) or not isinstance(self.delta_dec, Fraction):
            raise TypeError("NodeSpec requires exact Fraction values")
        if not (0 < self.v0 < 1):
            raise ValueError(f"node {self.id!r}: v0 must lie strictly in (0, 1), got {self.v0}")
        if self.delta_dec <= 0:
            raise ValueError(f"node {self.id!r}: delta_dec must be positive, got {self.delta_dec}")


@dataclass(frozen=True, slots=True)
class EntitySpec:
    """A repair entity: identifier, per-node cost, per-node repair rates.

    ``repair_rate`` maps every node id in the scenario to the health gained
    per step while this entity targets that node.
    """

    id: str
    cost: Fraction
    repair_rate: Mapping[str, Fraction]

    def __post_init__(self) -> None:
        if not isinstance(self.cost, Fraction):
            raise TypeError("EntitySpec.cost must be a Fraction")
        if self.cost < 0:
            raise ValueError(f"entity {self.id!r}: cost must be >= 0, got {self.cost}")
        object.__setattr__(self, "repair_rate", dict(self.repair_rate))
        for node_id, rate in self.repair_rate.items():
            if not isinstance(rate, Fraction) or rate <= 0:
                raise ValueError(f"entity {self.id!r}: repair rate for {node_id!r} must be a positive Fraction")

    def rate_for(self, node_id: str) -> Fraction:
        return self.repair_rate[node_id]


@dataclass(frozen=True)
class Scenario:
    """An immutable problem instance.

    ``budget`` is an exact Fraction, or None for an unlimited budget.
    Node and entity ids are unique within their kind; ties everywhere in
    the package are broken by plain string order of the id.
    """

    nodes: tuple[NodeSpec, ...]
    entities: tuple[EntitySpec, ...]
    budget: Optional[Fraction]

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "entities", tuple(self.entities))
        if len(self.nodes) < 2:
            raise ValueError("a scenario needs at least 2 nodes")
        if not (1 <= len(self.entities) <= len(self.nodes)):
            raise ValueError("entity count must satisfy 1 <= M <= N")
        node_ids = [n.id for n in self.nodes]
        if len(set(node_ids)) != len(node_ids):
            raise ValueError("node ids must be unique")
        entity_ids = [e.id for e in self.entities]
        if len(set(entity_ids)) != len(entity_ids):
            raise ValueError("entity ids must be unique")
        for entity in self.entities:
            missing = set(node_ids) - set(entity.repair_rate)
            if missing:
                raise ValueError(f"entity {entity.id!r}: missing repair rate for {sorted(missing)}")
        if self.budget is not None:
            if not isinstance(self.budget, Fraction):
                raise TypeError("budget must be a Fraction or None (unlimited)")
            if self.budget < 0:
                raise ValueError("budget must be >= 0")

    @property
    def node_ids(self) -> tuple[str, ...]:
        return tuple(n.id for n in self.nodes)

    @property
    def entity_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.entities)

    def node(self, node_id: str) -> NodeSpec:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise KeyError(node_id)

    def entity(self, entity_id: str) -> EntitySpec:
        for e in self.entities:
            if e.id == entity_id:
                return e
        raise KeyError(entity_id)


@dataclass(frozen=True, slots=True)
class NodeState:
    """Health of one node at one time step, with its derived status."""

    id: str
    health: Fraction

    @property
    def status(self) -> Status:
        if self.health <= 0:
            return Status.FAILED
        if self.health >= 1:
            return Status.REPAIRED
        return Status.ACTIVE

    @property
    def is_active(self) -> bool:
        return 0 < self.health < 1


@dataclass(frozen=True)
class Allocation:
    """Disjoint node sets handed to entities at t=0, with their total cost.

    ``sets`` maps every entity id of the scenario to a frozenset of node
    ids (possibly empty).  ``total_cost`` is sum over entities of
    cost * set size, computed once at construction.
    """

    sets: Mapping[str, frozenset[str]]
    total_cost: Fraction = field(default=Fraction(0))

    @staticmethod
    def build(scenario: Scenario, sets: Mapping[str, frozenset[str] | set[str]]) -> "Allocation":
        full: dict[str, frozenset[str]] = {}
        seen: set[str] = set()
        valid_nodes = set(scenario.node_ids)
        for entity in scenario.entities:
            assigned = frozenset(sets.get(entity.id, frozenset()))
            unknown = assigned - valid_nodes
            if unknown:
                raise ValueError(f"entity {entity.id!r}: unknown nodes {sorted(unknown)}")
            overlap = assigned & seen
            if overlap:
                raise ValueError(f"allocation sets must be disjoint; {sorted(overlap)} appear twice")
            seen |= assigned
            full[entity.id] = assigned
        unknown_entities = set(sets) - set(scenario.entity_ids)
        if unknown_entities:
            raise ValueError(f"unknown entities in allocation: {sorted(unknown_entities)}")
        cost = Fraction(0)
        for entity in scenario.entities:
            cost += entity.cost * len(full[entity.id])
        return Allocation(sets=full, total_cost=cost)

    def nodes_of(self, entity_id: str) -> frozenset[str]:
        return self.sets[entity_id]

    @property
    def allocated_nodes(self) -> frozenset[str]:
        out: set[str] = set()
        for nodes in self.sets.values():
            out |= nodes
        return frozenset(out)

    def fits_budget(self, scenario: Scenario) -> bool:
        return scenario.budget is None or self.total_cost <= scenario.budget

    def require_budget(self, scenario: Scenario) -> None:
        if not self.fits_budget(scenario):
            raise BudgetExceeded(
                f"allocation costs {self.total_cost}, budget is {scenario.budget}"
            )


def step_health(state: NodeState, targeted_by: Optional[str], scenario: Scenario) -> NodeState:
    """Advance one node by one time step.

    ``targeted_by`` is the id of the entity targeting the node this step,
    or None if untargeted.  Absorbing states never change.  This is a total
    function; whether targeting a non-Active node was legal is the
    simulator's concern, not this rule's.
    """
    if not state.is_active:
        return state
    if targeted_by is not None:
        gain = scenario.entity(targeted_by).rate_for(state.id)
        return NodeState(state.id, min(Fraction(1), state.health + gain))
    loss = scenario.node(state.id).delta_dec
    return NodeState(state.id, max(Fraction(0), state.health - loss))


@dataclass(frozen=True)
class AssumptionReport:
    """Outcome of a rate-regime check: overall verdict plus violations."""

    holds: bool
    violations: tuple[str, ...] = ()


@dataclass(frozen=True)
class UniformRegimeReport:
    """Outcome of the uniform-rate regime check.

    When the regime holds, ``steps_per_decay`` maps each entity id to the
    integer n with delta_dec = n * delta_inc, and ``repair_steps`` maps
    (node id, entity id) to the integer number of repair steps from full
    initial health, (1 - v0) / delta_inc.
    """

    holds: bool
    violations: tuple[str, ...] = ()
    steps_per_decay: Mapping[str, int] = field(default_factory=dict)
    repair_steps: Mapping[tuple[str, str], int] = field(default_factory=dict)


def check_assumption1(scenario: Scenario) -> AssumptionReport:
    """Check the repair-dominant regime.

    Every repair rate must strictly exceed both (N - 1) times the decaying
    node's own rate and the sum of all other nodes' decay rates.  In this
    regime a targeted node outruns everything it is racing against.
    """
    n = len(scenario.nodes)
    total_dec = sum((node.delta_dec for node in scenario.nodes), Fraction(0))
    violations: list[str] = []
    for node in scenario.nodes:
        others = total_dec - node.delta_dec
        for entity in scenario.entities:
            inc = entity.rate_for(node.id)
            if inc <= (n - 1) * node.delta_dec:
                violations.append(
                    f"rate of {entity.id!r} on {node.id!r} ({inc}) must exceed (N-1)*delta_dec = {(n - 1) * node.delta_dec}"
                )
            if inc <= others:
                violations.append(
                    f"rate of {entity.id!r} on {node.id!r} ({inc}) must exceed the other nodes' total decay {others}"
                )
    return AssumptionReport(holds=not violations, violations=tuple(violations))


def check_assumption2(scenario: Scenario) -> UniformRegimeReport:
    """Check the decay-dominant uniform regime.

    Requires: one repair rate per entity (uniform over nodes), one decay
    rate for all nodes, decay >= every repair rate, equal entity costs,
    decay an integer multiple of each repair rate, and every health deficit
    1 - v0 an integer multiple of each repair rate.
    """
    violations: list[str] = []
    decs = {node.delta_dec for node in scenario.nodes}
    if len(decs) > 1:
        violations.append(f"delta_dec must be uniform across nodes, got {sorted(map(str, decs))}")
    costs = {entity.cost for entity in scenario.entities}
    if len(costs) > 1:
        violations.append(f"entity costs must be equal, got {sorted(map(str, costs))}")

    entity_rates: dict[str, Fraction] = {}
    for entity in scenario.entities:
        rates = {entity.rate_for(node.id) for node in scenario.nodes}
        if len(rates) > 1:
            violations.append(f"entity {entity.id!r}: repair rate must be uniform across nodes")
            continue
        entity_rates[entity.id] = next(iter(rates))

    steps_per_decay: dict[str, int] = {}
    repair_steps: dict[tuple[str, str], int] = {}
    if not violations:
        dec = next(iter(decs))
        for entity_id, inc in entity_rates.items():
            if dec < inc:
                violations.append(f"entity {entity_id!r}: repair rate {inc} exceeds the decay rate {dec}")
                continue
            ratio = dec / inc
            if ratio.denominator != 1:
                violations.append(f"entity {entity_id!r}: decay/repair ratio {ratio} is not an integer")
                continue
            steps_per_decay[entity_id] = int(ratio)
            for node in scenario.nodes:
                deficit = (1 - node.v0) / inc
                if deficit.denominator != 1:
                    violations.append(
                        f"node {node.id!r} vs entity {entity_id!r}: (1 - v0)/rate = {deficit} is not an integer"
                    )
                else:
                    repair_steps[(node.id, entity_id)] = int(deficit)

    if violations:
        return UniformRegimeReport(holds=False, violations=tuple(violations))
    return UniformRegimeReport(
        holds=True,
        steps_per_decay=steps_per_decay,
        repair_steps=repair_steps,
    )
