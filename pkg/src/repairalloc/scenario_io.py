"""Scenario JSON and trace CSV serialization.

Scenario files carry every numeric field as a string, either a decimal
literal ("0.05") or a fraction literal ("3/20"); raw JSON numbers are
rejected so no value ever passes through a float.  A null budget means
unlimited.

Trace CSV files have header ``t,<node ids...>,<entity ids...>``; each row
holds the exact health of every node at step t and the node each entity
targeted at t ("-" for idle).
"""

from __future__ import annotations

import csv
import json
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Optional

from repairalloc.engine import Trace, TraceStep
from repairalloc.errors import ScenarioFormatError
from repairalloc.model import EntitySpec, NodeSpec, Scenario
from repairalloc.rational import format_rational, parse_rational


def scenario_from_dict(data: object) -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioFormatError("top level: expected an object")
    nodes_raw = _expect_list(data, "nodes")
    entities_raw = _expect_list(data, "entities")

    nodes = []
    for i, raw in enumerate(nodes_raw):
        where = f"nodes[{i}]"
        if not isinstance(raw, dict):
            raise ScenarioFormatError(f"{where}: expected an object")
        nodes.append(
            NodeSpec(
                id=_expect_id(raw, "id", where),
                v0=parse_rational(raw.get("v0"), f"{where}.v0"),
                delta_dec=parse_rational(raw.get("delta_dec"), f"{where}.delta_dec"),
            )
        )
    node_ids = [n.id for n in nodes]

    entities = []
    for i, raw in enumerate(entities_raw):
        where = f"entities[{i}]"
        if not isinstance(raw, dict):
            raise ScenarioFormatError(f"{where}: expected an object")
        entities.append(
            EntitySpec(
                id=_expect_id(raw, "id", where),
                cost=parse_rational(raw.get("cost"), f"{where}.cost"),
                repair_rate=_parse_rates(raw.get("delta_inc"), node_ids, f"{where}.delta_inc"),
            )
        )

    if "budget" not in data:
        raise ScenarioFormatError("budget: missing (use null for unlimited)")
    budget_raw = data["budget"]
    budget = None if budget_raw is None else parse_rational(budget_raw, "budget")

    try:
        return Scenario(nodes=tuple(nodes), entities=tuple(entities), budget=budget)
    except (ValueError, TypeError) as exc:
        raise ScenarioFormatError(str(exc)) from exc


def _expect_list(data: dict, key: str) -> list:
    value = data.get(key)
    if not isinstance(value, list) or not value:
        raise ScenarioFormatError(f"{key}: expected a non-empty array")
    return value


def _expect_id(raw: dict, key: str, where: str) -> str:
    value = raw.get(key)
    if not isinstance(value, str) or not value:
        raise ScenarioFormatError(f"{where}.{key}: expected a non-empty string")
    return value


def _parse_rates(raw: object, node_ids: list[str], where: str) -> dict[str, Fraction]:
    """A full node-id map, or {"default": rate} with optional per-node overrides."""
    if not isinstance(raw, dict) or not raw:
        raise ScenarioFormatError(f"{where}: expected an object of rates")
    unknown = set(raw) - set(node_ids) - {"default"}
    if unknown:
        raise ScenarioFormatError(f"{where}: unknown node ids {sorted(unknown)}")
    rates: dict[str, Fraction] = {}
    if "default" in raw:
        default = parse_rational(raw["default"], f"{where}.default")
        rates = {nid: default for nid in node_ids}
    for key, value in raw.items():
        if key == "default":
            continue
        rates[key] = parse_rational(value, f"{where}.{key}")
    missing = set(node_ids) - set(rates)
    if missing:
        raise ScenarioFormatError(f"{where}: missing rates for {sorted(missing)}")
    return rates


def load_scenario(path: str | Path) -> Scenario:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except json.JSONDecodeError as exc:
        raise ScenarioFormatError(f"{path}: invalid JSON: {exc}") from exc
    return scenario_from_dict(data)


def scenario_to_dict(scenario: Scenario) -> dict:
    return {
        "nodes": [
            {
                "id": n.id,
                "v0": format_rational(n.v0),
                "delta_dec": format_rational(n.delta_dec),
            }
            for n in scenario.nodes
        ],
        "entities": [
            {
                "id": e.id,
                "cost": format_rational(e.cost),
                "delta_inc": {nid: format_rational(e.rate_for(nid)) for nid in scenario.node_ids},
            }
            for e in scenario.entities
        ],
        "budget": None if scenario.budget is None else format_rational(scenario.budget),
    }


def save_scenario(scenario: Scenario, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(scenario_to_dict(scenario), handle, indent=2)
        handle.write("\n")


def write_trace_csv(trace: Trace, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["t", *trace.node_ids, *trace.entity_ids])
        for t, row in enumerate(trace.steps):
            cells: list[str] = [str(t)]
            cells.extend(format_rational(h) for h in row.healths)
            for entity_id in trace.entity_ids:
                target = row.actions.get(entity_id)
                cells.append("-" if target is None else target)
            writer.writerow(cells)


def read_trace_csv(path: str | Path, scenario: Scenario) -> Trace:
    """Load a trace written by ``write_trace_csv`` back into exact form."""
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        expected = ["t", *scenario.node_ids, *scenario.entity_ids]
        if header != expected:
            raise ScenarioFormatError(f"{path}: header {header} does not match {expected}")
        n = len(scenario.node_ids)
        steps: list[TraceStep] = []
        for t, cells in enumerate(reader):
            if len(cells) != len(expected):
                raise ScenarioFormatError(f"{path}: row {t} has {len(cells)} cells, expected {len(expected)}")
            if cells[0] != str(t):
                raise ScenarioFormatError(f"{path}: row {t} is labeled {cells[0]!r}")
            healths = tuple(
                parse_rational(cell, f"row {t}, node {nid}")
                for nid, cell in zip(scenario.node_ids, cells[1 : 1 + n])
            )
            actions: dict[str, Optional[str]] = {}
            for entity_id, cell in zip(scenario.entity_ids, cells[1 + n :]):
                actions[entity_id] = None if cell == "-" else cell
            steps.append(TraceStep(healths, actions))
    if not steps:
        raise ScenarioFormatError(f"{path}: no rows")
    return Trace(
        node_ids=scenario.node_ids,
        entity_ids=scenario.entity_ids,
        steps=tuple(steps),
    )
