"""Pure Python search kernel.

Computes, for one allocation, the exact maximum number of nodes an
adversary scheduler could repair, by exploring every reachable health
state.  All health values are pre-scaled to integers on a common lattice
(health 1 maps to ``unit``), so the arithmetic is plain int and exact.

The state graph can contain cycles (a node targeted and released can
return to an earlier health when rates match), so plain recursive
memoization of "best remaining reward" would be unsound.  Instead the
kernel explores the reachable set once with a seen-dict keyed by the
health vector: because an all-idle continuation absorbs from any state
without losing repaired nodes, the optimum equals the best repaired count
over reachable terminal states.

The compiled kernel in ``_ckernel.pyx`` mirrors this module exactly,
including enumeration order, so both return identical witnesses.
"""

from __future__ import annotations

from itertools import product

from repairalloc.errors import InstanceTooLarge

IntVec = tuple[int, ...]


def _digit_lists(
    state: IntVec, unit: int, entity_nodes: tuple[IntVec, ...]
) -> list[list[int]]:
    """Per entity: choosable digits (active local node positions, then idle)."""
    lists: list[list[int]] = []
    for nodes in entity_nodes:
        digits = [k for k, j in enumerate(nodes) if 0 < state[j] < unit]
        digits.append(len(nodes))
        lists.append(digits)
    return lists


def _is_terminal(state: IntVec, unit: int, entity_nodes: tuple[IntVec, ...]) -> bool:
    return not any(0 < state[j] < unit for nodes in entity_nodes for j in nodes)


def _reward(state: IntVec, unit: int) -> int:
    return sum(1 for h in state if h == unit)


def _step(
    state: IntVec,
    digits: tuple[int, ...],
    unit: int,
    decs: IntVec,
    entity_nodes: tuple[IntVec, ...],
    entity_incs: tuple[IntVec, ...],
) -> IntVec:
    nxt = []
    for j, h in enumerate(state):
        if 0 < h < unit:
            decayed = h - decs[j]
            nxt.append(decayed if decayed > 0 else 0)
        else:
            nxt.append(h)
    for h_idx, digit in enumerate(digits):
        nodes = entity_nodes[h_idx]
        if digit < len(nodes):
            j = nodes[digit]
            gained = state[j] + entity_incs[h_idx][digit]
            nxt[j] = unit if gained > unit else gained
    return tuple(nxt)


def _encode(digits: tuple[int, ...], bases: tuple[int, ...]) -> int:
    code = 0
    for digit, base in zip(reversed(digits), reversed(bases)):
        code = code * base + digit
    return code


def decode_action(code: int, bases: tuple[int, ...]) -> tuple[int, ...]:
    """Invert ``_encode``: mixed-radix code back to per-entity digits."""
    digits: list[int] = []
    for base in bases:
        digits.append(code % base)
        code //= base
    return tuple(digits)


def solve_allocation(
    healths: IntVec,
    unit: int,
    decs: IntVec,
    entity_nodes: tuple[IntVec, ...],
    entity_incs: tuple[IntVec, ...],
    memo_cap: int,
) -> tuple[int, tuple[int, ...]]:
    """Exact optimum and one witness action sequence for this allocation.

    Returns (best repaired count, mixed-radix action codes along one path
    from the initial state to a best terminal state).
    """
    start = tuple(healths)
    bases = tuple(len(nodes) + 1 for nodes in entity_nodes)
    if _is_terminal(start, unit, entity_nodes):
        return _reward(start, unit), ()
    seen: dict[IntVec, tuple[IntVec | None, int]] = {start: (None, -1)}
    stack: list[IntVec] = [start]
    best_reward = -1
    best_state: IntVec | None = None
    while stack:
        state = stack.pop()
        for raw in product(*_digit_lists(state, unit, entity_nodes)):
            nxt = _step(state, raw, unit, decs, entity_nodes, entity_incs)
            if nxt in seen:
                continue
            if len(seen) >= memo_cap:
                raise InstanceTooLarge(f"search exceeded the state cap of {memo_cap}")
            seen[nxt] = (state, _encode(raw, bases))
            if _is_terminal(nxt, unit, entity_nodes):
                reward = _reward(nxt, unit)
                if reward > best_reward:
                    best_reward = reward
                    best_state = nxt
            else:
                stack.append(nxt)
    assert best_state is not None  # an all-idle chain always reaches a terminal
    codes: list[int] = []
    cursor: IntVec = best_state
    while cursor != start:
        parent, code = seen[cursor]
        codes.append(code)
        assert parent is not None
        cursor = parent
    codes.reverse()
    return best_reward, tuple(codes)


def solve_reward_no_memo(
    healths: IntVec,
    unit: int,
    decs: IntVec,
    entity_nodes: tuple[IntVec, ...],
    entity_incs: tuple[IntVec, ...],
) -> int:
    """Reference optimum by exhaustive simple-path search, no seen-set.

    Exponential; exists purely to cross-check ``solve_allocation`` on tiny
    instances.  Revisiting a state on the current path is pruned, which is
    lossless: excising a loop never changes the terminal a path reaches.
    """
    start = tuple(healths)
    best = -1

    def walk(state: IntVec, on_path: set[IntVec]) -> None:
        nonlocal best
        if _is_terminal(state, unit, entity_nodes):
            reward = _reward(state, unit)
            if reward > best:
                best = reward
            return
        for raw in product(*_digit_lists(state, unit, entity_nodes)):
            nxt = _step(state, raw, unit, decs, entity_nodes, entity_incs)
            if nxt in on_path:
                continue
            on_path.add(nxt)
            walk(nxt, on_path)
            on_path.discard(nxt)

    walk(start, {start})
    return best
