"""Search kernel selection.

The compiled Cython kernel is used when its extension module imported
cleanly; otherwise the pure Python implementation takes over.  Setting the
environment variable REPAIRALLOC_PURE=1 forces the pure kernel.  Both
implementations are exposed for parity tests and benchmarks, and
``use_backend`` switches the active one at runtime.
"""

from __future__ import annotations

import os

from repairalloc._kernel import _pykernel
from repairalloc._kernel._pykernel import decode_action, solve_reward_no_memo

try:
    from repairalloc._kernel import _ckernel
except ImportError:
    _ckernel = None

if _ckernel is not None and os.environ.get("REPAIRALLOC_PURE", "") != "1":
    _active = _ckernel
    BACKEND = "compiled"
else:
    _active = _pykernel
    BACKEND = "pure"


def use_backend(name: str) -> None:
    """Switch the active kernel: 'compiled' or 'pure'."""
    global _active, BACKEND
    if name == "pure":
        _active, BACKEND = _pykernel, "pure"
    elif name == "compiled":
        if _ckernel is None:
            raise RuntimeError("compiled kernel is not available")
        _active, BACKEND = _ckernel, "compiled"
    else:
        raise ValueError(f"unknown backend {name!r}")


def solve_allocation(healths, unit, decs, entity_nodes, entity_incs, memo_cap):
    """Dispatch to the active kernel; see _pykernel.solve_allocation."""
    return _active.solve_allocation(healths, unit, decs, entity_nodes, entity_incs, memo_cap)


__all__ = [
    "BACKEND",
    "decode_action",
    "solve_allocation",
    "solve_reward_no_memo",
    "use_backend",
    "_pykernel",
    "_ckernel",
]
