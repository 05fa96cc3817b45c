# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernel: a faithful mirror of ``_pykernel.solve_allocation``.

Health vectors are packed into ``bytes`` keys over a C int64 array, and the
joint-action odometer advances its last digit fastest, matching
``itertools.product`` over the same digit lists.  Because discovery order is
identical, the compiled and pure kernels return identical rewards and
identical witness action codes.  Scaled values beyond the int64 range raise
OverflowError; switch to the pure backend for such instances.
"""

from cpython.bytes cimport PyBytes_AS_STRING, PyBytes_FromStringAndSize
from libc.stdint cimport int64_t
from libc.stdlib cimport free, malloc
from libc.string cimport memcpy

from repairalloc.errors import InstanceTooLarge


def solve_allocation(healths, unit, decs, entity_nodes, entity_incs, memo_cap):
    """Exact optimum and one witness action sequence for this allocation.

    Same contract as the pure kernel: returns (best repaired count,
    mixed-radix action codes along one path to a best terminal state).
    """
    cdef Py_ssize_t n = len(healths)
    cdef Py_ssize_t m = len(entity_nodes)
    cdef int64_t c_unit = unit
    cdef Py_ssize_t cap = memo_cap

    cdef Py_ssize_t total = 0
    for nodes in entity_nodes:
        total += len(nodes)

    cdef int64_t *h0 = <int64_t *> malloc(max(n, 1) * sizeof(int64_t))
    cdef int64_t *dec = <int64_t *> malloc(max(n, 1) * sizeof(int64_t))
    cdef int64_t *nxt = <int64_t *> malloc(max(n, 1) * sizeof(int64_t))
    cdef Py_ssize_t *ent_off = <Py_ssize_t *> malloc((m + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t *flat_nodes = <Py_ssize_t *> malloc(max(total, 1) * sizeof(Py_ssize_t))
    cdef int64_t *flat_incs = <int64_t *> malloc(max(total, 1) * sizeof(int64_t))
    cdef int64_t *bases = <int64_t *> malloc(max(m, 1) * sizeof(int64_t))
    # Per-entity digit options for the current state: options + odometer cursors.
    cdef Py_ssize_t *opts = <Py_ssize_t *> malloc(max(total + m, 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t *opt_off = <Py_ssize_t *> malloc((m + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t *counts = <Py_ssize_t *> malloc(max(m, 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t *cursor = <Py_ssize_t *> malloc(max(m, 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t *digits = <Py_ssize_t *> malloc(max(m, 1) * sizeof(Py_ssize_t))
    if (h0 == NULL or dec == NULL or nxt == NULL or ent_off == NULL
            or flat_nodes == NULL or flat_incs == NULL or bases == NULL
            or opts == NULL or opt_off == NULL or counts == NULL
            or cursor == NULL or digits == NULL):
        free(h0); free(dec); free(nxt); free(ent_off); free(flat_nodes)
        free(flat_incs); free(bases); free(opts); free(opt_off)
        free(counts); free(cursor); free(digits)
        raise MemoryError()

    cdef Py_ssize_t i, h, k, j, pos
    cdef int64_t value, decayed, gained, code
    cdef const int64_t *sp
    cdef bint terminal
    cdef int64_t best_reward = -1
    cdef int64_t reward
    try:
        for i in range(n):
            h0[i] = healths[i]
            dec[i] = decs[i]
        pos = 0
        for h in range(m):
            ent_off[h] = pos
            nodes = entity_nodes[h]
            incs = entity_incs[h]
            bases[h] = len(nodes) + 1
            for k in range(len(nodes)):
                flat_nodes[pos] = nodes[k]
                flat_incs[pos] = incs[k]
                pos += 1
        ent_off[m] = pos

        start = PyBytes_FromStringAndSize(<const char *> h0, n * sizeof(int64_t))

        terminal = True
        for i in range(n):
            if 0 < h0[i] < c_unit:
                terminal = False
                break
        if terminal:
            reward = 0
            for i in range(n):
                if h0[i] == c_unit:
                    reward += 1
            return int(reward), ()

        seen = {start: (None, -1)}
        stack = [start]
        best_key = None

        while stack:
            key = stack.pop()
            sp = <const int64_t *> PyBytes_AS_STRING(key)

            # Digit options per entity: active local positions, then idle.
            pos = 0
            for h in range(m):
                opt_off[h] = pos
                for k in range(ent_off[h], ent_off[h + 1]):
                    j = flat_nodes[k]
                    if 0 < sp[j] < c_unit:
                        opts[pos] = k - ent_off[h]
                        pos += 1
                opts[pos] = ent_off[h + 1] - ent_off[h]  # idle digit
                pos += 1
                counts[h] = pos - opt_off[h]
                cursor[h] = 0
            opt_off[m] = pos

            while True:
                for h in range(m):
                    digits[h] = opts[opt_off[h] + cursor[h]]

                # One synchronous step: decay every active node, then let
                # each non-idle entity overwrite its target from the
                # pre-step value.
                for i in range(n):
                    value = sp[i]
                    if 0 < value < c_unit:
                        decayed = value - dec[i]
                        nxt[i] = decayed if decayed > 0 else 0
                    else:
                        nxt[i] = value
                for h in range(m):
                    k = digits[h]
                    if k < ent_off[h + 1] - ent_off[h]:
                        j = flat_nodes[ent_off[h] + k]
                        gained = sp[j] + flat_incs[ent_off[h] + k]
                        nxt[j] = c_unit if gained > c_unit else gained

                child = PyBytes_FromStringAndSize(<const char *> nxt, n * sizeof(int64_t))
                if child not in seen:
                    if len(seen) >= cap:
                        raise InstanceTooLarge(f"search exceeded the state cap of {memo_cap}")
                    code = 0
                    for h in range(m - 1, -1, -1):
                        code = code * bases[h] + digits[h]
                    seen[child] = (key, int(code))
                    terminal = True
                    for i in range(n):
                        if 0 < nxt[i] < c_unit:
                            terminal = False
                            break
                    if terminal:
                        reward = 0
                        for i in range(n):
                            if nxt[i] == c_unit:
                                reward += 1
                        if reward > best_reward:
                            best_reward = reward
                            best_key = child
                    else:
                        stack.append(child)

                # Advance the odometer, last entity fastest.
                h = m - 1
                while h >= 0:
                    cursor[h] += 1
                    if cursor[h] < counts[h]:
                        break
                    cursor[h] = 0
                    h -= 1
                if h < 0:
                    break

        assert best_key is not None  # an all-idle chain always reaches a terminal
        codes = []
        walk = best_key
        while walk != start:
            parent, parent_code = seen[walk]
            codes.append(parent_code)
            assert parent is not None
            walk = parent
        codes.reverse()
        return int(best_reward), tuple(codes)
    finally:
        free(h0); free(dec); free(nxt); free(ent_off); free(flat_nodes)
        free(flat_incs); free(bases); free(opts); free(opt_off)
        free(counts); free(cursor); free(digits)
