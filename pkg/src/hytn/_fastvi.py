"""Compiled value-iteration kernel.

Mirrors the reference loop in `hytn.mpg` operation for operation: same
initial queue seeding, same pending-node orders per policy, same counter
bookkeeping, so measures, regions and lift counts are bit-identical across
the two paths.  Top is a large finite sentinel here instead of ``inf``;
weights are bounded well below it, so every comparison agrees with the
reference arithmetic.
"""

from __future__ import annotations

import numpy as np
from numba import njit

#: Finite stand-in for the top element; far above any reachable measure.
TOP_INT = 1 << 62

POLICY_FIFO = 0
POLICY_LIFO = 1
POLICY_LIFO_STOP = 2
POLICY_MAXPRIO = 3


@njit(cache=True)
def _heap_less(kf, ks, a, b):
    if kf[a] != kf[b]:
        return kf[a] < kf[b]
    return ks[a] < ks[b]


@njit(cache=True)
def _heap_push(heap, kf, ks, size, node, key_f, key_seq):
    i = size
    heap[i] = node
    kf[i] = key_f
    ks[i] = key_seq
    while i > 0:
        parent = (i - 1) >> 1
        if _heap_less(kf, ks, i, parent):
            heap[i], heap[parent] = heap[parent], heap[i]
            kf[i], kf[parent] = kf[parent], kf[i]
            ks[i], ks[parent] = ks[parent], ks[i]
            i = parent
        else:
            break
    return size + 1


@njit(cache=True)
def _heap_pop(heap, kf, ks, size):
    top = heap[0]
    size -= 1
    if size > 0:
        heap[0] = heap[size]
        kf[0] = kf[size]
        ks[0] = ks[size]
        i = 0
        while True:
            left = 2 * i + 1
            if left >= size:
                break
            child = left
            right = left + 1
            if right < size and _heap_less(kf, ks, right, left):
                child = right
            if _heap_less(kf, ks, child, i):
                heap[i], heap[child] = heap[child], heap[i]
                kf[i], kf[child] = kf[child], kf[i]
                ks[i], ks[child] = ks[child], ks[i]
                i = child
            else:
                break
    return top, size


@njit(cache=True)
def run_kernel(owner, sp, sh, sw, pp, pt, pw, bound, policy, watch, f):
    """Lift ``f`` (zero-initialized) to the least measure; returns stats.

    Returns ``(lifts, stopped)`` where ``stopped`` is 1 when an early-stop
    policy aborted at a watched node reaching top.
    """
    n = owner.shape[0]
    TOP = TOP_INT
    count = np.zeros(n, dtype=np.int64)
    in_queue = np.zeros(n, dtype=np.uint8)

    early = False
    if policy == POLICY_LIFO_STOP:
        for v in range(n):
            if watch[v]:
                early = True
                break

    use_heap = policy == POLICY_MAXPRIO
    use_fifo = policy == POLICY_FIFO

    stack = np.empty(n, dtype=np.int64)
    stack_size = 0
    fifo = np.empty(n, dtype=np.int64)
    fifo_head = 0
    fifo_tail = 0
    fifo_count = 0
    heap = np.empty(n, dtype=np.int64)
    heap_kf = np.empty(n, dtype=np.int64)
    heap_ks = np.empty(n, dtype=np.int64)
    heap_size = 0
    seq = 0

    for v in range(n):
        lo, hi = sp[v], sp[v + 1]
        violated = False
        if owner[v] == 1:
            c = 0
            for i in range(lo, hi):
                if sw[i] >= 0:
                    c += 1
            count[v] = c
            violated = c == 0
        else:
            for i in range(lo, hi):
                if sw[i] < 0:
                    violated = True
                    break
        if violated:
            in_queue[v] = 1
            if use_heap:
                heap_size = _heap_push(heap, heap_kf, heap_ks, heap_size, v, 0, seq)
                seq += 1
            elif use_fifo:
                fifo[fifo_tail] = v
                fifo_tail = (fifo_tail + 1) % n
                fifo_count += 1
            else:
                stack[stack_size] = v
                stack_size += 1

    lifts = 0
    stopped = 0
    while True:
        if use_heap:
            if heap_size == 0:
                break
            v, heap_size = _heap_pop(heap, heap_kf, heap_ks, heap_size)
        elif use_fifo:
            if fifo_count == 0:
                break
            v = fifo[fifo_head]
            fifo_head = (fifo_head + 1) % n
            fifo_count -= 1
        else:
            if stack_size == 0:
                break
            stack_size -= 1
            v = stack[stack_size]
        in_queue[v] = 0

        lo, hi = sp[v], sp[v + 1]
        if owner[v] == 1:
            target = TOP
            for i in range(lo, hi):
                r = f[sh[i]] - sw[i]
                if r < target:
                    target = r
        else:
            target = 0
            for i in range(lo, hi):
                r = f[sh[i]] - sw[i]
                if r > target:
                    target = r
        if target < 0:
            target = 0
        old = f[v]
        if target <= old:
            if owner[v] == 1:
                c = 0
                for i in range(lo, hi):
                    if old >= f[sh[i]] - sw[i]:
                        c += 1
                count[v] = c
            continue
        if target > bound:
            target = TOP
        f[v] = target
        lifts += 1

        if target != TOP and owner[v] == 1:
            c = 0
            for i in range(lo, hi):
                if target >= f[sh[i]] - sw[i]:
                    c += 1
            count[v] = c

        if early and target == TOP and watch[v]:
            stopped = 1
            break

        for j in range(pp[v], pp[v + 1]):
            u = pt[j]
            fu = f[u]
            if fu == TOP:
                continue
            w = pw[j]
            if fu >= target - w:
                continue
            push = False
            if owner[u] == 0:
                if in_queue[u] == 0:
                    push = True
            else:
                if fu >= old - w:
                    count[u] -= 1
                    if count[u] <= 0 and in_queue[u] == 0:
                        push = True
            if push:
                in_queue[u] = 1
                if use_heap:
                    heap_size = _heap_push(
                        heap, heap_kf, heap_ks, heap_size, u, -fu, seq
                    )
                    seq += 1
                elif use_fifo:
                    fifo[fifo_tail] = u
                    fifo_tail = (fifo_tail + 1) % n
                    fifo_count += 1
                else:
                    stack[stack_size] = u
                    stack_size += 1

    return lifts, stopped


def warm_up() -> None:
    """Force compilation on a toy instance (cached across processes)."""
    owner = np.array([1, 0], dtype=np.uint8)
    sp = np.array([0, 1, 2], dtype=np.int64)
    sh = np.array([1, 0], dtype=np.int64)
    sw = np.array([-1, 0], dtype=np.int64)
    pp = np.array([0, 1, 2], dtype=np.int64)
    pt = np.array([1, 0], dtype=np.int64)
    pw = np.array([0, -1], dtype=np.int64)
    f = np.zeros(2, dtype=np.int64)
    watch = np.zeros(2, dtype=np.uint8)
    run_kernel(owner, sp, sh, sw, pp, pt, pw, 1, POLICY_LIFO, watch, f)
