"""Mean payoff games and the energy-based value iteration solver.

A mean payoff game is played on a weighted digraph whose nodes are split
between a maximizer (player 1) and a minimizer (player 0); the long-run
average arc weight decides the winner.  The solver lifts an energy measure
``f`` until, at every surviving node, player 1 has a move with
``f(v) >= f(v') - w`` while all of player 0's moves satisfy the same bound.
Nodes forced above the cutoff are lost for player 1 and reported as the
minimizer's winning region.
"""

from __future__ import annotations

import heapq
import os
import time
from collections import deque
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from .stn import DistanceGraph

try:  # compiled kernel; the interpreted loop below is the reference
    from . import _fastvi
except ImportError:  # pragma: no cover - numba not installed
    _fastvi = None

#: Sentinel for nodes whose energy requirement exceeds the cutoff.
TOP = float("inf")

PLAYER0 = 0  # minimizer: every outgoing arc must respect the measure
PLAYER1 = 1  # maximizer: one respecting arc suffices


class QueuePolicy(Enum):
    """Pending-node orderings for the value iteration main loop."""

    FIFO = "fifo"
    LIFO = "lifo"
    LIFO_EARLY_STOP = "lifo-stop"
    MAX_PRIORITY = "maxprio"


class MeanPayoffGame:
    """Immutable game graph: dense nodes, an owner per node, weighted arcs.

    Every node must have at least one outgoing arc; self-loops and parallel
    arcs are rejected.  Successor and predecessor adjacency is laid out flat
    at construction time because the solver iterates it millions of times.
    """

    __slots__ = (
        "n",
        "owners",
        "arcs",
        "max_weight",
        "_sp",
        "_sh",
        "_sw",
        "_pp",
        "_pt",
        "_pw",
        "_np_cache",
    )

    def __init__(self, owners: Sequence[int], arcs: Iterable[tuple[int, int, int]]):
        owners = list(owners)
        n = len(owners)
        for p in owners:
            if p not in (PLAYER0, PLAYER1):
                raise ValueError(f"owner must be 0 or 1, got {p!r}")
        arcs = tuple(arcs)
        seen: set[tuple[int, int]] = set()
        w_max = 0
        outdeg = [0] * n
        indeg = [0] * n
        for u, v, w in arcs:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"arc endpoint out of range: ({u}, {v})")
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            if (u, v) in seen:
                raise ValueError(f"parallel arc ({u}, {v})")
            seen.add((u, v))
            if not isinstance(w, int) or isinstance(w, bool):
                raise ValueError(f"weight {w!r} is not an integer")
            outdeg[u] += 1
            indeg[v] += 1
            if abs(w) > w_max:
                w_max = abs(w)
        for v in range(n):
            if outdeg[v] == 0:
                raise ValueError(f"node {v} has no outgoing arc")

        sp = [0] * (n + 1)
        pp = [0] * (n + 1)
        for v in range(n):
            sp[v + 1] = sp[v] + outdeg[v]
            pp[v + 1] = pp[v] + indeg[v]
        sh = [0] * len(arcs)
        sw = [0] * len(arcs)
        pt = [0] * len(arcs)
        pw = [0] * len(arcs)
        snext = sp[:]
        pnext = pp[:]
        for u, v, w in arcs:
            i = snext[u]
            sh[i] = v
            sw[i] = w
            snext[u] = i + 1
            j = pnext[v]
            pt[j] = u
            pw[j] = w
            pnext[v] = j + 1

        object.__setattr__(self, "n", n)
        object.__setattr__(self, "owners", tuple(owners))
        object.__setattr__(self, "arcs", arcs)
        object.__setattr__(self, "max_weight", w_max)
        object.__setattr__(self, "_sp", sp)
        object.__setattr__(self, "_sh", sh)
        object.__setattr__(self, "_sw", sw)
        object.__setattr__(self, "_pp", pp)
        object.__setattr__(self, "_pt", pt)
        object.__setattr__(self, "_pw", pw)
        object.__setattr__(self, "_np_cache", None)

    def __setattr__(self, name, value):
        raise AttributeError("MeanPayoffGame instances are immutable")

    def _numpy_layout(self):
        """Flat adjacency as int64 arrays, built once for the fast kernel."""
        import numpy as np

        cache = self._np_cache
        if cache is None:
            cache = (
                np.array(self.owners, dtype=np.uint8),
                np.array(self._sp, dtype=np.int64),
                np.array(self._sh, dtype=np.int64),
                np.array(self._sw, dtype=np.int64),
                np.array(self._pp, dtype=np.int64),
                np.array(self._pt, dtype=np.int64),
                np.array(self._pw, dtype=np.int64),
            )
            object.__setattr__(self, "_np_cache", cache)
        return cache

    def successors(self, v: int) -> list[tuple[int, int]]:
        """Outgoing ``(head, weight)`` pairs of ``v`` in arc input order."""
        return [
            (self._sh[i], self._sw[i]) for i in range(self._sp[v], self._sp[v + 1])
        ]

    def nodes_of(self, player: int) -> list[int]:
        return [v for v in range(self.n) if self.owners[v] == player]

    def __repr__(self) -> str:
        return f"MeanPayoffGame(n={self.n}, arcs={len(self.arcs)})"


@dataclass
class SolveStats:
    """Cost accounting for one solver run; wall time is informational."""

    lifts: int
    policy: QueuePolicy
    early_stopped: bool
    elapsed_s: float


@dataclass
class VIResult:
    """Outcome of a value iteration run.

    ``w1`` holds the nodes where the maximizer secures mean payoff >= 0,
    ``w0`` the complement; ``measure`` maps nodes to their energy value with
    `TOP` marking the minimizer's region.  When ``stats.early_stopped`` is
    set the run halted at the first watched top and the partition is only a
    sound under-approximation of ``w0``.
    """

    w0: list[int]
    w1: list[int]
    measure: list
    stats: SolveStats

    @property
    def partial(self) -> bool:
        return self.stats.early_stopped


def top_cutoff(game: MeanPayoffGame) -> int:
    """Energy ceiling: finite least-measure values never exceed this.

    Two sound bounds apply: any finite value is reachable through at most
    ``n - 1`` lifts of at most the maximum weight each, and no play prefix
    can lose more than the total negative weight.  The tighter one is used;
    the fixpoint below the ceiling is the same either way.
    """
    if not game.n:
        return 0
    by_path = (game.n - 1) * game.max_weight
    by_loss = -sum(w for w in game._sw if w < 0)
    return min(by_path, by_loss)


def value_iteration(
    game: MeanPayoffGame,
    policy: QueuePolicy = QueuePolicy.LIFO_EARLY_STOP,
    watch: Iterable[int] | None = None,
) -> VIResult:
    """Compute the least energy measure of ``game`` by monotone lifting.

    Pending nodes whose local condition is violated are reprocessed in the
    order the chosen ``policy`` dictates; the fixpoint itself is policy
    independent, only the lift count varies.  Under
    ``QueuePolicy.LIFO_EARLY_STOP`` with a non-empty ``watch`` set, the run
    aborts as soon as a watched node is forced to `TOP`, which is enough to
    answer pure decision queries.

    Runs on a compiled kernel when available; set ``HYTN_PURE=1`` to force
    the interpreted reference loop.  Both paths lift in the same order and
    return identical results and lift counts.
    """
    start = time.perf_counter()
    n = game.n
    watch_mask = bytearray(n)
    if policy is QueuePolicy.LIFO_EARLY_STOP and watch is not None:
        for v in watch:
            watch_mask[v] = 1
    use_kernel = (
        _fastvi is not None
        and n > 0
        and not os.environ.get("HYTN_PURE")
        # leave headroom below the kernel's finite top sentinel
        and top_cutoff(game) + game.max_weight < _fastvi.TOP_INT // 4
    )
    if use_kernel:
        f, lifts, stopped = _run_kernel(game, policy, watch_mask)
    else:
        f, lifts, stopped = _run_reference(game, policy, watch_mask)
    w0 = [v for v in range(n) if f[v] == TOP]
    w1 = [v for v in range(n) if f[v] != TOP]
    stats = SolveStats(
        lifts=lifts,
        policy=policy,
        early_stopped=stopped,
        elapsed_s=time.perf_counter() - start,
    )
    return VIResult(w0=w0, w1=w1, measure=f, stats=stats)


_POLICY_CODES = {
    QueuePolicy.FIFO: 0,
    QueuePolicy.LIFO: 1,
    QueuePolicy.LIFO_EARLY_STOP: 2,
    QueuePolicy.MAX_PRIORITY: 3,
}


def _run_kernel(
    game: MeanPayoffGame, policy: QueuePolicy, watch_mask: bytearray
) -> tuple[list, int, bool]:
    import numpy as np

    owner, sp, sh, sw, pp, pt, pw = game._numpy_layout()
    f = np.zeros(game.n, dtype=np.int64)
    watch = np.frombuffer(bytes(watch_mask), dtype=np.uint8)
    lifts, stopped = _fastvi.run_kernel(
        owner, sp, sh, sw, pp, pt, pw,
        top_cutoff(game), _POLICY_CODES[policy], watch, f,
    )
    top_int = _fastvi.TOP_INT
    measure: list = [TOP if x >= top_int else x for x in f.tolist()]
    return measure, int(lifts), bool(stopped)


def _run_reference(
    game: MeanPayoffGame, policy: QueuePolicy, watch_mask: bytearray
) -> tuple[list, int, bool]:
    """Interpreted lifting loop; the semantic reference for the kernel."""
    n = game.n
    owners = game.owners
    sp, sh, sw = game._sp, game._sh, game._sw
    pp, pt, pw = game._pp, game._pt, game._pw
    bound = top_cutoff(game)

    f: list = [0] * n
    count = [0] * n
    in_queue = bytearray(n)

    early = policy is QueuePolicy.LIFO_EARLY_STOP and any(watch_mask)

    use_heap = policy is QueuePolicy.MAX_PRIORITY
    use_fifo = policy is QueuePolicy.FIFO
    heap: list[tuple[int, int, int]] = []
    fifo: deque[int] = deque()
    stack: list[int] = []
    seq = 0

    for v in range(n):
        lo, hi = sp[v], sp[v + 1]
        if owners[v] == PLAYER1:
            c = 0
            for i in range(lo, hi):
                if sw[i] >= 0:
                    c += 1
            count[v] = c
            violated = c == 0
        else:
            violated = any(sw[i] < 0 for i in range(lo, hi))
        if violated:
            in_queue[v] = 1
            if use_heap:
                heap.append((0, seq, v))
                seq += 1
            elif use_fifo:
                fifo.append(v)
            else:
                stack.append(v)
    if use_heap:
        heapq.heapify(heap)

    lifts = 0
    stopped = False
    while True:
        if use_heap:
            if not heap:
                break
            _, _, v = heapq.heappop(heap)
        elif use_fifo:
            if not fifo:
                break
            v = fifo.popleft()
        else:
            if not stack:
                break
            v = stack.pop()
        in_queue[v] = 0

        lo, hi = sp[v], sp[v + 1]
        if owners[v] == PLAYER1:
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
            # Stale entry; refresh the satisfaction counter so later
            # decrements keep it exact.
            if owners[v] == PLAYER1:
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

        if target != TOP and owners[v] == PLAYER1:
            c = 0
            for i in range(lo, hi):
                if target >= f[sh[i]] - sw[i]:
                    c += 1
            count[v] = c

        if early and target == TOP and watch_mask[v]:
            stopped = True
            break

        for j in range(pp[v], pp[v + 1]):
            u = pt[j]
            fu = f[u]
            if fu == TOP:
                continue
            w = pw[j]
            if fu >= target - w:
                continue  # arc still satisfied after the lift
            if owners[u] == PLAYER0:
                if not in_queue[u]:
                    in_queue[u] = 1
                    if use_heap:
                        heapq.heappush(heap, (-fu, seq, u))
                        seq += 1
                    elif use_fifo:
                        fifo.append(u)
                    else:
                        stack.append(u)
            else:
                if fu >= old - w:
                    count[u] -= 1
                    if count[u] <= 0 and not in_queue[u]:
                        in_queue[u] = 1
                        if use_heap:
                            heapq.heappush(heap, (-fu, seq, u))
                            seq += 1
                        elif use_fifo:
                            fifo.append(u)
                        else:
                            stack.append(u)

    return f, lifts, stopped


def is_progress_measure(game: MeanPayoffGame, f: Sequence) -> bool:
    """Check the fixpoint inequalities of ``f`` on every node.

    Top-valued nodes satisfy their condition vacuously; finite minimizer
    nodes need every arc covered, finite maximizer nodes at least one.
    """
    for v in range(game.n):
        if f[v] == TOP:
            continue
        reqs = [f[h] - w for h, w in game.successors(v)]
        if game.owners[v] == PLAYER0:
            if any(f[v] < r for r in reqs):
                return False
        else:
            if all(f[v] < r for r in reqs):
                return False
    return True


def synthesize_player1(game: MeanPayoffGame, f: Sequence) -> dict[int, int]:
    """Winning successor choice for the maximizer from a finite fixpoint.

    For each maximizer node the arc minimizing ``f(head) - w`` is selected;
    the projection of the game on this choice is conservative.  Raises if
    any maximizer node carries `TOP`, since no winning move exists there.
    """
    strategy: dict[int, int] = {}
    for v in game.nodes_of(PLAYER1):
        if f[v] == TOP:
            raise ValueError(f"maximizer node {v} is lost; no strategy exists")
        best_h = -1
        best_r = TOP
        for h, w in game.successors(v):
            r = f[h] - w
            if r < best_r:
                best_r = r
                best_h = h
        strategy[v] = best_h
    return strategy


def synthesize_player0(game: MeanPayoffGame) -> dict[int, int]:
    """Winning successor choice for the minimizer on an all-losing game.

    Every node of ``game`` must be won by the minimizer.  Scaling each
    weight ``w`` to ``-n*w - 1`` and swapping owners turns "all cycles have
    negative weight" into "all cycles have non-negative weight", so the
    maximizer synthesis on the scaled game yields the desired choice.
    """
    n = game.n
    flipped = [PLAYER1 - p for p in game.owners]
    scaled = [(u, v, -n * w - 1) for u, v, w in game.arcs]
    dual = MeanPayoffGame(flipped, scaled)
    res = value_iteration(dual, QueuePolicy.MAX_PRIORITY)
    if res.w0:
        raise ValueError(
            f"minimizer does not win everywhere (counterexample node {res.w0[0]})"
        )
    return synthesize_player1(dual, res.measure)


def project(game: MeanPayoffGame, strategy: Mapping[int, int]) -> DistanceGraph:
    """Drop all arcs of the strategy owner's nodes except the chosen ones.

    The strategy must cover exactly the nodes of one player; the result is a
    one-player graph ready for shortest-path analysis.
    """
    if strategy:
        players = {game.owners[v] for v in strategy}
        if len(players) != 1:
            raise ValueError("strategy mixes nodes of both players")
        player = players.pop()
    else:
        player = PLAYER1
    owned = set(game.nodes_of(player))
    if owned != set(strategy):
        raise ValueError("strategy must cover every node of its player")
    for v, h in strategy.items():
        if all(h != x for x, _ in game.successors(v)):
            raise ValueError(f"strategy picks non-successor {h} for node {v}")
    kept = [
        (u, v, w)
        for u, v, w in game.arcs
        if game.owners[u] != player or strategy[u] == v
    ]
    return DistanceGraph(game.n, kept)


_BRUTE_NODE_LIMIT = 12
_BRUTE_COMBO_LIMIT = 1_000_000


def brute_force_values(game: MeanPayoffGame) -> list[Fraction]:
    """Exact game values by exhausting positional strategy pairs.

    For every pair of positional strategies the unique play from each start
    ends on a cycle whose mean weight is the payoff.  The value is the
    max-over-maximizer of the min-over-minimizer payoff; the reversed order
    is computed as well and must coincide.  Guarded to tiny games.
    """
    n = game.n
    if n > _BRUTE_NODE_LIMIT:
        raise ValueError(f"game too large for brute force: {n} > {_BRUTE_NODE_LIMIT}")
    succ = [game.successors(v) for v in range(n)]
    nodes0 = game.nodes_of(PLAYER0)
    nodes1 = game.nodes_of(PLAYER1)
    combos = 1
    for v in nodes0 + nodes1:
        combos *= len(succ[v])
        if combos > _BRUTE_COMBO_LIMIT:
            raise ValueError("too many positional strategy pairs for brute force")

    choices0 = list(product(*(succ[v] for v in nodes0)))
    choices1 = list(product(*(succ[v] for v in nodes1)))

    def play_values(pick: dict[int, tuple[int, int]]) -> list[Fraction]:
        vals: list[Fraction] = []
        for s in range(n):
            seen: dict[int, int] = {}
            prefix: list[int] = []
            weights: list[int] = []
            v = s
            while v not in seen:
                seen[v] = len(prefix)
                prefix.append(v)
                h, w = pick[v]
                weights.append(w)
                v = h
            k = seen[v]
            cyc = weights[k:]
            vals.append(Fraction(sum(cyc), len(cyc)))
        return vals

    maxmin: list[Fraction] | None = None
    per_c0_max: list[list[Fraction] | None] = [None] * len(choices0)
    for c1 in choices1:
        row_min: list[Fraction] | None = None
        for i0, c0 in enumerate(choices0):
            pick = dict(zip(nodes0, c0))
            pick.update(zip(nodes1, c1))
            vals = play_values(pick)
            row_min = vals if row_min is None else list(map(min, row_min, vals))
            prev = per_c0_max[i0]
            per_c0_max[i0] = vals if prev is None else list(map(max, prev, vals))
        assert row_min is not None
        maxmin = row_min if maxmin is None else list(map(max, maxmin, row_min))
    assert maxmin is not None
    minmax = [min(col[s] for col in per_c0_max) for s in range(n)]  # type: ignore[index]
    if maxmin != minmax:
        bad = next(s for s in range(n) if maxmin[s] != minmax[s])
        raise AssertionError(f"determinacy violated at node {bad}")
    return maxmin
