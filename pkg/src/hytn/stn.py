"""Plain weighted digraphs and Bellman-Ford machinery.

Simple temporal networks are weighted digraphs whose arcs encode difference
constraints; they are consistent exactly when the graph has no negative
cycle, and in that case integral shortest-path potentials double as
schedules.  The queue-based solver here returns either such a potential or a
concrete negative cycle.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence

#: Arc of a distance graph: (tail, head, weight).
Arc = tuple[int, int, int]


class DistanceGraph:
    """Weighted digraph with dense nodes ``0 .. n-1``.

    Self-loops are rejected; parallel arcs collapse to the one with minimum
    weight, which is the only binding constraint.
    """

    __slots__ = ("n", "arcs")

    def __init__(self, n: int, arcs: Iterable[Arc]):
        if n < 0:
            raise ValueError("graph order must be non-negative")
        best: dict[tuple[int, int], int] = {}
        order: list[tuple[int, int]] = []
        for t, h, w in arcs:
            if not (0 <= t < n and 0 <= h < n):
                raise ValueError(f"arc endpoint out of range: ({t}, {h})")
            if t == h:
                raise ValueError(f"self-loop on node {t}")
            key = (t, h)
            if key in best:
                if w < best[key]:
                    best[key] = w
            else:
                best[key] = w
                order.append(key)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "arcs", tuple((t, h, best[(t, h)]) for t, h in order))

    def __setattr__(self, name, value):
        raise AttributeError("DistanceGraph instances are immutable")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DistanceGraph)
            and self.n == other.n
            and self.arcs == other.arcs
        )

    def __repr__(self) -> str:
        return f"DistanceGraph(n={self.n}, arcs={len(self.arcs)})"


def _parent_graph_cycle(
    parent: list[Arc | None], n: int
) -> list[Arc] | None:
    """Find a cycle in the current parent-pointer graph, if one exists."""
    color = [0] * n  # 0 unvisited, 1 on current walk, 2 done
    for start in range(n):
        if color[start]:
            continue
        path: list[int] = []
        v = start
        while True:
            if color[v] == 1:
                # Walked back into the current chain: cycle found.
                cut = path.index(v)
                cycle_nodes = path[cut:]
                arcs = [parent[u] for u in cycle_nodes]
                for u in path:
                    color[u] = 2
                # arcs[i] is the arc into cycle_nodes[i]; the backward chain
                # reversed is a forward closed walk.
                return list(reversed(arcs))
            if color[v] == 2 or parent[v] is None:
                for u in path:
                    color[u] = 2
                color[v] = 2
                break
            color[v] = 1
            path.append(v)
            v = parent[v][0]
    return None


def bellman_ford(
    graph: DistanceGraph, source: int
) -> tuple[list[int] | None, list[Arc] | None]:
    """Shortest walks from ``source``, or a negative cycle.

    Returns ``(distances, None)`` when the graph is conservative: integral
    shortest-path distances that form a feasible potential.  Otherwise
    returns ``(None, cycle)`` where ``cycle`` is a closed arc walk of
    strictly negative total weight.  Every node must be reachable from
    ``source``; callers add a virtual source when needed.
    """
    n = graph.n
    if not 0 <= source < n:
        raise ValueError(f"source {source} out of range")
    succs: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for t, h, w in graph.arcs:
        succs[t].append((h, w))

    INF = float("inf")
    dist: list = [INF] * n
    parent: list[Arc | None] = [None] * n
    relaxed = [0] * n
    in_queue = bytearray(n)
    queue: deque[int] = deque([source])
    dist[source] = 0
    in_queue[source] = 1

    while queue:
        u = queue.popleft()
        in_queue[u] = 0
        du = dist[u]
        for h, w in succs[u]:
            nd = du + w
            if nd < dist[h]:
                dist[h] = nd
                parent[h] = (u, h, w)
                relaxed[h] += 1
                if relaxed[h] >= n:
                    cycle = _parent_graph_cycle(parent, n)
                    if cycle is not None:
                        return None, cycle
                if not in_queue[h]:
                    in_queue[h] = 1
                    queue.append(h)

    unreachable = [v for v in range(n) if dist[v] == INF]
    if unreachable:
        raise ValueError(f"nodes unreachable from source: {unreachable[:5]}")
    return [int(d) for d in dist], None


def stn_consistency(
    graph: DistanceGraph,
) -> tuple[list[int] | None, list[Arc] | None]:
    """Feasible schedule for a simple temporal network, or a negative cycle.

    A virtual source with zero-weight arcs to every node guarantees
    reachability; its distances are dropped from the returned schedule.
    """
    n = graph.n
    augmented = DistanceGraph(
        n + 1,
        list(graph.arcs) + [(n, v, 0) for v in range(n)],
    )
    dist, cycle = bellman_ford(augmented, n)
    if cycle is not None:
        return None, cycle
    assert dist is not None
    return dist[:n], None


def is_feasible_potential(graph: DistanceGraph, potential: Sequence[int]) -> bool:
    """True when every arc has non-negative reduced weight under ``potential``."""
    return all(w - potential[h] + potential[t] >= 0 for t, h, w in graph.arcs)
