"""End-to-end consistency pipeline for hyper temporal networks.

The route is: strip sink timepoints, translate the (multi-head) network into
a bipartite mean payoff game, run value iteration, then read the verdict off
the minimizer's winning region.  A consistent network yields an integral
schedule, either directly from the energy measure or through strategy
projection plus Bellman-Ford; an inconsistent one yields a negative-cycle
certificate built from the minimizer's winning strategy.  Multi-tail
networks are solved through their reversal, mixed ones are refused.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import mpg, stn
from .model import (
    HyTN,
    Hyperarc,
    MixedNetworkError,
    MultiHead,
    NegativeCycleCert,
    NetworkClass,
    Standard,
    classify,
    reverse_network,
)
from .mpg import (
    PLAYER0,
    PLAYER1,
    MeanPayoffGame,
    QueuePolicy,
    SolveStats,
    VIResult,
    value_iteration,
)


class InconsistentNetworkError(Exception):
    """Schedule requested for a network that has none."""

    def __init__(self, certificate: NegativeCycleCert):
        super().__init__("network is inconsistent; certificate attached")
        self.certificate = certificate


@dataclass(frozen=True)
class ReductionMap:
    """Node correspondence of the network-to-game translation.

    Timepoint ``i`` becomes minimizer node ``timepoint_node[i]``; arc ``j``
    becomes maximizer node ``arc_node[j]``.  Both maps are bijections onto
    the game's node set.
    """

    timepoint_node: tuple[int, ...]
    arc_node: tuple[int, ...]

    def timepoint_of(self, node: int) -> int | None:
        k = len(self.timepoint_node)
        return node if node < k else None

    def arc_of(self, node: int) -> int | None:
        k = len(self.timepoint_node)
        return node - k if node >= k else None


@dataclass
class Verdict:
    """Outcome of `solve`: exactly one verified witness plus run costs.

    ``game`` and ``measure`` expose the underlying fixpoint for diagnostics
    and fixpoint-soundness checks; they refer to the internally solved
    (reversed, sink-stripped) instance, not to the input network.
    """

    consistent: bool
    schedule: list[int] | None
    certificate: NegativeCycleCert | None
    stats: SolveStats
    game: MeanPayoffGame
    measure: list


def hytn_to_mpg(net: HyTN) -> tuple[MeanPayoffGame, ReductionMap]:
    """Translate a multi-head network into its equivalent game.

    Timepoints become minimizer nodes, hyperarcs become maximizer nodes; a
    zero arc runs from each tail to its hyperarc node and one weighted arc
    from the hyperarc node to every head.  Requires every timepoint to tail
    at least one arc (strip sinks first) and no multi-tail arcs (reverse the
    network first).
    """
    cls = classify(net)
    if cls is NetworkClass.MIXED:
        raise MixedNetworkError("mixed networks have no game translation")
    if cls is NetworkClass.MULTI_TAIL_ONLY:
        raise ValueError("multi-tail network: apply reverse_network first")
    n = net.n
    is_tail = bytearray(n)
    for a in net.arcs:
        is_tail[a.tail] = 1
    for v in range(n):
        if not is_tail[v]:
            raise ValueError(f"timepoint {v} is a sink; strip sinks first")
    owners = [PLAYER0] * n + [PLAYER1] * len(net.arcs)
    game_arcs: list[tuple[int, int, int]] = []
    for j, a in enumerate(net.arcs):
        node = n + j
        game_arcs.append((a.tail, node, 0))
        if isinstance(a, Standard):
            game_arcs.append((node, a.head, a.weight))
        else:
            assert isinstance(a, MultiHead)
            for h, w in zip(a.heads, a.weights):
                game_arcs.append((node, h, w))
    game = MeanPayoffGame(owners, game_arcs)
    rmap = ReductionMap(
        timepoint_node=tuple(range(n)),
        arc_node=tuple(range(n, n + len(net.arcs))),
    )
    return game, rmap


def mpg_to_hytn(game: MeanPayoffGame) -> HyTN:
    """Translate a game into a network whose consistency mirrors the game.

    Each maximizer node becomes one multi-head arc over its whole
    neighborhood; each arc of a minimizer node becomes a standard arc.  The
    result is consistent exactly when the maximizer wins everywhere.
    """
    arcs: list[Hyperarc] = []
    for u in range(game.n):
        succ = game.successors(u)
        if game.owners[u] == PLAYER1:
            heads = tuple(h for h, _ in succ)
            weights = tuple(w for _, w in succ)
            arcs.append(MultiHead(u, heads, weights))
        else:
            for h, w in succ:
                arcs.append(Standard(u, h, w))
    return HyTN(game.n, arcs)


def _strip_sinks(
    net: HyTN,
) -> tuple[HyTN, list[int], list[int], list[tuple[int, list[tuple[int, int]]]]]:
    """Iteratively remove timepoints that tail no arc.

    Returns the stripped network with densely renumbered nodes, the kept
    old ids in new-id order, the original index of each surviving arc, and
    the removal log: for each removed node, the (tail, weight) bounds of the
    arcs dropped with it, in removal order.
    """
    n = net.n
    arc_tail: list[int] = []
    arc_heads: list[list[tuple[int, int]]] = []
    for a in net.arcs:
        if isinstance(a, Standard):
            arc_tail.append(a.tail)
            arc_heads.append([(a.head, a.weight)])
        elif isinstance(a, MultiHead):
            arc_tail.append(a.tail)
            arc_heads.append(list(zip(a.heads, a.weights)))
        else:
            raise ValueError("sink stripping expects a multi-head network")
    alive_arc = [True] * len(net.arcs)
    alive_node = [True] * n
    tail_count = [0] * n
    head_incident: list[list[int]] = [[] for _ in range(n)]
    for j, t in enumerate(arc_tail):
        tail_count[t] += 1
        for h, _ in arc_heads[j]:
            head_incident[h].append(j)

    stack = [v for v in range(n) if tail_count[v] == 0]
    removed: list[tuple[int, list[tuple[int, int]]]] = []
    while stack:
        v = stack.pop()
        if not alive_node[v]:
            continue
        alive_node[v] = False
        bounds: list[tuple[int, int]] = []
        for j in head_incident[v]:
            if not alive_arc[j]:
                continue
            alive_arc[j] = False
            w_v = next(w for h, w in arc_heads[j] if h == v)
            bounds.append((arc_tail[j], w_v))
            t = arc_tail[j]
            tail_count[t] -= 1
            if tail_count[t] == 0 and alive_node[t]:
                stack.append(t)
        removed.append((v, bounds))

    keep = [v for v in range(n) if alive_node[v]]
    renum = {v: i for i, v in enumerate(keep)}
    sub_arcs: list[Hyperarc] = []
    arc_orig: list[int] = []
    for j, a in enumerate(net.arcs):
        if not alive_arc[j]:
            continue
        if isinstance(a, Standard):
            sub_arcs.append(Standard(renum[a.tail], renum[a.head], a.weight))
        else:
            sub_arcs.append(
                MultiHead(
                    renum[a.tail],
                    tuple(renum[h] for h in a.heads),
                    a.weights,
                )
            )
        arc_orig.append(j)
    return HyTN(len(keep), sub_arcs), keep, arc_orig, removed


@dataclass
class _Prepared:
    """One network readied for the game pipeline."""

    reversed: bool
    work: HyTN  # multi-head view of the input
    sub: HyTN  # work with sinks stripped, renumbered
    keep: list[int]
    arc_orig: list[int]
    removed: list[tuple[int, list[tuple[int, int]]]]
    game: MeanPayoffGame
    rmap: ReductionMap


def _prepare(net: HyTN) -> _Prepared:
    cls = classify(net)
    if cls is NetworkClass.MIXED:
        raise MixedNetworkError(
            "mixed networks are not solvable here (consistency is NP-complete); "
            "only feasibility verification is supported"
        )
    rev = cls is NetworkClass.MULTI_TAIL_ONLY
    work = reverse_network(net) if rev else net
    sub, keep, arc_orig, removed = _strip_sinks(work)
    game, rmap = hytn_to_mpg(sub)
    return _Prepared(rev, work, sub, keep, arc_orig, removed, game, rmap)


def _assemble_schedule(prep: _Prepared, sub_schedule: list[int]) -> list[int]:
    """Re-seat a stripped-network schedule onto the original timepoints."""
    s: list = [None] * prep.work.n
    for new_id, old_id in enumerate(prep.keep):
        s[old_id] = sub_schedule[new_id]
    for v, bounds in reversed(prep.removed):
        s[v] = min((s[t] + w for t, w in bounds), default=0)
    if prep.reversed:
        s = [-x for x in s]
    return s


def _certificate(prep: _Prepared, result: VIResult) -> NegativeCycleCert:
    """Minimizer strategy on its winning region, read back as arc choices."""
    w0 = result.w0
    w0_set = set(w0)
    index = {g: i for i, g in enumerate(w0)}
    owners = [prep.game.owners[g] for g in w0]
    arcs = [
        (index[u], index[v], w)
        for u, v, w in prep.game.arcs
        if u in w0_set and v in w0_set
    ]
    subgame = MeanPayoffGame(owners, arcs)
    strategy = mpg.synthesize_player0(subgame)

    n_sub = prep.sub.n
    nodes: list[int] = []
    chosen: list[int] = []
    for local, g in enumerate(w0):
        if g >= n_sub:
            continue  # hyperarc node
        arc_game_node = w0[strategy[local]]
        sub_arc = arc_game_node - n_sub
        nodes.append(prep.keep[g])
        chosen.append(prep.arc_orig[sub_arc])
    return NegativeCycleCert(nodes=frozenset(nodes), arc_indices=tuple(chosen))


def solve(net: HyTN, policy: QueuePolicy = QueuePolicy.MAX_PRIORITY) -> Verdict:
    """Decide consistency and produce a verified witness either way.

    Witness extraction needs the complete minimizer region, so the run
    always goes to the fixpoint; early stopping is reserved for the pure
    decision entry point `check_consistency`.  The max-priority order is
    the default because it drives the leading node to its ceiling directly
    instead of dragging the whole graph up level by level.
    """
    prep = _prepare(net)
    result = value_iteration(prep.game, policy)
    if not result.w0:
        sub_schedule = [result.measure[g] for g in prep.rmap.timepoint_node]
        schedule = _assemble_schedule(prep, sub_schedule)
        return Verdict(True, schedule, None, result.stats, prep.game, result.measure)
    cert = _certificate(prep, result)
    return Verdict(False, None, cert, result.stats, prep.game, result.measure)


def check_consistency(
    net: HyTN, policy: QueuePolicy = QueuePolicy.LIFO_EARLY_STOP
) -> tuple[bool, SolveStats]:
    """Decision only: is ``net`` consistent?

    Under the early-stopping policy the run watches the timepoint nodes and
    aborts at the first one forced to top; any lost timepoint proves the
    whole network inconsistent.
    """
    prep = _prepare(net)
    result = value_iteration(prep.game, policy, watch=prep.rmap.timepoint_node)
    return not result.w0, result.stats


def compute_schedule(net: HyTN, policy: QueuePolicy = QueuePolicy.MAX_PRIORITY) -> list[int]:
    """Feasible integral schedule read directly off the energy fixpoint.

    The fixpoint restricted to timepoint nodes already satisfies every
    hyperarc, so no shortest-path pass is needed.  Raises
    `InconsistentNetworkError` carrying a certificate when no schedule
    exists.
    """
    verdict = solve(net, policy)
    if not verdict.consistent:
        assert verdict.certificate is not None
        raise InconsistentNetworkError(verdict.certificate)
    assert verdict.schedule is not None
    return verdict.schedule


def compute_schedule_via_projection(
    net: HyTN, policy: QueuePolicy = QueuePolicy.MAX_PRIORITY
) -> list[int]:
    """Feasible schedule through the maximizer's strategy projection.

    Independent of `compute_schedule` past the shared fixpoint: project the
    game on the synthesized winning strategy, add a virtual source over the
    timepoint nodes, and take Bellman-Ford distances as the schedule.
    """
    prep = _prepare(net)
    result = value_iteration(prep.game, policy)
    if result.w0:
        raise InconsistentNetworkError(_certificate(prep, result))
    strategy = mpg.synthesize_player1(prep.game, result.measure)
    projection = mpg.project(prep.game, strategy)
    src = projection.n
    augmented = stn.DistanceGraph(
        src + 1,
        list(projection.arcs) + [(src, v, 0) for v in prep.rmap.timepoint_node],
    )
    dist, cycle = stn.bellman_ford(augmented, src)
    if cycle is not None:
        raise AssertionError("projection of a winning strategy must be conservative")
    assert dist is not None
    sub_schedule = [dist[g] for g in prep.rmap.timepoint_node]
    return _assemble_schedule(prep, sub_schedule)


def compute_negative_cycle(
    net: HyTN, policy: QueuePolicy = QueuePolicy.MAX_PRIORITY
) -> NegativeCycleCert:
    """Negative-cycle certificate of an inconsistent network.

    Raises ValueError when the network turns out to be consistent.
    """
    verdict = solve(net, policy)
    if verdict.consistent:
        raise ValueError("network is consistent; no negative cycle exists")
    assert verdict.certificate is not None
    return verdict.certificate
