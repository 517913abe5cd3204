"""Data model for hyper temporal networks (HyTNs).

A HyTN places integer-valued timepoints on the line subject to hyperarc
constraints.  A standard arc ``(t, h, w)`` demands ``s(h) - s(t) <= w``.  A
multi-head arc bundles several such upper bounds out of one tail and is
satisfied when at least one of them holds; a multi-tail arc is the symmetric
bundle into one head.  This module holds the immutable network types, the
feasibility and certificate verifiers, and the structural transforms every
other module builds on.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from graphlib import CycleError, TopologicalSorter
from typing import Sequence, Union

from . import stn

#: Largest magnitude accepted for a single weight.  Keeping individual
#: weights within 31 bits lets every derived sum (weight bounds, energy
#: cutoffs) fit comfortably in 64 bits.
MAX_WEIGHT = 2**31 - 1

_INT64_MAX = 2**63 - 1


class NetworkClass(Enum):
    """Structural classification used to route networks to a solver."""

    STANDARD_ONLY = "standard"
    MULTI_HEAD_ONLY = "multi-head"
    MULTI_TAIL_ONLY = "multi-tail"
    MIXED = "mixed"


class MixedNetworkError(ValueError):
    """Raised when an operation requires a non-mixed network."""


@dataclass(frozen=True)
class Standard:
    """Single difference constraint ``s(head) - s(tail) <= weight``."""

    tail: int
    head: int
    weight: int


@dataclass(frozen=True)
class MultiHead:
    """One tail, several weighted heads; at least one bound must hold.

    Satisfied by ``s`` when ``s(tail) >= min(s(h) - w(h) for h in heads)``.
    """

    tail: int
    heads: tuple[int, ...]
    weights: tuple[int, ...]


@dataclass(frozen=True)
class MultiTail:
    """Several weighted tails, one head; at least one bound must hold.

    Satisfied by ``s`` when ``s(head) <= max(s(t) + w(t) for t in tails)``.
    """

    tails: tuple[int, ...]
    weights: tuple[int, ...]
    head: int


Hyperarc = Union[Standard, MultiHead, MultiTail]


def cardinality(arc: Hyperarc) -> int:
    """Number of distinct endpoints of ``arc`` (2 for a standard arc)."""
    if isinstance(arc, Standard):
        return 2
    if isinstance(arc, MultiHead):
        return 1 + len(arc.heads)
    return 1 + len(arc.tails)


def _check_weight(w: object) -> int:
    if not isinstance(w, int) or isinstance(w, bool):
        raise ValueError(f"weight {w!r} is not an integer")
    if abs(w) > MAX_WEIGHT:
        raise ValueError(f"weight {w} exceeds magnitude limit {MAX_WEIGHT}")
    return w


def _normalize(arc: Hyperarc, n: int) -> Hyperarc:
    """Validate one arc against a network of order ``n``.

    Cardinality-2 bundles are collapsed to standard arcs so that downstream
    code only ever sees genuine multi-endpoint hyperarcs.
    """
    if isinstance(arc, Standard):
        tail, head = arc.tail, arc.head
        endpoints = (tail, head)
        if tail == head:
            raise ValueError(f"self-loop on timepoint {tail}")
        _check_weight(arc.weight)
    elif isinstance(arc, MultiHead):
        endpoints = (arc.tail, *arc.heads)
        if not arc.heads:
            raise ValueError("multi-head arc with empty head set")
        if len(arc.heads) != len(arc.weights):
            raise ValueError("multi-head arc needs one weight per head")
        if len(set(arc.heads)) != len(arc.heads):
            raise ValueError("duplicate head inside one hyperarc")
        if arc.tail in arc.heads:
            raise ValueError(f"tail {arc.tail} appears among its own heads")
        for w in arc.weights:
            _check_weight(w)
        if len(arc.heads) == 1:
            arc = Standard(arc.tail, arc.heads[0], arc.weights[0])
    elif isinstance(arc, MultiTail):
        endpoints = (arc.head, *arc.tails)
        if not arc.tails:
            raise ValueError("multi-tail arc with empty tail set")
        if len(arc.tails) != len(arc.weights):
            raise ValueError("multi-tail arc needs one weight per tail")
        if len(set(arc.tails)) != len(arc.tails):
            raise ValueError("duplicate tail inside one hyperarc")
        if arc.head in arc.tails:
            raise ValueError(f"head {arc.head} appears among its own tails")
        for w in arc.weights:
            _check_weight(w)
        if len(arc.tails) == 1:
            arc = Standard(arc.tails[0], arc.head, arc.weights[0])
    else:
        raise TypeError(f"not a hyperarc: {arc!r}")
    for v in endpoints:
        if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < n:
            raise ValueError(f"timepoint {v!r} out of range for order {n}")
    return arc


class HyTN:
    """Immutable hyper temporal network of order ``n``.

    Timepoints are the dense integers ``0 .. n-1``.  Arcs are validated and
    normalized on construction; parallel standard arcs and self-loops are
    rejected outright.
    """

    __slots__ = ("n", "arcs")

    def __init__(self, n: int, arcs: Sequence[Hyperarc]):
        if n < 0:
            raise ValueError("network order must be non-negative")
        normalized = tuple(_normalize(a, n) for a in arcs)
        seen: set[tuple[int, int]] = set()
        for a in normalized:
            if isinstance(a, Standard):
                pair = (a.tail, a.head)
                if pair in seen:
                    raise ValueError(f"parallel standard arc {pair}")
                seen.add(pair)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "arcs", normalized)

    def __setattr__(self, name, value):
        raise AttributeError("HyTN instances are immutable")

    @property
    def order(self) -> int:
        return self.n

    @property
    def size(self) -> int:
        """Total endpoint count over all arcs (sum of cardinalities)."""
        return sum(cardinality(a) for a in self.arcs)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, HyTN) and self.n == other.n and self.arcs == other.arcs
        )

    def __hash__(self) -> int:
        return hash((self.n, self.arcs))

    def __repr__(self) -> str:
        return f"HyTN(n={self.n}, arcs={len(self.arcs)})"


@dataclass(frozen=True)
class NegativeCycleCert:
    """Inconsistency witness: a node set ``S`` and an arc choice ``C``.

    ``arc_indices`` index into the arcs of the network being certified.  The
    implied assignment maps each node of ``nodes`` to the unique chosen arc
    tailed at it; `verify_negative_cycle` checks that this structure exists
    and that every cyclic walk through chosen heads has negative weight.
    """

    nodes: frozenset[int]
    arc_indices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", frozenset(self.nodes))
        object.__setattr__(self, "arc_indices", tuple(sorted(self.arc_indices)))


def classify(net: HyTN) -> NetworkClass:
    """Classify ``net`` by the kinds of its genuine (cardinality > 2) arcs."""
    has_mh = any(isinstance(a, MultiHead) for a in net.arcs)
    has_mt = any(isinstance(a, MultiTail) for a in net.arcs)
    if has_mh and has_mt:
        return NetworkClass.MIXED
    if has_mh:
        return NetworkClass.MULTI_HEAD_ONLY
    if has_mt:
        return NetworkClass.MULTI_TAIL_ONLY
    return NetworkClass.STANDARD_ONLY


def verify_schedule(net: HyTN, schedule: Sequence[int]) -> bool:
    """Check that ``schedule`` satisfies every hyperarc of ``net``."""
    if len(schedule) != net.n:
        raise ValueError(f"schedule has {len(schedule)} values, network order is {net.n}")
    s = schedule
    for a in net.arcs:
        if isinstance(a, Standard):
            if s[a.head] - s[a.tail] > a.weight:
                return False
        elif isinstance(a, MultiHead):
            st = s[a.tail]
            if all(st < s[h] - w for h, w in zip(a.heads, a.weights)):
                return False
        else:
            sh = s[a.head]
            if all(sh > s[t] + w for t, w in zip(a.tails, a.weights)):
                return False
    return True


def reverse_network(net: HyTN) -> HyTN:
    """Swap tail and head roles on every arc, preserving arc order.

    A schedule ``s`` is feasible for ``net`` exactly when ``-s`` is feasible
    for the reversal, so multi-tail networks can be solved through their
    multi-head mirror.
    """
    flipped: list[Hyperarc] = []
    for a in net.arcs:
        if isinstance(a, Standard):
            flipped.append(Standard(a.head, a.tail, a.weight))
        elif isinstance(a, MultiHead):
            flipped.append(MultiTail(a.heads, a.weights, a.tail))
        else:
            flipped.append(MultiHead(a.head, a.tails, a.weights))
    return HyTN(net.n, flipped)


def weight_bound(net: HyTN) -> int:
    """Sum of absolute weights; feasible schedules fit in this range.

    Raises OverflowError if the exact sum leaves the signed 64-bit range that
    downstream accumulators assume.
    """
    total = 0
    for a in net.arcs:
        if isinstance(a, Standard):
            total += abs(a.weight)
        else:
            total += sum(abs(w) for w in a.weights)
    if total > _INT64_MAX:
        raise OverflowError(f"weight bound {total} exceeds 64-bit range")
    return total


def verify_negative_cycle(net: HyTN, cert: NegativeCycleCert) -> bool:
    """Check a negative-cycle certificate against ``net``.

    Returns True when (a) every node of the certificate tails exactly one
    chosen arc, (b) all chosen heads stay inside the node set, and (c) every
    cyclic sequence of nodes reachable through chosen heads has strictly
    negative total weight.  Structural violations yield False rather than an
    exception so the check is a total predicate.  Multi-tail networks are
    verified through their reversal; on mixed networks the chosen arcs must
    all read as multi-head, which is sound since any feasible schedule would
    have to satisfy them.
    """
    mh = net
    if classify(net) is NetworkClass.MULTI_TAIL_ONLY:
        mh = reverse_network(net)
    if not cert.nodes or len(cert.arc_indices) != len(cert.nodes):
        return False
    chosen: dict[int, tuple[tuple[int, ...], tuple[int, ...]]] = {}
    for idx in cert.arc_indices:
        if not 0 <= idx < len(mh.arcs):
            return False
        a = mh.arcs[idx]
        if isinstance(a, Standard):
            tail, heads, weights = a.tail, (a.head,), (a.weight,)
        elif isinstance(a, MultiHead):
            tail, heads, weights = a.tail, a.heads, a.weights
        else:
            return False
        if tail in chosen or tail not in cert.nodes:
            return False
        chosen[tail] = (heads, weights)
    if set(chosen) != cert.nodes:
        return False
    for heads, _ in chosen.values():
        if any(h not in cert.nodes for h in heads):
            return False

    # Cyclic sequences all being negative is equivalent to every cycle of
    # the head-choice graph with negated weights being strictly positive.
    index = {v: i for i, v in enumerate(sorted(cert.nodes))}
    aux_arcs = [
        (index[t], index[h], -w)
        for t, (heads, weights) in chosen.items()
        for h, w in zip(heads, weights)
    ]
    aux = stn.DistanceGraph(len(index), aux_arcs)
    potential, cycle = stn.stn_consistency(aux)
    if cycle is not None:
        return False
    assert potential is not None
    zero_succ: dict[int, list[int]] = {i: [] for i in range(len(index))}
    for t, h, w in aux.arcs:
        if w - potential[h] + potential[t] == 0:
            zero_succ[t].append(h)
    try:
        TopologicalSorter(zero_succ).prepare()
    except CycleError:
        return False
    return True
