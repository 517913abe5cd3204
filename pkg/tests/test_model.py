from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hytn.model import (
    HyTN,
    MultiHead,
    MultiTail,
    NegativeCycleCert,
    NetworkClass,
    Standard,
    cardinality,
    classify,
    reverse_network,
    verify_negative_cycle,
    verify_schedule,
    weight_bound,
)

# Fig-style three-node disjunction: x3 >= min(x1, x2).
MIN_JOIN = HyTN(3, [MultiHead(2, (0, 1), (0, 0))])


def test_min_join_admissible_schedules():
    assert verify_schedule(MIN_JOIN, [0, 2, 2])
    assert verify_schedule(MIN_JOIN, [-2, 0, 2])


def test_min_join_rejects_midpoint():
    # The midpoint of two feasible schedules can be infeasible.
    assert not verify_schedule(MIN_JOIN, [1, 1, 0])


def test_verify_schedule_join_fixture(join_net):
    assert verify_schedule(join_net, [24, 2, 12, 5, 0, 7, 0, 0])


def test_verify_schedule_empty_network():
    assert verify_schedule(HyTN(3, []), [5, -1, 7])


def test_verify_schedule_length_mismatch():
    with pytest.raises(ValueError):
        verify_schedule(MIN_JOIN, [0, 0])


def test_standard_arc_semantics():
    net = HyTN(2, [Standard(0, 1, 3)])
    assert verify_schedule(net, [0, 3])
    assert not verify_schedule(net, [0, 4])


def test_multi_tail_semantics():
    net = HyTN(3, [MultiTail((0, 1), (0, -2), 2)])
    # head <= max(t0 + 0, t1 - 2)
    assert verify_schedule(net, [5, 0, 5])
    assert verify_schedule(net, [0, 10, 8])
    assert not verify_schedule(net, [0, 0, 1])


def test_cardinality_and_size(join_net):
    assert cardinality(Standard(0, 1, 5)) == 2
    assert cardinality(MultiHead(0, (1, 2, 3), (0, 0, 0))) == 4
    assert join_net.order == 8
    assert join_net.size == 15 * 2 + 4


def test_single_head_bundle_normalizes_to_standard():
    net = HyTN(2, [MultiHead(0, (1,), (7,))])
    assert net.arcs == (Standard(0, 1, 7),)
    net = HyTN(2, [MultiTail((0,), (7,), 1)])
    assert net.arcs == (Standard(0, 1, 7),)


@pytest.mark.parametrize(
    "bad",
    [
        lambda: HyTN(2, [Standard(0, 0, 1)]),  # self-loop
        lambda: HyTN(2, [Standard(0, 1, 1), Standard(0, 1, 2)]),  # parallel
        lambda: HyTN(3, [MultiHead(0, (1, 1), (0, 0))]),  # duplicate head
        lambda: HyTN(3, [MultiHead(0, (0, 1), (0, 0))]),  # tail among heads
        lambda: HyTN(3, [MultiHead(0, (), ())]),  # empty head set
        lambda: HyTN(2, [Standard(0, 3, 1)]),  # endpoint out of range
        lambda: HyTN(2, [Standard(0, 1, 2**31)]),  # weight too large
        lambda: HyTN(3, [MultiHead(0, (1, 2), (0,))]),  # weight count mismatch
    ],
)
def test_structural_rejections(bad):
    with pytest.raises(ValueError):
        bad()


def test_classify():
    assert classify(HyTN(2, [Standard(0, 1, 1)])) is NetworkClass.STANDARD_ONLY
    assert classify(HyTN(3, [MultiHead(0, (1, 2), (0, 0))])) is NetworkClass.MULTI_HEAD_ONLY
    assert classify(HyTN(3, [MultiTail((0, 1), (0, 0), 2)])) is NetworkClass.MULTI_TAIL_ONLY
    mixed = HyTN(
        4,
        [MultiHead(0, (1, 2), (0, 0)), MultiTail((1, 3), (0, 0), 0)],
    )
    assert classify(mixed) is NetworkClass.MIXED
    assert classify(HyTN(0, [])) is NetworkClass.STANDARD_ONLY


def test_classify_join_fixture(join_net):
    assert classify(join_net) is NetworkClass.MULTI_HEAD_ONLY


def test_weight_bound_small():
    net = HyTN(3, [Standard(0, 1, -1), Standard(1, 2, 0), Standard(2, 0, 1)])
    assert weight_bound(net) == 2
    assert weight_bound(HyTN(4, [])) == 0


def test_weight_bound_join_fixture(join_net):
    # Independent tally over the fixture's arc list.
    expected = 0
    for a in join_net.arcs:
        ws = (a.weight,) if isinstance(a, Standard) else a.weights
        expected += sum(abs(w) for w in ws)
    assert expected == 219
    assert weight_bound(join_net) == 219


def test_reverse_swaps_roles():
    net = HyTN(4, [MultiTail((0, 1, 2), (0, 0, 0), 3)])
    rev = reverse_network(net)
    assert rev.arcs == (MultiHead(3, (0, 1, 2), (0, 0, 0)),)


def test_reverse_is_involution(join_net):
    assert reverse_network(reverse_network(join_net)) == join_net


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_reverse_time_flip_duality(data):
    n = data.draw(st.integers(3, 6))
    arcs = []
    pairs = set()
    for _ in range(data.draw(st.integers(0, 6))):
        kind = data.draw(st.sampled_from(["std", "mh", "mt"]))
        if kind == "std":
            t, h = data.draw(
                st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(
                    lambda p: p[0] != p[1] and p not in pairs
                )
            )
            pairs.add((t, h))
            arcs.append(Standard(t, h, data.draw(st.integers(-5, 5))))
        else:
            pivot = data.draw(st.integers(0, n - 1))
            others = [v for v in range(n) if v != pivot]
            size = data.draw(st.integers(2, len(others)))
            group = tuple(data.draw(st.permutations(others))[:size])
            ws = tuple(data.draw(st.integers(-5, 5)) for _ in group)
            if kind == "mh":
                arcs.append(MultiHead(pivot, group, ws))
            else:
                arcs.append(MultiTail(group, ws, pivot))
    net = HyTN(n, arcs)
    schedule = [data.draw(st.integers(-8, 8)) for _ in range(n)]
    negated = [-x for x in schedule]
    assert verify_schedule(net, schedule) == verify_schedule(
        reverse_network(net), negated
    )


def _all_cyclic_sums(net: HyTN, cert: NegativeCycleCert):
    """Enumerate total weights of all simple cyclic sequences of the cert.

    Independent oracle: walk the head-choice graph by depth-first search and
    collect every closed loop's weight sum.
    """
    choice = {}
    for idx in cert.arc_indices:
        a = net.arcs[idx]
        if isinstance(a, Standard):
            choice[a.tail] = [(a.head, a.weight)]
        else:
            choice[a.tail] = list(zip(a.heads, a.weights))
    sums = []

    def walk(path, weights):
        v = path[-1]
        for h, w in choice[v]:
            if h in path:
                k = path.index(h)
                sums.append(sum(weights[k:]) + w)
            else:
                walk(path + [h], weights + [w])

    for start in cert.nodes:
        walk([start], [])
    return sums


def test_negative_cycle_two_arc_negative():
    net = HyTN(2, [Standard(0, 1, -1), Standard(1, 0, 0)])
    cert = NegativeCycleCert(frozenset({0, 1}), (0, 1))
    assert verify_negative_cycle(net, cert)
    assert all(s < 0 for s in _all_cyclic_sums(net, cert))


def test_negative_cycle_two_arc_positive():
    net = HyTN(2, [Standard(0, 1, 1), Standard(1, 0, 0)])
    cert = NegativeCycleCert(frozenset({0, 1}), (0, 1))
    assert not verify_negative_cycle(net, cert)


def test_negative_cycle_zero_sum_sequence_rejected():
    # One loop sums to -2 but the other to 0; not a negative cycle.
    net = HyTN(
        3,
        [
            MultiHead(0, (1, 2), (-1, 1)),
            Standard(1, 0, 1),
            Standard(2, 0, -3),
        ],
    )
    cert = NegativeCycleCert(frozenset({0, 1, 2}), (0, 1, 2))
    sums = _all_cyclic_sums(net, cert)
    assert min(sums) < 0 and max(sums) == 0
    assert not verify_negative_cycle(net, cert)


def test_negative_cycle_structural_failures_return_false():
    net = HyTN(3, [Standard(0, 1, -1), Standard(1, 0, 0), Standard(1, 2, 0)])
    # head 2 of arc index 2 lies outside S
    assert not verify_negative_cycle(net, NegativeCycleCert(frozenset({0, 1}), (0, 2)))
    # node 1 tails no chosen arc
    assert not verify_negative_cycle(net, NegativeCycleCert(frozenset({0, 1}), (0,)))
    # duplicate tail
    assert not verify_negative_cycle(
        net, NegativeCycleCert(frozenset({0, 1}), (0, 0))
    )
    # empty certificate
    assert not verify_negative_cycle(net, NegativeCycleCert(frozenset(), ()))
    # arc index out of range
    assert not verify_negative_cycle(net, NegativeCycleCert(frozenset({0}), (9,)))


def test_negative_cycle_on_multi_tail_network_via_reversal():
    net = HyTN(2, [Standard(0, 1, -1), Standard(1, 0, 0)])
    cert = NegativeCycleCert(frozenset({0, 1}), (0, 1))
    rev = reverse_network(net)
    assert verify_negative_cycle(rev, cert)


def test_negative_cycle_on_mixed_network():
    # Chosen arcs avoid the multi-tail part, so the witness stays valid.
    net = HyTN(
        3,
        [
            Standard(0, 1, -1),
            Standard(1, 0, 0),
            MultiTail((0, 1), (5, 5), 2),
            MultiHead(2, (0, 1), (9, 9)),
        ],
    )
    assert classify(net) is NetworkClass.MIXED
    cert = NegativeCycleCert(frozenset({0, 1}), (0, 1))
    assert verify_negative_cycle(net, cert)
    # a multi-tail arc in the choice set is structurally unusable
    bad = NegativeCycleCert(frozenset({0, 1, 2}), (0, 1, 2))
    assert not verify_negative_cycle(net, bad)


def test_certificate_soundness_brute_force():
    """A verified certificate excludes every integral schedule in [-T, T]."""
    nets = [
        HyTN(2, [Standard(0, 1, -1), Standard(1, 0, 0)]),
        HyTN(
            3,
            [
                MultiHead(0, (1, 2), (-1, -2)),
                Standard(1, 0, 0),
                Standard(2, 0, 1),
                Standard(2, 1, -1),
            ],
        ),
        HyTN(
            4,
            [
                MultiHead(0, (1, 2), (0, 0)),
                Standard(1, 3, -1),
                Standard(2, 3, -2),
                Standard(3, 0, 0),
            ],
        ),
    ]
    certs = [
        NegativeCycleCert(frozenset({0, 1}), (0, 1)),
        NegativeCycleCert(frozenset({0, 1, 2}), (0, 1, 2)),
        NegativeCycleCert(frozenset({0, 1, 2, 3}), (0, 1, 2, 3)),
    ]
    for net, cert in zip(nets, certs):
        if not verify_negative_cycle(net, cert):
            continue
        t = weight_bound(net)
        assert t <= 6
        feasible = any(
            verify_schedule(net, list(s))
            for s in itertools.product(range(-t, t + 1), repeat=net.n)
        )
        assert not feasible


def test_schedule_restricts_to_subnetworks(join_net):
    s = [24, 2, 12, 5, 0, 7, 0, 0]
    for k in range(len(join_net.arcs)):
        sub = HyTN(join_net.n, join_net.arcs[:k])
        assert verify_schedule(sub, s)
