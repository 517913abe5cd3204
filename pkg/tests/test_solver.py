from __future__ import annotations

import random

import pytest

from hytn.generate import GenSpec, gen_random, gen_slow_family
from hytn.model import (
    HyTN,
    MixedNetworkError,
    MultiHead,
    MultiTail,
    Standard,
    classify,
    reverse_network,
    verify_negative_cycle,
    verify_schedule,
)
from hytn.mpg import (
    PLAYER0,
    PLAYER1,
    MeanPayoffGame,
    QueuePolicy,
    brute_force_values,
    is_progress_measure,
)
from hytn.solver import (
    InconsistentNetworkError,
    check_consistency,
    compute_negative_cycle,
    compute_schedule,
    compute_schedule_via_projection,
    hytn_to_mpg,
    mpg_to_hytn,
    solve,
)
from hytn.stn import DistanceGraph, stn_consistency

NEG_CYCLE = HyTN(2, [Standard(0, 1, -1), Standard(1, 0, 0)])


def _random_net(rng: random.Random, n=None, w=None, frac=0.1) -> HyTN:
    n = n or rng.randint(2, 60)
    w = w or rng.randint(1, 50)
    return gen_random(GenSpec(n, w, frac, min(3, n - 1), rng.getrandbits(48)))


def test_reduction_shape_single_arc():
    net = HyTN(2, [Standard(0, 1, 5), Standard(1, 0, -5)])
    game, rmap = hytn_to_mpg(net)
    assert game.n == 2 + 2
    assert sorted(game.arcs) == [(0, 2, 0), (1, 3, 0), (2, 1, 5), (3, 0, -5)]
    assert rmap.timepoint_node == (0, 1)
    assert rmap.arc_node == (2, 3)


def test_reduction_shape_join_fixture(join_net):
    game, _ = hytn_to_mpg(join_net)
    assert game.n == 8 + 16
    assert len(game.arcs) == 16 + (15 + 3)
    assert game.nodes_of(PLAYER0) == list(range(8))


def test_reduction_counts_random(rng):
    for _ in range(20):
        net = _random_net(rng)
        game, _ = hytn_to_mpg(net)
        heads = sum(
            1 if isinstance(a, Standard) else len(a.heads) for a in net.arcs
        )
        assert game.n == net.n + len(net.arcs)
        assert len(game.arcs) == len(net.arcs) + heads


def test_reduction_rejects_multi_tail_and_sinks():
    with pytest.raises(ValueError, match="reverse_network"):
        hytn_to_mpg(HyTN(3, [MultiTail((0, 1), (0, 0), 2)]))
    with pytest.raises(ValueError, match="sink"):
        hytn_to_mpg(HyTN(2, [Standard(0, 1, 1)]))


def test_mpg_to_hytn_zero_cycle():
    game = MeanPayoffGame([PLAYER1, PLAYER0], [(0, 1, 0), (1, 0, 0)])
    net = mpg_to_hytn(game)
    assert net.arcs == (Standard(0, 1, 0), Standard(1, 0, 0))
    ok, _ = check_consistency(net)
    assert ok


def test_mpg_to_hytn_negative_cycle():
    game = MeanPayoffGame([PLAYER1, PLAYER0], [(0, 1, -1), (1, 0, 0)])
    assert brute_force_values(game) == [
        pytest.approx(-0.5),
        pytest.approx(-0.5),
    ]
    ok, _ = check_consistency(mpg_to_hytn(game))
    assert not ok


def test_mpg_to_hytn_round_trip_consistency(rng):
    for _ in range(60):
        n = rng.randint(2, 6)
        owners = [rng.randint(0, 1) for _ in range(n)]
        arcs = []
        for u in range(n):
            others = [v for v in range(n) if v != u]
            for v in rng.sample(others, rng.randint(1, min(3, len(others)))):
                arcs.append((u, v, rng.randint(-4, 4)))
        game = MeanPayoffGame(owners, arcs)
        vals = brute_force_values(game)
        ok, _ = check_consistency(mpg_to_hytn(game))
        assert ok == all(v >= 0 for v in vals)


def test_check_consistency_join_fixture(join_net):
    ok, stats = check_consistency(join_net)
    assert ok
    assert stats.lifts >= 0


def test_check_consistency_rejects_mixed():
    mixed = HyTN(
        3, [MultiHead(0, (1, 2), (0, 0)), MultiTail((1, 2), (0, 0), 0)]
    )
    with pytest.raises(MixedNetworkError):
        check_consistency(mixed)


def test_slow_family_consistent_for_all_w():
    for w in (1, 3, 10, 100):
        net = gen_slow_family(w)
        assert verify_schedule(net, [0, 0, 1, 0, -w, -w])
        ok, _ = check_consistency(net)
        assert ok


def test_solve_dichotomy_fixture_and_cycle(join_net):
    v = solve(join_net)
    assert v.consistent and v.certificate is None
    assert verify_schedule(join_net, v.schedule)
    v = solve(NEG_CYCLE)
    assert not v.consistent and v.schedule is None
    assert verify_negative_cycle(NEG_CYCLE, v.certificate)
    assert v.certificate.nodes == frozenset({0, 1})
    assert set(v.certificate.arc_indices) == {0, 1}


def test_solve_dichotomy_random(rng):
    consistent = inconsistent = 0
    for _ in range(150):
        net = _random_net(rng, n=rng.randint(2, 40), w=rng.randint(1, 30))
        v = solve(net)
        if v.consistent:
            consistent += 1
            assert verify_schedule(net, v.schedule)
            assert v.certificate is None
        else:
            inconsistent += 1
            assert verify_negative_cycle(net, v.certificate)
            assert v.schedule is None
        assert is_progress_measure(v.game, v.measure)
    assert consistent and inconsistent


def test_compute_schedule_values_bounded(join_net):
    s = compute_schedule(join_net)
    game, _ = hytn_to_mpg(join_net)
    from hytn.mpg import top_cutoff

    assert all(0 <= x <= top_cutoff(game) for x in s)


def test_compute_schedule_raises_with_certificate():
    with pytest.raises(InconsistentNetworkError) as info:
        compute_schedule(NEG_CYCLE)
    assert verify_negative_cycle(NEG_CYCLE, info.value.certificate)


def test_compute_negative_cycle_requires_inconsistency(join_net):
    with pytest.raises(ValueError):
        compute_negative_cycle(join_net)


def test_both_schedule_methods_verify(rng, join_net):
    for net in [join_net] + [
        _random_net(rng, n=rng.randint(2, 30)) for _ in range(60)
    ]:
        try:
            direct = compute_schedule(net)
        except InconsistentNetworkError:
            continue
        projected = compute_schedule_via_projection(net)
        assert verify_schedule(net, direct)
        assert verify_schedule(net, projected)


def test_forced_strategy_projection_matches_stn(rng):
    """All-standard networks leave the maximizer no choices."""
    for _ in range(20):
        net = _random_net(rng, n=rng.randint(2, 25), frac=0.0)
        assert classify(net).value == "standard"
        arcs = [(a.tail, a.head, a.weight) for a in net.arcs]
        schedule, cycle = stn_consistency(DistanceGraph(net.n, arcs))
        ok, _ = check_consistency(net)
        assert ok == (cycle is None)
        if ok:
            assert verify_schedule(net, compute_schedule_via_projection(net))


def test_multi_tail_network_solved_through_reversal(rng):
    for _ in range(40):
        base = _random_net(rng, n=rng.randint(2, 25))
        net = reverse_network(base)
        if classify(net).value == "standard":
            continue
        assert classify(net).value == "multi-tail"
        v = solve(net)
        base_v = solve(base)
        assert v.consistent == base_v.consistent
        if v.consistent:
            assert verify_schedule(net, v.schedule)
            assert verify_schedule(net, compute_schedule_via_projection(net))
        else:
            assert verify_negative_cycle(net, v.certificate)


def test_sink_stripping_preserves_verdict(rng):
    for _ in range(30):
        base = _random_net(rng, n=rng.randint(2, 20))
        n = base.n
        # graft a sink chain onto the generated core
        extra = [
            Standard(0, n, 3),
            MultiHead(1, (n, n + 1), (2, 2)) if n >= 2 else Standard(0, n + 1, 2),
            Standard(n, n + 1, 1),
        ]
        net = HyTN(n + 2, list(base.arcs) + extra)
        v_base = solve(base)
        v = solve(net)
        assert v.consistent == v_base.consistent
        if v.consistent:
            assert verify_schedule(net, v.schedule)


def test_single_timepoint_no_arcs():
    assert compute_schedule(HyTN(1, [])) == [0]
    v = solve(HyTN(0, []))
    assert v.consistent and v.schedule == []


def test_isolated_and_chained_sinks():
    # 0 -> 1 -> 2 with only forward arcs: everything strips away.
    net = HyTN(3, [Standard(0, 1, -5), Standard(1, 2, 7)])
    s = compute_schedule(net)
    assert verify_schedule(net, s)


def test_stn_agreement_on_standard_networks(rng):
    for _ in range(80):
        net = _random_net(rng, n=rng.randint(2, 40), frac=0.0)
        arcs = [(a.tail, a.head, a.weight) for a in net.arcs]
        schedule, cycle = stn_consistency(DistanceGraph(net.n, arcs))
        ok, _ = check_consistency(net)
        assert ok == (cycle is None)


def test_certificate_spans_hyperarc_with_losing_escape():
    # The bundle's second head escapes the cheap loop but loses as well, so
    # the certificate must cover all three timepoints.
    net = HyTN(
        3,
        [
            MultiHead(0, (1, 2), (0, 0)),
            Standard(1, 0, -1),
            Standard(2, 0, -1),
        ],
    )
    cert = compute_negative_cycle(net)
    assert cert.nodes == frozenset({0, 1, 2})
    assert verify_negative_cycle(net, cert)


def test_random_inconsistent_certificates_verify(rng):
    found = 0
    for _ in range(80):
        net = _random_net(rng, n=rng.randint(3, 40))
        v = solve(net)
        if v.consistent:
            continue
        found += 1
        assert verify_negative_cycle(net, v.certificate)
    assert found >= 10


def test_watch_early_stop_decision_matches_full(rng):
    for _ in range(30):
        net = _random_net(rng, n=rng.randint(2, 30))
        fast, stats = check_consistency(net, QueuePolicy.LIFO_EARLY_STOP)
        full, _ = check_consistency(net, QueuePolicy.FIFO)
        assert fast == full
        if not fast:
            assert stats.early_stopped or stats.lifts >= 0
