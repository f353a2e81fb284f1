from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from posc4 import strategies as S
from posc4.engine import play_game
from posc4.errors import ExhaustedBoardError
from posc4.graph_core import Edge, Ownership, edge_endpoints, edge_id, new_board
from posc4.params import GameParams
from posc4.strategies import (
    DegreePhase,
    FinishPhase,
    StrikePhase,
    breaker_deactivator,
    breaker_degree_attack,
    breaker_random,
    maker_c4_move,
    maker_ddegree_move,
    make_breaker,
    make_maker,
    rng_streams,
)
from posc4.threat_index import (
    ThreatClass,
    completes_c4,
    dangerous_partition,
    threat_count_fast,
    threats_of_oracle,
)
from posc4.verify import random_board

from .conftest import B, M, build


def eligible(board, d_hat):
    out = []
    for eid in np.flatnonzero(board.owner == 0).tolist():
        u, v = edge_endpoints(eid, board.n)
        if board.maker_deg[u] < d_hat and board.maker_deg[v] < d_hat:
            out.append(Edge(u, v))
    return out


# -- d-degree -------------------------------------------------------------


def test_ddegree_fresh_board_lexico():
    assert maker_ddegree_move(new_board(6), 2, tie_break="lexico") == Edge(0, 1)


def test_ddegree_stops_when_nothing_eligible():
    b = build(4, maker=[(0, 1)], breaker=[(2, 3)])
    assert eligible(b, 1) == []
    assert maker_ddegree_move(b, 1, np.random.default_rng(0)) is None
    assert maker_ddegree_move(b, 1, tie_break="lexico") is None


def test_ddegree_forced_move(rng):
    b = build(5, maker=[(0, 1), (0, 2)], breaker=[(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)])
    assert eligible(b, 2) == [Edge(1, 4)]
    for mode in ("lexico", "random"):
        assert maker_ddegree_move(b, 2, rng, mode) == Edge(1, 4)


@pytest.mark.parametrize("tries", [S.REJECTION_TRIES, 0])
def test_random_tie_break_is_uniform(monkeypatch, tries):
    monkeypatch.setattr(S, "REJECTION_TRIES", tries)
    b = build(7, maker=[(0, 1), (0, 2), (3, 4)], breaker=[(1, 5), (2, 6), (4, 5)])
    cands = eligible(b, 2)
    rng = np.random.default_rng(5)
    draws = 200 * len(cands)
    counts = Counter(maker_ddegree_move(b, 2, rng, "random") for _ in range(draws))
    assert set(counts) == set(cands)
    expected = draws / len(cands)
    chi2 = sum((counts[c] - expected) ** 2 / expected for c in cands)
    # 99.9% quantile of chi-square with len(cands)-1 <= 12 dof is below 33
    assert len(cands) - 1 <= 12 and chi2 < 33


@settings(max_examples=25, deadline=None)
@given(st.integers(4, 40), st.integers(1, 5), st.integers(0, 2**32 - 1), st.sampled_from(["random", "lexico"]))
def test_degree_cap_and_phase_length(n, d_hat, seed, mode):
    rng = np.random.default_rng(seed)
    b = new_board(n)
    moves = 0
    while True:
        e = maker_ddegree_move(b, d_hat, rng, mode)
        if e is None:
            break
        assert b.maker_deg[e.u] < d_hat and b.maker_deg[e.v] < d_hat and b.is_unclaimed(*e)
        b.claim(M, e)
        moves += 1
        for f in breaker_random(b, 1, rng):
            b.claim(B, f)
        assert max(b.maker_deg) <= d_hat
    assert eligible(b, d_hat) == []
    assert moves <= n * d_hat // 2


# -- C4 strategy ----------------------------------------------------------


def transition_board():
    """8-cycle for Maker, every chord Breaker's except {0,4}, {1,5}, {3,7}.

    With q = 1 and d_hat = 2 no d-degree edge is left; {0,4} is the only
    unclaimed Active edge.
    """
    cycle = [(i, (i + 1) % 8) for i in range(8)]
    free = {Edge(0, 4), Edge(1, 5), Edge(3, 7)}
    chords = [edge_endpoints(i, 8) for i in range(28)]
    breaker = [e for e in chords if Edge.of(*e) not in free and Edge.of(*e) not in {Edge.of(*c) for c in cycle}]
    return build(8, maker=cycle, breaker=breaker), GameParams.from_q(8, 1, delta=0.9)


def test_transition_board_setup():
    b, p = transition_board()
    assert p.d_hat == 2
    assert maker_ddegree_move(b, p.d_hat, tie_break="lexico") is None
    part = dangerous_partition(b, p)
    free_active = [i for i in part.D_a.tolist() if b.owner[i] == 0]
    assert free_active == [edge_id(0, 4, 8)]
    assert part.classes[edge_id(1, 5, 8)] == ThreatClass.INDIRECTLY_DEACTIVATED
    # Maker's own cycle edges can be Active too; they are not claimable
    assert any(b.owner[i] == Ownership.MAKER for i in part.D_a.tolist())


def test_c4_move_strikes_the_active_edge_then_finishes():
    b, p = transition_board()
    e, phase = maker_c4_move(b, DegreePhase(), p, np.random.default_rng(0))
    assert e == Edge(0, 4)
    assert isinstance(phase, StrikePhase) and phase.sound and phase.uncovered == 2 > p.q
    b.claim(M, e)
    b.claim(B, (1, 5))
    left = [t for t in threats_of_oracle(b, e) if b.is_unclaimed(*t)]
    assert left == [Edge(3, 7)]
    f, _ = maker_c4_move(b, phase, p)
    assert f == Edge(3, 7) and completes_c4(b, f)


def test_strike_phase_without_preempt_goes_to_finish():
    b, p = transition_board()
    b.claim(M, (0, 4))
    phase = StrikePhase(Edge(0, 4))
    watch = S.C4Watch()
    watch.best = lambda board: None  # force the phase logic
    f, new = maker_c4_move(b, phase, p, watch=watch)
    assert f == Edge(1, 5) and new == FinishPhase(Edge(1, 5))


def test_c4_move_preempts_winning_edge():
    b = build(8, maker=[(0, 1), (1, 2), (2, 3)])
    p = GameParams.from_q(8, 1)
    for phase in (DegreePhase(), StrikePhase(Edge(4, 5)), FinishPhase(Edge(4, 5))):
        e, new = maker_c4_move(b, phase, p, np.random.default_rng(1))
        assert e == Edge(0, 3) and new == phase


def test_c4_move_delegates_in_degree_phase():
    b = build(10, maker=[(0, 1)], breaker=[(2, 3)])
    p = GameParams.from_q(10, 1)
    for seed in range(5):
        want = maker_ddegree_move(b, p.d_hat, np.random.default_rng(seed), "random")
        got, phase = maker_c4_move(b, DegreePhase(), p, np.random.default_rng(seed), "random")
        assert got == want and phase == DegreePhase()


def test_c4_move_fallback_flags_unsound_strike():
    # star graph, all threats Breaker's: no Active edge at the transition
    b = build(6, maker=[(0, 1), (0, 2), (3, 4), (3, 5)])
    for eid in np.flatnonzero(b.owner == 0).tolist():
        u, v = edge_endpoints(eid, 6)
        if {u, v} not in ({0, 3},):
            b.claim(B, (u, v))
    p = GameParams.from_q(6, 5, delta=0.9)
    e, phase = maker_c4_move(b, DegreePhase(), p)
    assert e == Edge(0, 3) and isinstance(phase, StrikePhase) and not phase.sound


def test_c4_move_on_full_board_raises():
    b = new_board(4)
    for i in range(6):
        b.claim(B, edge_endpoints(i, 4))
    with pytest.raises(ExhaustedBoardError):
        maker_c4_move(b, DegreePhase(), GameParams.from_q(4, 1))


# -- Breakers -------------------------------------------------------------


def test_breaker_random_examples():
    b = new_board(4)
    for i in range(3):
        b.claim(M, edge_endpoints(i, 4))
    assert sorted(breaker_random(b, 5, np.random.default_rng(0))) == [edge_endpoints(i, 4) for i in range(3, 6)]
    first = breaker_random(new_board(10), 2, np.random.default_rng(9))
    assert first == breaker_random(new_board(10), 2, np.random.default_rng(9))
    assert len(set(first)) == 2
    full = new_board(4)
    for i in range(6):
        full.claim(B, edge_endpoints(i, 4))
    assert breaker_random(full, 3, np.random.default_rng(0)) == []


def test_deactivator_examples():
    p = GameParams.from_q(8, 2)
    b = build(8, maker=[(0, 2), (0, 3), (0, 4), (1, 5), (1, 6)])
    totals = {i: threat_count_fast(b, edge_endpoints(i, 8)) for i in np.flatnonzero(b.owner == 0).tolist()}
    top = max(totals, key=lambda i: (totals[i], -i))
    assert sorted(totals.values())[-1] > sorted(totals.values())[-2]
    assert breaker_deactivator(b, 2, p)[0] == edge_endpoints(top, 8) == Edge(0, 1)
    assert breaker_deactivator(new_board(8), 3, p) == [edge_endpoints(i, 8) for i in range(3)]
    small = new_board(4)
    for i in range(4):
        small.claim(B, edge_endpoints(i, 4))
    assert sorted(breaker_deactivator(small, 5, p)) == [edge_endpoints(4, 4), edge_endpoints(5, 4)]


def test_deactivator_greedy_order(rng):
    p = GameParams.from_q(10, 4)
    for _ in range(20):
        b = random_board(10, rng, p_maker=0.2, p_breaker=0.2)
        picks = breaker_deactivator(b, 4, p)
        free = np.flatnonzero(b.owner == 0).tolist()
        ranked = sorted(free, key=lambda i: (-threat_count_fast(b, edge_endpoints(i, 10)), i))
        positive = [i for i in ranked if threat_count_fast(b, edge_endpoints(i, 10)) > 0]
        want = positive[: len(picks)]
        assert [edge_id(*e, 10) for e in picks][: len(want)] == want


def test_deactivator_spends_leftover_on_threats_of_a_maker_edge():
    # one Maker path 0-1-2-3; only C4-closing threat edge left is {0,3}
    b = build(6, maker=[(1, 2), (0, 1), (2, 3)])
    for eid in np.flatnonzero(b.owner == 0).tolist():
        if edge_endpoints(eid, 6) not in (Edge(0, 3), Edge(4, 5)):
            b.claim(B, edge_endpoints(eid, 6))
    assert threat_count_fast(b, (0, 3)) == 1 and threat_count_fast(b, (4, 5)) == 0
    picks = breaker_deactivator(b, 2, GameParams.from_q(6, 2))
    assert picks == [Edge(0, 3), Edge(4, 5)]


def test_degree_attack_examples():
    p = GameParams.from_q(10, 1)
    assert breaker_degree_attack(new_board(10), 1, p) == [Edge(0, 1)]
    b = build(5, maker=[(0, 1), (0, 2), (0, 3), (0, 4)])
    p5 = GameParams.from_q(5, 3, delta=0.1)  # d_hat = 1: only vertex-free pairs are eligible
    assert p5.d_hat == 1
    assert breaker_degree_attack(b, 3, p5) == [edge_endpoints(i, 5) for i in np.flatnonzero(b.owner == 0)[:3]]


def test_degree_attack_prefers_eligible_pairs(rng):
    p = GameParams.from_q(12, 4)
    for _ in range(20):
        b = random_board(12, rng, p_maker=0.15, p_breaker=0.3)
        elig = eligible(b, p.d_hat)
        picks = breaker_degree_attack(b, 4, p)
        if len(elig) >= 4:
            assert picks == elig[:4]
        else:
            assert picks[: len(elig)] == elig


@settings(max_examples=30, deadline=None)
@given(st.integers(4, 12), st.integers(1, 8), st.integers(0, 10_000), st.sampled_from(["random", "deactivator", "degree-attack"]))
def test_breakers_return_distinct_unclaimed(n, q, seed, name):
    rng = np.random.default_rng(seed)
    b = random_board(n, rng)
    p = GameParams.from_q(n, q)
    picks = make_breaker(name, p, rng).move(b)
    assert len(picks) == min(q, b.unclaimed_count)
    assert len(set(picks)) == len(picks)
    assert all(b.is_unclaimed(*e) for e in picks)


def test_factories_accept_prefixed_names():
    p = GameParams.from_q(10, 1)
    m, _ = rng_streams(0)
    assert make_maker("maker:c4", p, m).name == make_maker("c4", p, m).name == "maker:c4"
    assert make_breaker("breaker:degree-attack", p).name == "breaker:degree-attack"
    with pytest.raises(ValueError):
        make_maker("maker:greedy", p)


def test_strike_soundness_in_scripted_game():
    # passive Breaker + lexico d-degree on n=8 ends in a Maker C4
    p = GameParams.from_q(8, 1)
    m = make_maker("c4", p, tie_break="lexico")
    tr = play_game(p, m, make_breaker("passive", p))
    assert tr.result.winner == "maker"
