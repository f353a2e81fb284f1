import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from posc4.engine import (
    BREAKER_WIN,
    MAKER_WIN,
    Transcript,
    footnote_holds,
    min_valid_n,
    play_game,
    region_violations,
    replay,
    run_game,
    validate_params,
)
from posc4.errors import NoValidNError, StrategyFaultError
from posc4.graph_core import Edge, Ownership
from posc4.params import GameParams
from posc4.strategies import make_breaker, make_maker
from posc4.verify import brute_force_c4


def keys(params):
    return {v.key for v in validate_params(params)}


# -- parameter regime ------------------------------------------------------


def test_region_examples():
    assert region_violations(0.15, 1.05, 0.602) == []
    assert {v.key for v in region_violations(0.2, 1.0, 0.7)} >= {"c_delta", "delta"}
    assert "beta_low" in {v.key for v in region_violations(0.05, 1.1, 0.5)}
    assert "beta_high" in {v.key for v in region_violations(0.1, 1.5, 0.65)}


def test_validate_params_examples():
    assert validate_params(GameParams.from_c(100, 0.05)) == []
    assert "n_min" in keys(GameParams.from_c(100, 0.15, delta=1.05, beta=0.602))
    assert "c_delta" in keys(GameParams.from_c(100, 0.2))
    assert "beta_low" in keys(GameParams.from_c(100, 0.05, beta=0.5))
    assert "n_board" in keys(GameParams.from_q(3, 1))
    assert "q_min" in keys(GameParams.from_c(10, 0.01))
    assert "q_bound" in keys(GameParams.from_q(100, 50))


def test_min_valid_n_default_regime():
    assert min_valid_n(0.05, 1.1, 0.7) == 42
    assert footnote_holds(42, 0.05, 1.1, 0.7, 2 / 3)
    assert not footnote_holds(41, 0.05, 1.1, 0.7, 2 / 3)


def test_min_valid_n_raises_at_equality():
    # (1 - 0.5)² = 0.25 exactly in binary floating point
    with pytest.raises(NoValidNError):
        min_valid_n(0.25, 1.0, 0.5)
    with pytest.raises(NoValidNError):
        min_valid_n(0.3, 1.0, 0.5)
    assert min_valid_n(0.25 - 1e-3, 1.0, 0.5) > 1000


@settings(max_examples=40, deadline=None)
@given(st.floats(0.005, 0.12), st.floats(1.01, 1.3), st.floats(0.61, 0.75))
def test_min_valid_n_is_first_valid_and_monotone(c, delta, beta):
    if c * delta >= (1 - beta) ** 2:
        return
    n0 = min_valid_n(c, delta, beta)
    assert footnote_holds(n0, c, delta, beta, 2 / 3)
    assert n0 == 4 or not footnote_holds(n0 - 1, c, delta, beta, 2 / 3)
    if c * 1.1 * delta < (1 - beta) ** 2:
        assert min_valid_n(c * 1.1, delta, beta) >= n0


# -- game loop -------------------------------------------------------------


def _game(n, q, maker="maker:c4", breaker="breaker:random", seed=0, **kw):
    p = GameParams.from_q(n, q, seed=seed)
    return run_game(p, maker, breaker, **kw)


def test_tiny_board_terminates():
    tr = _game(4, 1)
    assert len(tr.moves) <= 6
    assert tr.result.winner in (MAKER_WIN, BREAKER_WIN, "precondition_failure")


def test_passive_breaker_loses():
    tr = _game(8, 1, breaker="breaker:passive")
    assert tr.result.winner == MAKER_WIN
    cyc = tr.result.winning_c4
    assert len(set(cyc)) == 4
    for i in range(4):
        assert tr.board.owner_of(cyc[i], cyc[(i + 1) % 4]) == Ownership.MAKER


@pytest.mark.parametrize("breaker", ["breaker:random", "breaker:deactivator", "breaker:degree-attack"])
def test_replay_reproduces_board(breaker):
    tr = _game(30, 2, breaker=breaker, seed=3)
    assert np.array_equal(replay(tr).owner, tr.board.owner)


@pytest.mark.parametrize("first", [False, True])
def test_round_accounting(first):
    tr = _game(20, 3, seed=1, breaker_first=first)
    rounds = {}
    for m in tr.moves:
        rounds.setdefault(m.round, []).append(m.player)
    assert sorted(rounds) == list(range(1, tr.result.rounds + 1))
    for r, players in rounds.items():
        assert players.count(Ownership.MAKER) <= 1 and players.count(Ownership.BREAKER) <= 3
        if players.count(Ownership.MAKER) and players.count(Ownership.BREAKER):
            lead = Ownership.BREAKER if first else Ownership.MAKER
            assert players[0] == lead
    assert tr.result.maker_moves == sum(m.player == Ownership.MAKER for m in tr.moves)


def test_breaker_first_changes_opening():
    assert _game(20, 3, breaker_first=True).moves[0].player == Ownership.BREAKER
    assert _game(20, 3).moves[0].player == Ownership.MAKER


class _Cheat:
    name = "breaker:cheat"

    def __init__(self, edges):
        self.edges = edges

    def move(self, board):
        return self.edges


@pytest.mark.parametrize("edges", [[(0, 1)], [(0, 2), (0, 3), (0, 4)], [(0, 0)]])
def test_strategy_fault(edges):
    p = GameParams.from_q(8, 2)
    m = make_maker("c4", p, tie_break="lexico")  # first move (0, 1)
    with pytest.raises(StrategyFaultError):
        play_game(p, m, _Cheat(edges))


def test_json_round_trip():
    tr = _game(25, 2, seed=4, analyze=True)
    back = Transcript.from_json(tr.to_json())
    assert back.to_json() == tr.to_json()
    assert back.moves == tr.moves and back.result == tr.result
    assert np.array_equal(replay(back).owner, tr.board.owner)


def test_same_seed_same_transcript():
    a = _game(40, 2, breaker="breaker:random", seed=11).to_json()
    b = _game(40, 2, breaker="breaker:random", seed=11).to_json()
    assert a == b
    assert a != _game(40, 2, breaker="breaker:random", seed=12).to_json()


@settings(max_examples=25, deadline=None)
@given(st.integers(4, 12), st.integers(1, 4), st.integers(0, 1000),
       st.sampled_from(["breaker:random", "breaker:deactivator", "breaker:degree-attack"]))
def test_win_claims_are_sound(n, q, seed, breaker):
    tr = _game(n, q, breaker=breaker, seed=seed)
    board = tr.board
    if tr.result.winner == MAKER_WIN:
        assert brute_force_c4(board)
        # no earlier Maker win was missed
        assert not brute_force_c4(replay(tr, upto=_last_maker_index(tr)))
    else:
        assert not brute_force_c4(board)


def _last_maker_index(tr):
    return max(i for i, m in enumerate(tr.moves) if m.player == Ownership.MAKER)


def test_degree_goal_for_ddegree_maker():
    p = GameParams.from_c(60, 0.05, seed=2)
    tr = run_game(p, "maker:ddegree", "breaker:random", analyze=True)
    assert tr.goal == "degree"
    r = tr.result
    assert r.phase_transition_round is not None and r.maker_moves == r.maker_moves_at_transition
    assert r.winner == (MAKER_WIN if r.x_size_at_transition >= p.x_target else BREAKER_WIN)
    assert tr.transition_report["canonical"] is True
    assert r.maker_moves <= math.ceil(p.round_bound) + p.n


def test_max_rounds_limits_play():
    p = GameParams.from_q(30, 1)
    tr = play_game(p, make_maker("c4", p, np.random.default_rng(0)), make_breaker("passive", p), max_rounds=2)
    assert tr.result.rounds <= 2 and tr.result.maker_moves <= 2
    assert tr.moves[0].edge == Edge(*tr.moves[0].edge)
