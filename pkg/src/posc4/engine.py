"""Referee for the biased Maker-Breaker C4 game.

Each round Maker claims one edge and Breaker up to q edges (Maker moves
first unless ``breaker_first``).  The referee validates every move, stops
on a Maker C4 or an exhausted board, and records a replayable transcript.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

from .errors import IllegalMoveError, NoValidNError, StrategyFaultError
from .graph_core import MIN_N, BoardState, Edge, Ownership, new_board
from .params import GameParams
from .threat_index import cycle_through, dangerous_partition

MAKER_WIN = "maker"
BREAKER_WIN = "breaker"
PRECONDITION_FAILURE = "precondition_failure"

_PLAYER_CODE = {Ownership.MAKER: "M", Ownership.BREAKER: "B"}
_CODE_PLAYER = {v: k for k, v in _PLAYER_CODE.items()}


# -- parameter regimes -----------------------------------------------------


def footnote_holds(n: int, c: float, delta: float, beta: float, alpha: float) -> bool:
    """The "n large enough" inequality behind the degree-game round bound."""
    lhs = c * delta / 2.0 * n * n
    rhs = (1 - beta) ** 2 / 2.0 * n * n - 0.5 * ((1 - beta) * n + delta * (1 - beta) * n ** (2 - alpha))
    return lhs < rhs


def min_valid_n(c: float, delta: float, beta: float, alpha: float = 2.0 / 3.0) -> int:
    """Smallest n >= 4 satisfying :func:`footnote_holds`.

    The inequality is monotone in n (divide through by n^(2-alpha)), so a
    doubling search followed by bisection finds the first n.
    """
    if c * delta >= (1 - beta) ** 2:
        raise NoValidNError(f"cδ = {c * delta:g} >= (1-β)² = {(1 - beta) ** 2:g}; no n satisfies the bound")
    lo, hi = MIN_N, MIN_N
    while not footnote_holds(hi, c, delta, beta, alpha):
        lo, hi = hi, hi * 2
    if footnote_holds(lo, c, delta, beta, alpha):
        return lo
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if footnote_holds(mid, c, delta, beta, alpha):
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class Violation:
    key: str
    message: str

    def __str__(self):
        return self.message


def region_violations(c: float, delta: float, beta: float) -> list[Violation]:
    """Constraints on (c, δ, β) under which the C4 strategy is analysed."""
    out = []
    if not delta > 1:
        out.append(Violation("delta", f"δ > 1 violated (δ = {delta:g})"))
    if not c * delta < 0.16:
        out.append(Violation("c_delta", f"cδ < 0.16 violated (cδ = {c * delta:g})"))
    if not beta > 0.6:
        out.append(Violation("beta_low", f"β > 0.6 violated (β = {beta:g})"))
    upper = 1 - math.sqrt(c * delta) if c * delta >= 0 else float("nan")
    if not beta < upper:
        out.append(Violation("beta_high", f"β < 1 - √(cδ) violated (β = {beta:g}, bound = {upper:g})"))
    return out


def validate_params(params: GameParams) -> list[Violation]:
    """All violated preconditions; an empty list means the regime is valid."""
    p = params
    out = []
    if p.n < MIN_N:
        out.append(Violation("n_board", f"n ≥ {MIN_N} violated (n = {p.n})"))
    if p.q < 1:
        out.append(Violation("q_min", f"q ≥ 1 violated (q = {p.q})"))
    out += region_violations(p.c, p.delta, p.beta)
    q_bound = (1 - p.beta) ** 2 / p.delta * p.n**p.alpha
    if not p.q < q_bound:
        out.append(Violation("q_bound", f"q < ((1-β)²/δ)·n^α violated (q = {p.q}, bound = {q_bound:g})"))
    try:
        nmin = min_valid_n(p.c, p.delta, p.beta, p.alpha)
    except NoValidNError as exc:
        out.append(Violation("n_min", f"no valid n: {exc}"))
    else:
        if p.n < nmin:
            out.append(Violation("n_min", f"n ≥ min_valid_n violated (n = {p.n}, min_valid_n = {nmin})"))
    return out


# -- transcripts -----------------------------------------------------------


@dataclass(frozen=True)
class Move:
    round: int
    player: Ownership
    edge: Edge


@dataclass
class GameResult:
    winner: str
    rounds: int
    maker_moves: int
    winning_c4: tuple[int, int, int, int] | None = None
    phase_transition_round: int | None = None
    transition_ply: int | None = None
    maker_moves_at_transition: int | None = None
    x_size_at_transition: int | None = None
    d_a_size_at_transition: int | None = None
    strike_sound: bool | None = None

    def to_dict(self) -> dict:
        return {
            "winner": self.winner,
            "rounds": self.rounds,
            "maker_moves": self.maker_moves,
            "winning_c4": list(self.winning_c4) if self.winning_c4 else None,
            "phase_transition_round": self.phase_transition_round,
            "x_size": self.x_size_at_transition,
            "transition_ply": self.transition_ply,
            "maker_moves_at_transition": self.maker_moves_at_transition,
            "d_a_size": self.d_a_size_at_transition,
            "strike_sound": self.strike_sound,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GameResult":
        return cls(
            winner=d["winner"],
            rounds=d["rounds"],
            maker_moves=d["maker_moves"],
            winning_c4=tuple(d["winning_c4"]) if d.get("winning_c4") else None,
            phase_transition_round=d.get("phase_transition_round"),
            transition_ply=d.get("transition_ply"),
            maker_moves_at_transition=d.get("maker_moves_at_transition"),
            x_size_at_transition=d.get("x_size"),
            d_a_size_at_transition=d.get("d_a_size"),
            strike_sound=d.get("strike_sound"),
        )


@dataclass
class Transcript:
    params: GameParams
    moves: list[Move]
    result: GameResult
    maker: str = "maker:c4"
    breaker: str = "breaker:random"
    goal: str = "c4"
    tie_break: str = "random"
    breaker_first: bool = False
    transition_report: dict | None = None
    board: BoardState | None = field(default=None, repr=False, compare=False)

    def to_dict(self) -> dict:
        d = {
            "params": self.params.to_dict(),
            "maker": self.maker,
            "breaker": self.breaker,
            "goal": self.goal,
            "tie_break": self.tie_break,
            "breaker_first": self.breaker_first,
            "moves": [
                {"round": m.round, "player": _PLAYER_CODE[m.player], "edge": [m.edge.u, m.edge.v]}
                for m in self.moves
            ],
            "result": self.result.to_dict(),
        }
        if self.transition_report is not None:
            d["transition_report"] = self.transition_report
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"), sort_keys=False)

    @classmethod
    def from_dict(cls, d: dict) -> "Transcript":
        p = d["params"]
        params = GameParams(n=p["n"], q=p["q"], c=p["c"], delta=p["delta"], alpha=p["alpha"],
                            beta=p["beta"], seed=p["seed"])
        moves = [Move(m["round"], _CODE_PLAYER[m["player"]], Edge.of(*m["edge"])) for m in d["moves"]]
        return cls(
            params=params,
            moves=moves,
            result=GameResult.from_dict(d["result"]),
            maker=d.get("maker", "maker:c4"),
            breaker=d.get("breaker", "breaker:random"),
            goal=d.get("goal", "c4"),
            tie_break=d.get("tie_break", "random"),
            breaker_first=d.get("breaker_first", False),
            transition_report=d.get("transition_report"),
        )

    @classmethod
    def from_json(cls, text: str) -> "Transcript":
        return cls.from_dict(json.loads(text))


def replay(transcript: Transcript, upto: int | None = None) -> BoardState:
    """Rebuild the board from the first ``upto`` moves (all by default).

    Checks legality and the per-round bias as it goes.
    """
    params = transcript.params
    board = new_board(params.n)
    per_round: dict[tuple[int, Ownership], int] = {}
    for m in transcript.moves[:upto]:
        key = (m.round, m.player)
        per_round[key] = per_round.get(key, 0) + 1
        limit = 1 if m.player == Ownership.MAKER else params.q
        if per_round[key] > limit:
            raise StrategyFaultError(m.player.name, m.edge, f"bias exceeded in round {m.round}")
        board.claim(m.player, m.edge)
    return board


# -- the game loop ---------------------------------------------------------


def _x_size(board: BoardState, d_hat: int) -> int:
    return sum(1 for d in board.maker_deg if d >= d_hat)


def play_game(
    params: GameParams,
    maker,
    breaker,
    *,
    goal: str | None = None,
    breaker_first: bool = False,
    on_transition: Callable[[BoardState, int], dict] | None = None,
    max_rounds: int | None = None,
) -> Transcript:
    """Play one game and return its transcript.

    ``goal="c4"`` ends the game when Maker owns a 4-cycle.  ``goal="degree"``
    plays the partial minimum degree game: it ends when Maker's d-degree
    strategy stops, and Maker wins iff at least ceil(βn) vertices reach the
    degree cap.  By default the goal is ``"degree"`` for ``maker:ddegree``
    and ``"c4"`` otherwise.

    ``on_transition(board, maker_moves)`` is called on the board as it
    stands when the d-degree strategy first stops, before Maker's next
    claim; its return value is stored as ``transition_report``.
    """
    if goal is None:
        goal = "degree" if getattr(maker, "name", "") == "maker:ddegree" else "c4"
    if goal not in ("c4", "degree"):
        raise ValueError(f"unknown goal {goal!r}")
    board = new_board(params.n)
    moves: list[Move] = []
    res = GameResult(winner=BREAKER_WIN, rounds=0, maker_moves=0)
    report = None
    phase1_cap = math.ceil(params.round_bound) + params.n
    rnd = 0

    def breaker_turn() -> int:
        if board.unclaimed_count == 0:
            return 0
        edges = list(breaker.move(board))
        if len(edges) > params.q:
            raise StrategyFaultError(breaker.name, edges, f"claimed {len(edges)} > q = {params.q} edges")
        for e in edges:
            try:
                e = board.claim(Ownership.BREAKER, e)
            except (IllegalMoveError, ValueError) as exc:
                raise StrategyFaultError(breaker.name, e, str(exc)) from exc
            moves.append(Move(rnd, Ownership.BREAKER, e))
        return len(edges)

    def mark_transition() -> None:
        nonlocal report
        res.phase_transition_round = rnd
        res.transition_ply = len(moves)
        res.maker_moves_at_transition = res.maker_moves
        res.x_size_at_transition = _x_size(board, params.d_hat)
        res.d_a_size_at_transition = len(dangerous_partition(board, params).D_a)
        if on_transition is not None:
            report = on_transition(board, res.maker_moves)
        if goal == "degree":
            res.winner = MAKER_WIN if res.x_size_at_transition >= params.x_target else BREAKER_WIN

    while max_rounds is None or rnd < max_rounds:
        rnd += 1
        claimed_this_round = 0
        if breaker_first:
            claimed_this_round += breaker_turn()
        if board.unclaimed_count == 0:
            if maker.in_degree_phase:
                mark_transition()  # the d-degree strategy has nothing left to claim
            break

        was_degree = maker.in_degree_phase
        e = maker.move(board)
        if was_degree and not maker.in_degree_phase:
            mark_transition()
            if goal == "degree":
                break
        if e is not None:
            try:
                e = board.claim(Ownership.MAKER, e)
            except (IllegalMoveError, ValueError) as exc:
                raise StrategyFaultError(maker.name, e, str(exc)) from exc
            moves.append(Move(rnd, Ownership.MAKER, e))
            res.maker_moves += 1
            claimed_this_round += 1
            if maker.in_degree_phase and res.maker_moves > phase1_cap:
                raise AssertionError(f"degree phase exceeded {phase1_cap} Maker moves")
            if goal == "c4":
                cyc = cycle_through(board, e)
                if cyc is not None:
                    res.winner = MAKER_WIN
                    res.winning_c4 = cyc
                    break

        if not breaker_first:
            claimed_this_round += breaker_turn()
        if claimed_this_round == 0:
            break  # both players passed

    res.rounds = moves[-1].round if moves else 0
    strike = getattr(maker, "strike", None)
    if strike is not None:
        res.strike_sound = strike.sound
        if not strike.sound and res.winner != MAKER_WIN:
            res.winner = PRECONDITION_FAILURE
    return Transcript(
        params=params,
        moves=moves,
        result=res,
        maker=maker.name,
        breaker=breaker.name,
        goal=goal,
        tie_break=getattr(maker, "tie_break", "random"),
        breaker_first=breaker_first,
        transition_report=report,
        board=board,
    )


def run_game(
    params: GameParams,
    maker: str = "maker:c4",
    breaker: str = "breaker:random",
    *,
    tie_break: str = "random",
    breaker_first: bool = False,
    goal: str | None = None,
    analyze: bool = False,
) -> Transcript:
    """Build strategies from their names, seed them from ``params.seed`` and play."""
    from .strategies import make_breaker, make_maker, rng_streams

    mrng, brng = rng_streams(params.seed)
    m = make_maker(maker, params, mrng, tie_break)
    b = make_breaker(breaker, params, brng)
    hook = None
    if analyze:
        from .analysis import lemma_report

        def _report(board, maker_moves):
            return lemma_report(board, params, maker_moves, canonical=True).to_dict()

        hook = _report
    return play_game(params, m, b, goal=goal, breaker_first=breaker_first, on_transition=hook)
