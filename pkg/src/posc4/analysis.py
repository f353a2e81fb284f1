"""Diagnostics evaluated on a frozen board snapshot."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import NotApplicableError
from .graph_core import BoardState
from .params import GameParams
from .threat_index import dangerous_partition


@dataclass(frozen=True)
class Check:
    lhs: float
    rhs: float
    relation: str
    passed: bool

    def to_dict(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "relation": self.relation, "passed": self.passed}


@dataclass(frozen=True)
class LemmaReport:
    """Set sizes at a snapshot; every check is derived from them on demand."""

    snapshot_id: int
    canonical: bool
    n: int
    q: int
    c: float
    delta: float
    beta: float
    maker_moves: int
    B: int
    X: int
    D: int
    D_d: int
    D_i: int
    D_a: int
    undeactivated_outside: int  # |(D \ D_d) \ (D_i ∪ D_a)|

    @property
    def x_target(self) -> int:
        return math.ceil(self.beta * self.n)

    @property
    def breaker_cap(self) -> float:
        return self.c * self.delta / 2.0 * self.n**2

    @property
    def pairs_in_x(self) -> int:
        return math.comb(self.x_target, 2)

    @property
    def checks(self) -> dict[str, Check]:
        factor = 1 - self.c / self.delta**2 - self.n ** (-2.0 / 3.0)
        rhs_iv = self.pairs_in_x - self.breaker_cap
        return {
            "i": Check(self.B, self.breaker_cap, "<=", self.B <= self.breaker_cap),
            "ii": Check(self.D, self.pairs_in_x, ">=", self.D >= self.pairs_in_x),
            "iii": Check(self.undeactivated_outside, 0, "==", self.undeactivated_outside == 0),
            "iv": Check(self.D - self.D_d, rhs_iv, ">=", self.D - self.D_d >= rhs_iv),
            "v": Check(self.B, self.D_i * factor, ">=", self.B >= self.D_i * factor),
            "vi": Check(self.D_a, 0, ">", self.D_a > 0),
        }

    @property
    def theorem2_ok(self) -> bool:
        return self.X >= self.x_target

    def to_dict(self) -> dict:
        return {
            "snapshot_id": self.snapshot_id,
            "canonical": self.canonical,
            "maker_moves": self.maker_moves,
            "sizes": {"B": self.B, "X": self.X, "D": self.D, "D_d": self.D_d, "D_i": self.D_i, "D_a": self.D_a},
            "checks": {k: c.to_dict() for k, c in self.checks.items()},
            "theorem2_ok": self.theorem2_ok,
        }


def lemma_report(board: BoardState, params: GameParams, maker_moves: int | None = None,
                 canonical: bool = False) -> LemmaReport:
    """Evaluate the dangerous-edge inequalities on ``board``.

    ``canonical`` marks a snapshot taken exactly when the d-degree strategy
    stopped; the asymptotic claims only apply there.
    """
    part = dangerous_partition(board, params)
    rest = np.setdiff1d(part.D, part.D_d, assume_unique=True)
    outside = np.setdiff1d(rest, np.union1d(part.D_i, part.D_a), assume_unique=True)
    return LemmaReport(
        snapshot_id=board.version,
        canonical=canonical,
        n=params.n,
        q=params.q,
        c=params.c,
        delta=params.delta,
        beta=params.beta,
        maker_moves=board.maker_edge_count if maker_moves is None else maker_moves,
        B=board.breaker_edge_count,
        X=sum(1 for d in board.maker_deg if d >= params.d_hat),
        D=len(part.D),
        D_d=len(part.D_d),
        D_i=len(part.D_i),
        D_a=len(part.D_a),
        undeactivated_outside=len(outside),
    )


@dataclass(frozen=True)
class DegreeBoundResult:
    passed: bool
    x_size: int
    x_target: int
    maker_moves: int
    move_bound: int
    degree_histogram: dict[int, int] | None = None


def theorem2_check(transcript) -> DegreeBoundResult:
    """Did the d-degree phase end with enough capped vertices, in time?

    Replays the transcript to the phase transition.  The move bound allows
    n moves of slack over (δ/2)·n^(2-α) for the integer degree cap.
    """
    from .engine import replay

    if transcript.result.transition_ply is None:
        raise NotApplicableError("transcript has no phase-transition marker")
    params = transcript.params
    board = replay(transcript, upto=transcript.result.transition_ply)
    x_size = sum(1 for d in board.maker_deg if d >= params.d_hat)
    bound = math.ceil(params.round_bound) + params.n
    moves = board.maker_edge_count
    passed = x_size >= params.x_target and moves <= bound
    hist = None if passed else dict(sorted(Counter(board.maker_deg).items()))
    return DegreeBoundResult(passed, x_size, params.x_target, moves, bound, hist)
