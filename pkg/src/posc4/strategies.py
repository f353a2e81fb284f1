"""Maker and Breaker move selection.

Strategies are small stateful objects (phase + RNG stream) wrapped around
pure move functions.  Makers expose ``move(board) -> Edge | None`` and an
``in_degree_phase`` flag the referee watches for the phase transition.
Breakers expose ``move(board) -> list[Edge]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ExhaustedBoardError, InvalidParameterError
from .graph_core import (
    BoardState,
    Edge,
    Ownership,
    edge_endpoints,
    edge_id,
    iter_bits,
    nth_bit,
)
from .params import GameParams
from .threat_index import C4Watch, dangerous_partition, threat_tables

TIE_BREAKS = ("random", "lexico")
REJECTION_TRIES = 64


# -- Maker: d-degree phase -------------------------------------------------


def _mask_of(indices: np.ndarray, n: int) -> int:
    bits = np.zeros(n, dtype=bool)
    bits[indices] = True
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


def low_vertices(board: BoardState, d_hat: int) -> np.ndarray:
    return np.flatnonzero(np.asarray(board.maker_deg) < d_hat)


def maker_ddegree_move(board: BoardState, d_hat: int, rng=None, tie_break: str = "random") -> Edge | None:
    """An unclaimed edge whose endpoints both have Maker-degree < d_hat.

    Returns None when no such edge exists.  ``tie_break="lexico"`` (or no
    rng) picks the lowest edge id; ``"random"`` is uniform over eligible
    edges, by rejection sampling with an exact enumeration fallback.
    """
    if d_hat < 1:
        raise InvalidParameterError(f"d_hat must be >= 1, got {d_hat}")
    low = low_vertices(board, d_hat)
    if len(low) < 2:
        return None
    low_mask = _mask_of(low, board.n)
    claimed = board.claimed_mask

    if tie_break == "lexico" or rng is None:
        for u in low.tolist():
            m = low_mask & ~claimed(u) & ~((2 << u) - 1)
            if m:
                return Edge(u, (m & -m).bit_length() - 1)
        return None
    if tie_break != "random":
        raise InvalidParameterError(f"unknown tie-break {tie_break!r}")

    k = len(low)
    for _ in range(REJECTION_TRIES):
        i, j = rng.integers(k, size=2).tolist()
        if i != j and board.is_unclaimed(int(low[i]), int(low[j])):
            return Edge.of(int(low[i]), int(low[j]))

    # each eligible edge appears once from each endpoint
    masks = [(u, low_mask & ~claimed(u) & ~(1 << u)) for u in low.tolist()]
    counts = [m.bit_count() for _, m in masks]
    total = sum(counts)
    if total == 0:
        return None
    r = int(rng.integers(total))
    for (u, m), c in zip(masks, counts):
        if r < c:
            return Edge.of(u, nth_bit(m, r))
        r -= c
    raise AssertionError("unreachable")


# -- Maker: C4 strategy ----------------------------------------------------


@dataclass(frozen=True)
class DegreePhase:
    pass


@dataclass(frozen=True)
class StrikePhase:
    edge: Edge
    uncovered: int = 0
    sound: bool = True


@dataclass(frozen=True)
class FinishPhase:
    edge: Edge


MakerPhase = DegreePhase | StrikePhase | FinishPhase


def _unclaimed_threat(board: BoardState, e: Edge) -> Edge | None:
    """Lowest-id unclaimed edge of T_e."""
    e1, e2 = e
    nm = board.maker_adj
    best = None
    for b1 in iter_bits(nm[e1] & ~(1 << e2)):
        m = nm[e2] & ~board.claimed_mask(b1) & ~(1 << b1) & ~(1 << e1)
        for b2 in iter_bits(m):
            eid = edge_id(b1, b2, board.n)
            if best is None or eid < best:
                best = eid
    return None if best is None else edge_endpoints(best, board.n)


def _pick_max(values: np.ndarray, candidates: np.ndarray) -> int:
    """Candidate with the largest value, lowest edge id on ties."""
    vals = values[candidates]
    return int(candidates[np.flatnonzero(vals == vals.max())[0]])


def _strike(board: BoardState, params: GameParams) -> tuple[Edge, StrikePhase]:
    part = dangerous_partition(board, params)
    total, covered = threat_tables(board)
    uncovered = total - covered
    # D_a may contain Maker's own edges; only free ones can be claimed
    active = part.D_a[board.owner[part.D_a] == Ownership.UNCLAIMED]
    if len(active):
        eid = _pick_max(uncovered, active)
        e = edge_endpoints(eid, board.n)
        return e, StrikePhase(e, int(uncovered[eid]), True)
    # no active dangerous edge: best available threat edge, flagged unsound
    free = np.flatnonzero(board.owner == Ownership.UNCLAIMED)
    eid = _pick_max(uncovered, free)
    e = edge_endpoints(eid, board.n)
    return e, StrikePhase(e, int(uncovered[eid]), False)


def maker_c4_move(
    board: BoardState,
    phase: MakerPhase,
    params: GameParams,
    rng=None,
    tie_break: str = "random",
    watch: C4Watch | None = None,
) -> tuple[Edge, MakerPhase]:
    """One move of Maker's C4 strategy and the phase after it.

    A C4-closing edge is always taken first.  Otherwise the d-degree
    strategy runs until it stops, then Maker claims an active dangerous
    edge with the most threats not owned by Breaker, and then one of its
    still-unclaimed threats.
    """
    if board.unclaimed_count == 0:
        raise ExhaustedBoardError("no unclaimed edge left")
    watch = watch if watch is not None else C4Watch()
    win = watch.best(board)
    if win is not None:
        return edge_endpoints(win, board.n), phase

    if isinstance(phase, DegreePhase):
        e = maker_ddegree_move(board, params.d_hat, rng, tie_break)
        if e is not None:
            return e, phase
        return _strike(board, params)
    if isinstance(phase, StrikePhase):
        b = _unclaimed_threat(board, phase.edge)
        if b is not None:
            return b, FinishPhase(b)
    return _strike(board, params)


class DegreeMaker:
    """Plain d-degree strategy; stops (returns None) when no edge qualifies."""

    name = "maker:ddegree"

    def __init__(self, params: GameParams, rng=None, tie_break: str = "random"):
        self.params = params
        self.rng = rng
        self.tie_break = tie_break
        self.in_degree_phase = True

    def move(self, board: BoardState) -> Edge | None:
        if not self.in_degree_phase:
            return None
        e = maker_ddegree_move(board, self.params.d_hat, self.rng, self.tie_break)
        if e is None:
            self.in_degree_phase = False
        return e


class C4Maker:
    name = "maker:c4"

    def __init__(self, params: GameParams, rng=None, tie_break: str = "random"):
        self.params = params
        self.rng = rng
        self.tie_break = tie_break
        self.phase: MakerPhase = DegreePhase()
        self.watch = C4Watch()
        self.strike: StrikePhase | None = None

    @property
    def in_degree_phase(self) -> bool:
        return isinstance(self.phase, DegreePhase)

    def move(self, board: BoardState) -> Edge:
        e, phase = maker_c4_move(board, self.phase, self.params, self.rng, self.tie_break, self.watch)
        if isinstance(phase, StrikePhase) and self.strike is None:
            self.strike = phase
        self.phase = phase
        return e


# -- Breakers --------------------------------------------------------------


def _lowest_unclaimed(board: BoardState, k: int, exclude=()) -> list[int]:
    free = np.flatnonzero(board.owner == Ownership.UNCLAIMED)
    if exclude:
        free = free[~np.isin(free, list(exclude))]
    return free[:k].tolist()


def breaker_random(board: BoardState, q: int, rng) -> list[Edge]:
    """min(q, #unclaimed) distinct unclaimed edges, uniformly at random."""
    k = min(q, board.unclaimed_count)
    m = len(board.owner)
    if k == 0:
        return []
    if 2 * board.unclaimed_count >= m:
        picked: list[int] = []
        seen = set()
        while len(picked) < k:
            eid = int(rng.integers(m))
            if board.owner[eid] == Ownership.UNCLAIMED and eid not in seen:
                seen.add(eid)
                picked.append(eid)
    else:
        free = np.flatnonzero(board.owner == Ownership.UNCLAIMED)
        picked = rng.choice(free, size=k, replace=False).tolist()
    return [edge_endpoints(e, board.n) for e in picked]


def _top_by_value(values: np.ndarray, candidates: np.ndarray, k: int) -> list[int]:
    """k candidates by value descending, edge id ascending on ties."""
    if k <= 0 or len(candidates) == 0:
        return []
    vals = values[candidates]
    if k >= len(candidates):
        order = np.lexsort((candidates, -vals))
        return candidates[order].tolist()
    kth = np.partition(vals, len(vals) - k)[len(vals) - k]
    above = candidates[vals > kth]
    above = above[np.lexsort((above, -values[above]))].tolist()
    tied = candidates[vals == kth][: k - len(above)].tolist()
    return above + tied


def breaker_deactivator(board: BoardState, q: int, params: GameParams | None = None) -> list[Edge]:
    """Greedy deactivation: unclaimed edges with the most threats first.

    Budget left once every unclaimed edge with a nonzero threat count is
    taken goes to the unclaimed threats of the non-Breaker edge with the
    most threats Breaker does not hold, then to the lowest edge ids.
    """
    k = min(q, board.unclaimed_count)
    total, covered = threat_tables(board)
    free = np.flatnonzero(board.owner == Ownership.UNCLAIMED)
    threatening = free[total[free] > 0]
    picked = _top_by_value(total, threatening, k)
    if len(picked) < k:
        uncovered = total - covered
        open_edges = np.flatnonzero(board.owner != Ownership.BREAKER)
        if len(open_edges) and uncovered[open_edges].max() > 0:
            focus = edge_endpoints(_pick_max(uncovered, open_edges), board.n)
            e1, e2 = focus
            nm = board.maker_adj
            extra = set()
            for b1 in iter_bits(nm[e1] & ~(1 << e2)):
                for b2 in iter_bits(nm[e2] & ~board.claimed_mask(b1) & ~(1 << b1) & ~(1 << e1)):
                    extra.add(edge_id(b1, b2, board.n))
            picked += sorted(extra - set(picked))[: k - len(picked)]
    if len(picked) < k:
        picked += _lowest_unclaimed(board, k - len(picked), exclude=set(picked))
    return [edge_endpoints(e, board.n) for e in picked]


def breaker_degree_attack(board: BoardState, q: int, params: GameParams) -> list[Edge]:
    """Claim edges between vertices still below the Maker degree cap.

    Lowest edge ids first; leftover budget takes any unclaimed edge.
    """
    k = min(q, board.unclaimed_count)
    low = low_vertices(board, params.d_hat)
    low_mask = _mask_of(low, board.n)
    picked: list[int] = []
    for u in low.tolist():
        if len(picked) >= k:
            break
        m = low_mask & ~board.claimed_mask(u) & ~((2 << u) - 1)
        for v in iter_bits(m):
            picked.append(edge_id(u, v, board.n))
            if len(picked) >= k:
                break
    if len(picked) < k:
        picked += _lowest_unclaimed(board, k - len(picked), exclude=set(picked))
    return [edge_endpoints(e, board.n) for e in picked]


class RandomBreaker:
    name = "breaker:random"

    def __init__(self, params: GameParams, rng):
        self.q = params.q
        self.rng = rng

    def move(self, board):
        return breaker_random(board, self.q, self.rng)


class DeactivatorBreaker:
    name = "breaker:deactivator"

    def __init__(self, params: GameParams, rng=None):
        self.params = params

    def move(self, board):
        return breaker_deactivator(board, self.params.q, self.params)


class DegreeAttackBreaker:
    name = "breaker:degree-attack"

    def __init__(self, params: GameParams, rng=None):
        self.params = params

    def move(self, board):
        return breaker_degree_attack(board, self.params.q, self.params)


class PassiveBreaker:
    """Claims nothing; useful as a control."""

    name = "breaker:passive"

    def __init__(self, params: GameParams = None, rng=None):
        pass

    def move(self, board):
        return []


MAKERS = {"c4": C4Maker, "ddegree": DegreeMaker}
BREAKERS = {
    "random": RandomBreaker,
    "deactivator": DeactivatorBreaker,
    "degree-attack": DegreeAttackBreaker,
    "passive": PassiveBreaker,
}


def _strip(name: str, side: str) -> str:
    return name.split(":", 1)[1] if name.startswith(side + ":") else name


def rng_streams(seed: int) -> tuple[np.random.Generator, np.random.Generator]:
    """Independent (maker, breaker) generators derived from one seed."""
    ms, bs = np.random.SeedSequence(seed).spawn(2)
    return np.random.default_rng(ms), np.random.default_rng(bs)


def make_maker(name: str, params: GameParams, rng=None, tie_break: str = "random"):
    key = _strip(name, "maker")
    if key not in MAKERS:
        raise InvalidParameterError(f"unknown maker strategy {name!r}")
    return MAKERS[key](params, rng, tie_break)


def make_breaker(name: str, params: GameParams, rng=None):
    key = _strip(name, "breaker")
    if key not in BREAKERS:
        raise InvalidParameterError(f"unknown breaker strategy {name!r}")
    return BREAKERS[key](params, rng)
