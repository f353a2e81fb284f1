"""Threat sets, dangerous-edge classification and C4 detection.

For an edge a = {a1, a2} the threats T_a are the edges {b1, b2} with
b1 a Maker-neighbour of a1 and b2 a Maker-neighbour of a2, excluding a.
Ownership of b plays no role in membership.  ``threats_of_oracle`` is the
literal enumeration; everything else here is checked against it.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from enum import IntEnum
from typing import NamedTuple

import numpy as np

from .graph_core import BoardState, Edge, Ownership, edge_id, iter_bits, triu
from .params import GameParams


class ThreatClass(IntEnum):
    NOT_DANGEROUS = 0
    DIRECTLY_DEACTIVATED = 1
    INDIRECTLY_DEACTIVATED = 2
    ACTIVE = 3


@dataclass(frozen=True)
class ThreatStats:
    edge: Edge
    total: int
    covered: int
    uncovered: int
    cls: ThreatClass


def _check(board: BoardState, a) -> tuple[int, int]:
    u, v = int(a[0]), int(a[1])
    edge_id(u, v, board.n)  # validates
    return u, v


def threats_of_oracle(board: BoardState, a) -> set[Edge]:
    """T_a by literal double enumeration over N_M(a1) x N_M(a2)."""
    a1, a2 = _check(board, a)
    self_edge = Edge.of(a1, a2)
    out = set()
    for b1 in board.maker_neighbors(a1):
        for b2 in board.maker_neighbors(a2):
            if b1 != b2:
                out.add(Edge.of(b1, b2))
    out.discard(self_edge)
    return out


def threat_count_fast(board: BoardState, a) -> int:
    """|T_a| from neighbourhood sizes and their overlap.

    With k common Maker-neighbours the ordered count |A||B| - k double
    counts the C(k, 2) pairs inside the overlap; a itself is a threat only
    when it is a Maker edge.
    """
    u, v = _check(board, a)
    A, B = board.maker_adj[u], board.maker_adj[v]
    k = (A & B).bit_count()
    in_m = (A >> v) & 1
    return A.bit_count() * B.bit_count() - k - k * (k - 1) // 2 - in_m


def covered_threat_count(board: BoardState, a) -> int:
    """|T_a ∩ B|."""
    u, v = _check(board, a)
    A, Bm = board.maker_adj[u], board.maker_adj[v]
    nb = board.breaker_adj
    ordered = sum((nb[x] & Bm).bit_count() for x in iter_bits(A))
    common = A & Bm
    inside = sum((nb[x] & common).bit_count() for x in iter_bits(common)) // 2
    # a itself can only be a threat when a is Maker's, so never Breaker-owned
    return ordered - inside


def uncovered_threat_count(board: BoardState, a) -> int:
    """|T_a \\ B|: threats not owned by Breaker (Maker-owned ones included)."""
    return threat_count_fast(board, a) - covered_threat_count(board, a)


def _classify_values(total, covered, in_breaker, params: GameParams):
    if total < params.danger_threshold:
        return ThreatClass.NOT_DANGEROUS
    if in_breaker:
        return ThreatClass.DIRECTLY_DEACTIVATED
    if total - covered <= params.q:
        return ThreatClass.INDIRECTLY_DEACTIVATED
    return ThreatClass.ACTIVE


def threat_stats(board: BoardState, a, params: GameParams) -> ThreatStats:
    u, v = _check(board, a)
    total = threat_count_fast(board, (u, v))
    covered = covered_threat_count(board, (u, v))
    in_b = bool((board.breaker_adj[u] >> v) & 1)
    return ThreatStats(Edge.of(u, v), total, covered, total - covered,
                       _classify_values(total, covered, in_b, params))


def classify(board: BoardState, a, params: GameParams) -> ThreatClass:
    return threat_stats(board, a, params).cls


# -- dense, all-edges variants -------------------------------------------


def threat_tables(board: BoardState) -> tuple[np.ndarray, np.ndarray]:
    """(|T_e|, |T_e ∩ B|) for every edge id, via matrix products.

    Memoised on the board until its next claim.
    """
    return board.cached("threat_tables", lambda: _threat_tables(board))


def _threat_tables(board: BoardState) -> tuple[np.ndarray, np.ndarray]:
    n = board.n
    iu, iv = triu(n)
    A = board.adjacency_matrix(Ownership.MAKER)
    Bm = board.adjacency_matrix(Ownership.BREAKER)
    deg = np.asarray(board.maker_deg, dtype=np.float64)
    K = (A @ A)[iu, iv]
    total = deg[iu] * deg[iv] - K - K * (K - 1) / 2 - A[iu, iv]
    P = ((A @ Bm) @ A)[iu, iv]
    total = np.rint(total).astype(np.int64)
    covered = np.rint(P).astype(np.int64)
    # Breaker edges inside a common neighbourhood were counted twice
    nb, nm = board.breaker_adj, board.maker_adj
    for eid in np.flatnonzero(K >= 2).tolist():
        common = nm[iu[eid]] & nm[iv[eid]]
        covered[eid] -= sum((nb[x] & common).bit_count() for x in iter_bits(common)) // 2
    return total, covered


class Partition(NamedTuple):
    """Edge-id arrays D, D_d, D_i, D_a plus the per-edge class array."""

    D: np.ndarray
    D_d: np.ndarray
    D_i: np.ndarray
    D_a: np.ndarray
    classes: np.ndarray


def classify_all(board: BoardState, params: GameParams) -> np.ndarray:
    total, covered = threat_tables(board)
    classes = np.zeros(len(total), dtype=np.uint8)
    dangerous = total >= params.danger_threshold
    direct = dangerous & (board.owner == Ownership.BREAKER)
    indirect = dangerous & ~direct & (total - covered <= params.q)
    active = dangerous & ~direct & ~indirect
    classes[direct] = ThreatClass.DIRECTLY_DEACTIVATED
    classes[indirect] = ThreatClass.INDIRECTLY_DEACTIVATED
    classes[active] = ThreatClass.ACTIVE
    return classes


def dangerous_partition(board: BoardState, params: GameParams) -> Partition:
    classes = classify_all(board, params)
    return Partition(
        D=np.flatnonzero(classes != ThreatClass.NOT_DANGEROUS),
        D_d=np.flatnonzero(classes == ThreatClass.DIRECTLY_DEACTIVATED),
        D_i=np.flatnonzero(classes == ThreatClass.INDIRECTLY_DEACTIVATED),
        D_a=np.flatnonzero(classes == ThreatClass.ACTIVE),
        classes=classes,
    )


# -- C4 detection ----------------------------------------------------------


def cycle_through(board: BoardState, e) -> tuple[int, int, int, int] | None:
    """A 4-cycle (u, v, y, x) in M ∪ {e} that uses e, or None."""
    u, v = _check(board, e)
    nm = board.maker_adj
    target = nm[v] & ~(1 << u)
    for x in iter_bits(nm[u] & ~(1 << v)):
        hit = nm[x] & target
        if hit:
            y = (hit & -hit).bit_length() - 1
            return (u, v, y, x)
    return None


def completes_c4(board: BoardState, e) -> bool:
    """True iff Maker has a path of length 3 between the endpoints of e."""
    return cycle_through(board, e) is not None


def find_c4(board: BoardState) -> tuple[int, int, int, int] | None:
    """Some 4-cycle of Maker's graph as a vertex sequence, or None."""
    nm = board.maker_adj
    for u in range(board.n):
        via: dict[int, int] = {}
        for x in iter_bits(nm[u]):
            for y in iter_bits(nm[x] & ~(1 << u)):
                if y in via:
                    return (u, via[y], y, x)
                via[y] = x
    return None


def contains_c4(board: BoardState) -> bool:
    return find_c4(board) is not None


class C4Watch:
    """Incrementally tracks unclaimed edges that would close a Maker C4.

    Every Maker path of length 3 is discovered when its newest edge is
    processed; candidates stay valid while unclaimed because Maker edges
    are never removed.
    """

    def __init__(self):
        self._board_ref = None
        self._cursor = 0
        self._heap: list[int] = []
        self._seen: set[int] = set()

    def _push(self, n: int, x: int, y: int) -> None:
        if x == y:
            return
        eid = edge_id(x, y, n)
        if eid not in self._seen:
            self._seen.add(eid)
            heapq.heappush(self._heap, eid)

    def sync(self, board: BoardState) -> None:
        if self._board_ref is not board:
            self.__init__()
            self._board_ref = board
        nm, n = board.maker_adj, board.n
        for u, v in board.maker_edges[self._cursor:]:
            nu = nm[u] & ~(1 << v)
            nv = nm[v] & ~(1 << u)
            for x in iter_bits(nu):
                for y in iter_bits(nv):
                    self._push(n, x, y)  # x-u-v-y
                for z in iter_bits(nm[x] & ~(1 << u)):
                    self._push(n, v, z)  # v-u-x-z
            for y in iter_bits(nv):
                for z in iter_bits(nm[y] & ~(1 << v)):
                    self._push(n, u, z)  # u-v-y-z
        self._cursor = len(board.maker_edges)

    def best(self, board: BoardState) -> int | None:
        """Lowest edge id among unclaimed C4-closing edges."""
        self.sync(board)
        heap = self._heap
        while heap:
            if board.owner[heap[0]] == Ownership.UNCLAIMED:
                return heap[0]
            heapq.heappop(heap)
        return None
