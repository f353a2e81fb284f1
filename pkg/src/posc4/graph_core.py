"""Board representation for Maker-Breaker games on the edges of K_n.

Edges are indexed in row-major pair order: (0,1), (0,2), ..., (0,n-1),
(1,2), ... which is the same order ``numpy.triu_indices(n, 1)`` produces.
The owner array is one byte per edge.  Maker and Breaker neighbourhoods are
kept as Python ints used as bitsets, so intersections and popcounts run at
word speed.
"""

from __future__ import annotations

import math
from functools import lru_cache
from enum import IntEnum
from typing import Iterator, NamedTuple

import numpy as np

from .errors import IllegalMoveError, InvalidEdgeError, InvalidParameterError

MIN_N = 4


class Ownership(IntEnum):
    UNCLAIMED = 0
    MAKER = 1
    BREAKER = 2


class Edge(NamedTuple):
    u: int
    v: int

    @classmethod
    def of(cls, u: int, v: int) -> "Edge":
        return cls(u, v) if u < v else cls(v, u)


def num_edges(n: int) -> int:
    return n * (n - 1) // 2


def edge_id(u: int, v: int, n: int) -> int:
    """Canonical linear index of the edge {u, v} on K_n."""
    if u == v or not (0 <= u < n and 0 <= v < n):
        raise InvalidEdgeError(f"invalid edge ({u}, {v}) for n={n}")
    if u > v:
        u, v = v, u
    return u * n - u * (u + 1) // 2 + (v - u - 1)


def edge_endpoints(eid: int, n: int) -> Edge:
    """Inverse of :func:`edge_id`."""
    m = num_edges(n)
    if not 0 <= eid < m:
        raise InvalidEdgeError(f"edge id {eid} out of range [0, {m}) for n={n}")
    # largest u with row offset <= eid
    disc = (2 * n - 1) ** 2 - 8 * eid
    u = (2 * n - 1 - math.isqrt(disc)) // 2
    while u > 0 and u * n - u * (u + 1) // 2 > eid:
        u -= 1
    while (u + 1) * n - (u + 1) * (u + 2) // 2 <= eid:
        u += 1
    v = eid - (u * n - u * (u + 1) // 2) + u + 1
    return Edge(u, v)


def edge_ids(us: np.ndarray, vs: np.ndarray, n: int) -> np.ndarray:
    """Vectorised :func:`edge_id` for arrays with ``us < vs``."""
    us = np.asarray(us, dtype=np.int64)
    vs = np.asarray(vs, dtype=np.int64)
    return us * n - us * (us + 1) // 2 + (vs - us - 1)


@lru_cache(maxsize=4)
def triu(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Endpoint arrays of all edges, indexed by edge id (read-only)."""
    iu, iv = np.triu_indices(n, 1)
    iu.setflags(write=False)
    iv.setflags(write=False)
    return iu, iv


def iter_bits(mask: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def nth_bit(mask: int, k: int) -> int:
    """Index of the k-th (0-based) set bit of ``mask``."""
    for i, b in enumerate(iter_bits(mask)):
        if i == k:
            return b
    raise IndexError(k)


def mask_to_array(mask: int, n: int) -> np.ndarray:
    raw = np.frombuffer(mask.to_bytes((n + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n].astype(bool)


class BoardState:
    """Ownership of every edge of K_n plus incrementally kept adjacency.

    Attributes
    ----------
    owner : uint8 array of length C(n, 2), values from :class:`Ownership`
    maker_adj, breaker_adj : list of int bitsets, one per vertex
    maker_deg, breaker_deg : list of int
    maker_edges, breaker_edges : claimed edges in claim order
    version : incremented on every claim; used to key derived caches
    """

    def __init__(self, n: int):
        if n < MIN_N:
            raise InvalidParameterError(f"n must be >= {MIN_N}, got {n}")
        self.n = n
        self.owner = np.zeros(num_edges(n), dtype=np.uint8)
        self.maker_adj = [0] * n
        self.breaker_adj = [0] * n
        self.maker_deg = [0] * n
        self.breaker_deg = [0] * n
        self.maker_edges: list[Edge] = []
        self.breaker_edges: list[Edge] = []
        self.version = 0
        self._cache: dict = {}

    @property
    def maker_edge_count(self) -> int:
        return len(self.maker_edges)

    @property
    def breaker_edge_count(self) -> int:
        return len(self.breaker_edges)

    @property
    def unclaimed_count(self) -> int:
        return len(self.owner) - len(self.maker_edges) - len(self.breaker_edges)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def owner_of(self, u: int, v: int) -> Ownership:
        return Ownership(int(self.owner[edge_id(u, v, self.n)]))

    def is_unclaimed(self, u: int, v: int) -> bool:
        return not ((self.maker_adj[u] | self.breaker_adj[u]) >> v) & 1

    def claimed_mask(self, v: int) -> int:
        return self.maker_adj[v] | self.breaker_adj[v]

    def maker_neighbors(self, v: int) -> set[int]:
        return set(iter_bits(self.maker_adj[v]))

    def claim(self, player: Ownership, e: tuple[int, int]) -> Edge:
        u, v = int(e[0]), int(e[1])
        eid = edge_id(u, v, self.n)
        prior = self.owner[eid]
        if prior != Ownership.UNCLAIMED:
            raise IllegalMoveError(Edge.of(u, v), Ownership(int(prior)))
        if player == Ownership.MAKER:
            adj, deg, log = self.maker_adj, self.maker_deg, self.maker_edges
        elif player == Ownership.BREAKER:
            adj, deg, log = self.breaker_adj, self.breaker_deg, self.breaker_edges
        else:
            raise InvalidParameterError(f"cannot claim for {player!r}")
        self.owner[eid] = player
        adj[u] |= 1 << v
        adj[v] |= 1 << u
        deg[u] += 1
        deg[v] += 1
        edge = Edge.of(u, v)
        log.append(edge)
        self.version += 1
        return edge

    def copy(self) -> "BoardState":
        other = BoardState.__new__(BoardState)
        other.n = self.n
        other.owner = self.owner.copy()
        other.maker_adj = list(self.maker_adj)
        other.breaker_adj = list(self.breaker_adj)
        other.maker_deg = list(self.maker_deg)
        other.breaker_deg = list(self.breaker_deg)
        other.maker_edges = list(self.maker_edges)
        other.breaker_edges = list(self.breaker_edges)
        other.version = self.version
        other._cache = {}
        return other

    def cached(self, key, compute):
        """Memoise ``compute()`` until the next claim."""
        if self._cache.get("_version") != self.version:
            self._cache = {"_version": self.version}
        if key not in self._cache:
            self._cache[key] = compute()
        return self._cache[key]

    def adjacency_matrix(self, player: Ownership) -> np.ndarray:
        """Dense 0/1 float adjacency of one player's graph."""

        def build():
            mat = np.zeros((self.n, self.n), dtype=np.float64)
            iu, iv = triu(self.n)
            sel = self.owner == player
            mat[iu[sel], iv[sel]] = 1.0
            mat[iv[sel], iu[sel]] = 1.0
            return mat

        return self.cached(("adj", int(player)), build)

    def audit(self) -> None:
        """Recompute adjacency and degrees from ``owner`` and compare.

        Raises AssertionError on the first inconsistency.
        """
        n = self.n
        madj = [0] * n
        badj = [0] * n
        iu, iv = triu(n)
        for player, adj in ((Ownership.MAKER, madj), (Ownership.BREAKER, badj)):
            sel = np.flatnonzero(self.owner == player)
            for u, v in zip(iu[sel].tolist(), iv[sel].tolist()):
                adj[u] |= 1 << v
                adj[v] |= 1 << u
        assert madj == self.maker_adj, "maker adjacency out of sync with owner"
        assert badj == self.breaker_adj, "breaker adjacency out of sync with owner"
        assert self.maker_deg == [m.bit_count() for m in madj], "maker degrees stale"
        assert self.breaker_deg == [m.bit_count() for m in badj], "breaker degrees stale"
        assert sum(self.maker_deg) == 2 * self.maker_edge_count
        assert sum(self.breaker_deg) == 2 * self.breaker_edge_count
        assert int((self.owner == Ownership.MAKER).sum()) == self.maker_edge_count
        assert int((self.owner == Ownership.BREAKER).sum()) == self.breaker_edge_count


def new_board(n: int) -> BoardState:
    return BoardState(n)
