"""Property suites shared by ``posc4 verify`` and the test-suite.

Every suite returns a :class:`SuiteResult`; ``hard_failures`` counts
violations of exact claims, ``notes`` carries diagnostics that are
reported but never fail a run.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .analysis import theorem2_check
from .engine import run_game
from .graph_core import BoardState, Ownership, edge_endpoints, new_board, num_edges
from .params import GameParams
from .threat_index import (
    completes_c4,
    contains_c4,
    covered_threat_count,
    threat_count_fast,
    threat_tables,
    threats_of_oracle,
)

SUITES = ("symmetry", "lemma26", "oracle", "lemma27", "theorem2")
BREAKER_NAMES = ("breaker:random", "breaker:deactivator", "breaker:degree-attack")


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    hard_failures: int = 0
    failures: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.hard_failures == 0

    def fail(self, detail) -> None:
        self.hard_failures += 1
        if len(self.failures) < 10:
            self.failures.append(detail)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        line = f"{status} {self.name}: {self.checked} checks, {self.hard_failures} violations"
        for k, v in self.notes.items():
            line += f"\n    {k}: {v}"
        for f in self.failures:
            line += f"\n    violation: {f}"
        return line


# -- board generators ------------------------------------------------------


def random_board(n: int, rng: np.random.Generator, p_maker: float | None = None,
                 p_breaker: float | None = None) -> BoardState:
    """Board with every edge independently Maker's, Breaker's or free."""
    pm = rng.uniform(0.05, 0.45) if p_maker is None else p_maker
    pb = rng.uniform(0.0, 0.45) if p_breaker is None else p_breaker
    owners = rng.choice(3, size=num_edges(n), p=[1 - pm - pb, pm, pb])
    board = new_board(n)
    for eid in np.flatnonzero(owners).tolist():
        board.claim(Ownership(int(owners[eid])), edge_endpoints(eid, n))
    return board


def c4_free_board(n: int, rng: np.random.Generator, target: int | None = None,
                  p_breaker: float = 0.2) -> BoardState:
    """Random C4-free Maker graph grown by rejecting C4-closing edges.

    Leftover free edges are handed to Breaker with probability ``p_breaker``.
    """
    board = new_board(n)
    target = int(rng.integers(1, 2 * n)) if target is None else target
    for eid in rng.permutation(num_edges(n)).tolist():
        if board.maker_edge_count >= target:
            break
        e = edge_endpoints(eid, n)
        if not completes_c4(board, e):
            board.claim(Ownership.MAKER, e)
    for eid in np.flatnonzero(board.owner == Ownership.UNCLAIMED).tolist():
        if rng.random() < p_breaker:
            board.claim(Ownership.BREAKER, edge_endpoints(eid, n))
    return board


def brute_force_c4(board: BoardState) -> bool:
    """Exhaustive scan of 4-vertex subsets for a Maker 4-cycle."""
    def m(a, b):
        return board.owner_of(a, b) == Ownership.MAKER

    for a, b, c, d in itertools.combinations(range(board.n), 4):
        for w, x, y, z in ((a, b, c, d), (a, b, d, c), (a, c, b, d)):
            if m(w, x) and m(x, y) and m(y, z) and m(z, w):
                return True
    return False


# -- suites ----------------------------------------------------------------


def verify_oracle(n: int | None = None, reps: int = 500, seed: int = 0) -> SuiteResult:
    """Closed-form and dense threat counts agree with literal enumeration."""
    res = SuiteResult("oracle")
    rng = np.random.default_rng(seed)
    for _ in range(reps):
        size = int(rng.integers(6, 25)) if n is None else n
        board = random_board(size, rng)
        total, covered = threat_tables(board)
        for eid in range(num_edges(size)):
            e = edge_endpoints(eid, size)
            T = threats_of_oracle(board, e)
            cov = sum(1 for b in T if board.owner_of(*b) == Ownership.BREAKER)
            got = (threat_count_fast(board, e), covered_threat_count(board, e), int(total[eid]), int(covered[eid]))
            res.checked += 1
            if got != (len(T), cov, len(T), cov):
                res.fail({"n": size, "edge": tuple(e), "oracle": (len(T), cov), "fast": got})
    return res


def verify_symmetry(n: int = 12, reps: int = 100, seed: int = 0) -> SuiteResult:
    """e ∈ T_a ⇔ a ∈ T_e over all edge pairs, and T_e = {a : e ∈ T_a}."""
    res = SuiteResult("symmetry")
    rng = np.random.default_rng(seed)
    m = num_edges(n)
    edges = [edge_endpoints(i, n) for i in range(m)]
    for _ in range(reps):
        board = random_board(n, rng)
        T = [threats_of_oracle(board, e) for e in edges]
        for i in range(m):
            for j in range(m):
                res.checked += 1
                if (edges[j] in T[i]) != (edges[i] in T[j]):
                    res.fail({"a": tuple(edges[i]), "e": tuple(edges[j])})
            inverse = {edges[j] for j in range(m) if edges[i] in T[j]}
            if inverse != T[i]:
                res.fail({"edge": tuple(edges[i]), "kind": "inverse set"})
    return res


def verify_lemma26(n: int = 16, reps: int = 200, seed: int = 0) -> SuiteResult:
    """Equal-degree edges outside M on C4-free boards have |T_e| ∈ {d²-1, d²}.

    Maker edges are not covered by the claim; how often they fall outside
    the set is recorded in ``notes``.
    """
    res = SuiteResult("lemma26")
    rng = np.random.default_rng(seed)
    in_m_total = in_m_outside = 0
    for _ in range(reps):
        size = n if n <= 8 else int(rng.integers(8, n + 1))
        board = c4_free_board(size, rng)
        assert not contains_c4(board)
        deg, nm = board.maker_deg, board.maker_adj
        for eid in range(num_edges(size)):
            u, v = edge_endpoints(eid, size)
            d = deg[u]
            if d == 0 or deg[v] != d:
                continue
            t = threat_count_fast(board, (u, v))
            if board.owner[eid] == Ownership.MAKER:
                in_m_total += 1
                in_m_outside += t not in (d * d - 1, d * d)
                continue
            res.checked += 1
            meets = bool(nm[u] & nm[v])
            if t not in (d * d - 1, d * d) or (t == d * d - 1) != meets:
                res.fail({"n": size, "edge": (u, v), "d": d, "T": t, "intersect": meets})
    res.notes["maker_edges_checked"] = in_m_total
    res.notes["maker_edges_outside_{d²-1,d²}"] = in_m_outside
    return res


def _games(n: int, c: float, reps: int, seed: int, maker: str, **kw):
    for breaker in BREAKER_NAMES:
        for r in range(reps):
            params = GameParams.from_c(n, c, seed=seed + r, **kw)
            yield breaker, run_game(params, maker, breaker, analyze=True)


def verify_theorem2(n: int = 100, c: float = 0.05, reps: int = 20, seed: int = 0, **kw) -> SuiteResult:
    """d-degree Maker reaches ceil(βn) capped vertices within the move bound."""
    res = SuiteResult("theorem2")
    for breaker, tr in _games(n, c, reps, seed, "maker:ddegree", **kw):
        out = theorem2_check(tr)
        res.checked += 1
        if not out.passed:
            res.fail({"breaker": breaker, "seed": tr.params.seed, "x": out.x_size, "moves": out.maker_moves,
                      "histogram": out.degree_histogram})
    return res


def verify_lemma27(n: int = 100, c: float = 0.05, reps: int = 20, seed: int = 0, **kw) -> SuiteResult:
    """Snapshot inequalities at the transition; (v) and (vi) are diagnostics."""
    res = SuiteResult("lemma27")
    tally = {k: 0 for k in ("i", "ii", "iii", "iv", "v", "vi")}
    margins = {"v": [], "vi": []}
    games = 0
    for breaker, tr in _games(n, c, reps, seed, "maker:ddegree", **kw):
        games += 1
        checks = tr.transition_report["checks"]
        for k, chk in checks.items():
            tally[k] += chk["passed"]
        for k in ("v", "vi"):
            margins[k].append(checks[k]["lhs"] - checks[k]["rhs"])
        for k in ("i", "ii", "iii", "iv"):
            res.checked += 1
            if not checks[k]["passed"]:
                res.fail({"breaker": breaker, "seed": tr.params.seed, "part": k, **checks[k]})
    res.notes["pass_counts"] = {k: f"{v}/{games}" for k, v in tally.items()}
    res.notes["fraction_D_a_nonempty"] = tally["vi"] / games if games else float("nan")
    res.notes["min_margin_v"] = min(margins["v"]) if games else None
    res.notes["min_margin_vi"] = min(margins["vi"]) if games else None
    return res


def run_suite(name: str, **kw) -> SuiteResult:
    fn = {
        "symmetry": verify_symmetry,
        "lemma26": verify_lemma26,
        "oracle": verify_oracle,
        "lemma27": verify_lemma27,
        "theorem2": verify_theorem2,
    }[name]
    return fn(**kw)
