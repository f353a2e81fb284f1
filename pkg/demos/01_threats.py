"""Threat counting on a small hand-built board.

Run with ``python3 demos/01_threats.py``.
"""
# %%
from posc4 import GameParams, Ownership, new_board
from posc4.threat_index import classify, threat_stats, threats_of_oracle

board = new_board(7)
for e in [(0, 2), (0, 3), (0, 4), (1, 5), (1, 6)]:
    board.claim(Ownership.MAKER, e)

# %% Edge {0,1} joins two Maker stars.  Each pair (x, y) with x a Maker
# neighbour of 0 and y one of 1 closes a 4-cycle 0-x-y-1 together with {0,1}.
T = threats_of_oracle(board, (0, 1))
print("threats of {0,1}:", sorted(tuple(t) for t in T))
print("count:", len(T), "= 3 * 2")

# %% Breaker takes two of them; the covered/uncovered split follows.
board.claim(Ownership.BREAKER, (2, 5))
board.claim(Ownership.BREAKER, (3, 6))
print(threat_stats(board, (0, 1), GameParams.from_q(7, 1, delta=1.0)))

# %% With δ = 1 and n = 7 an edge is dangerous once it has at least
# 7^(2/3) - 1 ≈ 2.66 threats.  Four uncovered threats beat q = 1, so {0,1}
# is active; q = 4 would make it indirectly deactivated.
for q in (1, 4):
    print(f"q={q}:", classify(board, (0, 1), GameParams.from_q(7, q, delta=1.0)).name)
