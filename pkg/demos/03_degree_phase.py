"""The d-degree phase and the snapshot taken when it stops.

Run with ``python3 demos/03_degree_phase.py``.
"""
# %%
from posc4 import GameParams
from posc4.analysis import theorem2_check
from posc4.engine import min_valid_n, run_game

c, delta, beta = 0.05, 1.1, 0.7
print("smallest n where the round bound argument applies:", min_valid_n(c, delta, beta))

# %% Play only the degree game: it ends at the first Maker turn with no
# edge whose endpoints both have Maker-degree below d_hat.
params = GameParams.from_c(100, c, delta=delta, beta=beta, seed=1)
tr = run_game(params, "maker:ddegree", "breaker:deactivator", analyze=True)
res = theorem2_check(tr)
print(f"|X| = {res.x_size} (need {res.x_target}), Maker moves {res.maker_moves} (bound {res.move_bound})")

# %% The snapshot report: dangerous edges split into direct, indirect and
# active ones, and the inequalities evaluated on those sizes.
rep = tr.transition_report
print("sizes:", rep["sizes"])
for k, chk in rep["checks"].items():
    print(f"  ({k}) {chk['lhs']:.1f} {chk['relation']} {chk['rhs']:.1f}: {'ok' if chk['passed'] else 'no'}")

# %% (i) fails here: with an integer cap of 6 Maker plays close to n*6/2
# moves, and Breaker's q = 1 reply per move exceeds (cδ/2)n².  At n = 2000
# the same check passes (see README).
