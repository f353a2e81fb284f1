"""One seeded game of the C4 strategy against each Breaker.

Run with ``python3 demos/02_play_a_game.py``.
"""
# %%
from posc4 import GameParams, Ownership
from posc4.engine import Transcript, replay, run_game
from posc4.verify import BREAKER_NAMES

params = GameParams.from_c(200, 0.05, seed=7)
print(f"n={params.n}, q={params.q}, d_hat={params.d_hat}")

# %% Maker wins by completing a 4-cycle; the referee records the cycle.
# Maker draws from its own random stream, so its moves only change once a
# Breaker happens to take an edge Maker would have picked.
for name in BREAKER_NAMES:
    tr = run_game(params, "maker:c4", name)
    r = tr.result
    first = [tuple(m.edge) for m in tr.moves if m.player == Ownership.BREAKER][:3]
    print(f"{name:24s} winner={r.winner} rounds={r.rounds} cycle={r.winning_c4} breaker opens {first}")

# %% Transcripts are plain JSON and replay to the same board.
text = tr.to_json()
back = Transcript.from_json(text)
assert (replay(back).owner == tr.board.owner).all()
print(f"transcript: {len(text)} bytes, {len(back.moves)} moves, replay ok")
