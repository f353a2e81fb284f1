"""A small parameter grid through the CLI entry point.

Run with ``python3 demos/04_sweep.py``; writes nothing to disk.
"""
# %%
import csv
import io
from contextlib import redirect_stdout

from posc4.cli import main

buf = io.StringIO()
with redirect_stdout(buf):
    main(["sweep", "--n", "100", "200", "--c", "0.04", "0.05",
          "--breaker", "breaker:random", "breaker:degree-attack", "--reps", "2", "--seed", "3", "--sort"])
rows = list(csv.DictReader(io.StringIO(buf.getvalue())))

# %% Cells whose parameters fall outside the valid regime are skipped, not run.
for r in rows:
    print(f"n={r['n']:>4} c={r['c']:<5} q={r['q']} {r['breaker']:22s} {r['winner']:8s} rounds={r['rounds']}")

wins = sum(r["winner"] == "maker" for r in rows)
played = sum(r["winner"] not in ("skipped",) and not r["winner"].startswith("error") for r in rows)
print(f"Maker won {wins} of {played} games played")
