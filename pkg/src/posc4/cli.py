"""Command-line front end: ``posc4 play | sweep | verify``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from .engine import MAKER_WIN, run_game, validate_params
from .errors import InvalidParameterError
from .params import C4_ALPHA, GameParams
from .verify import SUITES, run_suite

EXIT_MAKER, EXIT_BREAKER, EXIT_ERROR = 0, 1, 2

SWEEP_FIELDS = [
    "n", "c", "q", "seed", "breaker", "winner", "rounds", "maker_moves",
    "x_size_at_transition", "d_a_size_at_transition",
    "lemma_i", "lemma_ii", "lemma_iii", "lemma_iv", "lemma_v", "lemma_vi",
]

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3


def fnv1a64(text: str) -> int:
    h = FNV_OFFSET
    for byte in text.encode("utf-8"):
        h ^= byte
        h = (h * FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return h


def cell_seed(base_seed: int, n: int, c, q, breaker: str, rep: int) -> int:
    key = f"n={n}|c={c!r}|q={q!r}|breaker={breaker}|rep={rep}"
    return (base_seed ^ fnv1a64(key)) & 0xFFFFFFFFFFFFFFFF


def _params(n, c, q, args, seed) -> GameParams:
    kw = dict(delta=args.delta, beta=args.beta, alpha=args.alpha, seed=seed)
    if q is not None:
        return GameParams.from_q(n, q, **kw)
    if c is None:
        raise InvalidParameterError("one of --c or --q is required")
    return GameParams.from_c(n, c, **kw)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--delta", type=float, default=1.1)
    p.add_argument("--beta", type=float, default=0.7)
    p.add_argument("--alpha", type=float, default=C4_ALPHA)
    p.add_argument("--maker", default="maker:c4")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--force", action="store_true", help="run even if the parameters are outside the valid regime")
    p.add_argument("--tie-break", choices=["lexico", "random"], default="random")
    p.add_argument("--breaker-first", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="posc4", description="Biased Maker-Breaker C4 game on K_n")
    sub = parser.add_subparsers(dest="cmd", required=True)

    play = sub.add_parser("play", help="run one game")
    play.add_argument("--n", type=int, required=True)
    play.add_argument("--c", type=float)
    play.add_argument("--q", type=int)
    play.add_argument("--breaker", default="breaker:random")
    play.add_argument("--format", choices=["text", "json"], default="text")
    _common(play)

    sweep = sub.add_parser("sweep", help="grid of games, one row per game")
    sweep.add_argument("--n", type=int, nargs="+", required=True)
    sweep.add_argument("--c", type=float, nargs="+")
    sweep.add_argument("--q", type=int, nargs="+")
    sweep.add_argument("--breaker", nargs="+", default=["breaker:random"])
    sweep.add_argument("--reps", type=int, default=1)
    sweep.add_argument("--jobs", type=int, default=int(os.environ.get("POSC4_JOBS", "1")))
    sweep.add_argument("--format", choices=["csv", "json"], default="csv")
    sweep.add_argument("--sort", action="store_true", help="sort rows by (n, c, q, breaker, seed)")
    _common(sweep)

    verify = sub.add_parser("verify", help="run a property suite")
    verify.add_argument("suite", choices=SUITES)
    verify.add_argument("--n", type=int)
    verify.add_argument("--reps", type=int)
    verify.add_argument("--c", type=float, default=0.05)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--delta", type=float, default=1.1)
    verify.add_argument("--beta", type=float, default=0.7)
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_play(args) -> int:
    try:
        params = _params(args.n, args.c, args.q, args, args.seed)
    except InvalidParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    violations = validate_params(params)
    if violations and not args.force:
        print("error: invalid parameters", file=sys.stderr)
        for v in violations:
            print(f"  {v}", file=sys.stderr)
        return EXIT_ERROR
    try:
        tr = run_game(params, args.maker, args.breaker, tie_break=args.tie_break,
                      breaker_first=args.breaker_first, analyze=True)
    except (InvalidParameterError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    r = tr.result
    if args.format == "json":
        _emit(tr.to_json() + "\n", args.out)
    else:
        lines = [
            f"n={params.n} q={params.q} c={params.c:g} δ={params.delta:g} β={params.beta:g} seed={params.seed}",
            f"{tr.maker} vs {tr.breaker}: winner={r.winner} rounds={r.rounds} maker_moves={r.maker_moves}",
        ]
        if r.winning_c4:
            lines.append(f"winning C4: {'-'.join(map(str, r.winning_c4))}")
        if r.phase_transition_round is not None:
            lines.append(f"transition: round {r.phase_transition_round}, |X|={r.x_size_at_transition}, "
                         f"|D_a|={r.d_a_size_at_transition}")
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_MAKER if r.winner == MAKER_WIN else EXIT_BREAKER


def _sweep_cell(job: dict) -> dict:
    row = {k: "" for k in SWEEP_FIELDS}
    row.update(n=job["n"], c="" if job["c"] is None else job["c"], seed=job["seed"], breaker=job["breaker"])
    try:
        params = GameParams.from_q(job["n"], job["q"], **job["kw"]) if job["q"] is not None \
            else GameParams.from_c(job["n"], job["c"], **job["kw"])
        row["q"] = params.q
        if validate_params(params) and not job["force"]:
            row["winner"] = "skipped"
            return row
        tr = run_game(params, job["maker"], job["breaker"], tie_break=job["tie_break"],
                      breaker_first=job["breaker_first"], analyze=True)
    except Exception as exc:  # recorded per row, never aborts the sweep
        row["winner"] = f"error: {exc}"
        return row
    r = tr.result
    row.update(winner=r.winner, rounds=r.rounds, maker_moves=r.maker_moves,
               x_size_at_transition="" if r.x_size_at_transition is None else r.x_size_at_transition,
               d_a_size_at_transition="" if r.d_a_size_at_transition is None else r.d_a_size_at_transition)
    if tr.transition_report:
        for k, chk in tr.transition_report["checks"].items():
            row[f"lemma_{k}"] = int(chk["passed"])
    return row


def sweep_jobs(args) -> list[dict]:
    if (args.c is None) == (args.q is None):
        raise InvalidParameterError("sweep needs exactly one of --c or --q")
    biases = [(c, None) for c in args.c] if args.c is not None else [(None, q) for q in args.q]
    jobs = []
    for n in args.n:
        for c, q in biases:
            for breaker in args.breaker:
                for rep in range(args.reps):
                    jobs.append(dict(
                        n=n, c=c, q=q, breaker=breaker, maker=args.maker,
                        seed=cell_seed(args.seed, n, c, q, breaker, rep),
                        kw=dict(delta=args.delta, beta=args.beta, alpha=args.alpha,
                                seed=cell_seed(args.seed, n, c, q, breaker, rep)),
                        force=args.force, tie_break=args.tie_break, breaker_first=args.breaker_first,
                    ))
    return jobs


def _sort_key(row):
    return (row["n"], str(row["c"]), str(row["q"]), row["breaker"], row["seed"])


def format_rows(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return "".join(json.dumps(r, separators=(",", ":")) + "\n" for r in rows)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SWEEP_FIELDS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def cmd_sweep(args) -> int:
    try:
        jobs = sweep_jobs(args)
    except InvalidParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_cell, jobs))
    else:
        rows = [_sweep_cell(j) for j in jobs]
    if args.sort:
        rows.sort(key=_sort_key)
    _emit(format_rows(rows, args.format), args.out)
    return 0


_VERIFY_DEFAULTS = {
    "symmetry": {"n": 12, "reps": 100},
    "lemma26": {"n": 16, "reps": 200},
    "oracle": {"n": 20, "reps": 500},
    "lemma27": {"n": 100, "reps": 20},
    "theorem2": {"n": 100, "reps": 20},
}


def cmd_verify(args) -> int:
    kw = dict(_VERIFY_DEFAULTS[args.suite])
    if args.n is not None:
        kw["n"] = args.n
    if args.reps is not None:
        kw["reps"] = args.reps
    kw["seed"] = args.seed
    if args.suite in ("lemma27", "theorem2"):
        kw.update(c=args.c, delta=args.delta, beta=args.beta)
    res = run_suite(args.suite, **kw)
    print(res.summary())
    return 0 if res.passed else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return {"play": cmd_play, "sweep": cmd_sweep, "verify": cmd_verify}[args.cmd](args)


if __name__ == "__main__":
    sys.exit(main())
