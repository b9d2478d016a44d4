"""Command line front end.

Subcommands:
  series   exact [q^0]G coefficients for the two-generator one-relator
           family < a, b | a^n b a^-m b^-1 >, plus a growth estimate
  exact    closed-form coefficient expansions (free group, small free
           products, reduced square-lattice counts)
  oracle   brute-force trivial word counts for cross-checking
  sample   run the Metropolis chain (optionally tempered) and dump
           per-block observables as CSV
  analyze  locate the critical fugacity from sample output

Exit codes: 0 success, 2 bad arguments, 3 computation aborted.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import engine, oracle, stats
from .presentation import ParseError, builtin_presentation, parse_presentation
from .sampler import (ObservableSeries, SamplerConfig, TemperingConfig,
                      geometric_ladder, run_chain, run_tempered)
from .qseries import read_coefficients, write_coefficients

CSV_COLUMNS = ("beta", "alpha", "block", "sum_f1", "sum_f2", "sum_len",
               "sum_len2", "count", "accept_conj", "accept_ins",
               "swaps_accepted")

EXACT_FAMILIES = ("kouksov1", "kouksov2", "kouksov3", "free2", "bs11_reduced")


def _parse_ladder(text: str) -> list[float]:
    """Either a comma list of betas or 'start:end:count' for a ladder
    whose rungs cluster geometrically towards end."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError("ladder syntax is start:end:count")
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        return list(geometric_ladder(lo, hi, count))
    betas = [float(x) for x in text.split(",")]
    if any(b2 <= b1 for b1, b2 in zip(betas, betas[1:])):
        raise ValueError("betas must strictly increase")
    return betas


def _open_out(path: str):
    return sys.stdout if path == "-" else open(path, "w")


def _write_blocks(fh, runs: list[ObservableSeries], header: dict) -> None:
    fh.write("# " + json.dumps(header, sort_keys=True) + "\n")
    fh.write(",".join(CSV_COLUMNS) + "\n")
    for obs in runs:
        for b in range(len(obs.sum_f1)):
            row = (obs.beta, obs.alpha, b, obs.sum_f1[b], obs.sum_f2[b],
                   obs.sum_len[b], obs.sum_len2[b], obs.count[b],
                   obs.accept_conj[b], obs.accept_ins[b],
                   obs.swaps_accepted[b])
            fh.write(",".join(repr(x) if isinstance(x, float) else str(x)
                              for x in row) + "\n")


def read_blocks(path: str) -> tuple[dict, list[ObservableSeries]]:
    """Parse a CSV written by the sample subcommand back into per-rung
    observable series."""
    header: dict = {}
    by_rung: dict[tuple[float, float], ObservableSeries] = {}
    with open(path) as fh:
        first = fh.readline()
        if first.startswith("# "):
            header = json.loads(first[2:])
            cols = fh.readline()
        else:
            cols = first
        if cols.strip() != ",".join(CSV_COLUMNS):
            raise ValueError(f"unexpected columns in {path}")
        for line in fh:
            if not line.strip():
                continue
            vals = line.split(",")
            beta, alpha = float(vals[0]), float(vals[1])
            key = (beta, alpha)
            obs = by_rung.get(key)
            if obs is None:
                obs = ObservableSeries(alpha=alpha, beta=beta,
                                       steps_per_block=int(header.get(
                                           "iters", 0)))
                by_rung[key] = obs
            obs.sum_f1.append(float(vals[3]))
            obs.sum_f2.append(float(vals[4]))
            obs.sum_len.append(float(vals[5]))
            obs.sum_len2.append(float(vals[6]))
            obs.count.append(int(vals[7]))
            obs.accept_conj.append(int(vals[8]))
            obs.accept_ins.append(int(vals[9]))
            obs.swaps_accepted.append(int(vals[10]))
    return header, [by_rung[k] for k in sorted(by_rung)]


def _cmd_series(args) -> int:
    if args.group != "bs":
        print(f"series only supports the bs family, not {args.group!r}",
              file=sys.stderr)
        return 2
    spec = engine.BSSpec(n=args.n, m=args.m, n_max=args.terms,
                         trim_threshold=args.trim or None)
    _, _, g = engine.iterate_bs_system(spec)
    ints = g.constant_term()
    out = _open_out(args.output)
    try:
        write_coefficients(out, ints,
                           header=f"bs({args.n},{args.m}) trivial word counts")
    finally:
        if out is not sys.stdout:
            out.close()
    try:
        est = engine.growth_rate_estimate(
            ints, correction_exponent=args.growth_exponent)
        print(json.dumps({"N": args.n, "M": args.m, "terms": len(ints),
                          "mu": est.mu, "lambda": est.lam,
                          "correction_exponent": est.correction_exponent,
                          "amplitude": est.amplitude}), file=sys.stderr)
    except ValueError:
        pass  # too few terms for a growth estimate; coefficients stand alone
    return 0


def _cmd_exact(args) -> int:
    n = args.terms
    if args.family.startswith("kouksov"):
        coeffs = engine.kouksov_series(int(args.family[-1]), n)
    elif args.family == "free2":
        coeffs = engine.free_group_series(2, n)
    elif args.family == "bs11_reduced":
        coeffs = engine.bs11_reduced_series(n)
    else:
        print(f"unknown family {args.family!r}; choose from "
              f"{', '.join(EXACT_FAMILIES)}", file=sys.stderr)
        return 2
    out = _open_out(args.output)
    try:
        write_coefficients(out, coeffs)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def _cmd_oracle(args) -> int:
    params: tuple[int, ...] = ()
    if args.group == "bs":
        params = (args.n, args.m)
    elif args.group == "free":
        params = (args.n,)
    ev = oracle.evaluator_for(args.group, params)
    try:
        counts = oracle.count_trivial_words(ev, args.max_len,
                                            reduced=args.reduced,
                                            max_states=args.max_states)
    except oracle.BudgetExceeded as exc:
        print(f"state budget exceeded: {exc}", file=sys.stderr)
        return 3
    kind = "reduced " if args.reduced else ""
    out = _open_out(args.output)
    try:
        write_coefficients(out, counts,
                           header=f"{args.group} {kind}trivial word counts "
                                  "(exhaustive)")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def _cmd_sample(args) -> int:
    if args.presentation:
        p = parse_presentation(args.presentation)
    elif args.group:
        params: tuple[int, ...] = ()
        if args.group == "bs":
            params = (args.n, args.m)
        p = builtin_presentation(args.group, params)
    else:
        print("one of --group or --presentation is required", file=sys.stderr)
        return 2
    ladder = _parse_ladder(args.ladder)
    common = dict(alpha=args.alpha, p_c=args.pc, seed=args.seed,
                  iterations_per_block=args.iters, num_blocks=args.blocks,
                  theta=args.theta)
    if len(ladder) == 1:
        runs = [run_chain(SamplerConfig(beta=ladder[0], **common), p)]
    else:
        cfg = TemperingConfig(ladder=tuple(ladder),
                              swap_interval=args.swap_interval, **common)
        runs = run_tempered(cfg, p)
    header = {"presentation": p.render(), "alpha": args.alpha,
              "ladder": ladder, "pc": args.pc, "seed": args.seed,
              "iters": args.iters, "blocks": args.blocks,
              "swap_interval": args.swap_interval, "theta": args.theta}
    out = _open_out(args.output)
    try:
        _write_blocks(out, runs, header)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def _cmd_analyze(args) -> int:
    header, runs = read_blocks(args.input)
    points = []
    rows = []
    for obs in runs:
        try:
            est = stats.ratio_estimator(obs)
        except ValueError:
            continue
        if 0 < est.stderr < float("inf"):
            points.append((obs.beta, 1.0 / est.stderr))
            rows.append((obs.beta, est.mean, est.stderr, 1.0 / est.stderr))
    if args.skip:
        points = points[args.skip:]
    if len(points) < args.degree + 2:
        print("not enough usable rungs for the fit", file=sys.stderr)
        return 3
    try:
        result = stats.intercept_extrapolate(points, degree=args.degree)
    except ValueError as exc:
        print(f"extrapolation failed: {exc}", file=sys.stderr)
        return 3
    if args.k:
        result = stats.amenability_report(result, args.k)
    if args.output and args.output != "-":
        with open(args.output, "w") as fh:
            fh.write("beta,mean_len,stderr,recip_stderr\n")
            for row in rows:
                fh.write(",".join(repr(x) for x in row) + "\n")
    summary = {"beta_c": result.beta_c_estimate, "degree": result.fit_degree,
               "residual": result.residual, "uncertainty": result.uncertainty,
               "threshold": result.amenable_threshold,
               "verdict": result.verdict}
    print(json.dumps(summary))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cogrowth")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("series", help="exact cogrowth coefficients for bs")
    sp.add_argument("--group", default="bs")
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--m", type=int, default=1)
    sp.add_argument("--terms", type=int, default=40)
    sp.add_argument("--trim", type=int, default=0,
                    help="trim threshold T (0 keeps everything exact)")
    sp.add_argument("--growth-exponent", type=float, default=-2.0)
    sp.add_argument("-o", "--output", default="-")
    sp.set_defaults(func=_cmd_series)

    sp = sub.add_parser("exact", help="closed-form coefficient expansions")
    sp.add_argument("--family", required=True,
                    help=f"one of {', '.join(EXACT_FAMILIES)}")
    sp.add_argument("--terms", type=int, default=40)
    sp.add_argument("-o", "--output", default="-")
    sp.set_defaults(func=_cmd_exact)

    sp = sub.add_parser("oracle", help="exhaustive trivial word counts")
    sp.add_argument("--group", required=True)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--m", type=int, default=1)
    sp.add_argument("--max-len", type=int, default=10)
    sp.add_argument("--reduced", action="store_true")
    sp.add_argument("--max-states", type=int, default=20_000_000)
    sp.add_argument("-o", "--output", default="-")
    sp.set_defaults(func=_cmd_oracle)

    sp = sub.add_parser("sample", help="run the Metropolis chain")
    sp.add_argument("--group")
    sp.add_argument("--presentation",
                    help="explicit presentation text, overrides --group")
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--m", type=int, default=1)
    sp.add_argument("--ladder", required=True,
                    help="comma list of betas, or start:end:count")
    sp.add_argument("--alpha", type=float, default=1.0)
    sp.add_argument("--pc", type=float, default=0.5,
                    help="probability of proposing a conjugation")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--iters", type=int, default=10_000,
                    help="iterations per block")
    sp.add_argument("--blocks", type=int, default=100)
    sp.add_argument("--swap-interval", type=int, default=1000)
    sp.add_argument("--theta", type=float, default=0.5,
                    help="offset decay for infinite relator families")
    sp.add_argument("-o", "--output", default="-")
    sp.set_defaults(func=_cmd_sample)

    sp = sub.add_parser("analyze", help="locate the critical fugacity")
    sp.add_argument("input", help="CSV produced by the sample subcommand")
    sp.add_argument("--degree", type=int, default=1, choices=(1, 2))
    sp.add_argument("--skip", type=int, default=0,
                    help="drop this many low-beta rungs before fitting")
    sp.add_argument("--k", type=int,
                    help="report against the amenable threshold 1/(2k-1)")
    sp.add_argument("-o", "--output", default="")
    sp.set_defaults(func=_cmd_analyze)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ArithmeticError) as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
