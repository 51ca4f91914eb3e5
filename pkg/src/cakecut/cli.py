"""Command-line front end: run games, certify equilibria, emit figure data.

Exit codes: 0 success, 1 internal error, 2 usage error, 3 profitable
deviation found by check-equilibrium, 4 I/O error. Fractions cross the CLI
boundary as exact "p/q" strings. Output files are written whole or not at
all (computed in memory, then atomically renamed into place).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from .core import Cake, frac
from .engines import (
    GameConfig,
    Rule,
    deviate,
    equilibrium_profile,
    play,
    trace_to_jsonl,
)
from .equilibrium import Grid, NashCertificate, certify_nash, payoff_curve
from .errors import (
    ConfigurationError,
    DomainError,
    GridError,
    StrategyError,
    TraceError,
)
from . import metrics

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2
EXIT_DEVIATION = 3
EXIT_IO = 4

# bad inputs the user can fix; TraceError is an internal invariant and excluded
USAGE_ERRORS = (ConfigurationError, DomainError, GridError, StrategyError, ValueError)


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def _profile_for(config: GameConfig, spec: str | None):
    """Start from the rule's equilibrium profile and apply --profile overrides."""
    profile = equilibrium_profile(config)
    if spec is None:
        return profile
    key, _, value = spec.partition("=")
    if key != "first-cut" or not value:
        raise ValueError(f"unsupported profile override {spec!r}; expected first-cut=p/q")
    return deviate(profile, 1, frac(value))


def _fmt(x: Fraction) -> str:
    return str(x)


# --- simulate ----------------------------------------------------------------

def cmd_simulate(args) -> int:
    config = GameConfig(args.n, Cake(frac(args.cake_size)), Rule.parse(args.rule))
    profile = _profile_for(config, args.profile)
    partition, trace = play(config, profile)
    print(f"rule={config.rule.value} players={config.n} cake={_fmt(config.cake.size)}")
    for player, piece in partition.assignments:
        print(f"player {player}: piece {piece}  share {_fmt(piece.size)}")
    shares = " ".join(_fmt(s) for s in partition.sizes())
    print(f"shares: {shares}")
    print(f"cuts: {trace.queries.cuts}  evals: {trace.queries.evals}  "
          f"queries: {trace.queries.total}")
    if args.out:
        _write_atomic(Path(args.out), trace_to_jsonl(trace))
        print(f"trace written to {args.out}")
    return EXIT_OK


# --- check-equilibrium -------------------------------------------------------

def cmd_check_equilibrium(args) -> int:
    config = GameConfig(args.n, Cake(Fraction(1)), Rule.parse(args.rule))
    profile = _profile_for(config, args.profile)
    certificate = certify_nash(config, profile, Grid(args.grid))
    print(f"rule={config.rule.value} players={config.n} grid={args.grid}")
    print(f"baseline shares: {' '.join(_fmt(s) for s in certificate.baseline_shares)}")
    for record in certificate.deviations:
        if record.best_alpha is None:
            print(f"player {record.player}: never cuts; cut deviations are vacuous")
        else:
            print(f"player {record.player}: best deviation cut={_fmt(record.best_alpha)} "
                  f"delta={_fmt(record.best_delta)}")
    print(f"verdict: {certificate.verdict}")
    if certificate.verdict == NashCertificate.NO_PROFITABLE_DEVIATION:
        return EXIT_OK
    return EXIT_DEVIATION


# --- figure data -------------------------------------------------------------

def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _json_text(header, rows) -> str:
    return json.dumps([dict(zip(header, row)) for row in rows], indent=2) + "\n"


def _gini_payload(n_max: int):
    table = metrics.gini_table(n_max)
    csv_rows = [(n, metrics.decimal_string(e), metrics.decimal_string(a),
                 metrics.decimal_string(lim)) for n, e, a, lim in table]
    json_rows = [(n, _frac_obj(e), _frac_obj(a), _frac_obj(lim))
                 for n, e, a, lim in table]
    return csv_rows, json_rows


def _poa_payload(n_max: int):
    table = metrics.poa_table(n_max)
    csv_rows = [(n, metrics.decimal_string(p), metrics.decimal_string(a))
                for n, p, a in table]
    json_rows = [(n, _frac_obj(p), _frac_obj(a)) for n, p, a in table]
    return csv_rows, json_rows


def _payoff_payload(curves: dict[int, list]) -> list[tuple]:
    rows = []
    for n in sorted(curves):
        for eps, payoff in curves[n]:
            rows.append((eps.numerator, eps.denominator,
                         payoff.numerator, payoff.denominator, n))
    return rows


def _frac_obj(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator,
            "decimal": metrics.decimal_string(x)}


def _emit(outdir: Path, stem: str, header, csv_rows, json_rows, fmt: str) -> Path:
    if fmt == "json":
        path = outdir / f"{stem}.json"
        _write_atomic(path, _json_text(header, json_rows))
    else:
        path = outdir / f"{stem}.csv"
        _write_atomic(path, _csv_text(header, csv_rows))
    return path


def cmd_figures(args) -> int:
    from . import figures  # deferred: pulls in matplotlib

    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    grid = Grid(args.grid)
    fig2_ns = [int(x) for x in args.fig2_n.split(",") if x]

    gini_csv, gini_json = _gini_payload(args.n_max)
    curves = {n: payoff_curve(n, grid) for n in fig2_ns}
    payoff_rows = _payoff_payload(curves)
    poa_csv, poa_json = _poa_payload(args.n_max)

    written = [
        _emit(outdir, "gini_vs_players", metrics.FIG_GINI_HEADER,
              gini_csv, gini_json, args.format),
        _emit(outdir, "payoff_asymmetry", metrics.FIG_PAYOFF_HEADER,
              payoff_rows, payoff_rows, args.format),
        _emit(outdir, "poa_vs_players", metrics.FIG_POA_HEADER,
              poa_csv, poa_json, args.format),
    ]
    figures.render_gini_figure(metrics.gini_table(args.n_max),
                               outdir / "gini_vs_players.png")
    figures.render_payoff_figure(curves, outdir / "payoff_asymmetry.png")
    figures.render_poa_figure(metrics.poa_table(args.n_max),
                              outdir / "poa_vs_players.png")
    written += [outdir / "gini_vs_players.png", outdir / "payoff_asymmetry.png",
                outdir / "poa_vs_players.png"]
    for path in written:
        print(f"wrote {path}")
    return EXIT_OK


def cmd_payoff_curve(args) -> int:
    from . import figures

    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    grid = Grid(args.grid)
    eps_lo = frac(args.eps_lo) if args.eps_lo else None
    eps_hi = frac(args.eps_hi) if args.eps_hi else None
    curve = payoff_curve(args.n, grid, eps_lo, eps_hi)
    rows = _payoff_payload({args.n: curve})
    stem = f"payoff_curve_n{args.n}"
    path = _emit(outdir, stem, metrics.FIG_PAYOFF_HEADER, rows, rows, args.format)
    figures.render_payoff_figure({args.n: curve}, outdir / f"{stem}.png")
    print(f"wrote {path}")
    print(f"wrote {outdir / (stem + '.png')}")
    return EXIT_OK


def cmd_poa(args) -> int:
    rule = Rule.parse(args.rule)
    n_min = args.n if args.n else 2
    n_max = args.n_max if args.n_max else (args.n if args.n else 20)
    rows = []
    for n in range(n_min, n_max + 1):
        report = metrics.poa(n, rule)
        rows.append((n, report.poa, report.asymptote))
        print(f"n={n} rule={rule.value} poa={_fmt(report.poa)} "
              f"({metrics.decimal_string(report.poa)})  asymptote={_fmt(report.asymptote)}")
    if args.out:
        from . import figures

        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        csv_rows = [(n, metrics.decimal_string(p), metrics.decimal_string(a))
                    for n, p, a in rows]
        json_rows = [(n, _frac_obj(p), _frac_obj(a)) for n, p, a in rows]
        path = _emit(outdir, f"poa_{rule.value}", metrics.FIG_POA_HEADER,
                     csv_rows, json_rows, args.format)
        figures.render_poa_figure(rows, outdir / f"poa_{rule.value}.png")
        print(f"wrote {path}")
        print(f"wrote {outdir / ('poa_' + rule.value + '.png')}")
    return EXIT_OK


# --- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cakecut",
        description="Compositional cake-cutting: simulate games, certify equilibria, "
                    "emit figure data.")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="play one game and print the partition")
    sim.add_argument("--rule", required=True, choices=[r.value for r in Rule])
    sim.add_argument("--n", type=int, required=True, help="number of players")
    sim.add_argument("--cake-size", default="1", help="cake size as p/q (default 1)")
    sim.add_argument("--profile", default=None, metavar="KEY=VAL",
                     help="override, e.g. first-cut=1/2")
    sim.add_argument("--out", default=None, help="write the JSON-lines trace here")
    sim.set_defaults(func=cmd_simulate)

    chk = sub.add_parser("check-equilibrium",
                         help="grid-search unilateral cut deviations")
    chk.add_argument("--rule", required=True, choices=[r.value for r in Rule])
    chk.add_argument("--n", type=int, required=True)
    chk.add_argument("--grid", type=int, default=2520,
                     help="grid resolution L (default 2520)")
    chk.add_argument("--profile", default=None, metavar="KEY=VAL",
                     help="override, e.g. first-cut=1/2")
    chk.set_defaults(func=cmd_check_equilibrium)

    fig = sub.add_parser("figures", help="emit all figure data files and plots")
    fig.add_argument("--n-max", type=int, default=20)
    fig.add_argument("--fig2-n", default="2,3,5,10",
                     help="comma-separated player counts for the payoff curve")
    fig.add_argument("--grid", type=int, default=2520)
    fig.add_argument("--format", choices=["csv", "json"], default="csv")
    fig.add_argument("--out", default="figures", help="output directory")
    fig.set_defaults(func=cmd_figures)

    pay = sub.add_parser("payoff-curve", help="emit one payoff-asymmetry curve")
    pay.add_argument("--n", type=int, required=True)
    pay.add_argument("--grid", type=int, default=2520)
    pay.add_argument("--eps-lo", default=None, help="window start as p/q")
    pay.add_argument("--eps-hi", default=None, help="window end as p/q")
    pay.add_argument("--format", choices=["csv", "json"], default="csv")
    pay.add_argument("--out", default="figures", help="output directory")
    pay.set_defaults(func=cmd_payoff_curve)

    po = sub.add_parser("poa", help="price-of-anarchy report")
    po.add_argument("--rule", required=True, choices=[r.value for r in Rule])
    po.add_argument("--n", type=int, default=None, help="single n (default: range 2..n-max)")
    po.add_argument("--n-max", type=int, default=None)
    po.add_argument("--format", choices=["csv", "json"], default="csv")
    po.add_argument("--out", default=None, help="output directory (optional)")
    po.set_defaults(func=cmd_poa)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TraceError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except Exception as exc:  # internal invariant violations
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
