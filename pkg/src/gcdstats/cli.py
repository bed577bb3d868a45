"""Command-line surface: reproducible experiments, machine-readable output.

Subcommands
    tables     build and cache an arithmetic-function table
    exact      evaluate one exact finite-n quantity as JSON
    constants  emit the limiting constants with error bars
    simulate   run seeded replicates, write CSV rows + JSON summary
    verify     run acceptance suites; nonzero exit on failure

Every emitted artifact embeds its run manifest (subcommand, parameters,
seed, versions); identical manifests produce byte-identical data files.
Timing goes to stderr only.  Exit codes: 0 ok, 1 verification failure,
2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import re
import sys
import time

import numpy as np

from . import __version__, constants, exact, montecarlo, stattest, verify
from .arith import build_table, load_table, save_table


def _manifest(subcommand: str, params: dict) -> dict:
    return {
        "subcommand": subcommand,
        "params": params,
        "versions": {
            "gcdstats": __version__,
            "numpy": np.__version__,
            "python": "%d.%d" % sys.version_info[:2],
        },
    }


def parse_n_rule(text: str, m: int) -> int:
    """Sample-space size: literal integer, 'm^B', or 'exp(m^G)'."""
    if re.fullmatch(r"\d+", text):
        return int(text)
    power = re.fullmatch(r"m\^([0-9.]+)", text)
    if power:
        return round(m ** float(power.group(1)))
    expo = re.fullmatch(r"exp\(m\^([0-9.]+)\)", text)
    if expo:
        return round(math.exp(m ** float(expo.group(1))))
    raise ValueError(f"bad n rule {text!r}: use an integer, 'm^2.5' or 'exp(m^0.3)'")


def _emit(payload: dict, out: str | None, fmt: str) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    elif fmt != "csv":
        sys.stdout.write(text)


def cmd_tables(args) -> int:
    if args.n < 1:
        raise ValueError("--n must be a positive table bound")
    orders = tuple(sorted({int(s) for s in args.orders.split(",")})) if args.orders else (1,)
    t0 = time.perf_counter()
    path = args.out or f"arith-{args.n}.tbl"
    hit = False
    if os.path.exists(path):
        try:
            table = load_table(path)
            hit = table.n_max == args.n and all(s in table.totient_s for s in orders)
        except ValueError:
            hit = False
    if not hit:
        table = build_table(args.n, orders)
        save_table(table, path)
    digest = hashlib.sha256(open(path, "rb").read()).hexdigest()
    summary = {
        "manifest": _manifest("tables", {"n_max": args.n, "orders": list(orders)}),
        "cache": {"path": path, "hit": hit, "sha256": digest,
                  "bytes": os.path.getsize(path)},
        "spot": {
            "mertens(n_max)": int(np.sum(table.mobius[1:], dtype=np.int64)),
            "squarefree_count": int(np.count_nonzero(table.mobius[1:])),
            "tau_max": int(table.tau[1:].max()),
        },
    }
    print(json.dumps(summary, indent=2, sort_keys=True))
    print(f"elapsed {time.perf_counter() - t0:.2f}s", file=sys.stderr)
    return 0


_EXACT_QUANTITIES = ("mu", "nu", "c", "d", "pmf", "moment", "varC", "varZ",
                     "gamma", "omega", "pi", "tail")


def cmd_exact(args) -> int:
    n, r, q, s, m = args.n, args.r, args.q, args.s, args.m
    if n is None or n < 1:
        raise ValueError("--n is required and must be >= 1")
    orders = (1, q) if q != 1 else (1,)
    table = build_table(n, orders)
    quantity = args.quantity
    t0 = time.perf_counter()
    if quantity == "pmf":
        res = exact.gcd_pmf(table, n, r)
        payload = {
            "manifest": _manifest("exact", {"quantity": quantity, "n": n, "r": r}),
            "quantity": quantity, "n": n, "r": r,
            "values": [v.float_value for v in res],
            "numerators": [str(v.numerator) for v in res],
            "denom_power": r,
            "exact": all(v.exact_flag for v in res),
        }
    else:
        if quantity == "mu":
            res = exact.mean_mu(table, n, r)
        elif quantity == "nu":
            res = exact.mean_nu(table, n, r)
        elif quantity == "c":
            res = exact.var_c(table, n, r)
        elif quantity == "d":
            res = exact.var_d(table, n, r)
        elif quantity == "moment":
            res = exact.gcd_moment(table, n, r, q)
        elif quantity == "varC":
            res = exact.var_C(table, n, _require(m, "--m"), r)
        elif quantity == "varZ":
            res = exact.var_Z(table, n, _require(m, "--m"), r, q)
        elif quantity == "gamma":
            res = exact.shared_covariance(table, n, r, _require(s, "--s"), "indicator")
        elif quantity == "omega":
            res = exact.shared_covariance(table, n, r, _require(s, "--s"), "moment", q)
        elif quantity == "pi":
            res = exact.mixed_moment_pi(table, n, r, q)
        elif quantity == "tail":
            res = exact.gcd_tail(table, n, int(args.t))
        else:
            raise ValueError(f"unknown quantity {quantity!r}")
        record = res.record(quantity, n=n, r=r, q=q, s=s, m=m)
        payload = {"manifest": _manifest("exact", {
            "quantity": quantity, "n": n, "r": r, "q": q, "s": s, "m": m,
            "t": args.t,
        })}
        payload.update(record)
    _emit(payload, args.out, args.format)
    if args.out:
        print(args.out)
    print(f"elapsed {time.perf_counter() - t0:.2f}s", file=sys.stderr)
    return 0


def _require(value, flag):
    if value is None:
        raise ValueError(f"{flag} is required for this quantity")
    return value


def cmd_constants(args) -> int:
    t0 = time.perf_counter()
    table = constants.all_constants(args.cutoff)
    payload = {
        "manifest": _manifest("constants", {"cutoff": args.cutoff}),
        "constants": table,
    }
    _emit(payload, args.out, args.format)
    print(f"elapsed {time.perf_counter() - t0:.2f}s", file=sys.stderr)
    return 0


def cmd_simulate(args) -> int:
    t0 = time.perf_counter()
    statistic = args.statistic
    n = parse_n_rule(args.n, args.m)
    config = montecarlo.SampleConfig(
        m=args.m, n=n, r=args.r, q=args.q,
        replicates=args.reps, master_seed=args.seed,
    )
    table = build_table(n, (1, args.q) if args.q != 1 else (1,)) if n <= 20_000_000 else None
    if statistic in ("C", "Z"):
        normalization = "exact-moments"
        law = stattest.ReferenceLaw.normal()
    elif statistic == "M":
        normalization = "frechet-scale"
        law = stattest.ReferenceLaw.frechet(1 / constants.zeta(2))
    else:
        normalization = "none"
        law = stattest.ReferenceLaw.poisson(1 / (args.t * constants.zeta(2)))

    rows = montecarlo.replicate_rows(config, statistic, normalization, table,
                                     t=args.t, workers=args.workers)
    emp = montecarlo.run_replicates(config, statistic, normalization, table,
                                    t=args.t, workers=args.workers)
    if emp.kind == "continuous":
        distance = {"ks": stattest.ks_distance(emp, law)}
        mean = float(np.mean(emp.values))
        sd = float(np.std(emp.values))
    else:
        distance = {"tv": stattest.tv_distance(emp, law)}
        mean = sum(k * c for k, c in emp.counts.items()) / emp.size
        sd = math.sqrt(
            sum(k * k * c for k, c in emp.counts.items()) / emp.size - mean**2
        )
    summary = {
        "manifest": _manifest("simulate", {
            "statistic": statistic, "m": args.m, "n": n, "n_rule": args.n,
            "r": args.r, "q": args.q, "reps": args.reps, "seed": args.seed,
            "t": args.t, "normalization": normalization,
        }),
        "law": {"kind": law.kind, "scale": law.scale, "lam": law.lam},
        "mean": mean, "sd": sd, "distance": distance,
        "regime_warnings": config.regime_warnings(statistic),
    }
    csv_text = verify.format_rows_csv(rows)
    if args.out:
        with open(args.out + ".csv", "w", encoding="utf-8", newline="\n") as fh:
            fh.write(csv_text)
        with open(args.out + ".json", "w", encoding="utf-8", newline="\n") as fh:
            fh.write(json.dumps(summary, indent=2, sort_keys=True) + "\n")
        print(args.out + ".csv")
        print(args.out + ".json")
    elif args.format == "csv":
        sys.stdout.write(csv_text)
    else:
        sys.stdout.write(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    print(f"elapsed {time.perf_counter() - t0:.2f}s", file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    t0 = time.perf_counter()
    names = list(verify.SUITES) if args.suite == "all" else [args.suite]
    takes_workers = {"variance", "clt", "frechet", "poisson"}
    failures = 0
    for name in names:
        if name not in verify.SUITES:
            raise ValueError(f"unknown suite {name!r}; choose from {sorted(verify.SUITES)}")
        fn = verify.SUITES[name]
        results = fn(workers=args.workers) if name in takes_workers else fn()
        for res in results:
            print(res.line())
            failures += 0 if res.passed else 1
    print(f"elapsed {time.perf_counter() - t0:.2f}s", file=sys.stderr)
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gcdstats",
        description="Exact and simulated statistics of gcds of random integer samples",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tables", help="build and cache an arithmetic table")
    p.add_argument("--n", type=int, required=True, help="table bound n_max")
    p.add_argument("--orders", default="1", help="comma-separated totient orders")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("exact", help="evaluate one exact quantity")
    p.add_argument("--quantity", required=True, choices=_EXACT_QUANTITIES)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--s", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--t", type=float, default=0.0, help="tail threshold for quantity=tail")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("constants", help="emit limiting constants with error bars")
    p.add_argument("--cutoff", type=int, default=constants.DEFAULT_CUTOFF)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("simulate", help="run seeded replicates of one statistic")
    p.add_argument("--statistic", required=True, choices=("C", "Z", "M", "N"))
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", required=True, help="integer, 'm^2.5', or 'exp(m^0.3)'")
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--reps", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None, help="prefix for .csv and .json outputs")
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run acceptance suites")
    p.add_argument("--suite", default="all",
                   help="one of %s or 'all'" % ", ".join(sorted(verify.SUITES)))
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as err:
        parser.exit(2, f"error: {err}\n")


if __name__ == "__main__":
    sys.exit(main())
