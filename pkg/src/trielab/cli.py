"""Command-line interface.

Exit codes: 0 success, 1 domain or usage error, 2 verification failure.
CSV uses 10 significant digits, JSON round-trip floats; every numeric column
name carries the engine that produced it (exact_, asymptotic_, simulated_).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import asymptotics as asy
from . import exact
from . import montecarlo as mc
from . import verify
from .bitkeys import SeedSpec
from .errors import TrieLabError


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# --------------------------------------------------------------------------
# output


def _csv_cell(v) -> str:
    if isinstance(v, bool) or v is None:
        return str(v)
    if isinstance(v, float):
        return format(v, ".10g")
    return str(v)


def emit(command: str, params: dict, columns: list[str], rows: list[list], fmt: str,
         out=None, extra: dict | None = None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        record = {"command": command, "parameters": params, "columns": columns,
                  "rows": [dict(zip(columns, r)) for r in rows]}
        if extra:
            record.update(extra)
        out.write(json.dumps(record, indent=2, allow_nan=False) + "\n")
        return
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_csv_cell(v) for v in r])
    out.write(buf.getvalue())


# --------------------------------------------------------------------------
# commands


def cmd_exact(a) -> int:
    n = a.n
    params = {"n": n, "what": a.what, "t": a.t}
    if a.what in ("depth", "distance"):
        pmf = exact.depth_pmf(n) if a.what == "depth" else exact.distance_pmf(n)
        rows = [[int(k), float(m)] for k, m in zip(pmf.support, pmf.masses)]
        emit("exact", params, ["value", "exact_probability"], rows, a.format,
             extra={"tail_bound": pmf.tail_bound})
    elif a.what == "moments":
        if n < 2:
            raise exact.DomainError("distance moments need n >= 2 (n < 2 given)")
        mt = exact.moment_table(n)
        rows = [[n, float(mt.distance_mean[n]), mt.distance_variance(n),
                 float(mt.depth_mean[n]), mt.depth_variance(n)]]
        emit("exact", params, ["n", "exact_distance_mean", "exact_distance_variance",
                               "exact_depth_mean", "exact_depth_variance"], rows, a.format)
    else:
        if a.t is None:
            raise UsageError("exact --what mgf requires --t")
        if n < 2:
            raise exact.DomainError("distance needs n >= 2 (n < 2 given)")
        rows = [[n, a.t, exact.exact_mgf(n, a.t)]]
        emit("exact", params, ["n", "t", "exact_mgf"], rows, a.format)
    return 0


def cmd_oscillate(a) -> int:
    t = a.t
    if not abs(t) <= asy.T_MAX:
        raise exact.DomainError(f"t = {t} outside the validated domain |t| <= {asy.T_MAX}")
    if a.n_min < 2 or a.n_max < a.n_min:
        raise exact.DomainError("need 2 <= n-min <= n-max")
    g = asy.G(t)
    env_lo, env_hi = g, math.exp(t) * g
    columns = ["n", "frac_2lg_n"]
    if a.engine in ("exact", "both"):
        columns.append("exact_centered_mgf")
        phi = exact.mgf_sequence(a.n_max, t) if t != 0 else None
    if a.engine in ("asymptotic", "both"):
        columns.append("asymptotic_centered_mgf")
    columns += ["asymptotic_G", "asymptotic_etG"]
    rows = []
    for n in range(a.n_min, a.n_max + 1):
        x = 2.0 * math.log2(n)
        row = [n, x - math.floor(x)]
        if a.engine in ("exact", "both"):
            row.append(1.0 if phi is None else float(phi[n] * math.exp(-t * math.floor(x))))
        if a.engine in ("asymptotic", "both"):
            row.append(asy.mgf_centered(n, t))
        rows.append(row + [env_lo, env_hi])
    emit("oscillate", {"t": t, "n_min": a.n_min, "n_max": a.n_max, "engine": a.engine},
         columns, rows, a.format)
    return 0


def cmd_verify(a) -> int:
    failed = 0
    for res in verify.run_suite(a.suite):
        print(res.line(), flush=True)
        failed += not res.passed
    print(f"{failed} of {len(verify.SUITES[a.suite])} criteria failed", file=sys.stderr)
    return 2 if failed else 0


def cmd_simulate(a) -> int:
    if a.seed is None:
        raise UsageError("simulate requires an explicit --seed")
    params = {"n": a.n, "trials": a.trials, "what": a.what, "engine": a.engine}
    spec = SeedSpec(a.seed)
    if a.what == "concentration":
        if a.n < 16:
            raise exact.DomainError("concentration check needs n >= 16")
        rep = mc.simulate_distance(a.n, a.trials, a.seed, a.engine)
        frac = mc.concentration_fraction(rep, a.eps)
        columns = ["n", "trials", "seed", "generator", "eps", "simulated_fraction"]
        rows = [[a.n, a.trials, spec.seed, spec.generator_name, a.eps, frac]]
    else:
        sim = mc.simulate_distance if a.what == "distance" else mc.simulate_wiener
        rep = sim(a.n, a.trials, a.seed, a.engine)
        columns = ["n", "trials", "seed", "generator", "simulated_mean",
                   "simulated_variance", "simulated_std_error"]
        rows = [[a.n, a.trials, spec.seed, spec.generator_name, rep.mean, rep.variance,
                 rep.std_error_of_mean]]
    emit("simulate", {**params, **spec.as_dict()}, columns, rows, a.format)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="trielab", description="Distances in random binary tries.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("exact", help="exact laws, moments and MGF")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--what", choices=["depth", "distance", "moments", "mgf"], default="distance")
    e.add_argument("--t", type=float)
    e.add_argument("--format", choices=["csv", "json"], default="csv")
    e.set_defaults(func=cmd_exact)

    o = sub.add_parser("oscillate", help="centred MGF against its two envelopes")
    o.add_argument("--t", type=float, default=0.1)
    o.add_argument("--n-min", type=int, default=256)
    o.add_argument("--n-max", type=int, default=8192)
    o.add_argument("--engine", choices=["exact", "asymptotic", "both"], default="exact")
    o.add_argument("--format", choices=["csv", "json"], default="csv")
    o.set_defaults(func=cmd_oscillate)

    v = sub.add_parser("verify", help="run the acceptance suite")
    v.add_argument("--suite", choices=["fast", "full"], default="fast")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("simulate", help="seeded Monte Carlo")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--trials", type=int, default=10000)
    s.add_argument("--seed", type=int)
    s.add_argument("--what", choices=["distance", "wiener", "concentration"], default="distance")
    s.add_argument("--engine", choices=list(mc.ENGINES), default="fast")
    s.add_argument("--eps", type=float, default=0.5)
    s.add_argument("--format", choices=["csv", "json"], default="csv")
    s.set_defaults(func=cmd_simulate)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except (UsageError, TrieLabError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
