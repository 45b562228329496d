"""Command-line front end: ``primlab <subcommand> ...``.

Every invocation produces one report envelope. Exit codes: 0 success or pass,
1 a check was computed and failed, 2 usage or configuration error, 3 resource
or convergence failure.

Config files are flat ``key = value`` lines; ``#`` starts a comment, blank
lines are ignored, keys are the long flag names with ``-`` or ``_``.
Command-line flags win over the file, the file wins over the environment.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from fractions import Fraction

import numpy as np

from . import __version__, acceptance, arith, density, mertens, primsets, special, strongprime
from .errors import (ConvergenceError, DomainError, InvalidArgument, PreconditionError,
                     PrimlabError, ResourceLimitError)

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3
DEFAULT_SIEVE = 10**6


@dataclass
class RunConfig:
    sieve_limit: int = DEFAULT_SIEVE
    series: special.SeriesTolerance = field(default_factory=special.SeriesTolerance)
    quadrature: special.QuadratureConfig = field(default_factory=special.QuadratureConfig)
    output: str = "json"
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        if self.sieve_limit < 2:
            raise InvalidArgument("sieve_limit must be at least 2")
        if self.threads < 1:
            raise InvalidArgument("threads must be at least 1")
        if self.output not in ("json", "csv", "text"):
            raise InvalidArgument(f"unknown output format {self.output!r}")

    def digest(self):
        blob = json.dumps(asdict(self), sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


# ---------------------------------------------------------------------------
# config


def parse_config_text(text):
    out = {}
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidArgument(f"config line {n}: expected key = value")
        k, v = (s.strip() for s in line.split("=", 1))
        if not k:
            raise InvalidArgument(f"config line {n}: empty key")
        out[k.replace("-", "_")] = v
    return out


_SERIES_KEYS = {"abs_tol": float, "max_terms": int, "prime_cutoff": int}
_QUAD_KEYS = {"scheme": str, "panels": int, "split_point": float, "tail_tol": float}
_TOP_KEYS = {"sieve_limit": int, "output": str, "seed": int, "threads": int}


def build_config(args, env=None):
    env = os.environ if env is None else env
    raw = {}
    if "PRIMLAB_SIEVE_LIMIT" in env:
        raw["sieve_limit"] = env["PRIMLAB_SIEVE_LIMIT"]
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                raw.update(parse_config_text(fh.read()))
        except OSError as exc:
            raise InvalidArgument(f"cannot read config file: {exc}") from None
    for key in _TOP_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            raw[key] = v
    known = set(_SERIES_KEYS) | set(_QUAD_KEYS) | set(_TOP_KEYS)
    unknown = sorted(set(raw) - known)
    if unknown:
        raise InvalidArgument(f"unknown config keys: {', '.join(unknown)}")

    def conv(table):
        res = {}
        for k, typ in table.items():
            if k in raw:
                try:
                    res[k] = typ(float(raw[k])) if typ is int else typ(raw[k])
                except ValueError:
                    raise InvalidArgument(f"config key {k}: bad value {raw[k]!r}") from None
        return res

    return RunConfig(series=special.SeriesTolerance(**conv(_SERIES_KEYS)),
                     quadrature=special.QuadratureConfig(**conv(_QUAD_KEYS)), **conv(_TOP_KEYS))


# ---------------------------------------------------------------------------
# serialization


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        # JSON has no inf/nan
        return x if math.isfinite(x) else str(x)
    if isinstance(obj, Fraction):
        return str(obj)
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _timestamp(now):
    pinned = os.environ.get("SOURCE_DATE_EPOCH")
    t = int(pinned) if pinned else now
    return datetime.fromtimestamp(t, tz=timezone.utc).isoformat(timespec="seconds")


def envelope(command, cfg, payload, started, finished):
    return {
        "command": command,
        "config_digest": cfg.digest(),
        "started": _timestamp(started),
        "finished": _timestamp(finished),
        "payload": _plain(payload),
        "version": __version__,
    }


def _table(payload):
    rows = payload.get("rows") if isinstance(payload, dict) else None
    if isinstance(rows, list) and rows and isinstance(rows[0], dict):
        return list(rows[0]), [[r.get(c) for c in rows[0]] for r in rows]
    scalars = {k: v for k, v in payload.items() if not isinstance(v, (dict, list))}
    return ["key", "value"], [[k, v] for k, v in scalars.items()]


def render(env, fmt):
    if fmt == "json":
        return json.dumps(env, indent=2, ensure_ascii=False) + "\n"
    head, rows = _table(env["payload"])
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(head)
        w.writerows(rows)
        return buf.getvalue()
    lines = [f"{env['command']}  (primlab {env['version']}, config {env['config_digest']})"]
    lines += ["  " + "  ".join(str(c) for c in r) for r in ([head] + rows)]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# subcommands; each returns (payload, passed)


def _sieve(cfg, need):
    if need > cfg.sieve_limit:
        raise ResourceLimitError(f"needs a sieve up to {need}, sieve_limit is {cfg.sieve_limit}")
    return arith.shared_sieve(max(int(need), 2))


def cmd_layers(a, cfg):
    sv = _sieve(cfg, a.x)
    ks = list(range(1, a.k + 1)) if a.all_k else [a.k]
    rows = []
    for k in ks:
        if a.x < 3:
            raise InvalidArgument("the bound is only claimed for x >= 3")
        c = arith.count_layer(sv, k, a.x)
        b = float(arith.nk_bound(k, float(a.x)))
        row = {"k": k, "x": a.x, "count": c, "bound": b, "pass": c <= b}
        if a.enumerate:
            row["elements"] = arith.enumerate_layer(sv, k, a.x)
        rows.append(row)
    return {"rows": rows}, all(r["pass"] for r in rows)


def _default_variant(z):
    if z < 1:
        return "sub1"
    if z == 1:
        return "eq1"
    return "eq2" if z == 2 else "super1"


def cmd_gamma_k(a, cfg):
    if a.method == "quadrature":
        r = special.gamma_k(a.k, a.z, cfg.quadrature, cfg.series)
        out = asdict(r)
    elif a.method == "direct":
        cutoff = a.cutoff or cfg.sieve_limit
        sv = _sieve(cfg, cutoff)
        o = special.direct_sum_oracle(sv, a.k, a.z, cutoff)
        out = {"k": a.k, "z": a.z, "value": o.partial, "est_error": o.tail_bound, "method": "direct",
               "rigorous_tail": o.rigorous, "cutoff": cutoff}
    else:
        variant = a.variant or _default_variant(a.z)
        v = special.gamma_k_asymptotic(a.k, a.z, variant, cfg.series)
        out = {"k": a.k, "z": a.z, "value": v, "est_error": None, "method": f"asymptotic:{variant}",
               "rigorous_tail": False}
    out["config_digest"] = special.config_digest(cfg.series, cfg.quadrature)
    return out, True


def _read_numbers(path, typ=float):
    try:
        with open(path, encoding="utf-8") as fh:
            toks = [t for line in fh for t in line.split("#", 1)[0].replace(",", " ").split()]
    except OSError as exc:
        raise InvalidArgument(f"cannot read {path}: {exc}") from None
    try:
        return [typ(t) for t in toks]
    except ValueError as exc:
        raise InvalidArgument(f"{path}: {exc}") from None


def cmd_mertens(a, cfg):
    if a.bundle:
        if a.q is None or a.z is None:
            raise InvalidArgument("--bundle needs --q and --z")
        return mertens.mertens_bundle(a.q, a.z, a.cutoff, a.mode).as_dict(), True
    if not a.check:
        raise InvalidArgument("give --check or --bundle")
    grid = _read_numbers(a.grid) if a.grid else None
    top = a.x_max or cfg.sieve_limit
    if a.check == "mertens3":
        rep = mertens.mertens3_check(x_grid=grid, x_max=None if grid else top)
        cols = ("x", "product", "bound")
    else:
        rep = mertens.two_product_check(N_grid=[int(g) for g in grid] if grid else None,
                                        N_max=None if grid else top)
        cols = ("N", "product", "bound")
    rows = [dict(zip(cols, r), **{"pass": r[1] <= r[2]}) for r in rep.rows]
    return {"check": rep.name, "checked": rep.checked, "failures": len(rep.failures),
            "skipped": rep.skipped, "rows": rows, "pass": rep.passed}, rep.passed


def cmd_certify(a, cfg):
    sub = strongprime.SubdivisionConfig(a.start_width, a.min_width, a.mode)
    rep = strongprime.certify_strong(a.z_lo, a.z_hi, a.q_max, sub, workers=cfg.threads)
    obj = rep.to_json_obj()
    if not a.full_intervals:
        # keep the report compact: the worst interval per prime plus the leaf count
        for p in obj["primes"]:
            n = len(p["intervals"])
            p["leaves"] = n
            p["intervals"] = [max(p["intervals"], key=lambda iv: iv["bound"])]
    return obj, rep.overall


def _order(spec, sieve):
    if spec in (None, "increasing"):
        return primsets.INCREASING
    return primsets.PrimeOrder.explicit(_read_numbers(spec, int))


def cmd_primset(a, cfg):
    if a.action == "check":
        if not a.file:
            raise InvalidArgument("primset check needs --file")
        A = _read_numbers(a.file, int)
        hi = max(A) if A else 2
        sv = _sieve(cfg, hi)
        order = _order(a.order, sv)
        prim = primsets.is_primitive(A, sv)
        lprim = primsets.is_l_primitive(A, order, sv)
        out = {"size": len(A), "max": hi, "z": a.z, "primitive": prim, "l_primitive": lprim}
        if 1 not in A and A:
            out["erdos_sum"] = primsets.erdos_sum(A, a.z, sv)
        passed = prim
        if lprim:
            f = primsets.MultiplicativeWeight("z_over_p", a.z)
            lhs, ok = primsets.erdos_inequality_check(A, f, order, sv)
            out.update({"inequality_lhs": lhs, "inequality_pass": ok})
            passed = passed and ok
        return out, passed
    zs = [float(t) for t in a.z_grid.split(",") if t.strip()]
    sv = _sieve(cfg, a.hi)
    rec = list(primsets.enumerate_antichains(a.hi, sv, range_lo=a.lo))
    bits = primsets.antichains_bitmask(a.hi, range_lo=a.lo) if a.hi - a.lo + 1 <= 24 else None
    rows = []
    for z in zs:
        f = primsets.MultiplicativeWeight("z_over_p", z)
        worst, bad = -1.0, 0
        for A in rec:
            lhs, ok = primsets.erdos_inequality_check(A, f, primsets.INCREASING, sv)
            worst = max(worst, lhs)
            bad += not ok
        rows.append({"z": z, "max_lhs": worst, "failures": bad, "pass": bad == 0})
    agree = bits is None or sorted(map(tuple, bits)) == sorted(map(tuple, rec))
    passed = agree and all(r["pass"] for r in rows)
    return {"range": [a.lo, a.hi], "antichains": len(rec),
            "bitmask_antichains": None if bits is None else len(bits),
            "enumerators_agree": agree, "rows": rows, "pass": passed}, passed


def cmd_density(a, cfg):
    sv = _sieve(cfg, max(a.N, 2))
    d, sol, den = density.d_z_density(a.N, a.z, sv, a.method, exact=a.exact_rational)
    if a.emit_antichain:
        with open(a.emit_antichain, "w", encoding="utf-8") as fh:
            fh.write("".join(f"{x}\n" for x in sol.elements))
    out = {"N": a.N, "z": a.z, "weight": sol.weight, "denominator": den, "density": d,
           "method": sol.method, "certificate_ok": sol.certificate_ok}
    if a.exact_rational:
        out["density_float"] = float(d)
    return out, sol.certificate_ok is not False


def cmd_suite(a, cfg):
    need = acceptance.SIEVE_FOR_LEVEL[a.level]
    sv = _sieve(cfg, need)
    only = {int(t) for t in a.only.split(",")} if a.only else None
    res = acceptance.run_battery(a.level, only, sv, workers=cfg.threads)
    # wall-clock timings go to stderr only so that reports stay byte-identical
    crit = [{"criterion": c.number, "title": c.title, "pass": c.passed,
             "detail": {k: v for k, v in c.detail.items() if k != "runtime_s"}} for c in res]
    failed = [c["criterion"] for c in crit if not c["pass"]]
    for c in res:
        print(c.line(), file=getattr(a, "stderr", sys.stderr))
    return {"level": a.level, "seed": cfg.seed, "criteria": crit, "failed": failed,
            "pass": not failed}, not failed


COMMANDS = {"layers": cmd_layers, "gamma-k": cmd_gamma_k, "mertens": cmd_mertens, "certify": cmd_certify,
            "primset": cmd_primset, "density": cmd_density, "suite": cmd_suite}


def build_parser():
    common = _Parser(add_help=False)
    g = common.add_argument_group("common options")
    g.add_argument("--report", metavar="FILE", help="write the report here instead of stdout")
    g.add_argument("--output", choices=("json", "csv", "text"))
    g.add_argument("--threads", type=int)
    g.add_argument("--config", metavar="FILE", help="flat key = value file")
    g.add_argument("--seed", type=int)
    g.add_argument("--sieve-limit", dest="sieve_limit", type=int)

    p = _Parser(prog="primlab", description="Erdős sums, strong primes and primitive-set densities.")
    p.add_argument("--version", action="version", version=f"primlab {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    s = sub.add_parser("layers", parents=[common], help="N_k(x) versus its explicit bound")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--x", type=int, required=True)
    s.add_argument("--all-k", action="store_true", help="report every k from 1 to K")
    s.add_argument("--enumerate", action="store_true")

    s = sub.add_parser("gamma-k", parents=[common], help="the layer sum gamma_k(z)")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--z", type=float, required=True)
    s.add_argument("--method", choices=("quadrature", "direct", "asymptotic"), default="quadrature")
    s.add_argument("--variant", choices=("sub1", "eq1", "super1", "eq2", "uniform"))
    s.add_argument("--cutoff", type=int)
    s.add_argument("--json", action="store_true", help="same as --output json")

    s = sub.add_parser("mertens", parents=[common], help="Mertens-type checks and bundles")
    s.add_argument("--check", choices=("mertens3", "two-product"))
    s.add_argument("--grid", metavar="FILE")
    s.add_argument("--x-max", type=int)
    s.add_argument("--bundle", action="store_true")
    s.add_argument("--q", type=int)
    s.add_argument("--z", type=float)
    s.add_argument("--mode", choices=("computed", "published"), default="computed")
    s.add_argument("--cutoff", type=int, default=mertens.BRACKET_CUTOFF)

    s = sub.add_parser("certify", parents=[common], help="certify odd primes Erdős z-strong")
    s.add_argument("--z-lo", type=float, required=True)
    s.add_argument("--z-hi", type=float, required=True)
    s.add_argument("--q-max", type=int, default=300)
    s.add_argument("--mode", choices=("computed", "published"), default="computed")
    s.add_argument("--start-width", type=float, default=0.01)
    s.add_argument("--min-width", type=float, default=1e-6)
    s.add_argument("--full-intervals", action="store_true", help="list every certified leaf")

    s = sub.add_parser("primset", parents=[common], help="primitive-set checks")
    s.add_argument("action", choices=("check", "exhaust"))
    s.add_argument("--file", metavar="SET.txt")
    s.add_argument("--z", type=float, default=1.0)
    s.add_argument("--order", default="increasing", help="'increasing' or a file listing primes in order")
    s.add_argument("--lo", type=int, default=2)
    s.add_argument("--hi", type=int, default=12)
    s.add_argument("--z-grid", default="0.5,1,1.5,1.99")

    s = sub.add_parser("density", parents=[common], help="exact z-logarithmic density D_z(N)")
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--z", type=float, required=True)
    s.add_argument("--method", choices=("auto", "flow", "brute"), default="auto")
    s.add_argument("--emit-antichain", metavar="FILE")
    s.add_argument("--exact-rational", action="store_true")

    s = sub.add_parser("suite", parents=[common], help="run the acceptance battery")
    s.add_argument("--level", choices=acceptance.LEVELS, default="desk")
    s.add_argument("--only", help="comma-separated criterion numbers")
    return p


def run(argv, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError(parser.format_help())
        if getattr(args, "json", False):
            args.output = "json"
        cfg = build_config(args)
        args.stderr = stderr
    except UsageError as exc:
        print(str(exc), file=stderr)
        return EXIT_USAGE
    except (InvalidArgument, ValueError) as exc:
        print(f"primlab: configuration error: {exc}", file=stderr)
        return EXIT_USAGE

    started = time.time()
    try:
        payload, passed = COMMANDS[args.command](args, cfg)
    except (ResourceLimitError, ConvergenceError, MemoryError) as exc:
        print(f"primlab: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_RESOURCE
    except (InvalidArgument, DomainError, PreconditionError, PrimlabError, ValueError) as exc:
        print(f"primlab: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_USAGE
    env = envelope(args.command, cfg, payload, started, time.time())
    text = render(env, cfg.output)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    if not passed and args.command == "suite":
        print("failed criteria: " + ", ".join(map(str, payload["failed"])), file=stderr)
    return EXIT_OK if passed else EXIT_FAILED


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
