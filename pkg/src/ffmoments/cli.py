"""Command line entry point: ``ffm {empirical,limit,rmt,verify}``.

Results are JSON lines on stdout (or CSV with ``--csv``); diagnostics go to
stderr.  Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import io
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .errors import TooLarge
from .finite_field import make_context
from .moments import empirical_moment, split_moment
from .partitions import Partition, count_type, decompositions, limit_moment
from .rmt import WeightSpec, mc_weighted_integral, orthogonal_moment, symplectic_moment, z_lambda
from .verify import run_suites


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunRecord:
    command: str
    params: dict
    result: object
    seed: int | None = None
    code_version: str = __version__
    timestamp: str | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self, deterministic: bool) -> dict:
        out = {"command": self.command, "params": self.params, "result": self.result, "seed": self.seed,
               "code_version": self.code_version}
        if not deterministic:
            out["timestamp"] = self.timestamp
            out.update(self.extra)
        return out


def _complex(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _fraction(x: Fraction) -> str:
    return str(x)


# ---------------------------------------------------------------------------
# commands


def _context(args):
    return make_context(args.q, args.r, allow_weak=args.allow_weak_congruence)


def _empirical_row(ctx, N, lam, jobs):
    emp = empirical_moment(ctx, N, lam, jobs=jobs)
    row = {"q": ctx.q, "empirical": _complex(emp.value), "family_size": emp.n_samples,
           "normalization_exponent": emp.params["normalization_exponent"]}
    try:
        mt, et = split_moment(ctx, N, lam)
        row["main_term"] = _complex(mt.value)
        row["error_term"] = _complex(et.value)
        row["split_route"] = mt.params["route"]
    except TooLarge as exc:
        row["main_term"] = row["error_term"] = None
        row["split_note"] = str(exc)
    return row


def cmd_empirical(args):
    lam = Partition.parse(args.lam)
    limit = limit_moment(lam, args.r)
    if args.emit_table:
        rows = []
        for q in _int_list(args.emit_table):
            ctx = make_context(q, args.r, allow_weak=args.allow_weak_congruence)
            row = _empirical_row(ctx, args.N, lam, args.jobs)
            value = complex(row["empirical"]["re"], row["empirical"]["im"])
            rows.append({"q": q, "empirical": row["empirical"], "limit": float(limit),
                         "abs_diff": abs(value - float(limit))})
        params = {"q_list": _int_list(args.emit_table), "r": args.r, "N": args.N, "lambda": str(lam)}
        return RunRecord("empirical", params, {"table": rows})
    ctx = _context(args)
    row = _empirical_row(ctx, args.N, lam, args.jobs)
    row["limit"] = _fraction(limit)
    params = {"q": args.q, "r": args.r, "N": args.N, "lambda": str(lam),
              "allow_weak_congruence": args.allow_weak_congruence}
    row["value"] = row["empirical"]
    return RunRecord("empirical", params, row)


def cmd_limit(args):
    lam = Partition.parse(args.lam)
    if args.r < 2:
        raise UsageError("r must be >= 2")
    tuples = [{"tuple": {f"{j}:{mu}": a for (j, mu), a in d.entries}, "C": count_type(lam, d)}
              for d in decompositions(lam, args.r)]
    value = limit_moment(lam, args.r)
    result = {"value": _fraction(value), "value_float": float(value), "tuples": tuples, "n_tuples": len(tuples)}
    return RunRecord("limit", {"r": args.r, "lambda": str(lam)}, result)


def _parse_weight(text):
    if text in (None, "none"):
        return None
    parts = text.split(":")
    try:
        if parts[0] == "omega" and len(parts) == 2:
            return WeightSpec.omega(int(parts[1]))
        if parts[0] == "orth" and len(parts) == 1:
            return WeightSpec.orthogonal()
        if parts[0] == "wj" and len(parts) == 3:
            J = [int(t) for t in parts[2].replace("+", ",").split(",") if t]
            return WeightSpec.general(int(parts[1]), J)
    except ValueError as exc:
        raise UsageError(f"bad --weight {text!r}: {exc}") from None
    raise UsageError(f"bad --weight {text!r}; expected none, omega:r, orth or wj:r:J")


def _rmt_oracle(N, lam, weight, mu):
    """Closed-form value where a theorem supplies one inside its validity range."""
    if mu is not None:
        if lam.size <= N or mu.size <= N:
            return (z_lambda(lam) if lam == mu else 0), "z_lambda orthogonality"
        return None, None
    if weight is None:
        return (1 if lam.size == 0 else 0), "Haar average of P_lambda"
    if weight == WeightSpec.omega(2) and N % 2 == 0 and lam.size < N:
        return symplectic_moment(lam), "symplectic moment"
    if weight == WeightSpec.orthogonal() and lam.size < N:
        return orthogonal_moment(lam), "orthogonal moment"
    if not weight.J and lam.size <= N:
        return limit_moment(lam, weight.r), "combinatorial limit"
    return None, None


def cmd_rmt(args):
    lam = Partition.parse(args.lam)
    weight = _parse_weight(args.weight)
    mu = Partition.parse(args.mu) if args.mu is not None else None
    if weight is not None and mu is not None:
        raise UsageError("--weight and --mu are mutually exclusive")
    if args.samples < 1000:
        raise UsageError("--samples must be >= 1000")
    est = mc_weighted_integral(args.N, lam, weight, mu, samples=args.samples, seed=args.seed, estimator=args.estimator)
    oracle, source = _rmt_oracle(args.N, lam, weight, mu)
    result = {"estimate": _complex(est.value), "stderr": est.stderr, "batches": est.params["batches"],
              "resampled": est.params["resampled"], "estimator": est.params["estimator"], "n_samples": est.n_samples}
    if oracle is not None:
        oracle = Fraction(oracle)
        diff = abs(est.value - float(oracle))
        result["oracle"] = _fraction(oracle)
        result["oracle_source"] = source
        result["z"] = (diff / est.stderr) if est.stderr else (0.0 if diff < 1e-12 else float("inf"))
    params = {"N": args.N, "lambda": str(lam), "weight": weight.kind if weight else "none",
              "mu": str(mu) if mu is not None else None, "samples": args.samples}
    return RunRecord("rmt", params, result, seed=args.seed)


def cmd_verify(args):
    checks = run_suites(args.suite)
    rows = [{"suite": c.suite, "check": c.name, "passed": c.passed, "detail": c.detail} for c in checks]
    ok = all(c.passed for c in checks)
    return RunRecord("verify", {"suite": args.suite}, {"passed": ok, "checks": rows}), (0 if ok else 1)


# ---------------------------------------------------------------------------


def _int_list(text):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"bad integer list {text!r}") from None


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--csv", action="store_true", help="flatten the result to CSV")
    common.add_argument("--deterministic", action="store_true",
                        help="omit timestamp and wall time so identical runs give identical bytes")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for family sweeps")

    parser = _Parser(prog="ffm", description="Moments of traces of Frobenius for r-th order character families.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("empirical", parents=[common], help="exact family average and its MT/ET split")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--lambda", dest="lam", required=True, help='comma-separated parts, e.g. "1,2,2"')
    p.add_argument("--allow-weak-congruence", action="store_true", help="only require q = 1 mod r")
    p.add_argument("--emit-table", metavar="Q_LIST", help="comma-separated q values for a convergence table")

    p = sub.add_parser("limit", parents=[common], help="combinatorial q -> infinity limit")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--lambda", dest="lam", required=True)

    p = sub.add_parser("rmt", parents=[common], help="Monte Carlo integral over U(N)")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--weight", default=None, help="none | omega:r | orth | wj:r:J")
    p.add_argument("--mu", default=None, help="conjugate partition for the orthogonality integral")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--estimator", choices=["auto", "plain", "rotation"], default="auto")

    p = sub.add_parser("verify", parents=[common], help="run invariant suites")
    p.add_argument("--suite", choices=["field", "poly", "char", "comb", "rmt", "all"], default="all")
    return parser


def _flatten(prefix, obj, out):
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    elif isinstance(obj, list):
        out[prefix] = json.dumps(obj)
    else:
        out[prefix] = obj


def _emit(record: RunRecord, args, stream):
    data = record.to_dict(args.deterministic)
    if not args.csv:
        stream.write(json.dumps(data, sort_keys=True) + "\n")
        return
    result = data["result"]
    table = result.get("table") if isinstance(result, dict) else None
    if table is None and isinstance(result, dict) and "checks" in result:
        table = result["checks"]
    rows = []
    for item in table or [result]:
        flat = {}
        _flatten("", item, flat)
        rows.append(flat)
    fields = list(dict.fromkeys(k for row in rows for k in row))
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    stream.write(buf.getvalue())


COMMANDS = {"empirical": cmd_empirical, "limit": cmd_limit, "rmt": cmd_rmt, "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"ffm: error: {exc}", file=sys.stderr)
        return 2
    start = time.perf_counter()
    try:
        out = COMMANDS[args.command](args)
    except (UsageError, ValueError, ArithmeticError) as exc:
        msg = str(exc) if str(exc).startswith(type(exc).__name__) else f"{type(exc).__name__}: {exc}"
        print(f"ffm: error: {msg}".replace("\n", " "), file=sys.stderr)
        return 2
    record, code = out if isinstance(out, tuple) else (out, 0)
    record.timestamp = datetime.datetime.now(datetime.timezone.utc).isoformat()
    record.extra["wall_time"] = round(time.perf_counter() - start, 6)
    _emit(record, args, sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
