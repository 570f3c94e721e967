"""Command-line interface.

Exit status: 0 on success, 1 when a computation fails (a check does not
hold, or an optimisation problem is infeasible), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from fractions import Fraction
from typing import Any, Callable, Sequence

from . import applications as apps
from .beta import dual_report, envelope_from_json, table3_envelope
from .hull import (HullH, build_hull, check_convexity_slopes, closure_tail_report, hull_from_json,
                   hull_to_json, program1_suite, verify_closure, verify_containment)
from .numeric import default_precision_bits, format_fraction
from .optimizer import (AffineConstraint, DenominatorSignError, FractionalObjective, InfeasibleError,
                        SweepError, maximize, minimize, sweep)
from .pairs import catalog_to_json, enumerate_known_pairs
from .report import Report

F = Fraction
SUITES = ("program1", "slopes", "closure", "containment", "all")
THEOREMS = ("2.1", "2.2", "2.3", "2.6", "2.7", "2.8", "2.9", "2.10", "2.11", "2.12")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    n_max: int = 1000
    precision_bits: int = 128
    emit: str = "text"
    workers: int = 1
    strict: bool = False
    timestamp: bool = False
    out: str | None = None

    def __post_init__(self) -> None:
        if self.n_max < 10:
            raise UsageError("--n-max must be at least 10")
        if self.precision_bits < 53:
            raise UsageError("--precision-bits must be at least 53")
        if self.workers < 1:
            raise UsageError("--workers must be at least 1")


# -- output -------------------------------------------------------------------

def _csv_text(rows: Sequence[dict], columns: Sequence[str] | None = None) -> str:
    buf = io.StringIO()
    cols = list(columns or (rows[0].keys() if rows else []))
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def _stamp() -> str:
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat()


def emit(cfg: RunConfig, payload: dict, rows: Sequence[dict] | None = None, text: str | None = None) -> None:
    """Write ``payload`` (json), ``rows`` (csv) or ``text`` to ``--out`` or stdout."""
    if cfg.emit == "json":
        if cfg.timestamp:
            payload = {"generated": _stamp(), **payload}
        body = json.dumps(payload, indent=2) + "\n"
    elif cfg.emit == "csv":
        body = _csv_text(rows if rows is not None else payload.get("checks", []))
        if cfg.timestamp:
            body = f"# generated {_stamp()}\n" + body
    else:
        body = (text if text is not None else json.dumps(payload, indent=2)) + "\n"
        if cfg.timestamp:
            body = f"# generated {_stamp()}\n" + body
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)


def _report_payload(rep: Report) -> dict:
    out = rep.to_dict()
    if rep.data:
        out["data"] = rep.data
    return out


def _emit_report(cfg: RunConfig, rep: Report, rows: Sequence[dict] | None = None) -> int:
    payload = _report_payload(rep)
    if rows is not None:
        payload["table"] = list(rows)
    text = rep.render()
    if rows:
        text += "\n\n" + _csv_text(rows).rstrip("\n")
    emit(cfg, payload, rows, text)
    return 0 if rep.ok else 1


# -- hull / verify / dual / catalog ----------------------------------------------

def _load_hull(path: str | None, n_max: int) -> HullH:
    if path is None:
        return build_hull(n_max)
    try:
        with open(path, encoding="utf-8") as fh:
            return hull_from_json(json.load(fh))
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read hull file {path}: {exc}") from exc


def _with_emit(cfg: RunConfig, fmt: str) -> RunConfig:
    return RunConfig(cfg.n_max, cfg.precision_bits, fmt, cfg.workers, cfg.strict, cfg.timestamp, cfg.out)


def cmd_hull(args: argparse.Namespace, cfg: RunConfig) -> int:
    if args.hull_cmd == "verify":
        return cmd_verify(args, cfg)
    if args.hull_cmd == "build":
        h = build_hull(args.n or cfg.n_max)
        # a built hull is a file format first: text output means JSON here
        cfg = cfg if cfg.emit != "text" else _with_emit(cfg, "json")
    else:
        h = _load_hull(args.input, cfg.n_max)
    payload = hull_to_json(h)
    rows = [{"index": "" if h.label(v) is None else str(h.label(v)), "k": k, "l": l}
            for v, (k, l) in zip(h.vertices, payload["vertices"])]
    text = "\n".join(f"{r['index']:>6}  {r['k']}  {r['l']}" for r in rows)
    emit(cfg, payload, rows, text)
    return 0


def verify_suite(suite: str, cfg: RunConfig, n: int | None = None) -> Report:
    if suite not in SUITES:
        raise UsageError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    n_max = n or cfg.n_max
    if suite == "all":
        rep = Report("all suites")
        for s in SUITES[:-1]:
            rep.extend(verify_suite(s, cfg, n), prefix=f"{s}: ")
        return rep
    if suite == "program1":
        return program1_suite(strict=cfg.strict, workers=cfg.workers)
    if suite == "slopes":
        return check_convexity_slopes(n_max)
    if suite == "closure":
        rep = Report(f"closure under A and C in H_{n_max}")
        for name in ("A", "C"):
            rep.extend(verify_closure(name, range(-99, 100), n_max, workers=cfg.workers, strict=cfg.strict))
        rep.extend(closure_tail_report())
        return rep
    return verify_containment(n_max, strict=cfg.strict)


def cmd_verify(args: argparse.Namespace, cfg: RunConfig) -> int:
    rep = verify_suite(args.suite, cfg, getattr(args, "n", None))
    return _emit_report(cfg, rep)


def cmd_dual(args: argparse.Namespace, cfg: RunConfig) -> int:
    if args.envelope:
        try:
            with open(args.envelope, encoding="utf-8") as fh:
                env = envelope_from_json(fh.read())
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"cannot read envelope {args.envelope}: {exc}") from exc
    else:
        env = table3_envelope(corrected=args.corrected)
    res = dual_report(env)
    text = "\n".join(["chain:"] + [f"  ({a}, {b})" for a, b in res["chain"]] + ["pairs:"]
                     + [f"  ({p['k']}, {p['l']})  {p['known_as'] or 'new'}" for p in res["pairs"]])
    if cfg.out and cfg.emit == "text":
        cfg = _with_emit(cfg, "json")
    emit(cfg, res, res["pairs"], text)
    return 0


def cmd_catalog(args: argparse.Namespace, cfg: RunConfig) -> int:
    pairs = enumerate_known_pairs(args.family_cap, cfg.precision_bits)
    payload = json.loads(catalog_to_json(pairs))
    def cell(v: object) -> str:
        return f"[{v[0]}, {v[1]}]" if isinstance(v, list) else str(v)
    rows = [{"provenance": d.get("provenance", ""), "k": cell(d["k"]), "l": cell(d["l"]),
             "eps": d.get("eps", False)} for d in payload]
    text = "\n".join(f"{r['provenance']}: ({r['k']}, {r['l']})" for r in rows)
    emit(cfg, {"pairs": payload}, rows, text)
    return 0


# -- optimize ----------------------------------------------------------------

_TERM = re.compile(r"\s*([+-]?)\s*([^+-]+)")


def parse_affine(text: object, var: str | None) -> tuple[Fraction, Fraction]:
    """``"3/2"``, ``"-sigma/2"``, ``"1/4*A - 1/2"`` -> ``(constant, coefficient of var)``."""
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        raise UsageError("coefficients must be rational strings, not JSON numbers")
    if not isinstance(text, str) or not text.strip():
        raise UsageError(f"bad coefficient {text!r}")
    s = text.replace(" ", "")
    c0 = c1 = F(0)
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise UsageError(f"cannot parse {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        term = m.group(2)
        pos = m.end()
        try:
            if var and var in term:
                rest = term.replace(var, "1", 1)
                coef = F(1)
                for part in rest.split("*"):
                    num, _, den = part.partition("/")
                    coef *= F(num) / (F(den) if den else 1)
                c1 += sign * coef
            else:
                c0 += sign * F(term)
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"cannot parse {text!r}") from exc
    return c0, c1


def _load_problem(path: str, var: str | None) -> dict[str, Any]:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path}: {exc}") from exc
    if not isinstance(obj, dict) or "num" not in obj:
        raise UsageError("objective JSON needs a 'num' list")
    num = [parse_affine(x, var) for x in obj["num"]]
    den = [parse_affine(x, var) for x in obj.get("den", ["0", "0", "1"])]
    if len(num) != 3 or len(den) != 3:
        raise UsageError("'num' and 'den' need three coefficients each")
    cons = []
    for c in obj.get("constraints", []):
        try:
            cons.append(tuple(parse_affine(c[key], var) for key in ("g", "h", "t")) + (c.get("rel", ">="),))
        except (KeyError, TypeError) as exc:
            raise UsageError(f"bad constraint {c!r}") from exc
    return {"num": num, "den": den, "constraints": cons, "sense": obj.get("sense", "min")}


def _instantiate(problem: dict, t: Fraction) -> tuple[FractionalObjective, list[AffineConstraint]]:
    def at(pairs: Sequence[tuple[Fraction, Fraction]]) -> tuple[Fraction, ...]:
        return tuple(a + b * t for a, b in pairs)
    obj = FractionalObjective(at(problem["num"]), at(problem["den"]))
    cons = [AffineConstraint(*at(c[:3]), c[3]) for c in problem["constraints"]]
    return obj, cons


def cmd_optimize(args: argparse.Namespace, cfg: RunConfig) -> int:
    problem = _load_problem(args.objective, args.param)
    h = _load_hull(args.hull, cfg.n_max)
    if problem["sense"] not in ("min", "max"):
        raise UsageError("'sense' must be 'min' or 'max'")
    try:
        if args.param:
            if args.from_ is None or args.to is None:
                raise UsageError("--param needs --from and --to")
            if problem["sense"] == "max":
                raise UsageError("sweeps minimise; negate the numerator to maximise")
            lo, hi = _fraction_arg(args.from_), _fraction_arg(args.to)
            pb = sweep(h, lambda t: _instantiate(problem, t)[0], lambda t: _instantiate(problem, t)[1],
                       (lo, hi), parameter=args.param)
            rows = pb.rows()
            payload = {"parameter": args.param, "range": [format_fraction(lo), format_fraction(hi)], "pieces": rows}
            text = _csv_text(rows).rstrip("\n")
            emit(cfg, payload, rows, text)
            return 0
        obj, cons = _instantiate(problem, F(0))
        res = (maximize if problem["sense"] == "max" else minimize)(h, obj, cons)
    except (InfeasibleError, DenominatorSignError, SweepError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    label = h.label(res.argmin)
    payload = {
        "value": format_fraction(res.value),
        "argmin": [format_fraction(res.argmin[0]), format_fraction(res.argmin[1])],
        "attained": res.attained,
        "vertex": label,
    }
    if res.witness is not None:
        payload["witness"] = [format_fraction(res.witness[0]), format_fraction(res.witness[1])]
    kind = "minimum" if res.attained else "infimum"
    if problem["sense"] == "max":
        kind = "maximum" if res.attained else "supremum"
    text = f"{kind} {payload['value']} at ({payload['argmin'][0]}, {payload['argmin'][1]})"
    if label is not None:
        text += f", vertex {label}"
    emit(cfg, payload, [payload | {"argmin": " ".join(payload["argmin"])}], text)
    return 0


def _fraction_arg(s: str) -> Fraction:
    try:
        return F(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational number: {s!r}") from exc


# -- reproduce -----------------------------------------------------------------

def _zero_density_rows(rep: Report) -> list[dict]:
    funcs = [apps.zero_density.density_function(apps.zero_density.vertex(n + 4)) for n in range(5)]
    cuts = ["9/10"] + [f"[{lo}, {hi}]" for lo, hi in rep.data.get("crossovers", [])] + ["1/1"]
    rows = []
    for n, fn in enumerate(funcs):
        num, den = fn.render("sigma")
        k, l = apps.zero_density.vertex(n + 4)
        rows.append({"piece_lo": cuts[n], "piece_hi": cuts[n + 1], "expr_num": num, "expr_den": den,
                     "argmin_k": format_fraction(k), "argmin_l": format_fraction(l)})
    return rows


def reproduce(theorem: str, cfg: RunConfig) -> tuple[Report, list[dict] | None]:
    if theorem not in THEOREMS:
        raise UsageError(f"unknown theorem {theorem!r}; choose from {', '.join(THEOREMS)}")
    n = cfg.n_max
    if theorem == "2.1":
        return apps.check_moment_12_delta(), None
    if theorem == "2.2":
        t = apps.reproduce_moment_table(n)
        return t.report, t.rows()
    if theorem == "2.3":
        return apps.check_hybrid_moment(n), None
    if theorem == "2.6":
        t = apps.reproduce_mu_table(n)
        return t.report, t.rows()
    if theorem in ("2.7", "2.8"):
        return apps.check_mu_three_halves(n), None
    if theorem == "2.9":
        rep = apps.reproduce_zero_density(n, stages=("formulas", "crossovers", "schedule", "edge"))
        return rep, _zero_density_rows(rep)
    if theorem == "2.10":
        return apps.reproduce_zero_density(n, stages=("constant",)), None
    if theorem == "2.11":
        rep, results = apps.divisor_report(n)
        printed = apps.divisor.expected()["divisor"]["alpha"]
        rows = [{"n": r.n, "alpha_lo": format_fraction(r.alpha_bound.lo), "alpha_hi": format_fraction(r.alpha_bound.hi),
                 "printed": printed[str(r.n)], "piece": r.piece,
                 "argmin_k": format_fraction(r.pair[0]), "argmin_l": format_fraction(r.pair[1])} for r in results]
        return rep, rows
    return apps.reproduce_pythagorean(n), None


def cmd_reproduce(args: argparse.Namespace, cfg: RunConfig) -> int:
    rep, rows = reproduce(args.theorem, cfg)
    return _emit_report(cfg, rep, rows)


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n-max", type=int, default=1000, help="vertex range of the truncated hull H_N")
    common.add_argument("--precision-bits", type=int, default=None,
                        help="interval precision (default: EXPPAIR_PRECISION_BITS or 128)")
    common.add_argument("--emit", choices=("text", "json", "csv"), default="text")
    common.add_argument("--out", default=None, help="write to this file instead of stdout")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--strict", action="store_true", help="test membership in the open interior")
    common.add_argument("--timestamp", action="store_true", help="add a generation-time header")

    p = argparse.ArgumentParser(prog="exppairs", description="Exact computations with the exponent-pair hull.")
    sub = p.add_subparsers(dest="cmd", required=True)

    ph = sub.add_parser("hull", help="build, export or verify H_N")
    hs = ph.add_subparsers(dest="hull_cmd", required=True)
    hb = hs.add_parser("build", parents=[common])
    hb.add_argument("--n", type=int, default=None)
    he = hs.add_parser("export", parents=[common])
    he.add_argument("--in", dest="input", default=None, help="hull JSON (default: build H_N)")
    hv = hs.add_parser("verify", parents=[common])
    hv.add_argument("--suite", required=True)
    hv.add_argument("--n", type=int, default=None)

    pv = sub.add_parser("verify", parents=[common], help="run a verification suite")
    pv.add_argument("--suite", required=True, help=f"one of {', '.join(SUITES)}")

    pd = sub.add_parser("dual", parents=[common], help="tangent-line duals of a beta envelope")
    src = pd.add_mutually_exclusive_group()
    src.add_argument("--table3", action="store_true", help="use the tabulated envelope (default)")
    src.add_argument("--envelope", default=None, help="JSON list of {A, B, X, Y} rows")
    pd.add_argument("--corrected", action="store_true", help="fix the first row's slope")

    po = sub.add_parser("optimize", parents=[common], help="optimise a fractional-linear objective over H")
    po.add_argument("--hull", default=None, help="hull JSON (default: build H_N)")
    po.add_argument("--objective", required=True)
    po.add_argument("--param", default=None)
    po.add_argument("--from", dest="from_", default=None)
    po.add_argument("--to", default=None)

    pr = sub.add_parser("reproduce", parents=[common], help="reproduce a theorem's computation")
    pr.add_argument("--theorem", required=True, help=f"one of {', '.join(THEOREMS)}")

    pc = sub.add_parser("catalog", help="the catalog of known pairs")
    cs = pc.add_subparsers(dest="catalog_cmd", required=True)
    ce = cs.add_parser("export", parents=[common])
    ce.add_argument("--family-cap", type=int, default=100)
    return p


COMMANDS: dict[str, Callable[[argparse.Namespace, RunConfig], int]] = {
    "hull": cmd_hull, "verify": cmd_verify, "dual": cmd_dual,
    "optimize": cmd_optimize, "reproduce": cmd_reproduce, "catalog": cmd_catalog,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    saved = os.environ.get("EXPPAIR_PRECISION_BITS")
    try:
        if args.precision_bits is not None:
            if args.precision_bits < 53:
                raise UsageError("--precision-bits must be at least 53")
            os.environ["EXPPAIR_PRECISION_BITS"] = str(args.precision_bits)
        cfg = RunConfig(args.n_max, default_precision_bits(), args.emit, args.workers,
                        args.strict, args.timestamp, args.out)
        return COMMANDS[args.cmd](args, cfg)
    except UsageError as exc:
        print(f"exppairs: error: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        # the reader went away (e.g. `| head`); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 1
    finally:
        if saved is None:
            os.environ.pop("EXPPAIR_PRECISION_BITS", None)
        else:
            os.environ["EXPPAIR_PRECISION_BITS"] = saved


if __name__ == "__main__":
    sys.exit(main())
