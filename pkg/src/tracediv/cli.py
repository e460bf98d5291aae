"""Command-line front end.

Exit status: 0 on success, 1 when a requested cross-check fails, 2 on bad
input.  Every report echoes its inputs and seed so it can be re-run.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from typing import Sequence

from . import __version__
from .abelian import (
    build_trace_representation,
    cyclic_oracle_valuation,
    delsarte_mceliece_valuation,
    mceliece_for_spec,
)
from .artin_schreier import (
    DEFAULT_SEARCH_BUDGET,
    bound_report,
    count_solutions,
    homogeneous_bound,
    polynomial_report,
    search_extremal,
)
from .config import load_abelian, load_matrix, load_polynomial
from .criterion import DEFAULT_TUPLE_LIMIT, criterion_valuation
from .errors import ConfigError, EnumerationLimitExceeded, NotFound, TraceDivError
from .field_tower import build_tower
from .suites import SUITES, verify_suite
from .trace_code import DEFAULT_ENUMERATION_LIMIT, bruteforce_valuation, weight_distribution

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INPUT = 0, 1, 2


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tracediv", description="p-adic divisibility of trace codes")
    parser.add_argument("--version", action="version", version=f"tracediv {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "json", "csv"), default="human")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--workers", type=_positive, default=None,
                        help="worker threads (default: $TRACEDIV_WORKERS or 1)")
    common.add_argument("--limit", type=_positive, default=None, help="enumeration limit")
    common.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("valuation", parents=[common], help="valuation of a trace code from a matrix file")
    v.add_argument("--matrix", required=True)
    v.add_argument("--oracle", action="store_true", help="cross-check by enumerating every codeword")
    v.add_argument("--weights", action="store_true", help="include the weight distribution")
    v.add_argument("--cap", type=_positive, default=None)
    v.add_argument("--primitive-search", action="store_true",
                   help="use the smallest primitive element if x is not primitive")

    a = sub.add_parser("abelian", parents=[common], help="valuation of an abelian code")
    a.add_argument("--spec", required=True)
    a.add_argument("--oracle", action="store_true")
    a.add_argument("--mceliece", action="store_true")
    a.add_argument("--criterion", action="store_true", help="also run the general criterion on the matrix")
    a.add_argument("--expand-cosets", action="store_true", help="add the q-orbit of every row tuple")

    s = sub.add_parser("artin-schreier", parents=[common], help="counts and bounds for f = y^q - y")
    s.add_argument("--poly")
    s.add_argument("--bounds", action="store_true")
    s.add_argument("--count", action="store_true")
    s.add_argument("--search-extremal", nargs=2, type=_positive, metavar=("D", "K"))
    s.add_argument("--field", nargs=3, type=_positive, metavar=("P", "E", "M"),
                   help="tower for --search-extremal when no --poly is given")
    s.add_argument("--budget", type=_positive, default=DEFAULT_SEARCH_BUDGET)

    c = sub.add_parser("verify", parents=[common], help="run verification suites")
    for name in SUITES:
        c.add_argument(f"--{name}", action="store_true", dest=name.replace("-", "_"))
    c.add_argument("--all", action="store_true")
    c.add_argument("--q", type=_positive, action="append", help="restrict field-size suites to this q")
    c.add_argument("--count", type=_positive, default=500, help="matrices for oracle-equivalence")
    return parser


# -- commands ----------------------------------------------------------------

def _cmd_valuation(args) -> tuple[dict, int]:
    G, _ = load_matrix(args.matrix, primitive_search=args.primitive_search)
    limit = args.limit or DEFAULT_TUPLE_LIMIT
    crit = criterion_valuation(G, args.cap, limit=limit, workers=args.workers)
    report = {"tower": G.tower.describe(),
              "inputs": {"matrix": G.to_literals(), "cap": args.cap, "oracle": args.oracle},
              "criterion": crit.to_json()}
    status = EXIT_OK
    if args.oracle:
        orc = bruteforce_valuation(G, limit=args.limit or DEFAULT_ENUMERATION_LIMIT, workers=args.workers)
        agree = crit.valuation == orc.valuation
        report["oracle"] = {"valuation": orc.valuation.to_json(),
                            "witness": None if orc.witness is None else [G.tower.rep_str(a) for a in orc.witness],
                            "degenerate": orc.degenerate}
        report["cross_check"] = {"criterion": str(crit.valuation), "oracle": str(orc.valuation),
                                 "pass": agree}
        status = EXIT_OK if agree else EXIT_CHECK_FAILED
    if args.weights:
        wd = weight_distribution(G, limit=args.limit or DEFAULT_ENUMERATION_LIMIT, workers=args.workers)
        report["weights"] = {str(w): c for w, c in wd.counts.items()}
        report["table"] = [{"weight": w, "count": c} for w, c in wd.counts.items()]
    return report, status


def _cmd_abelian(args) -> tuple[dict, int]:
    spec, _ = load_abelian(args.spec)
    if args.expand_cosets:
        spec = spec.expand_cosets()
    prog = delsarte_mceliece_valuation(spec, **({"limit": args.limit} if args.limit else {}))
    Qm1 = spec.q**spec.m - 1
    report = {"inputs": {**spec.describe(), "expand_cosets": args.expand_cosets},
              "gamma": [f"beta^{Qm1 // n}" for n in spec.group],
              "program": prog.to_json()}
    checks = {}
    if args.mceliece:
        mc = mceliece_for_spec(spec)
        report["mceliece"] = {"ell": mc.ell, "exponent": mc.exponent, "witness": list(mc.witness),
                             "prime_field_exponent": mc.prime_field_exponent}
        checks["mceliece"] = str(mc.exponent)
    if args.oracle or args.criterion:
        G = None
        try:
            G = build_trace_representation(spec)
        except TraceDivError as exc:
            report["notes"] = [f"trace matrix not built: {exc}"]
        if args.criterion and G is not None:
            crit = criterion_valuation(G, workers=args.workers)
            report["criterion"] = crit.to_json()
            checks["criterion"] = str(crit.valuation)
        if args.oracle:
            orc = None
            if G is not None:
                try:
                    orc = bruteforce_valuation(G, workers=args.workers)
                    report["oracle"] = {"kind": "trace-enumeration", "valuation": orc.valuation.to_json()}
                    checks["oracle"] = str(orc.valuation)
                except EnumerationLimitExceeded:
                    pass
            if orc is None and len(spec.group) == 1 and spec.e == 1:
                v = cyclic_oracle_valuation(spec.group[0], spec.p, [r[0] for r in spec.rows])
                report["oracle"] = {"kind": "cyclic-polynomial", "valuation": v.to_json()}
                checks["oracle"] = str(v)
    status = EXIT_OK
    if checks:
        checks["program"] = str(prog.valuation)
        agree = len(set(checks.values())) == 1
        report["cross_check"] = {**checks, "pass": agree}
        status = EXIT_OK if agree else EXIT_CHECK_FAILED
    return report, status


def _cmd_artin_schreier(args) -> tuple[dict, int]:
    if not args.poly and not args.search_extremal:
        raise ConfigError("artin-schreier needs --poly or --search-extremal")
    report: dict = {}
    status = EXIT_OK
    tower = None
    if args.poly:
        f, _ = load_polynomial(args.poly)
        tower = f.tower
        report["tower"] = tower.describe()
        report["inputs"] = {"k": f.k, "terms": f.to_terms(), "polynomial": str(f)}
        if args.count or not args.bounds:
            N, v = count_solutions(f, **({"limit": args.limit} if args.limit else {}))
            report["count"] = {"N": N, "valuation": v.to_json()}
        if args.bounds:
            rep = polynomial_report(f, count=True)
            report["bounds"] = rep.to_json()
            if rep.violations():
                status = EXIT_CHECK_FAILED
    if args.search_extremal:
        d, k = args.search_extremal
        if tower is None:
            if not args.field:
                raise ConfigError("--search-extremal needs --field P E M or --poly")
            try:
                tower = build_tower(*args.field)
            except TraceDivError as exc:
                raise ConfigError(str(exc)) from None
            report["tower"] = tower.describe()
        entry = {"d": d, "k": k, "budget": args.budget, "seed": args.seed,
                 "target": homogeneous_bound(d, k, tower),
                 "bounds": bound_report(d, k, tower).to_json()}
        try:
            res = search_extremal(d, k, tower, args.budget, seed=args.seed)
            entry.update({"status": "found", "polynomial": str(res.polynomial),
                          "terms": res.polynomial.to_terms(), "measured": res.measured.to_json(),
                          "candidates": res.candidates})
        except NotFound as exc:
            entry.update({"status": "inconclusive", "best": exc.best, "message": str(exc)})
        report["search"] = entry
        report["table"] = [{"d": d, "k": k, "target": entry["target"], "status": entry["status"],
                            "measured": entry.get("measured", {}).get("value") if entry["status"] == "found"
                            else None}]
    return report, status


def _cmd_verify(args) -> tuple[dict, int]:
    chosen = [n for n in SUITES if args.all or getattr(args, n.replace("-", "_"))]
    if not chosen:
        raise ConfigError("choose at least one suite (or --all)")
    results = []
    for name in chosen:
        params = {}
        if args.q and name in ("stickelberger", "fourier", "lemma23"):
            params["qs"] = args.q
        if name == "oracle-equivalence":
            params.update(count=args.count, seed=args.seed, workers=args.workers)
        if name == "lemma23":
            params["seed"] = args.seed
        results.append(verify_suite(name, **params))
    ok = all(r["pass"] for r in results)
    table = [{"suite": r["selector"], **row} for r in results for row in r["rows"]]
    return {"suites": results, "pass": ok, "table": table}, EXIT_OK if ok else EXIT_CHECK_FAILED


COMMANDS = {
    "valuation": _cmd_valuation,
    "abelian": _cmd_abelian,
    "artin-schreier": _cmd_artin_schreier,
    "verify": _cmd_verify,
}


# -- output ------------------------------------------------------------------

def _scalar(v):
    return json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v


def render_csv(report: dict) -> str:
    rows = report.get("table")
    if rows is None:
        rows = [{"key": k, "value": _scalar(v)} for k, v in report.items() if k != "timing"]
    cols: list[str] = []
    for r in rows:
        for c in r:
            if c not in cols:
                cols.append(c)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({c: _scalar(r.get(c)) for c in cols})
    return buf.getvalue()


def _human_lines(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    out = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if k == "table":
                continue
            if isinstance(v, (dict, list)) and v and not _is_flat_list(v) and not _is_valuation(v):
                out.append(f"{pad}{k}:")
                out.extend(_human_lines(v, indent + 1))
            else:
                out.append(f"{pad}{k}: {_fmt(v)}")
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, dict):
                out.append(f"{pad}- " + ", ".join(f"{k}={_fmt(v)}" for k, v in item.items()))
            else:
                out.append(f"{pad}- {_fmt(item)}")
    return out


def _is_valuation(v) -> bool:
    return isinstance(v, dict) and v.get("kind") in ("finite", "at_least", "infinite")


def _is_flat_list(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _fmt(v) -> str:
    if _is_valuation(v):
        return {"finite": str(v.get("value")), "at_least": f">={v.get('value')}", "infinite": "inf"}[v["kind"]]
    if isinstance(v, (dict, list)):
        return json.dumps(v)
    return str(v)


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        return render_csv(report)
    return "\n".join(_human_lines(report)) + "\n"


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        body, status = COMMANDS[args.command](args)
    except (ConfigError, TraceDivError, ValueError) as exc:
        print(f"tracediv: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = {"tool": "tracediv", "version": __version__, "command": args.command,
              "seed": args.seed, **body,
              "timing": {"seconds": round(time.perf_counter() - start, 6)}}
    text = render(report, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


def main() -> None:
    sys.exit(run())
