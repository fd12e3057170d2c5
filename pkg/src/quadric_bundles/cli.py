"""Command line front end: ``quadric-bundles {chambers,check,sweep,report}``.

Exit codes: 0 success, 1 a sweep found a property violation, 2 input error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import generic, model, params, rank2, report, sweep
from .errors import QuadricBundleError

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2

TAIL_CITATION = "no critical value lies below alpha_m, so all alpha < alpha_m give isomorphic moduli"
WINDOW_CITATION = "every critical value lies in [alpha_m, alpha_M] = [d - (n-1) d_L/2, d/n]"
DEFINITION_CITATION = "alpha-semistability inequalities for quadric bundles (clauses 1a, 1b, 1c, 2)"


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits with 2 already; keep the message format uniform
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"error: {message}\n")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from None


def _add_output(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--json", dest="fmt", action="store_const", const="json", help="emit a JSON report")
    g.add_argument("--text", dest="fmt", action="store_const", const="text", help="emit a text table (default)")
    p.add_argument("--seed", type=int, default=generic.DEFAULT_SEED, help="master seed for generic-rank sampling")
    p.set_defaults(fmt="text")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="quadric-bundles", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("chambers", help="walls and chambers of the stability parameter")
    p.add_argument("-n", "--n", dest="n", type=int, required=True)
    p.add_argument("-d", dest="d", type=int, required=True)
    p.add_argument("--dL", dest="dl", type=int, required=True)
    p.add_argument("-g", dest="g", type=int, default=2)
    _add_output(p)

    p = sub.add_parser("check", help="classify a bundle-spec file")
    p.add_argument("bundle_file")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--alpha", type=_rational)
    mode.add_argument("--all-chambers", action="store_true")
    _add_output(p)

    p = sub.add_parser("sweep", help="exhaustive property sweep over a grid of pattern bundles")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--deg-bound", type=int, required=True)
    p.add_argument("--dL-max", dest="dl_max", type=int, required=True)
    p.add_argument("-g", dest="g", type=int, default=2)
    _add_output(p)

    p = sub.add_parser("report", help="closed-form facts")
    kinds = p.add_subparsers(dest="kind", required=True, parser_class=_Parser)

    k = kinds.add_parser("rank2")
    k.add_argument("-g", dest="g", type=int, required=True)
    k.add_argument("-d", dest="d", type=int, required=True)
    k.add_argument("--dL", dest="dl", type=int, required=True)
    k.add_argument("--alpha", type=_rational)
    _add_output(k)

    k = kinds.add_parser("higgs")
    k.add_argument("--group", choices=("sp", "so23"), required=True)
    k.add_argument("-n", "--n", dest="n", type=int, default=2)
    k.add_argument("-g", dest="g", type=int, required=True)
    k.add_argument("-d", dest="d", type=int, required=True)
    k.add_argument("--w", type=int, choices=(0, 1))
    _add_output(k)

    k = kinds.add_parser("geometry")
    k.add_argument("-n", "--n", dest="n", type=int, default=2)
    k.add_argument("-g", dest="g", type=int, required=True)
    k.add_argument("-d", dest="d", type=int, required=True)
    k.add_argument("--dL", dest="dl", type=int, required=True)
    _add_output(k)

    k = kinds.add_parser("maxdeg")
    k.add_argument("-n", "--n", dest="n", type=int, required=True)
    k.add_argument("--dL", dest="dl", type=int, required=True)
    k.add_argument("-g", dest="g", type=int, required=True)
    _add_output(k)
    return parser


# ---------------------------------------------------------------- commands


def cmd_chambers(n: int, d: int, d_l: int, g: int = 2, seed: int = generic.DEFAULT_SEED) -> dict:
    p = params.ModuliParams(n, d, d_l, g)
    lo, hi = params.alpha_extremes(p)
    results = {
        "alpha_m": lo,
        "alpha_M": hi,
        "walls": params.enumerate_critical_values(p),
        "chambers": params.chambers(p),
    }
    inputs = {"n": n, "d": d, "dL": d_l, "genus": g}
    return report.document("chambers", inputs, results, [WINDOW_CITATION, TAIL_CITATION], seed)


def _bundle_inputs(bundle: model.PatternQuadricBundle) -> dict:
    return {
        "genus": bundle.genus,
        "dL": bundle.twist_degree,
        "degrees": list(bundle.degrees),
        "pattern": [" ".join("*" if x else "0" for x in row) for row in bundle.pattern],
    }


def cmd_check(
    bundle: model.PatternQuadricBundle,
    alpha: Optional[Fraction] = None,
    all_chambers: bool = False,
    seed: int = generic.DEFAULT_SEED,
) -> dict:
    inputs = _bundle_inputs(bundle)
    cites = [DEFINITION_CITATION]
    if not all_chambers:
        inputs["alpha"] = alpha
        verdict = model.classify(bundle, alpha, seed)
        results = {"verdict": verdict, "generic_rank": model.generic_rank(bundle, seed)}
        return report.document("check", inputs, results, cites, seed)
    inputs["all_chambers"] = True
    rows = []
    mids = []
    for c in params.chambers(bundle.params):
        verdicts = [model.classify(bundle, a, seed) for a in c.samples()]
        mids.append(verdicts[1].cls)
        rows.append({"chamber": c, "samples": list(c.samples()), "verdicts": [v.cls for v in verdicts], "verdict": verdicts[1]})
    walls = []
    chs = params.chambers(bundle.params)
    for i, c in enumerate(chs):
        at = model.classify(bundle, c.upper, seed)
        below = mids[i]
        above = mids[i + 1] if i + 1 < len(mids) else None
        zero = [w for w in at.witnesses if w.slack == 0]
        walls.append(
            {
                "wall": c.upper,
                "verdict_at_wall": at.cls,
                "below": below,
                "above": above,
                "changes": above is not None and above != below,
                "zero_slack_witnesses": zero,
            }
        )
    results = {
        "generic_rank": model.generic_rank(bundle, seed),
        "alpha_independent": model.is_alpha_independent(bundle),
        "chambers": rows,
        "walls": walls,
    }
    return report.document("check", inputs, results, cites + [WINDOW_CITATION], seed)


SWEEP_CITATIONS = [
    DEFINITION_CITATION,
    "semistable quadric bundles satisfy n*alpha <= d <= rk(gamma)*d_L/2 + (n - rk(gamma))*alpha",
    "alpha_M^- semistable quadric bundles have semistable underlying vector bundle",
    "at d = n d_L/2 and alpha < alpha_M, gamma is a symmetric isomorphism",
]


def cmd_sweep(n_max: int, deg_bound: int, dl_max: int, g: int = 2, seed: int = generic.DEFAULT_SEED) -> dict:
    res = sweep.run_sweep(n_max, deg_bound, dl_max, g, seed)
    inputs = {"n_max": n_max, "deg_bound": deg_bound, "dL_max": dl_max, "genus": g}
    return report.document("sweep", inputs, res.to_dict(), SWEEP_CITATIONS, seed)


def cmd_report(kind: str, seed: int = generic.DEFAULT_SEED, **kw) -> dict:
    if kind == "rank2":
        g, d, dl, alpha = kw["g"], kw["d"], kw["dl"], kw.get("alpha")
        results: dict = {"report": rank2.rank2_report(g, d, dl)}
        if alpha is not None:
            verdict = rank2.connectedness_verdict(g, d, dl, alpha)
            results["connectedness_at_alpha"] = verdict
            if verdict != rank2.UNKNOWN:
                results["citations"] = {"connectedness_at_alpha": rank2.CITATIONS["rank2_connected"]}
        inputs = {"genus": g, "d": d, "dL": dl, "alpha": alpha}
    elif kind == "higgs":
        group = rank2.SP2N if kw["group"] in ("sp", rank2.SP2N) else rank2.SO023
        results = {"report": rank2.higgs_report(group, kw["n"], kw["g"], kw["d"], kw.get("w"))}
        inputs = {"group": group, "n": kw["n"], "genus": kw["g"], "d": kw["d"], "w": kw.get("w")}
    elif kind == "geometry":
        n, g, d, dl = kw.get("n", 2), kw["g"], kw["d"], kw["dl"]
        try:
            fiber = rank2.fiber_dimension(n, g, d, dl)
        except QuadricBundleError as exc:
            fiber = None
            results = {"fiber": None, "fiber_not_asserted": str(exc)}
        else:
            results = {"fiber": fiber}
        if n == 2 and fiber is not None:
            results["fixed_determinant_fiber_dim"] = rank2.fixed_determinant_fiber_dimension(g, d, dl)
            results["citations"] = {"fixed_determinant_fiber_dim": rank2.CITATIONS["fixed_det_fiber"]}
        results["fixed_determinant"] = rank2.cohomology_report(g, d, dl)
        inputs = {"n": n, "genus": g, "d": d, "dL": dl}
    elif kind == "maxdeg":
        results = {"report": rank2.max_degree_report(kw["n"], kw["dl"], kw["g"])}
        inputs = {"n": kw["n"], "dL": kw["dl"], "genus": kw["g"]}
    else:
        raise QuadricBundleError(f"unknown report kind {kind!r}")
    return report.document(f"report {kind}", inputs, results, report.collect_citations(results), seed)


# ---------------------------------------------------------------- text output


def _r(x) -> str:
    if isinstance(x, dict) and "num" in x:
        return str(Fraction(x["num"], x["den"]))
    return str(x)


def render_text(doc: dict) -> str:
    cmd, res = doc["command"], doc["results"]
    lines = [f"# {cmd}  (version {doc['tool_version']}, seed {doc['seed']})"]
    if cmd == "chambers":
        lines.append(f"alpha_m = {_r(res['alpha_m'])}   alpha_M = {_r(res['alpha_M'])}")
        lines.append("walls:")
        for w in res["walls"]:
            kinds = ", ".join(sorted({p["kind"] for p in w["provenance"]}))
            lines.append(f"  {_r(w['value']):>8}   {kinds}")
        lines.append("chambers:")
        for c in res["chambers"]:
            lo = "-inf" if c["lower"] is None else _r(c["lower"])
            lines.append(f"  ({lo}, {_r(c['upper'])})")
    elif cmd == "check" and "verdict" in res:
        v = res["verdict"]
        lines.append(f"alpha = {_r(doc['inputs']['alpha'])}: {v['class']}  (generic rank {res['generic_rank']})")
        for w in v["witnesses"]:
            sub = w["subobject"]
            what = "alpha > d/n" if sub is None else f"{sub['kind']} {sub.get('subset', sub.get('rows'))}"
            if sub and "outer" in sub:
                what += f" < {sub['outer']}"
            lines.append(f"  clause {w['clause']:<10} slack {_r(w['slack']):>6}  {what}")
    elif cmd == "check":
        lines.append(f"generic rank {res['generic_rank']}, alpha-independent {res['alpha_independent']}")
        for row in res["chambers"]:
            c = row["chamber"]
            lo = "-inf" if c["lower"] is None else _r(c["lower"])
            lines.append(f"  ({lo}, {_r(c['upper'])}): {row['verdict']['class']}")
        for w in res["walls"]:
            mark = "  <- verdict changes" if w["changes"] else ""
            lines.append(f"  wall {_r(w['wall'])}: {w['verdict_at_wall']}{mark}")
    elif cmd == "sweep":
        lines.append(f"bundles {res['bundles']}, evaluations {res['evaluations']}")
        for name, p in res["properties"].items():
            lines.append(f"  {name:<40} checked {p['checked']:>9}  violations {p['violations']}")
        lines.append("all properties pass" if res["all_passed"] else "VIOLATIONS FOUND")
    else:
        lines.extend(_flatten(res))
    return "\n".join(lines) + "\n"


def _flatten(obj, prefix: str = "") -> list[str]:
    out = []
    if isinstance(obj, dict) and "num" in obj and "den" in obj:
        return [f"{prefix} = {_r(obj)}"]
    if isinstance(obj, dict):
        for k in sorted(obj):
            if k == "citations":
                continue
            out.extend(_flatten(obj[k], f"{prefix}.{k}" if prefix else k))
        return out
    if isinstance(obj, list) and all(isinstance(v, dict) and "num" in v for v in obj):
        return [f"{prefix} = [{', '.join(_r(v) for v in obj)}]"]
    return [f"{prefix} = {obj}"]


# ---------------------------------------------------------------- entry point


def run(args: argparse.Namespace) -> tuple[dict, int]:
    if args.command == "chambers":
        return cmd_chambers(args.n, args.d, args.dl, args.g, args.seed), EXIT_OK
    if args.command == "check":
        try:
            with open(args.bundle_file, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise QuadricBundleError(f"cannot read {args.bundle_file}: {exc.strerror}") from None
        bundle = model.parse_bundle_spec(text)
        return cmd_check(bundle, args.alpha, args.all_chambers, args.seed), EXIT_OK
    if args.command == "sweep":
        doc = cmd_sweep(args.n_max, args.deg_bound, args.dl_max, args.g, args.seed)
        return doc, EXIT_OK if doc["results"]["all_passed"] else EXIT_VIOLATION
    kw = {k: v for k, v in vars(args).items() if k not in ("command", "kind", "fmt", "seed")}
    return cmd_report(args.kind, args.seed, **kw), EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc, code = run(args)
    except QuadricBundleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(report.dumps(doc) if args.fmt == "json" else render_text(doc))
    return code


if __name__ == "__main__":
    raise SystemExit(main())
