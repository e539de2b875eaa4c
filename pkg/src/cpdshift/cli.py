"""Command-line surface.

Subcommands: classify, subnormal, similar, model, compare, series, examples.
Triplet specs are JSON ({"b": ..., "c": ..., "nu": {"atoms": [[x, w], ...]}})
given inline, as a file path, or "-" for stdin.  Exit codes: 0 decided,
2 inconclusive, 1 input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys

import numpy as np

from .core import ScalarTriplet, ShiftSequences, classify_type, validate_triplet
from .quasiaffine import intertwiner_defect, quasi_affine_test, similarity_test
from .similarity import (
    ModelDegenerateError,
    b2_identity_check,
    criterion_ineqsuf,
    criterion_kdwq,
    criterion_nyttrs,
    criterion_weight_band,
    model_subnormal,
    similar_by_beta,
)
from .subnormality import (
    dichotomy_check,
    hankel_psd_oracle,
    is_subnormal,
    necessary_conditions,
)
from .verdict import NotApplicableError, Verdict
from .wab import generate_3uwre, wab_classify

log = logging.getLogger("cpdshift")

EXIT_DECIDED = 0
EXIT_INPUT_ERROR = 1
EXIT_INCONCLUSIVE = 2


class InputError(Exception):
    pass


# -- serialization -----------------------------------------------------------


def _fmt(x: float) -> str:
    return format(x, ".17g")


def to_jsonable(obj):
    """Recursively convert report objects to plain JSON data."""
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "to_json"):
        return to_jsonable(obj.to_json())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 0) -> str:
    """JSON text with every float printed to 17 significant digits."""

    def emit(o, depth):
        pad = " " * (indent * depth)
        pad_in = " " * (indent * (depth + 1))
        nl = "\n" if indent else ""
        sep = "," + nl
        if o is None:
            return "null"
        if isinstance(o, bool):
            return "true" if o else "false"
        if isinstance(o, int):
            return str(o)
        if isinstance(o, float):
            if math.isnan(o):
                return '"nan"'
            if math.isinf(o):
                return '"inf"' if o > 0 else '"-inf"'
            return _fmt(o)
        if isinstance(o, str):
            return json.dumps(o)
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = sep.join(
                f"{pad_in}{json.dumps(str(k))}: {emit(v, depth + 1)}" for k, v in o.items()
            )
            return "{" + nl + items + nl + pad + "}"
        if isinstance(o, (list, tuple)):
            if not o:
                return "[]"
            items = sep.join(f"{pad_in}{emit(v, depth + 1)}" for v in o)
            return "[" + nl + items + nl + pad + "]"
        raise TypeError(f"cannot serialize {type(o).__name__}")

    return emit(to_jsonable(obj), 0)


def _print_report(report) -> None:
    print(dumps(report, indent=2))


# -- input loading ------------------------------------------------------------


def _load_json_text(spec: str) -> dict:
    if spec == "-":
        text = sys.stdin.read()
    elif spec.lstrip().startswith("{"):
        text = spec
    else:
        try:
            with open(spec, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read spec file {spec!r}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc


def load_triplet(spec: str) -> ScalarTriplet:
    obj = _load_json_text(spec)
    try:
        return ScalarTriplet.from_json(obj)
    except (ValueError, TypeError) as exc:
        raise InputError(f"invalid triplet spec: {exc}") from exc


# -- per-command reports ------------------------------------------------------


def _validation_header(t: ScalarTriplet) -> tuple[dict, Verdict]:
    v = validate_triplet(t)
    return {"input": t, "valid": v}, v


def classify_report(t: ScalarTriplet, n_max: int) -> tuple[dict, int]:
    report, v = _validation_header(t)
    report["command"] = "classify"
    if not v.is_yes:
        report["verdict"] = "InvalidTriplet" if v.is_no else "Inconclusive"
        return report, EXIT_DECIDED if v.is_no else EXIT_INCONCLUSIVE
    seqs = ShiftSequences(t, validation=v)
    label = classify_type(t, seqs=seqs)
    betas = [seqs.beta(n) for n in range(1, max(2, n_max) + 1)]
    report["type"] = label
    report["beta"] = {
        "beta0": seqs.beta(0),
        "min_over_1_to_n_max": min(betas),
        "all_positive_1_to_n_max": all(b > 0.0 for b in betas),
        "n_max": n_max,
    }
    report["verdict"] = f"Type{label.kind}"
    report["citation"] = "defect-type-classification"
    return report, EXIT_DECIDED


def subnormal_report(t: ScalarTriplet, hankel_order: int, tol: float) -> tuple[dict, int]:
    report, v = _validation_header(t)
    report["command"] = "subnormal"
    if not v.is_yes:
        report["verdict"] = "InvalidTriplet" if v.is_no else "Inconclusive"
        return report, EXIT_DECIDED if v.is_no else EXIT_INCONCLUSIVE
    seqs = ShiftSequences(t, validation=v)
    sub = is_subnormal(t, seqs=seqs)
    moments = [seqs.gamma(n) for n in range(2 * hankel_order + 2)]
    oracle = hankel_psd_oracle(moments, hankel_order, tol)
    report["subnormal"] = sub
    report["hankel_oracle"] = oracle
    report["oracles_agree"] = (
        None
        if (sub.is_inconclusive or oracle.is_inconclusive)
        else sub.outcome == oracle.outcome
    )
    report["verdict"] = {"yes": "Subnormal", "no": "NotSubnormal"}.get(
        sub.outcome, "Inconclusive"
    )
    report["citation"] = sub.citation
    return report, EXIT_DECIDED if not sub.is_inconclusive else EXIT_INCONCLUSIVE


def similar_report(t: ScalarTriplet, n_max: int) -> tuple[dict, int]:
    report, v = _validation_header(t)
    report["command"] = "similar"
    if not v.is_yes:
        report["verdict"] = "InvalidTriplet" if v.is_no else "Inconclusive"
        return report, EXIT_DECIDED if v.is_no else EXIT_INCONCLUSIVE
    seqs = ShiftSequences(t, validation=v)
    label = classify_type(t, seqs=seqs)
    sub = is_subnormal(t, seqs=seqs)
    nec = necessary_conditions(t, seqs=seqs)
    report["type"] = label
    report["subnormal"] = sub
    report["necessary_conditions"] = nec

    criteria: dict[str, object] = {}
    dich = None
    if label.kind in ("I", "II"):
        dich = dichotomy_check(t, seqs=seqs)
        report["dichotomy"] = dich
    else:
        criteria["similar_by_beta"] = similar_by_beta(t, n_scan=n_max, seqs=seqs)
        criteria["criterion_kdwq"] = criterion_kdwq(t, seqs=seqs)
        try:
            criteria["criterion_nyttrs"] = criterion_nyttrs(t, seqs=seqs)
        except NotApplicableError as exc:
            criteria["criterion_nyttrs"] = {"skipped": str(exc)}
        criteria["criterion_weight_band"] = criterion_weight_band(t, n_hi=n_max, seqs=seqs)
        criteria["criterion_ineqsuf"] = criterion_ineqsuf(t, seqs=seqs)
        report["criteria"] = criteria

    # aggregation precedence: Subnormal > NotSimilar > Similar > Inconclusive
    if sub.is_yes:
        verdict, citation = "Subnormal", sub.citation
    elif label.kind in ("I", "II") and dich is not None and dich.is_no:
        verdict, citation = "NotSimilar", dich.citation
    elif nec.not_similar:
        verdict = "NotSimilar"
        citation = f"similarity-necessary-conditions({','.join(nec.failed_ids)})"
    else:
        firing = [
            c for c in criteria.values() if isinstance(c, Verdict) and c.is_yes
        ]
        if firing:
            verdict, citation = "Similar", firing[0].citation
        else:
            verdict, citation = "Inconclusive", ""
    report["verdict"] = verdict
    if citation:
        report["citation"] = citation
    return report, EXIT_DECIDED if verdict != "Inconclusive" else EXIT_INCONCLUSIVE


def model_report(t: ScalarTriplet, n_max: int) -> tuple[dict, int]:
    report, v = _validation_header(t)
    report["command"] = "model"
    if not v.is_yes:
        report["verdict"] = "InvalidTriplet" if v.is_no else "Inconclusive"
        return report, EXIT_DECIDED if v.is_no else EXIT_INCONCLUSIVE
    seqs = ShiftSequences(t, validation=v)
    try:
        model = model_subnormal(t, seqs=seqs)
    except ModelDegenerateError as exc:
        report["model"] = None
        report["verdict"] = "ModelDegenerate"
        report["reason"] = str(exc)
        return report, EXIT_DECIDED
    count = max(2, n_max)
    report["model"] = {
        "mu0": model.mu0,
        "berger": model.berger,
        "moments": model.moments(count),
        "weights": model.weights(count),
    }
    report["identity_check"] = b2_identity_check(t, m_max=count, seqs=seqs)
    report["verdict"] = "Model"
    report["citation"] = "model-shift"
    return report, EXIT_DECIDED


def compare_report(ta: ScalarTriplet, tb: ScalarTriplet, n_max: int) -> tuple[dict, int]:
    report: dict = {"command": "compare", "input_a": ta, "input_b": tb}
    for name, t in (("a", ta), ("b", tb)):
        v = validate_triplet(t)
        report[f"valid_{name}"] = v
        if not v.is_yes:
            report["verdict"] = "InvalidTriplet"
            return report, EXIT_DECIDED if v.is_no else EXIT_INCONCLUSIVE
    # quasi_affine_test(x, y) bounds the y-moments by the x-moments, i.e. it
    # decides whether x is a quasi-affine transform of y
    report["a_transform_of_b"] = quasi_affine_test(ta, tb, n_max)
    report["b_transform_of_a"] = quasi_affine_test(tb, ta, n_max)
    sim = similarity_test(ta, tb, n_max)
    defect, scale = intertwiner_defect(ta, tb, m=32)
    report["similarity"] = sim
    report["intertwiner"] = {
        "defect": defect,
        "scale": scale,
        "within_tolerance": defect <= 1e-12 * scale,
    }
    report["verdict"] = {"yes": "Similar", "no": "NotSimilar"}.get(sim.outcome, "Inconclusive")
    report["citation"] = sim.citation
    return report, EXIT_DECIDED if not sim.is_inconclusive else EXIT_INCONCLUSIVE


def series_rows(t: ScalarTriplet, n_max: int):
    v = validate_triplet(t)
    if not v.is_yes:
        raise InputError(f"triplet is not a valid shift generator: {v.outcome}")
    seqs = ShiftSequences(t, validation=v)
    for n in range(n_max + 1):
        yield {
            "n": n,
            "gamma": seqs.gamma(n),
            "lambda": seqs.weight(n),
            "beta": seqs.beta(n),
            "log_gamma": seqs.log_gamma(n),
        }


# -- argument parsing ---------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cpdshift",
        description="Classify CPD weighted shifts and decide subnormality/similarity.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    def add_common(p, n_max_default, default_fmt="json"):
        p.add_argument("--n-max", type=int, default=n_max_default)
        p.add_argument("--tol", type=float, default=1e-8)
        p.add_argument("--hankel-order", type=int, default=8)
        fmt = p.add_mutually_exclusive_group()
        fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
        fmt.add_argument("--csv", dest="fmt", action="store_const", const="csv")
        p.set_defaults(fmt=default_fmt)

    for name, n_default in (
        ("classify", 64),
        ("subnormal", 64),
        ("similar", 512),
        ("model", 32),
    ):
        p = sub.add_parser(name)
        p.add_argument("spec", nargs="?", help="triplet JSON, file path, or -")
        p.add_argument("--batch", metavar="FILE", help="JSON-lines file of triplet specs")
        add_common(p, n_default)

    p = sub.add_parser("compare")
    p.add_argument("spec_a")
    p.add_argument("spec_b")
    add_common(p, 512)

    p = sub.add_parser("series")
    p.add_argument("spec")
    add_common(p, 64, default_fmt="csv")

    p = sub.add_parser("examples")
    ex_sub = p.add_subparsers(dest="example_kind", required=True)
    pw = ex_sub.add_parser("wab")
    pw.add_argument("--a", type=float, required=True)
    pw.add_argument("--b", type=float, required=True)
    for case in ("case1", "case2", "case3"):
        pc = ex_sub.add_parser(case)
        pc.add_argument("--b", type=float, default=0.0)
        pc.add_argument("--c", type=float, default=0.0)
        pc.add_argument("--t", type=float, default=None)
        pc.add_argument("--alpha", type=float, default=None)
        pc.add_argument("--point", type=float, default=None)
        if case == "case3":
            pc.add_argument("--tau", type=float, default=None)
            pc.add_argument("--theta", type=float, default=None)
            pc.add_argument("--positive-c", action="store_true")
    return parser


def _single_spec_command(args) -> tuple:
    t = load_triplet(args.spec)
    if args.cmd == "classify":
        return classify_report(t, args.n_max)
    if args.cmd == "subnormal":
        return subnormal_report(t, args.hankel_order, args.tol)
    if args.cmd == "similar":
        return similar_report(t, args.n_max)
    if args.cmd == "model":
        return model_report(t, args.n_max)
    raise AssertionError(args.cmd)


def _run_batch(args) -> int:
    worst = EXIT_DECIDED
    try:
        with open(args.batch, "r", encoding="utf-8") as fh:
            lines = [ln for ln in fh if ln.strip()]
    except OSError as exc:
        print(f"error: cannot read batch file: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    for i, line in enumerate(lines):
        entry_args = argparse.Namespace(**vars(args))
        entry_args.spec = line.strip()
        try:
            report, code = _single_spec_command(entry_args)
            report["batch_index"] = i
            print(dumps(report))
        except InputError as exc:
            print(dumps({"batch_index": i, "error": str(exc)}))
            code = EXIT_INPUT_ERROR
        if code == EXIT_INPUT_ERROR:
            worst = EXIT_INPUT_ERROR
        elif code == EXIT_INCONCLUSIVE and worst != EXIT_INPUT_ERROR:
            worst = EXIT_INCONCLUSIVE
    return worst


def main(argv=None) -> int:
    level = os.environ.get("CPDSHIFT_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        if args.cmd in ("classify", "subnormal", "similar", "model"):
            if getattr(args, "batch", None):
                return _run_batch(args)
            if not args.spec:
                raise InputError("a triplet spec (or --batch FILE) is required")
            report, code = _single_spec_command(args)
            _print_report(report)
            return code

        if args.cmd == "compare":
            ta = load_triplet(args.spec_a)
            tb = load_triplet(args.spec_b)
            report, code = compare_report(ta, tb, args.n_max)
            _print_report(report)
            return code

        if args.cmd == "series":
            t = load_triplet(args.spec)
            rows = list(series_rows(t, args.n_max))
            if args.fmt == "csv":
                print("n,gamma,lambda,beta,log_gamma")
                for r in rows:
                    cells = [str(r["n"])] + [
                        _fmt(r[k]) if math.isfinite(r[k]) else "inf"
                        for k in ("gamma", "lambda", "beta", "log_gamma")
                    ]
                    print(",".join(cells))
            else:
                print(dumps(rows, indent=2))
            return EXIT_DECIDED

        if args.cmd == "examples":
            return _run_examples(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    raise AssertionError(args.cmd)


def _run_examples(args) -> int:
    if args.example_kind == "wab":
        cl = wab_classify(args.a, args.b)
        if not cl.cpd:
            print(
                f"error: W(a={args.a}, b={args.b}) is not CPD (theta = {cl.theta})",
                file=sys.stderr,
            )
            return EXIT_INPUT_ERROR
        doc = cl.triplet.to_json()
        doc["meta"] = {"family": "wab", "classification": cl.to_json()}
        print(dumps(doc, indent=2))
        return EXIT_DECIDED
    case = {"case1": 1, "case2": 2, "case3": 3}[args.example_kind]
    if case == 1:
        example = generate_3uwre(1, b=args.b, c=args.c, alpha=args.alpha, point=args.point)
    elif case == 2:
        example = generate_3uwre(
            2, b=args.b, c=args.c, t=args.t, alpha=args.alpha, point=args.point
        )
    else:
        example = generate_3uwre(
            3,
            tau=args.tau,
            t=args.t,
            theta=args.theta,
            alpha=args.alpha,
            with_positive_c=args.positive_c,
        )
    print(dumps(example.to_json(), indent=2))
    return EXIT_DECIDED


if __name__ == "__main__":
    sys.exit(main())
