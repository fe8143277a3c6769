"""Command-line front end.

Exit codes: 0 true/success, 1 false/disagreement, 2 usage or formula syntax
error, 3 invalid model or other domain error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from . import io
from .core import causal_graph
from .errors import CausalTeamError, FormulaSyntaxError
from .formula.nodes import is_co, size
from .formula.parser import parse, parse_pairs
from .formula.printer import to_text
from .formula.sugar import expand_sugar
from .rescaling import canonical, check_definability, psi_formula
from .sem_bridge import markov_check, multiteam_to_sem, sem_to_multiteam
from .semantics import cond_prob, intervene, prob, restrict, satisfies
from .transforms import classify_rung, compile_cneg, normal_form

EXIT_TRUE, EXIT_FALSE, EXIT_USAGE, EXIT_INVALID = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(args: argparse.Namespace, text: str, payload: dict) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    elif text:
        print(text)


def _write_json(args: argparse.Namespace, data: dict) -> None:
    text = json.dumps(data, indent=2)
    if getattr(args, "output", None):
        Path(args.output).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _signature(args: argparse.Namespace):
    return io.load_signature(args.sig) if args.sig else None


def _formulas(args: argparse.Namespace) -> list[str]:
    if args.file:
        lines = Path(args.file).read_text(encoding="utf-8").splitlines()
        texts = [ln.strip() for ln in lines if ln.strip() and not ln.lstrip().startswith("#")]
    elif args.formula is not None:
        texts = [args.formula]
    else:
        raise UsageError("give a formula or --file")
    return texts


def cmd_check(args: argparse.Namespace) -> int:
    m = io.load_model(args.model)
    results = []
    for text in _formulas(args):
        phi = parse(text, m.sig)
        res = satisfies(m, phi, trace=args.trace)
        results.append((text, res))
    if args.json:
        payload: Any = [
            {"formula": t, "verdict": r.verdict, **({"trace": r.trace.to_dict()} if r.trace else {})}
            for t, r in results
        ]
        print(json.dumps(payload[0] if len(payload) == 1 and not args.file else payload, indent=2))
    else:
        for text, res in results:
            verdict = "true" if res.verdict else "false"
            print(f"{verdict}\t{text}" if args.file else verdict)
            if res.trace:
                print(res.trace.render())
    return EXIT_TRUE if all(r.verdict for _, r in results) else EXIT_FALSE


def _co(text: str, sig) -> Any:
    f = parse(text, sig)
    if not is_co(f):
        raise FormulaSyntaxError("expected an event-level formula", 0, text)
    return f


def cmd_prob(args: argparse.Namespace) -> int:
    m = io.load_model(args.model)
    alpha = _co(args.formula, m.sig)
    if args.given:
        p = cond_prob(m, alpha, _co(args.given, m.sig))
    else:
        p = prob(m, alpha)
    text = "undefined" if p is None else str(p)
    _emit(args, text, {"formula": args.formula, "given": args.given, "probability": None if p is None else text})
    return EXIT_TRUE


def cmd_intervene(args: argparse.Namespace) -> int:
    m = io.load_model(args.model)
    pairs = parse_pairs(args.pairs, m.sig)
    _write_json(args, io.model_to_json(intervene(m, pairs)))
    return EXIT_TRUE


def cmd_restrict(args: argparse.Namespace) -> int:
    m = io.load_model(args.model)
    _write_json(args, io.model_to_json(restrict(m, expand_sugar(_co(args.formula, m.sig), m.sig))))
    return EXIT_TRUE


def cmd_nf(args: argparse.Namespace) -> int:
    sig = _signature(args)
    nf = normal_form(parse(args.formula, sig), sig)
    report = classify_rung(nf)
    lines = [to_text(nf.formula), f"rung: {report.max_rung}", f"size: {size(nf.formula)}"]
    lines += [f"  {tag.value}: {to_text(leaf)}" for leaf, tag in nf.leaves]
    _emit(
        args,
        "\n".join(lines),
        {
            "normal_form": to_text(nf.formula),
            "rung": report.max_rung,
            "size": size(nf.formula),
            "leaves": [{"tag": tag.value, "formula": to_text(leaf)} for leaf, tag in nf.leaves],
        },
    )
    return EXIT_TRUE


def cmd_classify(args: argparse.Namespace) -> int:
    sig = _signature(args)
    report = classify_rung(normal_form(parse(args.formula, sig), sig))
    text = f"rung {report.max_rung}\n" + " ".join(t.value for t in report.tags)
    _emit(args, text, {"rung": report.max_rung, "tags": [t.value for t in report.tags]})
    return EXIT_TRUE


def cmd_cneg(args: argparse.Namespace) -> int:
    sig = _signature(args)
    out = compile_cneg(expand_sugar(parse(args.formula, sig), sig), sig)
    _emit(args, to_text(out), {"formula": args.formula, "cneg": to_text(out)})
    return EXIT_TRUE


def cmd_from_sem(args: argparse.Namespace) -> int:
    _write_json(args, io.model_to_json(sem_to_multiteam(io.load_sem(args.sem))))
    return EXIT_TRUE


def cmd_to_sem(args: argparse.Namespace) -> int:
    _write_json(args, io.sem_to_json(multiteam_to_sem(io.load_model(args.model))))
    return EXIT_TRUE


def cmd_markov(args: argparse.Namespace) -> int:
    report = markov_check(io.load_model(args.model))
    lines = ["true" if report.holds else "false"]
    for (a, x), (b, y), joint, product in report.violations:
        lines.append(f"  P({a}={x}, {b}={y}) = {joint} but P({a}={x})P({b}={y}) = {product}")
    payload = {
        "markov": report.holds,
        "violations": [
            {"pair": [f"{a}={x}", f"{b}={y}"], "joint": str(j), "product": str(p)}
            for (a, x), (b, y), j, p in report.violations
        ],
    }
    _emit(args, "\n".join(lines), payload)
    return EXIT_TRUE if report.holds else EXIT_FALSE


def cmd_rescale_canon(args: argparse.Namespace) -> int:
    _write_json(args, io.model_to_json(canonical(io.load_model(args.model))))
    return EXIT_TRUE


def cmd_psi(args: argparse.Namespace) -> int:
    k = io.load_class(args.cls)
    psi = psi_formula(k)
    _emit(args, to_text(psi), {"psi": to_text(psi), "members": len(k)})
    return EXIT_TRUE


def cmd_define_check(args: argparse.Namespace) -> int:
    k = io.load_class(args.cls)
    report = check_definability(k, args.bound, _signature(args), cap=args.cap)
    lines = [report.summary()]
    lines += [f"  false positive: {m}" for m in report.false_positives]
    lines += [f"  false negative: {m}" for m in report.false_negatives]
    payload = {
        "agrees": report.agrees,
        "bound": report.bound,
        "checked": report.checked,
        "satisfying": report.satisfying,
        "expected": report.expected,
        "false_positives": [io.model_to_json(m) for m in report.false_positives],
        "false_negatives": [io.model_to_json(m) for m in report.false_negatives],
    }
    _emit(args, "\n".join(lines), payload)
    return EXIT_TRUE if report.agrees else EXIT_FALSE


def cmd_suite(args: argparse.Namespace) -> int:
    from .checks import CHECKS, run_suite

    only = args.only.split(",") if args.only else None
    if only:
        unknown = [n for n in only if n not in CHECKS]
        if unknown:
            raise UsageError(f"unknown check(s) {', '.join(unknown)}; choose from {', '.join(CHECKS)}")
    results = run_suite(args.seed, args.scale, only)
    payload = {
        "seed": args.seed,
        "results": [{"name": r.name, "cases": r.cases, "passed": r.passed, "failure": r.failure} for r in results],
    }
    _emit(args, "\n".join(r.line() for r in results), payload)
    return EXIT_TRUE if all(r.passed for r in results) else EXIT_FALSE


def cmd_graph(args: argparse.Namespace) -> int:
    g = causal_graph(io.load_model(args.model))
    _emit(args, "\n".join(f"{p} -> {c}" for p, c in g.edges), {"edges": [list(e) for e in g.edges]})
    return EXIT_TRUE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a machine-readable result object")
    common.add_argument("--sig", metavar="FILE", help="signature JSON (or a model file) for parsing formulas")

    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("-o", "--output", metavar="FILE", help="write the resulting JSON here instead of stdout")

    p = argparse.ArgumentParser(prog="causal-teams", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    s = sub.add_parser("check", parents=[common], help="decide MODEL |= FORMULA")
    s.add_argument("model")
    s.add_argument("formula", nargs="?")
    s.add_argument("--file", metavar="FILE", help="read one formula per line")
    s.add_argument("--trace", action="store_true", help="print the evaluation trace")
    s.set_defaults(run=cmd_check)

    s = sub.add_parser("prob", parents=[common], help="exact probability of an event")
    s.add_argument("model")
    s.add_argument("formula")
    s.add_argument("--given", metavar="EVENT", help="condition on this event")
    s.set_defaults(run=cmd_prob)

    s = sub.add_parser("intervene", parents=[common, out], help="apply do(X=x), e.g. \"X=1 & Y=0\"")
    s.add_argument("model")
    s.add_argument("pairs")
    s.set_defaults(run=cmd_intervene)

    s = sub.add_parser("restrict", parents=[common, out], help="keep rows satisfying an event")
    s.add_argument("model")
    s.add_argument("formula")
    s.set_defaults(run=cmd_restrict)

    for name, fn, text in (
        ("nf", cmd_nf, "normal form and rung"),
        ("classify", cmd_classify, "rung classification"),
        ("cneg", cmd_cneg, "weak contradictory negation"),
    ):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("formula")
        s.set_defaults(run=fn)

    s = sub.add_parser("from-sem", parents=[common, out], help="SEM file to model file")
    s.add_argument("sem")
    s.set_defaults(run=cmd_from_sem)

    s = sub.add_parser("to-sem", parents=[common, out], help="model file to SEM file")
    s.add_argument("model")
    s.set_defaults(run=cmd_to_sem)

    s = sub.add_parser("markov", parents=[common], help="pairwise independence of exogenous variables")
    s.add_argument("model")
    s.set_defaults(run=cmd_markov)

    s = sub.add_parser("rescale-canon", parents=[common, out], help="smallest rescaling of a model")
    s.add_argument("model")
    s.set_defaults(run=cmd_rescale_canon)

    s = sub.add_parser("graph", parents=[common], help="edges of the causal graph")
    s.add_argument("model")
    s.set_defaults(run=cmd_graph)

    s = sub.add_parser("psi", parents=[common], help="formula defining a finite class up to rescaling")
    s.add_argument("cls", metavar="CLASS")
    s.set_defaults(run=cmd_psi)

    s = sub.add_parser("define-check", parents=[common], help="compare a class with the models of its formula")
    s.add_argument("cls", metavar="CLASS")
    s.add_argument("--bound", type=int, default=4, help="largest number of rows to enumerate")
    s.add_argument("--cap", type=int, default=10**6, help="refuse to enumerate more models than this")
    s.set_defaults(run=cmd_define_check)

    s = sub.add_parser("suite", parents=[common], help="run the seeded property suite")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--scale", type=int, default=1, help="multiply the number of cases")
    s.add_argument("--only", metavar="NAMES", help="comma-separated subset of checks")
    s.set_defaults(run=cmd_suite)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except FormulaSyntaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.text:
            print(exc.pointer(), file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CausalTeamError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
