"""Command-line interface.

Exit codes: 0 success or positive answer, 1 negative answer, 2 usage or
parse error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from .calculus import Calculus, check_simple, validate
from .coherence import InvalidArity, is_coherent
from .corpus import bundled_path
from .frontend import (ParseError, parse_calculus, parse_proof, parse_sequent,
                       parse_sequents, render_proof)
from .nmatrix import ConflictWitness, build_mg, dump, render_distribution, to_json
from .proof import ProofError, check_proof, fresh_constants_of, search_proof
from .semantics import BudgetExceeded, countermodel_json, dump_countermodel, find_countermodel

OK, NEGATIVE, USAGE, BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def load_calculus(name: str) -> Calculus:
    """A path, or the name of a bundled calculus (``g0`` or ``g0.cal``)."""
    p = Path(name)
    if not p.exists():
        b = bundled_path(name)
        if b.exists():
            p = b
        else:
            raise UsageError(f"no such calculus file: {name}")
    return parse_calculus(p.read_text(), p.name)


def _ambient(args, calc: Calculus):
    if not args.ambient:
        return []
    return parse_sequents(_read(args.ambient), calc.signature, args.ambient)


def _emit(args, text: str, data) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(data, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text)


def _model_text(model) -> str:
    return ", ".join(f"{a}={'t' if v else 'f'}" for a, v in sorted(model.items(), key=lambda kv: str(kv[0])))


def cmd_check(args) -> int:
    calc = load_calculus(args.calculus)
    diags = validate(calc)
    if diags:
        _emit(args, "".join(f"error: {d}\n" for d in diags), {"valid": False, "diagnostics": diags})
        return USAGE
    report = is_coherent(calc)
    lines, pairs = [], []
    for v in report.pairs:
        verdict = "coherent" if v.coherent else "incoherent"
        lines.append(f"pair {v.pair} ({v.pair.quant}): {verdict}\n")
        entry = {"pair": str(v.pair), "quantifier": v.pair.quant, "coherent": v.coherent,
                 "clauses": [str(c) for c in v.clauses]}
        if not v.coherent:
            lines.append("  Rnm: " + " ; ".join(str(c) for c in v.clauses) + "\n")
            lines.append(f"  model: {_model_text(v.model)}\n")
            entry["model"] = {str(a): "t" if b else "f" for a, b in sorted(v.model.items(), key=lambda kv: str(kv[0]))}
        pairs.append(entry)
    lines.append(f"{calc.name}: {'coherent' if report.coherent else 'incoherent'}\n")
    _emit(args, "".join(lines), {"calculus": calc.name, "coherent": report.coherent, "pairs": pairs})
    return OK if report.coherent else NEGATIVE


def cmd_nmatrix(args) -> int:
    calc = load_calculus(args.calculus)
    try:
        M = build_mg(calc)
    except InvalidArity as e:
        sys.stderr.write(f"error: {e}\n")
        return USAGE
    except ConflictWitness as e:
        _emit(args, f"conflict: {e}\n",
              {"conflict": {"quantifier": e.quant, "E": render_distribution(e.E),
                            "right_rule": e.right_rule.name, "left_rule": e.left_rule.name}})
        return NEGATIVE
    if args.dump or args.format == "json":
        _emit(args, dump(M), {"calculus": calc.name, "tables": to_json(M)})
    else:
        lines = []
        for q, table in M.tables.items():
            nd = sum(1 for v in table.values() if len(v) == 2)
            lines.append(f"{q}: {len(table)} entries, {nd} non-deterministic\n")
        _emit(args, "".join(lines), None)
    return OK


def cmd_prove(args) -> int:
    calc = load_calculus(args.calculus)
    target = parse_sequent(args.sequent, calc.signature, "<sequent>")
    ambient = _ambient(args, calc)
    try:
        proof = search_proof(calc, ambient, target, max_depth=args.depth, cuts=args.cuts,
                             max_nodes=args.max_nodes)
    except BudgetExceeded as e:
        sys.stderr.write(f"budget exceeded: {e}\n")
        return BUDGET
    if proof is None:
        _emit(args, f"no proof up to depth {args.depth}\n", {"proved": False, "depth": args.depth})
        return NEGATIVE
    report = check_proof(calc, ambient, proof)
    fresh = fresh_constants_of(proof, calc)
    text = (f"# fresh constants: {', '.join(fresh)}\n" if fresh else "") + render_proof(proof)
    _emit(args, text, {"proved": True, "proof": render_proof(proof).splitlines(),
                       "fresh_constants": fresh, "cuts": [str(f) for f in report.cut_formulas],
                       "simple": report.simple})
    return OK


def cmd_checkproof(args) -> int:
    calc = load_calculus(args.calculus)
    proof = parse_proof(_read(args.proof), calc, args.proof)
    ambient = _ambient(args, calc)
    try:
        report = check_proof(calc, ambient, proof)
    except ProofError as e:
        _emit(args, f"invalid: {e}\n", {"valid": False, "step": e.step, "message": e.message})
        return NEGATIVE
    cuts = ", ".join(str(f) for f in report.cut_formulas) or "none"
    text = (f"valid: {proof.conclusion}\n"
            f"cuts: {cuts}\n"
            f"simple: {'yes' if report.simple else 'no'}\n")
    _emit(args, text, {"valid": True, "conclusion": str(proof.conclusion),
                       "cuts": [str(f) for f in report.cut_formulas], "simple": report.simple})
    return OK


def cmd_countermodel(args) -> int:
    calc = load_calculus(args.calculus)
    target = parse_sequent(args.sequent, calc.signature, "<sequent>")
    ambient = _ambient(args, calc)
    try:
        M = build_mg(calc)
    except InvalidArity as e:
        sys.stderr.write(f"error: {e}\n")
        return USAGE
    except ConflictWitness as e:
        sys.stderr.write(f"error: M_G is undefined: {e}\n")
        return NEGATIVE
    try:
        cm = find_countermodel(M, ambient, target, max_domain=args.max_domain,
                               max_interpretations=args.max_interpretations, signature=calc.signature)
    except BudgetExceeded as e:
        sys.stderr.write(f"budget exceeded: {e}\n")
        return BUDGET
    if cm is None:
        _emit(args, f"no countermodel up to domain size {args.max_domain}\n",
              {"countermodel": None, "max_domain": args.max_domain})
        return OK
    _emit(args, dump_countermodel(cm), {"countermodel": countermodel_json(cm)})
    return NEGATIVE


def cmd_simple(args) -> int:
    calc = load_calculus(args.calculus)
    r = check_simple(calc)
    if r.simple:
        _emit(args, "simple\n", {"simple": True})
        return OK
    _emit(args, f"not simple: pair {r.pair}: {r.reason}\n",
          {"simple": False, "pair": str(r.pair), "variable": r.variable, "reason": r.reason})
    return NEGATIVE


def cmd_validate(args) -> int:
    calc = load_calculus(args.calculus)
    diags = validate(calc)
    _emit(args, "".join(f"error: {d}\n" for d in diags) or "well formed\n",
          {"valid": not diags, "diagnostics": diags})
    return USAGE if diags else OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="canq", description="Canonical sequent calculi workbench.")
    ap.add_argument("--format", choices=("text", "json"), default="text")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("calculus", help="calculus file or bundled name")
        p.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
        p.set_defaults(func=func)
        return p

    add("check", cmd_check, "validate and decide coherence")
    p = add("nmatrix", cmd_nmatrix, "build the characteristic Nmatrix")
    p.add_argument("--dump", action="store_true", help="print every table entry")
    p = add("prove", cmd_prove, "bounded proof search")
    p.add_argument("sequent")
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--cuts", choices=("none", "simple", "all"), default="none")
    p.add_argument("--ambient", help="file with assumption sequents, one per line")
    p.add_argument("--max-nodes", type=int, default=200_000)
    p = add("checkproof", cmd_checkproof, "check an annotated proof file")
    p.add_argument("proof")
    p.add_argument("--ambient")
    p = add("countermodel", cmd_countermodel, "finite countermodel search under M_G")
    p.add_argument("sequent")
    p.add_argument("--max-domain", type=int, default=2)
    p.add_argument("--max-interpretations", type=int, default=100_000)
    p.add_argument("--ambient")
    add("simple", cmd_simple, "decide the simplicity condition")
    add("validate", cmd_validate, "structural well-formedness only")
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    try:
        return args.func(args)
    except (ParseError, UsageError) as e:
        sys.stderr.write(f"error: {e}\n")
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
