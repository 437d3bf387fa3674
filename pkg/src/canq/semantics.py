"""Finite L-structures and legal valuations under a 2Nmatrix (substitutional semantics).

Closed L(D)-formulas are identified up to the congruence induced by the
structure: bound variables are renamed by nesting level and every maximal
closed subterm is replaced by the individual constant of its value.
S-substitutions are enumerated as maps from variables to domain elements.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import (Dict, FrozenSet, Iterable, Iterator, List, Mapping,
                    Optional, Sequence, Tuple)

from .nmatrix import TwoNmatrix, tv
from .syntax import (Atom, Const, Elem, Formula, Func, QuantApp, Sequent,
                     Signature, Term, free_vars, is_closed, nameless,
                     quant_depth, substitute_many, subterms, term_vars)


class NotClosed(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class LStructure:
    """Domain ``0..size-1`` with interpretations of constants, functions and predicates."""

    size: int
    consts: Mapping[str, int] = field(default_factory=dict)
    funcs: Mapping[str, Mapping[Tuple[int, ...], int]] = field(default_factory=dict)
    preds: Mapping[str, Mapping[Tuple[int, ...], bool]] = field(default_factory=dict)
    # canon and instance results, filled lazily
    memo: Dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("domain must be nonempty")

    @property
    def domain(self) -> range:
        return range(self.size)

    def eval_term(self, t: Term) -> int:
        if isinstance(t, Elem):
            return t.value
        if isinstance(t, Const):
            return self.consts[t.name]
        if isinstance(t, Func):
            return self.funcs[t.symbol][tuple(self.eval_term(a) for a in t.args)]
        raise NotClosed(f"term {t} is not closed")


# ---------------------------------------------------------------- congruence


def _canon_term(S: LStructure, t: Term) -> Term:
    if not term_vars(t):
        return Elem(S.eval_term(t))
    if isinstance(t, Func):
        return Func(t.symbol, tuple(_canon_term(S, a) for a in t.args))
    return t


def _collapse(S: LStructure, f: Formula) -> Formula:
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(_canon_term(S, a) for a in f.args))
    return QuantApp(f.quant, f.binders, tuple(_collapse(S, s) for s in f.scope))


def canon(S: LStructure, f: Formula) -> Formula:
    """Canonical representative of the congruence class of a closed L(D)-formula."""
    key = ("canon", f)
    if key not in S.memo:
        if not is_closed(f):
            raise NotClosed(f"{f} has free variables {sorted(free_vars(f))}")
        S.memo[key] = nameless(_collapse(S, f))
    return S.memo[key]


def instances(S: LStructure, q: QuantApp) -> List[Tuple[Formula, ...]]:
    """Canonical scope instances ``psi_i{a1/x1..ak/xk}``, one tuple per ``a`` in D^k."""
    key = ("instances", q)
    if key not in S.memo:
        out = []
        for elems in itertools.product(S.domain, repeat=len(q.binders)):
            m = {x: Elem(a) for x, a in zip(q.binders, elems)}
            out.append(tuple(canon(S, substitute_many(s, m)) for s in q.scope))
        S.memo[key] = out
    return S.memo[key]


def assignments(variables: Iterable[str], size: int) -> Iterator[Dict[str, Term]]:
    vs = sorted(variables)
    for elems in itertools.product(range(size), repeat=len(vs)):
        yield {v: Elem(a) for v, a in zip(vs, elems)}


def relevant_closure(S: LStructure, targets: Iterable[Sequent]) -> List[Formula]:
    """Canonical sentences needed to evaluate every domain instance of the targets.

    Ordered by quantifier depth, then by rendering.
    """
    seen = set()
    todo: List[Formula] = []
    for seq in targets:
        for f in seq.formulas():
            for sigma in assignments(free_vars(f), S.size):
                todo.append(canon(S, substitute_many(f, sigma)))
    while todo:
        g = todo.pop()
        if g in seen:
            continue
        seen.add(g)
        if isinstance(g, QuantApp):
            for inst in instances(S, g):
                todo.extend(inst)
    return sorted(seen, key=lambda g: (quant_depth(g), str(g)))


# ---------------------------------------------------------------- valuations


Valuation = Dict[Formula, bool]


def _distribution(S: LStructure, q: QuantApp, v: Valuation) -> FrozenSet[Tuple[bool, ...]]:
    return frozenset(tuple(v[s] for s in inst) for inst in instances(S, q))


def enumerate_legal_valuations(S: LStructure, M: TwoNmatrix, closure: Sequence[Formula]) -> Iterator[Valuation]:
    """Every legal valuation restricted to ``closure``; choices tried t before f."""
    closure = list(closure)
    v: Valuation = {}
    quantified = []
    for g in closure:
        if isinstance(g, Atom):
            v[g] = S.preds[g.pred][tuple(S.eval_term(a) for a in g.args)]
        else:
            quantified.append(g)

    def go(i: int) -> Iterator[Valuation]:
        if i == len(quantified):
            yield dict(v)
            return
        g = quantified[i]
        allowed = M.lookup(g.quant, _distribution(S, g, v))
        for b in (True, False):
            if b in allowed:
                v[g] = b
                yield from go(i + 1)
        v.pop(g, None)

    yield from go(0)


def value(S: LStructure, v: Valuation, f: Formula, sigma: Mapping[str, Term] | None = None) -> bool:
    g = substitute_many(f, sigma) if sigma else f
    return v[canon(S, g)]


def failing_substitution(S: LStructure, v: Valuation, seq: Sequent) -> Optional[Dict[str, Term]]:
    for sigma in assignments(free_vars(seq), S.size):
        if all(value(S, v, f, sigma) for f in seq.left) and not any(value(S, v, f, sigma) for f in seq.right):
            return sigma
    return None


def sequent_valid_in(S: LStructure, v: Valuation, seq: Sequent) -> bool:
    """Designated value is t: valid iff no substitution makes the left true and the right false."""
    return failing_substitution(S, v, seq) is None


# ---------------------------------------------------------------- structures


def _symbols(seqs: Iterable[Sequent], sig: Optional[Signature]):
    consts, funcs, preds = set(), {}, {}
    for s in seqs:
        for f in s.formulas():
            for t in subterms(f):
                if isinstance(t, Const):
                    consts.add(t.name)
                elif isinstance(t, Func):
                    funcs[t.symbol] = len(t.args)
            stack = [f]
            while stack:
                g = stack.pop()
                if isinstance(g, Atom):
                    preds[g.pred] = len(g.args)
                else:
                    stack.extend(g.scope)
    if sig is not None:
        consts |= set(sig.constants)
    return sorted(consts), dict(sorted(funcs.items())), dict(sorted(preds.items()))


def count_structures(size: int, consts, funcs, preds) -> int:
    total = size ** len(consts)
    for m in funcs.values():
        total *= size ** (size ** m)
    for m in preds.values():
        total *= 2 ** (size ** m)
    return total


def enumerate_structures(size: int, consts: Sequence[str], funcs: Mapping[str, int],
                         preds: Mapping[str, int]) -> Iterator[LStructure]:
    dom = range(size)
    func_slots = [(f, list(itertools.product(dom, repeat=m))) for f, m in funcs.items()]
    pred_slots = [(p, list(itertools.product(dom, repeat=m))) for p, m in preds.items()]
    const_choices = itertools.product(dom, repeat=len(consts))
    for cvals in const_choices:
        for ftables in itertools.product(*[itertools.product(dom, repeat=len(args)) for _, args in func_slots]):
            funcs_i = {f: dict(zip(args, vals)) for (f, args), vals in zip(func_slots, ftables)}
            for ptables in itertools.product(*[itertools.product((True, False), repeat=len(args))
                                               for _, args in pred_slots]):
                preds_i = {p: dict(zip(args, vals)) for (p, args), vals in zip(pred_slots, ptables)}
                yield LStructure(size, dict(zip(consts, cvals)), funcs_i, preds_i)


@dataclass(frozen=True)
class Countermodel:
    structure: LStructure
    valuation: Valuation
    sigma: Dict[str, Term]
    closure: Tuple[Formula, ...]

    def dump(self) -> str:
        return dump_countermodel(self)


def find_countermodel(M: TwoNmatrix, assumptions: Iterable[Sequent], target: Sequent,
                      max_domain: int = 2, max_interpretations: int = 100_000,
                      signature: Optional[Signature] = None) -> Optional[Countermodel]:
    """Search finite structures and legal valuations for one validating the
    assumptions but not the target.

    None means no countermodel up to ``max_domain``; it is not a validity
    proof.  Raises BudgetExceeded when a domain size would need more than
    ``max_interpretations`` structures.
    """
    assumptions = list(assumptions)
    everything = assumptions + [target]
    consts, funcs, preds = _symbols(everything, signature)
    for size in range(1, max_domain + 1):
        needed = count_structures(size, consts, funcs, preds)
        if needed > max_interpretations:
            raise BudgetExceeded(f"domain size {size} needs {needed} structures "
                                 f"(budget {max_interpretations})")
        for S in enumerate_structures(size, consts, funcs, preds):
            closure = relevant_closure(S, everything)
            for v in enumerate_legal_valuations(S, M, closure):
                if not all(sequent_valid_in(S, v, a) for a in assumptions):
                    continue
                sigma = failing_substitution(S, v, target)
                if sigma is not None:
                    return Countermodel(S, v, sigma, tuple(closure))
    return None


def dump_countermodel(cm: Countermodel) -> str:
    S = cm.structure
    lines = [f"domain: {{{', '.join(f'@{a}' for a in S.domain)}}}"]
    for c, a in sorted(S.consts.items()):
        lines.append(f"const {c} = @{a}")
    for f, table in sorted(S.funcs.items()):
        for args, a in sorted(table.items()):
            lines.append(f"func {f}({', '.join(f'@{x}' for x in args)}) = @{a}")
    for p, table in sorted(S.preds.items()):
        for args, b in sorted(table.items()):
            arg = f"({', '.join(f'@{x}' for x in args)})" if args else ""
            lines.append(f"pred {p}{arg} = {tv(b)}")
    lines.append("valuation:")
    for g in cm.closure:
        lines.append(f"  {g} = {tv(cm.valuation[g])}")
    subst = ", ".join(f"{x} -> {t}" for x, t in sorted(cm.sigma.items())) or "(empty)"
    lines.append(f"failing substitution: {subst}")
    return "\n".join(lines) + "\n"


def countermodel_json(cm: Countermodel) -> dict:
    S = cm.structure
    return {
        "domain": [f"@{a}" for a in S.domain],
        "constants": {c: f"@{a}" for c, a in sorted(S.consts.items())},
        "functions": {f: [{"args": [f"@{x}" for x in args], "value": f"@{a}"} for args, a in sorted(t.items())]
                      for f, t in sorted(S.funcs.items())},
        "predicates": {p: [{"args": [f"@{x}" for x in args], "value": tv(b)} for args, b in sorted(t.items())]
                       for p, t in sorted(S.preds.items())},
        "valuation": [{"sentence": str(g), "value": tv(cm.valuation[g])} for g in cm.closure],
        "substitution": {x: str(t) for x, t in sorted(cm.sigma.items())},
    }
