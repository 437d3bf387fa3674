"""Canonical rules and calculi: dual pairs, clash renaming, simplicity, validation."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .syntax import Clause, Const, SAtom, Signature, Var


@dataclass(frozen=True)
class CanonicalRule:
    """``Theta / Q(s)``: ``side`` is ``'t'`` for a right rule, ``'f'`` for a left rule."""

    name: str
    quant: str
    n: int
    k: int
    side: str
    premises: Tuple[Clause, ...] = ()

    def __post_init__(self):
        if self.side not in ("t", "f"):
            raise ValueError(f"side must be 't' or 'f', got {self.side!r}")

    @property
    def constants(self) -> frozenset:
        out = frozenset()
        for c in self.premises:
            out |= c.constants()
        return out

    @property
    def variables(self) -> frozenset:
        out = frozenset()
        for c in self.premises:
            out |= c.variables()
        return out

    @property
    def is_right(self) -> bool:
        return self.side == "t"


@dataclass(frozen=True)
class Calculus:
    name: str
    signature: Signature = field(default_factory=Signature)
    rules: Tuple[CanonicalRule, ...] = ()

    @property
    def quantifiers(self) -> Dict[str, Tuple[int, int]]:
        return dict(self.signature.quantifiers)

    def rule(self, name: str) -> CanonicalRule:
        for r in self.rules:
            if r.name == name:
                return r
        raise KeyError(name)

    def rules_for(self, quant: str, side: Optional[str] = None) -> List[CanonicalRule]:
        return [r for r in self.rules if r.quant == quant and (side is None or r.side == side)]


@dataclass(frozen=True)
class DualPair:
    right: CanonicalRule
    left: CanonicalRule

    @property
    def quant(self) -> str:
        return self.right.quant

    @property
    def k(self) -> int:
        return self.right.k

    @property
    def n(self) -> int:
        return self.right.n

    def __str__(self) -> str:
        return f"{self.right.name}/{self.left.name}"


# ---------------------------------------------------------------- renaming


def clause_symbols(theta: Iterable[Clause]) -> Tuple[set, set]:
    vs, cs = set(), set()
    for c in theta:
        vs |= c.variables()
        cs |= c.constants()
    return vs, cs


def rename_clauses(theta: Iterable[Clause], mapping: Dict[str, str]) -> Tuple[Clause, ...]:
    def ren(a: SAtom) -> SAtom:
        return SAtom(a.index, tuple(type(t)(mapping.get(t.name, t.name)) for t in a.args))

    return tuple(Clause(frozenset(map(ren, c.left)), frozenset(map(ren, c.right))) for c in theta)


def _dedupe(clauses: Iterable[Clause]) -> Tuple[Clause, ...]:
    seen, out = set(), []
    for c in clauses:
        if c not in seen:
            seen.add(c)
            out.append(c)
    return tuple(out)


def rnm_mapping(theta1: Sequence[Clause], theta2: Sequence[Clause]) -> Dict[str, str]:
    """Fresh names for the symbols of ``theta2`` that also occur in ``theta1``.

    A clashing name gets the smallest number of appended primes that makes
    it unused by either set and by earlier choices.
    """
    v1, c1 = clause_symbols(theta1)
    v2, c2 = clause_symbols(theta2)
    taken = v1 | c1 | v2 | c2
    mapping: Dict[str, str] = {}
    for name in sorted((v2 & v1) | (c2 & c1)):
        new = name + "'"
        while new in taken:
            new += "'"
        taken.add(new)
        mapping[name] = new
    return mapping


def rnm(theta1: Sequence[Clause], theta2: Sequence[Clause]) -> Tuple[Clause, ...]:
    """``theta1`` together with ``theta2`` renamed apart from it."""
    return _dedupe(tuple(theta1) + rename_clauses(theta2, rnm_mapping(theta1, theta2)))


# ---------------------------------------------------------------- dual pairs


def dual_pairs(calc: Calculus) -> List[DualPair]:
    pairs = []
    for q in calc.signature.quantifiers:
        rights = calc.rules_for(q, "t")
        lefts = calc.rules_for(q, "f")
        pairs.extend(DualPair(r, l) for r, l in itertools.product(rights, lefts))
    return pairs


# ---------------------------------------------------------------- simplicity


@dataclass(frozen=True)
class SimplicityReport:
    simple: bool
    pair: Optional[DualPair] = None
    variable: Optional[str] = None
    reason: str = ""


def _occurrences(theta: Sequence[Clause]):
    """Map predicate index -> (variables, constants) appearing as its argument."""
    by_index: Dict[int, Tuple[set, set]] = {}
    for c in theta:
        for a in c.atoms():
            vs, cs = by_index.setdefault(a.index, (set(), set()))
            for t in a.args:
                (vs if isinstance(t, Var) else cs).add(t.name)
    return by_index


def _variable_ok(y: str, occ) -> Tuple[bool, str]:
    idx = sorted(i for i, (vs, _) in occ.items() if y in vs)
    # first alternative, counted per predicate index
    crowded = [i for i in idx if len(occ[i][1]) > 1]
    if not crowded:
        return True, ""
    if len(idx) >= 2 and not any(occ[i][1] for i in idx):
        return True, ""
    i = crowded[0]
    cs = ", ".join(f"p{i}({c})" for c in sorted(occ[i][1]))
    return False, f"p{i}({y}) occurs together with {cs}"


def check_simple(calc: Calculus) -> SimplicityReport:
    for pair in dual_pairs(calc):
        if pair.k == 0:
            continue
        if pair.k != 1:
            return SimplicityReport(False, pair, None, f"arity k={pair.k} is neither 0 nor 1")
        theta = rnm(pair.right.premises, pair.left.premises)
        occ = _occurrences(theta)
        for y in sorted(clause_symbols(theta)[0]):
            ok, why = _variable_ok(y, occ)
            if not ok:
                return SimplicityReport(False, pair, y, why)
    return SimplicityReport(True)


# ---------------------------------------------------------------- validation


def validate(calc: Calculus) -> List[str]:
    """Structural diagnostics; an empty list means the calculus is well formed."""
    diags: List[str] = []
    sig = calc.signature
    names: Dict[str, str] = {}
    for kind, pool in (("quantifier", sig.quantifiers), ("function", sig.functions),
                       ("predicate", sig.predicates), ("constant", sig.constants)):
        for nm in pool:
            if nm in names:
                diags.append(f"name clash: {nm} declared as {names[nm]} and {kind}")
            names.setdefault(nm, kind)
    for q, (n, k) in sig.quantifiers.items():
        if n < 1 or k < 0:
            diags.append(f"quantifier {q}: invalid arity ({n},{k})")
    seen = set()
    for r in calc.rules:
        if r.name in seen:
            diags.append(f"duplicate rule name {r.name}")
        seen.add(r.name)
        if r.quant not in sig.quantifiers:
            diags.append(f"rule {r.name}: undeclared quantifier {r.quant}")
            continue
        n, k = sig.quantifiers[r.quant]
        if (r.n, r.k) != (n, k):
            diags.append(f"rule {r.name}: arity ({r.n},{r.k}) differs from declared ({n},{k})")
        for j, c in enumerate(r.premises, 1):
            for a in c.atoms():
                if not 1 <= a.index <= n:
                    diags.append(f"rule {r.name} clause {j}: p{a.index} out of range 1..{n}")
                if len(a.args) != k:
                    diags.append(f"rule {r.name} clause {j}: p{a.index} takes {k} arguments, got {len(a.args)}")
                for t in a.args:
                    if not isinstance(t, (Var, Const)):
                        diags.append(f"rule {r.name} clause {j}: illegal term {t!r}")
    return diags
