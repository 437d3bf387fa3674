"""Two-valued non-deterministic matrices and the matrix M_G of a calculus."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Mapping, Optional, Tuple

from .calculus import CanonicalRule, Calculus
from .coherence import (Distribution, InvalidArity, all_distributions,
                        theta_valid_in_some_E_canonical)

T, F = True, False
BOTH: FrozenSet[bool] = frozenset((T, F))


class UnknownQuantifier(KeyError):
    pass


class EmptyDistribution(ValueError):
    pass


class ConflictWitness(Exception):
    """Two dual rules demand both {t} and {f} for the same quantifier and distribution."""

    def __init__(self, quant: str, E: Distribution, right_rule: CanonicalRule, left_rule: CanonicalRule):
        super().__init__(f"{quant} at {render_distribution(E)}: rule {right_rule.name} demands {{t}}, "
                         f"rule {left_rule.name} demands {{f}}")
        self.quant = quant
        self.E = E
        self.right_rule = right_rule
        self.left_rule = left_rule


def tv(b: bool) -> str:
    return "t" if b else "f"


def render_tuple(t: Tuple[bool, ...]) -> str:
    return "<" + ",".join(map(tv, t)) + ">"


def render_distribution(E: Distribution) -> str:
    return "{" + ",".join(render_tuple(t) for t in sorted(E, reverse=True)) + "}"


def render_values(vs: FrozenSet[bool]) -> str:
    return "{" + ",".join(tv(b) for b in sorted(vs, reverse=True)) + "}"


@dataclass(frozen=True)
class TwoNmatrix:
    """Truth values {t,f} with {t} designated; one table per quantifier."""

    arities: Mapping[str, Tuple[int, int]]
    tables: Mapping[str, Dict[Distribution, FrozenSet[bool]]] = field(default_factory=dict)

    def __post_init__(self):
        for q, table in self.tables.items():
            n = self.arities[q][0]
            if len(table) != 2 ** (2 ** n) - 1:
                raise ValueError(f"table for {q} is not total")
            if any(not v for v in table.values()):
                raise ValueError(f"table for {q} has an empty entry")

    def lookup(self, quant: str, E) -> FrozenSet[bool]:
        return lookup(self, quant, E)

    def dump(self) -> str:
        return dump(self)


def lookup(M: TwoNmatrix, quant: str, E) -> FrozenSet[bool]:
    if quant not in M.tables:
        raise UnknownQuantifier(quant)
    E = frozenset(E)
    if not E:
        raise EmptyDistribution(f"empty distribution for {quant}")
    n = M.arities[quant][0]
    if any(len(t) != n for t in E):
        raise ValueError(f"{quant} expects {n}-tuples, got {render_distribution(E)}")
    return M.tables[quant][E]


def build_mg(calc: Calculus) -> TwoNmatrix:
    """The matrix whose entries are forced by rules whose premises hold in some E-canonical structure."""
    arities = dict(calc.signature.quantifiers)
    bad = {q: k for q, (n, k) in arities.items() if k not in (0, 1)}
    if bad:
        raise InvalidArity(f"M_G is only defined for k in {{0,1}}; got {bad}")
    tables: Dict[str, Dict[Distribution, FrozenSet[bool]]] = {}
    for q, (n, k) in arities.items():
        rules = calc.rules_for(q)
        table = {}
        for E in all_distributions(n):
            forcing: Dict[str, CanonicalRule] = {}
            for r in rules:
                if r.side in forcing:
                    continue
                if theta_valid_in_some_E_canonical(r.premises, E, k):
                    forcing[r.side] = r
            if len(forcing) == 2:
                raise ConflictWitness(q, E, forcing["t"], forcing["f"])
            if forcing:
                (side,) = forcing
                table[E] = frozenset((side == "t",))
            else:
                table[E] = BOTH
        tables[q] = table
    return TwoNmatrix(arities, tables)


@dataclass(frozen=True)
class SuitabilityReport:
    suitable: bool
    rule: Optional[CanonicalRule] = None
    E: Optional[Distribution] = None


def is_suitable(M: TwoNmatrix, calc: Calculus) -> SuitabilityReport:
    for r in calc.rules:
        n, k = calc.signature.quantifiers[r.quant]
        for E in all_distributions(n):
            if theta_valid_in_some_E_canonical(r.premises, E, k):
                if lookup(M, r.quant, E) != frozenset((r.side == "t",)):
                    return SuitabilityReport(False, r, E)
    return SuitabilityReport(True)


def dump(M: TwoNmatrix) -> str:
    """One line per (quantifier, distribution), in declaration then distribution order."""
    lines = []
    for q in M.arities:
        if q not in M.tables:
            continue
        for E in all_distributions(M.arities[q][0]):
            lines.append(f"{q} {render_distribution(E)} {render_values(M.tables[q][E])}")
    return "\n".join(lines) + ("\n" if lines else "")


def to_json(M: TwoNmatrix) -> Dict[str, List[dict]]:
    out: Dict[str, List[dict]] = {}
    for q in M.arities:
        if q in M.tables:
            out[q] = [{"E": [[tv(b) for b in t] for t in sorted(E, reverse=True)],
                       "values": [tv(b) for b in sorted(M.tables[q][E], reverse=True)]}
                      for E in all_distributions(M.arities[q][0])]
    return out
