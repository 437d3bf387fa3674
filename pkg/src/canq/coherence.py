"""Coherence of canonical calculi.

Two deciders are provided for the consistency of a finite clause set over a
simplified language: Herbrand grounding followed by propositional SAT, and
(for k in {0, 1}) a search over E-canonical structures.  ``is_coherent``
runs the first and cross-checks with the second.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import (Dict, FrozenSet, Iterable, Iterator, List, Optional,
                    Sequence, Tuple)

from .calculus import Calculus, DualPair, clause_symbols, dual_pairs, rnm
from .syntax import Clause, Const, SAtom, Var

TV = bool
Distribution = FrozenSet[Tuple[TV, ...]]


class InvalidArity(ValueError):
    pass


class CrossCheckError(AssertionError):
    """The two consistency deciders disagreed."""


# ---------------------------------------------------------------- SAT

Literal = int
CNF = List[List[Literal]]


def dpll(clauses: CNF) -> Optional[Dict[int, bool]]:
    """Satisfying assignment of a CNF over positive integer atoms, or None."""
    return _dpll([list(c) for c in clauses], {})


def _dpll(clauses: CNF, assign: Dict[int, bool]) -> Optional[Dict[int, bool]]:
    while True:
        if any(not c for c in clauses):
            return None
        unit = next((c[0] for c in clauses if len(c) == 1), None)
        if unit is None:
            break
        assign[abs(unit)] = unit > 0
        clauses = _assign(clauses, unit)
    if not clauses:
        return assign
    lit = clauses[0][0]
    for choice in (lit, -lit):
        res = _dpll(_assign(clauses, choice), {**assign, abs(choice): choice > 0})
        if res is not None:
            return res
    return None


def _assign(clauses: CNF, lit: Literal) -> CNF:
    out = []
    for c in clauses:
        if lit in c:
            continue
        out.append([l for l in c if l != -lit])
    return out


# ---------------------------------------------------------------- grounding


HERBRAND_CONSTANT = "h0"


def ground(theta: Sequence[Clause]) -> Tuple[List[Tuple[FrozenSet[SAtom], FrozenSet[SAtom]]], List[str]]:
    """All ground instances of ``theta`` over its constants (one fresh if none)."""
    _, consts = clause_symbols(theta)
    universe = sorted(consts) or [HERBRAND_CONSTANT]
    out = []
    for c in theta:
        vs = sorted(c.variables())
        for values in itertools.product(universe, repeat=len(vs)):
            m = dict(zip(vs, values))

            def g(a: SAtom) -> SAtom:
                return SAtom(a.index, tuple(Const(m[t.name]) if isinstance(t, Var) else t for t in a.args))

            out.append((frozenset(map(g, c.left)), frozenset(map(g, c.right))))
    return out, universe


def clause_set_consistent_grounding(theta: Sequence[Clause], k: Optional[int] = None) -> Optional[Dict[SAtom, bool]]:
    """A propositional model of the grounding of ``theta``, or None if inconsistent.

    ``k`` is accepted for interface symmetry; grounding does not depend on it.
    """
    grounded, _ = ground(theta)
    index: Dict[SAtom, int] = {}
    cnf: CNF = []
    for left, right in grounded:
        clause = []
        for a in sorted(left):
            clause.append(-index.setdefault(a, len(index) + 1))
        for a in sorted(right):
            clause.append(index.setdefault(a, len(index) + 1))
        cnf.append(clause)
    model = dpll(cnf)
    if model is None:
        return None
    return {a: model.get(i, False) for a, i in index.items()}


# ---------------------------------------------------------------- structures


@dataclass(frozen=True)
class SimplifiedStructure:
    """A structure for L^n_k: domain, constants and n k-ary predicates."""

    domain: Tuple
    consts: Dict[str, object] = field(default_factory=dict)
    preds: Dict[int, Dict[Tuple, TV]] = field(default_factory=dict)
    k: int = 1

    def holds(self, a: SAtom, env: Dict[str, object]) -> TV:
        args = tuple(env[t.name] if isinstance(t, Var) else self.consts[t.name] for t in a.args)
        return self.preds[a.index][args]


def distribution_of(C: SimplifiedStructure) -> Distribution:
    n = len(C.preds)
    out = set()
    for args in itertools.product(C.domain, repeat=C.k):
        out.add(tuple(C.preds[i][args] for i in range(1, n + 1)))
    return frozenset(out)


def all_distributions(n: int) -> List[Distribution]:
    """Every nonempty subset of {t,f}^n, ordered by size then contents."""
    tuples = list(itertools.product((True, False), repeat=n))
    out = []
    for r in range(1, len(tuples) + 1):
        out.extend(frozenset(c) for c in itertools.combinations(tuples, r))
    return out


def _canonical_base(E: Distribution) -> Tuple[Tuple, Dict[int, Dict[Tuple, TV]]]:
    domain = tuple(sorted(E, reverse=True))
    n = len(domain[0])
    preds = {i: {(b,): b[i - 1] for b in domain} for i in range(1, n + 1)}
    return domain, preds


def enumerate_canonical_structures(theta: Sequence[Clause], E: Distribution, k: int = 1) -> Iterator[SimplifiedStructure]:
    if k != 1:
        raise InvalidArity(f"E-canonical structures are defined for k=1, got k={k}")
    if not E:
        raise ValueError("distribution must be nonempty")
    domain, preds = _canonical_base(E)
    consts = sorted(clause_symbols(theta)[1])
    for values in itertools.product(domain, repeat=len(consts)):
        yield SimplifiedStructure(domain, dict(zip(consts, values)), preds, 1)


def clause_valid_in(c: Clause, C: SimplifiedStructure) -> bool:
    vs = sorted(c.variables())
    for values in itertools.product(C.domain, repeat=len(vs)):
        env = dict(zip(vs, values))
        if not (any(not C.holds(a, env) for a in c.left) or any(C.holds(a, env) for a in c.right)):
            return False
    return True


def valid_in(theta: Iterable[Clause], C: SimplifiedStructure) -> bool:
    return all(clause_valid_in(c, C) for c in theta)


def _components(theta: Sequence[Clause]) -> List[Tuple[List[str], List[Clause]]]:
    """Split clauses into groups connected through shared constants."""
    parent: Dict[str, str] = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            x = parent[x]
        return x

    for c in theta:
        cs = sorted(c.constants())
        for a, b in zip(cs, cs[1:]):
            parent[find(a)] = find(b)
        for a in cs:
            find(a)
    groups: Dict[Optional[str], List[Clause]] = {}
    for c in theta:
        cs = c.constants()
        key = find(min(cs)) if cs else None
        groups.setdefault(key, []).append(c)
    out = []
    for key, cl in groups.items():
        consts = sorted(set().union(*(c.constants() for c in cl)))
        out.append((consts, cl))
    return out


def _component_satisfiable(consts: List[str], clauses: List[Clause], domain, preds) -> bool:
    # backtracking over constant images; a clause is checked once its constants are fixed
    order = {c: i for i, c in enumerate(consts)}
    ready: Dict[int, List[Clause]] = {}
    for cl in clauses:
        last = max((order[c] for c in cl.constants()), default=-1)
        ready.setdefault(last, []).append(cl)
    base = SimplifiedStructure(domain, {}, preds, 1)
    if not all(clause_valid_in(cl, base) for cl in ready.get(-1, [])):
        return False

    def go(i: int, assign: Dict[str, object]) -> bool:
        if i == len(consts):
            return True
        for b in domain:
            assign[consts[i]] = b
            C = SimplifiedStructure(domain, assign, preds, 1)
            if all(clause_valid_in(cl, C) for cl in ready.get(i, [])) and go(i + 1, assign):
                return True
        del assign[consts[i]]
        return False

    return go(0, {})


def theta_valid_in_some_E_canonical(theta: Sequence[Clause], E: Distribution, k: int) -> bool:
    if not E:
        raise ValueError("distribution must be nonempty")
    if k == 0:
        if len(E) != 1:
            return False
        (s,) = E
        return all(any(not s[a.index - 1] for a in c.left) or any(s[a.index - 1] for a in c.right)
                   for c in theta)
    if k != 1:
        raise InvalidArity(f"canonical structures cover k in {{0,1}}, got k={k}")
    domain, preds = _canonical_base(E)
    if any(a.index > len(domain[0]) for c in theta for a in c.atoms()):
        raise ValueError("clause uses a predicate beyond the distribution's width")
    return all(_component_satisfiable(consts, cl, domain, preds) for consts, cl in _components(theta))


def canonical_witness(theta: Sequence[Clause], n: int, k: int) -> Optional[Distribution]:
    """First E (in ``all_distributions`` order) making ``theta`` valid in some E-canonical structure."""
    for E in all_distributions(n):
        if theta_valid_in_some_E_canonical(theta, E, k):
            return E
    return None


# ---------------------------------------------------------------- coherence


@dataclass(frozen=True)
class PairVerdict:
    pair: DualPair
    clauses: Tuple[Clause, ...]
    coherent: bool
    model: Optional[Dict[SAtom, bool]] = None
    distribution: Optional[Distribution] = None


@dataclass(frozen=True)
class CoherenceReport:
    coherent: bool
    pairs: Tuple[PairVerdict, ...] = ()

    @property
    def violations(self) -> Tuple[PairVerdict, ...]:
        return tuple(p for p in self.pairs if not p.coherent)


def check_pair(pair: DualPair, cross_check: bool = True) -> PairVerdict:
    theta = rnm(pair.right.premises, pair.left.premises)
    model = clause_set_consistent_grounding(theta, pair.k)
    E = None
    if cross_check and pair.k in (0, 1):
        E = canonical_witness(theta, pair.n, pair.k)
        if (E is None) != (model is None):
            raise CrossCheckError(f"deciders disagree on {pair}: grounding model={model is not None}, "
                                  f"canonical E={E}")
    return PairVerdict(pair, theta, model is None, model, E)


def is_coherent(calc: Calculus, cross_check: bool = True) -> CoherenceReport:
    verdicts = tuple(check_pair(p, cross_check) for p in dual_pairs(calc))
    return CoherenceReport(all(v.coherent for v in verdicts), verdicts)
