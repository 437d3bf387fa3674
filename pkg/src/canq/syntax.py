"""Object-language syntax: terms, formulas with (n,k)-ary quantifier nodes,
sequents, and the atomic clause languages used to state canonical rules.

All values are frozen dataclasses, hashable and safe to share.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, Iterator, Mapping, Tuple, Union


class CaptureError(ValueError):
    """Raised when a substitution would capture a variable of the inserted term."""


# ---------------------------------------------------------------- terms


@dataclass(frozen=True, order=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, order=True)
class Const:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, order=True)
class Elem:
    """Individual constant naming a domain element (the language L(D))."""

    value: int

    def __str__(self) -> str:
        return f"@{self.value}"


@dataclass(frozen=True)
class Func:
    symbol: str
    args: Tuple["Term", ...]

    def __str__(self) -> str:
        return f"{self.symbol}({', '.join(map(str, self.args))})"


Term = Union[Var, Const, Elem, Func]


# ---------------------------------------------------------------- formulas


@dataclass(frozen=True)
class Atom:
    pred: str
    args: Tuple[Term, ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return self.pred
        return f"{self.pred}({', '.join(map(str, self.args))})"


@dataclass(frozen=True)
class QuantApp:
    """``Q x1..xk (psi1, ..., psin)``; k = 0 gives a propositional connective."""

    quant: str
    binders: Tuple[str, ...]
    scope: Tuple["Formula", ...]

    def __post_init__(self):
        if len(set(self.binders)) != len(self.binders):
            raise ValueError(f"binders of {self.quant} must be distinct: {self.binders}")
        if not self.scope:
            raise ValueError(f"{self.quant} needs at least one scope formula")

    def __str__(self) -> str:
        inner = ", ".join(map(str, self.scope))
        if not self.binders:
            return f"{self.quant}({inner})"
        return f"{self.quant} {' '.join(self.binders)} ({inner})"


Formula = Union[Atom, QuantApp]


def _formula_key(f) -> str:
    return str(f)


@dataclass(frozen=True)
class Sequent:
    left: FrozenSet[Formula] = frozenset()
    right: FrozenSet[Formula] = frozenset()

    @classmethod
    def of(cls, left: Iterable[Formula] = (), right: Iterable[Formula] = ()) -> "Sequent":
        return cls(frozenset(left), frozenset(right))

    def formulas(self) -> Iterator[Formula]:
        yield from self.left
        yield from self.right

    def add(self, left: Iterable[Formula] = (), right: Iterable[Formula] = ()) -> "Sequent":
        return Sequent(self.left | frozenset(left), self.right | frozenset(right))

    def issubset(self, other: "Sequent") -> bool:
        return self.left <= other.left and self.right <= other.right

    def __str__(self) -> str:
        lhs = ", ".join(sorted(map(str, self.left)))
        rhs = ", ".join(sorted(map(str, self.right)))
        return f"{lhs} => {rhs}".strip()


# ---------------------------------------------------------------- signature


@dataclass(frozen=True)
class Signature:
    """Declared symbols of an object language L."""

    quantifiers: Mapping[str, Tuple[int, int]] = field(default_factory=dict)
    functions: Mapping[str, int] = field(default_factory=dict)
    predicates: Mapping[str, int] = field(default_factory=dict)
    constants: Tuple[str, ...] = ()

    def with_constants(self, names: Iterable[str]) -> "Signature":
        extra = [n for n in names if n not in self.constants]
        if not extra:
            return self
        return Signature(self.quantifiers, self.functions, self.predicates,
                         self.constants + tuple(extra))


# ---------------------------------------------------------------- clause languages


@dataclass(frozen=True)
class SAtom:
    """Atom ``p_i(t1..tk)`` of a simplified language L^n_k(Con)."""

    index: int
    args: Tuple[Union[Var, Const], ...] = ()

    def _key(self):
        return (self.index, tuple(a.name for a in self.args))

    def __lt__(self, other: "SAtom") -> bool:
        return self._key() < other._key()

    def __str__(self) -> str:
        if not self.args:
            return f"p{self.index}"
        return f"p{self.index}({','.join(a.name for a in self.args)})"


@dataclass(frozen=True)
class Clause:
    left: FrozenSet[SAtom] = frozenset()
    right: FrozenSet[SAtom] = frozenset()

    @classmethod
    def of(cls, left: Iterable[SAtom] = (), right: Iterable[SAtom] = ()) -> "Clause":
        return cls(frozenset(left), frozenset(right))

    def atoms(self) -> Iterator[SAtom]:
        yield from sorted(self.left)
        yield from sorted(self.right)

    def variables(self) -> FrozenSet[str]:
        return frozenset(a.name for at in self.atoms() for a in at.args if isinstance(a, Var))

    def constants(self) -> FrozenSet[str]:
        return frozenset(a.name for at in self.atoms() for a in at.args if isinstance(a, Const))

    def __str__(self) -> str:
        lhs = ", ".join(str(a) for a in sorted(self.left))
        rhs = ", ".join(str(a) for a in sorted(self.right))
        return f"{lhs} => {rhs}".strip()


CLAUSE_VAR_RE = re.compile(r"[vxyz]\d*'*\Z")
CLAUSE_CONST_RE = re.compile(r"[cde]\d*'*\Z")
OBJECT_VAR_RE = re.compile(r"[u-z]\d*\Z")


def is_object_variable_name(name: str) -> bool:
    return bool(OBJECT_VAR_RE.match(name))


# ---------------------------------------------------------------- free variables


def term_vars(t: Term) -> FrozenSet[str]:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, Func):
        out: FrozenSet[str] = frozenset()
        for a in t.args:
            out |= term_vars(a)
        return out
    return frozenset()


@lru_cache(maxsize=1 << 18)
def free_vars(f) -> FrozenSet[str]:
    """Names of the variables occurring free in a term, formula or sequent."""
    if isinstance(f, (Var, Const, Elem, Func)):
        return term_vars(f)
    if isinstance(f, Atom):
        out: FrozenSet[str] = frozenset()
        for a in f.args:
            out |= term_vars(a)
        return out
    if isinstance(f, QuantApp):
        out = frozenset()
        for s in f.scope:
            out |= free_vars(s)
        return out - frozenset(f.binders)
    if isinstance(f, Sequent):
        out = frozenset()
        for g in f.formulas():
            out |= free_vars(g)
        return out
    raise TypeError(f"not a term or formula: {f!r}")


def bound_vars(f) -> FrozenSet[str]:
    """Variables occurring as binders anywhere in ``f``."""
    if isinstance(f, Atom):
        return frozenset()
    if isinstance(f, QuantApp):
        out = frozenset(f.binders)
        for s in f.scope:
            out |= bound_vars(s)
        return out
    if isinstance(f, Sequent):
        out = frozenset()
        for g in f.formulas():
            out |= bound_vars(g)
        return out
    raise TypeError(f"not a formula: {f!r}")


def all_vars(f) -> FrozenSet[str]:
    return free_vars(f) | bound_vars(f)


def is_closed(f) -> bool:
    return not free_vars(f)


def subterms(f) -> Iterator[Term]:
    """All term occurrences (including nested ones) of a formula or term."""
    if isinstance(f, (Var, Const, Elem)):
        yield f
    elif isinstance(f, Func):
        yield f
        for a in f.args:
            yield from subterms(a)
    elif isinstance(f, Atom):
        for a in f.args:
            yield from subterms(a)
    elif isinstance(f, QuantApp):
        for s in f.scope:
            yield from subterms(s)


def constants_of(f) -> FrozenSet[str]:
    return frozenset(t.name for t in subterms(f) if isinstance(t, Const))


def quant_depth(f: Formula) -> int:
    if isinstance(f, Atom):
        return 0
    return 1 + max(quant_depth(s) for s in f.scope)


# ---------------------------------------------------------------- substitution


def _subst_term(t: Term, m: Mapping[str, Term]) -> Term:
    if isinstance(t, Var):
        return m.get(t.name, t)
    if isinstance(t, Func):
        return Func(t.symbol, tuple(_subst_term(a, m) for a in t.args))
    return t


def is_free_for(t: Term, x: str, f: Formula) -> bool:
    """True iff no free occurrence of ``x`` in ``f`` sits under a binder of a variable of ``t``."""
    return _free_for(term_vars(t), x, f, frozenset())


def _free_for(tv: FrozenSet[str], x: str, f: Formula, binding: FrozenSet[str]) -> bool:
    if isinstance(f, Atom):
        if any(x in term_vars(a) for a in f.args):
            return not (tv & binding)
        return True
    if x in f.binders:
        return True
    inner = binding | frozenset(f.binders)
    return all(_free_for(tv, x, s, inner) for s in f.scope)


def substitute_many(f: Formula, mapping: Mapping[str, Term]) -> Formula:
    """Simultaneous substitution ``f{t1/x1, ..., tm/xm}``.

    Raises CaptureError when some ``ti`` is not free for ``xi`` in ``f``.
    """
    for x, t in mapping.items():
        if not is_free_for(t, x, f):
            raise CaptureError(f"{t} is not free for {x} in {f}")
    return _subst(f, dict(mapping))


def _subst(f: Formula, m: Dict[str, Term]) -> Formula:
    if not m:
        return f
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(_subst_term(a, m) for a in f.args))
    inner = {k: v for k, v in m.items() if k not in f.binders}
    if not inner:
        return f
    return QuantApp(f.quant, f.binders, tuple(_subst(s, inner) for s in f.scope))


def substitute(f: Formula, x: str, t: Term) -> Formula:
    return substitute_many(f, {x: t})


def substitute_sequent(s: Sequent, mapping: Mapping[str, Term]) -> Sequent:
    return Sequent(frozenset(substitute_many(g, mapping) for g in s.left),
                   frozenset(substitute_many(g, mapping) for g in s.right))


# ---------------------------------------------------------------- alpha equivalence

# Bound variables are renamed to level-indexed names outside the lexical
# classes of the concrete syntax, so they never clash with free names.


def _level_name(level: int, j: int) -> str:
    return f"%{level}.{j}"


def nameless(f: Formula, level: int = 0, env: Mapping[str, str] | None = None) -> Formula:
    """Canonical representative of the alpha-class of ``f``."""
    if level == 0 and not env:
        return _nameless_top(f)
    return _nameless(f, level, env)


@lru_cache(maxsize=1 << 18)
def _nameless_top(f: Formula) -> Formula:
    return _nameless(f, 0, None)


def _nameless(f: Formula, level: int, env: Mapping[str, str] | None) -> Formula:
    env = env or {}
    if isinstance(f, Atom):
        if not env:
            return f
        return Atom(f.pred, tuple(_subst_term(a, {k: Var(v) for k, v in env.items()}) for a in f.args))
    inner = dict(env)
    new_binders = []
    for j, b in enumerate(f.binders):
        inner[b] = _level_name(level, j)
        new_binders.append(_level_name(level, j))
    return QuantApp(f.quant, tuple(new_binders),
                    tuple(_nameless(s, level + 1, inner) for s in f.scope))


def alpha_eq(f1: Formula, f2: Formula) -> bool:
    return nameless(f1) == nameless(f2)


def alpha_member(f: Formula, fs: Iterable[Formula]) -> bool:
    key = nameless(f)
    return any(nameless(g) == key for g in fs)


def is_alpha_axiom(s: Sequent) -> bool:
    lk = {nameless(f) for f in s.left}
    return any(nameless(g) in lk for g in s.right)


def free_variable_condition(sequents: Iterable[Sequent]) -> bool:
    """Bound variables of the set are disjoint from its free variables."""
    fv: FrozenSet[str] = frozenset()
    bv: FrozenSet[str] = frozenset()
    for s in sequents:
        fv |= free_vars(s)
        bv |= bound_vars(s)
    return not (fv & bv)


def fresh_name(prefix: str, avoid: Iterable[str]) -> str:
    avoid = set(avoid)
    i = 1
    while f"{prefix}{i}" in avoid:
        i += 1
    return f"{prefix}{i}"
