"""Proof objects, rule-application checking, bounded proof search, cut analysis."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import (Dict, Iterable, Iterator, List, Optional, Sequence, Tuple,
                    Union)

from .calculus import CanonicalRule, Calculus
from .semantics import BudgetExceeded
from .syntax import (Atom, CaptureError, Clause, Const, Formula, Func,
                     QuantApp, SAtom, Sequent, Term, Var, all_vars, alpha_eq,
                     free_vars, free_variable_condition, fresh_name, is_alpha_axiom,
                     is_free_for, nameless, substitute_many, subterms,
                     term_vars)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChiMapping:
    """Instantiation of a schematic rule.

    ``formulas`` maps predicate indices to L-formulas, ``terms`` maps the
    rule's constants to L-terms and its variables to L-variables, ``binds``
    holds the bound variables z1..zk of the introduced formula.
    """

    formulas: Dict[int, Formula] = field(default_factory=dict)
    terms: Dict[str, Term] = field(default_factory=dict)
    binds: Tuple[str, ...] = ()


@dataclass(frozen=True)
class Axiom:
    pass


@dataclass(frozen=True)
class Assumption:
    pass


@dataclass(frozen=True)
class Weakening:
    premise: int


@dataclass(frozen=True)
class Cut:
    left: int
    right: int
    formula: Optional[Formula] = None


@dataclass(frozen=True)
class RuleApp:
    rule: str
    premises: Tuple[int, ...]
    chi: ChiMapping


Justification = Union[Axiom, Assumption, Weakening, Cut, RuleApp]


@dataclass(frozen=True)
class Step:
    number: int
    sequent: Sequent
    justification: Justification


@dataclass(frozen=True)
class Proof:
    steps: Tuple[Step, ...]

    @property
    def conclusion(self) -> Sequent:
        return self.steps[-1].sequent

    def step(self, number: int) -> Step:
        for s in self.steps:
            if s.number == number:
                return s
        raise KeyError(number)


class ProofError(ValueError):
    def __init__(self, step: Optional[int], message: str):
        super().__init__(f"step {step}: {message}" if step is not None else message)
        self.step = step
        self.message = message


@dataclass(frozen=True)
class ApplicationCheck:
    ok: bool
    diagnostics: Tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class CutReport:
    cut_formulas: Tuple[Formula, ...] = ()
    simple: bool = True


# ---------------------------------------------------------------- matching

# Matching works on nameless forms: bound variables carry level names
# starting with '%', so a pattern variable may only bind terms free of them.


def _is_bound_name(name: str) -> bool:
    return name.startswith("%")


def _match_term(p: Term, t: Term, pvars, binding: Dict[str, Term]) -> bool:
    if isinstance(p, Var) and p.name in pvars:
        if any(_is_bound_name(v) for v in term_vars(t)):
            return False
        key = pvars[p.name]
        if key in binding:
            return binding[key] == t
        binding[key] = t
        return True
    if isinstance(p, Func):
        return (isinstance(t, Func) and p.symbol == t.symbol and len(p.args) == len(t.args)
                and all(_match_term(a, b, pvars, binding) for a, b in zip(p.args, t.args)))
    return p == t


def match_formula(p: Formula, t: Formula, pvars: Dict[str, str], binding: Dict[str, Term]) -> Optional[Dict[str, Term]]:
    """Extend ``binding`` so that substituting it into ``p`` gives an alpha-variant of ``t``.

    ``pvars`` maps free variable names of ``p`` to binding keys.  Both
    formulas are expected in nameless form.
    """
    out = dict(binding)
    return out if _match(p, t, pvars, out) else None


def _match(p: Formula, t: Formula, pvars, binding) -> bool:
    if isinstance(p, Atom):
        return (isinstance(t, Atom) and p.pred == t.pred and len(p.args) == len(t.args)
                and all(_match_term(a, b, pvars, binding) for a, b in zip(p.args, t.args)))
    return (isinstance(t, QuantApp) and p.quant == t.quant and p.binders == t.binders
            and len(p.scope) == len(t.scope)
            and all(_match(a, b, pvars, binding) for a, b in zip(p.scope, t.scope)))


def _instance_matches(pattern: Sequent, left: Sequence[Formula], right: Sequence[Formula],
                      exact: bool) -> Iterator[Tuple[Dict[str, Term], List[Formula], List[Formula]]]:
    """Substitutions mapping ``pattern`` into the given formulas (up to alpha).

    Yields the substitution with the hit formulas of each side.  With
    ``exact`` every given formula must be hit.
    """
    pvars = {x: x for x in free_vars(pattern)}
    pats = [(0, nameless(f)) for f in sorted(pattern.left, key=str)] + \
           [(1, nameless(f)) for f in sorted(pattern.right, key=str)]
    targets = ([(f, nameless(f)) for f in left], [(f, nameless(f)) for f in right])

    def go(i, binding, hits):
        if i == len(pats):
            hl = [f for f, _ in targets[0] if id(f) in hits]
            hr = [f for f, _ in targets[1] if id(f) in hits]
            if exact and (len(hl) != len(targets[0]) or len(hr) != len(targets[1])):
                return
            yield binding, hl, hr
            return
        side, p = pats[i]
        for f, nf in targets[side]:
            b = match_formula(p, nf, pvars, binding)
            if b is not None:
                yield from go(i + 1, b, hits | {id(f)})

    yield from go(0, {}, frozenset())


def is_assumption_instance(seq: Sequent, ambient: Iterable[Sequent]) -> bool:
    left, right = sorted(seq.left, key=str), sorted(seq.right, key=str)
    return any(next(_instance_matches(a, left, right, exact=True), None) is not None for a in ambient)


def is_ambient_formula(f: Formula, ambient: Iterable[Sequent]) -> bool:
    """``f`` is (up to alpha) a substitution instance of a formula of the ambient set."""
    nf = nameless(f)
    for a in ambient:
        for g in a.formulas():
            if match_formula(nameless(g), nf, {x: x for x in free_vars(g)}, {}) is not None:
                return True
    return False


# ---------------------------------------------------------------- applications


def principal_formula(rule: CanonicalRule, chi: ChiMapping) -> QuantApp:
    return QuantApp(rule.quant, tuple(chi.binds), tuple(chi.formulas[i] for i in range(1, rule.n + 1)))


def instantiate_atom(a: SAtom, chi: ChiMapping) -> Formula:
    """``chi[p_i(t1..tk)] = chi[p_i]{chi[t1]/z1, ..., chi[tk]/zk}``."""
    m = {z: chi.terms[t.name] for z, t in zip(chi.binds, a.args)}
    return substitute_many(chi.formulas[a.index], m)


def instantiate_clause(c: Clause, chi: ChiMapping) -> Tuple[frozenset, frozenset]:
    return (frozenset(instantiate_atom(a, chi) for a in c.left),
            frozenset(instantiate_atom(a, chi) for a in c.right))


def check_application(calc: Calculus, rule: CanonicalRule, premises: Sequence[Sequent],
                      conclusion: Sequent, chi: ChiMapping) -> ApplicationCheck:
    diags: List[str] = []
    if len(chi.binds) != rule.k or len(set(chi.binds)) != len(chi.binds):
        diags.append(f"binds must list {rule.k} distinct variables, got {list(chi.binds)}")
    missing = [i for i in range(1, rule.n + 1) if i not in chi.formulas]
    if missing:
        diags.append("no formula image for " + ", ".join(f"p{i}" for i in missing))
    for y in sorted(rule.variables):
        if not isinstance(chi.terms.get(y), Var):
            diags.append(f"variable {y} must be mapped to a variable (bullet: chi[y] is a variable)")
    for c in sorted(rule.constants):
        if c not in chi.terms:
            diags.append(f"constant {c} has no term image")
    if diags:
        return ApplicationCheck(False, tuple(diags))

    images = [chi.terms[y].name for y in sorted(rule.variables)]
    if len(set(images)) != len(images):
        diags.append("distinct variables must have distinct images (injectivity)")
    for c in sorted(rule.constants):
        clash = sorted(set(images) & term_vars(chi.terms[c]))
        if clash:
            diags.append(f"image of constant {c} contains eigenvariable image(s) {clash}")
    A = principal_formula(rule, chi)
    side = conclusion.right if rule.is_right else conclusion.left
    if A not in side:
        diags.append(f"conclusion lacks {A} on the {'right' if rule.is_right else 'left'}")
    context_free = free_vars(conclusion) | free_vars(A)
    for j, cl in enumerate(rule.premises, 1):
        for a in cl.atoms():
            body = chi.formulas[a.index]
            for z, t in zip(chi.binds, a.args):
                img = chi.terms[t.name]
                if not is_free_for(img, z, body):
                    diags.append(f"clause {j}: {img} is not free for {z} in {body}")
                if isinstance(t, Var) and img.name in context_free:
                    diags.append(f"clause {j}: eigenvariable {img} occurs free in the context or principal formula")
    if len(premises) != len(rule.premises):
        diags.append(f"rule {rule.name} has {len(rule.premises)} premises, got {len(premises)}")
    if diags:
        return ApplicationCheck(False, tuple(dict.fromkeys(diags)))

    parts = [instantiate_clause(c, chi) for c in rule.premises]
    contexts = [(conclusion.left, conclusion.right)]
    if rule.is_right:
        contexts.append((conclusion.left, conclusion.right - {A}))
    else:
        contexts.append((conclusion.left - {A}, conclusion.right))
    for gamma, delta in contexts:
        if all(p == Sequent(gamma | l, delta | r) for p, (l, r) in zip(premises, parts)):
            return ApplicationCheck(True)
    gamma, delta = contexts[0]
    for j, (p, (l, r)) in enumerate(zip(premises, parts), 1):
        expected = Sequent(gamma | l, delta | r)
        if p != expected and p != Sequent(contexts[1][0] | l, contexts[1][1] | r):
            diags.append(f"premise {j} is {p}, expected {expected}")
    return ApplicationCheck(False, tuple(diags) or ("premises do not match the rule",))


def _default_term(calc: Calculus, avoid: Iterable[str]) -> Term:
    if calc.signature.constants:
        return Const(calc.signature.constants[0])
    return Var(_fresh_var(avoid))


def _fresh_var(avoid: Iterable[str], prefix: str = "w") -> str:
    return fresh_name(prefix, avoid)


def infer_chi(calc: Calculus, rule: CanonicalRule, premises: Sequence[Sequent], conclusion: Sequent,
              limit: int = 10_000) -> Optional[ChiMapping]:
    """First mapping (in a fixed search order) under which the step is an application of ``rule``."""
    if len(premises) != len(rule.premises):
        return None
    side = conclusion.right if rule.is_right else conclusion.left
    candidates = sorted((f for f in side if isinstance(f, QuantApp) and f.quant == rule.quant
                         and len(f.binders) == rule.k and len(f.scope) == rule.n), key=str)
    tried = 0
    for A in candidates:
        formulas = {i + 1: s for i, s in enumerate(A.scope)}
        patterns = {i: nameless(s) for i, s in formulas.items()}
        goals = []
        for cl, prem in zip(rule.premises, premises):
            for a in sorted(cl.left):
                goals.append((a, sorted(prem.left, key=str)))
            for a in sorted(cl.right):
                goals.append((a, sorted(prem.right, key=str)))

        def go(i, binding):
            if i == len(goals):
                yield binding
                return
            a, targets = goals[i]
            pvars = {z: t.name for z, t in zip(A.binders, a.args)}
            for f in targets:
                b = match_formula(patterns[a.index], nameless(f), pvars, binding)
                if b is not None:
                    yield from go(i + 1, b)

        for binding in go(0, {}):
            tried += 1
            if tried > limit:
                return None
            terms = dict(binding)
            avoid = set(all_vars(conclusion)) | {v for p in premises for v in all_vars(p)}
            for y in sorted(rule.variables):
                if y not in terms:
                    terms[y] = Var(_fresh_var(avoid))
                    avoid.add(terms[y].name)
            for c in sorted(rule.constants):
                if c not in terms:
                    terms[c] = _default_term(calc, avoid)
            chi = ChiMapping(formulas, terms, A.binders)
            if check_application(calc, rule, premises, conclusion, chi):
                return chi
    return None


# ---------------------------------------------------------------- checking


def _cut_formula(a: Sequent, b: Sequent, concl: Sequent, given: Optional[Formula]) -> Optional[Formula]:
    if a.left != concl.left or b.right != concl.right:
        return None
    for A1 in sorted(a.right, key=str):
        if a.right != concl.right | {A1}:
            continue
        if given is not None and not alpha_eq(A1, given):
            continue
        for A2 in sorted(b.left, key=str):
            if alpha_eq(A1, A2) and b.left == concl.left | {A2}:
                return A1
    return None


def check_proof(calc: Calculus, ambient: Iterable[Sequent], proof: Proof) -> CutReport:
    """Validate every step; raise ProofError at the first bad one."""
    ambient = list(ambient)
    if not proof.steps:
        raise ProofError(None, "empty proof")
    seen: Dict[int, Sequent] = {}
    cuts: List[Formula] = []
    for st in proof.steps:
        j = st.justification
        if st.number in seen:
            raise ProofError(st.number, "duplicate step number")

        def prem(m: int) -> Sequent:
            if m not in seen:
                raise ProofError(st.number, f"reference to step {m}, which is not an earlier step")
            return seen[m]

        if isinstance(j, Axiom):
            if not is_alpha_axiom(st.sequent):
                raise ProofError(st.number, "axiom needs alpha-equivalent formulas on both sides")
        elif isinstance(j, Assumption):
            if not is_assumption_instance(st.sequent, ambient):
                raise ProofError(st.number, "not a substitution instance of an assumption")
        elif isinstance(j, Weakening):
            if not prem(j.premise).issubset(st.sequent):
                raise ProofError(st.number, f"step {j.premise} is not contained in this sequent")
        elif isinstance(j, Cut):
            f = _cut_formula(prem(j.left), prem(j.right), st.sequent, j.formula)
            if f is None:
                raise ProofError(st.number, f"steps {j.left} and {j.right} do not cut to this sequent")
            cuts.append(f)
        elif isinstance(j, RuleApp):
            try:
                rule = calc.rule(j.rule)
            except KeyError:
                raise ProofError(st.number, f"unknown rule {j.rule}") from None
            try:
                res = check_application(calc, rule, [prem(m) for m in j.premises], st.sequent, j.chi)
            except CaptureError as e:
                raise ProofError(st.number, str(e)) from None
            if not res:
                raise ProofError(st.number, "; ".join(res.diagnostics))
        else:
            raise ProofError(st.number, f"unknown justification {j!r}")
        seen[st.number] = st.sequent
    return _report(cuts, ambient)


def _report(cuts: Sequence[Formula], ambient: Sequence[Sequent]) -> CutReport:
    return CutReport(tuple(cuts), all(is_ambient_formula(f, ambient) for f in cuts))


def cut_analysis(proof: Proof, ambient: Iterable[Sequent]) -> CutReport:
    ambient = list(ambient)
    seqs = {s.number: s.sequent for s in proof.steps}
    cuts = []
    for st in proof.steps:
        j = st.justification
        if isinstance(j, Cut):
            f = j.formula or _cut_formula(seqs[j.left], seqs[j.right], st.sequent, None)
            cuts.append(f)
    return _report(cuts, ambient)


# ---------------------------------------------------------------- search

CUT_MODES = ("none", "simple", "all")


@dataclass
class _Node:
    sequent: Sequent
    kind: str                       # axiom | assumption | weakening | cut | rule
    children: Tuple["_Node", ...] = ()
    rule: Optional[str] = None
    chi: Optional[ChiMapping] = None
    formula: Optional[Formula] = None


def free_terms(seq: Sequent) -> List[Term]:
    """Subterms of ``seq`` whose variables all occur free in it, sorted by rendering."""
    fv = free_vars(seq)
    out = {t for f in seq.formulas() for t in subterms(f) if term_vars(t) <= fv}
    return sorted(out, key=lambda t: (len(str(t)), str(t)))


def fresh_constant_pool(calc: Calculus, count: int, avoid: Iterable[str] = ()) -> List[Const]:
    """Constants not in ``avoid``: unused declared ones first, then new names ``k1, k2, ...``."""
    avoid = set(avoid)
    out = [Const(c) for c in calc.signature.constants if c not in avoid][:count]
    used = set(calc.signature.constants) | set(calc.signature.functions) | avoid
    for _ in range(count - len(out)):
        name = fresh_name("k", used)
        used.add(name)
        out.append(Const(name))
    return out


def default_cut_pool(target: Sequent, ambient: Sequence[Sequent], terms: Sequence[Term]) -> List[Formula]:
    """Formulas of the target and ambient set, closed downwards under scope instances over ``terms``."""
    seen: Dict[Formula, None] = {}
    todo = [f for s in [target, *ambient] for f in sorted(s.formulas(), key=str)]
    while todo:
        f = todo.pop(0)
        if f in seen:
            continue
        seen[f] = None
        if isinstance(f, QuantApp):
            for ts in itertools.product(terms, repeat=len(f.binders)):
                m = dict(zip(f.binders, ts))
                for s in f.scope:
                    try:
                        todo.append(substitute_many(s, m))
                    except CaptureError:
                        pass
    return list(seen)


def _problem_terms(target: Sequent, ambient: Sequence[Sequent], fresh: Sequence[Term]) -> List[Term]:
    ts = free_terms(target) + [t for a in ambient for t in free_terms(a) if not term_vars(t)] + list(fresh)
    return list(dict.fromkeys(ts))


def ambient_instances(ambient: Sequence[Sequent], terms: Sequence[Term]) -> List[Formula]:
    """Ambient formulas with their free variables replaced by ``terms`` in every way (capture-free)."""
    out: Dict[Formula, None] = {}
    for a in ambient:
        for f in sorted(a.formulas(), key=str):
            vs = sorted(free_vars(f))
            for ts in itertools.product(terms, repeat=len(vs)):
                try:
                    out.setdefault(substitute_many(f, dict(zip(vs, ts))), None)
                except CaptureError:
                    pass
    return list(out)


class _Searcher:
    def __init__(self, calc, ambient, cuts, cut_pool, fresh, max_nodes):
        self.calc = calc
        self.ambient = list(ambient)
        self.cuts = cuts
        self.cut_pool = list(cut_pool)
        self.fresh = list(fresh)
        # closed ambient terms first, then the fresh constants
        amb = [t for a in self.ambient for t in free_terms(a) if not term_vars(t)]
        self.extra_terms = list(dict.fromkeys(amb + self.fresh))
        self.max_nodes = max_nodes
        self.nodes = 0
        self.failed: Dict[Sequent, int] = {}
        self.proved: Dict[Sequent, _Node] = {}

    def leaf(self, seq: Sequent) -> Optional[_Node]:
        if is_alpha_axiom(seq):
            return _Node(seq, "axiom")
        left, right = sorted(seq.left, key=str), sorted(seq.right, key=str)
        for a in self.ambient:
            for _, hl, hr in _instance_matches(a, left, right, exact=False):
                inst = Sequent(frozenset(hl), frozenset(hr))
                node = _Node(inst, "assumption")
                return node if inst == seq else _Node(seq, "weakening", (node,))
        return None

    def prove(self, seq: Sequent, depth: int) -> Optional[_Node]:
        if seq in self.proved:
            return self.proved[seq]
        if self.failed.get(seq, -1) >= depth:
            return None
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise BudgetExceeded(f"proof search visited more than {self.max_nodes} nodes")
        node = self.leaf(seq)
        if node is None and depth > 0:
            node = self.by_rule(seq, depth) or self.by_cut(seq, depth)
        if node is None:
            self.failed[seq] = depth
        else:
            self.proved[seq] = node
        return node

    def all_premises(self, seq: Sequent, premises: Sequence[Sequent], depth: int) -> Optional[List[_Node]]:
        out = []
        for p in premises:
            sub = self.prove(p, depth - 1)
            if sub is None:
                return None
            out.append(sub)
        return out

    def by_rule(self, seq: Sequent, depth: int) -> Optional[_Node]:
        local = free_terms(seq)
        pool = local + [t for t in self.extra_terms if t not in local]
        for rule in self.calc.rules:
            for chi, premises in self.applications(rule, seq, pool):
                subs = self.all_premises(seq, premises, depth)
                if subs is not None:
                    return _Node(seq, "rule", tuple(subs), rule.name, chi)
        return None

    def applications(self, rule: CanonicalRule, seq: Sequent, pool: Sequence[Term]):
        side = seq.right if rule.is_right else seq.left
        cands = sorted((f for f in side if isinstance(f, QuantApp) and f.quant == rule.quant
                        and len(f.binders) == rule.k and len(f.scope) == rule.n), key=str)
        consts = sorted(rule.constants)
        avoid = set(all_vars(seq)) | {v for t in pool for v in term_vars(t)}
        eigen: Dict[str, Term] = {}
        for y in sorted(rule.variables):
            eigen[y] = Var(fresh_name("w", avoid))
            avoid.add(eigen[y].name)
        for A in cands:
            formulas = {i + 1: s for i, s in enumerate(A.scope)}
            for images in itertools.product(pool, repeat=len(consts)):
                chi = ChiMapping(formulas, {**eigen, **dict(zip(consts, images))}, A.binders)
                try:
                    parts = [instantiate_clause(c, chi) for c in rule.premises]
                except CaptureError:
                    continue
                premises = [Sequent(seq.left | l, seq.right | r) for l, r in parts]
                if any(p == seq for p in premises):
                    continue
                yield chi, premises

    def by_cut(self, seq: Sequent, depth: int) -> Optional[_Node]:
        if self.cuts == "none":
            return None
        for f in self.cut_pool:
            if alpha_member_any(f, seq):
                continue
            a, b = seq.add(right=[f]), seq.add(left=[f])
            subs = self.all_premises(seq, [a, b], depth)
            if subs is not None:
                return _Node(seq, "cut", tuple(subs), formula=f)
        return None


def alpha_member_any(f: Formula, seq: Sequent) -> bool:
    nf = nameless(f)
    return any(nameless(g) == nf for g in seq.formulas())


def _assemble(root: _Node) -> Proof:
    steps: List[Step] = []
    numbers: Dict[Sequent, int] = {}

    def emit(node: _Node) -> int:
        if node.sequent in numbers:
            return numbers[node.sequent]
        refs = [emit(c) for c in node.children]
        if node.kind == "axiom":
            j = Axiom()
        elif node.kind == "assumption":
            j = Assumption()
        elif node.kind == "weakening":
            j = Weakening(refs[0])
        elif node.kind == "cut":
            j = Cut(refs[0], refs[1], node.formula)
        else:
            j = RuleApp(node.rule, tuple(refs), node.chi)
        n = len(steps) + 1
        steps.append(Step(n, node.sequent, j))
        numbers[node.sequent] = n
        return n

    emit(root)
    return Proof(tuple(steps))


def search_proof(calc: Calculus, ambient: Iterable[Sequent], target: Sequent, max_depth: int = 4,
                 cuts: str = "none", cut_pool: Optional[Iterable[Formula]] = None,
                 fresh_constants: int = 1, max_nodes: int = 200_000) -> Optional[Proof]:
    """Bounded backward search by iterative deepening.

    Rule premises keep the principal formula in their context.  Eigenvariables
    are fresh; constant slots range over the free subterms of the current
    sequent plus ``fresh_constants`` new constants.  Cuts are tried only on
    ``cut_pool`` (``cuts='simple'`` defaults it to the ambient formulas).
    None means no proof up to ``max_depth``; BudgetExceeded means the node
    budget ran out first.
    """
    if cuts not in CUT_MODES:
        raise ValueError(f"cuts must be one of {CUT_MODES}")
    ambient = list(ambient)
    if not free_variable_condition(ambient + [target]):
        log.warning("ambient set and target violate the free-variable condition")
    fresh = fresh_constant_pool(calc, fresh_constants,
                                {c for s in [target, *ambient] for f in s.formulas()
                                 for t in subterms(f) if isinstance(t, Const) for c in [t.name]})
    if cut_pool is None:
        if cuts == "simple":
            cut_pool = ambient_instances(ambient, _problem_terms(target, ambient, fresh))
        elif cuts == "all":
            cut_pool = default_cut_pool(target, ambient, free_terms(target) or fresh)
        else:
            cut_pool = []
    elif cuts == "simple":
        cut_pool = [f for f in cut_pool if is_ambient_formula(f, ambient)]
    s = _Searcher(calc, ambient, cuts, cut_pool, fresh, max_nodes)
    for depth in range(max_depth + 1):
        node = s.prove(target, depth)
        if node is not None:
            return _assemble(node)
    return None


def fresh_constants_of(proof: Proof, calc: Calculus) -> List[str]:
    """Constants used in ``proof`` that the calculus signature does not declare."""
    declared = set(calc.signature.constants)
    used = {t.name for st in proof.steps for f in st.sequent.formulas()
            for t in subterms(f) if isinstance(t, Const)}
    for st in proof.steps:
        if isinstance(st.justification, RuleApp):
            for t in st.justification.chi.terms.values():
                used |= {u.name for u in _term_consts(t)}
    return sorted(used - declared)


def _term_consts(t: Term) -> Iterator[Const]:
    if isinstance(t, Const):
        yield t
    elif isinstance(t, Func):
        for a in t.args:
            yield from _term_consts(a)
