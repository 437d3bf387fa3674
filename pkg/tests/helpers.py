"""Shared strategies and independent oracles for the test suite."""

import itertools

from hypothesis import strategies as st

from canq.frontend import parse_calculus
from canq.syntax import (Atom, Const, Elem, Func, QuantApp, Sequent, Signature,
                         Var, substitute_many)

SIG = Signature(
    quantifiers={"Forall": (1, 1), "And": (2, 0), "Qb": (2, 1), "Q2": (1, 2)},
    functions={"f": 1, "g": 2},
    predicates={"p": 1, "q": 1, "r": 2, "s": 0},
    constants=("c", "d"),
)

VARS = ("x", "y", "z", "u")


def terms(depth=2, variables=VARS, consts=("c", "d")):
    base = st.one_of(st.sampled_from([Var(v) for v in variables]), st.sampled_from([Const(c) for c in consts]))
    if depth == 0:
        return base
    sub = terms(depth - 1, variables, consts)
    return st.one_of(base, st.builds(lambda a: Func("f", (a,)), sub),
                     st.builds(lambda a, b: Func("g", (a, b)), sub, sub))


def atoms(variables=VARS):
    t = terms(1, variables)
    return st.one_of(
        st.builds(lambda a: Atom("p", (a,)), t),
        st.builds(lambda a: Atom("q", (a,)), t),
        st.builds(lambda a, b: Atom("r", (a, b)), t, t),
        st.just(Atom("s")),
    )


def formulas(max_leaves=6, variables=VARS):
    def extend(children):
        return st.one_of(
            st.builds(lambda x, a: QuantApp("Forall", (x,), (a,)), st.sampled_from(variables), children),
            st.builds(lambda a, b: QuantApp("And", (), (a, b)), children, children),
            st.builds(lambda x, a, b: QuantApp("Qb", (x,), (a, b)), st.sampled_from(variables), children, children),
            st.builds(lambda xy, a: QuantApp("Q2", xy, (a,)),
                      st.permutations(variables).map(lambda p: tuple(p[:2])), children),
        )
    return st.recursive(atoms(variables), extend, max_leaves=max_leaves)


def sequents(max_leaves=4):
    fs = formulas(max_leaves)
    return st.builds(lambda l, r: Sequent.of(l, r), st.lists(fs, max_size=3), st.lists(fs, max_size=3))


# ---------------------------------------------------------------- alpha oracle


def alpha_oracle(f, g, fresh=None):
    """Alpha-equivalence by the recursion ``Q x (phi) ~ Q y (psi)`` iff the
    scopes agree after renaming both binders to a common fresh variable."""
    fresh = fresh if fresh is not None else itertools.count()
    if isinstance(f, Atom) or isinstance(g, Atom):
        return f == g
    if f.quant != g.quant or len(f.binders) != len(g.binders) or len(f.scope) != len(g.scope):
        return False
    zs = [Var(f"fresh{next(fresh)}") for _ in f.binders]
    for a, b in zip(f.scope, g.scope):
        a2 = substitute_many(a, dict(zip(f.binders, zs)))
        b2 = substitute_many(b, dict(zip(g.binders, zs)))
        if not alpha_oracle(a2, b2, fresh):
            return False
    return True


def rename_bound(f, names):
    """Rename every binder of ``f`` from the iterator ``names``, avoiding capture
    by construction (fresh names only)."""
    if isinstance(f, Atom):
        return f
    new = tuple(next(names) for _ in f.binders)
    scope = tuple(rename_bound(substitute_many(s, {x: Var(y) for x, y in zip(f.binders, new)}), names)
                  for s in f.scope)
    return QuantApp(f.quant, new, scope)


# ---------------------------------------------------------------- SAT oracle


def brute_force_sat(cnf):
    atoms_ = sorted({abs(l) for c in cnf for l in c})
    for bits in itertools.product((True, False), repeat=len(atoms_)):
        m = dict(zip(atoms_, bits))
        if all(any(m[abs(l)] == (l > 0) for l in c) for c in cnf):
            return m
    return None


# ---------------------------------------------------------------- semantics oracles


def brute_value(S, f, env):
    """Value of an atom in ``S``, variables read from ``env``."""
    def ev(t):
        if isinstance(t, Var):
            return env[t.name]
        if isinstance(t, Elem):
            return t.value
        if isinstance(t, Const):
            return S.consts[t.name]
        return S.funcs[t.symbol][tuple(ev(a) for a in t.args)]
    return S.preds[f.pred][tuple(ev(a) for a in f.args)]


def congruent_oracle(S, f, g):
    """Direct check of the congruence: same shape, binder positions matched up
    to renaming, and closed terms in corresponding positions equal in value."""
    return _cong(S, f, g, {}, {}, 0)


def _term_cong(S, s, t, e1, e2):
    def closed(u, env):
        if isinstance(u, Var):
            return u.name not in env
        if isinstance(u, Func):
            return all(closed(a, env) for a in u.args)
        return True

    def val(u):
        if isinstance(u, Elem):
            return u.value
        if isinstance(u, Const):
            return S.consts[u.name]
        if isinstance(u, Func):
            return S.funcs[u.symbol][tuple(val(a) for a in u.args)]
        raise ValueError(u)

    c1, c2 = closed(s, e1), closed(t, e2)
    if c1 and c2:
        if isinstance(s, Var) or isinstance(t, Var):
            return isinstance(s, Var) and isinstance(t, Var) and s.name == t.name
        return val(s) == val(t)
    if c1 != c2:
        return False
    if isinstance(s, Var) and isinstance(t, Var):
        return e1.get(s.name) == e2.get(t.name)
    if isinstance(s, Func) and isinstance(t, Func):
        return s.symbol == t.symbol and all(_term_cong(S, a, b, e1, e2) for a, b in zip(s.args, t.args))
    return False


def _cong(S, f, g, e1, e2, level):
    if isinstance(f, Atom) and isinstance(g, Atom):
        return f.pred == g.pred and all(_term_cong(S, a, b, e1, e2) for a, b in zip(f.args, g.args))
    if isinstance(f, QuantApp) and isinstance(g, QuantApp):
        if f.quant != g.quant or len(f.binders) != len(g.binders) or len(f.scope) != len(g.scope):
            return False
        n1 = {**e1, **{x: (level, j) for j, x in enumerate(f.binders)}}
        n2 = {**e2, **{x: (level, j) for j, x in enumerate(g.binders)}}
        return all(_cong(S, a, b, n1, n2, level + 1) for a, b in zip(f.scope, g.scope))
    return False


def legality_violations(S, M, v):
    """Independent re-check of a valuation: atoms agree with the structure,
    and every quantified sentence's value is allowed by the table at the
    distribution computed from scratch over D^k."""
    bad = []
    for g, b in v.items():
        if isinstance(g, Atom):
            if brute_value(S, g, {}) != b:
                bad.append(g)
            continue
        E = set()
        for elems in itertools.product(range(S.size), repeat=len(g.binders)):
            m = {x: Elem(a) for x, a in zip(g.binders, elems)}
            row = []
            for s in g.scope:
                inst = substitute_many(s, m)
                # find the stored sentence congruent to this instance
                hit = [h for h in v if congruent_oracle(S, h, inst)]
                if not hit:
                    bad.append((g, "missing instance"))
                    break
                row.append(v[hit[0]])
            E.add(tuple(row))
        if len(E) and b not in M.tables[g.quant][frozenset(E)]:
            bad.append(g)
    return bad


def load_text(text):
    return parse_calculus(text)


# ---------------------------------------------------------------- seeded generators


def random_term(rng, depth, variables=VARS):
    r = rng.random()
    if depth == 0 or r < 0.6:
        return Var(rng.choice(variables)) if rng.random() < 0.6 else Const(rng.choice(("c", "d")))
    if r < 0.8:
        return Func("f", (random_term(rng, depth - 1, variables),))
    return Func("g", (random_term(rng, depth - 1, variables), random_term(rng, depth - 1, variables)))


def random_formula(rng, depth=3, variables=VARS):
    if depth == 0 or rng.random() < 0.3:
        kind = rng.randrange(4)
        if kind == 0:
            return Atom("s")
        if kind == 3:
            return Atom("r", (random_term(rng, 1, variables), random_term(rng, 1, variables)))
        return Atom("pq"[kind - 1], (random_term(rng, 1, variables),))
    kind = rng.randrange(4)
    sub = lambda: random_formula(rng, depth - 1, variables)
    if kind == 0:
        return QuantApp("Forall", (rng.choice(variables),), (sub(),))
    if kind == 1:
        return QuantApp("And", (), (sub(), sub()))
    if kind == 2:
        return QuantApp("Qb", (rng.choice(variables),), (sub(), sub()))
    return QuantApp("Q2", tuple(rng.sample(variables, 2)), (sub(),))


def random_sequent(rng, depth=2):
    return Sequent.of([random_formula(rng, depth) for _ in range(rng.randrange(3))],
                      [random_formula(rng, depth) for _ in range(rng.randrange(3))])
