"""Bundled calculi and seeded random calculi for property tests."""

from __future__ import annotations

import itertools
import os
import random
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional

from .calculus import CanonicalRule, Calculus
from .frontend import parse_calculus
from .syntax import (Atom, Clause, Const, Formula, QuantApp, SAtom, Sequent,
                     Signature, Var)

BUNDLED = ("forall_exists", "gprime", "gpp", "g0", "g1", "g1mod", "sec5_12ary")
EXTRA = ("example1",)


def bundled_path(name: str) -> Path:
    stem = name[:-4] if name.endswith(".cal") else name
    return Path(str(resources.files("canq") / "calculi" / f"{stem}.cal"))


def bundled_names() -> List[str]:
    return list(BUNDLED + EXTRA)


def load(name: str) -> Calculus:
    """Load a bundled calculus by stem (``g0``) or file name (``g0.cal``)."""
    p = bundled_path(name)
    return parse_calculus(p.read_text(), str(p.name))


def load_all(names=BUNDLED) -> Dict[str, Calculus]:
    return {n: load(n) for n in names}


def seed_from_env(default: int = 0) -> int:
    return int(os.environ.get("CANQ_SEED", default))


def random_clause(rng: random.Random, n: int, k: int, consts: List[str], variables: List[str],
                  max_atoms: int = 3) -> Clause:
    terms = consts + variables

    def atom():
        args = tuple(Var(t) if t in variables else Const(t) for t in rng.choices(terms, k=k)) if k else ()
        return SAtom(rng.randint(1, n), args)

    size = rng.randint(1, max_atoms)
    left, right = [], []
    for _ in range(size):
        (left if rng.random() < 0.5 else right).append(atom())
    return Clause.of(left, right)


def random_calculus(rng: random.Random, name: str = "Random", max_n: int = 3, max_k: int = 1,
                    max_symbols: int = 3, max_clauses: int = 4) -> Calculus:
    """One quantifier with one right and one left rule.

    Each rule draws at most ``max_symbols`` constants and variables and at most
    ``max_clauses`` clauses.
    """
    n = rng.randint(1, max_n)
    k = rng.randint(0, max_k)
    rules = []
    for side in ("t", "f"):
        if k:
            nc = rng.randint(0, max_symbols)
            nv = rng.randint(0 if nc else 1, max_symbols - nc) if max_symbols - nc > 0 else 0
        else:
            nc = nv = 0
        consts = [f"c{i}" for i in range(1, nc + 1)]
        variables = [f"v{i}" for i in range(1, nv + 1)]
        clauses = tuple(dict.fromkeys(random_clause(rng, n, k, consts, variables)
                                      for _ in range(rng.randint(0, max_clauses))))
        rules.append(CanonicalRule(f"r_{side}", "Q", n, k, side, clauses))
    sig = Signature({"Q": (n, k)}, {}, {}, ())
    return Calculus(name, sig, tuple(rules))


def random_calculi(count: int = 1000, seed: Optional[int] = None) -> List[Calculus]:
    rng = random.Random(seed_from_env() if seed is None else seed)
    return [random_calculus(rng, f"Random{i}") for i in range(count)]


# ---------------------------------------------------------------- probe pools


def _unary_preds(calc: Calculus) -> List[str]:
    return [p for p, m in calc.signature.predicates.items() if m == 1][:2]


def quantified_pool(calc: Calculus, const: str = "c") -> List[Formula]:
    """One formula per quantifier and choice of scopes from ``p(x), q(x)``; k=0 connectives use ``p(c), q(c)``."""
    preds = _unary_preds(calc)
    out = []
    for q, (n, k) in calc.signature.quantifiers.items():
        if k > 1:
            continue
        x = "x"
        scopes = ([Atom(p, (Var(x),)) for p in preds] if k == 1
                  else [Atom(p, (Const(const),)) for p in preds])
        for combo in itertools.product(scopes, repeat=n):
            out.append(QuantApp(q, (x,) if k == 1 else (), tuple(combo)))
    return out


def target_pool(calc: Calculus, const: str = "c") -> List[Sequent]:
    """Probe targets: one quantified formula on either side plus atoms over ``const``,
    and every pair ``A => B`` of quantified formulas."""
    atoms = [Atom(p, (Const(const),)) for p in _unary_preds(calc)]
    qs = quantified_pool(calc, const)
    out = []
    for A in qs:
        for placement in itertools.product((0, 1, 2), repeat=len(atoms)):
            left = [a for a, s in zip(atoms, placement) if s == 1]
            right = [a for a, s in zip(atoms, placement) if s == 2]
            out.append(Sequent.of(left + [A], right))
            out.append(Sequent.of(left, right + [A]))
    for A in qs:
        for B in qs:
            if A != B:
                out.append(Sequent.of([A], [B]))
    return list(dict.fromkeys(out))


def ambient_pool(calc: Calculus, const: str = "c") -> List[List[Sequent]]:
    """Small assumption sets for strong cut-elimination probes.

    Their free variable ``y`` is never bound in the probe targets, so the
    free-variable condition holds.
    """
    p, q = (_unary_preds(calc) + ["p", "q"])[:2]
    y = Var("y")
    return [
        [],
        [Sequent.of([], [Atom(p, (y,))])],
        [Sequent.of([Atom(p, (y,))], [Atom(q, (y,))])],
        [Sequent.of([Atom(q, (Const(const),))], [])],
    ]
