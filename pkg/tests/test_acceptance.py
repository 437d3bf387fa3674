"""Acceptance criteria, one test per criterion.

Each test prints a single ``CRITERION <n> PASS|FAIL`` line (visible even
under output capture).  Run alone with ``pytest tests/test_acceptance.py -v``
or as a script: ``python3 tests/test_acceptance.py``.
"""

import itertools
import os
import random
import sys
import time

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from canq.calculus import check_simple, dual_pairs, rnm  # noqa: E402
from canq.coherence import (all_distributions, canonical_witness,  # noqa: E402
                            clause_set_consistent_grounding, is_coherent)
from canq.corpus import ambient_pool, load, random_calculi, target_pool  # noqa: E402
from canq.frontend import parse_calculus, parse_formula, parse_sequent, render  # noqa: E402
from canq.nmatrix import ConflictWitness, build_mg, lookup  # noqa: E402
from canq.proof import check_proof, search_proof  # noqa: E402
from canq.semantics import (LStructure, canon, enumerate_legal_valuations,  # noqa: E402
                            enumerate_structures, relevant_closure,
                            sequent_valid_in)
from canq.syntax import (Elem, Sequent, alpha_eq, free_vars,  # noqa: E402
                         free_variable_condition, is_alpha_axiom, quant_depth,
                         substitute_many)

from helpers import (SIG, alpha_oracle, congruent_oracle, legality_violations,  # noqa: E402
                     random_formula, random_sequent, rename_bound)

COHERENT_K01 = ("forall_exists", "gprime", "gpp", "g1", "g1mod")
RESULTS = {}


def report(n, ok, detail, capsys=None):
    line = f"CRITERION {n} {'PASS' if ok else 'FAIL'}: {detail}"
    RESULTS[n] = line
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    else:
        print(line)
    return ok


# ---------------------------------------------------------------- 1


def criterion_1():
    expected = {"forall_exists": True, "gprime": True, "gpp": True, "g0": False,
                "g1": True, "g1mod": True, "sec5_12ary": True}
    bad, slowest = [], 0.0
    for name, want in expected.items():
        calc = load(name)
        t = time.perf_counter()
        got = is_coherent(calc).coherent
        dt = time.perf_counter() - t
        slowest = max(slowest, dt)
        if got != want or dt >= 1.0:
            bad.append(f"{name}: got {got} in {dt:.3f}s")
    return not bad, (f"7/7 verdicts match, slowest {slowest:.3f}s" if not bad else "; ".join(bad))


# ---------------------------------------------------------------- 2


def criterion_2():
    T, F = True, False
    t0 = time.perf_counter()
    errs = []
    M = build_mg(load("forall_exists"))
    golden = {("Forall", ((T,),)): {T}, ("Forall", ((F,),)): {F}, ("Forall", ((T,), (F,))): {F},
              ("Exists", ((F,),)): {F}, ("Exists", ((T,),)): {T}, ("Exists", ((T,), (F,))): {T}}
    for (q, E), vals in golden.items():
        if lookup(M, q, frozenset(E)) != frozenset(vals):
            errs.append(f"{q}{E}")
    M = build_mg(load("gprime"))
    counts = {"ForallBar": [0, 0], "ExistsBar": [0, 0]}
    for H in all_distributions(2):
        fb = frozenset({T}) if (T, F) not in H else frozenset({F})
        eb = frozenset({T}) if (T, T) in H else frozenset({T, F})
        if lookup(M, "ForallBar", H) != fb or lookup(M, "ExistsBar", H) != eb:
            errs.append(f"G' at {sorted(H)}")
        counts["ForallBar"][0 if fb == {T} else 1] += 1
        counts["ExistsBar"][0 if eb == {T} else 1] += 1
    if counts != {"ForallBar": [7, 8], "ExistsBar": [8, 7]}:
        errs.append(f"G' counts {counts}")
    M = build_mg(load("gpp"))
    listed = {(T, T, F), (T, F, T), (T, F, F), (F, T, F), (F, F, T), (F, F, F)}
    n_f = 0
    for H in all_distributions(3):
        want = frozenset({F}) if H <= listed else frozenset({T, F})
        got = lookup(M, "Q", H)
        n_f += got == frozenset({F})
        if got != want:
            errs.append(f"G'' at {sorted(H)}")
    if n_f != 63:
        errs.append(f"G'' has {n_f} entries {{f}}")
    dt = time.perf_counter() - t0
    ok = not errs and dt < 1.0
    return ok, f"6 + 30 + 255 entries exact, G'' {n_f} x {{f}}, {dt:.3f}s" if ok else f"{errs[:5]} ({dt:.3f}s)"


# ---------------------------------------------------------------- 3 and 8


def _random_set():
    return random_calculi(1000)


def criterion_3():
    t0 = time.perf_counter()
    pairs = 0
    disagreements = []
    calcs = [load(n) for n in ("forall_exists", "gprime", "gpp", "g0", "g1", "g1mod", "example1")]
    for calc in calcs + _random_set():
        for pair in dual_pairs(calc):
            if pair.k not in (0, 1):
                continue
            theta = rnm(pair.right.premises, pair.left.premises)
            sat = clause_set_consistent_grounding(theta) is not None
            canon_ = canonical_witness(theta, pair.n, pair.k) is not None
            pairs += 1
            if sat != canon_:
                disagreements.append(f"{calc.name}:{pair}")
    dt = time.perf_counter() - t0
    ok = not disagreements and dt < 60
    return ok, f"{pairs} dual pairs, {len(disagreements)} disagreements, {dt:.1f}s"


def criterion_8():
    mismatches = []
    n = 0
    names = ("forall_exists", "gprime", "gpp", "g0", "g1", "g1mod")
    for calc in [load(x) for x in names] + _random_set():
        coherent = is_coherent(calc, cross_check=False).coherent
        try:
            build_mg(calc)
            conflict = False
        except ConflictWitness:
            conflict = True
        n += 1
        if conflict == coherent:
            mismatches.append(calc.name)
    incoherent = sum(1 for c in _random_set() if not is_coherent(c, cross_check=False).coherent)
    return not mismatches, f"{n} calculi ({incoherent} random incoherent), {len(mismatches)} mismatches"


# ---------------------------------------------------------------- 4


def criterion_4():
    expected = {"example1": True, "forall_exists": True, "gprime": True, "g1": True,
                "g1mod": False, "g0": False}
    got = {n: check_simple(load(n)).simple for n in expected}
    ok = got == expected
    return ok, "example calculi, G1 simple; modified G1, G0 not simple" if ok else f"got {got}"


# ---------------------------------------------------------------- 5


def g0_pool(G):
    sig = G.signature
    atoms = [parse_formula(s, sig) for s in ("p(c)", "q(c)", "p(d)", "p(y)")]
    qs = [parse_formula(s, sig) for s in ("Q x (p(x), q(x))", "Q x (q(x), p(x))",
                                          "Q x (p(x), p(c))", "Q z (p(z), q(z))")]
    seen = {}
    for ats in itertools.combinations(atoms, 2):
        for qf in [None] + qs:
            F = list(ats) + ([qf] if qf else [])
            for pl in itertools.product(range(4), repeat=len(F)):
                left = [f for f, s in zip(F, pl) if s in (1, 3)]
                right = [f for f, s in zip(F, pl) if s in (2, 3)]
                seen.setdefault(Sequent.of(left, right), F)
    # alpha-variant pairs across the arrow
    for a in atoms[:2]:
        seen.setdefault(Sequent.of([qs[0], a], [qs[3]]), [qs[0], qs[3], a])
        seen.setdefault(Sequent.of([a], [qs[3], qs[1]]), [qs[3], qs[1], a])
    return seen


def criterion_5():
    G = load("g0")
    t0 = time.perf_counter()
    bad = []
    pool = g0_pool(G)
    provable = 0
    for seq, F in pool.items():
        proof = search_proof(G, [], seq, max_depth=4, cuts="all", cut_pool=F)
        if proof is not None:
            check_proof(G, [], proof)
            provable += 1
        if (proof is not None) != is_alpha_axiom(seq):
            bad.append(str(seq))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 120
    return ok, (f"{len(pool)} sequents, {provable} provable, all and only axioms, "
                f"{len(bad)} counterexamples, {dt:.1f}s")


# ---------------------------------------------------------------- 6 and 7

_DERIVED = {}


def derived_with_cuts(name):
    """Targets provable with cuts at depth <= 4, per ambient set, with their proofs."""
    if name not in _DERIVED:
        calc = load(name)
        out = []
        for amb in ambient_pool(calc):
            for target in target_pool(calc):
                assert free_variable_condition(amb + [target])
                proof = search_proof(calc, amb, target, max_depth=4, cuts="all")
                if proof is not None:
                    out.append((amb, target, proof))
        _DERIVED[name] = out
    return _DERIVED[name]


def criterion_6():
    t0 = time.perf_counter()
    failures, probes = [], 0
    for name in COHERENT_K01:
        calc = load(name)
        for amb, target, proof in derived_with_cuts(name):
            check_proof(calc, amb, proof)
            probes += 1
            simple = search_proof(calc, amb, target, max_depth=8, cuts="simple")
            if simple is None or not check_proof(calc, amb, simple).simple:
                failures.append(f"{name}: {target}")
            elif not amb and check_proof(calc, amb, simple).cut_formulas:
                failures.append(f"{name}: {target} (cut without assumptions)")
    dt = time.perf_counter() - t0
    ok = not failures and dt < 300
    return ok, f"{probes} provable targets over {len(COHERENT_K01)} calculi, {len(failures)} failures, {dt:.1f}s"


def criterion_7():
    t0 = time.perf_counter()
    violations, checks = [], 0
    for name in COHERENT_K01:
        calc = load(name)
        M = build_mg(calc)
        preds = {p: m for p, m in calc.signature.predicates.items()}
        by_amb = {}
        for amb, _, proof in derived_with_cuts(name):
            by_amb.setdefault(tuple(amb), set()).update(st.sequent for st in proof.steps)
        for size in (1, 2):
            for S in enumerate_structures(size, ["c", "d"], {}, preds):
                for amb, seqs in by_amb.items():
                    for seq in sorted(seqs, key=str):
                        closure = relevant_closure(S, list(amb) + [seq])
                        for v in enumerate_legal_valuations(S, M, closure):
                            if all(sequent_valid_in(S, v, a) for a in amb):
                                checks += 1
                                if not sequent_valid_in(S, v, seq):
                                    violations.append(f"{name}: {seq}")
    dt = time.perf_counter() - t0
    ok = not violations and dt < 300
    return ok, f"{checks} (structure, valuation, sequent) checks, {len(violations)} violations, {dt:.1f}s"


# ---------------------------------------------------------------- 9


def criterion_9():
    rng = random.Random(int(os.environ.get("CANQ_SEED", 0)))
    fails = []
    # alpha-equivalence laws
    for _ in range(500):
        f, g = random_formula(rng), random_formula(rng)
        f2 = rename_bound(f, (f"b{i}" for i in itertools.count()))
        f3 = rename_bound(f2, (f"e{i}" for i in itertools.count()))
        if not (alpha_eq(f, f) and alpha_eq(f, f2) and alpha_eq(f2, f) and alpha_eq(f2, f3) and alpha_eq(f, f3)):
            fails.append(("alpha laws", f))
        if alpha_eq(f, g) != alpha_eq(g, f) or alpha_eq(f, g) != alpha_oracle(f, g):
            fails.append(("alpha symmetry/oracle", f, g))
    # canon vs congruence oracle, |D| <= 3, quantifier depth <= 3
    cong_checks = 0
    for _ in range(400):
        size = rng.randint(1, 3)
        S = _random_structure(rng, size)
        f, g = (_close(random_formula(rng, 3), rng, size) for _ in range(2))
        if quant_depth(f) > 3 or quant_depth(g) > 3:
            continue
        cong_checks += 1
        if (canon(S, f) == canon(S, g)) != congruent_oracle(S, f, g):
            fails.append(("canon", f, g))
        h = rename_bound(f, (f"b{i}" for i in itertools.count()))
        if canon(S, f) != canon(S, h) or not congruent_oracle(S, f, h):
            fails.append(("canon alpha", f))
    # legal valuations pass the independent re-checker
    val_checks = 0
    for name, text in (("forall_exists", "Forall x (Exists y (p(y))) => Exists x (p(x))"),
                       ("gprime", "ForallBar x (p(x), q(x)) => ExistsBar x (q(x), p(x))"),
                       ("gpp", "Q x (p(x), q(x), r(x)) => p(c)")):
        calc = load(name)
        M = build_mg(calc)
        target = parse_sequent(text, calc.signature)
        preds = dict(calc.signature.predicates)
        for size in (1, 2):
            for S in enumerate_structures(size, ["c", "d"], {}, preds):
                for v in enumerate_legal_valuations(S, M, relevant_closure(S, [target])):
                    val_checks += 1
                    if legality_violations(S, M, v):
                        fails.append(("legality", name))
    # parser round trip
    trips = 0
    for _ in range(1000):
        f = random_formula(rng, 4)
        trips += 1
        if parse_formula(render(f), SIG) != f:
            fails.append(("round trip", f))
    for _ in range(300):
        s = random_sequent(rng)
        trips += 1
        if parse_sequent(render(s), SIG) != s:
            fails.append(("round trip", s))
    for calc in random_calculi(200, seed=rng.randrange(10 ** 6)):
        trips += 1
        if parse_calculus(render(calc)) != calc:
            fails.append(("round trip", calc.name))
    detail = (f"500 alpha cases, {cong_checks} congruence cases, {val_checks} valuations re-checked, "
              f"{trips} round trips, {len(fails)} failures")
    return not fails, detail


def _random_structure(rng, size):
    dom = range(size)
    return LStructure(
        size, {c: rng.randrange(size) for c in ("c", "d")},
        {"f": {(a,): rng.randrange(size) for a in dom},
         "g": {(a, b): rng.randrange(size) for a in dom for b in dom}},
        {"p": {(a,): rng.random() < 0.5 for a in dom}, "q": {(a,): rng.random() < 0.5 for a in dom},
         "r": {(a, b): rng.random() < 0.5 for a in dom for b in dom}, "s": {(): rng.random() < 0.5}})


def _close(f, rng, size):
    return substitute_many(f, {x: Elem(rng.randrange(size)) for x in free_vars(f)})


# ---------------------------------------------------------------- pytest entry points

CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
            6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9}


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n, capsys):
    ok, detail = CRITERIA[n]()
    report(n, ok, detail, capsys)
    assert ok, detail


if __name__ == "__main__":
    results = []
    for n in sorted(CRITERIA):
        ok, detail = CRITERIA[n]()
        results.append(report(n, ok, detail))
    sys.exit(0 if all(results) else 1)
