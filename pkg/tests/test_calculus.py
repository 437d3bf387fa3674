from canq.calculus import (Calculus, CanonicalRule, check_simple, dual_pairs, rnm,
                           rnm_mapping, validate)
from canq.corpus import load
from canq.frontend import parse_calculus
from canq.syntax import Clause, SAtom, Signature, Var


def cl(text, n=1, k=1):
    calc = parse_calculus(f"calculus T\nquant Q arity ({n},{k})\nrule r for Q right {{ {text} }}")
    return calc.rules[0].premises


def test_rnm_worked_example():
    theta1 = cl("p1(c) => ; => p1(c')")
    theta2 = cl("p1(c'') => ; => p1(c)")
    assert rnm_mapping(theta1, theta2) == {"c": "c'''"}
    out = rnm(theta1, theta2)
    assert [str(c) for c in out] == ["p1(c) =>", "=> p1(c')", "p1(c'') =>", "=> p1(c''')"]


def test_rnm_renames_variables_too():
    out = rnm(cl("p1(v1) =>"), cl("=> p1(v1)"))
    assert [str(c) for c in out] == ["p1(v1) =>", "=> p1(v1')"]


def test_rnm_dedupes():
    assert len(rnm(cl("=> p1(d)"), cl("=> p1(d)"))) == 2
    assert len(rnm(cl("=> p1", k=0), cl("=> p1", k=0))) == 1


def test_dual_pairs_product():
    calc = load("example1")
    pairs = dual_pairs(calc)
    names = [str(p) for p in pairs]
    assert "forall_r/forall_l" in names and "exists_r/exists_l" in names
    assert "fbar_r/fbar_l" in names and "ebar_r/ebar_l" in names
    # And and Q2 have only right rules
    assert not any(p.quant in ("And", "Q2") for p in pairs)


def test_simplicity_examples():
    assert check_simple(load("example1")).simple
    assert check_simple(load("forall_exists")).simple
    assert check_simple(load("gprime")).simple
    assert check_simple(load("g1")).simple
    r = check_simple(load("g1mod"))
    assert not r.simple and r.variable == "v1" and "p1(c)" in r.reason and "p1(d)" in r.reason
    r = check_simple(load("g0"))
    assert not r.simple and "p1(v1)" in r.reason


def test_validate_clean_and_broken():
    assert validate(load("g1")) == []
    sig = Signature({"Q": (1, 1)}, {}, {"Q": 1}, ())
    bad_rule = CanonicalRule("r", "Q", 1, 1, "t", (Clause.of([SAtom(2, (Var("v1"),))], []),))
    diags = validate(Calculus("Bad", sig, (bad_rule, bad_rule)))
    text = "\n".join(diags)
    assert "name clash" in text
    assert "duplicate rule name" in text
    assert "out of range" in text
