"""Parser and pretty-printer for calculus files, sequents and annotated proofs.

Calculus file::

    calculus ForallExists
    quant Forall arity (1,1)
    pred p arity 1
    const c
    rule forall_l for Forall left { p1(c) => }
    rule forall_r for Forall right { => p1(v1) }

Object formulas are written ``Forall x (p(x))``; connectives with k = 0 drop
the binders: ``And(p(c), q(c))``.  Proof files hold one step per line::

    1. p(c) => p(c) by axiom
    2. Forall x (p(x)) => p(c) by rule forall_l from 1 with { p1 -> p(x); c -> c; binds x }
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .calculus import CanonicalRule, Calculus
from .proof import (Assumption, Axiom, ChiMapping, Cut, Proof, RuleApp, Step,
                    Weakening)
from .syntax import (CLAUSE_CONST_RE, CLAUSE_VAR_RE, Atom, Clause, Const, Elem,
                     Formula, Func, QuantApp, SAtom, Sequent, Signature, Term,
                     Var, is_object_variable_name)


@dataclass(frozen=True)
class SourceSpan:
    file: str
    begin: int
    end: int
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


class ParseError(Exception):
    KINDS = ("lexical", "grammar", "arity", "scope", "duplicate-name")

    def __init__(self, kind: str, span: SourceSpan, message: str):
        assert kind in self.KINDS, kind
        super().__init__(f"{span}: {kind} error: {message}")
        self.kind = kind
        self.span = span
        self.message = message


# ---------------------------------------------------------------- lexer

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<arrow>=>|->)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*'*)
  | (?P<number>\d+)
  | (?P<elem>@\d+)
  | (?P<punct>[(),;{}.])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    begin: int
    end: int


def _tokenize(text: str, file: str) -> List[Token]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError("lexical", _span(text, file, pos, pos + 1),
                             f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            toks.append(Token(kind, m.group(), pos, m.end()))
        pos = m.end()
    return toks


def _span(text: str, file: str, begin: int, end: int) -> SourceSpan:
    begin = min(begin, len(text))
    end = max(begin, min(end, len(text)))
    line = text.count("\n", 0, begin) + 1
    col = begin - (text.rfind("\n", 0, begin) + 1) + 1
    return SourceSpan(file, begin, end, line, col)


class _Parser:
    def __init__(self, text: str, file: str = "<input>"):
        self.text = text
        self.file = file
        self.toks = _tokenize(text, file)
        self.i = 0

    # -- token helpers
    def peek(self, offset: int = 0) -> Optional[Token]:
        j = self.i + offset
        return self.toks[j] if j < len(self.toks) else None

    def at(self, text: str) -> bool:
        t = self.peek()
        return t is not None and t.text == text

    def span_of(self, tok: Optional[Token]) -> SourceSpan:
        if tok is None:
            n = len(self.text)
            return _span(self.text, self.file, max(n - 1, 0), n)
        return _span(self.text, self.file, tok.begin, tok.end)

    def error(self, kind: str, msg: str, tok: Optional[Token] = None) -> ParseError:
        if tok is None:
            tok = self.peek()
        return ParseError(kind, self.span_of(tok), msg)

    def next(self, what: str = "token") -> Token:
        t = self.peek()
        if t is None:
            raise self.error("grammar", f"unexpected end of input, expected {what}")
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.peek()
        if t is None or t.text != text:
            got = "end of input" if t is None else repr(t.text)
            raise self.error("grammar", f"expected {text!r}, got {got}")
        self.i += 1
        return t

    def ident(self, what: str = "identifier") -> Token:
        t = self.next(what)
        if t.kind != "ident":
            raise self.error("grammar", f"expected {what}, got {t.text!r}", t)
        return t

    def number(self) -> Tuple[int, Token]:
        t = self.next("number")
        if t.kind != "number":
            raise self.error("grammar", f"expected a number, got {t.text!r}", t)
        return int(t.text), t

    def done(self) -> bool:
        return self.i >= len(self.toks)

    # -- object language
    def term(self, sig: Signature) -> Term:
        t = self.next("term")
        if t.kind == "elem":
            return Elem(int(t.text[1:]))
        if t.kind != "ident":
            raise self.error("grammar", f"expected a term, got {t.text!r}", t)
        name = t.text
        if self.at("("):
            if name not in sig.functions:
                raise self.error("scope", f"unknown function symbol {name}", t)
            self.expect("(")
            args = self._list(lambda: self.term(sig), ")")
            if len(args) != sig.functions[name]:
                raise self.error("arity", f"{name} takes {sig.functions[name]} arguments, got {len(args)}", t)
            return Func(name, tuple(args))
        if name in sig.constants:
            return Const(name)
        if name in sig.functions:
            if sig.functions[name] != 0:
                raise self.error("arity", f"{name} takes {sig.functions[name]} arguments", t)
            return Func(name, ())
        if is_object_variable_name(name):
            return Var(name)
        raise self.error("scope", f"unknown symbol {name}", t)

    def _list(self, item, close: str) -> list:
        out = []
        if self.at(close):
            self.next()
            return out
        while True:
            out.append(item())
            t = self.next(f"',' or {close!r}")
            if t.text == close:
                return out
            if t.text != ",":
                raise self.error("grammar", f"expected ',' or {close!r}, got {t.text!r}", t)

    def formula(self, sig: Signature) -> Formula:
        t = self.ident("formula")
        name = t.text
        if name in sig.quantifiers:
            n, k = sig.quantifiers[name]
            binders = []
            for _ in range(k):
                b = self.ident("bound variable")
                if not is_object_variable_name(b.text):
                    raise self.error("lexical", f"{b.text} is not a variable name", b)
                if b.text in binders:
                    raise self.error("grammar", f"bound variables of {name} must be distinct", b)
                binders.append(b.text)
            self.expect("(")
            scope = self._list(lambda: self.formula(sig), ")")
            if len(scope) != n:
                raise self.error("arity", f"{name} connects {n} formulas, got {len(scope)}", t)
            return QuantApp(name, tuple(binders), tuple(scope))
        if name in sig.predicates:
            m = sig.predicates[name]
            args: list = []
            if self.at("("):
                self.expect("(")
                args = self._list(lambda: self.term(sig), ")")
            if len(args) != m:
                raise self.error("arity", f"{name} takes {m} arguments, got {len(args)}", t)
            return Atom(name, tuple(args))
        raise self.error("scope", f"unknown predicate or quantifier {name}", t)

    def formulas_until(self, sig: Signature, stops: Tuple[str, ...]) -> List[Formula]:
        out: List[Formula] = []
        if self.done() or self.peek().text in stops:
            return out
        while True:
            out.append(self.formula(sig))
            if self.at(","):
                self.next()
                continue
            return out

    def sequent(self, sig: Signature, stop: Optional[str] = None) -> Sequent:
        left = self.formulas_until(sig, ("=>",))
        self.expect("=>")
        stops = (stop,) if stop else ()
        right = self.formulas_until(sig, stops)
        if not self.done() and not (stop and self.at(stop)):
            raise self.error("grammar", f"unexpected {self.peek().text!r} in sequent")
        return Sequent.of(left, right)

    # -- clause language
    def satom(self, n: int, k: int) -> SAtom:
        t = self.ident("clause atom p<i>")
        m = re.fullmatch(r"p(\d+)", t.text)
        if not m:
            raise self.error("grammar", f"clause atoms are written p<i>, got {t.text!r}", t)
        i = int(m.group(1))
        if not 1 <= i <= n:
            raise self.error("scope", f"p{i} out of range p1..p{n}", t)
        args: list = []
        if self.at("("):
            self.expect("(")
            args = self._list(self.simple_term, ")")
        if len(args) != k:
            raise self.error("arity", f"p{i} takes {k} arguments, got {len(args)}", t)
        return SAtom(i, tuple(args))

    def simple_term(self):
        t = self.ident("variable or constant")
        if CLAUSE_VAR_RE.match(t.text):
            return Var(t.text)
        if CLAUSE_CONST_RE.match(t.text):
            return Const(t.text)
        raise self.error("lexical", f"{t.text!r} is neither a clause variable (v,x,y,z) nor a constant (c,d,e)", t)

    def clause(self, n: int, k: int) -> Clause:
        def atoms(stops):
            out = []
            if self.peek() is None or self.peek().text in stops:
                return out
            while True:
                out.append(self.satom(n, k))
                if self.at(","):
                    self.next()
                    continue
                return out

        left = atoms(("=>",))
        self.expect("=>")
        right = atoms((";", "}"))
        return Clause.of(left, right)


# ---------------------------------------------------------------- entry points


_KEYWORDS = {"calculus", "quant", "func", "pred", "const", "rule"}


def parse_calculus(text: str, file: str = "<input>") -> Calculus:
    p = _Parser(text, file)
    if p.done():
        raise p.error("grammar", "empty calculus file, expected 'calculus <Name>'")
    p.expect("calculus")
    name = p.ident("calculus name").text
    quants: Dict[str, Tuple[int, int]] = {}
    funcs: Dict[str, int] = {}
    preds: Dict[str, int] = {}
    consts: List[str] = []
    rules: List[CanonicalRule] = []
    declared: Dict[str, str] = {}

    def declare(tok: Token, kind: str):
        if tok.text in _KEYWORDS:
            raise p.error("grammar", f"{tok.text} is a reserved word", tok)
        if tok.text in declared:
            raise p.error("duplicate-name", f"{tok.text} already declared as {declared[tok.text]}", tok)
        declared[tok.text] = kind

    while not p.done():
        kw = p.ident("declaration")
        if kw.text == "quant":
            q = p.ident("quantifier name")
            declare(q, "quantifier")
            p.expect("arity")
            p.expect("(")
            n, nt = p.number()
            p.expect(",")
            k, _ = p.number()
            p.expect(")")
            if n < 1:
                raise p.error("arity", "a quantifier connects at least one formula", nt)
            quants[q.text] = (n, k)
        elif kw.text in ("func", "pred"):
            s = p.ident("symbol name")
            declare(s, "function" if kw.text == "func" else "predicate")
            p.expect("arity")
            m, _ = p.number()
            (funcs if kw.text == "func" else preds)[s.text] = m
        elif kw.text == "const":
            while True:
                c = p.ident("constant name")
                if is_object_variable_name(c.text):
                    raise p.error("lexical", f"{c.text} is in the variable name class", c)
                declare(c, "constant")
                consts.append(c.text)
                if not p.at(","):
                    break
                p.next()
        elif kw.text == "rule":
            rn = p.ident("rule name")
            if any(r.name == rn.text for r in rules):
                raise p.error("duplicate-name", f"rule {rn.text} already defined", rn)
            p.expect("for")
            qt = p.ident("quantifier name")
            if qt.text not in quants:
                raise p.error("scope", f"undeclared quantifier {qt.text}", qt)
            side_tok = p.ident("'left' or 'right'")
            if side_tok.text not in ("left", "right"):
                raise p.error("grammar", f"expected 'left' or 'right', got {side_tok.text!r}", side_tok)
            n, k = quants[qt.text]
            p.expect("{")
            clauses: List[Clause] = []
            if p.at("}"):
                p.next()
            else:
                while True:
                    clauses.append(p.clause(n, k))
                    t = p.next("';' or '}'")
                    if t.text == "}":
                        break
                    if t.text != ";":
                        raise p.error("grammar", f"expected ';' or '}}', got {t.text!r}", t)
            rules.append(CanonicalRule(rn.text, qt.text, n, k,
                                       "t" if side_tok.text == "right" else "f", tuple(clauses)))
        else:
            raise p.error("grammar", f"unknown declaration {kw.text!r}", kw)
    sig = Signature(quants, funcs, preds, tuple(consts))
    return Calculus(name, sig, tuple(rules))


def parse_formula(text: str, signature: Signature, file: str = "<input>") -> Formula:
    p = _Parser(text, file)
    f = p.formula(signature)
    if not p.done():
        raise p.error("grammar", f"trailing input {p.peek().text!r}")
    return f


def parse_term(text: str, signature: Signature, file: str = "<input>") -> Term:
    p = _Parser(text, file)
    t = p.term(signature)
    if not p.done():
        raise p.error("grammar", f"trailing input {p.peek().text!r}")
    return t


def parse_sequent(text: str, signature: Signature, file: str = "<input>") -> Sequent:
    p = _Parser(text, file)
    if p.done():
        raise p.error("grammar", "empty sequent, expected '=>'")
    return p.sequent(signature)


def parse_sequents(text: str, signature: Signature, file: str = "<input>") -> List[Sequent]:
    """One sequent per non-blank, non-comment line."""
    out = []
    offset = 0
    for line in text.splitlines(keepends=True):
        body = line.split("#", 1)[0]
        if body.strip():
            try:
                out.append(parse_sequent(body, signature, file))
            except ParseError as e:
                s = e.span
                raise ParseError(e.kind, _span(text, file, offset + s.begin, offset + s.end), e.message) from None
        offset += len(line)
    return out


def parse_proof(text: str, calculus: Calculus, file: str = "<input>") -> Proof:
    sig = calculus.signature
    p = _Parser(text, file)
    if p.done():
        raise p.error("grammar", "empty proof")
    steps: List[Step] = []
    numbers = set()

    def ref() -> int:
        m, tok = p.number()
        if m not in numbers:
            raise p.error("scope", f"dangling reference to step {m}", tok)
        return m

    while not p.done():
        num, ntok = p.number()
        if num in numbers:
            raise p.error("duplicate-name", f"step {num} defined twice", ntok)
        p.expect(".")
        seq = p.sequent(sig, stop="by")
        p.expect("by")
        kw = p.ident("justification")
        if kw.text == "axiom":
            just = Axiom()
        elif kw.text == "assumption":
            just = Assumption()
        elif kw.text == "weakening":
            just = Weakening(ref())
        elif kw.text == "cut":
            a = ref()
            b = ref()
            f = None
            if p.at("on"):
                p.next()
                f = p.formula(sig)
            just = Cut(a, b, f)
        elif kw.text == "rule":
            rt = p.ident("rule name")
            try:
                rule = calculus.rule(rt.text)
            except KeyError:
                raise p.error("scope", f"unknown rule {rt.text}", rt) from None
            prem: List[int] = []
            if p.at("from"):
                p.next()
                prem.append(ref())
                while p.at(","):
                    p.next()
                    prem.append(ref())
            p.expect("with")
            just = RuleApp(rule.name, tuple(prem), _chi(p, sig, rule))
        else:
            raise p.error("grammar", f"unknown justification {kw.text!r}", kw)
        numbers.add(num)
        steps.append(Step(num, seq, just))
    return Proof(tuple(steps))


def _chi(p: _Parser, sig: Signature, rule: CanonicalRule) -> ChiMapping:
    p.expect("{")
    formulas: Dict[int, Formula] = {}
    terms: Dict[str, Term] = {}
    binds: Tuple[str, ...] = ()
    if p.at("}"):
        p.next()
        return ChiMapping(formulas, terms, binds)
    while True:
        key = p.ident("mapping key")
        if key.text == "binds":
            bs = []
            while p.peek() is not None and p.peek().kind == "ident":
                b = p.next()
                if not is_object_variable_name(b.text):
                    raise p.error("lexical", f"{b.text} is not a variable name", b)
                bs.append(b.text)
            binds = tuple(bs)
        else:
            p.expect("->")
            m = re.fullmatch(r"p(\d+)", key.text)
            if m:
                i = int(m.group(1))
                if not 1 <= i <= rule.n:
                    raise p.error("scope", f"p{i} out of range for rule {rule.name}", key)
                formulas[i] = p.formula(sig)
            elif key.text in rule.variables:
                v = p.ident("variable")
                if not is_object_variable_name(v.text):
                    raise p.error("lexical", f"{v.text} is not a variable name", v)
                terms[key.text] = Var(v.text)
            elif key.text in rule.constants:
                terms[key.text] = p.term(sig)
            else:
                raise p.error("scope", f"{key.text} does not occur in rule {rule.name}", key)
        t = p.next("';' or '}'")
        if t.text == "}":
            return ChiMapping(formulas, terms, binds)
        if t.text != ";":
            raise p.error("grammar", f"expected ';' or '}}', got {t.text!r}", t)


# ---------------------------------------------------------------- rendering


def render_clause(c: Clause) -> str:
    lhs = ", ".join(str(a) for a in sorted(c.left))
    rhs = ", ".join(str(a) for a in sorted(c.right))
    return " ".join(x for x in (lhs, "=>", rhs) if x)


def render_rule(r: CanonicalRule) -> str:
    side = "right" if r.side == "t" else "left"
    body = " ; ".join(render_clause(c) for c in r.premises)
    return f"rule {r.name} for {r.quant} {side} {{ {body} }}" if body else f"rule {r.name} for {r.quant} {side} {{ }}"


def render_calculus(calc: Calculus) -> str:
    sig = calc.signature
    lines = [f"calculus {calc.name}"]
    lines += [f"quant {q} arity ({n},{k})" for q, (n, k) in sig.quantifiers.items()]
    lines += [f"func {f} arity {m}" for f, m in sig.functions.items()]
    lines += [f"pred {p} arity {m}" for p, m in sig.predicates.items()]
    lines += [f"const {c}" for c in sig.constants]
    lines += [render_rule(r) for r in calc.rules]
    return "\n".join(lines) + "\n"


def render_chi(chi: ChiMapping) -> str:
    parts = [f"p{i} -> {chi.formulas[i]}" for i in sorted(chi.formulas)]
    parts += [f"{k} -> {chi.terms[k]}" for k in sorted(chi.terms)]
    if chi.binds:
        parts.append("binds " + " ".join(chi.binds))
    return "{ " + "; ".join(parts) + " }" if parts else "{ }"


def render_justification(j) -> str:
    if isinstance(j, Axiom):
        return "axiom"
    if isinstance(j, Assumption):
        return "assumption"
    if isinstance(j, Weakening):
        return f"weakening {j.premise}"
    if isinstance(j, Cut):
        base = f"cut {j.left} {j.right}"
        return f"{base} on {j.formula}" if j.formula is not None else base
    if isinstance(j, RuleApp):
        prem = f" from {', '.join(map(str, j.premises))}" if j.premises else ""
        return f"rule {j.rule}{prem} with {render_chi(j.chi)}"
    raise TypeError(j)


def render_proof(proof: Proof) -> str:
    return "".join(f"{s.number}. {s.sequent} by {render_justification(s.justification)}\n"
                   for s in proof.steps)


def render(obj) -> str:
    """Concrete syntax for any AST object; parsing the output gives ``obj`` back."""
    if isinstance(obj, Calculus):
        return render_calculus(obj)
    if isinstance(obj, CanonicalRule):
        return render_rule(obj)
    if isinstance(obj, Clause):
        return render_clause(obj)
    if isinstance(obj, Proof):
        return render_proof(obj)
    if isinstance(obj, ChiMapping):
        return render_chi(obj)
    if isinstance(obj, (Sequent, Atom, QuantApp, Var, Const, Elem, Func, SAtom)):
        return str(obj)
    raise TypeError(f"cannot render {type(obj).__name__}")
