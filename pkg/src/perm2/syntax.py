"""Surface syntax: tokenizer, parsers and printers for types, terms, proofs
and signature files."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError, UnboundVariable
from .kernel import (
    App,
    ConstApp,
    Context,
    Exponential,
    Hole,
    Lambda,
    Pair,
    Product,
    Proj1,
    Proj2,
    Sequent,
    Sort,
    UNIT,
    UNIT_TERM,
    UnitIntro,
    Var,
    fresh_name,
    show_type,
)
from .proofterm import (
    UNIT_REFL,
    AppCong,
    ConstCong,
    LambdaCong,
    PairCong,
    Proj1Cong,
    Proj2Cong,
    RuleApp,
    UnitRefl,
    VarRefl,
    VComp,
    typecheck_reduction,
)
from .signature import RewriteRule, build_signature

KEYWORDS = {"fst", "snd"}
_SYMBOLS = ["=>", "->", "→", "(", ")", ",", ":", ".", "\\", "*", "×", "^", ";", "<", ">", "⟨", "⟩", "[", "]"]
_ALIASES = {"→": "->", "×": "*", "⟨": "<", "⟩": ">", "λ": "\\"}


@dataclass(frozen=True)
class Tok:
    kind: str  # "id", "sym", "num", "eof"
    text: str
    pos: int


def tokenize(src: str) -> list:
    out, i, n = [], 0, len(src)
    while i < n:
        c = src[i]
        if c.isspace():
            i += 1
            continue
        if c == "λ":
            out.append(Tok("sym", "\\", i))
            i += 1
            continue
        if c.isalpha() or c == "_":
            j = i + 1
            while j < n and (src[j].isalnum() or src[j] in "_'") and src[j] != "λ":
                j += 1
            out.append(Tok("id", src[i:j], i))
            i = j
            continue
        if c.isdigit():
            j = i + 1
            while j < n and src[j].isdigit():
                j += 1
            out.append(Tok("num", src[i:j], i))
            i = j
            continue
        for s in _SYMBOLS:
            if src.startswith(s, i):
                out.append(Tok("sym", _ALIASES.get(s, s), i))
                i += len(s)
                break
        else:
            raise ParseError(f"unexpected character {c!r} at offset {i}")
    out.append(Tok("eof", "", n))
    return out


class Parser:
    def __init__(self, src: str, ops=(), rules=(), sig=None):
        self.src = src
        self.toks = tokenize(src)
        self.i = 0
        self.ops = set(ops)
        self.rules = set(rules)
        self.sig = sig

    # -- token helpers
    def peek(self, k: int = 0) -> Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text: str, k: int = 0) -> bool:
        t = self.peek(k)
        return t.kind == "sym" and t.text == text

    def next(self) -> Tok:
        t = self.toks[self.i]
        self.i = min(self.i + 1, len(self.toks) - 1)
        return t

    def expect(self, text: str) -> Tok:
        t = self.next()
        if t.kind != "sym" or t.text != text:
            raise ParseError(f"expected {text!r} at offset {t.pos}, found {t.text or 'end of input'!r}")
        return t

    def ident(self) -> str:
        t = self.next()
        if t.kind != "id":
            raise ParseError(f"expected a name at offset {t.pos}, found {t.text or 'end of input'!r}")
        return t.text

    def done(self):
        t = self.peek()
        if t.kind != "eof":
            raise ParseError(f"unexpected {t.text!r} at offset {t.pos}")

    # -- types
    def type(self):
        left = self.exp_type()
        if self.at("*"):
            self.next()
            return Product(left, self.type())
        return left

    def exp_type(self):
        base = self.atom_type()
        if self.at("^"):
            self.next()
            # B ^ A ^ C reads as B ^ (A ^ C)
            return Exponential(self.exp_type(), base)
        return base

    def atom_type(self):
        t = self.next()
        if t.kind == "num" and t.text == "1":
            return UNIT
        if t.kind == "id":
            return Sort(t.text)
        if t.kind == "sym" and t.text == "(":
            a = self.type()
            self.expect(")")
            return a
        raise ParseError(f"expected a type at offset {t.pos}")

    # -- terms
    def _starts_atom(self) -> bool:
        t = self.peek()
        if t.kind == "id":
            return True
        return t.kind == "sym" and t.text == "("

    def _lookup(self, scope, name):
        for i, n in enumerate(reversed(scope)):
            if n == name:
                return i
        raise UnboundVariable(name)

    def term(self, scope):
        if self.at("\\"):
            self.next()
            x = self.ident()
            self.expect(":")
            a = self.type()
            self.expect(".")
            return Lambda(a, self.term(scope + [x]), x)
        t = self.unary(scope)
        while self._starts_atom():
            t = App(t, self.unary(scope))
        return t

    def unary(self, scope):
        t = self.peek()
        if t.kind == "id" and t.text in KEYWORDS:
            self.next()
            arg = self.unary(scope)
            return Proj1(arg) if t.text == "fst" else Proj2(arg)
        return self.atom(scope)

    def atom(self, scope):
        t = self.next()
        if t.kind == "sym" and t.text == "(":
            if self.at(")"):
                self.next()
                return UNIT_TERM
            a = self.term(scope)
            if self.at(","):
                self.next()
                b = self.term(scope)
                self.expect(")")
                return Pair(a, b)
            self.expect(")")
            return a
        if t.kind == "id":
            if t.text in self.ops and self.at("("):
                self.next()
                args = []
                if not self.at(")"):
                    args.append(self.term(scope))
                    while self.at(","):
                        self.next()
                        args.append(self.term(scope))
                self.expect(")")
                return ConstApp(t.text, tuple(args))
            return Var(self._lookup(scope, t.text))
        raise ParseError(f"unexpected {t.text or 'end of input'!r} at offset {t.pos}")

    # -- proofs
    def proof(self, scope, types):
        p = self.plam(scope, types)
        while self.at(";"):
            self.next()
            q = self.plam(scope, types)
            p = self._vcomp(p, q, types)
        return p

    def _vcomp(self, p, q, types):
        if self.sig is None:
            raise ParseError("a signature is needed to infer middle terms")
        _, mid, _ = typecheck_reduction(types, p, self.sig)
        return VComp(p, mid, q)

    def plam(self, scope, types):
        if self.at("\\"):
            self.next()
            x = self.ident()
            self.expect(":")
            a = self.type()
            self.expect(".")
            return LambdaCong(a, self.proof(scope + [x], types + (a,)), x)
        p = self.punary(scope, types)
        while self._starts_atom():
            p = AppCong(p, self.punary(scope, types))
        return p

    def punary(self, scope, types):
        t = self.peek()
        if t.kind == "id" and t.text in KEYWORDS:
            self.next()
            arg = self.punary(scope, types)
            return Proj1Cong(arg) if t.text == "fst" else Proj2Cong(arg)
        return self.patom(scope, types)

    def _plist(self, close, scope, types):
        args = []
        if not self.at(close):
            args.append(self.proof(scope, types))
            while self.at(","):
                self.next()
                args.append(self.proof(scope, types))
        self.expect(close)
        return tuple(args)

    def patom(self, scope, types):
        t = self.next()
        if t.kind == "sym" and t.text == "(":
            if self.at(")"):
                self.next()
                return UNIT_REFL
            a = self.proof(scope, types)
            if self.at(","):
                self.next()
                b = self.proof(scope, types)
                self.expect(")")
                return PairCong(a, b)
            self.expect(")")
            return a
        if t.kind == "id":
            if self.at("<") and (t.text in self.rules or not self.rules):
                self.next()
                return RuleApp(t.text, self._plist(">", scope, types))
            if t.text in self.ops and self.at("("):
                self.next()
                return ConstCong(t.text, self._plist(")", scope, types))
            return VarRefl(self._lookup(scope, t.text))
        raise ParseError(f"unexpected {t.text or 'end of input'!r} at offset {t.pos}")


# ---------------------------------------------------------------- entry points

def _op_names(sig):
    if sig is None:
        return set()
    return {k for k in sig.ops if isinstance(k, str)}


def parse_type(src: str):
    p = Parser(src)
    a = p.type()
    p.done()
    return a


def parse_context(src: str) -> Context:
    p = Parser(src)
    entries = []
    if p.peek().kind != "eof":
        while True:
            x = p.ident()
            p.expect(":")
            entries.append((x, p.type()))
            if not p.at(","):
                break
            p.next()
    p.done()
    return Context(tuple(entries))


def parse_term(src: str, ctx: Context = Context(), sig=None):
    p = Parser(src, ops=_op_names(sig))
    t = p.term(list(ctx.names))
    p.done()
    return t


def parse_proof(src: str, ctx: Context, sig):
    p = Parser(src, ops=_op_names(sig), rules=set(sig.rules), sig=sig)
    r = p.proof(list(ctx.names), ctx.types)
    p.done()
    return r


def _strip_comment(line: str) -> str:
    k = line.find("#")
    return line if k < 0 else line[:k]


def parse_signature(text: str):
    """Parse a signature file; ops are collected first so rules may precede them."""
    sorts, ops, rule_lines = [], {}, []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if head == "sort":
                p = Parser(rest)
                name = p.ident()
                p.done()
                if name in sorts:
                    raise ParseError(f"duplicate sort {name}")
                sorts.append(name)
            elif head == "op":
                p = Parser(rest)
                name = p.ident()
                p.expect(":")
                p.expect("(")
                prem = []
                if not p.at(")"):
                    prem.append(p.type())
                    while p.at(","):
                        p.next()
                        prem.append(p.type())
                p.expect(")")
                p.expect("->")
                concl = p.type()
                p.done()
                if name in ops:
                    raise ParseError(f"duplicate op {name}")
                if name in KEYWORDS:
                    raise ParseError(f"reserved name {name}")
                ops[name] = Sequent(tuple(prem), concl)
            elif head == "rule":
                rule_lines.append((lineno, rest))
            else:
                raise ParseError(f"unknown declaration {head!r}")
        except ParseError as e:
            raise ParseError(f"line {lineno}: {e}") from None
    rules, seen = [], set()
    for lineno, rest in rule_lines:
        try:
            p = Parser(rest, ops=set(ops))
            name = p.ident()
            if name in seen:
                raise ParseError(f"duplicate rule {name}")
            seen.add(name)
            p.expect(":")
            p.expect("[")
            entries = []
            if not p.at("]"):
                while True:
                    x = p.ident()
                    p.expect(":")
                    entries.append((x, p.type()))
                    if not p.at(","):
                        break
                    p.next()
            p.expect("]")
            ctx = Context(tuple(entries))
            lhs = p.term(list(ctx.names))
            p.expect("=>")
            rhs = p.term(list(ctx.names))
            p.expect(":")
            ty = p.type()
            p.done()
        except ParseError as e:
            raise ParseError(f"line {lineno}: {e}") from None
        rules.append(RewriteRule(name, ctx, lhs, rhs, ty))
    return build_signature(sorts, ops, rules)


# ---------------------------------------------------------------- printers

def _reserved(sig):
    out = set(KEYWORDS)
    if sig is not None:
        out |= _op_names(sig)
    return out


def _free_name(i, scope):
    j = i - len(scope)
    return f"v{j}"


def show_term(t, ctx: Context | None = None, sig=None) -> str:
    names = list(ctx.names) if ctx is not None else []
    return _term(t, names, _reserved(sig), 0)


def _term(t, scope, reserved, prec):
    if isinstance(t, Var):
        i = t.index
        return scope[len(scope) - 1 - i] if i < len(scope) else f"?{i - len(scope)}"
    if isinstance(t, UnitIntro):
        return "()"
    if isinstance(t, Hole):
        return "[]"
    if isinstance(t, ConstApp):
        return f"{t.op}(" + ", ".join(_term(a, scope, reserved, 0) for a in t.args) + ")"
    if isinstance(t, Pair):
        return f"({_term(t.fst, scope, reserved, 0)}, {_term(t.snd, scope, reserved, 0)})"
    if isinstance(t, Lambda):
        x = fresh_name(t.hint or "x", set(scope) | reserved)
        s = f"\\{x}:{show_type(t.ty)}. {_term(t.body, scope + [x], reserved, 0)}"
        return f"({s})" if prec > 0 else s
    if isinstance(t, App):
        s = f"{_term(t.fun, scope, reserved, 2)} {_term(t.arg, scope, reserved, 4)}"
        return f"({s})" if prec > 2 else s
    if isinstance(t, (Proj1, Proj2)):
        kw = "fst" if isinstance(t, Proj1) else "snd"
        s = f"{kw} {_term(t.arg, scope, reserved, 3)}"
        return f"({s})" if prec > 3 else s
    return repr(t)


def show_proof(p, ctx: Context | None = None, sig=None) -> str:
    names = list(ctx.names) if ctx is not None else []
    return _proof(p, names, _reserved(sig), 0)


def _proof(p, scope, reserved, prec):
    if isinstance(p, VarRefl):
        i = p.index
        return scope[len(scope) - 1 - i] if i < len(scope) else f"?{i - len(scope)}"
    if isinstance(p, UnitRefl):
        return "()"
    if isinstance(p, RuleApp):
        return f"{p.rule}<" + ", ".join(_proof(a, scope, reserved, 0) for a in p.args) + ">"
    if isinstance(p, ConstCong):
        return f"{p.op}(" + ", ".join(_proof(a, scope, reserved, 0) for a in p.args) + ")"
    if isinstance(p, PairCong):
        return f"({_proof(p.fst, scope, reserved, 0)}, {_proof(p.snd, scope, reserved, 0)})"
    if isinstance(p, LambdaCong):
        x = fresh_name(p.hint or "x", set(scope) | reserved)
        s = f"\\{x}:{show_type(p.ty)}. {_proof(p.body, scope + [x], reserved, 0)}"
        return f"({s})" if prec > 0 else s
    if isinstance(p, VComp):
        s = f"{_proof(p.left, scope, reserved, 1)} ; {_proof(p.right, scope, reserved, 2)}"
        return f"({s})" if prec > 1 else s
    if isinstance(p, AppCong):
        s = f"{_proof(p.fun, scope, reserved, 2)} {_proof(p.arg, scope, reserved, 4)}"
        return f"({s})" if prec > 2 else s
    if isinstance(p, (Proj1Cong, Proj2Cong)):
        kw = "fst" if isinstance(p, Proj1Cong) else "snd"
        s = f"{kw} {_proof(p.arg, scope, reserved, 3)}"
        return f"({s})" if prec > 3 else s
    return repr(p)


def show_context(ctx: Context) -> str:
    return ", ".join(f"{n}:{show_type(t)}" for n, t in ctx.entries)


def show_signature(sig) -> str:
    lines = [f"sort {s}" for s in sig.sorts]
    for name, seq in sig.ops.items():
        prem = ", ".join(show_type(a) for a in seq.premises)
        lines.append(f"op {name} : ({prem}) -> {show_type(seq.conclusion)}")
    for name, r in sig.rules.items():
        ctx = "[" + show_context(r.context) + "]"
        lhs = show_term(r.lhs, r.context, sig)
        rhs = show_term(r.rhs, r.context, sig)
        lines.append(f"rule {name} : {ctx} {lhs} => {rhs} : {show_type(r.type)}")
    return "\n".join(lines) + "\n"
