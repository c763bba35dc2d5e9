"""Recursive-descent parser for the concrete syntax.

Accepted grammar (a superset of the documented EBNF)::

    file  := decl*
    decl  := "def" ID ":" term ":=" term ";"
           | "postulate" ID ":" term ";"
           | "check" term ":" term ";"
           | "eq" term "==" term ":" term ";"
           | "modeleq" term "==" term ":" term ";"
    term  := "fun" fbinder+ "=>" term
           | "Pi" binder "," term | "Sig" binder "," term
           | "let" "up" "(" "~" ID ")" "=" term "in" term
           | app ("->" term)?
    app   := atom+
    atom  := ID | "~" ID | "%" "(" term ")" | "natural" "(" term ")"
           | "up" "(" term (":" term)? ")" | "dn" "(" term (":" term)? ")"
           | "(" term ")" | "(" term "," term ")" | "(" term ":" term ")"
           | "fst" atom | "snd" atom | "Id" atom atom atom
           | "jelim" "(" ID ID "=>" term "," term "," term ")"
           | "refl" | "Unit" | "tt" | "Type" | "PB"
    binder  := "(" "~"? ID (":" | "::") term ")"
    fbinder := binder | "~"? ID

A binder is marked when it carries ``~`` or uses ``::``.
"""
from __future__ import annotations

from naturaltt.diagnostics import Diagnostic, TypeCheckError
from naturaltt.surface import ast as S
from naturaltt.surface.lexer import Token, tokenize

_ATOM_KEYWORDS = frozenset({
    "up", "dn", "natural", "fst", "snd", "Id", "refl", "jelim", "Unit", "tt", "Type", "PB",
})


class Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.pos = 0

    # -- token helpers -------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def error(self, msg: str, tok: Token | None = None) -> TypeCheckError:
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        return TypeCheckError(Diagnostic("syntax", f"{msg}, found {found}", span=tok.span))

    def at(self, kind: str, text: str | None = None) -> bool:
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def at_sym(self, text: str) -> bool:
        return self.at("sym", text)

    def at_kw(self, text: str) -> bool:
        return self.at("kw", text)

    def advance(self) -> Token:
        t = self.tok
        self.pos += 1
        return t

    def expect_sym(self, text: str) -> Token:
        if not self.at_sym(text):
            raise self.error(f"expected {text!r}")
        return self.advance()

    def expect_kw(self, text: str) -> Token:
        if not self.at_kw(text):
            raise self.error(f"expected {text!r}")
        return self.advance()

    def ident(self) -> Token:
        if self.at("kw"):
            raise self.error("reserved word used as identifier")
        if not self.at("id"):
            raise self.error("expected identifier")
        return self.advance()

    # -- declarations ----------------------------------------------------------

    def parse_file(self, path: str | None = None) -> S.SourceFile:
        decls = []
        names: set[str] = set()
        while not self.at("eof"):
            d = self.parse_decl()
            if isinstance(d, (S.Def, S.Postulate)):
                if d.name in names:
                    raise TypeCheckError(Diagnostic(
                        "syntax", f"duplicate declaration {d.name!r}", span=d.span))
                names.add(d.name)
            decls.append(d)
        return S.SourceFile(tuple(decls), path)

    def parse_decl(self) -> S.Decl:
        start = self.tok
        if start.kind != "kw" or start.text not in ("def", "postulate", "check", "eq", "modeleq"):
            raise self.error("expected a declaration")
        self.advance()
        span = start.span
        if start.text == "def":
            name = self.ident().text
            self.expect_sym(":")
            ty = self.parse_term()
            self.expect_sym(":=")
            body = self.parse_term()
            self.expect_sym(";")
            return S.Def(name, ty, body, span=span)
        if start.text == "postulate":
            name = self.ident().text
            self.expect_sym(":")
            ty = self.parse_term()
            self.expect_sym(";")
            return S.Postulate(name, ty, span=span)
        if start.text == "check":
            term = self.parse_term()
            self.expect_sym(":")
            ty = self.parse_term()
            self.expect_sym(";")
            return S.Check(term, ty, span=span)
        lhs = self.parse_term()
        self.expect_sym("==")
        rhs = self.parse_term()
        self.expect_sym(":")
        ty = self.parse_term()
        self.expect_sym(";")
        return S.Eq(lhs, rhs, ty, model_only=start.text == "modeleq", span=span)

    # -- terms ---------------------------------------------------------------

    def parse_term(self) -> S.STerm:
        t = self.tok
        if self.at_kw("fun"):
            self.advance()
            binders = [self.parse_fun_binder()]
            while not self.at_sym("=>"):
                binders.append(self.parse_fun_binder())
            self.advance()
            return S.SFun(tuple(binders), self.parse_term(), span=t.span)
        if self.at_kw("Pi") or self.at_kw("Sig"):
            self.advance()
            b = self.parse_binder()
            self.expect_sym(",")
            body = self.parse_term()
            cls = S.SPi if t.text == "Pi" else S.SSig
            return cls(b, body, span=t.span)
        if self.at_kw("let"):
            self.advance()
            self.expect_kw("up")
            self.expect_sym("(")
            self.expect_sym("~")
            var = self.ident().text
            self.expect_sym(")")
            self.expect_sym("=")
            value = self.parse_term()
            self.expect_kw("in")
            body = self.parse_term()
            return S.SLet(var, value, body, span=t.span)
        lhs = self.parse_app()
        if self.at_sym("->"):
            self.advance()
            return S.SArrow(lhs, self.parse_term(), span=t.span)
        return lhs

    def parse_binder(self) -> S.Binder:
        start = self.expect_sym("(")
        marked = False
        if self.at_sym("~"):
            self.advance()
            marked = True
        name = self.ident().text
        if self.at_sym("::"):
            marked = True
        elif not self.at_sym(":"):
            raise self.error("expected ':' or '::' in binder")
        self.advance()
        ty = self.parse_term()
        self.expect_sym(")")
        return S.Binder(name, marked, ty, start.span)

    def parse_fun_binder(self) -> S.Binder:
        if self.at_sym("("):
            return self.parse_binder()
        start = self.tok
        marked = False
        if self.at_sym("~"):
            self.advance()
            marked = True
        return S.Binder(self.ident().text, marked, None, start.span)

    def starts_atom(self) -> bool:
        t = self.tok
        if t.kind == "id":
            return True
        if t.kind == "kw":
            return t.text in _ATOM_KEYWORDS
        return t.kind == "sym" and t.text in ("(", "~", "%")

    def parse_app(self) -> S.STerm:
        if not self.starts_atom():
            raise self.error("expected a term")
        head = self.parse_atom()
        while self.starts_atom():
            arg = self.parse_atom()
            head = S.SApp(head, arg, span=head.span)
        return head

    def parse_atom(self) -> S.STerm:
        t = self.tok
        sp = t.span
        if t.kind == "id":
            self.advance()
            return S.SVar(t.text, span=sp)
        if self.at_sym("~"):
            self.advance()
            return S.SMarked(self.ident().text, span=sp)
        if self.at_sym("%") or self.at_kw("natural"):
            self.advance()
            self.expect_sym("(")
            ty = self.parse_term()
            self.expect_sym(")")
            return S.SNat(ty, span=sp)
        if self.at_kw("up") or self.at_kw("dn"):
            self.advance()
            self.expect_sym("(")
            body = self.parse_term()
            ann = None
            if self.at_sym(":"):
                self.advance()
                ann = self.parse_term()
            self.expect_sym(")")
            cls = S.SUp if t.text == "up" else S.SDn
            return cls(body, ann, span=sp)
        if self.at_sym("("):
            self.advance()
            inner = self.parse_term()
            if self.at_sym(","):
                self.advance()
                snd = self.parse_term()
                self.expect_sym(")")
                return S.SPair(inner, snd, span=sp)
            if self.at_sym(":"):
                self.advance()
                ty = self.parse_term()
                self.expect_sym(")")
                return S.SAscribe(inner, ty, span=sp)
            self.expect_sym(")")
            return inner
        if self.at_kw("fst") or self.at_kw("snd"):
            self.advance()
            p = self.parse_atom()
            return (S.SFst if t.text == "fst" else S.SSnd)(p, span=sp)
        if self.at_kw("Id"):
            self.advance()
            ty = self.parse_atom()
            lhs = self.parse_atom()
            rhs = self.parse_atom()
            return S.SId(ty, lhs, rhs, span=sp)
        if self.at_kw("jelim"):
            self.advance()
            self.expect_sym("(")
            y = self.ident().text
            p = self.ident().text
            self.expect_sym("=>")
            motive = self.parse_term()
            self.expect_sym(",")
            base = self.parse_term()
            self.expect_sym(",")
            path = self.parse_term()
            self.expect_sym(")")
            return S.SJ(y, p, motive, base, path, span=sp)
        if t.kind == "kw" and t.text in ("refl", "Unit", "tt", "Type", "PB"):
            self.advance()
            return S.SConst(t.text, span=sp)
        raise self.error("expected a term")


def parse(text: str, path: str | None = None) -> S.SourceFile:
    """Parse a whole source file; raises :class:`TypeCheckError` with a ``syntax`` diagnostic."""
    return Parser(text).parse_file(path)


def parse_term(text: str) -> S.STerm:
    p = Parser(text)
    t = p.parse_term()
    if not p.at("eof"):
        raise p.error("unexpected trailing input")
    return t
