"""Pretty-printer for kernel terms.

With ``annotations=True`` (the default) the output carries every kernel
annotation through ascriptions, so parsing and elaborating it gives back an
alpha-equal term without any type inference.  ``annotations=False`` drops
them for human-facing output.
"""
from __future__ import annotations

from naturaltt.syntax import (
    App,
    Const,
    Fst,
    Id,
    J,
    Lam,
    MarkedVar,
    NatElim,
    NatIntro,
    NatType,
    PB,
    Pair,
    Pi,
    Refl,
    Sig,
    Snd,
    Term,
    Tt,
    Unit,
    Univ,
    Var,
)

# precedence levels: a term printed at level ``p`` is parenthesised unless it
# is at least that tight
TERM, APP, ATOM = 0, 1, 2


def pretty(t: Term, annotations: bool = True) -> str:
    return _Printer(annotations).go(t, TERM)


class _Printer:
    def __init__(self, annotations: bool):
        self.ann = annotations

    def go(self, t: Term, prec: int) -> str:
        text, level = self.render(t)
        return text if level >= prec else f"({text})"

    def pi_text(self, x: str, dom: Term, cod: Term) -> str:
        if x not in cod.free_vars:
            return f"{self.go(dom, APP)} -> {self.go(cod, TERM)}"
        return f"Pi ({x} : {self.go(dom, TERM)}) , {self.go(cod, TERM)}"

    def sig_text(self, x: str, dom: Term, cod: Term) -> str:
        return f"Sig ({x} : {self.go(dom, TERM)}) , {self.go(cod, TERM)}"

    def render(self, t: Term) -> tuple[str, int]:
        ann = self.ann
        match t:
            case Var(x) | Const(x):
                return x, ATOM
            case MarkedVar(x):
                return f"~{x}", ATOM
            case Unit():
                return "Unit", ATOM
            case Tt():
                return "tt", ATOM
            case Univ():
                return "Type", ATOM
            case PB():
                return "PB", ATOM
            case NatType(a):
                return f"%({self.go(a, TERM)})", ATOM
            case NatIntro(a, ty):
                if ann:
                    return f"up({self.go(a, TERM)} : {self.go(ty, TERM)})", ATOM
                return f"up({self.go(a, TERM)})", ATOM
            case NatElim(b, ty):
                if ann:
                    return f"dn({self.go(b, TERM)} : {self.go(ty, TERM)})", ATOM
                return f"dn({self.go(b, TERM)})", ATOM
            case Pi(x, dom, cod):
                return self.pi_text(x, dom, cod), TERM
            case Sig(x, dom, cod):
                return self.sig_text(x, dom, cod), TERM
            case Lam(x, dom, body, cod):
                fun = f"fun ({x} : {self.go(dom, TERM)}) => {self.go(body, TERM)}"
                if ann:
                    return f"({fun} : {self.pi_text(x, dom, cod)})", ATOM
                return fun, TERM
            case App(fn, arg, dom, x, cod):
                if ann:
                    head = f"({self.go(fn, TERM)} : {self.pi_text(x, dom, cod)})"
                else:
                    head = self.go(fn, APP)
                return f"{head} {self.go(arg, ATOM)}", APP
            case Pair(a, b, dom, x, cod):
                pair = f"({self.go(a, TERM)} , {self.go(b, TERM)})"
                if ann:
                    return f"({pair} : {self.sig_text(x, dom, cod)})", ATOM
                return pair, ATOM
            case Fst(p, dom, x, cod) | Snd(p, dom, x, cod):
                kw = "fst" if isinstance(t, Fst) else "snd"
                if ann:
                    return f"{kw} ({self.go(p, TERM)} : {self.sig_text(x, dom, cod)})", APP
                return f"{kw} {self.go(p, ATOM)}", APP
            case Id(ty, lhs, rhs):
                return f"Id {self.go(ty, ATOM)} {self.go(lhs, ATOM)} {self.go(rhs, ATOM)}", APP
            case Refl(ty, a):
                if ann:
                    a_text = self.go(a, ATOM)
                    return f"(refl : Id {self.go(ty, ATOM)} {a_text} {a_text})", ATOM
                return "refl", ATOM
            case J(ty, lhs, rhs, y, p, motive, base, path):
                if ann:
                    q = f"({self.go(path, TERM)} : {self.render(Id(ty, lhs, rhs))[0]})"
                else:
                    q = self.go(path, TERM)
                return f"jelim({y} {p} => {self.go(motive, TERM)} , {self.go(base, TERM)} , {q})", ATOM
        raise TypeError(f"cannot print {t!r}")
