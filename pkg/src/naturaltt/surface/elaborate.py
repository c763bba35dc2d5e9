"""Bidirectional elaboration of surface trees into fully annotated kernel terms.

The elaborator only fills in annotations and expands sugar.  It never
decides a typing judgement itself: everything it produces is re-checked by
the kernel, so a wrong guess here surfaces as a kernel diagnostic.

Sugar handled here:

* ``A -> B`` is a non-dependent ``Pi``.
* A dull binder ``Pi (~x :: A) , B`` becomes ``Pi (x : %(A)) , B`` with every
  ``~x`` in ``B`` replaced by ``dn(~x : A)``; dull ``fun`` binders expand the
  same way.
* Applying ``f : Pi (x : %(A)) , B`` to an argument of type ``A`` inserts
  ``up``.
* ``let up(~u) = v in c`` becomes ``c`` with ``~u`` replaced by
  ``dn(zero(v) : A)`` where ``v : %(A)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from naturaltt.diagnostics import TypeCheckError, fail
from naturaltt.kernel import Checker, Environment, premise
from naturaltt.surface import ast as S
from naturaltt.syntax import (
    BOOL,
    TT,
    UNIT,
    UNIV,
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
    Pair,
    Pi,
    Refl,
    Sig,
    Snd,
    Term,
    Var,
    alpha_eq,
    arrow,
    fresh_name,
    plain_free_vars,
    rename,
    subst,
    zero,
)

_CONSTANTS = {"Unit": UNIT, "tt": TT, "Type": UNIV, "PB": BOOL}


@dataclass(frozen=True)
class Scope:
    """Kernel environment plus the map from surface names to kernel names."""

    env: Environment
    names: Mapping[str, str]

    def zeroed(self) -> Scope:
        return Scope(self.env.zeroed(), self.names)


def surface_names(s) -> set[str]:
    """Every identifier written anywhere in a surface tree."""
    out: set[str] = set()
    stack = [s]
    while stack:
        node = stack.pop()
        match node:
            case S.SVar(name) | S.SMarked(name) | S.SConst(name):
                out.add(name)
            case S.Binder(name=name, ty=ty):
                out.add(name)
                if ty is not None:
                    stack.append(ty)
            case S.SLet(var=var):
                out.add(var)
                stack.extend((node.value, node.body))
            case S.SJ(var=y, pvar=p):
                out.update((y, p))
                stack.extend((node.motive, node.base, node.path))
            case S.STerm():
                for v in vars(node).values():
                    if isinstance(v, (S.STerm, S.Binder)):
                        stack.append(v)
                    elif isinstance(v, tuple):
                        stack.extend(v)
    return out


def _err(rule: str, msg: str, node, **kw) -> TypeCheckError:
    return fail(rule, msg, span=getattr(node, "span", None), **kw)


def _replace_marked(body: Term, x: str, by: Term, node) -> Term:
    """``body`` with each ``~x`` replaced by ``by`` (which must be dull)."""
    if x in plain_free_vars(body):
        raise _err("var-zero", f"{x!r} is a dull binder and can only be used as ~{x}", node)
    return subst(body, {x: by})


class Elaborator:
    """Turns surface terms into kernel terms relative to a checker's signature.

    ``strict=False`` lets unbound identifiers through as free variables, which
    is what round-tripping open terms needs.
    """

    def __init__(self, checker: Checker | None = None, *, strict: bool = True,
                 reserved: Iterable[str] = ()):
        self.checker = checker if checker is not None else Checker()
        self.strict = strict
        self.reserved = set(reserved)

    # -- entry points ----------------------------------------------------------

    def top(self, env: Environment | None = None) -> Scope:
        env = env if env is not None else self.checker.empty()
        return Scope(env, {e.name: e.name for e in env.entries})

    def term(self, s: S.STerm, expected: Term | None = None, scope: Scope | None = None) -> Term:
        self.reserved |= surface_names(s)
        return self.build(scope or self.top(), s, expected)

    def type(self, s: S.STerm, scope: Scope | None = None) -> Term:
        return self.term(s, UNIV, scope)

    # -- helpers -----------------------------------------------------------------

    def fresh(self, sc: Scope, base: str) -> str:
        # keeping the surface name is always capture-free; a replacement must
        # avoid every identifier written in the source
        if base not in sc.env and base not in self.checker.signature:
            return base
        return sc.env.fresh(base, self.reserved, (d.name for d in self.checker.signature))

    def bind(self, sc: Scope, name: str, ty: Term, marked: bool = False) -> tuple[Scope, str]:
        k = self.fresh(sc, name)
        return Scope(sc.env.extend(k, ty, marked), {**sc.names, name: k}), k

    def whnf(self, sc: Scope, ty: Term) -> Term:
        try:
            return self.checker.whnf(sc.env, ty)
        except TypeCheckError:
            return ty

    def head(self, sc: Scope, ty: Term, cls) -> Term | None:
        """``ty`` if it is already a ``cls`` node, else its weak head normal form if that is."""
        if isinstance(ty, cls):
            return ty
        w = self.whnf(sc, ty)
        return w if isinstance(w, cls) else None

    def infer_type(self, sc: Scope, t: Term, node) -> Term:
        try:
            return self.checker.infer_term(sc.env, t)
        except TypeCheckError as e:
            if e.diagnostic.span is None:
                e.diagnostic.span = getattr(node, "span", None)
            raise

    def synth(self, sc: Scope, s: S.STerm) -> tuple[Term, Term]:
        """Elaborate ``s`` without an expected type and return it with its type."""
        if isinstance(s, S.SAscribe):
            ty = self.build(sc, s.ty, UNIV)
            return self.build(sc, s.term, ty), ty
        t = self.build(sc, s, None)
        match t:
            case App(_, arg, _, x, cod):
                return t, subst(cod, {x: arg})
            case NatIntro(_, ty):
                return t, NatType(ty)
            case NatElim(_, ty) | Fst(_, ty, _, _):
                return t, ty
            case Snd(p, dom, x, cod):
                return t, subst(cod, {x: Fst(p, dom, x, cod)})
            case Lam(x, dom, _, cod):
                return t, Pi(x, dom, cod)
            case Pair(_, _, dom, x, cod):
                return t, Sig(x, dom, cod)
        return t, self.infer_type(sc, t, s)

    def try_synth_type(self, sc: Scope, s: S.STerm) -> Term | None:
        try:
            return self.synth(sc, s)[1]
        except TypeCheckError:
            return None

    def converts(self, sc: Scope, a: Term, b: Term) -> bool:
        if alpha_eq(a, b):
            return True
        try:
            return self.checker.convert_type(sc.env, a, b)
        except TypeCheckError:
            return False

    # -- the main recursion ----------------------------------------------------

    def build(self, sc: Scope, s: S.STerm, expected: Term | None) -> Term:
        match s:
            case S.SVar(name):
                if name in sc.names:
                    return Var(sc.names[name])
                if name in self.checker.signature:
                    return Const(name)
                if self.strict:
                    raise _err("scope", f"unbound variable {name!r}", s)
                return Var(name)
            case S.SMarked(name):
                if name in sc.names:
                    return MarkedVar(sc.names[name])
                if name in self.checker.signature:
                    raise _err("scope", f"global {name!r} cannot be used marked", s)
                if self.strict:
                    raise _err("scope", f"unbound variable {name!r}", s)
                return MarkedVar(name)
            case S.SConst("refl"):
                ident = expected and self.head(sc, expected, Id)
                if not ident:
                    raise _err("refl", "cannot infer the type of refl; add an ascription", s)
                return Refl(ident.ty, ident.lhs)
            case S.SConst(name):
                return _CONSTANTS[name]
            case S.SNat(inner):
                return NatType(premise("nat-form", self.build, sc.zeroed(), inner, UNIV))
            case S.SUp(body, ann):
                return self.build_up(sc, s, body, ann, expected)
            case S.SDn(body, ann):
                if ann is not None:
                    ty = premise("nat-elim", self.build, sc.zeroed(), ann, UNIV)
                    return NatElim(self.build(sc, body, NatType(ty)), ty)
                b, bty = self.synth(sc, body)
                nat = self.head(sc, bty, NatType)
                if nat is None:
                    raise _err("nat-elim", "dn expects a term of a natural type", s, actual=bty)
                return NatElim(b, nat.ty)
            case S.SArrow(dom, cod):
                return arrow(self.build(sc, dom, UNIV), self.build(sc, cod, UNIV))
            case S.SPi(binder, body):
                return self.build_pi(sc, binder, body)
            case S.SSig(binder, body):
                if binder.marked:
                    raise _err("syntax", "Sig binders cannot be dull", binder)
                dom = self.build(sc, binder.ty, UNIV)
                sc2, k = self.bind(sc, binder.name, dom)
                return Sig(k, dom, self.build(sc2, body, UNIV))
            case S.SFun(binders, body):
                inner = body
                for b in reversed(binders[1:]):
                    inner = S.SFun((b,), inner, span=b.span)
                return self.build_lam(sc, s, binders[0], inner, expected)
            case S.SApp(fn, arg):
                return self.build_app(sc, s, fn, arg)
            case S.SAscribe(term, ty):
                return self.build(sc, term, self.build(sc, ty, UNIV))
            case S.SPair(a, b):
                sig = expected and self.head(sc, expected, Sig)
                if sig:
                    ak = self.build(sc, a, sig.dom)
                    bk = self.build(sc, b, subst(sig.cod, {sig.var: ak}))
                    return Pair(ak, bk, sig.dom, sig.var, sig.cod)
                ak, aty = self.synth(sc, a)
                bk, bty = self.synth(sc, b)
                return Pair(ak, bk, aty, fresh_name("_", bty.free_vars), bty)
            case S.SFst(p) | S.SSnd(p):
                pk, pty = self.synth(sc, p)
                sig = self.head(sc, pty, Sig)
                rule = "fst" if isinstance(s, S.SFst) else "snd"
                if sig is None:
                    raise _err(rule, "projection from a term that is not a pair", s, actual=pty)
                cls = Fst if rule == "fst" else Snd
                return cls(pk, sig.dom, sig.var, sig.cod)
            case S.SId(ty, lhs, rhs):
                tk = self.build(sc, ty, UNIV)
                return Id(tk, self.build(sc, lhs, tk), self.build(sc, rhs, tk))
            case S.SJ(y, p, motive, base, path):
                qk, qty = self.synth(sc, path)
                ident = self.head(sc, qty, Id)
                if ident is None:
                    raise _err("j", "jelim expects a path", s, actual=qty)
                sc2, ky = self.bind(sc, y, ident.ty)
                sc3, kp = self.bind(sc2, p, Id(ident.ty, ident.lhs, Var(ky)))
                mk = self.build(sc3, motive, UNIV)
                dk = self.build(sc, base, subst(mk, {ky: ident.lhs, kp: Refl(ident.ty, ident.lhs)}))
                return J(ident.ty, ident.lhs, ident.rhs, ky, kp, mk, dk, qk)
            case S.SLet(var, value, body):
                vk, vty = self.synth(sc, value)
                nat = self.head(sc, vty, NatType)
                if nat is None:
                    raise _err("let-flat", "let up(~u) = v needs v of a natural type", s, actual=vty)
                sc2, k = self.bind(sc, var, nat.ty, marked=True)
                ck = self.build(sc2, body, expected)
                return _replace_marked(ck, k, NatElim(zero(vk), nat.ty), s)
        raise _err("syntax", f"cannot elaborate {type(s).__name__}", s)

    def build_up(self, sc: Scope, s, body, ann, expected) -> Term:
        return premise("nat-intro", self._build_up, sc, s, body, ann, expected)

    def _build_up(self, sc: Scope, s, body, ann, expected) -> Term:
        z = sc.zeroed()
        if ann is not None:
            ty = self.build(z, ann, UNIV)
            return NatIntro(self.build(z, body, ty), ty)
        nat = expected and self.head(sc, expected, NatType)
        if nat:
            return NatIntro(self.build(z, body, nat.ty), nat.ty)
        a, ty = self.synth(z, body)
        return NatIntro(a, ty)

    def build_pi(self, sc: Scope, binder: S.Binder, body: S.STerm) -> Term:
        if not binder.marked:
            dom = self.build(sc, binder.ty, UNIV)
            sc2, k = self.bind(sc, binder.name, dom)
            return Pi(k, dom, self.build(sc2, body, UNIV))
        dom = self.build(sc.zeroed(), binder.ty, UNIV)
        sc2, k = self.bind(sc, binder.name, dom, marked=True)
        cod = self.build(sc2, body, UNIV)
        return Pi(k, NatType(dom), _replace_marked(cod, k, NatElim(Var(k), dom), binder))

    def build_lam(self, sc: Scope, s, binder: S.Binder, body: S.STerm, expected) -> Term:
        pi = expected and self.head(sc, expected, Pi)
        if expected is not None and not pi:
            raise _err("lam", "a function was given where a non-function type is expected", s,
                       expected=expected)
        if binder.marked:
            return self.build_dull_lam(sc, s, binder, body, pi)
        if binder.ty is not None:
            dom = self.build(sc, binder.ty, UNIV)
            if pi and not self.converts(sc, dom, pi.dom):
                raise _err("lam-annotation", "binder type disagrees with the expected domain",
                           binder, expected=pi.dom, actual=dom)
        elif pi:
            dom = pi.dom
        else:
            raise _err("elab", f"cannot infer the type of binder {binder.name!r}", binder)
        sc2, k = self.bind(sc, binder.name, dom)
        if pi:
            cod = rename(pi.cod, pi.var, k) if pi.var != k else pi.cod
            return Lam(k, dom, self.build(sc2, body, cod), cod)
        bk, bty = self.synth(sc2, body)
        return Lam(k, dom, bk, bty)

    def build_dull_lam(self, sc: Scope, s, binder: S.Binder, body: S.STerm, pi: Pi | None) -> Term:
        if binder.ty is not None:
            dom = self.build(sc.zeroed(), binder.ty, UNIV)
            if pi:
                nat = self.head(sc, pi.dom, NatType)
                if nat is None or not self.converts(sc, NatType(dom), pi.dom):
                    raise _err("lam-annotation", "dull binder needs a natural domain", binder,
                               expected=pi.dom, actual=NatType(dom))
        elif pi:
            nat = self.head(sc, pi.dom, NatType)
            if nat is None:
                raise _err("lam-annotation", "dull binder needs a natural domain", binder,
                           expected=pi.dom)
            dom = nat.ty
        else:
            raise _err("elab", f"cannot infer the type of binder {binder.name!r}", binder)
        sc2, k = self.bind(sc, binder.name, dom, marked=True)
        if pi:
            cod = subst(pi.cod, {pi.var: NatIntro(MarkedVar(k), dom)})
            bk = self.build(sc2, body, cod)
        else:
            bk, cod = self.synth(sc2, body)
        back = NatElim(Var(k), dom)
        bk = _replace_marked(bk, k, back, binder)
        if pi:
            cod = rename(pi.cod, pi.var, k) if pi.var != k else pi.cod
        else:
            cod = _replace_marked(cod, k, back, binder)
        return Lam(k, NatType(dom), bk, cod)

    def build_app(self, sc: Scope, s, fn, arg) -> Term:
        fk, fty = self.synth(sc, fn)
        pi = self.head(sc, fty, Pi)
        if pi is None:
            raise _err("app", "applying a non-function", s, actual=fty)
        nat = self.head(sc, pi.dom, NatType)
        if nat is not None and not isinstance(arg, (S.SUp, S.SAscribe)):
            aty = self.try_synth_type(sc, arg)
            if (aty is not None and not self.converts(sc, aty, pi.dom)
                    and self.converts(sc, aty, nat.ty)):
                a = premise("nat-intro", self.build, sc.zeroed(), arg, nat.ty)
                return App(fk, NatIntro(a, nat.ty), pi.dom, pi.var, pi.cod)
        return App(fk, self.build(sc, arg, pi.dom), pi.dom, pi.var, pi.cod)


def elaborate_term(s: S.STerm, checker: Checker | None = None, *, strict: bool = False,
                   expected: Term | None = None) -> Term:
    """Elaborate a closed-or-open surface term in the empty context."""
    return Elaborator(checker, strict=strict).term(s, expected)


def desugar(s: S.STerm, expected: Term | None = None, *, checker: Checker | None = None,
            env: Environment | None = None) -> Term:
    el = Elaborator(checker, strict=env is not None)
    return el.term(s, expected, el.top(env) if env is not None else None)
