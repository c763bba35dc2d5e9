"""Type-checking kernel.

Decides ``Gamma ctx``, ``Gamma |- A type``, ``Gamma |- a : A`` and
definitional equality for the fully annotated syntax of
:mod:`naturaltt.syntax`.  Failures raise :class:`TypeCheckError`.

Conversion is type-directed: eta at Pi, Sigma, Unit and natural, weak head
reduction otherwise.  At ``natural A`` two terms are compared through
``dn(zero(a))`` at ``A``, which is the eta law plus congruence.  Every
conversion problem runs under a step budget (``fuel``).
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable

from naturaltt.diagnostics import FuelExhausted, TypeCheckError, fail
from naturaltt.syntax import (
    PB,
    UNIV,
    App,
    Const,
    Entry,
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
    RawContext,
    Refl,
    Sig,
    Snd,
    Term,
    Tt,
    Unit,
    Univ,
    Var,
    alpha_eq,
    fresh_name,
    rename,
    subst,
    zero,
    zero_context,
    zero_term,
)

DEFAULT_FUEL = 10_000


@dataclass(frozen=True)
class GlobalDef:
    name: str
    ty: Term
    body: Term | None = None  # None for postulates


class Signature:
    """Top-level constants.  Definitions unfold during conversion; postulates do not."""

    def __init__(self, defs: Iterable[GlobalDef] = ()):
        self._defs: dict[str, GlobalDef] = {}
        for d in defs:
            self.add(d)

    def add(self, d: GlobalDef) -> None:
        if d.name in self._defs:
            raise ValueError(f"constant {d.name!r} already declared")
        self._defs[d.name] = d

    def get(self, name: str) -> GlobalDef | None:
        return self._defs.get(name)

    def __contains__(self, name: str) -> bool:
        return name in self._defs

    def __iter__(self):
        return iter(self._defs.values())

    def copy(self) -> Signature:
        return Signature(self._defs.values())


class Environment:
    """A context whose entries have been validated, with name lookup."""

    __slots__ = ("entries", "signature", "_index", "_zeroed", "_scope")

    def __init__(self, entries: tuple[Entry, ...] = (), signature: Signature | None = None):
        self.entries = entries
        self.signature = signature if signature is not None else Signature()
        self._index = {e.name: i for i, e in enumerate(entries)}
        self._zeroed: Environment | None = None
        self._scope: frozenset[str] | None = None

    @property
    def context(self) -> RawContext:
        return RawContext(self.entries)

    @property
    def scope(self) -> frozenset[str]:
        if self._scope is None:
            self._scope = frozenset(self._index)
        return self._scope

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def lookup(self, name: str) -> tuple[Entry, int] | None:
        i = self._index.get(name)
        return None if i is None else (self.entries[i], i)

    def extend(self, name: str, ty: Term, marked: bool = False) -> Environment:
        if name in self._index:
            raise ValueError(f"{name!r} already bound")
        return Environment(self.entries + (Entry(name, marked, ty),), self.signature)

    def fresh(self, base: str, *avoid: Iterable[str]) -> str:
        names = set(self._index)
        for a in avoid:
            names |= set(a)
        return fresh_name(base, names)

    def bind(self, name: str, ty: Term, marked: bool = False) -> tuple[Environment, str]:
        """Extend with ``name``, renamed if it clashes with an existing entry."""
        new = self.fresh(name)
        return self.extend(new, ty, marked), new

    def zeroed(self) -> Environment:
        """The environment for zc(Gamma); valid whenever ``self`` is (admissible)."""
        if self._zeroed is None:
            if all(e.marked for e in self.entries):
                self._zeroed = self
            else:
                z = Environment(zero_context(self.context).entries, self.signature)
                z._zeroed = z
                self._zeroed = z
        return self._zeroed


class Fuel:
    __slots__ = ("left",)

    def __init__(self, steps: int):
        self.left = steps

    def tick(self) -> None:
        self.left -= 1
        if self.left < 0:
            raise FuelExhausted()


def premise(rule: str, fn, *args):
    """Run a zeroed-context premise, recording ``rule`` on the failure path."""
    try:
        return fn(*args)
    except TypeCheckError as e:
        e.diagnostic.path = (rule,) + e.diagnostic.path
        raise


class Checker:
    def __init__(self, signature: Signature | None = None, *, type_in_type: bool = True,
                 fuel: int = DEFAULT_FUEL):
        self.signature = signature if signature is not None else Signature()
        self.type_in_type = type_in_type
        self.fuel = fuel

    # -- contexts ---------------------------------------------------------

    def empty(self) -> Environment:
        return Environment((), self.signature)

    def check_ctx(self, ctx: RawContext | Iterable[Entry]) -> Environment:
        env = self.empty()
        for e in ctx:
            if e.name in env:
                raise fail("ctx-dup", f"duplicate context entry {e.name!r}")
            if e.marked:
                premise("ctx-ext-zero", self.check_type, env.zeroed(), e.ty)
            else:
                self.check_type(env, e.ty)
            env = env.extend(e.name, e.ty, e.marked)
        return env

    def check_telescope(self, env: Environment, delta: RawContext) -> Environment:
        for e in delta:
            if e.name in env:
                raise fail("ctx-dup", f"telescope entry {e.name!r} clashes with context")
            if e.marked:
                premise("ctx-ext-zero", self.check_type, env.zeroed(), e.ty)
            else:
                self.check_type(env, e.ty)
            env = env.extend(e.name, e.ty, e.marked)
        return env

    # -- variables ----------------------------------------------------------

    def infer_var(self, env: Environment, use: Var | MarkedVar) -> Term:
        found = env.lookup(use.name)
        if found is None:
            raise fail("scope", f"unbound variable {use.name!r}")
        entry, _ = found
        if isinstance(use, Var):
            if entry.marked:
                raise fail("var-zero",
                           f"{use.name!r} is declared marked and can only be used as ~{use.name}")
            return entry.ty
        if entry.marked:
            return entry.ty
        # var-roundtrip: the declared type zeroed over the whole context
        return zero_term(entry.ty, env.scope)

    # -- types --------------------------------------------------------------

    def check_type(self, env: Environment, ty: Term) -> None:
        match ty:
            case Univ() | Unit() | PB():
                return
            case Pi(x, a, b) | Sig(x, a, b):
                self.check_type(env, a)
                env2, x2 = env.bind(x, a)
                self.check_type(env2, rename(b, x, x2) if x2 != x else b)
            case NatType(a):
                premise("nat-form", self.check_type, env.zeroed(), a)
            case Id(a, l, r):
                self.check_type(env, a)
                self.check_term(env, l, a, rule="id-form")
                self.check_term(env, r, a, rule="id-form")
            case _:
                actual = self.infer_term(env, ty)
                if not self.convert_type(env, actual, UNIV):
                    raise fail("type-expected", "expected a type", expected=UNIV, actual=actual)

    # -- terms --------------------------------------------------------------

    def check_term(self, env: Environment, a: Term, ty: Term, rule: str = "conversion") -> None:
        actual = self.infer_term(env, a)
        if not self.convert_type(env, actual, ty):
            raise fail(rule, "type mismatch", expected=ty, actual=actual)

    def infer_term(self, env: Environment, a: Term) -> Term:
        match a:
            case Var() | MarkedVar():
                return self.infer_var(env, a)
            case Const(name):
                d = env.signature.get(name)
                if d is None:
                    raise fail("scope", f"unknown constant {name!r}")
                return d.ty
            case Univ():
                if not self.type_in_type:
                    raise fail("univ", "Type has no type without --type-in-type")
                return UNIV
            case Unit() | PB():
                return UNIV
            case Tt():
                return Unit()
            case Pi(x, dom, cod) | Sig(x, dom, cod):
                self.check_term(env, dom, UNIV, rule="type-expected")
                env2, x2 = env.bind(x, dom)
                self.check_term(env2, rename(cod, x, x2) if x2 != x else cod, UNIV,
                                rule="type-expected")
                return UNIV
            case NatType(inner):
                premise("nat-form", self.check_term, env.zeroed(), inner, UNIV, "type-expected")
                return UNIV
            case Id(ty, l, r):
                self.check_term(env, ty, UNIV, rule="type-expected")
                self.check_term(env, l, ty, rule="id-form")
                self.check_term(env, r, ty, rule="id-form")
                return UNIV
            case NatIntro(body, ty):
                z = env.zeroed()
                premise("nat-intro", self.check_type, z, ty)
                premise("nat-intro", self.check_term, z, body, ty)
                return NatType(ty)
            case NatElim(body, ty):
                premise("nat-elim", self.check_type, env.zeroed(), ty)
                self.check_term(env, body, NatType(ty), rule="nat-elim")
                return ty
            case Lam(x, dom, body, cod):
                self.check_type(env, dom)
                env2, x2 = env.bind(x, dom)
                body2, cod2 = (body, cod) if x2 == x else (rename(body, x, x2), rename(cod, x, x2))
                self.check_type(env2, cod2)
                self.check_term(env2, body2, cod2, rule="lam")
                return Pi(x, dom, cod)
            case App(fn, arg, dom, x, cod):
                self.check_type(env, dom)
                env2, x2 = env.bind(x, dom)
                self.check_type(env2, rename(cod, x, x2) if x2 != x else cod)
                fty = self.infer_term(env, fn)
                whead = self.whnf(env, fty)
                if not isinstance(whead, Pi):
                    raise fail("app", "applying a non-function", actual=fty)
                annotated = Pi(x, dom, cod)
                if not self.convert_type(env, whead, annotated):
                    raise fail("app-annotation", "application annotation disagrees with the function's type",
                               expected=annotated, actual=fty)
                self.check_term(env, arg, dom, rule="app")
                return subst(cod, {x: arg})
            case Pair(fst, snd, dom, x, cod):
                self.check_type(env, Sig(x, dom, cod))
                self.check_term(env, fst, dom, rule="pair")
                self.check_term(env, snd, subst(cod, {x: fst}), rule="pair")
                return Sig(x, dom, cod)
            case Fst(p, dom, x, cod):
                sig = Sig(x, dom, cod)
                self.check_type(env, sig)
                self.check_term(env, p, sig, rule="fst")
                return dom
            case Snd(p, dom, x, cod):
                sig = Sig(x, dom, cod)
                self.check_type(env, sig)
                self.check_term(env, p, sig, rule="snd")
                return subst(cod, {x: Fst(p, dom, x, cod)})
            case Refl(ty, t):
                self.check_type(env, ty)
                self.check_term(env, t, ty, rule="refl")
                return Id(ty, t, t)
            case J(ty, l, r, y, p, motive, base, path):
                self.check_type(env, ty)
                self.check_term(env, l, ty, rule="j")
                self.check_term(env, r, ty, rule="j")
                env2, y2 = env.bind(y, ty)
                env3, p2 = env2.bind(p, Id(ty, l, Var(y2)))
                self.check_type(env3, subst(motive, {y: Var(y2), p: Var(p2)}))
                self.check_term(env, base, subst(motive, {y: l, p: Refl(ty, l)}), rule="j")
                self.check_term(env, path, Id(ty, l, r), rule="j")
                return subst(motive, {y: r, p: path})
        raise fail("syntax", f"unexpected term {type(a).__name__}")

    # -- reduction ----------------------------------------------------------

    def whnf(self, env: Environment, a: Term, fuel: Fuel | None = None) -> Term:
        fuel = fuel or Fuel(self.fuel)
        sig = env.signature
        while True:
            match a:
                case Const(name):
                    d = sig.get(name)
                    if d is None or d.body is None:
                        return a
                    fuel.tick()
                    a = d.body
                case App(fn, arg, dom, x, cod):
                    f = self.whnf(env, fn, fuel)
                    if isinstance(f, Lam):
                        fuel.tick()
                        a = subst(f.body, {f.var: arg})
                        continue
                    return a if f is fn else App(f, arg, dom, x, cod)
                case NatElim(body, ty):
                    b = self.whnf(env, body, fuel)
                    if isinstance(b, NatIntro):
                        fuel.tick()
                        a = b.body
                        continue
                    return a if b is body else NatElim(b, ty)
                case Fst(p, dom, x, cod) | Snd(p, dom, x, cod):
                    q = self.whnf(env, p, fuel)
                    if isinstance(q, Pair):
                        fuel.tick()
                        a = q.fst if isinstance(a, Fst) else q.snd
                        continue
                    return a if q is p else type(a)(q, dom, x, cod)
                case J(ty, l, r, y, p, motive, base, path):
                    q = self.whnf(env, path, fuel)
                    if isinstance(q, Refl):
                        fuel.tick()
                        a = base
                        continue
                    return a if q is path else J(ty, l, r, y, p, motive, base, q)
                case _:
                    return a

    def normalize(self, env: Environment, a: Term, fuel: Fuel | None = None) -> Term:
        """Iterate weak head normalization under every constructor.

        On the way out, ``up(dn(~x))`` contracts to ``x`` when ``x`` is a
        plain variable in scope (an instance of the ♮ eta law).
        """
        plain = frozenset(e.name for e in env.entries if not e.marked)
        return self._norm(env, a, fuel or Fuel(self.fuel), plain)

    def _norm(self, env: Environment, a: Term, fuel: Fuel, plain: frozenset[str]) -> Term:
        w = self.whnf(env, a, fuel)
        if not w._SHAPE:
            return w
        zeroed = isinstance(w, (NatType, NatIntro, NatElim))
        fields = {}
        for n, bound in w._SHAPE:
            inner = frozenset() if zeroed else plain | {getattr(w, b) for b in bound}
            fields[n] = self._norm(env, getattr(w, n), fuel, inner)
        out = replace(w, **fields)
        match out:
            case NatIntro(NatElim(MarkedVar(x), _), _) if x in plain:
                return Var(x)
        return out

    # -- conversion ---------------------------------------------------------

    def convert(self, env: Environment, a: Term, b: Term, ty: Term) -> bool:
        return self._conv(env, a, b, ty, Fuel(self.fuel))

    def convert_type(self, env: Environment, a: Term, b: Term) -> bool:
        return self._conv_type(env, a, b, Fuel(self.fuel))

    def _conv(self, env: Environment, a: Term, b: Term, ty: Term, fuel: Fuel) -> bool:
        if alpha_eq(a, b):
            return True
        fuel.tick()
        t = self.whnf(env, ty, fuel)
        match t:
            case Pi(x, dom, cod):
                y = env.fresh(x, a.free_vars, b.free_vars, cod.free_vars)
                env2 = env.extend(y, dom)
                v = Var(y)
                return self._conv(env2, App(a, v, dom, x, cod), App(b, v, dom, x, cod),
                                  subst(cod, {x: v}), fuel)
            case Sig(x, dom, cod):
                fa, fb = Fst(a, dom, x, cod), Fst(b, dom, x, cod)
                return (self._conv(env, fa, fb, dom, fuel)
                        and self._conv(env, Snd(a, dom, x, cod), Snd(b, dom, x, cod),
                                       subst(cod, {x: fa}), fuel))
            case Unit():
                return True
            case NatType(inner):
                za, zb = NatElim(zero(a), inner), NatElim(zero(b), inner)
                return self._conv(env, za, zb, inner, fuel)
        return self._conv_whnf(env, self.whnf(env, a, fuel), self.whnf(env, b, fuel), fuel)

    def _conv_type(self, env: Environment, a: Term, b: Term, fuel: Fuel) -> bool:
        if alpha_eq(a, b):
            return True
        fuel.tick()
        return self._conv_whnf(env, self.whnf(env, a, fuel), self.whnf(env, b, fuel), fuel)

    def _conv_whnf(self, env: Environment, a: Term, b: Term, fuel: Fuel) -> bool:
        if alpha_eq(a, b):
            return True
        if type(a) is not type(b):
            return False
        match a, b:
            case (Pi(x, d1, c1), Pi(y, d2, c2)) | (Sig(x, d1, c1), Sig(y, d2, c2)):
                if not self._conv_type(env, d1, d2, fuel):
                    return False
                z = env.fresh(x, c1.free_vars, c2.free_vars)
                return self._conv_type(env.extend(z, d1), subst(c1, {x: Var(z)}),
                                       subst(c2, {y: Var(z)}), fuel)
            case NatType(x), NatType(y):
                return self._conv_type(env.zeroed(), x, y, fuel)
            case Id(t1, l1, r1), Id(t2, l2, r2):
                return (self._conv_type(env, t1, t2, fuel)
                        and self._conv(env, l1, l2, t1, fuel)
                        and self._conv(env, r1, r2, t1, fuel))
            case (Var(x), Var(y)) | (MarkedVar(x), MarkedVar(y)) | (Const(x), Const(y)):
                return x == y
            case App(f1, a1, d1, _, _), App(f2, a2, _, _, _):
                return self._conv_whnf(env, f1, f2, fuel) and self._conv(env, a1, a2, d1, fuel)
            case NatElim(n1, _), NatElim(n2, _):
                return self._conv_whnf(env, n1, n2, fuel)
            case (Fst(p1, _, _, _), Fst(p2, _, _, _)) | (Snd(p1, _, _, _), Snd(p2, _, _, _)):
                return self._conv_whnf(env, p1, p2, fuel)
            case J(t1, l1, r1, y1, p1, m1, d1, q1), J(t2, l2, r2, y2, p2, m2, d2, q2):
                if not (self._conv_type(env, t1, t2, fuel)
                        and self._conv(env, l1, l2, t1, fuel)
                        and self._conv(env, r1, r2, t1, fuel)):
                    return False
                y = env.fresh(y1, m1.free_vars, m2.free_vars)
                env2 = env.extend(y, t1)
                p = env2.fresh(p1, m1.free_vars, m2.free_vars)
                env3 = env2.extend(p, Id(t1, l1, Var(y)))
                if not self._conv_type(env3, subst(m1, {y1: Var(y), p1: Var(p)}),
                                       subst(m2, {y2: Var(y), p2: Var(p)}), fuel):
                    return False
                return (self._conv(env, d1, d2, subst(m1, {y1: l1, p1: Refl(t1, l1)}), fuel)
                        and self._conv_whnf(env, q1, q2, fuel))
            # introduction forms only meet here at ill-formed or opaque types
            case Lam(x, d1, b1, c1), Lam(y, d2, b2, _):
                if not self._conv_type(env, d1, d2, fuel):
                    return False
                z = env.fresh(x, b1.free_vars, b2.free_vars, c1.free_vars)
                return self._conv(env.extend(z, d1), subst(b1, {x: Var(z)}),
                                  subst(b2, {y: Var(z)}), subst(c1, {x: Var(z)}), fuel)
            case NatIntro(b1, t1), NatIntro(b2, _):
                return self._conv(env.zeroed(), b1, b2, t1, fuel)
            case Pair(f1, s1, d1, x, c1), Pair(f2, s2, _, _, _):
                return (self._conv(env, f1, f2, d1, fuel)
                        and self._conv(env, s1, s2, subst(c1, {x: f1}), fuel))
            case Refl(t1, x1), Refl(_, x2):
                return self._conv(env, x1, x2, t1, fuel)
            case (Unit(), Unit()) | (PB(), PB()) | (Univ(), Univ()) | (Tt(), Tt()):
                return True
        return False


# module-level conveniences over a default checker ---------------------------

_DEFAULT = Checker()


def check_ctx(ctx: RawContext, checker: Checker = _DEFAULT) -> Environment:
    return checker.check_ctx(ctx)


def infer_var(env: Environment, use: Var | MarkedVar, checker: Checker = _DEFAULT) -> Term:
    return checker.infer_var(env, use)


def check_type(env: Environment, ty: Term, checker: Checker = _DEFAULT) -> None:
    checker.check_type(env, ty)


def check_term(env: Environment, a: Term, ty: Term, checker: Checker = _DEFAULT) -> None:
    checker.check_term(env, a, ty)


def infer_term(env: Environment, a: Term, checker: Checker = _DEFAULT) -> Term:
    return checker.infer_term(env, a)


def whnf(env: Environment, a: Term, checker: Checker = _DEFAULT) -> Term:
    return checker.whnf(env, a)


def convert(env: Environment, a: Term, b: Term, ty: Term, checker: Checker = _DEFAULT) -> bool:
    return checker.convert(env, a, b, ty)
