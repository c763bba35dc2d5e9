"""Random generation of raw syntax and of well-typed judgements.

Raw generators ignore typing and exist to exercise the syntactic
operations.  :class:`JudgementGen` builds judgements by forward
construction from the typing rules: types are assembled from the formers,
and terms are produced goal-directed for a given type, backtracking when a
goal has no inhabitant within the depth budget.  Everything it produces is
meant to be re-checked by the kernel rather than trusted.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from naturaltt.syntax import (
    BOOL,
    TT,
    UNIT,
    UNIV,
    App,
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
    Var,
    alpha_eq,
    fresh_name,
    marked_only,
    rename,
    subst,
    zero_context,
    zero_term,
)

NAMES = ("x", "y", "z", "f", "g", "u", "v", "w", "p", "q")
_LEAVES = (BOOL, UNIT, TT, UNIV)


# ---------------------------------------------------------------------------
# raw syntax


class RawGen:
    """Arbitrary, usually ill-typed, terms and contexts."""

    def __init__(self, rng: random.Random, names: tuple[str, ...] = NAMES):
        self.rng = rng
        self.names = names

    def name(self) -> str:
        return self.rng.choice(self.names)

    def var(self, scope: list[str]) -> Term:
        pool = scope or list(self.names)
        x = self.rng.choice(pool)
        return MarkedVar(x) if self.rng.random() < 0.4 else Var(x)

    def term(self, scope: list[str], depth: int = 3) -> Term:
        r = self.rng
        if depth <= 0 or r.random() < 0.2:
            k = r.randrange(6)
            return self.var(scope) if k < 2 else _LEAVES[k - 2]
        d = depth - 1
        kind = r.randrange(13)
        t = lambda sc=scope: self.term(sc, d)  # noqa: E731
        if kind == 0:
            return NatType(t())
        if kind == 1:
            return NatIntro(t(), t())
        if kind == 2:
            return NatElim(t(), t())
        if kind in (3, 4, 5, 6):
            x = self.name()
            inner = scope + [x]
            if kind == 3:
                return Pi(x, t(), t(inner))
            if kind == 4:
                return Lam(x, t(), t(inner), t(inner))
            if kind == 5:
                return Sig(x, t(), t(inner))
            return App(t(), t(), t(), x, t(inner))
        if kind == 7:
            x = self.name()
            return Pair(t(), t(), t(), x, t(scope + [x]))
        if kind == 8:
            x = self.name()
            return (Fst if r.random() < 0.5 else Snd)(t(), t(), x, t(scope + [x]))
        if kind == 9:
            return Id(t(), t(), t())
        if kind == 10:
            return Refl(t(), t())
        if kind == 11:
            y, p = self.name(), self.name()
            if p == y:
                p = fresh_name(p, {y})
            return J(t(), t(), t(), y, p, t(scope + [y, p]), t(), t())
        return self.var(scope)

    def context(self, size: int | None = None, depth: int = 2,
                outer: list[str] | None = None) -> RawContext:
        size = self.rng.randrange(5) if size is None else size
        outer = list(outer or ())
        scope = list(outer)
        entries = []
        for _ in range(size):
            x = fresh_name(self.name(), set(scope))
            entries.append(Entry(x, self.rng.random() < 0.4, self.term(list(scope), depth)))
            scope.append(x)
        return RawContext(tuple(entries))


# ---------------------------------------------------------------------------
# well-typed judgements


class NoTerm(Exception):
    """No inhabitant was found within the depth budget."""


@dataclass(frozen=True)
class Judgement:
    ctx: RawContext
    term: Term
    ty: Term


def var_type(ctx: RawContext, use: Term) -> Term | None:
    """The type the var rules give ``use`` in ``ctx``, or None if they give none."""
    for e in ctx:
        if e.name == use.name:
            if isinstance(use, Var):
                return None if e.marked else e.ty
            return e.ty if e.marked else zero_term(e.ty, ctx.dom())
    return None


class JudgementGen:
    def __init__(self, rng: random.Random, *, type_vars: bool = True):
        self.rng = rng
        self.type_vars = type_vars

    def fresh(self, ctx: RawContext, *avoid: Term) -> str:
        used = set(ctx.dom())
        for t in avoid:
            used |= t.free_vars
        return fresh_name(self.rng.choice(NAMES), used)

    # -- contexts and types -----------------------------------------------------

    def context(self, size: int | None = None, base: RawContext | None = None) -> RawContext:
        """A random well-formed context, optionally extending ``base``."""
        size = self.rng.randrange(5) if size is None else size
        ctx = base if base is not None else RawContext()
        for _ in range(size):
            marked = self.rng.random() < 0.35
            where = zero_context(ctx) if marked else ctx
            if self.type_vars and self.rng.random() < 0.25:
                ty = UNIV
            else:
                ty = self.type(where, 2)
            ctx = ctx.extend(self.fresh(ctx), ty, marked)
        return ctx

    def type_var_uses(self, ctx: RawContext) -> list[Term]:
        out = []
        for e in ctx:
            if e.ty == UNIV:
                out.append(MarkedVar(e.name))
                if not e.marked:
                    out.append(Var(e.name))
        return out

    def type(self, ctx: RawContext, depth: int) -> Term:
        r = self.rng
        leaves = [BOOL, BOOL, UNIT] + self.type_var_uses(ctx)
        if depth <= 0 or r.random() < 0.3:
            return r.choice(leaves)
        kind = r.randrange(6)
        if kind == 0:
            return NatType(self.type(zero_context(ctx), depth - 1))
        if kind in (1, 2, 3):
            a = self.type(ctx, depth - 1)
            x = self.fresh(ctx)
            b = self.type(ctx.extend(x, a), depth - 1)
            return (Sig if kind == 3 else Pi)(x, a, b)
        if kind == 4:
            a = self.type(ctx, depth - 1)
            try:
                lhs = self.check(ctx, a, 1)
                rhs = lhs if r.random() < 0.6 else self.check(ctx, a, 1)
            except NoTerm:
                return r.choice(leaves)
            return Id(a, lhs, rhs)
        return r.choice(leaves)

    # -- terms ------------------------------------------------------------------

    def check(self, ctx: RawContext, ty: Term, depth: int) -> Term:
        """A term of type ``ty`` in ``ctx``; raises :class:`NoTerm`."""
        # each strategy is tried at most once; the weights only bias the order
        weighted = [(self._vars, 1.0), (self._intro, 2.0)]
        if depth > 0:
            weighted.append((self._elim, 1.5))
        options = sorted(weighted, key=lambda ow: -self.rng.random() ** (1 / ow[1]))
        for opt, _ in options:
            try:
                return opt(ctx, ty, depth)
            except NoTerm:
                continue
        raise NoTerm(ty)

    def _vars(self, ctx: RawContext, ty: Term, depth: int) -> Term:
        uses = []
        for e in ctx:
            cands = [MarkedVar(e.name)] if e.marked else [Var(e.name), MarkedVar(e.name)]
            for u in cands:
                t = var_type(ctx, u)
                if t is not None and alpha_eq(t, ty):
                    uses.append(u)
        if not uses:
            raise NoTerm(ty)
        return self.rng.choice(uses)

    def _intro(self, ctx: RawContext, ty: Term, depth: int) -> Term:
        match ty:
            case Pi(x, a, b):
                y = self.fresh(ctx, b)
                b2 = rename(b, x, y) if y != x else b
                return Lam(y, a, self.check(ctx.extend(y, a), b2, depth - 1), b2)
            case Sig(x, a, b):
                fst = self.check(ctx, a, depth - 1)
                return Pair(fst, self.check(ctx, subst(b, {x: fst}), depth - 1), a, x, b)
            case NatType(a):
                return NatIntro(self.check(zero_context(ctx), a, depth - 1), a)
            case Id(a, lhs, rhs) if alpha_eq(lhs, rhs):
                return Refl(a, lhs)
        if alpha_eq(ty, UNIT):
            return TT
        raise NoTerm(ty)

    def _elim(self, ctx: RawContext, ty: Term, depth: int) -> Term:
        r = self.rng
        d = depth - 1
        kind = r.randrange(5)
        if kind == 0:
            if not marked_only(ty, ctx.dom()):
                raise NoTerm(ty)
            return NatElim(self.check(ctx, NatType(ty), d), ty)
        if kind == 1:
            a = self.type(ctx, 1)
            x = self.fresh(ctx, ty)
            fn = self.check(ctx, Pi(x, a, ty), d)
            return App(fn, self.check(ctx, a, d), a, x, ty)
        if kind == 2:
            b = self.type(ctx, 1)
            x = self.fresh(ctx, b, ty)
            return Fst(self.check(ctx, Sig(x, ty, b), d), ty, x, b)
        if kind == 3:
            a = self.type(ctx, 1)
            x = self.fresh(ctx, ty)
            return Snd(self.check(ctx, Sig(x, a, ty), d), a, x, ty)
        a = self.type(ctx, 1)
        end = self.check(ctx, a, d)
        y = self.fresh(ctx, ty)
        p = fresh_name("p", set(ctx.dom()) | ty.free_vars | {y})
        q = self.check(ctx, Id(a, end, end), d)
        return J(a, end, end, y, p, ty, self.check(ctx, ty, d), q)

    # -- whole judgements ---------------------------------------------------------

    def judgement(self, ctx: RawContext | None = None, *, depth: int = 3,
                  attempts: int = 50) -> Judgement:
        for _ in range(attempts):
            c = self.context() if ctx is None else ctx
            ty = self.type(c, 2)
            try:
                return Judgement(c, self.check(c, ty, depth), ty)
            except NoTerm:
                continue
        raise NoTerm("no judgement found")
