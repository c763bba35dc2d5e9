"""Finite pointed-families model.

A context denotes a finite base set with a pointed fibre over each base
element.  A type over it gives, for every base element ``g``, a base set
whose elements ``a`` carry fibres over ``(g, a, e)`` with points over
``(g, a)``.  A term picks a base element and a fibre element, agreeing with the type's
point over the context's point.

All sets are finite and discrete, so paths are equalities and transport is
trivial.  The universe and postulates are outside the evaluable fragment.

Evaluation is pointwise: a :class:`Val` assigns each variable a base value
and a fibre value.  Base computations never read fibre values.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from naturaltt.kernel import Environment, Signature
from naturaltt.syntax import (
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
    PB,
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
)

STAR = "*"
DEFAULT_LIMIT = 50_000


class FragmentError(Exception):
    """The construct has no finite interpretation, or its enumeration is too large."""


class ModelError(Exception):
    """The model's own invariants failed; indicates an ill-typed input or a bug."""


@dataclass(frozen=True)
class FMap:
    """A finite function, compared as a set of pairs."""

    items: tuple[tuple[Any, Any], ...]

    def __post_init__(self):
        object.__setattr__(self, "_table", dict(self.items))

    def __call__(self, key):
        try:
            return self._table[key]
        except KeyError:
            raise ModelError(f"finite map applied outside its domain: {key!r}") from None

    def __eq__(self, other):
        return isinstance(other, FMap) and self._table == other._table

    def __hash__(self):
        return hash(frozenset(self.items))

    def __repr__(self):
        return "{" + ", ".join(f"{k!r}: {v!r}" for k, v in self.items) + "}"


# ---------------------------------------------------------------------------
# valuations

@dataclass(eq=False)
class Val:
    """Persistent map from variable names to (base, fibre) plus the entry's type.

    ``parent`` is the valuation the entry's type is read in, so shadowing
    binders inside terms are handled correctly.
    """

    parent: Val | None
    name: str | None
    base: Any = None
    fib: Any = None
    ty: Term | None = None
    marked: bool = False
    _pointed: Val | None = field(default=None, repr=False)

    def lookup(self, name: str) -> Val:
        v = self
        while v is not None and v.name is not None:
            if v.name == name:
                return v
            v = v.parent
        raise ModelError(f"unbound variable {name!r} in the model")

    def extend(self, name: str, base, fib, ty: Term, marked: bool = False) -> Val:
        return Val(self, name, base, fib, ty, marked)


EMPTY = Val(None, None)


class Model:
    """Evaluator for one signature; definitions unfold, postulates are out of fragment."""

    def __init__(self, signature: Signature | None = None, limit: int = DEFAULT_LIMIT):
        self.signature = signature if signature is not None else Signature()
        self.limit = limit

    # -- valuations -------------------------------------------------------------

    def pointed(self, v: Val) -> Val:
        """The same bases with every fibre moved to its point."""
        if v.name is None:
            return v
        if v._pointed is None:
            parent = self.pointed(v.parent)
            fib = STAR if v.marked else self.point(v.ty, v.parent, v.base)
            p = Val(parent, v.name, v.base, fib, v.ty, v.marked)
            p._pointed = p
            v._pointed = p
        return v._pointed

    def _check_size(self, n: int) -> None:
        if n > self.limit:
            raise FragmentError(f"enumeration of {n} elements exceeds the limit {self.limit}")

    def _unfold(self, ty: Term) -> Term:
        while isinstance(ty, Const):
            d = self.signature.get(ty.name)
            if d is None or d.body is None:
                raise FragmentError(f"postulate {ty.name!r} has no finite interpretation")
            ty = d.body
        return ty

    # -- types ------------------------------------------------------------------

    def base(self, ty: Term, v: Val) -> list:
        match self._unfold(ty):
            case PB() | Unit():
                return [STAR]
            case NatType(a):
                return self.base(a, v)
            case Sig(x, a, b):
                out = []
                for av in self.base(a, v):
                    out.extend((av, bv) for bv in self.base(b, v.extend(x, av, None, a)))
                self._check_size(len(out))
                return out
            case Pi(x, a, b):
                return self.homst(x, a, b, v)
            case Id(a, l, r):
                return [STAR] if self.tbase(l, v) == self.tbase(r, v) else []
            case Univ():
                raise FragmentError("the universe has no finite interpretation")
            case other:
                raise FragmentError(f"type {type(other).__name__} is outside the finite fragment")

    def fibre(self, ty: Term, v: Val, a) -> list:
        match self._unfold(ty):
            case PB():
                return [True, False]
            case Unit() | NatType():
                return [STAR]
            case Sig(x, da, db):
                a1, a2 = a
                out = []
                for e1 in self.fibre(da, v, a1):
                    out.extend((e1, e2) for e2 in self.fibre(db, v.extend(x, a1, e1, da), a2))
                self._check_size(len(out))
                return out
            case Pi(x, da, db):
                homdn, _ = a
                keys = [(av, e) for av in self.base(da, v) for e in self.fibre(da, v, av)]
                choices = [self.fibre(db, v.extend(x, av, e, da), homdn(av)) for av, e in keys]
                return self._functions(keys, choices)
            case Id(da, l, r):
                return [STAR] if self.tfib(l, v) == self.tfib(r, v) else []
        return self.base(ty, v) and []  # raises the fragment error

    def point(self, ty: Term, v: Val, a):
        """The point of the fibre over ``a`` at the context's point (bases of ``v`` only)."""
        match self._unfold(ty):
            case PB():
                return True
            case Unit() | NatType() | Id():
                return STAR
            case Sig(x, da, db):
                a1, a2 = a
                p1 = self.point(da, v, a1)
                return p1, self.point(db, v.extend(x, a1, p1, da), a2)
            case Pi():
                return a[1]
        self.base(ty, v)
        raise FragmentError(f"type {type(ty).__name__} is outside the finite fragment")

    def _functions(self, keys: list, choices: list[list]) -> list[FMap]:
        total = 1
        for c in choices:
            total *= len(c)
            self._check_size(total)
        return [FMap(tuple(zip(keys, pick))) for pick in itertools.product(*choices)]

    def homst(self, x: str, a: Term, b: Term, v: Val) -> list:
        """All (homdn, homup) pairs of pointed maps, the base of a Pi type."""
        pv = self.pointed(v)
        abase = self.base(a, v)
        bbases = [self.base(b, v.extend(x, av, None, a)) for av in abase]
        out = []
        total = 1
        for c in bbases:
            total *= len(c)
            self._check_size(total)
        for pick in itertools.product(*bbases):
            homdn = FMap(tuple(zip(abase, pick)))
            keys, choices = [], []
            for av, bv in zip(abase, pick):
                pa = self.point(a, v, av)
                for e in self.fibre(a, pv, av):
                    keys.append((av, e))
                    inner = pv.extend(x, av, e, a)
                    if e == pa:
                        # pointedness: the point goes to the point
                        choices.append([self.point(b, inner, bv)])
                    else:
                        choices.append(self.fibre(b, inner, bv))
            for homup in self._functions(keys, choices):
                out.append((homdn, homup))
                self._check_size(len(out))
        return out

    # -- terms ------------------------------------------------------------------

    def tbase(self, t: Term, v: Val):
        match t:
            case Var(x) | MarkedVar(x):
                return v.lookup(x).base
            case Const(name):
                return self.tbase(self._def_body(name), EMPTY)
            case Tt() | Refl():
                return STAR
            case NatIntro(a, _) | NatElim(a, _):
                return self.tbase(a, v)
            case Lam(x, a, body, _):
                pv = self.pointed(v)
                abase = self.base(a, v)
                homdn = FMap(tuple((av, self.tbase(body, v.extend(x, av, None, a))) for av in abase))
                homup = FMap(tuple(
                    ((av, e), self.tfib(body, pv.extend(x, av, e, a)))
                    for av in abase for e in self.fibre(a, pv, av)))
                return homdn, homup
            case App(f, a, _, _, _):
                return self.tbase(f, v)[0](self.tbase(a, v))
            case Pair(a, b, _, _, _):
                return self.tbase(a, v), self.tbase(b, v)
            case Fst(p, _, _, _):
                return self.tbase(p, v)[0]
            case Snd(p, _, _, _):
                return self.tbase(p, v)[1]
            case J(_, _, _, _, _, _, d, _):
                return self.tbase(d, v)
        raise FragmentError(f"term {type(t).__name__} is outside the finite fragment")

    def tfib(self, t: Term, v: Val):
        match t:
            case Var(x):
                return v.lookup(x).fib
            case MarkedVar(x):
                slot = v.lookup(x)
                return self.point(slot.ty, slot.parent, slot.base)
            case Const(name):
                # closed terms live over the empty context, whose fibre is a point
                return self.tfib(self._def_body(name), EMPTY)
            case Tt() | Refl() | NatIntro():
                return STAR
            case NatElim(b, ty):
                return self.point(ty, v, self.tbase(b, v))
            case Lam(x, a, body, _):
                return FMap(tuple(
                    ((av, e), self.tfib(body, v.extend(x, av, e, a)))
                    for av in self.base(a, v) for e in self.fibre(a, v, av)))
            case App(f, a, _, _, _):
                return self.tfib(f, v)((self.tbase(a, v), self.tfib(a, v)))
            case Pair(a, b, _, _, _):
                return self.tfib(a, v), self.tfib(b, v)
            case Fst(p, _, _, _):
                return self.tfib(p, v)[0]
            case Snd(p, _, _, _):
                return self.tfib(p, v)[1]
            case J(_, _, _, _, _, _, d, _):
                return self.tfib(d, v)
        raise FragmentError(f"term {type(t).__name__} is outside the finite fragment")

    def _def_body(self, name: str) -> Term:
        d = self.signature.get(name)
        if d is None or d.body is None:
            raise FragmentError(f"postulate {name!r} has no finite interpretation")
        return d.body

    # -- contexts ---------------------------------------------------------------

    def valuations(self, entries: Iterable[Entry]) -> list[tuple[Any, Any, Val]]:
        """Every (g, e, valuation) of a context, with nested-pair tokens."""
        rows = [(STAR, STAR, EMPTY)]
        for entry in entries:
            nxt = []
            for g, e, v in rows:
                for a in self.base(entry.ty, v):
                    fibs = [STAR] if entry.marked else self.fibre(entry.ty, v, a)
                    for ea in fibs:
                        nxt.append(((g, a), (e, ea), v.extend(entry.name, a, ea, entry.ty, entry.marked)))
            self._check_size(len(nxt))
            rows = nxt
        return rows


# ---------------------------------------------------------------------------
# semantic objects


@dataclass
class FinPointedFam:
    """A context: finite base, fibre over each base element, chosen point."""

    base: list
    fibre: dict
    point: dict
    vals: dict = field(repr=False, default_factory=dict)  # (g, e) -> Val

    def check(self) -> None:
        for g in self.base:
            if self.point[g] not in self.fibre[g]:
                raise ModelError(f"point of {g!r} is not in its fibre")


def eval_ctx(ctx: Environment | RawContext | Iterable[Entry], signature: Signature | None = None,
             model: Model | None = None) -> FinPointedFam:
    if isinstance(ctx, Environment):
        signature = signature or ctx.signature
        entries = ctx.entries
    else:
        entries = tuple(ctx)
    m = model or Model(signature)
    base: list = []
    fibre: dict = {}
    vals: dict = {}
    for g, e, v in m.valuations(entries):
        if g not in fibre:
            base.append(g)
            fibre[g] = []
        fibre[g].append(e)
        vals[(g, e)] = v
    point = {}
    for g in base:
        # any valuation over g gives the same pointed one
        v = m.pointed(vals[(g, fibre[g][0])])
        point[g] = _fib_token(v)
    fam = FinPointedFam(base, fibre, point, vals)
    fam.model = m
    fam.check()
    return fam


def _fib_token(v: Val):
    if v.name is None:
        return STAR
    return (_fib_token(v.parent), v.fib)


@dataclass
class SemType:
    ctx: FinPointedFam
    ty: Term

    @property
    def model(self) -> Model:
        return self.ctx.model

    def _val(self, g, e=None) -> Val:
        e = self.ctx.point[g] if e is None else e
        return self.ctx.vals[(g, e)]

    def base(self, g) -> list:
        return self.model.base(self.ty, self._val(g))

    def fibre(self, g, a, e) -> list:
        return self.model.fibre(self.ty, self._val(g, e), a)

    def point(self, g, a):
        return self.model.point(self.ty, self._val(g), a)


@dataclass
class SemTerm:
    """``homdn`` and ``homup`` as finite tables; pointedness is verified on construction."""

    ty: SemType
    homdn: dict
    homup: dict

    def __post_init__(self):
        ctx = self.ty.ctx
        for g in ctx.base:
            a = self.homdn[g]
            if a not in self.ty.base(g):
                raise ModelError(f"base value {a!r} is not in the type's base over {g!r}")
            if self.homup[(g, ctx.point[g])] != self.ty.point(g, a):
                raise ModelError(f"term is not pointed over {g!r}")


def eval_type(ctx: FinPointedFam, ty: Term) -> SemType:
    st = SemType(ctx, ty)
    for g in ctx.base:
        for a in st.base(g):
            for e in ctx.fibre[g]:
                st.fibre(g, a, e)
            if st.point(g, a) not in st.fibre(g, a, ctx.point[g]):
                raise ModelError("type's point lies outside its fibre")
    return st


def eval_term(ctx: FinPointedFam, t: Term, ty: Term) -> SemTerm:
    m = ctx.model
    homdn = {g: m.tbase(t, ctx.vals[(g, ctx.point[g])]) for g in ctx.base}
    homup = {(g, e): m.tfib(t, ctx.vals[(g, e)]) for g in ctx.base for e in ctx.fibre[g]}
    return SemTerm(SemType(ctx, ty), homdn, homup)


def sem_equal(x: SemTerm, y: SemTerm) -> bool:
    if x.ty.ctx is not y.ty.ctx:
        raise ModelError("comparing terms over different contexts")
    return x.homdn == y.homdn and x.homup == y.homup


def oracle_check(env: Environment, a: Term, b: Term, ty: Term, *, limit: int = DEFAULT_LIMIT) -> str:
    """``"true"``, ``"false"`` or ``"skipped"`` for the model equality of ``a`` and ``b``."""
    try:
        ctx = eval_ctx(env, model=Model(env.signature, limit))
        return "true" if sem_equal(eval_term(ctx, a, ty), eval_term(ctx, b, ty)) else "false"
    except (FragmentError, RecursionError):
        return "skipped"


# ---------------------------------------------------------------------------
# semantic substitutions between contexts


@dataclass(frozen=True)
class SemSubst:
    """A map of pointed families: base map plus fibre map over it."""

    dom: FinPointedFam
    cod: FinPointedFam
    on_base: Mapping
    on_fibre: Mapping  # (g, e) -> e'

    def then(self, other: SemSubst) -> SemSubst:
        on_base = {g: other.on_base[self.on_base[g]] for g in self.dom.base}
        on_fibre = {
            (g, e): other.on_fibre[(self.on_base[g], self.on_fibre[(g, e)])]
            for g in self.dom.base for e in self.dom.fibre[g]
        }
        return SemSubst(self.dom, other.cod, on_base, on_fibre)

    def is_identity(self) -> bool:
        return (self.dom is self.cod
                and all(self.on_base[g] == g for g in self.dom.base)
                and all(self.on_fibre[(g, e)] == e for g in self.dom.base for e in self.dom.fibre[g]))

    def is_pointed(self) -> bool:
        return all(self.on_fibre[(g, self.dom.point[g])] == self.cod.point[self.on_base[g]]
                   for g in self.dom.base)


def natural_ctx(ctx: FinPointedFam) -> FinPointedFam:
    """Same base, every fibre a point."""
    fam = FinPointedFam(list(ctx.base), {g: [STAR] for g in ctx.base},
                        {g: STAR for g in ctx.base})
    fam.model = getattr(ctx, "model", None)
    return fam


def counit(ctx: FinPointedFam, nat: FinPointedFam) -> SemSubst:
    """``natural Gamma -> Gamma``: the point of each fibre."""
    return SemSubst(nat, ctx, {g: g for g in ctx.base},
                    {(g, STAR): ctx.point[g] for g in ctx.base})


def unit(ctx: FinPointedFam, nat: FinPointedFam) -> SemSubst:
    """``Gamma -> natural Gamma``: collapse every fibre."""
    return SemSubst(ctx, nat, {g: g for g in ctx.base},
                    {(g, e): STAR for g in ctx.base for e in ctx.fibre[g]})
