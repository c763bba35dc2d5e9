"""Raw syntax for the natural-modality type theory.

Terms are fully annotated and named.  Every constructor is a frozen
dataclass; its binding structure is declared once in ``_SHAPE`` so that
free variables, zeroing, substitution and alpha-equivalence are written
generically.

Two kinds of variable use exist: a plain use ``x`` (:class:`Var`) and a
marked use ``~x`` (:class:`MarkedVar`).  Marking is a term constructor,
not part of the name.  Global constants (:class:`Const`) are closed and
are never touched by zeroing or substitution.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, fields, replace
from functools import cached_property
from typing import ClassVar, Iterable, Iterator, Mapping


class Term:
    """Base class of raw terms (types are terms too)."""

    # (field, binder fields scoping over it) for every subterm field
    _SHAPE: ClassVar[tuple[tuple[str, tuple[str, ...]], ...]] = ()
    _BINDERS: ClassVar[tuple[str, ...]] = ()

    @cached_property
    def free_vars(self) -> frozenset[str]:
        out: set[str] = set()
        for name, bound in self._SHAPE:
            sub = getattr(self, name).free_vars
            if bound:
                sub = sub - {getattr(self, b) for b in bound}
            out |= sub
        return frozenset(out)

    def subterms(self) -> Iterator[Term]:
        for name, _ in self._SHAPE:
            yield getattr(self, name)

    def bound_names(self) -> tuple[str, ...]:
        return tuple(getattr(self, b) for b in self._BINDERS)

    @cached_property
    def size(self) -> int:
        return 1 + sum(t.size for t in self.subterms())

    def __str__(self) -> str:  # pragma: no cover - debugging aid
        from naturaltt.surface.pretty import pretty

        return pretty(self, annotations=False)


@dataclass(frozen=True, eq=True)
class Var(Term):
    name: str

    @cached_property
    def free_vars(self) -> frozenset[str]:
        return frozenset((self.name,))


@dataclass(frozen=True, eq=True)
class MarkedVar(Term):
    """A marked use ``~x``: counit on a marked declaration, roundtrip on a plain one."""

    name: str

    @cached_property
    def free_vars(self) -> frozenset[str]:
        return frozenset((self.name,))


@dataclass(frozen=True, eq=True)
class Const(Term):
    """Reference to a top-level definition or postulate."""

    name: str


@dataclass(frozen=True, eq=True)
class NatType(Term):
    ty: Term
    _SHAPE = (("ty", ()),)


@dataclass(frozen=True, eq=True)
class NatIntro(Term):
    """``a^natural`` annotated with the dull type ``A`` of ``a``."""

    body: Term
    ty: Term
    _SHAPE = (("body", ()), ("ty", ()))


@dataclass(frozen=True, eq=True)
class NatElim(Term):
    """``b_natural`` annotated with ``A`` where ``b : natural A``."""

    body: Term
    ty: Term
    _SHAPE = (("body", ()), ("ty", ()))


@dataclass(frozen=True, eq=True)
class Pi(Term):
    var: str
    dom: Term
    cod: Term
    _SHAPE = (("dom", ()), ("cod", ("var",)))
    _BINDERS = ("var",)


@dataclass(frozen=True, eq=True)
class Lam(Term):
    var: str
    dom: Term
    body: Term
    cod: Term
    _SHAPE = (("dom", ()), ("body", ("var",)), ("cod", ("var",)))
    _BINDERS = ("var",)


@dataclass(frozen=True, eq=True)
class App(Term):
    """``f(a)`` annotated with ``A`` and ``x.B`` where ``f : Pi x:A. B``."""

    fn: Term
    arg: Term
    dom: Term
    var: str
    cod: Term
    _SHAPE = (("fn", ()), ("arg", ()), ("dom", ()), ("cod", ("var",)))
    _BINDERS = ("var",)


@dataclass(frozen=True, eq=True)
class Sig(Term):
    var: str
    dom: Term
    cod: Term
    _SHAPE = (("dom", ()), ("cod", ("var",)))
    _BINDERS = ("var",)


@dataclass(frozen=True, eq=True)
class Pair(Term):
    fst: Term
    snd: Term
    dom: Term
    var: str
    cod: Term
    _SHAPE = (("fst", ()), ("snd", ()), ("dom", ()), ("cod", ("var",)))
    _BINDERS = ("var",)


@dataclass(frozen=True, eq=True)
class Fst(Term):
    pair: Term
    dom: Term
    var: str
    cod: Term
    _SHAPE = (("pair", ()), ("dom", ()), ("cod", ("var",)))
    _BINDERS = ("var",)


@dataclass(frozen=True, eq=True)
class Snd(Term):
    pair: Term
    dom: Term
    var: str
    cod: Term
    _SHAPE = (("pair", ()), ("dom", ()), ("cod", ("var",)))
    _BINDERS = ("var",)


@dataclass(frozen=True, eq=True)
class Id(Term):
    ty: Term
    lhs: Term
    rhs: Term
    _SHAPE = (("ty", ()), ("lhs", ()), ("rhs", ()))


@dataclass(frozen=True, eq=True)
class Refl(Term):
    ty: Term
    term: Term
    _SHAPE = (("ty", ()), ("term", ()))


@dataclass(frozen=True, eq=True)
class J(Term):
    """Path induction.

    ``J(A, a, b, y.p.C, d, q)`` with ``q : Id A a b``, motive ``C`` over
    ``y : A, p : Id A a y`` and ``d : C[a/y, refl/p]``.
    """

    ty: Term
    lhs: Term
    rhs: Term
    var: str
    pvar: str
    motive: Term
    base: Term
    path: Term
    _SHAPE = (
        ("ty", ()),
        ("lhs", ()),
        ("rhs", ()),
        ("motive", ("var", "pvar")),
        ("base", ()),
        ("path", ()),
    )
    _BINDERS = ("var", "pvar")


@dataclass(frozen=True, eq=True)
class Unit(Term):
    pass


@dataclass(frozen=True, eq=True)
class Tt(Term):
    pass


@dataclass(frozen=True, eq=True)
class Univ(Term):
    pass


@dataclass(frozen=True, eq=True)
class PB(Term):
    """Built-in pointed booleans: opaque to the kernel, interpreted by the model."""


UNIT = Unit()
TT = Tt()
UNIV = Univ()
BOOL = PB()


def arrow(dom: Term, cod: Term) -> Pi:
    return Pi(fresh_name("_", cod.free_vars), dom, cod)


# ---------------------------------------------------------------------------
# contexts

@dataclass(frozen=True)
class Entry:
    name: str
    marked: bool
    ty: Term

    def __str__(self) -> str:  # pragma: no cover
        return f"~{self.name} :: {self.ty}" if self.marked else f"{self.name} : {self.ty}"


@dataclass(frozen=True)
class RawContext:
    """Ordered raw context; also used for telescopes over an outer scope."""

    entries: tuple[Entry, ...] = ()

    def __post_init__(self):
        seen: set[str] = set()
        for e in self.entries:
            if e.name in seen:
                raise ValueError(f"duplicate name {e.name!r} in context")
            seen.add(e.name)

    @classmethod
    def of(cls, *entries: Entry | tuple) -> RawContext:
        return cls(tuple(e if isinstance(e, Entry) else Entry(*e) for e in entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Entry]:
        return iter(self.entries)

    def __add__(self, other: RawContext) -> RawContext:
        return RawContext(self.entries + other.entries)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return RawContext(self.entries[i])
        return self.entries[i]

    def extend(self, name: str, ty: Term, marked: bool = False) -> RawContext:
        return RawContext(self.entries + (Entry(name, marked, ty),))

    def dom(self) -> tuple[str, ...]:
        return tuple(e.name for e in self.entries)


Telescope = RawContext


def dom(ctx: RawContext) -> tuple[str, ...]:
    return ctx.dom()


# ---------------------------------------------------------------------------
# names

_SUFFIX = re.compile(r"^(.*?)(\d*)$")


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    """Return ``base`` or ``base`` with a numeric suffix, not in ``avoid``."""
    avoid = avoid if isinstance(avoid, (set, frozenset)) else set(avoid)
    if base not in avoid:
        return base
    stem = _SUFFIX.match(base).group(1) or "x"
    for i in itertools.count(1):
        cand = f"{stem}{i}"
        if cand not in avoid:
            return cand
    raise AssertionError("unreachable")


# ---------------------------------------------------------------------------
# zeroing

def zero_term(a: Term, scope: Iterable[str]) -> Term:
    """``a^{0 scope}``: mark every free plain use of a variable in ``scope``."""
    scope = frozenset(scope)
    return _zero(a, scope)


def _zero(a: Term, scope: frozenset[str]) -> Term:
    if not (a.free_vars & scope):
        return a
    if isinstance(a, Var):
        return MarkedVar(a.name)
    changes = {}
    for name, bound in a._SHAPE:
        inner = scope - {getattr(a, b) for b in bound} if bound else scope
        changes[name] = _zero(getattr(a, name), inner)
    return replace(a, **changes)


def zero(a: Term) -> Term:
    """Mark all free variables of ``a`` (the informal ``za``)."""
    return _zero(a, a.free_vars)


def zero_context(ctx: RawContext, outer: Iterable[str] = ()) -> RawContext:
    """zc(Gamma): mark every entry, zeroing plain entries' types over their prefix.

    For a segment that follows other entries, ``outer`` names them so they
    are zeroed too.
    """
    out: list[Entry] = []
    prefix: list[str] = list(outer)
    for e in ctx:
        if e.marked:
            out.append(e)
        else:
            out.append(Entry(e.name, True, zero_term(e.ty, prefix)))
        prefix.append(e.name)
    return RawContext(tuple(out))


def zero_telescope(delta: Telescope, scope: Iterable[str]) -> Telescope:
    """Delta^{0 scope}: marks preserved, plain entries' types zeroed over ``scope``."""
    scope = frozenset(scope)
    return RawContext(tuple(
        e if e.marked else Entry(e.name, False, _zero(e.ty, scope - _prefix_shadow(delta, e)))
        for e in delta
    ))


def _prefix_shadow(delta: Telescope, entry: Entry) -> frozenset[str]:
    # telescope names are disjoint from the outer scope by invariant; guard anyway
    names = []
    for e in delta:
        if e is entry:
            break
        names.append(e.name)
    return frozenset(names)


# ---------------------------------------------------------------------------
# substitution

def substitute(b: Term, a: Term, x: str) -> Term:
    """``b[a/x]``: plain ``x`` becomes ``a``, marked ``~x`` becomes ``zero(a)``."""
    return subst(b, {x: a})


def subst(b: Term, sigma: Mapping[str, Term]) -> Term:
    """Simultaneous capture-avoiding substitution."""
    sigma = {k: v for k, v in sigma.items() if k in b.free_vars}
    if not sigma:
        return b
    return _subst(b, sigma)


def _subst(b: Term, sigma: Mapping[str, Term]) -> Term:
    if isinstance(b, Var):
        return sigma.get(b.name, b)
    if isinstance(b, MarkedVar):
        a = sigma.get(b.name)
        return b if a is None else zero(a)
    if not (b.free_vars & sigma.keys()):
        return b
    if not b._BINDERS:
        return replace(b, **{n: _subst(getattr(b, n), sigma) for n, _ in b._SHAPE})

    # rename binders that would capture a free variable of the substituted terms
    range_fv: set[str] = set()
    for k, v in sigma.items():
        range_fv |= v.free_vars
    renames: dict[str, str] = {}
    avoid = set(range_fv) | set(sigma) | set(b.free_vars)
    for bf in b._BINDERS:
        old = getattr(b, bf)
        avoid.add(old)
    for bf in b._BINDERS:
        old = getattr(b, bf)
        if old in range_fv:
            new = fresh_name(old, avoid)
            avoid.add(new)
            renames[bf] = new
    changes: dict[str, object] = {bf: new for bf, new in renames.items()}
    for name, bound in b._SHAPE:
        sub = getattr(b, name)
        if bound:
            inner = {k: v for k, v in sigma.items() if k not in {getattr(b, bf) for bf in bound}}
            for bf in bound:
                if bf in renames:
                    inner[getattr(b, bf)] = Var(renames[bf])
            changes[name] = subst(sub, inner)
        else:
            changes[name] = subst(sub, sigma)
    return replace(b, **changes)


def rename(b: Term, old: str, new: str) -> Term:
    return subst(b, {old: Var(new)})


# ---------------------------------------------------------------------------
# alpha-equivalence

def alpha_eq(a: Term, b: Term) -> bool:
    """True iff ``a`` and ``b`` differ only in the names of bound variables."""
    if a is b:
        return True
    return _alpha(a, b, {}, {}, 0)


def _alpha(a: Term, b: Term, ma: dict[str, int], mb: dict[str, int], depth: int) -> bool:
    if type(a) is not type(b):
        return False
    if isinstance(a, (Var, MarkedVar)):
        la, lb = ma.get(a.name), mb.get(b.name)
        if la is None and lb is None:
            return a.name == b.name
        return la == lb
    if isinstance(a, Const):
        return a.name == b.name
    if not ma and not mb and a == b:
        return True
    if not a._BINDERS:
        return all(_alpha(getattr(a, n), getattr(b, n), ma, mb, depth) for n, _ in a._SHAPE)
    levels = {bf: depth + i for i, bf in enumerate(a._BINDERS)}
    for name, bound in a._SHAPE:
        sa, sb = getattr(a, name), getattr(b, name)
        if bound:
            ma2, mb2 = dict(ma), dict(mb)
            for bf in bound:
                ma2[getattr(a, bf)] = levels[bf]
                mb2[getattr(b, bf)] = levels[bf]
            ok = _alpha(sa, sb, ma2, mb2, depth + len(a._BINDERS))
        else:
            ok = _alpha(sa, sb, ma, mb, depth)
        if not ok:
            return False
    return True


def marked_only(a: Term, names: Iterable[str]) -> bool:
    """True when no name in ``names`` occurs free as a plain use in ``a``."""
    return not (plain_free_vars(a) & frozenset(names))


def plain_free_vars(a: Term) -> frozenset[str]:
    if isinstance(a, Var):
        return frozenset((a.name,))
    if isinstance(a, MarkedVar):
        return frozenset()
    out: set[str] = set()
    for name, bound in a._SHAPE:
        sub = plain_free_vars(getattr(a, name))
        if bound:
            sub = sub - {getattr(a, b) for b in bound}
        out |= sub
    return frozenset(out)


def term_fields(t: Term) -> tuple[str, ...]:
    return tuple(f.name for f in fields(t))
