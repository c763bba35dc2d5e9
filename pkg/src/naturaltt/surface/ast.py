"""Surface syntax trees, as produced by the parser and consumed by the elaborator."""
from __future__ import annotations

from dataclasses import dataclass, field

from naturaltt.diagnostics import Span


@dataclass(frozen=True)
class STerm:
    span: Span = field(compare=False, kw_only=True, default=None)


@dataclass(frozen=True)
class Binder:
    name: str
    marked: bool
    ty: STerm | None
    span: Span = field(compare=False, default=None)


@dataclass(frozen=True)
class SVar(STerm):
    name: str


@dataclass(frozen=True)
class SMarked(STerm):
    name: str


@dataclass(frozen=True)
class SNat(STerm):
    ty: STerm


@dataclass(frozen=True)
class SUp(STerm):
    body: STerm
    ty: STerm | None = None


@dataclass(frozen=True)
class SDn(STerm):
    body: STerm
    ty: STerm | None = None


@dataclass(frozen=True)
class SFun(STerm):
    binders: tuple[Binder, ...]
    body: STerm


@dataclass(frozen=True)
class SPi(STerm):
    binder: Binder
    body: STerm


@dataclass(frozen=True)
class SSig(STerm):
    binder: Binder
    body: STerm


@dataclass(frozen=True)
class SArrow(STerm):
    dom: STerm
    cod: STerm


@dataclass(frozen=True)
class SLet(STerm):
    """``let up(~u) = v in c``"""

    var: str
    value: STerm
    body: STerm


@dataclass(frozen=True)
class SApp(STerm):
    fn: STerm
    arg: STerm


@dataclass(frozen=True)
class SPair(STerm):
    fst: STerm
    snd: STerm


@dataclass(frozen=True)
class SAscribe(STerm):
    term: STerm
    ty: STerm


@dataclass(frozen=True)
class SFst(STerm):
    pair: STerm


@dataclass(frozen=True)
class SSnd(STerm):
    pair: STerm


@dataclass(frozen=True)
class SId(STerm):
    ty: STerm
    lhs: STerm
    rhs: STerm


@dataclass(frozen=True)
class SJ(STerm):
    var: str
    pvar: str
    motive: STerm
    base: STerm
    path: STerm


@dataclass(frozen=True)
class SConst(STerm):
    """Keyword constants: ``Unit``, ``tt``, ``Type``, ``PB``, ``refl``."""

    name: str


# declarations ---------------------------------------------------------------

@dataclass(frozen=True)
class Decl:
    span: Span = field(compare=False, kw_only=True, default=None)


@dataclass(frozen=True)
class Def(Decl):
    name: str
    ty: STerm
    body: STerm


@dataclass(frozen=True)
class Postulate(Decl):
    name: str
    ty: STerm


@dataclass(frozen=True)
class Check(Decl):
    term: STerm
    ty: STerm


@dataclass(frozen=True)
class Eq(Decl):
    lhs: STerm
    rhs: STerm
    ty: STerm
    model_only: bool = False


@dataclass(frozen=True)
class SourceFile:
    decls: tuple[Decl, ...]
    path: str | None = None
