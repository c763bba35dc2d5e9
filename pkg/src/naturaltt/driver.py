"""Checking whole source files and running the model oracle over them."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from naturaltt.diagnostics import Diagnostic, TypeCheckError
from naturaltt.finmodel import DEFAULT_LIMIT, oracle_check
from naturaltt.kernel import DEFAULT_FUEL, Checker, GlobalDef
from naturaltt.surface import ast as S
from naturaltt.surface.elaborate import Elaborator
from naturaltt.surface.parser import parse
from naturaltt.syntax import Term


@dataclass
class CheckedDecl:
    """A declaration after a successful kernel check, in kernel syntax."""

    decl: S.Decl
    label: str
    ty: Term
    terms: tuple[Term, ...]  # body for def; term for check; both sides for eq
    converts: bool = True


@dataclass
class FileReport:
    path: str
    checked: list[CheckedDecl] = field(default_factory=list)
    diagnostics: list[Diagnostic] = field(default_factory=list)
    checker: Checker | None = None

    @property
    def ok(self) -> bool:
        return not self.diagnostics


def decl_label(d: S.Decl) -> str:
    line = d.span.line if d.span else 0
    match d:
        case S.Def(name=name) | S.Postulate(name=name):
            return name
        case S.Eq(model_only=True):
            return f"modeleq@{line}"
        case S.Eq():
            return f"eq@{line}"
    return f"check@{line}"


class _Located:
    """Fills in the span of a kernel diagnostic raised while handling ``node``."""

    def __init__(self, node):
        self.node = node

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if isinstance(exc, TypeCheckError) and exc.diagnostic.span is None:
            exc.diagnostic.span = getattr(self.node, "span", None)
        return False


def check_text(text: str, path: str = "<input>", *, type_in_type: bool = True,
               fuel: int = DEFAULT_FUEL) -> FileReport:
    checker = Checker(type_in_type=type_in_type, fuel=fuel)
    report = FileReport(path, checker=checker)
    try:
        source = parse(text, path)
    except TypeCheckError as e:
        e.diagnostic.file = path
        report.diagnostics.append(e.diagnostic)
        return report
    for d in source.decls:
        try:
            report.checked.append(_check_decl(checker, d))
        except TypeCheckError as e:
            e.diagnostic.file = path
            if e.diagnostic.span is None:
                e.diagnostic.span = d.span
            report.diagnostics.append(e.diagnostic)
    return report


def _check_decl(checker: Checker, d: S.Decl) -> CheckedDecl:
    el = Elaborator(checker)
    env = checker.empty()

    def typ(s: S.STerm) -> Term:
        with _Located(s):
            t = el.type(s)
            checker.check_type(env, t)
            return t

    def term(s: S.STerm, ty: Term) -> Term:
        with _Located(s):
            t = el.term(s, ty)
            checker.check_term(env, t, ty)
            return t

    label = decl_label(d)
    match d:
        case S.Def(name, ty, body):
            t = typ(ty)
            b = term(body, t)
            checker.signature.add(GlobalDef(name, t, b))
            return CheckedDecl(d, label, t, (b,))
        case S.Postulate(name, ty):
            t = typ(ty)
            checker.signature.add(GlobalDef(name, t))
            return CheckedDecl(d, label, t, ())
        case S.Check(tm, ty):
            t = typ(ty)
            return CheckedDecl(d, label, t, (term(tm, t),))
        case S.Eq(lhs, rhs, ty, model_only):
            t = typ(ty)
            lk, rk = term(lhs, t), term(rhs, t)
            with _Located(d):
                same = checker.convert(env, lk, rk, t)
            if not same and not model_only:
                raise TypeCheckError(Diagnostic(
                    "eq", "sides are not definitionally equal", span=d.span,
                    expected=lk, actual=rk))
            return CheckedDecl(d, label, t, (lk, rk), converts=same)
    raise TypeCheckError(Diagnostic("syntax", "unknown declaration", span=d.span))


def check_file(path: str | Path, **kw) -> FileReport:
    """Raises ``OSError`` when the file cannot be read."""
    text = Path(path).read_text(encoding="utf-8")
    return check_text(text, str(path), **kw)


@dataclass(frozen=True)
class ModelResult:
    label: str
    verdict: str  # "true", "false" or "skipped"
    converts: bool
    model_only: bool

    @property
    def violation(self) -> bool:
        """The kernel accepted an equality the model refutes."""
        return self.converts and self.verdict == "false"


def model_report(report: FileReport, limit: int = DEFAULT_LIMIT) -> list[ModelResult]:
    out = []
    env = report.checker.empty()
    for c in report.checked:
        if not isinstance(c.decl, S.Eq):
            continue
        verdict = oracle_check(env, c.terms[0], c.terms[1], c.ty, limit=limit)
        out.append(ModelResult(c.label, verdict, c.converts, c.decl.model_only))
    return out


def find_definition(report: FileReport, name: str) -> CheckedDecl | None:
    for c in report.checked:
        if isinstance(c.decl, S.Def) and c.decl.name == name:
            return c
    return None


__all__ = [
    "CheckedDecl",
    "FileReport",
    "ModelResult",
    "check_file",
    "check_text",
    "find_definition",
    "model_report",
]
