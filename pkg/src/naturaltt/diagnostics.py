from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from naturaltt.syntax import Term


@dataclass(frozen=True)
class Span:
    line: int
    col: int
    end_line: int | None = None
    end_col: int | None = None

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


@dataclass
class Diagnostic:
    """A structured failure report from any phase of checking.

    ``path`` lists the modal rules whose zeroed-context premise was being
    checked when ``rule`` failed, outermost first; ``rule_path`` joins them.
    """

    rule: str
    message: str
    severity: str = "error"
    span: Span | None = None
    expected: Term | None = None
    actual: Term | None = None
    path: tuple[str, ...] = ()
    file: str | None = None

    @property
    def rule_path(self) -> str:
        return "/".join(self.path + (self.rule,))

    def full_message(self) -> str:
        from naturaltt.surface.pretty import pretty

        msg = self.message
        if self.expected is not None:
            msg += f"; expected {pretty(self.expected, annotations=False)}"
        if self.actual is not None:
            msg += f"; actual {pretty(self.actual, annotations=False)}"
        return msg

    def to_text(self) -> str:
        where = self.file or "<input>"
        if self.span is not None:
            where += f":{self.span.line}:{self.span.col}"
        return f"{where}: {self.severity} [{self.rule_path}] {self.full_message()}"

    def to_json(self) -> dict[str, Any]:
        return {
            "file": self.file,
            "line": self.span.line if self.span else None,
            "col": self.span.col if self.span else None,
            "rule": self.rule_path,
            "message": self.full_message(),
        }


class TypeCheckError(Exception):
    """Raised by the kernel and elaborator; carries one :class:`Diagnostic`."""

    def __init__(self, diagnostic: Diagnostic):
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic

    def __str__(self) -> str:
        return f"[{self.diagnostic.rule_path}] {self.diagnostic.full_message()}"


class FuelExhausted(TypeCheckError):
    def __init__(self):
        super().__init__(Diagnostic("fuel", "conversion fuel exhausted"))


def fail(rule: str, message: str, **kw: Any) -> TypeCheckError:
    return TypeCheckError(Diagnostic(rule, message, **kw))
