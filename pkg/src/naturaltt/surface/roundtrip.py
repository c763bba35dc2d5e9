"""Printing then re-reading kernel terms, as a check on the parser and printer."""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from naturaltt.diagnostics import TypeCheckError
from naturaltt.driver import FileReport
from naturaltt.gen import JudgementGen, NoTerm
from naturaltt.kernel import Checker, Environment
from naturaltt.surface.elaborate import desugar
from naturaltt.surface.parser import parse_term
from naturaltt.surface.pretty import pretty
from naturaltt.syntax import Term, alpha_eq


@dataclass
class RoundTrip:
    cases: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def roundtrips(t: Term, expected: Term | None, checker: Checker,
               env: Environment | None = None) -> bool:
    """Whether ``t`` comes back alpha-equal after printing and re-elaborating."""
    try:
        back = desugar(parse_term(pretty(t)), expected, checker=checker, env=env)
    except TypeCheckError:
        return False
    return alpha_eq(back, t)


def roundtrip_report(report: FileReport, out: RoundTrip | None = None) -> RoundTrip:
    """Round-trip every checked type and term of a file."""
    out = out or RoundTrip()
    env = report.checker.empty()
    for c in report.checked:
        for t, expected in ((c.ty, None), *((x, c.ty) for x in c.terms)):
            out.cases += 1
            if not roundtrips(t, expected, report.checker, env):
                out.failures.append(f"{report.path}: {c.label}: {pretty(t)}")
    return out


def roundtrip_generated(seed: int, count: int, checker: Checker | None = None) -> RoundTrip:
    """Round-trip ``count`` terms and types drawn from generated judgements."""
    checker = checker or Checker()
    gen = JudgementGen(random.Random(seed))
    out = RoundTrip()
    while out.cases < count:
        try:
            j = gen.judgement()
        except NoTerm:
            continue
        env = checker.check_ctx(j.ctx)
        for t, expected in ((j.term, j.ty), (j.ty, None)):
            out.cases += 1
            if not roundtrips(t, expected, checker, env):
                out.failures.append(pretty(t))
    return out
