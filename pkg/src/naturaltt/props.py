"""Generative property suite for the syntactic lemmas and admissible rules.

Every property draws its own inputs from a seeded generator, so a run is
reproducible from ``(seed, count)``.  A failing raw-syntax property is
shrunk to a smaller counterexample before it is reported.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Callable, Iterator

from naturaltt.admissible import (
    admissible_pre_counit,
    admissible_pre_unit,
    dull_subst,
    dull_subst_agrees,
    substitution,
)
from naturaltt.diagnostics import TypeCheckError
from naturaltt.gen import Judgement, JudgementGen, NoTerm, RawGen
from naturaltt.kernel import Checker
from naturaltt.surface.pretty import pretty
from naturaltt.syntax import (
    RawContext,
    Term,
    alpha_eq,
    subst,
    zero_context,
    zero_telescope,
    zero_term,
)


@dataclass
class PropResult:
    name: str
    cases: int = 0
    failures: int = 0
    example: str | None = None

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def line(self) -> str:
        status = "ok" if self.ok else "FAIL"
        return f"{status:4} {self.name}: {self.cases} cases, {self.failures} failures"


def ctx_eq(a: RawContext, b: RawContext) -> bool:
    return len(a) == len(b) and all(
        x.name == y.name and x.marked == y.marked and alpha_eq(x.ty, y.ty) for x, y in zip(a, b))


def show_ctx(ctx: RawContext) -> str:
    parts = [f"~{e.name} :: {pretty(e.ty, False)}" if e.marked else f"{e.name} : {pretty(e.ty, False)}"
             for e in ctx]
    return ", ".join(parts) or "."


# ---------------------------------------------------------------------------
# shrinking


def term_candidates(t: Term) -> Iterator[Term]:
    """Smaller variants of ``t``: its subterms, then ``t`` with one child shrunk."""
    subs = list(t.subterms())
    yield from subs
    for name, _ in t._SHAPE:
        for smaller in term_candidates(getattr(t, name)):
            yield replace(t, **{name: smaller})


def shrink_term(t: Term, fails: Callable[[Term], bool], budget: int = 2000) -> Term:
    """Greedy shrinking: move to the first smaller candidate that still fails."""
    progress = True
    while progress and budget > 0:
        progress = False
        for c in term_candidates(t):
            budget -= 1
            if budget <= 0:
                break
            if c.size < t.size and fails(c):
                t, progress = c, True
                break
    return t


# ---------------------------------------------------------------------------
# syntactic lemmas over raw syntax


def _scopes(rng: random.Random, raw: RawGen) -> tuple[list[str], list[str]]:
    names = list(dict.fromkeys(raw.name() for _ in range(rng.randrange(1, 7))))
    k = rng.randrange(len(names) + 1)
    return names[:k], names[k:]


def lemma_zc_idempotent(seed: int, count: int) -> PropResult:
    rng = random.Random(seed)
    raw = RawGen(rng)
    res = PropResult("zc idempotent")
    for _ in range(count):
        ctx = raw.context()
        res.cases += 1
        z = zero_context(ctx)
        if not ctx_eq(zero_context(z), z):
            res.failures += 1
            res.example = res.example or show_ctx(ctx)
    return res


def lemma_context_split(seed: int, count: int) -> PropResult:
    rng = random.Random(seed)
    raw = RawGen(rng)
    res = PropResult("zc(Psi,Gamma,Delta) = zc(Psi,zc(Gamma),Delta^0Gamma)")
    for _ in range(count):
        psi = raw.context()
        gamma = raw.context(outer=list(psi.dom()))
        delta = raw.context(outer=list(psi.dom() + gamma.dom()))
        res.cases += 1
        lhs = zero_context(psi + gamma + delta)
        rhs = zero_context(psi + zero_context(gamma, psi.dom()) + zero_telescope(delta, gamma.dom()))
        if not ctx_eq(lhs, rhs):
            res.failures += 1
            res.example = res.example or " | ".join(map(show_ctx, (psi, gamma, delta)))
    return res


def _raw_lemma(name: str, seed: int, count: int,
               draw: Callable[[random.Random, RawGen], tuple],
               holds: Callable[..., bool], show: Callable[..., str]) -> PropResult:
    rng = random.Random(seed)
    raw = RawGen(rng)
    res = PropResult(name)
    for _ in range(count):
        case = draw(rng, raw)
        res.cases += 1
        if holds(*case):
            continue
        res.failures += 1
        if res.example is None:
            t, *rest = case
            small = shrink_term(t, lambda c: not holds(c, *rest))
            res.example = show(small, *rest)
    return res


def lemma_zero_idempotent(seed: int, count: int) -> PropResult:
    def draw(rng, raw):
        g, d = _scopes(rng, raw)
        return raw.term(g + d), g, d

    def holds(a, g, d):
        both = zero_term(a, g + d)
        return alpha_eq(zero_term(zero_term(a, g), g + d), both) and alpha_eq(zero_term(both, g), both)

    return _raw_lemma("prefix zeroing idempotent", seed, count, draw, holds,
                      lambda a, g, d: f"a = {pretty(a)}, gamma = {g}, delta = {d}")


def lemma_zero_weakening(seed: int, count: int) -> PropResult:
    def draw(rng, raw):
        g, d = _scopes(rng, raw)
        return raw.term(g), g, d

    def holds(a, g, d):
        if not a.free_vars <= set(g):
            return True
        return alpha_eq(zero_term(a, g), zero_term(a, g + d))

    return _raw_lemma("zeroing commutes with weakening", seed, count, draw, holds,
                      lambda a, g, d: f"a = {pretty(a)}, gamma = {g}, delta = {d}")


def lemma_zero_subst(seed: int, count: int) -> PropResult:
    def draw(rng, raw):
        g, rest = _scopes(rng, raw)
        x = raw.name()
        g = [n for n in g if n != x]
        scope = g + rest + [x]
        return raw.term(scope), raw.term(scope), x, g

    def holds(b, a, x, g):
        lhs = zero_term(subst(b, {x: a}), g)
        rhs = subst(zero_term(b, g), {x: zero_term(a, g)})
        return alpha_eq(lhs, rhs)

    return _raw_lemma("zeroing commutes with substitution", seed, count, draw, holds,
                      lambda b, a, x, g: f"b = {pretty(b)}, a = {pretty(a)}, x = {x}, gamma = {g}")


def lemma_capture_avoiding(seed: int, count: int) -> PropResult:
    def draw(rng, raw):
        scope = list(dict.fromkeys(raw.name() for _ in range(4)))
        return raw.term(scope), raw.term(scope), rng.choice(scope)

    def holds(b, a, x):
        out = subst(b, {x: a})
        expected = (b.free_vars - {x}) | (a.free_vars if x in b.free_vars else frozenset())
        return out.free_vars == expected

    return _raw_lemma("substitution avoids capture", seed, count, draw, holds,
                      lambda b, a, x: f"b = {pretty(b)}, a = {pretty(a)}, x = {x}")


def lemma_dull_fixpoint(seed: int, count: int, checker: Checker | None = None,
                        recheck_every: int = 10) -> PropResult:
    """``a^{0 dom Gamma} = a`` whenever ``zc(Gamma) |- a : A``.

    Every ``recheck_every``-th judgement is also confirmed by the kernel, so
    the property is not only about what the generator happens to produce.
    """
    checker = checker or Checker()
    rng = random.Random(seed)
    gen = JudgementGen(rng)
    res = PropResult("dull terms are fixed by zeroing")
    while res.cases < count:
        ctx = gen.context()
        z = zero_context(ctx)
        try:
            j = gen.judgement(z, depth=2)
        except NoTerm:
            continue
        if res.cases % recheck_every == 0:
            try:
                env = checker.check_ctx(z)
                checker.check_term(env, j.term, j.ty)
            except TypeCheckError as e:
                res.failures += 1
                res.example = res.example or f"generated judgement rejected: {e}"
        res.cases += 1
        if not alpha_eq(zero_term(j.term, ctx.dom()), j.term):
            res.failures += 1
            res.example = res.example or f"{show_ctx(z)} |- {pretty(j.term)}"
    return res


LEMMAS = (
    lemma_zc_idempotent,
    lemma_context_split,
    lemma_zero_idempotent,
    lemma_zero_weakening,
    lemma_zero_subst,
    lemma_capture_avoiding,
    lemma_dull_fixpoint,
)


# ---------------------------------------------------------------------------
# admissible rules over well-typed judgements


def _rechecks(checker: Checker, ctx: RawContext, a: Term, ty: Term) -> str | None:
    """None when ``ctx |- a : ty`` checks, else the kernel's complaint."""
    try:
        env = checker.check_ctx(ctx)
        checker.check_type(env, ty)
        checker.check_term(env, a, ty)
    except TypeCheckError as e:
        return str(e)
    return None


def _report(res: PropResult, premise: Judgement, conclusion, why: str) -> None:
    res.failures += 1
    if res.example is None:
        ctx, a, ty = conclusion
        res.example = (f"premise {show_ctx(premise.ctx)} |- {pretty(premise.term)} : {pretty(premise.ty)}"
                       f"; conclusion {show_ctx(ctx)} |- {pretty(a)} : {pretty(ty)}; {why}")


def prop_pre_counit(seed: int, count: int, checker: Checker | None = None) -> PropResult:
    checker = checker or Checker()
    rng = random.Random(seed)
    gen = JudgementGen(rng)
    res = PropResult("pre-counit")
    while res.cases < count:
        try:
            j = gen.judgement()
        except NoTerm:
            continue
        k = rng.randrange(len(j.ctx) + 1)
        out = admissible_pre_counit(j.ctx[:k], j.ctx[k:], j.term, j.ty)
        res.cases += 1
        why = _rechecks(checker, *out)
        if why:
            _report(res, j, out, why)
    return res


def prop_pre_unit(seed: int, count: int, checker: Checker | None = None) -> PropResult:
    """Zero a segment, build a judgement over it, then put the segment back."""
    checker = checker or Checker()
    rng = random.Random(seed)
    gen = JudgementGen(rng)
    res = PropResult("pre-unit")
    while res.cases < count:
        psi = gen.context()
        gamma = gen.context(base=psi)[len(psi):]
        zeroed = zero_context(gamma, psi.dom())
        premise_ctx = gen.context(rng.randrange(3), base=psi + zeroed)
        delta = premise_ctx[len(psi) + len(gamma):]
        try:
            j = gen.judgement(premise_ctx)
        except NoTerm:
            continue
        res.cases += 1
        out = admissible_pre_unit(psi, gamma, delta, j.term, j.ty)
        if not (alpha_eq(out[1], j.term) and alpha_eq(out[2], j.ty)):
            _report(res, j, out, "pre-unit changed the raw syntax")
            continue
        why = _rechecks(checker, *out)
        if why:
            _report(res, j, out, why)
    return res


def _subst_case(gen: JudgementGen, rng: random.Random, marked: bool):
    gamma = gen.context()
    where = zero_context(gamma) if marked else gamma
    ty = gen.type(where, 2)
    x = gen.fresh(gamma)
    delta = gen.context(rng.randrange(3), base=gamma.extend(x, ty, marked))[len(gamma) + 1:]
    full = gamma.extend(x, ty, marked) + delta
    j = None
    for _ in range(5):
        j = gen.judgement(full)
        if x in j.term.free_vars:
            break
    a = gen.check(where, ty, 2)
    return gamma, x, delta, j, a


def prop_substitution(seed: int, count: int, checker: Checker | None = None,
                      marked: bool = False) -> PropResult:
    checker = checker or Checker()
    rng = random.Random(seed)
    gen = JudgementGen(rng)
    res = PropResult("dull substitution" if marked else "substitution")
    while res.cases < count:
        try:
            gamma, x, delta, j, a = _subst_case(gen, rng, marked)
        except NoTerm:
            continue
        res.cases += 1
        rule = dull_subst if marked else substitution
        out = rule(gamma, x, delta, j.term, j.ty, a)
        why = _rechecks(checker, *out)
        if marked and not why and not dull_subst_agrees(j.term, a, x):
            why = "c[zero(a)/x] and c[a/x] differ"
        if why:
            _report(res, j, out, f"a = {pretty(a)}; {why}")
    return res


def prop_dull_substitution(seed: int, count: int, checker: Checker | None = None) -> PropResult:
    return prop_substitution(seed, count, checker, marked=True)


ADMISSIBLE = (prop_pre_counit, prop_pre_unit, prop_dull_substitution, prop_substitution)


def run_suite(seed: int = 0, count: int = 500, lemma_count: int = 10_000,
              checker: Checker | None = None) -> list[PropResult]:
    checker = checker or Checker()
    out = []
    for i, lemma in enumerate(LEMMAS):
        if lemma is lemma_dull_fixpoint:
            out.append(lemma(seed + i, lemma_count, checker))
        else:
            out.append(lemma(seed + i, lemma_count))
    for i, prop in enumerate(ADMISSIBLE):
        out.append(prop(seed + 100 + i, count, checker))
    return out
