"""Admissible rules as executable transformations on judgements.

Each function maps the raw components of a premise judgement to those of
the conclusion.  None of them consults the kernel; callers re-check the
output to test admissibility instead of assuming it.
"""
from __future__ import annotations

from naturaltt.syntax import (
    Entry,
    RawContext,
    Term,
    alpha_eq,
    subst,
    zero,
    zero_context,
    zero_telescope,
    zero_term,
)


def admissible_pre_counit(gamma: RawContext, delta: RawContext, a: Term, ty: Term
                          ) -> tuple[RawContext, Term, Term]:
    """From ``Gamma, Delta |- a : A`` to ``zc(Gamma), Delta^0 |- a^0 : A^0``, zeroing over Gamma."""
    scope = gamma.dom()
    ctx = zero_context(gamma) + zero_telescope(delta, scope)
    return ctx, zero_term(a, scope), zero_term(ty, scope)


def admissible_pre_unit(psi: RawContext, gamma: RawContext, delta: RawContext, a: Term, ty: Term
                        ) -> tuple[RawContext, Term, Term]:
    """From ``Psi, zc(Gamma), Delta |- a : A`` to ``Psi, Gamma, Delta |- a : A``.

    The rule is silent: only the context changes.
    """
    return psi + gamma + delta, a, ty


def zeroes_to(gamma: RawContext, marked: RawContext, outer: tuple[str, ...]) -> bool:
    """Whether ``zc(gamma)`` after ``outer`` is ``marked`` up to alpha-equivalence."""
    z = zero_context(gamma, outer)
    return len(z) == len(marked) and all(
        e.name == m.name and e.marked == m.marked and alpha_eq(e.ty, m.ty)
        for e, m in zip(z, marked))


def unzero_run(marked: RawContext) -> RawContext:
    """The simplest preimage of a zeroed segment: the same entries, unmarked."""
    return RawContext(tuple(Entry(e.name, False, e.ty) for e in marked))


def substitute_ctx(delta: RawContext, a: Term, x: str) -> RawContext:
    return RawContext(tuple(Entry(e.name, e.marked, subst(e.ty, {x: a})) for e in delta))


def substitution(gamma: RawContext, x: str, delta: RawContext, c: Term, ty: Term, a: Term
                 ) -> tuple[RawContext, Term, Term]:
    """From ``Gamma, x : A, Delta |- c : C`` and ``Gamma |- a : A`` to the substituted judgement."""
    return gamma + substitute_ctx(delta, a, x), subst(c, {x: a}), subst(ty, {x: a})


def dull_subst(gamma: RawContext, x: str, delta: RawContext, c: Term, ty: Term, a: Term
               ) -> tuple[RawContext, Term, Term]:
    """From ``Gamma, ~x :: A, Delta |- c : C`` and ``zc(Gamma) |- a : A``.

    Substituting a dull term for a marked variable is ordinary substitution,
    because ``zero(a)`` and ``a`` coincide for dull ``a``.
    """
    return substitution(gamma, x, delta, c, ty, a)


def dull_subst_agrees(c: Term, a: Term, x: str) -> bool:
    """``c[zero(a)/x]`` and ``c[a/x]`` agree; holds whenever ``a`` is dull."""
    return alpha_eq(subst(c, {x: zero(a)}), subst(c, {x: a}))
