from naturaltt.admissible import (
    admissible_pre_counit,
    admissible_pre_unit,
    dull_subst,
    dull_subst_agrees,
    substitution,
    unzero_run,
    zeroes_to,
)
from naturaltt.kernel import Checker
from naturaltt.props import (
    LEMMAS,
    lemma_context_split,
    lemma_zc_idempotent,
    prop_dull_substitution,
    prop_pre_counit,
    prop_pre_unit,
    prop_substitution,
    run_suite,
    shrink_term,
)
from naturaltt.syntax import (
    BOOL,
    UNIV,
    App,
    MarkedVar,
    NatIntro,
    NatType,
    RawContext,
    Var,
    zero_context,
)


def rechecks(ctx, a, ty):
    ch = Checker()
    env = ch.check_ctx(ctx)
    ch.check_term(env, a, ty)


def test_pre_counit_on_a_variable():
    gamma = RawContext.of(("x", False, BOOL))
    ctx, a, ty = admissible_pre_counit(gamma, RawContext(), Var("x"), BOOL)
    assert ctx == RawContext.of(("x", True, BOOL))
    assert a == MarkedVar("x") and ty == BOOL
    rechecks(ctx, a, ty)


def test_pre_counit_zeroes_a_dependent_type():
    gamma = RawContext.of(("A", False, UNIV), ("x", False, Var("A")))
    ctx, a, ty = admissible_pre_counit(gamma, RawContext(), Var("x"), Var("A"))
    assert ty == MarkedVar("A")
    rechecks(ctx, a, ty)


def test_pre_counit_keeps_the_telescope_plain():
    gamma = RawContext.of(("A", False, UNIV))
    delta = RawContext.of(("y", False, Var("A")))
    ctx, a, ty = admissible_pre_counit(gamma, delta, Var("y"), Var("A"))
    assert not ctx[1].marked and ctx[1].ty == MarkedVar("A")
    rechecks(ctx, a, ty)


def test_pre_unit_is_silent():
    psi = RawContext.of(("b", False, BOOL))
    gamma = RawContext.of(("x", False, BOOL))
    t = NatIntro(MarkedVar("x"), BOOL)
    ctx, a, ty = admissible_pre_unit(psi, gamma, RawContext(), t, NatType(BOOL))
    assert a is t and ctx == psi + gamma
    rechecks(ctx, a, ty)


def test_zeroes_to_and_unzero_run():
    marked = RawContext.of(("x", True, BOOL))
    assert zeroes_to(unzero_run(marked), marked, ())
    assert zeroes_to(marked, zero_context(marked), ())


def test_substitution_replaces_plain_and_marked_uses():
    gamma = RawContext.of(("b", False, BOOL))
    c = App(Var("f"), MarkedVar("x"), BOOL, "_", BOOL)
    _, out, _ = substitution(gamma, "x", RawContext(), c, BOOL, Var("b"))
    assert out.arg == MarkedVar("b")


def test_dull_subst_agrees_for_dull_terms():
    gamma = RawContext.of(("b", False, BOOL))
    c = NatIntro(MarkedVar("x"), BOOL)
    a = MarkedVar("b")
    ctx, out, ty = dull_subst(gamma, "x", RawContext(), c, NatType(BOOL), a)
    assert dull_subst_agrees(c, a, "x")
    rechecks(ctx, out, ty)
    assert not dull_subst_agrees(Var("x"), Var("b"), "x")


def test_syntactic_lemmas_small_run():
    for lemma in LEMMAS:
        r = lemma(11, 300)
        assert r.ok and r.cases == 300, (r.name, r.example)


def test_admissible_rules_small_run():
    for prop in (prop_pre_counit, prop_pre_unit, prop_substitution, prop_dull_substitution):
        r = prop(5, 60)
        assert r.ok and r.cases == 60, (r.name, r.example)


def test_suite_is_deterministic():
    a = [(r.name, r.cases, r.failures) for r in run_suite(2, 20, 50)]
    b = [(r.name, r.cases, r.failures) for r in run_suite(2, 20, 50)]
    assert a == b


def test_results_report_counts():
    r = lemma_zc_idempotent(0, 10)
    assert r.line().startswith("ok") and "10 cases" in r.line()
    assert lemma_context_split(0, 10).ok


def test_shrinking_finds_a_minimal_failing_subterm():
    big = App(App(Var("f"), MarkedVar("x"), BOOL, "_", BOOL), Var("y"), BOOL, "_", BOOL)
    small = shrink_term(big, lambda t: "x" in t.free_vars)
    assert small == MarkedVar("x")
