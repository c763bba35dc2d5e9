import pytest

from brute import SAMPLE_TYPES, base, fibre, fun, point, to_term, PB
from naturaltt.driver import check_file, model_report
from naturaltt.finmodel import (
    EMPTY,
    FragmentError,
    Model,
    ModelError,
    SemTerm,
    SemType,
    counit,
    eval_ctx,
    eval_term,
    eval_type,
    natural_ctx,
    oracle_check,
    sem_equal,
    unit,
)
from naturaltt.kernel import Checker
from naturaltt.syntax import (
    BOOL,
    UNIT,
    UNIV,
    App,
    Lam,
    MarkedVar,
    NatElim,
    NatIntro,
    NatType,
    RawContext,
    Var,
    arrow,
)


def test_function_space_cardinalities_match_brute_force():
    m = Model()
    ty = to_term(fun(PB, PB))
    assert len(base(fun(PB, PB))) == 2
    assert len(m.base(ty, EMPTY)) == 2
    for a in m.base(ty, EMPTY):
        assert len(m.fibre(ty, EMPTY, a)) == 4


@pytest.mark.parametrize("t", SAMPLE_TYPES, ids=str)
def test_cardinalities_agree_with_brute_force(t):
    m = Model()
    ty = to_term(t)
    ours = m.base(ty, EMPTY)
    assert len(ours) == len(base(t))
    assert sorted(len(m.fibre(ty, EMPTY, a)) for a in ours) == sorted(
        len(fibre(t, x)) for x in base(t))


@pytest.mark.parametrize("t", SAMPLE_TYPES, ids=str)
def test_points_lie_in_their_fibres(t):
    m = Model()
    ty = to_term(t)
    for a in m.base(ty, EMPTY):
        assert m.point(ty, EMPTY, a) in m.fibre(ty, EMPTY, a)
    for x in base(t):
        assert point(t, x) in fibre(t, x)


@pytest.mark.parametrize("t", SAMPLE_TYPES, ids=str)
def test_natural_fibres_are_singletons(t):
    m = Model()
    nat = NatType(to_term(t))
    for a in m.base(nat, EMPTY):
        assert len(m.fibre(nat, EMPTY, a)) == 1


def test_context_of_a_plain_boolean():
    fam = eval_ctx(RawContext.of(("x", False, BOOL)))
    assert len(fam.base) == 1
    assert len(fam.fibre[fam.base[0]]) == 2


def test_marked_entry_has_a_point_fibre():
    fam = eval_ctx(RawContext.of(("x", True, BOOL)))
    assert all(len(fam.fibre[g]) == 1 for g in fam.base)


def test_counit_after_unit_is_identity_on_natural_context():
    ctx = eval_ctx(RawContext.of(("f", False, arrow(BOOL, BOOL)), ("x", False, BOOL)))
    nat = natural_ctx(ctx)
    assert counit(ctx, nat).then(unit(ctx, nat)).is_identity()
    assert counit(ctx, nat).is_pointed() and unit(ctx, nat).is_pointed()


def test_unit_after_counit_is_not_identity_on_non_trivial_context():
    ctx = eval_ctx(RawContext.of(("x", False, BOOL)))
    nat = natural_ctx(ctx)
    assert not unit(ctx, nat).then(counit(ctx, nat)).is_identity()


def test_base_values_ignore_fibres():
    ctx_raw = RawContext.of(("f", False, arrow(BOOL, BOOL)), ("x", False, BOOL))
    fam = eval_ctx(ctx_raw)
    m = fam.model
    t = App(Var("f"), Var("x"), BOOL, "_", BOOL)
    for g in fam.base:
        values = {m.tbase(t, fam.vals[(g, e)]) for e in fam.fibre[g]}
        assert len(values) == 1


def test_plain_and_marked_variable_differ():
    ch = Checker()
    env = ch.check_ctx(RawContext.of(("x", False, BOOL)))
    assert oracle_check(env, Var("x"), MarkedVar("x"), BOOL) == "false"


def test_natural_beta_is_true():
    ch = Checker()
    env = ch.check_ctx(RawContext.of(("x", False, BOOL)))
    lhs = NatElim(NatIntro(MarkedVar("x"), BOOL), BOOL)
    assert oracle_check(env, lhs, MarkedVar("x"), BOOL) == "true"


def test_natural_eta_is_true():
    ch = Checker()
    env = ch.check_ctx(RawContext.of(("n", False, NatType(BOOL))))
    lhs = NatIntro(NatElim(MarkedVar("n"), BOOL), BOOL)
    assert oracle_check(env, lhs, Var("n"), NatType(BOOL)) == "true"


def test_universe_is_skipped():
    ch = Checker()
    env = ch.check_ctx(RawContext.of(("A", False, UNIV)))
    assert oracle_check(env, Var("A"), Var("A"), UNIV) == "skipped"


def test_enumeration_limit_skips():
    ch = Checker()
    env = ch.check_ctx(RawContext.of(("f", False, arrow(BOOL, arrow(BOOL, BOOL)))))
    assert oracle_check(env, Var("f"), Var("f"), arrow(BOOL, arrow(BOOL, BOOL)), limit=4) == "skipped"


def test_sem_term_rejects_unpointed_tables():
    fam = eval_ctx(RawContext.of(("x", False, BOOL)))
    st = SemType(fam, BOOL)
    g = fam.base[0]
    homup = {(g, e): False for e in fam.fibre[g]}
    with pytest.raises(ModelError):
        SemTerm(st, {g: "*"}, homup)


def test_eval_type_and_term_agree():
    fam = eval_ctx(RawContext.of(("x", False, BOOL)))
    eval_type(fam, arrow(BOOL, BOOL))
    ident = Lam("y", BOOL, Var("y"), BOOL)
    a = eval_term(fam, App(ident, Var("x"), BOOL, "_", BOOL), BOOL)
    b = eval_term(fam, Var("x"), BOOL)
    assert sem_equal(a, b)


def test_postulates_are_out_of_fragment():
    from naturaltt.kernel import GlobalDef
    from naturaltt.syntax import Const

    m = Model()
    m.signature.add(GlobalDef("c", BOOL))
    with pytest.raises(FragmentError):
        m.tbase(Const("c"), EMPTY)


def test_unit_type_is_a_single_point():
    m = Model()
    assert m.base(UNIT, EMPTY) == ["*"] and m.fibre(UNIT, EMPTY, "*") == ["*"]


def test_corpus_equations_hold_in_the_model(stdlib):
    for path in sorted(stdlib.glob("*.ntt")):
        report = check_file(path)
        assert report.ok
        for r in model_report(report):
            assert not r.violation, (path.name, r.label)
            if r.converts:
                assert r.verdict in ("true", "skipped"), (path.name, r.label)


def test_model_only_equations_are_decided(stdlib):
    verdicts = [r.verdict for r in model_report(check_file(stdlib / "model.ntt"))]
    assert verdicts == ["false", "true", "false"]
