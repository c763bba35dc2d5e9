import pytest

from naturaltt.diagnostics import FuelExhausted, TypeCheckError
from naturaltt.kernel import Checker, GlobalDef
from naturaltt.syntax import (
    BOOL,
    TT,
    UNIT,
    UNIV,
    App,
    Const,
    Fst,
    Id,
    J,
    Lam,
    MarkedVar,
    NatElim,
    NatIntro,
    NatType,
    Pair,
    Pi,
    RawContext,
    Refl,
    Sig,
    Snd,
    Var,
    alpha_eq,
    arrow,
)


def env_of(checker, *entries):
    return checker.check_ctx(RawContext.of(*entries))


def rule_of(exc) -> str:
    return exc.value.diagnostic.rule_path


def test_plain_variable_has_its_declared_type():
    ch = Checker()
    env = env_of(ch, ("x", False, BOOL))
    assert ch.infer_term(env, Var("x")) == BOOL


def test_marked_entry_rejects_plain_use():
    ch = Checker()
    env = env_of(ch, ("x", True, BOOL))
    with pytest.raises(TypeCheckError) as e:
        ch.infer_term(env, Var("x"))
    assert rule_of(e) == "var-zero"
    assert ch.infer_term(env, MarkedVar("x")) == BOOL


def test_marked_use_of_plain_entry_zeroes_its_type():
    ch = Checker()
    env = env_of(ch, ("A", False, UNIV), ("x", False, Var("A")))
    assert ch.infer_term(env, MarkedVar("x")) == MarkedVar("A")


def test_marked_entry_type_is_checked_in_zeroed_context():
    ch = Checker()
    with pytest.raises(TypeCheckError) as e:
        env_of(ch, ("A", False, UNIV), ("x", True, Var("A")))
    assert rule_of(e) == "ctx-ext-zero/var-zero"


def test_nat_intro_needs_a_dull_body():
    ch = Checker()
    env = env_of(ch, ("x", False, BOOL))
    assert ch.infer_term(env, NatIntro(MarkedVar("x"), BOOL)) == NatType(BOOL)
    with pytest.raises(TypeCheckError) as e:
        ch.infer_term(env, NatIntro(Var("x"), BOOL))
    assert rule_of(e) == "nat-intro/var-zero"


def test_nat_elim_accepts_plain_argument_at_dull_type():
    ch = Checker()
    env = env_of(ch, ("n", False, NatType(BOOL)))
    assert ch.infer_term(env, NatElim(Var("n"), BOOL)) == BOOL


def test_nat_form_needs_a_dull_type():
    ch = Checker()
    env = env_of(ch, ("A", False, UNIV))
    ch.check_type(env, NatType(MarkedVar("A")))
    with pytest.raises(TypeCheckError) as e:
        ch.check_type(env, NatType(Var("A")))
    assert rule_of(e) == "nat-form/var-zero"


def test_nat_beta_and_eta_convert():
    ch = Checker()
    env = env_of(ch, ("x", False, BOOL), ("n", False, NatType(BOOL)))
    assert ch.convert(env, NatElim(NatIntro(MarkedVar("x"), BOOL), BOOL), MarkedVar("x"), BOOL)
    assert ch.convert(env, NatIntro(NatElim(MarkedVar("n"), BOOL), BOOL), Var("n"), NatType(BOOL))


def test_zero_in_natural_converts():
    ch = Checker()
    env = env_of(ch, ("n", False, NatType(BOOL)))
    assert ch.convert(env, Var("n"), MarkedVar("n"), NatType(BOOL))


def test_plain_and_marked_use_differ_at_non_natural_type():
    ch = Checker()
    env = env_of(ch, ("x", False, BOOL))
    assert not ch.convert(env, Var("x"), MarkedVar("x"), BOOL)


def test_pi_beta_and_eta():
    ch = Checker()
    env = env_of(ch, ("f", False, arrow(BOOL, BOOL)), ("b", False, BOOL))
    ident = Lam("y", BOOL, Var("y"), BOOL)
    assert ch.convert(env, App(ident, Var("b"), BOOL, "_", BOOL), Var("b"), BOOL)
    eta = Lam("y", BOOL, App(Var("f"), Var("y"), BOOL, "_", BOOL), BOOL)
    assert ch.convert(env, eta, Var("f"), arrow(BOOL, BOOL))


def test_sigma_projections_and_eta():
    ch = Checker()
    sig = Sig("a", BOOL, UNIT)
    env = env_of(ch, ("p", False, sig), ("b", False, BOOL))
    pair = Pair(Var("b"), TT, BOOL, "a", UNIT)
    assert ch.convert(env, Fst(pair, BOOL, "a", UNIT), Var("b"), BOOL)
    assert ch.convert(env, Snd(pair, BOOL, "a", UNIT), TT, UNIT)
    rebuilt = Pair(Fst(Var("p"), BOOL, "a", UNIT), Snd(Var("p"), BOOL, "a", UNIT), BOOL, "a", UNIT)
    assert ch.convert(env, rebuilt, Var("p"), sig)


def test_unit_eta():
    ch = Checker()
    env = env_of(ch, ("u", False, UNIT))
    assert ch.convert(env, Var("u"), TT, UNIT)


def test_j_computes_on_refl():
    ch = Checker()
    env = env_of(ch, ("b", False, BOOL))
    j = J(BOOL, Var("b"), Var("b"), "y", "p", BOOL, Var("b"), Refl(BOOL, Var("b")))
    assert ch.infer_term(env, j) == BOOL
    assert alpha_eq(ch.whnf(env, j), Var("b"))


def test_refl_needs_convertible_endpoints():
    ch = Checker()
    env = env_of(ch, ("b", False, BOOL), ("c", False, BOOL))
    ch.check_term(env, Refl(BOOL, Var("b")), Id(BOOL, Var("b"), Var("b")))
    with pytest.raises(TypeCheckError):
        ch.check_term(env, Refl(BOOL, Var("b")), Id(BOOL, Var("b"), Var("c")))


def test_definitions_unfold_and_postulates_stay_neutral():
    ch = Checker()
    ch.signature.add(GlobalDef("idB", arrow(BOOL, BOOL), Lam("y", BOOL, Var("y"), BOOL)))
    ch.signature.add(GlobalDef("c", BOOL))
    env = ch.empty()
    assert alpha_eq(ch.whnf(env, App(Const("idB"), Const("c"), BOOL, "_", BOOL)), Const("c"))


def test_type_in_type_can_be_switched_off():
    assert Checker().infer_term(Checker().empty(), UNIV) == UNIV
    ch = Checker(type_in_type=False)
    with pytest.raises(TypeCheckError):
        ch.infer_term(ch.empty(), UNIV)


def test_fuel_exhaustion_is_reported():
    ch = Checker(fuel=3)
    ch.signature.add(GlobalDef("a", BOOL, Const("b")))
    ch.signature.add(GlobalDef("b", BOOL, Const("c")))
    ch.signature.add(GlobalDef("c", BOOL, Const("d")))
    ch.signature.add(GlobalDef("d", BOOL, Const("e")))
    ch.signature.add(GlobalDef("e", BOOL))
    with pytest.raises(FuelExhausted):
        ch.whnf(ch.empty(), Const("a"))


def test_normalize_contracts_natural_eta_on_plain_variables():
    ch = Checker()
    env = env_of(ch, ("n", False, NatType(BOOL)))
    assert ch.normalize(env, NatIntro(NatElim(MarkedVar("n"), BOOL), BOOL)) == Var("n")


def test_normalize_keeps_roundtrip_of_marked_entry():
    ch = Checker()
    env = env_of(ch, ("n", True, NatType(BOOL)))
    t = NatIntro(NatElim(MarkedVar("n"), BOOL), BOOL)
    assert ch.normalize(env, t) == t


def test_lambda_checks_against_pi():
    ch = Checker()
    lam = Lam("x", NatType(BOOL), NatElim(MarkedVar("x"), BOOL), BOOL)
    ch.check_term(ch.empty(), lam, Pi("x", NatType(BOOL), BOOL))
