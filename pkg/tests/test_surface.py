import pytest

from naturaltt.diagnostics import TypeCheckError
from naturaltt.driver import check_file, check_text
from naturaltt.kernel import Checker
from naturaltt.surface import ast as S
from naturaltt.surface import desugar, parse, parse_term, pretty
from naturaltt.surface.roundtrip import RoundTrip, roundtrip_generated, roundtrip_report
from naturaltt.syntax import (
    BOOL,
    UNIT,
    Lam,
    MarkedVar,
    NatElim,
    NatIntro,
    NatType,
    Pi,
    RawContext,
    alpha_eq,
)


def test_parse_marked_and_natural_forms():
    assert parse_term("~x") == S.SMarked("x")
    assert parse_term("%(PB)") == S.SNat(S.SConst("PB"))
    assert parse_term("up(~x)") == S.SUp(S.SMarked("x"))
    assert isinstance(parse_term("dn(n)"), S.SDn)


def test_parse_dull_binder():
    t = parse_term("Pi (~x :: PB) , PB")
    assert isinstance(t, S.SPi) and t.binder.marked


def test_arrow_is_right_associative():
    t = parse_term("PB -> PB -> PB")
    assert isinstance(t, S.SArrow) and isinstance(t.cod, S.SArrow)


def test_parse_reports_position():
    with pytest.raises(TypeCheckError) as e:
        parse("def bad : PB := (fun x => ;", "f.ntt")
    d = e.value.diagnostic
    assert d.rule == "syntax" and d.span.line == 1


def test_duplicate_definition_is_rejected():
    with pytest.raises(TypeCheckError):
        parse("def a : PB -> PB := fun x => x ;\ndef a : PB -> PB := fun x => x ;")


def test_comments_are_ignored():
    src = parse("-- a comment\ndef a : PB -> PB := fun x => x ; -- trailing\n")
    assert len(src.decls) == 1


def test_dull_pi_desugars_to_natural_domain():
    t = desugar(parse_term("Pi (~x :: PB) , PB"))
    assert isinstance(t, Pi) and t.dom == NatType(BOOL)


def test_dull_binder_use_becomes_counit():
    t = desugar(parse_term("fun ~x => ~x"), Pi("x", NatType(BOOL), BOOL))
    assert isinstance(t, Lam)
    assert alpha_eq(t.body, NatElim(MarkedVar(t.var), BOOL))


def test_dull_application_inserts_up():
    report = check_text("def dull_id : Pi (~x :: PB) , PB := fun ~x => ~x ;\n"
                        "def use : PB -> PB := fun y => dull_id (~y) ;")
    assert report.ok
    body = report.checked[1].terms[0]
    assert isinstance(body.body.arg, NatIntro)


def test_pretty_prints_arrows_for_unused_binders():
    assert pretty(Pi("x", BOOL, UNIT), annotations=False) == "PB -> Unit"


def test_pretty_marked_variable():
    assert pretty(MarkedVar("x")) == "~x"


def test_pretty_then_parse_in_context():
    ch = Checker()
    env = ch.check_ctx(RawContext.of(("x", False, BOOL)))
    t = NatIntro(MarkedVar("x"), BOOL)
    back = desugar(parse_term(pretty(t)), NatType(BOOL), checker=ch, env=env)
    assert alpha_eq(back, t)


def test_let_flat_checks():
    report = check_text(
        "def f : %(PB) -> %(PB) := fun n => let up(~u) = n in up(~u) ;")
    assert report.ok, [d.to_text() for d in report.diagnostics]


def test_corpus_roundtrips(stdlib):
    out = RoundTrip()
    for path in sorted(stdlib.glob("*.ntt")):
        roundtrip_report(check_file(path), out)
    assert out.cases > 100
    assert out.ok, out.failures


def test_generated_terms_roundtrip():
    out = roundtrip_generated(seed=3, count=400)
    assert out.ok, out.failures[:5]
