"""The six acceptance criteria, one test each, each printing a PASS/FAIL line.

Run directly (``python tests/test_acceptance.py``) to get only the six lines.
"""
from __future__ import annotations

import io
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from brute import PB, base, fibre, fun, to_term  # noqa: E402
from conftest import ACCEPTANCE, NEGATIVE, STDLIB, expected_rule  # noqa: E402
from naturaltt.cli import main  # noqa: E402
from naturaltt.driver import check_file, model_report  # noqa: E402
from naturaltt.finmodel import EMPTY, Model  # noqa: E402
from naturaltt.props import (  # noqa: E402
    ADMISSIBLE,
    LEMMAS,
    lemma_dull_fixpoint,
)
from naturaltt.surface import ast as S  # noqa: E402
from naturaltt.surface.roundtrip import RoundTrip, roundtrip_generated, roundtrip_report  # noqa: E402

LEMMA_COUNT = 10_000
JUDGEMENT_COUNT = 500
ROUNDTRIP_COUNT = 10_000


def report(number: int, title: str, ok: bool, detail: str, started: float) -> None:
    line = f"{'PASS' if ok else 'FAIL'} {number}. {title}: {detail} ({time.perf_counter() - started:.1f}s)"
    ACCEPTANCE.append(line)
    print(line)


def cli(*argv) -> tuple[int, str]:
    out = io.StringIO()
    code = main([str(a) for a in argv], out, io.StringIO())
    return code, out.getvalue()


def corpus() -> list[Path]:
    return sorted(STDLIB.glob("*.ntt"))


def test_1_definitional_corpus():
    t0 = time.perf_counter()
    code, _ = cli("check", *corpus())
    equations = failed = 0
    for path in corpus():
        rep = check_file(path)
        failed += len(rep.diagnostics)
        equations += sum(isinstance(c.decl, S.Eq) and not c.decl.model_only and c.converts
                         for c in rep.checked)
    ok = code == 0 and failed == 0 and equations >= 25
    report(1, "definitional corpus", ok,
           f"{equations} eq declarations convert, exit code {code}", t0)
    assert ok


def test_2_syntactic_lemmas():
    t0 = time.perf_counter()
    results = [lemma(i, LEMMA_COUNT) for i, lemma in enumerate(LEMMAS)]
    ok = all(r.ok and r.cases >= LEMMA_COUNT for r in results)
    detail = f"{len(results)} lemmas x {LEMMA_COUNT} instances, " \
             f"{sum(r.failures for r in results)} failures"
    report(2, "syntactic lemma suite", ok, detail, t0)
    assert lemma_dull_fixpoint in LEMMAS
    assert ok, [(r.name, r.example) for r in results if not r.ok]


def test_3_admissibility():
    t0 = time.perf_counter()
    results = [prop(100 + i, JUDGEMENT_COUNT) for i, prop in enumerate(ADMISSIBLE)]
    ok = all(r.ok and r.cases >= JUDGEMENT_COUNT for r in results)
    names = ", ".join(r.name for r in results)
    detail = f"{names} x {JUDGEMENT_COUNT} judgements, {sum(r.failures for r in results)} failures"
    report(3, "admissibility suite", ok, detail, t0)
    assert ok, [(r.name, r.example) for r in results if not r.ok]


def test_4_oracle_soundness():
    t0 = time.perf_counter()
    true = skipped = bad = 0
    for path in corpus():
        for r in model_report(check_file(path)):
            if not r.converts:
                continue
            if r.verdict == "true":
                true += 1
            elif r.verdict == "skipped":
                skipped += 1
            else:
                bad += 1
    m = Model()
    ty = to_term(fun(PB, PB))
    ours = m.base(ty, EMPTY)
    brute_base = base(fun(PB, PB))
    sizes_ok = (len(brute_base) == len(ours) == 2
                and {len(fibre(fun(PB, PB), x)) for x in brute_base} == {4}
                and {len(m.fibre(ty, EMPTY, a)) for a in ours} == {4})
    ok = bad == 0 and true > 0 and sizes_ok
    detail = (f"{true} true, {bad} false, {skipped} outside the fragment; "
              f"|base(PB->PB)| = {len(ours)}, |fibre| = 4: {sizes_ok}")
    report(4, "oracle soundness", ok, detail, t0)
    assert ok


def test_5_negative_files():
    t0 = time.perf_counter()
    files = sorted(NEGATIVE.glob("*.ntt"))
    wrong = []
    for path in files:
        code, out = cli("check", path)
        if code != 1 or f"[{expected_rule(path)}]" not in out:
            wrong.append(path.name)
    ok = len(files) >= 10 and not wrong
    report(5, "negative tests", ok, f"{len(files) - len(wrong)}/{len(files)} files rejected "
           "with the expected rule", t0)
    assert ok, wrong


def test_6_roundtrip():
    t0 = time.perf_counter()
    rt = RoundTrip()
    for path in corpus():
        roundtrip_report(check_file(path), rt)
    gen = roundtrip_generated(6, ROUNDTRIP_COUNT)
    ok = rt.ok and gen.ok and gen.cases >= ROUNDTRIP_COUNT
    detail = (f"corpus {rt.cases - len(rt.failures)}/{rt.cases}, "
              f"generated {gen.cases - len(gen.failures)}/{gen.cases}")
    report(6, "pretty/parse round trip", ok, detail, t0)
    assert ok, (rt.failures + gen.failures)[:5]


if __name__ == "__main__":
    failures = 0
    for test in (test_1_definitional_corpus, test_2_syntactic_lemmas, test_3_admissibility,
                 test_4_oracle_soundness, test_5_negative_files, test_6_roundtrip):
        try:
            test()
        except AssertionError:
            failures += 1
    sys.exit(1 if failures else 0)
