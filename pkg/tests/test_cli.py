import io
import json
import subprocess
import sys

import pytest

from conftest import NEGATIVE, expected_rule
from naturaltt.cli import config_from_args, main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def test_defaults():
    cfg = config_from_args(["check", "a.ntt"])
    assert cfg.type_in_type and cfg.fuel == 10000 and cfg.format == "text"


def test_type_in_type_switch_forms():
    assert not config_from_args(["check", "--type-in-type=off", "a.ntt"]).type_in_type
    assert config_from_args(["check", "--type-in-type", "a.ntt"]).paths == ["a.ntt"]
    assert not config_from_args(["check", "--no-type-in-type", "a.ntt"]).type_in_type


def test_check_corpus_succeeds(stdlib):
    code, out, _ = run("check", *sorted(stdlib.glob("*.ntt")))
    assert code == 0
    assert out.count(": ok (") == len(list(stdlib.glob("*.ntt")))


def test_check_rejects_plain_use_under_up(tmp_path):
    f = tmp_path / "bad.ntt"
    f.write_text("eq fun (x : PB) => up(x) == fun (x : PB) => up(~x) : PB -> %(PB) ;\n")
    code, out, _ = run("check", f)
    assert code == 1
    assert "[nat-intro/var-zero]" in out
    assert out.startswith(f"{f}:1:")


def test_missing_file_is_a_usage_error(tmp_path):
    code, _, err = run("check", tmp_path / "missing.ntt")
    assert code == 2 and "missing.ntt" in err


def test_bad_arguments_are_usage_errors(capsys):
    assert run("frobnicate")[0] == 2
    assert run("check")[0] == 2


def test_json_diagnostics(tmp_path):
    f = tmp_path / "bad.ntt"
    f.write_text("def bad : PB := z ;\n")
    code, out, _ = run("check", "--format", "json", f)
    assert code == 1
    (record,) = json.loads(out)
    assert set(record) == {"file", "line", "col", "rule", "message"}
    assert record["rule"] == "scope" and record["line"] == 1


def test_normalize_examples(stdlib):
    assert run("normalize", stdlib / "natural.ntt", "already_normal")[1].strip() == \
        "fun (x : PB) => x"
    assert run("normalize", stdlib / "functor.ntt", "nmap_id_at")[1].strip() == \
        "fun (x : %(PB)) => x"
    # the dull binder ~x is the counit applied to the bound variable
    assert run("normalize", stdlib / "natural.ntt", "roundtrip")[1].strip() == \
        "fun (x : %(PB)) => dn(~x)"


def test_normalize_unknown_name(stdlib):
    code, out, _ = run("normalize", stdlib / "natural.ntt", "no_such_name")
    assert code == 1 and "[scope]" in out


def test_model_over_corpus(stdlib):
    code, out, _ = run("model", *sorted(stdlib.glob("*.ntt")))
    assert code == 0
    assert "VIOLATION" not in out
    assert "model skipped" in out and "model true" in out


def test_model_only_equations(stdlib):
    code, out, _ = run("model", "--format", "json", stdlib / "model.ntt")
    assert code == 0
    assert [r["model"] for r in json.loads(out)] == ["false", "true", "false"]


def test_model_flags_a_violation(tmp_path, monkeypatch):
    import naturaltt.cli as cli
    from naturaltt.driver import ModelResult

    f = tmp_path / "ok.ntt"
    f.write_text("eq fun (x : PB) => x == fun (x : PB) => x : PB -> PB ;\n")
    refuted = [ModelResult("eq@1", "false", converts=True, model_only=False)]
    monkeypatch.setattr(cli, "model_report", lambda report, limit: refuted)
    code, out, _ = run("model", f)
    assert code == 1 and "VIOLATION" in out


def test_props_small_run_is_deterministic():
    a = run("props", "--seed", 4, "--count", 15, "--lemma-count", 40)
    b = run("props", "--seed", 4, "--count", 15, "--lemma-count", 40)
    assert a[0] == 0 and a == b
    assert "pre-unit: 15 cases, 0 failures" in a[1]


@pytest.mark.parametrize("path", sorted(NEGATIVE.glob("*.ntt")), ids=lambda p: p.stem)
def test_negative_files(path):
    code, out, _ = run("check", path)
    assert code == 1
    assert f"[{expected_rule(path)}]" in out


def test_module_entry_point(stdlib):
    proc = subprocess.run([sys.executable, "-m", "naturaltt", "check", str(stdlib / "mltt.ntt")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "ok" in proc.stdout
