import io
import json

import pytest

from levellab import __version__
from levellab.cli import run


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), stdout=buf)
    text = buf.getvalue()
    return code, json.loads(text), text


def test_envelope_schema():
    code, env, text = call("invariants", "105a2-min", "--compare", "105a2-red")
    assert code == 0
    assert set(env) == {"version", "command", "config", "verdict", "details"}
    assert env["version"] == __version__ and env["verdict"] == "PASS"
    assert env["details"]["j_equal"] is True
    assert json.dumps(env, sort_keys=True, indent=2) + "\n" == text


def test_congruence_pass_and_fail():
    code, env, _ = call("congruence", "KO-A", "KO-B", "-N", "7", "--pmax", "200")
    assert code == 0 and env["details"]["disagreements"] == []
    code, env, _ = call("congruence", "--e1", "KO-A", "--e2", "KO-B", "-N", "11", "--pmax", "200")
    assert code == 1 and env["verdict"] == "FAIL"
    w = env["details"]["first_witness"]
    assert w == {"N": 11, "p": 17, "a_p_1": -2, "a_p_2": 5}


def test_quartic_check_example():
    code, env, _ = call(
        "quartic-check", "--name", "hk-105a2-min", "--primes", "2,3,5,7,11,13", "--expect-singular", "3,5,7"
    )
    assert code == 0
    assert env["details"]["smooth_at"] == ["Fp:2", "Fp:11", "Fp:13"]
    assert env["details"]["singular_at"] == ["Fp:3", "Fp:5", "Fp:7"]
    code, env, _ = call("quartic-check", "--name", "hk-105a2-min", "--primes", "3", "--expect-singular", "5")
    assert code == 1 and env["details"]["first_witness"]["field"] == "Fp:3"


def test_moduli_props_is_deterministic():
    argv = ("moduli-props", "-N", "3", "-m", "4", "-q", "13", "--trials", "6", "--seed", "42")
    c1, e1, t1 = call(*argv)
    c2, e2, t2 = call(*argv)
    assert c1 == 0 and t1 == t2
    assert e1["details"]["info"]["trials_without_violation"] == 6


def test_frobenius_suite_via_cli():
    code, env, _ = call("moduli-props", "--suite", "frobenius", "-N", "3", "-q", "7", "--trials", "4", "--seed", "1")
    assert code == 0 and env["details"]["violations"] == 0


def test_fibres():
    code, env, _ = call("fibres", "-N", "3", "-q", "7")
    assert code == 0 and env["details"]["fibres"] == {"1": 4, "2": 4}


def test_detclasses():
    code, env, _ = call("detclasses", "KO-A", "KO-B", "-N", "7")
    assert code == 0 and env["details"]["alphas"]
    assert env["details"]["scope"].startswith("local")


def test_charp_commands():
    assert call("charp", "endos", "-N", "4", "-q", "5")[0] == 0
    assert call("charp", "pairing-eq", "-N", "8")[0] == 0
    code, env, _ = call("charp", "quaternion", "-p", "2", "-r", "2", "--alt-modulus")
    assert code == 0 and env["details"]["quotient"] == 48 and env["details"]["modulus"] != [1, 1, 1]
    code, env, _ = call("charp", "ss-count", "-p", "13")
    assert env["details"]["supersingular_j"] == ["5,0"]
    code, env, _ = call("charp", "census", "-p", "2", "-r", "1", "--structure-size", "6")
    assert env["details"]["upper_bound"] == 18 and not env["details"]["exact"]
    assert env["command"] == "charp census"


def test_radical_check(tmp_path):
    path = tmp_path / "ideal.json"
    path.write_text(json.dumps({"vars": ["x", "y"], "gens": ["x^3", "y^2 - x*y"]}))
    code, env, _ = call("radical-check", "--ideal", str(path))
    assert code == 0 and env["details"]["contains_irrelevant_ideal"]
    path.write_text(json.dumps({"vars": ["x", "y"], "gens": ["x*y"]}))
    code, env, _ = call("radical-check", "--ideal", str(path), "--targets", "x")
    assert code == 1 and env["details"]["first_witness"]["target"] == "x"


def test_out_file(tmp_path):
    out = tmp_path / "r.json"
    code = run(["ap", "KO-B", "--pmax", "20", "--out", str(out)], stdout=io.StringIO())
    env = json.loads(out.read_text())
    assert code == 0
    assert [r["a_p"] for r in env["details"]["primes"]] == [None, -2, -1, -3, -3, -4, 5, None]


def test_errors_exit_2(capsys):
    code, env, _ = call("invariants", "1,2,3")
    assert code == 2 and env["verdict"] == "ERROR"
    code, env, _ = call("charp", "quaternion", "-p", "7", "-r", "2", "--cap", "1000")
    assert code == 2 and env["details"]["error"] == "ResourceError"
    with pytest.raises(SystemExit) as exc:
        run(["no-such-command"])
    assert exc.value.code == 2
    assert "usage" in capsys.readouterr().err
    with pytest.raises(SystemExit) as exc:
        run(["congruence", "KO-A", "KO-B", "--bogus"])
    assert exc.value.code == 2
