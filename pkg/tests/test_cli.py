import io
import json
import subprocess
import sys

import pytest

from coulomb.cli import run
from coulomb.series import GradedSeries

U1 = '{"kind":"torus","rank":1,"matter":[[1]]}'
U1_2 = '{"kind":"torus","rank":1,"matter":[[1],[1]]}'
QUIVER = '{"kind":"quiver","vertices":["a"],"edges":[],"v":[1],"w":[2]}'


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_present_golden():
    code, out, _ = call("present", "--theory", U1, "--degree", "3")
    assert code == 0
    assert out.splitlines()[0] == "ring C[w, x, y] / (x*y - w)"


def test_present_reduced_full_torus():
    theory = '{"kind":"torus","rank":2,"matter":[[1,0],[0,1]]}'
    code, out, _ = call("present", "--theory", theory, "--degree", "3", "--reduced")
    assert code == 0 and out.splitlines()[0] == "ring C[x1, y1, x2, y2] / (0)"


def test_mono_hs_golden():
    code, out, _ = call("mono-hs", "--theory", U1_2, "--order", "10", "--format", "json")
    assert code == 0
    series = GradedSeries.from_json_obj(json.loads(out)["series"])
    assert series.integer_coefficients()[::2] == [1, 3, 5, 7, 9, 11, 13, 15, 17, 19, 21]


def test_mono_hs_quiver_matches_torus():
    _, a, _ = call("mono-hs", "--theory", QUIVER, "--order", "6")
    _, b, _ = call("mono-hs", "--theory", U1_2, "--order", "6")
    assert a == b and a.startswith("q^0: 1\nq^1: 3\n")


def test_mono_hs_half_order_and_fugacities():
    code, out, _ = call("mono-hs", "--theory", U1, "--order", "3/2", "--fugacities", "on")
    assert code == 0
    assert out.splitlines() == ["q^0 * b^(0): 1", "q^(1/2) * b^(-1): 1", "q^(1/2) * b^(1): 1",
                                "q^1 * b^(-2): 1", "q^1 * b^(0): 1", "q^1 * b^(2): 1",
                                "q^(3/2) * b^(-3): 1", "q^(3/2) * b^(-1): 1", "q^(3/2) * b^(1): 1",
                                "q^(3/2) * b^(3): 1"]


def test_duality_golden():
    code, out, _ = call("duality", "--B", "[[1],[1]]", "--order", "8")
    assert code == 0
    assert json.loads(out)["status"] == "equal"


def test_alg_mul_and_grading():
    code, out, _ = call("alg-mul", "--theory", U1, "--lam", "1", "--mu", "-1")
    assert code == 0 and out.splitlines()[0] == "X[1] * X[-1] = (w) * X[0]"
    code, out, _ = call("alg-mul", "--theory", U1, "--lam", "0", "--mu", "-1", "--shift", "1/2")
    assert "degree: 0" in out and "charge: -1" in out
    code, out, _ = call("alg-mul", "--theory", U1, "--lam", "1", "--mu", "0", "--shift", "1/2")
    assert "degree: 1" in out and "charge: 1" in out


def test_quantize_comm():
    code, out, _ = call("quantize-comm", "--theory", U1, "--lam", "1", "--mu", "-1")
    assert code == 0
    assert out.splitlines() == [
        "X[1] * X[-1] = (w + hbar) * X[0]",
        "X[-1] * X[1] = (w) * X[0]",
        "[X[1], X[-1]] = (hbar) * X[0]",
        "{X[1], X[-1]} = (1) * X[0]",
    ]


def test_seeded_sectors_are_deterministic():
    theory = '{"kind":"torus","rank":2,"matter":[[1,0],[1,1]]}'
    a = call("alg-mul", "--theory", theory, "--seed", "5")
    b = call("alg-mul", "--theory", theory, "--seed", "5")
    assert a == b and a[0] == 0


def test_higgs_hs():
    code, out, _ = call("higgs-hs", "--theory", '{"kind":"torus","rank":1,"matter":[[1],[-1]]}', "--order", "2")
    assert code == 0 and out == "q^0: 1\nq^1: 3\nq^2: 5\n"
    _, out, _ = call("higgs-hs", "--theory", U1, "--order", "2")
    assert out == "q^0: 1\n"
    _, out, _ = call("higgs-hs", "--theory", U1, "--order", "2", "--moment-map", "off")
    assert out == "q^0: 1\nq^1: 1\nq^2: 1\n"


def test_fiber_check():
    code, out, _ = call("fiber-check", "--theory", U1, "--w0", "1")
    assert code == 0 and out.splitlines()[0] == "X[e1] X[-e1] = 1"
    code, _, err = call("fiber-check", "--theory", U1, "--w0", "0")
    assert code == 1 and "<[1], w>" in err


def test_theory_from_file(tmp_path):
    path = tmp_path / "theory.json"
    path.write_text(U1)
    code, out, _ = call("present", "--theory", f"@{path}", "--degree", "3")
    assert code == 0 and "x*y - w" in out


JSON_COMMANDS = [
    ("mono-hs", "--theory", U1_2, "--order", "4", "--fugacities", "on", "--format", "json"),
    ("present", "--theory", U1, "--degree", "3", "--format", "json"),
    ("alg-mul", "--theory", U1, "--lam", "2", "--mu", "-1", "--mode", "quantized", "--format", "json"),
    ("quantize-comm", "--theory", U1_2, "--lam", "1", "--mu", "-2", "--format", "json"),
    ("higgs-hs", "--theory", U1_2, "--order", "3", "--format", "json"),
    ("duality", "--B", "[[1],[1],[1]]", "--order", "4"),
    ("fiber-check", "--theory", U1, "--w0", "3/2", "--format", "json"),
]


def _no_json_numbers(obj):
    if isinstance(obj, dict):
        return all(_no_json_numbers(v) for v in obj.values())
    if isinstance(obj, list):
        return all(_no_json_numbers(v) for v in obj)
    return not isinstance(obj, (int, float)) or isinstance(obj, bool)


@pytest.mark.parametrize("argv", JSON_COMMANDS, ids=[a[0] for a in JSON_COMMANDS])
def test_json_round_trip(argv):
    code, out, _ = call(*argv)
    assert code == 0
    text = out.rstrip("\n")
    obj = json.loads(text)
    assert json.dumps(obj, sort_keys=True, separators=(",", ":")) == text
    assert _no_json_numbers(obj)


MALFORMED = [
    ((), 1),
    (("frobnicate",), 1),
    (("mono-hs",), 1),
    (("mono-hs", "--theory", U1, "--bogus"), 1),
    (("mono-hs", "--theory", "{not json"), 1),
    (("mono-hs", "--theory", '{"kind":"cone"}'), 1),
    (("mono-hs", "--theory", '{"kind":"torus","matter":[[1]]}'), 1),
    (("mono-hs", "--theory", '{"kind":"torus","rank":1,"matter":[[1,2]]}'), 1),
    (("mono-hs", "--theory", '{"kind":"torus","rank":1,"matter":[[1.5]]}'), 1),
    (("mono-hs", "--theory", '{"kind":"torus","rank":1,"matter":[[1]],"flavor":[[1],[2]]}'), 1),
    (("mono-hs", "--theory", '{"kind":"quiver","vertices":["a"],"edges":[["a","b"]],"v":[1],"w":[0]}'), 1),
    (("mono-hs", "--theory", '{"kind":"quiver","vertices":["a"],"v":[1,2],"w":[0]}'), 1),
    (("mono-hs", "--theory", U1, "--order", "1/3"), 1),
    (("mono-hs", "--theory", "@/nonexistent/theory.json"), 1),
    (("mono-hs", "--theory", '{"kind":"torus","rank":1,"matter":[]}'), 2),
    (("mono-hs", "--theory", '{"kind":"quiver","vertices":["a"],"edges":[],"v":[2],"w":[1]}'), 2),
    (("present", "--theory", '{"kind":"torus","rank":2,"matter":[[1,0]]}'), 2),
    (("present", "--theory", '{"kind":"quiver","vertices":["a"],"edges":[],"v":[2],"w":[4]}'), 1),
    (("alg-mul", "--theory", U1, "--lam", "1,2"), 1),
    (("alg-mul", "--theory", U1, "--mode", "weird"), 1),
    (("alg-mul", "--theory", U1, "--shift", "1/2,1"), 1),
    (("duality", "--B", "[[1,1],[1,1]]"), 1),
    (("duality", "--B", "[[1],[1,2]]"), 1),
    (("fiber-check", "--theory", U1, "--w0", "x"), 1),
    (("fiber-check", "--theory", U1, "--w0", "1,2"), 1),
]


@pytest.mark.parametrize("argv, code", MALFORMED)
def test_exit_codes(argv, code):
    got, out, err = call(*argv)
    assert got == code
    assert err
    if code == 2:
        assert out.startswith("witness: ")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "coulomb", "duality", "--B", "[[1],[1]]", "--order", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout) == {"flags": [], "order_checked": "2", "status": "equal"}
    proc = subprocess.run([sys.executable, "-m", "coulomb", "nope"], capture_output=True, text=True)
    assert proc.returncode == 1 and "usage" in proc.stderr
