import json
import re
import subprocess
import sys
from collections import Counter
from pathlib import Path

import jsonschema
import pytest

from kohn.cli import main
from kohn.parsing import parse_polynomial
from kohn.trace import load_schema

ROOT = Path(__file__).resolve().parent.parent
SPECS = ROOT / "specs"
GOLDEN = ROOT / "tests" / "golden"


def run(*args):
    proc = subprocess.run([sys.executable, "-m", "kohn", *map(str, args)],
                          capture_output=True, text=True, timeout=120)
    return proc.returncode, proc.stdout, proc.stderr


def run_inproc(capsys, *args):
    code = main([str(a) for a in args])
    out, err = capsys.readouterr()
    return code, out, err


# -- exit codes ---------------------------------------------------------------

@pytest.mark.parametrize("args, code", [
    (("chain", SPECS / "example_2_3_3.txt"), 0),
    (("chain", SPECS / "linear.txt"), 0),
    (("chain", SPECS / "stalled.txt"), 2),
    (("chain", SPECS / "example_2_3_3.txt", "--max-steps", "2"), 3),
    (("chain", SPECS / "bad_origin.txt"), 1),
    (("chain", SPECS / "missing.txt"), 1),
    (("invariants", SPECS / "example_2_3_3.txt"), 0),
    (("invariants", SPECS / "stalled.txt"), 3),
    (("member", SPECS / "example_2_3_3.txt", "--poly", "z1^3", "--ideal", "J2"), 4),
    (("member", SPECS / "example_2_3_3.txt", "--poly", "z1^8", "--ideal", "J2"), 0),
    (("member", SPECS / "example_2_3_3.txt", "--poly", "z2^4", "--ideal", "J2"), 0),
    (("member", SPECS / "example_2_3_3.txt", "--poly", "z1^3", "--ideal", "J2", "--radical"), 0),
    (("member", SPECS / "example_2_3_3.txt", "--poly", "z1", "--ideal", "X2"), 1),
    (("member", SPECS / "example_2_3_3.txt", "--poly", "z1 z2", "--ideal", "J2"), 1),
    (("member", SPECS / "stalled.txt", "--poly", "z1", "--ideal", "J3"), 1),
    (("bogus",), 1),
])
def test_exit_codes(capsys, args, code):
    got, out, err = run_inproc(capsys, *args)
    assert got == code, (out, err)
    if code == 1:
        assert err and not out


def test_script_end_to_end():
    code, out, err = run("chain", SPECS / "example_2_3_3.txt", "--json")
    assert code == 0, err
    data = json.loads(out)
    assert data["steps"][2]["I"][0]["generator"] == "1"
    assert run("chain", SPECS / "stalled.txt")[0] == 2
    assert run("member", SPECS / "example_2_3_3.txt", "--poly", "z1^3", "--ideal", "J2")[0] == 4


def test_diagnostic_mentions_offender(capsys):
    code, out, err = run_inproc(capsys, "chain", SPECS / "bad_origin.txt")
    assert "F must vanish at the origin" in err and "1 + z1" in err


def test_member_prints_direction(capsys):
    _, out, _ = run_inproc(capsys, "member", SPECS / "example_2_3_3.txt", "--poly", "z1^8", "--ideal", "J2")
    assert "global membership certifies germ membership" in out
    _, out, _ = run_inproc(capsys, "member", SPECS / "example_2_3_3.txt", "--poly", "z1^3", "--ideal", "J2")
    assert "non-membership" in out


# -- traces -------------------------------------------------------------------

@pytest.mark.parametrize("name", ["example_2_3_3", "example_2_4_5"])
def test_golden_trace(capsys, name):
    golden = (GOLDEN / f"{name}.json").read_text()
    for threads in (1, 2, 4):
        _, out, _ = run_inproc(capsys, "chain", SPECS / f"{name}.txt", "--json", "--threads", threads)
        assert out == golden


@pytest.mark.parametrize("name", ["example_2_3_3", "squares", "stalled", "linear", "cubic_quartic"])
@pytest.mark.parametrize("convention", ["siu", "hermitian"])
def test_trace_validates(capsys, name, convention):
    _, out, _ = run_inproc(capsys, "chain", SPECS / f"{name}.txt", "--json", "--invariants",
                           "--convention", convention)
    data = json.loads(out)
    jsonschema.validate(data, load_schema())
    for key in ("steps", "status", "final_order"):
        assert key in data
    for step in data["steps"]:
        for key in ("k", "M", "J", "I"):
            assert key in step
        for entry in step["M"] + step["J"] + step["I"]:
            assert "order" in entry and "provenance" in entry


def _gens_from_json(data):
    out = Counter()
    for s in data["steps"]:
        for kind in ("M", "J", "I"):
            for e in s[kind]:
                body = ", ".join(e["covector"]) if kind == "M" else e["generator"]
                out[(s["k"], kind, e["label"], e["order"], body)] += 1
    return out


_TEXT_LINE = re.compile(r"^  ([MJI])  (\S+)\s+order (\S+)\s+(.*?)   [A-Z_]+\(.*\)$")


def _gens_from_text(text):
    out = Counter()
    k = None
    for line in text.splitlines():
        if line.startswith("step "):
            k = int(line.split()[1])
            continue
        m = _TEXT_LINE.match(line)
        if m:
            kind, label, order, body = m.groups()
            if kind == "M":
                body = body[1:-1]
            out[(k, kind, label, order, body)] += 1
    return out


@pytest.mark.parametrize("name", ["example_2_3_3", "example_2_4_5", "squares", "stalled"])
def test_text_and_json_agree(capsys, name):
    _, js, _ = run_inproc(capsys, "chain", SPECS / f"{name}.txt", "--json")
    _, tx, _ = run_inproc(capsys, "chain", SPECS / f"{name}.txt", "--text")
    assert _gens_from_json(json.loads(js)) == _gens_from_text(tx)
    assert _gens_from_json(json.loads(js))


def test_emitted_generators_reparse(capsys, example_report):
    _, out, _ = run_inproc(capsys, "chain", SPECS / "example_2_3_3.txt", "--json")
    data = json.loads(out)
    for step, rec in zip(data["steps"], example_report.steps):
        for entry, gen in zip(step["J"] + step["I"], rec.J + rec.I):
            assert parse_polynomial(entry["generator"], 2).is_constant_multiple_of(gen.payload)
        for entry, gen in zip(step["M"], rec.M):
            assert [parse_polynomial(c, 2) for c in entry["covector"]] == list(gen.payload.coeffs)


def test_invariants_json(capsys):
    _, out, _ = run_inproc(capsys, "invariants", SPECS / "example_2_3_3.txt", "--json", "--probe-cap", "3")
    data = json.loads(out)
    for key in ("s", "q", "p_lower", "p_upper", "type_lower", "type_upper", "inequalities"):
        assert key in data
    assert data["s"] == 6 and data["type_lower"] == "6"
    _, out, _ = run_inproc(capsys, "invariants", SPECS / "coordinates.txt", "--json")
    data = json.loads(out)
    assert (data["s"], data["q"], data["p_lower"], data["p_upper"]) == (1, 1, "1", 1)
    assert all(i["holds"] for i in data["inequalities"])
    _, out, _ = run_inproc(capsys, "invariants", SPECS / "cubic_quartic.txt", "--json")
    assert json.loads(out)["s"] == 12


def test_invariants_text(capsys):
    code, out, _ = run_inproc(capsys, "invariants", SPECS / "example_2_3_3.txt")
    assert code == 0
    assert "s = 6" in out and "holds" in out and "VIOLATED" not in out
