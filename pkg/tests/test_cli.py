"""Input grammar and command-line behavior: verdicts, exit codes,
determinism, witness round-trips."""

import io
import sys

import pytest

from moduli.cli import main
from moduli.cyclo import CycloElement
from moduli.errors import InvariantViolation, ParseError
from moduli.parser import parse_element, parse_input
from moduli.projline import Divisor, INF, MoebiusMap, ProjPoint
from moduli.ratmap import KForm


EJ0_A = """cyclotomic_order = 3
map { num = z^2 + q; den = 1 }
"""
EJ0_B = """cyclotomic_order = 3
map { num = z^2 + q^2; den = 1 }
"""
EX1 = """cyclotomic_order = 12
form { k = 1; map { scalar = 1; zeros = [(0, 1)]; poles = [(1, 1), (q^2, 1)] } }
"""


def run_cli(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_parse_factored_map():
    R = parse_input("""cyclotomic_order = 12
map { scalar = q^5; zeros = [(1, 1), (-4, 1)]; poles = [(0, 2)] }""")
    assert R.has_factored()
    assert R.lead == CycloElement.zeta(12, 5)
    assert R.map_divisor().degree() == 0


def test_parse_form_and_expression():
    w = parse_input(EX1)
    assert isinstance(w, KForm) and w.k == 1
    x = parse_element("(1/2)*q^5 - 2", 12)
    assert x == CycloElement.zeta(12, 5) / 2 - 2


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_input("cyclotomic_order = 12\nmap { scalar = q^ }")
    with pytest.raises(ParseError):
        parse_input("map { scalar = 1 }")
    with pytest.raises(InvariantViolation):
        parse_input("""cyclotomic_order = 12
map { scalar = 1; zeros = [(0, 1)]; poles = [(inf, 5)] }""")


def test_equiv_not_equivalent_exit_one(tmp_path, capsys):
    a = write(tmp_path, "a.map", EJ0_A)
    b = write(tmp_path, "b.map", EJ0_B)
    code, out, _ = run_cli(["equiv", "--action", "chi_inf", a, b], capsys)
    assert code == 1
    assert "verdict: not equivalent" in out


def test_equiv_identity_exit_zero(tmp_path, capsys):
    a = write(tmp_path, "a.map", EJ0_A)
    code, out, _ = run_cli(["equiv", "--action", "chi_inf", a, a], capsys)
    assert code == 0
    assert "verdict: equivalent" in out


def test_report_and_determinism(tmp_path, capsys):
    a = write(tmp_path, "a.map", EJ0_A)
    code1, out1, _ = run_cli(["report", "--action", "chi_inf", a], capsys)
    code2, out2, _ = run_cli(["report", "--action", "chi_inf", a], capsys)
    assert code1 == code2 == 0
    # determinism modulo the cumulative audit counters
    strip = lambda s: "\n".join(l for l in s.splitlines() if not l.startswith("audit:"))
    assert strip(out1) == strip(out2)
    assert "FOD/FOM parameter: 1" in out1


def test_witness_round_trip(tmp_path, capsys):
    a = write(tmp_path, "a.map", EJ0_A)
    code, out, _ = run_cli(["equiv", "--action", "chi_inf", a, a], capsys)
    assert code == 0
    entries_line = next(l for l in out.splitlines() if l.startswith("witness entries:"))
    parts = entries_line.split(":", 1)[1].split(";")
    entries = [parse_element(p.strip(), 3) for p in parts]
    T = MoebiusMap(*entries)
    R = parse_input(EJ0_A)
    from moduli.actions import ActionTag, apply_action

    assert apply_action(ActionTag.chi_inf(), T, R) == R


def test_real_check_exit_codes(tmp_path, capsys):
    f = write(tmp_path, "ex1.kform", EX1)
    code, out, _ = run_cli(["real-check", f], capsys)
    assert code == 0
    assert "verdict: DefinableOverR" in out
    ej2 = write(tmp_path, "ej2.kform", """cyclotomic_order = 12
form { k = 1; map { scalar = 1/(q^5);
  zeros = [(1, 1), (-4, 1), (2*q^2, 1), (-2*q^2, 1)]; poles = [(0, 3)] } }
""")
    code2, out2, _ = run_cli(["real-check", ej2], capsys)
    assert code2 == 1
    assert "verdict: NotDefinable" in out2
    assert "real-embeddable: yes" in out2


def test_jinv_cli(capsys):
    code, out, _ = run_cli(["jinv", "--mu", "-1"], capsys)
    assert code == 0 and out.strip() == "27/4"
    code, out, _ = run_cli(["jinv", "--mu", "q", "--conductor", "5"], capsys)
    assert code == 0


def test_flat_cli(tmp_path, capsys):
    f = write(tmp_path, "f.kform", """cyclotomic_order = 12
form { k = 2; map { scalar = 1; zeros = [(0, 1), (1, 1)]; poles = [] } }
""")
    code, out, _ = run_cli(["flat", f], capsys)
    assert code == 0
    assert "punctures: 3" in out
    assert "normal form: z^1 (z-1)^1 dz^2" in out


def test_aut_cli(tmp_path, capsys):
    f = write(tmp_path, "z2.map", """cyclotomic_order = 3
map { scalar = 1; zeros = [(0, 2)]; poles = [] }
""")
    code, out, _ = run_cli(["aut", "--action", "chi_k", "--k", "1", f], capsys)
    assert code == 0
    assert "order: 3" in out and "type: Zn(3)" in out


def test_act_cli(tmp_path, capsys):
    f = write(tmp_path, "z2.map", """cyclotomic_order = 12
map { scalar = 1; zeros = [(0, 2)]; poles = [] }
""")
    code, out, _ = run_cli(
        ["act", "--action", "chi_inf", "--transform", "1,1,0,1", f], capsys)
    assert code == 0
    assert "result:" in out


def test_cocycle_verify_cli(tmp_path, capsys):
    a = write(tmp_path, "a.map", EJ0_A)
    code, out, _ = run_cli(["cocycle-verify", "--action", "chi_inf", a], capsys)
    assert code == 0
    assert "cocycle: ok" in out


def test_error_exit_two(tmp_path, capsys):
    f = write(tmp_path, "bad.map", EJ0_A)
    code, out, err = run_cli(["real-check", f], capsys)
    assert code == 2
    assert "error:" in err
