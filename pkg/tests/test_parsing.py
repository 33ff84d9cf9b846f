import pytest
from hypothesis import given, strategies as st

from kohn.algebra import GaussianRational as Q, Polynomial
from kohn.parsing import ParseError, load_domain_spec, loads_domain_file, parse_polynomial, render_polynomial

from test_algebra import polys


def test_parse_examples():
    assert parse_polynomial("z1^2", 2) == Polynomial.monomial((2, 0))
    f = parse_polynomial("z2^3 + z2*z1^3", 2)
    assert f == Polynomial({(0, 3): 1, (3, 1): 1}, 2)
    g = parse_polynomial("(1+i)*z1 - i*z2", 2)
    assert g == Polynomial({(1, 0): Q(1, 1), (0, 1): Q(0, -1)}, 2)


def test_rationals_and_grouping():
    assert parse_polynomial("3/4*z1 - (z1 - z2)^2", 2) == (
        Polynomial({(1, 0): Q("3/4")}, 2) - parse_polynomial("z1^2 - 2*z1*z2 + z2^2", 2)
    )
    assert parse_polynomial("-z1", 1) == -Polynomial.variable(0, 1)


@pytest.mark.parametrize("src, column", [
    ("z1 z2", 4),       # implicit multiplication
    ("2z1", 2),
    ("z3", 1),           # index beyond n
    ("z1^", 4),
    ("(z1", 4),
    ("z1 + w", 6),
    ("z1 ^ 99999", 6),   # exponent overflow
    ("1/0", 3),
])
def test_syntax_errors_carry_position(src, column):
    with pytest.raises(ParseError) as info:
        parse_polynomial(src, 2)
    assert info.value.column == column


@given(polys(max_terms=5))
def test_render_round_trip(p):
    assert parse_polynomial(render_polynomial(p), 2) == p


def test_domain_file(tmp_path):
    path = tmp_path / "ex.txt"
    path.write_text("# example\nn = 2\nF = z1^2\nF = z2^3 + z2*z1^3\nconvention = hermitian\nmax_steps = 5\n")
    df = load_domain_spec(path)
    assert df.spec.n == 2 and len(df.spec.F) == 2
    assert df.convention == "hermitian"
    assert df.caps.max_steps == 5
    assert load_domain_spec_minimal().spec.F == (Polynomial.variable(0, 1),)


def load_domain_spec_minimal():
    return loads_domain_file("n = 1\nF = z1\n")


def test_domain_file_rejects_unit():
    with pytest.raises(ParseError, match="F must vanish at the origin"):
        loads_domain_file("n = 2\nF = 1 + z1\n")


def test_domain_file_reports_line():
    with pytest.raises(ParseError) as info:
        loads_domain_file("n = 2\nF = z1^2\nF = z1 z2\n")
    assert info.value.line == 3


@pytest.mark.parametrize("text", [
    "F = z1\n",                  # missing n
    "n = 2\n",                   # no F
    "n = 2\nF = z1\nfoo = 3\n",  # unknown key
    "n = 2\nF = z1\nconvention = other\n",
    "n = x\nF = z1\n",
])
def test_domain_file_errors(text):
    with pytest.raises(ParseError):
        loads_domain_file(text)
