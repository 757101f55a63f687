from fractions import Fraction

import pytest

from geoprover.dsl import DSLError, format_construction, parse_construction, parse_file
from geoprover.geomodel import BinOp, Const, Construction, Dist2, Neg, Pow, step_text

from .conftest import CORPUS

ALL_FILES = sorted(CORPUS.glob("*.geo"))


def model(c, s):
    return ([step_text(st) for st in c.steps], [(o.name, o.kind) for o in c.symbols.values()], [(v.index, v.role) for v in c.variables], s)


def test_inversion_file():
    c, s, mode = parse_file(CORPUS / "inversion.geo")
    assert len(c.steps) == 9
    assert [st.output.name for st in c.steps] == ["A", "B", "c", "C", "a", "D", "C'", "D'", "d"]
    assert mode == "ProveDetails"
    assert s.kind == "Incident" and s.args == ("D'", "d")


def test_unknown_object_position():
    with pytest.raises(DSLError) as e:
        parse_construction("M = Midpoint(A, B)\nProve(AreEqual(M, M))")
    assert "unknown object A at line 1" in str(e.value)
    assert (e.value.line, e.value.column) == (1, 14)


def test_rotation_literal():
    c, _, _ = parse_construction("O = Point()\nX = Point()\nX' = Rotate(X, 45, O)\n"
                                 "Prove(AreEqual(X, X'))")
    step = c.steps[2]
    assert step.tool == "Rotate" and step.inputs == ("X", 45, "O")


def test_negative_angle():
    c, _, _ = parse_construction("O = Point()\nX = Point()\nY = Rotate(X, -30, O)\n"
                                 "Prove(AreEqual(X, Y))")
    assert c.steps[2].inputs == ("X", -30, "O")


def test_unknown_angle():
    with pytest.raises(DSLError, match="unknown angle 50"):
        parse_construction("O = Point()\nX = Point()\nY = Rotate(X, 50, O)\nProve(AreEqual(X, Y))")


def test_unknown_tool_position():
    with pytest.raises(DSLError) as e:
        parse_construction("A = Point()\nB = Slope(A)\nProve(AreEqual(A, B))")
    assert (e.value.line, e.value.column) == (2, 5)
    assert "known tools" in e.value.msg


def test_arity_mismatch():
    with pytest.raises(DSLError, match="expected Midpoint"):
        parse_construction("A = Point()\nM = Midpoint(A)\nProve(AreEqual(A, M))")


def test_bad_character():
    with pytest.raises(DSLError) as e:
        parse_construction("A = Point()\nB = Point() $\nProve(AreEqual(A, B))")
    assert (e.value.line, e.value.column) == (2, 13)


def test_missing_prove():
    with pytest.raises(DSLError, match="missing Prove directive"):
        parse_construction("A = Point()\n")


def test_format_without_statement():
    with pytest.raises(DSLError, match="missing Prove directive"):
        format_construction(Construction(), None)


def test_two_statements_rejected():
    with pytest.raises(DSLError, match="only one Prove"):
        parse_construction("A = Point()\nProve(AreEqual(A, A))\nProve(AreEqual(A, A))")


def test_declaration_after_prove_rejected():
    with pytest.raises(DSLError, match="must precede"):
        parse_construction("A = Point()\nProve(AreEqual(A, A))\nB = Point()")


def test_comments_and_blank_lines():
    c, s, mode = parse_construction("# header\n\nA = Point()  # first\nB = Point()\n"
                                    "Prove(AreEqual(A, B))\n")
    assert len(c.steps) == 2 and mode == "Prove"


def test_polygon_literal():
    c, s, _ = parse_construction("A = Point()\nB = Point()\nC = Point()\np = Polygon(A, B, C)\n"
                                 "Prove(Equation(SignedArea2(p) = SignedArea2(A, B, C)))")
    text = format_construction(c, s)
    assert "p = Polygon(A, B, C)" in text.splitlines()


def test_equation_parse():
    _, s, _ = parse_construction("A = Point()\nB = Point()\n"
                                 "Prove(Equation(-Dist2(A, B)^2 + 1/2 = 3 * (Dist2(A, B) - 2)))")
    lhs, rhs = s.args
    assert lhs == BinOp("+", Neg(Pow(Dist2("A", "B"), 2)), Const(Fraction(1, 2)))
    assert rhs == BinOp("*", Const(Fraction(3)), BinOp("-", Dist2("A", "B"), Const(Fraction(2))))


def test_equation_unknown_reference():
    with pytest.raises(DSLError, match="unknown object Z"):
        parse_construction("A = Point()\nProve(Equation(Dist2(A, Z) = 0))")


@pytest.mark.parametrize("path", ALL_FILES, ids=lambda p: p.stem)
def test_round_trip(path):
    c, s, mode = parse_file(path)
    text = format_construction(c, s, mode)
    c2, s2, mode2 = parse_construction(text)
    assert model(c2, s2) == model(c, s)
    assert mode2 == mode
    assert format_construction(c2, s2, mode2) == text

