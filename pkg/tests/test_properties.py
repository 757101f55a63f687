from fractions import Fraction
from itertools import combinations

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from geoprover.dsl import DSLError, format_construction, parse_construction
from geoprover.groebner import groebner_basis, is_member, normal_form, s_polynomial
from geoprover.polycore import (
    MonomialOrder, Polynomial, divide_exact, evaluate, leading_term, monomial,
)

SETTINGS = settings(max_examples=60, deadline=None,
                    suppress_health_check=[HealthCheck.too_slow])

ORDERS = [MonomialOrder.lex(1, 2, 3), MonomialOrder.degrevlex(1, 2, 3), MonomialOrder.block({3})]


@st.composite
def polys(draw, max_terms=4, max_deg=3):
    n = draw(st.integers(0, max_terms))
    p = Polynomial()
    for _ in range(n):
        exps = {i: draw(st.integers(0, max_deg)) for i in (1, 2, 3)}
        c = draw(st.integers(-5, 5))
        p = p + Polynomial({monomial(exps): c})
    return p


nonzero = polys().filter(lambda p: not p.is_zero())
points = st.fixed_dictionaries({i: st.fractions(-3, 3, max_denominator=4) for i in (1, 2, 3)})


@SETTINGS
@given(polys(), polys(), polys())
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a - a).is_zero()


@SETTINGS
@given(nonzero, nonzero, st.sampled_from(ORDERS))
def test_leading_monomial_is_multiplicative(a, b, order):
    ma, ca = leading_term(a, order)
    mb, cb = leading_term(b, order)
    m, c = leading_term(a * b, order)
    assert m == leading_term(Polynomial({ma: 1}) * Polynomial({mb: 1}), order)[0]
    assert c == ca * cb


@SETTINGS
@given(polys(), nonzero)
def test_divide_exact_inverts_multiplication(a, b):
    assert divide_exact(a * b, b) == a


@SETTINGS
@given(polys(), polys(), points)
def test_evaluation_is_a_homomorphism(a, b, pt):
    assert evaluate(a + b, pt) == evaluate(a, pt) + evaluate(b, pt)
    assert evaluate(a * b, pt) == evaluate(a, pt) * evaluate(b, pt)


small = polys(max_terms=3, max_deg=2).filter(lambda p: not p.is_zero())


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.lists(small, min_size=1, max_size=3), st.sampled_from(ORDERS[:2]))
def test_basis_satisfies_buchberger_criterion(gens, order):
    gb = groebner_basis(gens, order)
    for f, g in combinations(gb.basis, 2):
        assert normal_form(s_polynomial(f, g, order), gb.basis, order).is_zero()
    for g in gens:
        assert is_member(g, gb)


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.lists(small, min_size=1, max_size=3), st.lists(polys(max_terms=2, max_deg=1), min_size=3,
                                                          max_size=3))
def test_combinations_are_members(gens, cofactors):
    order = MonomialOrder.degrevlex(1, 2, 3)
    gb = groebner_basis(gens, order)
    combo = Polynomial()
    for h, g in zip(cofactors, gens):
        combo = combo + h * g
    assert is_member(combo, gb)


@settings(max_examples=15, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.lists(small, min_size=1, max_size=3))
def test_basis_is_deterministic(gens):
    order = MonomialOrder.degrevlex(1, 2, 3)
    assert groebner_basis(gens, order).basis == groebner_basis(list(gens), order).basis


TOOLS_2 = ["Midpoint", "Line", "Segment", "PerpBisector", "Circle", "Vector"]


@st.composite
def constructions(draw):
    n = draw(st.integers(2, 4))
    lines = [f"P{i} = Point()" for i in range(n)]
    points = [f"P{i}" for i in range(n)]
    for k in range(draw(st.integers(0, 4))):
        a, b = draw(st.lists(st.sampled_from(points), min_size=2, max_size=2, unique=True))
        tool = draw(st.sampled_from(TOOLS_2 + ["Rotate"]))
        name = f"X{k}"
        if tool == "Rotate":
            angle = draw(st.sampled_from([30, -45, 60, 90, 180]))
            lines.append(f"{name} = Rotate({a}, {angle}, {b})")
        else:
            lines.append(f"{name} = {tool}({a}, {b})")
        if tool in ("Midpoint", "Rotate"):
            points.append(name)
    a, b = draw(st.lists(st.sampled_from(points), min_size=2, max_size=2, unique=True))
    c = draw(st.integers(1, 9))
    lines.append(f"Prove(Equation(Dist2({a}, {b}) = {c}/2 * Dist2({a}, {b})^2 - 1))")
    return "\n".join(lines) + "\n"


@SETTINGS
@given(constructions())
def test_dsl_round_trip(text):
    c, s, mode = parse_construction(text)
    out = format_construction(c, s, mode)
    c2, s2, mode2 = parse_construction(out)
    assert [st_.tool for st_ in c2.steps] == [st_.tool for st_ in c.steps]
    assert [st_.inputs for st_ in c2.steps] == [st_.inputs for st_ in c.steps]
    assert s2 == s and mode2 == mode
    assert format_construction(c2, s2, mode2) == out


@SETTINGS
@given(constructions(), st.data())
def test_error_positions_point_inside_token(text, data):
    lines = text.splitlines()
    i = data.draw(st.integers(0, len(lines) - 2))
    lines[i] = lines[i].replace("(", "(Zz, ", 1) if "Point()" not in lines[i] else "Q = Nope()"
    bad = "\n".join(lines)
    try:
        parse_construction(bad)
    except DSLError as e:
        line = bad.splitlines()[e.line - 1]
        assert 1 <= e.column <= len(line)
        assert not line[e.column - 1].isspace()
    else:
        raise AssertionError("malformed input accepted")


def test_fraction_coefficients_survive():
    p = Polynomial({monomial({1: 1}): Fraction(1, 3)})
    assert (p * 3) == Polynomial.var(1)
