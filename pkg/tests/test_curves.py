import pytest
from hypothesis import assume, given, settings, strategies as st

from curvehunt.curves import CurveError, count_points, format_poly, parse_curve
from curvehunt.expr import ParseError
from curvehunt.ff import field_of_size

from helpers import (count_as_odd_degree, count_odd_char_odd_degree,
                     count_projective_plane)


def poly_strategy(q, degree):
    return st.lists(st.integers(0, q - 1), min_size=degree, max_size=degree).map(
        lambda cs: cs + [1])


@pytest.mark.parametrize("q,deg", [(2, 3), (2, 5), (4, 3), (4, 5), (8, 3)])
def test_artin_schreier_counts_match_brute_force(q, deg):
    F = field_of_size(q)

    @settings(max_examples=8, deadline=None)
    @given(poly_strategy(q, deg))
    def check(f):
        C = parse_curve("y^2+y=" + format_poly(F, f), F)
        assert C.genus == (deg - 1) // 2
        for n in (1, 2):
            assert count_points(C, n) == count_as_odd_degree(F, f, n)

    check()


@pytest.mark.parametrize("q,deg", [(3, 3), (3, 5), (5, 3), (9, 3)])
def test_odd_characteristic_counts_match_brute_force(q, deg):
    F = field_of_size(q)

    @settings(max_examples=8, deadline=None)
    @given(poly_strategy(q, deg))
    def check(f):
        try:
            C = parse_curve("y^2=" + format_poly(F, f), F)
        except CurveError:
            assume(False)
        for n in (1, 2):
            assert count_points(C, n) == count_odd_char_odd_degree(F, f, n)

    check()


QUARTIC = "x^3y+x^3z+x^2y^2+xz^3+y^3z+y^2z^2=0"
QUARTIC_MONOMIALS = {(3, 1, 0): 1, (3, 0, 1): 1, (2, 2, 0): 1, (1, 0, 3): 1, (0, 3, 1): 1,
                     (0, 2, 2): 1}


def test_plane_quartic_counts_match_projective_enumeration():
    F = field_of_size(2)
    C = parse_curve(QUARTIC, F)
    assert C.genus == 3
    for n in (1, 2, 3, 4):
        assert count_points(C, n) == count_projective_plane(F, QUARTIC_MONOMIALS, n)


def test_klein_quartic_over_f3():
    F = field_of_size(3)
    C = parse_curve("x^3y+xz^3+y^3z=0", F)
    mons = {(3, 1, 0): 1, (1, 0, 3): 1, (0, 3, 1): 1}
    assert [count_points(C, n) for n in (1, 2)] == \
        [count_projective_plane(F, mons, n) for n in (1, 2)]


def test_five_points_on_the_genus_one_curve():
    C = parse_curve("y^2+y=x^3+x", field_of_size(2))
    assert count_points(C, 1) == 5


def test_rational_function_model():
    C = parse_curve("y^2+y=(x^2+x)/(x^3+x^2+1)", field_of_size(2))
    assert C.genus == 2
    assert [count_points(C, 1), count_points(C, 2)] == [6, 6]


def test_fibre_product_genus():
    C = parse_curve("y1^2+y1=x^3+x; y2^2+y2=x^5+x^3", field_of_size(2))
    assert C.genus == 5
    assert count_points(C, 1) == 9


def test_parse_error_has_position():
    with pytest.raises(ParseError) as e:
        parse_curve("y^2+", field_of_size(2))
    assert "position 4" in str(e.value)


def test_singular_model_rejected():
    with pytest.raises(CurveError):
        parse_curve("y^2=x^2", field_of_size(3))
    with pytest.raises(CurveError):
        parse_curve("y^2=x^5", field_of_size(2))
