import pytest
from hypothesis import given, settings, strategies as st

from curvehunt.curves import count_points, parse_curve
from curvehunt.ff import field_of_size
from curvehunt.zeta import (LPolynomial, ZetaError, base_change, class_number, counts_from_l,
                            extension_index, l_from_counts, parse_l, weil_interval)

CURVES = [
    (2, "y^2+y=x^3+x"),
    (2, "y^2+y=(x^2+x)/(x^3+x^2+1)"),
    (2, "y^2+y=x^5+x^3"),
    (2, "x^3y+x^3z+x^2y^2+xz^3+y^3z+y^2z^2=0"),
    (3, "y^2=x^5+x^3+x+1"),
    (3, "y^2=x^3+2x+1"),
    (4, "y^2+y=x^5"),
]


@pytest.mark.parametrize("q,text", CURVES)
def test_l_polynomial_predicts_higher_counts(q, text):
    C = parse_curve(text, field_of_size(q))
    g = C.genus
    L = l_from_counts([count_points(C, n) for n in range(1, g + 1)], q, g)
    for n in range(g + 1, 2 * g + 2):
        assert counts_from_l(L, n) == count_points(C, n)


@pytest.mark.parametrize("q,text", CURVES)
def test_functional_equation_and_weil(q, text):
    C = parse_curve(text, field_of_size(q))
    g = C.genus
    L = l_from_counts([count_points(C, n) for n in range(1, g + 1)], q, g)
    a = L.coeffs
    for i in range(g + 1):
        assert a[2 * g - i] == q ** (g - i) * a[i]
    for n in range(1, 4):
        lo, hi = weil_interval(q, g, n)
        assert lo <= counts_from_l(L, n) <= hi


def test_census_example_strings():
    L = l_from_counts([6, 6], 2, 2)
    assert L.ascending() == "1 + 3t + 5t^2 + 6t^3 + 4t^4"
    assert L.descending() == "4t^4+6t^3+5t^2+3t+1"
    assert class_number(L) == 19
    assert parse_l("4t^4+6t^3+5t^2+3t+1", 2) == L
    assert parse_l(L.ascending(), 2) == L


def test_inconsistent_data_rejected():
    with pytest.raises(ZetaError):
        LPolynomial(2, 2, (1, 0, 0, 0, 1))
    with pytest.raises(ZetaError):
        l_from_counts([9, 24], 4, 2)   # forces a non-integral coefficient


@pytest.mark.parametrize("q,text", CURVES)
@pytest.mark.parametrize("n", [2, 3])
def test_extension_index_is_quotient_of_class_numbers(q, text, n):
    C = parse_curve(text, field_of_size(q))
    g = C.genus
    L = l_from_counts([count_points(C, k) for k in range(1, g + 1)], q, g)
    assert class_number(base_change(L, n)) == class_number(L) * extension_index(L, n)


@settings(max_examples=40, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3))
def test_genus_two_roundtrip(a1, a2):
    q = 2
    try:
        L = LPolynomial(q, 2, (1, a1, a2, q * a1, q * q))
    except ZetaError:
        return
    counts = [counts_from_l(L, 1), counts_from_l(L, 2)]
    if min(counts) < 0 or counts[1] < counts[0]:
        return          # a Weil polynomial, but not the L-polynomial of a curve
    assert l_from_counts(counts, q, 2) == L
