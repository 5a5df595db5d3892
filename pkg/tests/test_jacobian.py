import itertools
import random

import pytest

from curvehunt.abelian import subgroups_of_index
from curvehunt.curves import Divisor, count_points, enumerate_places, parse_curve, place_label, \
    rational_places
from curvehunt.ff import field_of_size
from curvehunt.jacobian import (canonical_divisor, class_group_structure, function_with_divisor,
                                is_principal, match_image_table, rr_dim)
from curvehunt.curves import divisor_of
from curvehunt.zeta import class_number, l_from_counts

from helpers import condition_one

BASES = [
    (2, "y^2+y=x^3+x"),
    (2, "y^2+y=(x^2+x)/(x^3+x^2+1)"),
    (2, "x^3y+x^3z+x^2y^2+xz^3+y^3z+y^2z^2=0"),
    (3, "y^2=x^3+2x+1"),
    (3, "y^2=x^5+x^3+x+1"),
    (3, "y^3-y=x-1/x"),
]


def test_principal_iff_condition_one_exhaustive():
    """On y^2+y=x^3+x with P_i -> i mod 5, every vector with |a_i| <= 2."""
    C = parse_curve("y^2+y=x^3+x", field_of_size(2))
    by_label = {place_label(p): p for p in rational_places(C)}
    pts = [by_label[lab] for lab in ["inf", "(0,0)", "(1,0)", "(1,1)", "(0,1)"]]
    images = ([(i,) for i in range(5)], (5,))
    n_principal = 0
    for vec in itertools.product(range(-2, 3), repeat=5):
        expected = condition_one(vec, images)
        if sum(vec):
            assert not expected
            continue
        D = Divisor.from_vector(pts, list(vec))
        assert is_principal(C, D) == expected, vec
        n_principal += expected
    assert n_principal == 81          # includes the zero vector


@pytest.mark.parametrize("q,text", BASES)
def test_riemann_roch_identity(q, text):
    C = parse_curve(text, field_of_size(q))
    g = C.genus
    K = canonical_divisor(C)
    assert K.degree == 2 * g - 2
    places = enumerate_places(C, 1) + enumerate_places(C, 2)
    rng = random.Random(20240101)
    for _ in range(100):
        support = rng.sample(places, min(3, len(places)))
        D = Divisor({p: rng.randint(-3, 4) for p in support})
        assert rr_dim(C, D) - rr_dim(C, K - D) == D.degree - g + 1


@pytest.mark.parametrize("q,text", BASES)
def test_class_number_is_l_at_one(q, text):
    C = parse_curve(text, field_of_size(q))
    g = C.genus
    st = class_group_structure(C)
    L = l_from_counts([count_points(C, n) for n in range(1, g + 1)], q, g)
    assert st.order == class_number(L)
    inv = st.invariants
    assert all(b % a == 0 for a, b in zip(inv, inv[1:]))


def test_known_class_groups():
    F2 = field_of_size(2)
    assert class_group_structure(parse_curve("y^2+y=(x^2+x)/(x^3+x^2+1)", F2)).invariants == [19]
    assert class_group_structure(
        parse_curve("x^3y+x^3z+x^2y^2+xz^3+y^3z+y^2z^2=0", F2)).invariants == [71]
    assert class_group_structure(
        parse_curve("y^2+y=(x^3+x^2+1)/x(x+1)", F2)).invariants == [2, 2]


def test_function_with_divisor_has_that_divisor():
    C = parse_curve("y^2+y=x^3+x", field_of_size(2))
    by_label = {place_label(p): p for p in rational_places(C)}
    pts = [by_label[lab] for lab in ["inf", "(0,0)", "(1,0)", "(1,1)", "(0,1)"]]
    D = Divisor.from_vector(pts, [-3, -1, 2, 1, 1])
    f = function_with_divisor(C, D)
    assert divisor_of(f) == D


def test_class_coordinates_are_a_homomorphism():
    C = parse_curve("y^2=x^5+x^3+x+1", field_of_size(3))
    st = class_group_structure(C)
    places = enumerate_places(C, 1) + enumerate_places(C, 2)
    inv = st.invariants
    rng = random.Random(7)
    for _ in range(40):
        vec = [rng.randint(-2, 2) for _ in places]
        deg = sum(a * p.degree for a, p in zip(vec, places))
        vec[0] -= deg
        D = Divisor.from_vector(places, vec)
        c = st.divisor_class(D).residues
        assert (all(x == 0 for x in c)) == is_principal(C, D)


def test_image_table_matcher_up_to_isomorphism():
    C = parse_curve("y^2+y=(x^2+x)/(x^3+x^2+1)", field_of_size(2))
    st = class_group_structure(C)
    classes = [st.place_class(p) for p in rational_places(C)]
    printed = [(v,) for v in (0, 1, 14, 6, 16, 4)]
    assert match_image_table(printed, (19,), classes, st.invariants) is not None
    assert match_image_table([(v,) for v in (0, 1, 2, 3, 4, 5)], (19,), classes,
                             st.invariants) is None
