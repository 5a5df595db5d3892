from hypothesis import given, settings, strategies as st

from curvehunt.ff import (FieldError, build_field, canonical_embedding, field_of_size,
                          least_primitive)
import pytest

SIZES = [2, 3, 4, 5, 8, 9, 16, 25, 27]


def elems(q):
    return st.integers(min_value=0, max_value=q - 1)


@pytest.mark.parametrize("q", SIZES)
def test_field_axioms(q):
    F = field_of_size(q)

    @settings(max_examples=60, deadline=None)
    @given(elems(q), elems(q), elems(q))
    def check(x, y, z):
        assert F.add(x, F.add(y, z)) == F.add(F.add(x, y), z)
        assert F.mul(x, F.mul(y, z)) == F.mul(F.mul(x, y), z)
        assert F.mul(x, F.add(y, z)) == F.add(F.mul(x, y), F.mul(x, z))
        assert F.add(x, F.neg(x)) == 0
        if x:
            assert F.mul(x, F.inv(x)) == 1
        assert F.frob(F.add(x, y)) == F.add(F.frob(x), F.frob(y))

    check()


@pytest.mark.parametrize("q", [4, 8, 9, 16, 27, 32, 49, 64, 81])
def test_default_generator_is_primitive(q):
    F = field_of_size(q)
    assert F.order(F.generator()) == q - 1


def test_least_primitive_examples():
    assert least_primitive(2, 2) == (1, 1, 1)
    assert least_primitive(2, 3) == (1, 1, 0, 1)
    assert least_primitive(3, 2) == (2, 1, 1)


@pytest.mark.parametrize("k,m", [(1, 2), (2, 4), (1, 3), (3, 6), (2, 6)])
def test_embedding_is_a_ring_map(k, m):
    F, K = build_field(2, k), build_field(2, m)
    e = canonical_embedding(2, k, m)
    for x in F.elements():
        for y in F.elements():
            assert e(F.add(x, y)) == K.add(e(x), e(y))
            assert e(F.mul(x, y)) == K.mul(e(x), e(y))


def test_trace_lands_in_prime_field():
    F = field_of_size(9)
    for x in F.elements():
        t = F.trace(x)
        assert 0 <= t < 3
        assert t == F.add(x, F.frob(x))          # x + x^3 over F_3


def test_field_parse_format_roundtrip():
    F = field_of_size(8)
    for x in F.elements():
        assert F.parse(F.format(x)) == x


def test_bad_fields_rejected():
    with pytest.raises(FieldError):
        field_of_size(6)
    with pytest.raises(FieldError):
        build_field(2, 2, modulus=(1, 0, 1))
