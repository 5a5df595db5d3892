import pytest
from hypothesis import given, settings, strategies as st

from curvehunt.covers import Subgroup
from curvehunt.curves import count_points, parse_curve
from curvehunt.ff import field_of_size
from curvehunt.jacobian import class_group_structure, is_principal
from curvehunt.search import (FamilyDescriptor, SearchError, decode_plane_curve,
                              encode_plane_curve, enumerate_family, hunt, search_relations,
                              search_subgroups)
from curvehunt.records import load
from curvehunt.curves import Divisor


def test_plane_encoding_example():
    F = field_of_size(3)
    C = decode_plane_curve(196833, F)
    assert C.genus == 3
    assert encode_plane_curve(C) == 196833
    assert count_points(C, 1) == 4


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 3 ** 15 - 1))
def test_plane_encoding_roundtrip(m):
    F = field_of_size(3)
    try:
        C = decode_plane_curve(m, F)
    except SearchError:
        return
    assert encode_plane_curve(C) == m


def test_relation_search_results_are_principal():
    C = parse_curve("y^2+y=x^3+x", field_of_size(2))
    st_ = class_group_structure(C)
    rels = search_relations(C, st_, {"max_coeff": 2})
    assert len(rels) == 80          # the 81 degree-0 vectors in the kernel, minus zero
    for r in rels[:20]:
        assert is_principal(C, Divisor.from_vector(r.places, list(r.coeffs)))


def test_relation_search_budget():
    C = parse_curve("y^2+y=x^3+x", field_of_size(2))
    with pytest.raises(SearchError):
        search_relations(C, class_group_structure(C), {"max_coeff": 9, "budget": 10})


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 23), min_size=1, max_size=10), st.sampled_from([2, 3, 4, 6]))
def test_subgroup_hits_match_brute_force(values, d):
    inv = [24]
    images = [(v,) for v in values]
    hits = search_subgroups(inv, images, [d])
    assert hits
    best = max(len(h.covered) for h in hits)
    assert len(hits[0].covered) == best
    # brute force: the index-d subgroup is dZ/24; maximise over base points
    brute = max(sum(1 for w in values if (w - b) % d == 0) for b in values)
    assert best == brute
    for h in hits:
        b = images[h.base][0]
        assert set(h.covered) == {i for i, (w,) in enumerate(images)
                                  if ((w - b) % 24,) in h.subgroup}


def test_enumerate_family_is_deterministic_and_deduplicated():
    F = field_of_size(2)
    desc = FamilyDescriptor("hyperelliptic", F, {"genus": 2, "h_degree": 1, "f_degree": 5})
    a = [c.text for c in enumerate_family(desc)]
    b = [c.text for c in enumerate_family(desc)]
    assert a == b and a
    from curvehunt.search import curve_l_polynomial
    Ls = [curve_l_polynomial(parse_curve(t, F)).coeffs for t in a]
    assert len(set(Ls)) == len(Ls)


def test_hunt_classifies_against_records():
    C = parse_curve("y^2+y=x^3+x", field_of_size(2))
    from curvehunt.curves import place_label, rational_places
    by = {place_label(p): p for p in rational_places(C)}
    pts = [by[k] for k in ["inf", "(0,0)", "(1,0)", "(1,1)", "(0,1)"]]
    rep = hunt([C], {"relations": {"vectors": [[-3, -1, 2, 1, 1], [-1, -3, 1, 1, 2]],
                                   "places": pts, "fibre": 2}}, records=load("post"))
    got = {(e.g, e.N): e.classification for e in rep.entries}
    assert got[(4, 8)] == "matches_lower"
    assert got[(11, 14)] == "matches_lower"


def test_hunt_budget_marks_partial():
    F = field_of_size(2)
    desc = FamilyDescriptor("hyperelliptic", F, {"genus": 1, "h_degree": 1, "f_degree": 3})
    rep = hunt([desc], {"extensions": {"n": [2]}}, budget=1)
    assert rep.partial
    assert len(rep.entries) == 1
