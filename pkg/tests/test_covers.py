import itertools

import pytest
from hypothesis import given, settings, strategies as st

from curvehunt.covers import (ASCoverSpec, CoverError, Subgroup, SubgroupCoverSpec,
                              as_cover_report, best_subgroup_cover, brute_force_cover_points,
                              coset_classes, cover_genus, cover_points, extension_cover_report,
                              subgroup_cover_report)
from curvehunt.abelian import subgroups_of_index
from curvehunt.curves import (Divisor, parse_curve, parse_function, place_label, rational_places)
from curvehunt.ff import field_of_size
from curvehunt.jacobian import class_group_structure, function_with_divisor

G1 = "y^2+y=x^3+x"
G1_LABELS = ["inf", "(0,0)", "(1,0)", "(1,1)", "(0,1)"]
G1_RELATIONS = {"f1": [-3, -1, 2, 1, 1], "f2": [-1, -3, 1, 1, 2], "f3": [-7, 2, 3, 1, 1],
                "f4": [-3, 2, 1, -1, 1], "f5": [-5, -1, 3, 2, 1], "f6": [-9, 1, 3, 2, 3]}


@pytest.fixture(scope="module")
def genus1():
    C = parse_curve(G1, field_of_size(2))
    by_label = {place_label(p): p for p in rational_places(C)}
    pts = [by_label[lab] for lab in G1_LABELS]
    fns = {k: function_with_divisor(C, Divisor.from_vector(pts, v))
           for k, v in G1_RELATIONS.items()}
    return C, fns


def test_single_relation_covers_agree_with_brute_force(genus1):
    C, fns = genus1
    for name, f in fns.items():
        spec = ASCoverSpec(C, [f])
        for n in (1, 2):
            bf = brute_force_cover_points(spec, n)
            assert bf is not None
            assert cover_points(spec, n) == bf, (name, n)


def test_fibre_products_agree_with_brute_force(genus1):
    C, fns = genus1
    for a, b in itertools.combinations(sorted(fns), 2):
        try:
            spec = ASCoverSpec(C, [fns[a], fns[b]])
        except CoverError:
            continue
        assert cover_points(spec, 1) == brute_force_cover_points(spec, 1), (a, b)


def test_printed_genus_one_rows(genus1):
    C, fns = genus1
    rep = as_cover_report(ASCoverSpec(C, [fns["f1"]]))
    assert (rep.genus, rep.points) == (4, 8)
    rep = as_cover_report(ASCoverSpec(C, [fns["f1"], fns["f2"]]))
    assert (rep.genus, rep.points) == (11, 14)
    rep = as_cover_report(ASCoverSpec(C, [fns["f1"], fns["f2"], fns["f3"]]))
    assert (rep.genus, rep.points) == (32, 27)


def test_f4_cover_over_f3_and_f4_agree_with_brute_force():
    for q, curve, fn in [(3, "y^2=x^3+2x+1", "x"), (3, "y^2=x^3+2x+1", "x^2+y"),
                         (4, "y^2+y=x^3", "(a)x"), (4, "y^2+y=x^3", "x/(x+1)"),
                         (2, "y^2+y=(x^2+x)/(x^3+x^2+1)", "x^3")]:
        C = parse_curve(curve, field_of_size(q))
        spec = ASCoverSpec(C, [parse_function(C, fn)])
        for n in (1, 2):
            assert cover_points(spec, n) == brute_force_cover_points(spec, n), (q, curve, fn)


def test_trivial_cover_rejected():
    C = parse_curve(G1, field_of_size(2))
    with pytest.raises(CoverError):
        ASCoverSpec(C, [parse_function(C, "y^2+y")])


def test_conductor_genus_formula():
    C = parse_curve(G1, field_of_size(2))
    spec = ASCoverSpec(C, [parse_function(C, "x")])
    # x has a double pole at infinity which Artin-Schreier reduction lowers to
    # a simple pole, so the conductor is 2 inf and 2g' - 2 = 2 (2 - 2) + 2
    assert cover_genus(spec) == 2


def test_subgroup_cover_genus_nineteen():
    C = parse_curve("y^2+y=(x^2+x)/(x^3+x^2+1)", field_of_size(2))
    st_ = class_group_structure(C)
    count, H, base = best_subgroup_cover(st_, 19)
    rep = subgroup_cover_report(SubgroupCoverSpec(st_, H, base, 19))
    assert (rep.genus, rep.points) == (20, 19)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5)), min_size=1, max_size=8),
       st.sampled_from([2, 3, 4, 6]))
def test_coset_classes_partition_by_cosets(images, d):
    inv = [6, 6]
    imgs = [(a % 6, b % 6) for a, b in images]
    for S in subgroups_of_index(inv, d):
        H = Subgroup.from_dual(inv, S)
        classes = coset_classes(imgs, S, inv)
        assert sorted(i for m in classes.values() for i in m) == list(range(len(imgs)))
        for members in classes.values():
            b = imgs[members[0]]
            for i, v in enumerate(imgs):
                diff = tuple((x - y) % m for x, y, m in zip(v, b, inv))
                assert (diff in H) == (i in members)


def test_extension_cover_degree_and_points():
    C = parse_curve("y^2+y=(x^2+x)/(x^3+x^2+1)", field_of_size(2))
    rep = extension_cover_report(C, 3)
    assert rep.q == 8
    assert rep.genus == rep.degree * (C.genus - 1) + 1
    assert rep.points == rep.degree * 6
    assert rep.lower_bound
