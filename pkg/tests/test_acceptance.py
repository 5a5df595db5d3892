"""The ten acceptance criteria.  Each test prints one PASS/FAIL line (also
collected in the 'acceptance criteria' section of the pytest summary).

Criteria 5 (relation part) and 7 are the long stretch items; they run here
too (about a minute each)."""

import itertools
import random

import pytest

from conftest import ACCEPTANCE
from curvehunt.covers import ASCoverSpec, CoverError, brute_force_cover_points, cover_points
from curvehunt.curves import Divisor, count_points, enumerate_places, parse_curve, place_label, \
    rational_places
from curvehunt.ff import field_of_size
from curvehunt.jacobian import canonical_divisor, class_group_structure, is_principal, rr_dim
from curvehunt.records import EXCEEDS, IMPROVES, classify, load
from curvehunt.reproduce import (CENSUS, G1F2, G1F3, G2F2, G2F3, G3F2, G3F3, VerificationReport,
                                 _Ctx, _relation_base, relation_functions, verify)
from curvehunt.search import curve_l_polynomial
from curvehunt.zeta import class_number, l_from_counts, parse_l, weil_interval


@pytest.fixture(scope="module")
def report():
    return verify("all", stretch=True)


def record(n, title, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    ACCEPTANCE.append((n, title, status, detail))
    print(f"criterion {n} {status} {title}" + (f" -- {detail}" if detail else ""))
    assert ok, detail


def scope_ok(report, *scopes):
    checks = [c for c in report.checks if c.scope in scopes]
    bad = [c for c in checks if not c.ok]
    return checks and not bad, f"{len(checks)} checks, {len(bad)} failing" + (
        "" if not bad else ": " + "; ".join(f"{c.item} (expected {c.expected}, observed "
                                            f"{c.observed})" for c in bad[:3]))


def results(report, *scopes):
    return {(q, g, N) for s, q, g, N, _ in report.results if s in scopes}


# ----------------------------------------------------------------------------------

def test_criterion_01_census(report):
    ok, detail = scope_ok(report, "census")
    F = field_of_size(2)
    exact = 0
    for f, counts, cl, Ltext in CENSUS:
        C = parse_curve("y^2+y=" + f, F)
        L = curve_l_polynomial(C)
        got_counts = (count_points(C, 1), count_points(C, 2))
        try:
            printed_L = parse_l(Ltext, 2)
        except Exception:
            printed_L = None
        order = class_group_structure(C).order
        exact += (got_counts == counts and L == printed_L and order == (
            1 if not cl else __import__("math").prod(cl)))
    C = parse_curve("y^2+y=1/x+1+x^3", F)
    L = curve_l_polynomial(C)
    special = L.descending() == "4t^4-2t^3-t+1" and class_number(L) == 2
    flagged = any("1/x+1+x^3" in d.item for d in report.discrepancies)
    others = sorted(d.item for d in report.discrepancies
                    if d.scope == "census" and "1/x+1+x^3" not in d.item)
    record(1, "genus-2/F_2 census", ok and special and flagged,
           f"{detail}; {exact}/20 rows match every printed value; 1/x+1+x^3 gives "
           f"{L.descending()} (L(1)={class_number(L)}) and is flagged; DEVIATION: "
           f"{len(others)} further printed entries contradict their own row and are "
           f"documented: {others}")


def test_criterion_02_genus1_f2(report):
    ok, detail = scope_ok(report, "genus1-f2")
    want = {(2, 4, 8), (2, 11, 14), (2, 13, 15), (2, 10, 13), (2, 15, 17), (2, 32, 27),
            (2, 39, 33)}
    got = results(report, "genus1-f2")
    rows = sum(1 for c in report.checks if c.scope == "genus1-f2" and "(g, N)" in c.item)
    record(2, "genus-1/F_2 results table", ok and want <= got and rows == 16,
           f"{detail}; {rows} table rows; missing {sorted(want - got)}")


def test_criterion_03_genus2_f2(report):
    ok, detail = scope_ok(report, "genus2-f2")
    want = {(2, 7, 10), (2, 8, 11), (2, 9, 12), (2, 43, 34), (2, 44, 33), (2, 20, 19)}
    got = results(report, "genus2-f2")
    C = parse_curve("y^2+y=(x^2+x)/(x^3+x^2+1)", field_of_size(2))
    inv = class_group_structure(C).invariants
    record(3, "genus-2/F_2 base", ok and want <= got and inv == [19] and len(got) >= 10,
           f"{detail}; class group {inv}; {len(got)} distinct results; missing "
           f"{sorted(want - got)}; DEVIATION: printed row <f4,f8> reproduced by <f7,f8>, "
           f"printed Q over x^3+x^2+1 read as x^3+x+1 (both documented)")


def test_criterion_04_genus3_f2(report):
    ok, detail = scope_ok(report, "genus3-f2")
    want = {(2, 9, 12), (2, 12, 14), (2, 24, 22), (2, 29, 25), (2, 31, 25), (2, 69, 49)}
    got = results(report, "genus3-f2")
    C = parse_curve("x^3y+x^3z+x^2y^2+xz^3+y^3z+y^2z^2=0", field_of_size(2))
    inv = class_group_structure(C).invariants
    record(4, "genus-3/F_2 quartic", ok and want <= got and inv == [71],
           f"{detail}; class group {inv}; missing {sorted(want - got)}")


def test_criterion_05_genus5_f2(report):
    ok, detail = scope_ok(report, "genus5-f2-base", "genus5-f2")
    want = {(2, 16, 17), (2, 16, 16), (2, 39, 31), (2, 42, 33)}
    got = results(report, "genus5-f2")
    C = parse_curve("y1^2+y1=x^3+x; y2^2+y2=x^5+x^3", field_of_size(2))
    L = curve_l_polynomial(C)
    from curvehunt.reproduce import _poly_from_text, _poly_mul
    prod = _poly_mul(_poly_mul(_poly_from_text("2t^2+2t+1"), _poly_from_text("4t^4+4t^3+2t^2+2t+1")),
                     _poly_from_text("4t^4+4t^3+4t^2+2t+1"))
    base_ok = C.genus == 5 and count_points(C, 1) == 9 and list(L.coeffs) == prod
    record(5, "genus-5/F_2 base (relations: stretch)", ok and base_ok and want <= got,
           f"{detail}; L factors as printed: {list(L.coeffs) == prod}; missing "
           f"{sorted(want - got)}; DEVIATION: printed relation vectors index the points "
           f"P_2..P_9,P_1 (documented)")


def test_criterion_06_f3(report):
    ok, detail = scope_ok(report, "genus1-f3", "genus2-f3", "genus3-f3", "subgroups")
    want = {(3, 30, 38), (3, 44, 47), (3, 18, 28), (3, 13, 24), (3, 14, 24), (3, 11, 20),
            (3, 12, 22), (9, 4, 30), (9, 10, 54), (3, 15, 28), (3, 25, 36), (3, 29, 42),
            (3, 43, 56), (2, 25, 24), (2, 61, 45), (4, 8, 21)}
    got = results(report, "genus1-f3", "genus2-f3", "genus3-f3", "subgroups")
    record(6, "F_3 constructions and subgroup covers", ok and want <= got,
           f"{detail}; missing {sorted(want - got)}")


def test_criterion_07_f9(report):
    ok, detail = scope_ok(report, "subgroups-f9")
    got = results(report, "subgroups-f9")
    record(7, "genus-3/F_9 curve (stretch)", ok and {(9, 5, 32), (9, 9, 48)} <= got,
           f"{detail}; results {sorted(got)}")


def test_criterion_08_extensions(report):
    ok, detail = scope_ok(report, "extensions")
    want = {(4, 4, 15), (4, 6, 20), (4, 8, 21), (8, 8, 35), (8, 14, 65), (8, 20, 76),
            (16, 9, 72), (16, 17, 112), (9, 10, 54), (4, 15, 35), (4, 17, 40), (4, 27, 52),
            (16, 27, 156), (16, 35, 187), (16, 41, 220), (4, 28, 54), (8, 40, 104)}
    got = results(report, "extensions")
    tens = [t for t in report.tensions if "ext-" in t]
    record(8, "extension covers", ok and want <= got,
           f"{detail}; {len(got)} distinct results; missing {sorted(want - got)}; "
           f"DEVIATION: printed F_4 counts [9,24] are not realisable, [9,23] reproduces the "
           f"row; reported tension: {tens}")


def test_criterion_09_records(report):
    ok, detail = scope_ok(report, "records")
    pre, post = load("pre"), load("post")
    want = [(2, 32, 27), (2, 43, 34), (2, 24, 22), (2, 61, 45), (3, 30, 38), (3, 44, 47),
            (3, 18, 28), (3, 43, 56), (8, 20, 76), (4, 28, 54), (8, 40, 104), (16, 12, 88),
            (16, 27, 156), (16, 41, 220)]
    cls = {k: classify(pre, *k) for k in want}
    allres = {(q, g, N) for _, q, g, N, _ in report.results}
    never = all(classify(t, *k) != EXCEEDS for t in (pre, post) for k in allres)
    improved = {k for k in allres if classify(pre, *k) == IMPROVES}
    not_improving = sorted(k for k, c in cls.items() if c != IMPROVES)
    extra = sorted(improved - set(want))
    record(9, "improvement classification",
           ok and never and not not_improving and not extra,
           f"{detail}; no exceeds_upper on {len(allres)} results in either snapshot; "
           f"listed but not improves_lower: {[(k, cls[k]) for k in not_improving]} (no "
           f"earlier interval is printed for these cells); improves_lower but not listed: "
           f"{extra} (each improves an interval the text quotes); the (40,104) item is "
           f"checked over F_8, where the degree-13 cover lives (F_8 interval [103-141]); "
           f"over F_4 the upper bound is 77")


# ----------------------------------------------------------------------------------
# criterion 10: property suites

PROPERTY_CURVES = [
    (2, "y^2+y=x^3+x"), (2, "y^2+y=(x^2+x)/(x^3+x^2+1)"),
    (2, "x^3y+x^3z+x^2y^2+xz^3+y^3z+y^2z^2=0"), (2, "y1^2+y1=x^3+x; y2^2+y2=x^5+x^3"),
    (3, "y^2=x^3+2x+1"), (3, "y^2=x^5+x^3+x+1"), (3, "y^3-y=x-1/x"),
    (3, "2x^4+x^3z+2x^2y^2+x^2yz+x^2z^2+2xz^3+2y^4+2y^3z+2y^2z^2=0"),
]


def test_criterion_10_properties(report):
    failures = []
    n_l = n_rr = n_as = 0
    # functional equation and L(1) = class number on every base curve
    for q, text in PROPERTY_CURVES + [(2, "y^2+y=" + f) for f, *_ in CENSUS]:
        C = parse_curve(text, field_of_size(q))
        g = C.genus
        L = l_from_counts([count_points(C, n) for n in range(1, g + 1)], q, g)
        n_l += 1
        if any(L.coeffs[2 * g - i] != q ** (g - i) * L.coeffs[i] for i in range(g + 1)):
            failures.append(f"functional equation {text}")
        if g <= 3 or text.startswith("y1"):
            if class_group_structure(C).order != class_number(L):
                failures.append(f"L(1) {text}")
    # Weil bounds on every reproduced (q, g, N)
    for _, q, g, N, cert in report.results:
        lo, hi = weil_interval(q, g)
        if not lo <= N <= hi:
            failures.append(f"Weil {q, g, N} {cert}")
    # is_principal against condition (1), |a_i| <= 2
    C = parse_curve("y^2+y=x^3+x", field_of_size(2))
    by = {place_label(p): p for p in rational_places(C)}
    pts = [by[k] for k in ["inf", "(0,0)", "(1,0)", "(1,1)", "(0,1)"]]
    for vec in itertools.product(range(-2, 3), repeat=5):
        if sum(vec):
            continue
        cond = sum(i * a for i, a in enumerate(vec)) % 5 == 0
        if is_principal(C, Divisor.from_vector(pts, list(vec))) != cond:
            failures.append(f"condition (1) {vec}")
    # brute-force cover counts on every explicit AS cover over q <= 4: all
    # fibre products of up to three genus-1 relations, plus every printed row
    # of the other relation bases
    fns, _ = relation_functions(G1F2, C, pts)
    specs = []
    for r in (1, 2, 3):
        for combo in itertools.combinations(sorted(fns), r):
            try:
                specs.append(ASCoverSpec(C, [fns[k] for k in combo]))
            except CoverError:
                pass
    for base in (G2F2, G3F2, G1F3, G2F3, G3F3):
        out = _relation_base(_Ctx(base.key, VerificationReport()), base)
        Cb, _, _, fb = out
        for names, _, _ in base.rows:
            names = base.row_corrections.get(names, (names,))[0]
            specs.append(ASCoverSpec(Cb, [fb[k] for k in names]))
    for spec in specs:
        bf = brute_force_cover_points(spec, 1)
        n_as += 1
        if bf is None or bf != cover_points(spec, 1):
            failures.append(f"AS oracle {spec.base.text}: brute force {bf}, "
                            f"fast {cover_points(spec, 1)}")
    # Riemann-Roch on 100 deterministic divisors per base curve
    for q, text in PROPERTY_CURVES[:3] + PROPERTY_CURVES[4:7]:
        C = parse_curve(text, field_of_size(q))
        K = canonical_divisor(C)
        places = enumerate_places(C, 1) + enumerate_places(C, 2)
        rng = random.Random(len(text))
        for _ in range(100):
            D = Divisor({p: rng.randint(-3, 4) for p in rng.sample(places, min(3, len(places)))})
            n_rr += 1
            if rr_dim(C, D) - rr_dim(C, K - D) != D.degree - C.genus + 1:
                failures.append(f"Riemann-Roch {text} {D}")
    record(10, "property suites", not failures,
           f"{n_l} L-polynomials, {len(report.results)} Weil checks, 3125 vectors for "
           f"condition (1), {n_as} AS covers vs brute force, {n_rr} Riemann-Roch divisors; "
           f"failures: {failures[:5]}")
