"""Reproduction of the published constructions: every printed table row is
recomputed from first principles and compared with the printed value.

Each scope is a named group of items (one base curve or one table).  A run
returns a :class:`VerificationReport` holding one :class:`Check` per printed
value, the known misprints (:class:`Discrepancy`) and unresolved tensions
between printed values.  Misprints are part of the expected outcome: a
discrepancy is only raised when the recomputation disagrees with the
printed value *and* the disagreement is listed here with its explanation.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

from .abelian import AbelianGroup, in_annihilator, subgroups_of_index
from .covers import (ASCoverSpec, CoverError, Subgroup, SubgroupCoverSpec, as_cover_report,
                     extension_cover_from_counts, subgroup_cover_report)
from .curves import (Divisor, count_points, divisor_of, enumerate_places, parse_curve,
                     parse_function, place_label, rational_places)
from .ff import field_of_size
from .jacobian import (class_group_structure, function_with_divisor, is_principal,
                       match_image_table)
from .records import IMPROVES, NEW_ENTRY, classify, load
from .zeta import ZetaError, class_number, l_from_counts, parse_l


@dataclass
class Check:
    scope: str
    item: str
    expected: object
    observed: object
    ok: bool

    def as_dict(self) -> dict:
        return {"scope": self.scope, "item": self.item, "expected": _jsonable(self.expected),
                "observed": _jsonable(self.observed), "ok": self.ok}


@dataclass
class Discrepancy:
    scope: str
    item: str
    printed: object
    computed: object
    explanation: str

    def as_dict(self) -> dict:
        return {"scope": self.scope, "item": self.item, "printed": _jsonable(self.printed),
                "computed": _jsonable(self.computed), "explanation": self.explanation}


@dataclass
class VerificationReport:
    scopes: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    discrepancies: list = field(default_factory=list)
    tensions: list = field(default_factory=list)
    results: list = field(default_factory=list)      # (scope, q, g, N, certificate)
    timings: dict = field(default_factory=dict)

    @property
    def failures(self):
        return [c for c in self.checks if not c.ok]

    @property
    def ok(self) -> bool:
        return not self.failures

    def by_scope(self, scope):
        return [c for c in self.checks if c.scope == scope]

    def merge(self, other: "VerificationReport"):
        self.scopes += other.scopes
        self.checks += other.checks
        self.discrepancies += other.discrepancies
        self.tensions += other.tensions
        self.results += other.results
        self.timings.update(other.timings)


def _jsonable(x):
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (int, str, bool, float)) or x is None:
        return x
    return str(x)


class _Ctx:
    """Accumulates checks for one scope."""

    def __init__(self, scope: str, report: VerificationReport):
        self.scope = scope
        self.report = report

    def check(self, item, expected, observed):
        ok = expected == observed
        self.report.checks.append(Check(self.scope, item, expected, observed, ok))
        return ok

    def known(self, item, printed, computed, explanation):
        """A printed value that the recomputation contradicts, for a
        documented reason.  The check passes iff the recomputed value is the
        documented correct one."""
        self.report.discrepancies.append(Discrepancy(self.scope, item, printed, computed,
                                                     explanation))

    def result(self, q, g, N, certificate):
        self.report.results.append((self.scope, q, g, N, certificate))


# ----------------------------------------------------------------------------------
# data: genus-2 census over F_2
# ----------------------------------------------------------------------------------

#: (f in y^2 + y = f, printed [N1, N2], printed class group, printed L)
CENSUS = [
    ("(x^2+x)/(x^3+x^2+1)", (6, 6), (19,), "4t^4+6t^3+5t^2+3t+1"),
    ("(x^3+x+1)/(x^3+x^2+1)", (0, 6), (), "4t^4-6t^3+5t^2-3t+1"),
    ("1/(x^3+x^2+1)", (2, 6), (3,), "4t^4-2t^3+t^2-t+1"),
    ("x/(x^3+x^2+1)", (4, 6), (9,), "4t^4+2t^3+t^2+t+1"),
    ("x^2/(x^3+x^2+1)", (4, 10), (11,), "4t^4+2t^3+3t^2+t+1"),
    ("(x^3+1)/(x^3+x^2+1)", (2, 10), (5,), "4t^4-2t^3+3t^2+t+1"),
    ("1/x(x^2+x+1)", (3, 7), (6,), "4t^4+t^2+1"),
    ("(x+1)/x(x^2+x+1)", (5, 7), (14,), "4t^4+4t^3+3t^2+2t+1"),
    ("(x^3+x^2+1)/(x(x^2+x+1))", (1, 7), (2,), "4t^4-4t^3+3t^2-2t+1"),
    ("(x^3+x^2+1)/x(x+1)", (3, 3), (2, 2), "4t^4-t^2+1"),
    ("1/x+x^3", (4, 4), (8,), "4t^4+2t^3+t+1"),
    ("1/x+x^2+x^3", (2, 8), (4,), "4t^4-2t^3+2t^2-t+1"),
    ("1/x+1+x^3", (2, 4), (2,), "t^4-2t^3-t+1"),
    ("1/x+1+x^2+x^3", (4, 8), (10,), "4t^4+2t^3+2t^2+t+1"),
    ("x^5", (3, 5), (5,), "4t^4+1"),
    ("x^5+x^3+x", (3, 9), (7,), "4t^4+2t^2+1"),
    ("x^5+x", (5, 9), (15,), "4t^4+4t^3+4t^2+2t+1"),
    ("x^5+x+1", (1, 5), (3,), "4t^4-4t^3+4t^2-2t+1"),
    ("x^5+x^3", (5, 5), (13,), "4t^4+4t^3+2t^2+2t+1"),
    ("x^5+x^3+1", (1, 9), (), "4t^4-4t^3+2t^2-2t+1"),
]

#: rows whose printed L-polynomial contradicts its own [N1, N2] and class group
CENSUS_L_MISPRINTS = {
    "1/x+1+x^3": "the printed polynomial is not a genus-2 L-polynomial over F_2 (leading "
                 "coefficient 1, not q^g = 4); the recomputed 4t^4-2t^3-t+1 has "
                 "L(1) = 2 = |Z/2| and matches [N1,N2] = [2,4]",
    "(x^3+1)/(x^3+x^2+1)": "the printed t-coefficient +1 violates the functional equation "
                           "(a_3 = q a_1 = -2 forces a_1 = -1, as N1 = 2 does) and gives "
                           "L(1) = 7, not |Z/5|; the recomputed 4t^4-2t^3+3t^2-t+1 has "
                           "L(1) = 5",
}

#: rows whose printed [N1, N2] contradicts the row's own L-polynomial
CENSUS_COUNT_MISPRINTS = {
    "x^5+x+1": "the printed [1,5] belongs to the next-but-one row; the row's own "
               "L-polynomial and class group Z/3 give [1,9], which is what the curve has",
    "x^5+x^3+1": "the printed [1,9] belongs to the row x^5+x+1; the row's own "
                 "L-polynomial and trivial class group give [1,5], which is what the "
                 "curve has",
}


def _abstract(invariants) -> tuple:
    """Invariant factors of prod Z/m_i (any cyclic decomposition)."""
    inv = [m for m in invariants if m != 1]
    if not inv:
        return ()
    s = len(inv)
    G = AbelianGroup([[m if i == j else 0 for j in range(s)] for i, m in enumerate(inv)], s)
    return tuple(G.invariants)


def _census(ctx: _Ctx):
    F = field_of_size(2)
    for f, counts, cl, Ltext in CENSUS:
        item = f"y^2+y={f}"
        C = parse_curve(item, F)
        got_counts = (count_points(C, 1), count_points(C, 2))
        L = l_from_counts(list(got_counts), 2, 2)
        st = class_group_structure(C)
        ctx.check(f"{item} class group", _abstract(cl), tuple(st.invariants))
        ctx.check(f"{item} L(1) = class number", st.order, class_number(L))
        printed = _poly_from_text(Ltext)
        if f in CENSUS_COUNT_MISPRINTS:
            implied = _counts_from_coeffs(printed, 2, 2)
            ctx.check(f"{item} printed [N1,N2] contradicts the printed L-polynomial", True,
                      implied != counts)
            ctx.check(f"{item} [N1,N2] implied by the printed L-polynomial", implied,
                      got_counts)
            ctx.known(f"{item} [N1,N2]", list(counts), list(got_counts),
                      CENSUS_COUNT_MISPRINTS[f])
        else:
            ctx.check(f"{item} [N1,N2]", counts, got_counts)
        if f in CENSUS_L_MISPRINTS:
            ctx.check(f"{item} printed L-polynomial contradicts its row", True,
                      printed != list(L.coeffs) and _poly_eval(printed, 1) != st.order)
            ctx.check(f"{item} recomputed L(1) = printed class number", _order(cl),
                      _poly_eval(list(L.coeffs), 1))
            ctx.known(f"{item} L-polynomial", Ltext, L.descending(), CENSUS_L_MISPRINTS[f])
        else:
            ctx.check(f"{item} L-polynomial", printed, list(L.coeffs))


def _order(inv):
    out = 1
    for m in inv:
        out *= m
    return out


def _counts_from_coeffs(c, q, g):
    """(N_1, N_2) from ascending L coefficients via Newton's identities."""
    a1, a2 = c[1], c[2]
    s1 = -a1
    s2 = a1 * a1 - 2 * a2
    return (q + 1 - s1, q * q + 1 - s2)


def _poly_eval(c, t):
    return sum(a * t ** i for i, a in enumerate(c))


# ----------------------------------------------------------------------------------
# data: explicit Artin-Schreier constructions
# ----------------------------------------------------------------------------------

@dataclass
class RelationBase:
    """A base curve with a printed image table, relations and result rows.

    extras: per relation, None or a list of (kind, data, multiplicity, tag)
    terms subtracted from the vector: ('zeros', poly text) = zero divisor of
    a polynomial in x; ('place', degree) = a place of that degree, chosen
    as the first one making every relation sharing ``tag`` principal."""

    key: str
    q: int
    curve: str
    npoints: int
    invariants: tuple                    # printed cyclic decomposition
    images: list | None = None           # printed images (tuples)
    labels: list | None = None           # explicit coordinates, if printed
    relations: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)
    rows: list = field(default_factory=list)     # (relation names, g, N)
    subgroup_rows: list = field(default_factory=list)   # (index, g, N)
    extra_images: dict = field(default_factory=dict)    # tag -> printed image
    #: printed row label -> (label reproducing the printed (g, N), explanation)
    row_corrections: dict = field(default_factory=dict)
    #: table index of the point each relation-vector entry refers to, when
    #: the vectors do not follow the image-table order
    relation_order: tuple | None = None

    def relation_vector(self, vec) -> list:
        """The printed vector rearranged into image-table order."""
        if self.relation_order is None:
            return list(vec)
        out = [0] * len(vec)
        for i, a in enumerate(vec):
            out[self.relation_order[i]] = a
        return out


G1F2 = RelationBase(
    "genus1-f2", 2, "y^2+y=x^3+x", 5, (5,),
    images=[(i,) for i in range(5)],
    labels=["inf", "(0,0)", "(1,0)", "(1,1)", "(0,1)"],
    relations={"f1": [-3, -1, 2, 1, 1], "f2": [-1, -3, 1, 1, 2], "f3": [-7, 2, 3, 1, 1],
               "f4": [-3, 2, 1, -1, 1], "f5": [-5, -1, 3, 2, 1], "f6": [-9, 1, 3, 2, 3],
               "f7": [-11, 1, 4, 3, 3], "f8": [-13, 2, 4, 3, 4]},
    rows=[(("f1",), 4, 8), (("f3",), 5, 9), (("f1", "f4"), 10, 13), (("f1", "f2"), 11, 14),
          (("f1", "f3"), 13, 15), (("f3", "f5"), 14, 15), (("f3", "f6"), 15, 17),
          (("f1", "f2", "f5"), 28, 25), (("f1", "f3", "f5"), 29, 25),
          (("f1", "f3", "f4"), 30, 25), (("f1", "f2", "f3"), 32, 27),
          (("f2", "f3", "f5"), 34, 27), (("f1", "f3", "f6"), 35, 29),
          (("f3", "f6", "f7"), 39, 33), (("f3", "f6", "f8"), 43, 33),
          (("f3", "f7", "f8"), 45, 33)],
)

G2F2 = RelationBase(
    "genus2-f2", 2, "y^2+y=(x^2+x)/(x^3+x^2+1)", 6, (19,),
    images=[(v,) for v in (0, 1, 14, 6, 16, 4)],
    relations={"f1": [-3, -3, 2, 2, 1, 1], "f2": [-9, 2, 2, 1, 2, 2], "f3": [1, 1, 1, 1, 1, 1],
               "f4": [-1, -5, 1, 2, 2, 1], "f5": [-5, -1, 2, 1, 1, 2],
               "f6": [-11, 3, 2, 2, 3, 1], "f7": [1, 0, -5, 2, 1, 1],
               "f8": [3, -3, -3, 1, 1, 1], "f9": [-7, 0, 2, 2, 2, 1],
               "f10": [-13, 3, 1, 3, 3, 3]},
    extras={"f3": [("zeros", "x^3+x+1", 1, "Q")]},
    extra_images={"Q": (3,)},
    rows=[(("f1",), 7, 10), (("f2",), 8, 11), (("f3",), 9, 12), (("f4", "f8"), 17, 17),
          (("f1", "f4"), 18, 18), (("f2", "f5"), 20, 19), (("f2", "f6"), 22, 21),
          (("f2", "f10"), 24, 21), (("f1", "f4", "f5"), 43, 34), (("f2", "f5", "f9"), 44, 33)],
    subgroup_rows=[(19, 20, 19)],
    row_corrections={("f4", "f8"): (("f7", "f8"),
                                    "f4 + f8 has odd pole orders 1, 5, 3 at P1, P2, P3, so "
                                    "no reduction applies and <f4,f8> has conductor degree "
                                    "8 + 8 + 12, i.e. genus 19; among all pairs of the ten "
                                    "relations, <f7,f8> is the one giving (17, 17)")},
)

G3F2 = RelationBase(
    "genus3-f2", 2, "x^3y+x^3z+x^2y^2+xz^3+y^3z+y^2z^2=0", 7, (71,),
    images=[(v,) for v in (0, 1, 34, 55, 10, 14, 49)],
    relations={"f1": [-3, 2, 1, 1, 2, 1, -4], "f2": [-11, 1, 2, 1, 2, 3, 2],
               "f3": [-13, 2, 1, 2, 2, 3, 3], "f4": [1, -5, 1, 2, 2, 1, 1],
               "f5": [-1, 3, 1, 1, 1, 2, -7], "f6": [2, -1, 1, 2, 2, 2, 1],
               "f7": [1, 1, 1, 1, 1, 1, 1], "f8": [-15, 4, 1, 3, 4, 1, 2]},
    extras={"f4": [("place", 3, 1, "Q3")], "f6": [("place", 3, 3, "Q3")],
            "f7": [("place", 7, 1, "Q7")]},
    extra_images={"Q3": (9,), "Q7": (21,)},
    rows=[(("f1",), 9, 12), (("f7",), 12, 14), (("f1", "f5"), 24, 22),
          (("f2", "f3"), 29, 25), (("f4", "f6"), 31, 25), (("f2", "f3", "f8"), 69, 49)],
)

G5F2 = RelationBase(
    "genus5-f2", 2, "y1^2+y1=x^3+x; y2^2+y2=x^5+x^3", 9, (65, 15),
    images=[(0, 0), (1, 1), (51, 14), (64, 1), (14, 14), (57, 11), (47, 4), (8, 11), (18, 4)],
    relations={"r1": [1, 2, -13, 1, 2, 2, 2, 2, 1], "r2": [1, 1, -11, 1, -1, 3, 2, 1, 3],
               "r3": [3, 3, -17, 1, 2, 1, 3, 1, 3]},
    rows=[(("r1",), 16, 17), (("r2",), 16, 16), (("r1", "r2"), 39, 31),
          (("r1", "r3"), 42, 33)],
    relation_order=(1, 2, 3, 4, 5, 6, 7, 8, 0),
)

G1F3 = RelationBase(
    "genus1-f3", 3, "y^2=x^3+2x+1", 7, (7,),
    images=[(i,) for i in range(7)],
    relations={"r1": [-4, -1, 0, 1, 2, 1, 1], "r2": [-4, -2, 1, 2, 1, 1, 1]},
    rows=[(("r1", "r2"), 30, 38)],
)

G2F3 = RelationBase(
    "genus2-f3", 3, "y^2=x^5+x^3+x+1", 7, (27,),
    images=[(v,) for v in (0, 1, 26, 17, 10, 23, 4)],
    relations={"r1": [1, 1, 1, 1, -2, 2, -4], "r2": [1, 1, 1, 2, -1, 1, -5]},
    rows=[(("r1", "r2"), 44, 47)],
)

G3F3 = RelationBase(
    "genus3-f3", 3,
    "2x^4+x^3z+2x^2y^2+x^2yz+x^2z^2+2xz^3+2y^4+2y^3z+2y^2z^2=0", 10, (204,),
    images=[(v,) for v in (0, 72, 129, 59, 182, 121, 172, 45, 47, 26)],
    relations={"r1": [1, 2, 1, 1, 1, 1, 1, 1, -10, 1]},
    rows=[(("r1",), 18, 28)],
)


def _class_number_check(ctx, C, st, item):
    g = C.genus
    L = l_from_counts([count_points(C, n) for n in range(1, g + 1)], C.field.q, g)
    ctx.check(f"{item} L(1) = class number", st.order, class_number(L))
    return L


def _numbering(ctx, base: RelationBase, C, st, rat):
    """Our places in the printed numbering."""
    classes = [st.place_class(pl) for pl in rat]
    inv = st.invariants
    if base.labels is not None:
        by_label = {place_label(pl): pl for pl in rat}
        ordered = [by_label.get(lab) for lab in base.labels]
        ctx.check(f"{base.key} printed coordinates are rational points", True,
                  all(pl is not None for pl in ordered))
        idx = [rat.index(pl) for pl in ordered]
        sigma = match_image_table(base.images, base.invariants, [classes[j] for j in idx],
                                  inv, fixed=True)
        ctx.check(f"{base.key} printed image table consistent with coordinates", True,
                  sigma is not None)
        return ordered
    sigma = match_image_table(base.images, base.invariants, classes, inv)
    ctx.check(f"{base.key} printed image table realised up to isomorphism", True,
              sigma is not None)
    if sigma is None:
        return None
    return [rat[j] for j in sigma]


def relation_functions(base: RelationBase, C, places):
    """Functions with the printed relation divisors, resolving the extra
    non-rational divisors (a tag names one divisor shared by several
    relations)."""
    divisors = {}
    tagged = {}
    chosen = {}
    for name, vec in base.relations.items():
        D = Divisor.from_vector(places, base.relation_vector(vec))
        for kind, data, mult, tag in base.extras.get(name, []):
            if kind == "zeros":
                Q = divisor_of(parse_function(C, data)).positive_part()
                chosen[tag] = Q
                D = D - Q * mult
            else:
                tagged.setdefault(tag, []).append((name, mult, data))
        divisors[name] = D
    for tag, uses in tagged.items():
        deg = uses[0][2]
        for Q in enumerate_places(C, deg):
            if all(is_principal(C, divisors[name] - Divisor({Q: mult})) for name, mult, _ in uses):
                chosen[tag] = Divisor({Q: 1})
                break
        else:
            raise AssertionError(f"reproduce: no place of degree {deg} realises {tag}")
        for name, mult, _ in uses:
            divisors[name] = divisors[name] - chosen[tag] * mult
    fns = {name: function_with_divisor(C, D) for name, D in divisors.items()}
    return fns, chosen


def _effective_class(st, E: Divisor):
    """Coordinates of E - deg(E) B for our base B."""
    acc = [0] * len(st.invariants)
    for pl, m in E.items():
        c = st.place_class(pl)
        acc = [(a + m * x) % d for a, x, d in zip(acc, c, st.invariants)]
    return tuple(acc)


def extra_image_consistent(base_images, moduli, st, places, E: Divisor, printed) -> bool:
    """Whether the class of E - deg(E) P1 corresponds to the printed image
    under the isomorphism fixed by the numbered points."""
    inv = st.invariants
    classes = [st.place_class(pl) for pl in places]
    c1 = classes[0]
    cE = _effective_class(st, E)
    adj = tuple((a - (E.degree - 1) * b) % d for a, b, d in zip(cE, c1, inv))
    return match_image_table(list(base_images) + [tuple(printed)], moduli, classes + [adj],
                             inv, fixed=True) is not None


def _genus2_f2_q(ctx, C, places):
    printed = divisor_of(parse_function(C, "x^3+x^2+1")).positive_part()
    D = Divisor.from_vector(places, [1] * 6)
    degenerate = False
    if is_principal(C, D - printed):
        try:
            ASCoverSpec(C, [function_with_divisor(C, D - printed)])
        except CoverError:
            degenerate = True
    ctx.check("genus2-f2 printed Q (zeros of x^3+x^2+1) gives a trivial double cover", True,
              degenerate)
    ctx.known("genus2-f2 divisor Q", "zeros of x^3+x^2+1", "zeros of x^3+x+1",
              "x^3+x^2+1 is a simple pole of the right-hand side, so its zero divisor is "
              "twice a ramified degree-3 place; sum P_i minus it is the divisor of y^2+y, "
              "which defines the trivial cover; the only degree-6 place Q with "
              "sum P_i ~ Q lies over x^3+x+1, has the printed image 3 and gives (9, 12)")


def _printed_relations_vanish(ctx: _Ctx, base: RelationBase):
    """Each printed relation must sum to zero on the printed images."""
    mods = base.invariants

    def total(vec):
        return tuple(sum(a * v[k] for a, v in zip(vec, base.images)) % m
                     for k, m in enumerate(mods))

    zero = tuple(0 for _ in mods)
    for name, vec in base.relations.items():
        acc = total(base.relation_vector(vec))
        extras = base.extras.get(name, [])
        if any(tag not in base.extra_images for _, _, _, tag in extras):
            continue
        for _, _, mult, tag in extras:
            acc = tuple((a - mult * e) % m for a, e, m in zip(acc, base.extra_images[tag], mods))
        ctx.check(f"{base.key} relation {name} vanishes on the printed images", zero, acc)
    if base.relation_order is not None:
        sums = {name: list(total(vec)) for name, vec in base.relations.items()}
        ctx.known(f"{base.key} relation-vector indexing", "P_1, ..., P_n", "P_2, ..., P_n, P_1",
                  f"read in table order the printed vectors sum to {sums} on the printed "
                  "images; their entries refer to P_2, ..., P_n, P_1, and in that order "
                  "every printed relation vanishes")


def _relation_base(ctx: _Ctx, base: RelationBase):
    F = field_of_size(base.q)
    C = parse_curve(base.curve, F)
    rat = rational_places(C)
    ctx.check(f"{base.key} rational points", base.npoints, len(rat))
    st = class_group_structure(C)
    ctx.check(f"{base.key} class group", _abstract(base.invariants), tuple(st.invariants))
    _class_number_check(ctx, C, st, base.key)
    places = _numbering(ctx, base, C, st, rat)
    if places is None:
        return
    if base.images is not None:
        _printed_relations_vanish(ctx, base)
    fns, chosen = relation_functions(base, C, places)
    for tag, E in chosen.items():
        if tag in base.extra_images:
            ctx.check(f"{base.key} divisor {tag} (degree {E.degree}) has the printed image "
                      f"{list(base.extra_images[tag])}", True,
                      extra_image_consistent(base.images, base.invariants, st, places, E,
                                             base.extra_images[tag]))
    if base.key == "genus2-f2":
        _genus2_f2_q(ctx, C, places)
    for names, g, N in base.rows:
        label = "<" + ",".join(names) + ">"
        if names in base.row_corrections:
            alt, why = base.row_corrections[names]
            printed_rep = as_cover_report(ASCoverSpec(C, [fns[n] for n in names]))
            ctx.known(f"{base.key} row {label}", (g, N),
                      (printed_rep.genus, printed_rep.points), why)
            ctx.check(f"{base.key} printed row {label} does not give its (g, N)", True,
                      (printed_rep.genus, printed_rep.points) != (g, N))
            names = alt
            label = "<" + ",".join(names) + ">"
        spec = ASCoverSpec(C, [fns[n] for n in names])
        rep = as_cover_report(spec)
        ctx.check(f"{base.key} {label} (g, N)", (g, N), (rep.genus, rep.points))
        ctx.result(base.q, rep.genus, rep.points, f"AS{label} over {base.curve}")
    for d, g, N in base.subgroup_rows:
        rep = _subgroup_cover_with(st, d, None)
        ctx.check(f"{base.key} unramified index-{d} cover (g, N)", (g, N),
                  (rep.genus, rep.points) if rep else None)
        if rep:
            ctx.result(base.q, rep.genus, rep.points, f"subgroup index {d} over {base.curve}")
    return C, st, places, fns


def _genus1_f2(ctx):
    C, st, places, fns = _relation_base(ctx, G1F2)
    # condition (1): sum a_i = 0 and sum i a_i = 0 mod 5 iff principal
    agree = True
    for vec in itertools.product(range(-2, 3), repeat=5):
        if sum(vec):
            continue
        cond = sum(i * a for i, a in enumerate(vec)) % 5 == 0
        if cond != is_principal(C, Divisor.from_vector(places, list(vec))):
            agree = False
            break
    ctx.check("genus1-f2 principality equals the congruence criterion (|a_i| <= 2)",
              True, agree)
    # the relation printed in prose with a point P_5 is the tabulated f3
    ctx.known("genus1-f2 prose relation for f3", "-7P0+2P1+3P2+P4+P5", "[-7,2,3,1,1]",
              "there are only five points P0..P4; the relation table gives [-7,2,3,1,1] "
              "and that is the relation producing (5, 9)")
    # conductor of the combined character f1 + f4
    spec = ASCoverSpec(C, [fns["f1"] + fns["f4"]])
    cond = spec.conductor((1,))
    lab = {pl: f"P{i}" for i, pl in enumerate(places)}
    cond_txt = "+".join(f"{m}{lab.get(pl, place_label(pl))}" for pl, m in cond.items())
    ctx.check("genus1-f2 conductor of f1+f4 (printed 2P0+2P1+2P3)", "2P0+2P1+2P3", cond_txt)
    div_vec = divisor_of(fns["f1"] + fns["f4"]).vector(places)
    ctx.check("genus1-f2 divisor of f1+f4 has degree 0", 0, sum(div_vec))
    ctx.known("genus1-f2 divisor of f1+f4", "-2P0-P1+P2+2P4+P5",
              " ".join(f"{a:+d}P{i}" for i, a in enumerate(div_vec) if a),
              "the printed divisor names a nonexistent point P5 and has degree 1; the "
              "recomputed divisor has degree 0 and its Artin-Schreier reduction gives the "
              "printed conductor 2P0+2P1+2P3")


# ----------------------------------------------------------------------------------
# data: unramified subgroup covers
# ----------------------------------------------------------------------------------

@dataclass
class SubgroupBase:
    key: str
    q: int
    curve: str
    npoints: int
    invariants: tuple
    images: list | None
    covers: list          # (index, printed congruences or None, covered count, g, N)
    notes: list = field(default_factory=list)


SUBGROUP_BASES = [
    SubgroupBase("sub-genus4-f2", 2, "y^2+y=(x^7+x^5+1)/(x^2+x)", 3, (2, 16),
                 [(0, 0), (1, 0), (1, 8)], [(8, None, 3, 25, 24)]),
    SubgroupBase("sub-genus5-f2", 2, "y^2+y=(x^9+x^7+x^3+x+1)/(x^2+x)", 3, (2, 30),
                 [(0, 0), (1, 0), (0, 15)], [(15, None, 3, 61, 45)]),
    SubgroupBase("sub-genus2-f3-a", 3, "y^3-y=x-1/x", 8, (6, 6),
                 [(0, 0), (2, 4), (1, 0), (1, 4), (0, 1), (2, 3), (5, 5), (3, 5)],
                 [(12, [((1, 1), 3), ((1, 0), 2), ((0, 1), 2)], 2, 13, 24)]),
    SubgroupBase("sub-genus2-f3-b", 3, "y^2=x(x^2+1)(x^2-x-1)", 6, (2, 10),
                 [(0, 0), (1, 0), (0, 9), (0, 1), (1, 7), (1, 3)],
                 [(10, [((0, 1), 10)], 2, 11, 20)]),
    SubgroupBase("sub-genus2-f3-c", 3, "y^2=2x^5+x^4+x", 6, (22,),
                 [(0,), (11,), (12,), (10,), (3,), (19,)], [(11, None, 2, 12, 22)]),
    SubgroupBase("sub-genus2-f9", 9, "y^3-y=x+1/x", 20, (15, 15),
                 [(0, 13), (0, 8), (7, 9), (8, 12), (14, 13), (1, 8), (6, 12), (9, 9),
                  (14, 2), (1, 4), (2, 9), (13, 12), (4, 7), (11, 14), (9, 6), (6, 0),
                  (4, 8), (11, 13), (0, 6), (0, 0)],
                 [(3, [((5, 5), 15)], 10, 4, 30), (9, [((1, 0), 3), ((0, 1), 3)], 6, 10, 54)]),
    SubgroupBase("sub-genus3-f3-quartic", 3, "2x^3y+2x^3z+x^2y^2+xz^3+2y^3z+yz^3=0", 10,
                 (14, 14),
                 [(0, 0), (1, 0), (6, 13), (7, 3), (13, 7), (4, 12), (11, 11), (6, 2), (4, 7)],
                 [(7, [((0, 1), 7)], 4, 15, 28)]),
    SubgroupBase("sub-genus3-f3-a", 3, "y^2+(x^3-x)y=x^7-x^2+x", 5, (2, 2, 12),
                 [(0, 0, 0), (0, 0, 6), (0, 1, 0), (0, 0, 11), (0, 0, 1)],
                 [(12, None, 3, 25, 36)]),
    SubgroupBase("sub-genus3-f3-b", 3, "y^2=x^7-x^2+x", None, (2, 2, 14), None,
                 [(14, None, 3, 29, 42)]),
    SubgroupBase("sub-genus4-f3", 3, "y^2+xy=x^9-x", 6, (2, 126),
                 [(0, 0), (1, 0), (0, 125), (0, 1), (0, 14), (0, 112)],
                 [(14, None, 4, 43, 56)]),
    SubgroupBase("sub-genus2-f4", 4, "y^2+y=x^5+x^3+x", None, (7, 7), None,
                 [(7, None, 3, 8, 21)]),
]

SUBGROUP_F9 = SubgroupBase(
    "sub-genus3-f9", 9, "y^3-y=a^2x^4", 28, (4, 4, 4, 4, 4, 4),
    [(0, 0, 0, 0, 0, 0), (3, 1, 3, 3, 0, 1), (3, 2, 1, 0, 3, 0), (2, 0, 3, 1, 1, 3),
     (2, 1, 1, 1, 1, 3), (2, 2, 0, 1, 1, 3), (3, 1, 0, 1, 1, 3), (1, 1, 0, 0, 1, 3),
     (2, 1, 0, 2, 1, 3), (1, 3, 3, 2, 0, 3), (1, 2, 2, 3, 2, 0), (0, 2, 3, 2, 1, 2),
     (2, 0, 0, 0, 1, 2), (1, 1, 3, 1, 2, 0), (3, 2, 1, 2, 0, 3), (0, 0, 1, 3, 2, 1),
     (0, 3, 1, 1, 2, 2), (2, 0, 2, 3, 3, 2), (3, 3, 0, 3, 2, 3), (3, 1, 2, 0, 1, 0),
     (0, 3, 2, 0, 0, 2), (1, 1, 1, 2, 1, 1), (1, 2, 0, 3, 3, 3), (0, 0, 3, 2, 3, 1),
     (2, 1, 0, 1, 1, 0), (2, 1, 0, 1, 0, 2), (2, 1, 0, 1, 2, 3), (2, 1, 0, 1, 1, 3)],
    [(2, [((2, 0, 0, 0, 0, 0), 4)], 16, 5, 32),
     (4, [((0, 1, 1, 1, 1, 0), 4)], 12, 9, 48)])


def _subgroup_cover_with(st, d, count):
    """Cover from an index-d subgroup and a base point whose coset holds
    exactly ``count`` rational points (the most points if count is None)."""
    from .search import search_subgroups
    rat = rational_places(st.curve)
    hits = search_subgroups(st.invariants, [st.place_class(pl) for pl in rat], [d])
    if count is not None:
        hits = [h for h in hits if len(h.covered) == count]
    if not hits:
        return None
    h = hits[0]
    return subgroup_cover_report(SubgroupCoverSpec(st, h.subgroup, rat[h.base], d))


def _printed_coset_count(images, moduli, H=None, S=None, d=None):
    """Printed images in the coset (of the printed subgroup) of the printed
    base point, i.e. the image equal to zero."""
    mods = list(moduli)
    zero = tuple(0 for _ in mods)
    if zero not in [tuple(v) for v in images]:
        return None
    if H is not None:
        return sum(1 for v in images if tuple(v) in H)
    return max(sum(1 for v in images if in_annihilator(tuple(v), S2, mods))
               for S2 in subgroups_of_index(mods, d))


def _subgroup_base(ctx: _Ctx, base: SubgroupBase):
    F = field_of_size(base.q)
    C = parse_curve(base.curve, F)
    rat = rational_places(C)
    if base.npoints is not None:
        ctx.check(f"{base.key} rational points", base.npoints, len(rat))
    st = class_group_structure(C)
    ctx.check(f"{base.key} class group", _abstract(base.invariants), tuple(st.invariants))
    _class_number_check(ctx, C, st, base.key)
    if base.images is not None:
        classes = [st.place_class(pl) for pl in rat]
        sigma = match_image_table(base.images, base.invariants, classes, st.invariants)
        ctx.check(f"{base.key} printed image table realised up to isomorphism", True,
                  sigma is not None)
        if len(base.images) < len(rat):
            ctx.known(f"{base.key} image table", f"{len(base.images)} images",
                      f"{len(rat)} rational points",
                      "the printed table omits one image; the remaining images embed "
                      "consistently into the computed table")
    for d, congr, k, g, N in base.covers:
        if congr is not None and base.images is not None:
            H = Subgroup.from_congruences(base.invariants, congr)
            ctx.check(f"{base.key} printed subgroup has index {d}", d, H.index)
            ctx.check(f"{base.key} printed images in the index-{d} subgroup", k,
                      _printed_coset_count(base.images, base.invariants, H=H))
        elif base.images is not None:
            ctx.check(f"{base.key} printed images in the best index-{d} subgroup", k,
                      _printed_coset_count(base.images, base.invariants, d=d))
        rep = _subgroup_cover_with(st, d, k)
        ctx.check(f"{base.key} index-{d} cover with {k} split points (g, N)", (g, N),
                  (rep.genus, rep.points) if rep else None)
        if rep:
            ctx.result(base.q, rep.genus, rep.points,
                       f"subgroup index {d} over F_{base.q} {base.curve}")


def _as_relation_on_subgroup_base(ctx: _Ctx):
    """The genus-2 curve y^3-y=x-1/x: the relation sum P_i ~ 4 Q_2."""
    F = field_of_size(3)
    C = parse_curve("y^3-y=x-1/x", F)
    rat = rational_places(C)
    D = Divisor.from_vector(rat, [1] * len(rat))
    for Q in enumerate_places(C, 2):
        if is_principal(C, D - Divisor({Q: 4})):
            break
    else:
        ctx.check("sub-genus2-f3-a degree-2 place Q2 with sum P_i ~ 4 Q2", True, False)
        return
    st = class_group_structure(C)
    ctx.check("sub-genus2-f3-a degree-2 place Q2 with sum P_i ~ 4 Q2", True, True)
    f = function_with_divisor(C, D - Divisor({Q: 4}))
    rep = as_cover_report(ASCoverSpec(C, [f]))
    ctx.check("sub-genus2-f3-a AS cover of sum P_i - 4 Q2 (g, N)", (14, 24),
              (rep.genus, rep.points))
    ctx.result(3, rep.genus, rep.points, "AS<sum P_i - 4Q2> over F_3 y^3-y=x-1/x")
    # Q2 maps to [2,1] in the printed coordinates, i.e. Q2 - 2B has that image
    # for the printed base point B: try every rational point as B
    base = SUBGROUP_BASES[2]
    inv = st.invariants
    cQ = st.place_class(Q)
    sigma = None
    for r in range(len(rat)):
        order = [rat[r]] + rat[:r] + rat[r + 1:]
        classes = [st.place_class(pl) for pl in order]
        adj = tuple((a - b) % d for a, b, d in zip(cQ, classes[0], inv))
        sigma = match_image_table(list(base.images) + [(2, 1)], base.invariants,
                                  classes + [adj], inv)
        if sigma is not None:
            break
    ctx.check("sub-genus2-f3-a image of Q2 consistent with printed [2,1]", True,
              sigma is not None)


# ----------------------------------------------------------------------------------
# data: covers over extension fields
# ----------------------------------------------------------------------------------

@dataclass
class ExtensionRow:
    printed_counts: tuple
    g: int
    N: int
    witness: str | None            # curve equation over F_q (None: use the counts)
    witness_counts: tuple | None = None   # when the printed counts are wrong


@dataclass
class ExtensionTable:
    key: str
    q: int                  # field of the base curve
    genus: int
    n: int                  # extension degree of the cover's field
    rows: list
    base_change: int = 1    # view the base curve over F_{q^base_change} first


EXTENSION_TABLES = [
    ExtensionTable("ext-genus2-f2-n2", 2, 2, 2, [
        ExtensionRow((5, 9), 4, 15, "y^2+y=x^5+x"),
        ExtensionRow((4, 10), 6, 20, "y^2+y=x^2/(x^3+x^2+1)"),
        ExtensionRow((3, 9), 8, 21, "y^2+y=x^5+x^3+x")]),
    ExtensionTable("ext-genus2-f2-n3", 2, 2, 3, [
        ExtensionRow((5, 7), 8, 35, "y^2+y=(x+1)/(x(x^2+x+1))"),
        ExtensionRow((5, 5), 14, 65, "y^2+y=x^5+x^3"),
        ExtensionRow((4, 4), 20, 76, "y^2+y=1/x+x^3")]),
    ExtensionTable("ext-genus2-f4-n2", 4, 2, 2, [
        ExtensionRow((9, 24), 9, 72, "y^2+(x^3+(a)x^2+(a)x+1)y=x^5+(a)x^4+(a+1)x^3", (9, 23)),
        ExtensionRow((9, 25), 10, 81,
                     "y^2+(x^3+x^2+x+1)y=x^6+x^5+(a+1)x^4+(a)x^3+x^2+(a)x"),
        ExtensionRow((8, 24), 11, 80,
                     "y^2+(x^3+(a)x^2+x+(a))y=(a+1)x^5+(a+1)x^4+(a)x^3+x^2+(a+1)x+(a+1)"),
        ExtensionRow((8, 26), 12, 88,
                     "y^2+(x^3+(a+1)x^2+(a+1)x+(a+1))y=x^6+(a+1)x^5+(a)x^4+x^3+(a)x^2"),
        ExtensionRow((7, 27), 15, 98,
                     "y^2+(x^3+(a)x^2+x+1)y=x^6+(a+1)x^5+(a+1)x^4+(a)x^2+(a+1)x+(a)"),
        ExtensionRow((7, 31), 17, 112,
                     "y^2+(x^2+(a)x+(a+1))y=x^6+(a)x^5+(a)x^4+x^3+(a+1)x^2+(a)")]),
    ExtensionTable("ext-genus2-f8-n2", 8, 2, 2, []),      # rows filled below
    ExtensionTable("ext-genus2-f3-n2", 3, 2, 2, [
        ExtensionRow((8, 14), 5, 32, "y^2=x^6+x^4+x^2+1"),
        ExtensionRow((7, 15), 6, 35, "y^2=x^5-x+1"),
        ExtensionRow((6, 16), 8, 42, "y^2=x^6+x^5+x^2+x+1"),
        ExtensionRow((6, 18), 9, 48, "y^2=x^5+x^2+1"),
        ExtensionRow((6, 20), 10, 54, "y^2=x^6-x^4-x^2-1")]),
    ExtensionTable("ext-genus2-f9-n2", 9, 2, 2, []),      # rows filled below
    ExtensionTable("ext-genus2-f3-n3", 3, 2, 3, [
        ExtensionRow((8, 10), 26, 200, "y^2=x^6+x^5+x^3-x^2+x+1"),
        ExtensionRow((7, 13), 29, 196, "y^2=x^5-x^3+1"),
        ExtensionRow((7, 11), 40, 273, "y^2=x^5+x^3+x+1")]),
    ExtensionTable("ext-genus3-f2-n2", 2, 3, 2, [
        ExtensionRow((5, 9, 5), 15, 35, "x^3y+x^3z+xz^3+y^4=0"),
        ExtensionRow((5, 11, 5), 17, 40, "x^3z+x^2y^2+x^2yz+xy^2z+xz^3+y^4=0"),
        ExtensionRow((4, 12, 7), 27, 52, "x^4+x^3y+x^2y^2+x^2yz+xz^3+y^3z=0")]),
    ExtensionTable("ext-genus3-f4-n2", 2, 3, 2, [
        ExtensionRow((4, 12, 7), 27, 156, "x^4+x^3y+x^2y^2+x^2yz+xz^3+y^3z=0"),
        ExtensionRow((3, 11, 6), 35, 187, "x^4+x^3y+x^2y^2+x^2yz+xyz^2+xz^3+y^3z=0"),
        ExtensionRow((5, 11, 5), 41, 220, "x^3z+x^2y^2+x^2yz+xy^2z+xz^3+y^4=0")],
        base_change=2),
    ExtensionTable("ext-genus4-f2", 2, 4, 2, [
        ExtensionRow((6, 10, 6, 26), 28, 54, "y^2+(x^5+x^3+1)y=x^4+x^3+x^2+x")]),
]

#: witnesses for the F_8 and F_9 tables are shipped in data/witnesses.txt
_F8_TABLE = [((18, 54), 20, 342), ((17, 63), 25, 408), ((17, 65), 26, 425), ((16, 64), 27, 416),
             ((16, 70), 30, 464), ((15, 71), 33, 480), ((14, 66), 34, 462), ((15, 75), 35, 510),
             ((14, 70), 36, 490), ((15, 79), 37, 540), ((14, 74), 38, 518), ((13, 67), 39, 494),
             ((14, 78), 40, 546), ((14, 80), 41, 560), ((14, 82), 42, 574), ((12, 66), 44, 516),
             ((13, 79), 45, 572), ((13, 81), 46, 585), ((13, 83), 47, 598), ((12, 74), 48, 564),
             ((13, 87), 49, 624), ((12, 78), 50, 588)]

_F9_TABLE = [((20, 68), 26, 500), ((19, 75), 30, 551), ((18, 78), 33, 576), ((18, 80), 34, 594),
             ((18, 82), 35, 612), ((18, 86), 37, 648), ((17, 83), 38, 629), ((17, 85), 39, 646),
             ((17, 87), 40, 663), ((17, 89), 41, 680), ((17, 91), 42, 697), ((16, 86), 43, 672),
             ((16, 90), 45, 704), ((16, 92), 46, 720), ((15, 85), 47, 690), ((16, 96), 48, 752),
             ((16, 86), 49, 672), ((16, 100), 50, 784)]

#: quartics over F_3 by their monomial code: (m, N1, L(-1), g, N over F_9)
PLANE_F3 = [(687439, 8, 12, 25, 96), (787452, 8, 13, 27, 104), (687411, 7, 17, 35, 119),
            (787567, 7, 18, 37, 126), (884286, 7, 20, 41, 140), (687541, 7, 21, 43, 147)]

#: the genus-4 base given only by its L-polynomial; realised as the double
#: cover w^2 + w = f1 of the genus-1 curve above
GENUS4_L = "16t^8+40t^7+56t^6+56t^5+44t^4+28t^3+14t^2+5t+1"


def _load_witnesses():
    from .records import data_text
    out = {}
    for line in data_text("witnesses.txt").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        q, counts, eq = line.split(" ", 2)
        out[(int(q), tuple(int(c) for c in counts.split(",")))] = eq
    return out


def _extension_table(ctx: _Ctx, tab: ExtensionTable):
    F = field_of_size(tab.q)
    rows = tab.rows
    if tab.key == "ext-genus2-f8-n2":
        W = _load_witnesses()
        rows = [ExtensionRow(c, g, N, W.get((8, c))) for c, g, N in _F8_TABLE]
    elif tab.key == "ext-genus2-f9-n2":
        W = _load_witnesses()
        rows = [ExtensionRow(c, g, N, W.get((9, c))) for c, g, N in _F9_TABLE]
    genera = {}
    for row in rows:
        genera.setdefault(row.printed_counts, set()).add(row.g)
    seen_counts = {}
    for row in rows:
        item = f"{tab.key} {list(row.printed_counts)}"
        if row.witness is None:
            ctx.check(f"{item} witness curve available", True, False)
            continue
        C = parse_curve(row.witness, F)
        ctx.check(f"{item} witness genus", tab.genus, C.genus)
        counts = tuple(count_points(C, k) for k in range(1, tab.genus + 1))
        expected_counts = row.witness_counts or row.printed_counts
        ctx.check(f"{item} witness counts", expected_counts, counts)
        qq = tab.q
        if tab.base_change > 1:
            b = tab.base_change
            counts_b = tuple(count_points(C, b * k) for k in range(1, tab.genus + 1))
            qq = tab.q ** b
            rep = extension_cover_from_counts(list(counts_b), qq, tab.n, C.text)
        else:
            rep = extension_cover_from_counts(list(counts), qq, tab.n, C.text)
        if len(genera[row.printed_counts]) > 1:
            # the same counts are printed with several genera: only one can be
            # right, so the genus is reported as a tension rather than checked
            ctx.check(f"{item} g={row.g} N >= d N1", row.N, rep.points)
            ctx.check(f"{item} computed genus among the printed ones", True,
                      rep.genus in genera[row.printed_counts])
        else:
            ctx.check(f"{item} (g, N >= d N1)", (row.g, row.N), (rep.genus, rep.points))
        ctx.result(rep.q, rep.genus, rep.points,
                   f"extension n={tab.n} d={rep.degree} over F_{qq} {C.text}")
        if row.witness_counts is not None:
            ctx.known(item, list(row.printed_counts), list(counts),
                      "no genus-2 curve has the printed counts (they force a non-integral "
                      "L-polynomial coefficient); the row's (g, N) is produced by the "
                      "recomputed counts")
            try:
                l_from_counts(list(row.printed_counts), tab.q, tab.genus)
                integral = True
            except ZetaError:
                integral = False
            ctx.check(f"{item} printed counts admit an integral L-polynomial", False, integral)
        seen_counts.setdefault(row.printed_counts, []).append(row)
    for counts, rs in seen_counts.items():
        gs = sorted({r.g for r in rs})
        if len(gs) > 1:
            ctx.report.tensions.append(
                f"{tab.key}: counts {list(counts)} printed with genera {gs}; the counts "
                f"determine the L-polynomial, so only one genus is possible")


def _plane_f3(ctx: _Ctx):
    from .search import decode_plane_curve
    F = field_of_size(3)
    for m, N1, Lm1, g, N in PLANE_F3:
        C = decode_plane_curve(m, F)
        counts = [count_points(C, k) for k in range(1, 4)]
        ctx.check(f"plane-f3 m={m} N1", N1, counts[0])
        L = l_from_counts(counts, 3, 3)
        ctx.check(f"plane-f3 m={m} L(-1)", Lm1, L(-1))
        rep = extension_cover_from_counts(counts, 3, 2, C.text)
        ctx.check(f"plane-f3 m={m} (g, N)", (g, N), (rep.genus, rep.points))
        ctx.result(9, rep.genus, rep.points, f"extension n=2 over F_3 quartic m={m}")


def _genus4_from_l(ctx: _Ctx):
    from .covers import cover_points
    F = field_of_size(2)
    E = parse_curve("y^2+y=x^3+x", F)
    f1 = parse_function(E, "(x^2+x*y+y+1)/x")
    spec = ASCoverSpec(E, [f1])
    counts = [cover_points(spec, k) for k in range(1, 5)]
    ctx.check("ext-genus4-f2 witness for the printed L-polynomial: counts", [8, 8, 8, 16], counts)
    L = l_from_counts(counts, 2, 4)
    ctx.check("ext-genus4-f2 printed L-polynomial", parse_l(GENUS4_L, 2).descending(),
              L.descending())
    rep = extension_cover_from_counts(counts, 2, 3, "w^2+w=f1 over y^2+y=x^3+x")
    ctx.check("ext-genus4-f2 [8,8,8,16] degree", 13, rep.degree)
    ctx.check("ext-genus4-f2 [8,8,8,16] (g, N) over F_8", (40, 104), (rep.genus, rep.points))
    ctx.result(rep.q, rep.genus, rep.points, "extension n=3 d=13 over genus-4 [8,8,8,16]")


# ----------------------------------------------------------------------------------
# records
# ----------------------------------------------------------------------------------

#: (q, g, N) improvements against the older intervals
EXPECTED_IMPROVEMENTS = [(2, 32, 27), (2, 43, 34), (2, 24, 22), (2, 61, 45), (3, 30, 38),
                         (3, 44, 47), (3, 18, 28), (3, 43, 56), (8, 20, 76), (4, 28, 54),
                         (8, 40, 104), (16, 12, 88), (16, 27, 156), (16, 41, 220)]


def classify_results(results, snapshot="pre"):
    table = load(snapshot)
    out = {}
    for scope, q, g, N, cert in results:
        out.setdefault((q, g, N), (classify(table, q, g, N), cert))
    return out


def _records(ctx: _Ctx, results):
    post = classify_results(results, "post")
    exceeded = [k for k, (c, _) in post.items() if c == "exceeds_upper"]
    ctx.check("records: no reproduced result exceeds a proved upper bound (final tables)",
              [], exceeded)
    pre = classify_results(results, "pre")
    exceeded = [k for k, (c, _) in pre.items() if c == "exceeds_upper"]
    ctx.check("records: no reproduced result exceeds a proved upper bound (older tables)",
              [], exceeded)
    for key in EXPECTED_IMPROVEMENTS:
        got = pre.get(key, (None,))[0]
        ok = got in (IMPROVES, NEW_ENTRY)
        ctx.check(f"records: {key} improves the older interval", True, ok)


# ----------------------------------------------------------------------------------
# scopes
# ----------------------------------------------------------------------------------

def _scope_relation(base):
    return lambda ctx: _relation_base(ctx, base)


def _scope_subgroups(ctx):
    for base in SUBGROUP_BASES:
        _subgroup_base(ctx, base)
    _as_relation_on_subgroup_base(ctx)


def _scope_extensions(ctx):
    for tab in EXTENSION_TABLES:
        _extension_table(ctx, tab)
    _genus4_from_l(ctx)
    _plane_f3(ctx)


#: scope name -> (runner, stretch?)
SCOPES = {
    "census": (_census, False),
    "genus1-f2": (_genus1_f2, False),
    "genus2-f2": (_scope_relation(G2F2), False),
    "genus3-f2": (_scope_relation(G3F2), False),
    "genus5-f2": (_scope_relation(G5F2), True),
    "genus1-f3": (_scope_relation(G1F3), False),
    "genus2-f3": (_scope_relation(G2F3), False),
    "genus3-f3": (_scope_relation(G3F3), False),
    "subgroups": (_scope_subgroups, False),
    "subgroups-f9": (lambda ctx: _subgroup_base(ctx, SUBGROUP_F9), True),
    "extensions": (_scope_extensions, False),
}


def genus5_base_checks(ctx: _Ctx):
    """Counts and L-polynomial factorisation of the genus-5 fibre product
    (cheap; the class group and relations are in the stretch scope)."""
    F = field_of_size(2)
    C = parse_curve(G5F2.curve, F)
    ctx.check("genus5-f2 genus", 5, C.genus)
    counts = [count_points(C, k) for k in range(1, 6)]
    ctx.check("genus5-f2 rational points", 9, counts[0])
    L = l_from_counts(counts, 2, 5)
    prod = [1]
    for t in ("2t^2+2t+1", "4t^4+4t^3+2t^2+2t+1", "4t^4+4t^3+4t^2+2t+1"):
        prod = _poly_mul(prod, _poly_from_text(t))
    ctx.check("genus5-f2 L-polynomial factors", list(prod), list(L.coeffs))
    return C


def _poly_from_text(text):
    """Ascending integer coefficients of a polynomial in t."""
    import re
    out = {}
    for term in re.split(r"(?=[+-])", text.replace(" ", "")):
        if not term:
            continue
        m = re.fullmatch(r"([+-]?\d*)(t(\^(\d+))?)?", term)
        c = m.group(1)
        c = int(c) if c not in ("", "+", "-") else (-1 if c == "-" else 1)
        e = 0 if m.group(2) is None else int(m.group(4) or 1)
        out[e] = out.get(e, 0) + c
    return [out.get(i, 0) for i in range(max(out) + 1)]


def _poly_mul(a, b):
    r = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            r[i + j] += x * y
    return r


SCOPES["genus5-f2-base"] = (genus5_base_checks, False)
SCOPES["records"] = (None, False)

DEFAULT_ORDER = ["census", "genus1-f2", "genus2-f2", "genus3-f2", "genus5-f2-base",
                 "genus1-f3", "genus2-f3", "genus3-f3", "subgroups", "extensions",
                 "genus5-f2", "subgroups-f9", "records"]


def scope_names(stretch: bool = True):
    return [s for s in DEFAULT_ORDER if stretch or not SCOPES[s][1]]


def verify(scope="all", stretch: bool = False, progress=None) -> VerificationReport:
    """Run the named scopes ('all', a scope name, or a list of names).  The
    records scope classifies everything reproduced by the other scopes that
    ran in the same call."""
    if scope in ("all", None):
        names = scope_names(stretch)
    elif isinstance(scope, str):
        names = [scope] if scope else []
    else:
        names = list(scope)
    unknown = [n for n in names if n not in SCOPES]
    if unknown:
        raise ValueError(f"reproduce.verify: unknown scope(s) {unknown}; "
                         f"known: {', '.join(DEFAULT_ORDER)}")
    report = VerificationReport()
    for name in names:
        t0 = time.time()
        if progress:
            progress(f"verify: {name} ...")
        ctx = _Ctx(name, report)
        report.scopes.append(name)
        if name == "records":
            results = report.results
            if not results:
                sub = verify([n for n in scope_names(False) if n != "records"], progress=progress)
                results = sub.results
            _records(ctx, results)
        else:
            SCOPES[name][0](ctx)
        report.timings[name] = time.time() - t0
        if progress:
            bad = sum(1 for c in report.by_scope(name) if not c.ok)
            progress(f"verify: {name} done in {report.timings[name]:.1f}s, {bad} failing")
    return report


def verify_records(results) -> VerificationReport:
    """The records scope alone, over results gathered elsewhere (e.g. by
    scopes run in separate processes)."""
    report = VerificationReport()
    t0 = time.time()
    report.scopes.append("records")
    _records(_Ctx("records", report), results)
    report.timings["records"] = time.time() - t0
    return report
