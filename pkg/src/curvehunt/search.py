"""The hunting engine: enumeration of curve families, relation-vector search,
subgroup search, and a driver that turns base curves into classified cover
certificates."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .abelian import subgroups_of_index
from .covers import (ASCoverSpec, CoverError, CoverReport, Subgroup, SubgroupCoverSpec,
                     as_cover_report, coset_classes, extension_cover_report, subgroup_cover_report)
from .curves import (CurveError, CurveModel, Divisor, Hyperelliptic, Plane, count_points,
                     parse_curve, rational_places)
from .ff import Field
from .jacobian import ClassGroupStructure, class_group_structure, function_with_divisor, is_principal
from .records import EXCEEDS, RecordTable, classify
from .zeta import LPolynomial, l_from_counts

#: largest number of candidate models / vectors examined by one call
DEFAULT_BUDGET = 2_000_000


class SearchError(ValueError):
    pass


# ----------------------------------------------------------------------------------
# plane quartic encoding
# ----------------------------------------------------------------------------------

#: the 15 degree-4 monomials x^i y^j z^k, descending pure lex with x > y > z
PLANE_MONOMIALS = tuple(sorted(((i, j, 4 - i - j) for i in range(5) for j in range(5 - i)),
                               reverse=True))


def decode_plane_curve(m: int, field: Field) -> Plane:
    """The quartic sum c_i M_i with m = sum c_i q^(i-1) (digits c_i are the
    integer encodings of field elements)."""
    q = field.q
    if not 1 <= m < q ** 15:
        raise SearchError(f"search.decode_plane_curve: m must lie in [1, {q}^15)")
    poly = {}
    for mono in PLANE_MONOMIALS:
        m, c = divmod(m, q)
        if c:
            poly[mono] = c
    try:
        return Plane(field, poly)
    except CurveError as exc:
        raise SearchError(f"search.decode_plane_curve: {exc}") from None


def encode_plane_curve(curve: Plane) -> int:
    if not isinstance(curve, Plane) or curve.degree != 4:
        raise SearchError("search.encode_plane_curve: need a plane quartic")
    q = curve.field.q
    return sum(curve.poly.get(mono, 0) * q ** i for i, mono in enumerate(PLANE_MONOMIALS))


# ----------------------------------------------------------------------------------
# families
# ----------------------------------------------------------------------------------

_INVARIANTS: dict = {}


def curve_counts(curve: CurveModel) -> tuple:
    """(N_1, ..., N_g), cached per curve."""
    key = (curve.field.q, curve.field.modulus, type(curve).__name__, curve._data())
    hit = _INVARIANTS.get(key)
    if hit is None:
        hit = tuple(count_points(curve, n) for n in range(1, curve.genus + 1))
        _INVARIANTS[key] = hit
    return hit


def curve_l_polynomial(curve: CurveModel) -> LPolynomial:
    return l_from_counts(curve_counts(curve), curve.field.q, curve.genus)


@dataclass
class FamilyDescriptor:
    """kind: 'hyperelliptic' (bounds h_degree, f_degree, genus), 'plane4'
    (bounds m_values or m_range), or 'explicit' (bounds curves: list of
    equations).  Optional bounds: limit (models scanned), stride (scan the
    coefficient space in a fixed permuted order), targets (stop once every
    listed count signature has appeared)."""

    kind: str
    field: Field
    bounds: dict = field(default_factory=dict)
    dedup: str | None = "L"            # 'L', 'counts' or None

    def __post_init__(self):
        if self.kind not in ("hyperelliptic", "plane4", "explicit"):
            raise SearchError(f"search: unknown family kind {self.kind!r}")
        if self.dedup not in ("L", "counts", None):
            raise SearchError(f"search: unknown dedup mode {self.dedup!r}")


def _coprime_stride(total: int) -> int:
    s = max(1, int(total * 0.6180339887))
    while math.gcd(s, total) != 1:
        s += 1
    return s


def _hyperelliptic_models(desc: FamilyDescriptor):
    F = desc.field
    q = F.q
    b = desc.bounds
    dh, df = b.get("h_degree"), b.get("f_degree")
    if dh is None or df is None or "genus" not in b:
        raise SearchError("search: hyperelliptic family needs h_degree, f_degree and genus")
    if F.p == 2:
        # y -> c y rescales h, so h may be taken monic
        hs = [list(c) + [1] for d in range(0, dh + 1) for c in itertools.product(range(q), repeat=d)]
    else:
        hs = [[]] if dh <= 0 else [list(c) for c in itertools.product(range(q), repeat=dh + 1)]
    nf = q ** (df + 1)
    total = len(hs) * nf
    limit = b.get("limit", DEFAULT_BUDGET)
    if total > limit and not b.get("stride"):
        raise SearchError(f"search: family has {total} models, above the budget {limit}; "
                          "pass stride=True with a limit to sample it")
    stride = _coprime_stride(total) if b.get("stride") else 1
    for i in range(min(total, limit)):
        idx = (i * stride) % total
        hi, fi = divmod(idx, nf)
        fc = []
        for _ in range(df + 1):
            fi, c = divmod(fi, q)
            fc.append(c)
        yield hs[hi], fc


def _family_curves(desc: FamilyDescriptor):
    F = desc.field
    b = desc.bounds
    if desc.kind == "hyperelliptic":
        g = b["genus"]
        for h, f in _hyperelliptic_models(desc):
            try:
                c = Hyperelliptic(F, h, f)
            except CurveError:
                continue
            if c.genus == g:
                yield c
    elif desc.kind == "plane4":
        if "m_values" in b:
            ms = list(b["m_values"])
        elif "m_range" in b:
            lo, hi = b["m_range"]
            if hi - lo > b.get("limit", DEFAULT_BUDGET):
                raise SearchError("search: m_range exceeds the budget")
            ms = range(lo, hi)
        else:
            raise SearchError("search: plane4 family needs m_values or m_range")
        for m in ms:
            try:
                yield decode_plane_curve(m, F)
            except SearchError:
                continue
    else:
        for text in b.get("curves", []):
            yield parse_curve(text, F)


def enumerate_family(desc: FamilyDescriptor):
    """Deterministic stream of curves of the family, deduplicated by
    L-polynomial (default), by count signature, or not at all."""
    seen = set()
    targets = set(tuple(t) for t in desc.bounds.get("targets", ()))
    for c in _family_curves(desc):
        if desc.dedup is not None or targets:
            counts = curve_counts(c)
            key = counts if desc.dedup == "counts" else curve_l_polynomial(c).coeffs
            if desc.dedup is not None:
                if key in seen:
                    continue
                seen.add(key)
            if targets:
                sig = counts[:len(next(iter(targets)))]
                if sig not in targets:
                    continue
                targets.discard(sig)
                yield c
                if not targets:
                    return
                continue
        yield c


# ----------------------------------------------------------------------------------
# relations
# ----------------------------------------------------------------------------------

@dataclass
class RelationVector:
    curve: CurveModel
    places: tuple
    coeffs: tuple
    predicted_N: int = 0
    predicted_genus: int = 0

    def divisor(self) -> Divisor:
        return Divisor.from_vector(list(self.places), list(self.coeffs))

    def function(self):
        return function_with_divisor(self.curve, self.divisor())

    def pole_orders(self):
        return [(pl, -a) for pl, a in zip(self.places, self.coeffs) if a < 0]

    def cover_report(self) -> CoverReport:
        return as_cover_report(ASCoverSpec(self.curve, [self.function()]))


def _predict(curve: CurveModel, places, coeffs):
    p = curve.field.p
    g = curve.genus
    N = 0
    cond = 0
    for pl, a in zip(places, coeffs):
        if a > 0 and pl.degree == 1:
            N += p
        elif a < 0:
            if pl.degree == 1:
                N += 1
            cond += (-a + 1) * pl.degree
    two_g = p * (2 * g - 2) + (p - 1) * cond
    return N, two_g // 2 + 1


def search_relations(curve: CurveModel, structure: ClassGroupStructure, bounds: dict):
    """All nonzero relations sum a_i P_i ~ 0 within the bounds, certified by
    is_principal, ranked by (predicted N desc, predicted genus asc).

    bounds: max_coeff (required), places (default: rational places),
    max_pole_degree (optional), budget (optional)."""
    A = bounds.get("max_coeff")
    if A is None or A < 0:
        raise SearchError("search.search_relations: max_coeff is required")
    places = list(bounds.get("places") or rational_places(curve))
    budget = bounds.get("budget", DEFAULT_BUDGET)
    if (2 * A + 1) ** len(places) > budget:
        raise SearchError("search.search_relations: bounds exceed the search budget")
    max_pole = bounds.get("max_pole_degree")
    inv = structure.invariants
    cls = [structure.place_class(pl) for pl in places]
    degs = [pl.degree for pl in places]
    out = []
    for vec in itertools.product(range(-A, A + 1), repeat=len(places)):
        if not any(vec) or sum(a * d for a, d in zip(vec, degs)):
            continue
        if max_pole is not None and sum(-a * d for a, d in zip(vec, degs) if a < 0) > max_pole:
            continue
        if any(sum(a * c[i] for a, c in zip(vec, cls)) % d for i, d in enumerate(inv)):
            continue
        D = Divisor.from_vector(places, list(vec))
        if not is_principal(curve, D):
            raise AssertionError("search: class-sum test and principality disagree")
        N, g = _predict(curve, places, vec)
        out.append(RelationVector(curve, tuple(places), tuple(vec), N, g))
    out.sort(key=lambda r: (-r.predicted_N, r.predicted_genus, r.coeffs))
    return out


# ----------------------------------------------------------------------------------
# subgroups
# ----------------------------------------------------------------------------------

@dataclass
class SubgroupHit:
    subgroup: Subgroup
    index: int
    covered: tuple          # indices of the images whose difference to the base lies in H
    base: int               # index of the base image

    @property
    def score(self) -> int:
        return self.index * len(self.covered)


def search_subgroups(invariants, images, index_range, order_bound: int = 5000):
    """All pairs (subgroup H with index in index_range, coset of H holding
    at least one image), ranked by index * (images in the coset).  Taking a
    point of the coset as base, the corresponding unramified cover of
    degree index splits exactly those points."""
    inv = list(invariants)
    if math.prod(inv) > order_bound:
        raise SearchError("search.search_subgroups: group order exceeds the bound")
    imgs = [tuple(getattr(v, "residues", v)) for v in images]
    hits = []
    for d in index_range:
        for S in subgroups_of_index(inv, d):
            H = Subgroup.from_dual(inv, S)
            for members in coset_classes(imgs, S, inv).values():
                hits.append(SubgroupHit(H, d, tuple(members), members[0]))
    hits.sort(key=lambda h: (-h.score, h.index, h.covered, sorted(h.subgroup.dual)))
    return hits


# ----------------------------------------------------------------------------------
# hunting
# ----------------------------------------------------------------------------------

@dataclass
class HuntEntry:
    q: int
    g: int
    N: int
    bound_flag: str          # exact | lower
    certificate: str
    classification: str | None = None

    def as_dict(self) -> dict:
        return {"q": self.q, "g": self.g, "N": self.N, "bound_flag": self.bound_flag,
                "certificate": self.certificate, "classification": self.classification}


@dataclass
class HuntReport:
    entries: list = field(default_factory=list)
    partial: bool = False

    def matches(self):
        return [e for e in self.entries if e.classification == "matches_lower"]

    def improvements(self):
        return [e for e in self.entries if e.classification == "improves_lower"]


def _entry_from_report(rep: CoverReport, cert: str) -> HuntEntry:
    return HuntEntry(rep.q, rep.genus, rep.points, "lower" if rep.lower_bound else "exact", cert)


def _bases(families):
    for fam in families:
        if isinstance(fam, CurveModel):
            yield fam
        elif isinstance(fam, FamilyDescriptor):
            yield from enumerate_family(fam)
        else:
            raise SearchError(f"search.hunt: cannot hunt over {type(fam).__name__}")


def hunt(families, strategies: dict, records: RecordTable | None = None,
         budget: int | None = None) -> HuntReport:
    """Run the strategies over every base curve.

    strategies keys:
      relations:  {"vectors": [...], "places": [...]} explicit relations, or
                  {"max_coeff": A, ...} bounds for search_relations, plus
                  "fibre": r (fibre products of up to r relations) and
                  "top": k (exactly evaluated candidates, default 50)
      subgroups:  {"indices": [d, ...]}
      extensions: {"n": [n, ...]}
    """
    report = HuntReport()
    if not strategies:
        return report
    work = 0
    for base in _bases(families):
        if budget is not None and work >= budget:
            report.partial = True
            break
        work += 1
        entries = []
        rel = strategies.get("relations")
        sub = strategies.get("subgroups")
        st = None
        if rel is not None or sub is not None:
            st = class_group_structure(base)
        if rel is not None:
            if "vectors" in rel:
                places = list(rel.get("places") or rational_places(base))
                rels = [RelationVector(base, tuple(places), tuple(v)) for v in rel["vectors"]]
                fns = [r.function() for r in rels]
            else:
                # keep the best-ranked relations that define a genuine cover
                rels, fns = [], []
                for r in search_relations(base, st, rel):
                    if len(rels) >= rel.get("top", 50):
                        break
                    f = r.function()
                    try:
                        ASCoverSpec(base, [f])
                    except CoverError:
                        continue
                    rels.append(r)
                    fns.append(f)
            for r in range(1, rel.get("fibre", 1) + 1):
                for combo in itertools.combinations(range(len(rels)), r):
                    try:
                        spec = ASCoverSpec(base, [fns[i] for i in combo])
                    except CoverError:
                        continue
                    rep = as_cover_report(spec)
                    cert = ("AS<" + ",".join(str(list(rels[i].coeffs)) for i in combo)
                            + f"> over {base.text}")
                    entries.append(_entry_from_report(rep, cert))
        if sub is not None:
            rat = rational_places(base)
            images = [st.place_class(pl) for pl in rat]
            for d in sub.get("indices", []):
                hits = search_subgroups(st.invariants, images, [d])
                if hits:
                    h = hits[0]
                    rep = subgroup_cover_report(SubgroupCoverSpec(st, h.subgroup, rat[h.base], d))
                    entries.append(_entry_from_report(rep, f"subgroup index {d} over {base.text}"))
        ext = strategies.get("extensions")
        if ext is not None:
            for n in ext.get("n", []):
                rep = extension_cover_report(base, n)
                entries.append(_entry_from_report(
                    rep, f"extension n={n} d={rep.degree} over F_{base.field.q} {base.text}"))
        for e in entries:
            if records is not None:
                e.classification = classify(records, e.q, e.g, e.N)
                if e.classification == EXCEEDS:
                    raise SearchError(f"search.hunt: ({e.q}, {e.g}, {e.N}) exceeds a proved "
                                      f"upper bound; certificate {e.certificate}")
            report.entries.append(e)
    return report
