"""Covers with certified (genus, number of rational points): elementary
abelian Artin-Schreier covers (fibre products of w_i^p - w_i = f_i) of an
arbitrary base curve, and unramified abelian covers coming from subgroups of
the class group, over the base field or over an extension field.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .abelian import element_order, in_annihilator, pairing, subgroups_of_index
from .curves import (CurveFunction, CurveModel, Divisor, as_reduced_pole, count_points,
                     divisor_of, enumerate_places, rational_places)
from .ff import canonical_embedding, build_field
from .funcfield import Place
from .jacobian import ClassGroupStructure, abel_jacobi
from .series import Series
from .zeta import extension_index, l_from_counts, weil_interval


class CoverError(ValueError):
    pass


# ----------------------------------------------------------------------------------
# local Artin-Schreier reduction
# ----------------------------------------------------------------------------------

@dataclass(frozen=True)
class LocalReduction:
    place: Place
    m: int                   # reduced pole order (0: unramified here)
    residual: int | None     # constant term after reduction (residue field element)

    def __post_init__(self):
        if self.m > 0 and self.m % self.place.K.p == 0:
            raise AssertionError("covers: reduced pole order divisible by p")


def local_series(f: CurveFunction, pl: Place, prec: int = 1) -> Series:
    """Laurent expansion of f at pl in the local uniformizer, to absolute
    precision prec."""
    if pl.ff is not f.curve.function_field:
        raise CoverError("covers: place belongs to another curve")
    K = pl.K
    if f.is_zero:
        return Series.zero(K, prec)
    vn = pl.valuation(f.num)
    vd = pl.valuation(f.den)
    rel = max(1, prec - (vn - vd))
    num = pl.expand(f.num, vn + rel)
    den = pl.expand(f.den, vd + rel)
    return (num * den.inverse()).truncate(prec)


def _reduce_series(pl: Place, s: Series) -> LocalReduction:
    m, r = as_reduced_pole(pl.K, s)
    return LocalReduction(pl, m, r.coeff(0) if m == 0 else None)


def as_reduce_local(f: CurveFunction, pl: Place) -> LocalReduction:
    """Reduce f modulo {h^p - h} in the completion at pl.  The local field is
    K((t)) with K the residue field, so the subtracted h are monomials
    c^(1/p) t^(-n/p); this is the same reduction as with global h from
    Riemann-Roch spaces, since only the local class matters."""
    return _reduce_series(pl, local_series(f, pl))


# ----------------------------------------------------------------------------------
# fibre products of Artin-Schreier covers
# ----------------------------------------------------------------------------------

def characters(p: int, r: int):
    """All vectors of (Z/p)^r (including 0)."""
    return list(itertools.product(range(p), repeat=r))


def character_reps(p: int, r: int):
    """Nonzero characters up to scaling (first nonzero entry 1)."""
    return [v for v in characters(p, r) if any(v) and next(c for c in v if c) == 1]


@dataclass
class ASCoverSpec:
    base: CurveModel
    functions: list
    _series: dict = field(default_factory=dict, repr=False)
    _poles: list | None = field(default=None, repr=False)

    def __post_init__(self):
        if not self.functions:
            raise CoverError("covers: an Artin-Schreier cover needs at least one function")
        for f in self.functions:
            if f.curve is not self.base:
                raise CoverError("covers: functions must live on the base curve")
        self.p = self.base.field.p
        self.r = len(self.functions)
        for chi in character_reps(self.p, self.r):
            if not self.conductor(chi):
                raise CoverError(
                    "covers: the functions are dependent modulo {h^p - h} up to constants "
                    f"(character {list(chi)} is unramified everywhere)")

    # -- local data ---------------------------------------------------------------
    def series_at(self, pl: Place):
        s = self._series.get(pl)
        if s is None:
            s = [local_series(f, pl) for f in self.functions]
            self._series[pl] = s
        return s

    def reduce_at(self, chi, pl: Place) -> LocalReduction:
        K = pl.K
        acc = Series.zero(K, 1)
        for c, s in zip(chi, self.series_at(pl)):
            if c:
                acc = acc + s.scale(K.scalar(c))
        return _reduce_series(pl, acc)

    def pole_places(self) -> list[Place]:
        if self._poles is None:
            seen = {}
            for f in self.functions:
                for pl, m in divisor_of(f).items():
                    if m < 0:
                        seen[pl] = True
            self._poles = sorted(seen, key=lambda pl: pl.key)
        return self._poles

    def conductor(self, chi) -> Divisor:
        out = {}
        for pl in self.pole_places():
            red = self.reduce_at(chi, pl)
            if red.m:
                out[pl] = red.m + 1
        return Divisor(out)


def character_conductor(spec: ASCoverSpec, chi) -> Divisor:
    chi = tuple(int(c) % spec.p for c in chi)
    if len(chi) != spec.r or not any(chi):
        raise CoverError("covers.character_conductor: need a nonzero character of the right length")
    return spec.conductor(chi)


def cover_genus(spec: ASCoverSpec) -> int:
    p, r, g = spec.p, spec.r, spec.base.genus
    total = p ** r * (2 * g - 2)
    for chi in character_reps(p, r):
        total += (p - 1) * spec.conductor(chi).degree
    if total % 2:
        raise AssertionError("covers: odd Euler characteristic")
    return total // 2 + 1


def _place_contribution(spec: ASCoverSpec, pl: Place, n: int) -> int:
    """Number of F_{q^n}-rational points of the cover above the place pl
    (deg pl dividing n)."""
    d = pl.degree
    K = pl.K
    unram = []
    ok = True
    for chi in characters(spec.p, spec.r):
        if not any(chi):
            unram.append(chi)
            continue
        red = spec.reduce_at(chi, pl)
        if red.m == 0:
            unram.append(chi)
            if ((n // d) * K.trace(red.residual)) % spec.p:
                ok = False
    return d * len(unram) if ok else 0


def cover_points(spec: ASCoverSpec, n: int = 1) -> int:
    """Exact number of F_{q^n}-rational points of the fibre product."""
    total = 0
    for d in range(1, n + 1):
        if n % d:
            continue
        for pl in enumerate_places(spec.base, d):
            total += _place_contribution(spec, pl, n)
    return total


def _solutions_count(L, p: int, c: int) -> int:
    """#{w in L : w^p - w = c} by enumeration."""
    return sum(1 for w in range(L.q) if L.sub(L.pow(w, p), w) == c)


def brute_force_cover_points(spec: ASCoverSpec, n: int = 1, search_limit: int = 200_000):
    """Independent count: at each place, search all Laurent polynomials h in
    t^-1 for the characters that become regular, then count solutions w of
    the reduced Artin-Schreier system over F_{q^n} by enumeration.  Returns
    None when the search space is too large."""
    p, r = spec.p, spec.r
    total = 0
    for d in range(1, n + 1):
        if n % d:
            continue
        for pl in enumerate_places(spec.base, d):
            K = pl.K
            L, emb = (K, None) if d == n else (build_field(p, K.k * (n // d)),
                                               canonical_embedding(p, K.k, K.k * (n // d)))
            residuals = {}
            for chi in characters(p, r):
                acc = Series.zero(K, 1)
                for c, s in zip(chi, spec.series_at(pl)):
                    if c:
                        acc = acc + s.scale(K.scalar(c))
                if acc.val >= 0 or not acc.c:
                    residuals[chi] = acc.coeff(0)
                    continue
                top = -acc.val // p
                if K.q ** top > search_limit:
                    return None
                found = None
                for cs in itertools.product(range(K.q), repeat=top):
                    h = Series(K, -top, list(cs)) if top else Series.zero(K)
                    t = acc - (h ** p) + h
                    if not t.c or t.val >= 0:
                        found = t.coeff(0)
                        break
                if found is not None:
                    residuals[chi] = found
            # the unramified characters form a subgroup; pick a basis
            basis = []
            span = {tuple(0 for _ in range(r))}
            for chi in residuals:
                if chi not in span:
                    basis.append(chi)
                    span = {tuple((a + k * b) % p for a, b in zip(s, chi))
                            for s in span for k in range(p)}
            count = 1
            for chi in basis:
                c = residuals[chi]
                count *= _solutions_count(L, p, c if emb is None else emb(c))
            total += d * count
    return total


# ----------------------------------------------------------------------------------
# reports
# ----------------------------------------------------------------------------------

@dataclass
class CoverReport:
    kind: str                 # explicit-AS | class-field-subgroup | class-field-extension
    base: str
    degree: int
    genus: int
    points: int
    lower_bound: bool
    q: int                    # field of definition of the cover
    conductors: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        lo, hi = weil_interval(self.q, self.genus)
        if self.points > hi:
            raise AssertionError(f"covers: {self.points} points exceed the Weil bound {hi} "
                                 f"for genus {self.genus} over F_{self.q}")

    def line(self) -> str:
        return (f"{self.kind} {self.q} {self.genus} {self.points} "
                f"{'lower' if self.lower_bound else 'exact'} {self.degree} {self.base}")


def _curve_id(curve: CurveModel) -> str:
    return f"F{curve.field.q}:{curve.text.replace(' ', '')}"


def as_cover_report(spec: ASCoverSpec) -> CoverReport:
    conds = {chi: spec.conductor(chi) for chi in character_reps(spec.p, spec.r)}
    return CoverReport("explicit-AS", _curve_id(spec.base), spec.p ** spec.r,
                       cover_genus(spec), cover_points(spec), False, spec.base.field.q,
                       conductors=conds)


class Subgroup:
    """A subgroup H of prod Z/d_i, given either by its elements or as the
    common kernel of a group S of characters (identified with group
    elements through the pairing sum a_i b_i / d_i)."""

    def __init__(self, invariants, elements=None, dual=None):
        self.invariants = tuple(invariants)
        if elements is None and dual is None:
            raise CoverError("covers: a subgroup needs elements or a character group")
        self._elements = frozenset(elements) if elements is not None else None
        self.dual = frozenset(dual) if dual is not None else None

    @property
    def elements(self) -> frozenset:
        if self._elements is None:
            inv = list(self.invariants)
            self._elements = frozenset(
                v for v in itertools.product(*[range(d) for d in inv])
                if in_annihilator(v, self.dual, inv))
        return self._elements

    @property
    def order(self) -> int:
        if self._elements is None:
            return math.prod(self.invariants) // len(self.dual)
        return len(self._elements)

    @property
    def index(self) -> int:
        return math.prod(self.invariants) // self.order

    def __contains__(self, v):
        if hasattr(v, "residues"):
            v = v.residues
        v = tuple(v)
        if self._elements is None:
            return in_annihilator(v, self.dual, list(self.invariants))
        return v in self._elements

    def __eq__(self, o):
        return (isinstance(o, Subgroup) and self.invariants == o.invariants
                and self.elements == o.elements)

    def __hash__(self):
        return hash((self.invariants, self.elements))

    def __repr__(self):
        return f"Subgroup(order={self.order}, index={self.index})"

    @classmethod
    def from_dual(cls, invariants, S):
        return cls(invariants, dual=S)

    @classmethod
    def from_generators(cls, invariants, gens):
        inv = tuple(invariants)
        S = {tuple(0 for _ in inv)}
        for g in gens:
            g = tuple(int(x) % d for x, d in zip(g, inv))
            while g not in S:
                # S is a group; add the coset S + g and iterate with the new group
                layer = set(S)
                k = g
                while k not in S:
                    layer |= {tuple((a + b) % d for a, b, d in zip(s, k, inv)) for s in S}
                    k = tuple((a + b) % d for a, b, d in zip(k, g, inv))
                S = layer
        return cls(inv, elements=S)

    @classmethod
    def from_congruences(cls, invariants, rows):
        """rows: (coefficients, modulus) meaning sum c_i x_i = 0 mod modulus
        (the x_i are the residues, taken as integers)."""
        inv = tuple(invariants)
        for c, m in rows:
            if len(c) != len(inv):
                raise CoverError("covers: congruence length does not match the group")
            for ci, d in zip(c, inv):
                if (ci * d) % m:
                    raise CoverError("covers: congruence is not well defined on the group")
        S = frozenset(v for v in itertools.product(*[range(d) for d in inv])
                      if all(sum(a * b for a, b in zip(c, v)) % m == 0 for c, m in rows))
        return cls(inv, elements=S)

    def is_subgroup(self) -> bool:
        if self._elements is None:
            return True
        zero = tuple(0 for _ in self.invariants)
        E = self._elements
        if zero not in E:
            return False
        return all(tuple((x + y) % d for x, y, d in zip(a, b, self.invariants)) in E
                   for a in E for b in E)


@dataclass
class SubgroupCoverSpec:
    structure: ClassGroupStructure
    subgroup: Subgroup
    base_point: Place
    index: int | None = None


def subgroup_cover_report(spec: SubgroupCoverSpec) -> CoverReport:
    st = spec.structure
    H = spec.subgroup
    if tuple(H.invariants) != tuple(st.invariants):
        raise CoverError("covers: subgroup lives in a different group")
    if not H.is_subgroup():
        raise CoverError("covers: H is not a subgroup")
    d = H.index
    if spec.index is not None and spec.index != d:
        raise CoverError(f"covers: subgroup has index {d}, not {spec.index}")
    curve = st.curve
    rat = rational_places(curve)
    split = [pl for pl in rat if abel_jacobi(curve, pl, spec.base_point, st) in H]
    g = curve.genus
    return CoverReport("class-field-subgroup", _curve_id(curve), d, d * (g - 1) + 1,
                       d * len(split), False, curve.field.q,
                       extra={"split": len(split)})


def coset_classes(images, S, invariants) -> dict:
    """Group image indices by their coset modulo the subgroup H cut out by
    the character group S (two images are congruent iff every character
    in S takes the same value on them)."""
    inv = list(invariants)
    gens = sorted(S)
    out: dict = {}
    for i, v in enumerate(images):
        key = tuple(pairing(v, s, inv)[0] for s in gens)
        out.setdefault(key, []).append(i)
    return out


def best_subgroup_cover(structure: ClassGroupStructure, d: int, base_point: Place | None = None):
    """Among subgroups H of index d and base points B, one maximising the
    number of rational points P with [P - B] in H (B ranges over the
    rational points unless given).  Returns (count, Subgroup, B) or None if
    there is no subgroup of index d."""
    inv = tuple(structure.invariants)
    rat = rational_places(structure.curve)
    images = [structure.place_class(pl) for pl in rat]
    best = None
    for S in subgroups_of_index(list(inv), d):
        if base_point is None:
            for members in coset_classes(images, S, inv).values():
                if best is None or len(members) > best[0]:
                    best = (len(members), S, rat[members[0]])
        else:
            b = structure.place_class(base_point)
            c = sum(1 for v in images
                    if in_annihilator(tuple((x - y) % m for x, y, m in zip(v, b, inv)), S,
                                      list(inv)))
            if best is None or c > best[0]:
                best = (c, S, base_point)
    if best is None:
        return None
    c, S, B = best
    return c, Subgroup.from_dual(inv, S), B


def extension_cover_report(curve: CurveModel, n: int) -> CoverReport:
    if curve.genus == 0:
        raise CoverError("covers: a genus-0 curve has trivial class group")
    counts = [count_points(curve, k) for k in range(1, curve.genus + 1)]
    return extension_cover_from_counts(counts, curve.field.q, n, _curve_id(curve))


def extension_cover_from_counts(counts, q: int, n: int, base: str = "?") -> CoverReport:
    """The unramified cover over F_{q^n} of degree [J(F_{q^n}) : J(F_q)] in
    which the F_q-points split, for a base curve known through (N_1..N_g)."""
    g = len(counts)
    if g == 0:
        raise CoverError("covers: a genus-0 curve has trivial class group")
    if n < 1:
        raise CoverError("covers: extension degree must be at least 1")
    L = l_from_counts(list(counts), q, g)
    d = extension_index(L, n)
    return CoverReport("class-field-extension", base, d, d * (g - 1) + 1,
                       d * counts[0], n > 1 or d > 1, q ** n,
                       extra={"n": n, "N1": counts[0], "L": L.descending()})


__all__ = ["ASCoverSpec", "CoverError", "CoverReport", "LocalReduction", "Subgroup",
           "SubgroupCoverSpec", "as_cover_report", "as_reduce_local", "best_subgroup_cover",
           "coset_classes",
           "brute_force_cover_points", "character_conductor", "cover_genus", "cover_points",
           "extension_cover_from_counts", "extension_cover_report", "local_series", "element_order"]
