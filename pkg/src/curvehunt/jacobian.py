"""Divisor-class arithmetic: Riemann-Roch spaces, principality, functions
with prescribed divisors, the structure of the degree-0 class group and the
Abel-Jacobi map.

A degree-0 class c is stored in reduced form with respect to a rational base
place P0: the pair (E, r) with r >= 0 minimal such that c + r P0 contains an
effective divisor, E being that (unique) effective divisor.  Reduced forms are
canonical, so classes can be hashed and tabulated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import poly as P
from . import rr
from .abelian import AbelianGroup, add as gadd, element_order
from .curves import (CurveError, CurveFunction, CurveModel, Divisor, _element_divisor,
                     count_points, divisor_of, enumerate_places, rational_places)
from .funcfield import Place
from .zeta import class_number, l_from_counts

#: largest class number for which a full discrete-log table is built
TABLE_BOUND = 5000


class JacobianError(ValueError):
    pass


def _dict(D) -> dict:
    if isinstance(D, Divisor):
        return D.as_dict()
    return {pl: m for pl, m in dict(D).items() if m}


def _check_places(curve: CurveModel, D: dict):
    ff = curve.function_field
    for pl in D:
        if pl.ff is not ff:
            raise JacobianError("jacobian: divisor supported on places of another curve")


# ----------------------------------------------------------------------------------
# Riemann-Roch
# ----------------------------------------------------------------------------------

def rr_space(curve: CurveModel, D) -> list[CurveFunction]:
    """A basis of L(D) = {f : div(f) + D >= 0}."""
    D = _dict(D)
    _check_places(curve, D)
    sp = rr.rr_space(curve.function_field, D)
    return [CurveFunction(curve, H, [sp.denom]) for H in sp.basis]


def rr_dim(curve: CurveModel, D) -> int:
    D = _dict(D)
    _check_places(curve, D)
    return rr.rr_space(curve.function_field, D).dim


def is_principal(curve: CurveModel, D) -> bool:
    D = _dict(D)
    if rr.divisor_degree(D) != 0:
        raise JacobianError("jacobian.is_principal: divisor has nonzero degree")
    return rr_dim(curve, D) == 1


def _simplify(curve: CurveModel, H, Q):
    F = curve.field
    g = list(Q)
    for h in H:
        if h:
            g = P.gcd(F, g, h)
    if P.deg(g) > 0:
        H = [P.quo(F, h, g) if h else [] for h in H]
        Q = P.quo(F, Q, g)
    return H, Q


def function_with_divisor(curve: CurveModel, D) -> CurveFunction:
    """The function f with div(f) = D, normalised so that the leading
    coefficient (highest power of Y, then of x) of its numerator is 1."""
    Dd = _dict(D)
    if rr.divisor_degree(Dd) != 0:
        raise JacobianError("jacobian.function_with_divisor: divisor has nonzero degree")
    neg = {pl: -m for pl, m in Dd.items()}
    sp = rr.rr_space(curve.function_field, neg)
    if sp.dim != 1:
        raise JacobianError("jacobian.function_with_divisor: divisor is not principal")
    H, Q = _simplify(curve, sp.basis[0], sp.denom)
    F = curve.field
    lead = next(h for h in reversed(H) if h)[-1]
    inv = F.inv(lead)
    H = [P.scale(F, h, inv) for h in H]
    f = CurveFunction(curve, H, [Q])
    if divisor_of(f) != Divisor(Dd):
        raise AssertionError("jacobian.function_with_divisor: divisor check failed")
    return f


# ----------------------------------------------------------------------------------
# canonical divisor
# ----------------------------------------------------------------------------------

def _series_derivative(s):
    K = s.F
    out = [K.mul(K.scalar(s.val + i), c) for i, c in enumerate(s.c)]
    from .series import Series
    return Series(K, s.val - 1, out, s.prec - 1 if not s.is_exact() else s.prec)


def canonical_divisor(curve: CurveModel) -> Divisor:
    """div(dx): a canonical divisor (degree 2g - 2)."""
    ff = curve.function_field
    F = curve.field
    out = {}
    bases = [pi for pi, _ in P.factor(F, ff.discriminant())] + [None]
    for pi in bases:
        for pl in ff.places_above(pi):
            n = 4 * pl.e + 8
            while True:
                xs, _ = pl.local_xy(n)
                d = _series_derivative(xs)
                if d.c:
                    break
                n *= 2
            if d.val:
                out[pl] = d.val
    K = Divisor(out)
    if K.degree != 2 * curve.genus - 2:
        raise AssertionError("jacobian.canonical_divisor: degree is not 2g - 2")
    return K


# ----------------------------------------------------------------------------------
# reduction of divisor classes
# ----------------------------------------------------------------------------------

def _key(E: dict):
    return tuple(sorted((pl.key, m) for pl, m in E.items()))


class Reducer:
    """Reduced forms of degree-0 classes with respect to a rational place."""

    def __init__(self, curve: CurveModel, base: Place):
        if base.degree != 1:
            raise JacobianError("jacobian: the base place must be rational")
        self.curve = curve
        self.ff = curve.function_field
        self.P0 = base
        self.cache = {}

    def _max_vanishing(self, sp, A: dict):
        """Element of L(A) with the largest order of vanishing at P0:
        returns (valuation of H at P0, H)."""
        pl = self.P0
        F = self.curve.field
        deg_a = rr.divisor_degree(A)
        vq = pl.valuation([sp.denom])
        n = vq + deg_a + 2
        rows = []
        for k, H in enumerate(sp.basis):
            s = pl.expand(H, n)
            rows.append([s, [int(i == k) for i in range(len(sp.basis))]])
        # echelon by valuation
        done = []
        while rows:
            rows.sort(key=lambda r: r[0].val)
            head = rows.pop(0)
            same = [r for r in rows if r[0].val == head[0].val and r[0].c]
            rest = [r for r in rows if not (r[0].val == head[0].val and r[0].c)]
            for r in same:
                c = F.div(r[0].lead(), head[0].lead())
                s = r[0] - head[0].scale(c)
                comb = [F.sub(a, F.mul(c, b)) for a, b in zip(r[1], head[1])]
                rest.append([s, comb])
            done.append(head)
            rows = rest
        best = max(done, key=lambda r: r[0].val if r[0].c else 10 ** 9)
        if not best[0].c:
            raise AssertionError("jacobian: precision too low while reducing")
        comb = best[1]
        H = []
        for c, Hk in zip(comb, sp.basis):
            if c:
                H = self.ff.add(H, [P.scale(F, h, c) for h in Hk])
        return best[0].val - vq, H, sp.denom

    def reduce(self, A: dict):
        """Reduced form (E, r) of the class of A - deg(A) P0 (A effective)."""
        A = {pl: m for pl, m in A.items() if m}
        P0 = self.P0
        a0 = A.pop(P0, 0)
        key = _key(A)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        deg_a = rr.divisor_degree(A)
        if deg_a == 0:
            res = ({}, 0)
            self.cache[key] = res
            return res
        sp = rr.rr_space(self.ff, A)
        if sp.dim == 1:
            res = (dict(A), deg_a)
        else:
            v, H, Q = self._max_vanishing(sp, A)
            H, Q = _simplify(self.curve, H, Q)
            div = _element_divisor(self.ff, H)
            for pl, m in _element_divisor(self.ff, [Q]).items():
                div[pl] = div.get(pl, 0) - m
            E = dict(A)
            for pl, m in div.items():
                E[pl] = E.get(pl, 0) + m
            s = E.pop(P0, 0)
            if s != v or any(m < 0 for m in E.values()):
                raise AssertionError("jacobian: reduction produced a non-effective divisor")
            E = {pl: m for pl, m in E.items() if m}
            res = (E, deg_a - s)
        self.cache[key] = res
        return res

    def add(self, x, y):
        A = dict(x[0])
        for pl, m in y[0].items():
            A[pl] = A.get(pl, 0) + m
        return self.reduce(A)


# ----------------------------------------------------------------------------------
# class group structure
# ----------------------------------------------------------------------------------

@dataclass
class ClassGroupStructure:
    curve: CurveModel
    invariants: list
    base: Place
    generators: list                 # Divisor per invariant factor
    reducer: Reducer = field(repr=False)
    _table: dict = field(repr=False, default_factory=dict)
    _gen_places: list = field(repr=False, default_factory=list)
    _group: object = field(repr=False, default=None)
    _unit: int = 1
    _phi_cache: dict = field(repr=False, default_factory=dict)

    @property
    def order(self) -> int:
        return math.prod(self.invariants)

    def _coords_of_reduced(self, red):
        key = _key(red[0])
        poly_vec = self._table.get(key)
        if poly_vec is None:
            raise AssertionError("jacobian: reduced class missing from the table")
        return self._normalise(self._group.coords(poly_vec))

    def _normalise(self, c):
        if self._unit != 1 and len(self.invariants) == 1:
            return ((c[0] * self._unit) % self.invariants[0],)
        return tuple(c)

    def place_class(self, pl: Place):
        """Coordinates of the class of pl - deg(pl) P0."""
        c = self._phi_cache.get(pl)
        if c is None:
            c = self._coords_of_reduced(self.reducer.reduce({pl: 1}))
            self._phi_cache[pl] = c
        return c

    def divisor_class(self, D) -> "ClassGroupElement":
        D = _dict(D)
        if rr.divisor_degree(D) != 0:
            raise JacobianError("jacobian: class coordinates need a degree-0 divisor")
        acc = tuple(0 for _ in self.invariants)
        for pl, m in D.items():
            c = self.place_class(pl)
            acc = tuple((a + m * x) % d for a, x, d in zip(acc, c, self.invariants))
        return ClassGroupElement(self, acc)

    def zero(self) -> "ClassGroupElement":
        return ClassGroupElement(self, tuple(0 for _ in self.invariants))

    def __str__(self):
        if not self.invariants:
            return "trivial"
        return " x ".join(f"Z/{d}" for d in self.invariants)


@dataclass(frozen=True)
class ClassGroupElement:
    structure: ClassGroupStructure
    residues: tuple

    def __add__(self, o):
        inv = self.structure.invariants
        return ClassGroupElement(self.structure, gadd(self.residues, o.residues, inv))

    def __neg__(self):
        inv = self.structure.invariants
        return ClassGroupElement(self.structure, tuple((-x) % d for x, d in zip(self.residues, inv)))

    def __mul__(self, k: int):
        inv = self.structure.invariants
        return ClassGroupElement(self.structure, tuple((k * x) % d for x, d in zip(self.residues, inv)))

    __rmul__ = __mul__

    def __eq__(self, o):
        return isinstance(o, ClassGroupElement) and self.residues == o.residues

    def __hash__(self):
        return hash(self.residues)

    @property
    def is_zero(self) -> bool:
        return not any(self.residues)

    @property
    def order(self) -> int:
        return element_order(self.residues, self.structure.invariants)

    def __repr__(self):
        if len(self.residues) == 1:
            return str(self.residues[0])
        return "[" + ",".join(map(str, self.residues)) + "]"


def curve_class_number(curve: CurveModel) -> int:
    g = curve.genus
    if g == 0:
        return 1
    counts = [count_points(curve, n) for n in range(1, g + 1)]
    return class_number(l_from_counts(counts, curve.field.q, g))


def _candidate_places(curve: CurveModel, base: Place):
    d = 1
    while True:
        for pl in enumerate_places(curve, d):
            if pl is not base:
                yield pl
        d += 1


def class_group_structure(curve: CurveModel, base: Place | None = None,
                          bound: int = TABLE_BOUND) -> ClassGroupStructure:
    """Invariant factors of the degree-0 class group, with a discrete-log
    table of all classes (requires class number <= bound)."""
    h = curve_class_number(curve)
    if h > bound:
        raise JacobianError(f"jacobian.class_group_structure: class number {h} exceeds "
                            f"the bound {bound}")
    rat = rational_places(curve)
    if base is None:
        if not rat and h == 1:
            return ClassGroupStructure(curve, [], None, [], None, {}, [], _Trivial())
        if not rat:
            raise JacobianError("jacobian.class_group_structure: the curve has no rational place")
        base = rat[0]
    red = Reducer(curve, base)
    zero = ({}, 0)
    elems = [zero]                       # reduced forms
    vecs = [()]                          # polycyclic coordinates
    table = {_key(zero[0]): 0}
    gens = []                            # (place, reduced form)
    rel_rows = []
    for pl in _candidate_places(curve, base):
        if len(elems) >= h:
            break
        e = red.reduce({pl: 1})
        if _key(e[0]) in table:
            continue
        # relative order of e modulo the current subgroup
        cur, m = e, 1
        while _key(cur[0]) not in table:
            cur = red.add(cur, e)
            m += 1
        j = len(gens)
        gens.append((pl, e))
        target = list(vecs[table[_key(cur[0])]]) + [0]
        rel = [-t for t in target]
        rel[j] += m
        # extend existing vectors and relations with a zero coordinate
        vecs = [v + (0,) for v in vecs]
        rel_rows = [r + [0] for r in rel_rows]
        rel_rows.append(rel)
        base_elems = list(range(len(elems)))
        layer = [elems[i] for i in base_elems]
        for k in range(1, m):
            new_layer = []
            for i, x in zip(base_elems, layer):
                y = red.add(x, e)
                key = _key(y[0])
                if key in table:
                    raise AssertionError("jacobian: coset enumeration collided")
                table[key] = len(elems)
                elems.append(y)
                v = list(vecs[i])
                v[j] = k
                vecs.append(tuple(v))
                new_layer.append(y)
            layer = new_layer
        if len(elems) > h:
            raise AssertionError("jacobian: more classes than the class number")
    if len(elems) != h:
        raise AssertionError(f"jacobian: generated {len(elems)} classes, expected {h}")
    s = len(gens)
    if s == 0:
        group = AbelianGroup([[1]], 1)
        table2 = {k: (0,) for k in table}
    else:
        group = AbelianGroup(rel_rows, s)
        table2 = {k: vecs[i] for k, i in table.items()}
    generators = []
    for gv in (group.generator_vectors() if s else []):
        D = {}
        for c, (pl, _) in zip(gv, gens):
            if c:
                D[pl] = D.get(pl, 0) + c
                D[base] = D.get(base, 0) - c * pl.degree
        generators.append(Divisor(D))
    st = ClassGroupStructure(curve, list(group.invariants) if s else [], base, generators,
                             red, table2, [pl for pl, _ in gens], group if s else _Trivial())
    if len(st.invariants) == 1:
        # scale so that the first rational place generating the group maps to 1
        n = st.invariants[0]
        for pl in rat:
            if pl is base:
                continue
            c = st._group.coords(st._table[_key(red.reduce({pl: 1})[0])])[0]
            if math.gcd(c, n) == 1:
                st._unit = pow(c, -1, n)
                break
    return st


class _Trivial:
    invariants = []

    def coords(self, vec):
        return ()


def abel_jacobi(curve: CurveModel, Q: Place, base: Place,
                structure: ClassGroupStructure) -> ClassGroupElement:
    """The class of Q - deg(Q) base."""
    if base.degree != 1:
        raise JacobianError("jacobian.abel_jacobi: the base place must be rational")
    if structure.curve is not curve:
        raise JacobianError("jacobian.abel_jacobi: structure belongs to another curve")
    return structure.divisor_class({Q: 1, base: -Q.degree} if Q is not base else {})


def abel_jacobi_table(structure: ClassGroupStructure, places, base: Place):
    return [abel_jacobi(structure.curve, pl, base, structure) for pl in places]



# ----------------------------------------------------------------------------------
# matching an externally numbered image table
# ----------------------------------------------------------------------------------

def match_image_table(images, moduli, classes, invariants, node_budget: int = 500_000,
                      fixed: bool = False):
    """Find a numbering of our points reproducing an image table up to a
    group isomorphism and a change of base point.

    ``images`` are tuples modulo ``moduli`` (any cyclic decomposition, not
    necessarily invariant factors); ``classes`` are our coordinates (modulo
    ``invariants``) of at least as many points (a table may omit points).
    With ``fixed`` the numbering is the identity and only its consistency
    is tested.  Returns ``sigma`` with
    sigma[i] the index in ``classes`` for table entry i such that
    images[i] - images[0] -> classes[sigma[i]] - classes[sigma[0]] extends
    to an injective homomorphism on the subgroup generated by the images:
    weight-0 integer vectors are relations for the table exactly when they
    are relations for our points.  Returns None when no numbering exists and
    raises JacobianError when the search exceeds ``node_budget``."""
    n = len(images)
    n_ours = len(classes)
    if n_ours < n:
        return None
    if n == 0:
        return []
    mods = [int(m) for m in moduli]
    inv = list(invariants)
    vs = [tuple(int(x) % m for x, m in zip(v, mods)) for v in images]
    vs = [tuple((a - b) % m for a, b, m in zip(v, vs[0], mods)) for v in vs]
    ws = [tuple(c) for c in classes]
    budget = [node_budget]

    def v_add(a, b):
        return tuple((x + y) % m for x, y, m in zip(a, b, mods))

    def w_add(a, b):
        return tuple((x + y) % m for x, y, m in zip(a, b, inv))

    def extend(hom, v, w):
        """Extend the partial isomorphism by v -> w, or None if impossible."""
        if v in hom:
            return hom if hom[v] == w else None
        image = set(hom.values())
        if w in image:
            return None
        kv, kw, steps = v, w, 1
        while kv not in hom:
            if kw in image:
                return None
            kv, kw, steps = v_add(kv, v), w_add(kw, w), steps + 1
        if hom[kv] != kw:
            return None
        new = dict(hom)
        layer = list(hom.items())
        for _ in range(1, steps):
            layer = [(v_add(x, v), w_add(y, w)) for x, y in layer]
            new.update(layer)
        return new

    def search(hom, assigned, used, shift):
        budget[0] -= 1
        if budget[0] < 0:
            raise JacobianError("jacobian.match_image_table: search budget exhausted")
        if len(assigned) == n:
            return dict(assigned)
        free = [i for i in range(n) if i not in assigned]
        forced = next((i for i in free if vs[i] in hom), None)
        if forced is not None:
            target = hom[vs[forced]]
            j = next((j for j in allowed(forced) if j not in used
                      and tuple((a - b) % m for a, b, m in zip(ws[j], shift, inv)) == target), None)
            if j is None:
                return None
            assigned[forced] = j
            used.add(j)
            out = search(hom, assigned, used, shift)
            if out is None:
                del assigned[forced]
                used.discard(j)
            return out
        i = free[0]
        order = element_order(vs[i], mods)
        tried = set()
        for j in allowed(i):
            if j in used:
                continue
            w = tuple((a - b) % m for a, b, m in zip(ws[j], shift, inv))
            if w in tried or element_order(w, inv) != order:
                continue
            tried.add(w)
            new = extend(hom, vs[i], w)
            if new is None:
                continue
            assigned[i] = j
            used.add(j)
            out = search(new, assigned, used, shift)
            if out is not None:
                return out
            del assigned[i]
            used.discard(j)
        return None

    def allowed(i):
        return (i,) if fixed else range(n_ours)

    zero_v = tuple(0 for _ in mods)
    zero_w = tuple(0 for _ in inv)
    seen = set()
    for j0 in allowed(0):
        if ws[j0] in seen:
            continue
        seen.add(ws[j0])
        out = search({zero_v: zero_w}, {0: j0}, {j0}, ws[j0])
        if out is not None:
            return [out[i] for i in range(n)]
    return None
