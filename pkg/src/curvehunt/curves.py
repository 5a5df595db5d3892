"""Curve models, the equation parser and printer, places, functions and
divisors.

Three shapes are supported:

* :class:`ArtinSchreierTower` -- the fibre product of w_i^p - w_i = f_i(x);
* :class:`Hyperelliptic` -- y^2 + h(x) y = f(x);
* :class:`Plane` -- a smooth plane curve F(x, y, z) = 0.

Every model is turned into a function field F_q(x)[Y]/(M) with M monic in Y
(see :mod:`curvehunt.funcfield`); places, valuations and Riemann-Roch spaces
are computed there, so points at infinity and above poles come from the
smooth projective model rather than from the affine equation.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import poly as P
from .expr import MPolyRing, ParseError, Parser, variable_names
from .ff import Field, build_field, canonical_embedding
from .funcfield import FunctionField, Place, _poly_det
from .npff import vec_field
from .series import Series

__all__ = [
    "CurveError", "ParseError", "CurveModel", "ArtinSchreierTower", "Hyperelliptic",
    "Plane", "CurveFunction", "Divisor", "Pole", "parse_curve", "parse_function",
    "count_points", "count_points_by_places", "enumerate_places", "rational_places",
    "evaluate", "divisor_of", "curve_genus", "place_label", "place_coordinates",
    "as_reduced_pole", "laurent_on_line",
]

#: largest q^n for exhaustive point enumeration
COUNT_BOUND = 1 << 20
#: largest q^d for place enumeration
PLACE_BOUND = 1 << 16


class CurveError(ValueError):
    pass


# ----------------------------------------------------------------------------------
# rational functions in x (pairs of coefficient lists, den monic, coprime)
# ----------------------------------------------------------------------------------

def rf_norm(F: Field, num, den):
    num, den = P.trim(list(num)), P.trim(list(den))
    if not den:
        raise ZeroDivisionError("rational function with zero denominator")
    if not num:
        return [], [1]
    g = P.gcd(F, num, den)
    if P.deg(g) > 0:
        num, den = P.quo(F, num, g), P.quo(F, den, g)
    lc = den[-1]
    if lc != 1:
        inv = F.inv(lc)
        num, den = P.scale(F, num, inv), P.scale(F, den, inv)
    return num, den


def rf_add(F, a, b):
    return rf_norm(F, P.add(F, P.mul(F, a[0], b[1]), P.mul(F, b[0], a[1])), P.mul(F, a[1], b[1]))


def rf_mul(F, a, b):
    return rf_norm(F, P.mul(F, a[0], b[0]), P.mul(F, a[1], b[1]))


def rf_scale(F, a, c):
    return rf_norm(F, P.scale(F, a[0], c), a[1])


def rf_inv(F, a):
    if not a[0]:
        raise ZeroDivisionError("inverse of zero")
    return rf_norm(F, a[1], a[0])


# ----------------------------------------------------------------------------------
# Laurent expansions on the projective line and Artin-Schreier reduction
# ----------------------------------------------------------------------------------

def laurent_on_line(F: Field, f, pi, prec: int):
    """Expand f = (num, den) in F_q(x) at the x-place pi (monic irreducible,
    or None for infinity).  Returns (K, Series) with uniformizer x - alpha
    (alpha the least root of pi in K) or 1/x, to absolute precision prec."""
    num, den = f
    if pi is None:
        K = F
        dn, dd = P.deg(num), P.deg(den)
        ns = Series(K, dd - dn, list(reversed(num)))
        ds = Series(K, 0, list(reversed(den)))
    else:
        d = P.deg(pi)
        K = build_field(F.p, F.k * d)
        emb = canonical_embedding(F.p, F.k, F.k * d)
        alpha = P.roots(K, [emb(c) for c in pi])[0]
        shift = [alpha, 1]
        ns = Series.from_poly(K, P.compose(K, [emb(c) for c in num], shift))
        ds = Series.from_poly(K, P.compose(K, [emb(c) for c in den], shift))
    if not ns.c:
        return K, Series.zero(K, prec)
    rel = prec - ns.val + ds.val + 1
    inv = ds.inverse(rel_prec=max(rel, 1))
    return K, (ns * inv).truncate(prec)


def as_reduced_pole(K: Field, s: Series):
    """Artin-Schreier reduction of a Laurent series (known to precision >= 1):
    subtract g^p - g to remove pole terms of order divisible by p.  Returns
    (m, reduced series); m = 0 means no pole remains."""
    p = K.p
    while s.c and s.val < 0:
        v = s.val
        if v % p:
            return -v, s
        c = s.lead()
        s = s - Series.monomial(K, c, v) + Series.monomial(K, K.root_p(c), v // p)
    return 0, s


def _chi_reps(p: int, r: int):
    """Nonzero vectors of F_p^r whose first nonzero entry is 1."""
    for v in itertools.product(range(p), repeat=r):
        nz = [c for c in v if c]
        if nz and nz[0] == 1:
            yield v


def _pole_places(F, fs):
    """Candidate x-places (irreducible factors of denominators, then None)."""
    facs = set()
    for _, den in fs:
        if P.deg(den) > 0:
            for pi, _ in P.factor(F, den):
                facs.add(tuple(pi))
    out = sorted((list(t) for t in facs), key=lambda t: (len(t), t[::-1]))
    return out + [None]


def as_conductors(F: Field, fs):
    """For each character class chi of (F_p)^r (first nonzero entry 1), the
    list of (x-place, reduced pole order m) with m > 0 of sum chi_i f_i."""
    p = F.p
    r = len(fs)
    places = _pole_places(F, fs)
    exps = []
    for pi in places:
        exps.append([laurent_on_line(F, f, pi, 1) for f in fs])
    out = {}
    for chi in _chi_reps(p, r):
        loc = []
        for pi, ser in zip(places, exps):
            K = ser[0][0]
            s = Series.zero(K, 1)
            for c, (_, si) in zip(chi, ser):
                if c:
                    s = s + si.scale(K.scalar(c))
            m, _ = as_reduced_pole(K, s)
            if m:
                loc.append((pi, m))
        out[chi] = loc
    return out


def as_tower_genus(F: Field, fs) -> int:
    """Genus of the fibre product of w_i^p - w_i = f_i by the
    conductor-discriminant formula."""
    p = F.p
    r = len(fs)
    total = 0
    for chi, loc in as_conductors(F, fs).items():
        if not loc:
            raise CurveError(
                "curves: Artin-Schreier data is unramified for the combination "
                f"{list(chi)}; the tower is reducible or a constant-field extension")
        total += sum((m + 1) * (1 if pi is None else P.deg(pi)) for pi, m in loc)
    two_g_minus_2 = -2 * p ** r + (p - 1) * total
    return two_g_minus_2 // 2 + 1


# ----------------------------------------------------------------------------------
# printing
# ----------------------------------------------------------------------------------

def _fmt_coeff(F: Field, c: int, first: bool, minus: bool):
    """(sign, text) for a coefficient; text '' stands for 1."""
    if c < F.p:
        if minus and F.p > 2 and not first and c == F.p - 1:
            return "-", ""
        return "+", "" if c == 1 else str(c)
    s = F.format(c)
    return "+", f"({s})"


def _join(terms):
    out = ""
    for i, (sign, body) in enumerate(terms):
        if i == 0:
            out = body if sign == "+" else "-" + body
        else:
            out += sign + body
    return out or "0"


def _mono(var_exps):
    s = ""
    for v, e in var_exps:
        if e == 1:
            s += v
        elif e > 1:
            s += f"{v}^{e}"
    return s


def format_poly(F: Field, a, var: str = "x", minus: bool = True) -> str:
    terms = []
    for e in range(len(a) - 1, -1, -1):
        c = a[e]
        if not c:
            continue
        sign, ct = _fmt_coeff(F, c, not terms, minus)
        m = _mono([(var, e)])
        if not m and not ct:
            ct = "1"
        terms.append((sign, ct + m))
    return _join(terms)


def _nterms(a) -> int:
    return sum(1 for c in a if c)


def format_rational(F: Field, num, den, var: str = "x") -> str:
    n = format_poly(F, num, var)
    if P.deg(den) <= 0 and den == [1]:
        return n
    if _nterms(num) > 1:
        n = f"({n})"
    d = format_poly(F, den, var)
    if _nterms(den) > 1:
        d = f"({d})"
    return f"{n}/{d}"


def format_mpoly(F: Field, names, A: dict, minus: bool = True) -> str:
    terms = []
    for k in sorted(A, reverse=True):
        c = A[k]
        sign, ct = _fmt_coeff(F, c, not terms, minus)
        m = _mono(zip(names, k))
        if not m and not ct:
            ct = "1"
        terms.append((sign, ct + m))
    return _join(terms)


# ----------------------------------------------------------------------------------
# models
# ----------------------------------------------------------------------------------

def _x_value(pl: Place):
    return None if pl.is_infinite else pl.a


def _coord_value(pl: Place, H, den):
    """Residue value of the function H/den at pl (None at a pole)."""
    K = pl.K
    H = [list(h) for h in H]
    if not any(H):
        return 0
    vH = pl.valuation(H)
    vd = pl.valuation([den])
    if vH > vd:
        return 0
    if vH < vd:
        return None
    sH = pl.expand(H, vH + 1)
    sd = pl.expand([den], vd + 1)
    return K.div(sH.coeff(vH), sd.coeff(vd))


class CurveModel:
    """Base class.  Subclasses set ``field``, ``genus`` and implement
    ``_build`` returning (M, coordinate elements, Y expression)."""

    shape = "abstract"

    def __init__(self, field: Field):
        self.field = field

    # identity -----------------------------------------------------------------
    def _data(self):
        raise NotImplementedError

    def __eq__(self, o):
        return (type(self) is type(o) and self.field.p == o.field.p
                and self.field.k == o.field.k and self._data() == o._data())

    def __hash__(self):
        return hash((type(self).__name__, self.field.q, self._data()))

    def __repr__(self):
        return f"{type(self).__name__}({self.text!r} over F_{self.field.q})"

    def __str__(self):
        return self.text

    # function field -----------------------------------------------------------------
    @property
    def coordinate_names(self) -> tuple:
        raise NotImplementedError

    @cached_property
    def _model(self):
        return self._build()

    @cached_property
    def function_field(self) -> FunctionField:
        M, _, _ = self._model
        ff = FunctionField(self.field, M, self.genus, coord_fns=self._place_coords)
        ff.curve = self
        return ff

    @property
    def coordinate_elements(self) -> dict:
        """name -> (H, den): coordinate function as an element H/den."""
        return self._model[1]

    @property
    def Y_expression(self) -> dict:
        """The primitive element Y as a polynomial in the coordinates."""
        return self._model[2]

    def _place_coords(self, pl: Place):
        vals = [_x_value(pl)]
        for name in self.coordinate_names[1:]:
            H, den = self.coordinate_elements[name]
            vals.append(_coord_value(pl, H, den))
        return (0 if pl.is_infinite else 1), vals

    def special_x_places(self) -> list:
        """Finite x-places where the fast point counter defers to places."""
        return []

    def _affine_count(self, L: Field, xs: np.ndarray, emb) -> int:
        raise NotImplementedError


class ArtinSchreierTower(CurveModel):
    shape = "artin-schreier"

    def __init__(self, field: Field, fs, genus: int | None = None):
        super().__init__(field)
        if not fs:
            raise CurveError("curves: an Artin-Schreier tower needs at least one equation")
        self.fs = tuple((tuple(n), tuple(d)) for n, d in
                        (rf_norm(field, n, d) for n, d in fs))
        self.genus = as_tower_genus(field, [(list(n), list(d)) for n, d in self.fs]) \
            if genus is None else genus

    @property
    def r(self) -> int:
        return len(self.fs)

    def _data(self):
        return self.fs

    @property
    def coordinate_names(self):
        if self.r == 1:
            return ("x", "y")
        return ("x",) + tuple(f"y{i + 1}" for i in range(self.r))

    @property
    def text(self) -> str:
        F = self.field
        eqs = []
        for name, (num, den) in zip(self.coordinate_names[1:], self.fs):
            lhs = f"{name}^2+{name}" if F.p == 2 else f"{name}^{F.p}-{name}"
            eqs.append(f"{lhs}={format_rational(F, list(num), list(den))}")
        return "; ".join(eqs)

    def special_x_places(self):
        return [pi for pi in _pole_places(self.field, [(list(n), list(d)) for n, d in self.fs])
                if pi is not None]

    def _build(self):
        F = self.field
        p = F.p
        fs = [(list(n), list(d)) for n, d in self.fs]
        r = len(fs)
        R = MPolyRing(F, self.coordinate_names)
        if r == 1:
            a, b = fs[0]
            bp = _ppow(F, b, p - 1)
            M = [[] for _ in range(p + 1)]
            M[p] = [1]
            M[1] = P.neg(F, bp)
            M[0] = P.neg(F, P.mul(F, a, bp))
            coords = {"x": ([[0, 1]], [1]), "y": ([[], [1]], b)}
            Yexpr = R.mul(_upoly_to_m(R, b, "x"), R.var("y"))
            return M, coords, Yexpr
        M, mults = _tower_polynomial(F, fs)
        coords = {"x": ([[0, 1]], [1])}
        sols = _tower_coordinates(F, fs, mults, M)
        Yexpr = {}
        for i, name in enumerate(self.coordinate_names[1:]):
            coords[name] = sols[i]
            Yexpr = R.add(Yexpr, R.mul(_upoly_to_m(R, P.mul(F, mults[i], fs[i][1]), "x"),
                                       R.var(name)))
        return M, coords, Yexpr

    def _affine_count(self, L: Field, xs, emb):
        V = vec_field(L)
        ok = np.ones(xs.shape, dtype=bool)
        good = np.ones(xs.shape, dtype=bool)
        for num, den in self.fs:
            nv = V.poly_eval([emb(c) for c in num], xs)
            dv = V.poly_eval([emb(c) for c in den], xs)
            good &= dv != 0
            val = V.mul(nv, V.inv(dv))
            ok &= V.trace(val) == 0
        return int(np.count_nonzero(ok & good)) * self.field.p ** self.r, good


def _ppow(F, a, e):
    out = [1]
    for _ in range(e):
        out = P.mul(F, out, a)
    return out


def _upoly_to_m(R: MPolyRing, a, name):
    i = R.names.index(name)
    out = {}
    for e, c in enumerate(a):
        if c:
            k = [0] * R.nv
            k[i] = e
            out[tuple(k)] = c
    return out


def _frob_poly(F, a):
    """a(x)^p for a polynomial a over F."""
    p = F.p
    out = [0] * (p * (len(a) - 1) + 1) if a else []
    for i, c in enumerate(a):
        if c:
            out[p * i] = F.frob(c)
    return P.trim(out)


def _tower_polynomial(F: Field, fs):
    """Minimal polynomial of Y = sum m_i b_i w_i (m_i powers of x) over F_q(x)."""
    p = F.p
    r = len(fs)
    for step in (1, None):
        if step is None:
            step = max(P.deg(d) for _, d in fs) + 1
        mults = [P.shift([1], i * step) for i in range(r)]
        alpha = [[1]]        # additive polynomial coefficients of u^{p^k}
        ok = True
        for i, (_, b) in enumerate(fs):
            e = P.mul(F, mults[i], b)
            c = []
            epow = e
            for ak in alpha:
                c = P.add(F, c, P.mul(F, ak, epow))
                epow = _frob_poly(F, epow)
            if not c:
                ok = False
                break
            cp = _ppow(F, c, p - 1)
            new = [[] for _ in range(len(alpha) + 1)]
            for k, ak in enumerate(alpha):
                new[k + 1] = P.add(F, new[k + 1], _frob_poly(F, ak))
                new[k] = P.sub(F, new[k], P.mul(F, cp, ak))
            alpha = new
        if ok:
            break
    else:  # pragma: no cover - the second multiplier choice always works
        raise CurveError("curves: could not find a primitive element for the tower")
    n = p ** r
    M = [[] for _ in range(n + 1)]
    for k, ak in enumerate(alpha):
        M[p ** k] = P.add(F, M[p ** k], ak)
    for i, (a, b) in enumerate(fs):
        beta = _ppow(F, b, p - 1)
        gamma = P.mul(F, a, beta)
        lam, mu = [1], []
        A, B = [], []
        mpow = mults[i]
        for k, ak in enumerate(alpha):
            A = P.add(F, A, P.mul(F, ak, P.mul(F, mpow, lam)))
            B = P.add(F, B, P.mul(F, ak, P.mul(F, mpow, mu)))
            lp = _frob_poly(F, lam)
            lam, mu = P.mul(F, lp, beta), P.add(F, P.mul(F, lp, gamma), _frob_poly(F, mu))
            mpow = _frob_poly(F, mpow)
        if A:
            raise CurveError("curves: internal error building the tower polynomial")
        M[0] = P.sub(F, M[0], B)
    assert M[n] == [1]
    return M, mults


def _tower_coordinates(F: Field, fs, mults, M):
    """Express each w_i = v_i / b_i (v_i = b_i w_i) as H_i(x, Y) / den_i(x)."""
    p = F.p
    r = len(fs)
    n = p ** r
    betas = [_ppow(F, b, p - 1) for _, b in fs]
    gammas = [P.mul(F, a, bt) for (a, _), bt in zip(fs, betas)]
    basis = list(itertools.product(range(p), repeat=r))
    index = {e: i for i, e in enumerate(basis)}

    def mul_v(elem, i):
        """Multiply an algebra element (dict e -> poly) by v_i."""
        out = {}
        for e, c in elem.items():
            if e[i] + 1 < p:
                e2 = e[:i] + (e[i] + 1,) + e[i + 1:]
                out[e2] = P.add(F, out.get(e2, []), c)
            else:
                e1 = e[:i] + (1,) + e[i + 1:]
                e0 = e[:i] + (0,) + e[i + 1:]
                out[e1] = P.add(F, out.get(e1, []), P.mul(F, c, betas[i]))
                out[e0] = P.add(F, out.get(e0, []), P.mul(F, c, gammas[i]))
        return out

    def mul_Y(elem):
        acc = {}
        for i in range(r):
            t = mul_v(elem, i)
            for e, c in t.items():
                acc[e] = P.add(F, acc.get(e, []), P.mul(F, c, mults[i]))
        return acc

    cur = {(0,) * r: [1]}
    rows = []
    for _ in range(n):
        rows.append([cur.get(e, []) for e in basis])
        cur = mul_Y(cur)
    # solve sum_j d_j * rows[j] = unit(v_i) over F_q(x): transpose system
    mat = [[(list(rows[j][c]), [1]) for j in range(n)] for c in range(n)]
    out = []
    for i in range(r):
        target = tuple(1 if t == i else 0 for t in range(r))
        rhs = [([1] if c == index[target] else [], [1]) for c in range(n)]
        d = _rf_solve(F, mat, rhs)
        L = [1]
        for _, den in d:
            L = P.quo(F, P.mul(F, L, den), P.gcd(F, L, den))
        H = [P.mul(F, num, P.quo(F, L, den)) for num, den in d]
        while H and not H[-1]:
            H.pop()
        out.append((H, P.mul(F, L, fs[i][1])))
    return out


def _rf_solve(F, mat, rhs):
    n = len(mat)
    A = [list(row) + [rhs[i]] for i, row in enumerate(mat)]
    for c in range(n):
        piv = next(i for i in range(c, n) if A[i][c][0])
        A[c], A[piv] = A[piv], A[c]
        inv = rf_inv(F, A[c][c])
        A[c] = [rf_mul(F, v, inv) for v in A[c]]
        for i in range(n):
            if i != c and A[i][c][0]:
                f = A[i][c]
                A[i] = [rf_add(F, v, rf_mul(F, rf_scale(F, f, F.neg(1)), w))
                        for v, w in zip(A[i], A[c])]
    return [A[i][n] for i in range(n)]


class Hyperelliptic(CurveModel):
    shape = "hyperelliptic"

    def __init__(self, field: Field, h, f):
        super().__init__(field)
        F = field
        self.h = tuple(P.trim(list(h)))
        self.f = tuple(P.trim(list(f)))
        h, f = list(self.h), list(self.f)
        if F.p == 2:
            if not h:
                raise CurveError("curves: y^2 = f(x) is inseparable in characteristic 2 (h = 0)")
            dh = P.derivative(F, h)
            cond = P.add(F, P.mul(F, P.mul(F, dh, dh), f),
                         P.mul(F, P.derivative(F, f), P.derivative(F, f)))
            if P.deg(P.gcd(F, h, cond)) > 0:
                raise CurveError("curves: singular model (h and h'^2 f + f'^2 share a root)")
            self.genus = as_tower_genus(F, [rf_norm(F, f, P.mul(F, h, h))])
        else:
            D = self.discriminant_poly
            if P.deg(D) < 1:
                raise CurveError("curves: h^2 + 4f must be nonconstant")
            if P.deg(P.gcd(F, D, P.derivative(F, D))) > 0:
                raise CurveError("curves: singular model (h^2 + 4f is not squarefree)")
            self.genus = (P.deg(D) - 1) // 2

    @property
    def discriminant_poly(self):
        F = self.field
        h, f = list(self.h), list(self.f)
        return P.add(F, P.mul(F, h, h), P.scale(F, f, F.scalar(4)))

    def _data(self):
        return (self.h, self.f)

    @property
    def coordinate_names(self):
        return ("x", "y")

    @property
    def text(self) -> str:
        F = self.field
        lhs = "y^2"
        if self.h:
            ht = format_poly(F, list(self.h))
            if _nterms(self.h) > 1:
                ht = f"({ht})"
            elif ht == "1":
                ht = ""
            lhs += f"+{ht}y"
        return f"{lhs}={format_poly(F, list(self.f))}"

    def _build(self):
        F = self.field
        M = [P.neg(F, list(self.f)), list(self.h), [1]]
        R = MPolyRing(F, self.coordinate_names)
        coords = {"x": ([[0, 1]], [1]), "y": ([[], [1]], [1])}
        return M, coords, R.var("y")

    def _affine_count(self, L: Field, xs, emb):
        V = vec_field(L)
        hv = V.poly_eval([emb(c) for c in self.h], xs)
        fv = V.poly_eval([emb(c) for c in self.f], xs)
        if L.p == 2:
            hz = hv == 0
            val = V.mul(fv, V.inv(V.mul(hv, hv)))
            split = (~hz) & (V.trace(val) == 0)
            total = 2 * int(np.count_nonzero(split)) + int(np.count_nonzero(hz))
        else:
            D = V.add(V.mul(hv, hv), V.scale(fv, L.scalar(4)))
            total = int(np.sum(1 + V.quadratic_character(D)))
        return total, np.ones(xs.shape, dtype=bool)


def _homogeneous_degree(A: dict) -> int | None:
    degs = {sum(k) for k in A}
    return degs.pop() if len(degs) == 1 else None


class Plane(CurveModel):
    shape = "plane"

    def __init__(self, field: Field, Fxyz: dict):
        super().__init__(field)
        F = field
        self.poly = dict(sorted((tuple(k), v) for k, v in Fxyz.items() if v))
        d = _homogeneous_degree(self.poly)
        if d is None:
            raise CurveError("curves: plane model must be a homogeneous polynomial in x, y, z")
        if d < 1:
            raise CurveError("curves: plane model must have positive degree")
        self.degree = d
        if self.y_degree < 1:
            raise CurveError("curves: plane model must involve y in the chart z = 1")
        sing = plane_singular_point(F, self.poly)
        if sing is not None:
            raise CurveError(f"curves: singular model (singular point over F_{F.q}^{sing})")
        self.genus = (d - 1) * (d - 2) // 2

    def _data(self):
        return tuple(self.poly.items())

    @property
    def y_degree(self) -> int:
        return max(k[1] for k in self.poly)

    @property
    def coordinate_names(self):
        return ("x", "y")

    @property
    def text(self) -> str:
        return f"{format_mpoly(self.field, ('x', 'y', 'z'), self.poly, minus=False)}=0"

    def chart_coefficients(self):
        """F(x, y, 1) = sum c_i(x) y^i."""
        n = self.y_degree
        cs = [[] for _ in range(n + 1)]
        for (i, j, _), c in self.poly.items():
            cs[j] = P.add(self.field, cs[j], P.shift([c], i))
        return cs

    def _build(self):
        F = self.field
        cs = self.chart_coefficients()
        n = len(cs) - 1
        lc = cs[n]
        M = []
        for i in range(n):
            M.append(P.mul(F, cs[i], _ppow(F, lc, n - 1 - i)))
        M.append([1])
        R = MPolyRing(F, self.coordinate_names)
        coords = {"x": ([[0, 1]], [1]), "y": ([[], [1]], lc)}
        Yexpr = R.mul(_upoly_to_m(R, lc, "x"), R.var("y"))
        return M, coords, Yexpr

    def _place_coords(self, pl: Place):
        K = pl.K
        _, lc = self.coordinate_elements["y"]
        vx = pl.valuation([[0, 1]]) if pl.is_infinite else 0
        if pl.is_infinite:
            xs, _ = pl.local_xy(vx + 1)
        H = [[], [1]]
        vY = pl.valuation(H)
        vl = pl.valuation([lc])
        vy = vY - vl
        m = min(vx, vy, 0)
        if pl.is_infinite:
            X0 = xs.coeff(m) if vx == m else 0
        else:
            X0 = pl.a
        if vy == m:
            sY = pl.expand(H, vY + 1)
            sl = pl.expand([lc], vl + 1)
            Y0 = K.div(sY.coeff(vY), sl.coeff(vl))
        else:
            Y0 = 0
        Z0 = 1 if m == 0 else 0
        coords = [X0, Y0, Z0]
        last = next(c for c in reversed(coords) if c)
        inv = K.inv(last)
        return 0, [K.mul(c, inv) for c in coords]

    def _projective_count(self, L: Field, emb) -> int:
        V = vec_field(L)
        xs = V.elements()
        Q = L.q
        pw = {}

        def powers(arr, e):
            key = (id(arr), e)
            if key not in pw:
                out = np.ones_like(arr)
                for _ in range(e):
                    out = V.mul(out, arr)
                pw[key] = out
            return pw[key]

        X = np.repeat(xs, Q)
        Yv = np.tile(xs, Q)
        acc = np.zeros(Q * Q, dtype=np.int64)
        for (i, j, _), c in self.poly.items():
            term = V.mul(powers(X, i), powers(Yv, j))
            acc = V.add(acc, V.scale(term, emb(c)))
        total = int(np.count_nonzero(acc == 0))
        # line at infinity: (x : 1 : 0) and (1 : 0 : 0)
        acc = np.zeros(Q, dtype=np.int64)
        for (i, j, k), c in self.poly.items():
            if k == 0:
                acc = V.add(acc, V.scale(powers(xs, i), emb(c)))
        total += int(np.count_nonzero(acc == 0))
        if self.poly.get((self.degree, 0, 0), 0) == 0:
            total += 1
        return total


# ----------------------------------------------------------------------------------
# plane smoothness by elimination
# ----------------------------------------------------------------------------------

def _partials(F: Field, A: dict):
    out = []
    for v in range(3):
        D = {}
        for k, c in A.items():
            if k[v]:
                cc = F.mul(c, F.scalar(k[v]))
                if cc:
                    k2 = list(k)
                    k2[v] -= 1
                    D[tuple(k2)] = cc
        out.append(D)
    return out


def _chart(F: Field, A: dict):
    """Dehomogenise at z = 1: list over powers of y of polys in x."""
    n = max((k[1] for k in A), default=0)
    rows = [[] for _ in range(n + 1)]
    for (i, j, _), c in A.items():
        rows[j] = P.add(F, rows[j], P.shift([c], i))
    while rows and not rows[-1]:
        rows.pop()
    return rows


def _resultant_y(F: Field, A, B):
    """Res_y of two polynomials given as lists (over powers of y) of x-polys."""
    m, n = len(A) - 1, len(B) - 1
    if m < 0 or n < 0:
        return []
    if m == 0:
        return _ppow(F, A[0], n)
    if n == 0:
        return _ppow(F, B[0], m)
    size = m + n
    mat = [[[] for _ in range(size)] for _ in range(size)]
    for r in range(n):
        for i, c in enumerate(reversed(A)):
            mat[r][r + i] = list(c)
    for r in range(m):
        for i, c in enumerate(reversed(B)):
            mat[n + r][r + i] = list(c)
    return _poly_det(F, mat)


def plane_singular_point(F: Field, A: dict):
    """Degree of the field of definition of some singular point of the plane
    curve A = 0, or None if it is smooth."""
    polys = [A] + [D for D in _partials(F, A) if D]
    # points (1 : 0 : 0)
    if all(D.get((sum(next(iter(D))), 0, 0), 0) == 0 for D in polys):
        return 1
    # points (x : 1 : 0): polynomials in x
    line = []
    for D in polys:
        row = []
        for (i, j, k), c in D.items():
            if k == 0:
                row = P.add(F, row, P.shift([c], i))
        line.append(row)
    g = []
    for row in line:
        g = P.gcd(F, g, row) if g else P.trim(row)
    if not g or P.deg(g) > 0:
        return 1 if not g else min(P.deg(pi) for pi, _ in P.factor(F, g))
    # affine chart z = 1
    charts = [_chart(F, D) for D in polys]
    base = charts[0]
    if len(base) <= 1:
        return 1
    R = []
    for other in charts[1:]:
        res = _resultant_y(F, base, other)
        if res:
            R = P.gcd(F, R, res) if R else P.trim(res)
    if not R:
        return 1
    if P.deg(R) <= 0:
        return None
    for pi, _ in P.factor(F, P.monic(F, R)):
        d = P.deg(pi)
        K = build_field(F.p, F.k * d)
        emb = canonical_embedding(F.p, F.k, F.k * d)
        alpha = P.roots(K, [emb(c) for c in pi])[0]
        g = None
        for rows in charts:
            spec = P.trim([P.evaluate(K, [emb(c) for c in row], alpha) for row in rows])
            if not spec:
                continue
            g = spec if g is None else P.gcd(K, g, spec)
        if g is None or P.deg(g) > 0:
            return d
    return None


# ----------------------------------------------------------------------------------
# parsing
# ----------------------------------------------------------------------------------

def _x_poly(R: MPolyRing, A: dict, allowed=("x",)):
    """Univariate x-polynomial of an MPoly that uses only x, else None."""
    if not R.uses(A) <= set(allowed):
        return None
    if "x" not in R.names:
        return P.trim([R.const_value(A)])
    ix = R.names.index("x")
    out = []
    for k, c in A.items():
        e = k[ix]
        out += [0] * (e + 1 - len(out))
        out[e] = c
    return P.trim(out)


def _split_by(R: MPolyRing, A: dict, v: str):
    """dict j -> x-poly of the coefficient of v^j (None if other vars occur)."""
    iv = R.names.index(v)
    parts: dict = {}
    for k, c in A.items():
        j = k[iv]
        k2 = list(k)
        k2[iv] = 0
        parts.setdefault(j, {})[tuple(k2)] = c
    out = {}
    for j, B in parts.items():
        xp = _x_poly(R, B)
        if xp is None:
            return None
        out[j] = xp
    return out


def _classify_single(text: str, F: Field, offset: int = 0, tower_part: bool = False):
    names = variable_names(text)
    names_all = list(dict.fromkeys(["x"] + names))
    try:
        parser = Parser(text, F, names_all)
        lhs, rhs = parser.parse_equation()
    except ParseError as exc:
        raise ParseError(str(exc).rsplit(" at position", 1)[0], exc.pos + offset) from None
    R = parser.R
    G = parser.r_add(lhs, parser.r_neg(rhs))
    others = [n for n in names_all if n != "x"]
    if "z" in others and not tower_part:
        num, den = G
        if not R.is_const(den):
            raise CurveError("curves: a plane model must be a polynomial equation")
        if not set(R.uses(num)) <= {"x", "y", "z"}:
            raise CurveError("curves: plane models use only the variables x, y, z")
        c = R.const_value(den)
        num = R.scale(num, F.inv(c))
        idx = [R.names.index(v) if v in R.names else None for v in ("x", "y", "z")]
        poly = {}
        for k, v in num.items():
            poly[tuple(k[i] if i is not None else 0 for i in idx)] = v
        return Plane(F, poly)
    if len(others) != 1:
        raise CurveError("curves: equation matches no supported shape "
                         "(expected one dependent variable besides x)")
    v = others[0]
    num, den = G
    dx = _x_poly(R, den)
    if dx is None:
        raise CurveError(f"curves: equation matches no supported shape ({v} in a denominator)")
    parts = _split_by(R, num, v)
    if parts is None:
        raise CurveError("curves: equation matches no supported shape")
    rj = {j: rf_norm(F, c, dx) for j, c in parts.items() if P.trim(c)}
    p = F.p
    degv = max(rj, default=0)

    def const(j):
        c = rj.get(j)
        if c is None or c[1] != [1] or P.deg(c[0]) != 0:
            return None
        return c[0][0]

    if degv == p and set(rj) <= {0, 1, p}:
        c = const(p)
        c1 = const(1)
        if c is not None and c1 is not None and F.add(c, c1) == 0:
            f0 = rj.get(0, ([], [1]))
            f = rf_scale(F, f0, F.neg(F.inv(c)))
            return ("as", v, f)
    if degv == 2 and not tower_part:
        c = const(2)
        r1 = rj.get(1, ([], [1]))
        r0 = rj.get(0, ([], [1]))
        if c is not None and r1[1] == [1] and r0[1] == [1]:
            inv = F.inv(c)
            h = P.scale(F, r1[0], inv)
            f = P.neg(F, P.scale(F, r0[0], inv))
            return Hyperelliptic(F, h, f)
    raise CurveError("curves: equation matches no supported shape")


def parse_curve(text: str, field: Field) -> CurveModel:
    """Parse an equation into a curve model (see the module docstring)."""
    F = field
    pieces = []
    start = 0
    for m in re.finditer(r";", text):
        pieces.append((text[start:m.start()], start))
        start = m.end()
    pieces.append((text[start:], start))
    pieces = [(s, o) for s, o in pieces if s.strip()]
    if not pieces:
        raise ParseError("empty equation", 0)
    if len(pieces) == 1:
        res = _classify_single(pieces[0][0], F, pieces[0][1])
        if isinstance(res, tuple):
            return ArtinSchreierTower(F, [res[2]])
        return res
    fs = []
    for s, o in pieces:
        res = _classify_single(s, F, o, tower_part=True)
        if not isinstance(res, tuple):
            raise CurveError("curves: every equation of a tower must have the shape w^p - w = f(x)")
        fs.append(res[2])
    return ArtinSchreierTower(F, fs)


# ----------------------------------------------------------------------------------
# places
# ----------------------------------------------------------------------------------

def enumerate_places(curve: CurveModel, d: int) -> list[Place]:
    """All places of exact degree d, in the deterministic order."""
    if d < 1:
        raise CurveError("curves.enumerate_places: degree must be at least 1")
    if curve.field.q ** d > PLACE_BOUND:
        raise CurveError(f"curves.enumerate_places: q^d = {curve.field.q ** d} exceeds the "
                         f"bound {PLACE_BOUND}")
    return curve.function_field.places_of_degree(d)


def rational_places(curve: CurveModel) -> list[Place]:
    return enumerate_places(curve, 1)


def place_coordinates(pl: Place) -> tuple:
    """Readable coordinates of the canonical representative of pl."""
    curve = pl.ff.curve
    K = build_field(curve.field.p, curve.field.k * pl.degree)
    rep = pl.key[2]
    vals = tuple("inf" if v == -1 else K.format(v) for v in rep)
    return vals


def place_label(pl: Place) -> str:
    curve = pl.ff.curve
    coords = place_coordinates(pl)
    if curve.shape == "plane":
        body = "(" + ":".join(coords) + ")"
    elif pl.is_infinite:
        body = "inf"
        if any(c != "inf" for c in coords[1:]):
            body = "inf(" + ",".join(coords[1:]) + ")"
    else:
        body = "(" + ",".join(coords) + ")"
    if pl.degree > 1:
        return f"deg{pl.degree}{body}"
    return body


def places_over(curve: CurveModel, pi) -> list[Place]:
    """Places above the x-place given by a monic irreducible (None = infinity)."""
    return curve.function_field.places_above(None if pi is None else list(pi))


# ----------------------------------------------------------------------------------
# point counting
# ----------------------------------------------------------------------------------

def count_points_by_places(curve: CurveModel, n: int) -> int:
    """N_n = sum_{d | n} d * #places of degree d (slow reference method)."""
    total = 0
    for d in range(1, n + 1):
        if n % d == 0:
            total += d * len(enumerate_places(curve, d))
    return total


def _special_contribution(curve: CurveModel, pis, n: int) -> int:
    total = 0
    for pi in pis:
        if pi is not None and n % P.deg(pi):
            continue
        for pl in curve.function_field.places_above(pi):
            if n % pl.degree == 0:
                total += pl.degree
    return total


def count_points(curve: CurveModel, n: int) -> int:
    """Number of F_{q^n}-rational points of the smooth projective model."""
    if n < 1:
        raise CurveError("curves.count_points: extension degree must be at least 1")
    F = curve.field
    Q = F.q ** n
    if Q > COUNT_BOUND or (curve.shape == "plane" and Q * Q > 16 * COUNT_BOUND):
        raise CurveError(f"curves.count_points: F_{Q} is too large for exhaustive enumeration")
    L = build_field(F.p, F.k * n)
    emb = canonical_embedding(F.p, F.k, F.k * n)
    if curve.shape == "plane":
        return curve._projective_count(L, emb)
    xs = vec_field(L).elements()
    affine, good = curve._affine_count(L, xs, emb)
    special = curve.special_x_places()
    return affine + _special_contribution(curve, special + [None], n)


def curve_genus(curve: CurveModel) -> int:
    return curve.genus


# ----------------------------------------------------------------------------------
# functions, divisors, evaluation
# ----------------------------------------------------------------------------------

@dataclass(frozen=True)
class Pole:
    order: int

    def __str__(self):
        return f"pole of order {self.order}"


class Divisor:
    """Finite formal sum of places with nonzero integer multiplicities."""

    __slots__ = ("_d",)

    def __init__(self, data=None):
        d = {}
        for pl, m in (data or {}).items():
            if m:
                d[pl] = d.get(pl, 0) + int(m)
        self._d = {pl: m for pl, m in d.items() if m}

    @classmethod
    def from_vector(cls, places, vec) -> "Divisor":
        if len(places) != len(vec):
            raise CurveError("curves.Divisor: vector length does not match the place list")
        return cls({pl: m for pl, m in zip(places, vec)})

    def items(self):
        return sorted(self._d.items(), key=lambda t: t[0].key)

    def __iter__(self):
        return iter(pl for pl, _ in self.items())

    def __getitem__(self, pl):
        return self._d.get(pl, 0)

    def get(self, pl, default=0):
        return self._d.get(pl, default)

    def __len__(self):
        return len(self._d)

    def __bool__(self):
        return bool(self._d)

    def as_dict(self) -> dict:
        return dict(self._d)

    @property
    def degree(self) -> int:
        return sum(m * pl.degree for pl, m in self._d.items())

    @property
    def support(self):
        return [pl for pl, _ in self.items()]

    def __add__(self, o: "Divisor") -> "Divisor":
        d = dict(self._d)
        for pl, m in o._d.items():
            d[pl] = d.get(pl, 0) + m
        return Divisor(d)

    def __neg__(self) -> "Divisor":
        return Divisor({pl: -m for pl, m in self._d.items()})

    def __sub__(self, o: "Divisor") -> "Divisor":
        return self + (-o)

    def __mul__(self, k: int) -> "Divisor":
        return Divisor({pl: k * m for pl, m in self._d.items()})

    __rmul__ = __mul__

    def __eq__(self, o):
        return isinstance(o, Divisor) and self._d == o._d

    def __hash__(self):
        return hash(frozenset((id(pl), m) for pl, m in self._d.items()))

    def positive_part(self) -> "Divisor":
        return Divisor({pl: m for pl, m in self._d.items() if m > 0})

    def negative_part(self) -> "Divisor":
        return Divisor({pl: -m for pl, m in self._d.items() if m < 0})

    def is_effective(self) -> bool:
        return all(m > 0 for m in self._d.values())

    def vector(self, places) -> list[int]:
        return [self._d.get(pl, 0) for pl in places]

    def __repr__(self):
        if not self._d:
            return "0"
        parts = []
        for pl, m in self.items():
            lab = place_label(pl)
            parts.append(f"{m:+d}*{lab}")
        return " ".join(parts)


class CurveFunction:
    """The function num/den with num, den in F_q[x][Y] (lists of x-polys per
    power of the primitive element Y)."""

    def __init__(self, curve: CurveModel, num, den=None):
        ff = curve.function_field
        self.curve = curve
        self.num = ff.reduce([list(h) for h in num])
        self.den = ff.reduce([list(h) for h in (den if den is not None else [[1]])])
        if not any(self.den):
            raise CurveError("curves: function with zero denominator")

    @classmethod
    def constant(cls, curve: CurveModel, c: int) -> "CurveFunction":
        return cls(curve, [[c]] if c else [])

    @property
    def is_zero(self) -> bool:
        return not any(self.num)

    def __mul__(self, o: "CurveFunction") -> "CurveFunction":
        ff = self.curve.function_field
        return CurveFunction(self.curve, ff.mul(self.num, o.num), ff.mul(self.den, o.den))

    def __truediv__(self, o: "CurveFunction") -> "CurveFunction":
        if o.is_zero:
            raise ZeroDivisionError("curves: division by the zero function")
        ff = self.curve.function_field
        return CurveFunction(self.curve, ff.mul(self.num, o.den), ff.mul(self.den, o.num))

    def __add__(self, o: "CurveFunction") -> "CurveFunction":
        ff = self.curve.function_field
        num = ff.add(ff.mul(self.num, o.den), ff.mul(o.num, self.den))
        return CurveFunction(self.curve, num, ff.mul(self.den, o.den))

    def __neg__(self):
        F = self.curve.field
        return CurveFunction(self.curve, [P.neg(F, h) for h in self.num], self.den)

    def __sub__(self, o):
        return self + (-o)

    def __pow__(self, e: int):
        out = CurveFunction.constant(self.curve, 1)
        base = self if e >= 0 else CurveFunction.constant(self.curve, 1) / self
        for _ in range(abs(e)):
            out = out * base
        return out

    def __repr__(self):
        return f"CurveFunction({self.text})"

    @property
    def text(self) -> str:
        """Expression in the model coordinates."""
        curve = self.curve
        R = MPolyRing(curve.field, curve.coordinate_names)
        Yx = curve.Y_expression

        def conv(H):
            acc = {}
            Ypow = R.const(1)
            for h in H:
                if h:
                    acc = R.add(acc, R.mul(_upoly_to_m(R, h, "x"), Ypow))
                Ypow = R.mul(Ypow, Yx)
            return acc

        num, den = conv(self.num), conv(self.den)
        nt = format_mpoly(curve.field, R.names, num)
        if den == R.const(1):
            return nt
        dt = format_mpoly(curve.field, R.names, den)
        if len(num) > 1:
            nt = f"({nt})"
        if len(den) > 1:
            dt = f"({dt})"
        return f"{nt}/{dt}"


def parse_function(curve: CurveModel, text: str) -> CurveFunction:
    """Parse a rational expression in the coordinates of the model (x, y or
    x, y1..yr; plane models also accept z, which is set to 1)."""
    F = curve.field
    names = list(curve.coordinate_names)
    if curve.shape == "plane":
        names.append("z")
    parser = Parser(text, F, names)
    num, den = parser.parse_expression()
    ff = curve.function_field
    R = parser.R
    elems = dict(curve.coordinate_elements)
    if curve.shape == "plane":
        elems["z"] = ([[1]], [1])

    def to_elem(A):
        """(H, d) with H in F_q[x][Y], d in F_q[x]."""
        accH, accd = [], [1]
        for k, c in A.items():
            H, d = [[c]], [1]
            for name, e in zip(R.names, k):
                h1, d1 = elems[name]
                for _ in range(e):
                    H = ff.mul(H, h1)
                    d = P.mul(F, d, d1)
            # accH/accd + H/d
            accH = ff.add(ff.scale_poly(accH, d), ff.scale_poly(H, accd))
            accd = P.mul(F, accd, d)
        return accH, accd

    nH, nd = to_elem(num)
    dH, dd = to_elem(den)
    if not any(dH):
        raise CurveError("curves: function with zero denominator on the curve")
    return CurveFunction(curve, ff.scale_poly(nH, dd), ff.scale_poly(dH, nd))


def _element_divisor(ff: FunctionField, H) -> dict:
    F = ff.F
    N = ff.norm(H)
    out = {}
    fin = 0
    for pi, e in P.factor(F, N):
        tot = 0
        for pl in ff.places_above(pi):
            v = pl.valuation(H)
            if v:
                out[pl] = v
                tot += v * (pl.degree // P.deg(pi))
                fin += v * pl.degree
        if tot != e:
            raise AssertionError("curves.divisor_of: norm and valuations disagree")
    infty = 0
    for pl in ff.places_above(None):
        v = pl.valuation(H)
        if v:
            out[pl] = v
            infty += v * pl.degree
    if fin + infty != 0:
        raise AssertionError("curves.divisor_of: principal divisor of nonzero degree")
    return out


def divisor_of(f: CurveFunction) -> Divisor:
    if f.is_zero:
        raise CurveError("curves.divisor_of: the zero function has no divisor")
    ff = f.curve.function_field
    return Divisor(_element_divisor(ff, f.num)) - Divisor(_element_divisor(ff, f.den))


def valuation(f: CurveFunction, pl: Place) -> int:
    if f.is_zero:
        raise CurveError("curves.valuation: zero function")
    return pl.valuation(f.num) - pl.valuation(f.den)


def evaluate(f: CurveFunction, pl: Place):
    """Value of f at pl (an F_q element for degree-one places, else an element
    of the residue field), or a :class:`Pole`."""
    if pl.ff is not f.curve.function_field:
        raise CurveError("curves.evaluate: place belongs to another curve")
    if f.is_zero:
        return 0
    v = valuation(f, pl)
    if v < 0:
        return Pole(-v)
    if v > 0:
        return 0
    vn = pl.valuation(f.num)
    vd = pl.valuation(f.den)
    K = pl.K
    val = K.div(pl.expand(f.num, vn + 1).coeff(vn), pl.expand(f.den, vd + 1).coeff(vd))
    if pl.degree == 1:
        table = pl.emb.preimage_table()
        return table[val]
    return val
