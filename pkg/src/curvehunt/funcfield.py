"""Function-field engine shared by every curve shape.

A curve is handled as the function field F_q(x)[Y]/(M(Y)) where M is monic in
Y with coefficients in F_q[x], so Y is integral over F_q[x].  Places above an
x-place are found by resolving the singularities of the local equation with
Hamburger-Noether blow-ups (valid in every characteristic, including wildly
ramified places), which yields a uniformizer t and power series for x and Y.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import poly as P
from .ff import Field, build_field, canonical_embedding, Embedding
from .series import Series, EXACT, PrecisionError


# ----------------------------------------------------------------------------
# bivariate polynomials: dict {(i, j): c} meaning sum c X^i Y^j
# ----------------------------------------------------------------------------

def _bmap(G: dict, emb) -> dict:
    return {k: emb(c) for k, c in G.items()}


def _border(G: dict) -> int:
    return min(i + j for (i, j) in G)


def _binom_row(K: Field, j: int, mu: int) -> list[int]:
    """Coefficients of (mu + Y)^j."""
    p = K.p
    return [K.mul(math.comb(j, l) % p, K.pow(mu, j - l)) for l in range(j + 1)]


def _blow_a(K: Field, G: dict, mu: int, m: int) -> dict:
    """G(X, X(mu + Y)) / X^m."""
    out: dict = {}
    add = K.add
    rows = {}
    for (i, j), c in G.items():
        if j not in rows:
            rows[j] = _binom_row(K, j, mu)
        e = i + j - m
        for l, b in enumerate(rows[j]):
            if b:
                key = (e, l)
                out[key] = add(out.get(key, 0), K.mul(c, b))
    return {k: v for k, v in out.items() if v}


def _blow_b(G: dict, m: int) -> dict:
    """G(X Y, Y) / Y^m."""
    return {(i, i + j - m): c for (i, j), c in G.items()}


def _translate(K: Field, rows: list[list[int]], a: int, b: int) -> dict:
    """Given M = sum rows[j](X) Y^j over K, return M(a + X, b + Y)."""
    out: dict = {}
    add, mul = K.add, K.mul
    for j, r in enumerate(rows):
        if not r:
            continue
        rx = P.compose(K, r, [a, 1]) if a else r
        br = _binom_row(K, j, b)
        for l, bl in enumerate(br):
            if not bl:
                continue
            for i, c in enumerate(rx):
                if c:
                    key = (i, l)
                    out[key] = add(out.get(key, 0), mul(c, bl))
    return {k: v for k, v in out.items() if v}


def _y_rows(G: dict) -> list[list[int]]:
    """Coefficient polynomials in X of the powers of Y."""
    dy = max(j for (_, j) in G)
    dx = max(i for (i, _) in G)
    rows = [[0] * (dx + 1) for _ in range(dy + 1)]
    for (i, j), c in G.items():
        rows[j][i] = c
    return [P.trim(r) for r in rows]


def _solve_series(K: Field, G: dict, n: int, swap: bool) -> Series:
    """Power series phi with G(t, phi(t)) = 0 (or G(phi(t), t) = 0 if swap),
    phi(0) = 0, to absolute precision n; the point must be smooth in the
    solved variable."""
    if swap:
        G = {(j, i): c for (i, j), c in G.items()}
    rows = _y_rows(G)
    drows = [P.scale(K, r, K.scalar(j)) for j, r in enumerate(rows)][1:]
    phi = Series.zero(K, 1)
    prec = 1
    rs = [Series.from_poly(K, r) for r in rows]
    drs = [Series.from_poly(K, r) for r in drows]
    while prec < n:
        prec = min(2 * prec, n)
        approx = Series(K, phi.val, phi.c, prec) if phi.c else Series.zero(K, prec)
        val = _horner(K, rs, approx, prec)
        der = _horner(K, drs, approx, prec)
        corr = val * der.inverse(prec)
        phi = (approx - corr).truncate(prec)
    return phi.truncate(n)


def _horner(K: Field, coeffs: list[Series], s: Series, prec: int) -> Series:
    acc = Series.zero(K)
    for c in reversed(coeffs):
        acc = (acc * s + c).truncate(prec)
    return acc


# ----------------------------------------------------------------------------
# branches
# ----------------------------------------------------------------------------

@dataclass
class Branch:
    """A resolved branch of G(X, Y) = 0 through the origin, over field K."""
    K: Field
    steps: list            # [('A', mu) | ('B', None)], outermost first
    final: dict            # smooth local equation at the end
    swap: bool             # solve X as a series in Y at the end

    def local_series(self, n: int):
        """(X(t), Y(t)) with absolute precision at least n."""
        K = self.K
        extra = 0
        while True:
            N = n + extra
            phi = _solve_series(K, self.final, N, self.swap)
            t = Series.monomial(K, 1, 1)
            U, V = (phi, t) if self.swap else (t, phi)
            for op, mu in reversed(self.steps):
                if op == 'A':
                    U, V = U, U * (Series.const(K, mu) + V)
                else:
                    U, V = V * U, V
            if min(U.prec, V.prec) >= n:
                return U.truncate(n), V.truncate(n)
            extra = 2 * extra + 4


def _map_steps(steps, emb):
    return [(op, emb(mu) if op == 'A' else None) for op, mu in steps]


def _extend(K: Field, deg: int):
    K2 = build_field(K.p, K.k * deg)
    return K2, canonical_embedding(K.p, K.k, K.k * deg)


def resolve(K: Field, G: dict, steps=None, chain=None) -> list[tuple[Branch, Embedding]]:
    """Resolve all branches of G = 0 at the origin (G(0,0) = 0).  Returns
    (branch, embedding of K into the branch's residue field)."""
    steps = steps or []
    if chain is None:
        chain = Embedding(K, K, K.generator() if K.k > 1 else None)
    m = _border(G)
    if m == 1:
        cy = G.get((0, 1), 0)
        return [(Branch(K, steps, G, swap=(cy == 0)), chain)]
    out = []
    cone = [0] * (m + 1)
    for (i, j), c in G.items():
        if i + j == m:
            cone[j] = c
    h = P.trim(cone)
    for fac, _mult in P.factor(K, h) if P.deg(h) > 0 else []:
        d = P.deg(fac)
        if d == 1:
            mu = K.neg(K.div(fac[0], fac[1]))
            out += resolve(K, _blow_a(K, G, mu, m), steps + [('A', mu)], chain)
        else:
            K2, emb = _extend(K, d)
            mu = P.roots(K2, [emb(c) for c in fac])[0]
            G2 = _bmap(G, emb)
            out += resolve(K2, _blow_a(K2, G2, mu, m), _map_steps(steps, emb) + [('A', mu)],
                           chain.then(emb))
    if P.deg(h) < m:
        out += resolve(K, _blow_b(G, m), steps + [('B', None)], chain)
    return out


# ----------------------------------------------------------------------------
# places
# ----------------------------------------------------------------------------

class Place:
    """A place of the function field.  ``base`` is the monic irreducible
    polynomial of the x-place below, or None for the place at infinity."""

    __slots__ = ("ff", "base", "a", "b", "branch", "K", "emb", "degree", "e",
                 "key", "index", "_cache", "_mono")

    def __init__(self, ff, base, a, b, branch, K, emb):
        self.ff = ff
        self.base = base
        self.a = a
        self.b = b
        self.branch = branch
        self.K = K
        self.emb = emb          # F_q -> K
        self.degree = K.k // ff.F.k
        self._cache = {}
        self._mono = {}
        n = 2
        while True:
            X, _ = branch.local_series(n)
            if X.c:
                break
            n *= 2
        self.e = X.val
        self.key = None
        self.index = None

    @property
    def is_infinite(self) -> bool:
        return self.base is None

    def local_xy(self, n: int):
        """Series (x, Y) at this place in the uniformizer t, to absolute
        precision at least n."""
        hit = None
        for m, v in self._cache.items():
            if m >= n and (hit is None or m < hit):
                hit = m
        if hit is not None:
            return self._cache[hit]
        K = self.K
        ff = self.ff
        extra = 0
        if self.base is None:
            extra = (2 + ff.k_inf) * self.e
        while True:
            N = n + extra
            X, Yl = self.branch.local_series(N)
            Yl = Yl + Series.const(K, self.b)
            if self.base is None:
                xs = X.inverse()
                Ys = Yl * (xs ** ff.k_inf) if ff.k_inf else Yl
            else:
                xs = X + Series.const(K, self.a)
                Ys = Yl
            if min(xs.prec, Ys.prec) >= n:
                xs, Ys = xs.truncate(n), Ys.truncate(n)
                self._cache[n] = (xs, Ys)
                self._mono = {}
                return xs, Ys
            extra = 2 * extra + 4

    def expand(self, H: list[list[int]], n: int) -> Series:
        """Series of the element sum H[i](x) Y^i to absolute precision >= n."""
        ff = self.ff
        K, emb = self.K, self.emb
        lift = n + max(0, ff.pole_bound(self, H))
        while True:
            xs, Ys = self.local_xy(lift)
            acc = Series.zero(K)
            for hi in reversed(H):
                coef = _poly_at(K, [emb(c) for c in hi], xs)
                acc = acc * Ys + coef
            if acc.prec >= n:
                return acc.truncate(n)
            lift += (n - acc.prec) + 4

    def valuation(self, H) -> int:
        """Valuation of a nonzero element H (list of coefficient polys)."""
        n = 8
        while True:
            s = self.expand(H, n)
            if s.c:
                return s.val
            n *= 2
            if n > 1 << 14:
                raise PrecisionError("funcfield: valuation did not stabilise (zero element?)")

    def __repr__(self):
        return f"Place({self.key})"

    def __lt__(self, o):
        return self.key < o.key


def _poly_at(K: Field, c: list[int], s: Series) -> Series:
    acc = Series.zero(K)
    for x in reversed(c):
        acc = acc * s + Series.const(K, x)
    return acc


def _frob_min(K: Field, F: Field, emb: Embedding, values):
    """Canonical Galois-orbit representative of a tuple of residue values.
    Values are K-ints or None (pole)."""
    canon = canonical_embedding(F.p, F.k, K.k)
    sigma = 0
    if F.k > 1:
        g = emb(F.generator())
        target = canon(F.generator())
        for i in range(K.k):
            if K.frob(g, i) == target:
                sigma = i
                break
    vals = [None if v is None else K.frob(v, sigma) for v in values]
    best = None
    for j in range(K.k // F.k):
        cand = tuple(-1 if v is None else K.frob(v, F.k * j) for v in vals)
        if best is None or cand < best:
            best = cand
    return best


class FunctionField:
    """F_q(x)[Y]/(M), M monic in Y with coefficients in F_q[x]."""

    def __init__(self, F: Field, M: list[list[int]], genus: int, coord_fns=None):
        self.F = F
        self.M = [P.trim(list(c)) for c in M]
        self.n = len(M) - 1
        if self.M[-1] != [1]:
            raise ValueError("funcfield: defining polynomial must be monic in Y")
        self.genus = genus
        n = self.n
        k = 0
        for i in range(n):
            d = P.deg(self.M[i])
            if d > 0:
                k = max(k, -(-d // (n - i)))
        self.k_inf = k
        self._above = {}
        self._above_partial = {}
        self._registry = {}              # one Place object per place
        self._disc = None
        self._den = None
        # coordinate functions used for naming places: callables place -> values
        self.coord_fns = coord_fns

    # -- places ---------------------------------------------------------------------------
    def places_above(self, pi, max_degree: int | None = None) -> list[Place]:
        """All places above the x-place pi (monic irreducible), or above
        infinity if pi is None; deterministically ordered.  With max_degree,
        only places of degree <= max_degree are guaranteed to be returned
        (higher ones are skipped without building their residue fields)."""
        key = None if pi is None else tuple(pi)
        if key in self._above:
            return self._above[key]
        pkey = (key, max_degree)
        if max_degree is not None and pkey in self._above_partial:
            return self._above_partial[pkey]
        F = self.F
        if pi is None:
            K0, emb0 = F, Embedding(F, F, F.generator() if F.k > 1 else None)
            rows = self._rows_at_infinity()
            a = 0
        else:
            d = P.deg(pi)
            K0 = build_field(F.p, F.k * d)
            emb0 = canonical_embedding(F.p, F.k, F.k * d)
            a = P.roots(K0, [emb0(c) for c in pi])[0]
            rows = self.M
        rows0 = [[emb0(c) for c in r] for r in rows]
        fiber = P.trim([P.evaluate(K0, r, a) for r in rows0])
        places = []
        base_deg = 1 if pi is None else P.deg(pi)
        partial = False
        for fac, mult in P.factor(K0, fiber):
            d2 = P.deg(fac)
            if max_degree is not None and base_deg * d2 > max_degree:
                partial = True
                continue
            if d2 == 1:
                K1, e1 = K0, None
                b = K0.neg(K0.div(fac[0], fac[1]))
            else:
                K1, e1 = _extend(K0, d2)
                b = P.roots(K1, [e1(c) for c in fac])[0]
            chain = emb0 if e1 is None else emb0.then(e1)
            rows1 = rows0 if e1 is None else [[e1(c) for c in r] for r in rows0]
            a1 = a if e1 is None else e1(a)
            G = _translate(K1, rows1, 0 if pi is None else a1, b)
            if mult == 1:
                cy = G.get((0, 1), 0)
                brs = [(Branch(K1, [], G, swap=(cy == 0)), None)]
            else:
                brs = resolve(K1, G)
            for br, emb in brs:
                if emb is None or (emb.src is emb.dst and emb.src.k == 1):
                    fullchain = chain
                else:
                    fullchain = chain.then(emb)
                    if emb.dst is not K1:
                        a1m = emb(a1)
                        bm = emb(b)
                    else:
                        a1m, bm = a1, b
                a_final = a1 if emb is None else emb(a1)
                b_final = b if emb is None else emb(b)
                places.append(Place(self, None if pi is None else list(pi), a_final,
                                    b_final, br, br.K, fullchain))
        canon = []
        for pl in places:
            pl.key = self._place_key(pl)
            canon.append(self._registry.setdefault((key, pl.key), pl))
        places = sorted(canon, key=lambda pl: pl.key)
        if partial:
            self._above_partial[pkey] = places
        else:
            self._above[key] = places
        return places

    def _place_key(self, pl: Place):
        flag = 0 if pl.is_infinite else 1
        if self.coord_fns is not None:
            flag, vals = self.coord_fns(pl)
        else:
            xs, Ys = pl.local_xy(1)
            vals = [None if pl.is_infinite else pl.a,
                    Ys.coeff(0) if Ys.val >= 0 else None]
        rep = _frob_min(pl.K, self.F, pl.emb, vals)
        return (pl.degree, flag, rep, pl.e)

    def _rows_at_infinity(self):
        """Coefficient rows (in s = 1/x) of s^{k n} M(1/s, s^{-k} Y')."""
        n, k = self.n, self.k_inf
        rows = []
        for i, c in enumerate(self.M):
            if not c:
                rows.append([])
                continue
            shift = k * (n - i) - P.deg(c)
            rows.append(P.shift(list(reversed(c)), shift))
        return rows

    def pole_bound(self, pl: Place, H) -> int:
        """Upper bound for the pole order of the element H at pl."""
        if not pl.is_infinite:
            return 0
        dx = max((P.deg(h) for h in H if h), default=0)
        return pl.e * (dx + self.k_inf * (len(H) - 1))

    def all_x_places(self, d: int):
        """Monic irreducible polynomials of degree d (the finite x-places)."""
        return P.irreducibles(self.F, d)

    def places_of_degree(self, d: int) -> list[Place]:
        out = []
        F = self.F
        for dp in range(1, d + 1):
            if d % dp:
                continue
            for pi in self.all_x_places(dp):
                out += [pl for pl in self.places_above(pi, d) if pl.degree == d]
        out += [pl for pl in self.places_above(None, d) if pl.degree == d]
        out.sort(key=lambda pl: pl.key)
        for i, pl in enumerate(out):
            pl.index = i
        return out

    # -- arithmetic in F_q[x][Y]/(M) ------------------------------------------------
    def reduce(self, H):
        """Reduce a list of coefficient polys modulo M."""
        F = self.F
        H = [list(h) for h in H]
        n = self.n
        while len(H) > n:
            top = H.pop()
            if not top:
                continue
            d = len(H) - n
            for i in range(n):
                if self.M[i]:
                    H[d + i] = P.sub(F, H[d + i], P.mul(F, top, self.M[i]))
        while H and not H[-1]:
            H.pop()
        return H

    def mul(self, A, B):
        F = self.F
        out = [[] for _ in range(max(0, len(A) + len(B) - 1))]
        for i, a in enumerate(A):
            if not a:
                continue
            for j, b in enumerate(B):
                if b:
                    out[i + j] = P.add(F, out[i + j], P.mul(F, a, b))
        return self.reduce(out)

    def add(self, A, B):
        F = self.F
        n = max(len(A), len(B))
        out = [P.add(F, A[i] if i < len(A) else [], B[i] if i < len(B) else []) for i in range(n)]
        while out and not out[-1]:
            out.pop()
        return out

    def scale_poly(self, A, c):
        return [P.mul(self.F, a, c) for a in A]

    def norm(self, H) -> list[int]:
        """Norm of H to F_q[x]: determinant of multiplication by H."""
        F = self.F
        n = self.n
        cols = []
        cur = self.reduce(H)
        for k in range(n):
            col = cur + [[] for _ in range(n - len(cur))]
            cols.append(col)
            cur = self.mul(cur, [[], [1]])
        mat = [[cols[j][i] for j in range(n)] for i in range(n)]
        return _poly_det(F, mat)

    def discriminant(self) -> list[int]:
        if self._disc is None:
            F = self.F
            n = self.n
            dM = [P.scale(F, self.M[i], F.scalar(i)) for i in range(1, n + 1)]
            # disc = +- norm(M'(Y))
            self._disc = P.monic(F, self.norm(dM)) if any(dM) else []
        return self._disc

    def index_bound(self) -> list[int]:
        """Den = prod pi^floor(v_pi(disc)/2): the integral closure is inside
        (1/Den) F_q[x][Y]."""
        if self._den is None:
            F = self.F
            den = [1]
            disc = self.discriminant()
            if not disc:
                raise ValueError("funcfield: inseparable defining polynomial")
            for pi, e in P.factor(F, disc):
                for _ in range(e // 2):
                    den = P.mul(F, den, pi)
            self._den = den
        return self._den


def _poly_det(F: Field, mat):
    """Determinant of a square matrix over F_q[x] (Bareiss)."""
    n = len(mat)
    A = [[list(c) for c in row] for row in mat]
    sign = 1
    prev = [1]
    for k in range(n - 1):
        piv = next((r for r in range(k, n) if A[r][k]), None)
        if piv is None:
            return []
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = P.sub(F, P.mul(F, A[i][j], A[k][k]), P.mul(F, A[i][k], A[k][j]))
                A[i][j] = P.quo(F, num, prev)
            A[i][k] = []
        prev = A[k][k]
    det = A[n - 1][n - 1]
    if sign < 0:
        det = P.neg(F, det)
    return det
