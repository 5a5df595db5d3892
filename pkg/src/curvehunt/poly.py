"""Dense univariate polynomials over a :class:`~curvehunt.ff.Field`.

A polynomial is a list of field ints, constant term first, with no trailing
zeros; the zero polynomial is ``[]``.  All functions take the field first.
"""

from __future__ import annotations

import random

from .ff import Field


def trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def deg(a) -> int:
    return len(a) - 1 if a else -1


def add(F: Field, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = F.add(out[i], c)
    return trim(out)


def neg(F: Field, a):
    return [F.neg(c) for c in a]


def sub(F: Field, a, b):
    return add(F, a, neg(F, b))


def scale(F: Field, a, c: int):
    if c == 0:
        return []
    return [F.mul(x, c) for x in a]


def shift(a, n: int):
    return [0] * n + list(a) if a else []


def mul(F: Field, a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    add_, mul_ = F.add, F.mul
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = add_(out[i + j], mul_(x, y))
    return trim(out)


def divmod_(F: Field, a, b):
    if not b:
        raise ZeroDivisionError("poly: division by zero polynomial")
    a = list(a)
    db = len(b) - 1
    inv = F.inv(b[-1])
    qt = [0] * max(0, len(a) - db)
    while len(a) - 1 >= db and a:
        c = F.mul(a[-1], inv)
        s = len(a) - 1 - db
        qt[s] = c
        for i, bi in enumerate(b):
            a[s + i] = F.sub(a[s + i], F.mul(c, bi))
        a.pop()
        trim(a)
    return trim(qt), a


def rem(F: Field, a, b):
    return divmod_(F, a, b)[1]


def quo(F: Field, a, b):
    return divmod_(F, a, b)[0]


def monic(F: Field, a):
    if not a:
        return []
    return scale(F, a, F.inv(a[-1]))


def gcd(F: Field, a, b):
    a, b = list(a), list(b)
    while b:
        a, b = b, rem(F, a, b)
    return monic(F, a)


def xgcd(F: Field, a, b):
    """Return (g, s, t) with s*a + t*b = g monic."""
    r0, r1 = list(a), list(b)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = divmod_(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(F, s0, mul(F, q, s1))
        t0, t1 = t1, sub(F, t0, mul(F, q, t1))
    if not r0:
        return [], [], []
    c = F.inv(r0[-1])
    return scale(F, r0, c), scale(F, s0, c), scale(F, t0, c)


def evaluate(F: Field, a, x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def derivative(F: Field, a):
    return trim([F.mul(F.scalar(i), c) for i, c in enumerate(a)][1:])


def powmod(F: Field, a, e: int, m):
    result = [1]
    base = rem(F, a, m)
    while e:
        if e & 1:
            result = rem(F, mul(F, result, base), m)
        base = rem(F, mul(F, base, base), m)
        e >>= 1
    return result


def compose(F: Field, a, b):
    """a(b(x))."""
    acc = []
    for c in reversed(a):
        acc = add(F, mul(F, acc, b), [c] if c else [])
    return acc


def map_coeffs(a, fn):
    return trim([fn(c) for c in a])


def pth_root(F: Field, a):
    """For a polynomial in x^p, return its p-th root."""
    p = F.p
    return trim([F.root_p(a[i]) for i in range(0, len(a), p)])


def squarefree_factorization(F: Field, f):
    """Return [(g, e)] with f = lc * prod g^e, g monic squarefree coprime."""
    f = monic(F, f)
    out = []

    def rec(f, mult):
        if deg(f) <= 0:
            return
        fp = derivative(F, f)
        if not fp:
            rec(pth_root(F, f), mult * F.p)
            return
        c = gcd(F, f, fp)
        w = quo(F, f, c)
        i = 1
        while deg(w) > 0:
            y = gcd(F, w, c)
            z = quo(F, w, y)
            if deg(z) > 0:
                out.append((z, i * mult))
            i += 1
            w = y
            c = quo(F, c, y)
        if deg(c) > 0:
            rec(pth_root(F, c), mult * F.p)

    rec(f, 1)
    return out


def distinct_degree(F: Field, f):
    """f monic squarefree -> [(g_d, d)] with g_d the product of degree-d factors."""
    out = []
    q = F.q
    h = [0, 1]
    xpoly = [0, 1]
    d = 0
    f = list(f)
    while deg(f) >= 2 * (d + 1):
        d += 1
        h = powmod(F, h, q, f)
        g = gcd(F, f, sub(F, h, xpoly))
        if deg(g) > 0:
            out.append((g, d))
            f = quo(F, f, g)
            h = rem(F, h, f)
    if deg(f) > 0:
        out.append((monic(F, f), deg(f)))
    return out


def _split(F: Field, f, d: int):
    """Equal-degree factorization (Cantor-Zassenhaus), deterministic seeds."""
    n = deg(f)
    if n == d:
        return [f]
    q = F.q
    rng = random.Random(n * 1000003 + d)
    while True:
        # deterministic pseudo-random polynomial of degree < n
        a = trim([rng.randrange(q) for _ in range(n)])
        if deg(a) < 1:
            continue
        if F.p == 2:
            # trace map a + a^2 + ... + a^{2^{kd-1}}
            t = a
            acc = a
            for _ in range(F.k * d - 1):
                t = rem(F, mul(F, t, t), f)
                acc = add(F, acc, t)
            g = gcd(F, f, acc)
        else:
            e = (q ** d - 1) // 2
            b = powmod(F, a, e, f)
            g = gcd(F, f, sub(F, b, [1]))
        if 0 < deg(g) < n:
            return _split(F, g, d) + _split(F, quo(F, f, g), d)


def factor(F: Field, f):
    """Monic irreducible factors with multiplicity, sorted deterministically."""
    out = []
    for g, e in squarefree_factorization(F, f):
        for h, d in distinct_degree(F, g):
            for irr in _split(F, h, d):
                out.append((monic(F, irr), e))
    out.sort(key=lambda fe: (deg(fe[0]), fe[0][::-1], fe[1]))
    return out


def roots(F: Field, f) -> list[int]:
    """Distinct roots of f in F, sorted."""
    out = []
    for g, _ in factor(F, f):
        if deg(g) == 1:
            out.append(F.neg(g[0]))
    return sorted(out)


def is_irreducible(F: Field, f) -> bool:
    fs = factor(F, f)
    return len(fs) == 1 and fs[0][1] == 1


def irreducibles(F: Field, d: int):
    """All monic irreducible polynomials of degree d, via Frobenius orbits."""
    from .ff import build_field, canonical_embedding
    E = build_field(F.p, F.k * d)
    emb = canonical_embedding(F.p, F.k, F.k * d)
    inv = emb.preimage_table() if F.q <= 4096 else None
    seen = set()
    out = []
    for a in E.elements():
        if a in seen:
            continue
        orbit = minpoly_orbit(E, a, F.k)
        if len(orbit) != d:
            continue
        seen.update(orbit)
        mp = [1]
        for r in orbit:
            mp = mul(E, mp, [E.neg(r), 1])
        if inv is None:
            inv = emb.preimage_table()
        out.append([inv[c] for c in mp])
    out.sort(key=lambda f: f[::-1])
    return out


def minpoly_orbit(E: Field, a: int, k: int) -> list[int]:
    """Frobenius orbit of a over the subfield of degree k (over F_p)."""
    orbit = [a]
    b = E.frob(a, k)
    while b != a:
        orbit.append(b)
        b = E.frob(b, k)
    return orbit


def resultant_int(a: list[int], b: list[int]) -> int:
    """Resultant of two integer polynomials (constant term first), exact."""
    from fractions import Fraction
    if not a or not b:
        return 0
    # Sylvester determinant via fraction-free elimination
    m, n = len(a) - 1, len(b) - 1
    if m == 0:
        return a[0] ** n
    if n == 0:
        return b[0] ** m
    size = m + n
    rows = []
    for i in range(n):
        row = [0] * size
        for j, c in enumerate(reversed(a)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [0] * size
        for j, c in enumerate(reversed(b)):
            row[i + j] = c
        rows.append(row)
    M = [[Fraction(x) for x in r] for r in rows]
    det = Fraction(1)
    for c in range(size):
        piv = next((r for r in range(c, size) if M[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, size):
            if M[r][c]:
                f = M[r][c] / M[c][c]
                for k in range(c, size):
                    M[r][k] -= f * M[c][k]
    assert det.denominator == 1
    return int(det)
