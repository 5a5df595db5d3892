"""Independent brute-force oracles used by the tests."""

import itertools

from curvehunt.ff import build_field


def ext_field(F, n):
    return build_field(F.p, F.k * n)


def embed_poly(F, K, coeffs):
    from curvehunt.ff import canonical_embedding
    if K is F:
        return list(coeffs)
    e = canonical_embedding(F.p, F.k, K.k)
    return [e(c) for c in coeffs]


def peval(K, coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = K.add(K.mul(acc, x), c)
    return acc


def count_as_odd_degree(F, f, n):
    """Points of y^2 + y = f(x) (char 2, deg f odd) over F_{q^n}: affine
    solutions plus the single point at infinity."""
    K = ext_field(F, n)
    fk = embed_poly(F, K, f)
    sq = {}
    for y in K.elements():
        v = K.add(K.mul(y, y), y)
        sq[v] = sq.get(v, 0) + 1
    return 1 + sum(sq.get(peval(K, fk, x), 0) for x in K.elements())


def count_odd_char_odd_degree(F, f, n):
    """Points of y^2 = f(x) (odd char, deg f odd) over F_{q^n}."""
    K = ext_field(F, n)
    fk = embed_poly(F, K, f)
    sq = {}
    for y in K.elements():
        v = K.mul(y, y)
        sq[v] = sq.get(v, 0) + 1
    return 1 + sum(sq.get(peval(K, fk, x), 0) for x in K.elements())


def count_projective_plane(F, monomials, n):
    """Projective points of sum c x^i y^j z^k = 0 over F_{q^n};
    monomials: {(i, j, k): coefficient}."""
    K = ext_field(F, n)
    mons = [(e, embed_poly(F, K, [c])[0]) for e, c in monomials.items()]

    def val(pt):
        acc = 0
        for (i, j, k), c in mons:
            acc = K.add(acc, K.mul(c, K.mul(K.pow(pt[0], i),
                                            K.mul(K.pow(pt[1], j), K.pow(pt[2], k)))))
        return acc

    els = list(K.elements())
    pts = [(x, y, 1) for x in els for y in els] + [(x, 1, 0) for x in els] + [(1, 0, 0)]
    return sum(1 for pt in pts if val(pt) == 0)


def condition_one(vec, moduli_images):
    """sum a_i = 0 and sum a_i phi(P_i) = 0 in prod Z/d."""
    images, mods = moduli_images
    if sum(vec):
        return False
    return all(sum(a * v[k] for a, v in zip(vec, images)) % m == 0 for k, m in enumerate(mods))
