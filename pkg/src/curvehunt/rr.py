"""Riemann-Roch spaces by linear algebra over the prime field.

An element of L(D) is written h = H / Q with H in F_q[x][Y] (x-degree <= J,
Y-degree < n) and Q = A * Den, where Den bounds the index of F_q[x][Y] in the
integral closure and A clears the finite poles allowed by D.  The conditions
v_P(H) >= v_P(Q) - D(P) are imposed at every place above the support of Q and
D and at infinity.  The x-degree bound is certified by Riemann-Roch: the space
is computed for D + k P_ref with deg >= 2g - 1, where its dimension is known,
and the conditions at P_ref are added afterwards.
"""

from __future__ import annotations

import numpy as np

from . import poly as P
from .ff import Field
from .funcfield import FunctionField, Place
from .linalg import nullspace_mod_p, rref_fq
from .series import Series


class RRError(RuntimeError):
    pass


_NP_TABLES = {}


def _np_tables(K: Field):
    t = _NP_TABLES.get(id(K))
    if t is None:
        t = (np.array(K._log, dtype=np.int64), np.array(K._exp, dtype=np.int64))
        _NP_TABLES[id(K)] = t
    return t


def _np_mul_scalar(K: Field, arr: np.ndarray, c: int) -> np.ndarray:
    if c == 0:
        return np.zeros_like(arr)
    if K.k == 1:
        return (arr * c) % K.p
    log, exp = _np_tables(K)
    out = np.zeros_like(arr)
    nz = arr != 0
    out[nz] = exp[log[arr[nz]] + log[c]]
    return out


def _np_digits(K: Field, arr: np.ndarray) -> np.ndarray:
    """Shape (len(arr), K.k) digit matrix."""
    p = K.p
    out = np.empty((arr.shape[0], K.k), dtype=np.int64)
    a = arr.copy()
    for d in range(K.k):
        out[:, d] = a % p
        a //= p
    return out


def divisor_degree(D: dict) -> int:
    return sum(m * pl.degree for pl, m in D.items())


class _Monomials:
    """Cached series of x^j Y^i at a place, valid to absolute precision m."""

    def __init__(self):
        self.J = -1
        self.m = None
        self.data = None


def monomial_series(pl: Place, n: int, J: int, m: int):
    """dict (i, j) -> Series of x^j Y^i at pl with absolute precision >= m."""
    cache = pl._mono
    if cache.get("J", -1) >= J and cache.get("m", -10 ** 9) >= m:
        return cache["data"]
    ff = pl.ff
    e = pl.e
    if pl.is_infinite:
        N = m + e * (J + ff.k_inf * n) + 2 * e + 4
    else:
        N = m + 4
    while True:
        xs, Ys = pl.local_xy(N)
        ypow = [Series.const(pl.K, 1)]
        for _ in range(1, n):
            ypow.append(ypow[-1] * Ys)
        data = {}
        xp = Series.const(pl.K, 1)
        ok = True
        for j in range(J + 1):
            for i in range(n):
                s = xp * ypow[i]
                if s.prec < m:
                    ok = False
                data[(i, j)] = s
            xp = xp * xs
        if ok:
            break
        N += N // 2 + 8
    pl._mono = {"J": J, "m": m, "data": data}
    return data


class RRSpace:
    """Basis of L(D): functions basis[k] / denom (each basis entry is a list
    of coefficient polynomials in x, one per power of Y)."""

    def __init__(self, ff, D, basis, denom):
        self.ff = ff
        self.D = D
        self.basis = basis
        self.denom = denom

    @property
    def dim(self) -> int:
        return len(self.basis)


def _conditions(ff: FunctionField, D: dict, Q: list[int], J: int, extra_places):
    """Rows of the F_p linear system for H with h = H/Q in L(D)."""
    F = ff.F
    p = F.p
    n = ff.n
    k0 = F.k
    ncols = n * (J + 1) * k0
    blocks = []
    qfac = {tuple(pi): e for pi, e in P.factor(F, Q)} if P.deg(Q) > 0 else {}
    bases = set(qfac)
    for pl in list(D) + list(extra_places):
        if pl.base is not None:
            bases.add(tuple(pl.base))
    places = []
    for b in sorted(bases, key=lambda t: (len(t), t[::-1])):
        for pl in ff.places_above(list(b)):
            vq = pl.e * qfac.get(b, 0)
            places.append((pl, vq - D.get(pl, 0)))
    for pl in ff.places_above(None):
        vq = -pl.e * P.deg(Q)
        places.append((pl, vq - D.get(pl, 0)))
    for pl, bound in places:
        if not pl.is_infinite and bound <= 0:
            continue
        mono = monomial_series(pl, n, J, bound)
        K = pl.K
        lo = min((s.val for s in mono.values() if s.c), default=bound)
        if lo >= bound:
            continue
        width = bound - lo
        betas = [pl.emb(p ** t) for t in range(k0)]
        mat = np.zeros((width * K.k, ncols), dtype=np.int64)
        col = 0
        for j in range(J + 1):
            for i in range(n):
                s = mono[(i, j)]
                arr = np.zeros(width, dtype=np.int64)
                for idx, c in enumerate(s.c):
                    e = s.val + idx
                    if e >= bound:
                        break
                    arr[e - lo] = c
                for t in range(k0):
                    v = _np_mul_scalar(K, arr, betas[t])
                    mat[:, col] = _np_digits(K, v).reshape(-1)
                    col += 1
        blocks.append(mat)
    if not blocks:
        return np.zeros((0, ncols), dtype=np.int64)
    return np.vstack(blocks)


def _solve(ff: FunctionField, D: dict, Q, J: int, extra_places=()):
    F = ff.F
    p, k0, n = F.p, F.k, ff.n
    A = _conditions(ff, D, Q, J, extra_places)
    ns = nullspace_mod_p(A, p, n * (J + 1) * k0)
    vecs = []
    for row in ns:
        v = []
        for idx in range(n * (J + 1)):
            digs = row[idx * k0:(idx + 1) * k0]
            v.append(int(sum(int(d) * p ** t for t, d in enumerate(digs))))
        vecs.append(v)
    red = rref_fq(F, vecs)
    basis = []
    for v in red:
        H = [[0] * (J + 1) for _ in range(n)]
        for j in range(J + 1):
            for i in range(n):
                H[i][j] = v[j * n + i]
        basis.append([P.trim(h) for h in H])
    return basis


def ref_place(ff: FunctionField) -> Place:
    rat = ff.places_of_degree(1)
    if rat:
        return rat[0]
    return min(ff.places_above(None), key=lambda pl: (pl.degree, pl.key))


def rr_space(ff: FunctionField, D: dict) -> RRSpace:
    D = {pl: m for pl, m in D.items() if m}
    g = ff.genus
    F = ff.F
    deg = divisor_degree(D)
    if deg < 0:
        return RRSpace(ff, D, [], [1])
    ref = ref_place(ff)
    k = 0
    if deg < 2 * g - 1:
        k = -(-(2 * g - 1 - deg) // ref.degree)
    D2 = dict(D)
    if k:
        D2[ref] = D2.get(ref, 0) + k
    deg2 = deg + k * ref.degree
    expected = deg2 - g + 1
    # denominator
    A = [1]
    pos = {}
    for pl, m in D2.items():
        if m > 0 and pl.base is not None:
            b = tuple(pl.base)
            pos[b] = max(pos.get(b, 0), -(-m // pl.e))
    for b, e in pos.items():
        for _ in range(e):
            A = P.mul(F, A, list(b))
    Q = P.mul(F, A, ff.index_bound())
    inf_allow = max([m for pl, m in D2.items() if pl.is_infinite and m > 0] + [0])
    J = P.deg(Q) + inf_allow + 1
    limit = J + 4 * (g + 2) + 4 * ff.k_inf * ff.n + 40
    while True:
        basis = _solve(ff, D2, Q, J)
        if len(basis) == expected:
            break
        if len(basis) > expected:
            raise RRError(f"jacobian.rr_space: dimension {len(basis)} exceeds Riemann-Roch value "
                          f"{expected}; genus {g} is inconsistent with the model")
        J += 2
        if J > limit:
            raise RRError("jacobian.rr_space: x-degree bound exceeded while certifying the space")
    if k:
        basis = _solve(ff, D, Q, J, extra_places=[ref])
    return RRSpace(ff, D, basis, Q)


def rr_dim(ff: FunctionField, D: dict) -> int:
    return rr_space(ff, D).dim
