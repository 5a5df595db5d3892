"""Finite abelian groups given by integer relation matrices: Smith normal
form, invariant factors and subgroup enumeration."""

from __future__ import annotations

import itertools
import math


def smith_normal_form(A):
    """Return (D, U, V) with U A V = D diagonal (divisibility chain, entries
    >= 0), U and V unimodular.  A is a list of integer rows."""
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(map(int, r)) for r in A]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in D:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, c):   # row dst += c * row src
        D[dst] = [a + c * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, c):   # col dst += c * col src
        for r in D:
            r[dst] += c * r[src]
        for r in V:
            r[dst] += c * r[src]

    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero absolute value in the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if D[i][j] and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            done = True
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // D[t][t]
                    add_row(t, i, -q)
                    if D[i][t]:
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // D[t][t]
                    add_col(t, j, -q)
                    if D[t][j]:
                        done = False
            if done:
                # divisibility: every remaining entry must be divisible by pivot
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if D[i][j] % D[t][t]:
                            bad = (i, j)
                            break
                    if bad:
                        break
                if bad is None:
                    break
                add_row(bad[0], t, 1)
                continue
            # move the smallest entry of row/column t to the pivot
            best = (t, t)
            for i in range(t, m):
                if D[i][t] and abs(D[i][t]) < abs(D[best[0]][best[1]]):
                    best = (i, t)
            for j in range(t, n):
                if D[t][j] and abs(D[t][j]) < abs(D[best[0]][best[1]]):
                    best = (t, j)
            swap_rows(t, best[0])
            swap_cols(t, best[1])
        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return D, U, V


def mat_inverse_unimodular(V):
    """Exact inverse of a unimodular integer matrix."""
    from fractions import Fraction
    n = len(V)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(V)]
    for c in range(n):
        piv = next(r for r in range(c, n) if A[r][c] != 0)
        A[c], A[piv] = A[piv], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    out = [[int(x) for x in row[n:]] for row in A]
    return out


class AbelianGroup:
    """Z^s / (row lattice of R) in invariant-factor coordinates."""

    def __init__(self, relations, s: int):
        R = [list(r) for r in relations] or [[0] * s]
        D, U, V = smith_normal_form(R)
        diag = [D[i][i] if i < len(D) and i < s else 0 for i in range(s)]
        if any(d == 0 for d in diag):
            raise ValueError("abelian: relation lattice does not have full rank")
        self.s = s
        self._V = V
        self._Vinv = mat_inverse_unimodular(V)
        self._keep = [i for i, d in enumerate(diag) if d != 1]
        self.invariants = [diag[i] for i in self._keep]
        self.order = math.prod(self.invariants)

    def coords(self, vec):
        """Invariant-factor coordinates of a vector in Z^s."""
        s = self.s
        w = [sum(vec[j] * self._V[j][i] for j in range(s)) for i in range(s)]
        return tuple(w[i] % d for i, d in zip(self._keep, self.invariants))

    def generator_vectors(self):
        """Vectors in Z^s mapping to the standard generators."""
        return [list(self._Vinv[i]) for i in self._keep]


def add(a, b, inv):
    return tuple((x + y) % d for x, y, d in zip(a, b, inv))


def scale(a, k, inv):
    return tuple((k * x) % d for x, d in zip(a, inv))


def elements(inv):
    return itertools.product(*[range(d) for d in inv])


def subgroup_index_gens(inv, gens):
    """Index of the subgroup generated by gens in prod Z/d_i."""
    s = len(inv)
    rel = [list(g) for g in gens] + [[d if i == j else 0 for j in range(s)]
                                      for i, d in enumerate(inv)]
    G = AbelianGroup(rel, s)
    return G.order


def element_order(a, inv) -> int:
    o = 1
    for x, d in zip(a, inv):
        o = math.lcm(o, d // math.gcd(x, d))
    return o


def pairing(a, b, inv) -> tuple[int, int]:
    """The perfect pairing <a, b> = sum a_i b_i / d_i in Q/Z, returned as
    (numerator mod N, N) with N the exponent of the group."""
    N = math.lcm(*inv) if inv else 1
    return sum(x * y * (N // d) for x, y, d in zip(a, b, inv)) % N, N


def subgroups_of_order(inv, order: int):
    """All subgroups of prod Z/d_i of the given order, as frozensets."""
    zero = tuple(0 for _ in inv)
    cands = [a for a in elements(inv) if a != zero and order % element_order(a, inv) == 0]
    found = {frozenset([zero])}
    frontier = [frozenset([zero])]
    out = set()
    while frontier:
        nxt = []
        for S in frontier:
            if len(S) == order:
                out.add(S)
                continue
            for g in cands:
                if g in S:
                    continue
                k = g
                mult = []
                while k not in S:
                    mult.append(k)
                    k = add(k, g, inv)
                T = set()
                for h in S:
                    T.add(h)
                    for m in mult:
                        T.add(add(h, m, inv))
                T = frozenset(T)
                if len(T) <= order and order % len(T) == 0 and T not in found:
                    found.add(T)
                    nxt.append(T)
        frontier = nxt
    return sorted(out, key=lambda S: sorted(S))


def subgroups_of_index(inv, index: int):
    """Subgroups of index ``index``, each described by the subgroup S of
    characters (identified with group elements via :func:`pairing`) whose
    common kernel it is.  Returns a list of frozensets S."""
    total = math.prod(inv)
    if index < 1 or total % index:
        return []
    return subgroups_of_order(inv, index)


def in_annihilator(a, S, inv) -> bool:
    return all(pairing(a, s, inv)[0] == 0 for s in S)
