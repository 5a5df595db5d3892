"""Vectorised arithmetic on arrays of field elements (numpy int64 arrays of
the integer encodings used by :mod:`curvehunt.ff`)."""

from __future__ import annotations

import numpy as np

from .ff import Field

_CACHE: dict = {}


class VecField:
    def __init__(self, F: Field):
        self.F = F
        self.p, self.k, self.q = F.p, F.k, F.q
        self.n = F.q - 1
        self.log = np.array(F._log, dtype=np.int64)
        self.exp = np.array(F._exp, dtype=np.int64)
        self.pw = [F.p ** i for i in range(F.k)]
        tr_basis = np.array([F.trace(w) for w in self.pw], dtype=np.int64)
        self.trace_table = self._linear_table(tr_basis)

    def _digits(self, a):
        p = self.p
        return [(a // w) % p for w in self.pw]

    def _linear_table(self, images):
        all_ = np.arange(self.q, dtype=np.int64)
        acc = np.zeros(self.q, dtype=np.int64)
        for d, img in zip(self._digits(all_), images):
            acc = acc + d * img
        return acc % self.p

    def elements(self):
        return np.arange(self.q, dtype=np.int64)

    def add(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self.k == 1:
            return (a + b) % self.p
        p = self.p
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for w in self.pw:
            out += (((a // w) + (b // w)) % p) * w
        return out

    def neg(self, a):
        if self.p == 2:
            return a
        if self.k == 1:
            return (-a) % self.p
        p = self.p
        out = np.zeros_like(a)
        for w in self.pw:
            out += ((-(a // w)) % p) * w
        return out

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return (a * b) % self.p
        la = self.log[a]
        lb = self.log[b]
        out = self.exp[(la + lb) % self.n]
        return np.where((a == 0) | (b == 0), 0, out)

    def scale(self, a, c: int):
        if c == 0:
            return np.zeros_like(a)
        return self.mul(a, np.full_like(a, c))

    def inv(self, a):
        """Inverse (0 maps to 0)."""
        if self.k == 1:
            return np.array([0] + [pow(i, -1, self.p) for i in range(1, self.p)],
                            dtype=np.int64)[a]
        out = self.exp[(-self.log[a]) % self.n]
        return np.where(a == 0, 0, out)

    def poly_eval(self, coeffs, xs):
        """Evaluate a polynomial (F-ints, constant first) at an array."""
        acc = np.zeros_like(xs)
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, xs), np.full_like(xs, c))
        return acc

    def trace(self, a):
        return self.trace_table[a]

    def quadratic_character(self, a):
        """1 on nonzero squares, -1 on non-squares, 0 at 0 (odd p)."""
        chi = np.where(self.log[a] % 2 == 0, 1, -1)
        return np.where(a == 0, 0, chi)


def vec_field(F: Field) -> VecField:
    v = _CACHE.get(id(F))
    if v is None:
        v = VecField(F)
        _CACHE[id(F)] = v
    return v
