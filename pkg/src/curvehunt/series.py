"""Truncated Laurent series over a finite field.

``Series(F, val, coeffs, prec)`` stands for sum(coeffs[i] T^(val+i)) + O(T^prec).
Leading zeros are stripped, so ``val`` is the valuation whenever ``coeffs`` is
nonempty; an empty coefficient list means "zero to the stated precision" and
then ``val == prec``.  A precision of at least ``EXACT`` marks an exact
(finite) Laurent polynomial.
"""

from __future__ import annotations

from .ff import Field

EXACT = 1 << 60


class PrecisionError(ArithmeticError):
    pass


def _is_exact(prec: int) -> bool:
    return prec >= EXACT // 2


class Series:
    __slots__ = ("F", "val", "c", "prec")

    def __init__(self, F: Field, val: int, coeffs, prec: int = EXACT):
        self.F = F
        if _is_exact(prec):
            prec = EXACT
            coeffs = list(coeffs)
        else:
            coeffs = list(coeffs[: max(0, prec - val)])
        i = 0
        n = len(coeffs)
        while i < n and coeffs[i] == 0:
            i += 1
        if i == n:
            self.c = []
            self.val = prec
        else:
            while coeffs[-1] == 0:
                coeffs.pop()
            self.c = coeffs[i:]
            self.val = val + i
        self.prec = prec

    # -- constructors -----------------------------------------------------------
    @classmethod
    def const(cls, F: Field, c: int) -> "Series":
        return cls(F, 0, [c])

    @classmethod
    def monomial(cls, F: Field, c: int, e: int) -> "Series":
        return cls(F, e, [c])

    @classmethod
    def from_poly(cls, F: Field, coeffs) -> "Series":
        """An exact polynomial (constant term first)."""
        return cls(F, 0, coeffs)

    @classmethod
    def zero(cls, F: Field, prec: int = EXACT) -> "Series":
        return cls(F, prec, [], prec)

    # -- queries ------------------------------------------------------------------
    def is_exact(self) -> bool:
        return _is_exact(self.prec)

    def is_zero(self) -> bool:
        """True if no nonzero coefficient is known (zero to the precision)."""
        return not self.c

    def valuation(self):
        """The valuation, or None when zero to the known precision."""
        return self.val if self.c else None

    def coeff(self, e: int) -> int:
        if e >= self.prec:
            raise PrecisionError(f"series: coefficient of T^{e} is beyond precision {self.prec}")
        i = e - self.val
        if 0 <= i < len(self.c):
            return self.c[i]
        return 0

    def lead(self) -> int:
        if not self.c:
            raise PrecisionError("series: no nonzero coefficient is known")
        return self.c[0]

    def truncate(self, prec: int) -> "Series":
        if prec >= self.prec:
            return self
        return Series(self.F, self.val, self.c, prec)

    def rel_prec(self) -> int:
        return self.prec - self.val

    def __eq__(self, o):
        return (isinstance(o, Series) and self.F is o.F and self.val == o.val
                and self.c == o.c and self.prec == o.prec)

    def __hash__(self):
        return hash((self.val, tuple(self.c), self.prec))

    # -- arithmetic -------------------------------------------------------------
    def __add__(self, o: "Series") -> "Series":
        F = self.F
        prec = min(self.prec, o.prec)
        if not o.c:
            return self.truncate(prec)
        if not self.c:
            return o.truncate(prec)
        lo = min(self.val, o.val)
        hi = max(self.val + len(self.c), o.val + len(o.c))
        if not _is_exact(prec):
            hi = min(hi, prec)
        n = max(0, hi - lo)
        out = [0] * n
        off = self.val - lo
        for i, x in enumerate(self.c):
            if off + i < n:
                out[off + i] = x
        off = o.val - lo
        add_ = F.add
        for i, x in enumerate(o.c):
            j = off + i
            if j < n and x:
                out[j] = add_(out[j], x)
        return Series(F, lo, out, prec)

    def __neg__(self) -> "Series":
        F = self.F
        return Series(F, self.val, [F.neg(x) for x in self.c], self.prec)

    def __sub__(self, o: "Series") -> "Series":
        return self + (-o)

    def scale(self, a: int) -> "Series":
        F = self.F
        return Series(F, self.val, [F.mul(a, x) for x in self.c], self.prec)

    def shift(self, k: int) -> "Series":
        """Multiply by T^k."""
        prec = self.prec if self.is_exact() else self.prec + k
        return Series(self.F, self.val + k, self.c, prec)

    def __mul__(self, o: "Series") -> "Series":
        F = self.F
        prec = min(self.prec + o.val, o.prec + self.val)
        if not self.c or not o.c:
            return Series.zero(F, prec) if not _is_exact(prec) else Series.zero(F)
        val = self.val + o.val
        n = len(self.c) + len(o.c) - 1
        if not _is_exact(prec):
            n = min(n, prec - val)
        if n <= 0:
            return Series.zero(F, prec)
        a = self.c[:n]
        b = o.c[:n]
        if F.k == 1:
            p = F.p
            acc = [0] * n
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b[: n - i]):
                        acc[i + j] += x * y
            out = [v % p for v in acc]
        else:
            out = [0] * n
            add_, mul_ = F.add, F.mul
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b[: n - i]):
                        if y:
                            out[i + j] = add_(out[i + j], mul_(x, y))
        return Series(F, val, out, prec)

    def inverse(self, rel_prec: int | None = None) -> "Series":
        """Multiplicative inverse; ``rel_prec`` caps the relative precision
        (required when the series is exact)."""
        F = self.F
        if not self.c:
            raise PrecisionError("series: inverse of a series not known to be nonzero")
        n = self.prec - self.val
        if rel_prec is not None:
            n = min(n, rel_prec)
        if _is_exact(n):
            if len(self.c) == 1:
                return Series(F, -self.val, [F.inv(self.c[0])])
            raise PrecisionError("series: inverse of an exact series needs a precision")
        a = self.c
        inv0 = F.inv(a[0])
        ninv0 = F.neg(inv0)
        out = [0] * n
        out[0] = inv0
        la = len(a)
        add_, mul_ = F.add, F.mul
        for k in range(1, n):
            s = 0
            for i in range(1, min(k, la - 1) + 1):
                ai = a[i]
                if ai:
                    o = out[k - i]
                    if o:
                        s = add_(s, mul_(ai, o))
            out[k] = mul_(ninv0, s)
        return Series(F, -self.val, out, n - self.val)

    def __pow__(self, e: int) -> "Series":
        if e < 0:
            return self.inverse() ** (-e)
        result = Series.const(self.F, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def map(self, emb, F2: Field) -> "Series":
        """Apply a field embedding coefficientwise."""
        return Series(F2, self.val, [emb(x) for x in self.c], self.prec)

    def frobenius(self, times: int = 1) -> "Series":
        """Apply x -> x^p to every coefficient."""
        F = self.F
        return Series(F, self.val, [F.frob(x, times) for x in self.c], self.prec)

    def __repr__(self) -> str:
        F = self.F
        terms = [f"({F.format(x)})*T^{self.val + i}" for i, x in enumerate(self.c) if x]
        if not self.is_exact():
            terms.append(f"O(T^{self.prec})")
        return " + ".join(terms) if terms else "0"


def compose(F: Field, coeffs: list[Series], s: Series) -> Series:
    """Evaluate sum(coeffs[i] * s^i) by Horner's rule."""
    acc = Series.zero(F)
    for c in reversed(coeffs):
        acc = acc * s + c
    return acc
