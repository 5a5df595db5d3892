"""L-polynomials: from point counts and back, class numbers and the index of
J(F_q) in J(F_{q^n}); all in exact integer arithmetic."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .poly import resultant_int


class ZetaError(ValueError):
    pass


@dataclass(frozen=True)
class LPolynomial:
    """L(t) = a_0 + a_1 t + ... + a_{2g} t^{2g} with a_0 = 1, a_{2g} = q^g."""

    q: int
    g: int
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        q, g, a = self.q, self.g, self.coeffs
        if len(a) != 2 * g + 1:
            raise ZetaError(f"zeta: an L-polynomial of genus {g} has {2 * g + 1} coefficients")
        if a[0] != 1:
            raise ZetaError("zeta: L(0) must be 1")
        for i in range(g + 1):
            if a[2 * g - i] != q ** (g - i) * a[i]:
                raise ZetaError("zeta: coefficients violate the functional equation "
                                f"(a_{2 * g - i} != q^{g - i} a_{i})")
        if g:
            self._check_roots()

    def _check_roots(self):
        if not riemann_hypothesis_holds(self):
            raise ZetaError("zeta: roots of L do not all have absolute value q^(-1/2) "
                            "(Riemann hypothesis violated; inconsistent data)")

    def __call__(self, t: int) -> int:
        return sum(c * t ** i for i, c in enumerate(self.coeffs))

    def ascending(self) -> str:
        parts = []
        for i, c in enumerate(self.coeffs):
            if i and c == 0:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if i == 0:
                parts.append(str(c))
                continue
            mag = abs(c)
            body = (mono if mag == 1 else f"{mag}{mono}")
            parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)

    def descending(self) -> str:
        """Descending style, e.g. 4t^4+6t^3+5t^2+3t+1."""
        out = ""
        for i in range(2 * self.g, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            mag = abs(c)
            body = str(mag) if (mag != 1 or i == 0) else ""
            body += mono
            if not out:
                out = ("-" if c < 0 else "") + body
            else:
                out += ("-" if c < 0 else "+") + body
        return out

    def __str__(self):
        return self.ascending()


def real_weil_polynomial(L: "LPolynomial") -> list[int]:
    """h with T^{2g} L(1/T) = T^g h(T + q/T) (coefficients, constant first)."""
    q, g = L.q, L.g
    # Laurent coefficients of T^{-g} * T^{2g} L(1/T): exponent e -> coeff
    rem = {g - i: c for i, c in enumerate(L.coeffs)}
    h = [0] * (g + 1)
    for k in range(g, -1, -1):
        hk = rem.get(k, 0)
        h[k] = hk
        if hk:
            for j in range(k + 1):
                e = k - 2 * j
                rem[e] = rem.get(e, 0) - hk * math.comb(k, j) * q ** j
    if any(rem.values()):
        raise ZetaError("zeta: L does not satisfy the functional equation")
    return h


def _pdivmod(a, b):
    a = [Fraction(x) for x in a]
    out = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    while len(a) >= len(b) and any(a):
        c = a[-1] / b[-1]
        k = len(a) - len(b)
        out[k] = c
        for i, x in enumerate(b):
            a[k + i] -= c * x
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return out, a


def _pgcd(a, b):
    a, b = [Fraction(x) for x in a], [Fraction(x) for x in b]
    while b and any(b):
        _, r = _pdivmod(a, b)
        a, b = b, r
    return a


def _deriv(a):
    return [i * c for i, c in enumerate(a)][1:]


def _sign_at(poly, q: int, eps: int) -> int:
    """Sign of poly(2*eps*sqrt(q)) computed exactly."""
    A = Fraction(0)
    B = Fraction(0)
    for i, c in enumerate(poly):
        v = c * (2 * eps) ** i
        if i % 2 == 0:
            A += v * q ** (i // 2)
        else:
            B += v * q ** (i // 2)
    # sign of A + B sqrt(q)
    if B == 0:
        return (A > 0) - (A < 0)
    if A == 0 or (A > 0) == (B > 0):
        return 1 if (A > 0 or (A == 0 and B > 0)) else -1
    d = A * A - B * B * q
    sa = 1 if A > 0 else -1
    return sa * ((d > 0) - (d < 0))


def riemann_hypothesis_holds(L: "LPolynomial") -> bool:
    """Exact check that every reciprocal root of L has absolute value sqrt(q):
    the real Weil polynomial must split over R with roots in [-2 sqrt q, 2 sqrt q]."""
    q = L.q
    h = [Fraction(c) for c in real_weil_polynomial(L)]
    # squarefree part
    g = _pgcd(h, _deriv(h))
    hs, _ = _pdivmod(h, g) if len(g) > 1 else (h, [])
    # remove roots at the endpoints
    r = math.isqrt(4 * q)
    ends = []
    if r * r == 4 * q:
        ends = [[-r, 1], [r, 1]]
    else:
        ends = [[-4 * q, 0, 1]]
    for e in ends:
        quo, rem = _pdivmod(hs, e)
        if not rem or not any(rem):
            hs = quo
    deg = len(hs) - 1
    if deg <= 0:
        return True
    seq = [hs, _deriv(hs)]
    while len(seq[-1]) > 1:
        _, rem = _pdivmod(seq[-2], seq[-1])
        if not rem or not any(rem):
            break
        seq.append([-c for c in rem])

    def changes(eps):
        signs = [s for s in (_sign_at(p_, q, eps) for p_ in seq) if s]
        return sum(1 for x, y in zip(signs, signs[1:]) if x != y)

    return changes(-1) - changes(1) == deg


def _weil_ok(N: int, q: int, g: int, n: int) -> bool:
    d = N - (q ** n + 1)
    return d * d <= 4 * g * g * q ** n


def l_from_counts(counts, q: int, g: int) -> LPolynomial:
    """The L-polynomial of a genus-g curve over F_q from N_1..N_g."""
    counts = [int(c) for c in counts]
    if len(counts) != g:
        raise ZetaError(f"zeta.l_from_counts: need exactly {g} counts, got {len(counts)}")
    for n, N in enumerate(counts, start=1):
        if N < 0 or not _weil_ok(N, q, g, n):
            raise ZetaError(f"zeta.l_from_counts: N_{n} = {N} violates the Weil bound "
                            f"for genus {g} over F_{q}")
    S = [0] + [q ** n + 1 - N for n, N in enumerate(counts, start=1)]
    a = [1] + [0] * (2 * g)
    for k in range(1, g + 1):
        acc = sum(a[k - i] * S[i] for i in range(1, k + 1))
        if acc % k:
            raise ZetaError("zeta.l_from_counts: counts give non-integral coefficients")
        a[k] = -acc // k
    for i in range(g):
        a[2 * g - i] = q ** (g - i) * a[i]
    try:
        return LPolynomial(q, g, tuple(a))
    except ZetaError as exc:
        raise ZetaError(f"zeta.l_from_counts: counts {counts} are inconsistent: {exc}") from None


def power_sums(L: LPolynomial, n: int) -> list[int]:
    """S_1..S_n, the power sums of the reciprocal roots of L."""
    a = list(L.coeffs) + [0] * max(0, n - 2 * L.g)
    S = [0] * (n + 1)
    for k in range(1, n + 1):
        S[k] = -k * a[k] - sum(a[i] * S[k - i] for i in range(1, k))
    return S[1:]


def counts_from_l(L: LPolynomial, n: int) -> int:
    if n < 1:
        raise ZetaError("zeta.counts_from_l: n must be at least 1")
    return L.q ** n + 1 - power_sums(L, n)[-1]


def class_number(L: LPolynomial) -> int:
    return L(1)


def extension_index(L: LPolynomial, n: int) -> int:
    """[J(F_{q^n}) : J(F_q)] = prod over nontrivial n-th roots of unity of L."""
    if n < 1:
        raise ZetaError("zeta.extension_index: n must be at least 1")
    if n == 1:
        return 1
    tn1 = [-1] + [0] * (n - 1) + [1]
    res = resultant_int(tn1, list(L.coeffs))
    h = L(1)
    if res % h:
        raise ArithmeticError("zeta.extension_index: non-integral index (internal error)")
    return res // h


def base_change(L: LPolynomial, n: int) -> LPolynomial:
    """The L-polynomial of the same curve over F_{q^n}."""
    counts = [counts_from_l(L, n * m) for m in range(1, L.g + 1)]
    return l_from_counts(counts, L.q ** n, L.g)


_TERM = re.compile(r"([+-]?)\s*(\d*)\s*(t(?:\^(\d+))?)?")


def parse_l(text: str, q: int) -> LPolynomial:
    """Parse an integer polynomial in t (either order)."""
    s = text.replace(" ", "").replace("*", "")
    if not s:
        raise ZetaError("zeta.parse_l: empty polynomial")
    coeffs: dict = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise ZetaError(f"zeta.parse_l: cannot parse {text!r} at position {pos}")
        sign, num, tpart, exp = m.groups()
        if not num and not tpart:
            raise ZetaError(f"zeta.parse_l: cannot parse {text!r} at position {pos}")
        c = int(num) if num else 1
        if sign == "-":
            c = -c
        e = 0 if not tpart else (int(exp) if exp else 1)
        coeffs[e] = coeffs.get(e, 0) + c
        pos = m.end()
    deg = max(coeffs)
    if deg % 2:
        raise ZetaError("zeta.parse_l: L-polynomials have even degree")
    return LPolynomial(q, deg // 2, tuple(coeffs.get(i, 0) for i in range(deg + 1)))


def weil_interval(q: int, g: int, n: int = 1) -> tuple[int, int]:
    """Integer interval allowed for N_n by the Weil bound."""
    Q = q ** n
    r = math.isqrt(4 * g * g * Q)
    return max(0, Q + 1 - r), Q + 1 + r
