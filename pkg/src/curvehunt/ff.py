"""Exact arithmetic in small finite fields F_{p^k}.

Elements are plain Python ints: the element c_0 + c_1 a + ... + c_{k-1} a^{k-1}
(``a`` a root of the field modulus) is stored as sum(c_i p^i).  So 0 and 1 are
the zero and the unit, and the prime subfield is {0, ..., p-1}.  Field objects
do the arithmetic; :class:`FieldElement` is a thin operator-overloading wrapper
for interactive use.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass

DEFAULT_BOUND = 2 ** 20


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _digits(n: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        n, r = divmod(n, p)
        out.append(r)
    return out


def _undigits(cs, p: int) -> int:
    n = 0
    for c in reversed(cs):
        n = n * p + c
    return n


# -- polynomials over the prime field, used only to pick moduli ---------------

def _pmod(a: list[int], m: list[int], p: int) -> list[int]:
    a = a[:]
    inv = pow(m[-1], -1, p)
    while len(a) >= len(m):
        c = a[-1] * inv % p
        if c:
            s = len(a) - len(m)
            for i, mi in enumerate(m):
                a[s + i] = (a[s + i] - c * mi) % p
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return a


def is_irreducible_prime_poly(m: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg(m)/2."""
    k = len(m) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    for d in range(1, k // 2 + 1):
        for n in range(p ** d):
            cand = _digits(n, p, d) + [1]
            if not _pmod(m, cand, p):
                return False
    return True


@functools.lru_cache(maxsize=None)
def least_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree k over Z/p.

    Candidates are ordered by the integer sum(c_i p^i) of their lower
    coefficients, i.e. comparing from the x^{k-1} coefficient down.
    """
    if k == 1:
        return (0, 1)
    for n in range(p ** k):
        m = _digits(n, p, k) + [1]
        if m[0] and is_irreducible_prime_poly(m, p):
            return tuple(m)
    raise FieldError(f"no irreducible polynomial of degree {k} over F_{p}")


def _root_has_full_order(m: list[int], p: int) -> bool:
    """Whether a root of the irreducible m generates the multiplicative group."""
    k = len(m) - 1
    n = p ** k - 1

    def mulmod(u, v):
        out = [0] * (len(u) + len(v) - 1)
        for i, x in enumerate(u):
            if x:
                for j, y in enumerate(v):
                    out[i + j] = (out[i + j] + x * y) % p
        return _pmod(out, m, p)

    def powx(e):
        acc, base = [1], [0, 1]
        while e:
            if e & 1:
                acc = mulmod(acc, base)
            base = mulmod(base, base)
            e >>= 1
        return acc

    primes = [r for r in range(2, n + 1) if n % r == 0 and is_prime(r)]
    return all(powx(n // r) != [1] for r in primes)


@functools.lru_cache(maxsize=None)
def least_primitive(p: int, k: int) -> tuple[int, ...]:
    """Least monic irreducible of degree k (same ordering as
    :func:`least_irreducible`) whose root generates F_{p^k}^*."""
    if k == 1:
        return (0, 1)
    for n in range(p ** k):
        m = _digits(n, p, k) + [1]
        if m[0] and is_irreducible_prime_poly(m, p) and _root_has_full_order(m, p):
            return tuple(m)
    raise FieldError(f"no primitive polynomial of degree {k} over F_{p}")


class Field:
    """The field F_{p^k} = (Z/p)[a]/(modulus)."""

    def __init__(self, p: int, k: int = 1, modulus=None, bound: int = DEFAULT_BOUND):
        if not is_prime(p):
            raise FieldError(f"ff.build_field: characteristic {p} is not prime")
        if k < 1:
            raise FieldError("ff.build_field: extension degree must be positive")
        q = p ** k
        if q > bound:
            raise FieldError(f"ff.build_field: field size {q} exceeds bound {bound}")
        if modulus is None:
            modulus = least_primitive(p, k)
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != k + 1 or modulus[-1] != 1:
                raise FieldError("ff.build_field: modulus must be monic of degree k")
            if not is_irreducible_prime_poly(list(modulus), p):
                raise FieldError("ff.build_field: modulus is reducible")
        self.p = p
        self.k = k
        self.q = q
        self.modulus = modulus
        self._build_tables()

    # -- construction ------------------------------------------------------
    def _mul_by_a(self, n: int) -> int:
        p, k = self.p, self.k
        cs = [0] + _digits(n, p, k)
        top = cs.pop()
        if top:
            for i in range(k):
                cs[i] = (cs[i] - top * self.modulus[i]) % p
        return _undigits(cs, p)

    def _slow_mul(self, x: int, y: int) -> int:
        p, k = self.p, self.k
        acc = 0
        shifted = x
        for c in _digits(y, p, k):
            if c:
                acc = self._slow_add(acc, self._slow_scale(shifted, c))
            shifted = self._mul_by_a(shifted)
        return acc

    def _slow_add(self, x: int, y: int) -> int:
        if self.p == 2:
            return x ^ y
        p, k = self.p, self.k
        return _undigits([(a + b) % p for a, b in zip(_digits(x, p, k), _digits(y, p, k))], p)

    def _slow_scale(self, x: int, c: int) -> int:
        p, k = self.p, self.k
        return _undigits([a * c % p for a in _digits(x, p, k)], p)

    def _build_tables(self):
        q = self.q
        # find a primitive element: the smallest one of order q-1
        n = q - 1
        primes = [r for r in range(2, n + 1) if n % r == 0 and is_prime(r)]
        g = None
        for cand in range(1, q):
            if cand == 1 and q > 2:
                continue
            ok = True
            for r in primes:
                if self._slow_pow(cand, n // r) == 1:
                    ok = False
                    break
            if ok:
                g = cand
                break
        self.primitive = g
        exp = [0] * (2 * n)
        log = [0] * q
        x = 1
        for i in range(n):
            exp[i] = x
            log[x] = i
            x = self._slow_mul(x, g)
        for i in range(n, 2 * n):
            exp[i] = exp[i - n]
        self._exp = exp
        self._log = log
        self._n = n
        if self.k > 1 and self.p != 2:
            # Zech logarithms: log(1 + g^i)
            zech = [-1] * n
            for i in range(n):
                s = self._inc(exp[i])
                zech[i] = -1 if s == 0 else log[s]
            self._zech = zech

    def _inc(self, x: int) -> int:
        p = self.p
        d = x % p
        return x - d + (d + 1) % p

    def _slow_pow(self, x: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._slow_mul(r, x)
            x = self._slow_mul(x, x)
            e >>= 1
        return r

    # -- arithmetic ----------------------------------------------------------
    def add(self, x: int, y: int) -> int:
        if self.k == 1:
            return (x + y) % self.p
        if self.p == 2:
            return x ^ y
        if x == 0:
            return y
        if y == 0:
            return x
        lx = self._log[x]
        z = self._zech[(self._log[y] - lx) % self._n]
        if z < 0:
            return 0
        return self._exp[lx + z]

    def neg(self, x: int) -> int:
        if self.p == 2 or x == 0:
            return x
        if self.k == 1:
            return self.p - x
        return self.mul(x, self.p - 1)

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        if self.k == 1:
            return x * y % self.p
        return self._exp[self._log[x] + self._log[y]]

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("ff: inverse of zero")
        if self.k == 1:
            return pow(x, -1, self.p)
        return self._exp[(self._n - self._log[x]) % self._n]

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def pow(self, x: int, e: int) -> int:
        if x == 0:
            if e < 0:
                raise ZeroDivisionError("ff: zero to a negative power")
            return 1 if e == 0 else 0
        return self._exp[(self._log[x] * e) % self._n]

    def frob(self, x: int, times: int = 1) -> int:
        """x -> x^(p^times)."""
        return self.pow(x, pow(self.p, times % self.k, self._n) if self._n > 1 else 1)

    def root_p(self, x: int) -> int:
        """The unique p-th root (inverse Frobenius)."""
        return self.frob(x, self.k - 1)

    def log(self, x: int) -> int:
        if x == 0:
            raise ValueError("ff: log of zero")
        return self._log[x]

    def exp(self, i: int) -> int:
        return self._exp[i % self._n]

    def trace(self, x: int) -> int:
        """Absolute trace to the prime field, x + x^p + ... + x^{p^{k-1}}."""
        acc = 0
        y = x
        for _ in range(self.k):
            acc = self.add(acc, y)
            y = self.frob(y)
        return acc

    def rel_trace(self, x: int, sub_k: int) -> int:
        """Trace down to the subfield F_{p^sub_k}."""
        if self.k % sub_k:
            raise FieldError("ff: not a subfield degree")
        acc = 0
        y = x
        for _ in range(self.k // sub_k):
            acc = self.add(acc, y)
            y = self.frob(y, sub_k)
        return acc

    def order(self, x: int) -> int:
        if x == 0:
            raise ValueError("ff: zero has no multiplicative order")
        from math import gcd
        return self._n // gcd(self._n, self._log[x])

    def elements(self):
        return range(self.q)

    def digits(self, x: int) -> list[int]:
        return _digits(x, self.p, self.k)

    def from_digits(self, cs) -> int:
        cs = [int(c) % self.p for c in cs]
        if len(cs) > self.k:
            raise FieldError("ff: too many coefficients")
        return _undigits(cs + [0] * (self.k - len(cs)), self.p)

    def scalar(self, n: int) -> int:
        """Image of an integer in the prime field."""
        return n % self.p

    def in_subfield(self, x: int, sub_k: int) -> bool:
        return self.frob(x, sub_k) == x

    def generator(self) -> int:
        """The root ``a`` of the modulus (equals p for k > 1)."""
        return self.p if self.k > 1 else 1

    def degree_of(self, x: int) -> int:
        """Degree over the prime field of the minimal subfield containing x."""
        for d in range(1, self.k + 1):
            if self.k % d == 0 and self.frob(x, d) == x:
                return d
        return self.k

    # -- presentation ----------------------------------------------------------
    def format(self, x: int) -> str:
        if self.k == 1:
            return str(x)
        terms = []
        for i, c in reversed(list(enumerate(self.digits(x)))):
            if c == 0:
                continue
            mono = "" if i == 0 else ("a" if i == 1 else f"a^{i}")
            if i == 0:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}*{mono}")
        return "+".join(terms) if terms else "0"

    def parse(self, text: str) -> int:
        """Parse a field literal: an integer or a polynomial in ``a``."""
        s = text.replace(" ", "")
        if not s:
            raise FieldError("ff: empty field literal")
        if re.fullmatch(r"-?\d+", s):
            return self.scalar(int(s))
        acc = 0
        for sign, body in re.findall(r"([+-]?)([^+-]+)", s):
            m = re.fullmatch(r"(?:(\d+)\*?)?a(?:\^(\d+))?|(\d+)", body)
            if not m:
                raise FieldError(f"ff: bad field literal {text!r}")
            if m.group(3) is not None:
                term = self.scalar(int(m.group(3)))
            else:
                c = int(m.group(1)) if m.group(1) else 1
                e = int(m.group(2)) if m.group(2) else 1
                term = self.mul(self.scalar(c), self.pow(self.generator(), e))
            if sign == "-":
                term = self.neg(term)
            acc = self.add(acc, term)
        return acc

    def __call__(self, x) -> "FieldElement":
        if isinstance(x, str):
            return FieldElement(self, self.parse(x))
        return FieldElement(self, int(x) if 0 <= int(x) < self.q else self.scalar(int(x)))

    def __repr__(self):
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"

    def __reduce__(self):
        return (build_field, (self.p, self.k))


@functools.lru_cache(maxsize=None)
def _cached_field(p: int, k: int) -> Field:
    return Field(p, k)


def build_field(p: int, k: int = 1, modulus=None, bound: int = DEFAULT_BOUND) -> Field:
    """Construct F_{p^k}; with no modulus the least primitive one is used,
    so that the generator ``a`` generates the multiplicative group."""
    if not is_prime(p):
        raise FieldError(f"ff.build_field: characteristic {p} is not prime")
    if p ** k > bound:
        raise FieldError(f"ff.build_field: field size {p ** k} exceeds bound {bound}")
    if modulus is None:
        return _cached_field(p, k)
    return Field(p, k, modulus, bound)


def field_of_size(q: int) -> Field:
    for p in range(2, q + 1):
        if q % p == 0:
            k = 0
            n = q
            while n % p == 0:
                n //= p
                k += 1
            if n != 1:
                raise FieldError(f"ff: {q} is not a prime power")
            return build_field(p, k)
    raise FieldError(f"ff: {q} is not a prime power")


@dataclass(frozen=True)
class FieldElement:
    field: Field
    value: int

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise FieldError("ff: elements of different fields")
            return other.value
        return self.field.scalar(int(other))

    def __add__(self, o):
        return FieldElement(self.field, self.field.add(self.value, self._coerce(o)))

    __radd__ = __add__

    def __sub__(self, o):
        return FieldElement(self.field, self.field.sub(self.value, self._coerce(o)))

    def __rsub__(self, o):
        return FieldElement(self.field, self.field.sub(self._coerce(o), self.value))

    def __mul__(self, o):
        return FieldElement(self.field, self.field.mul(self.value, self._coerce(o)))

    __rmul__ = __mul__

    def __truediv__(self, o):
        return FieldElement(self.field, self.field.div(self.value, self._coerce(o)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def __eq__(self, o):
        if isinstance(o, FieldElement):
            return self.field is o.field and self.value == o.value
        if isinstance(o, int):
            return self.value == self.field.scalar(o)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.q, self.value))

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.value))

    def trace(self) -> int:
        return self.field.trace(self.value)

    def __repr__(self):
        return self.field.format(self.value)


def trace_to_prime(x: FieldElement) -> int:
    return x.field.trace(x.value)


class Embedding:
    """The ring map F_{p^k} -> F_{p^m} sending ``a`` to the least root of the
    source modulus in the target (least by integer encoding)."""

    def __init__(self, src: Field, dst: Field, image_of_gen: int | None = None):
        if src.p != dst.p:
            raise FieldError("ff.embed: characteristics differ")
        if dst.k % src.k:
            raise FieldError(f"ff.embed: {src.k} does not divide {dst.k}")
        self.src = src
        self.dst = dst
        if src.k == 1:
            self.gen_image = 1
        elif image_of_gen is not None:
            self.gen_image = image_of_gen
        else:
            self.gen_image = None
            for cand in dst.elements():
                if self._eval_modulus(cand) == 0:
                    self.gen_image = cand
                    break
        powers = []
        x = 1
        for _ in range(src.k):
            powers.append(x)
            x = dst.mul(x, self.gen_image)
        self._powers = powers
        self._table = None
        if src.q <= 4096:
            self._table = [self._compute(x) for x in range(src.q)]

    def _eval_modulus(self, t: int) -> int:
        d = self.dst
        acc = 0
        for c in reversed(self.src.modulus):
            acc = d.add(d.mul(acc, t), c)
        return acc

    def _compute(self, x: int) -> int:
        d = self.dst
        acc = 0
        for c, pw in zip(self.src.digits(x), self._powers):
            if c:
                acc = d.add(acc, d.mul(c, pw))
        return acc

    def __call__(self, x: int) -> int:
        if self._table is not None:
            return self._table[x]
        return self._compute(x)

    def then(self, other: "Embedding") -> "Embedding":
        """Composite self followed by other."""
        return Embedding(self.src, other.dst, other(self.gen_image))

    def preimage_table(self) -> dict[int, int]:
        return {self(x): x for x in range(self.src.q)}


@functools.lru_cache(maxsize=None)
def canonical_embedding(p: int, k: int, m: int) -> Embedding:
    return Embedding(build_field(p, k), build_field(p, m))


def embed(x: FieldElement, target: Field) -> FieldElement:
    if x.field.p != target.p:
        raise FieldError("ff.embed: characteristics differ")
    if target.k % x.field.k:
        raise FieldError(f"ff.embed: {x.field.k} does not divide {target.k}")
    if x.field.k == 1:
        return FieldElement(target, x.value)
    emb = Embedding(x.field, target) if (x.field is not build_field(x.field.p, x.field.k)
                                          or target is not build_field(target.p, target.k)) \
        else canonical_embedding(x.field.p, x.field.k, target.k)
    return FieldElement(target, emb(x.value))


def identity_embedding(F: Field) -> Embedding:
    return Embedding(F, F, F.generator() if F.k > 1 else None)


def sqrt(F: Field, x: int):
    """A square root of x in F or None (brute force over logs for odd q)."""
    if x == 0:
        return 0
    if F.p == 2:
        return F.root_p(x)
    lx = F.log(x)
    if lx % 2:
        return None
    return F.exp(lx // 2)
