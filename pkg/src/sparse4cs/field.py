"""Arithmetic in GF(p^k) with discrete logarithms and the quartic character.

Elements are plain ints: the element with coefficient vector
``(c0, c1, ..., c_{k-1})`` (constant term first) is encoded as
``c0 + c1*p + ... + c_{k-1}*p**(k-1)``.  That integer order is the fixed
total order used everywhere a "smallest" element is chosen, and it is also
the vertex label a field element receives in a constructed design.  For a
prime field this is just the residue.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .errors import BadOrder, LimitExceeded, NotPrime, ZeroArgument

MAX_ORDER = 1 << 20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, k)`` with ``q == p**k``, or None if q is not a prime power."""
    if q < 2:
        return None
    factors = prime_factors(q)
    if len(factors) != 1:
        return None
    p = factors[0]
    k = 0
    while q > 1:
        q //= p
        k += 1
    return p, k


# -- polynomials over Z_p, coefficient lists with the constant term first --

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_divmod_monic(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    """Remainder of a modulo the monic polynomial m."""
    r = [c % p for c in a]
    dm = len(m) - 1
    for i in range(len(r) - 1, dm - 1, -1):
        c = r[i]
        if c:
            shift = i - dm
            for j in range(dm + 1):
                r[shift + j] = (r[shift + j] - c * m[j]) % p
    return _trim(r[:dm] if len(r) > dm else r)


def _poly_mulmod(a: Sequence[int], b: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return _poly_divmod_monic(prod, m, p)


def _is_irreducible(m: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg(m)/2."""
    k = len(m) - 1
    for d in range(1, k // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _poly_divmod_monic(m, list(low) + [1], p):
                return False
    return True


def _find_modulus(p: int, k: int) -> tuple[int, ...]:
    # Lexicographic order on (c0, ..., c_{k-1}); itertools.product yields exactly that.
    for low in itertools.product(range(p), repeat=k):
        if low[0] == 0:
            continue  # divisible by x
        m = list(low) + [1]
        if _is_irreducible(m, p):
            return tuple(m)
    raise AssertionError(f"no irreducible polynomial of degree {k} over Z_{p}")


@dataclass(frozen=True)
class CharValue:
    """A value of the order-4 character, stored as the exponent of i."""

    exponent: int

    def __post_init__(self):
        if self.exponent not in (0, 1, 2, 3):
            raise ValueError(f"exponent must be in 0..3, got {self.exponent}")

    def __mul__(self, other: "CharValue") -> "CharValue":
        return CharValue((self.exponent + other.exponent) % 4)

    def __neg__(self) -> "CharValue":
        return CharValue((self.exponent + 2) % 4)

    @property
    def value(self) -> complex:
        return (1, 1j, -1, -1j)[self.exponent]

    def __str__(self) -> str:
        return ("1", "i", "-1", "-i")[self.exponent]


class FieldSpec:
    """GF(p^k) with a fixed modulus, primitive element and log table.

    Instances are immutable after construction; build them with
    :func:`make_field`.
    """

    def __init__(self, p: int, k: int, modulus: tuple[int, ...], alpha: int,
                 exp: list[int], log: list[int]):
        self.p = p
        self.k = k
        self.q = p ** k
        self.modulus = modulus
        self.alpha = alpha
        self._exp = exp
        self._log = log
        self._digits = [self.coeffs(a) for a in range(self.q)] if k > 1 else None

    def __repr__(self) -> str:
        return f"FieldSpec(p={self.p}, k={self.k}, alpha={self.alpha})"

    # conversions
    def coeffs(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.k):
            a, c = divmod(a, self.p)
            out.append(c)
        return tuple(out)

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) != self.k:
            raise ValueError(f"expected {self.k} coefficients, got {len(coeffs)}")
        a = 0
        for c in reversed(coeffs):
            a = a * self.p + c % self.p
        return a

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> GF(q)."""
        return n % self.p

    def elements(self) -> range:
        return range(self.q)

    # arithmetic
    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        da, db, p = self._digits[a], self._digits[b], self.p
        return self.from_coeffs([(x + y) % p for x, y in zip(da, db)])

    def neg(self, a: int) -> int:
        if self.k == 1:
            return -a % self.p
        return self.from_coeffs([-c % self.p for c in self._digits[a]])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroArgument("0 has no inverse")
        return self._exp[-self._log[a] % (self.q - 1)]

    def power(self, a: int, n: int) -> int:
        if a == 0:
            return 0 if n > 0 else 1
        return self._exp[(self._log[a] * n) % (self.q - 1)]

    def alpha_power(self, n: int) -> int:
        return self._exp[n % (self.q - 1)]

    def log(self, a: int) -> int:
        """Discrete log of a nonzero element to the base alpha, in [0, q-2]."""
        if a == 0:
            raise ZeroArgument("log of 0 is undefined")
        return self._log[a]

    @property
    def log_table(self) -> dict[int, int]:
        return {a: self._log[a] for a in range(1, self.q)}


def make_field(p: int, k: int = 1) -> FieldSpec:
    """Build GF(p^k) with the smallest irreducible modulus and primitive element."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if k < 1:
        raise ValueError("k must be positive")
    q = p ** k
    if q > MAX_ORDER:
        raise LimitExceeded(f"field order {q} exceeds {MAX_ORDER}")

    if k == 1:
        modulus: tuple[int, ...] = (0, 1)

        def mul(a: int, b: int) -> int:
            return a * b % p
    else:
        modulus = _find_modulus(p, k)
        pw = [p ** i for i in range(k)]

        def mul(a: int, b: int) -> int:
            ca = [(a // w) % p for w in pw]
            cb = [(b // w) % p for w in pw]
            r = _poly_mulmod(_trim(ca), _trim(cb), modulus, p)
            return sum(c * w for c, w in zip(r, pw))

    def pw_(a: int, n: int) -> int:
        result = 1
        while n:
            if n & 1:
                result = mul(result, a)
            a = mul(a, a)
            n >>= 1
        return result

    order = q - 1
    cofactors = [order // r for r in prime_factors(order)] if order > 1 else []
    alpha = next(a for a in range(1, q) if all(pw_(a, e) != 1 for e in cofactors))

    exp = [0] * order
    log = [0] * q
    x = 1
    for i in range(order):
        exp[i] = x
        log[x] = i
        x = mul(x, alpha)
    return FieldSpec(p, k, modulus, alpha, exp, log)


def make_field_of_order(q: int) -> FieldSpec:
    pk = prime_power(q)
    if pk is None:
        raise NotPrime(f"{q} is not a prime power")
    return make_field(*pk)


def quartic_character(f: FieldSpec, x: int) -> CharValue:
    """chi(x) = i**(log_alpha x mod 4)."""
    if f.q % 4 != 1:
        raise BadOrder(f"no character of order 4 on GF({f.q})")
    if x == 0:
        raise ZeroArgument("chi(0) is undefined")
    return CharValue(f.log(x) % 4)
