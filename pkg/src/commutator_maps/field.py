"""Arithmetic in GF(p^n) for small prime powers.

Elements are coefficient vectors over GF(p), lowest degree first.  Inside
the field they are also addressed by an integer code: the base-p number
whose digits are the coefficients (constant term is the least significant
digit), so the codes of GF(p) itself are just 0..p-1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

MAX_ORDER = 2**16
TABLE_ORDER = 1024


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


def prime_power(q: int) -> tuple[int, int] | None:
    """Return (p, n) with q = p**n, or None if q is not a prime power."""
    if q < 2:
        return None
    for p in range(2, q + 1):
        if q % p == 0:
            n = 0
            while q % p == 0:
                q //= p
                n += 1
            return (p, n) if q == 1 else None
    return None


# Polynomials over GF(p): lists of ints, lowest degree first, no trailing zeros.

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim([x % p for x in a])
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(m)
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _monic_polys(p: int, degree: int):
    """Monic polynomials of the given degree, coefficients of x^(d-1)
    most significant in the enumeration order."""
    for digits in itertools.product(range(p), repeat=degree):
        yield list(reversed(digits)) + [1]


def is_irreducible(poly: list[int], p: int) -> bool:
    """Exhaustive trial division by every monic polynomial of degree <= n/2."""
    n = len(poly) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    for d in range(1, n // 2 + 1):
        for m in _monic_polys(p, d):
            if not _poly_mod(poly, m, p):
                return False
    return True


def smallest_irreducible(p: int, n: int) -> tuple[int, ...]:
    if n == 1:
        return (0, 1)
    for poly in _monic_polys(p, n):
        if poly[0] != 0 and is_irreducible(poly, p):
            return tuple(poly)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class FieldError(ValueError):
    pass


@dataclass(frozen=True)
class FieldElement:
    field: Field
    coeffs: tuple[int, ...]

    @property
    def code(self) -> int:
        return self.field.encode(self.coeffs)

    def __add__(self, other: FieldElement) -> FieldElement:
        return self.field.element(self.field.add(self.code, other.code))

    def __sub__(self, other: FieldElement) -> FieldElement:
        f = self.field
        return f.element(f.add(self.code, f.neg(other.code)))

    def __neg__(self) -> FieldElement:
        return self.field.element(self.field.neg(self.code))

    def __mul__(self, other: FieldElement) -> FieldElement:
        return self.field.element(self.field.mul(self.code, other.code))

    def inverse(self) -> FieldElement:
        return self.field.element(self.field.inv(self.code))

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __repr__(self) -> str:
        return f"FieldElement({self.field.q}, {list(self.coeffs)})"


class Field:
    """GF(p^n) with the lexicographically smallest monic irreducible modulus.

    The modulus candidates are enumerated reading coefficients from x^(n-1)
    down to the constant term, so GF(9) gets x^2 + 1 and GF(8) gets
    x^3 + x + 1.  For n = 1 the modulus is x.
    """

    def __init__(self, p: int, n: int = 1):
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if n < 1:
            raise FieldError(f"extension degree must be >= 1, got {n}")
        if p**n > MAX_ORDER:
            raise FieldError(f"field order {p}^{n} exceeds cap {MAX_ORDER}")
        self.p = p
        self.n = n
        self.q = p**n
        self.modulus = smallest_irreducible(p, n)

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.n})" if self.n > 1 else f"GF({self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and (self.p, self.n) == (other.p, other.n)

    def __hash__(self) -> int:
        return hash((self.p, self.n))

    # -- encoding -------------------------------------------------------
    def encode(self, coeffs) -> int:
        coeffs = list(coeffs) + [0] * (self.n - len(coeffs))
        if len(coeffs) != self.n:
            raise FieldError(f"expected {self.n} coefficients, got {len(coeffs)}")
        code = 0
        for c in reversed(coeffs):
            code = code * self.p + (c % self.p)
        return code

    def decode(self, code: int) -> tuple[int, ...]:
        if not 0 <= code < self.q:
            raise FieldError(f"code {code} out of range for {self}")
        out = []
        for _ in range(self.n):
            code, r = divmod(code, self.p)
            out.append(r)
        return tuple(out)

    def element(self, value) -> FieldElement:
        if isinstance(value, (int, np.integer)):
            return FieldElement(self, self.decode(int(value)))
        return FieldElement(self, self.decode(self.encode(value)))

    def elements(self) -> list[FieldElement]:
        return [self.element(c) for c in range(self.q)]

    # -- arithmetic on codes -------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.n == 1:
            return (a + b) % self.p
        x, y = self.decode(a), self.decode(b)
        return self.encode([(u + v) % self.p for u, v in zip(x, y)])

    def neg(self, a: int) -> int:
        if self.n == 1:
            return -a % self.p
        return self.encode([-u % self.p for u in self.decode(a)])

    def mul(self, a: int, b: int) -> int:
        if self.n == 1:
            return a * b % self.p
        x, y = self.decode(a), self.decode(b)
        prod = [0] * (2 * self.n - 1)
        for i, u in enumerate(x):
            if u:
                for j, v in enumerate(y):
                    prod[i + j] += u * v
        return self.encode(_poly_mod(prod, list(self.modulus), self.p))

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"inverse of zero in {self}")
        return self.pow(a, self.q - 2)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def order(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        if a == 0:
            raise FieldError("zero has no multiplicative order")
        k, x = 1, a
        while x != 1:
            x = self.mul(x, a)
            k += 1
        return k

    @cached_property
    def primitive_element(self) -> int:
        for a in range(1, self.q):
            if self.order(a) == self.q - 1:
                return a
        raise AssertionError("multiplicative group is not cyclic")  # pragma: no cover

    @cached_property
    def squares(self) -> frozenset[int]:
        return frozenset(self.mul(a, a) for a in range(self.q))

    # -- lookup tables for vectorised use (small fields only) -----------
    @cached_property
    def add_table(self) -> np.ndarray:
        self._check_table_size()
        return np.array([[self.add(a, b) for b in range(self.q)] for a in range(self.q)],
                        dtype=np.int64)

    @cached_property
    def mul_table(self) -> np.ndarray:
        self._check_table_size()
        return np.array([[self.mul(a, b) for b in range(self.q)] for a in range(self.q)],
                        dtype=np.int64)

    @cached_property
    def neg_table(self) -> np.ndarray:
        return np.array([self.neg(a) for a in range(self.q)], dtype=np.int64)

    @cached_property
    def inv_table(self) -> np.ndarray:
        # 0 maps to 0 so the table can be indexed blindly; callers guard zero
        return np.array([0] + [self.inv(a) for a in range(1, self.q)], dtype=np.int64)

    def _check_table_size(self):
        if self.q > TABLE_ORDER:
            raise FieldError(f"lookup tables limited to q <= {TABLE_ORDER}")


def field_new(p: int, n: int = 1) -> Field:
    return Field(p, n)


def field_arith(field: Field, op: str, a: FieldElement, b: FieldElement | None = None
                ) -> FieldElement:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    raise FieldError(f"unknown field operation {op!r}")
