"""
Finite field arithmetic for F_p and its extensions F_{p^s}.

An element of F_{p^s} is stored as an integer in [0, p^s) whose base-p digits
are its coordinates in the power basis of the field modulus (digit i is the
coefficient of t^i). Counting through these integers walks the coefficient
vectors in colex order, so 0 comes first and 1 second.

Multiplication goes through the coefficient vectors (carry-less shifts for
p = 2, digit convolution otherwise). Fields with at most TABLE_LIMIT elements
cache a discrete log / antilog pair for multiplication; the element encoding
is the same either way.

This module provides:
    * field_create(p, s): F_{p^s} with the smallest monic irreducible modulus
    * arith / inv / power on FieldElem values
    * embed(a, target): F_{p^s} -> F_{p^s'} for s | s'
    * enumerate_field(F): all q elements in canonical order
    * upoly_*: dense univariate polynomials over a FieldDesc
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import List, Optional, Sequence, Tuple

import sympy

from config.settings import get_limits

# Fields up to this size keep log/antilog tables for multiplication
TABLE_LIMIT = 1 << 16

UPoly = List[int]


class EnumerationBoundExceeded(ValueError):
    """Raised when a configured enumeration or size bound would be exceeded."""


@dataclass(frozen=True)
class FieldDesc:
    """
    The field F_{p^s} = F_p[t]/(modulus).

    modulus holds s+1 coefficients from t^0 up to the leading 1. For s = 1 the
    modulus is t (so t = 0 and the field is just residues mod p).
    """
    p: int
    s: int
    modulus: Tuple[int, ...]

    @cached_property
    def q(self) -> int:
        return self.p ** self.s

    def __str__(self) -> str:
        return f"F_{self.p}^{self.s}" if self.s > 1 else f"F_{self.p}"

    # ---------- coefficient vectors ----------

    def digits(self, a: int) -> Tuple[int, ...]:
        """Power-basis coordinates of a (length s)."""
        rows = self._digit_rows
        if rows is not None:
            return rows[a]
        out = []
        for _ in range(self.s):
            a, r = divmod(a, self.p)
            out.append(r)
        return tuple(out)

    def from_digits(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.s:
            raise ValueError(f"{self}: expected at most {self.s} coordinates, got {len(coeffs)}")
        value = 0
        for c in reversed(coeffs):
            value = value * self.p + (int(c) % self.p)
        return value

    def element(self, coeffs: Sequence[int]) -> "FieldElem":
        return FieldElem(self, self.from_digits(coeffs))

    def constant(self, k: int) -> int:
        """Encoding of the prime-field constant k mod p."""
        return k % self.p

    @cached_property
    def _digit_rows(self) -> Optional[List[Tuple[int, ...]]]:
        if self.s == 1 or self.q > TABLE_LIMIT:
            return None
        rows = []
        for a in range(self.q):
            out = []
            for _ in range(self.s):
                a, r = divmod(a, self.p)
                out.append(r)
            rows.append(tuple(out))
        return rows

    @cached_property
    def _modulus_bits(self) -> int:
        return sum(c << i for i, c in enumerate(self.modulus))

    # ---------- arithmetic on encoded values ----------

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.s == 1:
            return (a + b) % self.p
        p = self.p
        return self.from_digits([(x + y) % p for x, y in zip(self.digits(a), self.digits(b))])

    def neg(self, a: int) -> int:
        if self.p == 2 or a == 0:
            return a
        if self.s == 1:
            return self.p - a
        p = self.p
        return self.from_digits([(-x) % p for x in self.digits(a)])

    def sub(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.s == 1:
            return (a - b) % self.p
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.s == 1:
            return a * b % self.p
        tables = self._log_tables
        if tables is not None:
            antilog, log = tables
            return antilog[log[a] + log[b]]
        return self._mul_slow(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"inverse of 0 in {self}")
        if self.s == 1:
            return pow(a, self.p - 2, self.p)
        tables = self._log_tables
        if tables is not None:
            antilog, log = tables
            return antilog[self.q - 1 - log[a]]
        return self.power(a, self.q - 2)

    def power(self, a: int, n: int) -> int:
        if n < 0:
            raise ValueError("negative exponent; use inv() first")
        if self.s == 1:
            return pow(a, n, self.p)
        result, base = 1, a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def _mul_slow(self, a: int, b: int) -> int:
        s = self.s
        if self.p == 2:
            mod = self._modulus_bits
            top = 1 << s
            r = 0
            while b:
                if b & 1:
                    r ^= a
                b >>= 1
                a <<= 1
                if a & top:
                    a ^= mod
            return r
        p = self.p
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * s - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    if y:
                        prod[i + j] += x * y
        mod = self.modulus
        for k in range(2 * s - 2, s - 1, -1):
            c = prod[k] % p
            if c:
                for j in range(s):
                    prod[k - s + j] -= c * mod[j]
        return self.from_digits([c % p for c in prod[:s]])

    def _power_slow(self, a: int, n: int) -> int:
        result, base = 1, a
        while n:
            if n & 1:
                result = self._mul_slow(result, base)
            base = self._mul_slow(base, base)
            n >>= 1
        return result

    @cached_property
    def _log_tables(self) -> Optional[Tuple[List[int], List[int]]]:
        q = self.q
        if self.s == 1 or q > TABLE_LIMIT:
            return None
        order = q - 1
        cofactors = [order // r for r in sympy.factorint(order)]
        gen = next(
            g for g in range(2, q)
            if all(self._power_slow(g, c) != 1 for c in cofactors)
        )
        antilog = [0] * (2 * order)
        log = [0] * q
        x = 1
        for i in range(order):
            antilog[i] = antilog[i + order] = x
            log[x] = i
            x = self._mul_slow(x, gen)
        return antilog, log

    def in_subfield(self, a: int, t: int) -> bool:
        """True iff a lies in the subfield F_{p^t} (t must divide s)."""
        return self.power(a, self.p ** t) == a


@dataclass(frozen=True)
class FieldElem:
    field: FieldDesc
    value: int

    @property
    def coeffs(self) -> Tuple[int, ...]:
        return self.field.digits(self.value)

    def _same(self, other: "FieldElem") -> None:
        if not isinstance(other, FieldElem):
            raise TypeError(f"expected FieldElem, got {type(other).__name__}")
        if other.field != self.field:
            raise ValueError(f"mixed-field operands: {self.field} and {other.field}")

    def __add__(self, other: "FieldElem") -> "FieldElem":
        self._same(other)
        return FieldElem(self.field, self.field.add(self.value, other.value))

    def __sub__(self, other: "FieldElem") -> "FieldElem":
        self._same(other)
        return FieldElem(self.field, self.field.sub(self.value, other.value))

    def __mul__(self, other: "FieldElem") -> "FieldElem":
        self._same(other)
        return FieldElem(self.field, self.field.mul(self.value, other.value))

    def __neg__(self) -> "FieldElem":
        return FieldElem(self.field, self.field.neg(self.value))

    def __pow__(self, n: int) -> "FieldElem":
        return FieldElem(self.field, self.field.power(self.value, n))

    def inverse(self) -> "FieldElem":
        return FieldElem(self.field, self.field.inv(self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        if self.field.s == 1:
            return f"{self.value}"
        return "[" + ",".join(str(c) for c in self.coeffs) + "]"


# ============================================================================
# Construction
# ============================================================================

def parse_field(text: str) -> Tuple[int, int]:
    """Parse the textual form 'p^s' (or a bare prime 'p') into (p, s)."""
    m = re.fullmatch(r"\s*(\d+)\s*(?:\^\s*(\d+))?\s*", text or "")
    if not m:
        raise ValueError(f"field must look like 'p^s' (e.g. 2^1, 3^2), got {text!r}")
    return int(m.group(1)), int(m.group(2) or 1)


def field_create(p: int, s: int = 1, bound: Optional[int] = None) -> FieldDesc:
    """
    F_{p^s} whose modulus is the lexicographically smallest monic irreducible
    of degree s (non-leading coefficients compared from t^{s-1} down to t^0).

    Args:
        p: characteristic (must be prime)
        s: extension degree
        bound: largest accepted p^s (defaults to the configured field bound)

    Returns:
        FieldDesc (identical for identical (p, s))
    """
    if not sympy.isprime(p):
        raise ValueError(f"characteristic must be prime, got {p}")
    if s < 1:
        raise ValueError(f"extension degree must be positive, got {s}")
    bound = bound if bound is not None else get_limits().field_bound
    if p ** s > bound:
        raise EnumerationBoundExceeded(f"field size {p}^{s} exceeds bound {bound}")
    return _create_field(p, s)


@lru_cache(maxsize=None)
def _create_field(p: int, s: int) -> FieldDesc:
    if s == 1:
        return FieldDesc(p, 1, (0, 1))
    prime = FieldDesc(p, 1, (0, 1))
    for code in range(p ** s):
        coeffs = []
        c = code
        for _ in range(s):
            c, r = divmod(c, p)
            coeffs.append(r)
        modulus = coeffs + [1]
        if is_irreducible(prime, modulus):
            return FieldDesc(p, s, tuple(modulus))
    raise AssertionError(f"no irreducible polynomial of degree {s} over F_{p}")


def is_irreducible(prime: FieldDesc, f: Sequence[int]) -> bool:
    """
    Irreducibility over the prime field: f has no root in F_{p^t} for any
    t <= deg(f)/2, i.e. gcd(f, x^{p^t} - x) = 1 for all such t.
    """
    f = upoly_trim(list(f))
    deg = len(f) - 1
    if deg < 1:
        return False
    f = upoly_monic(prime, f)
    x = [0, 1]
    h = x
    for _ in range(deg // 2):
        h = upoly_powmod(prime, h, prime.p, f)
        g = upoly_gcd(prime, upoly_sub(prime, h, x), f)
        if len(g) > 1:
            return False
    return True


# ============================================================================
# Element-level operations
# ============================================================================

def arith(a: FieldElem, b: FieldElem, op: str) -> FieldElem:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r} (expected add, sub or mul)")


def inv(a: FieldElem) -> FieldElem:
    return a.inverse()


def power(a: FieldElem, n: int) -> FieldElem:
    return a ** n


def enumerate_field(F: FieldDesc, bound: Optional[int] = None) -> List[FieldElem]:
    """All q elements: 0, 1, then the rest in colex order of coefficient vectors."""
    bound = bound if bound is not None else get_limits().field_bound
    if F.q > bound:
        raise EnumerationBoundExceeded(f"{F} has {F.q} elements, bound is {bound}")
    return [FieldElem(F, v) for v in range(F.q)]


@lru_cache(maxsize=None)
def generator_image(source: FieldDesc, target: FieldDesc) -> int:
    """Smallest root (in enumeration order) of source.modulus inside target."""
    if source.p != target.p:
        raise ValueError(f"cannot embed {source} into {target}: characteristics differ")
    if target.s % source.s:
        raise ValueError(f"cannot embed {source} into {target}: {source.s} does not divide {target.s}")
    mod = source.modulus
    for r in range(target.q):
        if upoly_eval(target, mod, r) == 0:
            return r
    raise AssertionError(f"{source.modulus} has no root in {target}")


@lru_cache(maxsize=None)
def _basis_images(source: FieldDesc, target: FieldDesc) -> Tuple[int, ...]:
    r = generator_image(source, target)
    images, x = [], 1
    for _ in range(source.s):
        images.append(x)
        x = target.mul(x, r)
    return tuple(images)


@lru_cache(maxsize=None)
def embedding_table(source: FieldDesc, target: FieldDesc) -> Tuple[int, ...]:
    """Image of every source value, indexed by the source encoding."""
    return tuple(embed_value(source, target, v) for v in range(source.q))


def embed_value(source: FieldDesc, target: FieldDesc, v: int) -> int:
    if source == target:
        return v
    basis = _basis_images(source, target)
    out = 0
    for d, b in zip(source.digits(v), basis):
        if d:
            out = target.add(out, target.mul(d, b))
    return out


def embed(a: FieldElem, target: FieldDesc) -> FieldElem:
    return FieldElem(target, embed_value(a.field, target, a.value))


# ============================================================================
# Univariate polynomials over a field (coefficient lists, constant term first)
# ============================================================================

def upoly_trim(a: UPoly) -> UPoly:
    while a and a[-1] == 0:
        a.pop()
    return a


def upoly_add(F: FieldDesc, a: UPoly, b: UPoly) -> UPoly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = F.add(out[i], c)
    return upoly_trim(out)


def upoly_sub(F: FieldDesc, a: UPoly, b: UPoly) -> UPoly:
    return upoly_add(F, a, [F.neg(c) for c in b])


def upoly_mul(F: FieldDesc, a: UPoly, b: UPoly) -> UPoly:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return upoly_trim(out)


def upoly_monic(F: FieldDesc, a: UPoly) -> UPoly:
    if not a or a[-1] == 1:
        return a
    lc_inv = F.inv(a[-1])
    return [F.mul(c, lc_inv) for c in a]


def upoly_mod(F: FieldDesc, a: UPoly, b: UPoly) -> UPoly:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = upoly_trim(list(a))
    db = len(b) - 1
    lc_inv = F.inv(b[-1])
    while len(r) - 1 >= db:
        c = F.mul(r[-1], lc_inv)
        shift = len(r) - 1 - db
        for j, bc in enumerate(b):
            if bc:
                r[shift + j] = F.sub(r[shift + j], F.mul(c, bc))
        upoly_trim(r)
    return r


def upoly_gcd(F: FieldDesc, a: UPoly, b: UPoly) -> UPoly:
    """Monic gcd; gcd(0, 0) is the zero polynomial."""
    a, b = upoly_trim(list(a)), upoly_trim(list(b))
    while b:
        a, b = b, upoly_mod(F, a, b)
    return upoly_monic(F, a)


def upoly_powmod(F: FieldDesc, base: UPoly, n: int, mod: UPoly) -> UPoly:
    result: UPoly = [1]
    base = upoly_mod(F, base, mod)
    while n:
        if n & 1:
            result = upoly_mod(F, upoly_mul(F, result, base), mod)
        base = upoly_mod(F, upoly_mul(F, base, base), mod)
        n >>= 1
    return upoly_mod(F, result, mod)


def upoly_eval(F: FieldDesc, a: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def upoly_count_roots(F: FieldDesc, h: UPoly) -> int:
    """
    Number of distinct roots of h in F itself: deg gcd(h, x^q - x).
    The zero polynomial vanishes on all q elements.
    """
    h = upoly_trim(list(h))
    if not h:
        return F.q
    if len(h) == 1:
        return 0
    h = upoly_monic(F, h)
    r: UPoly = [0, 1]
    for _ in range(F.s):
        r = upoly_powmod(F, r, F.p, h)
    g = upoly_gcd(F, upoly_sub(F, r, [0, 1]), h)
    return len(g) - 1


def upoly_first_root(F: FieldDesc, h: UPoly) -> Optional[int]:
    """Smallest root of h in F (enumeration order), or None."""
    h = upoly_trim(list(h))
    if not h:
        return 0
    for x in range(F.q):
        if upoly_eval(F, h, x) == 0:
            return x
    return None
