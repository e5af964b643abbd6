"""Exact arithmetic of principal ideals over Z, Z/n and their localizations.

Both base rings are principal ideal rings, so every ideal is carried by one
canonical generator: a nonnegative integer over Z, a divisor of n over Z/n.
Structural equality of canonical generators is ideal equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

DEFAULT_FACTOR_BOUND = 10**7


class FactorBoundExceeded(ValueError):
    """Trial division ran past the configured bound without finishing."""


class RingMismatchError(ValueError):
    """Operands live over different rings."""


class NotInRadicalError(ValueError):
    """A Bezout decomposition was requested for f outside the radical."""


def factorize(n: int, bound: int = DEFAULT_FACTOR_BOUND) -> dict[int, int]:
    """Prime factorization of |n| by trial division, n != 0.

    Deterministic by construction: if the trial divisor exceeds ``bound``
    while the cofactor is still composite-sized, the input is rejected
    instead of falling back to probabilistic methods.
    """
    n = abs(int(n))
    if n == 0:
        raise ValueError("0 has no prime factorization")
    factors: dict[int, int] = {}
    d = 2
    while d * d <= n:
        if d > bound:
            raise FactorBoundExceeded(
                f"trial division bound {bound} exceeded while factoring {n}"
            )
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def is_prime(n: int, bound: int = DEFAULT_FACTOR_BOUND) -> bool:
    return n >= 2 and factorize(n, bound) == {n: 1}


def prime_divisors(n: int, bound: int = DEFAULT_FACTOR_BOUND) -> tuple[int, ...]:
    return tuple(sorted(factorize(n, bound))) if n else ()


def squarefree_kernel(n: int, bound: int = DEFAULT_FACTOR_BOUND) -> int:
    """Product of the distinct primes dividing n (0 for n = 0, 1 for units)."""
    if n == 0:
        return 0
    return math.prod(prime_divisors(n, bound))


def strip_primes(n: int, primes: tuple[int, ...]) -> int:
    """Remove every factor of the given primes from |n|."""
    n = abs(n)
    if n == 0:
        return 0
    for p in primes:
        while n % p == 0:
            n //= p
    return n


def coprime_part(n: int, f: int) -> int:
    """Largest divisor of n coprime to f (f = 0 strips everything)."""
    while True:
        g = math.gcd(n, f)
        if g == 1:
            return n
        n //= g


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with g = gcd(a, b) >= 0 and a*x + b*y = g."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _divides(a: int, b: int) -> bool:
    # divisibility with (0) conventions: 0 | b iff b == 0
    return b == 0 if a == 0 else b % a == 0


@dataclass(frozen=True)
class Ring:
    """Base ring descriptor: Z, Z/n, or a localization of one of those.

    ``modulus`` is None for Z and n >= 2 for Z/n.  A localized descriptor
    carries exactly one of ``inverted`` (powers of f made invertible) or
    ``local_prime`` (complement of the prime (p); p = 0 means the zero
    ideal of Z).  ``inverted = 0`` is the canonical degenerate descriptor
    for a localization whose multiplicative set contains 0 (the zero ring).
    """

    modulus: int | None = None
    inverted: int | None = None
    local_prime: int | None = None

    def __post_init__(self):
        if self.modulus is not None and self.modulus < 2:
            raise ValueError("modulus must be >= 2")
        if self.inverted is not None and self.local_prime is not None:
            raise ValueError("localization carries either an inverted element or a prime, never both")
        if self.local_prime is not None:
            if self.local_prime != 0 and not is_prime(self.local_prime):
                raise ValueError(f"{self.local_prime} is not prime")
            if self.local_prime == 0 and self.modulus is not None:
                raise ValueError("the zero ideal is not prime in Z/n")

    @property
    def is_localized(self) -> bool:
        return self.inverted is not None or self.local_prime is not None

    @property
    def base(self) -> Ring:
        return Ring(modulus=self.modulus)

    @property
    def is_zero_ring(self) -> bool:
        return self.effective_modulus == 1

    @property
    def effective_modulus(self) -> int | None:
        """Modulus of the ring up to isomorphism; None for infinite rings."""
        if self.modulus is None:
            if self.inverted == 0:
                return 1
            return None
        if self.inverted is not None:
            return coprime_part(self.modulus, self.inverted)
        if self.local_prime is not None:
            p = self.local_prime
            m = self.modulus
            pv = 1
            while m % p == 0:
                pv *= p
                m //= p
            return pv
        return self.modulus

    def reduce(self, x: int) -> int:
        """Canonical representative of a base-ring element."""
        if self.modulus is None:
            return int(x)
        return int(x) % self.modulus

    def __str__(self) -> str:
        core = "Z" if self.modulus is None else f"Z/{self.modulus}"
        if self.inverted is not None:
            return f"({core})[1/{self.inverted}]" if self.modulus else f"Z[1/{self.inverted}]"
        if self.local_prime is not None:
            return f"({core})_({self.local_prime})" if self.modulus else f"Z_({self.local_prime})"
        return core


ZZ = Ring()


def Zmod(n: int) -> Ring:
    return Ring(modulus=n)


@dataclass(frozen=True)
class Ideal:
    """A principal ideal in canonical form; construct via :func:`ideal`."""

    ring: Ring
    gen: int

    @property
    def is_zero(self) -> bool:
        m = self.ring.effective_modulus
        return self.gen == (0 if m is None else m)

    @property
    def is_unit(self) -> bool:
        return self.gen == 1

    def contains_ideal(self, other: Ideal) -> bool:
        if self.ring != other.ring:
            raise RingMismatchError(f"{self.ring} vs {other.ring}")
        a = 0 if self.is_zero else self.gen
        b = 0 if other.is_zero else other.gen
        return _divides(a, b)

    def contains_element(self, x: int) -> bool:
        ring = self.ring
        x = int(x)
        if ring.modulus is None and ring.is_localized:
            # replace x by its canonical associate in the localized ring
            x = _canonical_gen(ring, x)
        m = ring.effective_modulus
        if m is not None:
            x = x % m
        a = 0 if self.is_zero else self.gen
        return _divides(a, x)

    def __str__(self) -> str:
        return f"({self.gen}) of {self.ring}"


def ideal(ring: Ring, g: int) -> Ideal:
    """The principal ideal (g), canonicalized for the given ring."""
    return Ideal(ring, _canonical_gen(ring, int(g)))


def _canonical_gen(ring: Ring, g: int) -> int:
    m = ring.effective_modulus
    if m is not None:
        return math.gcd(g, m)
    if not ring.is_localized:
        return abs(g)
    if ring.inverted is not None:
        return strip_primes(g, prime_divisors(ring.inverted))
    p = ring.local_prime
    if p == 0:
        return 0 if g == 0 else 1
    if g == 0:
        return 0
    g = abs(g)
    out = 1
    while g % p == 0:
        out *= p
        g //= p
    return out


def ideal_combine(op: str, a: Ideal, b: Ideal) -> Ideal:
    """Ideal sum (gcd of generators), intersection (lcm) or product."""
    if a.ring != b.ring:
        raise RingMismatchError(f"{a.ring} vs {b.ring}")
    if op == "sum":
        raw = math.gcd(a.gen, b.gen)
    elif op == "intersect":
        raw = math.lcm(a.gen, b.gen)
    elif op == "product":
        raw = a.gen * b.gen
    else:
        raise ValueError(f"unknown ideal operation {op!r}")
    return ideal(a.ring, raw)


def ideal_sum(*ideals: Ideal) -> Ideal:
    return reduce(lambda x, y: ideal_combine("sum", x, y), ideals)


def ideal_intersect(*ideals: Ideal) -> Ideal:
    return reduce(lambda x, y: ideal_combine("intersect", x, y), ideals)


def ideal_radical(a: Ideal, bound: int = DEFAULT_FACTOR_BOUND) -> Ideal:
    """Product of the distinct primes containing (gen); fixes (0) and (1)."""
    if a.gen == 0:
        return a
    return ideal(a.ring, squarefree_kernel(a.gen, bound))


def is_prime_ideal(a: Ideal, bound: int = DEFAULT_FACTOR_BOUND) -> bool:
    m = a.ring.effective_modulus
    if m is None:
        return a.gen == 0 or is_prime(a.gen, bound)
    # over Z/m the prime ideals are (p) for primes p | m; this covers the
    # zero ideal of Z/p, whose canonical generator is p itself
    return is_prime(a.gen, bound)


def radical_membership_witness(f: int, a: Ideal) -> int | None:
    """Smallest n >= 1 with f^n in the ideal, or None when f is outside
    the radical."""
    ring = a.ring
    if ring.is_localized:
        raise ValueError("witnesses are computed over the base rings only")
    f = ring.reduce(f)
    if not ideal_radical(a).contains_element(f):
        return None
    m = ring.effective_modulus
    n = 1
    power = f
    while not a.contains_element(power):
        n += 1
        power = power * f if m is None else (power * f) % m
        if n > 64 + (a.gen.bit_length() if a.gen else 0):
            raise RuntimeError("radical witness search failed to terminate")
    return n


@dataclass(frozen=True)
class BezoutDecomposition:
    """f^exponent written exactly as sum(r_i * b_i) with r_i in ideals[i]."""

    ring: Ring
    element: int
    exponent: int
    pairs: tuple[tuple[int, int], ...]


def bezout_decompose(f: int, ideals: list[Ideal]) -> BezoutDecomposition:
    """Write a power of f as an exact combination drawn from the ideals.

    Requires f in the radical of the ideal sum; the witness exponent is the
    smallest one, and the combination is built from iterated extended gcd
    of the generators.  The identity f^n - sum(r_i b_i) = 0 is re-verified
    before returning.
    """
    if not ideals:
        raise ValueError("need at least one ideal")
    ring = ideals[0].ring
    for a in ideals[1:]:
        if a.ring != ring:
            raise RingMismatchError(f"{a.ring} vs {ring}")
    total = ideal_sum(*ideals)
    n = radical_membership_witness(f, total)
    if n is None:
        raise NotInRadicalError(f"{f} is not in the radical of the ideal sum {total}")
    f = ring.reduce(f)
    m = ring.effective_modulus

    gens = [a.gen for a in ideals]
    coeffs = [0] * len(gens)
    g = 0
    for i, gi in enumerate(gens):
        g, x, y = egcd(g, gi)
        for j in range(i):
            coeffs[j] *= x
        coeffs[i] = y
    if m is not None:
        # fold the modulus in so g matches the canonical sum generator
        g2, x, _ = egcd(g, m)
        for j in range(len(coeffs)):
            coeffs[j] = coeffs[j] * x % m
        g = g2

    target = f**n if m is None else pow(f, n, m)
    if g == 0:
        q = 0 if target == 0 else None
        if q is None:
            raise NotInRadicalError(f"{f} is not in the zero ideal")
    else:
        q = target // g
    pairs = []
    for c, gi in zip(coeffs, gens):
        r = c * gi if m is None else (c * gi) % m
        b = q if m is None else q % m
        pairs.append((r, b))

    acc = sum(r * b for r, b in pairs)
    acc = acc if m is None else acc % m
    if acc != target:
        raise RuntimeError("bezout decomposition failed to re-verify")
    for (r, _), a in zip(pairs, ideals):
        if not a.contains_element(r):
            raise RuntimeError("bezout coefficient escaped its ideal")
    return BezoutDecomposition(ring=ring, element=f, exponent=n, pairs=tuple(pairs))
