"""Integer factorization and unit-group helpers for Z/p^m.

Everything here works on Python ints, so there is no overflow anywhere.
Sizes are desk scale: homology orders of small knots and unit groups with
at most a few thousand elements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NotAUnit

# Deterministic Miller-Rabin witnesses for every n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """Return a nontrivial factor of the odd composite n (Brent's variant)."""
    for c in range(1, n):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"no factor found for {n}")


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as ascending ``(prime, exponent)`` pairs."""

    pairs: tuple[tuple[int, int], ...]

    @property
    def value(self) -> int:
        out = 1
        for p, e in self.pairs:
            out *= p**e
        return out

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.pairs)

    def exponent(self, p: int) -> int:
        return dict(self.pairs).get(p, 0)

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)

    def __str__(self) -> str:
        if not self.pairs:
            return "1"
        return " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.pairs)


def factorize(n: int) -> Factorization:
    """Factor a positive integer exactly.

    Trial division by small primes, then Miller-Rabin plus Pollard rho on
    whatever is left.

    >>> factorize(9261).pairs
    ((3, 3), (7, 3))
    """
    if n < 1:
        raise ValueError(f"factorize needs n >= 1, got {n}")
    counts: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            counts[p] = counts.get(p, 0) + 1
            n //= p
    # wheel mod 30 up to a modest bound
    f, steps = 7, (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while f * f <= n and f < 10_000:
        while n % f == 0:
            counts[f] = counts.get(f, 0) + 1
            n //= f
        f += steps[i]
        i = (i + 1) % 8
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if is_prime(m):
            counts[m] = counts.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        d = _pollard_rho(m)
        stack += [d, m // d]
    return Factorization(tuple(sorted(counts.items())))


def is_perfect_square(n: int) -> bool:
    if n < 0:
        raise ValueError("is_perfect_square needs n >= 0")
    r = math.isqrt(n)
    return r * r == n


def unit_group_order(p: int, m: int) -> int:
    """Order of the unit group of Z/p^m for an odd prime p, i.e. p^(m-1)(p-1)."""
    if p % 2 == 0 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    if m < 1:
        raise ValueError("exponent must be positive")
    return p ** (m - 1) * (p - 1)


def multiplicative_order(a: int, modulus: int) -> int:
    if math.gcd(a, modulus) != 1:
        raise NotAUnit(f"{a} is not a unit mod {modulus}")
    a %= modulus
    k, x = 1, a
    while x != 1 % modulus:
        x = x * a % modulus
        k += 1
    return k


def primitive_root(p: int, m: int = 1) -> int:
    """Smallest positive generator of the (cyclic) units of Z/p^m, p odd prime."""
    order = unit_group_order(p, m)
    modulus = p**m
    if modulus == 3:
        return 2
    divisors = [q for q, _ in factorize(order).pairs]
    for g in range(2, modulus):
        if g % p == 0:
            continue
        if all(pow(g, order // q, modulus) != 1 for q in divisors):
            return g
    raise ArithmeticError(f"no primitive root mod {modulus}")  # unreachable for odd p


def discrete_log(g: int, u: int, modulus: int) -> int:
    """Least alpha >= 0 with g**alpha == u (mod modulus), by linear scan."""
    if math.gcd(u, modulus) != 1:
        raise NotAUnit(f"{u} is not a unit mod {modulus}")
    u %= modulus
    x = 1 % modulus
    for alpha in range(modulus):
        if x == u:
            return alpha
        x = x * g % modulus
    raise ValueError(f"{u} is not a power of {g} mod {modulus}")
