"""Small integer helpers: primality, factoring, orders, digit sums."""

from __future__ import annotations

import math
from functools import reduce


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` in increasing order."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def int_valuation(n: int, p: int) -> int | None:
    """Exponent of ``p`` in the nonzero integer ``n``; None for ``n == 0``."""
    if n == 0:
        return None
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def digit_sum(a: int, b: int) -> int:
    """Sum of the base-``b`` digits of ``a >= 0``."""
    if a < 0:
        raise ValueError("digit_sum needs a non-negative integer")
    s = 0
    while a:
        a, r = divmod(a, b)
        s += r
    return s


def digits(a: int, b: int, width: int) -> list[int]:
    """Base-``b`` digits of ``a``, least significant first, padded to ``width``."""
    out = []
    for _ in range(width):
        a, r = divmod(a, b)
        out.append(r)
    return out


def multiplicative_order(a: int, n: int) -> int:
    """Smallest m >= 1 with a**m == 1 mod n (n >= 1, gcd(a, n) == 1)."""
    if n == 1:
        return 1
    if math.gcd(a, n) != 1:
        raise ValueError(f"{a} is not a unit mod {n}")
    m, x = 1, a % n
    while x != 1:
        x = x * a % n
        m += 1
    return m


def lcm(*xs: int) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), xs, 1)


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)
