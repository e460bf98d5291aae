"""Log-table arithmetic for the tower F_p <= F_q <= F_{q^m}.

Elements are stored as integer *reps*: a discrete logarithm in ``[0, Q-2]``
with respect to the tower's primitive element, or the sentinel ``Q-1`` for
zero.  Keeping zero inside ``[0, Q-1]`` lets every lookup table be a flat
array indexed by rep.  A second, additive encoding (the *vec*) packs the
coordinates of an element in the polynomial basis as a base-p integer; it is
used for bulk addition.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    DivisionByZero,
    NonPrime,
    NonPrimitiveRoot,
    ReduciblePoly,
    TableLimitExceeded,
)
from .numtheory import is_prime, prime_factors

DEFAULT_TABLE_LIMIT = 2**20

LEVELS = ("p", "q", "qm")
TRACE_LEVELS = ("qm_q", "qm_p", "q_p")


# -- polynomials over F_p, coefficient lists constant term first -------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    a = [c % p for c in a]
    _trim(a)
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    while len(a) - 1 >= df:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
        _trim(a)
    return a


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _ppowmod(base: Sequence[int], n: int, f: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(base, f, p)
    while n:
        if n & 1:
            result = _pmod(_pmul(result, base, p), f, p)
        base = _pmod(_pmul(base, base, p), f, p)
        n >>= 1
    return result


def _pgcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _psub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p."""
    n = len(poly) - 1
    if n < 1:
        return False
    x = _pmod([0, 1], poly, p)
    if _psub(_ppowmod(x, p**n, poly, p), x, p):
        return False
    for ell in prime_factors(n):
        h = _pmod(_psub(_ppowmod(x, p ** (n // ell), poly, p), x, p), poly, p)
        if len(_pgcd(poly, h, p)) != 1:
            return False
    return True


def _root_is_primitive(poly: Sequence[int], p: int) -> bool:
    order = p ** (len(poly) - 1) - 1
    x = [0, 1]
    if _ppowmod(x, order, poly, p) != [1]:
        return False
    return all(_ppowmod(x, order // ell, poly, p) != [1] for ell in prime_factors(order))


def default_poly(p: int, degree: int) -> tuple[int, ...]:
    """Smallest monic polynomial (ordered by its base-p encoding) that is
    irreducible and has a primitive root."""
    for code in range(p**degree):
        low = [(code // p**i) % p for i in range(degree)]
        poly = low + [1]
        if low[0] == 0 and degree > 1:
            continue
        if is_irreducible(poly, p) and _root_is_primitive(poly, p):
            return tuple(poly)
    raise AssertionError("no primitive polynomial found")  # pragma: no cover


# -- the tower ----------------------------------------------------------------

class FieldTower:
    """Immutable arithmetic context for F_p <= F_q <= F_{q^m}, q = p^e.

    Build instances with :func:`build_tower`, which caches them.
    """

    def __init__(self, p: int, e: int, m: int, poly: Sequence[int] | None = None,
                 *, table_limit: int = DEFAULT_TABLE_LIMIT, primitive_search: bool = False):
        if not is_prime(p):
            raise NonPrime(p)
        if e < 1 or m < 1:
            raise ValueError("e and m must be positive")
        degree = e * m
        if p**degree > table_limit:
            raise TableLimitExceeded(f"p^(em) = {p}^{degree} exceeds table limit {table_limit}")
        self.p, self.e, self.m = p, e, m
        self.degree = degree
        self.q = p**e
        self.Q = p**degree
        self.ZERO = self.Q - 1
        self.ONE = 0

        generator_vec = None
        if poly is None:
            poly = default_poly(p, degree)
        else:
            poly = [int(c) % p for c in poly]
            if len(poly) != degree + 1 or poly[-1] != 1:
                raise ReduciblePoly(f"polynomial must be monic of degree {degree}")
            if not is_irreducible(poly, p):
                raise ReduciblePoly(f"{poly} is reducible over F_{p}")
            if not _root_is_primitive(poly, p):
                if not primitive_search:
                    raise NonPrimitiveRoot(f"root of {poly} is not primitive")
                generator_vec = self._find_primitive(poly)
        self.poly = tuple(poly)
        self._build_tables(generator_vec)

    # construction helpers
    def _find_primitive(self, poly) -> int:
        p, n = self.p, self.degree
        order = self.Q - 1
        for vec in range(2, self.Q):
            g = [(vec // p**i) % p for i in range(n)]
            if _ppowmod(g, order, poly, p) != [1]:
                continue
            if all(_ppowmod(g, order // ell, poly, p) != [1] for ell in prime_factors(order)):
                return vec
        raise NonPrimitiveRoot("no primitive element")  # pragma: no cover

    def _build_tables(self, generator_vec: int | None) -> None:
        p, n, Q = self.p, self.degree, self.Q
        weights = p ** np.arange(n, dtype=np.int64)

        if generator_vec is None:
            gen = [0, 1]
        else:
            gen = [(generator_vec // p**i) % p for i in range(n)]

        def mult_matrix(poly_g: list[int]) -> np.ndarray:
            # row j holds the coordinates of x^j * g
            rows = []
            for j in range(n):
                prod = _pmod(_pmul([0] * j + [1], poly_g, p), self.poly, p)
                rows.append(prod + [0] * (n - len(prod)))
            return np.array(rows, dtype=np.int64)

        # exp table by doubling: block [L, 2L) is block [0, L) times g^L
        exp_digits = np.zeros((Q - 1, n), dtype=np.int64)
        exp_digits[0, 0] = 1
        filled = 1
        while filled < Q - 1:
            take = min(filled, Q - 1 - filled)
            shift = mult_matrix(_ppowmod(gen, filled, self.poly, p))
            exp_digits[filled:filled + take] = exp_digits[:take] @ shift % p
            filled += take
        exp_vec = exp_digits @ weights
        self.generator_vec = int(exp_vec[1]) if Q > 2 else 1

        log_of = np.full(Q, -1, dtype=np.int64)
        log_of[exp_vec] = np.arange(Q - 1)
        log_of[0] = self.ZERO
        if (log_of < 0).any():
            raise NonPrimitiveRoot("generator does not span F_Q^*")
        vec_of = np.empty(Q, dtype=np.int64)
        vec_of[: Q - 1] = exp_vec
        vec_of[self.ZERO] = 0
        self.vec_of = vec_of
        self.log_of = log_of
        # zech[k] = log(1 + g^k)
        self.zech = log_of[self.vec_add(np.ones(Q - 1, dtype=np.int64), exp_vec)]

        reps = np.arange(Q, dtype=np.int64)
        self.trace_qm_q = self._trace_table(reps, self.q, m=self.m)
        self.trace_qm_p = self._trace_table(reps, p, m=n)
        self.step_q = (Q - 1) // (self.q - 1)
        self.step_p = (Q - 1) // (p - 1)
        # Tr_{q/p} only makes sense on F_q; elsewhere the entry is left as ZERO
        sub = self.subfield_reps("q")
        tqp = np.full(Q, self.ZERO, dtype=np.int64)
        tqp[sub] = self._trace_table(sub, p, m=self.e)
        self.trace_q_p = tqp

    def _trace_table(self, reps: np.ndarray, base: int, m: int) -> np.ndarray:
        acc = np.full(reps.shape, self.ZERO, dtype=np.int64)
        power = 1
        for _ in range(m):
            acc = self.vadd(acc, self.vpow(reps, power))
            power *= base
        return acc

    # -- vec (additive) encoding ---------------------------------------------
    def vec_add(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        p = self.p
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        res = np.zeros(a.shape, dtype=np.int64)
        pw = 1
        for _ in range(self.degree):
            res = res + ((a // pw) % p + (b // pw) % p) % p * pw
            pw *= p
        return res

    def vec_scale_int(self, a, c: int):
        """Multiply vec-encoded elements by the prime-field integer ``c``."""
        p = self.p
        c %= p
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        res = np.zeros(a.shape, dtype=np.int64)
        pw = 1
        for _ in range(self.degree):
            res = res + ((a // pw) % p * c) % p * pw
            pw *= p
        return res

    # -- rep-level vectorised arithmetic -------------------------------------
    def vmul(self, a, b):
        a, b = np.asarray(a), np.asarray(b)
        z = (a == self.ZERO) | (b == self.ZERO)
        return np.where(z, self.ZERO, (a + b) % (self.Q - 1))

    def vadd(self, a, b):
        return self.log_of[self.vec_add(self.vec_of[a], self.vec_of[b])]

    def vpow(self, a, n):
        """Elementwise power with the 0^0 = 1 convention; ``n`` may be an array."""
        a = np.asarray(a)
        n = np.asarray(n)
        out = np.where(a == self.ZERO, self.ZERO, (a * n) % (self.Q - 1))
        return np.where(n == 0, self.ONE, out)

    def vtrace(self, a, level: str = "qm_q"):
        return self._trace_lookup(level)[a]

    def _trace_lookup(self, level: str) -> np.ndarray:
        try:
            return {"qm_q": self.trace_qm_q, "qm_p": self.trace_qm_p, "q_p": self.trace_q_p}[level]
        except KeyError:
            raise ValueError(f"unknown trace level {level!r}") from None

    # -- scalar arithmetic on reps -------------------------------------------
    def add(self, a: int, b: int) -> int:
        if a == self.ZERO:
            return b
        if b == self.ZERO:
            return a
        z = int(self.zech[(b - a) % (self.Q - 1)])
        return self.ZERO if z == self.ZERO else (a + z) % (self.Q - 1)

    def neg(self, a: int) -> int:
        if a == self.ZERO or self.p == 2:
            return a
        return (a + (self.Q - 1) // 2) % (self.Q - 1)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == self.ZERO or b == self.ZERO:
            return self.ZERO
        return (a + b) % (self.Q - 1)

    def inv(self, a: int) -> int:
        if a == self.ZERO:
            raise DivisionByZero("inverse of zero")
        return (-a) % (self.Q - 1)

    def pow(self, a: int, n: int) -> int:
        if n == 0:
            return self.ONE
        if a == self.ZERO:
            if n < 0:
                raise DivisionByZero("negative power of zero")
            return self.ZERO
        return (a * n) % (self.Q - 1)

    def trace(self, a: int, level: str = "qm_q") -> int:
        if level == "q_p" and not self.in_subfield(a, "q"):
            raise ValueError("Tr_{q/p} applied to an element outside F_q")
        return int(self._trace_lookup(level)[a])

    def arith(self, a: int, b: int | None, op: str, n: int | None = None) -> int:
        if op == "add":
            return self.add(a, b)
        if op == "mul":
            return self.mul(a, b)
        if op == "inv":
            return self.inv(a)
        if op == "pow":
            return self.pow(a, n)
        raise ValueError(f"unknown op {op!r}")

    # -- subfields and enumeration -------------------------------------------
    def subfield_reps(self, level: str) -> np.ndarray:
        """Reps of the chosen level in enumeration order: zero, then ascending log."""
        if level == "qm":
            size, step = self.Q, 1
        elif level == "q":
            size, step = self.q, (self.Q - 1) // (self.q - 1)
        elif level == "p":
            size, step = self.p, (self.Q - 1) // (self.p - 1)
        else:
            raise ValueError(f"unknown level {level!r}")
        return np.concatenate(([self.ZERO], np.arange(size - 1, dtype=np.int64) * step))

    def in_subfield(self, a: int, level: str) -> bool:
        if a == self.ZERO or level == "qm":
            return True
        size = {"q": self.q, "p": self.p}[level]
        return a % ((self.Q - 1) // (size - 1)) == 0

    def enumerate(self, level: str = "qm") -> Iterator[FieldElement]:
        for r in self.subfield_reps(level):
            yield FieldElement(self, int(r))

    def to_int(self, a: int) -> int:
        """Value of a prime-field element as an integer in [0, p-1]."""
        v = int(self.vec_of[a])
        if v >= self.p:
            raise ValueError("element is not in the prime field")
        return v

    def from_int(self, c: int) -> int:
        return int(self.log_of[c % self.p])

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        """Rep of sum_i coeffs[i] * x^i, x the root of the defining polynomial."""
        coeffs = _pmod(list(coeffs), self.poly, self.p)
        vec = sum(c * self.p**i for i, c in enumerate(coeffs))
        return int(self.log_of[vec])

    def coeffs(self, a: int) -> list[int]:
        v = int(self.vec_of[a])
        return [(v // self.p**i) % self.p for i in range(self.degree)]

    def element(self, rep: int) -> FieldElement:
        return FieldElement(self, rep)

    def power_of_generator(self, t: int) -> FieldElement:
        return FieldElement(self, t % (self.Q - 1))

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, self.ZERO)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, self.ONE)

    def describe(self) -> dict:
        return {"p": self.p, "e": self.e, "m": self.m, "q": self.q, "Q": self.Q,
                "poly": list(self.poly), "generator_coeffs": self.coeffs(1 % (self.Q - 1))}

    def rep_str(self, a: int) -> str:
        return "0" if a == self.ZERO else f"a^{a}"

    def __repr__(self) -> str:
        return f"FieldTower(p={self.p}, e={self.e}, m={self.m}, poly={list(self.poly)})"


class FieldElement:
    """Convenience wrapper pairing a rep with its tower; bulk code uses raw reps."""

    __slots__ = ("tower", "rep")

    def __init__(self, tower: FieldTower, rep: int):
        self.tower = tower
        self.rep = int(rep)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            return other.rep
        if isinstance(other, (int, np.integer)):
            return self.tower.from_int(int(other))
        return NotImplemented

    def __add__(self, other):
        return FieldElement(self.tower, self.tower.add(self.rep, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.tower, self.tower.sub(self.rep, self._other(other)))

    def __neg__(self):
        return FieldElement(self.tower, self.tower.neg(self.rep))

    def __mul__(self, other):
        return FieldElement(self.tower, self.tower.mul(self.rep, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * FieldElement(self.tower, self.tower.inv(self._other(other)))

    def __pow__(self, n: int):
        return FieldElement(self.tower, self.tower.pow(self.rep, n))

    def inverse(self) -> FieldElement:
        return FieldElement(self.tower, self.tower.inv(self.rep))

    def trace(self, level: str = "qm_q") -> FieldElement:
        return FieldElement(self.tower, self.tower.trace(self.rep, level))

    def is_zero(self) -> bool:
        return self.rep == self.tower.ZERO

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.tower is other.tower and self.rep == other.rep
        if isinstance(other, (int, np.integer)):
            return self.rep == self.tower.from_int(int(other))
        return NotImplemented

    def __hash__(self):
        return hash((id(self.tower), self.rep))

    def __repr__(self):
        return self.tower.rep_str(self.rep)


@lru_cache(maxsize=64)
def _cached_tower(p, e, m, poly, table_limit, primitive_search):
    return FieldTower(p, e, m, poly, table_limit=table_limit, primitive_search=primitive_search)


def build_tower(p: int, e: int = 1, m: int = 1, poly: Sequence[int] | None = None,
                *, table_limit: int = DEFAULT_TABLE_LIMIT, primitive_search: bool = False) -> FieldTower:
    """Return the (cached) tower F_p <= F_{p^e} <= F_{p^(em)}."""
    key = tuple(int(c) for c in poly) if poly is not None else None
    return _cached_tower(p, e, m, key, table_limit, primitive_search)
