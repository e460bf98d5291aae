"""Truncated arithmetic in the unramified ring Z_p[xi_{Q-1}] and capped valuations.

The ring is modelled as ``(Z/p^N)[y] / (f~(y))`` where ``f~`` is the integer
lift of the tower's defining polynomial.  Coefficient arrays have shape
``(..., d)`` with ``d = em``; every helper broadcasts over leading axes so that
bulk work (inner sums, tensor transforms) stays in numpy.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache, total_ordering
from typing import Iterable, Sequence

import numpy as np

from .errors import InsufficientPrecision, NonConvergence, PrecisionMismatch
from .field_tower import FieldTower
from .numtheory import digit_sum, int_valuation

__all__ = [
    "Valuation",
    "ExponentTuple",
    "WittRing",
    "WittElement",
    "witt_ring",
    "digit_sum",
    "tau_shift",
    "teichmuller_lift",
    "capped_valuation",
    "vector_valuation",
    "array_valuations",
]


@total_ordering
@dataclass(frozen=True)
class Valuation:
    """A p-adic valuation in (1/(p-1))Z, a lower bound ``AT_LEAST(cap)``, or infinity.

    ``AT_LEAST(c)`` sorts just above the finite value ``c`` and below any
    finite value greater than ``c``.
    """

    kind: str
    value: Fraction | None = None

    @classmethod
    def finite(cls, v) -> Valuation:
        return cls("finite", Fraction(v))

    @classmethod
    def at_least(cls, cap) -> Valuation:
        return cls("at_least", Fraction(cap))

    @classmethod
    def infinite(cls) -> Valuation:
        return cls("infinite")

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    def _key(self):
        if self.kind == "infinite":
            return (1, Fraction(0), 0)
        return (0, self.value, 0 if self.kind == "finite" else 1)

    def __lt__(self, other):
        if not isinstance(other, Valuation):
            return NotImplemented
        return self._key() < other._key()

    def __add__(self, other):
        if isinstance(other, Valuation):
            if not other.is_finite:
                if self.kind == "infinite" or other.kind == "infinite":
                    return Valuation.infinite()
                return Valuation(other.kind, other.value + self.value)
            other = other.value
        if self.kind == "infinite":
            return self
        return Valuation(self.kind, self.value + Fraction(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-Fraction(other))

    def __int__(self):
        if not self.is_finite or self.value.denominator != 1:
            raise ValueError(f"{self} is not a finite integer valuation")
        return int(self.value)

    def __str__(self):
        if self.kind == "infinite":
            return "inf"
        prefix = ">=" if self.kind == "at_least" else ""
        return prefix + str(self.value)

    def to_json(self):
        if self.kind == "infinite":
            return {"kind": "infinite"}
        return {"kind": self.kind, "value": str(self.value)}


@dataclass(frozen=True)
class ExponentTuple:
    """Exponent vector r with cached total |r| and total base-p digit sum."""

    entries: tuple[int, ...]
    p: int
    total: int = field(init=False)
    digit_total: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(int(r) for r in self.entries))
        if any(r < 0 for r in self.entries):
            raise ValueError("exponents must be non-negative")
        object.__setattr__(self, "total", sum(self.entries))
        object.__setattr__(self, "digit_total", sum(digit_sum(r, self.p) for r in self.entries))

    @property
    def digit_term(self) -> Fraction:
        return Fraction(self.digit_total, self.p - 1)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


def tau_shift(x: int, h: int, p: int, Q: int) -> int:
    """The p-ary cyclic shift on [0, Q-1], iterated ``h`` times.

    Fixes 0 and Q-1; otherwise returns the representative of p^h * x mod Q-1
    in [1, Q-2].
    """
    if not 0 <= x <= Q - 1:
        raise ValueError("x out of range")
    if x == 0 or x == Q - 1:
        return x
    return pow(p, h, Q - 1) * x % (Q - 1)


# -- vectorised ring kernels --------------------------------------------------

def _polymulmod(a: np.ndarray, b: np.ndarray, flow: np.ndarray, M: int) -> np.ndarray:
    """(a * b) mod (f~, M) for coefficient arrays broadcasting over leading axes."""
    d = a.shape[-1]
    shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1])
    c = np.zeros(shape + (2 * d - 1,), dtype=np.result_type(a, b))
    for i in range(d):
        c[..., i:i + d] += a[..., i:i + 1] * b
    c %= M
    for k in range(2 * d - 2, d - 1, -1):
        top = c[..., k:k + 1]
        c[..., k - d:k] = (c[..., k - d:k] - top * flow) % M
    return c[..., :d]


def array_valuations(arr: np.ndarray, p: int, cap: int) -> np.ndarray:
    """Per-row min p-adic valuation over the last axis, saturated at ``cap``."""
    arr = np.asarray(arr)
    out = np.full(arr.shape[:-1], cap, dtype=np.int64)
    cur = arr.copy()
    alive = np.ones(arr.shape[:-1], dtype=bool)
    for v in range(cap):
        unit = ((cur % p) != 0).any(axis=-1) & alive
        out[unit] = v
        alive &= ~unit
        if not alive.any():
            break
        cur = cur // p
    return out


class WittRing:
    """(Z/p^N)[y]/(f~) for a tower, with its Teichmuller table."""

    def __init__(self, tower: FieldTower, N: int):
        if N < 1:
            raise ValueError("precision must be >= 1")
        self.tower = tower
        self.p = tower.p
        self.N = N
        self.d = tower.degree
        self.modulus = self.p**N
        fits = self.d * self.modulus**2 * self.p < 2**62
        self.dtype = np.int64 if fits else object
        self.fpoly = np.array(tower.poly, dtype=self.dtype)
        self.flow = self.fpoly[:-1]

    # construction
    def _arr(self, coeffs) -> np.ndarray:
        a = np.asarray(coeffs, dtype=self.dtype) % self.modulus
        return a

    def element(self, coeffs: Sequence[int]) -> WittElement:
        c = list(coeffs) + [0] * (self.d - len(coeffs))
        return WittElement(self, self._arr(c))

    def from_int(self, n: int) -> WittElement:
        return self.element([n])

    def zero(self) -> WittElement:
        return self.from_int(0)

    def one(self) -> WittElement:
        return self.from_int(1)

    # kernels
    def mul_arrays(self, a, b) -> np.ndarray:
        return _polymulmod(np.asarray(a, dtype=self.dtype), np.asarray(b, dtype=self.dtype),
                           self.flow, self.modulus)

    def pow_array(self, a, n: int) -> np.ndarray:
        result = np.zeros_like(np.asarray(a, dtype=self.dtype))
        result[..., 0] = 1
        base = np.asarray(a, dtype=self.dtype)
        while n:
            if n & 1:
                result = self.mul_arrays(result, base)
            base = self.mul_arrays(base, base)
            n >>= 1
        return result

    def naive_lift(self, rep: int) -> np.ndarray:
        return self._arr(self.tower.coeffs(rep))

    def frobenius_fixed_point(self, start: np.ndarray) -> np.ndarray:
        """Iterate t -> t^Q from ``start`` until it stabilises."""
        Q = self.tower.Q
        t = start
        for _ in range(self.N + 2):
            nxt = self.pow_array(t, Q)
            if np.array_equal(nxt, t):
                return t
            t = nxt
        raise NonConvergence("Frobenius iteration did not stabilise")

    @cached_property
    def lift_table(self) -> np.ndarray:
        """Row ``rep`` holds T(element); row ZERO holds 0.

        Built from omega = T(generator) by block doubling: T(g^i) = omega^i.
        """
        Q, d = self.tower.Q, self.d
        table = np.zeros((Q, d), dtype=self.dtype)
        table[0, 0] = 1
        if Q > 2:
            omega = self.frobenius_fixed_point(self.naive_lift(1))
            filled = 1
            step = omega
            while filled < Q - 1:
                take = min(filled, Q - 1 - filled)
                table[filled:filled + take] = self.mul_arrays(table[:take], step)
                filled += take
                step = self.mul_arrays(step, step)
        table[self.tower.ZERO] = 0
        return table

    def teichmuller(self, rep: int) -> WittElement:
        return WittElement(self, self.lift_table[rep].copy())

    def teichmuller_direct(self, rep: int) -> WittElement:
        """T(a) by Frobenius iteration on the naive lift of ``a`` alone."""
        if rep == self.tower.ZERO:
            return self.zero()
        return WittElement(self, self.frobenius_fixed_point(self.naive_lift(rep)))

    def residue(self, coeffs: np.ndarray) -> int:
        return self.tower.from_coeffs([int(c) % self.p for c in coeffs])

    def __repr__(self):
        return f"WittRing({self.tower!r}, N={self.N})"


@lru_cache(maxsize=64)
def witt_ring(tower: FieldTower, N: int) -> WittRing:
    return WittRing(tower, N)


class WittElement:
    """An element of a :class:`WittRing`; arithmetic is exact mod p^N."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: WittRing, coeffs: np.ndarray):
        self.ring = ring
        self.coeffs = coeffs

    def _check(self, other) -> WittElement:
        if isinstance(other, (int, np.integer)):
            return self.ring.from_int(int(other))
        if not isinstance(other, WittElement):
            raise TypeError(f"cannot combine WittElement with {type(other).__name__}")
        if other.ring is not self.ring:
            if other.ring.N != self.ring.N:
                raise PrecisionMismatch(f"precision {self.ring.N} vs {other.ring.N}")
            if other.ring.tower is not self.ring.tower:
                raise PrecisionMismatch("elements of different towers")
        return other

    def __add__(self, other):
        other = self._check(other)
        return WittElement(self.ring, (self.coeffs + other.coeffs) % self.ring.modulus)

    __radd__ = __add__

    def __neg__(self):
        return WittElement(self.ring, (-self.coeffs) % self.ring.modulus)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return self.int_scale(int(other))
        other = self._check(other)
        return WittElement(self.ring, self.ring.mul_arrays(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        return WittElement(self.ring, self.ring.pow_array(self.coeffs, n))

    def int_scale(self, c: int) -> WittElement:
        return WittElement(self.ring, (self.coeffs * c) % self.ring.modulus)

    def is_zero(self) -> bool:
        return not np.any(self.coeffs % self.ring.modulus)

    def residue(self) -> int:
        """Reduction mod p, as a field rep."""
        return self.ring.residue(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            other = self.ring.from_int(int(other))
        if not isinstance(other, WittElement):
            return NotImplemented
        return self.ring.N == other.ring.N and np.array_equal(
            self.coeffs % self.ring.modulus, other.coeffs % other.ring.modulus)

    def __hash__(self):
        return hash(tuple(int(c) for c in self.coeffs))

    def to_list(self) -> list[int]:
        return [int(c) for c in self.coeffs]

    def __repr__(self):
        return f"WittElement({self.to_list()} mod {self.ring.p}^{self.ring.N})"


def teichmuller_lift(tower: FieldTower, rep: int, N: int) -> WittElement:
    """T(a) at precision p^N (table lookup; see WittRing.teichmuller_direct)."""
    return witt_ring(tower, N).teichmuller(rep)


def witt_arith(a: WittElement, b: WittElement | int | None, op: str) -> WittElement:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "int_scale":
        return a.int_scale(int(b))
    raise ValueError(f"unknown op {op!r}")


def capped_valuation(z: WittElement, cap: int) -> Valuation:
    """Largest v < cap with p^v dividing every coefficient, else AT_LEAST(cap)."""
    if z.ring.N < cap:
        raise InsufficientPrecision(f"precision {z.ring.N} < cap {cap}")
    v = int(array_valuations(z.coeffs, z.ring.p, cap))
    return Valuation.at_least(cap) if v >= cap else Valuation.finite(v)


def vector_valuation(v: Iterable[WittElement], cap: int) -> Valuation:
    vals = [capped_valuation(z, cap) for z in v]
    if not vals:
        return Valuation.infinite()
    return min(vals)


def int_capped_valuation(n: int, p: int, cap: int | None = None) -> Valuation:
    v = int_valuation(n, p)
    if v is None:
        return Valuation.infinite()
    if cap is not None and v >= cap:
        return Valuation.at_least(cap)
    return Valuation.finite(v)


# -- the Teichmuller transform and its tensor powers --------------------------

def teichmuller_matrix(ring: WittRing) -> np.ndarray:
    """M0 = (T(a)^r) for r in [0, Q-1] and a over the top field (zero first), shape (Q, Q, d)."""
    t = ring.tower
    cols = t.subfield_reps("qm")
    rows = [t.vpow(cols, r) for r in range(t.Q)]
    return np.stack([ring.lift_table[r] for r in rows])


def tensor_apply(ring: WittRing, M0: np.ndarray, x: np.ndarray, k: int) -> np.ndarray:
    """(M0 tensor ... tensor M0) x, one mode at a time; ``x`` has shape (Q^k, d)."""
    Q, d = M0.shape[0], ring.d
    y = np.asarray(x, dtype=ring.dtype).reshape((Q,) * k + (d,))
    for axis in range(k):
        moved = np.moveaxis(y, axis, 0)
        out = np.zeros_like(moved)
        for r in range(Q):
            acc = np.zeros_like(moved[0])
            for a in range(Q):
                acc = (acc + ring.mul_arrays(M0[r, a], moved[a])) % ring.modulus
            out[r] = acc
        y = np.moveaxis(out, 0, axis)
    return y.reshape(Q**k, d)


def random_vector_with_valuation(ring: WittRing, length: int, v: int, rng: np.random.Generator) -> np.ndarray:
    """Entries divisible by p^v with at least one of valuation exactly v."""
    p, N, d = ring.p, ring.N, ring.d
    if not 0 <= v < N:
        raise InsufficientPrecision(f"valuation {v} not representable at precision {N}")
    span = p ** (N - v)
    x = rng.integers(0, span, size=(length, d)).astype(ring.dtype)
    pos = int(rng.integers(length))
    if not (x[pos] % p).any():
        x[pos, int(rng.integers(d))] += int(rng.integers(1, p))
    return (x * p**v) % ring.modulus


def transform_invariance_check(tower: FieldTower, k: int, trials: int, *, N: int = 6,
                               seed: int = 0) -> dict:
    """Check nu_p(M0^{tensor k} x) = nu_p(x) on random vectors of known valuation."""
    ring = witt_ring(tower, N)
    M0 = teichmuller_matrix(ring)
    rng = np.random.default_rng(seed)
    failures = []
    for trial in range(trials):
        v = int(rng.integers(0, N - 1))
        x = random_vector_with_valuation(ring, tower.Q**k, v, rng)
        y = tensor_apply(ring, M0, x, k)
        vx = int(array_valuations(x, ring.p, N).min())
        vy = int(array_valuations(y, ring.p, N).min())
        if not (vx == v and vy == vx):
            failures.append({"trial": trial, "expected": v, "nu_x": vx, "nu_y": vy})
    return {"q": tower.Q, "k": k, "N": N, "trials": trials, "seed": seed,
            "failures": failures, "pass": not failures}
