"""Gauss sums in Z_p[xi_{p(q-1)}] and the Teichmuller expansion of the additive character.

Elements of the totally ramified ring are vectors ``(a_0, ..., a_{p-2})`` of
unramified coefficients standing for ``sum a_i pi^i`` with ``pi = xi_p - 1``.
Products are reduced with the Eisenstein relation
``E(pi) = ((1 + pi)^p - 1) / pi = 0``.  Gauss sums live over F_q, the
middle level of the tower.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import comb

import numpy as np

from .errors import InsufficientPrecision, NonUnitDivisor, PrecisionMismatch, VerificationFailed
from .field_tower import FieldTower, build_tower
from .numtheory import digit_sum
from .padic import Valuation, WittElement, WittRing, array_valuations, witt_ring


class RamifiedRing:
    """Z_p[xi_{q-1}][pi]/(E(pi)) truncated at p^N."""

    def __init__(self, base: WittRing):
        self.base = base
        self.p = base.p
        self.N = base.N
        self.rank = self.p - 1
        # pi^(p-1) = -sum_{j < p-1} C(p, j+1) pi^j
        self.eisenstein_low = np.array([comb(self.p, j + 1) for j in range(self.rank)], dtype=object)

    def _reduce(self, c: np.ndarray) -> np.ndarray:
        """Fold rows of index >= p-1 back with E(pi); ``c`` has shape (L, d)."""
        M = self.base.modulus
        c = c % M
        r = self.rank
        for k in range(c.shape[0] - 1, r - 1, -1):
            top = c[k]
            for j in range(r):
                c[k - r + j] = (c[k - r + j] - int(self.eisenstein_low[j]) * top) % M
            c[k] = 0
        return c[:r]

    def element(self, coords) -> RamifiedElement:
        c = np.zeros((max(len(coords), 1), self.base.d), dtype=self.base.dtype)
        for i, w in enumerate(coords):
            c[i] = w.coeffs if isinstance(w, WittElement) else self.base.from_int(int(w)).coeffs
        if c.shape[0] < self.rank:
            c = np.vstack([c, np.zeros((self.rank - c.shape[0], self.base.d), dtype=c.dtype)])
        return RamifiedElement(self, self._reduce(c))

    def from_witt(self, w: WittElement) -> RamifiedElement:
        return self.element([w])

    def from_int(self, n: int) -> RamifiedElement:
        return self.element([n])

    def zero(self) -> RamifiedElement:
        return self.from_int(0)

    def one(self) -> RamifiedElement:
        return self.from_int(1)

    @cached_property
    def pi(self) -> RamifiedElement:
        return self.element([0, 1])

    @cached_property
    def xi_p(self) -> RamifiedElement:
        return self.one() + self.pi

    @cached_property
    def xi_powers(self) -> list[RamifiedElement]:
        out = [self.one()]
        for _ in range(self.p - 1):
            out.append(out[-1] * self.xi_p)
        return out

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        r, d = self.rank, self.base.d
        c = np.zeros((2 * r - 1, d), dtype=self.base.dtype)
        for i in range(r):
            c[i:i + r] += self.base.mul_arrays(a[i], b)
        return self._reduce(c)

    def __repr__(self):
        return f"RamifiedRing({self.base!r})"


@lru_cache(maxsize=64)
def ramified_ring(tower: FieldTower, N: int) -> RamifiedRing:
    return RamifiedRing(witt_ring(tower, N))


class RamifiedElement:
    __slots__ = ("ring", "coords")

    def __init__(self, ring: RamifiedRing, coords: np.ndarray):
        self.ring = ring
        self.coords = coords

    def _coerce(self, other) -> RamifiedElement:
        if isinstance(other, (int, np.integer)):
            return self.ring.from_int(int(other))
        if isinstance(other, WittElement):
            return self.ring.from_witt(other)
        if not isinstance(other, RamifiedElement):
            raise TypeError(type(other).__name__)
        if other.ring is not self.ring:
            raise PrecisionMismatch("elements of different ramified rings")
        return other

    def __add__(self, other):
        other = self._coerce(other)
        return RamifiedElement(self.ring, (self.coords + other.coords) % self.ring.base.modulus)

    __radd__ = __add__

    def __neg__(self):
        return RamifiedElement(self.ring, (-self.coords) % self.ring.base.modulus)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return self.int_scale(int(other))
        other = self._coerce(other)
        return RamifiedElement(self.ring, self.ring.mul(self.coords, other.coords))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def int_scale(self, c: int) -> RamifiedElement:
        return RamifiedElement(self.ring, (self.coords * c) % self.ring.base.modulus)

    def is_unit(self) -> bool:
        return bool(((self.coords[0] % self.ring.p) != 0).any())

    def inverse(self) -> RamifiedElement:
        """Newton iteration x <- x(2 - b x) from the Teichmuller inverse of the residue."""
        if not self.is_unit():
            raise NonUnitDivisor("divisor has positive pi-valuation")
        base = self.ring.base
        res = base.residue(self.coords[0])
        x = self.ring.from_witt(base.teichmuller(base.tower.inv(res)))
        two = self.ring.from_int(2)
        for _ in range(64):
            nxt = x * (two - self * x)
            if nxt == x:
                return x
            x = nxt
        raise AssertionError("Newton inversion did not converge")  # pragma: no cover

    def unit_div(self, other) -> RamifiedElement:
        other = self._coerce(other)
        return self * other.inverse()

    def __eq__(self, other):
        if isinstance(other, (int, np.integer, WittElement)):
            other = self._coerce(other)
        if not isinstance(other, RamifiedElement):
            return NotImplemented
        M = self.ring.base.modulus
        return np.array_equal(self.coords % M, other.coords % M)

    def __hash__(self):
        return hash(tuple(int(c) for c in self.coords.ravel()))

    def to_list(self) -> list[list[int]]:
        return [[int(c) for c in row] for row in self.coords]

    def __repr__(self):
        return f"RamifiedElement({self.to_list()})"


def ramified_arith(a: RamifiedElement, b, op: str) -> RamifiedElement:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "int_scale":
        return a.int_scale(int(b))
    if op == "unit_div":
        return a.unit_div(b)
    raise ValueError(f"unknown op {op!r}")


def pi_valuation(z: RamifiedElement, cap_pi: int | None = None) -> Valuation:
    """nu_p(z) = nu_pi(z)/(p-1), with nu_pi = min_i((p-1) nu_p(a_i) + i).

    The terms of the minimum sit in distinct classes mod p-1, so no
    cancellation between basis indices is possible.
    """
    ring = z.ring
    p, N = ring.p, ring.N
    limit = (p - 1) * (N - 1)
    if cap_pi is None:
        cap_pi = limit
    if cap_pi > limit:
        raise InsufficientPrecision(f"cap_pi {cap_pi} exceeds (p-1)(N-1) = {limit}")
    vals = array_valuations(z.coords, p, N)
    best = min((p - 1) * int(v) + i for i, v in enumerate(vals))
    if best >= cap_pi:
        return Valuation.at_least(Fraction(cap_pi, p - 1))
    return Valuation.finite(Fraction(best, p - 1))


def default_precision(tower: FieldTower) -> int:
    return tower.e + 3


def _field_q_tower(tower_or_q) -> FieldTower:
    if isinstance(tower_or_q, FieldTower):
        return tower_or_q
    q = int(tower_or_q)
    from .numtheory import prime_factors
    (p,) = prime_factors(q)
    e = 0
    while p**e < q:
        e += 1
    return build_tower(p, e, 1)


def _grouped_lifts(ring: RamifiedRing, tower: FieldTower, i: int) -> list[np.ndarray]:
    """For each c in F_p, sum over x in F_q^* with Tr(x) = c of T(x)^(-i)."""
    base = ring.base
    p = tower.p
    sums = [np.zeros(base.d, dtype=base.dtype) for _ in range(p)]
    for x in tower.subfield_reps("q")[1:]:
        c = tower.to_int(int(tower.trace_q_p[x]))
        lift = base.lift_table[tower.pow(int(x), -i) if i else tower.ONE]
        sums[c] = (sums[c] + lift) % base.modulus
    return sums


def gauss_sum(i: int, tower, N: int | None = None) -> RamifiedElement:
    """g(T^-i) = sum_{x in F_q^*} xi_p^Tr(x) T(x)^(-i), exactly mod p^N."""
    tower = _field_q_tower(tower)
    if N is None:
        N = default_precision(tower)
    if not 0 <= i <= tower.q - 2:
        raise ValueError(f"character index {i} outside [0, q-2]")
    ring = ramified_ring(tower, N)
    total = ring.zero()
    for c, s in enumerate(_grouped_lifts(ring, tower, i)):
        total = total + ring.xi_powers[c] * WittElement(ring.base, s)
    return total


@dataclass(frozen=True)
class GaussSumTable:
    p: int
    e: int
    N: int
    lambdas: tuple[RamifiedElement, ...]

    def __getitem__(self, i):
        return self.lambdas[i]

    def __len__(self):
        return len(self.lambdas)


def lambda_table(tower, N: int | None = None) -> GaussSumTable:
    """lambda_0 = 1, lambda_i = g(T^-i)/(q-1) for 0 < i < q-1, lambda_{q-1} = -q/(q-1)."""
    tower = _field_q_tower(tower)
    if N is None:
        N = default_precision(tower)
    ring = ramified_ring(tower, N)
    q = tower.q
    inv = pow(q - 1, -1, ring.base.modulus)
    lambdas = [ring.one()]
    for i in range(1, q - 1):
        lambdas.append(gauss_sum(i, tower, N).int_scale(inv))
    lambdas.append(ring.from_int(-q * inv))
    return GaussSumTable(tower.p, tower.e, N, tuple(lambdas))


def verify_fourier_expansion(tower, N: int | None = None, *, raise_on_failure: bool = True) -> dict:
    """Check xi_p^Tr(x) == sum_i lambda_i T(x)^i for every x in F_q."""
    tower = _field_q_tower(tower)
    if tower.q > 64:
        raise ValueError("expansion check is limited to q <= 64")
    if N is None:
        N = default_precision(tower)
    ring = ramified_ring(tower, N)
    table = lambda_table(tower, N)
    base = ring.base
    rows = []
    failures = []
    for x in tower.subfield_reps("q"):
        x = int(x)
        lhs = ring.xi_powers[tower.to_int(int(tower.trace_q_p[x]))]
        rhs = ring.zero()
        for i, lam in enumerate(table.lambdas):
            rhs = rhs + lam * WittElement(base, base.lift_table[tower.pow(x, i)])
        ok = lhs == rhs
        rows.append({"x": tower.rep_str(x), "pass": ok})
        if not ok:
            failures.append(x)
    report = {"q": tower.q, "N": N, "rows": rows, "pass": not failures}
    if failures and raise_on_failure:
        raise VerificationFailed(f"expansion fails at x = {tower.rep_str(failures[0])}", witness=failures[0])
    return report


def stickelberger_rows(tower, N: int | None = None) -> list[dict]:
    """One row per character index: digit sum, measured nu_pi(g(T^-i)), verdict."""
    tower = _field_q_tower(tower)
    if N is None:
        N = default_precision(tower)
    p = tower.p
    rows = []
    for i in range(tower.q - 1):
        v = pi_valuation(gauss_sum(i, tower, N))
        s = digit_sum(i, p)
        measured = v.value * (p - 1) if v.is_finite else None
        rows.append({"q": tower.q, "i": i, "S_p(i)": s,
                     "measured_valuation": None if measured is None else int(measured),
                     "pass": v.is_finite and measured == s})
    return rows
