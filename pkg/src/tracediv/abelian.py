"""Abelian and cyclic codes: trace representation, the digit-sum program, McEliece's l.

Also hosts an oracle for cyclic codes over a prime field that works without
log tables: it builds the generator polynomial in F_p[x]/(phi) for some
irreducible phi, enumerates the smaller of the code and its dual, and maps a
dual weight distribution back with the MacWilliams transform.  This reaches
lengths whose splitting field (e.g. F_{3^30}) is far beyond table size.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Sequence

import numpy as np

from .criterion import CriterionResult, tuples_at_level
from .errors import EnumerationLimitExceeded, Infeasible, NonCoprimeGroupOrder
from .field_tower import (
    DEFAULT_TABLE_LIMIT,
    _pmod,
    _pmul,
    _ppowmod,
    build_tower,
    is_irreducible,
)
from .numtheory import ceil_div, int_valuation, lcm, multiplicative_order, prime_factors
from .padic import ExponentTuple, Valuation
from .trace_code import GeneratorMatrix

DEFAULT_PROGRAM_LIMIT = 2**22


@dataclass(frozen=True)
class AbelianCodeSpec:
    """An abelian code over F_q, q = p^e, on A = Z_{n_1} x ... x Z_{n_h}.

    ``rows`` are the tuples s_i of the trace representation, one generator
    row each.
    """

    group: tuple[int, ...]
    p: int
    e: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        group = tuple(int(n) for n in self.group)
        if not group or any(n < 1 for n in group):
            raise ValueError("group orders must be positive")
        rows = tuple(tuple(int(s) % n for s, n in zip(row, group)) for row in self.rows)
        if any(len(row) != len(group) for row in self.rows):
            raise ValueError("each row tuple needs one entry per cyclic factor")
        if not rows:
            raise ValueError("at least one row tuple is required")
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "rows", rows)
        if math.gcd(self.exponent, self.q) != 1:
            raise NonCoprimeGroupOrder(f"exponent {self.exponent} is not coprime to q = {self.q}")

    @property
    def q(self) -> int:
        return self.p**self.e

    @property
    def exponent(self) -> int:
        return lcm(*self.group)

    @property
    def m(self) -> int:
        return multiplicative_order(self.q, self.exponent)

    @property
    def size(self) -> int:
        return math.prod(self.group)

    @property
    def k(self) -> int:
        return len(self.rows)

    def orbit(self, s: Sequence[int]) -> list[tuple[int, ...]]:
        out, cur = [], tuple(s)
        while cur not in out:
            out.append(cur)
            cur = tuple(x * self.q % n for x, n in zip(cur, self.group))
        return out

    def expand_cosets(self) -> AbelianCodeSpec:
        """Append the full q-orbit of every row tuple (duplicates dropped)."""
        rows: list[tuple[int, ...]] = []
        for s in self.rows:
            for t in self.orbit(s):
                if t not in rows:
                    rows.append(t)
        return replace(self, rows=tuple(rows))

    def describe(self) -> dict:
        return {"group": list(self.group), "p": self.p, "e": self.e, "q": self.q, "m": self.m,
                "rows": [list(r) for r in self.rows]}


def build_trace_representation(spec: AbelianCodeSpec, *, table_limit: int = DEFAULT_TABLE_LIMIT,
                               poly: Sequence[int] | None = None) -> GeneratorMatrix:
    """k x |A| matrix (prod_l gamma_l^(s_il j_l)); gamma_l = beta^((Q-1)/n_l).

    Columns run over A in row-major mixed-radix order.
    """
    tower = build_tower(spec.p, spec.e, spec.m, poly, table_limit=table_limit)
    Qm1 = tower.Q - 1
    steps = [Qm1 // n for n in spec.group]
    cols = list(itertools.product(*(range(n) for n in spec.group)))
    ent = np.array([[sum(s * j * st for s, j, st in zip(row, col, steps)) % Qm1 for col in cols]
                    for row in spec.rows], dtype=np.int64)
    return GeneratorMatrix(tower, ent)


def gamma_logs(spec: AbelianCodeSpec) -> list[int]:
    Qm1 = spec.q**spec.m - 1
    return [Qm1 // n for n in spec.group]


def delsarte_mceliece_valuation(spec: AbelianCodeSpec, *, limit: int = DEFAULT_PROGRAM_LIMIT) -> CriterionResult:
    """min sum S_p(r_i)/(p-1) - e subject to |r| = 0 mod q-1, |r| > 0 and
    sum_i r_i s_il = 0 mod n_l for every factor.

    Needs no field tables, so it runs for any splitting degree.
    """
    p, e, q, m = spec.p, spec.e, spec.q, spec.m
    width = e * m
    k = spec.k
    Smat = np.array(spec.rows, dtype=np.int64)  # k x h
    mods = np.array(spec.group, dtype=np.int64)
    examined = 0
    for S in range(1, k * width * (p - 1) + 1):
        R = tuples_at_level(S, k, p, width)
        examined += len(R)
        if examined > limit:
            raise EnumerationLimitExceeded(f"more than {limit} exponent tuples examined")
        if not len(R):
            continue
        ok = ((R.sum(axis=1) % (q - 1)) == 0) & _congruent(R, Smat, mods)
        if ok.any():
            r = tuple(int(x) for x in R[np.flatnonzero(ok)[0]])
            digit = Fraction(S, p - 1)
            return CriterionResult(Valuation.finite(digit - e), ExponentTuple(r, p), digit,
                                   Valuation.finite(0), -e, examined, 0, False, None,
                                   ["|r| > 0 enforced"])
    raise Infeasible("no admissible exponent tuple")  # pragma: no cover


def _congruent(R: np.ndarray, Smat: np.ndarray, mods: np.ndarray) -> np.ndarray:
    ok = np.ones(len(R), dtype=bool)
    for ell, n in enumerate(mods):
        ok &= ((R % n) @ (Smat[:, ell] % n)) % n == 0
    return ok


# -- McEliece -----------------------------------------------------------------

def cyclotomic_coset(s: int, q: int, n: int) -> list[int]:
    out, cur = [], s % n
    while cur not in out:
        out.append(cur)
        cur = cur * q % n
    return out


def coset_union(reps: Sequence[int], q: int, n: int) -> list[int]:
    return sorted({x for s in reps for x in cyclotomic_coset(s, q, n)})


@dataclass(frozen=True)
class McElieceResult:
    ell: int
    exponent: int
    witness: tuple[int, ...]
    # ceil(ell/(p-1)) - 1, a divisibility lower bound valid for every p; equals ``exponent`` when p = 2
    prime_field_exponent: int | None = None


def mceliece_ell(n: int, p: int, reps: Sequence[int]) -> McElieceResult:
    """Shortest nonempty multiset from the coset union of ``reps`` summing to 0 mod n."""
    nonzeros = coset_union(reps, p, n)
    if not nonzeros:
        raise Infeasible("empty set of nonzeros")
    # breadth-first search over partial sums; parent pointers give the witness
    parent: dict[int, tuple[int, int]] = {}
    frontier = deque()
    for z in nonzeros:
        if z not in parent:
            parent[z] = (-1, z)
            frontier.append(z)
    depth = {z: 1 for z in parent}
    while frontier:
        cur = frontier.popleft()
        if cur == 0:
            break
        for z in nonzeros:
            nxt = (cur + z) % n
            if nxt not in parent:
                parent[nxt] = (cur, z)
                depth[nxt] = depth[cur] + 1
                frontier.append(nxt)
    if 0 not in parent:  # pragma: no cover - n * z = 0 always closes a cycle
        raise Infeasible("no zero-sum multiset")
    witness = []
    node = 0
    while True:
        prev, z = parent[node]
        witness.append(z)
        if prev == -1:
            break
        node = prev
    ell = depth[0]
    return McElieceResult(ell, ell - 1, tuple(sorted(witness)), ceil_div(ell, p - 1) - 1)


def mceliece_for_spec(spec: AbelianCodeSpec) -> McElieceResult:
    if len(spec.group) != 1 or spec.e != 1:
        raise ValueError("McEliece's statistic needs a cyclic group over a prime field")
    return mceliece_ell(spec.group[0], spec.p, [r[0] for r in spec.rows])


# -- table-free cyclic oracle ------------------------------------------------

def _first_irreducible(p: int, degree: int) -> list[int]:
    for code in range(p**degree):
        low = [(code // p**i) % p for i in range(degree)]
        if degree > 1 and low[0] == 0:
            continue
        poly = low + [1]
        if is_irreducible(poly, p):
            return poly
    raise AssertionError("unreachable")  # pragma: no cover


def _root_of_unity(n: int, p: int, phi: list[int]) -> list[int]:
    m = len(phi) - 1
    cofactor = (p**m - 1) // n
    for code in range(1, p**m):
        z = [(code // p**i) % p for i in range(m)]
        w = _ppowmod(z, cofactor, phi, p)
        if all(_ppowmod(w, n // ell, phi, p) != [1] for ell in prime_factors(n)):
            return w
    raise AssertionError("no element of order n")  # pragma: no cover


def _check_polynomial(n: int, p: int, nonzeros: Sequence[int]) -> list[int]:
    """prod_{j in nonzeros} (X - gamma^j), coefficients reduced to F_p."""
    m = multiplicative_order(p, n)
    phi = _first_irreducible(p, m)
    gamma = _root_of_unity(n, p, phi)
    poly: list[list[int]] = [[1]]  # coefficients are elements of F_p[x]/(phi)
    for j in nonzeros:
        root = _ppowmod(gamma, j, phi, p)
        neg = [(-c) % p for c in root]
        new = [[] for _ in range(len(poly) + 1)]
        for i, c in enumerate(poly):
            new[i + 1] = _add(new[i + 1], c, p)
            new[i] = _add(new[i], _pmod(_pmul(c, neg, p), phi, p), p)
        poly = new
    out = []
    for c in poly:
        if len(c) > 1:
            raise AssertionError("check polynomial is not defined over F_p")
        out.append(c[0] if c else 0)
    return out


def _add(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    r = [((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)]
    while r and r[-1] == 0:
        r.pop()
    return r


def _polydiv_exact(num: list[int], den: list[int], p: int) -> list[int]:
    num = list(num)
    dq = len(den) - 1
    inv = pow(den[-1], -1, p)
    quot = [0] * (len(num) - dq)
    for i in range(len(num) - 1, dq - 1, -1):
        c = num[i] * inv % p
        quot[i - dq] = c
        for j, d in enumerate(den):
            num[i - dq + j] = (num[i - dq + j] - c * d) % p
    if any(num[:dq]):
        raise AssertionError("division is not exact")
    return quot


def _span_weights(gen: list[int], n: int, p: int, limit: int) -> dict[int, int]:
    """Weight distribution of the cyclic code generated by ``gen`` (degree n - K)."""
    K = n - (len(gen) - 1)
    if K == 0:
        return {0: 1}
    if p**K > limit:
        raise EnumerationLimitExceeded(f"p^K = {p}^{K} exceeds enumeration limit {limit}")
    rows = np.zeros((K, n), dtype=np.int64)
    for i in range(K):
        rows[i, i:i + len(gen)] = gen
    dist: dict[int, int] = {}
    total = p**K
    size = 1 << 16
    for lo in range(0, total, size):
        idx = np.arange(lo, min(lo + size, total), dtype=np.int64)
        coeffs = np.empty((len(idx), K), dtype=np.int64)
        for i in range(K):
            coeffs[:, i] = idx % p
            idx = idx // p
        words = coeffs @ rows % p
        for w, c in zip(*np.unique((words != 0).sum(axis=1), return_counts=True)):
            dist[int(w)] = dist.get(int(w), 0) + int(c)
    return dist


def _krawtchouk(j: int, w: int, n: int, p: int) -> int:
    return sum((-1) ** i * (p - 1) ** (j - i) * math.comb(w, i) * math.comb(n - w, j - i)
               for i in range(j + 1))


def macwilliams(dual: dict[int, int], n: int, p: int) -> dict[int, int]:
    size = sum(dual.values())
    out = {}
    for j in range(n + 1):
        a = sum(c * _krawtchouk(j, w, n, p) for w, c in dual.items())
        if a % size:
            raise AssertionError("MacWilliams transform is not integral")
        if a:
            out[j] = a // size
    return out


def cyclic_weight_distribution(n: int, p: int, reps: Sequence[int], *, limit: int = 2**22) -> dict[int, int]:
    """Weights of the p-ary cyclic code whose nonzeros are the cosets of ``reps``."""
    if math.gcd(n, p) != 1:
        raise NonCoprimeGroupOrder(f"n = {n} is not coprime to p = {p}")
    nonzeros = coset_union(reps, p, n)
    h = _check_polynomial(n, p, nonzeros)
    xn1 = [(-1) % p] + [0] * (n - 1) + [1]
    g = _polydiv_exact(xn1, h, p)
    K = len(nonzeros)
    if K <= n - K:
        return _span_weights(g, n, p, limit)
    # dual code is generated by the reciprocal of h
    hrec = list(reversed(h))
    inv = pow(hrec[-1], -1, p)
    hrec = [c * inv % p for c in hrec]
    return macwilliams(_span_weights(hrec, n, p, limit), n, p)


def cyclic_oracle_valuation(n: int, p: int, reps: Sequence[int], *, limit: int = 2**22) -> Valuation:
    dist = cyclic_weight_distribution(n, p, reps, limit=limit)
    vals = [int_valuation(w, p) for w, c in dist.items() if w > 0 and c > 0]
    return Valuation.finite(min(vals)) if vals else Valuation.infinite()


def cyclic_spec(n: int, p: int, reps: Sequence[int]) -> AbelianCodeSpec:
    return AbelianCodeSpec((n,), p, 1, tuple((s,) for s in reps))


def coset_leaders(n: int, q: int) -> list[int]:
    seen, out = set(), []
    for s in range(n):
        if s not in seen:
            out.append(s)
            seen.update(cyclotomic_coset(s, q, n))
    return out
