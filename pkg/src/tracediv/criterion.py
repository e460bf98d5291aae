"""Exact p-adic valuation of a trace code from a generalized generator matrix.

The valuation is the minimum, over exponent tuples r in [0, Q-1]^k with
|r| a positive multiple of q-1, of

    sum_i S_p(r_i)/(p-1) + nu_p( sum_j prod_i T(g_ij)^r_i ) - e.

Tuples are visited in nondecreasing order of their digit total.  Because the
inner valuation is non-negative, a level whose digit term alone already
exceeds the running minimum can be skipped, and every level past that point
as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

import numpy as np

from .errors import EnumerationLimitExceeded
from .padic import ExponentTuple, Valuation, WittElement, array_valuations, witt_ring
from .parallel import chunks, ordered_map
from .trace_code import GeneratorMatrix

DEFAULT_TUPLE_LIMIT = 2**24


# -- digit-sum ordered enumeration --------------------------------------------

@lru_cache(maxsize=4096)
def numbers_with_digit_sum(s: int, p: int, width: int) -> tuple[int, ...]:
    """All integers with ``width`` base-p digits and digit sum ``s``, ascending."""
    if s < 0 or s > width * (p - 1):
        return ()
    if width == 0:
        return (0,) if s == 0 else ()
    out = []
    high = p ** (width - 1)
    for d in range(min(p - 1, s) + 1):
        for low in numbers_with_digit_sum(s - d, p, width - 1):
            out.append(d * high + low)
    return tuple(sorted(out))


def _compositions(total: int, parts: int, cap: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        if 0 <= total <= cap:
            yield (total,)
        return
    for first in range(min(cap, total) + 1):
        for rest in _compositions(total - first, parts - 1, cap):
            yield (first,) + rest


def tuples_at_level(S: int, k: int, p: int, width: int) -> np.ndarray:
    """All k-tuples of width-digit numbers whose digit sums add to S, lexicographically sorted."""
    blocks = []
    for comp in _compositions(S, k, width * (p - 1)):
        groups = [numbers_with_digit_sum(s, p, width) for s in comp]
        if all(groups):
            mesh = np.array(list(product(*groups)), dtype=np.int64).reshape(-1, k)
            blocks.append(mesh)
    if not blocks:
        return np.zeros((0, k), dtype=np.int64)
    arr = np.concatenate(blocks)
    order = np.lexsort(arr.T[::-1])
    return arr[order]


def count_admissible(Q: int, q: int, k: int) -> int:
    """#{r in [0,Q-1]^k : |r| = 0 mod q-1, |r| > 0}."""
    mod = q - 1
    base = [0] * mod
    for v in range(Q):
        base[v % mod] += 1
    dist = [1] + [0] * (mod - 1)
    for _ in range(k):
        new = [0] * mod
        for a, ca in enumerate(dist):
            if ca:
                for b, cb in enumerate(base):
                    new[(a + b) % mod] += ca * cb
        dist = new
    return dist[0] - 1


# -- inner sums ---------------------------------------------------------------

def _exponents(G: GeneratorMatrix, R: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """For a batch of tuples, the log of prod_i g_ij^r_i and a mask of vanishing terms."""
    t = G.tower
    zero = G.entries == t.ZERO
    logs = np.where(zero, 0, G.entries)
    H = (R @ logs) % (t.Q - 1)
    dead = (R > 0).astype(np.int64) @ zero.astype(np.int64) > 0
    return H, dead


def _inner_arrays(G: GeneratorMatrix, R: np.ndarray, ring) -> np.ndarray:
    H, dead = _exponents(G, R)
    lifts = ring.lift_table[H]
    lifts[dead] = 0
    return lifts.sum(axis=1) % ring.modulus


def inner_sum(G: GeneratorMatrix, r: Sequence[int], N: int) -> WittElement:
    """sum_j T(prod_i g_ij^r_i) at precision p^N (0^0 = 1)."""
    ring = witt_ring(G.tower, N)
    R = np.array([list(r)], dtype=np.int64)
    if R.shape[1] != G.k:
        raise ValueError("exponent tuple length must equal the number of rows")
    if (R < 0).any() or (R > G.tower.Q - 1).any():
        raise ValueError("exponents must lie in [0, Q-1]")
    return WittElement(ring, _inner_arrays(G, R, ring)[0])


def inner_sum_valuation(G: GeneratorMatrix, r: Sequence[int], cap: int) -> Valuation:
    """Capped valuation of the inner sum, INFINITE when it vanishes identically.

    Exact vanishing is certified when the multiset of surviving exponents is
    periodic modulo a proper divisor P of Q-1: the sum then factors through
    sum_j omega^(jP) over a nontrivial group of roots of unity.
    """
    t = G.tower
    R = np.array([list(r)], dtype=np.int64)
    H, dead = _exponents(G, R)
    counts = np.bincount(H[0][~dead[0]], minlength=t.Q - 1)
    if not counts.any():
        return Valuation.infinite()
    Qm1 = t.Q - 1
    for P in range(1, Qm1):
        if Qm1 % P == 0 and np.array_equal(counts, np.roll(counts, P)):
            return Valuation.infinite()
    ring = witt_ring(t, max(cap, 1) + 1)
    v = int(array_valuations(_inner_arrays(G, R, ring)[0], t.p, cap))
    return Valuation.at_least(cap) if v >= cap else Valuation.finite(v)


# -- the criterion -----------------------------------------------------------

@dataclass
class CriterionResult:
    valuation: Valuation
    argmin: ExponentTuple | None
    digit_term: Fraction | None
    inner_valuation: Valuation | None
    minus_e: int
    tuples_examined: int = 0
    tuples_pruned: int = 0
    degenerate: bool = False
    cap: int | None = None
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "valuation": self.valuation.to_json(),
            "argmin": None if self.argmin is None else list(self.argmin.entries),
            "objective_breakdown": {
                "digit_term": None if self.digit_term is None else str(self.digit_term),
                "inner_valuation": None if self.inner_valuation is None else self.inner_valuation.to_json(),
                "minus_e": self.minus_e,
            },
            "tuples_examined": self.tuples_examined,
            "tuples_pruned": self.tuples_pruned,
            "degenerate": self.degenerate,
            "cap": self.cap,
            "notes": list(self.notes),
        }


def default_cap(n: int, p: int) -> int:
    """floor(log_p n) + 1: no nonzero weight <= n has valuation reaching it."""
    v = 0
    while p ** (v + 1) <= n:
        v += 1
    return v + 1


def _evaluate_level(G, R, ring, cap, workers):
    def task(span):
        lo, hi = span
        return array_valuations(_inner_arrays(G, R[lo:hi], ring), G.tower.p, cap)

    size = max(1, 2**20 // max(1, G.n * ring.d))
    parts = ordered_map(task, chunks(len(R), size), workers)
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def criterion_valuation(G: GeneratorMatrix, cap: int | None = None, *,
                        limit: int = DEFAULT_TUPLE_LIMIT, workers: int | None = None) -> CriterionResult:
    """Minimise the criterion objective; ties go to the lexicographically smallest r."""
    t = G.tower
    p, e, q, Q, k = t.p, t.e, t.q, t.Q, G.k
    full_cap = default_cap(G.n, p)
    cap = full_cap if cap is None else cap
    ring = witt_ring(t, cap + 1)
    width = t.degree

    best = None  # (objective, r tuple, S, inner)
    examined = 0
    top_level = k * width * (p - 1)
    for S in range(1, top_level + 1):
        lower = Fraction(S, p - 1) - e
        if lower >= cap:
            break
        if best is not None and lower > best[0]:
            break
        R = tuples_at_level(S, k, p, width)
        R = R[(R.sum(axis=1) % (q - 1)) == 0]
        if not len(R):
            continue
        examined += len(R)
        if examined > limit:
            raise EnumerationLimitExceeded(f"more than {limit} exponent tuples examined")
        vals = _evaluate_level(G, R, ring, cap, workers)
        live = vals < cap
        if not live.any():
            continue
        m = int(vals[live].min())
        pos = int(np.flatnonzero(live & (vals == m))[0])
        cand = (lower + m, tuple(int(x) for x in R[pos]), S, m)
        if best is None or cand[:2] < best[:2]:
            best = cand

    total = count_admissible(Q, q, k)
    if best is None:
        degenerate = cap >= full_cap
        return CriterionResult(
            Valuation.infinite() if degenerate else Valuation.at_least(cap),
            None, None, None, -e, examined, total - examined, degenerate, cap,
            ["trace code is zero"] if degenerate else [])
    obj, r, S, m = best
    return CriterionResult(Valuation.finite(obj), ExponentTuple(r, p), Fraction(S, p - 1),
                           Valuation.finite(m), -e, examined, total - examined, False, cap)
