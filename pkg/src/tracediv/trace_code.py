"""Trace codes from generalized generator matrices, and the brute-force oracle.

The oracle enumerates every message alpha in F_{q^m}^k, forms the codeword
``(Tr_{q^m/q}(sum_i alpha_i g_ij))_j`` and takes the minimum p-adic valuation
of the nonzero weights.  It shares nothing with the criterion path beyond
field arithmetic.
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, EnumerationLimitExceeded
from .field_tower import FieldElement, FieldTower
from .padic import Valuation
from .parallel import chunks, ordered_map

DEFAULT_ENUMERATION_LIMIT = 2**24
_CHUNK = 1 << 14


@dataclass(frozen=True)
class GeneratorMatrix:
    """k x n matrix of field reps over the top level of ``tower``."""

    tower: FieldTower
    entries: np.ndarray

    def __post_init__(self):
        ent = np.asarray(self.entries, dtype=np.int64)
        if ent.ndim != 2 or ent.shape[0] < 1 or ent.shape[1] < 1:
            raise DimensionMismatch("generator matrix must be a non-empty 2-d array")
        if ((ent < 0) | (ent > self.tower.ZERO)).any():
            raise ValueError("matrix entry is not a valid field rep")
        ent.setflags(write=False)
        object.__setattr__(self, "entries", ent)

    @classmethod
    def from_elements(cls, tower: FieldTower, rows: Sequence[Sequence]) -> GeneratorMatrix:
        return cls(tower, np.array([[x.rep if isinstance(x, FieldElement) else int(x) for x in row]
                                    for row in rows], dtype=np.int64))

    @classmethod
    def from_powers(cls, tower: FieldTower, rows: Sequence[Sequence[int | None]]) -> GeneratorMatrix:
        """Entries given as exponents of the primitive element; None means zero."""
        Qm1 = tower.Q - 1
        return cls(tower, np.array([[tower.ZERO if t is None else t % Qm1 for t in row]
                                    for row in rows], dtype=np.int64))

    @property
    def k(self) -> int:
        return self.entries.shape[0]

    @property
    def n(self) -> int:
        return self.entries.shape[1]

    def permute_columns(self, perm) -> GeneratorMatrix:
        return GeneratorMatrix(self.tower, self.entries[:, list(perm)])

    def scale_row(self, i: int, rep: int) -> GeneratorMatrix:
        ent = self.entries.copy()
        ent[i] = self.tower.vmul(ent[i], rep)
        return GeneratorMatrix(self.tower, ent)

    def scale_column(self, j: int, rep: int) -> GeneratorMatrix:
        ent = self.entries.copy()
        ent[:, j] = self.tower.vmul(ent[:, j], rep)
        return GeneratorMatrix(self.tower, ent)

    def to_literals(self) -> list[list[str]]:
        return [[self.tower.rep_str(int(x)) for x in row] for row in self.entries]


@dataclass(frozen=True)
class Codeword:
    coords: tuple[int, ...]
    weight: int


def _alpha_digits_to_reps(tower: FieldTower, digits: np.ndarray) -> np.ndarray:
    # enumeration digit 0 is zero, digit t >= 1 is the generator power t-1
    return np.where(digits == 0, tower.ZERO, digits - 1)


def _traces(G: GeneratorMatrix, alphas: np.ndarray) -> np.ndarray:
    """Codeword coordinates (tower reps of F_q elements) for a batch of messages."""
    t = G.tower
    acc = np.zeros((alphas.shape[0], G.n), dtype=np.int64)
    for i in range(G.k):
        prod = t.vmul(alphas[:, i:i + 1], G.entries[i][None, :])
        acc = t.vec_add(acc, t.vec_of[prod])
    return t.trace_qm_q[t.log_of[acc]]


def trace_codeword(G: GeneratorMatrix, alpha: Sequence) -> Codeword:
    if len(alpha) != G.k:
        raise DimensionMismatch(f"expected {G.k} message symbols, got {len(alpha)}")
    reps = np.array([[a.rep if isinstance(a, FieldElement) else int(a) for a in alpha]], dtype=np.int64)
    row = _traces(G, reps)[0]
    return Codeword(tuple(int(x) for x in row), int((row != G.tower.ZERO).sum()))


def _weights_valuations(w: np.ndarray, p: int) -> np.ndarray:
    """nu_p of each positive weight; -1 marks zero weight."""
    v = np.zeros(w.shape, dtype=np.int64)
    cur = w.copy()
    live = cur > 0
    while True:
        div = live & (cur % p == 0)
        if not div.any():
            break
        v[div] += 1
        cur[div] //= p
    v[~live] = -1
    return v


def _check_limit(G: GeneratorMatrix, limit: int) -> int:
    total = G.tower.Q ** G.k
    if total > limit:
        raise EnumerationLimitExceeded(f"Q^k = {total} exceeds enumeration limit {limit}")
    return total


def _scan_first(G: GeneratorMatrix, first: int) -> tuple[int | None, int | None, Counter]:
    """Scan all messages with leading digit ``first``; return (min nu, index, weight histogram)."""
    t, k = G.tower, G.k
    Q = t.Q
    rest = Q ** (k - 1)
    best_v, best_idx = None, None
    hist: Counter = Counter()
    for lo, hi in chunks(rest, _CHUNK):
        idx = np.arange(lo, hi, dtype=np.int64)
        digits = np.empty((hi - lo, k), dtype=np.int64)
        digits[:, 0] = first
        rem = idx
        for i in range(k - 1, 0, -1):
            digits[:, i] = rem % Q
            rem = rem // Q
        tr = _traces(G, _alpha_digits_to_reps(t, digits))
        w = (tr != t.ZERO).sum(axis=1)
        hist.update(Counter(w.tolist()))
        vals = _weights_valuations(w, t.p)
        live = vals >= 0
        if live.any():
            m = int(vals[live].min())
            pos = int(np.flatnonzero(live & (vals == m))[0])
            if best_v is None or m < best_v:
                best_v, best_idx = m, first * rest + lo + pos
    return best_v, best_idx, hist


def _index_to_alpha(G: GeneratorMatrix, idx: int) -> tuple[int, ...]:
    Q = G.tower.Q
    digits = []
    for _ in range(G.k):
        idx, d = divmod(idx, Q)
        digits.append(d)
    digits.reverse()
    return tuple(int(x) for x in _alpha_digits_to_reps(G.tower, np.array(digits)))


def _scan(G: GeneratorMatrix, limit: int, workers: int | None):
    _check_limit(G, limit)
    return ordered_map(lambda a: _scan_first(G, a), range(G.tower.Q), workers)


@dataclass(frozen=True)
class OracleResult:
    valuation: Valuation
    witness: tuple[int, ...] | None
    degenerate: bool

    def __iter__(self):
        return iter((self.valuation, self.witness))


def bruteforce_valuation(G: GeneratorMatrix, *, limit: int = DEFAULT_ENUMERATION_LIMIT,
                         workers: int | None = None) -> OracleResult:
    """Minimum nu_p(wt(c(alpha))) over all alpha with a nonzero codeword.

    The witness is the first minimiser in lexicographic log order (zero
    first).  Returns INFINITE with ``degenerate=True`` for the zero code.
    """
    parts = _scan(G, limit, workers)
    best = None
    for v, idx, _ in parts:
        if v is not None and (best is None or (v, idx) < best):
            best = (v, idx)
    if best is None:
        return OracleResult(Valuation.infinite(), None, True)
    return OracleResult(Valuation.finite(best[0]), _index_to_alpha(G, best[1]), False)


@dataclass(frozen=True)
class WeightDistribution:
    counts: dict[int, int]
    multiplicity: int

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["weight", "count"])
        for weight in sorted(self.counts):
            w.writerow([weight, self.counts[weight]])
        return buf.getvalue()


def weight_distribution(G: GeneratorMatrix, *, limit: int = DEFAULT_ENUMERATION_LIMIT,
                        workers: int | None = None) -> WeightDistribution:
    """Codeword (not message) weight counts; every codeword is hit ``multiplicity`` times."""
    total: Counter = Counter()
    for _, _, h in _scan(G, limit, workers):
        total.update(h)
    mult = total[0]
    return WeightDistribution({w: c // mult for w, c in sorted(total.items())}, mult)
