"""Point counts of f(x) = y^q - y over F_{q^m} and lower bounds on their p-adic valuation.

Counting uses N(f = y^q - y) = q * #{x : Tr_{q^m/q}(f(x)) = 0}, so only the
x-space is enumerated.  Polynomials are stored as functions: every exponent
is reduced with x^Q = x before degrees are read off.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .criterion import CriterionResult
from .errors import DegreeZero, EnumerationLimitExceeded, Infeasible, NotFound
from .field_tower import FieldTower
from .numtheory import ceil_div, digit_sum, int_valuation
from .padic import ExponentTuple, Valuation

DEFAULT_COUNT_LIMIT = 2**22
DEFAULT_SEARCH_BUDGET = 20000
_ZERO_WEIGHT_VAL = np.iinfo(np.int64).max


def reduce_exponent(t: int, Q: int) -> int:
    if t < 0:
        raise ValueError("exponents must be non-negative")
    return t if t < Q else (t - 1) % (Q - 1) + 1


@dataclass(frozen=True)
class Polynomial:
    """f in F_{q^m}[x_1..x_k] as a map from reduced exponent tuples to nonzero reps."""

    tower: FieldTower
    k: int
    monomials: Mapping[tuple[int, ...], int]
    nominal_degree: int | None = None

    @classmethod
    def from_terms(cls, tower: FieldTower, k: int, terms: Iterable[tuple[int, Sequence[int]]]) -> Polynomial:
        """Build from (coefficient rep, exponent tuple) pairs, merging like terms."""
        acc: dict[tuple[int, ...], int] = {}
        nominal = None
        for coef, exps in terms:
            exps = tuple(int(t) for t in exps)
            if len(exps) != k:
                raise ValueError(f"exponent tuple {exps} does not have {k} entries")
            coef = int(coef)
            if coef == tower.ZERO:
                continue
            nominal = max(nominal or 0, sum(exps))
            key = tuple(reduce_exponent(t, tower.Q) for t in exps)
            acc[key] = tower.add(acc.get(key, tower.ZERO), coef)
        mons = {t: c for t, c in sorted(acc.items()) if c != tower.ZERO}
        return cls(tower, k, mons, nominal)

    @property
    def is_zero(self) -> bool:
        return not self.monomials

    @property
    def degree(self) -> int | None:
        return max((sum(t) for t in self.monomials), default=None)

    @property
    def degree_set(self) -> set[int]:
        return {sum(t) for t in self.monomials}

    @property
    def is_homogeneous(self) -> bool:
        return len(self.degree_set) == 1 and self.degree >= 1

    @property
    def reduction_changed_degree(self) -> bool:
        return self.nominal_degree is not None and self.nominal_degree != self.degree

    def values(self) -> np.ndarray:
        """f at every point of F_{q^m}^k as reps (points in row-major rep order)."""
        t = self.tower
        grids = _point_grid(t, self.k)
        acc = np.zeros(grids.shape[0], dtype=np.int64)
        for exps, coef in self.monomials.items():
            term = np.full(grids.shape[0], coef, dtype=np.int64)
            for i, ti in enumerate(exps):
                term = t.vmul(term, t.vpow(grids[:, i], ti))
            acc = t.vec_add(acc, t.vec_of[term])
        return t.log_of[acc]

    def to_terms(self) -> list[tuple[str, list[int]]]:
        return [(self.tower.rep_str(c), list(e)) for e, c in self.monomials.items()]

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for exps, c in self.monomials.items():
            mono = "*".join(f"x{i + 1}^{t}" if t > 1 else f"x{i + 1}" for i, t in enumerate(exps) if t)
            coef = self.tower.rep_str(c)
            parts.append(coef if not mono else (mono if c == self.tower.ONE else f"{coef}*{mono}"))
        return " + ".join(parts)


def _point_grid(tower: FieldTower, k: int) -> np.ndarray:
    reps = np.arange(tower.Q, dtype=np.int64)
    return np.stack([g.ravel() for g in np.meshgrid(*([reps] * k), indexing="ij")], axis=1) \
        if k else np.zeros((1, 0), dtype=np.int64)


@dataclass(frozen=True)
class SolutionCount:
    N: int
    valuation: Valuation

    def __iter__(self):
        return iter((self.N, self.valuation))


def count_solutions(f: Polynomial, *, limit: int = DEFAULT_COUNT_LIMIT) -> SolutionCount:
    """N(f = y^q - y) = q * #{x in F_{q^m}^k : Tr(f(x)) = 0} and its p-adic valuation."""
    t = f.tower
    if t.Q ** f.k > limit:
        raise EnumerationLimitExceeded(f"Q^k = {t.Q ** f.k} exceeds enumeration limit {limit}")
    tr = t.trace_qm_q[f.values()]
    N = t.q * int((tr == t.ZERO).sum())
    v = int_valuation(N, t.p)
    return SolutionCount(N, Valuation.infinite() if v is None else Valuation.finite(v))


# -- the degree-set program ----------------------------------------------------

def monomials_with_degrees(tower: FieldTower, k: int, D: Iterable[int]) -> list[tuple[int, ...]]:
    """T_D = {t in [0, Q-1]^k : |t| in D}, lexicographic."""
    D = set(D)
    return [t for t in itertools.product(range(tower.Q), repeat=k) if sum(t) in D]


@dataclass(frozen=True)
class DegreeSetProgramInstance:
    tower: FieldTower
    k: int
    D: frozenset[int]

    def __post_init__(self):
        D = frozenset(int(d) for d in self.D)
        object.__setattr__(self, "D", D)
        if not D or D == {0}:
            raise ValueError("the degree set must contain a positive degree")
        if any(d < 0 or d > self.k * (self.tower.Q - 1) for d in D):
            raise ValueError(f"degrees must lie in [0, k(Q-1)] = [0, {self.k * (self.tower.Q - 1)}]")

    @property
    def tuples(self) -> list[tuple[int, ...]]:
        return monomials_with_degrees(self.tower, self.k, self.D)


def program_feasible(tower: FieldTower, tuples: Sequence[Sequence[int]], r: Sequence[int]) -> bool:
    """Constraint check: |r| = 0 mod q-1 and every sum_t r_t t_i a positive multiple of Q-1."""
    Q, q = tower.Q, tower.q
    if len(r) != len(tuples) or any(not 0 <= x <= Q - 1 for x in r):
        return False
    if sum(r) % (q - 1):
        return False
    k = len(tuples[0]) if tuples else 0
    for i in range(k):
        u = sum(ri * t[i] for ri, t in zip(r, tuples))
        if u <= 0 or u % (Q - 1):
            return False
    return True


def theorem51_program(inst: DegreeSetProgramInstance, *, limit: int = 2**26) -> CriterionResult:
    """Exact minimum of sum_t S_p(r_t)/(p-1) over the feasible r.

    Solved as a shortest path over the states (|r| mod q-1, u_1..u_k mod Q-1,
    which u_i are already positive); the objective is separable in r_t so
    this is exact.  The value bounds nu_p(N(f = y^q - y)) directly.
    """
    tower, k = inst.tower, inst.k
    p, q, Q = tower.p, tower.q, tower.Q
    T = inst.tuples
    if not T:
        raise Infeasible("no monomial has a degree in D")
    mq, mQ = q - 1, Q - 1
    # state = ((s * mQ^k + u-code) << k) | mask
    n_u = mQ**k
    n_states = mq * n_u << k
    if n_states * len(T) * Q > limit:
        raise EnumerationLimitExceeded(f"program state space {n_states} x {len(T)} x {Q} exceeds {limit}")
    states = np.arange(n_states, dtype=np.int64)
    mask = states & ((1 << k) - 1)
    rest = states >> k
    s_part = rest // n_u
    u_code = rest % n_u
    u_digits = [(u_code // mQ**i) % mQ for i in range(k)]
    cost_r = np.array([digit_sum(r, p) for r in range(Q)], dtype=np.int64)
    INF = np.iinfo(np.int64).max // 4

    cost = np.full(n_states, INF, dtype=np.int64)
    cost[0] = 0
    choices = []
    for t in T:
        new = np.full(n_states, INF, dtype=np.int64)
        arg = np.full(n_states, -1, dtype=np.int64)
        src = np.full(n_states, -1, dtype=np.int64)
        live = cost < INF
        for r in range(Q):
            s2 = (s_part + r) % mq
            ucode2 = np.zeros(n_states, dtype=np.int64)
            mask2 = mask.copy()
            for i in range(k):
                ucode2 += ((u_digits[i] + r * t[i]) % mQ) * mQ**i
                if r > 0 and t[i] > 0:
                    mask2 |= 1 << i
            dest = ((s2 * n_u + ucode2) << k) | mask2
            cand = np.where(live, cost + cost_r[r], INF)
            # strict improvement keeps the smallest r per destination
            order = np.argsort(cand, kind="stable")
            d_sorted, c_sorted = dest[order], cand[order]
            first = np.unique(d_sorted, return_index=True)[1]
            dd, cc, ss = d_sorted[first], c_sorted[first], order[first]
            better = cc < new[dd]
            new[dd[better]] = cc[better]
            arg[dd[better]] = r
            src[dd[better]] = ss[better]
        choices.append((arg, src))
        cost = new
    goal = ((1 << k) - 1)  # s = 0, all u = 0, every coordinate positive
    if cost[goal] >= INF:
        raise Infeasible("no feasible exponent assignment")
    r_vec = []
    state = goal
    for arg, src in reversed(choices):
        r_vec.append(int(arg[state]))
        state = int(src[state])
    r_vec.reverse()
    assert program_feasible(tower, T, r_vec)
    value = Fraction(int(cost[goal]), p - 1)
    return CriterionResult(Valuation.finite(value), ExponentTuple(tuple(r_vec), p), value,
                           None, 0, len(T), 0, False, None,
                           [f"variables indexed by T_D ({len(T)} tuples, lexicographic)"])


@dataclass(frozen=True)
class FeasibleAssignment:
    tuples: tuple[tuple[int, ...], ...]
    r: ExponentTuple
    value: int


def prop52_feasible(d: int, k: int, tower: FieldTower) -> FeasibleAssignment:
    """The explicit feasible point for D = {d} with value em * ceil(k/d)."""
    Q = tower.Q
    if not 0 < d <= k * (Q - 1):
        raise ValueError(f"need 0 < d <= k(Q-1) = {k * (Q - 1)}")
    if d >= k:
        t = [1] * k
        extra = d - k
        for i in range(k):
            add = min(extra, Q - 2)
            t[i] += add
            extra -= add
        chosen = [tuple(t)]
    else:
        s = ceil_div(k, d)
        chosen = []
        for j in range(s):
            start = j * d
            t = [0] * k
            for i in range(d):
                t[(start + i) % k] = 1
            chosen.append(tuple(t))
    T = monomials_with_degrees(tower, k, {d})
    index = {t: i for i, t in enumerate(T)}
    r = [0] * len(T)
    for t in chosen:
        r[index[t]] = Q - 1
    if not program_feasible(tower, T, r):  # pragma: no cover - construction is always feasible
        raise AssertionError("constructed assignment violates the program constraints")
    value = sum(digit_sum(x, tower.p) for x in r) // (tower.p - 1)
    assert value == tower.e * tower.m * ceil_div(k, d)
    return FeasibleAssignment(tuple(chosen), ExponentTuple(tuple(r), tower.p), value)


# -- closed-form bounds -------------------------------------------------------

def _ceil(x: Fraction) -> int:
    return math.ceil(x)


def homogeneous_gcd(d: int, tower: FieldTower) -> int:
    return math.gcd(d, (tower.Q - 1) // (tower.q - 1))


def homogeneous_bound(d: int, k: int, tower: FieldTower) -> int:
    """ceil((em/g) * ceil(g k / d)) with g = gcd(d, (Q-1)/(q-1)); tight when g = 1."""
    if d < 1:
        raise DegreeZero("degree must be at least 1")
    g = homogeneous_gcd(d, tower)
    em = tower.e * tower.m
    return _ceil(Fraction(em, g) * ceil_div(g * k, d))


def general_bound_55(d: int, k: int, tower: FieldTower) -> int:
    if d < 1:
        raise DegreeZero("degree must be at least 1")
    e, m, q, Q = tower.e, tower.m, tower.q, tower.Q
    return _ceil(Fraction(e * m * (q - 1), Q - 1) * ceil_div(k * (Q - 1), d * (q - 1)))


def digit_knapsack(d: int, k: int, tower: FieldTower, base: str = "p") -> int:
    """max sum_i S_b(t_i) over t in [0, Q-1]^k with |t| <= d, b = q or p.

    Greedy by place value is optimal: every digit unit is worth 1 and costs
    b^j, and each place offers k(b-1) units independently of the others.
    """
    if base not in ("p", "q"):
        raise ValueError("base must be 'p' or 'q'")
    b = tower.p if base == "p" else tower.q
    width = tower.e * tower.m if base == "p" else tower.m
    budget = max(0, int(d))
    total = 0
    for j in range(width):
        units = min(k * (b - 1), budget // b**j)
        total += units
        budget -= units * b**j
    return total


def digit_knapsack_exhaustive(d: int, k: int, tower: FieldTower, base: str = "p") -> int:
    b = tower.p if base == "p" else tower.q
    return max(sum(digit_sum(x, b) for x in t)
               for t in itertools.product(range(tower.Q), repeat=k) if sum(t) <= d)


def bounds_57_58(d: int, k: int, tower: FieldTower) -> tuple[int, int]:
    if d < 1:
        raise DegreeZero("degree must be at least 1")
    e, m = tower.e, tower.m
    Wq = digit_knapsack(d, k, tower, "q")
    Wp = digit_knapsack(d, k, tower, "p")
    return e * ceil_div(m * k, Wq), ceil_div(e * m * k, Wp)


def ax_bound(d: int, k: int, tower: FieldTower) -> int:
    """nu_p lower bound for N(f = 0) over F_q (m = 1): e(ceil(k/d) - 1)."""
    if d < 1:
        raise DegreeZero("degree must be at least 1")
    return tower.e * (ceil_div(k, d) - 1)


@dataclass
class BoundReport:
    d: int
    k: int
    tower_desc: dict
    thm51: Fraction | None
    thm53: int | None
    prop52_upper: int
    thm55: int
    thm57: int
    thm58: int
    homogeneous: bool
    g: int
    measured: Valuation | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def lower_bounds(self) -> dict[str, int | Fraction]:
        out = {"thm55": self.thm55, "thm57": self.thm57, "thm58": self.thm58}
        if self.homogeneous and self.thm53 is not None:
            out["thm53"] = self.thm53
        return out

    @property
    def best_lower(self) -> int | Fraction:
        return max(self.lower_bounds.values())

    def violations(self) -> list[str]:
        if self.measured is None or not self.measured.is_finite:
            return []
        return [name for name, b in self.lower_bounds.items() if self.measured.value < b]

    def tightness(self) -> dict[str, bool]:
        if self.measured is None or not self.measured.is_finite:
            return {}
        return {name: self.measured.value == b for name, b in self.lower_bounds.items()}

    def to_json(self) -> dict:
        return {
            "d": self.d, "k": self.k, "tower": self.tower_desc, "homogeneous": self.homogeneous,
            "g": self.g,
            "bounds": {"thm51": None if self.thm51 is None else str(self.thm51),
                       "thm53": self.thm53, "prop52_upper": self.prop52_upper,
                       "thm55": self.thm55, "thm57": self.thm57, "thm58": self.thm58},
            "measured": None if self.measured is None else self.measured.to_json(),
            "violations": self.violations(),
            "tight": self.tightness(),
            "notes": list(self.notes),
        }


def bound_report(d: int, k: int, tower: FieldTower, *, homogeneous: bool = True,
                 measured: Valuation | None = None, with_program: bool = True) -> BoundReport:
    b57, b58 = bounds_57_58(d, k, tower)
    thm51 = None
    notes = []
    if with_program:
        D = {d} if homogeneous else set(range(0, d + 1))
        try:
            thm51 = theorem51_program(DegreeSetProgramInstance(tower, k, frozenset(D))).valuation.value
        except EnumerationLimitExceeded as exc:
            notes.append(f"degree-set program skipped: {exc}")
    return BoundReport(d, k, tower.describe(), thm51, homogeneous_bound(d, k, tower),
                       tower.e * tower.m * ceil_div(k, d), general_bound_55(d, k, tower), b57, b58,
                       homogeneous, homogeneous_gcd(d, tower), measured, notes)


def polynomial_report(f: Polynomial, *, count: bool = True, with_program: bool = True) -> BoundReport:
    if f.is_zero or f.degree == 0:
        raise DegreeZero("bounds need a polynomial of degree at least 1")
    measured = count_solutions(f).valuation if count else None
    rep = bound_report(f.degree, f.k, f.tower, homogeneous=f.is_homogeneous, measured=measured,
                       with_program=with_program)
    if f.reduction_changed_degree:
        rep.notes.append(f"exponent reduction lowered the degree from {f.nominal_degree} to {f.degree}")
    return rep


# -- exhaustive polynomial spaces ----------------------------------------------

@dataclass
class SpaceMeasurement:
    """Per-polynomial measurements over a full coefficient space.

    Polynomial j has coefficient digits in mixed radix Q (first monomial most
    significant); digit 0 is the zero coefficient, digit c >= 1 the rep c-1.
    ``valuation`` holds nu_p(N) with a large sentinel for N = 0.
    """

    tower: FieldTower
    k: int
    monomials: list[tuple[int, ...]]
    valuation: np.ndarray
    deg_max: np.ndarray
    deg_min: np.ndarray

    def polynomial(self, index: int) -> Polynomial:
        Q = self.tower.Q
        digits = []
        for _ in self.monomials:
            index, dgt = divmod(index, Q)
            digits.append(dgt)
        digits.reverse()
        return Polynomial.from_terms(self.tower, self.k,
                                     [(dgt - 1, t) for dgt, t in zip(digits, self.monomials) if dgt])


def measure_space(tower: FieldTower, k: int, monomials: Sequence[tuple[int, ...]], *,
                  limit: int = DEFAULT_COUNT_LIMIT) -> SpaceMeasurement:
    """nu_p(N(f = y^q - y)) for every f supported on ``monomials``."""
    Q, p = tower.Q, tower.p
    M = len(monomials)
    total = Q**M
    if total * Q**k > limit * 64:
        raise EnumerationLimitExceeded(f"{total} polynomials on {Q**k} points exceeds the limit")
    grid = _point_grid(tower, k)
    coef_reps = np.concatenate([[tower.ZERO], np.arange(Q - 1)])
    # tables[j][c] = vec code of coef_c * x^t_j at every point
    tables = []
    for t in monomials:
        mono = np.full(grid.shape[0], tower.ONE, dtype=np.int64)
        for i, ti in enumerate(t):
            mono = tower.vmul(mono, tower.vpow(grid[:, i], ti))
        tables.append(tower.vec_of[tower.vmul(coef_reps[:, None], mono[None, :])])
    degs = np.array([sum(t) for t in monomials], dtype=np.int64)

    low_n = 0
    while low_n < M and Q ** (low_n + 1) <= 1 << 14:
        low_n += 1
    high_n = M - low_n
    low_vec = np.zeros((1, grid.shape[0]), dtype=np.int64)
    low_max = np.full(1, -1, dtype=np.int64)
    low_min = np.full(1, 1 << 30, dtype=np.int64)
    for j in range(high_n, M):
        low_vec = tower.vec_add(low_vec[:, None, :], tables[j][None, :, :]).reshape(-1, grid.shape[0])
        present = np.arange(Q) > 0
        low_max = np.where(present[None, :], np.maximum(low_max[:, None], degs[j]), low_max[:, None]).ravel()
        low_min = np.where(present[None, :], np.minimum(low_min[:, None], degs[j]), low_min[:, None]).ravel()

    vals, dmax, dmin = [], [], []
    for digits in itertools.product(range(Q), repeat=high_n):
        hv = np.zeros(grid.shape[0], dtype=np.int64)
        hmax, hmin = -1, 1 << 30
        for j, dgt in enumerate(digits):
            if dgt:
                hv = tower.vec_add(hv, tables[j][dgt])
                hmax, hmin = max(hmax, degs[j]), min(hmin, degs[j])
        words = tower.vec_add(low_vec, hv[None, :])
        tr = tower.trace_qm_q[tower.log_of[words]]
        N = tower.q * (tr == tower.ZERO).sum(axis=1)
        v = np.zeros(len(N), dtype=np.int64)
        cur = N.copy()
        live = cur > 0
        while True:
            div = live & (cur % p == 0)
            if not div.any():
                break
            v[div] += 1
            cur[div] //= p
        v[~live] = _ZERO_WEIGHT_VAL
        vals.append(v)
        dmax.append(np.maximum(low_max, hmax))
        dmin.append(np.minimum(low_min, hmin))
    return SpaceMeasurement(tower, k, list(monomials), np.concatenate(vals),
                            np.concatenate(dmax), np.concatenate(dmin))


# -- extremal search ---------------------------------------------------------

@dataclass(frozen=True)
class ExtremalResult:
    polynomial: Polynomial
    measured: Valuation
    target: int
    candidates: int
    seed: int


def _candidates(T: list[tuple[int, ...]], tower: FieldTower, rng: random.Random) -> Iterator[list[tuple[int, tuple]]]:
    coefs = list(range(tower.Q - 1))
    for size in (1, 2, 3):
        for support in itertools.combinations(T, size):
            for cs in itertools.product(coefs, repeat=size):
                yield list(zip(cs, support))
    while True:
        size = rng.randint(1, len(T))
        support = rng.sample(T, size)
        yield [(rng.choice(coefs), t) for t in support]


def search_extremal(d: int, k: int, tower: FieldTower, budget: int = DEFAULT_SEARCH_BUDGET,
                    *, seed: int = 0, target: int | None = None) -> ExtremalResult:
    """First homogeneous degree-d f found with nu_p(N) equal to the homogeneous bound.

    Order: single monomials, then two- and three-term supports (all
    coefficient choices), then seeded random polynomials.
    """
    if target is None:
        target = homogeneous_bound(d, k, tower)
    T = monomials_with_degrees(tower, k, {d})
    if not T:
        raise ValueError(f"no monomial of degree {d} in {k} variables with exponents < {tower.Q}")
    rng = random.Random(seed)
    best = None
    for n, terms in enumerate(_candidates(T, tower, rng), start=1):
        if n > budget:
            break
        f = Polynomial.from_terms(tower, k, terms)
        if not f.is_homogeneous or f.degree != d:
            continue
        v = count_solutions(f).valuation
        if v.is_finite and (best is None or v.value < best[1].value):
            best = (f, v)
        if v.is_finite and v.value == target:
            return ExtremalResult(f, v, target, n, seed)
    raise NotFound(f"no witness reaching {target} within {budget} candidates", budget=budget,
                   best=None if best is None else (str(best[0]), best[1].to_json()))
