import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tracediv.criterion import (
    count_admissible,
    criterion_valuation,
    default_cap,
    inner_sum_valuation,
    numbers_with_digit_sum,
    tuples_at_level,
)
from tracediv.errors import EnumerationLimitExceeded
from tracediv.field_tower import build_tower
from tracediv.numtheory import digit_sum
from tracediv.padic import Valuation
from tracediv.suites import random_generator_matrix
from tracediv.trace_code import GeneratorMatrix, bruteforce_valuation


def test_simplex():
    G = GeneratorMatrix.from_powers(build_tower(2, 1, 3), [list(range(7))])
    res = criterion_valuation(G)
    assert res.valuation == Valuation.finite(2)
    assert res.digit_term + res.inner_valuation.value + res.minus_e == 2
    assert res.argmin.total > 0
    js = res.to_json()
    assert js["valuation"] == {"kind": "finite", "value": "2"}


def test_enumeration_helpers():
    assert numbers_with_digit_sum(2, 3, 2) == (2, 4, 6)
    R = tuples_at_level(3, 2, 2, 3)
    assert all(digit_sum(a, 2) + digit_sum(b, 2) == 3 for a, b in R)
    assert len(R) == len({tuple(r) for r in R})
    assert default_cap(7, 2) == 3 and default_cap(8, 2) == 4 and default_cap(1, 3) == 1
    # count of r in [0, Q-1]^k with |r| a positive multiple of q-1
    assert count_admissible(4, 2, 1) == 3
    assert count_admissible(4, 4, 1) == 1


def test_zero_code():
    t = build_tower(2, 1, 2)
    res = criterion_valuation(GeneratorMatrix(t, np.full((1, 2), t.ZERO)))
    assert res.degenerate and res.valuation == Valuation.infinite()


def test_cap_reports_lower_bound():
    G = GeneratorMatrix.from_powers(build_tower(2, 1, 3), [list(range(7))])
    res = criterion_valuation(G, cap=1)
    assert res.valuation == Valuation.at_least(1)


def test_limit():
    G = GeneratorMatrix.from_powers(build_tower(2, 1, 4), [[0, 1, 2]] * 3)
    with pytest.raises(EnumerationLimitExceeded):
        criterion_valuation(G, limit=10)


def test_inner_sum_zero_tuple():
    t = build_tower(3, 1, 1)
    G = GeneratorMatrix.from_powers(t, [[0, 1, None]])
    # r = 0 counts every column, zero entries included through 0^0 = 1
    assert inner_sum_valuation(G, [0], 5) == Valuation.finite(1)


@settings(max_examples=80)
@given(st.integers(0, 2**32 - 1))
def test_matches_bruteforce(seed):
    G = random_generator_matrix(np.random.default_rng(seed), max_n=12, max_messages=1024)
    assert criterion_valuation(G).valuation == bruteforce_valuation(G).valuation


@settings(max_examples=40)
@given(st.integers(0, 2**32 - 1), st.data())
def test_equivalence_invariance(seed, data):
    G = random_generator_matrix(np.random.default_rng(seed), max_n=10, max_messages=512)
    t = G.tower
    base = criterion_valuation(G).valuation
    perm = data.draw(st.permutations(range(G.n)))
    assert criterion_valuation(G.permute_columns(perm)).valuation == base
    i = data.draw(st.integers(0, G.k - 1))
    c = data.draw(st.integers(0, t.Q - 2))
    assert criterion_valuation(G.scale_row(i, c)).valuation == base
    # column scaling by an F_q^* element keeps the weights
    j = data.draw(st.integers(0, G.n - 1))
    s = data.draw(st.integers(0, t.q - 2)) * ((t.Q - 1) // (t.q - 1))
    assert criterion_valuation(G.scale_column(j, s)).valuation == base
