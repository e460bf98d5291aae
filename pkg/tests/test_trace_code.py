import numpy as np
import pytest

from tracediv.errors import DimensionMismatch, EnumerationLimitExceeded
from tracediv.field_tower import build_tower
from tracediv.padic import Valuation
from tracediv.trace_code import (
    GeneratorMatrix,
    bruteforce_valuation,
    trace_codeword,
    weight_distribution,
)


def simplex():
    t = build_tower(2, 1, 3)
    return GeneratorMatrix.from_powers(t, [list(range(7))])


def test_simplex_weights():
    G = simplex()
    wd = weight_distribution(G)
    assert wd.counts == {0: 1, 4: 7}
    assert wd.to_csv().splitlines() == ["weight,count", "0,1", "4,7"]
    res = bruteforce_valuation(G)
    assert res.valuation == Valuation.finite(2)
    assert not res.degenerate


def test_small_code_over_f4():
    G = GeneratorMatrix.from_powers(build_tower(2, 1, 2), [[0, 1, 2]])
    assert weight_distribution(G).counts == {0: 1, 2: 3}
    assert bruteforce_valuation(G).valuation == Valuation.finite(1)


def test_codeword_is_trace():
    t = build_tower(3, 1, 2)
    G = GeneratorMatrix.from_powers(t, [[0, 3, None], [5, 1, 2]])
    cw = trace_codeword(G, [2, t.ZERO])
    # coordinate j = Tr(a^2 g_0j), zero entry gives zero
    assert cw.coords[2] == t.ZERO
    assert cw.coords[0] == t.trace_qm_q[t.mul(2, 0)]
    assert cw.weight == sum(c != t.ZERO for c in cw.coords)
    with pytest.raises(DimensionMismatch):
        trace_codeword(G, [1])


def test_zero_code_is_degenerate():
    t = build_tower(2, 1, 2)
    G = GeneratorMatrix(t, np.full((2, 3), t.ZERO))
    res = bruteforce_valuation(G)
    assert res.degenerate and res.valuation == Valuation.infinite() and res.witness is None


def test_errors():
    t = build_tower(2, 1, 2)
    with pytest.raises(DimensionMismatch):
        GeneratorMatrix(t, np.zeros((0, 3), dtype=np.int64))
    with pytest.raises(ValueError):
        GeneratorMatrix(t, np.array([[4]]))
    G = GeneratorMatrix.from_powers(t, [[0]] * 6)
    with pytest.raises(EnumerationLimitExceeded):
        bruteforce_valuation(G, limit=100)


def test_multiplicity_for_repeated_rows():
    t = build_tower(2, 1, 2)
    G = GeneratorMatrix.from_powers(t, [[0, 1, 2], [0, 1, 2]])
    wd = weight_distribution(G)
    assert wd.counts == {0: 1, 2: 3} and wd.multiplicity == 4
