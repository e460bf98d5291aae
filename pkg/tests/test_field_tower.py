import numpy as np
import pytest
from hypothesis import given, strategies as st

from tracediv.errors import NonPrime, NonPrimitiveRoot, ReduciblePoly, TableLimitExceeded
from tracediv.field_tower import _pmod, _pmul, build_tower, default_poly, is_irreducible

TOWERS = [(2, 1, 1), (2, 1, 3), (2, 2, 2), (3, 1, 2), (3, 2, 1), (5, 1, 2), (7, 1, 1), (2, 4, 1)]


def test_f8_tables_frozen():
    t = build_tower(2, 1, 3)
    assert list(t.poly) == [1, 1, 0, 1]
    assert list(t.vec_of) == [1, 2, 4, 3, 6, 7, 5, 0]
    # alpha^3 + alpha = 1
    assert t.add(3, 1) == t.ONE


def test_default_polys():
    assert default_poly(3, 1) == (1, 1)
    assert default_poly(5, 1) == (2, 1)
    assert default_poly(2, 2) == (1, 1, 1)
    assert default_poly(3, 2) == (2, 1, 1)


def test_errors():
    with pytest.raises(NonPrime):
        build_tower(4, 1, 1)
    with pytest.raises(ReduciblePoly):
        build_tower(2, 1, 2, (1, 0, 1))
    # x^4 + x^3 + x^2 + x + 1 is irreducible over F_2 but x has order 5
    with pytest.raises(NonPrimitiveRoot):
        build_tower(2, 1, 4, (1, 1, 1, 1, 1))
    t = build_tower(2, 1, 4, (1, 1, 1, 1, 1), primitive_search=True)
    assert len(set(t.vec_of[:-1].tolist())) == 15
    with pytest.raises(TableLimitExceeded):
        build_tower(2, 1, 12, table_limit=2**10)


def test_subfields_and_traces():
    t = build_tower(2, 2, 2)
    q_reps = t.subfield_reps("q")
    assert len(q_reps) == 4 and q_reps[0] == t.ZERO
    assert all(t.in_subfield(int(t.trace(a, "qm_q")), "q") for a in range(t.Q))
    assert all(t.in_subfield(int(t.trace(a, "qm_p")), "p") for a in range(t.Q))
    # Tr_{Q/p} = Tr_{q/p} o Tr_{Q/q}
    for a in range(t.Q):
        assert t.trace(int(t.trace(a, "qm_q")), "q_p") == t.trace(a, "qm_p")


def test_irreducibility_against_factor_search():
    # brute force: no factor of degree <= deg/2
    p = 3
    for code in range(3**3):
        poly = [(code // 3**i) % 3 for i in range(3)] + [1]
        has_root = any(sum(c * x**i for i, c in enumerate(poly)) % p == 0 for x in range(p))
        assert is_irreducible(poly, p) == (not has_root)


elements = st.sampled_from(TOWERS).flatmap(
    lambda pem: st.tuples(st.just(pem), *[st.integers(0, pem[0] ** (pem[1] * pem[2]) - 1)] * 3))


@given(elements)
def test_field_axioms(args):
    (p, e, m), a, b, c = args
    t = build_tower(p, e, m)
    assert t.add(a, b) == t.add(b, a)
    assert t.mul(a, t.add(b, c)) == t.add(t.mul(a, b), t.mul(a, c))
    assert t.add(a, t.neg(a)) == t.ZERO
    if a != t.ZERO:
        assert t.mul(a, t.inv(a)) == t.ONE
    # frobenius is additive
    assert t.pow(t.add(a, b), p) == t.add(t.pow(a, p), t.pow(b, p))


@given(elements)
def test_mul_matches_polynomial_arithmetic(args):
    (p, e, m), a, b, _ = args
    t = build_tower(p, e, m)
    prod = _pmod(_pmul(t.coeffs(a), t.coeffs(b), p), list(t.poly), p)
    assert t.from_coeffs(prod) == t.mul(a, b)


@given(elements)
def test_trace_linear_and_frobenius_invariant(args):
    (p, e, m), a, b, _ = args
    t = build_tower(p, e, m)
    for level in ("qm_q", "qm_p"):
        assert t.trace(t.add(a, b), level) == t.add(t.trace(a, level), t.trace(b, level))
    assert t.trace(t.pow(a, t.q), "qm_q") == t.trace(a, "qm_q")


def test_vectorised_ops_agree_with_scalar():
    t = build_tower(3, 1, 2)
    a = np.arange(t.Q)
    b = (a * 5 + 1) % t.Q
    assert [t.mul(int(x), int(y)) for x, y in zip(a, b)] == t.vmul(a, b).tolist()
    assert [t.add(int(x), int(y)) for x, y in zip(a, b)] == t.vadd(a, b).tolist()
    assert t.vpow(np.array([t.ZERO]), 0)[0] == t.ONE
