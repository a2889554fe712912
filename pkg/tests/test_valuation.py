import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paritysi.errors import DomainError
from paritysi.valuation import (
    Ordering,
    Valuation,
    ValuationTable,
    compare_rows,
    maxdiff,
    unit_val,
    val_add,
    val_compare,
)

D = (1, 2, 4)


def V(**kw):
    return Valuation.of(D, {int(k[1:]): c for k, c in kw.items()})


def key(a):
    """Independent oracle: the order is lexicographic on signed counts, highest priority first."""
    if a.is_top:
        return (1,)
    signed = [c if p % 2 == 0 else -c for p, c in zip(a.domain, a.counts)]
    return (0, *reversed(signed))


domains = st.lists(st.integers(0, 8), min_size=1, max_size=5, unique=True).map(lambda d: tuple(sorted(d)))


@st.composite
def valuations(draw, domain=None, allow_top=True):
    domain = domain if domain is not None else draw(domains)
    if allow_top and draw(st.integers(0, 9)) == 0:
        return Valuation.top(domain)
    counts = draw(st.lists(st.integers(-4, 4), min_size=len(domain), max_size=len(domain)))
    return Valuation(domain, tuple(counts))


@st.composite
def triples(draw, allow_top=True):
    d = draw(domains)
    return tuple(draw(valuations(d, allow_top)) for _ in range(3))


class TestCompare:
    def test_finite_below_top(self):
        assert val_compare(V(p2=5), Valuation.top(D)) is Ordering.LESS
        assert val_compare(Valuation.top(D), V()) is Ordering.GREATER
        assert val_compare(Valuation.top(D), Valuation.top(D)) is Ordering.EQUAL

    def test_even_maxdiff(self):
        a, b = V(p2=1, p4=0), V(p2=0, p4=1)
        assert maxdiff(a, b) == 4
        assert val_compare(a, b) is Ordering.LESS

    def test_odd_maxdiff(self):
        a, b = V(p1=2, p2=1), V(p1=0, p2=1)
        assert maxdiff(a, b) == 1
        assert val_compare(a, b) is Ordering.LESS

    def test_equal(self):
        assert maxdiff(V(p1=3), V(p1=3)) is None
        assert val_compare(V(p1=3), V(p1=3)) is Ordering.EQUAL

    def test_operators(self):
        assert V(p2=1) > V() and V() < V(p2=1) and V() <= V() and V(p1=1) < V()

    def test_domain_mismatch(self):
        with pytest.raises(DomainError):
            val_compare(V(), Valuation.zero((1, 2)))


class TestAdd:
    def test_pointwise(self):
        assert val_add(V(p1=1), V(p1=2, p4=1)) == V(p1=3, p4=1)

    def test_zero_identity(self):
        assert V(p2=3) + Valuation.zero(D) == V(p2=3)

    def test_top_absorbs(self):
        assert (V(p2=3) + Valuation.top(D)).is_top
        assert (Valuation.top(D) + Valuation.top(D)).is_top


class TestUnit:
    def test_positive(self):
        assert unit_val(D, 2).as_dict() == {1: 0, 2: 1, 4: 0}

    def test_negative(self):
        assert unit_val(D, 2, -1).as_dict() == {1: 0, 2: -1, 4: 0}

    def test_outside_domain(self):
        with pytest.raises(DomainError):
            unit_val(D, 3)

    def test_str(self):
        assert str(unit_val(D, 4)) == "{1:0, 2:0, 4:1}"
        assert str(Valuation.top(D)) == "TOP"


@settings(max_examples=300)
@given(triples())
def test_total_preorder_matches_oracle(t):
    a, b, c = t
    assert int(val_compare(a, b)) == int(np.sign((key(a) > key(b)) - (key(a) < key(b))))
    assert val_compare(a, b) == -val_compare(b, a)
    if a <= b and b <= c:
        assert a <= c


@settings(max_examples=300)
@given(triples())
def test_sum_associative_commutative(t):
    a, b, c = t
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)


@settings(max_examples=300)
@given(triples(allow_top=False))
def test_shift_invariance(t):
    a, b, c = t
    assert val_compare(a + c, b + c) == val_compare(a, b)


@settings(max_examples=100)
@given(st.data())
def test_compare_rows_matches_scalar(data):
    d = data.draw(domains)
    rows = data.draw(st.integers(1, 12))
    a = [data.draw(valuations(d)) for _ in range(rows)]
    b = [data.draw(valuations(d)) for _ in range(rows)]

    def table(vs):
        counts = np.array([v.counts or (0,) * len(d) for v in vs], dtype=np.int64)
        return ValuationTable(d, counts, np.array([v.is_top for v in vs]))

    got = compare_rows(d, table(a), table(b))
    assert got.tolist() == [int(val_compare(x, y)) for x, y in zip(a, b)]


def test_table_equality_ignores_top_rows():
    t1 = ValuationTable(D, np.array([[1, 0, 0], [9, 9, 9]]), np.array([False, True]))
    t2 = ValuationTable(D, np.array([[1, 0, 0], [0, 0, 0]]), np.array([False, True]))
    assert t1 == t2
    assert t1[1].is_top and t1[0] == V(p1=1)
