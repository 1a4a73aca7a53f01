import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nilzeta.laurent import (
    ONE,
    ZERO,
    FactoredRat,
    LaurentPoly,
    P,
    T,
    fr_add,
    fr_equal,
    fr_invert_vars,
    fr_mul,
    fr_series,
    fr_sum,
    lp_add,
    lp_invert_vars,
    lp_mul,
)

exps = st.integers(min_value=-6, max_value=6)
polys = st.dictionaries(st.tuples(exps, exps), st.integers(-20, 20), max_size=6).map(LaurentPoly)
factors = st.lists(st.tuples(st.integers(0, 4), st.integers(1, 3), st.integers(1, 2)), max_size=3)
nonneg_polys = st.dictionaries(
    st.tuples(st.integers(-3, 3), st.integers(0, 4)), st.integers(-9, 9), max_size=5
).map(LaurentPoly)
rats = st.builds(FactoredRat, nonneg_polys, factors)


def geo(a, b, m=1):
    return FactoredRat.geometric(a, b, m)


W2 = FactoredRat(ONE, [(0, 1, 1), (1, 1, 1), (2, 3, 1)])


class TestLaurentPoly:
    def test_cancellation(self):
        assert lp_add(ONE + P * T, -(P * T)) == ONE

    def test_zero_identity(self):
        x = P + 3 * T
        assert lp_add(ZERO, x) == x
        assert not ZERO

    def test_negative_exponents(self):
        inv = LaurentPoly.monomial(-1, 0)
        x = ONE + inv
        assert lp_add(x, ONE + P) == 2 + inv + P
        assert str(lp_add(x, ONE + P)) == "P^(-1) + 2 + P"

    def test_products(self):
        assert lp_mul(ONE - T, ONE + T) == ONE - T * T
        assert lp_mul(P + T, ONE) == P + T
        assert lp_mul(ONE + LaurentPoly.monomial(-1, 1), P) == P + T

    def test_invert_vars(self):
        assert lp_invert_vars(ONE + P * T) == ONE + LaurentPoly.monomial(-1, -1)
        assert lp_invert_vars(LaurentPoly.const(5)) == LaurentPoly.const(5)

    def test_no_zero_terms_stored(self):
        x = LaurentPoly({(1, 1): 0, (0, 0): 2})
        assert x.terms == {(0, 0): 2}

    def test_exponent_overflow(self):
        with pytest.raises(OverflowError):
            LaurentPoly.monomial(2**40, 0)

    def test_evaluate(self):
        x = ONE + P * T + 2 * P * P
        assert x.evaluate(p=3, t=2) == 1 + 6 + 18
        assert x.evaluate(p=3) == {0: 19, 1: 3}

    @given(polys, polys, polys)
    @settings(max_examples=60, deadline=None)
    def test_ring_axioms(self, x, y, z):
        assert x + y == y + x
        assert x * y == y * x
        assert (x + y) + z == x + (y + z)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert x - x == ZERO

    @given(polys)
    @settings(max_examples=40, deadline=None)
    def test_invert_involution(self, x):
        assert x.invert_vars().invert_vars() == x


class TestFactoredRat:
    def test_mul_merges_denominators(self):
        prod = fr_mul(geo(0, 1), geo(1, 1))
        assert prod.den == FactoredRat(ONE, [(0, 1, 1), (1, 1, 1)]).den
        assert fr_mul(W2, FactoredRat(ONE)).den == W2.den

    def test_mul_equal_after_cancellation(self):
        x = fr_mul(FactoredRat(T, [(0, 1, 1)]), FactoredRat(ONE - T))
        assert fr_equal(x, FactoredRat(T))

    def test_add(self):
        assert fr_add(geo(0, 1), FactoredRat(-ONE, [(0, 1, 1)])).num.is_zero()
        s = fr_add(geo(0, 1), FactoredRat(T, [(0, 1, 1)]))
        assert s.num == ONE + T and len(s.den) == 1
        s = fr_add(geo(0, 1), geo(1, 1))
        assert fr_equal(s, FactoredRat(2 - T - P * T, [(0, 1, 1), (1, 1, 1)]))

    def test_equal(self):
        assert fr_equal(FactoredRat(T, [(0, 1, 1)]), FactoredRat(T - T * T, [(0, 1, 2)]))
        assert not fr_equal(geo(0, 1), geo(1, 1))

    def test_invert(self):
        assert fr_equal(fr_invert_vars(geo(1, 1)), FactoredRat(-(P * T), [(1, 1, 1)]))
        assert fr_equal(fr_invert_vars(FactoredRat(ONE)), FactoredRat(ONE))
        expected = FactoredRat(LaurentPoly.monomial(3, 5, -1), W2.den)
        assert fr_equal(fr_invert_vars(W2), expected)

    def test_series(self):
        assert fr_series(geo(1, 1), 2) == [ONE, P, P * P]
        assert fr_series(fr_mul(geo(0, 1), geo(1, 1)), 2) == [ONE, ONE + P, ONE + P + P * P]
        assert fr_series(W2, 3) == [ONE, ONE + P, ONE + P + P**2, ONE + P + 2 * P**2 + P**3]

    def test_series_rejects_negative_t(self):
        with pytest.raises(ValueError):
            fr_series(FactoredRat(LaurentPoly.monomial(0, -1)), 2)

    def test_canonical_den_order(self):
        x = FactoredRat(ONE, [(2, 3, 1), (0, 1, 1), (1, 1, 2)])
        assert [(f.a, f.b) for f in x.den] == [(0, 1), (1, 1), (2, 3)]

    def test_json_round_trip(self):
        x = FactoredRat(3 - 7 * P * T + LaurentPoly.monomial(-1, 2, 10**30), [(2, 3, 1), (0, 1, 2)])
        data = json.loads(json.dumps(x.to_json()))
        assert data["denominator"] == [{"a": 0, "b": 1, "m": 2}, {"a": 2, "b": 3, "m": 1}]
        assert data["numerator"][-1] == {"p": -1, "t": 2, "c": str(10**30)}
        back = FactoredRat.from_json(data)
        assert back.num == x.num and back.den == x.den

    @given(rats, rats, rats)
    @settings(max_examples=30, deadline=None)
    def test_field_laws(self, x, y, z):
        assert fr_equal(fr_add(x, y), fr_add(y, x))
        assert fr_equal(fr_mul(x, fr_add(y, z)), fr_add(fr_mul(x, y), fr_mul(x, z)))
        assert fr_equal(fr_sum([x, y, z]), fr_add(fr_add(x, y), z))
        assert fr_equal(x, fr_add(x, FactoredRat(ZERO)))

    @given(rats)
    @settings(max_examples=30, deadline=None)
    def test_invert_is_involution(self, x):
        assert fr_equal(fr_invert_vars(fr_invert_vars(x)), x)

    @given(rats, rats, st.integers(0, 5))
    @settings(max_examples=30, deadline=None)
    def test_series_of_product_is_cauchy_product(self, x, y, N):
        sx, sy = fr_series(x, N), fr_series(y, N)
        cauchy = [sum((sx[k] * sy[n - k] for k in range(n + 1)), ZERO) for n in range(N + 1)]
        assert fr_series(fr_mul(x, y), N) == cauchy
        assert fr_series(x, N + 1)[: N + 1] == sx

    @given(rats)
    @settings(max_examples=30, deadline=None)
    def test_evaluate_agrees_with_equality(self, x):
        y = fr_mul(x, FactoredRat(ONE - P * T * T, [(1, 2, 1)]))
        assert fr_equal(x, y)
        assert x.evaluate(3, 5) == y.evaluate(3, 5)
