from fractions import Fraction

import pytest

from nilzeta.analysis import (
    abscissa,
    abscissa_scan,
    adjacent_equality_check,
    closed_form_diagnostic,
    dominance_check,
    f_d,
    grid_argmax,
    grid_argmax_check,
    gss_bounds,
    gss_bounds_check,
    square_check,
    verify_funeq,
    verify_funeq_summand,
)
from nilzeta.zetacore import SubsetPair, enumerate_pairs


class TestFuneq:
    def test_heisenberg(self):
        cert = verify_funeq(2)
        assert cert.verdict
        assert (cert.sign, cert.p_exp, cert.t_exp) == (3, 3, 5)
        assert cert.as_json() == {"d": "2", "verdict": True, "factor": {"sign": "-1", "P": "3", "T": "5"}}

    def test_d3(self):
        cert = verify_funeq(3)
        assert cert.verdict and cert.factor_text == "(-1)^6 P^15 T^9"

    def test_bound(self):
        with pytest.raises(ValueError):
            verify_funeq(7)
        with pytest.raises(ValueError):
            verify_funeq(3, bound=2)

    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_summands(self, d):
        assert all(verify_funeq_summand(pair, d) for pair in enumerate_pairs(d))


class TestAbscissa:
    @pytest.mark.parametrize(
        "d,alpha,argmax",
        [(2, Fraction(2), "d"), (3, Fraction(3), "d"), (4, Fraction(4), "d"), (5, Fraction(51, 10), 5), (6, Fraction(99, 13), 8)],
    )
    def test_table(self, d, alpha, argmax):
        a = abscissa(d)
        assert a.alpha == alpha and a.argmax == argmax and a.unique

    def test_json(self):
        assert abscissa(5).as_json() == {"alpha": "51/10", "argmax": 5, "unique": True}
        assert abscissa(3).as_json() == {"alpha": "3", "argmax": "d", "unique": True}

    def test_shortcut_matches_scan(self):
        for d in range(2, 120):
            assert abscissa(d) == abscissa_scan(d), d

    def test_first_non_integral(self):
        assert [d for d in range(2, 8) if abscissa(d).alpha.denominator != 1][0] == 5

    def test_gss_bounds(self):
        assert gss_bounds(4) == (Fraction(50, 16), Fraction(15, 2))
        assert all(gss_bounds_check(d) for d in range(2, 101))

    def test_growth(self):
        alphas = [abscissa(d).alpha for d in range(2, 40)]
        assert alphas == sorted(alphas)


class TestGrid:
    def test_f_values(self):
        assert f_d(0, 1, 3) == Fraction(9, 5)
        assert f_d(0, 2, 3) == Fraction(3, 2)
        assert f_d(1, 2, 3) == 2
        assert [f_d(0, j, 5) for j in (4, 5, 6)] == [5, Fraction(51, 10), 5]
        assert f_d(1, 4, 4) == Fraction(14, 5)
        with pytest.raises(ZeroDivisionError):
            f_d(1, 2, 2)

    def test_d3_maximum_off_the_axis(self):
        # at d = 3 the grid maximum sits at (1, 2), not on i = 0
        assert grid_argmax(3) == (2, [(1, 2)])
        assert not grid_argmax_check(3)
        assert abscissa(3).alpha > grid_argmax(3)[0]

    def test_larger_d(self):
        assert all(grid_argmax_check(d) for d in range(4, 31))
        best, where = grid_argmax(5)
        assert best == Fraction(51, 10) and where == [(0, 5)]

    def test_rejects_small(self):
        with pytest.raises(ValueError):
            grid_argmax(2)


class TestDominance:
    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_passes(self, d):
        rep = dominance_check(d)
        assert rep.passed and not rep.notes
        assert rep.den_max == abscissa(d).alpha

    def test_d3_report(self):
        rep = dominance_check(3)
        assert rep.den_argmax[0] == SubsetPair((), ()).key
        body = rep.as_json()
        assert body["den_max"] == "3" and body["passed"]
        assert {s["pair"] for s in body["summands"]} == {"I=|J=", "I=1|J=2"}


class TestSquares:
    def test_no_odd_squares(self):
        assert square_check(100000) == []

    def test_parity_and_guard(self):
        assert all((2 * d**3 + 6 * d**2 - 3) % 2 == 1 for d in range(2, 50))
        with pytest.raises(ValueError):
            square_check(1)

    def test_adjacent(self):
        assert all(adjacent_equality_check(d) for d in range(3, 200))
        with pytest.raises(ValueError):
            adjacent_equality_check(2)


def test_closed_form_diagnostic():
    out = closed_form_diagnostic(5)
    assert out["j0"] == 5
    assert abs(out["difference"]) > 1e-6
    with pytest.raises(ValueError):
        closed_form_diagnostic(3)
