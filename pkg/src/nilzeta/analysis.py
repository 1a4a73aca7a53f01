"""Exact checks on the local zeta functions: functional equation, abscissa of
convergence, dominance of denominator factors, and the square test behind the
simple pole.

No verdict here depends on floating point.  :func:`closed_form_diagnostic` is
the only place floats appear, and it returns numbers rather than verdicts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional, Tuple, Union

import numpy as np

from .laurent import FactoredRat, LaurentPoly, fr_equal, fr_invert_vars
from .zetacore import SubsetPair, ZetaParams, enumerate_pairs, local_zeta, prefactor, term_A_IJ

__all__ = [
    "RationalNumber",
    "FuneqCertificate",
    "Abscissa",
    "DominanceReport",
    "SummandDominance",
    "verify_funeq",
    "verify_funeq_summand",
    "abscissa",
    "abscissa_scan",
    "gss_bounds",
    "gss_bounds_check",
    "f_d",
    "grid_argmax_check",
    "dominance_check",
    "square_check",
    "adjacent_equality_check",
    "closed_form_diagnostic",
]

RationalNumber = Fraction

FUNEQ_MAX_D = 6


def _params(d) -> ZetaParams:
    return d if isinstance(d, ZetaParams) else ZetaParams(d)


def _binom2(n: int) -> int:
    return n * (n - 1) // 2


# -- functional equation -----------------------------------------------------


@dataclass
class FuneqCertificate:
    d: int
    left: FactoredRat
    right: FactoredRat
    verdict: bool
    sign: int
    p_exp: int
    t_exp: int

    @property
    def factor_text(self) -> str:
        return f"(-1)^{self.sign} P^{self.p_exp} T^{self.t_exp}"

    def as_json(self):
        return {
            "d": str(self.d),
            "verdict": self.verdict,
            "factor": {"sign": str((-1) ** self.sign), "P": str(self.p_exp), "T": str(self.t_exp)},
        }


def verify_funeq(d, bound: int = FUNEQ_MAX_D, workers: Optional[int] = None) -> FuneqCertificate:
    """Check ``W(1/P, 1/T) = (-1)^h P^{binom(h,2)} T^{h+d} W(P, T)``."""
    params = _params(d)
    if not 2 <= params.d <= bound:
        raise ValueError(f"functional equation check needs 2 <= d <= {bound}")
    h = params.hirsch
    W = local_zeta(params, workers=workers)
    left = fr_invert_vars(W)
    factor = LaurentPoly.monomial(_binom2(h), h + params.d, (-1) ** h)
    right = W * FactoredRat(factor)
    return FuneqCertificate(params.d, left, right, fr_equal(left, right), h, _binom2(h), h + params.d)


def verify_funeq_summand(pair: SubsetPair, d) -> bool:
    """Each summand alone satisfies ``A(1/P, 1/T) = (-1)^(d'-1) P^binom(d',2) A(P, T)``."""
    params = _params(d)
    A = term_A_IJ(pair, params)
    dp = params.dprime
    factor = LaurentPoly.monomial(_binom2(dp), 0, (-1) ** (dp - 1))
    return fr_equal(fr_invert_vars(A), A * FactoredRat(factor))


# -- abscissa ----------------------------------------------------------------


class Abscissa(NamedTuple):
    alpha: Fraction
    argmax: Union[int, str]
    unique: bool

    def as_json(self):
        return {"alpha": _frac_str(self.alpha), "argmax": self.argmax, "unique": self.unique}


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _candidate(d: int, dp: int, j: int) -> Fraction:
    return Fraction((dp - j) * (d + j) + 1, d + dp - j)


def _pick(d: int, values: Dict[int, Fraction]) -> Abscissa:
    best = Fraction(d)
    winners: List[Union[int, str]] = ["d"]
    for j in sorted(values):
        v = values[j]
        if v > best:
            best, winners = v, [j]
        elif v == best:
            winners.append(j)
    return Abscissa(best, winners[0], len(winners) == 1)


def abscissa_scan(d: int) -> Abscissa:
    """Same as :func:`abscissa`, evaluating every ``j``."""
    dp = _binom2(d)
    return _pick(d, {j: _candidate(d, dp, j) for j in range(1, dp)})


def abscissa(d: int) -> Abscissa:
    """``alpha = max(d, ((d'-j)(d+j)+1)/(d+d'-j) for 1 <= j < d')``.

    With ``u = d + d' - j`` the candidate is ``(h + 2d) - u - (d(h+d) - 1)/u``,
    strictly concave in ``u``, so only the integers around
    ``sqrt(d(h+d) - 1)`` need to be compared.  Ties can only occur between
    neighbours, and all neighbours of the peak are included.
    """
    if d < 2:
        raise ValueError("d must be at least 2")
    dp = _binom2(d)
    if dp < 2:
        return Abscissa(Fraction(d), "d", True)
    h = d + dp
    root = math.isqrt(d * (h + d) - 1)
    js = set()
    for u in range(root - 1, root + 3):
        j = h - u
        js.add(min(max(j, 1), dp - 1))
    return _pick(d, {j: _candidate(d, dp, j) for j in js})


def gss_bounds(d: int) -> Tuple[Fraction, Fraction]:
    return Fraction(d**3 - d**2 + 2, 4 * d), max(Fraction(d), Fraction((d - 1) * (d + 1), 2))


def gss_bounds_check(d: int) -> bool:
    lo, hi = gss_bounds(d)
    return lo <= abscissa(d).alpha <= hi


# -- the two-variable function and its grid maximum --------------------------


def _phi_rat(i, d):
    return i * d - i * (i + 1) / Fraction(2)


def f_d(i, j, d: int) -> Fraction:
    """``(i(d-i) + (d'-j)(d+j-phi(i)) + 1) / (d+d'-j-i)`` for rational ``i``, ``j``."""
    i, j = Fraction(i), Fraction(j)
    dp = _binom2(d)
    den = d + dp - j - i
    if den == 0:
        raise ZeroDivisionError(f"f_{d} has a pole at (i, j) = ({i}, {j})")
    return (i * (d - i) + (dp - j) * (d + j - _phi_rat(i, d)) + 1) / den


def grid_argmax(d: int) -> Tuple[Fraction, List[Tuple[int, int]]]:
    if d < 3:
        raise ValueError("the grid is empty for d < 3")
    dp = _binom2(d)
    best, where = None, []
    for i in range(d - 1):
        ph = i * d - i * (i + 1) // 2
        base = i * (d - i) + 1
        for j in range(1, dp):
            v = Fraction(base + (dp - j) * (d + j - ph), d + dp - j - i)
            if best is None or v > best:
                best, where = v, [(i, j)]
            elif v == best:
                where.append((i, j))
    return best, where


def grid_argmax_check(d: int) -> bool:
    """True iff the maximum of ``f_d`` on ``[0, d-2] x [1, d'-1]`` is attained at ``i = 0``."""
    _, where = grid_argmax(d)
    return any(i == 0 for i, _ in where)


# -- dominance ---------------------------------------------------------------


def _ratio_entry(a: int, b: int) -> dict:
    return {"a": str(a), "b": str(b), "ratio": _frac_str(Fraction(a + 1, b))}


@dataclass
class SummandDominance:
    pair: str
    den: List[Tuple[int, int, Fraction]]
    num: List[Tuple[int, int, Fraction]]
    constant: int

    @property
    def den_max(self) -> Fraction:
        return max(r for _, _, r in self.den)

    @property
    def num_max(self) -> Optional[Fraction]:
        return max((r for _, _, r in self.num), default=None)

    def as_json(self):
        return {
            "pair": self.pair,
            "den": [_ratio_entry(a, b) for a, b, _ in self.den],
            "num": [_ratio_entry(c, b) for c, b, _ in self.num],
            "constant": str(self.constant),
        }


@dataclass
class DominanceReport:
    d: int
    summands: List[SummandDominance]
    den_max: Fraction
    num_max: Optional[Fraction]
    den_argmax: List[str]
    alpha: Fraction
    factored: bool = True
    notes: List[str] = field(default_factory=list)

    @property
    def equals_abscissa(self) -> bool:
        return self.den_max == self.alpha

    @property
    def attained_in_A0(self) -> bool:
        return SubsetPair((), ()).key in self.den_argmax

    @property
    def strict(self) -> bool:
        return self.num_max is None or self.num_max < self.den_max

    @property
    def passed(self) -> bool:
        return self.factored and self.equals_abscissa and self.attained_in_A0 and self.strict

    def as_json(self):
        return {
            "d": str(self.d),
            "alpha": _frac_str(self.alpha),
            "den_max": _frac_str(self.den_max),
            "num_max": None if self.num_max is None else _frac_str(self.num_max),
            "den_argmax": self.den_argmax,
            "equals_abscissa": self.equals_abscissa,
            "attained_in_A0": self.attained_in_A0,
            "strict": self.strict,
            "passed": self.passed,
            "summands": [s.as_json() for s in self.summands],
        }


def _summand_dominance(pair: SubsetPair, params: ZetaParams, pre: FactoredRat) -> SummandDominance:
    A = term_A_IJ(pair, params)
    den = sorted({(f.a, f.b) for f in A.den + pre.den})
    num = []
    constant = 0
    for (c, b), coeff in A.num.sorted_terms():
        if b == 0:
            if c != 0:
                raise ValueError(f"summand {pair.key} has a T-free term P^{c}")
            constant = coeff
        else:
            num.append((c, b, Fraction(c + 1, b)))
    return SummandDominance(pair.key, [(a, b, Fraction(a + 1, b)) for a, b in den], num, constant)


def dominance_check(d) -> DominanceReport:
    """Compare the growth ratios ``(a+1)/b`` of denominator factors and numerator
    monomials across all summands, prefactors included."""
    params = _params(d)
    pre = prefactor(params)
    summands = [_summand_dominance(pair, params, pre) for pair in enumerate_pairs(params)]
    den_max = max(s.den_max for s in summands)
    nums = [s.num_max for s in summands if s.num_max is not None]
    factored = all(a >= 0 and b >= 1 for s in summands for a, b, _ in s.den)
    report = DominanceReport(
        d=params.d,
        summands=summands,
        den_max=den_max,
        num_max=max(nums) if nums else None,
        den_argmax=[s.pair for s in summands if s.den_max == den_max],
        alpha=abscissa(params.d).alpha,
        factored=factored,
    )
    # the trivial pair carries the constant 1, every other summand a factor Y
    for s in summands:
        if s.constant != (1 if s.pair == SubsetPair((), ()).key else 0):
            report.notes.append(f"unexpected constant term {s.constant} in {s.pair}")
    return report


# -- square test -------------------------------------------------------------


def _is_odd_square(n: int) -> bool:
    if n < 0 or n % 2 == 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def square_check(d_max: int, d_min: int = 2) -> List[int]:
    """All ``d`` in range with ``2d^3 + 6d^2 - 3`` an odd perfect square."""
    if d_max < 2:
        raise ValueError("d_max must be at least 2")
    return [d for d in range(d_min, d_max + 1) if _is_odd_square(2 * d**3 + 6 * d**2 - 3)]


def adjacent_equality_check(d: int) -> bool:
    """True iff no ``j`` in ``[1, d'-2]`` has ``f_d(0, j) = f_d(0, j+1)``."""
    if d < 3:
        raise ValueError("d must be at least 3")
    dp = _binom2(d)
    h = d + dp
    if dp < 3:
        return True
    if h**3 < 2**62:
        j = np.arange(1, dp - 1, dtype=np.int64)
        num0 = (dp - j) * (d + j) + 1
        num1 = (dp - j - 1) * (d + j + 1) + 1
        return not np.any(num0 * (h - j - 1) == num1 * (h - j))
    for j in range(1, dp - 1):
        if ((dp - j) * (d + j) + 1) * (h - j - 1) == ((dp - j - 1) * (d + j + 1) + 1) * (h - j):
            return False
    return True


# -- float diagnostic --------------------------------------------------------


def _row_max(d: int, i: int) -> Tuple[Fraction, int]:
    dp = _binom2(d)
    return max((f_d(i, j, d), j) for j in range(1, dp))


def closed_form_diagnostic(d: int) -> Dict[str, float]:
    """Compare the gap between the row maxima of ``f_d`` at ``i = 0`` and ``i = 1``
    with a radical expression for it.  Diagnostic only."""
    if d < 4:
        raise ValueError("needs d >= 4")
    m0, j0 = _row_max(d, 0)
    m1, j1 = _row_max(d, 1)
    exact = float(m0 - m1)
    formula = d + 1 - math.sqrt(-4 + 6 * d**2 + 2 * d**3) + math.sqrt(2 * d**3 - 6 * d)
    return {"d": d, "j0": j0, "j1": j1, "gap": exact, "radical_form": formula, "difference": exact - formula}
