"""Local normal zeta functions of the free class-2-nilpotent groups F_{2,d}.

``local_zeta(d)`` returns ``W_d(P, T)`` as a :class:`FactoredRat` with
``P = p`` and ``T = p^-s``::

    W_d = zeta_{Z_p^d}(s) * zeta_p((d+d')s - dd') * sum_{(I,J)} A_{I,J}

where ``d' = d(d-1)/2`` and the sum runs over the admissible pairs of
:func:`enumerate_pairs`.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import cmp_to_key, lru_cache
from itertools import combinations
from typing import Dict, List, Optional, Tuple

from .laurent import ONE, FactoredRat, LaurentPoly, Monomial, fr_sum
from .qseries import gauss_binom_inv, igusa_F

__all__ = [
    "ZetaParams",
    "SubsetPair",
    "MergedOrder",
    "NumericalData",
    "phi",
    "enumerate_pairs",
    "merged_order_compare",
    "j_of_i",
    "i_of_j",
    "numerical_data",
    "term_A_IJ",
    "sum_A",
    "zeta_free_abelian",
    "local_zeta",
    "local_zeta_latex",
]


@dataclass(frozen=True)
class ZetaParams:
    d: int

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"d must be at least 2, got {self.d}")

    @property
    def dprime(self) -> int:
        return self.d * (self.d - 1) // 2

    @property
    def hirsch(self) -> int:
        return self.d + self.dprime


def _params(params) -> ZetaParams:
    return params if isinstance(params, ZetaParams) else ZetaParams(int(params))


def phi(i: int, params) -> int:
    """``phi(i) = i*d - i(i+1)/2`` on ``0 <= i <= d-1``."""
    d = _params(params).d
    if not 0 <= i <= d - 1:
        raise ValueError(f"phi is defined on 0..{d - 1}, got {i}")
    return i * d - i * (i + 1) // 2


@dataclass(frozen=True)
class SubsetPair:
    I: Tuple[int, ...]
    J: Tuple[int, ...]

    @property
    def h(self) -> int:
        return len(self.I)

    @property
    def key(self) -> str:
        return "I=" + ",".join(map(str, self.I)) + "|J=" + ",".join(map(str, self.J))

    @classmethod
    def parse(cls, key: str) -> "SubsetPair":
        left, right = key.split("|")
        conv = lambda s: tuple(int(x) for x in s.split("=", 1)[1].split(",") if x)
        return cls(conv(left), conv(right))

    def check(self, params) -> None:
        params = _params(params)
        d, dp = params.d, params.dprime
        I, J = self.I, self.J
        if len(I) != len(J):
            raise ValueError(f"|I| != |J| in {self.key}")
        if list(I) != sorted(set(I)) or list(J) != sorted(set(J)):
            raise ValueError(f"I and J must be strictly increasing in {self.key}")
        if I and (I[0] < 1 or I[-1] > d - 2):
            raise ValueError(f"I must lie in [1, {d - 2}] in {self.key}")
        if J and (J[0] < 1 or J[-1] > dp - 1):
            raise ValueError(f"J must lie in [1, {dp - 1}] in {self.key}")
        if any(phi(i, params) > j for i, j in zip(I, J)):
            raise ValueError(f"phi(I) <= J fails for {self.key}")


def enumerate_pairs(params) -> List[SubsetPair]:
    """Admissible pairs ``I <= [d-2]``, ``J <= [d'-1]``, ``|I| = |J|``, ``phi(I) <= J``.

    Ordered by size, then lexicographically in ``(I, J)``.
    """
    params = _params(params)
    d, dp = params.d, params.dprime
    out = []
    for h in range(0, min(d - 2, dp - 1) + 1):
        for I in combinations(range(1, d - 1), h):
            phis = [phi(i, params) for i in I]
            for J in combinations(range(1, dp), h):
                if all(a <= b for a, b in zip(phis, J)):
                    out.append(SubsetPair(I, J))
    return out


# Elements of the ordered domain are (side, value) with side "A" for
# phi-values and "B" for j-values.
A_SIDE, B_SIDE = "A", "B"


def merged_order_compare(x, y, pair: SubsetPair, params) -> int:
    """Compare tagged elements under the total order attached to ``(phi(I), J)``.

    Returns -1, 0 or 1.  ``0`` (on either side) is below everything and
    ``d'`` on the B side is above everything.
    """
    params = _params(params)
    for z in (x, y):
        if not (isinstance(z, tuple) and len(z) == 2 and z[0] in (A_SIDE, B_SIDE)):
            raise ValueError(f"untagged element {z!r}")
    if x == y:
        return 0
    dp = params.dprime
    # boundary elements; 0_B sits just below 0_A
    if x[1] == 0 or y[1] == 0:
        rank = lambda z: (0 if z[1] == 0 else 1, 0 if z[0] == B_SIDE else 1)
        return -1 if rank(x) < rank(y) else 1
    if (x[0], x[1]) == (B_SIDE, dp) or (y[0], y[1]) == (B_SIDE, dp):
        return 1 if (x[0], x[1]) == (B_SIDE, dp) else -1
    if x[0] == y[0]:
        return -1 if x[1] < y[1] else 1
    phis = [phi(i, params) for i in pair.I]
    J = pair.J
    if x[0] == A_SIDE:
        below = any(x[1] <= a and y[1] >= j for a, j in zip(phis, J))
        return -1 if below else 1
    below = all(a < y[1] for a, j in zip(phis, J) if j <= x[1])
    return -1 if below else 1


class MergedOrder:
    """The order of :func:`merged_order_compare` materialized as a rank table over
    ``phi([d-2]_0)`` on side A and ``[d'-1]_0 + {d'}`` on side B."""

    def __init__(self, pair: SubsetPair, params):
        self.pair = pair
        self.params = params = _params(params)
        d, dp = params.d, params.dprime
        self.domain = [(A_SIDE, phi(i, params)) for i in range(0, d - 1)]
        self.domain += [(B_SIDE, j) for j in range(0, dp + 1)]
        cmp = lambda x, y: merged_order_compare(x, y, pair, params)
        self.sequence = sorted(self.domain, key=cmp_to_key(cmp))
        self.rank = {z: k for k, z in enumerate(self.sequence)}

    def less(self, x, y) -> bool:
        return self.rank[x] < self.rank[y]


@lru_cache(maxsize=4096)
def _order(pair: SubsetPair, params: ZetaParams) -> MergedOrder:
    return MergedOrder(pair, params)


def j_of_i(i: int, pair: SubsetPair, params) -> int:
    """Smallest ``j`` in ``J + {d'}`` with ``phi(i) < j`` in the merged order."""
    params = _params(params)
    order = _order(pair, params)
    a = (A_SIDE, phi(i, params))
    return min(j for j in pair.J + (params.dprime,) if order.less(a, (B_SIDE, j)))


def i_of_j(j: int, pair: SubsetPair, params) -> int:
    """Largest ``i`` in ``I + {0}`` with ``phi(i) < j`` in the merged order."""
    params = _params(params)
    order = _order(pair, params)
    b = (B_SIDE, j)
    return max(i for i in (0,) + pair.I if order.less((A_SIDE, phi(i, params)), b))


@dataclass(frozen=True)
class NumericalData:
    X: Dict[int, Monomial]
    Y: Dict[int, Monomial]
    Yprime: Dict[int, Monomial]


def _datum(i_val, j_val, i_phi, params):
    # P-exponent i(d-i) + (d'-j)(d+j-phi), T-exponent d-i+d'-j
    d, dp = params.d, params.dprime
    return Monomial(i_val * (d - i_val) + (dp - j_val) * (d + j_val - phi(i_phi, params)), d - i_val + dp - j_val)


def numerical_data(pair: SubsetPair, params) -> NumericalData:
    params = _params(params)
    d, dp = params.d, params.dprime
    X = {}
    for j in range(1, dp):
        i = i_of_j(j, pair, params)
        X[j] = _datum(i, j, i, params)
    Y = {}
    for i in range(1, d - 1):
        j = j_of_i(i, pair, params)
        Y[i] = _datum(i, j, i, params)
    Yp = {}
    for r in range(1, pair.h + 1):
        prev = pair.I[r - 2] if r > 1 else 0
        j = j_of_i(pair.I[r - 1], pair, params)
        Yp[r] = _datum(prev, j, prev, params)
    return NumericalData(X, Y, Yp)


def _window(data: Dict[int, Monomial], lo: int, hi: int):
    # variables strictly between lo and hi
    return [data[k] for k in range(lo + 1, hi)]


def term_A_IJ(pair: SubsetPair, params) -> FactoredRat:
    """The summand attached to the admissible pair ``(I, J)``."""
    params = _params(params)
    pair.check(params)
    d, dp = params.d, params.dprime
    nd = numerical_data(pair, params)
    I, J, h = pair.I, pair.J, pair.h
    i_h = I[-1] if h else 0
    j_h = J[-1] if h else 0

    result = igusa_F(dp - j_h, _window(nd.X, j_h, dp))
    # inverse of zeta_{Z_p^{i_h}}(s)
    inv = ONE
    for k in range(i_h):
        inv = inv.mul_one_minus(k, 1)
    result = result * inv

    for r in range(1, h + 1):
        i_r, j_r = I[r - 1], J[r - 1]
        i_prev = I[r - 2] if r > 1 else 0
        j_prev = J[r - 2] if r > 1 else 0
        j_next = J[r] if r < h else dp
        f = phi(i_r, params)
        coeff = gauss_binom_inv(j_next - f, j_r - f) * gauss_binom_inv(d - i_prev, d - i_r)
        y, yp = nd.Y[i_r], nd.Yprime[r]
        result = result * FactoredRat(coeff.shift(y.eP, y.eT), [(y.eP, y.eT, 1), (yp.eP, yp.eT, 1)])
        result = result * igusa_F(j_r - j_prev, _window(nd.X, j_prev, j_r))
        result = result * igusa_F(i_r - i_prev, _window(nd.Y, i_prev, i_r))
    return result


def _term(args):
    return term_A_IJ(*args)


def sum_A(params, workers: Optional[int] = None) -> FactoredRat:
    """Sum of all summands, folded in :func:`enumerate_pairs` order."""
    params = _params(params)
    pairs = enumerate_pairs(params)
    jobs = [(pair, params) for pair in pairs]
    if workers and workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            terms = list(pool.map(_term, jobs))
    else:
        terms = [_term(j) for j in jobs]
    return fr_sum(terms)


def zeta_free_abelian(n: int) -> FactoredRat:
    """``zeta_{Z_p^n}(s) = prod_{i<n} 1/(1 - p^i T)``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return FactoredRat(ONE, [(i, 1, 1) for i in range(n)])


def prefactor(params) -> FactoredRat:
    """``zeta_{Z_p^d}(s) * zeta_p((d+d')s - dd')``."""
    params = _params(params)
    d, dp = params.d, params.dprime
    return FactoredRat(ONE, [(i, 1, 1) for i in range(d)] + [(d * dp, d + dp, 1)])


_LOCAL_CACHE: Dict[int, FactoredRat] = {}


def local_zeta(params, workers: Optional[int] = None) -> FactoredRat:
    """``W_d(P, T)``, the local normal zeta function of ``F_{2,d}``."""
    params = _params(params)
    if params.d not in _LOCAL_CACHE:
        _LOCAL_CACHE[params.d] = prefactor(params) * sum_A(params, workers=workers)
    return _LOCAL_CACHE[params.d]


# -- LaTeX ------------------------------------------------------------------


def _latex_monomial(ep, et):
    # P -> p, T -> p^{-s}
    parts = []
    if ep or et:
        exp = []
        if ep:
            exp.append(str(ep))
        if et:
            exp.append(("-" if et > 0 else "+") + (f"{abs(et)}s" if abs(et) != 1 else "s"))
        text = "".join(exp).lstrip("+")
        parts.append("p" if text == "1" else f"p^{{{text}}}")
    return "".join(parts)


def latex_poly(poly: LaurentPoly) -> str:
    if poly.is_zero():
        return "0"
    out = []
    for (ep, et), c in poly.sorted_terms():
        mono = _latex_monomial(ep, et)
        if not mono:
            term = str(abs(c))
        elif abs(c) == 1:
            term = mono
        else:
            term = f"{abs(c)}{mono}"
        out.append(("-" if c < 0 else "+", term))
    text = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, term in out[1:]:
        text += f" {sign} {term}"
    return text


def _zeta_symbol(a, b):
    if b == 1:
        arg = "s" if a == 0 else f"s-{a}"
    else:
        arg = f"{b}s" if a == 0 else f"{b}s-{a}"
    return f"\\zeta_p({arg})"


def local_zeta_latex(params) -> str:
    """``W_d`` with the prefactors written as local Riemann zeta factors."""
    params = _params(params)
    d, dp = params.d, params.dprime
    A = sum_A(params)
    pre = "".join(_zeta_symbol(i, 1) for i in range(d)) + _zeta_symbol(d * dp, d + dp)
    if not A.den and A.num == ONE:
        return pre
    den = "".join(
        f"(1-{_latex_monomial(a, b)})" + (f"^{{{m}}}" if m > 1 else "") for a, b, m in A.den
    )
    return f"{pre}\\cdot\\frac{{{latex_poly(A.num)}}}{{{den or '1'}}}"
