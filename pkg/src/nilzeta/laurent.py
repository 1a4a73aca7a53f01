"""Exact bivariate Laurent polynomials and cyclotomically factored rational functions.

The two formal variables are ``P`` (standing for a prime ``p``) and ``T``
(standing for ``p**-s``).  A :class:`FactoredRat` keeps its denominator as a
multiset of factors ``(1 - P**a T**b)**m`` which is never expanded unless an
operation needs a common denominator.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, NamedTuple, Tuple

__all__ = [
    "Monomial",
    "LaurentPoly",
    "CycloFactor",
    "FactoredRat",
    "P",
    "T",
    "ONE",
    "ZERO",
    "lp_add",
    "lp_mul",
    "lp_invert_vars",
    "fr_mul",
    "fr_add",
    "fr_equal",
    "fr_invert_vars",
    "fr_series",
]

# exponents stay far below this for every d the package can handle
EXPONENT_LIMIT = 2**31 - 1


class Monomial(NamedTuple):
    eP: int
    eT: int


def _check_exponent(e):
    if not -EXPONENT_LIMIT <= e <= EXPONENT_LIMIT:
        raise OverflowError(f"monomial exponent {e} exceeds the supported range")


class LaurentPoly:
    """Integer Laurent polynomial in ``P`` and ``T``.

    Terms are stored as ``{(eP, eT): coefficient}`` with no zero coefficients.
    Instances are treated as immutable.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for (ep, et), c in dict(terms).items():
                c = int(c)
                if c:
                    _check_exponent(ep)
                    _check_exponent(et)
                    clean[(int(ep), int(et))] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _wrap(cls, terms):
        # terms must already be free of zeros
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c):
        return cls._wrap({(0, 0): int(c)} if c else {})

    @classmethod
    def monomial(cls, eP, eT=0, c=1):
        _check_exponent(eP)
        _check_exponent(eT)
        return cls._wrap({(int(eP), int(eT)): int(c)} if c else {})

    # -- inspection ---------------------------------------------------------
    @property
    def terms(self):
        """A copy of the term dictionary."""
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coeff(self, eP, eT=0):
        return self._terms.get((eP, eT), 0)

    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def t_exponents(self):
        return sorted({et for _, et in self._terms})

    def min_exponents(self):
        """Smallest ``P`` and ``T`` exponents occurring (``(0, 0)`` for zero)."""
        if not self._terms:
            return (0, 0)
        return (min(k[0] for k in self._terms), min(k[1] for k in self._terms))

    def max_exponents(self):
        if not self._terms:
            return (0, 0)
        return (max(k[0] for k in self._terms), max(k[1] for k in self._terms))

    # -- ring operations ----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return LaurentPoly._wrap(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._wrap({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return ZERO
            return LaurentPoly._wrap({k: c * other for k, c in self._terms.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        a, b = self._terms, other._terms
        if not a or not b:
            return ZERO
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            ((bp, bt), bc), = b.items()
            _check_exponent(bp + self.max_abs_exponent() + other.max_abs_exponent())
            return LaurentPoly._wrap({(p + bp, t + bt): c * bc for (p, t), c in a.items()})
        _check_exponent(self.max_abs_exponent() + other.max_abs_exponent())
        out: Dict[Tuple[int, int], int] = {}
        get = out.get
        for (bp, bt), bc in b.items():
            for (p, t), c in a.items():
                k = (p + bp, t + bt)
                out[k] = get(k, 0) + c * bc
        return LaurentPoly._wrap({k: c for k, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative powers are not Laurent polynomials in general")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def max_abs_exponent(self):
        if not self._terms:
            return 0
        return max(max(abs(p), abs(t)) for p, t in self._terms)

    def mul_one_minus(self, a, b, mult=1):
        """Multiply by ``(1 - P**a T**b)**mult`` without building the factor."""
        terms = self._terms
        for _ in range(mult):
            out = dict(terms)
            for (p, t), c in terms.items():
                k = (p + a, t + b)
                s = out.get(k, 0) - c
                if s:
                    out[k] = s
                else:
                    del out[k]
            terms = out
        return LaurentPoly._wrap(terms)

    def shift(self, eP, eT):
        """Multiply by the monomial ``P**eP T**eT``."""
        return LaurentPoly._wrap({(p + eP, t + eT): c for (p, t), c in self._terms.items()})

    def invert_vars(self):
        """Substitute ``(P, T) -> (1/P, 1/T)``."""
        return LaurentPoly._wrap({(-p, -t): c for (p, t), c in self._terms.items()})

    def invert_p(self):
        """Substitute ``P -> 1/P`` only."""
        return LaurentPoly._wrap({(-p, t): c for (p, t), c in self._terms.items()})

    # -- evaluation ---------------------------------------------------------
    def evaluate(self, p=None, t=None):
        """Substitute numbers for ``P`` and/or ``T``.

        With both given a number (``int`` or :class:`~fractions.Fraction`) is
        returned; with only ``p`` given the result is a ``{eT: value}`` dict.
        """
        if p is None and t is None:
            raise ValueError("nothing to substitute")
        if p is None:
            out = {}
            for (ep, et), c in self._terms.items():
                out[ep] = out.get(ep, 0) + c * _power(t, et)
            return {k: v for k, v in out.items() if v}
        if t is None:
            out = {}
            for (ep, et), c in self._terms.items():
                out[et] = out.get(et, 0) + c * _power(p, ep)
            return {k: v for k, v in out.items() if v}
        return sum((c * _power(p, ep) * _power(t, et) for (ep, et), c in self._terms.items()), 0)

    # -- display ------------------------------------------------------------
    def sorted_terms(self):
        """Terms sorted by ``(eT, eP)`` ascending."""
        return sorted(self._terms.items(), key=lambda kv: (kv[0][1], kv[0][0]))

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for (ep, et), c in self.sorted_terms():
            mono = "*".join(_fmt_power(v, e) for v, e in (("P", ep), ("T", et)) if e)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _fmt_power(var, e):
    return var if e == 1 else f"{var}^{e}" if e > 0 else f"{var}^({e})"


def _power(x, e):
    if e >= 0:
        return x**e
    return Fraction(1, x**-e) if isinstance(x, int) else 1 / x**-e


ZERO = LaurentPoly._wrap({})
ONE = LaurentPoly._wrap({(0, 0): 1})
P = LaurentPoly._wrap({(1, 0): 1})
T = LaurentPoly._wrap({(0, 1): 1})


def lp_add(x, y):
    return x + y


def lp_mul(x, y):
    return x * y


def lp_invert_vars(x):
    return x.invert_vars()


class CycloFactor(NamedTuple):
    """The factor ``(1 - P**a T**b)**mult``."""

    a: int
    b: int
    mult: int = 1


def _den_dict(den: Iterable) -> Dict[Tuple[int, int], int]:
    out: Dict[Tuple[int, int], int] = {}
    for f in den:
        a, b, m = (f[0], f[1], f[2] if len(f) > 2 else 1)
        if a < 0 or b < 1 or m < 1:
            raise ValueError(f"invalid cyclotomic factor (a={a}, b={b}, mult={m})")
        out[(a, b)] = out.get((a, b), 0) + m
    return out


def _den_tuple(den: Dict[Tuple[int, int], int]) -> Tuple[CycloFactor, ...]:
    return tuple(CycloFactor(a, b, m) for (a, b), m in sorted(den.items()) if m)


class FactoredRat:
    """Rational function ``num / prod (1 - P**a T**b)**m``.

    The denominator is kept factored and in canonical ``(a, b)`` order.  Two
    instances may represent the same function without being structurally
    identical; use :func:`fr_equal` for semantic comparison.
    """

    __slots__ = ("num", "den")

    def __init__(self, num=None, den=()):
        if num is None:
            num = ONE
        elif isinstance(num, int):
            num = LaurentPoly.const(num)
        self.num: LaurentPoly = num
        self.den: Tuple[CycloFactor, ...] = _den_tuple(_den_dict(den))

    @classmethod
    def geometric(cls, a, b, mult=1):
        """``1 / (1 - P**a T**b)**mult``."""
        return cls(ONE, [(a, b, mult)])

    def den_dict(self):
        return {(f.a, f.b): f.mult for f in self.den}

    def expand_den(self):
        """The denominator multiplied out as a :class:`LaurentPoly`."""
        poly = ONE
        for a, b, m in self.den:
            poly = poly.mul_one_minus(a, b, m)
        return poly

    def is_zero(self):
        return self.num.is_zero()

    def __mul__(self, other):
        return fr_mul(self, _as_fr(other))

    __rmul__ = __mul__

    def __add__(self, other):
        return fr_add(self, _as_fr(other))

    __radd__ = __add__

    def __neg__(self):
        return FactoredRat(-self.num, self.den)

    def __sub__(self, other):
        return fr_add(self, -_as_fr(other))

    def __repr__(self):
        den = "".join(f"(1 - P^{a}*T^{b})" + (f"^{m}" if m > 1 else "") for a, b, m in self.den)
        return f"FactoredRat(({self.num}) / ({den or '1'}))"

    def evaluate(self, p, t):
        """Exact value at rational points; for spot checks only."""
        den = Fraction(1)
        for a, b, m in self.den:
            den *= (1 - _power(p, a) * _power(t, b)) ** m
        return Fraction(self.num.evaluate(p, t)) / den

    # -- serialization -------------------------------------------------------
    def to_json(self):
        return {
            "numerator": [{"p": ep, "t": et, "c": str(c)} for (ep, et), c in self.num.sorted_terms()],
            "denominator": [{"a": a, "b": b, "m": m} for a, b, m in self.den],
        }

    @classmethod
    def from_json(cls, data):
        num = LaurentPoly({(t["p"], t["t"]): int(t["c"]) for t in data["numerator"]})
        return cls(num, [(f["a"], f["b"], f["m"]) for f in data["denominator"]])


def _as_fr(x):
    if isinstance(x, FactoredRat):
        return x
    if isinstance(x, (int, LaurentPoly)):
        return FactoredRat(x)
    raise TypeError(f"cannot convert {type(x).__name__} to FactoredRat")


def fr_mul(x: FactoredRat, y: FactoredRat) -> FactoredRat:
    den = x.den_dict()
    for (a, b), m in y.den_dict().items():
        den[(a, b)] = den.get((a, b), 0) + m
    out = FactoredRat.__new__(FactoredRat)
    out.num = x.num * y.num
    out.den = _den_tuple(den)
    return out


def _lcm(dx, dy):
    lcm = dict(dx)
    for k, m in dy.items():
        if m > lcm.get(k, 0):
            lcm[k] = m
    return lcm


def _lift(num, den, target):
    # num/den rewritten over the larger denominator `target`
    for (a, b), m in target.items():
        extra = m - den.get((a, b), 0)
        if extra:
            num = num.mul_one_minus(a, b, extra)
    return num


def fr_add(x: FactoredRat, y: FactoredRat) -> FactoredRat:
    """Sum over the least common multiple of the two denominators."""
    dx, dy = x.den_dict(), y.den_dict()
    if dx == dy:
        num = x.num + y.num
        lcm = dx
    else:
        lcm = _lcm(dx, dy)
        num = _lift(x.num, dx, lcm) + _lift(y.num, dy, lcm)
    out = FactoredRat.__new__(FactoredRat)
    out.num = num
    out.den = _den_tuple(lcm)
    return out


def fr_sum(terms: Iterable[FactoredRat]) -> FactoredRat:
    """Left fold of :func:`fr_add`, lifting every term once to the overall LCM."""
    terms = list(terms)
    if not terms:
        return FactoredRat(ZERO)
    lcm: Dict[Tuple[int, int], int] = {}
    for t in terms:
        lcm = _lcm(lcm, t.den_dict())
    num = ZERO
    for t in terms:
        num = num + _lift(t.num, t.den_dict(), lcm)
    out = FactoredRat.__new__(FactoredRat)
    out.num = num
    out.den = _den_tuple(lcm)
    return out


def fr_equal(x: FactoredRat, y: FactoredRat) -> bool:
    """Semantic equality by cross-multiplication.

    Both numerators are multiplied by the factors of the opposite denominator
    that they lack; factors shared by both sides cancel and are skipped.
    """
    dx, dy = x.den_dict(), y.den_dict()
    if dx == dy:
        return x.num == y.num
    lcm = _lcm(dx, dy)
    return _lift(x.num, dx, lcm) == _lift(y.num, dy, lcm)


def fr_invert_vars(x: FactoredRat) -> FactoredRat:
    """``x`` at ``(1/P, 1/T)``, rewritten over the same denominator.

    Uses ``1/(1 - 1/Z) = -Z/(1 - Z)`` for every denominator factor.
    """
    num = x.num.invert_vars()
    sign, sp, st = 1, 0, 0
    for a, b, m in x.den:
        sign *= (-1) ** m
        sp += a * m
        st += b * m
    out = FactoredRat.__new__(FactoredRat)
    out.num = num.shift(sp, st) * sign
    out.den = x.den
    return out


def series_coefficients(x: FactoredRat, N: int) -> List[Dict[int, int]]:
    """Coefficients of ``T**0 .. T**N`` as ``{eP: coefficient}`` dictionaries."""
    if N < 0:
        raise ValueError("N must be non-negative")
    if x.num and x.num.min_exponents()[1] < 0:
        raise ValueError("numerator has negative T-exponents; not a power series in T")
    coeffs: List[Dict[int, int]] = [dict() for _ in range(N + 1)]
    for (ep, et), c in x.num.items():
        if et <= N:
            row = coeffs[et]
            row[ep] = row.get(ep, 0) + c
    for a, b, m in x.den:
        for _ in range(m):
            # multiply by 1/(1 - P^a T^b): c_n += P^a c_{n-b}, in increasing n
            for n in range(b, N + 1):
                src = coeffs[n - b]
                if not src:
                    continue
                row = coeffs[n]
                for ep, c in src.items():
                    k = ep + a
                    row[k] = row.get(k, 0) + c
    return [{k: v for k, v in row.items() if v} for row in coeffs]


def fr_series(x: FactoredRat, N: int) -> List[LaurentPoly]:
    """Power-series coefficients of ``x`` in ``T`` up to ``T**N``, as polynomials in ``P``."""
    return [LaurentPoly._wrap({(ep, 0): c for ep, c in row.items()}) for row in series_coefficients(x, N)]
