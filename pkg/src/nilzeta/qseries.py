"""Gaussian binomials, flag counts, the rational functions F_n and subgroup counts
of finite abelian p-groups.

All polynomials are :class:`~nilzeta.laurent.LaurentPoly` values in ``P``;
``*_inv`` variants are the same polynomials at ``P -> 1/P``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Dict, Sequence, Tuple

from .laurent import ONE, ZERO, FactoredRat, LaurentPoly, Monomial

__all__ = [
    "Partition",
    "gauss_binom",
    "gauss_binom_inv",
    "flag_count",
    "igusa_F",
    "igusa_F_direct",
    "hall_alpha",
    "hall_alpha_brute",
]


@dataclass(frozen=True)
class Partition:
    """Integer partition, parts stored in weakly decreasing order."""

    parts: Tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(x) for x in self.parts)
        if any(x <= 0 for x in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        object.__setattr__(self, "parts", tuple(sorted(parts, reverse=True)))

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Parse ``"3,2,1"``; the empty string gives the zero partition."""
        text = text.strip()
        return cls(tuple(int(x) for x in text.split(",")) if text else ())

    @classmethod
    def from_type(cls, exponents: Sequence[int]) -> "Partition":
        """Partition of the abelian group ``prod Z/p^e`` for exponents listed in any
        order (e.g. increasingly, as group types are often written).  Zero
        exponents are dropped."""
        return cls(tuple(e for e in exponents if e))

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    @property
    def size(self):
        return sum(self.parts)

    def part(self, i):
        """``i``-th part, 1-based, zero beyond the length."""
        return self.parts[i - 1] if 1 <= i <= len(self.parts) else 0

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for x in self.parts if x >= j) for j in range(1, self.parts[0] + 1)))

    def contains(self, other: "Partition") -> bool:
        """Young-diagram containment ``other <= self``."""
        if len(other) > len(self):
            return False
        return all(a >= b for a, b in zip(self.parts, other.parts))

    def __str__(self):
        return ",".join(map(str, self.parts))


def _as_partition(x) -> Partition:
    return x if isinstance(x, Partition) else Partition(tuple(x))


@lru_cache(maxsize=None)
def gauss_binom(a: int, b: int) -> LaurentPoly:
    """Gaussian binomial ``[a choose b]`` as a polynomial in ``P``."""
    if a < 0 or b < 0 or b > a:
        raise ValueError(f"gauss_binom needs 0 <= b <= a, got a={a}, b={b}")
    if b == 0 or b == a:
        return ONE
    # [a, b] = [a-1, b-1] + P^b [a-1, b]
    return gauss_binom(a - 1, b - 1) + gauss_binom(a - 1, b).shift(b, 0)


@lru_cache(maxsize=None)
def gauss_binom_inv(a: int, b: int) -> LaurentPoly:
    return gauss_binom(a, b).invert_p()


def _check_subset(I, lo, hi):
    I = tuple(I)
    if any(x >= y for x, y in zip(I, I[1:])):
        raise ValueError(f"index set must be strictly increasing: {I}")
    if I and (I[0] < lo or I[-1] > hi):
        raise ValueError(f"index set {I} not within [{lo}, {hi}]")
    return I


def flag_count(n: int, I: Sequence[int] = (), inverted: bool = False) -> LaurentPoly:
    """Number of flags of dimension type ``I`` in ``F_p^n`` (``b_{n,I}``)."""
    if n < 1:
        raise ValueError("n must be positive")
    I = _check_subset(I, 1, n - 1)
    binom = gauss_binom_inv if inverted else gauss_binom
    result = ONE
    top = n
    for i in reversed(I):
        result = result * binom(top, i)
        top = i
    return result


def _check_vars(n, zs):
    zs = [Monomial(*z) for z in zs]
    if len(zs) != n - 1:
        raise ValueError(f"F_{n} takes {n - 1} variables, got {len(zs)}")
    for z in zs:
        if z.eT < 1 or z.eP < 0:
            raise ValueError(f"variable {tuple(z)} is not of the form P^a T^b with a >= 0, b >= 1")
    return zs


def igusa_F(n: int, zs: Sequence[Tuple[int, int]]) -> FactoredRat:
    """``F_n(p, Z) = sum_{I <= [n-1]} b_{n,I}(1/p) prod_{i in I} Z_i / (1 - Z_i)``.

    The numerator over ``prod (1 - Z_i)`` is built by splitting on the largest
    element of ``I``::

        G_k = prod_{i<k} (1 - Z_i) + sum_{m<k} [k, m]_{1/p} Z_m prod_{m<i<k} (1 - Z_i) G_m

    which is quadratic in ``n`` instead of exponential.
    """
    if n < 1:
        raise ValueError("n must be positive")
    zs = _check_vars(n, zs)
    G = [None, ONE]  # G[k] is the numerator of F_k(Z_1..Z_{k-1})
    for k in range(2, n + 1):
        total = ZERO
        tail = ONE  # prod_{m < i < k} (1 - Z_i)
        for m in range(k - 1, 0, -1):
            z = zs[m - 1]
            total = total + (gauss_binom_inv(k, m) * tail * G[m]).shift(z.eP, z.eT)
            tail = tail.mul_one_minus(z.eP, z.eT)
        G.append(total + tail)
    return FactoredRat(G[n], [(z.eP, z.eT, 1) for z in zs])


def igusa_F_direct(n: int, zs: Sequence[Tuple[int, int]]) -> FactoredRat:
    """Same as :func:`igusa_F` by summing over all ``2**(n-1)`` subsets."""
    zs = _check_vars(n, zs)
    num = ZERO
    for size in range(n):
        for I in combinations(range(1, n), size):
            term = flag_count(n, I, inverted=True)
            for i in range(1, n):
                z = zs[i - 1]
                term = term.shift(z.eP, z.eT) if i in I else term.mul_one_minus(z.eP, z.eT)
            num = num + term
    return FactoredRat(num, [(z.eP, z.eT, 1) for z in zs])


def hall_alpha(lam, mu) -> LaurentPoly:
    """Number of subgroups of type ``mu`` in an abelian p-group of type ``lam``.

    ``prod_j P^{mu'_j (lam'_j - mu'_j)} [lam'_j - mu'_{j+1}, lam'_j - mu'_j]_{1/P}``
    with conjugate partitions ``lam'``, ``mu'``.
    """
    lam, mu = _as_partition(lam), _as_partition(mu)
    if not lam.contains(mu):
        raise ValueError(f"({mu}) is not contained in ({lam})")
    lc, mc = lam.conjugate(), mu.conjugate()
    result = ONE
    for j in range(1, len(lc) + 1):
        l, m, m_next = lc.part(j), mc.part(j), mc.part(j + 1)
        result = result * gauss_binom_inv(l - m_next, l - m).shift(m * (l - m), 0)
    return result


HALL_BRUTE_MAX_SIZE = 7


def hall_alpha_brute(lam, mu, p: int) -> int:
    """Count subgroups of type ``mu`` in ``prod Z/p^{lam_i}`` by enumeration.

    Subgroups are the lattices ``H`` with ``D <= H <= Z^n`` where ``D`` is the
    diagonal lattice ``(p^{lam_i})``; each is enumerated once in Hermite normal
    form and classified by the elementary divisors of ``H/D``.
    """
    lam, mu = _as_partition(lam), _as_partition(mu)
    if lam.size > HALL_BRUTE_MAX_SIZE:
        raise ValueError(f"|lambda| = {lam.size} exceeds the enumeration bound {HALL_BRUTE_MAX_SIZE}")
    return _subgroup_types(lam.parts, p).get(mu.parts, 0)


@lru_cache(maxsize=None)
def _subgroup_types(parts: Tuple[int, ...], p: int) -> Dict[Tuple[int, ...], int]:
    from .lattice import elementary_divisors, superlattices

    n = len(parts)
    if n == 0:
        return {(): 1}
    gens = [tuple(p**parts[j] if i == j else 0 for i in range(n)) for j in range(n)]
    hist: Counter = Counter()
    for H in superlattices(gens, p, p ** sum(parts)):
        # H/D is Z^n modulo the coordinates of D in the basis of H
        rel = [H.coordinates(v) for v in gens]
        exps = (_valuation(x, p) for x in elementary_divisors(rel) if x != 1)
        hist[tuple(sorted(exps, reverse=True))] += 1
    return dict(hist)


def _valuation(x, p):
    x = abs(x)
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v
