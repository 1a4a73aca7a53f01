"""Integer lattices of full rank in Z^n: Hermite normal form, elementary divisors,
and enumeration of p-power-index sublattices.

Convention: a lattice is given by an upper triangular basis matrix whose
*columns* are the basis vectors, with positive diagonal and every entry to the
right of the diagonal reduced modulo the diagonal entry of its row.  This is
the unique representative of the lattice.
"""

from __future__ import annotations

from itertools import product
from typing import Iterator, List, Sequence, Tuple

__all__ = [
    "GuardError",
    "LatticeBasis",
    "hnf",
    "elementary_divisors",
    "sublattices",
    "superlattices",
    "num_sublattices",
]


class GuardError(RuntimeError):
    """A resource guard refused an enumeration that would be too large."""


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``g = s*a + t*b = gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


class LatticeBasis:
    """Full-rank sublattice of ``Z^n`` in column Hermite normal form."""

    __slots__ = ("rows", "n")

    def __init__(self, rows: Sequence[Sequence[int]]):
        self.rows: Tuple[Tuple[int, ...], ...] = tuple(tuple(int(x) for x in r) for r in rows)
        self.n = len(self.rows)

    @property
    def diagonal(self):
        return tuple(self.rows[i][i] for i in range(self.n))

    @property
    def index(self):
        out = 1
        for x in self.diagonal:
            out *= x
        return out

    def columns(self) -> List[Tuple[int, ...]]:
        return [tuple(self.rows[i][j] for i in range(self.n)) for j in range(self.n)]

    def coordinates(self, v: Sequence[int]) -> Tuple[int, ...]:
        """Coefficients of ``v`` in the basis; ``ValueError`` if ``v`` is not in the lattice."""
        c = self._solve(v)
        if c is None:
            raise ValueError(f"{tuple(v)} is not in the lattice")
        return c

    def contains(self, v: Sequence[int]) -> bool:
        return self._solve(v) is not None

    def contains_lattice(self, other: "LatticeBasis") -> bool:
        return all(self.contains(c) for c in other.columns())

    def _solve(self, v):
        rows, n = self.rows, self.n
        r = list(v)
        c = [0] * n
        for k in range(n - 1, -1, -1):
            q, rem = divmod(r[k], rows[k][k])
            if rem:
                return None
            if q:
                c[k] = q
                for i in range(k):
                    r[i] -= q * rows[i][k]
        return tuple(c)

    def scaled(self, m: int) -> "LatticeBasis":
        return hnf([tuple(m * x for x in col) for col in self.columns()], self.n)

    def __eq__(self, other):
        return isinstance(other, LatticeBasis) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"LatticeBasis({[list(r) for r in self.rows]})"


def hnf(vectors: Sequence[Sequence[int]], n: int) -> LatticeBasis:
    """Hermite normal form of the lattice spanned by ``vectors`` in ``Z^n``.

    Raises ``ValueError`` if the vectors do not span a full-rank lattice.
    """
    work = [list(v) for v in vectors if any(v)]
    for v in work:
        if len(v) != n:
            raise ValueError(f"vector of length {len(v)} in dimension {n}")
    cols: List[List[int]] = [None] * n  # type: ignore[list-item]
    for k in range(n - 1, -1, -1):
        pivot = None
        rest = []
        for v in work:
            if not v[k]:
                rest.append(v)
            elif pivot is None:
                pivot = v
            else:
                a, b = pivot[k], v[k]
                g, s, t = xgcd(a, b)
                ag, bg = a // g, b // g
                new_pivot = [s * x + t * y for x, y in zip(pivot, v)]
                other = [ag * y - bg * x for x, y in zip(pivot, v)]
                pivot = new_pivot
                if any(other):
                    rest.append(other)
        if pivot is None:
            raise ValueError("vectors do not span a full-rank lattice")
        if pivot[k] < 0:
            pivot = [-x for x in pivot]
        cols[k] = pivot
        work = rest
    for k in range(n - 1, -1, -1):
        d = cols[k][k]
        for j in range(k + 1, n):
            q = cols[j][k] // d
            if q:
                cols[j] = [x - q * y for x, y in zip(cols[j], cols[k])]
    return LatticeBasis([[cols[j][i] for j in range(n)] for i in range(n)])


def elementary_divisors(matrix: Sequence[Sequence[int]]) -> List[int]:
    """Nonzero invariant factors ``d_1 | d_2 | ...`` of an integer matrix (Smith form)."""
    A = [list(r) for r in matrix if any(r)]
    out: List[int] = []
    while A and A[0]:
        # pick the entry of smallest absolute value as pivot
        best = None
        for i, row in enumerate(A):
            for j, x in enumerate(row):
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, pi, pj = best
        A[0], A[pi] = A[pi], A[0]
        for row in A:
            row[0], row[pj] = row[pj], row[0]
        while True:
            piv = A[0][0]
            done = True
            # clear the first column
            for i in range(1, len(A)):
                q = A[i][0] // piv
                if q:
                    A[i] = [x - q * y for x, y in zip(A[i], A[0])]
                if A[i][0]:
                    done = False
            # clear the first row
            for j in range(1, len(A[0])):
                q = A[0][j] // piv
                if q:
                    for row in A:
                        row[j] -= q * row[0]
                if A[0][j]:
                    done = False
            if done:
                # pivot must divide the remaining block
                bad = next(((i, j) for i in range(1, len(A)) for j in range(1, len(A[0])) if A[i][j] % piv), None)
                if bad is None:
                    break
                A[0] = [x + y for x, y in zip(A[0], A[bad[0]])]
                continue
            # move the smallest nonzero entry of row/column 0 to the pivot
            cands = [(abs(A[i][0]), i, 0) for i in range(len(A)) if A[i][0]]
            cands += [(abs(A[0][j]), 0, j) for j in range(len(A[0])) if A[0][j]]
            _, i, j = min(cands)
            if i:
                A[0], A[i] = A[i], A[0]
            if j:
                for row in A:
                    row[0], row[j] = row[j], row[0]
        out.append(abs(A[0][0]))
        A = [row[1:] for row in A[1:]]
        A = [r for r in A if any(r)]
    return out


def num_sublattices(n: int, p: int, e: int) -> int:
    """Number of HNF matrices with diagonal exponents summing to ``e``.

    Row ``k`` (0-based) contributes ``p^(e_k (n-1-k))`` choices of its
    off-diagonal entries; the sum runs over all compositions of ``e``.
    """
    # ways[t] = number of choices for the rows processed so far with exponent sum t
    ways = [1] + [0] * e
    for k in range(n - 1, -1, -1):
        width = n - 1 - k
        new = [0] * (e + 1)
        for t, w in enumerate(ways):
            if w:
                for x in range(e - t + 1):
                    new[t + x] += w * p ** (x * width)
        ways = new
    return ways[e]


def _dfs(n: int, p: int, total: int, gens: Sequence[Sequence[int]], caps=None) -> Iterator[LatticeBasis]:
    # Rows are chosen bottom-up.  After row k is fixed the lower-right block
    # (rows/columns k..n-1) is the HNF of the projection to coordinates k..n-1,
    # so containment of `gens` can be tested one coordinate at a time.
    # caps[k] bounds the exponent of the k-th diagonal entry.
    rows: List[Tuple[int, ...]] = [None] * n  # type: ignore[list-item]
    coef = [[0] * n for _ in gens]

    def rec(k: int, remaining: int):
        if k < 0:
            if remaining == 0:
                yield LatticeBasis(rows)
            return
        top = remaining if caps is None else min(remaining, caps[k])
        if k == 0:
            e_range = (remaining,) if remaining <= top else ()
        else:
            e_range = range(top + 1)
        width = n - 1 - k
        for e in e_range:
            q = p**e
            for entries in product(range(q), repeat=width):
                ok = True
                saved = []
                for g, c in zip(gens, coef):
                    r = g[k]
                    for off, x in enumerate(entries):
                        r -= c[k + 1 + off] * x
                    if r % q:
                        ok = False
                        break
                    saved.append(r // q)
                if not ok:
                    continue
                for c, val in zip(coef, saved):
                    c[k] = val
                rows[k] = (0,) * k + (q,) + entries
                yield from rec(k - 1, remaining - e)
            # coefficient slots for k are overwritten on the next assignment

    yield from rec(n - 1, total)


def sublattices(n: int, p: int, e: int, guard: int = 5_000_000) -> Iterator[LatticeBasis]:
    """All sublattices of ``Z^n`` of index exactly ``p^e``, each once, in HNF."""
    if n < 1 or e < 0:
        raise ValueError("need n >= 1 and e >= 0")
    if num_sublattices(n, p, e) > guard:
        raise GuardError(f"enumerating index {p}^{e} sublattices of Z^{n} exceeds the guard ({guard})")
    return _dfs(n, p, e, ())


def superlattices(gens: Sequence[Sequence[int]], p: int, det: int, index: int = None) -> Iterator[LatticeBasis]:
    """Lattices ``M`` with ``span(gens) <= M <= Z^n``.

    ``det`` is the index of ``span(gens)`` in ``Z^n`` (a power of ``p``).  With
    ``index`` given only those of that index in ``Z^n`` are produced.
    """
    gens = [tuple(g) for g in gens]
    n = len(gens[0])
    top = 0
    while det % p == 0:
        det //= p
        top += 1
    if det != 1:
        raise ValueError("det must be a power of p")
    if index is None:
        totals = range(top + 1)
    else:
        f = 0
        while index % p == 0:
            index //= p
            f += 1
        if index != 1:
            raise ValueError("index must be a power of p")
        totals = (f,) if f <= top else ()
    # the diagonal of H divides that of span(gens), row by row
    caps = []
    for x in hnf(gens, n).diagonal:
        e = 0
        while x % p == 0:
            x //= p
            e += 1
        caps.append(e)
    for t in totals:
        yield from _dfs(n, p, t, gens, caps)
