"""Brute-force ground truth for the normal zeta functions of F_{2,d}.

Normal subgroups of p-power index correspond to ideals of the Lie ring
``L = Z^d + Z^{d'}`` with basis ``x_1..x_d, y_{kl}`` (``k < l``) and bracket
``[x_k, x_l] = y_{kl}``; everything involving a ``y`` brackets to zero.  The
counters here enumerate lattices in Hermite normal form and never use the
closed formulas of :mod:`nilzeta.zetacore`.
"""

from __future__ import annotations

import random
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .lattice import GuardError, LatticeBasis, elementary_divisors, hnf, num_sublattices, sublattices, superlattices
from .zetacore import SubsetPair, ZetaParams, enumerate_pairs, phi

__all__ = [
    "LieStructure",
    "LatticeType",
    "CountTable",
    "build_lie_ring",
    "compositions",
    "sublattices",
    "commutator_image",
    "lattice_type",
    "divisor_exponents",
    "predicted_phi_type",
    "phi_type_law_check",
    "count_ideals_direct",
    "count_ideals_pairs",
    "overlap_invariant",
    "stratified_counts",
    "convolve_homothety",
]


@dataclass(frozen=True)
class LieStructure:
    d: int
    dprime: int
    pairs: Tuple[Tuple[int, int], ...]  # (k, l) with k < l, 0-based, in y-coordinate order

    @property
    def rank(self) -> int:
        return self.d + self.dprime

    def y_index(self, k: int, l: int) -> int:
        return self.pairs.index((k, l))

    def bracket_x(self, a: Sequence[int], k: int) -> List[int]:
        """``[sum a_i x_i, x_k]`` in y-coordinates."""
        out = [0] * self.dprime
        for idx, (u, v) in enumerate(self.pairs):
            if v == k:
                out[idx] += a[u]
            elif u == k:
                out[idx] -= a[v]
        return out

    def bracket(self, u: Sequence[int], v: Sequence[int]) -> List[int]:
        """Bracket of two vectors in the full basis ``(x_1..x_d, y_..)``."""
        d = self.d
        out = [0] * self.rank
        for idx, (k, l) in enumerate(self.pairs):
            out[d + idx] = u[k] * v[l] - u[l] * v[k]
        return out

    def bracket_matrix(self, k: int) -> np.ndarray:
        """Integer matrix of ``v -> [v, x_k]`` on the full basis."""
        h = self.rank
        M = np.zeros((h, h), dtype=np.int64)
        for i in range(h):
            e = [0] * h
            e[i] = 1
            M[:, i] = self.bracket(e, [1 if j == k else 0 for j in range(h)])
        return M


def build_lie_ring(d: int) -> LieStructure:
    if d < 2:
        raise ValueError("d must be at least 2")
    pairs = tuple(combinations(range(d), 2))
    return LieStructure(d, len(pairs), pairs)


@dataclass(frozen=True)
class LatticeType:
    """Elementary-divisor type ``(I, r)``.

    ``r[0]`` is the smallest exponent, which occurs ``I[0]`` times (all ``n``
    times if ``I`` is empty); crossing the jump at position ``i`` raises the
    exponent by ``r[i]``.  A jump at ``n`` itself is allowed and contributes
    no divisors.
    """

    n: int
    I: Tuple[int, ...]
    r: Dict[int, int] = field(hash=False)

    @property
    def maximal(self) -> bool:
        return self.r.get(0, 0) == 0

    def exponents(self) -> List[int]:
        """Divisor exponents in increasing order."""
        out = []
        level = self.r.get(0, 0)
        start = 0
        for i in self.I:
            out += [level] * (i - start)
            level += self.r[i]
            start = i
        out += [level] * (self.n - start)
        return out

    def as_json(self):
        return {"n": self.n, "I": list(self.I), "r": {str(k): v for k, v in sorted(self.r.items())}}


def _valuation(x: int, p: int) -> int:
    x = abs(x)
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    if x != 1:
        raise ValueError(f"elementary divisor is not a power of {p}")
    return v


def divisor_exponents(vectors: Sequence[Sequence[int]], p: int) -> Tuple[int, ...]:
    """Sorted ``p``-exponents of the elementary divisors of a full-rank lattice."""
    return tuple(sorted(_valuation(x, p) for x in elementary_divisors(vectors)))


def type_from_exponents(exps: Sequence[int]) -> LatticeType:
    exps = sorted(exps)
    n = len(exps)
    r = {0: exps[0]} if n else {0: 0}
    I = []
    for i in range(1, n):
        if exps[i] > exps[i - 1]:
            I.append(i)
            r[i] = exps[i] - exps[i - 1]
    return LatticeType(n, tuple(I), r)


def lattice_type(L: LatticeBasis, p: int) -> LatticeType:
    return type_from_exponents(divisor_exponents(L.columns(), p))


def commutator_image(lbar: LatticeBasis, L: LieStructure) -> LatticeBasis:
    """HNF of ``[lbar, L]`` inside the centre ``Z^{d'}``."""
    return hnf(_bracket_gens(lbar.columns(), L), L.dprime)


def _bracket_gens(cols, L: LieStructure):
    return [L.bracket_x(v, k) for v in cols for k in range(L.d)]


def predicted_phi_type(t: LatticeType, d: int) -> LatticeType:
    """Type ``(phi(S), q)`` in rank ``d'`` for a lattice of type ``(S, q)`` in rank ``d``."""
    dp = d * (d - 1) // 2
    I = tuple(phi(s, d) for s in t.I)
    r = {0: t.r.get(0, 0)}
    for s in t.I:
        r[phi(s, d)] = t.r[s]
    return LatticeType(dp, I, r)


def random_lattice(n: int, p: int, rng: random.Random, max_exp: int = 3) -> LatticeBasis:
    """Random full-rank lattice with ``p``-power diagonal; generated, then reduced."""
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = p ** rng.randint(0, max_exp)
        for j in range(i + 1, n):
            rows[i][j] = rng.randrange(rows[i][i])
    cols = [[rows[i][j] for i in range(n)] for j in range(n)]
    # scramble the basis so that the HNF step is exercised
    for _ in range(n):
        a, b = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if a != b:
            c = rng.randint(-2, 2)
            cols[a] = [x + c * y for x, y in zip(cols[a], cols[b])]
    return hnf(cols, n)


def phi_type_law_check(d: int, trials: int = 100, p: int = 2, seed: int = 0, max_exp: int = 3) -> bool:
    """Compare the divisors of ``[lbar, L]`` with the type predicted from ``lbar``."""
    L = build_lie_ring(d)
    rng = random.Random(seed)
    for _ in range(trials):
        lbar = random_lattice(d, p, rng, max_exp)
        predicted = predicted_phi_type(lattice_type(lbar, p), d).exponents()
        actual = list(divisor_exponents(_bracket_gens(lbar.columns(), L), p))
        if predicted != actual:
            return False
    return True


@dataclass
class CountTable:
    p: int
    counts: List[int]

    def as_json(self):
        return {"p": self.p, "counts": [str(c) for c in self.counts]}


def compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


# -- batched enumeration -----------------------------------------------------

DIRECT_LIMITS = {2: 10, 3: 3}
CHUNK = 1 << 17


def _hnf_batches(h: int, p: int, exps: Sequence[int], chunk: int = CHUNK) -> Iterator[np.ndarray]:
    """All HNF matrices with diagonal ``p^exps``, as arrays of shape (m, h, h).

    The off-diagonal entries are decoded from a flat mixed-radix index so that
    large families come out in bounded chunks.
    """
    slots = [(i, j) for i in range(h) for j in range(i + 1, h)]
    radices = [p ** exps[i] for i, _ in slots]
    total = 1
    for r in radices:
        total *= r
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        B = np.zeros((len(idx), h, h), dtype=np.int64)
        for i in range(h):
            B[:, i, i] = p ** exps[i]
        for (i, j), r in zip(reversed(slots), reversed(radices)):
            if r > 1:
                B[:, i, j] = idx % r
                idx = idx // r
        yield B


def _members(B: np.ndarray, w: np.ndarray, modulus: int) -> np.ndarray:
    """Row-wise membership of vectors ``w`` (m, h) in lattices ``B`` (m, h, h).

    ``modulus`` must kill the quotient ``Z^h / B``; coordinates and
    coefficients are reduced by it to keep int64 arithmetic exact.
    """
    w = w % modulus
    ok = np.ones(len(w), dtype=bool)
    h = B.shape[1]
    for k in range(h - 1, -1, -1):
        diag = B[:, k, k]
        ok &= (w[:, k] % diag) == 0
        c = (w[:, k] // diag) % modulus
        w = (w - c[:, None] * B[:, :, k]) % modulus
    return ok


def _direct_chunk(args):
    d, p, exps = args
    L = build_lie_ring(d)
    h = L.rank
    modulus = p ** sum(exps)
    mats = [L.bracket_matrix(k) for k in range(d)]
    total = 0
    for B in _hnf_batches(h, p, exps):
        ok = np.ones(len(B), dtype=bool)
        for col in range(h):
            v = B[:, :, col]
            for M in mats:
                ok &= _members(B, v @ M.T, modulus)
        total += int(ok.sum())
    return total


def _run(func, jobs, workers):
    if workers and workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(func, jobs))
    return [func(j) for j in jobs]


def count_ideals_direct(d: int, p: int, N: int, workers: Optional[int] = None) -> CountTable:
    """Ideals of ``L`` of index ``p^n``, ``n <= N``, by testing every HNF lattice.

    A lattice ``Lam`` is an ideal iff ``[v, x_k]`` lies in ``Lam`` for every
    basis column ``v`` and every generator ``x_k``.  One work item per diagonal
    composition.
    """
    if d not in DIRECT_LIMITS or N > DIRECT_LIMITS[d]:
        raise GuardError(f"direct ideal count supports d=2 with N<=10 or d=3 with N<=3, got d={d}, N={N}")
    h = d + d * (d - 1) // 2
    counts = []
    for n in range(N + 1):
        jobs = [(d, p, exps) for exps in compositions(n, h)]
        counts.append(sum(_run(_direct_chunk, jobs, workers)))
    return CountTable(p, counts)


# -- pair count --------------------------------------------------------------

PAIRS_GUARD = 50_000_000


def _bracket_tensor(L: LieStructure) -> np.ndarray:
    # C[k] is the d' x d matrix of a -> [a, x_k]
    C = np.zeros((L.d, L.dprime, L.d), dtype=np.int64)
    for k in range(L.d):
        for i in range(L.d):
            e = [0] * L.d
            e[i] = 1
            C[k, :, i] = L.bracket_x(e, k)
    return C


def _batch_gens(B: np.ndarray, C: np.ndarray) -> np.ndarray:
    """Bracket generators ``[column, x_k]`` for a batch: shape (m, d*d, d')."""
    G = np.einsum("kyi,bic->bcky", C, B)
    m, d, _, dp = G.shape
    return G.reshape(m, d * d, dp)


def _det(M):
    # M has shape (m, r, r) with r <= 3
    r = M.shape[1]
    if r == 1:
        return M[:, 0, 0]
    if r == 2:
        return M[:, 0, 0] * M[:, 1, 1] - M[:, 0, 1] * M[:, 1, 0]
    return (
        M[:, 0, 0] * (M[:, 1, 1] * M[:, 2, 2] - M[:, 1, 2] * M[:, 2, 1])
        - M[:, 0, 1] * (M[:, 1, 0] * M[:, 2, 2] - M[:, 1, 2] * M[:, 2, 0])
        + M[:, 0, 2] * (M[:, 1, 0] * M[:, 2, 1] - M[:, 1, 1] * M[:, 2, 0])
    )


def _vp(x: np.ndarray, p: int) -> np.ndarray:
    x = np.abs(x)
    if (x == 0).any():
        raise ValueError("lattice is not of full rank")
    v = np.zeros(len(x), dtype=np.int64)
    while True:
        hit = x % p == 0
        if not hit.any():
            return v
        v += hit
        x = np.where(hit, x // p, x)


def _batch_exponents(G: np.ndarray, p: int) -> np.ndarray:
    """Sorted elementary-divisor exponents of the lattices spanned by the rows of ``G``.

    Uses determinantal divisors: the gcd of the ``r x r`` minors is the
    product of the first ``r`` elementary divisors.  Needs ``n <= 3`` columns.
    """
    m, rows, n = G.shape
    if n > 3:
        raise ValueError("batched divisors support rank <= 3")
    prev = np.zeros(m, dtype=np.int64)
    out = np.zeros((m, n), dtype=np.int64)
    for r in range(1, n + 1):
        g = np.zeros(m, dtype=np.int64)
        for rs in combinations(range(rows), r):
            sub = G[:, rs, :]
            for cs in combinations(range(n), r):
                g = np.gcd(g, _det(sub[:, :, cs]))
        val = _vp(g, p)
        out[:, r - 1] = val - prev
        prev = val
    return out


def _python_exponents(G: np.ndarray, p: int) -> np.ndarray:
    return np.array([divisor_exponents(g.tolist(), p) for g in G], dtype=np.int64)


def _exponents(G, p):
    return _batch_exponents(G, p) if G.shape[2] <= 3 else _python_exponents(G, p)


def _int64_safe(d: int, p: int, N: int) -> bool:
    # 3x3 minors of entries below p^N must fit in int64
    dp = d * (d - 1) // 2
    r = min(dp, 3)
    return 6 * (p**N) ** r < 2**62


def _pairs_chunk(args):
    d, p, N, exps = args
    L = build_lie_ring(d)
    C = _bracket_tensor(L)
    e = sum(exps)
    cache: Dict[Tuple[int, ...], Counter] = {}
    local = [0] * (N + 1)
    for B in _hnf_batches(d, p, exps):
        keys, mult = np.unique(_exponents(_batch_gens(B, C), p), axis=0, return_counts=True)
        for key, m in zip(map(tuple, keys.tolist()), mult.tolist()):
            if key not in cache:
                cache[key] = _superlattice_counts(key, p, N - e)
            for f, c in cache[key].items():
                local[e + f] += m * c * p ** (f * d)
    return local


def _superlattice_counts(exps: Tuple[int, ...], p: int, fmax: int, maximal_only=False, by_type=False):
    """Count ``M`` with ``K <= M <= Z^n`` for ``K = diag(p^exps)``, by index exponent.

    The count depends only on the elementary divisors of ``K``, so the
    diagonal representative is used.
    """
    n = len(exps)
    gens = [tuple(p ** exps[i] if i == j else 0 for i in range(n)) for j in range(n)]
    det = p ** sum(exps)
    out = defaultdict(Counter) if by_type else Counter()
    for f in range(min(fmax, sum(exps)) + 1):
        for M in superlattices(gens, p, det, index=p**f):
            if maximal_only or by_type:
                t = lattice_type(M, p)
                if maximal_only and not t.maximal:
                    continue
                if by_type:
                    out[f][(t.I, tuple(sorted(t.r.items())))] += 1
                    continue
            out[f] += 1
    return out


def count_ideals_pairs(d: int, p: int, N: int, workers: Optional[int] = None) -> CountTable:
    """``a_{p^n} = sum |Z^{d'} : M|^d`` over pairs ``(lbar, M)`` with ``[lbar, L] <= M``.

    ``lbar`` runs over sublattices of ``Z^d`` and ``M`` over all sublattices of
    the centre; ``n`` is the sum of the two index exponents.  An ideal is
    determined by ``lbar``, ``M`` and a lift of the basis of ``lbar`` modulo
    ``M``, whence the weight.
    """
    if d > 4:
        raise GuardError("pair count supports d <= 4")
    est = sum(num_sublattices(d, p, e) for e in range(N + 1))
    if est > PAIRS_GUARD or not _int64_safe(d, p, N):
        raise GuardError(f"pair count for d={d}, p={p}, N={N} exceeds the guard ({est} lattices)")
    jobs = [(d, p, N, exps) for e in range(N + 1) for exps in compositions(e, d)]
    counts = [0] * (N + 1)
    for part in _run(_pairs_chunk, jobs, workers):
        for n, c in enumerate(part):
            counts[n] += c
    return CountTable(p, counts)


# -- stratification ----------------------------------------------------------


def overlap_invariant(S: Sequence[int], q: Dict[int, int], T: Sequence[int], r: Dict[int, int]):
    """``(I, J)`` measuring the overlap of a type ``(S, q)`` with a maximal type ``(T, r)``.

    With ``Q_k = q_0 + q_{s_1} + .. + q_{s_k}`` and ``R_l = r_{t_1} + .. + r_{t_l}``,
    ``s_k`` is in ``I`` and ``t_l`` in ``J`` when ``R_{l-1} <= Q_{k-1} < R_l``
    for some ``k >= 1`` and ``l >= 1``.  ``Q_{k-1}`` is the level of the
    image just below the jump ``phi(s_k)``.
    """
    Q = [q.get(0, 0)]
    for s in S:
        Q.append(Q[-1] + q[s])
    R = [0]
    for t in T:
        R.append(R[-1] + r[t])
    I, J = set(), set()
    for k in range(1, len(S) + 1):
        for l in range(1, len(T) + 1):
            if R[l - 1] <= Q[k - 1] < R[l]:
                I.add(S[k - 1])
                J.add(T[l - 1])
    return tuple(sorted(I)), tuple(sorted(J))


def _strat_chunk(args):
    d, p, N, exps = args
    L = build_lie_ring(d)
    C = _bracket_tensor(L)
    e = sum(exps)
    cache = {}
    local: Dict[str, List[int]] = defaultdict(lambda: [0] * (N + 1))
    for B in _hnf_batches(d, p, exps):
        own = _exponents(np.transpose(B, (0, 2, 1)), p)
        img = _exponents(_batch_gens(B, C), p)
        keys, mult = np.unique(np.concatenate([own, img], axis=1), axis=0, return_counts=True)
        for row, m in zip(keys.tolist(), mult.tolist()):
            tl = type_from_exponents(row[:d])
            key = tuple(row[d:])
            if key not in cache:
                cache[key] = _superlattice_counts(key, p, N - e, maximal_only=True, by_type=True)
            for f, types in cache[key].items():
                for (T, r_items), c in types.items():
                    I, J = overlap_invariant(tl.I, tl.r, T, dict(r_items))
                    local[SubsetPair(I, J).key][e + f] += m * c * p ** (f * d)
    return dict(local)


STRAT_LIMITS = {2: 8, 3: 6, 4: 4}


def stratified_counts(d: int, p: int, N: int, workers: Optional[int] = None) -> Dict[str, CountTable]:
    """Pair counts restricted to maximal ``M``, split by the overlap invariant.

    Keys are ``"I=..|J=.."`` strings; the stratum of ``(I, J)`` is the series
    of ``A_{I,J} * zeta_{Z_p^d}`` at ``P = p``.
    """
    if d > 4 or N > STRAT_LIMITS.get(d, -1):
        raise GuardError(f"stratified counts support (d, N) within {STRAT_LIMITS}")
    jobs = [(d, p, N, exps) for e in range(N + 1) for exps in compositions(e, d)]
    merged: Dict[str, List[int]] = {pair.key: [0] * (N + 1) for pair in enumerate_pairs(ZetaParams(d))}
    for part in _run(_strat_chunk, jobs, workers):
        for k, vals in part.items():
            acc = merged.setdefault(k, [0] * (N + 1))
            for i, v in enumerate(vals):
                acc[i] += v
    return {k: CountTable(p, merged[k]) for k in sorted(merged)}


def convolve_homothety(counts: Sequence[int], d: int, p: int) -> List[int]:
    """Multiply a series by ``zeta_p((d+d')s - dd')`` at ``P = p``."""
    dp = d * (d - 1) // 2
    step, weight = d + dp, p ** (d * dp)
    out = list(counts)
    for n in range(step, len(out)):
        out[n] += weight * out[n - step]
    return out
