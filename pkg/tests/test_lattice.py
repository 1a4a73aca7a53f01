import random
from itertools import product

import pytest

from nilzeta.lattice import (
    GuardError,
    LatticeBasis,
    elementary_divisors,
    hnf,
    num_sublattices,
    sublattices,
    superlattices,
)
from nilzeta.laurent import fr_series
from nilzeta.zetacore import zeta_free_abelian


@pytest.mark.parametrize(
    "n,p,e,expected",
    [(2, 2, 1, 3), (3, 2, 1, 7), (1, 5, 4, 1), (3, 3, 2, 130), (4, 2, 3, 1395)],
)
def test_sublattice_counts(n, p, e, expected):
    assert num_sublattices(n, p, e) == expected
    if expected < 2000:
        assert len(set(sublattices(n, p, e))) == expected


@pytest.mark.parametrize("n,p", list(product(range(1, 5), (2, 3))))
def test_counts_match_free_abelian_series(n, p):
    series = fr_series(zeta_free_abelian(n), 4)
    for e, c in enumerate(series):
        assert num_sublattices(n, p, e) == c.evaluate(p=p).get(0, 0)


def test_hnf_is_canonical():
    rng = random.Random(1)
    for _ in range(50):
        H = rng.choice(list(sublattices(3, 2, rng.randint(0, 4))))
        cols = [list(c) for c in H.columns()]
        for _ in range(4):
            a, b = rng.sample(range(3), 2)
            k = rng.randint(-3, 3)
            cols[a] = [x + k * y for x, y in zip(cols[a], cols[b])]
        assert hnf(cols, 3) == H


def test_hnf_shape():
    H = hnf([[4, 0], [6, 2]], 2)
    assert H.rows == ((4, 2), (0, 2))
    for i, row in enumerate(H.rows):
        assert all(x == 0 for x in row[:i])
        assert all(0 <= x < row[i] for x in row[i + 1 :])


def test_hnf_rejects_rank_deficiency():
    with pytest.raises(ValueError):
        hnf([[1, 2], [2, 4]], 2)


def test_membership():
    H = LatticeBasis([[2, 1], [0, 3]])
    assert H.contains((1, 3)) and H.contains((2, 0))
    assert not H.contains((1, 0))
    assert H.coordinates((3, 3)) == (1, 1)
    with pytest.raises(ValueError):
        H.coordinates((0, 1))
    assert H.scaled(2).index == 4 * H.index


def test_elementary_divisors():
    assert elementary_divisors([[2, 0, 0], [0, 6, 0], [0, 0, 12]]) == [2, 6, 12]
    assert elementary_divisors([[2, 4], [6, 8]]) == [2, 4]
    assert elementary_divisors([[0, 0], [0, 3]]) == [3]


def test_superlattices():
    gens = [(4, 0), (0, 2)]
    found = list(superlattices(gens, 2, 8))
    brute = [M for e in range(4) for M in sublattices(2, 2, e) if all(M.contains(g) for g in gens)]
    assert set(found) == set(brute)
    assert len(found) == len(set(found))
    assert all(M.index == 2 for M in superlattices(gens, 2, 8, index=2))


def test_superlattices_rejects_bad_det():
    with pytest.raises(ValueError):
        list(superlattices([(3, 0), (0, 2)], 2, 6))


def test_guard():
    with pytest.raises(GuardError):
        sublattices(6, 3, 8)
