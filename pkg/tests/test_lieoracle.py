import random

import pytest

from nilzeta.lattice import GuardError, LatticeBasis, hnf
from nilzeta.laurent import fr_mul, fr_series
from nilzeta.lieoracle import (
    build_lie_ring,
    commutator_image,
    compositions,
    convolve_homothety,
    count_ideals_direct,
    count_ideals_pairs,
    lattice_type,
    overlap_invariant,
    phi_type_law_check,
    predicted_phi_type,
    random_lattice,
    stratified_counts,
    type_from_exponents,
)
from nilzeta.zetacore import enumerate_pairs, term_A_IJ, zeta_free_abelian


def diag(*entries):
    n = len(entries)
    return LatticeBasis([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])


def series_at(F, p, N):
    return [c.evaluate(p=p).get(0, 0) for c in fr_series(F, N)]


class TestLieRing:
    def test_ranks(self):
        assert build_lie_ring(2).rank == 3
        assert build_lie_ring(3).dprime == 3
        assert build_lie_ring(4).rank == 10
        with pytest.raises(ValueError):
            build_lie_ring(1)

    def test_heisenberg_bracket(self):
        L = build_lie_ring(2)
        assert L.bracket([1, 0, 0], [0, 1, 0]) == [0, 0, 1]
        assert L.bracket([0, 1, 0], [1, 0, 0]) == [0, 0, -1]

    @pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
    def test_antisymmetry_and_centre(self, d):
        L = build_lie_ring(d)
        basis = [[int(i == j) for j in range(L.rank)] for i in range(L.rank)]
        for u in basis:
            for v in basis:
                assert L.bracket(u, v) == [-x for x in L.bracket(v, u)]
                if u.index(1) >= d:
                    assert not any(L.bracket(u, v))
        image = [L.bracket(u, v)[d:] for u in basis for v in basis]
        assert hnf(image, L.dprime).index == 1


class TestCommutatorImage:
    def test_examples(self):
        L = build_lie_ring(3)
        assert commutator_image(diag(1, 1, 1), L) == diag(1, 1, 1)
        assert commutator_image(diag(2, 2, 2), L) == diag(2, 2, 2)
        assert commutator_image(diag(2, 1, 1), L) == diag(1, 1, 1)

    def test_basis_independent_and_homogeneous(self):
        L = build_lie_ring(4)
        rng = random.Random(3)
        for _ in range(20):
            lbar = random_lattice(4, 3, rng, 2)
            cols = lbar.columns()
            shuffled = [tuple(a + b for a, b in zip(cols[0], cols[1]))] + cols[1:]
            assert commutator_image(hnf(shuffled, 4), L) == commutator_image(lbar, L)
            assert commutator_image(lbar.scaled(3), L) == commutator_image(lbar, L).scaled(3)


class TestLatticeTypes:
    def test_examples(self):
        t = lattice_type(diag(4, 2, 1), 2)
        assert t.I == (1, 2) and t.r == {0: 0, 1: 1, 2: 1}
        t = lattice_type(diag(3, 3, 3), 3)
        assert t.I == () and t.r == {0: 1} and not t.maximal
        t = lattice_type(diag(5, 1, 1), 5)
        assert t.I == (2,) and t.r == {0: 0, 2: 1} and t.maximal

    def test_round_trip(self):
        for exps in [(0, 0, 3), (1, 2, 2, 5), (2,), (0, 1, 1)]:
            assert type_from_exponents(exps).exponents() == sorted(exps)

    def test_rejects_mixed_primes(self):
        with pytest.raises(ValueError):
            lattice_type(diag(2, 3), 2)

    def test_vestigial_jump(self):
        t = predicted_phi_type(type_from_exponents([0, 0, 1]), 3)
        assert t.I == (3,) and t.exponents() == [0, 0, 0]

    @pytest.mark.parametrize("d,p", [(3, 2), (4, 2), (4, 3), (5, 2)])
    def test_phi_law(self, d, p):
        assert phi_type_law_check(d, 40, p=p, seed=d)

    def test_as_json(self):
        assert type_from_exponents([0, 1, 1]).as_json() == {"n": 3, "I": [1], "r": {"0": 0, "1": 1}}


class TestOverlap:
    def test_example(self):
        assert overlap_invariant((1,), {0: 0, 1: 1}, (1,), {1: 2}) == ((1,), (1,))

    def test_empty_types(self):
        assert overlap_invariant((), {0: 2}, (1,), {1: 1}) == ((), ())

    def test_level_below_the_jump(self):
        # the image is flat below phi(1) = 2, so nothing overlaps the first jump of M
        assert overlap_invariant((1,), {0: 1, 1: 1}, (2,), {2: 1}) == ((), ())


class TestCounts:
    def test_compositions(self):
        assert list(compositions(2, 2)) == [(0, 2), (1, 1), (2, 0)]
        assert len(list(compositions(3, 4))) == 20

    def test_direct_examples(self):
        assert count_ideals_direct(2, 2, 2).counts == [1, 3, 7]
        assert count_ideals_direct(2, 3, 1).counts == [1, 4]
        assert count_ideals_direct(3, 5, 0).counts == [1]

    def test_pairs_examples(self):
        for p in (2, 3, 5, 7):
            assert count_ideals_pairs(2, p, 2).counts[2] == p * p + p + 1
        # 1 + p + 2p^2 + p^3 at p = 2
        assert count_ideals_pairs(2, 2, 3).counts[3] == 19
        assert count_ideals_pairs(3, 2, 1).counts == [1, 7]

    @pytest.mark.parametrize("p", [2, 3])
    def test_pairs_match_direct(self, p):
        assert count_ideals_pairs(2, p, 6).counts == count_ideals_direct(2, p, 6).counts

    def test_pairs_match_direct_d3(self):
        assert count_ideals_pairs(3, 2, 2).counts == count_ideals_direct(3, 2, 2).counts

    def test_frozen_pairs(self):
        assert count_ideals_pairs(2, 2, 8).counts == [1, 3, 7, 19, 43, 91, 203, 427, 875]
        assert count_ideals_pairs(3, 2, 4).counts == [1, 7, 35, 211, 1043]
        assert count_ideals_pairs(4, 2, 3).counts == [1, 15, 155, 1955]

    def test_workers_do_not_change_totals(self):
        assert count_ideals_pairs(3, 2, 3, workers=2).counts == count_ideals_pairs(3, 2, 3).counts

    def test_guards(self):
        with pytest.raises(GuardError):
            count_ideals_direct(2, 2, 11)
        with pytest.raises(GuardError):
            count_ideals_direct(4, 2, 1)
        with pytest.raises(GuardError):
            count_ideals_pairs(5, 2, 1)
        with pytest.raises(GuardError):
            stratified_counts(3, 2, 7)

    def test_json(self):
        assert count_ideals_pairs(2, 2, 2).as_json() == {"p": 2, "counts": ["1", "3", "7"]}


class TestStratified:
    def test_heisenberg(self):
        out = stratified_counts(2, 3, 5)
        assert list(out) == ["I=|J="]
        assert out["I=|J="].counts == [1, 4, 13, 40, 121, 364]

    def test_d3_frozen(self):
        out = stratified_counts(3, 2, 5)
        assert out["I=|J="].counts == [1, 7, 35, 155, 707, 3507]
        assert out["I=1|J=2"].counts == [0, 0, 0, 56, 336, 1568]

    @pytest.mark.parametrize("d,p,N", [(3, 2, 5), (3, 3, 4), (4, 2, 3)])
    def test_strata_match_summands(self, d, p, N):
        out = stratified_counts(d, p, N)
        assert set(out) == {pr.key for pr in enumerate_pairs(d)}
        for pair in enumerate_pairs(d):
            F = fr_mul(term_A_IJ(pair, d), zeta_free_abelian(d))
            assert out[pair.key].counts == series_at(F, p, N), pair.key

    @pytest.mark.parametrize("d,p", [(2, 2), (2, 3), (3, 2)])
    def test_totals_reproduce_pairs(self, d, p):
        N = 5
        strata = stratified_counts(d, p, N)
        total = [sum(t.counts[n] for t in strata.values()) for n in range(N + 1)]
        assert convolve_homothety(total, d, p) == count_ideals_pairs(d, p, N).counts

    def test_convolve(self):
        assert convolve_homothety([1, 0, 0, 0, 0, 0, 0], 2, 2) == [1, 0, 0, 4, 0, 0, 16]
