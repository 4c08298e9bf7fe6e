import sys
import os
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import warnings

import pytest

from lie_tools.chern import FormalBundle, class_to_char
from lie_tools.errors import DomainError, TooLarge
from lie_tools.free_lie import (
    HallBasis,
    WittTable,
    count_max_depth,
    depth,
    hall_basis,
    lie_bundle,
    lie_char,
    lie_sw_class,
    lie_total_class,
    moebius,
    partial_dim,
    pbw_dimension_series,
    tree_key,
    witt_dim,
)
from lie_tools.graded_ring import Field, GradedSeries
from loci.acceptance import HALL_WORDS_N2_K5, reference_class


@pytest.fixture(scope="module")
def basis_n2():
    """Hall basis on two letters through length 8."""
    return HallBasis(2, 8)


@pytest.fixture(scope="module")
def basis_n3():
    """Hall basis on three letters through length 7."""
    return HallBasis(3, 7)


class TestWitt:

    @pytest.mark.parametrize("d, expected", [(1, 1), (2, -1), (6, 1), (12, 0), (30, -1)])
    def test_moebius(self, d, expected):
        assert moebius(d) == expected

    def test_moebius_without_deprecation(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error", DeprecationWarning)
            assert [moebius(d) for d in (1, 2, 3, 4, 5, 6)] == [1, -1, -1, 0, -1, 1]

    def test_moebius_domain(self):
        with pytest.raises(DomainError):
            moebius(0)

    def test_two_letters(self):
        assert [witt_dim(2, k) for k in range(1, 6)] == [2, 1, 2, 3, 6]

    @pytest.mark.parametrize("n", [1, 2, 3, 7])
    def test_first_level(self, n):
        assert witt_dim(n, 1) == n

    def test_three_letters(self):
        assert witt_dim(3, 2) == 3
        assert witt_dim(3, 3) == 8

    def test_partial(self):
        # 3 + 3 + 8
        assert partial_dim(3, 3) == 14
        assert partial_dim(3, 0) == 0

    def test_table(self):
        table = WittTable.build(4, 3)
        assert table.entries == (4, 6, 20)
        assert table.cumulative == (4, 10, 30)
        assert table.partial(2) == 10
        assert table.d(3) == 20

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_dimension_series(self, n):
        series = pbw_dimension_series(n, 12)
        assert list(series) == [n ** j for j in range(13)]

    def test_domain(self):
        with pytest.raises(DomainError):
            witt_dim(0, 3)


class TestHallBasis:

    def test_small_levels(self):
        levels = hall_basis(2, 2)
        assert [w.render() for w in levels[0]] == ["u", "v"]
        assert [w.render() for w in levels[1]] == ["(u v)"]
        assert levels[1][0].render(compact=True) == "(u,v)"

    def test_length_five_words(self, basis_n2):
        assert [w.render(compact=True) for w in basis_n2.words(5)] == HALL_WORDS_N2_K5

    @pytest.mark.parametrize("n, kmax", [(1, 4), (2, 8), (3, 7), (4, 5)])
    def test_counts_match_witt(self, n, kmax):
        basis = HallBasis(n, kmax)
        for k in range(1, kmax + 1):
            assert len(basis.words(k)) == witt_dim(n, k)

    def test_structural_conditions(self, basis_n3):
        for word in basis_n3:
            tree = word.tree
            if word.length < 3:
                continue
            left, right = tree
            assert tree_key(left) < tree_key(right)
            if not isinstance(right, int):
                b, c = right
                assert tree_key(b) <= tree_key(left)
                assert tree_key(b) < tree_key(c)

    def test_order_refines_length(self, basis_n2):
        words = list(basis_n2)
        for earlier, later in zip(words, words[1:]):
            assert earlier.length <= later.length
            assert earlier < later

    def test_ranks_are_positions(self, basis_n2):
        for position, word in enumerate(basis_n2, start=1):
            assert word.rank == position
            assert basis_n2.rank(word.tree) == position

    def test_letters_for_larger_alphabets(self, basis_n3):
        assert basis_n3.words(2)[0].render() == "(e1 e2)"

    def test_size_cap(self, monkeypatch):
        monkeypatch.setenv("LIEGIAMBELLI_MAX_CELLS", "10")
        with pytest.raises(TooLarge):
            HallBasis(2, 6)


class TestDepth:

    @pytest.mark.parametrize("tree, expected", [
        ((1, 2), 2),
        ((2, (2, (2, (1, 2)))), 5),
        (((1, 2), (1, (1, 2))), 4),
        (1, 1),
    ])
    def test_examples(self, tree, expected):
        assert depth(tree) == expected

    def test_raw_depth(self, basis_n2):
        word = basis_n2.words(2)[0]
        assert word.raw_depth == 1

    def test_range(self, basis_n3):
        for word in basis_n3:
            p = word.length
            assert p.bit_length() <= word.depth <= p

    @pytest.mark.parametrize("n", range(1, 9))
    def test_sharp_two(self, n):
        assert count_max_depth(n, 2) == n * (n - 1) // 2

    def test_sharp_values(self):
        assert count_max_depth(2, 3) == 2
        # (n-1)n(n+1)(n+2)/8 at n = 3
        assert count_max_depth(3, 4) == 15

    def test_closed_form_matches_basis(self, basis_n2, basis_n3):
        for n, basis, kmax in ((2, basis_n2, 8), (3, basis_n3, 7)):
            for k in range(2, kmax + 1):
                assert len(basis.max_depth_words(k)) == count_max_depth(n, k)

    def test_depth_profile_totals(self, basis_n3):
        profile = basis_n3.depth_profile(5)
        assert sum(profile.values()) == witt_dim(3, 5)
        assert max(profile) == 5


class TestLieClasses:

    def test_first_part_is_the_bundle(self):
        ch = class_to_char(FormalBundle.generic(3, "c", Field.Q, 4))
        assert lie_char(ch, 1) == ch

    @pytest.mark.parametrize("n, k", [(2, 4), (3, 3), (4, 2)])
    def test_rank_is_witt_dimension(self, n, k):
        ch = class_to_char(FormalBundle.generic(n, "c", Field.Q, 3))
        assert lie_char(ch, k).rank == witt_dim(n, k)

    def test_weight_one_coefficients(self):
        c1 = {"c_1": 1}
        assert lie_total_class(5, 2).coefficient(c1) == 4
        assert lie_total_class(2, 4).coefficient(c1) == 6

    def test_cubic_part_at_three(self):
        series = lie_total_class(3, 3)
        # 2 - n - 3n^2/2 + n^4/2 and n^2 - 3 at n = 3
        assert series.coefficient({"c_1": 2}) == 26
        assert series.coefficient({"c_2": 1}) == 6

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_reference_table(self, n, k):
        assert lie_total_class(n, k, 4) == reference_class(n, k)

    @pytest.mark.parametrize("n", range(1, 5))
    @pytest.mark.parametrize("k", range(1, 6))
    def test_integral(self, n, k):
        assert all(c.denominator == 1 for c in lie_total_class(n, k, 4).terms.values())

    def test_honest_plane_bundle(self):
        assert str(lie_total_class(2, 2, 4, formal=False)) == "1 + c_1"

    def test_bundle_rank(self):
        assert lie_bundle(3, 3, 2).rank == 8

    def test_stiefel_whitney_reductions(self):
        w1 = GradedSeries.generator("w", 1, Field.F2, 4)
        w2 = GradedSeries.generator("w", 2, Field.F2, 4)
        assert lie_sw_class(2, 2) == 1 + w1
        assert lie_sw_class(2, 1) == 1 + w1 + w2
        assert lie_sw_class(2, 3).coefficient({"w_1": 1}) == 1
