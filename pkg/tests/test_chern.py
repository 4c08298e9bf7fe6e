import sys
import os
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import random
from fractions import Fraction

import pytest
from sympy import binomial

from lie_tools.chern import (
    ChernCharacter,
    FormalBundle,
    TSeries,
    char_to_class,
    class_to_char,
    difference,
    dual,
    geometric_series,
    pbw_identity_holds,
    symmetric_series,
    whitney,
)
from lie_tools.errors import BadConstantTerm, BadRank, FieldMismatch, UnsupportedField
from lie_tools.free_lie import lie_char
from lie_tools.graded_ring import Field, GradedSeries
from loci.acceptance import random_series

Q, F2 = Field.Q, Field.F2


def gen(family, index, field=Q, order=4):
    return GradedSeries.generator(family, index, field, order)


@pytest.fixture
def line_bundle():
    """Rank-1 bundle with total class 1 + c_1."""
    return FormalBundle(1, 1 + gen("c", 1))


@pytest.fixture
def plane_distribution():
    """A rank-2 real bundle V with w(V) = 1 + v_1 + v_2."""
    return FormalBundle.generic(2, "v", F2, 4)


class TestFormalBundle:

    def test_constant_term_must_be_one(self):
        with pytest.raises(BadConstantTerm):
            FormalBundle(1, 2 + gen("c", 1))

    def test_generic_honest_and_formal(self):
        honest = FormalBundle.generic(2, "c", Q, 4)
        formal = FormalBundle.generic(2, "c", Q, 4, honest=False)
        assert honest.total_class == 1 + gen("c", 1) + gen("c", 2)
        assert formal.total_class.coefficient({"c_4": 1}) == 1

    def test_serialization(self, line_bundle):
        data = line_bundle.to_dict()
        assert data["rank"] == 1
        assert FormalBundle.from_dict(data) == line_bundle


class TestClassToChar:

    def test_line_bundle_is_exponential(self, line_bundle):
        assert class_to_char(line_bundle).series == gen("c", 1).exp()

    def test_trivial_bundle(self):
        ch = class_to_char(FormalBundle.trivial(5))
        assert ch.series == GradedSeries.constant(5)

    def test_rank_two(self):
        c1, c2 = gen("c", 1, Q, 3), gen("c", 2, Q, 3)
        bundle = FormalBundle(2, 1 + c1 + c2)
        # Newton: p_2 = c_1^2 - 2c_2, p_3 = c_1^3 - 3c_1c_2 (c_3 = 0)
        expected = 2 + c1 + (c1 * c1 - 2 * c2) / 2 + (c1 ** 3 - 3 * c1 * c2) / 6
        assert class_to_char(bundle).series == expected

    def test_needs_rationals(self, plane_distribution):
        with pytest.raises(UnsupportedField):
            class_to_char(plane_distribution)

    def test_additivity(self):
        rng = random.Random(7)
        for _ in range(100):
            a = FormalBundle(rng.randint(0, 3), random_series(rng, Q, 4, ("c",), constant=1))
            b = FormalBundle(rng.randint(0, 3), random_series(rng, Q, 4, ("t",), constant=1))
            assert class_to_char(whitney(a, b)) == class_to_char(a) + class_to_char(b)


class TestCharToClass:

    def test_round_trip(self):
        rng = random.Random(99)
        for _ in range(500):
            order = rng.randint(1, 6)
            bundle = FormalBundle(rng.randint(0, 5), random_series(rng, Q, order, ("c", "v"), constant=1))
            assert char_to_class(class_to_char(bundle)) == bundle

    def test_round_trip_from_character(self):
        rng = random.Random(5)
        for _ in range(200):
            series = random_series(rng, Q, rng.randint(1, 5), ("c",), constant=rng.randint(0, 4))
            ch = ChernCharacter(series)
            assert class_to_char(char_to_class(ch)) == ch

    def test_constant_character(self):
        bundle = char_to_class(ChernCharacter(GradedSeries.constant(3)))
        assert bundle.rank == 3
        assert bundle.total_class.is_one

    def test_non_integer_rank(self):
        with pytest.raises(BadRank):
            char_to_class(ChernCharacter(GradedSeries.constant(Fraction(1, 2))))

    def test_second_lie_power_of_plane_bundle(self):
        ch = class_to_char(FormalBundle.generic(2, "c", Q, 4))
        # L^2 of a rank-2 bundle is its determinant line
        assert char_to_class(lie_char(ch, 2)) == FormalBundle(1, 1 + gen("c", 1))


class TestWhitneyAndDifference:

    def test_whitney_with_lie_square(self, plane_distribution):
        lie_square = FormalBundle(1, 1 + gen("v", 1, F2))
        total = whitney(plane_distribution, lie_square)
        assert total.rank == 3
        assert total.total_class == plane_distribution.total_class * lie_square.total_class

    def test_whitney_with_trivial(self, line_bundle):
        total = line_bundle + FormalBundle.trivial(4)
        assert total.rank == 5
        assert total.total_class == line_bundle.total_class

    def test_whitney_commutes(self, line_bundle):
        other = FormalBundle.generic(3, "t", Q, 4)
        assert whitney(line_bundle, other) == whitney(other, line_bundle)

    def test_field_mismatch(self, line_bundle, plane_distribution):
        with pytest.raises(FieldMismatch):
            whitney(line_bundle, plane_distribution)

    def test_tangent_minus_flag(self, plane_distribution):
        tangent = FormalBundle.generic(4, "t", F2, 4)
        flag = whitney(plane_distribution, FormalBundle(1, 1 + gen("v", 1, F2)))
        virtual = difference(tangent, flag)
        t2, v2, v1 = gen("t", 2, F2), gen("v", 2, F2), gen("v", 1, F2)
        assert virtual.rank == 1
        assert virtual.component(2) == t2 + v2 + v1 * v1

    def test_difference_with_itself(self, line_bundle):
        zero = difference(line_bundle, line_bundle)
        assert zero.rank == 0
        assert zero.total_class.is_one

    def test_difference_then_whitney(self, line_bundle):
        b = FormalBundle.generic(3, "t", Q, 4)
        assert whitney(b - line_bundle, line_bundle) == b


class TestDual:

    def test_sign_rule(self):
        c1, c2 = gen("c", 1), gen("c", 2)
        assert dual(FormalBundle(2, 1 + c1 + c2)).total_class == 1 - c1 + c2

    def test_involution(self):
        bundle = FormalBundle.generic(3, "c", Q, 4)
        assert bundle.dual().dual() == bundle

    def test_identity_mod_two(self, plane_distribution):
        assert dual(plane_distribution) == plane_distribution

    def test_dual_of_sum(self, line_bundle):
        other = FormalBundle.generic(2, "t", Q, 4)
        assert dual(whitney(line_bundle, other)) == whitney(dual(line_bundle), dual(other))


class TestSymmetricSeries:

    def test_line_bundle_is_geometric(self, line_bundle):
        ch = class_to_char(line_bundle)
        s = symmetric_series(ch, 5)
        one_minus = TSeries([GradedSeries.one(), -ch.series], 5)
        assert s * one_minus == TSeries([GradedSeries.one()], 5)

    @pytest.mark.parametrize("rank", [1, 2, 3])
    def test_trivial_bundle_counts(self, rank):
        s = symmetric_series(class_to_char(FormalBundle.trivial(rank)), 6)
        for i in range(7):
            assert s.coefficient(i) == GradedSeries.constant(int(binomial(rank + i - 1, i)))

    def test_needs_rationals(self):
        with pytest.raises(UnsupportedField):
            ChernCharacter(GradedSeries.one(F2))

    def test_stretch(self):
        s = TSeries([GradedSeries.one(), GradedSeries.constant(2), GradedSeries.constant(3)], 4)
        stretched = s.stretch(2)
        assert stretched.coefficient(2) == GradedSeries.constant(2)
        assert stretched.coefficient(1).is_zero
        assert stretched.coefficient(4) == GradedSeries.constant(3)

    def test_geometric_series(self):
        ch = class_to_char(FormalBundle.generic(2, "c", Q, 3))
        g = geometric_series(ch, 3)
        assert g.coefficient(2) == ch.series * ch.series

    @pytest.mark.parametrize("rank", [2, 3])
    def test_tensor_algebra_product_identity(self, rank):
        ch = class_to_char(FormalBundle.generic(rank, "c", Q, 4))
        lies = [lie_char(ch, k) for k in range(1, 6)]
        assert pbw_identity_holds(ch, lies, 5)

    def test_product_identity_detects_wrong_factor(self, caplog):
        ch = class_to_char(FormalBundle.generic(2, "c", Q, 3))
        lies = [lie_char(ch, k) for k in range(1, 4)]
        lies[1] = lies[0]
        assert not pbw_identity_holds(ch, lies, 3)
        assert "fails" in caplog.text
