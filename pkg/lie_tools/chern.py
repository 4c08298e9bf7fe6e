"""Characteristic-class calculus on formal bundles."""
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import List, Optional, Sequence

from lie_tools.config import DEFAULT_ORDER
from lie_tools.errors import BadConstantTerm, BadRank, FieldMismatch, UnsupportedField
from lie_tools.graded_ring import Field, GradedSeries

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FormalBundle:
    """A (possibly virtual) bundle known only through its rank and total class"""
    rank: int
    total_class: GradedSeries

    def __post_init__(self):
        if self.total_class.constant_term != 1:
            raise BadConstantTerm(
                f"Total class must have constant term 1, got {self.total_class.constant_term}")

    @property
    def field(self) -> Field:
        return self.total_class.field

    @property
    def order(self) -> int:
        return self.total_class.order

    @classmethod
    def generic(cls, rank: int, family: str = "c", field: Field = Field.Q,
                order: int = DEFAULT_ORDER, honest: bool = True) -> "FormalBundle":
        """Rank-`rank` bundle with independent classes x_1, x_2, ...

        An honest bundle stops at x_rank; a formal one carries generators up
        to the truncation order whatever the rank.
        """
        count = rank if honest else order
        return cls(rank, GradedSeries.total_class(family, count, field, order))

    @classmethod
    def trivial(cls, rank: int, field: Field = Field.Q, order: int = DEFAULT_ORDER) -> "FormalBundle":
        return cls(rank, GradedSeries.one(field, order))

    def component(self, j: int) -> GradedSeries:
        if j < 0:
            return GradedSeries.zero(self.field, self.order)
        return self.total_class.component(j)

    def __add__(self, other: "FormalBundle") -> "FormalBundle":
        return whitney(self, other)

    def __sub__(self, other: "FormalBundle") -> "FormalBundle":
        return difference(self, other)

    def dual(self) -> "FormalBundle":
        return dual(self)

    def to_dict(self) -> dict:
        return {"rank": self.rank, "class": self.total_class.to_dict()}

    @classmethod
    def from_dict(cls, data) -> "FormalBundle":
        return cls(int(data["rank"]), GradedSeries.from_dict(data["class"]))


@dataclass(frozen=True)
class ChernCharacter:
    series: GradedSeries

    def __post_init__(self):
        if self.series.field is not Field.Q:
            raise UnsupportedField("Chern characters live over Q")

    @property
    def rank(self) -> Fraction:
        return self.series.constant_term

    @property
    def order(self) -> int:
        return self.series.order

    def __add__(self, other: "ChernCharacter") -> "ChernCharacter":
        return ChernCharacter(self.series + other.series)

    def __mul__(self, other: "ChernCharacter") -> "ChernCharacter":
        return ChernCharacter(self.series * other.series)

    def __pow__(self, exponent: int) -> "ChernCharacter":
        return ChernCharacter(self.series ** exponent)

    def rescale(self, d) -> "ChernCharacter":
        return ChernCharacter(self.series.rescale(d))


def class_to_char(bundle: FormalBundle) -> ChernCharacter:
    """Newton power sums from the Chern classes, divided by factorials"""
    if bundle.field is not Field.Q:
        raise UnsupportedField("class_to_char needs a bundle over Q")
    order = bundle.order
    c = bundle.total_class.components()
    p: List[GradedSeries] = [GradedSeries.constant(bundle.rank, Field.Q, order)]
    ch = p[0]
    for k in range(1, order + 1):
        acc = c[k].scale((-1) ** (k - 1) * k)
        for i in range(1, k):
            if not c[i].is_zero and not p[k - i].is_zero:
                acc = acc + (c[i] * p[k - i]).scale((-1) ** (i - 1))
        p.append(acc)
        ch = ch + acc.scale(Fraction(1, factorial(k)))
    return ChernCharacter(ch)


def char_to_class(ch: ChernCharacter) -> FormalBundle:
    rank = ch.rank
    if rank.denominator != 1:
        raise BadRank(f"Weight-0 part {rank} of a Chern character must be an integer")
    order = ch.order
    parts = ch.series.components()
    p = [None] + [parts[k].scale(factorial(k)) for k in range(1, order + 1)]
    e = [GradedSeries.one(Field.Q, order)]
    for k in range(1, order + 1):
        acc = GradedSeries.zero(Field.Q, order)
        for i in range(1, k + 1):
            if not e[k - i].is_zero and not p[i].is_zero:
                acc = acc + (e[k - i] * p[i]).scale((-1) ** (i - 1))
        e.append(acc.scale(Fraction(1, k)))
    return FormalBundle(rank.numerator, sum(e[1:], e[0]))


def _check_pair(a: FormalBundle, b: FormalBundle):
    if a.field is not b.field:
        raise FieldMismatch(f"Bundles over {a.field.value} and {b.field.value} cannot be combined")


def whitney(a: FormalBundle, b: FormalBundle) -> FormalBundle:
    _check_pair(a, b)
    return FormalBundle(a.rank + b.rank, a.total_class * b.total_class)


def difference(b: FormalBundle, a: FormalBundle) -> FormalBundle:
    """The virtual bundle b - a"""
    _check_pair(a, b)
    return FormalBundle(b.rank - a.rank, b.total_class * a.total_class.invert())


def dual(a: FormalBundle) -> FormalBundle:
    if a.field is Field.F2:
        return a
    return FormalBundle(a.rank, a.total_class.rescale(-1))


class TSeries:
    """Power series in an auxiliary variable t with GradedSeries coefficients,
    truncated at t^t_order."""

    def __init__(self, coeffs: Sequence[GradedSeries], t_order: int):
        if not coeffs:
            raise ValueError("TSeries needs at least a constant coefficient")
        self.t_order = t_order
        self.field = coeffs[0].field
        self.order = min(c.order for c in coeffs)
        padded = [c.truncate(self.order) for c in coeffs[: t_order + 1]]
        while len(padded) < t_order + 1:
            padded.append(GradedSeries.zero(self.field, self.order))
        self.coeffs = padded

    def coefficient(self, i: int) -> GradedSeries:
        if i < 0 or i > self.t_order:
            return GradedSeries.zero(self.field, self.order)
        return self.coeffs[i]

    def __mul__(self, other: "TSeries") -> "TSeries":
        t_order = min(self.t_order, other.t_order)
        out = []
        for j in range(t_order + 1):
            acc = GradedSeries.zero(self.field, min(self.order, other.order))
            for i in range(j + 1):
                a, b = self.coeffs[i], other.coeffs[j - i]
                if not a.is_zero and not b.is_zero:
                    acc = acc + a * b
            out.append(acc)
        return TSeries(out, t_order)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TSeries):
            return NotImplemented
        return self.t_order == other.t_order and self.coeffs == other.coeffs

    __hash__ = None

    def stretch(self, k: int) -> "TSeries":
        """Substitute t -> t^k"""
        out = [GradedSeries.zero(self.field, self.order) for _ in range(self.t_order + 1)]
        for i in range(0, self.t_order // k + 1):
            out[i * k] = self.coeffs[i]
        return TSeries(out, self.t_order)

    def __repr__(self):
        body = ", ".join(f"t^{i}: {c}" for i, c in enumerate(self.coeffs) if not c.is_zero)
        return f"TSeries({body})"


def geometric_series(ch: ChernCharacter, t_order: int) -> TSeries:
    """1/(1 - ch t), i.e. the characters of the tensor powers of E"""
    powers = [GradedSeries.one(Field.Q, ch.order)]
    for _ in range(t_order):
        powers.append(powers[-1] * ch.series)
    return TSeries(powers, t_order)


def symmetric_series(ch: ChernCharacter, t_order: int) -> TSeries:
    """Characters of the symmetric powers S^i(E) as the coefficients of t^i.

    Uses j s_j = sum_k rescale(ch, k) s_{j-k}, the coefficient form of
    s(t) = exp(sum_k rescale(ch, k) t^k / k).
    """
    if ch.series.field is not Field.Q:
        raise UnsupportedField("symmetric_series needs a character over Q")
    adams = [None] + [ch.series.rescale(k) for k in range(1, t_order + 1)]
    s = [GradedSeries.one(Field.Q, ch.order)]
    for j in range(1, t_order + 1):
        acc = GradedSeries.zero(Field.Q, ch.order)
        for k in range(1, j + 1):
            acc = acc + adams[k] * s[j - k]
        s.append(acc.scale(Fraction(1, j)))
    return TSeries(s, t_order)


def pbw_identity_holds(ch: ChernCharacter, lie_chars: Sequence[ChernCharacter],
                       t_order: Optional[int] = None) -> bool:
    """Check prod_k s(L^k)(t^k) == 1/(1 - ch t) through t^t_order.

    `lie_chars[k-1]` is the character of the length-k free Lie part.
    """
    t_order = len(lie_chars) if t_order is None else t_order
    if len(lie_chars) < t_order:
        raise ValueError(f"Need {t_order} Lie characters, got {len(lie_chars)}")
    product = TSeries([GradedSeries.one(Field.Q, ch.order)], t_order)
    for k in range(1, t_order + 1):
        product = product * symmetric_series(lie_chars[k - 1], t_order).stretch(k)
    expected = geometric_series(ch, t_order)
    if product != expected:
        logger.warning(f"PBW product identity fails through t^{t_order}")
        return False
    return True
