"""Truncated graded-commutative polynomial arithmetic over Q or F2.

A GradedSeries is a finite sum of monomials in weighted generators
(c_i, w_i, v_i, t_i; generator x_i has weight i) whose total weight is at
most the truncation order. Coefficients are Fractions over Q and 0/1 ints
over F2. Values are immutable; every operation returns a new series.
"""
import logging
import numbers
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Tuple, Union

import numpy as np
from sympy import GF, QQ, Symbol
from sympy.polys.matrices import DomainMatrix

from lie_tools.config import DEFAULT_ORDER, max_cells
from lie_tools.errors import (
    BadConstantTerm,
    FieldMismatch,
    NonIntegralCoefficient,
    NotInvertible,
    ShapeError,
    TooLarge,
    UnsupportedField,
    WeightMismatch,
)

logger = logging.getLogger(__name__)

# Display order of families: manifold classes, distribution classes, then
# the generic Chern and Stiefel-Whitney symbols.
FAMILIES = ("t", "v", "c", "w")
_FAMILY_RANK = {family: rank for rank, family in enumerate(FAMILIES)}
_SUFFIX = {"t": "(M)", "v": "(V)", "c": "", "w": ""}
_SYMBOL = {"t": "w", "v": "w", "c": "c", "w": "w"}

# (family, index, exponent) triples sorted by (family, index)
Monomial = Tuple[Tuple[str, int, int], ...]
Scalar = Union[int, Fraction]


class Field(Enum):
    Q = "Q"
    F2 = "F2"


@dataclass(frozen=True, order=True)
class Generator:
    """A weighted formal generator such as c_2 or w_1(M)"""
    family: str
    index: int

    def __post_init__(self):
        if self.family not in _FAMILY_RANK:
            raise ValueError(f"Unknown generator family {self.family!r}; expected one of {FAMILIES}")
        if not isinstance(self.index, int) or self.index < 1:
            raise ValueError(f"Generator index must be a positive integer, got {self.index!r}")

    @property
    def weight(self) -> int:
        return self.index

    @property
    def name(self) -> str:
        return f"{self.family}_{self.index}"

    @classmethod
    def parse(cls, name: str) -> "Generator":
        family, _, index = name.partition("_")
        try:
            return cls(family, int(index))
        except ValueError:
            raise ValueError(f"Cannot parse generator name {name!r}") from None


@lru_cache(maxsize=None)
def _weight(mono: Monomial) -> int:
    return sum(index * exp for _, index, exp in mono)


@lru_cache(maxsize=1 << 16)
def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps: Dict[Tuple[str, int], int] = {}
    for family, index, exp in a + b:
        exps[(family, index)] = exps.get((family, index), 0) + exp
    return tuple((family, index, exp) for (family, index), exp in sorted(exps.items()))


def _canonical(mono) -> Monomial:
    """Accepts triples, (Generator, exp) pairs or a {name: exp} mapping"""
    if isinstance(mono, Mapping):
        items = [(Generator.parse(name), exp) for name, exp in mono.items()]
    else:
        items = []
        for entry in mono:
            if len(entry) == 3:
                items.append((Generator(entry[0], entry[1]), entry[2]))
            else:
                items.append((entry[0], entry[1]))
    exps: Dict[Tuple[str, int], int] = {}
    for gen, exp in items:
        if exp < 0:
            raise ValueError(f"Negative exponent {exp} for {gen.name}")
        if exp:
            exps[(gen.family, gen.index)] = exps.get((gen.family, gen.index), 0) + exp
    return tuple((family, index, exp) for (family, index), exp in sorted(exps.items()))


def _coerce(value, field: Field):
    if isinstance(value, numbers.Integral):
        value = int(value)
    if field is Field.Q:
        if isinstance(value, str):
            return Fraction(value)
        if isinstance(value, (int, Fraction)):
            return Fraction(value)
        raise TypeError(f"Unsupported coefficient type {type(value).__name__}")
    value = Fraction(value) if not isinstance(value, int) else value
    if isinstance(value, Fraction):
        if value.denominator != 1:
            raise NonIntegralCoefficient(f"Coefficient {value} has no image in F2")
        value = value.numerator
    return value % 2


def _display_key(mono: Monomial):
    factors = sorted(mono, key=lambda f: (_FAMILY_RANK[f[0]], -f[1]))
    return (_weight(mono), tuple((_FAMILY_RANK[f], -i, -e) for f, i, e in factors))


def _factor_name(family: str, index: int, latex: bool) -> str:
    index_text = f"{{{index}}}" if latex and index >= 10 else str(index)
    return f"{_SYMBOL[family]}_{index_text}{_SUFFIX[family]}"


class GradedSeries:
    """Immutable truncated polynomial over Q or F2"""

    __slots__ = ("field", "order", "_terms")

    def __init__(self, field: Field, order: int, terms: Optional[Mapping] = None):
        if not isinstance(order, int) or order < 0:
            raise ValueError(f"Truncation order must be a nonnegative integer, got {order!r}")
        self.field = field
        self.order = order
        clean: Dict[Monomial, Scalar] = {}
        for mono, coeff in (terms or {}).items():
            mono = _canonical(mono)
            if _weight(mono) > order:
                continue
            clean[mono] = clean.get(mono, 0) + _coerce(coeff, field)
        self._terms = self._normalized(clean, field)

    @staticmethod
    def _normalized(terms: Dict[Monomial, Scalar], field: Field) -> Dict[Monomial, Scalar]:
        if field is Field.F2:
            return {m: 1 for m, c in terms.items() if c % 2}
        return {m: c for m, c in terms.items() if c != 0}

    @classmethod
    def _raw(cls, field: Field, order: int, terms: Dict[Monomial, Scalar]) -> "GradedSeries":
        series = cls.__new__(cls)
        series.field = field
        series.order = order
        series._terms = cls._normalized(terms, field)
        return series

    # constructors

    @classmethod
    def zero(cls, field: Field = Field.Q, order: int = DEFAULT_ORDER) -> "GradedSeries":
        return cls(field, order)

    @classmethod
    def one(cls, field: Field = Field.Q, order: int = DEFAULT_ORDER) -> "GradedSeries":
        return cls.constant(1, field, order)

    @classmethod
    def constant(cls, value: Scalar, field: Field = Field.Q, order: int = DEFAULT_ORDER) -> "GradedSeries":
        return cls(field, order, {(): value})

    @classmethod
    def generator(cls, family: str, index: int, field: Field = Field.Q,
                  order: int = DEFAULT_ORDER, coeff: Scalar = 1) -> "GradedSeries":
        gen = Generator(family, index)
        return cls(field, order, {((gen, 1),): coeff})

    @classmethod
    def total_class(cls, family: str, count: int, field: Field = Field.Q,
                    order: int = DEFAULT_ORDER) -> "GradedSeries":
        """1 + x_1 + ... + x_count in the given family"""
        terms = {(): 1}
        for index in range(1, min(count, order) + 1):
            terms[((family, index, 1),)] = 1
        return cls(field, order, terms)

    # inspection

    @property
    def terms(self) -> Dict[Monomial, Scalar]:
        return dict(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def constant_term(self) -> Scalar:
        default = Fraction(0) if self.field is Field.Q else 0
        return self._terms.get((), default)

    @property
    def is_one(self) -> bool:
        return self._terms == {(): 1}

    @property
    def max_weight(self) -> int:
        return max((_weight(m) for m in self._terms), default=-1)

    def weights(self) -> List[int]:
        return sorted({_weight(m) for m in self._terms})

    def is_homogeneous(self, weight: Optional[int] = None) -> bool:
        found = self.weights()
        if not found:
            return True
        if len(found) > 1:
            return False
        return weight is None or found[0] == weight

    def coefficient(self, mono) -> Scalar:
        default = Fraction(0) if self.field is Field.Q else 0
        return self._terms.get(_canonical(mono), default)

    def generators(self) -> List[Generator]:
        gens = {(f, i) for mono in self._terms for f, i, _ in mono}
        return [Generator(f, i) for f, i in sorted(gens)]

    # structure

    def _check_field(self, other: "GradedSeries"):
        if other.field is not self.field:
            raise FieldMismatch(f"Cannot combine series over {self.field.value} and {other.field.value}")

    def _lift(self, other) -> "GradedSeries":
        if isinstance(other, GradedSeries):
            self._check_field(other)
            return other
        if isinstance(other, (int, Fraction)):
            return GradedSeries.constant(other, self.field, self.order)
        return NotImplemented

    def truncate(self, order: int) -> "GradedSeries":
        order = min(order, self.order)
        return GradedSeries._raw(self.field, order,
                                 {m: c for m, c in self._terms.items() if _weight(m) <= order})

    def component(self, j: int) -> "GradedSeries":
        """Weight-j homogeneous part; zero for negative j"""
        if j > self.order:
            logger.warning(f"Component {j} requested above truncation order {self.order}; returning 0")
            return GradedSeries.zero(self.field, self.order)
        return GradedSeries._raw(self.field, self.order,
                                 {m: c for m, c in self._terms.items() if _weight(m) == j})

    def components(self) -> List["GradedSeries"]:
        parts: List[Dict[Monomial, Scalar]] = [{} for _ in range(self.order + 1)]
        for mono, coeff in self._terms.items():
            parts[_weight(mono)][mono] = coeff
        return [GradedSeries._raw(self.field, self.order, part) for part in parts]

    # arithmetic

    def __add__(self, other) -> "GradedSeries":
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        order = min(self.order, other.order)
        terms = {m: c for m, c in self._terms.items() if _weight(m) <= order}
        for mono, coeff in other._terms.items():
            if _weight(mono) <= order:
                terms[mono] = terms.get(mono, 0) + coeff
        return GradedSeries._raw(self.field, order, terms)

    __radd__ = __add__

    def __neg__(self) -> "GradedSeries":
        return GradedSeries._raw(self.field, self.order, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "GradedSeries":
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "GradedSeries":
        return (-self) + other

    def scale(self, factor: Scalar) -> "GradedSeries":
        factor = _coerce(factor, self.field)
        return GradedSeries._raw(self.field, self.order, {m: c * factor for m, c in self._terms.items()})

    def __mul__(self, other) -> "GradedSeries":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        order = min(self.order, other.order)
        terms: Dict[Monomial, Scalar] = {}
        for ma, ca in self._terms.items():
            wa = _weight(ma)
            if wa > order:
                continue
            for mb, cb in other._terms.items():
                if wa + _weight(mb) > order:
                    continue
                mono = _mono_mul(ma, mb)
                terms[mono] = terms.get(mono, 0) + ca * cb
        return GradedSeries._raw(self.field, order, terms)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "GradedSeries":
        if isinstance(other, (int, Fraction)):
            if self.field is Field.F2:
                if other % 2 == 0:
                    raise NotInvertible("Division by an even number in F2")
                return self
            return self.scale(Fraction(1) / Fraction(other))
        return self * self._lift(other).invert()

    def __pow__(self, exponent: int) -> "GradedSeries":
        if exponent < 0:
            return self.invert() ** (-exponent)
        result = GradedSeries.one(self.field, self.order)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedSeries):
            return NotImplemented
        return self.field is other.field and self.order == other.order and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.field, self.order, frozenset(self._terms.items())))

    def invert(self) -> "GradedSeries":
        """Multiplicative inverse up to the truncation order"""
        a0 = self.constant_term
        if a0 == 0:
            raise NotInvertible(f"Series {self} has zero constant term")
        inv_a0 = 1 if self.field is Field.F2 else Fraction(1) / a0
        parts = self.components()
        result = [GradedSeries.constant(inv_a0, self.field, self.order)]
        for j in range(1, self.order + 1):
            acc = GradedSeries.zero(self.field, self.order)
            for i in range(1, j + 1):
                if not parts[i].is_zero and not result[j - i].is_zero:
                    acc = acc + parts[i] * result[j - i]
            result.append(-acc.scale(inv_a0))
        return sum(result[1:], result[0])

    def rescale(self, d: Scalar) -> "GradedSeries":
        """Multiply the weight-i part by d**i"""
        if self.field is not Field.Q:
            raise UnsupportedField("Rescaling is defined over Q only")
        d = Fraction(d)
        return GradedSeries._raw(self.field, self.order,
                                 {m: c * d ** _weight(m) for m, c in self._terms.items()})

    def exp(self) -> "GradedSeries":
        if self.field is not Field.Q:
            raise UnsupportedField("exp is defined over Q only")
        if self.constant_term != 0:
            raise BadConstantTerm(f"exp needs a zero constant term, got {self.constant_term}")
        result = GradedSeries.one(self.field, self.order)
        term = result
        for k in range(1, self.order + 1):
            term = (term * self).scale(Fraction(1, k))
            if term.is_zero:
                break
            result = result + term
        return result

    def log(self) -> "GradedSeries":
        if self.field is not Field.Q:
            raise UnsupportedField("log is defined over Q only")
        if self.constant_term != 1:
            raise BadConstantTerm(f"log needs constant term 1, got {self.constant_term}")
        x = self - 1
        result = GradedSeries.zero(self.field, self.order)
        power = GradedSeries.one(self.field, self.order)
        for k in range(1, self.order + 1):
            power = power * x
            if power.is_zero:
                break
            result = result + power.scale(Fraction((-1) ** (k + 1), k))
        return result

    def substitute(self, mapping: Mapping) -> "GradedSeries":
        """Replace generators by series of equal weight or by scalars.

        Keys may be Generator objects or names such as "c_2"; generators not
        in the mapping are kept.
        """
        images: Dict[Tuple[str, int], GradedSeries] = {}
        order = self.order
        target_field = None
        for key, image in mapping.items():
            gen = key if isinstance(key, Generator) else Generator.parse(key)
            if isinstance(image, GradedSeries):
                if not image.is_zero and not image.is_homogeneous(gen.weight):
                    raise WeightMismatch(f"Image of {gen.name} must be homogeneous of weight {gen.weight}")
                if target_field is None:
                    target_field = image.field
                elif image.field is not target_field:
                    raise FieldMismatch("Substitution images live over different fields")
                order = min(order, image.order)
            images[(gen.family, gen.index)] = image
        field = target_field or self.field
        if field is not self.field:
            raise FieldMismatch(f"Cannot substitute {field.value} images into a {self.field.value} series")
        for key, image in images.items():
            if not isinstance(image, GradedSeries):
                images[key] = GradedSeries.constant(image, field, order)
        result = GradedSeries.zero(field, order)
        for mono, coeff in self._terms.items():
            if _weight(mono) > order:
                continue
            term = GradedSeries._raw(field, order, {(): coeff})
            kept = []
            for family, index, exp in mono:
                image = images.get((family, index))
                if image is None:
                    kept.append((family, index, exp))
                else:
                    term = term * image ** exp
            if kept:
                term = term * GradedSeries._raw(field, order, {tuple(kept): 1})
            result = result + term
        return result

    def retag(self, families: Mapping[str, str]) -> "GradedSeries":
        """Rename generator families, e.g. {"c": "w"}"""
        terms: Dict[Monomial, Scalar] = {}
        for mono, coeff in self._terms.items():
            renamed = _canonical([(families.get(f, f), i, e) for f, i, e in mono])
            terms[renamed] = terms.get(renamed, 0) + coeff
        return GradedSeries._raw(self.field, self.order, terms)

    def reduce_mod2(self, families: Optional[Mapping[str, str]] = None) -> "GradedSeries":
        if self.field is not Field.Q:
            raise UnsupportedField("Only series over Q can be reduced mod 2")
        terms = {}
        for mono, coeff in self._terms.items():
            if coeff.denominator != 1:
                raise NonIntegralCoefficient(f"Coefficient {coeff} of {self._monomial_text(mono, False)} is not an integer")
            terms[mono] = coeff.numerator
        reduced = GradedSeries._raw(Field.F2, self.order, terms)
        return reduced.retag(families) if families else reduced

    # serialization and rendering

    def sorted_terms(self) -> List[Tuple[Monomial, Scalar]]:
        return sorted(self._terms.items(), key=lambda item: _display_key(item[0]))

    def to_dict(self) -> dict:
        return {
            "field": self.field.value,
            "order": self.order,
            "terms": [
                {"monomial": {f"{f}_{i}": e for f, i, e in mono}, "coeff": str(coeff)}
                for mono, coeff in self.sorted_terms()
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "GradedSeries":
        field = Field(data["field"])
        terms = {}
        for entry in data["terms"]:
            mono = _canonical(entry["monomial"])
            terms[mono] = terms.get(mono, 0) + _coerce(Fraction(entry["coeff"]), field)
        return cls(field, int(data["order"]), terms)

    @staticmethod
    def _monomial_text(mono: Monomial, latex: bool) -> str:
        factors = sorted(mono, key=lambda f: (_FAMILY_RANK[f[0]], -f[1]))
        pieces = []
        for family, index, exp in factors:
            name = _factor_name(family, index, latex)
            if exp > 1:
                name += f"^{{{exp}}}" if latex and exp >= 10 else f"^{exp}"
            pieces.append(name)
        return ("" if latex else " ").join(pieces)

    def _render(self, latex: bool) -> str:
        if not self._terms:
            return "0"
        plus, minus = ("+", "-") if latex else (" + ", " - ")
        out = ""
        for position, (mono, coeff) in enumerate(self.sorted_terms()):
            negative = coeff < 0
            magnitude = -coeff if negative else coeff
            if magnitude == 1 and mono:
                body = self._monomial_text(mono, latex)
            else:
                if latex and isinstance(magnitude, Fraction) and magnitude.denominator != 1:
                    number = f"\\frac{{{magnitude.numerator}}}{{{magnitude.denominator}}}"
                else:
                    number = str(magnitude)
                sep = "" if latex else " "
                body = number + (sep + self._monomial_text(mono, latex) if mono else "")
            if position == 0:
                out = ("-" if negative else "") + body
            else:
                out += (minus if negative else plus) + body
        return out

    def to_text(self) -> str:
        return self._render(latex=False)

    def to_latex(self) -> str:
        return self._render(latex=True)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"GradedSeries({self.field.value}, order={self.order}, {self.to_text()})"


def _ring_domain(field: Field, gens: List[Tuple[str, int]]):
    base = QQ if field is Field.Q else GF(2)
    names = [Symbol(f"{family}_{index}") for family, index in gens] or [Symbol("unit")]
    return base, base.poly_ring(*names)


def determinant(matrix, field: Field = Field.Q, order: int = DEFAULT_ORDER) -> GradedSeries:
    """Determinant of a square matrix of series (or scalars).

    Entries become polynomials over QQ or GF(2) in the generators that
    occur, sympy's fraction-free elimination takes the determinant and the
    result is truncated back to `order`. `field` and `order` only matter
    when no entry is a series.
    """
    if isinstance(matrix, np.ndarray):
        grid = matrix
    else:
        rows = [list(row) for row in matrix]
        width = len(rows[0]) if rows else 0
        grid = np.empty((len(rows), width), dtype=object)
        for i, row in enumerate(rows):
            if len(row) != width:
                raise ShapeError(f"Row {i} has {len(row)} entries, expected {width}")
            for j, entry in enumerate(row):
                grid[i, j] = entry
    if grid.ndim != 2 or grid.shape[0] != grid.shape[1]:
        raise ShapeError(f"Determinant needs a square matrix, got shape {grid.shape}")
    size = grid.shape[0]
    series = [e for e in grid.flat if isinstance(e, GradedSeries)]
    if series:
        field = series[0].field
        for entry in series:
            if entry.field is not field:
                raise FieldMismatch("Matrix entries live over different fields")
        order = min(entry.order for entry in series)
    if size * size > max_cells():
        raise TooLarge(f"Determinant of size {size} exceeds the enumeration cap")
    if size == 0:
        return GradedSeries.one(field, order)

    cells = [[entry if isinstance(entry, GradedSeries) else GradedSeries.constant(entry, field, order)
              for entry in row] for row in grid.tolist()]
    gens = sorted({(f, i) for row in cells for entry in row for mono in entry.terms for f, i, _ in mono})
    position = {gen: k for k, gen in enumerate(gens)}
    base, domain = _ring_domain(field, gens)

    def lift(entry: GradedSeries):
        coeffs = {}
        for mono, coeff in entry.truncate(order).terms.items():
            exps = [0] * len(domain.symbols)
            for family, index, exp in mono:
                exps[position[(family, index)]] = exp
            coeffs[tuple(exps)] = base(coeff.numerator, coeff.denominator) if field is Field.Q else base(coeff)
        return domain.ring.from_dict(coeffs)

    det = DomainMatrix([[lift(e) for e in row] for row in cells], (size, size), domain).det()
    terms = {}
    for exps, coeff in det.terms():
        mono = tuple((f, i, e) for (f, i), e in zip(gens, exps) if e)
        if field is Field.Q:
            terms[mono] = Fraction(int(coeff.numerator), int(coeff.denominator))
        else:
            terms[mono] = int(coeff) % 2
    return GradedSeries(field, order, terms)
