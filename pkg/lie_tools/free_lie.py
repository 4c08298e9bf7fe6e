"""Free Lie algebra combinatorics and the characteristic classes of its graded parts.

Hall words are stored as nested trees: a leaf is a generator index 1..n and
an internal node is a (left, right) tuple.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, List, Tuple, Union

import numpy as np
from sympy import binomial
from sympy.functions.combinatorial.numbers import mobius
from sympy.ntheory import divisors

from lie_tools.chern import ChernCharacter, FormalBundle, char_to_class, class_to_char
from lie_tools.config import DEFAULT_ORDER, max_cells
from lie_tools.errors import DomainError, InternalError, TooLarge, UnsupportedField
from lie_tools.graded_ring import Field, GradedSeries

logger = logging.getLogger(__name__)

Tree = Union[int, Tuple["Tree", "Tree"]]


def moebius(d: int) -> int:
    if d < 1:
        raise DomainError(f"Moebius function is defined for d >= 1, got {d}")
    return int(mobius(d))


@lru_cache(maxsize=None)
def witt_dim(n: int, k: int) -> int:
    """Dimension d(n, k) of the length-k part of the free Lie algebra on n generators"""
    if n < 1 or k < 1:
        raise DomainError(f"witt_dim needs n >= 1 and k >= 1, got n={n}, k={k}")
    total = sum(moebius(d) * n ** (k // d) for d in divisors(k))
    if total % k:
        raise InternalError(f"Witt sum {total} is not divisible by {k}")
    return total // k


def partial_dim(n: int, k: int) -> int:
    """Cumulative dimension d(n,1) + ... + d(n,k); zero for k <= 0"""
    return sum(witt_dim(n, i) for i in range(1, k + 1))


@dataclass(frozen=True)
class WittTable:
    n: int
    entries: Tuple[int, ...]
    cumulative: Tuple[int, ...]

    @classmethod
    def build(cls, n: int, kmax: int) -> "WittTable":
        entries = tuple(witt_dim(n, k) for k in range(1, kmax + 1))
        return cls(n, entries, tuple(int(x) for x in np.cumsum(entries, dtype=object)))

    @property
    def kmax(self) -> int:
        return len(self.entries)

    def d(self, k: int) -> int:
        return self.entries[k - 1]

    def partial(self, k: int) -> int:
        return self.cumulative[k - 1] if k > 0 else 0


# tree helpers

@lru_cache(maxsize=None)
def tree_length(tree: Tree) -> int:
    if isinstance(tree, int):
        return 1
    return tree_length(tree[0]) + tree_length(tree[1])


@lru_cache(maxsize=None)
def tree_key(tree: Tree):
    """Sort key refining length: leaves by index, pairs by (left, right)"""
    if isinstance(tree, int):
        return (1, tree)
    return (tree_length(tree), (tree_key(tree[0]), tree_key(tree[1])))


@lru_cache(maxsize=None)
def tree_depth(tree: Tree) -> int:
    if isinstance(tree, int):
        return 1
    return 1 + max(tree_depth(tree[0]), tree_depth(tree[1]))


def letters_for(n: int) -> List[str]:
    if n <= 2:
        return ["u", "v"][:n]
    return [f"e{i}" for i in range(1, n + 1)]


def render_tree(tree: Tree, letters: List[str], compact: bool = False) -> str:
    """Canonical form "(u (u v))"; compact form "(u(u,v))" puts a comma only
    between two letters."""
    if isinstance(tree, int):
        return letters[tree - 1]
    left = render_tree(tree[0], letters, compact)
    right = render_tree(tree[1], letters, compact)
    if not compact:
        return f"({left} {right})"
    if isinstance(tree[0], int) and isinstance(tree[1], int):
        return f"({left},{right})"
    return f"({left}{right})"


def is_hall_pair(left: Tree, right: Tree) -> bool:
    """(left, right) is a Hall word when both parts are: left < right and,
    for right = (b, c), b <= left."""
    if tree_key(left) >= tree_key(right):
        return False
    return isinstance(right, int) or tree_key(right[0]) <= tree_key(left)


@dataclass(frozen=True)
class HallWord:
    tree: Tree
    n: int
    rank: int = field(default=0, compare=False)

    @property
    def length(self) -> int:
        return tree_length(self.tree)

    @property
    def depth(self) -> int:
        return tree_depth(self.tree)

    @property
    def raw_depth(self) -> int:
        """Unmatched-parenthesis count, one less than depth"""
        return tree_depth(self.tree) - 1

    def render(self, compact: bool = False) -> str:
        return render_tree(self.tree, letters_for(self.n), compact)

    def __str__(self):
        return self.render()

    def __lt__(self, other: "HallWord") -> bool:
        return tree_key(self.tree) < tree_key(other.tree)


def depth(word: Union[HallWord, Tree]) -> int:
    return word.depth if isinstance(word, HallWord) else tree_depth(word)


class HallBasis:
    """Hall family of the free Lie algebra on n generators through length kmax."""

    def __init__(self, n: int, kmax: int):
        self.logger = logging.getLogger(__name__)
        if n < 1 or kmax < 1:
            raise DomainError(f"Hall basis needs n >= 1 and kmax >= 1, got n={n}, kmax={kmax}")
        total = partial_dim(n, kmax)
        if total > max_cells():
            raise TooLarge(f"Hall basis for n={n}, kmax={kmax} has {total} words")
        self.n = n
        self.kmax = kmax
        trees: List[List[Tree]] = [[], list(range(1, n + 1))]
        for length in range(2, kmax + 1):
            level = []
            for left_len in range(1, length):
                for left in trees[left_len]:
                    for right in trees[length - left_len]:
                        if is_hall_pair(left, right):
                            level.append((left, right))
            level.sort(key=tree_key)
            if len(level) != witt_dim(n, length):
                raise InternalError(
                    f"Generated {len(level)} Hall words of length {length}, expected {witt_dim(n, length)}")
            trees.append(level)
        self.levels: List[List[HallWord]] = []
        position = 0
        for level in trees[1:]:
            words = []
            for tree in level:
                position += 1
                words.append(HallWord(tree, n, position))
            self.levels.append(words)
        self._rank = {w.tree: w.rank for level in self.levels for w in level}
        self.logger.debug(f"Built Hall basis n={n} kmax={kmax} with {position} words")

    def words(self, k: int) -> List[HallWord]:
        return list(self.levels[k - 1])

    def __iter__(self) -> Iterator[HallWord]:
        for level in self.levels:
            yield from level

    def __len__(self) -> int:
        return sum(len(level) for level in self.levels)

    def rank(self, word: Union[HallWord, Tree]) -> int:
        tree = word.tree if isinstance(word, HallWord) else word
        return self._rank[tree]

    def depth_profile(self, k: int) -> Dict[int, int]:
        """Sizes of the depth slices of H^k"""
        profile: Dict[int, int] = {}
        for word in self.levels[k - 1]:
            profile[word.depth] = profile.get(word.depth, 0) + 1
        return dict(sorted(profile.items()))

    def max_depth_words(self, k: int) -> List[HallWord]:
        return [w for w in self.levels[k - 1] if w.depth == k]


def hall_basis(n: int, kmax: int) -> List[List[HallWord]]:
    return HallBasis(n, kmax).levels


def count_max_depth(n: int, k: int) -> int:
    """Closed-form number of length-k Hall words of depth k"""
    if n < 1 or k < 2:
        raise DomainError(f"count_max_depth needs n >= 1 and k >= 2, got n={n}, k={k}")
    return int(sum(binomial(j + k - 2, j) * j for j in range(n)))


def pbw_dimension_series(n: int, kmax: int) -> np.ndarray:
    """Coefficients of prod_k (1 - t^k)^(-d(n,k)) through t^kmax"""
    series = np.zeros(kmax + 1, dtype=object)
    series[0] = 1
    for k in range(1, kmax + 1):
        d = witt_dim(n, k)
        factor = np.zeros(kmax + 1, dtype=object)
        for j in range(kmax // k + 1):
            factor[j * k] = int(binomial(d + j - 1, j))
        series = np.convolve(series, factor)[: kmax + 1]
    return series


def lie_char(ch: ChernCharacter, k: int) -> ChernCharacter:
    """Character of the length-k free Lie part of E from ch(E) by Moebius inversion"""
    if ch.series.field is not Field.Q:
        raise UnsupportedField("lie_char needs a character over Q")
    if k < 1:
        raise DomainError(f"lie_char needs k >= 1, got {k}")
    total = GradedSeries.zero(Field.Q, ch.order)
    for d in divisors(k):
        mu = moebius(d)
        if mu:
            total = total + (ch.series ** (k // d)).rescale(d).scale(mu)
    return ChernCharacter(total.scale(Fraction(1, k)))


@lru_cache(maxsize=256)
def lie_bundle(n: int, k: int, order: int = DEFAULT_ORDER, formal: bool = True) -> FormalBundle:
    """Rank and total Chern class of the length-k free Lie part of a rank-n bundle E.

    With `formal` the classes c_1..c_order of E are independent; otherwise
    c_j = 0 for j > n.
    """
    logger.debug(f"Computing Lie bundle n={n} k={k} order={order} formal={formal}")
    base = FormalBundle.generic(n, "c", Field.Q, order, honest=not formal)
    bundle = char_to_class(lie_char(class_to_char(base), k))
    for mono, coeff in bundle.total_class.terms.items():
        if coeff.denominator != 1:
            raise InternalError(f"Non-integral coefficient {coeff} in the class of L^{k} for n={n}")
    if bundle.rank != witt_dim(n, k):
        raise InternalError(f"Rank {bundle.rank} of L^{k} differs from d({n},{k})")
    return bundle


def lie_total_class(n: int, k: int, order: int = DEFAULT_ORDER, formal: bool = True) -> GradedSeries:
    return lie_bundle(n, k, order, formal).total_class


@lru_cache(maxsize=256)
def lie_sw_class(n: int, k: int, order: int = DEFAULT_ORDER) -> GradedSeries:
    """Stiefel-Whitney class of L^k of a rank-n real bundle, in w_1..w_n"""
    return lie_total_class(n, k, order, formal=False).reduce_mod2({"c": "w"})
