"""Growth vectors of distributions and the Giambelli-type classes of their degeneracy loci.

A growth vector r = (r_1 <= ... <= r_k) bounds the ranks of the derived
flag of a rank-n distribution in an m-manifold. Each kept stage i imposes
rank(L_i(V) -> TM) <= r_i, where L_i(V) is the direct sum of the free Lie
parts of V of length <= i.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from lie_tools.chern import FormalBundle, difference, dual, whitney
from lie_tools.config import max_cells
from lie_tools.errors import InternalError, InvalidGrowthVector, PreconditionError, TooLarge
from lie_tools.free_lie import lie_sw_class, partial_dim, witt_dim
from lie_tools.graded_ring import Field, GradedSeries, determinant

logger = logging.getLogger(__name__)

FORMS = ("lambda", "mu")


@dataclass(frozen=True)
class GrowthVector:
    n: int
    m: int
    entries: Tuple[int, ...]

    def __post_init__(self):
        r = self.entries
        if not r:
            raise InvalidGrowthVector("Growth vector must have at least one entry")
        if self.n < 1:
            raise InvalidGrowthVector(f"n={self.n} must be at least 1")
        if self.m < self.n:
            raise InvalidGrowthVector(f"m={self.m} is smaller than n={self.n}")
        if r[0] != self.n:
            raise InvalidGrowthVector(f"r_1={r[0]} must equal n={self.n}")
        for i, value in enumerate(r, start=1):
            bound = partial_dim(self.n, i)
            if value > bound:
                raise InvalidGrowthVector(f"r_{i}={value} exceeds partial dimension {bound}")
            if value > self.m:
                raise InvalidGrowthVector(f"r_{i}={value} exceeds m={self.m}")
            if i > 1:
                if value < r[i - 2]:
                    raise InvalidGrowthVector(f"r_{i}={value} is smaller than r_{i - 1}={r[i - 2]}")
                step = witt_dim(self.n, i)
                if value > r[i - 2] + step:
                    raise InvalidGrowthVector(
                        f"r_{i}={value} exceeds r_{i - 1}+d({self.n},{i})={r[i - 2] + step}")

    @property
    def length(self) -> int:
        return len(self.entries)

    def rank(self, i: int) -> int:
        return self.entries[i - 1]

    def corank(self, i: int) -> int:
        return partial_dim(self.n, i) - self.entries[i - 1]

    @property
    def coranks(self) -> Tuple[int, ...]:
        return tuple(self.corank(i) for i in range(1, self.length + 1))

    @property
    def is_maximal(self) -> bool:
        return all(value == min(partial_dim(self.n, i), self.m)
                   for i, value in enumerate(self.entries, start=1))

    def canonical(self) -> "GrowthVector":
        """Drop trailing repeats of m"""
        r = list(self.entries)
        while len(r) > 1 and r[-1] == self.m and r[-2] == self.m:
            r.pop()
        return GrowthVector(self.n, self.m, tuple(r))

    def __str__(self):
        return "(" + ",".join(str(v) for v in self.entries) + ")"


def validate_growth(r: Sequence[int], n: Optional[int] = None, m: Optional[int] = None) -> GrowthVector:
    entries = tuple(int(v) for v in r)
    if not entries:
        raise InvalidGrowthVector("Growth vector must have at least one entry")
    n = entries[0] if n is None else n
    m = entries[-1] if m is None else m
    vector = GrowthVector(n, m, entries)
    if vector.is_maximal:
        logger.debug(f"{vector} is the maximal growth vector for n={n}, m={m}")
    return vector


@dataclass(frozen=True)
class ReducedIndexSet:
    indices: Tuple[int, ...]

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __bool__(self):
        return bool(self.indices)


def reduce(r: GrowthVector) -> ReducedIndexSet:
    """Stages whose rank condition is not implied by another one.

    Stage i is kept when r_i < m, its corank exceeds every earlier corank,
    and the next stage has a larger rank.
    """
    kept = []
    best = 0
    for i in range(1, r.length + 1):
        corank = r.corank(i)
        rank = r.rank(i)
        if corank > best and rank < r.m:
            if i == r.length or rank < r.rank(i + 1):
                kept.append(i)
        best = max(best, corank)
    return ReducedIndexSet(tuple(kept))


@dataclass(frozen=True)
class YoungDiagram:
    """Partition stored as runs (part, multiplicity) with parts strictly decreasing"""
    runs: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        merged: List[List[int]] = []
        for part, mult in self.runs:
            if part < 0 or mult < 0:
                raise ValueError(f"Run {part}^{mult} has a negative entry")
            if part == 0 or mult == 0:
                continue
            if merged and merged[-1][0] == part:
                merged[-1][1] += mult
            elif merged and merged[-1][0] < part:
                raise ValueError(f"Parts must weakly decrease, got {part} after {merged[-1][0]}")
            else:
                merged.append([part, mult])
        object.__setattr__(self, "runs", tuple((p, k) for p, k in merged))

    @classmethod
    def from_parts(cls, parts: Sequence[int]) -> "YoungDiagram":
        return cls(tuple((p, 1) for p in parts))

    @property
    def parts(self) -> Tuple[int, ...]:
        return tuple(p for p, mult in self.runs for _ in range(mult))

    @property
    def area(self) -> int:
        return sum(p * mult for p, mult in self.runs)

    def __len__(self):
        return sum(mult for _, mult in self.runs)

    def conjugate(self) -> "YoungDiagram":
        parts = self.parts
        width = parts[0] if parts else 0
        return YoungDiagram.from_parts([sum(1 for p in parts if p > j) for j in range(width)])

    def __str__(self):
        return "(" + ",".join(f"{p}^{k}" if k > 1 else str(p) for p, k in self.runs) + ")"


@dataclass(frozen=True)
class RankConditions:
    """Flagged rank conditions rank(A_s -> B) <= R_s, s = 1..l.

    A_1 c ... c A_l have coranks K_s = rk(A_s) - R_s and B has rank
    `target`. Both growth-vector loci and the general complex formula are
    instances.
    """
    ranks: Tuple[int, ...]
    coranks: Tuple[int, ...]
    target: int

    def __post_init__(self):
        if len(self.ranks) != len(self.coranks):
            raise PreconditionError("ranks and coranks must have the same length")
        for s in range(len(self.ranks)):
            if self.coranks[s] <= (self.coranks[s - 1] if s else 0):
                raise PreconditionError(f"Coranks {self.coranks} must be positive and strictly increasing")
            if s and self.ranks[s] <= self.ranks[s - 1]:
                raise PreconditionError(f"Ranks {self.ranks} must be strictly increasing")
            if self.ranks[s] < 0 or self.ranks[s] >= self.target:
                raise PreconditionError(f"Rank {self.ranks[s]} must lie in [0, {self.target})")

    @property
    def length(self) -> int:
        return len(self.ranks)

    def lambda_diagram(self) -> YoungDiagram:
        runs = []
        upper = self.target
        for s in reversed(range(self.length)):
            runs.append((self.coranks[s], upper - self.ranks[s]))
            upper = self.ranks[s]
        return YoungDiagram(tuple(runs))

    def mu_diagram(self) -> YoungDiagram:
        runs = []
        lower = 0
        for s in range(self.length):
            runs.append((self.target - self.ranks[s], self.coranks[s] - lower))
            lower = self.coranks[s]
        return YoungDiagram(tuple(runs))

    @property
    def codimension(self) -> int:
        return self.lambda_diagram().area

    def rho(self) -> List[int]:
        """Row i of the lambda diagram -> max{s : i <= target - R_s}"""
        size = self.target - self.ranks[0] if self.length else 0
        return [max(s for s in range(1, self.length + 1) if i <= self.target - self.ranks[s - 1])
                for i in range(1, size + 1)]

    def rho_prime(self) -> List[int]:
        """Row i of the mu diagram -> min{s : i <= K_s}"""
        size = self.coranks[-1] if self.length else 0
        return [min(s for s in range(1, self.length + 1) if i <= self.coranks[s - 1])
                for i in range(1, size + 1)]

    def class_matrix(self, sources: Sequence[FormalBundle], target: FormalBundle,
                     form: str, order: int) -> np.ndarray:
        if form not in FORMS:
            raise ValueError(f"Unknown determinant form {form!r}; expected one of {FORMS}")
        sources = [FormalBundle(a.rank, a.total_class.truncate(order)) for a in sources]
        target = FormalBundle(target.rank, target.total_class.truncate(order))
        if form == "lambda":
            parts, rows = self.lambda_diagram().parts, self.rho()
            virtual = {s: difference(dual(sources[s - 1]), dual(target)) for s in set(rows)}
        else:
            parts, rows = self.mu_diagram().parts, self.rho_prime()
            virtual = {s: difference(target, sources[s - 1]) for s in set(rows)}
        size = len(parts)
        matrix = np.empty((size, size), dtype=object)
        zero = GradedSeries.zero(target.field, order)
        for i in range(size):
            bundle = virtual[rows[i]]
            for j in range(size):
                index = parts[i] - i + j
                matrix[i, j] = bundle.component(index) if index <= order else zero
        return matrix

    def evaluate(self, sources: Sequence[FormalBundle], target: FormalBundle,
                 form: str = "lambda", order: Optional[int] = None) -> GradedSeries:
        """Determinant for one form, computed at truncation min(order, codimension)"""
        field = target.field
        order = target.order if order is None else order
        cd = self.codimension
        if cd == 0:
            return GradedSeries.one(field, order)
        if cd > order:
            logger.warning(f"Codimension {cd} exceeds truncation order {order}; class is 0")
            return GradedSeries.zero(field, order)
        value = determinant(self.class_matrix(sources, target, form, cd), field, cd)
        return GradedSeries(field, order, value.terms)


def _conditions(r: GrowthVector) -> RankConditions:
    reduced = reduce(r)
    return RankConditions(tuple(r.rank(i) for i in reduced),
                          tuple(r.corank(i) for i in reduced), r.m)


def young_diagrams(r: GrowthVector) -> Tuple[YoungDiagram, YoungDiagram, int]:
    conditions = _conditions(r)
    lam, mu = conditions.lambda_diagram(), conditions.mu_diagram()
    if mu != lam.conjugate() or mu.area != lam.area:
        raise InternalError(f"mu{mu} is not the conjugate of lambda{lam} for {r}")
    return lam, mu, lam.area


def expected_codimension(r: GrowthVector) -> int:
    return _conditions(r).codimension


def rho_maps(r: GrowthVector) -> Tuple[List[int], List[int]]:
    conditions = _conditions(r)
    return conditions.rho(), conditions.rho_prime()


def flag_bundles(n: int, stages: Sequence[int], order: int) -> Dict[int, FormalBundle]:
    """Honest mod-2 classes of L_i(V), in v_1..v_n, for the requested stages"""
    out: Dict[int, FormalBundle] = {}
    running = FormalBundle.trivial(0, Field.F2, order)
    for i in range(1, max(stages, default=0) + 1):
        part = FormalBundle(witt_dim(n, i), lie_sw_class(n, i, order).retag({"w": "v"}))
        running = whitney(running, part)
        if i in stages:
            out[i] = running
    return out


def giambelli_class(r: GrowthVector, form: str = "lambda", order: Optional[int] = None) -> GradedSeries:
    """Mod-2 class dual to the degeneracy locus of r, in v_i = w_i(V) and t_j = w_j(M)"""
    order = r.m if order is None else order
    reduced = reduce(r)
    if not reduced:
        return GradedSeries.one(Field.F2, order)
    conditions = _conditions(r)
    work = min(order, conditions.codimension)
    sources = flag_bundles(r.n, reduced.indices, work)
    tangent = FormalBundle.generic(r.m, "t", Field.F2, work)
    return conditions.evaluate([sources[i] for i in reduced], tangent, form, order)


def giambelli_class_integral(a: Sequence[int], kappa: Sequence[int], b: int,
                             sources: Sequence[FormalBundle], target: FormalBundle,
                             order: Optional[int] = None) -> GradedSeries:
    """Class over Q of {rank(A_s -> B) <= kappa_s} for a flag A_1 c ... c A_l.

    Both determinant forms are evaluated; they must agree.
    """
    a, kappa = tuple(a), tuple(kappa)
    order = target.order if order is None else order
    if len(a) != len(kappa) or len(sources) != len(a):
        raise PreconditionError("a, kappa and sources must have the same length")
    for s, bundle in enumerate(sources):
        if bundle.rank != a[s]:
            raise PreconditionError(f"Source {s + 1} has rank {bundle.rank}, expected a_{s + 1}={a[s]}")
    if target.rank != b:
        raise PreconditionError(f"Target has rank {target.rank}, expected b={b}")
    if a == kappa:
        return GradedSeries.one(target.field, order)
    coranks = tuple(x - y for x, y in zip(a, kappa))
    if any(k <= 0 for k in coranks) or any(coranks[s] >= coranks[s + 1] for s in range(len(a) - 1)):
        raise PreconditionError(f"Need 0 < a_1-kappa_1 < a_2-kappa_2 < ..., got {coranks}")
    if any(kappa[s] >= kappa[s + 1] for s in range(len(a) - 1)) or kappa[-1] >= b:
        raise PreconditionError(f"Need kappa_1 < ... < kappa_l < b, got {kappa} and b={b}")
    conditions = RankConditions(kappa, coranks, b)
    by_lambda = conditions.evaluate(sources, target, "lambda", order)
    by_mu = conditions.evaluate(sources, target, "mu", order)
    if by_lambda != by_mu:
        raise InternalError(f"Determinant forms disagree: {by_lambda} != {by_mu}")
    return by_lambda


def enumerate_growth_vectors(n: int, m: int, k: int, reach_target: bool = False,
                             canonical: bool = False) -> Iterator[GrowthVector]:
    """All valid growth vectors of length k, in lexicographic order.

    `reach_target` keeps those ending at m; `canonical` further requires
    r_{k-1} < m.
    """
    if k < 1 or m < n:
        return
    reach_target = reach_target or canonical
    if canonical and k > 1 and n == m:
        return
    if reach_target and k == 1 and n != m:
        return
    cap = max_cells()
    emitted = 0
    bounds = [min(partial_dim(n, i), m) for i in range(1, k + 1)]

    def extend(prefix: List[int]) -> Iterator[Tuple[int, ...]]:
        i = len(prefix) + 1
        if i > k:
            yield tuple(prefix)
            return
        last = prefix[-1]
        high = min(bounds[i - 1], last + witt_dim(n, i))
        for value in range(last, high + 1):
            if i == k and reach_target and value != m:
                continue
            if canonical and i == k - 1 and value == m:
                continue
            prefix.append(value)
            yield from extend(prefix)
            prefix.pop()

    for entries in extend([n]):
        emitted += 1
        if emitted > cap:
            raise TooLarge(f"More than {cap} growth vectors for n={n}, m={m}, k={k}")
        yield GrowthVector(n, m, entries)


@dataclass(frozen=True)
class LocusResult:
    growth: GrowthVector
    reduced: ReducedIndexSet
    lam: YoungDiagram
    mu: YoungDiagram
    cd: int
    klass: GradedSeries

    def to_dict(self) -> dict:
        return {
            "growth": list(self.growth.entries),
            "reduced": list(self.reduced.indices),
            "lambda": list(self.lam.parts),
            "mu": list(self.mu.parts),
            "cd": self.cd,
            "class": self.klass.to_dict(),
            "latex": self.klass.to_latex(),
        }


def locus(r: GrowthVector, form: str = "lambda", order: Optional[int] = None) -> LocusResult:
    lam, mu, cd = young_diagrams(r)
    return LocusResult(r, reduce(r), lam, mu, cd, giambelli_class(r, form, order))
