"""Defect vectors and the admissibility of degeneracy strata.

A stratum is potentially admissible when its expected codimension is at
most m, and potentially bounding when it is not admissible but every
strictly shallower stratum (componentwise larger growth vector) is.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Set, Tuple

from sympy import binomial

from lie_tools.errors import DomainError, InvalidGrowthVector, UnsupportedParameter
from lie_tools.free_lie import partial_dim, witt_dim
from loci.degeneracy import GrowthVector, enumerate_growth_vectors, expected_codimension

logger = logging.getLogger(__name__)

ADMISSIBLE = "potentially_admissible"
BOUNDING = "potentially_bounding"
NEITHER = "neither"


@dataclass(frozen=True, order=True)
class DefectVector:
    entries: Tuple[int, ...]

    def __post_init__(self):
        if not self.entries:
            raise ValueError("Defect vector must have at least one entry")
        if self.entries[0] != 0 or self.entries[-1] != 0:
            raise ValueError(f"Defect vector {self.entries} must start and end with 0")
        if any(e < 0 for e in self.entries):
            raise ValueError(f"Defect vector {self.entries} has a negative entry")

    @property
    def length(self) -> int:
        return len(self.entries)

    def __str__(self):
        return "(" + ",".join(str(e) for e in self.entries) + ")"


@dataclass(frozen=True)
class StratumClassification:
    label: str
    cd: int
    m: int


def defect(r: GrowthVector) -> DefectVector:
    coranks = r.coranks
    entries = [0] * r.length
    for i in range(1, r.length - 1):
        entries[i] = coranks[i] - coranks[i - 1]
    return DefectVector(tuple(entries))


def growth_from_defect(n: int, m: int, delta: DefectVector) -> GrowthVector:
    """r_i = d(n,1)+...+d(n,i) minus the running defect for i < k, and r_k = m"""
    entries = []
    running = 0
    for i, step in enumerate(delta.entries[:-1], start=1):
        running += step
        entries.append(partial_dim(n, i) - running)
    entries.append(m)
    return GrowthVector(n, m, tuple(entries))


def partial_dim_bracket(n: int, m: int) -> int:
    """The p with d(n,1)+...+d(n,p) <= m < d(n,1)+...+d(n,p+1)"""
    if m < n:
        raise DomainError(f"m={m} is smaller than n={n}")
    p = 1
    while partial_dim(n, p + 1) <= m:
        p += 1
    return p


def _is_shallower(upper: GrowthVector, lower: GrowthVector) -> bool:
    return upper.entries != lower.entries and all(
        a >= b for a, b in zip(upper.entries, lower.entries))


def classify(r: GrowthVector) -> StratumClassification:
    cd = expected_codimension(r)
    if cd <= r.m:
        return StratumClassification(ADMISSIBLE, cd, r.m)
    for other in enumerate_growth_vectors(r.n, r.m, r.length):
        if _is_shallower(other, r) and expected_codimension(other) > r.m:
            return StratumClassification(NEITHER, cd, r.m)
    return StratumClassification(BOUNDING, cd, r.m)


class SurjectionCount(NamedTuple):
    dim_jets: int
    dim_matrices: int
    surjective_possible: bool


def surjection_count(n: int, m: int, k: int) -> SurjectionCount:
    """Jet-space and matrix-space dimensions behind the surjectivity count"""
    if not (m >= n >= 1 and k >= 2):
        raise DomainError(f"surjection_count needs m >= n >= 1 and k >= 2, got n={n}, m={m}, k={k}")
    dim_jets = (m - n) * n * int(binomial(m + k - 1, k - 1))
    dim_matrices = (m - n) * sum(witt_dim(n, i) for i in range(2, k + 1))
    return SurjectionCount(dim_jets, dim_matrices, dim_jets >= dim_matrices)


def surjection_threshold(n: int, m: int, k_limit: int = 200) -> Optional[int]:
    """Smallest k0 with surjectivity impossible for every k in [k0, k_limit]"""
    last_possible = 1
    for k in range(2, k_limit + 1):
        if surjection_count(n, m, k).surjective_possible:
            last_possible = k
    if last_possible == k_limit:
        return None
    return last_possible + 1


def onto_obstruction(n: int, k: int) -> bool:
    if n < 2 or k < 2:
        raise DomainError(f"onto_obstruction needs n >= 2 and k >= 2, got n={n}, k={k}")
    return (n >= 3 and k >= 4) or (n == 2 and k >= 5)


class WittBoundRow(NamedTuple):
    k: int
    lhs: int
    rhs: int
    holds: bool


def witt_bound_check(n: int, k_max: int, k_min: int = 1) -> List[WittBoundRow]:
    """Compare d(n,k+1) with d(n,1)+...+d(n,k); for n = 2 the next two
    Witt numbers are added on the left."""
    if n < 2:
        raise DomainError(f"witt_bound_check needs n >= 2, got {n}")
    rows = []
    for k in range(k_min, k_max + 1):
        lhs = witt_dim(n, k + 1)
        if n == 2:
            lhs += witt_dim(n, k + 2)
        rhs = partial_dim(n, k)
        rows.append(WittBoundRow(k, lhs, rhs, lhs > rhs))
        if lhs <= rhs:
            logger.warning(f"Witt bound fails for n={n}, k={k}: {lhs} <= {rhs}")
    return rows


class DefectCandidate(NamedTuple):
    case: str
    params: Dict[str, int]
    defect: DefectVector
    confirmed: Optional[bool] = None


def _realise(n: int, m: int, p: int, coranks: Dict[int, int], reach_at: int) -> Optional[GrowthVector]:
    """Growth vector of length p+2 with the given coranks up to `reach_at` - 1
    and r_i = m from `reach_at` on; None if invalid."""
    entries = []
    for i in range(1, p + 3):
        if i >= reach_at:
            entries.append(m)
        else:
            entries.append(partial_dim(n, i) - coranks.get(i, 0))
    try:
        return GrowthVector(n, m, tuple(entries)).canonical()
    except InvalidGrowthVector:
        return None


def _corank_profile(start: int, stop: int, value: int, base: Optional[Dict[int, int]] = None) -> Dict[int, int]:
    profile = dict(base or {})
    for i in range(start, stop + 1):
        profile[i] = value
    return profile


class _Templates:
    """Defect templates for n >= 3 with d(n,1)+...+d(n,p) <= m < ...+d(n,p+1)"""

    def __init__(self, n: int, m: int):
        if n < 3:
            raise UnsupportedParameter(f"Closed-form defect enumeration needs n >= 3, got n={n}")
        self.n, self.m = n, m
        self.p = partial_dim_bracket(n, m)
        self.dp = partial_dim(n, self.p)
        self.dp1 = partial_dim(n, self.p + 1)
        self.span = range(0, self.dp1 + 1)
        self.logger = logging.getLogger(__name__)
        self.logger.debug(f"Defect templates n={n} m={m}: p={self.p}, d_p={self.dp}, d_p+1={self.dp1}")

    def case_a(self, l: int, chi: int) -> Optional[GrowthVector]:
        p = self.p
        coranks = _corank_profile(l, p - 1, 1)
        coranks[p] = 1 + chi
        return _realise(self.n, self.m, p, coranks, p + 1)

    def case_b(self, l: int, chi: int) -> Optional[GrowthVector]:
        p = self.p
        coranks = _corank_profile(l, p, 1)
        coranks[p + 1] = 1 + chi
        return _realise(self.n, self.m, p, coranks, p + 2)

    def case_c(self, chi: int, nu: int) -> Optional[GrowthVector]:
        p = self.p
        coranks = {p: chi, p + 1: chi + nu}
        return _realise(self.n, self.m, p, coranks, p + 2)

    def ineq_a(self, l: int, chi: int) -> bool:
        return (self.m - self.dp + 1 + chi) * chi <= partial_dim(self.n, l) - 1 and chi >= 0

    def ineq_b(self, l: int, chi: int) -> bool:
        return ((self.m - self.dp1 + 1 + chi) * chi <= partial_dim(self.n, l) - 1
                and chi + 1 + self.m - self.dp1 >= 0)

    def ineq_c(self, chi: int, nu: int) -> bool:
        return ((self.m - self.dp + chi) * chi + (self.m - self.dp1 + chi + nu) * nu <= self.m
                and self.m - self.dp1 + chi + nu >= 0)

    def grids(self) -> Iterator[Tuple[str, Tuple[str, ...], List[Tuple[int, ...]]]]:
        """(case, parameter names, parameter points) with the leading l fixed per grid"""
        for l in range(2, self.p):
            yield "a", ("l", "chi"), [(l, chi) for chi in self.span]
            yield "b", ("l", "chi"), [(l, chi) for chi in self.span]
        yield "c", ("chi", "nu"), [(chi, nu) for chi in self.span for nu in self.span]

    def realise(self, case: str, point: Tuple[int, ...]) -> Optional[GrowthVector]:
        return getattr(self, f"case_{case}")(*point)

    def holds(self, case: str, point: Tuple[int, ...]) -> bool:
        return getattr(self, f"ineq_{case}")(*point)


def enumerate_admissible_defects(n: int, m: int) -> List[DefectCandidate]:
    """Closed-form list of defect vectors of potentially admissible strata (n >= 3)"""
    templates = _Templates(n, m)
    found: Dict[DefectVector, DefectCandidate] = {}
    for case, names, points in templates.grids():
        for point in points:
            if not templates.holds(case, point):
                continue
            r = templates.realise(case, point)
            if r is None:
                continue
            delta = defect(r)
            if delta not in found:
                found[delta] = DefectCandidate(case, dict(zip(names, point)), delta)
    if templates.dp == m:
        templates.logger.info(f"m={m} equals the partial dimension at p={templates.p}; positions p and p+1 collapse")
    return [found[delta] for delta in sorted(found)]


def _canonical_lengths(n: int, m: int) -> range:
    return range(1, partial_dim_bracket(n, m) + 4)


def oracle_admissible_defects(n: int, m: int, k: Optional[int] = None) -> Set[DefectVector]:
    """Defects of every canonical growth vector (all lengths up to p+3 when
    k is None) whose expected codimension is at most m."""
    lengths = _canonical_lengths(n, m) if k is None else [k]
    out = set()
    for length in lengths:
        for r in enumerate_growth_vectors(n, m, length, canonical=True):
            if expected_codimension(r) <= m:
                out.add(defect(r))
    return out


def oracle_bounding_defects(n: int, m: int) -> Set[DefectVector]:
    """Bounding strata in the poset of growth vectors of length p+2 ending at m"""
    length = partial_dim_bracket(n, m) + 2
    vectors = list(enumerate_growth_vectors(n, m, length, reach_target=True))
    cds = {r.entries: expected_codimension(r) for r in vectors}
    out = set()
    for r in vectors:
        if cds[r.entries] <= m:
            continue
        if all(cds[other.entries] <= m for other in vectors if _is_shallower(other, r)):
            out.add(defect(r.canonical()))
    return out


def _minimal_violators(templates: _Templates, case: str, points: Sequence[Tuple[int, ...]]) -> List[Tuple[int, ...]]:
    """Points where the inequality fails but holds at every smaller valid point
    (componentwise in the free parameters, the leading l of cases a/b fixed)"""
    free = slice(1, None) if case in ("a", "b") else slice(0, None)
    valid = [pt for pt in points if templates.realise(case, pt) is not None]
    failing = [pt for pt in valid if not templates.holds(case, pt)]
    out = []
    for pt in failing:
        smaller = [q for q in valid if q != pt and all(a <= b for a, b in zip(q[free], pt[free]))]
        if all(templates.holds(case, q) for q in smaller):
            out.append(pt)
    return out


def enumerate_bounding_defects(n: int, m: int, confirm: bool = True) -> List[DefectCandidate]:
    """Candidate defect vectors of potentially bounding strata (n >= 3).

    With `confirm`, each candidate is marked by whether the poset oracle
    also finds it bounding.
    """
    templates = _Templates(n, m)
    p = templates.p
    raw: List[Tuple[str, Dict[str, int], GrowthVector]] = []
    for case, names, points in templates.grids():
        for point in _minimal_violators(templates, case, points):
            raw.append((case, dict(zip(names, point)), templates.realise(case, point)))
    for l1 in range(2, p):
        for l2 in range(l1 + 1, p):
            coranks = _corank_profile(l2, p, 2, _corank_profile(l1, l2 - 1, 1))
            r = _realise(n, m, p, coranks, p + 1)
            if r is not None:
                raw.append(("d", {"l1": l1, "l2": l2}, r))
        r = _realise(n, m, p, _corank_profile(l1, p, 2), p + 1)
        if r is not None:
            raw.append(("e", {"l1": l1}, r))
    oracle = oracle_bounding_defects(n, m) if confirm else None
    found: Dict[DefectVector, DefectCandidate] = {}
    for case, params, r in raw:
        if expected_codimension(r) <= m:
            continue
        delta = defect(r)
        if delta in found:
            continue
        confirmed = None if oracle is None else delta in oracle
        if confirmed is False:
            logger.warning(f"Bounding candidate {delta} (case {case}) is not confirmed by the poset oracle")
        found[delta] = DefectCandidate(case, params, delta, confirmed)
    return [found[delta] for delta in sorted(found)]
