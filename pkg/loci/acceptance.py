"""Acceptance suites run by `liegiambelli check`.

Each suite returns CheckResult records; a suite never raises on a failed
comparison, it reports it.
"""
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from lie_tools.chern import (
    ChernCharacter,
    FormalBundle,
    char_to_class,
    class_to_char,
    pbw_identity_holds,
)
from lie_tools.graded_ring import Field, GradedSeries
from lie_tools.free_lie import (
    HallBasis,
    count_max_depth,
    lie_char,
    lie_total_class,
    pbw_dimension_series,
    witt_dim,
)
from loci.degeneracy import (
    enumerate_growth_vectors,
    giambelli_class,
    rho_maps,
    validate_growth,
    young_diagrams,
)
from loci.strata import (
    enumerate_admissible_defects,
    surjection_count,
    surjection_threshold,
    witt_bound_check,
    oracle_admissible_defects,
)

logger = logging.getLogger(__name__)

N = sympy.Symbol("n")

# Coefficients of c(L^k) for a rank-n bundle through weight 4, keyed by the
# multiset of Chern indices of each monomial ((1, 2) is c_1 c_2).
REFERENCE_LIE_CLASSES: Dict[int, Dict[Tuple[int, ...], str]] = {
    1: {(1,): "1", (2,): "1", (3,): "1", (4,): "1"},
    2: {
        (1,): "-1 + n",
        (1, 1): "1 - 3*n/2 + n**2/2",
        (2,): "-2 + n",
        (1, 1, 1): "-1 + 11*n/6 - n**2 + n**3/6",
        (1, 2): "4 - 4*n + n**2",
        (3,): "-4 + n",
        (1, 1, 1, 1): "1 - 25*n/12 + 35*n**2/24 - 5*n**3/12 + n**4/24",
        (1, 1, 2): "-6 + 8*n - 7*n**2/2 + n**3/2",
        (2, 2): "3 - 5*n/2 + n**2/2",
        (1, 3): "9 - 6*n + n**2",
        (4,): "-8 + n",
    },
    3: {
        (1,): "-1 + n**2",
        (1, 1): "2 - n - 3*n**2/2 + n**4/2",
        (2,): "-3 + n**2",
        (1, 1, 1): "-4 + 3*n + 17*n**2/6 - n**3 - n**4 + n**6/6",
        (1, 2): "12 - 4*n - 5*n**2 + n**4",
        (3,): "-9 + n**2",
        (1, 1, 1, 1): "8 - 15*n/2 - 61*n**2/12 + 7*n**3/2 + 47*n**4/24 - n**5/2 - 5*n**6/12 + n**8/24",
        (1, 1, 2): "-36 + 19*n + 35*n**2/2 - 5*n**3 - 4*n**4 + n**6/2",
        (2, 2): "18 - 6*n - 7*n**2/2 + n**4/2",
        (1, 3): "36 - 6*n - 11*n**2 + n**4",
        (4,): "-27 + n**2",
    },
    4: {
        (1,): "-n + n**3",
        (1, 1): "1 + n - n**2 - n**3/2 - n**4 + n**6/2",
        # printed as -2(n + n^3) in the classical table; the Newton
        # identities give n^3 - 2n
        (2,): "-2*n + n**3",
        (1, 1, 1): "-4 - n/3 + 2*n**2 + 8*n**3/3 + 3*n**4/2 - n**5 - n**6/2 - n**7/2 + n**9/6",
        (1, 2): "8 + 4*n - 4*n**2 - n**3 - 3*n**4 + n**6",
        (3,): "-4*n + n**3",
        (1, 1, 1, 1): ("13 - 2*n - 77*n**2/12 - 35*n**3/4 - 3*n**4/4 + 5*n**5/2 + 55*n**6/24"
                       " + n**7 - n**8/2 - n**9/4 - n**10/6 + n**12/24"),
        (1, 1, 2): "-48 + 12*n**2 + 18*n**3 + 7*n**4 - 5*n**5 - 3*n**6/2 - 2*n**7 + n**9/2",
        (2, 2): "24 + 4*n - 7*n**2 - n**3/2 - 2*n**4 + n**6/2",
        (1, 3): "24 + 8*n - 5*n**2 - n**3 - 5*n**4 + n**6",
        (4,): "-8*n + n**3",
    },
}

# Growth vector, m, and the expected class as text
LOCUS_EXAMPLES = [
    ((2, 2, 4), 4, "w_2(M) + w_2(V) + w_1(V)^2"),
    ((2, 3, 3), 4, "w_2(M) + w_1(M)^2 + w_1(M) w_1(V) + w_1(V)^2"),
    ((2, 2, 3, 4), 4, "w_3(M) + w_2(M) w_1(M) + w_2(M) w_1(V) + w_1(V)^3"),
]

# The six length-5 Hall words on {u, v}, in order
HALL_WORDS_N2_K5 = [
    "(u(u(u(u,v))))",
    "(v(u(u(u,v))))",
    "(v(v(u(u,v))))",
    "(v(v(v(u,v))))",
    "((u,v)(u(u,v)))",
    "((u,v)(v(u,v)))",
]


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    detail: str = ""


def reference_class(n: int, k: int, order: int = 4) -> GradedSeries:
    """The tabulated c(L^k) evaluated at a concrete n"""
    terms = {(): 1}
    for indices, expr in REFERENCE_LIE_CLASSES[k].items():
        value = sympy.Rational(sympy.sympify(expr).subs(N, n))
        mono = {}
        for index in indices:
            mono[f"c_{index}"] = mono.get(f"c_{index}", 0) + 1
        key = tuple((("c", int(name[2:]), exp) for name, exp in sorted(mono.items())))
        terms[key] = Fraction(int(value.p), int(value.q))
    return GradedSeries(Field.Q, order, terms)


def random_series(rng: random.Random, field: Field, order: int, families: Sequence[str] = ("c",),
                  terms: int = 6, constant: Optional[int] = None) -> GradedSeries:
    """Random series with small integer (or half-integer over Q) coefficients"""
    out: Dict[tuple, Fraction] = {}
    for _ in range(terms):
        mono = []
        budget = rng.randint(1, order) if order else 0
        while budget > 0:
            index = rng.randint(1, budget)
            mono.append((rng.choice(families), index, 1))
            budget -= index
        coeff = Fraction(rng.randint(-3, 3), rng.choice((1, 2)))
        if field is Field.F2:
            coeff = rng.randint(0, 1)
        out[tuple(mono)] = coeff
    series = GradedSeries(field, order, out)
    if constant is not None:
        series = series - series.constant_term + constant
    return series


def suite_examples() -> List[CheckResult]:
    results = []
    for entries, m, expected in LOCUS_EXAMPLES:
        r = validate_growth(entries, m=m)
        for form in ("lambda", "mu"):
            got = giambelli_class(r, form).to_text()
            results.append(CheckResult("examples", f"locus {r} {form}", got == expected,
                                       f"got {got}, expected {expected}"))
    lam, mu, cd = young_diagrams(validate_growth((2, 2, 3, 4), m=4))
    results.append(CheckResult("examples", "diagrams (2,2,3,4)",
                               lam.parts == (2, 1) and mu.parts == (2, 1) and cd == 3,
                               f"lambda={lam.parts}, mu={mu.parts}, cd={cd}"))
    _, rho_prime = rho_maps(validate_growth((2, 3, 3), m=4))
    results.append(CheckResult("examples", "rho' (2,3,3)", rho_prime == [1, 1], f"got {rho_prime}"))
    honest = lie_total_class(2, 2, 4, formal=False).to_text()
    results.append(CheckResult("examples", "c(L^2) for n=2", honest == "1 + c_1", f"got {honest}"))
    return results


def suite_tables(ns: Iterable[int] = range(2, 7)) -> List[CheckResult]:
    results = []
    for k in sorted(REFERENCE_LIE_CLASSES):
        for n in ns:
            got = lie_total_class(n, k, 4, formal=True)
            expected = reference_class(n, k)
            results.append(CheckResult("tables", f"c(L^{k}) at n={n}", got == expected,
                                       "" if got == expected else f"got {got}, expected {expected}"))
    return results


def suite_integrality(n_max: int = 6, k_max: int = 5, order: int = 4) -> List[CheckResult]:
    results = []
    for n in range(1, n_max + 1):
        for k in range(1, k_max + 1):
            series = lie_total_class(n, k, order)
            bad = [c for c in series.terms.values() if c.denominator != 1]
            results.append(CheckResult("integrality", f"n={n} k={k}", not bad, f"non-integral {bad}" if bad else ""))
    return results


def suite_hall(n_max: int = 4, k_max: int = 10) -> List[CheckResult]:
    results = []
    for n in range(1, n_max + 1):
        basis = HallBasis(n, k_max)
        for k in range(1, k_max + 1):
            size = len(basis.words(k))
            results.append(CheckResult("hall", f"|H^{k}| n={n}", size == witt_dim(n, k),
                                       f"{size} words, d={witt_dim(n, k)}"))
    words = [w.render(compact=True) for w in HallBasis(2, 5).words(5)]
    results.append(CheckResult("hall", "H^5 words n=2", words == HALL_WORDS_N2_K5, f"got {words}"))
    return results


def suite_pbw(n_max: int = 5, k_max: int = 12, full_n: Sequence[int] = (2, 3),
              t_order: int = 5, order: int = 4) -> List[CheckResult]:
    results = []
    for n in range(1, n_max + 1):
        series = pbw_dimension_series(n, k_max)
        expected = np.array([n ** j for j in range(k_max + 1)], dtype=object)
        ok = bool(np.array_equal(series, expected))
        results.append(CheckResult("pbw", f"dimension series n={n}", ok, f"got {list(series)}"))
    for n in full_n:
        ch = class_to_char(FormalBundle.generic(n, "c", Field.Q, order))
        lies = [lie_char(ch, k) for k in range(1, t_order + 1)]
        results.append(CheckResult("pbw", f"product identity n={n}", pbw_identity_holds(ch, lies, t_order)))
    return results


def suite_forms(n_max: int = 3, k_max: int = 4, m_max: int = 10) -> List[CheckResult]:
    results = []
    checked = failed = 0
    detail = ""
    for n in range(1, n_max + 1):
        for m in range(n, m_max + 1):
            for k in range(1, k_max + 1):
                for r in enumerate_growth_vectors(n, m, k):
                    lam, mu, cd = young_diagrams(r)
                    checked += 1
                    if cd > m:
                        continue
                    by_lambda = giambelli_class(r, "lambda")
                    by_mu = giambelli_class(r, "mu")
                    if by_lambda != by_mu or not by_lambda.is_homogeneous(cd):
                        failed += 1
                        detail = detail or f"{r} m={m}: {by_lambda} vs {by_mu}"
    results.append(CheckResult("forms", f"{checked} growth vectors", failed == 0,
                               detail or f"{failed} failures"))
    return results


def suite_depth(n_max: int = 4, k_max: int = 7) -> List[CheckResult]:
    results = []
    for n in range(1, n_max + 1):
        basis = HallBasis(n, k_max)
        for k in range(2, k_max + 1):
            found = len(basis.max_depth_words(k))
            results.append(CheckResult("depth", f"max depth n={n} k={k}", found == count_max_depth(n, k),
                                       f"{found} words, closed form {count_max_depth(n, k)}"))
    for n in range(1, 9):
        results.append(CheckResult("depth", f"sharp_2({n})", count_max_depth(n, 2) == n * (n - 1) // 2))
    return results


def suite_bounds() -> List[CheckResult]:
    results = []
    for n in range(3, 7):
        rows = witt_bound_check(n, 8, k_min=2)
        results.append(CheckResult("bounds", f"witt bound n={n}", all(row.holds for row in rows)))
    rows = witt_bound_check(2, 10)
    results.append(CheckResult("bounds", "witt bound n=2", all(row.holds for row in rows)))
    for n, m in ((2, 4), (3, 6), (3, 14)):
        threshold = surjection_threshold(n, m)
        ok = threshold is not None and not surjection_count(n, m, threshold).surjective_possible
        results.append(CheckResult("bounds", f"surjection threshold n={n} m={m}", ok, f"threshold {threshold}"))
    return results


def suite_defects(cases: Sequence[Tuple[int, int]] = ((3, 6), (3, 10), (3, 14), (4, 10))) -> List[CheckResult]:
    results = []
    for n, m in cases:
        closed = {c.defect for c in enumerate_admissible_defects(n, m)}
        oracle = oracle_admissible_defects(n, m)
        missing = sorted(oracle - closed)
        extra = sorted(closed - oracle)
        detail = ""
        if missing or extra:
            detail = (f"missing {[str(d) for d in missing]}, extra {[str(d) for d in extra]}")
            logger.warning(f"Closed-form defect enumeration diverges from the oracle for n={n}, m={m}: {detail}")
        results.append(CheckResult("defects", f"n={n} m={m}", not missing and not extra, detail))
    return results


def suite_roundtrip(count: int = 1000, seed: int = 20240611) -> List[CheckResult]:
    rng = random.Random(seed)
    failures: Dict[str, int] = {"class_char": 0, "invert": 0, "exp_log": 0, "rescale": 0}
    for _ in range(count):
        order = rng.randint(1, 5)
        bundle = FormalBundle(rng.randint(0, 4), random_series(rng, Field.Q, order, constant=1))
        if char_to_class(class_to_char(bundle)) != bundle:
            failures["class_char"] += 1
        field = rng.choice((Field.Q, Field.F2))
        a = random_series(rng, field, order, ("c", "v"), constant=1 if field is Field.F2 else rng.choice((1, 2, -3)))
        if not (a * a.invert()).is_one:
            failures["invert"] += 1
        x = random_series(rng, Field.Q, order, constant=0)
        if x.exp().log() != x:
            failures["exp_log"] += 1
        b = random_series(rng, Field.Q, order)
        d = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
        if (x * b).rescale(d) != x.rescale(d) * b.rescale(d):
            failures["rescale"] += 1
    return [CheckResult("roundtrip", name, bad == 0, f"{bad} of {count} failed")
            for name, bad in failures.items()]


SUITES: Dict[str, Callable[[], List[CheckResult]]] = {
    "examples": suite_examples,
    "tables": suite_tables,
    "integrality": suite_integrality,
    "hall": suite_hall,
    "pbw": suite_pbw,
    "forms": suite_forms,
    "depth": suite_depth,
    "bounds": suite_bounds,
    "defects": suite_defects,
    "roundtrip": suite_roundtrip,
}


def run_suites(names: Sequence[str]) -> List[CheckResult]:
    if "all" in names:
        names = list(SUITES)
    results = []
    for name in names:
        if name not in SUITES:
            raise ValueError(f"Unknown suite {name!r}; expected one of {sorted(SUITES)} or 'all'")
        logger.info(f"Running suite {name}")
        results.extend(SUITES[name]())
    return results
