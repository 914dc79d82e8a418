"""Exhaustive post-selection search for paradoxical knowledge.

The preparation stays the uniform superposition; candidate post-selections
range over an integer (or Gaussian-integer) coefficient grid.  Enumeration
order is lexicographic over the grid values, scans are deterministic, and
parallel execution merges contiguous chunks back in enumeration order so
the hit list is identical to a serial run.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence

from .family import (
    Family,
    PairRelated,
    pair_display,
    iter_all_relations,
    make_star_graphs,
    make_togetherness3,
    make_total_orders,
)
from .inference import (
    Knowledge,
    StateVector,
    extract_knowledge,
    inner,
    uniform_psi,
)
from .paradox import ConsistencyVerdict, check_consistency
from .scalar import ComplexRational, scalar

DEFAULT_BUDGET = 10_000_000


class BudgetExceededError(RuntimeError):
    """The requested enumeration is larger than the configured budget."""

    def __init__(self, count: int, budget: int):
        super().__init__(
            f"enumeration would visit {count} coefficient vectors, "
            f"over the budget of {budget}"
        )
        self.count = count
        self.budget = budget


@dataclass(frozen=True)
class GridSpec:
    """Coefficient grid: integers in [-c, c], optionally Gaussian integers.

    With skip_scalar_multiples on (the default), only one representative
    per rational-scaling class is emitted: the class member that comes
    first in enumeration order.  Verdicts are scale invariant, so the
    skipped vectors carry no information.
    """

    max_coeff: int
    include_imaginary: bool = False
    skip_scalar_multiples: bool = True

    def __post_init__(self):
        if self.max_coeff < 1:
            raise ValueError("max_coeff must be at least 1")

    def values(self) -> list:
        c = self.max_coeff
        if self.include_imaginary:
            return [
                scalar(a, b) for a in range(-c, c + 1) for b in range(-c, c + 1)
            ]
        return [scalar(a) for a in range(-c, c + 1)]


@dataclass(frozen=True)
class ParadoxHit:
    """One post-selection whose extracted knowledge no configuration satisfies."""

    phi_coeffs: tuple
    s: ComplexRational
    knowledge: Knowledge
    verdict: ConsistencyVerdict


def _is_canonical(vec: Sequence, c: int) -> bool:
    """Is this grid vector the first member of its rational-scaling class?

    Grid vectors are Gaussian-integer tuples, so two of them are rational
    multiples of one another iff both are integer multiples of the same
    primitive vector.  The class member enumerated first is k * primitive
    with the largest k that keeps every component inside the grid, negated
    so its leading nonzero component sorts lowest.
    """
    parts = []
    for z in vec:
        parts.append(abs(z.re.numerator))
        parts.append(abs(z.im.numerator))
    content = 0
    for v in parts:
        content = math.gcd(content, v)
    if content == 0:
        return False
    k_max = c // (max(parts) // content)
    lead = next(z for z in vec if not z.is_zero)
    negative_lead = lead.re < 0 or (lead.re == 0 and lead.im < 0)
    return negative_lead and content == k_max


def grid_total(family: Family, grid: GridSpec) -> int:
    """Number of raw grid vectors (including zero and non-canonical ones)."""
    base = 2 * grid.max_coeff + 1
    if grid.include_imaginary:
        base = base * base
    return base ** family.size


def _vector_at(values: list, m: int, index: int) -> tuple:
    """Decode the index-th vector of the lexicographic enumeration."""
    base = len(values)
    digits = []
    for _ in range(m):
        digits.append(index % base)
        index //= base
    return tuple(values[d] for d in reversed(digits))


def _iter_vectors(values: list, m: int, lo: int, hi: int, grid: GridSpec) -> Iterator:
    for index in range(lo, hi):
        vec = _vector_at(values, m, index)
        if all(z.is_zero for z in vec):
            continue
        if grid.skip_scalar_multiples and not _is_canonical(vec, grid.max_coeff):
            continue
        yield vec


def enumerate_phis(
    family: Family, grid: GridSpec, budget: int = DEFAULT_BUDGET
) -> Iterator:
    """Yield candidate coefficient vectors in lexicographic order.

    The zero vector is skipped; with skip_scalar_multiples, so is every
    vector that is not its scaling class's canonical representative.
    Raises BudgetExceededError up front when the raw enumeration is larger
    than the budget.
    """
    total = grid_total(family, grid)
    if total > budget:
        raise BudgetExceededError(total, budget)
    values = grid.values()
    yield from _iter_vectors(values, family.size, 0, total, grid)


def _scan_range(
    family: Family,
    tests: Sequence,
    psi: StateVector,
    values: list,
    lo: int,
    hi: int,
    grid: GridSpec,
):
    """Scan one contiguous index range; returns (hits, classified_count)."""
    hits = []
    classified = 0
    for vec in _iter_vectors(values, family.size, lo, hi, grid):
        phi = StateVector(family, vec)
        s = inner(phi, psi)
        if s.is_zero:
            continue
        classified += 1
        knowledge = extract_knowledge(phi, psi, tests)
        verdict = check_consistency(family, knowledge)
        if verdict.paradoxical:
            hits.append(ParadoxHit(vec, s, knowledge, verdict))
    return hits, classified


def find_paradoxes(
    family: Family,
    tests: Sequence,
    grid: GridSpec,
    psi: StateVector | None = None,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> list:
    """Every enumerated post-selection with nonzero overlap and no witness.

    Hits are returned in enumeration order regardless of the worker count:
    the index range is split into contiguous chunks and the chunk results
    are concatenated in chunk order.
    """
    total = grid_total(family, grid)
    if total > budget:
        raise BudgetExceededError(total, budget)
    if psi is None:
        psi = uniform_psi(family)
    if tests is None:
        tests = family.test_universe
    values = grid.values()
    if workers <= 1:
        hits, _ = _scan_range(family, tests, psi, values, 0, total, grid)
        return hits
    bounds = [total * k // workers for k in range(workers + 1)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        chunks = [
            pool.submit(_scan_range, family, tests, psi, values, lo, hi, grid)
            for lo, hi in zip(bounds, bounds[1:])
        ]
        hits = []
        for chunk in chunks:
            hits.extend(chunk.result()[0])
    return hits


@dataclass(frozen=True)
class MinFamilyReport:
    """Result of scanning all 1- and 2-configuration families for paradoxes."""

    n_particles: int
    families_total: int
    families_checked: int
    sampled: bool
    stride: int
    phis_checked: int
    hits: tuple

    @property
    def paradox_count(self) -> int:
        return len(self.hits)


def min_family_experiment(
    n: int, grid: GridSpec, budget: int = DEFAULT_BUDGET
) -> MinFamilyReport:
    """Scan every family of one or two relations on n particles for paradoxes.

    Expected outcome: none exist, whatever the grid.  A single relation is
    its own witness, and with two relations every certain verdict forces
    the knowledge to match one of them.  Exhaustive for n <= 2; for n = 3
    the family list is subsampled with a fixed stride when the raw count
    exceeds the budget, which keeps the run deterministic without a seed.
    """
    if not 1 <= n <= 3:
        raise ValueError("the experiment supports 1 to 3 particles")
    relations = list(iter_all_relations(n))
    m = len(relations)
    tests = tuple(
        PairRelated(i, j, pair_display("plain", i, j))
        for i in range(1, n + 1)
        for j in range(1, n + 1)
    )
    n_values = len(grid.values())
    n_singles = m
    n_pairs = m * (m - 1) // 2
    families_total = n_singles + n_pairs
    est_calls = n_singles * n_values + n_pairs * n_values * n_values
    stride = 1
    if est_calls > budget:
        stride = -(-est_calls // budget)
    sampled = stride > 1

    def family_configs():
        for a in range(m):
            yield (relations[a],)
        for a, b in itertools.combinations(range(m), 2):
            yield (relations[a], relations[b])

    values = grid.values()
    hits = []
    families_checked = 0
    phis_checked = 0
    for f_idx, configs in enumerate(family_configs()):
        if f_idx % stride != 0:
            continue
        families_checked += 1
        fam = Family(n, configs, tests, allow_self_pairs=True)
        psi = uniform_psi(fam)
        total = len(values) ** fam.size
        fam_hits, classified = _scan_range(fam, tests, psi, values, 0, total, grid)
        phis_checked += classified
        hits.extend((fam, hit) for hit in fam_hits)
    return MinFamilyReport(
        n, families_total, families_checked, sampled, stride, phis_checked, tuple(hits)
    )


def three_relation_pool() -> list:
    """The deterministic candidate relations for the 3-element family search.

    Stars, togetherness patterns and total orderings on three particles:
    13 distinct relations, in that order.
    """
    pool = []
    seen = set()
    for source in (make_star_graphs(3), make_togetherness3(), make_total_orders(3)):
        for config in source.configurations:
            if config.pairs not in seen:
                seen.add(config.pairs)
                pool.append(config)
    return pool


def three_relation_minimal_search(
    grid: GridSpec, budget: int = DEFAULT_BUDGET
) -> list:
    """Search every 3-subset of the candidate pool for paradox hits.

    Demonstrates that three relations already suffice for paradoxical
    knowledge.  Returns (family, hit) pairs: families in combination
    order, hits in enumeration order within each family.
    """
    pool = three_relation_pool()
    tests = tuple(
        PairRelated(i, j, pair_display("plain", i, j))
        for i, j in itertools.permutations(range(1, 4), 2)
    )
    values = grid.values()
    per_family = len(values) ** 3
    n_families = math.comb(len(pool), 3)
    if n_families * per_family > budget:
        raise BudgetExceededError(n_families * per_family, budget)
    results = []
    for combo in itertools.combinations(pool, 3):
        fam = Family(3, combo, tests)
        psi = uniform_psi(fam)
        fam_hits, _ = _scan_range(fam, tests, psi, values, 0, per_family, grid)
        results.extend((fam, hit) for hit in fam_hits)
    return results


def hit_family_count(results: list) -> int:
    """Number of distinct families appearing in (family, hit) result pairs."""
    seen = set()
    for fam, _hit in results:
        seen.add(tuple(c.name for c in fam.configurations))
    return len(seen)
