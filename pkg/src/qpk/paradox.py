"""Paradox certification and graph consequences of affirmed knowledge.

Knowledge is paradoxical when no configuration in the family satisfies
every affirmed predicate while avoiding every denied one.  The check is an
exhaustive scan over the family, so a paradox verdict doubles as a
certificate: every configuration was examined and none qualified.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .family import Family, PairRelated, eval_predicate, make_star_graphs
from .inference import Knowledge, StateVector, extract_knowledge, inner, uniform_psi
from .scalar import ComplexRational, ONE, scalar

MAX_COLORING_PARTICLES = 10


@dataclass(frozen=True)
class ConsistencyVerdict:
    """Outcome of the witness scan: a consistent witness, or a certified paradox."""

    paradoxical: bool
    witness: str | None
    checked_count: int


@dataclass(frozen=True)
class BasisOutcome:
    label: str
    s: ComplexRational
    knowledge: Knowledge | None
    verdict: ConsistencyVerdict | None


@dataclass(frozen=True)
class BasisReport:
    """Per-outcome knowledge for a final-measurement basis.

    all_paradoxical holds iff every outcome that can actually occur
    (nonzero overlap with the preparation) certifies a paradox.
    """

    orthogonal: bool
    outcomes: tuple
    all_paradoxical: bool


@dataclass(frozen=True)
class ChromaticReport:
    """Exact clique and colouring numbers of the affirmed-pairs graph."""

    n_particles: int
    edges: tuple
    clique: tuple
    clique_size: int
    chromatic_number: int


def satisfies_knowledge(config, knowledge: Knowledge) -> bool:
    """True iff the configuration affirms all of A and none of D."""
    return all(eval_predicate(config, p) for p in knowledge.affirmed) and not any(
        eval_predicate(config, p) for p in knowledge.denied
    )


def check_consistency(family: Family, knowledge: Knowledge) -> ConsistencyVerdict:
    """Scan the family in order for a witness; certify a paradox if none exists."""
    for config in family.configurations:
        if satisfies_knowledge(config, knowledge):
            return ConsistencyVerdict(False, config.name, family.size)
    return ConsistencyVerdict(True, None, family.size)


def check_unconditional(
    family: Family,
    psi: StateVector,
    basis: Sequence,
    tests: Sequence,
) -> BasisReport:
    """Check whether every possible final outcome yields paradoxical knowledge.

    Verifies that the supplied vectors are pairwise orthogonal (reported,
    not raised), then extracts and judges knowledge for each outcome whose
    overlap with the preparation is nonzero.
    """
    basis = list(basis)
    orthogonal = True
    for a in range(len(basis)):
        for b in range(a + 1, len(basis)):
            if not inner(basis[a], basis[b]).is_zero:
                orthogonal = False
    outcomes = []
    all_paradoxical = True
    for k, phi in enumerate(basis, start=1):
        label = f"outcome {k}"
        s = inner(phi, psi)
        if s.is_zero:
            outcomes.append(BasisOutcome(label, s, None, None))
            continue
        knowledge = extract_knowledge(phi, psi, tests)
        verdict = check_consistency(family, knowledge)
        if not verdict.paradoxical:
            all_paradoxical = False
        outcomes.append(BasisOutcome(label, s, knowledge, verdict))
    return BasisReport(orthogonal, tuple(outcomes), all_paradoxical)


def analyze_coloring(knowledge: Knowledge, n: int) -> ChromaticReport:
    """Build the undirected graph of affirmed pairs and solve it exactly.

    Exhaustive clique and chromatic search; capped at 10 particles, which
    covers every scenario this package ships.
    """
    if n < 1:
        raise ValueError("need at least one particle")
    if n > MAX_COLORING_PARTICLES:
        raise ValueError(
            f"exact colouring is capped at {MAX_COLORING_PARTICLES} particles; got {n}"
        )
    edges = set()
    for p in knowledge.affirmed:
        if not isinstance(p, PairRelated):
            raise ValueError(
                f"affirmed test {getattr(p, 'display', p)!r} is not a particle pair"
            )
        if not (1 <= p.i <= n and 1 <= p.j <= n):
            raise ValueError(f"affirmed pair ({p.i}, {p.j}) outside 1..{n}")
        if p.i == p.j:
            raise ValueError(f"affirmed self pair ({p.i}, {p.j}) has no colouring")
        edges.add((min(p.i, p.j), max(p.i, p.j)))
    adjacency = {v: set() for v in range(1, n + 1)}
    for i, j in edges:
        adjacency[i].add(j)
        adjacency[j].add(i)
    clique = _max_clique(adjacency)
    chromatic = _chromatic_number(adjacency, lower=max(1, len(clique)))
    return ChromaticReport(
        n, tuple(sorted(edges)), tuple(clique), len(clique), chromatic
    )


def _max_clique(adjacency: dict) -> list:
    """Exact maximum clique by branch and bound over candidate extensions."""
    vertices = sorted(adjacency)
    best: list = []

    def extend(clique, candidates):
        nonlocal best
        if len(clique) > len(best):
            best = list(clique)
        for idx, v in enumerate(candidates):
            if len(clique) + len(candidates) - idx <= len(best):
                return
            extend(clique + [v], [u for u in candidates[idx + 1 :] if u in adjacency[v]])

    extend([], vertices)
    return sorted(best)


def _chromatic_number(adjacency: dict, lower: int) -> int:
    """Smallest k admitting a proper colouring, by backtracking from the clique bound."""
    vertices = sorted(adjacency, key=lambda v: -len(adjacency[v]))
    n = len(vertices)

    def colorable(k: int) -> bool:
        colors: dict = {}

        def assign(idx: int, used: int) -> bool:
            if idx == n:
                return True
            v = vertices[idx]
            taken = {colors[u] for u in adjacency[v] if u in colors}
            # Allowing at most one brand-new colour per step breaks the
            # colour-permutation symmetry.
            for color in range(min(used + 1, k)):
                if color in taken:
                    continue
                colors[v] = color
                if assign(idx + 1, max(used, color + 1)):
                    return True
                del colors[v]
            return False

        return assign(0, 0)

    for k in range(max(1, lower), n + 1):
        if colorable(k):
            return k
    return n


def starN_scenario(n: int):
    """The star-graph scenario with one heavy negative coefficient.

    Returns (family, preparation, post-selection) where the post-selection
    weights the first n-1 stars by 1 and the last by -(n-3).  The overlap
    is then 2, every pair within the first n-1 particles is affirmed with
    amplitude 2, and the affirmed knowledge contains a clique of size n-1
    that no star graph can host.
    """
    if n < 4:
        raise ValueError("the star scenario needs at least 4 particles")
    family = make_star_graphs(n)
    psi = uniform_psi(family)
    coeffs = tuple(ONE for _ in range(n - 1)) + (scalar(-(n - 3)),)
    phi = StateVector(family, coeffs)
    return family, psi, phi
