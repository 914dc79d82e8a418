"""Relation families: named configurations, measurable predicates, generators.

A family is the finite set of admissible configurations, each a basis state
of the system.  A configuration is either a binary relation on the particle
set {1..N} (stored as ordered pairs; symmetric relations store both
directions) or a labelled tuple such as an energy assignment.  The family
also fixes the universe of predicates one may measure and the configuration
order used for every coefficient vector downstream.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Union


class ApplicabilityError(ValueError):
    """A predicate was asked of a configuration kind it cannot judge."""


class FamilySizeError(ValueError):
    """A generator was asked for more configurations than full enumeration allows."""


@dataclass(frozen=True)
class Configuration:
    """One named basis state: a set of ordered particle pairs, or a label tuple."""

    name: str
    pairs: frozenset | None = None
    labels: tuple | None = None

    def __post_init__(self):
        if (self.pairs is None) == (self.labels is None):
            raise ValueError(
                f"configuration {self.name!r} needs exactly one of pairs or labels"
            )
        if self.pairs is not None:
            object.__setattr__(
                self, "pairs", frozenset((int(i), int(j)) for i, j in self.pairs)
            )
        else:
            object.__setattr__(self, "labels", tuple(int(v) for v in self.labels))


@dataclass(frozen=True)
class PairRelated:
    """True on a relation configuration iff the ordered pair (i, j) is present."""

    i: int
    j: int
    display: str


@dataclass(frozen=True)
class LabelEquals:
    """True on a tuple configuration iff the label at `index` equals `value`."""

    index: int
    value: int
    display: str


Predicate = Union[PairRelated, LabelEquals]


def eval_predicate(config: Configuration, predicate: Predicate) -> bool:
    """Evaluate a predicate on a configuration.  Pure and deterministic.

    Raises ApplicabilityError when the predicate kind does not match the
    configuration payload kind.
    """
    if isinstance(predicate, PairRelated):
        if config.pairs is None:
            raise ApplicabilityError(
                f"pair test {predicate.display} is not applicable to "
                f"tuple configuration {config.name!r}"
            )
        return (predicate.i, predicate.j) in config.pairs
    if isinstance(predicate, LabelEquals):
        if config.labels is None:
            raise ApplicabilityError(
                f"label test {predicate.display} is not applicable to "
                f"relation configuration {config.name!r}"
            )
        if not 0 <= predicate.index < len(config.labels):
            raise ApplicabilityError(
                f"label test {predicate.display} indexes position "
                f"{predicate.index} outside configuration {config.name!r}"
            )
        return config.labels[predicate.index] == predicate.value
    raise TypeError(f"unknown predicate type {type(predicate).__name__}")


# How a family renders the pair test (i, j) for humans.
PAIR_STYLES = ("plain", "samebox", "function")


@dataclass(frozen=True)
class Family:
    """The relevant configuration set plus the predicates measurable on it.

    Immutable after construction.  The configuration order fixes
    coefficient-vector indexing for every state vector built over the family.
    """

    n_particles: int
    configurations: tuple
    test_universe: tuple = ()
    generator: str | None = None
    pair_style: str = "plain"
    allow_self_pairs: bool = False

    def __post_init__(self):
        object.__setattr__(self, "configurations", tuple(self.configurations))
        object.__setattr__(self, "test_universe", tuple(self.test_universe))
        if self.n_particles < 1:
            raise ValueError("a family needs at least one particle")
        if not self.configurations:
            raise ValueError("a family needs at least one configuration")
        if self.pair_style not in PAIR_STYLES:
            raise ValueError(f"unknown pair style {self.pair_style!r}")
        names = [c.name for c in self.configurations]
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise ValueError(f"duplicate configuration names: {', '.join(dup)}")
        for c in self.configurations:
            if c.pairs is None:
                continue
            for i, j in c.pairs:
                if not (1 <= i <= self.n_particles and 1 <= j <= self.n_particles):
                    raise ValueError(
                        f"configuration {c.name!r} has pair ({i}, {j}) outside "
                        f"1..{self.n_particles}"
                    )

    @property
    def size(self) -> int:
        return len(self.configurations)

    def names(self) -> list:
        return [c.name for c in self.configurations]

    def name_index(self) -> dict:
        return {c.name: k for k, c in enumerate(self.configurations)}

    def pair_test(self, i: int, j: int) -> PairRelated:
        """Build the pair test (i, j) in this family's display style.

        Self pairs are rejected unless the family admits relations with
        them (the all-relations universe does; the physical families never
        measure a particle against itself).
        """
        if not (1 <= i <= self.n_particles and 1 <= j <= self.n_particles):
            raise ValueError(
                f"pair ({i}, {j}) outside particle range 1..{self.n_particles}"
            )
        if i == j and not self.allow_self_pairs:
            raise ValueError(f"self pair ({i}, {j}) is not measurable in this family")
        return PairRelated(i, j, pair_display(self.pair_style, i, j))

    def test_by_display(self, display: str) -> Predicate:
        for p in self.test_universe:
            if p.display == display:
                return p
        raise KeyError(f"no test named {display!r} in this family")


def pair_display(style: str, i: int, j: int) -> str:
    if style == "samebox":
        return f"SameBox({i},{j})"
    if style == "function":
        return f"r({i})={j}"
    if i < 10 and j < 10:
        return f"P_{i}{j}"
    return f"P_{i},{j}"


def _symmetric(*edges) -> frozenset:
    out = set()
    for i, j in edges:
        out.add((i, j))
        out.add((j, i))
    return frozenset(out)


def _ordered_pair_tests(family_style: str, n: int, ordered: bool) -> tuple:
    """All distinct-pair tests: ordered pairs when `ordered`, else i < j."""
    pairs = (
        itertools.permutations(range(1, n + 1), 2)
        if ordered
        else itertools.combinations(range(1, n + 1), 2)
    )
    return tuple(PairRelated(i, j, pair_display(family_style, i, j)) for i, j in pairs)


def make_togetherness3() -> Family:
    """Three particles in two boxes, collapsed to who-is-with-whom.

    Four configurations: t (all three together) and a_k (particle k alone,
    the other two together).  Measurable tests: the three distinct pairs.
    """
    configs = (
        Configuration("t", pairs=_symmetric((1, 2), (2, 3), (1, 3))),
        Configuration("a1", pairs=_symmetric((2, 3))),
        Configuration("a2", pairs=_symmetric((1, 3))),
        Configuration("a3", pairs=_symmetric((1, 2))),
    )
    tests = tuple(
        PairRelated(i, j, pair_display("plain", i, j)) for i, j in ((1, 2), (2, 3), (1, 3))
    )
    return Family(3, configs, tests, generator="togetherness3")


def make_total_orders(n: int) -> Family:
    """All n! strict total orderings of n particles by energy.

    A configuration's name lists the particles from lowest to highest
    energy: in "312" particle 3 has the least energy and particle 2 the
    most.  The pair (i, j) is present iff particle i sits below particle j,
    so the test P_ij asks whether E_i < E_j.
    """
    if n < 2:
        raise ValueError("total orderings need at least 2 particles")
    if n > 8:
        raise FamilySizeError("total orderings are enumerated fully; n is capped at 8")
    configs = []
    for perm in itertools.permutations(range(1, n + 1)):
        rank = {particle: pos for pos, particle in enumerate(perm)}
        pairs = frozenset(
            (i, j)
            for i in range(1, n + 1)
            for j in range(1, n + 1)
            if i != j and rank[i] < rank[j]
        )
        configs.append(Configuration("".join(map(str, perm)), pairs=pairs))
    tests = _ordered_pair_tests("plain", n, ordered=True)
    return Family(n, tuple(configs), tests, generator="total_orders")


def make_one_to_one_functions(n: int) -> Family:
    """All n! one-to-one functions on {1..n}.

    The name "231" means r(1)=2, r(2)=3, r(3)=1; the pair (i, j) is present
    iff r(i) = j.  The same name set as the total orders, read differently:
    these relations are function graphs, not orderings.
    """
    if n < 2:
        raise ValueError("one-to-one functions need at least 2 particles")
    if n > 8:
        raise FamilySizeError("one-to-one functions are enumerated fully; n is capped at 8")
    configs = []
    for perm in itertools.permutations(range(1, n + 1)):
        pairs = frozenset((pos + 1, value) for pos, value in enumerate(perm))
        configs.append(Configuration("".join(map(str, perm)), pairs=pairs))
    tests = _ordered_pair_tests("function", n, ordered=True)
    return Family(n, tuple(configs), tests, generator="one_to_one_functions")


def make_star_graphs(n: int) -> Family:
    """The n star graphs on n particles; r_k has centre k joined to all others."""
    if n < 3:
        raise ValueError("star graphs need at least 3 particles")
    configs = []
    for k in range(1, n + 1):
        edges = [(k, m) for m in range(1, n + 1) if m != k]
        configs.append(Configuration(f"r_{k}", pairs=_symmetric(*edges)))
    tests = _ordered_pair_tests("plain", n, ordered=False)
    return Family(n, tuple(configs), tests, generator="star_graphs")


def make_lr_strings(n: int) -> Family:
    """All 2^n left/right box assignments for n particles.

    Configuration "LLR" puts particles 1 and 2 in the left box and particle
    3 in the right one; SameBox(i, j) holds iff the letters agree.
    """
    if not 1 <= n <= 20:
        raise ValueError("box strings support 1..20 particles")
    configs = []
    for letters in itertools.product("LR", repeat=n):
        name = "".join(letters)
        pairs = frozenset(
            (i, j)
            for i in range(1, n + 1)
            for j in range(1, n + 1)
            if i != j and letters[i - 1] == letters[j - 1]
        )
        configs.append(Configuration(name, pairs=pairs))
    tests = _ordered_pair_tests("samebox", n, ordered=False)
    return Family(n, tuple(configs), tests, generator="lr_strings", pair_style="samebox")


def make_ternary_energy() -> Family:
    """Three particles a, b, c with energies in {0, 1, 2} and E_a + E_b = E_c.

    Six admissible energy tuples, named by their digits.  The measurable
    tests are the label constraints E_a=1, E_b=1 and E_c=2.
    """
    names = ("000", "101", "011", "112", "202", "022")
    configs = tuple(
        Configuration(name, labels=tuple(int(ch) for ch in name)) for name in names
    )
    tests = (
        LabelEquals(0, 1, "E_a=1"),
        LabelEquals(1, 1, "E_b=1"),
        LabelEquals(2, 2, "E_c=2"),
    )
    return Family(3, configs, tests, generator="ternary_energy")


def iter_all_relations(n: int) -> Iterator[Configuration]:
    """Yield every binary relation on {1..n} as a configuration.

    Pairs are ordered row-major: (1,1), (1,2), ..., (n,n).  Relations are
    enumerated by subset mask in increasing order and named by the pairs
    they contain, e.g. "{}", "{11}", "{11,21}".
    """
    pair_order = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    for mask in range(1 << len(pair_order)):
        pairs = frozenset(p for k, p in enumerate(pair_order) if mask >> k & 1)
        name = "{" + ",".join(f"{i}{j}" for i, j in pair_order if (i, j) in pairs) + "}"
        yield Configuration(name, pairs=pairs)


def make_all_relations(n: int) -> Family:
    """Every relation on {1..n} as one family; full enumeration (n <= 2 only)."""
    if n < 1:
        raise ValueError("need at least one particle")
    if n > 2:
        raise FamilySizeError(
            f"all relations on {n} particles means 2^{n * n} configurations; "
            "full enumeration stops at n = 2.  Use the search module's sampled "
            "experiments for larger n."
        )
    configs = tuple(iter_all_relations(n))
    tests = tuple(
        PairRelated(i, j, pair_display("plain", i, j))
        for i in range(1, n + 1)
        for j in range(1, n + 1)
    )
    return Family(n, configs, tests, generator="all_relations", allow_self_pairs=True)


GENERATORS = {
    "togetherness3": (make_togetherness3, False),
    "total_orders": (make_total_orders, True),
    "one_to_one_functions": (make_one_to_one_functions, True),
    "star_graphs": (make_star_graphs, True),
    "lr_strings": (make_lr_strings, True),
    "ternary_energy": (make_ternary_energy, False),
    "all_relations": (make_all_relations, True),
}


class FamilyDescriptionError(ValueError):
    """A family description that does not validate."""


def family_from_description(desc: dict) -> Family:
    """Build a family from a scenario-file description.

    Either {"generator": name, "n": k} for a built-in generator, or
    {"custom": {"particles": N, "configurations": [{"name": ..., "pairs":
    [[i, j], ...]}, ...]}} for an explicit relation list.
    """
    if not isinstance(desc, dict):
        raise FamilyDescriptionError("family: expected an object")
    if "generator" in desc:
        name = desc["generator"]
        if name not in GENERATORS:
            known = ", ".join(sorted(GENERATORS))
            raise FamilyDescriptionError(
                f"family.generator: unknown generator {name!r} (known: {known})"
            )
        fn, takes_n = GENERATORS[name]
        if takes_n:
            if "n" not in desc:
                raise FamilyDescriptionError(f"family.n: required for generator {name!r}")
            if not isinstance(desc["n"], int):
                raise FamilyDescriptionError("family.n: expected an integer")
            try:
                return fn(desc["n"])
            except ValueError as exc:
                raise FamilyDescriptionError(f"family: {exc}") from exc
        return fn()
    if "custom" in desc:
        return _custom_family(desc["custom"])
    raise FamilyDescriptionError("family: needs either 'generator' or 'custom'")


def _custom_family(custom: dict) -> Family:
    if not isinstance(custom, dict):
        raise FamilyDescriptionError("family.custom: expected an object")
    try:
        n = int(custom["particles"])
    except (KeyError, TypeError, ValueError):
        raise FamilyDescriptionError("family.custom.particles: expected an integer")
    raw_configs = custom.get("configurations")
    if not isinstance(raw_configs, list) or not raw_configs:
        raise FamilyDescriptionError(
            "family.custom.configurations: expected a non-empty list"
        )
    configs = []
    for idx, entry in enumerate(raw_configs):
        where = f"family.custom.configurations[{idx}]"
        if not isinstance(entry, dict) or "name" not in entry:
            raise FamilyDescriptionError(f"{where}: expected an object with 'name'")
        if "pairs" not in entry:
            raise FamilyDescriptionError(f"{where}.pairs: required")
        pairs = entry["pairs"]
        if not isinstance(pairs, list) or not all(
            isinstance(p, list) and len(p) == 2 for p in pairs
        ):
            raise FamilyDescriptionError(f"{where}.pairs: expected a list of [i, j] pairs")
        configs.append(
            Configuration(str(entry["name"]), pairs=frozenset((p[0], p[1]) for p in pairs))
        )
    has_self = any((i, i) in c.pairs for c in configs for i in range(1, n + 1))
    tests = _ordered_pair_tests("plain", n, ordered=True)
    try:
        return Family(
            n, tuple(configs), tests, generator=None, allow_self_pairs=has_self
        )
    except ValueError as exc:
        raise FamilyDescriptionError(f"family.custom: {exc}") from exc
