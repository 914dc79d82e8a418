"""Scenario documents: schema qpk/1, the built-in registry, and a runner.

A scenario file packages a family, a preparation, a post-selection (a
single coefficient map, or a basis of maps for the every-outcome check)
and the intermediate tests to classify.  Coefficients are exact scalar
strings, never floats.  The built-in scenarios double as golden records:
each carries the expected amplitudes, verdicts and knowledge sets, and
`verify` replays them from these embedded copies.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .family import Family, FamilyDescriptionError, Predicate, family_from_description
from .inference import (
    Knowledge,
    NonOverlappingError,
    StateVector,
    extract_knowledge,
    inner,
    product_state,
    uniform_psi,
)
from .paradox import (
    BasisReport,
    ConsistencyVerdict,
    check_consistency,
    check_unconditional,
)
from .scalar import ComplexRational, ScalarParseError, ZERO, format_scalar, parse_scalar

SCHEMA_VERSION = "qpk/1"


class ScenarioError(ValueError):
    """A scenario document that does not validate; the message names the field."""


@dataclass(frozen=True)
class Scenario:
    family: Family
    psi: StateVector
    phi: StateVector | None
    basis: tuple | None
    tests: tuple
    doc: dict


@dataclass(frozen=True)
class AnalysisResult:
    """What an analysis run produced: single post-selection or full basis."""

    scenario: Scenario
    s: ComplexRational | None
    knowledge: Knowledge | None
    consistency: ConsistencyVerdict | None
    basis_report: BasisReport | None

    @property
    def is_basis(self) -> bool:
        return self.basis_report is not None


def _parse_coeff(text, where: str) -> ComplexRational:
    if not isinstance(text, str):
        raise ScenarioError(f"{where}: coefficients are scalar strings, got {text!r}")
    try:
        return parse_scalar(text)
    except ScalarParseError as exc:
        raise ScenarioError(f"{where}: {exc}") from exc


def _vector_from_map(family: Family, coeffs: dict, where: str) -> StateVector:
    if not isinstance(coeffs, dict):
        raise ScenarioError(f"{where}: expected an object of name -> scalar")
    index = family.name_index()
    out = [ZERO] * family.size
    for name, text in coeffs.items():
        if name not in index:
            raise ScenarioError(f"{where}.{name}: no configuration with this name")
        out[index[name]] = _parse_coeff(text, f"{where}.{name}")
    return StateVector(family, tuple(out))


def _build_psi(family: Family, spec, where: str = "psi") -> StateVector:
    if spec == "uniform":
        return uniform_psi(family)
    if isinstance(spec, dict) and "coeffs" in spec:
        return _vector_from_map(family, spec["coeffs"], f"{where}.coeffs")
    if isinstance(spec, dict) and "product" in spec:
        pairs = spec["product"]
        if not isinstance(pairs, list) or not all(
            isinstance(p, list) and len(p) == 2 for p in pairs
        ):
            raise ScenarioError(f"{where}.product: expected a list of [left, right] pairs")
        amplitudes = [
            (
                _parse_coeff(p[0], f"{where}.product[{k}][0]"),
                _parse_coeff(p[1], f"{where}.product[{k}][1]"),
            )
            for k, p in enumerate(pairs)
        ]
        try:
            return product_state(family, amplitudes)
        except ValueError as exc:
            raise ScenarioError(f"{where}.product: {exc}") from exc
    raise ScenarioError(f"{where}: expected \"uniform\", an object with 'coeffs', or one with 'product'")


def _build_tests(family: Family, specs, where: str = "tests") -> tuple:
    if not isinstance(specs, list):
        raise ScenarioError(f"{where}: expected a list")
    tests = []
    for k, entry in enumerate(specs):
        here = f"{where}[{k}]"
        if not isinstance(entry, dict):
            raise ScenarioError(f"{here}: expected an object")
        if "pair" in entry:
            pair = entry["pair"]
            if (
                not isinstance(pair, list)
                or len(pair) != 2
                or not all(isinstance(v, int) for v in pair)
            ):
                raise ScenarioError(f"{here}.pair: expected two particle numbers")
            try:
                tests.append(family.pair_test(pair[0], pair[1]))
            except ValueError as exc:
                raise ScenarioError(f"{here}.pair: {exc}") from exc
        elif "name" in entry:
            try:
                tests.append(family.test_by_display(entry["name"]))
            except KeyError:
                known = ", ".join(p.display for p in family.test_universe)
                raise ScenarioError(
                    f"{here}.name: unknown test {entry['name']!r} (known: {known})"
                )
        else:
            raise ScenarioError(f"{here}: expected 'pair' or 'name'")
    return tuple(tests)


def build_scenario(doc) -> Scenario:
    """Validate a scenario document and assemble its exact objects."""
    if not isinstance(doc, dict):
        raise ScenarioError("scenario: expected a JSON object")
    version = doc.get("version")
    if version != SCHEMA_VERSION:
        raise ScenarioError(
            f"version: expected {SCHEMA_VERSION!r}, got {version!r}"
        )
    if "family" not in doc:
        raise ScenarioError("family: required")
    try:
        family = family_from_description(doc["family"])
    except FamilyDescriptionError as exc:
        raise ScenarioError(str(exc)) from exc
    psi = _build_psi(family, doc.get("psi", "uniform"))
    phi_spec = doc.get("phi")
    if not isinstance(phi_spec, dict):
        raise ScenarioError("phi: expected an object with 'coeffs' or 'basis'")
    phi = None
    basis = None
    if "coeffs" in phi_spec:
        phi = _vector_from_map(family, phi_spec["coeffs"], "phi.coeffs")
    elif "basis" in phi_spec:
        maps = phi_spec["basis"]
        if not isinstance(maps, list) or not maps:
            raise ScenarioError("phi.basis: expected a non-empty list of coefficient maps")
        basis = tuple(
            _vector_from_map(family, m, f"phi.basis[{k}]") for k, m in enumerate(maps)
        )
    else:
        raise ScenarioError("phi: expected an object with 'coeffs' or 'basis'")
    if "tests" not in doc:
        raise ScenarioError("tests: required")
    tests = _build_tests(family, doc["tests"])
    return Scenario(family, psi, phi, basis, tests, doc)


def run_scenario(scenario: Scenario) -> AnalysisResult:
    """Execute a scenario: classify tests and judge consistency.

    Raises NonOverlappingError for a single post-selection orthogonal to
    the preparation; a basis simply reports such outcomes as impossible.
    """
    if scenario.basis is not None:
        report = check_unconditional(
            scenario.family, scenario.psi, scenario.basis, scenario.tests
        )
        return AnalysisResult(scenario, None, None, None, report)
    s = inner(scenario.phi, scenario.psi)
    if s.is_zero:
        raise NonOverlappingError(
            "post-selection has zero overlap with the preparation"
        )
    knowledge = extract_knowledge(scenario.phi, scenario.psi, scenario.tests)
    consistency = check_consistency(scenario.family, knowledge)
    return AnalysisResult(scenario, s, knowledge, consistency, None)


# --- Built-in registry -----------------------------------------------------

@dataclass(frozen=True)
class BuiltinScenario:
    name: str
    title: str
    doc: dict
    expect: dict


def _pairs(*pairs) -> list:
    return [{"pair": [i, j]} for i, j in pairs]


def _builtin_pigeonhole_qubits() -> BuiltinScenario:
    doc = {
        "version": SCHEMA_VERSION,
        "family": {"generator": "lr_strings", "n": 3},
        "psi": {"product": [["1", "1"], ["1", "1"], ["1", "1"]]},
        "phi": {
            "coeffs": {
                "LLL": "1", "LLR": "i", "LRL": "i", "LRR": "-1",
                "RLL": "i", "RLR": "-1", "RRL": "-1", "RRR": "-i",
            }
        },
        "tests": _pairs((1, 2), (2, 3), (1, 3)),
    }
    expect = {
        "s": "-2-2i",
        "outcomes": [
            ["SameBox(1,2)", "0", "denied"],
            ["SameBox(2,3)", "0", "denied"],
            ["SameBox(1,3)", "0", "denied"],
        ],
        "affirmed": [],
        "denied": ["SameBox(1,2)", "SameBox(2,3)", "SameBox(1,3)"],
        "uncertain": [],
        "paradoxical": True,
        "witness": None,
    }
    return BuiltinScenario(
        "pigeonhole_qubits",
        "three box qubits: every pair certainly in different boxes",
        doc,
        expect,
    )


def _builtin_pigeonhole_relations() -> BuiltinScenario:
    doc = {
        "version": SCHEMA_VERSION,
        "family": {"generator": "togetherness3"},
        "psi": "uniform",
        "phi": {"coeffs": {"t": "-1", "a1": "1", "a2": "1", "a3": "1"}},
        "tests": _pairs((1, 2), (2, 3), (1, 3)),
    }
    expect = {
        "s": "2",
        "outcomes": [
            ["P_12", "0", "denied"],
            ["P_23", "0", "denied"],
            ["P_13", "0", "denied"],
        ],
        "affirmed": [],
        "denied": ["P_12", "P_23", "P_13"],
        "uncertain": [],
        "paradoxical": True,
        "witness": None,
    }
    return BuiltinScenario(
        "pigeonhole_relations",
        "togetherness relations: every pair certainly apart",
        doc,
        expect,
    )


def _builtin_penrose() -> BuiltinScenario:
    doc = {
        "version": SCHEMA_VERSION,
        "family": {"generator": "total_orders", "n": 3},
        "psi": "uniform",
        "phi": {
            "coeffs": {
                "123": "2", "231": "2", "312": "2",
                "132": "-1", "213": "-1", "321": "-1",
            }
        },
        "tests": _pairs((1, 2), (2, 3), (3, 1), (2, 1), (3, 2), (1, 3)),
    }
    expect = {
        "s": "3",
        "outcomes": [
            ["P_12", "3", "affirmed"],
            ["P_23", "3", "affirmed"],
            ["P_31", "3", "affirmed"],
            ["P_21", "0", "denied"],
            ["P_32", "0", "denied"],
            ["P_13", "0", "denied"],
        ],
        "affirmed": ["P_12", "P_23", "P_31"],
        "denied": ["P_21", "P_32", "P_13"],
        "uncertain": [],
        "paradoxical": True,
        "witness": None,
    }
    return BuiltinScenario(
        "penrose",
        "energies ascend around a closed three-particle loop",
        doc,
        expect,
    )


def _builtin_functions() -> BuiltinScenario:
    doc = {
        "version": SCHEMA_VERSION,
        "family": {"generator": "one_to_one_functions", "n": 3},
        "psi": "uniform",
        "phi": {
            "coeffs": {
                "123": "-1", "231": "1", "312": "1",
                "132": "-1", "213": "1", "321": "1",
            }
        },
        "tests": _pairs((1, 2), (1, 3)),
    }
    expect = {
        "s": "2",
        "outcomes": [
            ["r(1)=2", "2", "affirmed"],
            ["r(1)=3", "2", "affirmed"],
        ],
        "affirmed": ["r(1)=2", "r(1)=3"],
        "denied": [],
        "uncertain": [],
        "paradoxical": True,
        "witness": None,
    }
    return BuiltinScenario(
        "functions",
        "a one-to-one function certainly takes two values at 1",
        doc,
        expect,
    )


def _builtin_star4_unconditional() -> BuiltinScenario:
    doc = {
        "version": SCHEMA_VERSION,
        "family": {"generator": "star_graphs", "n": 4},
        "psi": "uniform",
        "phi": {
            "basis": [
                {"r_1": "-1", "r_2": "1", "r_3": "1", "r_4": "1"},
                {"r_1": "1", "r_2": "-1", "r_3": "1", "r_4": "1"},
                {"r_1": "1", "r_2": "1", "r_3": "-1", "r_4": "1"},
                {"r_1": "1", "r_2": "1", "r_3": "1", "r_4": "-1"},
            ]
        },
        "tests": _pairs((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)),
    }
    expect = {
        "orthogonal": True,
        "all_paradoxical": True,
        "outcomes": [
            {
                "label": "outcome 1", "s": "2",
                "affirmed": ["P_23", "P_24", "P_34"],
                "denied": ["P_12", "P_13", "P_14"],
                "paradoxical": True,
            },
            {
                "label": "outcome 2", "s": "2",
                "affirmed": ["P_13", "P_14", "P_34"],
                "denied": ["P_12", "P_23", "P_24"],
                "paradoxical": True,
            },
            {
                "label": "outcome 3", "s": "2",
                "affirmed": ["P_12", "P_14", "P_24"],
                "denied": ["P_13", "P_23", "P_34"],
                "paradoxical": True,
            },
            {
                "label": "outcome 4", "s": "2",
                "affirmed": ["P_12", "P_13", "P_23"],
                "denied": ["P_14", "P_24", "P_34"],
                "paradoxical": True,
            },
        ],
    }
    return BuiltinScenario(
        "star4_unconditional",
        "four stars: every final outcome isolates one particle yet links the rest",
        doc,
        expect,
    )


def _builtin_star6_clique() -> BuiltinScenario:
    doc = {
        "version": SCHEMA_VERSION,
        "family": {"generator": "star_graphs", "n": 6},
        "psi": "uniform",
        "phi": {
            "coeffs": {
                "r_1": "1", "r_2": "1", "r_3": "1", "r_4": "1", "r_5": "1",
                "r_6": "-3",
            }
        },
        "tests": _pairs(*itertools.combinations(range(1, 7), 2)),
    }
    affirmed = [f"P_{i}{j}" for i, j in itertools.combinations(range(1, 6), 2)]
    uncertain = [f"P_{i}6" for i in range(1, 6)]
    outcomes = []
    for i, j in itertools.combinations(range(1, 7), 2):
        if j <= 5:
            outcomes.append([f"P_{i}{j}", "2", "affirmed"])
        else:
            outcomes.append([f"P_{i}{j}", "-2", "uncertain"])
    expect = {
        "s": "2",
        "outcomes": outcomes,
        "affirmed": affirmed,
        "denied": [],
        "uncertain": uncertain,
        "paradoxical": True,
        "witness": None,
    }
    return BuiltinScenario(
        "star6_clique",
        "six stars: five particles pairwise linked, a clique no star contains",
        doc,
        expect,
    )


def _builtin_ternary_energy() -> BuiltinScenario:
    doc = {
        "version": SCHEMA_VERSION,
        "family": {"generator": "ternary_energy"},
        "psi": "uniform",
        "phi": {
            "coeffs": {"101": "2", "011": "2", "112": "2", "202": "-1", "022": "-1"}
        },
        "tests": [{"name": "E_a=1"}, {"name": "E_b=1"}, {"name": "E_c=2"}],
    }
    expect = {
        "s": "4",
        "outcomes": [
            ["E_a=1", "4", "affirmed"],
            ["E_b=1", "4", "affirmed"],
            ["E_c=2", "0", "denied"],
        ],
        "affirmed": ["E_a=1", "E_b=1"],
        "denied": ["E_c=2"],
        "uncertain": [],
        "paradoxical": True,
        "witness": None,
    }
    return BuiltinScenario(
        "ternary_energy",
        "energies certainly 1 and 1, yet their sum is certainly not 2",
        doc,
        expect,
    )


def _builtin_star3_isolated() -> BuiltinScenario:
    doc = {
        "version": SCHEMA_VERSION,
        "family": {"generator": "star_graphs", "n": 3},
        "psi": "uniform",
        "phi": {"coeffs": {"r_1": "-1", "r_2": "1", "r_3": "1"}},
        "tests": _pairs((1, 2), (1, 3), (2, 3)),
    }
    expect = {
        "s": "1",
        "outcomes": [
            ["P_12", "0", "denied"],
            ["P_13", "0", "denied"],
            ["P_23", "2", "uncertain"],
        ],
        "affirmed": [],
        "denied": ["P_12", "P_13"],
        "uncertain": ["P_23"],
        "paradoxical": True,
        "witness": None,
    }
    return BuiltinScenario(
        "star3_isolated",
        "three stars: particle 1 certainly linked to nobody",
        doc,
        expect,
    )


def _builtin_pigeonhole_nontransitive() -> BuiltinScenario:
    doc = {
        "version": SCHEMA_VERSION,
        "family": {"generator": "lr_strings", "n": 3},
        "psi": {"product": [["1", "1"], ["1", "1"], ["1", "1"]]},
        "phi": {
            "coeffs": {
                "LLL": "1", "LLR": "-i", "LRL": "i", "LRR": "1",
                "RLL": "i", "RLR": "1", "RRL": "-1", "RRR": "i",
            }
        },
        "tests": _pairs((1, 2), (2, 3), (1, 3)),
    }
    expect = {
        "s": "2-2i",
        "outcomes": [
            ["SameBox(1,2)", "0", "denied"],
            ["SameBox(2,3)", "2-2i", "affirmed"],
            ["SameBox(1,3)", "2-2i", "affirmed"],
        ],
        "affirmed": ["SameBox(2,3)", "SameBox(1,3)"],
        "denied": ["SameBox(1,2)"],
        "uncertain": [],
        "paradoxical": True,
        "witness": None,
    }
    return BuiltinScenario(
        "pigeonhole_nontransitive",
        "box sharing that refuses to be transitive",
        doc,
        expect,
    )


BUILTINS = {
    b.name: b
    for b in (
        _builtin_pigeonhole_qubits(),
        _builtin_pigeonhole_relations(),
        _builtin_penrose(),
        _builtin_functions(),
        _builtin_star4_unconditional(),
        _builtin_star6_clique(),
        _builtin_ternary_energy(),
        _builtin_star3_isolated(),
        _builtin_pigeonhole_nontransitive(),
    )
}


def verify_builtin(name: str) -> list:
    """Replay one built-in scenario; returns mismatch descriptions (empty = ok)."""
    builtin = BUILTINS[name]
    result = run_scenario(build_scenario(builtin.doc))
    expect = builtin.expect
    problems = []

    def check(field, got, want):
        if got != want:
            problems.append(f"{field}: got {got!r}, expected {want!r}")

    if result.is_basis:
        report = result.basis_report
        check("orthogonal", report.orthogonal, expect["orthogonal"])
        check("all_paradoxical", report.all_paradoxical, expect["all_paradoxical"])
        check("outcome count", len(report.outcomes), len(expect["outcomes"]))
        for got, want in zip(report.outcomes, expect["outcomes"]):
            label = want["label"]
            check(f"{label} label", got.label, label)
            check(f"{label} s", format_scalar(got.s), want["s"])
            if got.knowledge is None:
                problems.append(f"{label}: expected knowledge, outcome impossible")
                continue
            check(
                f"{label} affirmed",
                [p.display for p in got.knowledge.affirmed],
                want["affirmed"],
            )
            check(
                f"{label} denied",
                [p.display for p in got.knowledge.denied],
                want["denied"],
            )
            check(f"{label} paradoxical", got.verdict.paradoxical, want["paradoxical"])
        return problems

    check("s", format_scalar(result.s), expect["s"])
    got_outcomes = [
        [o.predicate.display, format_scalar(o.x), o.verdict.value]
        for o in result.knowledge.outcomes
    ]
    check("outcomes", got_outcomes, expect["outcomes"])
    check("affirmed", [p.display for p in result.knowledge.affirmed], expect["affirmed"])
    check("denied", [p.display for p in result.knowledge.denied], expect["denied"])
    check(
        "uncertain",
        [p.display for p in result.knowledge.uncertain],
        expect["uncertain"],
    )
    check("paradoxical", result.consistency.paradoxical, expect["paradoxical"])
    check("witness", result.consistency.witness, expect["witness"])
    return problems
