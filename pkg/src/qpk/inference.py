"""Pre/post-selection inference: state vectors, projections, test verdicts.

The preparation is a ket over a family's configurations; the post-selection
is entered in ket form as well, and its coefficients are conjugated exactly
once inside the inner product.  For the all-real constructions this is
invisible; for complex coefficients it fixes the convention: to post-select
on a bra, supply the matching ket.

An intermediate pair or label test is classified from two exact amplitudes:
x, the overlap through the projector, and s, the plain overlap.  x = s
(with s nonzero) affirms the tested property with certainty, x = 0 denies
it with certainty, and anything else leaves it uncertain.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .family import Family, Predicate, eval_predicate
from .scalar import ComplexRational, ONE, ZERO


class NonOverlappingError(ValueError):
    """The post-selected state has zero overlap with the preparation.

    The final outcome must remain possible whichever intermediate test is
    chosen, so no knowledge can be extracted in this case.
    """


class TestVerdict(enum.Enum):
    AFFIRMED = "affirmed"
    DENIED = "denied"
    UNCERTAIN = "uncertain"


@dataclass(frozen=True)
class StateVector:
    """Exact coefficients over a family's configurations, in family order."""

    family: Family
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if len(self.coeffs) != self.family.size:
            raise ValueError(
                f"coefficient count {len(self.coeffs)} does not match the "
                f"family's {self.family.size} configurations"
            )

    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.coeffs)

    def scaled(self, k: ComplexRational) -> "StateVector":
        return StateVector(self.family, tuple(k * c for c in self.coeffs))


@dataclass(frozen=True)
class TestOutcome:
    """One classified intermediate test: its two amplitudes and the verdict."""

    predicate: Predicate
    x: ComplexRational
    s: ComplexRational
    verdict: TestVerdict


@dataclass(frozen=True)
class Knowledge:
    """The partition of the tested predicates into certain-yes, certain-no, rest."""

    affirmed: tuple
    denied: tuple
    uncertain: tuple
    outcomes: tuple = ()


def uniform_psi(family: Family) -> StateVector:
    """The preparation used throughout: every configuration with coefficient 1."""
    return StateVector(family, tuple(ONE for _ in family.configurations))


def product_state(family: Family, per_particle: Sequence) -> StateVector:
    """A product state over a box-string family.

    per_particle[k] is the (left, right) amplitude pair for particle k+1;
    the coefficient of a string is the product of its letters' amplitudes.
    """
    names = family.names()
    n = family.n_particles
    if any(len(name) != n or set(name) - {"L", "R"} for name in names):
        raise ValueError("product states require a family of L/R box strings")
    if len(per_particle) != n:
        raise ValueError(
            f"need one (left, right) amplitude pair per particle: "
            f"expected {n}, got {len(per_particle)}"
        )
    coeffs = []
    for name in names:
        c = ONE
        for k, letter in enumerate(name):
            left, right = per_particle[k]
            c = c * (left if letter == "L" else right)
        coeffs.append(c)
    return StateVector(family, tuple(coeffs))


def project(v: StateVector, p: Predicate) -> StateVector:
    """Zero out every configuration that fails the predicate; keep the rest."""
    coeffs = tuple(
        c if eval_predicate(cfg, p) else ZERO
        for cfg, c in zip(v.family.configurations, v.coeffs)
    )
    return StateVector(v.family, coeffs)


def inner(phi: StateVector, psi: StateVector) -> ComplexRational:
    """The exact overlap: sum of conj(phi_r) * psi_r over the family."""
    if phi.family is not psi.family and phi.family != psi.family:
        raise ValueError("inner product requires state vectors over the same family")
    total = ZERO
    for a, b in zip(phi.coeffs, psi.coeffs):
        total = total + a.conjugate() * b
    return total


def classify(phi: StateVector, psi: StateVector, p: Predicate) -> TestOutcome:
    """Classify one intermediate test given preparation psi and post-selection phi.

    Raises NonOverlappingError when the overlap s is zero.  The complement
    amplitude is computed explicitly and the identity x + x_comp = s is
    checked at runtime as a cheap self-test of the algebra.
    """
    s = inner(phi, psi)
    if s.is_zero:
        raise NonOverlappingError(
            "post-selection has zero overlap with the preparation; "
            "no test outcome can be inferred"
        )
    projected = project(psi, p)
    x = inner(phi, projected)
    complement = StateVector(
        psi.family, tuple(a - b for a, b in zip(psi.coeffs, projected.coeffs))
    )
    x_comp = inner(phi, complement)
    if x + x_comp != s:
        raise AssertionError("complement identity violated; arithmetic is broken")
    if x.is_zero:
        verdict = TestVerdict.DENIED
    elif x == s:
        verdict = TestVerdict.AFFIRMED
    else:
        verdict = TestVerdict.UNCERTAIN
    return TestOutcome(p, x, s, verdict)


def extract_knowledge(
    phi: StateVector, psi: StateVector, tests: Sequence
) -> Knowledge:
    """Classify every test and partition them into affirmed/denied/uncertain."""
    outcomes = tuple(classify(phi, psi, p) for p in tests)
    affirmed = tuple(o.predicate for o in outcomes if o.verdict is TestVerdict.AFFIRMED)
    denied = tuple(o.predicate for o in outcomes if o.verdict is TestVerdict.DENIED)
    uncertain = tuple(
        o.predicate for o in outcomes if o.verdict is TestVerdict.UNCERTAIN
    )
    return Knowledge(affirmed, denied, uncertain, outcomes)
