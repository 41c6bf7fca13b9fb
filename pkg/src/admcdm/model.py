"""Domain model: criteria, preference statements, parameter bindings, and
assembly of the homogeneous system matrix.

A preference file describes n criteria and m statements about them. Each
equation-type statement ("C1 is worth 4 times C2", "C1 equals 2 C2 plus
3 C3", "x equals 2 y z") pins the subject criterion to an expression in the
others; inequalities only constrain the ordering. Statements are canonicalized
so the subject sits alone on the left, which makes every linear statement a
homogeneous row: +1 in the subject column, the negated coefficients elsewhere.

All types are immutable and validated on construction, so a Problem in hand
is always well-formed: indices in range, coefficients positive, at least one
equation present, and the binding consistent with the preference list.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import (
    InvalidProblem,
    NonEquationPreference,
    NonlinearPreferencePresent,
    NonPositiveParameter,
)
from .scalars import Scalar, exact


@dataclass(frozen=True)
class CriteriaSet:
    """Ordered, distinct criterion names; positions are 0-based."""

    names: tuple

    def __post_init__(self):
        if len(self.names) < 2:
            raise InvalidProblem("a problem needs at least two criteria")
        if len(set(self.names)) != len(self.names):
            raise InvalidProblem("criterion names must be distinct")
        if any(not isinstance(nm, str) or not nm for nm in self.names):
            raise InvalidProblem("criterion names must be non-empty strings")

    @property
    def n(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise InvalidProblem(f"unknown criterion {name!r}") from None


@dataclass(frozen=True)
class RatioPreference:
    """num / den = value, e.g. C2/C1 = 3."""

    num: int
    den: int
    value: Scalar

    def __post_init__(self):
        if self.num == self.den:
            raise InvalidProblem("ratio relates a criterion to itself")
        object.__setattr__(self, "value", exact(self.value))
        if not self.value > 0:
            raise InvalidProblem("ratio value must be positive")


@dataclass(frozen=True)
class LinearPreference:
    """subject = sum of coefficient * criterion terms.

    terms is a tuple of (criterion index, coefficient) pairs; it is stored
    sorted by index so equal preferences compare equal regardless of the
    order the terms were given in.
    """

    subject: int
    terms: tuple

    def __post_init__(self):
        terms = tuple((i, exact(c)) for i, c in self.terms)
        terms = tuple(sorted(terms, key=lambda t: t[0]))
        object.__setattr__(self, "terms", terms)
        if not terms:
            raise InvalidProblem("a linear preference needs at least one term")
        seen = set()
        for i, c in terms:
            if i == self.subject:
                raise InvalidProblem("subject may not appear among its own terms")
            if i in seen:
                raise InvalidProblem("duplicate criterion in terms")
            seen.add(i)
            if not c > 0:
                raise InvalidProblem("term coefficients must be positive")


@dataclass(frozen=True)
class MonomialPreference:
    """subject = coefficient * product of criteria raised to integer powers."""

    subject: int
    coefficient: Scalar
    exponents: tuple

    def __post_init__(self):
        object.__setattr__(self, "coefficient", exact(self.coefficient))
        exps = tuple(sorted((i, int(e)) for i, e in self.exponents))
        object.__setattr__(self, "exponents", exps)
        if not self.coefficient > 0:
            raise InvalidProblem("monomial coefficient must be positive")
        if not exps:
            raise InvalidProblem("a monomial preference needs at least one factor")
        seen = set()
        for i, e in exps:
            if i == self.subject:
                raise InvalidProblem("subject may not appear among its own factors")
            if i in seen:
                raise InvalidProblem("duplicate criterion in factors")
            seen.add(i)
            if e < 1:
                raise InvalidProblem("exponents must be positive integers")


class Relation(Enum):
    STRICT_LESS = "<"
    STRICT_GREATER = ">"


@dataclass(frozen=True)
class InequalityPreference:
    """lhs < rhs or lhs > rhs (strict)."""

    lhs: int
    rhs: int
    relation: Relation

    def __post_init__(self):
        if self.lhs == self.rhs:
            raise InvalidProblem("inequality relates a criterion to itself")
        if not isinstance(self.relation, Relation):
            raise InvalidProblem("relation must be STRICT_LESS or STRICT_GREATER")


@dataclass(frozen=True)
class ParamBinding:
    """Per-preference discount multipliers and the fairness core.

    Preference i receives the parameter c_i * alpha, so with every c_i = 1
    all statements share one parameter (the fairness principle) while unequal
    multipliers encode an expert's opinion such as "discount the second
    statement twice as much as the first". core_mask lists the preference
    positions whose rows form the square system the parametric equation is
    taken from; preferences outside it keep parameters of their own that are
    solved afterwards.
    """

    multipliers: tuple
    core_mask: tuple

    def __post_init__(self):
        mults = tuple(exact(c) for c in self.multipliers)
        object.__setattr__(self, "multipliers", mults)
        object.__setattr__(self, "core_mask", tuple(int(i) for i in self.core_mask))
        if any(not c > 0 for c in mults):
            raise InvalidProblem("binding multipliers must be positive")
        if not self.core_mask:
            raise InvalidProblem("core must contain at least one preference")
        if len(set(self.core_mask)) != len(self.core_mask):
            raise InvalidProblem("core lists a preference twice")


def is_equation(pref) -> bool:
    return not isinstance(pref, InequalityPreference)


def equation_positions(preferences) -> tuple:
    return tuple(i for i, p in enumerate(preferences) if is_equation(p))


def default_binding(preferences, n: int) -> ParamBinding:
    """All multipliers 1; core = the first min(n, m) equation preferences."""
    eq = equation_positions(preferences)
    if not eq:
        raise InvalidProblem("a problem needs at least one equation preference")
    return ParamBinding(
        multipliers=tuple(Fraction(1) for _ in preferences),
        core_mask=eq[: min(n, len(eq))],
    )


@dataclass(frozen=True)
class Problem:
    criteria: CriteriaSet
    preferences: tuple
    binding: ParamBinding = None

    def __post_init__(self):
        object.__setattr__(self, "preferences", tuple(self.preferences))
        n = self.criteria.n
        if self.binding is None:
            object.__setattr__(
                self, "binding", default_binding(self.preferences, n))
        eq = equation_positions(self.preferences)
        if not eq:
            raise InvalidProblem("a problem needs at least one equation preference")
        for pref in self.preferences:
            for i in _referenced(pref):
                if not 0 <= i < n:
                    raise InvalidProblem(f"criterion index {i} out of range")
        b = self.binding
        if len(b.multipliers) != len(self.preferences):
            raise InvalidProblem("binding must carry one multiplier per preference")
        core = set(b.core_mask)
        if not core <= set(eq):
            raise InvalidProblem("core may only contain equation preferences")
        for i, c in enumerate(b.multipliers):
            if c != 1 and i not in core:
                raise InvalidProblem(
                    "only core preferences may carry a non-unit multiplier")

    @property
    def core(self) -> tuple:
        return self.binding.core_mask

    @property
    def extras(self) -> tuple:
        """Equation preferences outside the core, in file order."""
        core = set(self.binding.core_mask)
        return tuple(i for i in equation_positions(self.preferences)
                     if i not in core)


def _referenced(pref):
    if isinstance(pref, RatioPreference):
        return (pref.num, pref.den)
    if isinstance(pref, LinearPreference):
        return (pref.subject, *(i for i, _ in pref.terms))
    if isinstance(pref, MonomialPreference):
        return (pref.subject, *(i for i, _ in pref.exponents))
    if isinstance(pref, InequalityPreference):
        return (pref.lhs, pref.rhs)
    raise InvalidProblem(f"unknown preference type {type(pref).__name__}")


def canonicalize(pref):
    """Rewrite num/den = k as num = k * den; linear statements pass through."""
    if isinstance(pref, RatioPreference):
        return LinearPreference(pref.num, ((pref.den, pref.value),))
    if isinstance(pref, LinearPreference):
        return pref
    raise TypeError(f"cannot canonicalize {type(pref).__name__}")


def assemble(problem: Problem):
    """Rows of the homogeneous system, one per equation preference.

    The row for subject i with terms a_j reads e_i - sum a_j e_j, so a
    consistent set of statements makes the rows linearly dependent.
    """
    n = problem.criteria.n
    rows = []
    for pref in problem.preferences:
        if isinstance(pref, InequalityPreference):
            raise NonEquationPreference(
                "inequalities have no row in the system matrix")
        if isinstance(pref, MonomialPreference):
            raise NonlinearPreferencePresent(
                "monomial preferences do not assemble into a linear system")
        lin = canonicalize(pref)
        row = [Fraction(0)] * n
        row[lin.subject] = Fraction(1)
        for j, c in lin.terms:
            row[j] = row[j] - c
        rows.append(row)
    return rows


def make_cyclic_example(t) -> Problem:
    """The three-criteria cycle x = t*y, x = (1/t)*z, y = t*z.

    At t = 1 the statements agree perfectly; as t moves away from 1 in either
    direction the cycle contradicts itself ever harder, which makes this
    family a one-knob consistency testbed.
    """
    t = exact(t)
    if not t > 0:
        raise NonPositiveParameter("t must be positive")
    criteria = CriteriaSet(("x", "y", "z"))
    prefs = (
        LinearPreference(0, ((1, t),)),
        LinearPreference(0, ((2, exact(1) / t),)),
        LinearPreference(1, ((2, t),)),
    )
    return Problem(criteria, prefs)
