"""The discounting pipeline: parameterize the system, solve the parametric
determinant equation, pick the discount, and produce the priority vector.

A consistent set of statements already has a dependent system, so the
discount is 1 and the general solution is read off directly. Otherwise each
statement's right-hand side is scaled by its multiplier times the shared
base parameter, the core determinant becomes a polynomial whose positive
root fixes the parameter, and preferences outside the core get their own
parameters solved afterwards from the auxiliary determinants that involve
their row. The consistency degree is min(alpha, 1/alpha): a discount far
below 1 or an amplification far above it both signal statements that had to
be bent a long way to agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations
from math import factorial

from .classify import ClassificationReport, classify
from .errors import (
    DegenerateCore,
    InconsistentExtraParams,
    InvalidProblem,
    NoPositiveRoot,
    NonEquationPreference,
    NonlinearPreferencePresent,
)
from .linalg import (
    PolyMatrix,
    PriorityVector,
    det_numeric,
    det_poly,
    general_solution,
    normalize,
    particular_positive,
    rank,
)
from .model import (
    InequalityPreference,
    MonomialPreference,
    ParamBinding,
    Problem,
    assemble,
    canonicalize,
)
from .polynomial import Poly, ZERO, peval, poly, positive_roots
from .scalars import Scalar

CONSISTENT_DET_TOL = 1e-9
EXTRA_AGREE_TOL = 1e-6


@dataclass(frozen=True)
class ParamSystem:
    """Homogeneous system with parameterized right-hand coefficients.

    Row i belongs to preference i; the subject entry is the constant 1 and a
    term coefficient a becomes the degree-1 polynomial -a * c_i * alpha.
    Evaluating every row at alpha = 1 under all-ones multipliers recovers
    the plain assembled matrix.
    """

    matrix: PolyMatrix
    binding: ParamBinding


class PolicyAction(Enum):
    REPORT_ONLY = "report-only"
    REJECT = "reject"


@dataclass(frozen=True)
class ConsistencyPolicy:
    """What to do when the solved consistency falls below a threshold."""

    threshold_c: Scalar = 0
    action: PolicyAction = PolicyAction.REPORT_ONLY

    def __post_init__(self):
        if not 0 <= float(self.threshold_c) <= 1:
            raise InvalidProblem("threshold_c must lie in [0, 1]")


@dataclass(frozen=True)
class AlphaSolution:
    """Outcome of the parametric solve.

    roots lists every positive root of the parametric equation; alpha is the
    chosen one (closest to 1 in log scale, smaller on ties). consistency is
    min(alpha, 1/alpha), inconsistency its complement to 1. extra_params
    holds (preference position, value) pairs for preferences outside the
    core. discharged marks a result whose consistency fell below the
    policy's threshold under a rejecting policy.
    """

    roots: tuple
    alpha: Scalar
    consistency: Scalar
    inconsistency: Scalar
    extra_params: tuple = ()
    discharged: bool = False


def _consistency_of(alpha) -> Scalar:
    return alpha if alpha <= 1 else 1 / alpha


def parameterize(problem: Problem) -> ParamSystem:
    n = problem.criteria.n
    rows = []
    for pos, pref in enumerate(problem.preferences):
        if isinstance(pref, MonomialPreference):
            raise NonlinearPreferencePresent(
                "monomial preferences take the nonlinear route")
        if isinstance(pref, InequalityPreference):
            raise NonEquationPreference(
                "inequalities cannot be parameterized")
        lin = canonicalize(pref)
        c = problem.binding.multipliers[pos]
        row = [ZERO] * n
        row[lin.subject] = poly((1,))
        for j, a in lin.terms:
            row[j] = poly((0, -a * c))
        rows.append(tuple(row))
    return ParamSystem(PolyMatrix(tuple(rows)), problem.binding)


def parametric_equation(ps: ParamSystem) -> Poly:
    """Determinant of the core rows as a polynomial in the base parameter."""
    core = ps.binding.core_mask
    n = ps.matrix.n
    if len(core) != n:
        raise InvalidProblem(
            f"the core must contain exactly {n} preferences, got {len(core)}")
    d = det_poly(PolyMatrix(tuple(ps.matrix.entries[i] for i in core)))
    if d.is_zero():
        raise DegenerateCore(
            "core determinant vanishes identically; every parameter value "
            "leaves the core dependent, so no parametric equation exists")
    return d


def _choose_root(roots):
    best = None
    for r in roots:
        c = _consistency_of(r)
        if best is None or c > best[0] or (c == best[0] and r < best[1]):
            best = (c, r)
    return best[1]


def _solve_extras(ps: ParamSystem, alpha):
    core = ps.binding.core_mask
    m, n = ps.matrix.m, ps.matrix.n
    core_set = set(core)
    extras = [i for i in range(m) if i not in core_set]
    if not extras:
        return ()
    evaluated = {
        i: tuple(poly((peval(e, alpha),)) for e in ps.matrix.entries[i])
        for i in core
    }
    out = []
    for pos in extras:
        values = []
        for subset in combinations(core, n - 1):
            rows = [evaluated[i] for i in subset]
            rows.append(ps.matrix.entries[pos])
            d = det_poly(PolyMatrix(tuple(rows)))
            if d.is_zero():
                continue
            roots = positive_roots(d)
            if not roots:
                raise InconsistentExtraParams(
                    f"auxiliary determinant for preference {pos + 1} "
                    "admits no positive parameter")
            values.extend(roots)
        if not values:
            raise InconsistentExtraParams(
                f"every auxiliary determinant for preference {pos + 1} "
                "vanishes identically")
        hi = max(float(v) for v in values)
        lo = min(float(v) for v in values)
        if hi - lo > EXTRA_AGREE_TOL * hi:
            raise InconsistentExtraParams(
                f"auxiliary determinants for preference {pos + 1} disagree: "
                f"values range over [{lo:.9g}, {hi:.9g}]")
        out.append((pos, values[0]))
    return tuple(out)


def solve_alpha(ps: ParamSystem, policy: ConsistencyPolicy = None) -> AlphaSolution:
    if policy is None:
        policy = ConsistencyPolicy()
    equation = parametric_equation(ps)
    roots = tuple(positive_roots(equation))
    if not roots:
        raise NoPositiveRoot(
            f"parametric equation {equation} has no positive root")
    alpha = _choose_root(roots)
    extras = _solve_extras(ps, alpha)
    c = _consistency_of(alpha)
    discharged = (policy.action is PolicyAction.REJECT
                  and float(c) < float(policy.threshold_c))
    return AlphaSolution(
        roots=roots,
        alpha=alpha,
        consistency=c,
        inconsistency=1 - c,
        extra_params=extras,
        discharged=discharged,
    )


def _system_consistent(rows, n: int) -> bool:
    m = len(rows)
    if m != n:
        return rank(rows) < n
    top = max(abs(float(e)) for row in rows for e in row)
    bound = CONSISTENT_DET_TOL * factorial(n) * top ** n
    return abs(float(det_numeric(rows))) <= bound


def priority(problem: Problem, policy: ConsistencyPolicy = None):
    """Full pipeline: returns (priority vector, AlphaSolution, report)."""
    if policy is None:
        policy = ConsistencyPolicy()
    rows = assemble(problem)
    n = problem.criteria.n
    if _system_consistent(rows, n):
        solution = AlphaSolution(
            roots=(Fraction(1),),
            alpha=Fraction(1),
            consistency=Fraction(1),
            inconsistency=Fraction(0),
        )
        vec = particular_positive(general_solution(rows))
    else:
        ps = parameterize(problem)
        solution = solve_alpha(ps, policy)
        extra_value = dict(solution.extra_params)
        numeric = [
            [peval(e, extra_value.get(i, solution.alpha)) for e in row]
            for i, row in enumerate(ps.matrix.entries)
        ]
        vec = particular_positive(general_solution(numeric))
    pv = normalize(vec)
    report = classify(problem)
    return pv, solution, report


def discount_report(problem: Problem, pv: PriorityVector):
    """Realized scaling per preference: how far each statement was bent.

    For statement subject = sum of a_j * x_j the report carries the factor f
    with pv[subject] = f * sum of a_j * pv[j]; for a one-term statement this
    is (pv_i / pv_j) / k, the realized ratio against the stated one.
    """
    out = []
    for pos, pref in enumerate(problem.preferences):
        if isinstance(pref, (InequalityPreference, MonomialPreference)):
            continue
        lin = canonicalize(pref)
        stated = sum(a * pv[j] for j, a in lin.terms)
        out.append((pos, pv[lin.subject] / stated))
    return tuple(out)
