"""Nonlinear extension: triangular systems of single-term linear links and
product statements resolve into a one-free-variable monomial family, and the
positive axis of that free variable splits into ordering regimes.

A system like {x = 2yz, y = 5z} back-substitutes into x_k = c_k * z^{d_k}
for every criterion. No normalization is attempted for such families — the
meaningful output is the criteria ordering, which is constant between the
points where two components cross and flips or degenerates at them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    EmptyDomain,
    MultipleFreeVars,
    NotTriangular,
    OverDetermined,
)
from .model import (
    InequalityPreference,
    LinearPreference,
    MonomialPreference,
    Problem,
    Relation,
    canonicalize,
)
from .scalars import Scalar

COEF_TOL = 1e-12


@dataclass(frozen=True)
class MonomialSolution:
    """Solution family x_k = c_k * z^{d_k} in one free variable z.

    ``components[k]`` is the pair (coefficient, exponent) for criterion k;
    the free variable's own component is exactly (1, 1).
    """

    free_var: int
    components: tuple[tuple[Scalar, int], ...]

    def __post_init__(self) -> None:
        if not 0 <= self.free_var < len(self.components):
            raise ValueError("free variable index out of range")
        for coef, power in self.components:
            if not coef > 0:
                raise ValueError("component coefficients must be positive")
            if not isinstance(power, int) or power < 0:
                raise ValueError("component exponents must be integers >= 0")
        base_coef, base_power = self.components[self.free_var]
        if base_coef != 1 or base_power != 1:
            raise ValueError("the free variable's component must be (1, 1)")

    @property
    def n(self) -> int:
        return len(self.components)

    def value_at(self, k: int, z: Scalar) -> Scalar:
        coef, power = self.components[k]
        return coef * z**power


@dataclass(frozen=True)
class Regime:
    """One piece of the admissible domain with a fixed criteria ordering.

    ``lower == upper`` marks a single-point regime at a crossing;
    ``upper`` of None means the piece is unbounded above. ``ordering``
    lists criterion indices from largest component to smallest, tied
    criteria grouped together.
    """

    lower: Scalar
    upper: Scalar | None
    ordering: tuple[tuple[int, ...], ...]

    @property
    def is_point(self) -> bool:
        return self.upper is not None and self.lower == self.upper


@dataclass(frozen=True)
class RegimeReport:
    """Crossing points and the ordering on each piece of the domain."""

    domain: tuple[Scalar, Scalar | None]
    breakpoints: tuple[Scalar, ...]
    regimes: tuple[Regime, ...]


def _coef_equal(a: Scalar, b: Scalar) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    x, y = float(a), float(b)
    return abs(x - y) <= COEF_TOL * max(1.0, abs(x), abs(y))


def _equations(problem: Problem) -> list[tuple[int, Scalar, tuple[tuple[int, int], ...]]]:
    """Equation statements as (subject, coefficient, factor list) triples."""
    out = []
    for pref in problem.preferences:
        if isinstance(pref, InequalityPreference):
            continue
        if isinstance(pref, MonomialPreference):
            out.append((pref.subject, pref.coefficient, pref.exponents))
            continue
        flat: LinearPreference = canonicalize(pref)
        if len(flat.terms) != 1:
            raise NotTriangular(
                "a multi-term statement cannot be folded into a "
                "single-variable monomial family"
            )
        j, coef = flat.terms[0]
        out.append((flat.subject, coef, ((j, 1),)))
    return out


def solve_triangular(problem: Problem) -> MonomialSolution:
    """Resolve the system into one monomial family by substitution.

    Each candidate free variable is tried from the last criterion down;
    forward substitution resolves a statement once all its factors are
    known, and a single-factor statement with a known subject is inverted.
    Redundant statements must reproduce the already-known component
    exactly. The first candidate that resolves every criterion wins, and
    the result is verified against every statement symbolically.

    Raises:
        NotTriangular: no substitution order exists (a multi-term
            statement, or statements that never become resolvable).
        MultipleFreeVars: the statements leave more than one criterion
            free, which is outside the supported scope.
        OverDetermined: substitution closes a criterion to two different
            monomials, forcing the free variable to a constant.
    """
    equations = _equations(problem)
    n = problem.criteria.n
    saw_over = False
    saw_multi = False

    for free in reversed(range(n)):
        known: dict[int, tuple[Scalar, int]] = {free: (Fraction(1), 1)}
        pending = list(range(len(equations)))
        closed = False
        progressed = True
        while progressed and not closed:
            progressed = False
            still = []
            for idx in pending:
                subject, coef, factors = equations[idx]
                if all(j in known for j, _ in factors):
                    total_coef: Scalar = coef
                    total_power = 0
                    for j, power in factors:
                        base_coef, base_power = known[j]
                        total_coef = total_coef * base_coef**power
                        total_power += base_power * power
                    if subject not in known:
                        known[subject] = (total_coef, total_power)
                    else:
                        have_coef, have_power = known[subject]
                        if have_power != total_power or not _coef_equal(
                            have_coef, total_coef
                        ):
                            closed = True
                            break
                    progressed = True
                elif (
                    subject in known
                    and len(factors) == 1
                    and factors[0][1] == 1
                    and factors[0][0] not in known
                ):
                    have_coef, have_power = known[subject]
                    known[factors[0][0]] = (have_coef / coef, have_power)
                    progressed = True
                else:
                    still.append(idx)
            else:
                pending = still
        if closed:
            saw_over = True
            continue
        if pending:
            continue
        if len(known) < n:
            saw_multi = True
            continue
        solution = MonomialSolution(
            free, tuple(known[k] for k in range(n))
        )
        _verify(solution, equations)
        return solution

    if saw_over:
        raise OverDetermined(
            "substitution closes the free variable to a constant: the "
            "statements pin two different monomials to one criterion"
        )
    if saw_multi:
        raise MultipleFreeVars(
            "the statements leave more than one criterion free"
        )
    raise NotTriangular("no substitution order resolves these statements")


def _verify(
    solution: MonomialSolution,
    equations: Iterable[tuple[int, Scalar, tuple[tuple[int, int], ...]]],
) -> None:
    for subject, coef, factors in equations:
        rhs_coef: Scalar = coef
        rhs_power = 0
        for j, power in factors:
            base_coef, base_power = solution.components[j]
            rhs_coef = rhs_coef * base_coef**power
            rhs_power += base_power * power
        lhs_coef, lhs_power = solution.components[subject]
        if lhs_power != rhs_power or not _coef_equal(lhs_coef, rhs_coef):
            raise OverDetermined(
                "resolved family fails to satisfy a statement symbolically"
            )


def _nth_root(ratio: Scalar, degree: int) -> Scalar:
    """Positive degree-th root, exact when the operand is a perfect power."""
    if degree == 1:
        return ratio
    if isinstance(ratio, Fraction):
        num = _int_root(ratio.numerator, degree)
        den = _int_root(ratio.denominator, degree)
        if num is not None and den is not None:
            return Fraction(num, den)
    return float(ratio) ** (1.0 / degree)


def _int_root(value: int, degree: int) -> int | None:
    if value <= 0:
        return None
    guess = round(value ** (1.0 / degree))
    for candidate in (guess - 1, guess, guess + 1):
        if candidate > 0 and candidate**degree == value:
            return candidate
    return None


def _crossing(
    coef_a: Scalar, power_a: int, coef_b: Scalar, power_b: int
) -> Scalar | None:
    """The z > 0 where c_a z^{d_a} = c_b z^{d_b}, if the powers differ."""
    if power_a == power_b:
        return None
    if power_a > power_b:
        return _nth_root(coef_b / coef_a, power_a - power_b)
    return _nth_root(coef_a / coef_b, power_b - power_a)


def _ordering(
    values: Sequence[Scalar],
) -> tuple[tuple[int, ...], ...]:
    """Criterion indices grouped by component value, largest first."""
    order = sorted(range(len(values)), key=lambda k: float(values[k]), reverse=True)
    groups: list[list[int]] = []
    for k in order:
        if groups and _coef_equal(values[groups[-1][-1]], values[k]):
            groups[-1].append(k)
        else:
            groups.append([k])
    return tuple(tuple(g) for g in groups)


def _reorder_ties(
    groups: tuple[tuple[int, ...], ...], reference: Sequence[int]
) -> tuple[tuple[int, ...], ...]:
    position = {k: i for i, k in enumerate(reference)}
    return tuple(
        tuple(sorted(group, key=lambda k: position[k])) for group in groups
    )


def ordering_text(
    ordering: tuple[tuple[int, ...], ...], names: Sequence[str]
) -> str:
    """Render grouped ordering as e.g. ``y>z=x``."""
    return ">".join("=".join(names[k] for k in group) for group in ordering)


def regime_analysis(
    sol: MonomialSolution,
    inequalities: Sequence[InequalityPreference] = (),
) -> RegimeReport:
    """Split the free variable's positive axis into constant-order pieces.

    Crossing points come from the closed form z = (c_b/c_a)^{1/(d_a-d_b)}
    for every pair with different exponents (exact when the ratio is a
    perfect power). Inequalities shrink the admissible domain by the same
    closed forms; equal-exponent comparisons hold everywhere or nowhere.
    Each open piece between crossings gets its ordering from an interior
    sample, and each crossing inside the domain gets a single-point regime
    whose tied criteria keep the order they had just left of the point.

    Raises:
        EmptyDomain: the inequalities leave no admissible z > 0.
    """
    components = sol.components
    n = len(components)

    lower: Scalar = Fraction(0)
    upper: Scalar | None = None
    for ineq in inequalities:
        left, right = ineq.lhs, ineq.rhs
        if ineq.relation is Relation.STRICT_GREATER:
            left, right = right, left
        coef_l, power_l = components[left]
        coef_r, power_r = components[right]
        if power_l == power_r:
            if not coef_l < coef_r:
                raise EmptyDomain(
                    "an inequality between proportional components fails "
                    "for every value of the free variable"
                )
            continue
        if power_l > power_r:
            bound = _nth_root(coef_r / coef_l, power_l - power_r)
            if upper is None or bound < upper:
                upper = bound
        else:
            bound = _nth_root(coef_l / coef_r, power_r - power_l)
            if bound > lower:
                lower = bound
    if upper is not None and not lower < upper:
        raise EmptyDomain("the inequalities bound the free variable away "
                          "from its required range")

    crossings: list[Scalar] = []
    for a in range(n):
        for b in range(a + 1, n):
            point = _crossing(*components[a], *components[b])
            if point is None:
                continue
            if not any(_coef_equal(point, seen) for seen in crossings):
                crossings.append(point)
    crossings.sort(key=float)
    breakpoints = tuple(crossings)

    inside = [
        p
        for p in crossings
        if p > lower and (upper is None or p < upper)
    ]

    def sample(a: Scalar, b: Scalar | None) -> Scalar:
        if b is not None:
            return (a + b) / 2
        return 2 * a if a > 0 else Fraction(1)

    regimes: list[Regime] = []
    edges: list[Scalar | None] = [lower, *inside, upper]
    for i in range(len(edges) - 1):
        a, b = edges[i], edges[i + 1]
        interval_values = [sol.value_at(k, sample(a, b)) for k in range(n)]
        regimes.append(Regime(a, b, _ordering(interval_values)))
        if i < len(inside):
            point = inside[i]
            at_values = [sol.value_at(k, point) for k in range(n)]
            flat = [k for group in regimes[-1].ordering for k in group]
            regimes.append(
                Regime(point, point, _reorder_ties(_ordering(at_values), flat))
            )

    return RegimeReport((lower, upper), breakpoints, tuple(regimes))
