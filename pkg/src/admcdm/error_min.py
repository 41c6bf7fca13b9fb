"""Accuracy functional over the open simplex: how far a candidate weight
vector is from satisfying every stated preference at once.

Each equation statement contributes the absolute value of its residual in
cleared-denominator form (the statement is multiplied through by the least
common denominator of its exact coefficients first), and the functional is
the sum of those absolute residuals. A consistent problem's priority vector
drives the functional to exactly zero; an inconsistent one has a strictly
positive floor, and the minimizer locates it with an exact coarse grid
followed by derivative-free simplex refinement.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import inf, lcm
from typing import Callable, Iterator, Sequence

from .errors import OffSimplex
from .model import (
    InequalityPreference,
    LinearPreference,
    MonomialPreference,
    Problem,
    canonicalize,
)
from .scalars import Scalar, exact

SIMPLEX_TOL = 1e-9
BOUNDARY_MARGIN = 1e-9
DIAMETER_TOL = 1e-10
DEFAULT_GRID = 100
DEFAULT_REFINE = 500


@dataclass(frozen=True)
class ErrorMinResult:
    """Outcome of minimizing the accuracy functional.

    ``argmin`` is the best weight vector found (exact fractions when the
    grid optimum stands, floats once refinement improves on it), ``value``
    the functional there, ``evaluations`` the number of functional
    evaluations spent, and ``refined`` whether local refinement beat the
    best grid point.
    """

    argmin: tuple[Scalar, ...]
    value: Scalar
    evaluations: int
    refined: bool


def _residuals(problem: Problem) -> list[Callable[[Sequence[Scalar]], Scalar]]:
    """One cleared-denominator residual function per equation statement."""
    out: list[Callable[[Sequence[Scalar]], Scalar]] = []
    for pref in problem.preferences:
        if isinstance(pref, InequalityPreference):
            continue
        if isinstance(pref, MonomialPreference):
            coef = pref.coefficient
            if isinstance(coef, Fraction):
                scale, weight = coef.denominator, coef.numerator
            else:
                scale, weight = 1, coef
            subject, exponents = pref.subject, pref.exponents

            def monomial_residual(
                x: Sequence[Scalar],
                subject: int = subject,
                scale: Scalar = scale,
                weight: Scalar = weight,
                exponents: tuple[tuple[int, int], ...] = exponents,
            ) -> Scalar:
                product = weight
                for j, power in exponents:
                    product = product * x[j] ** power
                return scale * x[subject] - product

            out.append(monomial_residual)
            continue
        flat: LinearPreference = canonicalize(pref)
        denominators = [
            a.denominator for _, a in flat.terms if isinstance(a, Fraction)
        ]
        scale = lcm(*denominators) if denominators else 1
        subject = flat.subject
        weights = tuple((j, scale * a) for j, a in flat.terms)

        def linear_residual(
            x: Sequence[Scalar],
            subject: int = subject,
            scale: int = scale,
            weights: tuple = weights,
        ) -> Scalar:
            acc = scale * x[subject]
            for j, w in weights:
                acc = acc - w * x[j]
            return acc

        out.append(linear_residual)
    return out


def eval_error(problem: Problem, x: Sequence[Scalar]) -> Scalar:
    """Sum of absolute cleared-denominator residuals at the point ``x``.

    ``x`` must be a strictly positive weight vector summing to 1 within
    1e-9; exact fraction inputs are evaluated exactly.

    Raises:
        OffSimplex: ``x`` has the wrong length, a non-positive component,
            or does not sum to 1.
    """
    n = problem.criteria.n
    if len(x) != n:
        raise OffSimplex(f"expected {n} weights, got {len(x)}")
    point = tuple(exact(v) if not isinstance(v, float) else v for v in x)
    if not all(v > 0 for v in point):
        raise OffSimplex("weights must be strictly positive")
    total = sum(point)
    if abs(float(total) - 1.0) > SIMPLEX_TOL:
        raise OffSimplex(f"weights must sum to 1, got {float(total)!r}")
    value: Scalar = Fraction(0)
    for residual in _residuals(problem):
        value = value + abs(residual(point))
    return value


def simplex_grid(n: int, grid_points: int) -> Iterator[tuple[Fraction, ...]]:
    """Interior barycentric grid: all positive multiples of 1/grid_points
    in n parts summing to 1, in lexicographic order."""
    if grid_points < n:
        raise ValueError(
            "grid_points must be at least the number of criteria "
            f"({n}) to have interior points"
        )

    def parts(total: int, count: int) -> Iterator[tuple[int, ...]]:
        if count == 1:
            yield (total,)
            return
        for first in range(1, total - count + 2):
            for rest in parts(total - first, count - 1):
                yield (first, *rest)

    for combo in parts(grid_points, n):
        yield tuple(Fraction(k, grid_points) for k in combo)


def minimize_error(
    problem: Problem,
    grid_points: int = DEFAULT_GRID,
    refine_iters: int = DEFAULT_REFINE,
) -> ErrorMinResult:
    """Minimize the accuracy functional over the open simplex.

    An exact scan of the interior barycentric grid picks the starting
    point (first of any ties in lexicographic order), then Nelder-Mead
    simplex descent on the first n-1 coordinates refines it, rejecting any
    step that leaves the open simplex by more than the boundary margin.
    The whole procedure is deterministic.
    """
    n = problem.criteria.n
    residuals = _residuals(problem)
    evaluations = 0

    def total_at(point: Sequence[Scalar]) -> Scalar:
        nonlocal evaluations
        evaluations += 1
        value: Scalar = Fraction(0)
        for residual in residuals:
            value = value + abs(residual(point))
        return value

    grid_best: tuple[Fraction, ...] | None = None
    grid_value: Scalar = Fraction(0)
    for point in simplex_grid(n, grid_points):
        value = total_at(point)
        if grid_best is None or value < grid_value:
            grid_best, grid_value = point, value
    assert grid_best is not None

    if refine_iters <= 0 or float(grid_value) == 0.0:
        return ErrorMinResult(grid_best, grid_value, evaluations, False)

    def penalized(u: Sequence[float]) -> float:
        last = 1.0 - sum(u)
        full = (*u, last)
        if any(v <= BOUNDARY_MARGIN for v in full):
            return inf
        return float(total_at(full))

    start = [float(v) for v in grid_best[:-1]]
    step = 1.0 / (2.0 * grid_points)
    simplex = [list(start)]
    for k in range(n - 1):
        vertex = list(start)
        vertex[k] += step
        if penalized(vertex) == inf:
            vertex[k] -= 2.0 * step
        simplex.append(vertex)
    values = [penalized(v) for v in simplex]

    for _ in range(refine_iters):
        order = sorted(range(len(simplex)), key=lambda i: values[i])
        simplex = [simplex[i] for i in order]
        values = [values[i] for i in order]
        spread = max(
            abs(simplex[i][k] - simplex[0][k])
            for i in range(1, len(simplex))
            for k in range(n - 1)
        )
        if spread < DIAMETER_TOL:
            break
        worst = simplex[-1]
        centroid = [
            sum(vertex[k] for vertex in simplex[:-1]) / (len(simplex) - 1)
            for k in range(n - 1)
        ]
        reflected = [2.0 * centroid[k] - worst[k] for k in range(n - 1)]
        f_reflected = penalized(reflected)
        if f_reflected < values[0]:
            expanded = [3.0 * centroid[k] - 2.0 * worst[k] for k in range(n - 1)]
            f_expanded = penalized(expanded)
            if f_expanded < f_reflected:
                simplex[-1], values[-1] = expanded, f_expanded
            else:
                simplex[-1], values[-1] = reflected, f_reflected
        elif f_reflected < values[-2]:
            simplex[-1], values[-1] = reflected, f_reflected
        else:
            if f_reflected < values[-1]:
                contracted = [
                    1.5 * centroid[k] - 0.5 * worst[k] for k in range(n - 1)
                ]
            else:
                contracted = [
                    0.5 * centroid[k] + 0.5 * worst[k] for k in range(n - 1)
                ]
            f_contracted = penalized(contracted)
            if f_contracted < min(f_reflected, values[-1]):
                simplex[-1], values[-1] = contracted, f_contracted
            else:
                best = simplex[0]
                for i in range(1, len(simplex)):
                    simplex[i] = [
                        0.5 * (simplex[i][k] + best[k]) for k in range(n - 1)
                    ]
                    values[i] = penalized(simplex[i])

    winner = min(range(len(simplex)), key=lambda i: values[i])
    if values[winner] < float(grid_value):
        u = simplex[winner]
        full = [*u, 1.0 - sum(u)]
        total = sum(full)
        argmin = tuple(v / total for v in full)
        return ErrorMinResult(argmin, values[winner], evaluations, True)
    return ErrorMinResult(grid_best, grid_value, evaluations, False)
