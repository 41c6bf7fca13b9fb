"""Consistency classification by substitution closure.

Single-term statements form a ratio graph: the statement "x_i equals k times
x_j" is an edge carrying k from i to j (and 1/k the other way). Walking
simple paths derives new two-variable relations, closing a cycle derives a
self-relation x_i = k * x_i, and substituting derived single-variable
relations into a multi-term statement collapses it to a two-variable or
self relation. Two derivations of the same pair that disagree on the same
side of 1 are a weak disagreement; derivations on opposite sides of 1 flip
the preference order itself, a strong disagreement. A self-relation with
k != 1 is weak: the statement chain deflates or inflates a criterion against
itself without reversing any ordering.

The derived picture is cross-checked against the algebraic one (a square
system is consistent exactly when its determinant vanishes); agreement is
reported as a diagnostic rather than enforced, since adversarial inputs
outside the corpus could in principle defeat the substitution search.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product as iter_product
from math import factorial

from .errors import NonEquationPreference, NonlinearPreferencePresent
from .linalg import det_numeric, rank
from .model import (
    InequalityPreference,
    MonomialPreference,
    Problem,
    assemble,
    canonicalize,
)

RATIO_BAND = 1e-9
CONSISTENT_DET_TOL = 1e-9
_RELATION_CAP = 5000
_WITNESS_CAP = 200


class Label(Enum):
    CONSISTENT = "Consistent"
    WEAK_INCONSISTENT = "WeakInconsistent"
    STRONG_INCONSISTENT = "StrongInconsistent"


@dataclass(frozen=True)
class DerivedRelation:
    """x_i = ratio * x_j, derived through the preferences listed in trail."""

    i: int
    j: int
    ratio: object
    trail: tuple

    def describe(self, names) -> str:
        k = self.ratio
        via = ",".join(str(p + 1) for p in self.trail)
        return f"{names[self.i]} = {k} * {names[self.j]} (via {via})"


@dataclass(frozen=True)
class ClassificationReport:
    label: Label
    witnesses: tuple       # (rule, relation, other relation or None)
    rule_fired: str        # strongest rule observed, or "" when consistent
    det_agrees: bool
    depth_exceeded: bool


def _inv(k):
    return 1 / k if isinstance(k, (Fraction, int)) else 1.0 / k


def _derive(problem: Problem, max_depth: int):
    """All derived relations plus a flag for truncated exploration."""
    n = problem.criteria.n
    edges = []
    multi = []
    for pos, pref in enumerate(problem.preferences):
        if isinstance(pref, InequalityPreference):
            raise NonEquationPreference(
                "classification is defined on equation preferences only")
        if isinstance(pref, MonomialPreference):
            raise NonlinearPreferencePresent(
                "classification is defined on linear preferences only")
        lin = canonicalize(pref)
        if len(lin.terms) == 1:
            j, k = lin.terms[0]
            edges.append((lin.subject, j, k, pos))
        else:
            multi.append((pos, lin.subject, lin.terms))

    adjacency = defaultdict(list)
    for a, b, k, pos in edges:
        adjacency[a].append((b, k, pos))
        adjacency[b].append((a, _inv(k), pos))

    relations = []
    seen = set()
    truncated = False

    def add(i, j, k, trail):
        nonlocal truncated
        if len(relations) >= _RELATION_CAP:
            truncated = True
            return
        key = (i, j, frozenset(trail))
        if key in seen:
            return
        seen.add(key)
        relations.append(DerivedRelation(i, j, k, tuple(trail)))

    for a, b, k, pos in edges:
        add(a, b, k, (pos,))

    def walk(start, node, prod, trail, visited):
        nonlocal truncated
        if len(trail) >= max_depth:
            if any(pos not in trail for _, _, pos in adjacency[node]):
                truncated = True
            return
        for nxt, k, pos in adjacency[node]:
            if pos in trail:
                continue
            here = prod * k
            if nxt == start:
                if len(trail) >= 1 and start == min(visited):
                    add(start, start, here, trail + (pos,))
                continue
            if nxt in visited:
                continue
            if len(trail) + 1 >= 2 and start < nxt:
                add(start, nxt, here, trail + (pos,))
            walk(start, nxt, here, trail + (pos,), visited | {nxt})

    for start in range(n):
        walk(start, start, Fraction(1), (), frozenset({start}))

    if multi:
        pool = defaultdict(list)
        for r in relations:
            if r.i != r.j:
                pool[(r.i, r.j)].append((r.ratio, r.trail))
                pool[(r.j, r.i)].append((_inv(r.ratio), r.trail))
        for pos, subject, terms in multi:
            for target in range(n):
                choices = []
                for j, _coef in terms:
                    if j == target:
                        opts = [(Fraction(1), ())]
                    else:
                        opts = [(k, tr) for k, tr in pool[(j, target)]
                                if pos not in tr]
                    if not opts:
                        choices = None
                        break
                    choices.append(opts)
                if choices is None:
                    continue
                for combo in iter_product(*choices):
                    used = set()
                    ok = True
                    for _k, tr in combo:
                        tset = set(tr)
                        if used & tset:
                            ok = False
                            break
                        used |= tset
                    if not ok:
                        continue
                    total = sum(coef * k
                                for (_, coef), (k, _) in zip(terms, combo))
                    trail = (pos,)
                    for _k, tr in combo:
                        trail += tr
                    add(subject, target, total, trail)

    return relations, truncated


def derive_relations(problem: Problem, max_depth: int = None):
    """Closure of substitution-derived two-variable and self relations."""
    if max_depth is None:
        max_depth = problem.criteria.n
    if max_depth < 1:
        raise ValueError("max_depth must be at least 1")
    return _derive(problem, max_depth)[0]


def _side(k) -> int:
    kf = float(k)
    if kf > 1 + RATIO_BAND:
        return 1
    if kf < 1 - RATIO_BAND:
        return -1
    return 0


def _differ(k1, k2) -> bool:
    a, b = float(k1), float(k2)
    return abs(a - b) > RATIO_BAND * max(abs(a), abs(b))


def _det_consistent(problem: Problem) -> bool:
    rows = assemble(problem)
    m, n = len(rows), problem.criteria.n
    if m != n:
        return rank(rows) < n
    top = max(abs(float(e)) for row in rows for e in row)
    bound = CONSISTENT_DET_TOL * factorial(n) * top ** n
    return abs(float(det_numeric(rows))) <= bound


def classify(problem: Problem, max_depth: int = None) -> ClassificationReport:
    if max_depth is None:
        max_depth = problem.criteria.n
    relations, truncated = _derive(problem, max_depth)

    pairs = defaultdict(list)
    selves = []
    for r in relations:
        if r.i == r.j:
            selves.append(r)
        else:
            a, b = (r.i, r.j) if r.i < r.j else (r.j, r.i)
            k = r.ratio if r.i < r.j else _inv(r.ratio)
            pairs[(a, b)].append((k, r))

    rank_of = {"": 0, "WD3": 1, "WD2": 2, "WD1": 3, "SD4": 4}
    strongest = ""
    witnesses = []

    def fire(rule, rel, other=None):
        nonlocal strongest
        if rank_of[rule] > rank_of[strongest]:
            strongest = rule
        if len(witnesses) < _WITNESS_CAP:
            witnesses.append((rule, rel, other))

    for _, rels in sorted(pairs.items()):
        for x in range(len(rels)):
            for y in range(x + 1, len(rels)):
                (k1, r1), (k2, r2) = rels[x], rels[y]
                if not _differ(k1, k2):
                    continue
                s1, s2 = _side(k1), _side(k2)
                if s1 > s2:
                    s1, s2 = s2, s1
                    r1, r2 = r2, r1
                if s1 == -1 and s2 == 1:
                    fire("SD4", r1, r2)
                elif s2 == 1:
                    fire("WD1", r1, r2)
                elif s1 == -1:
                    fire("WD2", r1, r2)
                # both inside the band around 1: treated as equal to 1
    for r in selves:
        if _side(r.ratio) != 0:
            fire("WD3", r)

    if strongest == "SD4":
        label = Label.STRONG_INCONSISTENT
    elif strongest:
        label = Label.WEAK_INCONSISTENT
    elif truncated:
        # unexplored substitutions may hide a disagreement; stay conservative
        label = Label.WEAK_INCONSISTENT
    else:
        label = Label.CONSISTENT

    det_ok = _det_consistent(problem)
    det_agrees = (label is Label.CONSISTENT) == det_ok
    return ClassificationReport(
        label=label,
        witnesses=tuple(witnesses),
        rule_fired=strongest,
        det_agrees=det_agrees,
        depth_exceeded=truncated,
    )
