"""Parametric solve pipeline: worked problems, root choice, extra
parameters, policies, and system-level invariants across the corpus."""

import math
import random
from fractions import Fraction

import pytest

from admcdm.errors import (
    DegenerateCore,
    InconsistentExtraParams,
    InvalidProblem,
    NoPositiveRoot,
    NonEquationPreference,
    NonlinearPreferencePresent,
)
from admcdm.linalg import eval_matrix
from admcdm.model import (
    CriteriaSet,
    LinearPreference,
    Problem,
    make_cyclic_example,
)
from admcdm.parser import parse_problem
from admcdm.polynomial import peval
from admcdm.solver import (
    ConsistencyPolicy,
    PolicyAction,
    _choose_root,
    _solve_extras,
    discount_report,
    parameterize,
    parametric_equation,
    priority,
    solve_alpha,
)

from conftest import load

RNG = random.Random(0xA1FA)


def problem(names, *prefs):
    return Problem(CriteriaSet(tuple(names.split())), tuple(prefs))


class TestWorkedProblems:
    def test_consistent_chain_needs_no_discount(self):
        pv, sol, _ = priority(load("ex1.admp"))
        assert sol.alpha == 1
        assert sol.consistency == 1
        assert pv == (Fraction(3, 4), Fraction(3, 16), Fraction(1, 16))

    def test_multi_term_discounted_by_root_two_over_two(self):
        pv, sol, _ = priority(load("ex2.admp"))
        assert abs(float(sol.alpha) - math.sqrt(2) / 2) <= 1e-10
        for got, want in zip(pv, (0.62923, 0.22246, 0.14831)):
            assert abs(float(got) - want) <= 5e-5

    def test_two_term_with_reversal_discounts_to_one_third(self):
        pv, sol, _ = priority(load("ex3.admp"))
        assert sol.alpha == Fraction(1, 3)
        assert pv == (Fraction(9, 22), Fraction(12, 22), Fraction(1, 22))

    def test_heavier_reversal_gets_an_irrational_root(self):
        pv, sol, _ = priority(load("ex4.admp"))
        assert abs(float(sol.alpha) - math.sqrt(23) / 23) <= 1e-10
        for got, want in zip(pv, (0.34763, 0.28994, 0.36243)):
            assert abs(float(got) - want) <= 5e-5

    def test_consistent_two_term_stays_undiscounted(self):
        pr = load("ex5.admp")
        pv, sol, _ = priority(pr)
        assert sol.alpha == 1
        assert pv == (Fraction(12, 17), Fraction(3, 17), Fraction(2, 17))
        assert all(f == 1 for _, f in discount_report(pr, pv))

    def test_small_coefficients_inflate_alpha(self):
        pv, sol, _ = priority(load("ex8.admp"))
        assert sol.alpha == 25
        assert sol.consistency == Fraction(1, 25)
        assert pv == (Fraction(4, 9), Fraction(3, 9), Fraction(2, 9))

    def test_large_coefficients_shrink_alpha(self):
        pv, sol, _ = priority(load("ex7.admp"))
        assert sol.alpha == Fraction(1, 100)
        assert pv == (Fraction(2, 9), Fraction(2, 9), Fraction(5, 9))

    def test_three_ratio_overlap_discounts_to_five_twelfths(self):
        pr = load("ex9.admp")
        pv, sol, _ = priority(pr)
        assert sol.alpha == Fraction(5, 12)
        assert pv == (Fraction(20, 57), Fraction(25, 57), Fraction(12, 57))
        assert all(f == Fraction(5, 12) for _, f in discount_report(pr, pv))

    def test_redundant_statement_gets_its_own_parameter(self):
        pv, sol, _ = priority(load("ex10.admp"))
        assert sol.alpha == Fraction(5, 12)
        assert sol.extra_params == ((3, Fraction(25, 48)),)
        assert pv == (Fraction(20, 57), Fraction(25, 57), Fraction(12, 57))

    def test_harsh_cycle_t_nine(self):
        pv, sol, _ = priority(load("ex11.admp"))
        assert sol.alpha == Fraction(1, 729)
        assert pv == (Fraction(1, 6643), Fraction(81, 6643),
                      Fraction(6561, 6643))
        assert abs(float(sol.consistency) - 0.00137) <= 1e-5
        assert abs(float(sol.inconsistency) - 0.99863) <= 1e-5

    def test_cycle_t_five(self):
        pv, sol, _ = priority(load("ex12.admp"))
        assert sol.alpha == Fraction(1, 125)
        assert pv == (Fraction(1, 651), Fraction(25, 651),
                      Fraction(625, 651))

    def test_two_criteria_mutual_inflation(self):
        pv, sol, _ = priority(load("ex14.admp"))
        assert abs(float(sol.alpha) - math.sqrt(10) / 10) <= 1e-10
        for got, want in zip(pv, (0.39, 0.61)):
            assert abs(float(got) - want) <= 5e-3

    def test_two_criteria_symmetric_inflation(self):
        pr = problem(
            "x y",
            LinearPreference(0, ((1, 2),)),
            LinearPreference(1, ((0, 2),)),
        )
        pv, sol, _ = priority(pr)
        assert sol.alpha == Fraction(1, 2)
        assert pv == (Fraction(1, 2), Fraction(1, 2))

    def test_expert_multipliers_shift_the_solution(self):
        pr = load("ex9_expert.admp")
        assert pr.binding.multipliers == (
            Fraction(1), Fraction(2), Fraction(1, 3))
        pv, sol, _ = priority(pr)
        assert sol.alpha == Fraction(5, 72)
        assert pv == (Fraction(120, 361), Fraction(25, 361),
                      Fraction(216, 361))

    def test_underdetermined_consistent_chain(self):
        pr = problem(
            "x y z",
            LinearPreference(0, ((1, 2),)),
            LinearPreference(1, ((2, 3),)),
        )
        pv, sol, _ = priority(pr)
        assert sol.alpha == 1
        assert pv == (Fraction(6, 10), Fraction(3, 10), Fraction(1, 10))


class TestDiscountFormula:
    def test_two_term_star_formula(self):
        """x = a1 y + a2 z with y = a3 x, z = a4 x always discounts by
        1 / sqrt(a1 a3 + a2 a4)."""
        for _ in range(100):
            a = [Fraction(RNG.randrange(1, 40), RNG.randrange(1, 12))
                 for _ in range(4)]
            pr = problem(
                "x y z",
                LinearPreference(0, ((1, a[0]), (2, a[1]))),
                LinearPreference(1, ((0, a[2]),)),
                LinearPreference(2, ((0, a[3]),)),
            )
            _, sol, _ = priority(pr)
            want = 1.0 / math.sqrt(float(a[0] * a[2] + a[1] * a[3]))
            assert abs(float(sol.alpha) - want) <= 1e-10 * max(1.0, want)

    def test_cyclic_family_consistency_closed_form(self):
        """For the three-statement cycle the consistency is min(t, 1/t)^3,
        so it falls strictly as t moves away from 1."""
        points = ["1/2", "4/5", "1", "2", "5", "9", "11"]
        cs = []
        for t in points:
            _, sol, _ = priority(make_cyclic_example(t))
            tf = Fraction(t)
            want = min(tf, 1 / tf) ** 3
            assert sol.consistency == want
            cs.append((abs(math.log(float(tf))), float(sol.consistency)))
        cs.sort()
        for (d1, c1), (d2, c2) in zip(cs, cs[1:]):
            if d2 > d1:
                assert c2 < c1


class TestRootChoice:
    def test_smallest_alpha_wins_ties(self):
        assert _choose_root((Fraction(1, 2), Fraction(2))) == Fraction(1, 2)

    def test_closest_to_one_wins(self):
        assert _choose_root((Fraction(1, 3), Fraction(2))) == Fraction(2)
        assert _choose_root((Fraction(3, 4), Fraction(5, 4))) == Fraction(5, 4)

    def test_double_root_is_reported_twice_and_chosen(self):
        pr = parse_problem(
            "criteria: x y z w\n"
            "pref: x = 2 y\n"
            "pref: y = 2 x\n"
            "pref: z = 2 w\n"
            "pref: w = 2 z\n"
        )
        sol = solve_alpha(parameterize(pr))
        assert sol.roots == (Fraction(1, 2), Fraction(1, 2))
        assert sol.alpha == Fraction(1, 2)


class TestFailureModes:
    def test_contradictory_pair_has_no_positive_root(self):
        pr = problem(
            "x y",
            LinearPreference(0, ((1, 2),)),
            LinearPreference(0, ((1, 3),)),
        )
        with pytest.raises(NoPositiveRoot):
            solve_alpha(parameterize(pr))

    def test_duplicate_statements_degenerate_the_core(self):
        pr = problem(
            "x y",
            LinearPreference(0, ((1, 2),)),
            LinearPreference(0, ((1, 2),)),
        )
        with pytest.raises(DegenerateCore):
            parametric_equation(parameterize(pr))

    def test_core_size_must_match_criteria_count(self):
        pr = problem(
            "x y z",
            LinearPreference(0, ((1, 2),)),
            LinearPreference(1, ((2, 3),)),
        )
        with pytest.raises(InvalidProblem):
            parametric_equation(parameterize(pr))

    def test_extras_disagree_away_from_the_root(self):
        """The auxiliary determinants impose one common constraint only at
        the solved parameter; evaluating the core anywhere else makes them
        clash, which the guard reports rather than averaging away."""
        ps = parameterize(load("ex10.admp"))
        with pytest.raises(InconsistentExtraParams):
            _solve_extras(ps, Fraction(1, 2))

    def test_extras_with_all_minors_vanishing(self):
        pr = parse_problem(
            "criteria: x y z w\n"
            "pref: x = 2 y\n"
            "pref: y = 2 x\n"
            "pref: z = 2 w\n"
            "pref: w = 2 z\n"
            "pref: x = 3 z\n"
        )
        with pytest.raises(InconsistentExtraParams):
            solve_alpha(parameterize(pr))

    def test_monomials_and_inequalities_are_refused(self):
        with pytest.raises(NonlinearPreferencePresent):
            parameterize(load("ex15.admp"))
        with pytest.raises(NonEquationPreference):
            parameterize(parse_problem(
                "criteria: x y\npref: x = 2 y\npref: x < y\n"))


class TestPolicy:
    def test_threshold_must_be_a_probability(self):
        with pytest.raises(InvalidProblem):
            ConsistencyPolicy(threshold_c=2)

    def test_reject_policy_discharges_low_consistency(self):
        policy = ConsistencyPolicy(Fraction(1, 2), PolicyAction.REJECT)
        _, sol, _ = priority(load("ex11.admp"), policy)
        assert sol.discharged

    def test_report_only_never_discharges(self):
        policy = ConsistencyPolicy(Fraction(1, 2), PolicyAction.REPORT_ONLY)
        _, sol, _ = priority(load("ex11.admp"), policy)
        assert not sol.discharged

    def test_high_consistency_passes_a_rejecting_policy(self):
        policy = ConsistencyPolicy(Fraction(1, 3), PolicyAction.REJECT)
        _, sol, _ = priority(load("ex9.admp"), policy)
        assert not sol.discharged  # 5/12 > 1/3


class TestParameterization:
    def test_unit_evaluation_recovers_the_plain_system(self):
        from admcdm.model import assemble

        pr = load("ex9.admp")
        ps = parameterize(pr)
        assert eval_matrix(ps.matrix, Fraction(1)) == assemble(pr)

    def test_multipliers_scale_the_rows(self):
        pr = load("ex9_expert.admp")
        ps = parameterize(pr)
        rows = eval_matrix(ps.matrix, Fraction(1))
        # second statement carries multiplier 2: C1 = 4 * (2 alpha) C3
        assert rows[1] == [Fraction(1), Fraction(0), Fraction(-8)]
        # third carries 1/3: C2 = 5 * (alpha / 3) C3
        assert rows[2] == [Fraction(0), Fraction(1), Fraction(-5, 3)]


def linear_corpus(corpus_files):
    out = []
    for path in corpus_files:
        pr = parse_problem(path.read_text())
        try:
            parameterize(pr)
        except (NonEquationPreference, NonlinearPreferencePresent):
            continue
        out.append((path.name, pr))
    return out


class TestCorpusInvariants:
    def test_priority_vectors_are_positive_and_normalized(self, corpus_files):
        for name, pr in linear_corpus(corpus_files):
            pv, _, _ = priority(pr)
            assert all(float(x) > 0 for x in pv), name
            assert abs(float(sum(pv)) - 1.0) <= 1e-12, name

    def test_solved_parameter_annihilates_the_core_determinant(
            self, corpus_files):
        for name, pr in linear_corpus(corpus_files):
            _, sol, _ = priority(pr)
            if sol.alpha == 1 and sol.roots == (Fraction(1),):
                continue  # consistent branch: no parametric equation built
            eq = parametric_equation(parameterize(pr))
            scale = max(abs(float(c)) for c in eq.coeffs)
            assert abs(float(peval(eq, sol.alpha))) <= 1e-9 * max(1.0, scale), name

    def test_realized_discounts_match_the_solved_parameters(
            self, corpus_files):
        """Every core statement is bent by exactly its multiplier times the
        base parameter; every redundant statement by its own parameter."""
        for name, pr in linear_corpus(corpus_files):
            pv, sol, _ = priority(pr)
            extra = dict(sol.extra_params)
            mults = pr.binding.multipliers
            core = set(pr.binding.core_mask)
            for pos, factor in discount_report(pr, pv):
                if pos in extra:
                    want = extra[pos]
                elif pos in core or sol.alpha == 1:
                    want = mults[pos] * sol.alpha
                else:
                    continue
                assert abs(float(factor) - float(want)) <= 1e-9, name
