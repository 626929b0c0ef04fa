import math

import numpy as np
from django.test import SimpleTestCase

from cube.boolean import SignVector, enumerate_sign_vectors, random_points
from cube.lift import expectation, lift
from inequalities.bohnenblust import bh_ratio_boolean, random_instance
from pauli.dense import operator_norm, schatten_norm
from pauli.exceptions import CapacityError, InputError, OracleError
from pauli.kernels import subset_products
from pauli.polynomial import PauliPolynomial

from .bounds import (
    candidate_sets,
    chain_bounds,
    error_bound,
    sample_budget,
    sample_count,
    survivor_bound,
    threshold_b,
    two_threshold_error_bound,
    two_threshold_survivor_bound,
)
from .config import LearnerConfig
from .learner import (
    QUERY_CHUNK,
    empirical_coefficients,
    err_l2sq,
    exhaustive_samples,
    good_event,
    learn,
    reconstruct,
    select_survivors,
)
from .oracles import CallableOracle, ExactOracle


def unit_norm_instance(n, d, seed):
    polynomial = random_instance(n, d, seed=seed, distribution='gaussian')
    return polynomial * (1.0 / operator_norm(polynomial))


class LearnerConfigTests(SimpleTestCase):
    def test_defaults_come_from_settings(self):
        self.assertEqual(LearnerConfig(n=3, d=2, eps=0.1, delta=0.1).bh_bound, 4.0)

    def test_invalid_values(self):
        for kwargs in (
            dict(n=2, d=3, eps=0.1, delta=0.1),
            dict(n=2, d=1, eps=1.0, delta=0.1),
            dict(n=2, d=1, eps=0.1, delta=0.0),
            dict(n=2, d=1, eps=0.1, delta=0.1, bh_bound=0.5),
            dict(n=2, d=1, eps=0.1, delta=0.1, n_override=0),
            dict(n=2, d=1, eps=0.1, delta=0.1, noise_std=-1.0),
        ):
            with self.assertRaises(InputError, msg=str(kwargs)):
                LearnerConfig(**kwargs)


class BoundsTests(SimpleTestCase):
    def test_candidate_sets(self):
        self.assertEqual(candidate_sets(1, 1), [frozenset(), frozenset({0}), frozenset({1}), frozenset({2})])
        self.assertEqual(len(candidate_sets(2, 1)), 7)
        self.assertEqual(len(candidate_sets(2, 2)), 16)
        with self.assertRaises(InputError):
            candidate_sets(1, 2)

    def test_threshold_hand_arithmetic(self):
        self.assertAlmostEqual(threshold_b(LearnerConfig(n=4, d=1, eps=0.1, delta=0.1, bh_bound=1.0)), 1 / 900)
        self.assertAlmostEqual(threshold_b(LearnerConfig(n=4, d=1, eps=0.1, delta=0.1, bh_bound=2.0)), 1 / 1800)
        tighter = threshold_b(LearnerConfig(n=4, d=2, eps=0.01, delta=0.1))
        self.assertLess(tighter, threshold_b(LearnerConfig(n=4, d=2, eps=0.1, delta=0.1)))

    def test_sample_count_hand_arithmetic(self):
        cfg = LearnerConfig(n=4, d=1, eps=0.1, delta=0.1)
        self.assertEqual(sample_count(cfg, 0.1), 1141)
        self.assertGreaterEqual(sample_count(cfg, 0.05), 4 * 1141 - 4)
        self.assertGreater(sample_count(LearnerConfig(n=4, d=1, eps=0.1, delta=0.01), 0.1), 1141)
        with self.assertRaises(InputError):
            sample_count(cfg, 0.0)

    def test_budget_variants(self):
        budget = sample_budget(LearnerConfig(n=4, d=1, eps=0.3, delta=0.2, bh_bound=1.0))
        self.assertAlmostEqual(budget.b, 1 / 300)
        self.assertGreaterEqual(budget.n_samples_binomial_bound, budget.n_samples)
        self.assertAlmostEqual(budget.a_two_threshold, 2 * budget.b)
        self.assertGreater(budget.n_samples_two_threshold, 0)

    def test_bound_formulas(self):
        self.assertAlmostEqual(survivor_bound(0.1, 1, 2.0), 20.0)
        self.assertAlmostEqual(error_bound(0.01, 1, 1.0), 10 * 9 * 0.01)
        self.assertGreater(two_threshold_error_bound(0.3, 0.1, 1, 1.0), 0.0)
        with self.assertRaises(InputError):
            two_threshold_error_bound(0.1, 0.1, 1, 1.0)

    def test_two_threshold_survivor_bound(self):
        self.assertAlmostEqual(two_threshold_survivor_bound(0.5, 0.02, 1, 1 / 3), (1 / 3) / 0.48)
        for d in (1, 2, 3):
            self.assertAlmostEqual(two_threshold_survivor_bound(0.2, 0.1, d, 1.7), survivor_bound(0.1, d, 1.7))
        with self.assertRaises(InputError):
            two_threshold_survivor_bound(0.05, 0.1, 1, 1.0)

    def test_chain_bounds_follow_the_rule_in_use(self):
        self.assertEqual(chain_bounds(0.02, 1, 1 / 3), (survivor_bound(0.02, 1, 1 / 3), error_bound(0.02, 1, 1 / 3)))
        survivors, error = chain_bounds(0.02, 1, 1 / 3, a=0.5)
        self.assertAlmostEqual(survivors, (1 / 3) / 0.48)
        self.assertAlmostEqual(error, 3 * (0.02 ** 2 / 0.48 + 0.52))
        self.assertGreater(error, 1.0)


class OracleTests(SimpleTestCase):
    def test_exact_oracle_matches_expectation(self):
        polynomial = random_instance(2, 2, seed=1)
        oracle = ExactOracle(polynomial)
        eps = SignVector.from_string('+-|--|+-')
        self.assertEqual(oracle.query(eps), expectation(polynomial, eps))
        self.assertEqual(oracle.query(eps), oracle.query(eps))

    def test_noisy_oracle_is_seeded(self):
        polynomial = random_instance(1, 1, seed=1)
        points = enumerate_sign_vectors(3)
        first = ExactOracle(polynomial, noise_std=0.1, seed=4).query_batch(points)
        second = ExactOracle(polynomial, noise_std=0.1, seed=4).query_batch(points)
        np.testing.assert_array_equal(first, second)
        self.assertFalse(ExactOracle(polynomial, noise_std=0.1).concurrent_safe)

    def test_failing_oracle_reports_progress(self):
        calls = []

        def flaky(eps):
            calls.append(eps)
            if len(calls) > 5:
                raise RuntimeError('device offline')
            return 0.0

        cfg = LearnerConfig(n=1, d=1, eps=0.1, delta=0.1, n_override=20, b_override=0.1)
        with self.assertRaises(OracleError) as ctx:
            learn(CallableOracle(flaky, 1), cfg, seed=0)
        self.assertEqual(ctx.exception.completed, 5)

    def test_dimension_mismatch(self):
        cfg = LearnerConfig(n=2, d=1, eps=0.1, delta=0.1, n_override=10, b_override=0.1)
        with self.assertRaises(InputError):
            learn(CallableOracle(lambda eps: 0.0, 1), cfg)


class EmpiricalCoefficientTests(SimpleTestCase):
    def test_constant_oracle(self):
        points = enumerate_sign_vectors(3)
        alpha = empirical_coefficients((points, np.full(8, 0.7)), candidate_sets(1, 1))
        self.assertAlmostEqual(alpha[frozenset()], 0.7)
        for subset in candidate_sets(1, 1)[1:]:
            self.assertAlmostEqual(abs(alpha[subset]), 0.0)

    def test_single_sample(self):
        eps = SignVector.from_string('-|+|-')
        alpha = empirical_coefficients([(eps, 2.0)], [(0,), (0, 2), ()])
        self.assertEqual(alpha[frozenset({0})], -2.0)
        self.assertEqual(alpha[frozenset({0, 2})], 2.0)
        self.assertEqual(alpha[frozenset()], 2.0)

    def test_empty_samples_rejected(self):
        with self.assertRaises(InputError):
            empirical_coefficients([], candidate_sets(1, 1))

    def test_samples_beyond_one_slice_match_the_direct_sum(self):
        rng = np.random.default_rng(8)
        count = 2 * QUERY_CHUNK + 17
        points = random_points(rng, count, 6)
        values = rng.normal(size=count) + 1j * rng.normal(size=count)
        sets = candidate_sets(2, 2)
        alpha = empirical_coefficients((points, values), sets)
        direct = subset_products(points, [tuple(sorted(s)) for s in sets]).T @ values / count
        for subset, expected in zip(sets, direct):
            self.assertAlmostEqual(abs(alpha[subset] - expected), 0.0, places=12)
        self.assertEqual(alpha, empirical_coefficients((points, values), sets))

    def test_exhaustive_samples_give_exact_coefficients(self):
        for seed in range(20):
            polynomial = random_instance(2, 2, seed=seed, distribution='gaussian')
            alpha = empirical_coefficients(exhaustive_samples(polynomial), candidate_sets(2, 2))
            f_a = lift(polynomial)
            for subset, value in alpha.items():
                self.assertAlmostEqual(abs(value - f_a.coefficient(subset)), 0.0, places=12)

    def test_exhaustive_query_limit_recovers_observable(self):
        for seed in range(20):
            polynomial = random_instance(2, 2, seed=seed, distribution='gaussian')
            f_a = lift(polynomial)
            b = min(abs(v) for v in f_a.terms.values()) / 4
            alpha = empirical_coefficients(exhaustive_samples(polynomial), candidate_sets(2, 2))
            recovered = reconstruct(alpha, select_survivors(alpha, 2 * b), 2)
            self.assertEqual(set(recovered.terms), set(polynomial.terms))
            self.assertLess((recovered - polynomial).l2_norm_sq(), 1e-20)

    def test_ties_are_kept(self):
        alpha = {frozenset(): 0.2, frozenset({0}): 0.1999}
        self.assertEqual(select_survivors(alpha, 0.2), (frozenset(),))


class LearnTests(SimpleTestCase):
    def test_zero_observable(self):
        cfg = LearnerConfig(n=2, d=2, eps=0.1, delta=0.1, n_override=50, b_override=0.01)
        report = learn(ExactOracle(PauliPolynomial.zero(2)), cfg, seed=3)
        self.assertFalse(report.reconstructed)
        self.assertEqual(report.err_l2sq, 0.0)

    def test_err_examples(self):
        sigma_x = PauliPolynomial.from_labels({'X': 1.0})
        cfg = LearnerConfig(n=1, d=1, eps=0.1, delta=0.1, n_override=10, b_override=10.0)
        report = learn(ExactOracle(sigma_x), cfg)
        self.assertFalse(report.reconstructed)
        self.assertAlmostEqual(err_l2sq(sigma_x, report), 1.0)

    def test_err_matches_dense_schatten_norm(self):
        polynomial = random_instance(3, 2, seed=2, distribution='gaussian')
        cfg = LearnerConfig(n=3, d=2, eps=0.1, delta=0.1, n_override=500, b_override=0.01)
        report = learn(ExactOracle(polynomial), cfg, seed=2)
        dense = schatten_norm(polynomial - report.reconstructed, 2) ** 2
        self.assertAlmostEqual(report.err_l2sq, dense, delta=1e-10)

    def test_single_pauli_recovery_rate(self):
        sigma_z = PauliPolynomial.from_labels({'Z': 1.0})
        cfg = LearnerConfig(n=1, d=1, eps=0.1, delta=0.1, n_override=100_000, b_override=0.05)
        hits = 0
        for seed in range(100):
            report = learn(ExactOracle(sigma_z), cfg, seed=seed)
            estimate = report.reconstructed.coefficient(next(iter(sigma_z)))
            hits += abs(estimate - 1.0) < 0.05
        self.assertGreaterEqual(hits, 99)

    def test_is_deterministic_and_workers_agree(self):
        polynomial = unit_norm_instance(3, 1, seed=6)
        cfg = LearnerConfig(n=3, d=1, eps=0.1, delta=0.1, n_override=40_000, b_override=0.02)
        first = learn(ExactOracle(polynomial), cfg, seed=11, workers=1)
        second = learn(ExactOracle(polynomial), cfg, seed=11, workers=4)
        self.assertEqual(first.reconstructed, second.reconstructed)
        self.assertEqual(first.alpha, second.alpha)

    def test_theoretical_sample_count_is_refused_when_too_large(self):
        cfg = LearnerConfig(n=4, d=2, eps=0.1, delta=0.1)
        with self.assertRaises(CapacityError):
            learn(ExactOracle(PauliPolynomial.zero(4)), cfg)

    def test_two_threshold_rule(self):
        polynomial = unit_norm_instance(2, 1, seed=4)
        cfg = LearnerConfig(n=2, d=1, eps=0.1, delta=0.1, n_override=5000, b_override=0.02, a_override=0.08)
        report = learn(ExactOracle(polynomial), cfg, seed=1)
        self.assertEqual(report.threshold, 0.08)
        self.assertTrue(all(abs(report.alpha[s]) >= 0.08 for s in report.survivors))
        with self.assertRaises(InputError):
            learn(ExactOracle(polynomial), LearnerConfig(n=2, d=1, eps=0.1, delta=0.1, n_override=10, b_override=0.1, a_override=0.05))

    def test_survivor_limit_follows_the_threshold(self):
        polynomial = unit_norm_instance(2, 1, seed=4)
        single = learn(ExactOracle(polynomial), LearnerConfig(n=2, d=1, eps=0.1, delta=0.1, n_override=5000, b_override=0.02))
        self.assertAlmostEqual(single.survivor_limit, survivor_bound(0.02, 1, 2.0))
        self.assertTrue(single.survivor_bound_holds)
        cfg = LearnerConfig(n=2, d=1, eps=0.1, delta=0.1, n_override=5000, b_override=0.02, a_override=0.5)
        double = learn(ExactOracle(polynomial), cfg)
        self.assertAlmostEqual(double.survivor_limit, two_threshold_survivor_bound(0.5, 0.02, 1, 2.0))
        self.assertTrue(double.survivor_bound_holds)


class MonteCarloTests(SimpleTestCase):
    def test_desk_scale_accuracy_and_bounds(self):
        cfg = LearnerConfig(n=4, d=1, eps=0.1, delta=0.05, n_override=20_000, b_override=0.02)
        successes, survivor_violations, error_violations = 0, 0, 0
        for seed in range(200):
            polynomial = unit_norm_instance(4, 1, seed=seed)
            report = learn(ExactOracle(polynomial), cfg, seed=seed)
            successes += report.err_l2sq <= 0.1
            if not good_event(polynomial, report):
                continue
            r = bh_ratio_boolean(lift(polynomial), 1).lhs
            survivor_violations += len(report.survivors) > survivor_bound(report.b_used, 1, r)
            error_violations += report.err_l2sq > error_bound(report.b_used, 1, r)
        self.assertGreaterEqual(successes, 190)
        self.assertEqual(survivor_violations, 0)
        self.assertEqual(error_violations, 0)

    def test_theoretical_sample_count_run(self):
        cfg = LearnerConfig(n=4, d=1, eps=0.3, delta=0.2, bh_bound=1.0)
        successes = 0
        for seed in range(200):
            polynomial = unit_norm_instance(4, 1, seed=1000 + seed)
            successes += learn(ExactOracle(polynomial), cfg, seed=seed).err_l2sq <= 0.3
        self.assertGreaterEqual(successes, 160)

    def test_empirical_coefficients_are_unbiased(self):
        polynomial = unit_norm_instance(1, 1, seed=7)
        f_a = lift(polynomial)
        cfg = LearnerConfig(n=1, d=1, eps=0.1, delta=0.1, n_override=50, b_override=1.0)
        estimates = np.array(
            [[learn(ExactOracle(polynomial), cfg, seed=seed).alpha[s] for s in candidate_sets(1, 1)] for seed in range(500)]
        )
        truth = np.array([f_a.coefficient(s) for s in candidate_sets(1, 1)])
        spread = estimates.std(axis=0) / math.sqrt(500)
        self.assertTrue(np.all(np.abs(estimates.mean(axis=0) - truth) <= 4 * spread + 1e-15))

    def test_chernoff_envelope(self):
        polynomial = unit_norm_instance(2, 1, seed=3)
        f_a = lift(polynomial)
        subset = candidate_sets(2, 1)[1]
        n_samples, b, trials = 1000, 0.1, 500
        cfg = LearnerConfig(n=2, d=1, eps=0.1, delta=0.1, n_override=n_samples, b_override=b)
        misses = sum(
            abs(learn(ExactOracle(polynomial), cfg, seed=seed).alpha[subset] - f_a.coefficient(subset)) > b
            for seed in range(trials)
        )
        envelope = 2 * math.exp(-n_samples * b ** 2 / 2)
        slack = 3 * math.sqrt(envelope * (1 - envelope) / trials)
        self.assertLessEqual(misses / trials, envelope + slack)
