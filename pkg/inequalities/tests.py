import math

import numpy as np
from django.test import SimpleTestCase

from cube.boolean import BooleanPolynomial
from cube.lift import diagonal_restriction, embed_diagonal, lift
from pauli.conf import bh_bound
from pauli.exceptions import CapacityError, InputError
from pauli.polynomial import PauliIndex, PauliPolynomial

from .bohnenblust import (
    bh_exponent,
    bh_lhs_boolean,
    bh_lhs_quantum,
    bh_ratio_boolean,
    bh_ratio_quantum,
    littlewood_witness,
    multilinear_polynomial,
    multilinear_ratio,
    proof_chain,
    random_boolean_instance,
    random_instance,
    sup_norm_boolean,
)
from .bohr import (
    boolean_radius,
    class_radius_search,
    quantum_class_search,
    quantum_radius,
    radius_inequality_check,
    reference_radius,
    solve_radii,
)
from .services import EXHAUSTIVE, SAMPLED, NormService


def pauli_sum(*labels, scale=1.0):
    return PauliPolynomial.from_labels({label: scale for label in labels})


class BhFunctionalTests(SimpleTestCase):
    def test_exponent(self):
        self.assertEqual(bh_exponent(1), 1.0)
        self.assertAlmostEqual(bh_exponent(2), 4 / 3)
        with self.assertRaises(InputError):
            bh_exponent(0)

    def test_quantum_lhs_examples(self):
        self.assertAlmostEqual(bh_lhs_quantum(pauli_sum('X'), 1), 1.0)
        self.assertAlmostEqual(bh_lhs_quantum(pauli_sum('X', 'Y', 'Z'), 1), 3.0)
        four = pauli_sum('XX', 'XZ', 'ZX', 'ZZ')
        self.assertAlmostEqual(bh_lhs_quantum(four, 2), 4 ** 0.75, places=12)

    def test_degree_above_d_is_rejected(self):
        with self.assertRaises(InputError):
            bh_lhs_quantum(pauli_sum('XX'), 1)
        with self.assertRaises(InputError):
            bh_lhs_boolean(BooleanPolynomial(2, {(0, 1): 1.0}), 1)

    def test_boolean_lhs_examples(self):
        self.assertAlmostEqual(bh_lhs_boolean(BooleanPolynomial.character(1, [0]), 1), 1.0)
        self.assertAlmostEqual(bh_lhs_boolean(littlewood_witness(), 2), 4 ** 0.75, places=12)
        self.assertEqual(bh_lhs_boolean(BooleanPolynomial(3), 1), 0.0)

    def test_sup_norm_examples(self):
        self.assertAlmostEqual(sup_norm_boolean(BooleanPolynomial.character(1, [0])).value, 1.0)
        self.assertAlmostEqual(sup_norm_boolean(littlewood_witness()).value, 2.0)
        constant = sup_norm_boolean(BooleanPolynomial(5, {(): -2.5}))
        self.assertAlmostEqual(constant.value, 2.5)
        self.assertTrue(constant.exhaustive)

    def test_sampled_sup_norm_is_a_flagged_lower_bound(self):
        f = random_boolean_instance(8, 2, seed=3)
        exact = NormService().get_sup_norm(f, exhaustive_limit=24)
        sampled = NormService(sample_seed=1).get_sup_norm(f, exhaustive_limit=4)
        self.assertEqual(exact.mode, EXHAUSTIVE)
        self.assertEqual(sampled.mode, SAMPLED)
        self.assertLessEqual(sampled.value, exact.value + 1e-12)

    def test_ratio_witnesses(self):
        self.assertAlmostEqual(bh_ratio_quantum(pauli_sum('X'), 1).ratio, 1.0)
        report = bh_ratio_quantum(pauli_sum('X', 'Y', 'Z'), 1)
        self.assertAlmostEqual(report.norm, math.sqrt(3), delta=1e-9)
        self.assertAlmostEqual(report.ratio, math.sqrt(3), delta=1e-9)
        boolean = bh_ratio_boolean(littlewood_witness(), 2)
        self.assertAlmostEqual(boolean.ratio, math.sqrt(2), delta=1e-9)
        self.assertFalse(boolean.ratio_is_upper_bound)

    def test_zero_polynomial_ratio_is_zero(self):
        report = bh_ratio_quantum(PauliPolynomial.zero(2), 1)
        self.assertEqual((report.lhs, report.norm, report.ratio), (0.0, 0.0, 0.0))

    def test_multilinear_ratio(self):
        unit = np.zeros((3, 1))
        unit[0, 0] = 1.0
        self.assertAlmostEqual(multilinear_ratio(unit, 1).ratio, 1.0)

        a = np.zeros((3, 3, 2, 2))
        a[2, 2] = [[1.0, 1.0], [1.0, -1.0]]
        polynomial = multilinear_polynomial(a, 2)
        self.assertEqual(polynomial.n, 4)
        self.assertTrue(all(index.weight == 2 for index in polynomial))
        self.assertLessEqual(multilinear_ratio(a, 2).ratio, bh_bound(2))

        zero = multilinear_ratio(np.zeros((3, 3, 2, 2)), 2)
        self.assertEqual(zero.ratio, 0.0)

    def test_multilinear_shape_is_checked(self):
        with self.assertRaises(InputError):
            multilinear_polynomial(np.zeros((2, 3)), 1)

    def test_random_instance(self):
        self.assertEqual(random_instance(3, 2, seed=11), random_instance(3, 2, seed=11))
        self.assertNotEqual(random_instance(3, 2, seed=11), random_instance(3, 2, seed=12))
        self.assertEqual(len(random_instance(2, 1, seed=0)), 7)
        full = random_instance(3, 3, homogeneous=True, seed=5, distribution='gaussian')
        self.assertTrue(all(index.weight == 3 for index in full))
        self.assertTrue(random_instance(2, 2, seed=4, hermitian=False).degree() <= 2)
        with self.assertRaises(InputError):
            random_instance(2, 1, distribution='cauchy')


class BhInvariantTests(SimpleTestCase):
    def test_observed_ratios_stay_below_the_quantum_bound(self):
        for n in (1, 2, 3):
            for d in (1, 2):
                if d > n:
                    continue
                worst = max(bh_ratio_quantum(random_instance(n, d, seed=seed), d).ratio for seed in range(1000))
                self.assertLessEqual(worst, 3 ** d * bh_bound(d), msg=f'n={n} d={d}')

    def test_commutative_embedding_agrees(self):
        for seed in range(50):
            f = random_boolean_instance(3, 2, seed=seed, distribution='gaussian')
            quantum = bh_ratio_quantum(embed_diagonal(f), 2)
            boolean = bh_ratio_boolean(diagonal_restriction(embed_diagonal(f)), 2)
            self.assertAlmostEqual(quantum.norm, boolean.norm, delta=1e-10)
            self.assertAlmostEqual(quantum.ratio, boolean.ratio, delta=1e-10)

    def test_lift_chain(self):
        for seed in range(100):
            polynomial = random_instance(2, 2, seed=seed, distribution='gaussian')
            quantum = bh_lhs_quantum(polynomial, 2)
            lifted = bh_lhs_boolean(lift(polynomial), 2)
            self.assertLessEqual(lifted, quantum + 1e-12)
            self.assertLessEqual(quantum, 9 * lifted + 1e-12)

    def test_scaling_leaves_ratio_invariant(self):
        polynomial = random_instance(2, 2, seed=8)
        base = bh_ratio_quantum(polynomial, 2)
        scaled = bh_ratio_quantum(polynomial * 2.5, 2)
        self.assertAlmostEqual(scaled.lhs, 2.5 * base.lhs, delta=1e-12)
        self.assertAlmostEqual(scaled.norm, 2.5 * base.norm, delta=1e-12)
        self.assertAlmostEqual(scaled.ratio, base.ratio, delta=1e-12)

    def test_proof_chain_links_hold(self):
        for seed in range(100):
            chain = proof_chain(random_instance(2, 2, seed=seed), 2, bh_bound(2))
            self.assertTrue(chain.holds, msg=f'seed={seed}')


class BohrRadiusTests(SimpleTestCase):
    def test_boolean_radius_examples(self):
        self.assertAlmostEqual(boolean_radius(BooleanPolynomial.character(1, [0])).value, 1.0, places=12)
        result = boolean_radius(BooleanPolynomial(1, {(): 1.0, (0,): 1.0}))
        self.assertAlmostEqual(result.value, reference_radius('all', 1), places=12)
        self.assertTrue(boolean_radius(BooleanPolynomial(2, {(): 3.0})).degenerate)
        with self.assertRaises(InputError):
            boolean_radius(BooleanPolynomial(2))

    def test_quantum_radius_examples(self):
        self.assertAlmostEqual(quantum_radius(pauli_sum('X')).value, 1.0, places=12)
        tilted = pauli_sum('X', 'Y', 'Z', scale=1 / math.sqrt(3))
        self.assertAlmostEqual(quantum_radius(tilted).value, 1 / math.sqrt(3), delta=1e-10)
        with self.assertRaises(InputError):
            quantum_radius(PauliPolynomial.zero(1))

    def test_residuals_and_lower_certificate(self):
        for seed in range(200):
            m = 1 + seed % 5
            f = random_boolean_instance(m, m, seed=seed, distribution='gaussian')
            result = boolean_radius(f)
            if result.degenerate:
                continue
            self.assertLessEqual(result.residual, 1e-10 * max(1.0, result.norm_used))
            self.assertGreaterEqual(result.value, 2 ** (1 / m) - 1 - 1e-9)

    def test_embedded_radius_equals_boolean_radius(self):
        for seed in range(500):
            f = random_boolean_instance(3, 3, seed=seed, distribution='gaussian')
            classical = boolean_radius(f)
            quantum = quantum_radius(embed_diagonal(f))
            if classical.degenerate:
                self.assertTrue(quantum.degenerate)
                continue
            self.assertAlmostEqual(classical.value, quantum.value, delta=1e-10)

    def test_radius_inequality_examples(self):
        check = radius_inequality_check(pauli_sum('X'))
        self.assertAlmostEqual(check.lifted.norm_used, 1 / 3)
        self.assertAlmostEqual(check.lifted.value, 1.0, places=12)
        self.assertAlmostEqual(check.quantum.value, 1.0, places=12)
        self.assertTrue(check.passed)

        identity = radius_inequality_check(PauliPolynomial(1, {PauliIndex.identity(1): 1.0}))
        self.assertTrue(identity.skipped)

    def test_radius_inequality_over_random_instances(self):
        violations = []
        for seed in range(1000):
            n = 1 + seed % 2
            check = radius_inequality_check(random_instance(n, n, seed=seed, distribution='gaussian'))
            if check.passed is False:
                violations.append(seed)
        self.assertEqual(violations, [])

    def test_solve_radii_is_vectorised(self):
        weights = np.array([[0.0, 1.0], [1.0, 1.0], [2.0, 0.0]])
        radii, residuals = solve_radii(weights, np.array([1.0, 2.0, 2.0]))
        np.testing.assert_allclose(radii[:2], [1.0, 1.0], atol=1e-12)
        self.assertTrue(math.isinf(radii[2]))
        self.assertEqual(residuals[2], 0.0)


class ClassSearchTests(SimpleTestCase):
    def test_all_functions_one_bit(self):
        result = class_radius_search('all', 1, ensemble=20, seed=0)
        self.assertAlmostEqual(result.empirical_min, 1.0, places=12)
        self.assertEqual(result.reference_value, 1.0)

    def test_all_functions_two_bits(self):
        result = class_radius_search('all', 2, ensemble=200, seed=0)
        self.assertGreaterEqual(result.empirical_min, math.sqrt(2) - 1 - 1e-9)
        self.assertLessEqual(result.empirical_min, 0.4642)

    def test_single_monomial_of_full_degree(self):
        result = class_radius_search('eq_d', 3, d=3, ensemble=10, seed=2)
        self.assertAlmostEqual(result.empirical_min, 1.0, places=12)

    def test_search_is_deterministic(self):
        first = class_radius_search('le_d', 5, d=2, ensemble=40, seed=9)
        second = class_radius_search('le_d', 5, d=2, ensemble=40, seed=9)
        self.assertEqual(first, second)
        self.assertGreater(first.empirical_min, 0.0)

    def test_invalid_classes_and_sizes(self):
        with self.assertRaises(InputError):
            class_radius_search('odd', 2)
        with self.assertRaises(CapacityError):
            class_radius_search('all', 13)
        with self.assertRaises(InputError):
            class_radius_search('eq_d', 2, d=3)

    def test_quantum_minimum_does_not_exceed_classical(self):
        for cls in ('all', 'hom', 'le_d'):
            result = quantum_class_search(cls, 3, d=2, ensemble=20, seed=1)
            self.assertLessEqual(result.quantum_min, result.classical.empirical_min + 1e-10)

    def test_reference_curves(self):
        self.assertAlmostEqual(reference_radius('all', 2), math.sqrt(2) - 1)
        self.assertAlmostEqual(reference_radius('hom', 4), math.sqrt(math.log(4) / 4))
        self.assertAlmostEqual(reference_radius('le_d', 4, d=1), 1.0)
        self.assertGreater(reference_radius('eq_d', 4, d=2), 0.0)
