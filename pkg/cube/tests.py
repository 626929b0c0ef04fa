import numpy as np
from django.test import SimpleTestCase

from inequalities.bohnenblust import sup_norm_boolean
from pauli.dense import operator_norm, pauli_matrix, to_dense
from pauli.exceptions import CapacityError, InputError
from pauli.polynomial import PauliIndex, PauliPolynomial
from pauli.utils import iter_pauli_support

from .boolean import (
    BooleanPolynomial,
    SignVector,
    enumerate_sign_vectors,
    eval_boolean,
    eval_boolean_batch,
    format_subset,
    random_points,
)
from .lift import (
    diagonal_restriction,
    eigenvector,
    eigenvector_expectations,
    embed_diagonal,
    expectation,
    expectation_batch,
    index_p,
    index_q,
    lift,
    product_state,
    unlift,
    verify_eigenvector_table,
)


def random_observable(n, d, seed):
    rng = np.random.default_rng(seed)
    support = list(iter_pauli_support(n, d))
    values = rng.normal(size=len(support)) + 1j * rng.normal(size=len(support))
    return PauliPolynomial(n, dict(zip(support, values)))


def dense_expectation(polynomial, eps):
    return np.trace(to_dense(polynomial) @ product_state(eps))


class EigenvectorTests(SimpleTestCase):
    def test_table_is_verified(self):
        self.assertLessEqual(verify_eigenvector_table(), 1e-14)

    def test_expectation_entries(self):
        entries = eigenvector_expectations()
        self.assertEqual(len(entries), 18)
        for entry in entries:
            expected = entry.eps if entry.j == entry.k else 0
            self.assertAlmostEqual(entry.value, expected, delta=1e-14, msg=entry)

    def test_eigen_equations(self):
        for kappa in (1, 2, 3):
            for eps in (1, -1):
                vector = eigenvector(kappa, eps)
                np.testing.assert_allclose(pauli_matrix(kappa) @ vector, eps * vector, atol=1e-14)
        with self.assertRaises(InputError):
            eigenvector(0, 1)


class IndexMapTests(SimpleTestCase):
    def test_q_examples(self):
        # 0-based members: {5} in 1-based notation is {4}
        self.assertEqual(index_q(PauliIndex.from_word((0, 2, 0))), frozenset({4}))
        self.assertEqual(format_subset(index_q(PauliIndex.from_word((0, 2, 0)))), '{5}')
        self.assertEqual(index_q(PauliIndex.from_word((3,))), frozenset({2}))
        self.assertEqual(index_q(PauliIndex.identity(3)), frozenset())

    def test_p_examples(self):
        self.assertEqual(index_p({4}, 3), PauliIndex.from_word((0, 2, 0)))
        self.assertIsNone(index_p({0, 1}, 1))
        self.assertEqual(index_p(set(), 2), PauliIndex.identity(2))
        self.assertIsNone(index_p({7}, 2))

    def test_p_inverts_q(self):
        for n in range(1, 5):
            images = set()
            for s in iter_pauli_support(n, min(n, 3)):
                subset = index_q(s)
                self.assertEqual(len(subset), s.weight)
                self.assertEqual(index_p(subset, n), s)
                images.add(subset)
            self.assertEqual(len(images), len(list(iter_pauli_support(n, min(n, 3)))))


class LiftTests(SimpleTestCase):
    def test_lift_examples(self):
        self.assertEqual(lift(PauliPolynomial.from_labels({'Y': 1.0})).coefficient({1}), 1 / 3)
        self.assertEqual(lift(PauliPolynomial.from_labels({'II': 2.5})).coefficient(()), 2.5)
        f = lift(PauliPolynomial.from_labels({'XZ': 1.0}))
        self.assertEqual(f.m, 6)
        self.assertAlmostEqual(f.coefficient({0, 5}), 1 / 9, places=15)

    def test_lift_preserves_degree_and_support(self):
        polynomial = random_observable(3, 2, seed=1)
        f = lift(polynomial)
        self.assertEqual(f.degree(), polynomial.degree())
        self.assertTrue(all(index_p(subset, 3) is not None for subset, _ in f.items()))

    def test_unlift_examples(self):
        self.assertEqual(unlift(BooleanPolynomial(3, {(1,): 1 / 3})), PauliPolynomial.from_labels({'Y': 1.0}))
        self.assertEqual(unlift(BooleanPolynomial(6)), PauliPolynomial.zero(2))

    def test_unlift_round_trip(self):
        for seed in range(10):
            polynomial = random_observable(3, 2, seed)
            recovered = unlift(lift(polynomial))
            for index in polynomial:
                self.assertAlmostEqual(recovered.coefficient(index), polynomial.coefficient(index), delta=1e-12)
            self.assertEqual(set(recovered.terms), set(polynomial.terms))

    def test_unlift_rejects_collisions(self):
        with self.assertRaisesRegex(InputError, r'\{1,2\}'):
            unlift(BooleanPolynomial(3, {(0, 1): 1.0}))
        with self.assertRaises(InputError):
            unlift(BooleanPolynomial(4))


class BooleanPolynomialTests(SimpleTestCase):
    def test_eval_examples(self):
        chi = BooleanPolynomial.character(4, {0, 1})
        self.assertEqual(eval_boolean(chi, [-1, -1, -1, -1]), 1)
        constant = BooleanPolynomial(3, {(): 2 - 1j})
        for point in enumerate_sign_vectors(3):
            self.assertEqual(eval_boolean(constant, point), 2 - 1j)
        with self.assertRaises(InputError):
            eval_boolean(chi, [1, 1])

    def test_eval_matches_term_by_term_sum(self):
        rng = np.random.default_rng(3)
        terms = {tuple(np.flatnonzero(rng.random(6) < 0.4)): rng.normal() for _ in range(12)}
        f = BooleanPolynomial(6, terms)
        points = random_points(rng, 50, 6)
        batch = eval_boolean_batch(f, points)
        for row, value in zip(points, batch):
            expected = sum(c * np.prod([row[j] for j in s]) for s, c in f.items())
            self.assertAlmostEqual(eval_boolean(f, row), expected, delta=1e-12)
            self.assertAlmostEqual(value, expected, delta=1e-12)

    def test_zero_coefficients_are_dropped(self):
        f = BooleanPolynomial(3, {(0,): 1.0, (1,): 0.0}) + BooleanPolynomial(3, {(0,): -1.0})
        self.assertFalse(f)
        with self.assertRaises(InputError):
            BooleanPolynomial(2, {(2,): 1.0})

    def test_degree_weights(self):
        f = BooleanPolynomial(3, {(): 1.0, (0,): -0.5, (2,): 0.25j, (0, 1): 2.0})
        np.testing.assert_allclose(f.degree_weights(), [1.0, 0.75, 2.0, 0.0])


class SignVectorTests(SimpleTestCase):
    def test_string_form(self):
        eps = SignVector.from_string('++-|-++|+--')
        self.assertEqual(eps.n, 3)
        self.assertEqual(eps.component(1, 2), -1)
        self.assertEqual(eps.component(2, 0), -1)
        self.assertEqual(eps.component(3, 0), 1)
        self.assertEqual(str(eps), '++-|-++|+--')
        self.assertEqual(SignVector.from_string('+−+|−++|+−−'), SignVector.from_string('+-+|-++|+--'))

    def test_invalid_vectors(self):
        for text in ('++|+', '+a|++|++', '++-'):
            with self.assertRaises(InputError, msg=text):
                SignVector.from_string(text)
        with self.assertRaises(InputError):
            SignVector((1, 0, 1))

    def test_enumeration_order(self):
        np.testing.assert_array_equal(enumerate_sign_vectors(2), [[1, 1], [-1, 1], [1, -1], [-1, -1]])
        self.assertEqual(len({tuple(row) for row in enumerate_sign_vectors(6)}), 64)
        with self.assertRaises(CapacityError):
            enumerate_sign_vectors(40)


class ProductStateTests(SimpleTestCase):
    def test_single_qubit_states(self):
        for point in enumerate_sign_vectors(3):
            rho = product_state(SignVector.from_array(point))
            self.assertAlmostEqual(np.trace(rho), 1.0, delta=1e-12)
            eigenvalues = np.linalg.eigvalsh(rho)
            self.assertTrue(np.all(eigenvalues >= -1e-12) and np.all(eigenvalues <= 1 + 1e-12))

    def test_single_qubit_expectations(self):
        rho = product_state(SignVector((1, 1, 1)))
        self.assertAlmostEqual(np.trace(pauli_matrix(1) @ rho), 1 / 3, delta=1e-15)
        rho = product_state(SignVector((1, 1, -1)))
        self.assertAlmostEqual(np.trace(pauli_matrix(3) @ rho), -1 / 3, delta=1e-15)

    def test_trace_one_for_several_qubits(self):
        rng = np.random.default_rng(8)
        for point in random_points(rng, 10, 12):
            rho = product_state(SignVector.from_array(point))
            self.assertAlmostEqual(np.trace(rho), 1.0, delta=1e-12)


class ExpectationTests(SimpleTestCase):
    def test_examples(self):
        identity = PauliPolynomial.from_labels({'II': 1.0})
        for point in enumerate_sign_vectors(6):
            self.assertEqual(expectation(identity, SignVector.from_array(point)), 1)
        sigma_z = PauliPolynomial.from_labels({'Z': 1.0})
        self.assertAlmostEqual(expectation(sigma_z, SignVector((1, 1, -1))), -1 / 3, delta=1e-15)
        with self.assertRaises(InputError):
            expectation(sigma_z, SignVector((1, 1, 1, 1, 1, 1)))

    def test_matches_dense_trace(self):
        grids = {n: enumerate_sign_vectors(3 * n) for n in (1, 2)}
        states = {n: np.array([product_state(SignVector.from_array(point)) for point in grid]) for n, grid in grids.items()}
        for seed in range(500):
            n = 1 + seed % 2
            polynomial = random_observable(n, min(n, 1 + (seed // 2) % 2), seed)
            traces = np.einsum('ij,kji->k', to_dense(polynomial), states[n])
            values = np.array([expectation(polynomial, SignVector.from_array(point)) for point in grids[n]])
            np.testing.assert_allclose(values, traces, rtol=0, atol=1e-12)

    def test_bridge_identity_exhaustive(self):
        for n in (1, 2):
            points = enumerate_sign_vectors(3 * n)
            for seed in range(250):
                polynomial = random_observable(n, n, seed)
                np.testing.assert_allclose(
                    expectation_batch(polynomial, points),
                    eval_boolean_batch(lift(polynomial), points),
                    rtol=0,
                    atol=1e-12,
                )

    def test_bridge_identity_sampled(self):
        rng = np.random.default_rng(21)
        for n in (3, 5, 8):
            polynomial = random_observable(n, 2, seed=n)
            points = random_points(rng, 10_000, 3 * n)
            np.testing.assert_allclose(
                expectation_batch(polynomial, points),
                eval_boolean_batch(lift(polynomial), points),
                rtol=0,
                atol=1e-12,
            )
            for point in points[:20]:
                eps = SignVector.from_array(point)
                self.assertAlmostEqual(expectation(polynomial, eps), eval_boolean(lift(polynomial), eps), delta=1e-12)

    def test_norm_contraction(self):
        for seed in range(500):
            n = 1 + seed % 2
            polynomial = random_observable(n, n, 500 + seed)
            sup = sup_norm_boolean(lift(polynomial))
            self.assertTrue(sup.exhaustive)
            self.assertLessEqual(sup.value, operator_norm(polynomial) + 1e-10)
        rng = np.random.default_rng(2)
        polynomial = random_observable(4, 2, seed=9)
        largest = np.max(np.abs(expectation_batch(polynomial, random_points(rng, 2000, 12))))
        self.assertLessEqual(largest, operator_norm(polynomial) + 1e-10)


class DiagonalEmbeddingTests(SimpleTestCase):
    def test_embed_and_restrict(self):
        f = BooleanPolynomial(3, {(0, 2): 1.5, (): -1.0})
        embedded = embed_diagonal(f)
        self.assertEqual(embedded, PauliPolynomial.from_labels({'ZIZ': 1.5, 'III': -1.0}))
        self.assertEqual(diagonal_restriction(embedded), f)
        with self.assertRaises(InputError):
            diagonal_restriction(PauliPolynomial.from_labels({'XI': 1.0}))

    def test_embedded_matrix_is_diagonal_with_function_values(self):
        f = BooleanPolynomial(2, {(0,): 1.0, (0, 1): -2.0})
        dense = to_dense(embed_diagonal(f))
        self.assertTrue(np.allclose(dense, np.diag(np.diag(dense))))
        # basis state |b> with b_j = 1 reads x_j = -1; site 0 is the top bit
        for b in range(4):
            x = [1 - 2 * ((b >> 1) & 1), 1 - 2 * (b & 1)]
            self.assertAlmostEqual(dense[b, b], eval_boolean(f, x), delta=1e-15)
