import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase, override_settings

from .conf import DEFAULTS, bh_bound, get_setting
from .dense import anticommutes, fourier_coefficients, operator_norm, pauli_matrix, schatten_norm, to_dense
from .exceptions import CapacityError, InputError, OracleError, QCubeError
from .kernels import cube_abs_max, subset_products, walsh_hadamard
from .polynomial import PauliIndex, PauliPolynomial, add, degree, l2_distance_sq, scale, truncate
from .textio import parse_polynomial, read_polynomial, serialize_polynomial, write_polynomial
from .utils import iter_pauli_support, make_cache_key, spawn_generator, support_size


def random_polynomial(n, seed, hermitian=True, density=1.0):
    rng = np.random.default_rng(seed)
    terms = {}
    for index in iter_pauli_support(n, n):
        if rng.random() > density:
            continue
        value = rng.normal()
        if not hermitian:
            value += 1j * rng.normal()
        terms[index] = value
    return PauliPolynomial(n, terms)


class PauliIndexTests(SimpleTestCase):
    def test_packing_and_labels(self):
        index = PauliIndex.from_word((1, 0, 3))
        self.assertEqual(index.label, 'XIZ')
        self.assertEqual(index.word, (1, 0, 3))
        self.assertEqual(index.weight, 2)
        self.assertEqual(index.support(), ((0, 1), (2, 3)))
        self.assertEqual(PauliIndex.from_label('xiz'), index)

    def test_order_is_lexicographic(self):
        labels = ['ZI', 'IX', 'XY', 'II', 'YZ']
        ordered = sorted(PauliIndex.from_label(label) for label in labels)
        self.assertEqual([index.label for index in ordered], sorted(labels, key=lambda s: ['IXYZ'.index(c) for c in s]))

    def test_invalid_symbols(self):
        with self.assertRaises(InputError):
            PauliIndex.from_word((0, 4))
        with self.assertRaises(InputError):
            PauliIndex.from_label('XQ')
        with self.assertRaises(InputError):
            PauliIndex(1, 4)


class PauliPolynomialTests(SimpleTestCase):
    def test_exact_zeros_are_dropped(self):
        polynomial = PauliPolynomial.from_labels({'X': 1.0, 'Z': 0.0})
        self.assertEqual(len(polynomial), 1)
        self.assertFalse(PauliPolynomial.zero(3))
        tiny = PauliPolynomial.from_labels({'Y': 1e-300})
        self.assertEqual(len(tiny), 1)

    def test_degree_and_truncate(self):
        polynomial = PauliPolynomial.from_labels({'XI': 1.0, 'YZ': 1.0})
        self.assertEqual(degree(polynomial), 2)
        self.assertEqual(truncate(polynomial, 1), PauliPolynomial.from_labels({'XI': 1.0}))
        self.assertEqual(truncate(polynomial, 0), PauliPolynomial.zero(2))
        self.assertEqual(degree(PauliPolynomial.zero(4)), 0)

    def test_hermitian_detection(self):
        self.assertTrue(PauliPolynomial.from_labels({'X': 2.0}).is_hermitian())
        self.assertFalse(PauliPolynomial.from_labels({'X': 1j}).is_hermitian())

    def test_adjoint_and_hermitian_part(self):
        p = PauliPolynomial.from_labels({'X': 1 + 2j, 'Z': -0.5j})
        self.assertEqual(p.adjoint(), PauliPolynomial.from_labels({'X': 1 - 2j, 'Z': 0.5j}))
        self.assertEqual(p.hermitian_part(), PauliPolynomial.from_labels({'X': 1.0}))
        for seed in range(10):
            polynomial = random_polynomial(2, seed, hermitian=False)
            dense = to_dense(polynomial)
            np.testing.assert_allclose(to_dense(polynomial.adjoint()), dense.conj().T, rtol=0, atol=1e-12)
            np.testing.assert_allclose(to_dense(polynomial.hermitian_part()), (dense + dense.conj().T) / 2, rtol=0, atol=1e-12)
            self.assertTrue(polynomial.hermitian_part().is_hermitian())
            self.assertEqual(polynomial.adjoint().adjoint(), polynomial)

    def test_arithmetic(self):
        p = PauliPolynomial.from_labels({'X': 1.0})
        q = PauliPolynomial.from_labels({'X': -1.0, 'Z': 2.0})
        self.assertEqual(add(p, q), PauliPolynomial.from_labels({'Z': 2.0}))
        self.assertEqual(scale(q, 0.5), PauliPolynomial.from_labels({'X': -0.5, 'Z': 1.0}))
        self.assertEqual(p - p, PauliPolynomial.zero(1))

    def test_l2_distance_examples(self):
        sigma_x = PauliPolynomial.from_labels({'X': 1.0})
        self.assertEqual(l2_distance_sq(sigma_x, PauliPolynomial.zero(1)), 1.0)
        self.assertEqual(l2_distance_sq(sigma_x, sigma_x), 0.0)
        with self.assertRaises(InputError):
            l2_distance_sq(sigma_x, PauliPolynomial.zero(2))

    def test_l2_distance_matches_dense_schatten(self):
        for seed in range(20):
            p = random_polynomial(2, seed, hermitian=False)
            q = random_polynomial(2, seed + 100, hermitian=False, density=0.5)
            self.assertAlmostEqual(l2_distance_sq(p, q), schatten_norm(p - q, 2) ** 2, delta=1e-10)

    def test_mixed_widths_are_rejected(self):
        with self.assertRaises(InputError):
            PauliPolynomial.from_labels({'X': 1.0, 'XZ': 1.0})


class DenseOracleTests(SimpleTestCase):
    def test_pauli_matrices(self):
        np.testing.assert_array_equal(pauli_matrix(0), [[1, 0], [0, 1]])
        np.testing.assert_array_equal(pauli_matrix(2), [[0, -1j], [1j, 0]])
        np.testing.assert_array_equal(pauli_matrix(3), [[1, 0], [0, -1]])
        with self.assertRaises(InputError):
            pauli_matrix(4)

    def test_anticommutation(self):
        for j in (1, 2, 3):
            for k in (1, 2, 3):
                self.assertEqual(anticommutes(j, k), j != k, msg=(j, k))

    def test_to_dense_examples(self):
        np.testing.assert_array_equal(to_dense(PauliPolynomial.from_labels({'I': 1.0})), np.eye(2))
        np.testing.assert_array_equal(to_dense(PauliPolynomial.from_labels({'XX': 1.0})), np.fliplr(np.eye(4)))
        np.testing.assert_array_equal(to_dense(PauliPolynomial.from_labels({'X': 1.0, 'Z': 1.0})), [[1, 1], [1, -1]])

    def test_to_dense_matches_kronecker(self):
        polynomial = random_polynomial(3, 7, hermitian=False)
        expected = np.zeros((8, 8), dtype=complex)
        for index, value in polynomial.items():
            factor = np.ones((1, 1))
            for symbol in index.word:
                factor = np.kron(factor, pauli_matrix(symbol))
            expected += value * factor
        np.testing.assert_allclose(to_dense(polynomial), expected, atol=1e-12)

    def test_dense_limit(self):
        with self.assertRaises(CapacityError):
            to_dense(PauliPolynomial.zero(11))
        with self.assertRaises(CapacityError):
            operator_norm(PauliPolynomial.from_labels({'XX': 1.0}), dense_limit=1)
        with override_settings(QCUBE_DENSE_LIMIT=2):
            with self.assertRaises(CapacityError):
                to_dense(PauliPolynomial.zero(3))

    def test_fourier_examples(self):
        self.assertEqual(fourier_coefficients(np.eye(4)), PauliPolynomial.from_labels({'II': 1.0}))
        dense = np.kron(pauli_matrix(1), pauli_matrix(3))
        self.assertEqual(fourier_coefficients(dense), PauliPolynomial.from_labels({'XZ': 1.0}))
        with self.assertRaises(InputError):
            fourier_coefficients(np.eye(3))

    def test_random_hermitian_matrix_has_real_coefficients(self):
        rng = np.random.default_rng(1)
        raw = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        matrix = raw + raw.conj().T
        polynomial = fourier_coefficients(matrix)
        self.assertTrue(polynomial.is_hermitian(tol=1e-12))
        np.testing.assert_allclose(to_dense(polynomial), matrix, rtol=0, atol=1e-12)

    def test_round_trip(self):
        for n in (1, 2, 3):
            polynomial = random_polynomial(n, n, hermitian=False, density=0.6)
            recovered = fourier_coefficients(to_dense(polynomial))
            for index in set(polynomial.terms) | set(recovered.terms):
                self.assertAlmostEqual(recovered.coefficient(index), polynomial.coefficient(index), delta=1e-12)

    def test_hermiticity_matches_dense(self):
        for seed in range(10):
            hermitian = random_polynomial(2, seed)
            other = random_polynomial(2, seed, hermitian=False)
            self.assertTrue(np.allclose(to_dense(hermitian), to_dense(hermitian).conj().T, atol=1e-12))
            self.assertFalse(np.allclose(to_dense(other), to_dense(other).conj().T, atol=1e-12))

    def test_operator_norm_examples(self):
        self.assertAlmostEqual(operator_norm(PauliPolynomial.from_labels({'XY': 1.0})), 1.0, places=10)
        self.assertAlmostEqual(operator_norm(PauliPolynomial.from_labels({'X': 1.0, 'Z': 1.0})), np.sqrt(2), places=10)
        self.assertAlmostEqual(operator_norm(PauliPolynomial.from_labels({'X': 1, 'Y': 1, 'Z': 1})), np.sqrt(3), places=10)
        self.assertEqual(operator_norm(PauliPolynomial.zero(2)), 0.0)

    def test_operator_norm_of_non_hermitian(self):
        polynomial = random_polynomial(2, 3, hermitian=False)
        expected = np.linalg.norm(to_dense(polynomial), 2)
        self.assertAlmostEqual(operator_norm(polynomial) / expected, 1.0, delta=1e-10)

    def test_schatten_examples(self):
        identity = PauliPolynomial.from_labels({'II': 1.0})
        for p in (1, 2, 3.5, np.inf):
            self.assertAlmostEqual(schatten_norm(identity, p), 1.0, places=12)
        self.assertAlmostEqual(schatten_norm(PauliPolynomial.from_labels({'Z': 1.0}), 2), 1.0, places=12)
        self.assertAlmostEqual(schatten_norm(PauliPolynomial.from_labels({'X': 1, 'Z': 1}), 2), np.sqrt(2), places=12)
        with self.assertRaises(InputError):
            schatten_norm(identity, 0.5)

    def test_parseval(self):
        for n in (1, 2, 3, 4):
            for seed in range(5):
                polynomial = random_polynomial(n, 10 * n + seed, hermitian=bool(seed % 2), density=0.4)
                self.assertAlmostEqual(schatten_norm(polynomial, 2) ** 2, polynomial.l2_norm_sq(), delta=1e-10)


class TextFormatTests(SimpleTestCase):
    def test_parse_example(self):
        polynomial = parse_polynomial('# comment\nXZI 0.5 0.0\n\nIIY -1 2\n')
        self.assertEqual(polynomial.n, 3)
        self.assertEqual(polynomial.coefficient(PauliIndex.from_label('XZI')), 0.5)
        self.assertEqual(polynomial.coefficient(PauliIndex.from_label('IIY')), complex(-1, 2))

    def test_round_trip_is_bit_exact(self):
        polynomial = PauliPolynomial.from_labels({'XY': 0.1 + 0.2, 'ZZ': complex(1 / 3, -2e-17), 'II': 12345.678901234567})
        self.assertEqual(parse_polynomial(serialize_polynomial(polynomial)), polynomial)

    def test_zero_polynomial_keeps_width(self):
        self.assertEqual(parse_polynomial(serialize_polynomial(PauliPolynomial.zero(4))), PauliPolynomial.zero(4))
        with self.assertRaises(InputError):
            parse_polynomial('# nothing here\n')

    def test_header_cannot_override_width(self):
        text = serialize_polynomial(PauliPolynomial.zero(2), header='n = 7\ncopied from a run with n = 7')
        self.assertTrue(text.startswith('# n = 2\n'))
        self.assertEqual(parse_polynomial(text), PauliPolynomial.zero(2))
        polynomial = PauliPolynomial.from_labels({'XZ': 0.5})
        self.assertEqual(parse_polynomial(serialize_polynomial(polynomial, header='n = 3')), polynomial)

    def test_malformed_lines(self):
        for text in ('XZ 1\n', 'XZ a 0\n', 'X 1 0\nXX 1 0\n', 'XQ 1 0\n'):
            with self.assertRaises(InputError, msg=text):
                parse_polynomial(text)

    def test_files(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'a.txt'
            polynomial = random_polynomial(2, 5, hermitian=False)
            write_polynomial(polynomial, path, header='random')
            self.assertTrue(path.read_text().startswith('# n = 2\n# random\n'))
            self.assertEqual(read_polynomial(path), polynomial)
            with self.assertRaises(InputError):
                read_polynomial(Path(tmp) / 'missing.txt')


class KernelTests(SimpleTestCase):
    def test_walsh_hadamard_matches_definition(self):
        values = np.arange(8, dtype=float)
        expected = [sum((-1) ** bin(c & k).count('1') * values[c] for c in range(8)) for k in range(8)]
        np.testing.assert_allclose(walsh_hadamard(values), expected)
        with self.assertRaises(ValueError):
            walsh_hadamard(np.ones(3))

    def test_cube_abs_max_matches_brute_force(self):
        rng = np.random.default_rng(4)
        masks = np.array([0, 1, 6, 5, 15], dtype=np.uint64)
        coeffs = rng.normal(size=5) + 1j * rng.normal(size=5)
        best = 0.0
        for x in range(16):
            signs = [(-1) ** bin(x & int(mask)).count('1') for mask in masks]
            best = max(best, abs(np.dot(signs, coeffs)))
        self.assertAlmostEqual(cube_abs_max(masks, coeffs, 4), best, places=12)
        self.assertEqual(cube_abs_max(np.array([], dtype=np.uint64), np.array([]), 3), 0.0)

    def test_subset_products(self):
        points = np.array([[1, -1, -1], [-1, -1, 1]], dtype=np.int8)
        products = subset_products(points, [(), (0,), (1, 2), (0, 1, 2)])
        np.testing.assert_array_equal(products, [[1, 1, 1, 1], [1, -1, -1, 1]])


class SupportAndSeedTests(SimpleTestCase):
    def test_support_enumeration(self):
        for n in range(1, 5):
            for d in range(0, n + 1):
                indices = list(iter_pauli_support(n, d))
                self.assertEqual(len(indices), support_size(n, d))
                self.assertEqual(indices, sorted(indices))
        self.assertTrue(all(index.weight == 2 for index in iter_pauli_support(3, 2, homogeneous=True)))

    def test_generators_are_reproducible_per_stream(self):
        first = spawn_generator(11, 0).integers(0, 1 << 30, size=4)
        second = spawn_generator(11, 0).integers(0, 1 << 30, size=4)
        other = spawn_generator(11, 1).integers(0, 1 << 30, size=4)
        np.testing.assert_array_equal(first, second)
        self.assertFalse(np.array_equal(first, other))
        with self.assertRaises(ValueError):
            spawn_generator(-1)

    def test_cache_keys(self):
        self.assertEqual(make_cache_key('norm', 'x'), make_cache_key('norm', 'x'))
        self.assertNotEqual(make_cache_key('norm', 'x'), make_cache_key('norm', 'y'))


class SettingsAndErrorsTests(SimpleTestCase):
    def test_defaults(self):
        self.assertEqual(get_setting('QCUBE_DENSE_LIMIT'), DEFAULTS['QCUBE_DENSE_LIMIT'])
        self.assertEqual(bh_bound(1), 2.0)
        self.assertEqual(bh_bound(5), 32.0)

    @override_settings(QCUBE_BH_BOUNDS={1: 1.5})
    def test_overridden_bounds(self):
        self.assertEqual(bh_bound(1), 1.5)
        self.assertEqual(bh_bound(2), 4.0)

    def test_error_hierarchy(self):
        self.assertTrue(issubclass(InputError, ValueError))
        self.assertTrue(issubclass(CapacityError, QCubeError))
        self.assertEqual(OracleError('lost', completed=3).completed, 3)
