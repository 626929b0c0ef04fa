"""Dense-matrix oracle for Pauli polynomials at small qubit counts."""
from __future__ import annotations

import logging

import numpy as np
from scipy import linalg

from .conf import get_setting
from .exceptions import CapacityError, InputError
from .kernels import walsh_hadamard
from .polynomial import PauliIndex, PauliPolynomial


logger = logging.getLogger(__name__)


PAULI_MATRICES = (
    np.array([[1, 0], [0, 1]], dtype=np.complex128),
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)


def pauli_matrix(kappa: int) -> np.ndarray:
    if kappa not in (0, 1, 2, 3):
        raise InputError(f'Pauli symbol must be in {{0,1,2,3}}, got {kappa!r}')
    return PAULI_MATRICES[kappa].copy()


def anticommutes(j: int, k: int) -> bool:
    a, b = pauli_matrix(j), pauli_matrix(k)
    return bool(np.array_equal(a @ b + b @ a, np.zeros((2, 2))))


def _check_dense(n: int, dense_limit: int | None) -> None:
    limit = get_setting('QCUBE_DENSE_LIMIT') if dense_limit is None else dense_limit
    if n > limit:
        raise CapacityError(f'{n} qubits exceed the dense limit of {limit}')


def monomial_entries(index: PauliIndex) -> tuple[np.ndarray, np.ndarray]:
    """Column-wise action of sigma_s: sigma_s |c> = phase[c] |rows[c]>."""
    dim = 1 << index.n
    x_mask, z_mask = index.masks()
    columns = np.arange(dim, dtype=np.uint64)
    rows = columns ^ np.uint64(x_mask)
    y_count = bin(x_mask & z_mask).count('1')
    signs = 1 - 2 * (np.bitwise_count(columns & np.uint64(z_mask)) & 1).astype(np.int64)
    phase = (1j ** y_count) * signs
    return rows.astype(np.intp), phase.astype(np.complex128)


def to_dense(polynomial: PauliPolynomial, dense_limit: int | None = None) -> np.ndarray:
    """sum_s A_s (sigma_{s_1} (x) ... (x) sigma_{s_n}) as a 2^n x 2^n array."""
    _check_dense(polynomial.n, dense_limit)
    dim = 1 << polynomial.n
    matrix = np.zeros((dim, dim), dtype=np.complex128)
    columns = np.arange(dim, dtype=np.intp)
    for index, value in polynomial.items():
        rows, phase = monomial_entries(index)
        matrix[rows, columns] += value * phase
    return matrix


def fourier_coefficients(matrix: np.ndarray) -> PauliPolynomial:
    """A_s = 2^{-n} tr(sigma_s M) for every s, via one Walsh-Hadamard pass per X-mask."""
    matrix = np.asarray(matrix, dtype=np.complex128)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InputError(f'expected a square matrix, got shape {matrix.shape}')
    dim = matrix.shape[0]
    if dim < 1 or dim & (dim - 1):
        raise InputError(f'matrix dimension {dim} is not a power of two')
    n = dim.bit_length() - 1
    columns = np.arange(dim, dtype=np.intp)
    terms: dict[PauliIndex, complex] = {}
    for x_mask in range(dim):
        # tr(sigma_s M) = sum_c phase_s(c) M[c, c ^ x]
        band = matrix[columns, columns ^ x_mask]
        transformed = walsh_hadamard(band) / dim
        for z_mask in np.flatnonzero(transformed):
            z_mask = int(z_mask)
            y_count = bin(x_mask & z_mask).count('1')
            value = transformed[z_mask] * (1j ** y_count)
            terms[_index_from_masks(n, x_mask, z_mask)] = complex(value)
    return PauliPolynomial(n, terms)


def _index_from_masks(n: int, x_mask: int, z_mask: int) -> PauliIndex:
    word = []
    for site in range(n):
        bit = 1 << (n - 1 - site)
        has_x, has_z = bool(x_mask & bit), bool(z_mask & bit)
        word.append({(False, False): 0, (True, False): 1, (True, True): 2, (False, True): 3}[has_x, has_z])
    return PauliIndex.from_word(word)


def singular_values(polynomial: PauliPolynomial, dense_limit: int | None = None) -> np.ndarray:
    matrix = to_dense(polynomial, dense_limit)
    if polynomial.is_hermitian():
        return np.abs(linalg.eigvalsh(matrix))
    return linalg.svdvals(matrix)


def operator_norm(polynomial: PauliPolynomial, dense_limit: int | None = None) -> float:
    """Largest singular value; Hermitian inputs use the Hermitian eigensolver."""
    if not polynomial:
        _check_dense(polynomial.n, dense_limit)
        return 0.0
    matrix = to_dense(polynomial, dense_limit)
    if polynomial.is_hermitian():
        return float(np.max(np.abs(linalg.eigvalsh(matrix))))
    dim = matrix.shape[0]
    dilation = np.zeros((2 * dim, 2 * dim), dtype=np.complex128)
    dilation[:dim, dim:] = matrix
    dilation[dim:, :dim] = matrix.conj().T
    return float(np.max(linalg.eigvalsh(dilation)))


def schatten_norm(polynomial: PauliPolynomial, p: float, dense_limit: int | None = None) -> float:
    """(2^{-n} tr |M|^p)^{1/p}; the 1/dim normalisation makes Pauli monomials orthonormal."""
    if not p >= 1:
        raise InputError(f'Schatten exponent must be >= 1, got {p}')
    values = singular_values(polynomial, dense_limit)
    if np.isinf(p):
        return float(np.max(values, initial=0.0))
    return float(np.mean(values ** p) ** (1.0 / p))


__all__ = [
    'anticommutes',
    'fourier_coefficients',
    'operator_norm',
    'pauli_matrix',
    'schatten_norm',
    'to_dense',
]
