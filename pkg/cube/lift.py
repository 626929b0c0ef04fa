"""The bridge between qubit observables and Boolean polynomials on {-1,1}^{3n}.

For a product state rho(eps) built from Pauli eigenvectors selected by ``eps``,
tr[A rho(eps)] equals f_A(eps), where f_A carries the coefficient 3^{-|s|} A_s
on the subset q(s).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import reduce
from typing import FrozenSet, Iterable

import numpy as np

from pauli.conf import get_setting
from pauli.dense import pauli_matrix
from pauli.exceptions import CapacityError, InputError
from pauli.polynomial import PauliIndex, PauliPolynomial

from .boolean import BooleanPolynomial, SignVector, as_points, format_subset


logger = logging.getLogger(__name__)


_SQRT_HALF = 1.0 / np.sqrt(2.0)

# e^kappa_eps: unit eigenvector of sigma_kappa with eigenvalue eps. Phases are fixed
# for determinism; only the rank-one projectors enter any result.
EIGENVECTORS: dict[tuple[int, int], np.ndarray] = {
    (1, 1): np.array([1, 1], dtype=np.complex128) * _SQRT_HALF,
    (1, -1): np.array([1, -1], dtype=np.complex128) * _SQRT_HALF,
    (2, 1): np.array([1, 1j], dtype=np.complex128) * _SQRT_HALF,
    (2, -1): np.array([1, -1j], dtype=np.complex128) * _SQRT_HALF,
    (3, 1): np.array([1, 0], dtype=np.complex128),
    (3, -1): np.array([0, 1], dtype=np.complex128),
}


@dataclass(frozen=True)
class ExpectationEntry:
    j: int
    k: int
    eps: int
    value: complex

    @property
    def expected(self) -> int:
        return self.eps if self.j == self.k else 0

    @property
    def deviation(self) -> float:
        return abs(self.value - self.expected)


def eigenvector(kappa: int, eps: int) -> np.ndarray:
    try:
        return EIGENVECTORS[kappa, eps].copy()
    except KeyError as exc:
        raise InputError(f'no eigenvector for kappa={kappa!r}, eps={eps!r}') from exc


def eigenvector_expectations() -> list[ExpectationEntry]:
    """<sigma_j e^k_eps, e^k_eps> for j, k in {1,2,3} and eps in {-1,1}."""
    entries = []
    for j in (1, 2, 3):
        for k in (1, 2, 3):
            for eps in (1, -1):
                vector = EIGENVECTORS[k, eps]
                # inner product linear in the second argument
                value = np.vdot(pauli_matrix(j) @ vector, vector)
                entries.append(ExpectationEntry(j, k, eps, complex(value)))
    return entries


def verify_eigenvector_table(tol: float = 1e-14) -> float:
    """Check eigen-equations, unit norms and the 18-entry table; return the worst deviation."""
    worst = 0.0
    for (kappa, eps), vector in EIGENVECTORS.items():
        worst = max(worst, float(np.max(np.abs(pauli_matrix(kappa) @ vector - eps * vector))))
        worst = max(worst, abs(float(np.linalg.norm(vector)) - 1.0))
    worst = max([worst] + [entry.deviation for entry in eigenvector_expectations()])
    if worst > tol:
        raise AssertionError(f'eigenvector table deviates by {worst:.3e} (tolerance {tol:.0e})')
    return worst


def index_q(s: PauliIndex) -> FrozenSet[int]:
    """q(s) = {(kappa - 1) * n + i : s_i = kappa != 0}, 0-based."""
    return frozenset((kappa - 1) * s.n + site for site, kappa in s.support())


def index_p(subset: Iterable[int], n: int) -> PauliIndex | None:
    """Inverse of q on its image; ``None`` when two members claim the same site."""
    word = [0] * n
    for flat in subset:
        if not 0 <= flat < 3 * n:
            return None
        kappa, site = divmod(flat, n)
        if word[site]:
            return None
        word[site] = kappa + 1
    return PauliIndex.from_word(word)


def lift(polynomial: PauliPolynomial) -> BooleanPolynomial:
    """f_A on {-1,1}^{3n} with f(q(s)) = 3^{-|s|} A_s."""
    return BooleanPolynomial(
        3 * polynomial.n,
        {index_q(index): value / 3 ** index.weight for index, value in polynomial.items()},
    )


def unlift(f: BooleanPolynomial) -> PauliPolynomial:
    """A = sum_{S in Im(q)} 3^{|S|} f(S) sigma_{p(S)}."""
    if f.m % 3:
        raise InputError(f'cube dimension {f.m} is not a multiple of 3')
    n = f.m // 3
    terms: dict[PauliIndex, complex] = {}
    for subset, value in f.items():
        index = index_p(subset, n)
        if index is None:
            raise InputError(f'subset {format_subset(subset)} is outside the image of q')
        terms[index] = value * 3 ** len(subset)
    return PauliPolynomial(n, terms)


def embed_diagonal(f: BooleanPolynomial) -> PauliPolynomial:
    """chi_S -> sigma_s with s_j = 3 on S: the commutative subalgebra spanned by {0,3}^m."""
    terms = {}
    for subset, value in f.items():
        terms[PauliIndex.from_word(3 if j in subset else 0 for j in range(f.m))] = value
    return PauliPolynomial(f.m, terms)


def diagonal_restriction(polynomial: PauliPolynomial) -> BooleanPolynomial:
    """Inverse of :func:`embed_diagonal`; every term must lie in {0,3}^n."""
    terms = {}
    for index, value in polynomial.items():
        if any(kappa != 3 for _, kappa in index.support()):
            raise InputError(f'term {index.label} is not diagonal')
        terms[frozenset(site for site, _ in index.support())] = value
    return BooleanPolynomial(polynomial.n, terms)


def single_qubit_state(eps1: int, eps2: int, eps3: int) -> np.ndarray:
    """(1/3) sum_kappa |e^kappa_{eps_kappa}><e^kappa_{eps_kappa}|."""
    rho = np.zeros((2, 2), dtype=np.complex128)
    for kappa, eps in zip((1, 2, 3), (eps1, eps2, eps3)):
        vector = EIGENVECTORS[kappa, eps]
        rho += np.outer(vector, vector.conj()) / 3.0
    return rho


def product_state(eps: SignVector) -> np.ndarray:
    """rho(eps) = rho_1 (x) ... (x) rho_n as a dense 2^n x 2^n matrix (test oracle)."""
    n = eps.n
    limit = get_setting('QCUBE_DENSE_LIMIT')
    if n > limit:
        raise CapacityError(f'{n} qubits exceed the dense limit of {limit}')
    factors = [single_qubit_state(*(eps.component(kappa, site) for kappa in (1, 2, 3))) for site in range(n)]
    return reduce(np.kron, factors, np.ones((1, 1), dtype=np.complex128))


def expectation(polynomial: PauliPolynomial, eps: SignVector) -> complex:
    """tr[A rho(eps)] = sum_s A_s 3^{-|s|} prod_{s_j != 0} eps^(s_j)_j, without forming rho."""
    if eps.n != polynomial.n:
        raise InputError(f'sign vector is for {eps.n} qubits, observable has {polynomial.n}')
    total = 0j
    for index, value in polynomial.items():
        sign = 1
        for site, kappa in index.support():
            sign *= eps.component(kappa, site)
        total += value * sign / 3 ** index.weight
    return total


def expectation_batch(polynomial: PauliPolynomial, points: np.ndarray) -> np.ndarray:
    """tr[A rho(eps)] for every row of an N x 3n sign array."""
    points = as_points(points)
    n = polynomial.n
    if points.ndim != 2 or points.shape[1] != 3 * n:
        raise InputError(f'points must have shape (N, {3 * n}), got {points.shape}')
    values = np.zeros(points.shape[0], dtype=np.complex128)
    for index, value in polynomial.items():
        columns = [(kappa - 1) * n + site for site, kappa in index.support()]
        signs = np.prod(points[:, columns], axis=1, dtype=np.int8) if columns else 1
        values += (value / 3 ** index.weight) * signs
    return values


__all__ = [
    'EIGENVECTORS',
    'diagonal_restriction',
    'eigenvector_expectations',
    'embed_diagonal',
    'expectation',
    'expectation_batch',
    'index_p',
    'index_q',
    'lift',
    'product_state',
    'unlift',
    'verify_eigenvector_table',
]
