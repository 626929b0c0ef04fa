"""Bohnenblust-Hille functionals for Boolean and Pauli polynomials.

The BH functional of a degree-d polynomial is the l_p norm of its coefficients with
p = 2d/(d+1); the inequalities bound it by C_d times the sup (operator) norm.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import numpy as np

from cube.boolean import BooleanPolynomial
from cube.lift import lift
from pauli.exceptions import InputError, QCubeError
from pauli.polynomial import PauliIndex, PauliPolynomial
from pauli.utils import STREAM_INSTANCE, iter_pauli_support, spawn_generator

from .services import EXACT, SAMPLED, norm_service


logger = logging.getLogger(__name__)


DISTRIBUTIONS = ('rademacher', 'gaussian')


@dataclass(frozen=True)
class BhReport:
    kind: str
    n: int
    d: int
    lhs: float
    norm: float
    norm_mode: str
    ratio: float

    @property
    def ratio_is_upper_bound(self) -> bool:
        return self.norm_mode == SAMPLED


@dataclass(frozen=True)
class ProofChain:
    """Per-instance links of the reduction lhs(A) <= 3^d lhs(f_A) <= 3^d BH ||f_A|| <= 3^d BH ||A||."""

    d: int
    bh_bound: float
    lhs_quantum: float
    lhs_lifted: float
    lift_sup_norm: float
    operator_norm: float

    @property
    def reduction_holds(self) -> bool:
        return self.lhs_quantum <= 3 ** self.d * self.lhs_lifted * (1 + 1e-12) + 1e-12

    @property
    def bound_holds(self) -> bool:
        return self.lhs_lifted <= self.bh_bound * self.lift_sup_norm * (1 + 1e-12) + 1e-12

    @property
    def contraction_holds(self) -> bool:
        return self.lift_sup_norm <= self.operator_norm + 1e-10

    @property
    def holds(self) -> bool:
        return self.reduction_holds and self.bound_holds and self.contraction_holds


def bh_exponent(d: int) -> float:
    if d < 1:
        raise InputError(f'degree must be >= 1, got {d}')
    return 2.0 * d / (d + 1)


def _lp_mass(values: Iterable[complex], d: int) -> float:
    p = bh_exponent(d)
    magnitudes = np.abs(np.fromiter(values, dtype=np.complex128))
    if magnitudes.size == 0:
        return 0.0
    return float(np.sum(magnitudes ** p) ** (1.0 / p))


def bh_lhs_quantum(polynomial: PauliPolynomial, d: int) -> float:
    if polynomial.degree() > d:
        raise InputError(f'observable has degree {polynomial.degree()} > {d}')
    return _lp_mass(polynomial.terms.values(), d)


def bh_lhs_boolean(f: BooleanPolynomial, d: int) -> float:
    if f.degree() > d:
        raise InputError(f'polynomial has degree {f.degree()} > {d}')
    return _lp_mass(f.terms.values(), d)


def sup_norm_boolean(f: BooleanPolynomial):
    """Exact max over the cube when f.m is within the exhaustive limit, else a sampled lower bound."""
    return norm_service.get_sup_norm(f)


def _ratio(lhs: float, norm: float) -> float:
    if norm == 0.0:
        if lhs > 0.0:
            raise QCubeError('nonzero coefficient mass with zero norm')
        return 0.0
    return lhs / norm


def bh_ratio_quantum(polynomial: PauliPolynomial, d: int) -> BhReport:
    lhs = bh_lhs_quantum(polynomial, d)
    norm = norm_service.get_operator_norm(polynomial)
    return BhReport('quantum', polynomial.n, d, lhs, norm, EXACT, _ratio(lhs, norm))


def bh_ratio_boolean(f: BooleanPolynomial, d: int) -> BhReport:
    lhs = bh_lhs_boolean(f, d)
    sup = sup_norm_boolean(f)
    return BhReport('boolean', f.m, d, lhs, sup.value, sup.mode, _ratio(lhs, sup.value))


def multilinear_polynomial(a: np.ndarray, d: int) -> PauliPolynomial:
    """sum a[k_1..k_d, i_1..i_d] sigma^(k_1)_{i_1} (x) ... (x) sigma^(k_d)_{i_d} on d*n qubits.

    ``a`` has shape (3,)*d + (n,)*d; axis j < d holds kappa_j - 1 and factor j acts on
    qubit block j.
    """
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 * d or a.shape[:d] != (3,) * d or len(set(a.shape[d:])) > 1:
        raise InputError(f'expected a tensor of shape (3,)*{d} + (n,)*{d}, got {a.shape}')
    n = a.shape[d]
    terms: dict[PauliIndex, complex] = {}
    for position in np.argwhere(a != 0):
        kappas, sites = position[:d], position[d:]
        word = [0] * (d * n)
        for block, (kappa, site) in enumerate(zip(kappas, sites)):
            word[block * n + int(site)] = int(kappa) + 1
        terms[PauliIndex.from_word(word)] = complex(a[tuple(position)])
    return PauliPolynomial(d * n, terms)


def multilinear_ratio(a: np.ndarray, d: int) -> BhReport:
    return bh_ratio_quantum(multilinear_polynomial(a, d), d)


def littlewood_witness() -> BooleanPolynomial:
    """x_1 y_1 + x_1 y_2 + x_2 y_1 - x_2 y_2 on {-1,1}^4 with (x_1, x_2, y_1, y_2) = coordinates 1..4."""
    return BooleanPolynomial(4, {(0, 2): 1.0, (0, 3): 1.0, (1, 2): 1.0, (1, 3): -1.0})


def proof_chain(polynomial: PauliPolynomial, d: int, bh_bound: float) -> ProofChain:
    f_a = lift(polynomial)
    return ProofChain(
        d=d,
        bh_bound=bh_bound,
        lhs_quantum=bh_lhs_quantum(polynomial, d),
        lhs_lifted=bh_lhs_boolean(f_a, d),
        lift_sup_norm=sup_norm_boolean(f_a).value,
        operator_norm=norm_service.get_operator_norm(polynomial),
    )


def _draw(rng: np.random.Generator, size: int, distribution: str, hermitian: bool) -> np.ndarray:
    if distribution not in DISTRIBUTIONS:
        raise InputError(f'distribution must be one of {DISTRIBUTIONS}, got {distribution!r}')
    if distribution == 'rademacher':
        values = rng.choice(np.array([-1.0, 1.0]), size=size).astype(np.complex128)
        if not hermitian:
            values = values * rng.choice(np.array([1.0, 1j]), size=size)
        return values
    if hermitian:
        return rng.standard_normal(size).astype(np.complex128)
    return (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / np.sqrt(2.0)


def random_instance(
    n: int,
    d: int,
    homogeneous: bool = False,
    seed: int = 0,
    distribution: str = 'rademacher',
    hermitian: bool = True,
) -> PauliPolynomial:
    """i.i.d. coefficients on {|s| = d} (homogeneous) or {|s| <= d}; deterministic in ``seed``."""
    if d < 0 or d > n:
        raise InputError(f'degree {d} must lie in [0, {n}]')
    support = list(iter_pauli_support(n, d, homogeneous=homogeneous))
    rng = spawn_generator(seed, STREAM_INSTANCE)
    values = _draw(rng, len(support), distribution, hermitian)
    return PauliPolynomial(n, dict(zip(support, values)))


def boolean_support(m: int, d: int, homogeneous: bool = False) -> list[tuple[int, ...]]:
    weights = [d] if homogeneous else range(0, min(d, m) + 1)
    return [subset for weight in weights for subset in combinations(range(m), weight)]


def random_boolean_instance(
    m: int,
    d: int,
    homogeneous: bool = False,
    seed: int = 0,
    distribution: str = 'rademacher',
) -> BooleanPolynomial:
    if d < 0 or d > m:
        raise InputError(f'degree {d} must lie in [0, {m}]')
    support = boolean_support(m, d, homogeneous=homogeneous)
    rng = spawn_generator(seed, STREAM_INSTANCE)
    values = _draw(rng, len(support), distribution, hermitian=True)
    return BooleanPolynomial(m, dict(zip(support, values)))


__all__ = [
    'BhReport',
    'ProofChain',
    'bh_exponent',
    'bh_lhs_boolean',
    'bh_lhs_quantum',
    'bh_ratio_boolean',
    'bh_ratio_quantum',
    'littlewood_witness',
    'multilinear_polynomial',
    'multilinear_ratio',
    'proof_chain',
    'random_boolean_instance',
    'random_instance',
    'sup_norm_boolean',
]
