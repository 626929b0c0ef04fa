"""Boolean and quantum Boolean radii.

The radius of f is the r >= 0 with sum_S |f(S)| r^{|S|} = ||f||; the left side is a
polynomial in r with nonnegative coefficients, so it is found by bisection.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np
from scipy.special import comb

from cube.boolean import BooleanPolynomial
from cube.lift import embed_diagonal, lift
from pauli.exceptions import CapacityError, InputError
from pauli.kernels import walsh_hadamard
from pauli.polynomial import PauliPolynomial
from pauli.utils import STREAM_INSTANCE, spawn_generator

from .services import EXACT, EXHAUSTIVE, norm_service


logger = logging.getLogger(__name__)


INFINITE = math.inf

CLASSES = ('all', 'hom', 'eq_d', 'le_d')

MAX_SEARCH_DIMENSION = 12
MAX_ENUMERATED_DIMENSION = 4
BISECTION_TOL = 1e-12
NEWTON_STEPS = 4


@dataclass(frozen=True)
class RadiusResult:
    value: float
    residual: float
    norm_used: float
    norm_mode: str = EXACT

    @property
    def degenerate(self) -> bool:
        return math.isinf(self.value)


@dataclass(frozen=True)
class RadiusCheck:
    quantum: RadiusResult
    lifted: RadiusResult
    passed: bool | None

    @property
    def skipped(self) -> bool:
        return self.passed is None


@dataclass(frozen=True)
class ClassSearchResult:
    cls: str
    n: int
    d: int
    ensemble: int
    seed: int
    empirical_min: float
    reference_value: float
    instances: int
    witness: BooleanPolynomial | None = field(default=None, compare=False)


@dataclass(frozen=True)
class QuantumClassSearchResult:
    classical: ClassSearchResult
    quantum_min: float
    instances: int


def _evaluate(weights: np.ndarray, r: np.ndarray) -> np.ndarray:
    powers = r[:, None] ** np.arange(weights.shape[1])[None, :]
    return np.sum(weights * powers, axis=1)


def _derivative(weights: np.ndarray, r: np.ndarray) -> np.ndarray:
    k = np.arange(1, weights.shape[1])
    powers = r[:, None] ** (k - 1)[None, :]
    return np.sum(weights[:, 1:] * k[None, :] * powers, axis=1)


def solve_radii(weights: np.ndarray, norms: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Solve sum_k w[i, k] r^k = norms[i] for every row; returns (radii, residuals).

    Rows without a nonconstant weight get +inf and residual 0.
    """
    weights = np.atleast_2d(np.asarray(weights, dtype=np.float64))
    norms = np.asarray(norms, dtype=np.float64).reshape(-1)
    rows = weights.shape[0]
    radii = np.full(rows, INFINITE)
    residuals = np.zeros(rows)
    active = np.any(weights[:, 1:] > 0, axis=1) if weights.shape[1] > 1 else np.zeros(rows, dtype=bool)
    if not np.any(active):
        return radii, residuals

    w, target = weights[active], norms[active]
    upper = np.ones(w.shape[0])
    while True:
        short = _evaluate(w, upper) < target
        if not np.any(short):
            break
        upper[short] *= 2.0
    lower = np.zeros_like(upper)
    tolerance = BISECTION_TOL * np.maximum(1.0, upper)
    while np.any(upper - lower > tolerance):
        middle = 0.5 * (lower + upper)
        below = _evaluate(w, middle) < target
        lower = np.where(below, middle, lower)
        upper = np.where(below, upper, middle)
    r = 0.5 * (lower + upper)
    for _ in range(NEWTON_STEPS):
        slope = _derivative(w, r)
        step = np.divide(_evaluate(w, r) - target, slope, out=np.zeros_like(r), where=slope > 0)
        r = np.clip(r - step, lower, upper)
    # g(0) = |f(emptyset)| can already reach the norm
    r = np.where(w[:, 0] >= target, 0.0, r)
    radii[active] = r
    residuals[active] = np.abs(_evaluate(w, r) - target)
    return radii, residuals


def _solve_one(weights: np.ndarray, norm: float, mode: str) -> RadiusResult:
    radii, residuals = solve_radii(weights[None, :], np.array([norm]))
    return RadiusResult(float(radii[0]), float(residuals[0]), norm, mode)


def boolean_radius(f: BooleanPolynomial) -> RadiusResult:
    if not f:
        raise InputError('the Boolean radius of the zero function is undefined')
    sup = norm_service.get_sup_norm(f)
    return _solve_one(f.degree_weights(), sup.value, sup.mode)


def quantum_radius(polynomial: PauliPolynomial) -> RadiusResult:
    if not polynomial:
        raise InputError('the quantum Boolean radius of the zero observable is undefined')
    weights = np.zeros(polynomial.n + 1)
    for index, value in polynomial.items():
        weights[index.weight] += abs(value)
    return _solve_one(weights, norm_service.get_operator_norm(polynomial), EXACT)


def radius_inequality_check(polynomial: PauliPolynomial, tol: float = 1e-9) -> RadiusCheck:
    """Compare Br_{3n}(f_A) with 3 qBr_n(A); degenerate (constant) inputs are skipped."""
    quantum = quantum_radius(polynomial)
    lifted = boolean_radius(lift(polynomial))
    if lifted.norm_mode != EXHAUSTIVE:
        raise CapacityError(f'sup norm of the lift on {3 * polynomial.n} bits is not exhaustive')
    if quantum.degenerate or lifted.degenerate:
        logger.info('Radius check skipped for a constant observable on %d qubits', polynomial.n)
        return RadiusCheck(quantum, lifted, None)
    return RadiusCheck(quantum, lifted, lifted.value <= 3.0 * quantum.value + tol)


def reference_radius(cls: str, n: int, d: int = 1, constant: float = 1.0) -> float:
    """Closed form for ``all``; unit-constant shape curves for the other classes."""
    if cls == 'all':
        return 2.0 ** (1.0 / n) - 1.0
    if cls == 'hom':
        return math.sqrt(math.log(n) / n)
    if cls == 'eq_d':
        return constant ** (1.0 / d) * n ** (1.0 / (2 * n)) * float(comb(n, d, exact=True)) ** (-1.0 / (2 * d))
    if cls == 'le_d':
        return constant / n ** ((d - 1) / (2 * d))
    raise InputError(f'unknown class {cls!r}; expected one of {CLASSES}')


def _class_masks(cls: str, n: int, d: int, degree: int | None = None) -> np.ndarray:
    masks = np.arange(1 << n, dtype=np.uint64)
    sizes = np.bitwise_count(masks)
    if cls == 'all':
        keep = np.ones_like(sizes, dtype=bool)
    elif cls == 'hom':
        keep = sizes == degree
    elif cls == 'eq_d':
        keep = sizes == d
    elif cls == 'le_d':
        keep = sizes <= d
    else:
        raise InputError(f'unknown class {cls!r}; expected one of {CLASSES}')
    return np.flatnonzero(keep)


def _random_ensemble(cls: str, n: int, d: int, ensemble: int, seed: int) -> np.ndarray:
    """Dense coefficient rows indexed by subset bitmask; even rows Gaussian, odd rows +-1."""
    rng = spawn_generator(seed, STREAM_INSTANCE)
    coefficients = np.zeros((ensemble, 1 << n))
    for row in range(ensemble):
        support = _class_masks(cls, n, d, degree=1 + row % n)
        if row % 2:
            coefficients[row, support] = rng.choice(np.array([-1.0, 1.0]), size=support.size)
        else:
            coefficients[row, support] = rng.standard_normal(support.size)
    return coefficients


def _sign_functions(cls: str, n: int, d: int) -> np.ndarray:
    """Spectra of every +-1 valued function on {-1,1}^n that lies in the class."""
    points = 1 << n
    values = np.array(list(product((1.0, -1.0), repeat=points)))
    spectra = walsh_hadamard(values).real / points
    spectra[np.abs(spectra) < 1e-12] = 0.0
    sizes = np.bitwise_count(np.arange(points, dtype=np.uint64))
    nonzero = spectra != 0
    if cls == 'all':
        keep = np.ones(len(spectra), dtype=bool)
    elif cls == 'hom':
        degrees = np.where(nonzero, sizes[None, :], -1)
        lowest = np.where(nonzero, sizes[None, :], n + 1).min(axis=1)
        keep = degrees.max(axis=1) == lowest
    elif cls == 'eq_d':
        keep = ~np.any(nonzero & (sizes[None, :] != d), axis=1)
    else:
        keep = ~np.any(nonzero & (sizes[None, :] > d), axis=1)
    return spectra[keep]


def _degree_weights(spectra: np.ndarray, n: int) -> np.ndarray:
    sizes = np.bitwise_count(np.arange(1 << n, dtype=np.uint64)).astype(np.intp)
    weights = np.zeros((spectra.shape[0], n + 1))
    for k in range(n + 1):
        weights[:, k] = np.abs(spectra[:, sizes == k]).sum(axis=1)
    return weights


def _to_polynomial(row: np.ndarray, n: int) -> BooleanPolynomial:
    terms = {}
    for mask in np.flatnonzero(row):
        terms[frozenset(j for j in range(n) if (int(mask) >> j) & 1)] = row[mask]
    return BooleanPolynomial(n, terms)


def class_radius_search(cls: str, n: int, d: int = 1, ensemble: int = 200, seed: int = 0) -> ClassSearchResult:
    """Minimum Boolean radius over a seeded ensemble: an upper bound on the class infimum."""
    if cls not in CLASSES:
        raise InputError(f'unknown class {cls!r}; expected one of {CLASSES}')
    if not 1 <= n <= MAX_SEARCH_DIMENSION:
        raise CapacityError(f'class search needs 1 <= n <= {MAX_SEARCH_DIMENSION}, got {n}')
    if cls in ('eq_d', 'le_d') and not 1 <= d <= n:
        raise InputError(f'degree {d} must lie in [1, {n}]')
    spectra = _random_ensemble(cls, n, d, ensemble, seed)
    if n <= MAX_ENUMERATED_DIMENSION:
        spectra = np.vstack([spectra, _sign_functions(cls, n, d)])
    spectra = spectra[np.any(spectra != 0, axis=1)]
    values = walsh_hadamard(spectra)
    norms = np.max(np.abs(values), axis=1)
    radii, _ = solve_radii(_degree_weights(spectra, n), norms)
    finite = np.isfinite(radii)
    if np.any(finite):
        best = int(np.flatnonzero(finite)[np.argmin(radii[finite])])
        empirical_min, witness = float(radii[best]), _to_polynomial(spectra[best], n)
    else:
        empirical_min, witness = INFINITE, None
    logger.info('Class %s n=%d d=%d: empirical min radius %.12g over %d functions', cls, n, d, empirical_min, len(radii))
    return ClassSearchResult(cls, n, d, ensemble, seed, empirical_min, reference_radius(cls, n, d), len(radii), witness)


def quantum_class_search(cls: str, n: int, d: int = 1, ensemble: int = 50, seed: int = 0) -> QuantumClassSearchResult:
    """quantum_radius over the diagonally embedded ensemble and the classical minimiser."""
    classical = class_radius_search(cls, n, d, ensemble, seed)
    candidates = [_to_polynomial(row, n) for row in _random_ensemble(cls, n, d, ensemble, seed)]
    if classical.witness is not None:
        candidates.append(classical.witness)
    radii = [quantum_radius(embed_diagonal(f)).value for f in candidates if f]
    return QuantumClassSearchResult(classical, min(radii, default=INFINITE), len(radii))


__all__ = [
    'CLASSES',
    'INFINITE',
    'ClassSearchResult',
    'QuantumClassSearchResult',
    'RadiusCheck',
    'RadiusResult',
    'boolean_radius',
    'class_radius_search',
    'quantum_class_search',
    'quantum_radius',
    'radius_inequality_check',
    'reference_radius',
    'solve_radii',
]
