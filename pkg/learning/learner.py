"""Empirical Fourier coefficients, thresholding and reconstruction.

The learner draws uniform sign vectors, queries the oracle, averages
f_A(x) chi_S(x) over every candidate set S and keeps the sets whose empirical
coefficient clears the threshold.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence, Tuple

import numpy as np

from cube.boolean import SignVector, Subset, enumerate_sign_vectors, random_points, subset_key
from cube.lift import expectation_batch, index_p, lift
from pauli.conf import get_setting
from pauli.exceptions import CapacityError, InputError, OracleError
from pauli.kernels import subset_products
from pauli.polynomial import PauliPolynomial, l2_distance_sq
from pauli.utils import STREAM_SIGNS, spawn_generator

from .bounds import candidate_sets, sample_count, threshold_b, two_threshold_survivor_bound
from .config import LearnerConfig
from .oracles import QueryOracle


logger = logging.getLogger(__name__)


MAX_SAMPLES = 50_000_000
QUERY_CHUNK = 1 << 14


@dataclass(frozen=True)
class LearnerReport:
    n: int
    d: int
    seed: int
    N_used: int
    b_used: float
    threshold: float
    bh_bound: float
    alpha: Mapping[Subset, complex] = field(repr=False)
    survivors: Tuple[Subset, ...]
    reconstructed: PauliPolynomial
    err_l2sq: float | None = None

    @property
    def survivor_limit(self) -> float:
        """(threshold - b)^{-2d/(d+1)} BH^{2d/(d+1)}, which is b^{-2d/(d+1)} BH^{2d/(d+1)} at threshold 2b."""
        return two_threshold_survivor_bound(self.threshold, self.b_used, self.d, self.bh_bound)

    @property
    def survivor_bound_holds(self) -> bool:
        """Guaranteed only when ||A|| <= 1 and every estimate is within b."""
        return len(self.survivors) <= self.survivor_limit


def _as_arrays(samples) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(samples, tuple) and len(samples) == 2 and isinstance(samples[0], np.ndarray):
        points, values = samples
    else:
        pairs = list(samples)
        if not pairs:
            raise InputError('empirical coefficients need at least one sample')
        points = np.array([eps.as_array() if isinstance(eps, SignVector) else eps for eps, _ in pairs], dtype=np.int8)
        values = np.array([value for _, value in pairs], dtype=np.complex128)
    if points.shape[0] == 0:
        raise InputError('empirical coefficients need at least one sample')
    return points, np.asarray(values, dtype=np.complex128)


def empirical_coefficients(samples, sets: Sequence[Iterable[int]]) -> dict[Subset, complex]:
    """alpha_S = (1/N) sum_m v_m chi_S(x_m) for each S in ``sets``.

    ``samples`` is either a list of (SignVector, value) pairs or a (points, values)
    array pair.
    """
    points, values = _as_arrays(samples)
    keys = [frozenset(s) for s in sets]
    columns = [tuple(sorted(s)) for s in keys]
    total = np.zeros(len(keys), dtype=np.complex128)
    # slices are summed in index order
    for start in range(0, points.shape[0], QUERY_CHUNK):
        stop = start + QUERY_CHUNK
        total += subset_products(points[start:stop], columns).T @ values[start:stop]
    alpha = total / points.shape[0]
    return dict(zip(keys, alpha.tolist()))


def select_survivors(alpha: Mapping[Subset, complex], threshold: float) -> tuple[Subset, ...]:
    """Sets with |alpha_S| >= threshold; ties are kept."""
    return tuple(s for s in sorted(alpha, key=subset_key) if abs(alpha[s]) >= threshold)


def reconstruct(alpha: Mapping[Subset, complex], survivors: Iterable[Subset], n: int) -> PauliPolynomial:
    """sum over survivors of 3^{|S|} alpha_S sigma_{p(S)}."""
    terms = {}
    for subset in survivors:
        index = index_p(subset, n)
        if index is None:
            raise InputError(f'set {sorted(subset)} is not the image of a Pauli index')
        terms[index] = 3 ** len(subset) * alpha[subset]
    return PauliPolynomial(n, terms)


def _query_all(oracle: QueryOracle, points: np.ndarray, workers: int) -> np.ndarray:
    chunks = [points[start:start + QUERY_CHUNK] for start in range(0, points.shape[0], QUERY_CHUNK)]
    if workers <= 1 or not oracle.concurrent_safe or len(chunks) <= 1:
        outputs, completed = [], 0
        for chunk in chunks:
            try:
                outputs.append(oracle.query_batch(chunk))
            except OracleError as exc:
                raise OracleError(str(exc), completed=completed + exc.completed) from exc
            completed += chunk.shape[0]
        return np.concatenate(outputs) if outputs else np.empty(0, dtype=np.complex128)

    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = [executor.submit(oracle.query_batch, chunk) for chunk in chunks]
    outputs, completed = [], 0
    for chunk, future in zip(chunks, futures):
        try:
            outputs.append(future.result())
        except OracleError as exc:
            raise OracleError(str(exc), completed=completed + exc.completed) from exc
        completed += chunk.shape[0]
    return np.concatenate(outputs)


def learn(oracle: QueryOracle, cfg: LearnerConfig, seed: int = 0, workers: int | None = None) -> LearnerReport:
    if oracle.n != cfg.n:
        raise InputError(f'oracle acts on {oracle.n} qubits, config expects {cfg.n}')
    b = cfg.b_override if cfg.b_override is not None else threshold_b(cfg)
    n_samples = cfg.n_override if cfg.n_override is not None else sample_count(cfg, b)
    threshold = cfg.a_override if cfg.a_override is not None else 2.0 * b
    if cfg.a_override is not None and cfg.a_override <= b:
        raise InputError(f'survivor threshold a={cfg.a_override} must exceed b={b}')
    if n_samples > MAX_SAMPLES:
        logger.warning('Sample count %d is beyond what a single run can hold', n_samples)
        raise CapacityError(f'{n_samples} samples exceed the limit of {MAX_SAMPLES}; pass n_override')
    workers = get_setting('QCUBE_WORKERS') if workers is None else workers

    rng = spawn_generator(seed, STREAM_SIGNS)
    points = random_points(rng, n_samples, 3 * cfg.n)
    values = _query_all(oracle, points, workers)
    alpha = empirical_coefficients((points, values), candidate_sets(cfg.n, cfg.d))
    survivors = select_survivors(alpha, threshold)
    report = LearnerReport(
        n=cfg.n,
        d=cfg.d,
        seed=seed,
        N_used=n_samples,
        b_used=b,
        threshold=threshold,
        bh_bound=cfg.bh_bound,
        alpha=alpha,
        survivors=survivors,
        reconstructed=reconstruct(alpha, survivors, cfg.n),
    )
    if oracle.ground_truth is not None:
        report = replace(report, err_l2sq=err_l2sq(oracle.ground_truth, report))
    logger.debug('Seed %d: N=%d, b=%.3g, %d survivors', seed, n_samples, b, len(survivors))
    return report


def err_l2sq(polynomial: PauliPolynomial, report: LearnerReport) -> float:
    """||A - A~||_2^2 as the Parseval sum of squared coefficient differences."""
    return l2_distance_sq(polynomial, report.reconstructed)


def coefficient_deviation(polynomial: PauliPolynomial, report: LearnerReport) -> float:
    f_a = lift(polynomial)
    return max((abs(value - f_a.coefficient(s)) for s, value in report.alpha.items()), default=0.0)


def good_event(polynomial: PauliPolynomial, report: LearnerReport) -> bool:
    """Every candidate estimate lies within b of the true Fourier coefficient."""
    return coefficient_deviation(polynomial, report) <= report.b_used


def exhaustive_samples(polynomial: PauliPolynomial) -> tuple[np.ndarray, np.ndarray]:
    """All 2^{3n} sign vectors with their exact expectation values."""
    points = enumerate_sign_vectors(3 * polynomial.n)
    return points, expectation_batch(polynomial, points)


__all__ = [
    'LearnerReport',
    'coefficient_deviation',
    'empirical_coefficients',
    'err_l2sq',
    'exhaustive_samples',
    'good_event',
    'learn',
    'reconstruct',
    'select_survivors',
]
