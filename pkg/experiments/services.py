"""Experiment drivers behind the management commands.

Each driver takes validated manifest parameters plus a seed and returns an
:class:`ExperimentResult`: CSV header and rows in a fixed order, a JSON-ready
summary, and whether every assertion of the run held.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import reduce
from typing import Any, Callable, Iterable, Sequence, TypeVar

import numpy as np

from cube.boolean import BooleanPolynomial, SignVector, enumerate_sign_vectors, eval_boolean_batch, random_points
from cube.lift import expectation_batch, lift, single_qubit_state
from inequalities.bohnenblust import (
    bh_ratio_boolean,
    bh_ratio_quantum,
    random_boolean_instance,
    random_instance,
)
from inequalities.bohr import class_radius_search, radius_inequality_check
from learning.bounds import chain_bounds, sample_budget
from learning.config import LearnerConfig
from learning.learner import good_event, learn
from learning.oracles import ExactOracle
from pauli.conf import bh_bound, get_setting
from pauli.dense import operator_norm, to_dense
from pauli.exceptions import QCubeError
from pauli.polynomial import PauliPolynomial
from pauli.textio import read_polynomial, serialize_polynomial
from pauli.utils import STREAM_SAMPLING, spawn_generator


logger = logging.getLogger(__name__)


BH_HEADER = ('kind', 'n', 'd', 'seed', 'lhs', 'norm', 'norm_mode', 'ratio')
LEARN_HEADER = ('trial', 'seed', 'N', 'b', 'survivors', 'err_l2sq', 'good_event')
LIFT_HEADER = ('instance', 'seed', 'points', 'max_dev_lift', 'max_dev_dense', 'passed', 'worst_eps')
BOHR_CLASS_HEADER = ('class', 'n', 'd', 'ensemble', 'seed', 'empirical_min_radius', 'reference_value')
BOHR_CHECK_HEADER = ('instance', 'seed', 'n', 'quantum_radius', 'lifted_radius', 'passed')

LIFT_TOLERANCE = 1e-12
DENSE_CHECK_QUBITS = 4
DENSE_CHECK_POINTS = 4096
CORRUPTION = 1e-3

T = TypeVar('T')
R = TypeVar('R')


@dataclass
class ExperimentResult:
    header: Sequence[str]
    rows: list[Sequence[Any]] = field(default_factory=list)
    summary: dict[str, Any] = field(default_factory=dict)
    passed: bool = True


def ordered_map(fn: Callable[[T], R], items: Iterable[T], workers: int | None = None) -> list[R]:
    """map() on a thread pool; results come back in input order."""
    workers = get_setting('QCUBE_WORKERS') if workers is None else workers
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, items))


def _quantiles(values: Sequence[float]) -> dict[str, float]:
    if not values:
        return {}
    levels = (0.5, 0.9, 0.99)
    return {f'q{int(level * 100)}': float(q) for level, q in zip(levels, np.quantile(values, levels))}


# -----------------------------------------------------------------
# bh_sweep


def run_bh_sweep(params: dict[str, Any], seed: int) -> ExperimentResult:
    kinds = ['quantum', 'boolean'] if params['kind'] == 'both' else [params['kind']]
    cells = [(kind, n, d) for kind in kinds for n in params['n'] for d in params['d'] if d <= n]
    skipped = [[n, d] for n in params['n'] for d in params['d'] if d > n]
    scale = params['bh_bound_scale']

    def run_row(task):
        kind, n, d, row_seed = task
        try:
            if kind == 'quantum':
                polynomial = random_instance(n, d, params['homogeneous'], row_seed, params['distribution'])
                return bh_ratio_quantum(polynomial, d), None
            f = random_boolean_instance(n, d, params['homogeneous'], row_seed, params['distribution'])
            return bh_ratio_boolean(f, d), None
        except QCubeError as exc:
            return None, str(exc)

    tasks = [(kind, n, d, seed + s) for kind, n, d in cells for s in range(params['seeds'])]
    outcomes = ordered_map(run_row, tasks)

    result = ExperimentResult(BH_HEADER)
    per_cell: dict[str, dict[str, Any]] = {}
    errors = []
    for (kind, n, d, row_seed), (report, error) in zip(tasks, outcomes):
        key = f'{kind}:n={n}:d={d}'
        bound = (3 ** d if kind == 'quantum' else 1) * bh_bound(d) * scale
        cell = per_cell.setdefault(key, {'bound': bound, 'max_ratio': 0.0, 'rows': 0, 'violations': 0})
        cell['rows'] += 1
        if error is not None:
            errors.append({'kind': kind, 'n': n, 'd': d, 'seed': row_seed, 'error': error})
            result.rows.append((kind, n, d, row_seed, None, None, 'error', None))
            continue
        result.rows.append((kind, n, d, row_seed, report.lhs, report.norm, report.norm_mode, report.ratio))
        cell['max_ratio'] = max(cell['max_ratio'], report.ratio)
        if report.ratio > bound * (1 + 1e-12):
            cell['violations'] += 1
    result.passed = not errors and all(cell['violations'] == 0 for cell in per_cell.values())
    result.summary = {'cells': per_cell, 'errors': errors, 'skipped_cells': skipped, 'passed': result.passed}
    logger.info('bh_sweep: %d rows over %d cells, passed=%s', len(result.rows), len(per_cell), result.passed)
    return result


# -----------------------------------------------------------------
# learn


def learner_config(params: dict[str, Any]) -> LearnerConfig:
    return LearnerConfig(
        n=params['n'],
        d=params['d'],
        eps=params['eps'],
        delta=params['delta'],
        bh_bound=params.get('bh_bound'),
        n_override=params.get('n_override'),
        b_override=params.get('b_override'),
        a_override=params.get('a_override'),
        noise_std=params.get('noise_std') or 0.0,
    )


def theoretical_budget(params: dict[str, Any]) -> dict[str, Any]:
    budget = sample_budget(learner_config(params))
    return {
        'b': budget.b,
        'N': budget.n_samples,
        'N_binomial_bound': budget.n_samples_binomial_bound,
        'a_two_threshold': budget.a_two_threshold,
        'N_two_threshold': budget.n_samples_two_threshold,
    }


def _learning_target(params: dict[str, Any], trial_seed: int) -> PauliPolynomial:
    if params.get('observable'):
        return read_polynomial(params['observable'])
    polynomial = random_instance(
        params['n'], params['d'], seed=trial_seed, distribution=params['distribution'], hermitian=params['hermitian']
    )
    norm = operator_norm(polynomial)
    return polynomial * (1.0 / norm) if norm else polynomial


def run_learn(params: dict[str, Any], seed: int) -> ExperimentResult:
    cfg = learner_config(params)
    check_bounds = 3 * cfg.n <= get_setting('QCUBE_EXHAUSTIVE_CUBE_LIMIT')

    def run_trial(trial: int):
        trial_seed = seed + trial
        polynomial = _learning_target(params, trial_seed)
        if polynomial.n != cfg.n:
            raise QCubeError(f'observable acts on {polynomial.n} qubits, manifest says n={cfg.n}')
        report = learn(ExactOracle(polynomial, cfg.noise_std, trial_seed), cfg, seed=trial_seed, workers=1)
        good = good_event(polynomial, report)
        violation = None
        if good and check_bounds and polynomial and polynomial.degree() <= cfg.d:
            r = bh_ratio_boolean(lift(polynomial), cfg.d).lhs
            survivor_limit, error_limit = chain_bounds(report.b_used, cfg.d, r, cfg.a_override)
            if len(report.survivors) > survivor_limit:
                violation = 'survivors'
            elif report.err_l2sq > error_limit:
                violation = 'error'
        return trial_seed, report, good, violation

    outcomes = ordered_map(run_trial, range(params['trials']), params.get('workers'))

    result = ExperimentResult(LEARN_HEADER)
    errors, violations = [], []
    for trial, (trial_seed, report, good, violation) in enumerate(outcomes):
        result.rows.append((trial, trial_seed, report.N_used, report.b_used, len(report.survivors), report.err_l2sq, good))
        errors.append(report.err_l2sq)
        if violation:
            violations.append({'trial': trial, 'bound': violation})
    trials = len(outcomes)
    successes = sum(err <= cfg.eps for err in errors)
    success_rate = successes / trials if trials else None
    min_rate = params.get('min_success_rate')
    min_rate = 1.0 - cfg.delta if min_rate is None else min_rate
    result.passed = not violations and (success_rate is None or success_rate >= min_rate)
    result.summary = {
        'trials': trials,
        'successes': successes,
        'success_rate': success_rate,
        'min_success_rate': min_rate,
        'good_events': sum(row[-1] for row in result.rows),
        'survivor_bound_holds': sum(report.survivor_bound_holds for _, report, _, _ in outcomes),
        'err_l2sq_quantiles': _quantiles(errors),
        'bound_violations': violations,
        'passed': result.passed,
    }
    logger.info('learn: %d trials, success rate %s, passed=%s', trials, success_rate, result.passed)
    return result


# -----------------------------------------------------------------
# lift_verify


def _verification_points(n: int, count: int, seed: int) -> np.ndarray:
    if count == 0:
        return enumerate_sign_vectors(3 * n)
    return random_points(spawn_generator(seed, STREAM_SAMPLING), count, 3 * n)


def _product_states(points: np.ndarray, n: int) -> np.ndarray:
    """Dense rho(eps) for every row, stacked along the first axis."""
    states = []
    for row in points:
        factors = [single_qubit_state(int(row[site]), int(row[n + site]), int(row[2 * n + site])) for site in range(n)]
        states.append(reduce(np.kron, factors, np.ones((1, 1), dtype=np.complex128)))
    return np.stack(states)


def _corrupted(f: BooleanPolynomial) -> BooleanPolynomial:
    terms = dict(f.terms)
    first = next(iter(terms), frozenset())
    terms[first] = terms.get(first, 0j) + CORRUPTION
    return BooleanPolynomial(f.m, terms)


def run_lift_verify(params: dict[str, Any], seed: int) -> ExperimentResult:
    if params.get('observable'):
        fixed = read_polynomial(params['observable'])
        n, count = fixed.n, 1
    else:
        fixed, n, count = None, params['n'], params['instances']
    points = _verification_points(n, params['points'], seed)
    dense = n <= min(DENSE_CHECK_QUBITS, get_setting('QCUBE_DENSE_LIMIT')) and points.shape[0] <= DENSE_CHECK_POINTS
    states = _product_states(points, n) if dense and count else None

    def verify(instance: int):
        instance_seed = seed + instance
        polynomial = fixed if fixed is not None else random_instance(
            n, min(params['d'], n), seed=instance_seed, distribution='gaussian', hermitian=False
        )
        f = lift(polynomial)
        if params['corrupt']:
            f = _corrupted(f)
        expected = expectation_batch(polynomial, points)
        deviations = np.abs(expected - eval_boolean_batch(f, points))
        lift_dev = float(deviations.max())
        dense_dev = None
        if states is not None:
            # tr(M rho) = sum_ij M_ij rho_ji
            traces = np.einsum('ij,kji->k', to_dense(polynomial), states)
            dense_deviations = np.abs(expected - traces)
            dense_dev = float(dense_deviations.max())
            deviations = np.maximum(deviations, dense_deviations)
        worst = int(np.argmax(deviations))
        return instance_seed, lift_dev, dense_dev, worst, float(deviations[worst])

    result = ExperimentResult(LIFT_HEADER)
    failures = []
    for instance, (instance_seed, lift_dev, dense_dev, worst, worst_dev) in enumerate(ordered_map(verify, range(count))):
        passed = worst_dev <= LIFT_TOLERANCE
        eps = SignVector.from_array(points[worst]).to_string()
        result.rows.append((instance, instance_seed, points.shape[0], lift_dev, dense_dev, passed, '' if passed else eps))
        if not passed:
            failures.append({'instance': instance, 'seed': instance_seed, 'eps': eps, 'deviation': worst_dev})
    result.passed = not failures
    result.summary = {
        'instances': count,
        'points_per_instance': int(points.shape[0]),
        'exhaustive': params['points'] == 0,
        'dense_checked': states is not None,
        'tolerance': LIFT_TOLERANCE,
        'failures': failures,
        'passed': result.passed,
    }
    logger.info('lift_verify: %d instances, %d failures', count, len(failures))
    return result


# -----------------------------------------------------------------
# bohr


def run_bohr(params: dict[str, Any], seed: int) -> ExperimentResult:
    if params['mode'] == 'check':
        return _run_radius_checks(params, seed)
    cls, d = params['class'], params['d']
    searches = ordered_map(
        lambda n: class_radius_search(cls, n, d, params['ensemble'], seed),
        [n for n in params['n'] if cls in ('all', 'hom') or d <= n],
    )
    result = ExperimentResult(BOHR_CLASS_HEADER)
    minima, violations = {}, []
    for search in searches:
        result.rows.append((search.cls, search.n, search.d, search.ensemble, search.seed, search.empirical_min, search.reference_value))
        minima[f'n={search.n}'] = search.empirical_min
        if search.empirical_min < 2 ** (1 / search.n) - 1 - 1e-9:
            violations.append(search.n)
    result.passed = not violations
    result.summary = {'mode': 'class', 'class': cls, 'd': d, 'minima': minima, 'violations': violations, 'passed': result.passed}
    return result


def _run_radius_checks(params: dict[str, Any], seed: int) -> ExperimentResult:
    if params.get('observable'):
        tasks = [(0, seed, read_polynomial(params['observable']))]
    else:
        sizes = params['n'] or [1]
        tasks = []
        for instance in range(params['instances']):
            n = sizes[instance % len(sizes)]
            tasks.append((instance, seed + instance, random_instance(n, n, seed=seed + instance, distribution='gaussian')))

    checks = ordered_map(lambda task: radius_inequality_check(task[2]), tasks)
    result = ExperimentResult(BOHR_CHECK_HEADER)
    violations, skipped = [], 0
    for (instance, instance_seed, polynomial), check in zip(tasks, checks):
        status = 'skipped' if check.skipped else check.passed
        result.rows.append((instance, instance_seed, polynomial.n, check.quantum.value, check.lifted.value, status))
        skipped += check.skipped
        if check.passed is False:
            violations.append(instance)
    result.passed = not violations
    result.summary = {'mode': 'check', 'instances': len(tasks), 'skipped': skipped, 'violations': violations, 'passed': result.passed}
    return result


# -----------------------------------------------------------------
# gen


def generate_observable(params: dict[str, Any], seed: int) -> str:
    polynomial = random_instance(
        params['n'],
        params['d'],
        homogeneous=params['homogeneous'],
        seed=seed,
        distribution=params['distribution'],
        hermitian=params['hermitian'],
    )
    header = f"random instance: d = {params['d']}, distribution = {params['distribution']}, seed = {seed}"
    return serialize_polynomial(polynomial, header=header)
