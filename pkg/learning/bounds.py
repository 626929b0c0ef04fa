"""Sample-size, threshold and error-bound formulas for the low-degree learner."""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import comb

from cube.boolean import Subset
from cube.lift import index_q
from pauli.exceptions import InputError
from pauli.utils import iter_pauli_support

from .config import LearnerConfig


def candidate_sets(n: int, d: int) -> list[Subset]:
    """q(s) for every |s| <= d, in lexicographic order of the Pauli words."""
    if d > n:
        raise InputError(f'degree {d} exceeds the qubit count {n}')
    return [index_q(index) for index in iter_pauli_support(n, d)]


def _exponent(d: int) -> float:
    return 2.0 * d / (d + 1)


def _binomial_sum(n: int, d: int) -> int:
    return sum(int(comb(n, l, exact=True)) for l in range(0, d + 1))


def _union_log(cfg: LearnerConfig, binomials: float) -> float:
    return math.log(2.0 * 3 ** cfg.d / cfg.delta * binomials)


def threshold_b(cfg: LearnerConfig) -> float:
    d = cfg.d
    return 10 ** (-(d + 1) / 2) * (3 ** (d + 1) * cfg.bh_bound) ** (-d) * cfg.eps ** ((d + 1) / 2)


def sample_count(cfg: LearnerConfig, b: float) -> int:
    """Smallest integer N with N >= (2 / b^2) log((2 3^d / delta) sum_{l<=d} C(n, l))."""
    if b <= 0.0:
        raise InputError(f'threshold must be positive, got {b}')
    return math.ceil(2.0 / b ** 2 * _union_log(cfg, _binomial_sum(cfg.n, cfg.d)))


def two_threshold_sample_count(cfg: LearnerConfig) -> int:
    d = cfg.d
    scale = math.e ** 6 * d * (3 ** (d + 1) * cfg.bh_bound) ** (2 * d) * cfg.eps ** (-(d + 1))
    return math.ceil(scale * _union_log(cfg, _binomial_sum(cfg.n, d)))


@dataclass(frozen=True)
class SampleBudget:
    b: float
    n_samples: int
    n_samples_binomial_bound: int
    a_two_threshold: float
    n_samples_two_threshold: int


def sample_budget(cfg: LearnerConfig) -> SampleBudget:
    """Theoretical b and N, with the binomial sum replaced by (en/d)^d for comparison."""
    b = threshold_b(cfg)
    relaxed = (math.e * cfg.n / cfg.d) ** cfg.d
    return SampleBudget(
        b=b,
        n_samples=sample_count(cfg, b),
        n_samples_binomial_bound=math.ceil(2.0 / b ** 2 * _union_log(cfg, relaxed)),
        a_two_threshold=2.0 * b,
        n_samples_two_threshold=two_threshold_sample_count(cfg),
    )


def survivor_bound(b: float, d: int, r: float) -> float:
    """b^{-2d/(d+1)} r^{2d/(d+1)}."""
    p = _exponent(d)
    return b ** (-p) * r ** p


def error_bound(b: float, d: int, r: float) -> float:
    """10 (3^{d+1} r)^{2d/(d+1)} b^{2/(d+1)}."""
    return 10.0 * (3 ** (d + 1) * r) ** _exponent(d) * b ** (2.0 / (d + 1))


def two_threshold_survivor_bound(a: float, b: float, d: int, r: float) -> float:
    """(a - b)^{-2d/(d+1)} r^{2d/(d+1)}; equals survivor_bound(b, d, r) at a = 2b."""
    if a <= b:
        raise InputError(f'survivor threshold a={a} must exceed b={b}')
    p = _exponent(d)
    return (a - b) ** (-p) * r ** p


def two_threshold_error_bound(a: float, b: float, d: int, r: float) -> float:
    if a <= b:
        raise InputError(f'survivor threshold a={a} must exceed b={b}')
    p = _exponent(d)
    return (3 ** (d + 1) * r) ** p * (b ** 2 * (a - b) ** (-p) + (a + b) ** (2.0 / (d + 1)))


def chain_bounds(b: float, d: int, r: float, a: float | None = None) -> tuple[float, float]:
    """(survivor limit, error limit) for the rule in use: single threshold 2b, or a when given."""
    if a is None:
        return survivor_bound(b, d, r), error_bound(b, d, r)
    return two_threshold_survivor_bound(a, b, d, r), two_threshold_error_bound(a, b, d, r)


__all__ = [
    'SampleBudget',
    'candidate_sets',
    'chain_bounds',
    'error_bound',
    'sample_budget',
    'sample_count',
    'survivor_bound',
    'threshold_b',
    'two_threshold_error_bound',
    'two_threshold_sample_count',
    'two_threshold_survivor_bound',
]
