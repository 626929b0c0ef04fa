from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from django.conf import settings

from cube.boolean import BooleanPolynomial, eval_boolean_batch, format_subset, random_points
from pauli.conf import get_setting
from pauli.dense import operator_norm
from pauli.kernels import cube_abs_max
from pauli.polynomial import PauliPolynomial
from pauli.textio import serialize_polynomial
from pauli.utils import STREAM_SAMPLING, make_cache_key, spawn_generator


logger = logging.getLogger(__name__)


EXHAUSTIVE = 'exhaustive'
SAMPLED = 'lower_bound'
EXACT = 'exact'

ASCENT_STARTS = 32


@dataclass(frozen=True)
class SupNorm:
    value: float
    mode: str

    @property
    def exhaustive(self) -> bool:
        return self.mode == EXHAUSTIVE


def _boolean_text(f: BooleanPolynomial) -> str:
    return f'{f.m}\n' + '\n'.join(f'{format_subset(s)} {v!r}' for s, v in f.items())


def _cache():
    if not settings.configured:
        return None
    from django.core.cache import cache

    return cache


class NormService:
    """Operator and sup norms, memoised in the Django cache by the polynomial's text."""

    def __init__(self, sample_seed: int = 0) -> None:
        self.sample_seed = sample_seed

    def get_operator_norm(self, polynomial: PauliPolynomial) -> float:
        cache = _cache()
        key = make_cache_key('opnorm', serialize_polynomial(polynomial))
        if cache is not None:
            cached_value = cache.get(key)
            if cached_value is not None:
                return cached_value
        value = operator_norm(polynomial)
        if cache is not None:
            cache.set(key, value)
        return value

    def get_sup_norm(self, f: BooleanPolynomial, exhaustive_limit: int | None = None) -> SupNorm:
        limit = get_setting('QCUBE_EXHAUSTIVE_CUBE_LIMIT') if exhaustive_limit is None else exhaustive_limit
        cache = _cache()
        key = make_cache_key(f'supnorm:{limit}:{self.sample_seed}', _boolean_text(f))
        if cache is not None:
            cached_value = cache.get(key)
            if cached_value is not None:
                return cached_value
        result = self._compute_sup_norm(f, limit)
        if cache is not None:
            cache.set(key, result)
        return result

    def _compute_sup_norm(self, f: BooleanPolynomial, limit: int) -> SupNorm:
        if not f:
            return SupNorm(0.0, EXHAUSTIVE)
        if f.m <= limit:
            return SupNorm(cube_abs_max(f.masks(), f.coefficient_array(), f.m), EXHAUSTIVE)
        logger.warning('Sup norm on {-1,1}^%d is sampled; reporting a lower bound.', f.m)
        return SupNorm(self._sampled_sup_norm(f), SAMPLED)

    def _sampled_sup_norm(self, f: BooleanPolynomial) -> float:
        rng = spawn_generator(self.sample_seed, STREAM_SAMPLING)
        total = get_setting('QCUBE_SUP_NORM_SAMPLES')
        chunk = 1 << 14
        best_points: list[np.ndarray] = []
        best_values: list[np.ndarray] = []
        for start in range(0, total, chunk):
            points = random_points(rng, min(chunk, total - start), f.m)
            values = np.abs(eval_boolean_batch(f, points))
            keep = np.argsort(values)[-ASCENT_STARTS:]
            best_points.append(points[keep])
            best_values.append(values[keep])
        candidates = np.concatenate(best_points)
        scores = np.concatenate(best_values)
        starts = candidates[np.argsort(scores)[-ASCENT_STARTS:]]
        return max(self._local_ascent(f, start) for start in starts)

    def _local_ascent(self, f: BooleanPolynomial, point: np.ndarray) -> float:
        current = point.copy()
        value = float(abs(eval_boolean_batch(f, current[None, :])[0]))
        flips = 1 - 2 * np.eye(f.m, dtype=np.int8)
        while True:
            neighbours = current[None, :] * flips
            values = np.abs(eval_boolean_batch(f, neighbours))
            best = int(np.argmax(values))
            if values[best] <= value:
                return value
            current, value = neighbours[best], float(values[best])


norm_service = NormService()


__all__ = ['EXACT', 'EXHAUSTIVE', 'SAMPLED', 'NormService', 'SupNorm', 'norm_service']
