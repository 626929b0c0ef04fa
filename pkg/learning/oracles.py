"""Query oracles answering eps -> tr[A rho(eps)]."""
from __future__ import annotations

import abc
import logging
from typing import Callable

import numpy as np

from cube.boolean import SignVector, as_points
from cube.lift import expectation, expectation_batch
from pauli.exceptions import InputError, OracleError
from pauli.polynomial import PauliPolynomial
from pauli.utils import STREAM_NOISE, spawn_generator


logger = logging.getLogger(__name__)


class QueryOracle(abc.ABC):
    """Answers queries on {-1,1}^{3n}."""

    concurrent_safe = False
    ground_truth: PauliPolynomial | None = None

    def __init__(self, n: int) -> None:
        if n < 1:
            raise InputError(f'oracle needs at least one qubit, got {n}')
        self.n = n

    @abc.abstractmethod
    def query(self, eps: SignVector) -> complex:
        pass

    def query_batch(self, points: np.ndarray) -> np.ndarray:
        """Answer every row of an N x 3n sign array, in row order."""
        points = self._check_points(points)
        values = np.empty(points.shape[0], dtype=np.complex128)
        for row in range(points.shape[0]):
            try:
                values[row] = self.query(SignVector.from_array(points[row]))
            except OracleError as exc:
                raise OracleError(str(exc), completed=row) from exc
            except Exception as exc:
                logger.warning('Oracle failed after %d of %d queries: %s', row, points.shape[0], exc)
                raise OracleError(f'query {row} failed: {exc}', completed=row) from exc
        return values

    def _check_points(self, points: np.ndarray) -> np.ndarray:
        points = as_points(points)
        if points.ndim != 2 or points.shape[1] != 3 * self.n:
            raise InputError(f'queries must have shape (N, {3 * self.n}), got {points.shape}')
        return points


class ExactOracle(QueryOracle):
    """Closed-form expectations of a known observable, optionally with Gaussian noise."""

    def __init__(self, polynomial: PauliPolynomial, noise_std: float = 0.0, seed: int = 0) -> None:
        super().__init__(polynomial.n)
        if noise_std < 0.0:
            raise InputError(f'noise_std must be nonnegative, got {noise_std}')
        self.ground_truth = polynomial
        self.noise_std = noise_std
        self._noise = spawn_generator(seed, STREAM_NOISE)
        # noise draws depend on call order
        self.concurrent_safe = noise_std == 0.0

    def query(self, eps: SignVector) -> complex:
        if not self.noise_std:
            return expectation(self.ground_truth, eps)
        return complex(self.query_batch(eps.as_array()[None, :])[0])

    def query_batch(self, points: np.ndarray) -> np.ndarray:
        points = self._check_points(points)
        values = expectation_batch(self.ground_truth, points)
        if self.noise_std:
            values = values + self.noise_std * self._noise.standard_normal(points.shape[0])
        return values


class CallableOracle(QueryOracle):
    """Wraps a user function SignVector -> value."""

    def __init__(self, fn: Callable[[SignVector], complex], n: int, concurrent_safe: bool = False) -> None:
        super().__init__(n)
        self.fn = fn
        self.concurrent_safe = concurrent_safe

    def query(self, eps: SignVector) -> complex:
        return complex(self.fn(eps))


__all__ = ['CallableOracle', 'ExactOracle', 'QueryOracle']
