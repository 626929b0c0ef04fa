"""Boolean-cube polynomials f(x) = sum_S f(S) chi_S(x) and sign vectors."""
from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import FrozenSet, Iterable, Iterator, Mapping, Sequence, Tuple

import numpy as np

from pauli.conf import get_setting
from pauli.exceptions import CapacityError, InputError
from pauli.kernels import subset_products


Subset = FrozenSet[int]

MINUS_SIGNS = ('-', '−')


def subset_key(subset: Iterable[int]) -> Tuple[int, Tuple[int, ...]]:
    """Deterministic order on subsets: by size, then lexicographically."""
    members = tuple(sorted(subset))
    return len(members), members


def format_subset(subset: Iterable[int]) -> str:
    """1-based brace notation, e.g. ``{1,6}``."""
    return '{' + ','.join(str(j + 1) for j in sorted(subset)) + '}'


class BooleanPolynomial:
    """Immutable sparse map subset of [m] -> complex coefficient (0-based members)."""

    __slots__ = ('_m', '_terms')

    def __init__(self, m: int, terms: Mapping[Iterable[int], complex] | None = None) -> None:
        if m < 0:
            raise InputError(f'cube dimension must be nonnegative, got {m}')
        cleaned: dict[Subset, complex] = {}
        for subset, value in (terms or {}).items():
            key = frozenset(subset)
            if any(not 0 <= j < m for j in key):
                raise InputError(f'subset {format_subset(key)} is not contained in [{m}]')
            coefficient = complex(value)
            if coefficient != 0:
                cleaned[key] = cleaned.get(key, 0j) + coefficient
        ordered = sorted(((k, v) for k, v in cleaned.items() if v != 0), key=lambda kv: subset_key(kv[0]))
        self._m = m
        self._terms = MappingProxyType(dict(ordered))

    @classmethod
    def character(cls, m: int, subset: Iterable[int], coefficient: complex = 1.0) -> 'BooleanPolynomial':
        return cls(m, {frozenset(subset): coefficient})

    @property
    def m(self) -> int:
        return self._m

    @property
    def terms(self) -> Mapping[Subset, complex]:
        return self._terms

    def items(self) -> Iterator[Tuple[Subset, complex]]:
        return iter(self._terms.items())

    def coefficient(self, subset: Iterable[int]) -> complex:
        return self._terms.get(frozenset(subset), 0j)

    def subsets(self) -> list[Tuple[int, ...]]:
        return [tuple(sorted(subset)) for subset in self._terms]

    def coefficient_array(self) -> np.ndarray:
        return np.array(list(self._terms.values()), dtype=np.complex128)

    def masks(self) -> np.ndarray:
        if self._m > 64:
            raise CapacityError(f'bitmask form needs m <= 64, got {self._m}')
        return np.array([sum(1 << j for j in subset) for subset in self._terms], dtype=np.uint64)

    def degree(self) -> int:
        return max((len(subset) for subset in self._terms), default=0)

    def degree_weights(self) -> np.ndarray:
        """w[k] = sum_{|S|=k} |f(S)|, for k = 0..m."""
        weights = np.zeros(self._m + 1)
        for subset, value in self.items():
            weights[len(subset)] += abs(value)
        return weights

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BooleanPolynomial):
            return NotImplemented
        return self._m == other._m and dict(self._terms) == dict(other._terms)

    def __hash__(self) -> int:
        return hash((self._m, tuple(self._terms.items())))

    def __repr__(self) -> str:
        body = ', '.join(f'{format_subset(s)}: {v!r}' for s, v in self.items())
        return f'BooleanPolynomial(m={self._m}, {{{body}}})'

    def __add__(self, other: 'BooleanPolynomial') -> 'BooleanPolynomial':
        if not isinstance(other, BooleanPolynomial) or other._m != self._m:
            raise InputError('Boolean polynomials must share the cube dimension')
        merged = dict(self._terms)
        for subset, value in other.items():
            merged[subset] = merged.get(subset, 0j) + value
        return BooleanPolynomial(self._m, merged)

    def __mul__(self, scalar: complex) -> 'BooleanPolynomial':
        factor = complex(scalar)
        return BooleanPolynomial(self._m, {s: v * factor for s, v in self.items()})

    __rmul__ = __mul__


@dataclass(frozen=True)
class SignVector:
    """A point of {-1,1}^{3n}; flat index (kappa-1)*n + j for component eps^(kappa)_j."""

    bits: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.bits) % 3:
            raise InputError(f'sign vector length must be a multiple of 3, got {len(self.bits)}')
        if any(bit not in (-1, 1) for bit in self.bits):
            raise InputError('sign vector entries must be +1 or -1')

    @classmethod
    def from_array(cls, values: Sequence[int]) -> 'SignVector':
        return cls(tuple(int(v) for v in values))

    @classmethod
    def from_string(cls, text: str) -> 'SignVector':
        blocks = text.strip().split('|')
        if len(blocks) != 3 or len({len(block) for block in blocks}) != 1:
            raise InputError(f'expected three equal blocks separated by "|", got {text!r}')
        bits = []
        for char in ''.join(blocks):
            if char == '+':
                bits.append(1)
            elif char in MINUS_SIGNS:
                bits.append(-1)
            else:
                raise InputError(f'invalid sign character {char!r} in {text!r}')
        return cls(tuple(bits))

    @property
    def n(self) -> int:
        return len(self.bits) // 3

    def component(self, kappa: int, site: int) -> int:
        """eps^(kappa)_site with kappa in {1,2,3} and 0-based ``site``."""
        if kappa not in (1, 2, 3) or not 0 <= site < self.n:
            raise InputError(f'no component ({kappa}, {site}) in a {self.n}-qubit sign vector')
        return self.bits[(kappa - 1) * self.n + site]

    def as_array(self) -> np.ndarray:
        return np.array(self.bits, dtype=np.int8)

    def to_string(self) -> str:
        chars = ''.join('+' if bit > 0 else '-' for bit in self.bits)
        n = self.n
        return '|'.join(chars[k * n:(k + 1) * n] for k in range(3))

    def __str__(self) -> str:
        return self.to_string()


def as_points(x: SignVector | Sequence[int] | np.ndarray) -> np.ndarray:
    if isinstance(x, SignVector):
        return x.as_array()
    points = np.asarray(x, dtype=np.int8)
    if points.size and not np.all(np.abs(points) == 1):
        raise InputError('cube points must have entries +1 or -1')
    return points


def enumerate_sign_vectors(m: int) -> np.ndarray:
    """All 2^m points as an int8 array; in row k, x_j = -1 exactly when bit j of k is set."""
    limit = get_setting('QCUBE_EXHAUSTIVE_CUBE_LIMIT')
    if m > limit:
        raise CapacityError(f'enumerating 2^{m} points exceeds the exhaustive limit 2^{limit}')
    k = np.arange(1 << m, dtype=np.uint64)[:, None]
    bits = (k >> np.arange(m, dtype=np.uint64)[None, :]) & np.uint64(1)
    return (1 - 2 * bits.astype(np.int8)).astype(np.int8)


def random_points(rng: np.random.Generator, count: int, m: int) -> np.ndarray:
    return (1 - 2 * rng.integers(0, 2, size=(count, m), dtype=np.int8)).astype(np.int8)


def eval_boolean(f: BooleanPolynomial, x: SignVector | Sequence[int]) -> complex:
    point = as_points(x)
    if point.ndim != 1 or point.shape[0] != f.m:
        raise InputError(f'point has length {point.shape[-1] if point.ndim else 0}, expected {f.m}')
    total = 0j
    for subset, value in f.items():
        total += value * int(np.prod(point[list(subset)], dtype=np.int64))
    return total


def eval_boolean_batch(f: BooleanPolynomial, points: np.ndarray) -> np.ndarray:
    points = as_points(points)
    if points.ndim != 2 or points.shape[1] != f.m:
        raise InputError(f'points must have shape (N, {f.m}), got {points.shape}')
    if not f:
        return np.zeros(points.shape[0], dtype=np.complex128)
    characters = subset_products(points, f.subsets())
    return characters @ f.coefficient_array()


__all__ = [
    'BooleanPolynomial',
    'SignVector',
    'enumerate_sign_vectors',
    'eval_boolean',
    'eval_boolean_batch',
    'format_subset',
    'random_points',
    'subset_key',
]
