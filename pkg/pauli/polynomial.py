"""Sparse Pauli polynomials: A = sum_s A_s sigma_s with s in {0,1,2,3}^n."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Tuple

from .exceptions import InputError


logger = logging.getLogger(__name__)


LABELS = 'IXYZ'
SYMBOL_FOR_LABEL = {label: symbol for symbol, label in enumerate(LABELS)}


@dataclass(frozen=True, order=True)
class PauliIndex:
    """A word s in {0,1,2,3}^n packed two bits per site.

    Site 0 occupies the most significant pair, so ordering by ``code`` is the
    lexicographic order of the words.
    """

    n: int
    code: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise InputError(f'qubit count must be nonnegative, got {self.n}')
        if not 0 <= self.code < 4 ** self.n:
            raise InputError(f'code {self.code} does not fit {self.n} sites')

    @classmethod
    def from_word(cls, word: Iterable[int]) -> 'PauliIndex':
        symbols = tuple(word)
        code = 0
        for symbol in symbols:
            if symbol not in (0, 1, 2, 3):
                raise InputError(f'Pauli symbol must be in {{0,1,2,3}}, got {symbol!r}')
            code = (code << 2) | symbol
        return cls(len(symbols), code)

    @classmethod
    def from_label(cls, label: str) -> 'PauliIndex':
        try:
            return cls.from_word(SYMBOL_FOR_LABEL[char] for char in label.upper())
        except KeyError as exc:
            raise InputError(f'invalid Pauli string {label!r}') from exc

    @classmethod
    def identity(cls, n: int) -> 'PauliIndex':
        return cls(n, 0)

    @property
    def word(self) -> Tuple[int, ...]:
        return tuple((self.code >> (2 * (self.n - 1 - site))) & 3 for site in range(self.n))

    @property
    def label(self) -> str:
        return ''.join(LABELS[symbol] for symbol in self.word)

    @property
    def weight(self) -> int:
        return sum(1 for symbol in self.word if symbol)

    def support(self) -> Tuple[Tuple[int, int], ...]:
        """(site, kappa) pairs for the non-identity factors, sites ascending."""
        return tuple((site, symbol) for site, symbol in enumerate(self.word) if symbol)

    def masks(self) -> Tuple[int, int]:
        """(x_mask, z_mask) over matrix-index bits; site 0 is the top bit."""
        x_mask = z_mask = 0
        for site, symbol in self.support():
            bit = 1 << (self.n - 1 - site)
            if symbol in (1, 2):
                x_mask |= bit
            if symbol in (2, 3):
                z_mask |= bit
        return x_mask, z_mask

    def __str__(self) -> str:
        return self.label


class PauliPolynomial:
    """Immutable sparse map PauliIndex -> complex coefficient on ``n`` qubits.

    Exact zeros are dropped on construction; nothing else is pruned.
    """

    __slots__ = ('_n', '_terms')

    def __init__(self, n: int, terms: Mapping[PauliIndex, complex] | None = None) -> None:
        if n < 0:
            raise InputError(f'qubit count must be nonnegative, got {n}')
        cleaned: dict[PauliIndex, complex] = {}
        for index, value in (terms or {}).items():
            if index.n != n:
                raise InputError(f'term {index.label} has {index.n} sites, expected {n}')
            coefficient = complex(value)
            if coefficient != 0:
                cleaned[index] = coefficient
        self._n = n
        self._terms = MappingProxyType(dict(sorted(cleaned.items())))

    @classmethod
    def zero(cls, n: int) -> 'PauliPolynomial':
        return cls(n)

    @classmethod
    def from_labels(cls, terms: Mapping[str, complex]) -> 'PauliPolynomial':
        indices = {PauliIndex.from_label(label): value for label, value in terms.items()}
        widths = {index.n for index in indices}
        if len(widths) > 1:
            raise InputError(f'Pauli strings of mixed lengths: {sorted(widths)}')
        n = widths.pop() if widths else 0
        return cls(n, indices)

    @property
    def n(self) -> int:
        return self._n

    @property
    def terms(self) -> Mapping[PauliIndex, complex]:
        return self._terms

    def items(self) -> Iterator[Tuple[PauliIndex, complex]]:
        return iter(self._terms.items())

    def coefficient(self, index: PauliIndex) -> complex:
        return self._terms.get(index, 0j)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[PauliIndex]:
        return iter(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliPolynomial):
            return NotImplemented
        return self._n == other._n and dict(self._terms) == dict(other._terms)

    def __hash__(self) -> int:
        return hash((self._n, tuple(self._terms.items())))

    def __repr__(self) -> str:
        body = ', '.join(f'{index.label}: {value!r}' for index, value in self.items())
        return f'PauliPolynomial(n={self._n}, {{{body}}})'

    def degree(self) -> int:
        return max((index.weight for index in self._terms), default=0)

    def truncate(self, d: int) -> 'PauliPolynomial':
        return PauliPolynomial(self._n, {i: v for i, v in self.items() if i.weight <= d})

    def is_hermitian(self, tol: float = 0.0) -> bool:
        return all(abs(value.imag) <= tol for value in self._terms.values())

    def adjoint(self) -> 'PauliPolynomial':
        return PauliPolynomial(self._n, {i: v.conjugate() for i, v in self.items()})

    def hermitian_part(self) -> 'PauliPolynomial':
        return PauliPolynomial(self._n, {i: complex(v.real, 0.0) for i, v in self.items()})

    def l2_norm_sq(self) -> float:
        return float(sum(abs(value) ** 2 for value in self._terms.values()))

    def _check_compatible(self, other: 'PauliPolynomial') -> None:
        if not isinstance(other, PauliPolynomial):
            raise InputError(f'expected a PauliPolynomial, got {type(other).__name__}')
        if other._n != self._n:
            raise InputError(f'qubit counts differ: {self._n} vs {other._n}')

    def __add__(self, other: 'PauliPolynomial') -> 'PauliPolynomial':
        self._check_compatible(other)
        merged = dict(self._terms)
        for index, value in other.items():
            merged[index] = merged.get(index, 0j) + value
        return PauliPolynomial(self._n, merged)

    def __neg__(self) -> 'PauliPolynomial':
        return self * -1

    def __sub__(self, other: 'PauliPolynomial') -> 'PauliPolynomial':
        return self + (-other)

    def __mul__(self, scalar: complex) -> 'PauliPolynomial':
        if isinstance(scalar, PauliPolynomial):
            return NotImplemented
        factor = complex(scalar)
        return PauliPolynomial(self._n, {i: v * factor for i, v in self.items()})

    __rmul__ = __mul__


def degree(polynomial: PauliPolynomial) -> int:
    return polynomial.degree()


def truncate(polynomial: PauliPolynomial, d: int) -> PauliPolynomial:
    return polynomial.truncate(d)


def add(p: PauliPolynomial, q: PauliPolynomial) -> PauliPolynomial:
    return p + q


def scale(p: PauliPolynomial, factor: complex) -> PauliPolynomial:
    return p * factor


def l2_distance_sq(p: PauliPolynomial, q: PauliPolynomial) -> float:
    """Parseval form of ||P - Q||_2^2 under the normalised Schatten-2 norm."""
    p._check_compatible(q)
    keys = set(p.terms) | set(q.terms)
    return float(sum(abs(p.coefficient(k) - q.coefficient(k)) ** 2 for k in keys))


__all__ = [
    'PauliIndex',
    'PauliPolynomial',
    'add',
    'degree',
    'l2_distance_sq',
    'scale',
    'truncate',
]
