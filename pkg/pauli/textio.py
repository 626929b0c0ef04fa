"""Text format for Pauli polynomials: one ``<pauli-string> <re> <im>`` term per line."""
from __future__ import annotations

import logging
from pathlib import Path
from typing import Iterable

from .exceptions import InputError
from .polynomial import PauliIndex, PauliPolynomial


logger = logging.getLogger(__name__)


def parse_polynomial(lines: Iterable[str] | str, n: int | None = None) -> PauliPolynomial:
    """Parse the term list; comments (``#``) and blank lines are skipped, repeats are summed."""
    if isinstance(lines, str):
        if n is None:
            n = _declared_width(lines)
        lines = lines.splitlines()
    terms: dict[PauliIndex, complex] = {}
    width = n
    for lineno, raw in enumerate(lines, start=1):
        text = raw.strip()
        if not text or text.startswith('#'):
            continue
        parts = text.split()
        if len(parts) != 3:
            raise InputError(f'line {lineno}: expected "<pauli-string> <re> <im>", got {text!r}')
        label, real, imag = parts
        index = PauliIndex.from_label(label)
        if width is None:
            width = index.n
        elif index.n != width:
            raise InputError(f'line {lineno}: {label!r} has {index.n} sites, expected {width}')
        try:
            value = complex(float(real), float(imag))
        except ValueError as exc:
            raise InputError(f'line {lineno}: invalid coefficient in {text!r}') from exc
        terms[index] = terms.get(index, 0j) + value
    if width is None:
        raise InputError('no terms and no qubit count given')
    return PauliPolynomial(width, terms)


def serialize_polynomial(polynomial: PauliPolynomial, header: str | None = None) -> str:
    # the width line comes first; parsers read only the first "# n =" comment
    lines = [f'# n = {polynomial.n}']
    if header:
        lines.extend(f'# {line}' for line in header.splitlines())
    for index, value in polynomial.items():
        lines.append(f'{index.label} {value.real!r} {value.imag!r}')
    return '\n'.join(lines) + '\n'


def read_polynomial(path: str | Path) -> PauliPolynomial:
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as exc:
        raise InputError(f'cannot read observable file {path}: {exc}') from exc
    return parse_polynomial(text)


def write_polynomial(polynomial: PauliPolynomial, path: str | Path, header: str | None = None) -> None:
    Path(path).write_text(serialize_polynomial(polynomial, header=header), encoding='utf-8')
    logger.info('Wrote %d terms on %d qubits to %s', len(polynomial), polynomial.n, path)


def _declared_width(text: str) -> int | None:
    # The "# n = <int>" comment lets the zero polynomial round-trip.
    for line in text.splitlines():
        stripped = line.strip()
        if stripped.startswith('#') and stripped[1:].strip().startswith('n ='):
            try:
                return int(stripped[1:].strip()[3:])
            except ValueError:
                return None
    return None


__all__ = ['parse_polynomial', 'read_polynomial', 'serialize_polynomial', 'write_polynomial']
