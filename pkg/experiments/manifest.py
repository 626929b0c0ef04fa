"""Flat ``key = value`` experiment manifests.

Grammar: one ``key = value`` pair per line; ``#`` starts a comment; blank lines are
ignored; keys are identifiers; a key may appear once. Values are kept as text and
typed by the manifest forms.
"""
from __future__ import annotations

import re
from pathlib import Path
from typing import Mapping

from .exceptions import ManifestError


KEY_RE = re.compile(r'^[A-Za-z_][A-Za-z0-9_]*$')


def parse_manifest(text: str) -> dict[str, str]:
    entries: dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ManifestError(f'line {number}: expected "key = value", got {raw.strip()!r}')
        key, value = (part.strip() for part in line.split('=', 1))
        if not KEY_RE.match(key):
            raise ManifestError(f'line {number}: invalid key {key!r}')
        if key in entries:
            raise ManifestError(f'line {number}: duplicate key {key!r}')
        entries[key] = value
    return entries


def read_manifest(path: str | Path) -> dict[str, str]:
    try:
        text = Path(path).read_text(encoding='utf-8')
    except OSError as exc:
        raise ManifestError(f'cannot read manifest {path}: {exc}') from exc
    return parse_manifest(text)


def canonical_text(entries: Mapping[str, object]) -> str:
    return ''.join(f'{key} = {entries[key]}\n' for key in sorted(entries))
