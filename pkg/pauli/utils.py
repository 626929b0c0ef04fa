from __future__ import annotations

import hashlib
import math
from itertools import combinations, product
from typing import Iterator

import numpy as np

from .polynomial import PauliIndex


def digest(text: str) -> str:
    return hashlib.sha1(text.encode('utf-8'), usedforsecurity=False).hexdigest()  # noqa: S324


def make_cache_key(namespace: str, text: str) -> str:
    return f"qcube:{namespace}:{digest(text)}"


def iter_pauli_support(n: int, d: int, homogeneous: bool = False) -> Iterator[PauliIndex]:
    """Every s with |s| = d (homogeneous) or |s| <= d, in lexicographic word order."""
    weights = [d] if homogeneous else range(0, min(d, n) + 1)
    indices = []
    for weight in weights:
        if weight > n:
            continue
        for sites in combinations(range(n), weight):
            for kappas in product((1, 2, 3), repeat=weight):
                word = [0] * n
                for site, kappa in zip(sites, kappas):
                    word[site] = kappa
                indices.append(PauliIndex.from_word(word))
    return iter(sorted(indices))


def support_size(n: int, d: int) -> int:
    """sum_{l <= d} 3^l C(n, l)."""
    return sum(3 ** l * math.comb(n, l) for l in range(0, min(d, n) + 1))


def spawn_generator(seed: int, *stream: int) -> np.random.Generator:
    """PCG64 generator for the named sub-stream ``stream`` of ``seed``."""
    if seed < 0:
        raise ValueError(f'seed must be nonnegative, got {seed}')
    sequence = np.random.SeedSequence(seed, spawn_key=tuple(stream))
    return np.random.Generator(np.random.PCG64(sequence))


# Stream identifiers; independent streams never share draws.
STREAM_SIGNS = 0
STREAM_NOISE = 1
STREAM_INSTANCE = 2
STREAM_SAMPLING = 3
