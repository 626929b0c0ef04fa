"""Low-level numeric kernels shared by the Pauli and Boolean-cube code."""
from __future__ import annotations

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - optional accelerator
    njit = None


CHUNK_POINTS = 1 << 15


def walsh_hadamard(values: np.ndarray) -> np.ndarray:
    """Unnormalised Walsh-Hadamard transform along the last axis.

    Entry ``k`` of the result is ``sum_c (-1)^{popcount(c & k)} values[..., c]``.
    """
    out = np.array(values, dtype=np.complex128, copy=True)
    size = out.shape[-1]
    if size & (size - 1):
        raise ValueError('transform length must be a power of two')
    lead = out.shape[:-1]
    h = 1
    while h < size:
        view = out.reshape(*lead, size // (2 * h), 2, h)
        top = view[..., 0, :].copy()
        bottom = view[..., 1, :]
        view[..., 0, :] = top + bottom
        view[..., 1, :] = top - bottom
        h *= 2
    return out


def popcount_parity(values: np.ndarray) -> np.ndarray:
    """Parity (0/1) of the set bits of each unsigned integer."""
    return (np.bitwise_count(values) & 1).astype(np.int8)


def _cube_abs_max_numpy(masks: np.ndarray, coeffs: np.ndarray, m: int) -> float:
    total = 1 << m
    best = 0.0
    for start in range(0, total, CHUNK_POINTS):
        points = np.arange(start, min(total, start + CHUNK_POINTS), dtype=np.uint64)
        parity = popcount_parity(points[:, None] & masks[None, :])
        signs = 1 - 2 * parity.astype(np.float64)
        values = signs @ coeffs
        best = max(best, float(np.max(np.abs(values))))
    return best


if njit is not None:

    @njit(cache=True)
    def _cube_abs_max_gray(masks, coeffs, m):  # pragma: no cover - compiled
        n_terms = masks.shape[0]
        signs = np.ones(n_terms)
        value = 0j
        for t in range(n_terms):
            value += coeffs[t]
        best = abs(value)
        for k in range(1, 1 << m):
            # Gray code: the bit flipped between k-1 and k is the lowest set bit of k.
            bit = 0
            while not (k >> bit) & 1:
                bit += 1
            flip = np.uint64(1) << np.uint64(bit)
            for t in range(n_terms):
                if masks[t] & flip:
                    value -= 2.0 * signs[t] * coeffs[t]
                    signs[t] = -signs[t]
            magnitude = abs(value)
            if magnitude > best:
                best = magnitude
        return best

else:
    _cube_abs_max_gray = None


def cube_abs_max(masks: np.ndarray, coeffs: np.ndarray, m: int) -> float:
    """max over x in {-1,1}^m of |sum_t coeffs[t] * chi_{masks[t]}(x)|.

    ``masks`` are uint64 bitmasks of the subsets (bit j set when j is in S).
    """
    masks = np.ascontiguousarray(masks, dtype=np.uint64)
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    if masks.size == 0:
        return 0.0
    if _cube_abs_max_gray is not None:
        return float(_cube_abs_max_gray(masks, coeffs, m))
    return _cube_abs_max_numpy(masks, coeffs, m)


def subset_products(points: np.ndarray, subsets: list[tuple[int, ...]]) -> np.ndarray:
    """chi_S evaluated at each row of ``points`` (shape N x m, entries +-1).

    Returns an N x len(subsets) float array; subsets of equal size share one gather.
    """
    points = np.asarray(points, dtype=np.int8)
    out = np.empty((points.shape[0], len(subsets)), dtype=np.float64)
    by_size: dict[int, list[int]] = {}
    for column, subset in enumerate(subsets):
        by_size.setdefault(len(subset), []).append(column)
    for size, columns in by_size.items():
        if size == 0:
            out[:, columns] = 1.0
            continue
        index = np.array([subsets[c] for c in columns], dtype=np.intp)
        gathered = points[:, index]
        out[:, columns] = np.prod(gathered, axis=-1, dtype=np.int8)
    return out
