"""Matrix permanents.

``permanent_naive`` sums over all permutations and is only meant as a
reference. ``permanent_fast`` uses Ryser's inclusion-exclusion formula

    perm(A) = (-1)^n  sum_{S subset of columns}  (-1)^|S|  prod_i  sum_{j in S} A[i, j]

walking the subsets in binary-reflected Gray-code order so that each step
adds or removes a single column from the running row sums: O(2^n n) work.
The visiting order is fixed, so results are bit-reproducible.
"""

from __future__ import annotations

import itertools

import numba
import numpy as np
from numpy.typing import ArrayLike, NDArray

from bellport.errors import InvalidDimensionError, SizeLimitError
from bellport.matrixcore import as_complex_matrix

NAIVE_MAX_N = 10
FAST_MAX_N = 30


def _check_square(m: ArrayLike, limit: int) -> NDArray[np.complex128]:
    arr = as_complex_matrix(m)
    n, k = arr.shape
    if n != k or n == 0:
        raise InvalidDimensionError(f"permanent needs a non-empty square matrix, got shape {arr.shape}")
    if n > limit:
        raise SizeLimitError(f"n={n} exceeds the limit of {limit}")
    return arr


def permanent_naive(m: ArrayLike) -> complex:
    arr = _check_square(m, NAIVE_MAX_N)
    n = arr.shape[0]
    cols = range(n)
    total = 0j
    for sigma in itertools.permutations(cols):
        term = 1 + 0j
        for i in cols:
            term *= arr[sigma[i], i]
        total += term
    return complex(total)


@numba.njit(cache=True, nogil=True)
def _ryser_gray(a):  # pragma: no cover - compiled
    n = a.shape[0]
    row_sums = np.zeros(n, dtype=np.complex128)
    total = 0j
    gray = 0
    # parity of |S| relative to n; the empty set contributes 0
    odd = False
    for k in range(1, 1 << n):
        new = k ^ (k >> 1)
        flipped = gray ^ new
        col = 0
        while (flipped >> col) & 1 == 0:
            col += 1
        if new & flipped:
            for i in range(n):
                row_sums[i] += a[i, col]
        else:
            for i in range(n):
                row_sums[i] -= a[i, col]
        gray = new
        odd = not odd
        prod = 1.0 + 0j
        for i in range(n):
            prod *= row_sums[i]
        total += -prod if odd else prod
    if n % 2 == 1:
        total = -total
    return total


def permanent_fast(m: ArrayLike) -> complex:
    arr = _check_square(m, FAST_MAX_N)
    if arr.shape[0] == 1:
        return complex(arr[0, 0])
    return complex(_ryser_gray(np.ascontiguousarray(arr)))


def permanent(m: ArrayLike) -> complex:
    """Default permanent used by the simulators."""
    return permanent_fast(m)
