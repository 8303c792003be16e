"""Transition matrices of lossless multiports.

The entry ``U[j, i]`` of a transition matrix is the amplitude for a photon
entering input ``i`` to leave through output ``j``. Public functions take and
report port indices 1-based; arrays are indexed 0-based internally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray

from bellport.errors import ConfigurationError, InvalidDimensionError, InvalidIndexError

UNITARY_TOL = 1e-10

# exact values of exp(2*pi*i*q/4), q = 0..3
_QUARTER_TURNS = (1 + 0j, 1j, -1 + 0j, -1j)


def as_complex_matrix(m: ArrayLike) -> NDArray[np.complex128]:
    """Coerce ``m`` to a finite 2-D complex array (square not required)."""
    arr = np.array(m, dtype=np.complex128)
    if arr.ndim != 2:
        raise InvalidDimensionError(f"expected a 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ConfigurationError("matrix contains non-finite entries")
    return arr


def _square(m: ArrayLike) -> NDArray[np.complex128]:
    arr = m.entries if isinstance(m, TransitionMatrix) else as_complex_matrix(m)
    if arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise InvalidDimensionError(f"expected a non-empty square matrix, got shape {arr.shape}")
    return arr


def unitarity_defect(m: TransitionMatrix | ArrayLike) -> float:
    """Max-norm of ``U^dagger U - I``."""
    arr = _square(m)
    gram = arr.conj().T @ arr
    return float(np.max(np.abs(gram - np.eye(arr.shape[0]))))


def check_unitary(m: TransitionMatrix | ArrayLike, tol: float = UNITARY_TOL) -> bool:
    if tol <= 0:
        raise ValueError("tol must be positive")
    return unitarity_defect(m) <= tol


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    """Immutable unitary ``n x n`` transition matrix (rows are outputs, columns inputs)."""

    entries: NDArray[np.complex128]

    def __post_init__(self) -> None:
        arr = _square(self.entries).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)
        defect = unitarity_defect(arr)
        if defect > UNITARY_TOL:
            raise ConfigurationError(f"matrix is not unitary (max |U^dag U - I| = {defect:.3e})")

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __getitem__(self, key: tuple[int, int]) -> complex:
        """1-based element access, ``U[j, i]`` with ``j`` the output port."""
        j, i = key
        if not (1 <= j <= self.n and 1 <= i <= self.n):
            raise InvalidIndexError(f"index ({j}, {i}) out of range for n={self.n}")
        return complex(self.entries[j - 1, i - 1])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TransitionMatrix):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.entries, other.entries))

    def __hash__(self) -> int:
        return hash(self.entries.tobytes())

    def adjoint(self) -> TransitionMatrix:
        return TransitionMatrix(self.entries.conj().T)

    def __matmul__(self, other: TransitionMatrix) -> TransitionMatrix:
        return TransitionMatrix(self.entries @ other.entries)

    def to_json(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "entries": [[[z.real, z.imag] for z in row] for row in self.entries.tolist()],
        }

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> TransitionMatrix:
        arr = matrix_from_pairs(data["entries"])
        if "n" in data and data["n"] != arr.shape[0]:
            raise InvalidDimensionError(f"declared n={data['n']} but entries are {arr.shape}")
        return cls(arr)


def matrix_from_pairs(rows: Any) -> NDArray[np.complex128]:
    """Build a complex matrix from row-major ``[[ [re, im], ... ], ...]`` nesting."""
    try:
        arr = np.array(rows, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"entries are not a nested list of [re, im] pairs: {exc}") from exc
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise InvalidDimensionError(f"entries must have shape (n, n, 2), got {arr.shape}")
    return as_complex_matrix(arr[..., 0] + 1j * arr[..., 1])


def root_of_unity_power(k: int, n: int) -> complex:
    """``exp(2 pi i k / n)`` with the exponent reduced mod ``n`` first.

    Equal exponents mod ``n`` therefore give bit-identical values, and quarter
    turns are returned exactly.
    """
    k %= n
    if (4 * k) % n == 0:
        return _QUARTER_TURNS[(4 * k) // n]
    angle = 2.0 * math.pi * k / n
    return complex(math.cos(angle), math.sin(angle))


def build_bell_multiport(n: int) -> TransitionMatrix:
    """Discrete Fourier transform matrix ``U[j, i] = omega_n**((j-1)(i-1)) / sqrt(n)``."""
    if n < 1:
        raise InvalidDimensionError(f"port count must be >= 1, got {n}")
    scale = 1.0 / math.sqrt(n)
    powers = [root_of_unity_power(k, n) for k in range(n)]
    arr = np.empty((n, n), dtype=np.complex128)
    for j in range(n):
        for i in range(n):
            arr[j, i] = powers[(j * i) % n] * scale
    return TransitionMatrix(arr)


def reduced_matrix(m: TransitionMatrix | ArrayLike, drop_row: int, drop_col: int) -> NDArray[np.complex128]:
    """Copy of ``m`` with the 1-based row ``drop_row`` and column ``drop_col`` removed."""
    arr = _square(m)
    n = arr.shape[0]
    if n < 2:
        raise InvalidDimensionError("cannot reduce a 1x1 matrix")
    if not (1 <= drop_row <= n and 1 <= drop_col <= n):
        raise InvalidIndexError(f"drop indices ({drop_row}, {drop_col}) out of range for n={n}")
    out = np.delete(np.delete(arr, drop_row - 1, axis=0), drop_col - 1, axis=1)
    return np.ascontiguousarray(out)
