"""Named entangled target states, single-port corrections and the 4-photon decomposition."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from bellport.errors import ConfigurationError, InvalidIndexError
from bellport.scattering import (
    LABELS,
    PLUS,
    InputConfiguration,
    PostselectedState,
    normalize,
    single_plus_assignment,
)


class StateKind(str, enum.Enum):
    W = "W"
    W_PRIMED = "W'"
    GHZ4 = "GHZ4"
    DOUBLE_SINGLET4 = "DS4"


def _w_sign(n: int, j: int) -> int:
    # alternating for even n, constant for odd n
    return (-1) ** (j - 1) if n % 2 == 0 else 1


def canonical_state(kind: StateKind | str, n: int = 4) -> PostselectedState:
    """Normalized target state of the given kind on ``n`` ports.

    ``W`` has a single ``+`` at port ``j`` with amplitude ``(-1)**(j-1)/sqrt(n)``
    for even ``n`` and ``1/sqrt(n)`` for odd ``n``; this is the sign pattern the
    Bell multiport produces. ``W'`` is the same with ``+`` and ``-`` exchanged.
    Apply ``z`` on every even port to reach the all-positive W form.
    """
    kind = StateKind(kind)
    if kind in (StateKind.W, StateKind.W_PRIMED):
        if n < 2:
            raise ConfigurationError("W states need n >= 2")
        amp = 1.0 / math.sqrt(n)
        terms = {}
        for j in range(1, n + 1):
            labels = single_plus_assignment(n, j)
            if kind is StateKind.W_PRIMED:
                labels = labels.translate(str.maketrans("+-", "-+"))
            terms[labels] = _w_sign(n, j) * amp
        return PostselectedState(n, terms)
    if n != 4:
        raise ConfigurationError(f"{kind.value} is only defined for n = 4")
    if kind is StateKind.GHZ4:
        r = 1.0 / math.sqrt(2.0)
        return PostselectedState(4, {"+-+-": r, "-+-+": -r})
    return PostselectedState(4, {"++--": 0.5, "--++": 0.5, "+--+": -0.5, "-++-": -0.5})


def canonical_states_for(n: int) -> dict[str, PostselectedState]:
    """Every canonical state defined on ``n`` ports, keyed by name."""
    if n < 2:
        return {}
    out = {f"W({n})": canonical_state(StateKind.W, n), f"W'({n})": canonical_state(StateKind.W_PRIMED, n)}
    if n == 4:
        out["GHZ4"] = canonical_state(StateKind.GHZ4)
        out["DS4"] = canonical_state(StateKind.DOUBLE_SINGLET4)
    return out


_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def apply_local_pauli(s: PostselectedState, port: int, axis: str) -> PostselectedState:
    """Apply a Pauli operator to the internal label of the photon in ``port`` (1-based).

    ``|+>`` and ``|->`` play the roles of the computational basis states
    ``|0>`` and ``|1>``, so ``y|+> = i|->`` and ``y|-> = -i|+>``.
    """
    if axis not in _PAULI:
        raise ConfigurationError(f"unknown Pauli axis {axis!r}; expected x, y or z")
    if not 1 <= port <= s.n:
        raise InvalidIndexError(f"port {port} out of range for n={s.n}")
    mat = _PAULI[axis]
    k = port - 1
    terms: dict[str, complex] = {}
    for labels, amp in s.terms.items():
        src = LABELS.index(labels[k])
        for dst, new_label in enumerate(LABELS):
            factor = mat[dst, src]
            if factor != 0:
                key = labels[:k] + new_label + labels[k + 1 :]
                terms[key] = terms.get(key, 0j) + amp * factor
    return PostselectedState(s.n, terms)


def overlap(a: PostselectedState, b: PostselectedState) -> complex:
    """``<a|b>`` without normalization."""
    if a.n != b.n:
        raise ConfigurationError(f"port counts differ ({a.n} vs {b.n})")
    return complex(sum(amp.conjugate() * b.amplitude(k) for k, amp in a.terms.items()))


def fidelity(a: PostselectedState, b: PostselectedState) -> float:
    """Squared overlap of the normalized states, which ignores any global phase."""
    if a.n != b.n:
        raise ConfigurationError(f"port counts differ ({a.n} vs {b.n})")
    f = abs(overlap(normalize(a), normalize(b))) ** 2
    return min(1.0, max(0.0, f))


# label patterns of the 14 input products; gamma_k = prod_i alpha[i, pattern[i]]
GAMMA_PATTERNS = (
    "++--", "--++", "-++-", "+--+",
    "+-+-", "-+-+",
    "+---", "-+--", "--+-", "---+",
    "-+++", "+-++", "++-+", "+++-",
)  # fmt: skip


@dataclass(frozen=True)
class DecompositionResult:
    """Output of the Bell(4) multiport as a combination of DS, GHZ, W and W' components.

    The coefficients multiply the normalized canonical states. With the
    sign conventions of :func:`canonical_state` the combination equals the
    :func:`~bellport.scattering.postselect` output exactly, with no extra phase.
    """

    c_ds: complex
    c_ghz: complex
    c_w: complex
    c_wprime: complex
    gammas: tuple[complex, ...]

    def reconstruct(self) -> PostselectedState:
        parts = (
            (self.c_ds, StateKind.DOUBLE_SINGLET4),
            (self.c_ghz, StateKind.GHZ4),
            (self.c_w, StateKind.W),
            (self.c_wprime, StateKind.W_PRIMED),
        )
        terms: dict[str, complex] = {}
        for coeff, kind in parts:
            for labels, amp in canonical_state(kind, 4).terms.items():
                terms[labels] = terms.get(labels, 0j) + coeff * amp
        return PostselectedState(4, terms)

    def weights(self) -> dict[str, float]:
        """Probability carried by each component; they sum to the success probability."""
        return {
            "DS4": abs(self.c_ds) ** 2,
            "GHZ4": abs(self.c_ghz) ** 2,
            "W(4)": abs(self.c_w) ** 2,
            "W'(4)": abs(self.c_wprime) ** 2,
        }

    def to_json(self) -> dict[str, Any]:
        def pair(z: complex) -> list[float]:
            return [z.real, z.imag]

        return {
            "c_DS": pair(self.c_ds),
            "c_GHZ": pair(self.c_ghz),
            "c_W": pair(self.c_w),
            "c_Wprime": pair(self.c_wprime),
            "gammas": [pair(g) for g in self.gammas],
        }

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> DecompositionResult:
        def z(p: list[float]) -> complex:
            return complex(p[0], p[1])

        return cls(
            z(data["c_DS"]),
            z(data["c_GHZ"]),
            z(data["c_W"]),
            z(data["c_Wprime"]),
            tuple(z(g) for g in data["gammas"]),
        )


def decompose_general4(inp: InputConfiguration) -> DecompositionResult:
    if inp.n != 4:
        raise ConfigurationError(f"the 4-port decomposition needs 4 photons, got {inp.n}")
    alpha = inp.alpha()
    gammas = []
    for pattern in GAMMA_PATTERNS:
        g = 1 + 0j
        for i, lab in enumerate(pattern):
            g *= alpha[i, 0 if lab == PLUS else 1]
        gammas.append(complex(g))
    g = [0j, *gammas]  # 1-based view
    return DecompositionResult(
        c_ds=0.25j * (g[1] + g[2] - g[3] - g[4]),
        # sign fixed against the direct permutation sum: the GHZ input +-+- gives -1/(2 sqrt 2) |GHZ4>
        c_ghz=(g[6] - g[5]) / (2.0 * math.sqrt(2.0)),
        c_w=0.25 * (g[8] + g[10] - g[7] - g[9]),
        c_wprime=0.25 * (g[12] + g[14] - g[11] - g[13]),
        gammas=tuple(gammas),
    )

