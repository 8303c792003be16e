"""Single photons through a multiport, postselected on one photon per output port.

Each photon carries a two-level internal label, written ``"+"`` or ``"-"``.
The multiport redirects photons without touching the label, so photon ``i``
leaves as ``sum_j U[j, i] (alpha_i+ b_j+^dag + alpha_i- b_j-^dag)``.

Projecting the product of these onto the "one photon per output" subspace and
grouping by the label found at each output gives, for a label string ``mu``,

    amplitude(mu) = perm(M),   M[j, i] = U[j, i] * alpha[i, mu_j]

which is how :func:`postselect` computes it. :func:`postselect_direct` and
:func:`oracle_full_expansion` are independent references that never call a
permanent routine.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Any

import numpy as np
from numpy.typing import NDArray

from bellport.errors import ConfigurationError, EmptyStateError, SizeLimitError
from bellport.matrixcore import TransitionMatrix
from bellport.permanent import permanent

PLUS = "+"
MINUS = "-"
LABELS = (PLUS, MINUS)
_LABEL_INDEX = {PLUS: 0, MINUS: 1}

NORM_TOL = 1e-9
ZERO_TOL = 1e-12
STORE_TOL = 1e-14

ORACLE_MAX_N = 7
DIRECT_MAX_N = 8

# A label assignment is a string over {+, -}; character j-1 is the label of
# the photon found in output port j.
LabelAssignment = str


def _clean_labels(labels: str) -> str:
    # accept the typographic minus as well
    labels = labels.replace("−", MINUS)
    bad = set(labels) - set(LABELS)
    if bad:
        raise ConfigurationError(f"invalid labels {sorted(bad)} in {labels!r}; use '+' and '-'")
    return labels


@dataclass(frozen=True)
class PhotonState:
    """Internal state ``plus |+> + minus |->`` of one input photon; must be normalized."""

    plus: complex
    minus: complex

    def __post_init__(self) -> None:
        plus, minus = complex(self.plus), complex(self.minus)
        if not all(math.isfinite(x) for x in (plus.real, plus.imag, minus.real, minus.imag)):
            raise ConfigurationError("photon amplitudes must be finite")
        norm = abs(plus) ** 2 + abs(minus) ** 2
        if abs(norm - 1.0) > NORM_TOL:
            raise ConfigurationError(f"photon state not normalized: |a+|^2 + |a-|^2 = {norm!r}")
        object.__setattr__(self, "plus", plus)
        object.__setattr__(self, "minus", minus)

    @classmethod
    def basis(cls, label: str) -> PhotonState:
        label = _clean_labels(label)
        if len(label) != 1:
            raise ConfigurationError(f"expected a single label, got {label!r}")
        return cls(1.0, 0.0) if label == PLUS else cls(0.0, 1.0)

    def amplitude(self, label: str) -> complex:
        return self.plus if label == PLUS else self.minus

    @property
    def basis_label(self) -> str | None:
        """The label if this is exactly ``|+>`` or ``|->``, else None."""
        if self.minus == 0:
            return PLUS
        if self.plus == 0:
            return MINUS
        return None

    def with_phase(self, phase: complex) -> PhotonState:
        return PhotonState(self.plus * phase, self.minus * phase)


@dataclass(frozen=True)
class InputConfiguration:
    """One photon per input port, in port order."""

    photons: tuple[PhotonState, ...]

    def __post_init__(self) -> None:
        photons = tuple(self.photons)
        if not photons:
            raise ConfigurationError("need at least one photon")
        if not all(isinstance(p, PhotonState) for p in photons):
            raise ConfigurationError("photons must be PhotonState instances")
        object.__setattr__(self, "photons", photons)

    @classmethod
    def from_labels(cls, labels: str) -> InputConfiguration:
        """Basis-state input, e.g. ``"+---"`` for one ``|+>`` photon in port 1."""
        return cls(tuple(PhotonState.basis(c) for c in _clean_labels(labels)))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[complex, complex]]) -> InputConfiguration:
        return cls(tuple(PhotonState(p, m) for p, m in pairs))

    @property
    def n(self) -> int:
        return len(self.photons)

    def alpha(self) -> NDArray[np.complex128]:
        """``(n, 2)`` array with ``alpha[i, 0] = alpha_{i+}`` and ``alpha[i, 1] = alpha_{i-}``."""
        return np.array([[p.plus, p.minus] for p in self.photons], dtype=np.complex128)

    def basis_labels(self) -> str | None:
        labels = [p.basis_label for p in self.photons]
        if any(lab is None for lab in labels):
            return None
        return "".join(labels)  # type: ignore[arg-type]


def w_input(n: int) -> InputConfiguration:
    """``|+>`` in port 1 and ``|->`` everywhere else."""
    return InputConfiguration.from_labels(PLUS + MINUS * (n - 1))


@dataclass(frozen=True)
class PostselectedState:
    """Sparse state on the one-photon-per-port subspace.

    ``terms`` maps label strings to amplitudes. Entries with magnitude at or
    below ``STORE_TOL`` are dropped on construction.
    """

    n: int
    terms: Mapping[LabelAssignment, complex] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ConfigurationError("port count must be >= 1")
        clean: dict[str, complex] = {}
        for labels, amp in self.terms.items():
            labels = _clean_labels(labels)
            if len(labels) != self.n:
                raise ConfigurationError(f"assignment {labels!r} does not have {self.n} labels")
            amp = complex(amp)
            if not (math.isfinite(amp.real) and math.isfinite(amp.imag)):
                raise ConfigurationError(f"non-finite amplitude for {labels!r}")
            if abs(amp) > STORE_TOL:
                clean[labels] = clean.get(labels, 0j) + amp
        norm2 = sum(abs(a) ** 2 for a in clean.values())
        if norm2 > 1.0 + NORM_TOL:
            raise ConfigurationError(f"squared norm {norm2!r} exceeds 1")
        object.__setattr__(self, "terms", MappingProxyType(dict(sorted(clean.items()))))

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[LabelAssignment]:
        return iter(self.terms)

    def amplitude(self, labels: LabelAssignment) -> complex:
        return self.terms.get(_clean_labels(labels), 0j)

    def norm_squared(self) -> float:
        return float(sum(abs(a) ** 2 for a in self.terms.values()))

    @property
    def is_empty(self) -> bool:
        return not self.terms

    def scaled(self, factor: complex) -> PostselectedState:
        return PostselectedState(self.n, {k: v * factor for k, v in self.terms.items()})

    def to_json(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "terms": [{"labels": k, "amp": [v.real, v.imag]} for k, v in self.terms.items()],
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> PostselectedState:
        terms: dict[str, complex] = {}
        for entry in data["terms"]:
            re, im = entry["amp"]
            terms[entry["labels"]] = complex(float(re), float(im))
        return cls(int(data["n"]), terms)


def single_plus_assignment(n: int, port: int) -> LabelAssignment:
    """Label string with ``+`` at the 1-based ``port`` and ``-`` elsewhere."""
    return MINUS * (port - 1) + PLUS + MINUS * (n - port)


def _assignments(inp: InputConfiguration) -> Iterator[str]:
    n = inp.n
    fixed = inp.basis_labels()
    if fixed is None:
        for combo in itertools.product(LABELS, repeat=n):
            yield "".join(combo)
        return
    # labels are conserved, so only strings with the input's number of "+" can appear
    k = fixed.count(PLUS)
    for plus_ports in itertools.combinations(range(n), k):
        chars = [MINUS] * n
        for j in plus_ports:
            chars[j] = PLUS
        yield "".join(chars)


def _check_dims(u: TransitionMatrix, inp: InputConfiguration) -> None:
    if u.n != inp.n:
        raise ConfigurationError(f"multiport has {u.n} ports but {inp.n} photons were given")


def amplitude_matrix(u: TransitionMatrix, inp: InputConfiguration, labels: LabelAssignment) -> NDArray[np.complex128]:
    """``M[j, i] = U[j, i] * alpha[i, labels[j]]`` whose permanent is the amplitude of ``labels``."""
    alpha = inp.alpha()
    idx = [_LABEL_INDEX[c] for c in _clean_labels(labels)]
    return np.ascontiguousarray(u.entries * alpha[:, idx].T)


def postselect(u: TransitionMatrix, inp: InputConfiguration, zero_tol: float = ZERO_TOL) -> PostselectedState:
    """Unnormalized state left after detecting exactly one photon in every output port.

    Amplitudes with magnitude ``<= zero_tol`` are treated as exact
    destructive-interference zeros and dropped.
    """
    _check_dims(u, inp)
    terms = {}
    for labels in _assignments(inp):
        amp = permanent(amplitude_matrix(u, inp, labels))
        if abs(amp) > zero_tol:
            terms[labels] = amp
    return PostselectedState(u.n, terms)


def postselect_direct(u: TransitionMatrix, inp: InputConfiguration) -> dict[LabelAssignment, complex]:
    """Reference amplitudes by summing over all ``n!`` routings and ``2^n`` label choices."""
    _check_dims(u, inp)
    n = inp.n
    if n > DIRECT_MAX_N:
        raise SizeLimitError(f"direct permutation sum limited to n <= {DIRECT_MAX_N}")
    U = u.entries
    alpha = inp.alpha()
    out: dict[str, complex] = {}
    for sigma in itertools.permutations(range(n)):
        route = 1 + 0j
        for i in range(n):
            route *= U[sigma[i], i]
        if route == 0:
            continue
        for choice in itertools.product((0, 1), repeat=n):
            coeff = route
            chars = [""] * n
            for i, mu in enumerate(choice):
                coeff *= alpha[i, mu]
                chars[sigma[i]] = LABELS[mu]
            if coeff == 0:
                continue
            key = "".join(chars)
            out[key] = out.get(key, 0j) + complex(coeff)
    return out


def success_probability(s: PostselectedState) -> float:
    return s.norm_squared()


def normalize(s: PostselectedState) -> PostselectedState:
    norm2 = s.norm_squared()
    if norm2 <= 1e-20:
        raise EmptyStateError("cannot normalize an empty postselected state")
    return s.scaled(1.0 / math.sqrt(norm2))


@dataclass(frozen=True)
class FockOccupation:
    """Photon counts per (output port, label) mode.

    ``counts[2*(j-1) + 0]`` holds port ``j``'s ``+`` photons and
    ``counts[2*(j-1) + 1]`` its ``-`` photons.
    """

    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.counts) % 2 or any(c < 0 for c in self.counts):
            raise ConfigurationError("counts must be non-negative, two per port")

    @property
    def n_ports(self) -> int:
        return len(self.counts) // 2

    @property
    def total(self) -> int:
        return sum(self.counts)

    def count(self, port: int, label: str) -> int:
        return self.counts[2 * (port - 1) + _LABEL_INDEX[label]]

    def as_dict(self) -> dict[tuple[int, str], int]:
        return {
            (j + 1, lab): self.counts[2 * j + k]
            for j in range(self.n_ports)
            for k, lab in enumerate(LABELS)
            if self.counts[2 * j + k]
        }

    def is_one_per_port(self) -> bool:
        return all(self.counts[2 * j] + self.counts[2 * j + 1] == 1 for j in range(self.n_ports))

    def assignment(self) -> LabelAssignment:
        if not self.is_one_per_port():
            raise ConfigurationError("occupation does not have one photon per port")
        return "".join(PLUS if self.counts[2 * j] else MINUS for j in range(self.n_ports))


def oracle_full_expansion(u: TransitionMatrix, inp: InputConfiguration) -> dict[FockOccupation, complex]:
    """Full output state in the orthonormal Fock basis, by multiplying out the photon product.

    Photons are applied one at a time, so the intermediate polynomial in the
    ``2n`` output creation operators is kept as a map from exponent vectors to
    coefficients. A monomial with exponents ``n_k`` equals
    ``prod sqrt(n_k!)`` times the normalized Fock state.
    """
    _check_dims(u, inp)
    n = inp.n
    if n > ORACLE_MAX_N:
        raise SizeLimitError(f"full expansion limited to n <= {ORACLE_MAX_N} (cost grows as (2n)^n)")
    U = u.entries
    alpha = inp.alpha()
    poly: dict[tuple[int, ...], complex] = {(0,) * (2 * n): 1 + 0j}
    for i in range(n):
        weights = [
            (2 * j + mu, U[j, i] * alpha[i, mu])
            for j in range(n)
            for mu in (0, 1)
            if U[j, i] * alpha[i, mu] != 0
        ]
        nxt: dict[tuple[int, ...], complex] = {}
        for occ, c in poly.items():
            for mode, w in weights:
                lst = list(occ)
                lst[mode] += 1
                key = tuple(lst)
                nxt[key] = nxt.get(key, 0j) + c * w
        poly = nxt
    out = {}
    for occ, c in poly.items():
        bosonic = math.sqrt(math.prod(math.factorial(k) for k in occ))
        out[FockOccupation(occ)] = complex(c) * bosonic
    return out


def one_per_port_slice(expansion: Mapping[FockOccupation, complex]) -> dict[LabelAssignment, complex]:
    return {occ.assignment(): amp for occ, amp in expansion.items() if occ.is_one_per_port()}


def phase_each_photon(inp: InputConfiguration, phases: Sequence[complex]) -> InputConfiguration:
    if len(phases) != inp.n:
        raise ConfigurationError("need one phase per photon")
    return InputConfiguration(tuple(p.with_phase(ph) for p, ph in zip(inp.photons, phases)))
