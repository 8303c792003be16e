"""W-state success probability as a function of port count, and its exponential fit."""

from __future__ import annotations

import csv
import math
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from bellport.errors import ConfigurationError, InsufficientDataError, ParseError
from bellport.matrixcore import build_bell_multiport
from bellport.scattering import ZERO_TOL, postselect, success_probability, w_input

SWEEP_MIN_N = 2
SWEEP_MAX_N = 20


@dataclass(frozen=True)
class SweepRecord:
    n: int
    p_suc: float


@dataclass(frozen=True)
class FitResult:
    """Least-squares fit of ``ln p = a - b n`` over the nonzero records."""

    a: float
    b: float
    residual: float
    points_used: list[int] = field(default_factory=list)

    def predict(self, n: float) -> float:
        return math.exp(self.a - self.b * n)

    def to_json(self) -> dict[str, Any]:
        return asdict(self)


def w_success_probability(n: int) -> float:
    return success_probability(postselect(build_bell_multiport(n), w_input(n)))


def sweep_w_success(n_min: int = 2, n_max: int = 18, workers: int = 1) -> list[SweepRecord]:
    """Success probability of the W input on Bell(n) for every ``n`` in ``[n_min, n_max]``.

    With ``workers > 1`` the sizes are evaluated in a thread pool; each size is
    computed independently, so the output does not depend on ``workers``.
    """
    if not (SWEEP_MIN_N <= n_min <= n_max <= SWEEP_MAX_N):
        raise ConfigurationError(
            f"need {SWEEP_MIN_N} <= n_min <= n_max <= {SWEEP_MAX_N}, got n_min={n_min}, n_max={n_max}"
        )
    ns = range(n_min, n_max + 1)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            probs = list(pool.map(w_success_probability, ns))
    else:
        probs = [w_success_probability(n) for n in ns]
    return [SweepRecord(n, p) for n, p in zip(ns, probs)]


def fit_exponential(records: Iterable[SweepRecord]) -> FitResult:
    """Ordinary least squares of ``ln p_suc`` against ``n``; zero records are skipped."""
    used = sorted((r for r in records if r.p_suc > ZERO_TOL), key=lambda r: r.n)
    if len(used) < 3:
        raise InsufficientDataError(f"need at least 3 nonzero records for the fit, got {len(used)}")
    x = np.array([r.n for r in used], dtype=float)
    y = np.log([r.p_suc for r in used])
    design = np.column_stack([np.ones_like(x), -x])
    (a, b), *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = float(np.sum((y - design @ np.array([a, b])) ** 2))
    return FitResult(float(a), float(b), resid, [r.n for r in used])


def write_csv(records: Sequence[SweepRecord], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(format_csv(records))


def format_csv(records: Sequence[SweepRecord]) -> str:
    lines = ["n,p_suc"]
    lines += [f"{r.n},{r.p_suc:.15g}" for r in records]
    return "\n".join(lines) + "\n"


def read_csv(path: str | Path) -> list[SweepRecord]:
    records = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["n", "p_suc"]:
            raise ParseError(f"expected header 'n,p_suc', got {header!r}", where=f"{path}:1")
        for lineno, row in enumerate(reader, start=2):
            if not row or not "".join(row).strip():
                continue
            if len(row) != 2:
                raise ParseError(f"expected 2 fields, got {len(row)}", where=f"{path}:{lineno}")
            try:
                n, p = int(row[0]), float(row[1])
            except ValueError as exc:
                raise ParseError(str(exc), where=f"{path}:{lineno}") from exc
            if not (0.0 <= p <= 1.0):
                raise ParseError(f"p_suc={p} outside [0, 1]", where=f"{path}:{lineno}")
            records.append(SweepRecord(n, p))
    return records
