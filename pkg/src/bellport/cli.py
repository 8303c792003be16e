"""Command-line front end.

    bellport simulate --config run.json
    bellport sweep --min 2 --max 18 --out sweep.csv
    bellport fit --in sweep.csv
    bellport verify --max-n 5 [--config run.json]

Exit status: 0 success, 1 verification failure, 2 configuration/parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, TextIO

import numpy as np

from bellport.analysis import canonical_states_for, decompose_general4, fidelity
from bellport.errors import BellportError, ConfigurationError, ParseError, SizeLimitError
from bellport.matrixcore import (
    UNITARY_TOL,
    TransitionMatrix,
    build_bell_multiport,
    matrix_from_pairs,
    unitarity_defect,
)
from bellport.permanent import permanent_fast, permanent_naive
from bellport.scattering import (
    ORACLE_MAX_N,
    InputConfiguration,
    PhotonState,
    normalize,
    one_per_port_slice,
    oracle_full_expansion,
    postselect,
    postselect_direct,
    success_probability,
)
from bellport.sweep import fit_exponential, format_csv, read_csv, sweep_w_success, write_csv

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2


@dataclass(frozen=True)
class RunConfig:
    n_ports: int
    unitary_kind: str  # "bell" or "explicit"
    unitary_entries: np.ndarray
    inputs: InputConfiguration

    def transition_matrix(self) -> TransitionMatrix:
        # raises ConfigurationError for a non-unitary explicit matrix
        return TransitionMatrix(self.unitary_entries)


def _pair(value: Any, where: str) -> complex:
    if (
        not isinstance(value, list)
        or len(value) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value)
    ):
        raise ParseError(f"expected [re, im], got {value!r}", where=where)
    return complex(value[0], value[1])


def parse_config(text: str, source: str = "<config>") -> RunConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, where=f"{source}:{exc.lineno}:{exc.colno}") from exc
    if not isinstance(data, dict):
        raise ParseError("top level must be a JSON object", where=source)

    n = data.get("n_ports")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError(f"must be a positive integer, got {n!r}", where=f"{source}: n_ports")

    unitary = data.get("unitary", "bell")
    if unitary == "bell":
        kind, entries = "bell", build_bell_multiport(n).entries
    elif isinstance(unitary, dict) and "entries" in unitary:
        kind = "explicit"
        try:
            entries = matrix_from_pairs(unitary["entries"])
        except BellportError as exc:
            raise ParseError(str(exc), where=f"{source}: unitary.entries") from exc
        if entries.shape != (n, n):
            raise ConfigurationError(f"{source}: unitary is {entries.shape[0]}x{entries.shape[1]} but n_ports={n}")
    else:
        raise ParseError('must be "bell" or {"entries": [...]}', where=f"{source}: unitary")

    raw_inputs = data.get("inputs")
    if not isinstance(raw_inputs, list):
        raise ParseError("must be a list of {plus, minus} objects", where=f"{source}: inputs")
    if len(raw_inputs) != n:
        raise ConfigurationError(f"{source}: {len(raw_inputs)} inputs given for n_ports={n}")
    photons = []
    for i, item in enumerate(raw_inputs):
        where = f"{source}: inputs[{i}]"
        if not isinstance(item, dict):
            raise ParseError("expected an object with 'plus' and 'minus'", where=where)
        plus = _pair(item.get("plus", [0, 0]), f"{where}.plus")
        minus = _pair(item.get("minus", [0, 0]), f"{where}.minus")
        try:
            photons.append(PhotonState(plus, minus))
        except ConfigurationError as exc:
            raise ConfigurationError(f"{where}: {exc}") from exc
    return RunConfig(n, kind, entries, InputConfiguration(tuple(photons)))


def load_config(path: str | Path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(str(exc), where=str(path)) from exc
    return parse_config(text, str(path))


def rational_label(p: float, max_den: int = 64, tol: float = 1e-12) -> str | None:
    """``"p/q"`` if ``p`` lies within ``tol`` of a fraction with denominator at most ``max_den``."""
    frac = Fraction(p).limit_denominator(max_den)
    if abs(float(frac) - p) <= tol:
        return str(frac)
    return None


def format_probability(p: float) -> str:
    text = f"{p:.15g}"
    rat = rational_label(p)
    return f"{text} (= {rat})" if rat is not None else text


def simulate_report(cfg: RunConfig) -> dict[str, Any]:
    u = cfg.transition_matrix()
    raw = postselect(u, cfg.inputs)
    p = success_probability(raw)
    report: dict[str, Any] = {
        "n_ports": cfg.n_ports,
        "unitary": cfg.unitary_kind,
        "success_probability": p,
        "success_probability_text": format_probability(p),
        "raw_state": raw.to_json(),
    }
    if raw.is_empty:
        report["status"] = "empty postselected state"
        report["normalized_state"] = None
        report["fidelities"] = {}
    else:
        report["status"] = "ok"
        norm = normalize(raw)
        report["normalized_state"] = norm.to_json()
        report["fidelities"] = {name: fidelity(norm, ref) for name, ref in canonical_states_for(cfg.n_ports).items()}
    if cfg.n_ports == 4 and cfg.unitary_kind == "bell":
        dec = decompose_general4(cfg.inputs)
        report["decomposition"] = dec.to_json()
        report["decomposition"]["weights"] = dec.weights()
    return report


# --- verification suite ---


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}" + (f": {self.detail}" if self.detail else "")


def _random_input(rng: np.random.Generator, n: int) -> InputConfiguration:
    v = rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return InputConfiguration.from_pairs(map(tuple, v))


def _max_diff(a: dict[str, complex], b: dict[str, complex]) -> float:
    keys = set(a) | set(b)
    return max((abs(a.get(k, 0j) - b.get(k, 0j)) for k in keys), default=0.0)


def run_verification(max_n: int, cfg: RunConfig | None = None, seed: int = 0, trials: int = 10) -> list[Check]:
    if max_n > ORACLE_MAX_N:
        raise SizeLimitError(f"verify is limited to max_n <= {ORACLE_MAX_N} by the Fock-expansion oracle")
    if max_n < 1:
        raise ConfigurationError("max_n must be >= 1")
    rng = np.random.default_rng(seed)
    checks: list[Check] = []

    if cfg is not None:
        defect = unitarity_defect(cfg.unitary_entries)
        checks.append(
            Check(f"config unitary ({cfg.unitary_kind}, n={cfg.n_ports})", defect <= UNITARY_TOL, f"defect {defect:.2e}")
        )

    for n in range(1, max_n + 1):
        u = build_bell_multiport(n)
        defect = unitarity_defect(u)
        checks.append(Check(f"bell({n}) unitary", defect <= UNITARY_TOL, f"defect {defect:.2e}"))

        worst = 0.0
        for _ in range(trials):
            m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            naive = permanent_naive(m)
            worst = max(worst, abs(permanent_fast(m) - naive) / (1 + abs(naive)))
        checks.append(Check(f"permanent fast vs naive, n={n}", worst <= 1e-10, f"max rel err {worst:.2e}"))

        worst_amp, worst_norm, worst_direct = 0.0, 0.0, 0.0
        for _ in range(trials):
            inp = _random_input(rng, n)
            ps = dict(postselect(u, inp, zero_tol=0.0).terms)
            full = oracle_full_expansion(u, inp)
            worst_amp = max(worst_amp, _max_diff(ps, one_per_port_slice(full)))
            worst_norm = max(worst_norm, abs(sum(abs(a) ** 2 for a in full.values()) - 1.0))
            worst_direct = max(worst_direct, _max_diff(ps, postselect_direct(u, inp)))
        checks.append(Check(f"postselect vs Fock expansion, n={n}", worst_amp <= 1e-10, f"max err {worst_amp:.2e}"))
        checks.append(Check(f"Fock expansion norm, n={n}", worst_norm <= 1e-10, f"max |norm-1| {worst_norm:.2e}"))
        checks.append(Check(f"postselect vs permutation sum, n={n}", worst_direct <= 1e-10, f"max err {worst_direct:.2e}"))

    if cfg is not None and checks[0].passed and cfg.n_ports <= max_n:
        u = cfg.transition_matrix()
        ps = dict(postselect(u, cfg.inputs, zero_tol=0.0).terms)
        err = _max_diff(ps, one_per_port_slice(oracle_full_expansion(u, cfg.inputs)))
        checks.append(Check("config input vs Fock expansion", err <= 1e-10, f"max err {err:.2e}"))
    return checks


# --- argparse plumbing ---


def _emit(payload: str, out: str | None, stdout: TextIO) -> None:
    if out:
        Path(out).write_text(payload)
    else:
        stdout.write(payload)


def _cmd_simulate(args: argparse.Namespace, stdout: TextIO) -> int:
    report = simulate_report(load_config(args.config))
    _emit(json.dumps(report, indent=2) + "\n", args.out, stdout)
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace, stdout: TextIO) -> int:
    records = sweep_w_success(args.min, args.max, workers=args.workers)
    if args.out:
        write_csv(records, args.out)
    else:
        stdout.write(format_csv(records))
    return EXIT_OK


def _cmd_fit(args: argparse.Namespace, stdout: TextIO) -> int:
    result = fit_exponential(read_csv(getattr(args, "in")))
    _emit(json.dumps(result.to_json(), indent=2) + "\n", args.out, stdout)
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace, stdout: TextIO) -> int:
    cfg = load_config(args.config) if args.config else None
    checks = run_verification(args.max_n, cfg, seed=args.seed)
    for c in checks:
        stdout.write(c.line() + "\n")
    failed = sum(not c.passed for c in checks)
    stdout.write(f"{len(checks) - failed}/{len(checks)} checks passed\n")
    return EXIT_OK if failed == 0 else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bellport", description="Postselected multiphoton states of a Bell multiport.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="postselect one input configuration")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep", help="W-state success probability versus n, as CSV")
    p.add_argument("--min", type=int, default=2)
    p.add_argument("--max", type=int, default=18)
    p.add_argument("--out")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("fit", help="fit p = exp(a - b n) to a sweep CSV")
    p.add_argument("--in", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("verify", help="run the oracle-equivalence checks")
    p.add_argument("--max-n", type=int, default=5)
    p.add_argument("--config")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_verify)
    return parser


def main(argv: list[str] | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        return args.func(args, stdout)
    except (BellportError, OSError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
