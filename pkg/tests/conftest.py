import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from bellport.scattering import InputConfiguration

settings.register_profile(
    "default", max_examples=50, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def random_input(rng: np.random.Generator, n: int) -> InputConfiguration:
    v = rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return InputConfiguration.from_pairs(map(tuple, v))


def random_unit_disk_matrix(rng: np.random.Generator, n: int) -> np.ndarray:
    r = np.sqrt(rng.uniform(size=(n, n)))
    theta = rng.uniform(0, 2 * np.pi, size=(n, n))
    return r * np.exp(1j * theta)


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def max_amp_diff(a, b) -> float:
    a, b = dict(a), dict(b)
    return max((abs(a.get(k, 0j) - b.get(k, 0j)) for k in set(a) | set(b)), default=0.0)


finite_floats = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False, allow_infinity=False)


@st.composite
def complex_matrices(draw, min_n=1, max_n=6):
    n = draw(st.integers(min_n, max_n))
    re = draw(st.lists(finite_floats, min_size=n * n, max_size=n * n))
    im = draw(st.lists(finite_floats, min_size=n * n, max_size=n * n))
    return (np.array(re) + 1j * np.array(im)).reshape(n, n)


@st.composite
def photon_inputs(draw, n):
    pairs = []
    for _ in range(n):
        theta = draw(st.floats(0, np.pi / 2))
        phi_p = draw(st.floats(0, 2 * np.pi))
        phi_m = draw(st.floats(0, 2 * np.pi))
        pairs.append((np.cos(theta) * np.exp(1j * phi_p), np.sin(theta) * np.exp(1j * phi_m)))
    return InputConfiguration.from_pairs(pairs)


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import VERDICTS
    except ImportError:
        return
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in VERDICTS:
            terminalreporter.write_line(line)
