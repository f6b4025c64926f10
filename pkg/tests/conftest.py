"""Shared generators for realizable moment sets and random gauges."""
import numpy as np
import pytest

from gramclosure.distributions import mixture_moments
from gramclosure.gauge import GaugeParams


def random_mixture(rng, components=3):
    """Random Gaussian mixture, moderately separated so Gram matrices stay well conditioned."""
    return [GaugeParams(rng.uniform(0.2, 1.0), rng.uniform(-2.0, 2.0),
                        rng.uniform(0.3, 2.0)) for _ in range(components)]


def random_moments(rng, M, components=3):
    """Moments ``u_0..u_M`` of a random 3-component Gaussian mixture."""
    return mixture_moments(random_mixture(rng, components), M)


def random_gauge(rng):
    return GaugeParams(rng.uniform(0.1, 10.0), rng.uniform(-3.0, 3.0),
                       rng.uniform(0.1, 10.0))


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


STD_NORMAL = np.array([1.0, 0.0, 1.0, 0.0, 3.0, 0.0, 15.0, 0.0, 105.0])
SHIFTED_NORMAL = np.array([1.0, 1.0, 2.0, 4.0, 10.0, 26.0, 76.0])  # N(1, 1)


# acceptance outcomes: criterion -> list of (part, ok, detail)
ACCEPTANCE = {}


def record(criterion, part, ok, detail=""):
    ACCEPTANCE.setdefault(criterion, []).append((part, bool(ok), detail))
    print(f"{'PASS' if ok else 'FAIL'} criterion {criterion} [{part}] {detail}")
    return bool(ok)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[criterion]
        ok = all(p[1] for p in parts)
        detail = "; ".join(f"{name}: {'ok' if good else 'FAILED'} {d}".rstrip()
                           for name, good, d in parts)
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}")
