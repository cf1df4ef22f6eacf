import numpy as np
import pytest

from beamsplit import geometric_mixture_pmf, make_pmf


def random_pmf(rng, max_support=30, min_support=0):
    """Dirichlet-distributed pmf, sometimes with a few exact zeros inside."""
    N = int(rng.integers(min_support, max_support + 1))
    p = rng.dirichlet(np.full(N + 1, 0.7))
    if N > 2 and rng.random() < 0.3:
        holes = rng.choice(N, size=max(1, N // 5), replace=False)
        p[holes] = 0.0
        p[N] = max(p[N], 1e-3)
    return make_pmf(p / p.sum())


def random_mixture(rng, eps=1e-14, max_components=3, mean_range=(0.1, 3.0)):
    k = int(rng.integers(1, max_components + 1))
    weights = rng.dirichlet(np.ones(k))
    means = rng.uniform(*mean_range, size=k)
    return geometric_mixture_pmf(weights, means, eps)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[0][2:])):
            terminalreporter.write_line(line)
