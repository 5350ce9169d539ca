import sys
from pathlib import Path

import numpy as np
import pytest
from scipy.linalg import expm

from gaussnc.covariance import QuadratureCM, from_quadrature, product, squeezed_thermal
from gaussnc.passive import apply, haar_random

sys.path.insert(0, str(Path(__file__).parent))


def random_symplectic(rng, n, scale=0.6):
    """exp(Omega H) for a random symmetric H: a generic (active) symplectic matrix."""
    omega = np.kron(np.eye(n), [[0.0, 1.0], [-1.0, 0.0]])
    h = rng.normal(scale=scale, size=(2 * n, 2 * n))
    return expm(omega @ (h + h.T) / 2)


def random_state(rng, n, pure=False, max_thermal=2.0):
    """Generic Gaussian state S diag(nu) S^T with a random symplectic S."""
    nu = np.full(n, 0.5) if pure else 0.5 + rng.uniform(0, max_thermal, size=n)
    S = random_symplectic(rng, n)
    sigma = S @ np.diag(np.repeat(nu, 2)) @ S.T
    return from_quadrature(QuadratureCM((sigma + sigma.T) / 2))


def random_product_state(rng, n, pure=False):
    """Product of squeezed thermal modes mixed by a Haar unitary."""
    modes = [
        squeezed_thermal(0.0 if pure else rng.uniform(0, 1.5), rng.uniform(-1, 1),
                         rng.uniform(0, 2 * np.pi))
        for _ in range(n)
    ]
    return apply(haar_random(n, rng), product(*modes))


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


ACCEPTANCE_RESULTS = []


def record_acceptance(number, title, passed, detail):
    ACCEPTANCE_RESULTS.append((number, title, passed, detail))
    return passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(
            f"AC{number} {'PASS' if passed else 'FAIL'}  {title}: {detail}")
