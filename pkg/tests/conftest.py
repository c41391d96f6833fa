import numpy as np
import pytest

from sgcert import StateSpace, preset_ss


@pytest.fixture(scope="session")
def h1():
    return preset_ss("h1")


@pytest.fixture(scope="session")
def h2():
    return preset_ss("h2")


@pytest.fixture(scope="session")
def first_order():
    """1/(s+1): response circle |z - 0.5| = 0.5."""
    return StateSpace([[-1.0]], [[1.0]], [[1.0]], [[0.0]])


def random_stable_ss(rng, n_states, n_io):
    """Random Hurwitz system with spectral abscissa in about [-3, -0.2]."""
    A = rng.standard_normal((n_states, n_states))
    absc = np.max(np.real(np.linalg.eigvals(A)))
    A = A - (absc + rng.uniform(0.2, 3.0)) * np.eye(n_states)
    B = rng.standard_normal((n_states, n_io))
    C = rng.standard_normal((n_io, n_states)) / np.sqrt(n_states)
    D = 0.3 * rng.standard_normal((n_io, n_io))
    return StateSpace(A, B, C, D)
