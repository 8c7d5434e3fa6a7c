import numpy as np
import pytest

from beamforge import Spectrum


@pytest.fixture
def scaled():
    return Spectrum.scaled()


@pytest.fixture
def dirichlet():
    return Spectrum.dirichlet()


def rel_err(a, b):
    return abs(a - b) / max(1.0, abs(a), abs(b))


def solution_vector(sol, n_modes):
    """Flatten a ModalSolution to the kernel layout (alphas then gammas)."""
    row = np.zeros(2 * n_modes)
    for n, (a, g) in sol.modes.items():
        row[n - 1] = a
        row[n_modes + n - 1] = g
    return row
