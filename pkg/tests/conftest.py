"""Pytest configuration and fixtures."""

import numpy as np
import pytest

from nahm_implosion.config import LabSettings
from nahm_implosion.harness import Laboratory
from nahm_implosion.lie_core import (
    centralizer_blocks,
    principal_partition,
    su2_triple_from_partition,
)
from nahm_implosion.nahm_dynamics import Grid


def imaginary_diagonal(*values):
    """``i diag(values)`` as a complex matrix."""
    return np.diag(1j * np.asarray(values, dtype=float))


@pytest.fixture
def rng():
    """Seeded random generator."""
    return np.random.default_rng(20240611)


@pytest.fixture
def diagonal():
    """Factory for imaginary diagonal matrices."""
    return imaginary_diagonal


@pytest.fixture
def interval_grid():
    """Uniform grid on [0, 1]."""
    return Grid.interval(1.0, 1025)


@pytest.fixture
def halfline_grid():
    """Default geometric half-line grid."""
    return Grid.halfline(40.0, 2048)


@pytest.fixture
def su2_zero_stratum():
    """su(2) with tau = 0, so c is all of su(2)."""
    return centralizer_blocks([np.zeros((2, 2), dtype=complex)] * 3)


@pytest.fixture
def su2_regular_stratum():
    """Regular su(2) stratum with tau_1 = i diag(1, -1)."""
    zero = np.zeros((2, 2), dtype=complex)
    return centralizer_blocks([imaginary_diagonal(1.0, -1.0), zero, zero])


@pytest.fixture
def su3_stratum():
    """su(3) stratum of tau_1 = i diag(1, 1, -2) with blocks (2, 1)."""
    zero = np.zeros((3, 3), dtype=complex)
    return centralizer_blocks([imaginary_diagonal(1.0, 1.0, -2.0), zero, zero])


@pytest.fixture
def principal_su2(su2_zero_stratum):
    """Principal su(2)-triple in su(2)."""
    return su2_triple_from_partition(su2_zero_stratum, principal_partition(su2_zero_stratum))


@pytest.fixture
def su3_sigma(su3_stratum):
    """Principal triple of the (2, 1) centraliser."""
    return su2_triple_from_partition(su3_stratum, principal_partition(su3_stratum))


@pytest.fixture
def lab():
    """Laboratory with a coarser grid for fast scenario runs."""
    return Laboratory(settings=LabSettings(seed=7))
