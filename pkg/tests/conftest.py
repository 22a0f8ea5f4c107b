"""
Global test fixtures for the quaternionic-wavefunction project.
"""

import os
import sys
import pytest

import numpy as np

# Add the parent directory to the path so we can import our modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.core_algebra import Biquaternion
from src.spinor import ChiralSpinorPair


@pytest.fixture
def rng() -> np.random.Generator:
    """
    Returns a numpy generator with a fixed seed.
    """
    return np.random.default_rng(20240611)


@pytest.fixture
def generic_biquaternion() -> Biquaternion:
    """
    A biquaternion with every real component nonzero and distinct.
    """
    return Biquaternion(1 + 2j, -0.5 + 0.25j, 0.75 - 1.5j, -2 + 0.1j)


@pytest.fixture
def sample_pair() -> ChiralSpinorPair:
    """
    A chiral spinor pair with all four components nonzero.
    """
    return ChiralSpinorPair.from_components(0.6 + 0.2j, -0.3 + 0.5j, 0.4 - 0.1j, 0.2 + 0.7j)
