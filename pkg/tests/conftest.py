"""
Pytest configuration for subdiv-repro tests
"""

import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

# Add project root to sys.path so tests can import the flat modules
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))


def random_laurent(rng: random.Random, dimension: int, terms: int = 5, spread: int = 2):
    """Small random Laurent polynomial with rational coefficients"""
    from laurent import LaurentPoly

    coeffs = {}
    for _ in range(terms):
        key = tuple(rng.randint(-spread, spread) for _ in range(dimension))
        coeffs[key] = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    return LaurentPoly(dimension, coeffs)


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def make_laurent(rng):
    """Factory for random Laurent polynomials drawn from the seeded generator"""
    def make(dimension: int, terms: int = 5, spread: int = 2):
        return random_laurent(rng, dimension, terms, spread)
    return make
