import numpy as np
import pytest

from cqgeom.algebra import Biquaternion


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_biquats(rng, n, scale=1.0):
    """n random biquaternions with standard-normal complex coefficients."""
    coeffs = scale * (rng.normal(size=(n, 4)) + 1j * rng.normal(size=(n, 4)))
    return [Biquaternion(*row) for row in coeffs]
