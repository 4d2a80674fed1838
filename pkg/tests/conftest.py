import math

import numpy as np
import pytest

from qce.backend import available_backends, get_backend
from qce.dynamics import CouplingParams
from qce.field import FieldParams, cat_expansion

SQRT2 = math.sqrt(2.0)


@pytest.fixture(params=available_backends())
def backend(request):
    """Run kernel-touching tests under every available backend."""
    return get_backend(request.param)


@pytest.fixture(scope="session")
def unit_coupling():
    return CouplingParams(lam=1.0, g=1.0)


@pytest.fixture(scope="session")
def ref_field_params():
    """Reference superposition parameters for the dynamics runs."""
    return FieldParams(alpha=5.0, r=1.0, theta=0.0, phi=math.pi, c=1.0 / SQRT2)


@pytest.fixture(scope="session")
def ref_expansion(ref_field_params):
    return cat_expansion(ref_field_params)


def random_field_params(rng) -> FieldParams:
    """Random but well-conditioned field parameters."""
    return FieldParams(
        alpha=complex(rng.uniform(-4.0, 4.0), rng.uniform(-1.0, 1.0)),
        r=float(rng.uniform(0.05, 1.5)),
        theta=float(rng.uniform(0.0, 2.0 * math.pi)),
        phi=float(rng.uniform(0.0, 2.0 * math.pi)),
        c=float(rng.uniform(0.0, 1.0)),
    )


def random_coupling(rng) -> CouplingParams:
    return CouplingParams(lam=float(rng.uniform(0.0, 3.0)), g=float(rng.uniform(0.05, 3.0)))


def assert_unit_trace(matrix: np.ndarray, tol: float = 1e-9):
    assert abs(np.trace(matrix).real - 1.0) < tol
