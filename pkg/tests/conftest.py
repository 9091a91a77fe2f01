import os
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from perturbed_toeplitz import PerturbationParams, PrecisionContext

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

CTX256 = PrecisionContext(256)
CTX53 = PrecisionContext(53)


def make(alpha, n, ctx=CTX256):
    return PerturbationParams.create(alpha, n, ctx)


def random_alphas(seed, count, rmin, rmax, digits=6):
    """Seeded alphas with modulus uniform in [rmin, rmax], as exact decimal rationals."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        r = rng.uniform(rmin, rmax)
        phi = rng.uniform(0, 2 * np.pi)
        re = Fraction(f"{r * np.cos(phi):.{digits}f}")
        im = Fraction(f"{r * np.sin(phi):.{digits}f}")
        out.append((re, im))
    return out


def lapack_eigenvalues(alpha, n):
    """Independent double-precision reference via numpy/LAPACK."""
    a = complex(alpha[0], alpha[1]) if isinstance(alpha, tuple) else complex(alpha)
    m = 2 * np.eye(n, dtype=complex) - np.eye(n, k=1) - np.eye(n, k=-1)
    m[n - 1, 0] = -a
    m[0, n - 1] = -np.conj(a)
    return np.linalg.eigvalsh(m)


@pytest.fixture
def ctx():
    return CTX256
