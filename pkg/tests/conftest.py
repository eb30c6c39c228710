import numpy as np
import pytest

import extremix as ex

#: canonical fitted parameters used throughout the examples
CANONICAL = ex.GevParams(location=39.22, scale=2.182, shape=-0.237)


@pytest.fixture
def canonical_params():
    return CANONICAL


def bimodal_draws(seed: int, n: int = 51) -> np.ndarray:
    """Sample from 0.9*GEV(0, 1, -0.2) + 0.1*GEV(5, 0.5, -0.2)."""
    rng = ex.SeededRng(seed)
    picks = rng.uniform(n) < 0.9
    u = np.clip(rng.uniform(n), np.nextafter(0.0, 1.0), np.nextafter(1.0, 0.0))
    out = np.empty(n)
    base = ex.GevParams(0.0, 1.0, -0.2)
    alt = ex.GevParams(5.0, 0.5, -0.2)
    out[picks] = ex.quantile(base, u[picks])
    out[~picks] = ex.quantile(alt, u[~picks])
    return out
