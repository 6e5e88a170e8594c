import numpy as np
import pytest

from ratiomem import FunctionalResponse, GrowthLaw, ModelParams, predation_pressure
from ratiomem.presets import load_preset


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def preset(r=13.0, alpha=1.0):
    """The worked two-holling-predator example used throughout."""
    return load_preset("paper-example", r=r, alpha=alpha,
                       use_default_alpha=alpha is not None)


def random_params(rng, n=None, kind=None, with_alpha=True):
    """Random parameter set guaranteed to admit a positive equilibrium."""
    n = int(rng.integers(1, 4)) if n is None else n
    responses, deaths = [], []
    for _ in range(n):
        k = kind or ("holling" if rng.random() < 0.5 else "ivlev")
        m = float(rng.uniform(1.0, 20.0))
        d = float(m * rng.uniform(0.2, 0.9))
        a = float(rng.uniform(0.3, 5.0))
        responses.append(FunctionalResponse(kind=k, m=m, a=a))
        deaths.append(d)
    params = ModelParams(
        r=1.0,
        growth=GrowthLaw(K=float(rng.uniform(0.5, 5.0))),
        responses=tuple(responses),
        d=tuple(deaths),
        alpha=float(10.0 ** rng.uniform(-1, 1)) if with_alpha else None,
    )
    load = predation_pressure(params)
    return params.with_(r=float(load * rng.uniform(1.2, 4.0)))


def random_pattern_entries(rng, size=None, strict_a11=False):
    """Entries of a random two-predator matrix with the delayed sign pattern.

    Returns (a11, a22, a33, a12, a13, a24, a34, alpha), scalars for
    size=None, else arrays of the given length.
    """
    shape = () if size is None else (size,)
    lo = 1e-3 if strict_a11 else 0.0
    a11 = -rng.uniform(lo, 5.0, shape)
    a22 = -rng.uniform(0.05, 5.0, shape)
    a33 = -rng.uniform(0.05, 5.0, shape)
    a12 = -rng.uniform(0.05, 5.0, shape)
    a13 = -rng.uniform(0.05, 5.0, shape)
    a24 = rng.uniform(0.05, 5.0, shape)
    a34 = rng.uniform(0.05, 5.0, shape)
    alpha = 10.0 ** rng.uniform(-2, 2, shape)
    return a11, a22, a33, a12, a13, a24, a34, alpha


def poly_close(p, q, rtol=1e-9):
    """Coefficientwise closeness relative to the largest coefficient."""
    a = np.asarray(p.coeffs if hasattr(p, "coeffs") else p, dtype=float)
    b = np.asarray(q.coeffs if hasattr(q, "coeffs") else q, dtype=float)
    size = max(a.size, b.size)
    a = np.pad(a, (0, size - a.size))
    b = np.pad(b, (0, size - b.size))
    scale = max(np.max(np.abs(a)), np.max(np.abs(b)), 1e-300)
    return float(np.max(np.abs(a - b))) <= rtol * scale
