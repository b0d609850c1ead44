# sampling.py

import numpy as np

from .layouts import layout_of
from .models import PhysicsId, SpectralPoint

K_RANGE = (0.1, 10.0)
OMEGA_RANGE = (0.1, 10.0)


def make_generator(seed: int) -> np.random.Generator:
    """Counter-based Philox generator; the only entropy source of a run."""
    return np.random.Generator(np.random.Philox(int(seed)))


def sample_points(physics, count: int, rng: np.random.Generator) -> list:
    """Uniform draws from k in [0.1, 10]^d, omega in [0.1, 10] (omega = 0 when static)."""
    physics = PhysicsId.parse(physics)
    dim = layout_of(physics).spatial_dim
    ks = rng.uniform(*K_RANGE, size=(count, dim))
    if physics.is_static:
        omegas = np.zeros(count)
    else:
        omegas = rng.uniform(*OMEGA_RANGE, size=count)
    return [SpectralPoint(k, w) for k, w in zip(ks, omegas)]


def random_complex(rng: np.random.Generator, size) -> np.ndarray:
    return rng.standard_normal(size) + 1j * rng.standard_normal(size)
