# models.py

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

import numpy as np

from .errors import LayoutError, PhysicsError


class PhysicsId(str, Enum):
    """The nine systems cast in the canonical form J = LE - s."""

    GRAD2_ELECTROSTATICS = "grad2-electrostatics"
    GRAD2_ELASTICITY = "grad2-elasticity"
    KIRCHHOFF_LOVE = "kirchhoff-love"
    MINDLIN = "mindlin"
    COSSERAT = "cosserat"
    FLEXOELECTRIC = "flexoelectric"
    FLEXOMAGNETOELECTRIC = "flexomagnetoelectric"
    SEEPAGE = "seepage"
    MHD_PERTURBED = "mhd-perturbed"

    @classmethod
    def parse(cls, value) -> "PhysicsId":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value))
        except ValueError:
            known = ", ".join(p.value for p in cls)
            raise PhysicsError(f"unknown physics '{value}' (known: {known})") from None

    @property
    def is_static(self) -> bool:
        return self in STATIC_PHYSICS

    def __str__(self):
        return self.value


STATIC_PHYSICS = frozenset({
    PhysicsId.GRAD2_ELECTROSTATICS,
    PhysicsId.GRAD2_ELASTICITY,
    PhysicsId.FLEXOELECTRIC,
    PhysicsId.FLEXOMAGNETOELECTRIC,
})


@dataclass(frozen=True)
class BlockSpec:
    """One named tensor block of a flattened field."""

    name: str
    shape: tuple

    def __post_init__(self):
        shape = tuple(int(n) for n in self.shape)
        if not 1 <= len(shape) <= 4 or any(n < 1 for n in shape):
            raise LayoutError(f"block '{self.name}' has invalid shape {self.shape}")
        object.__setattr__(self, "shape", shape)

    @property
    def count(self) -> int:
        return math.prod(self.shape)


@dataclass(frozen=True)
class FieldLayout:
    """
    Ordered block descriptor of the N-dimensional field space of one physics.

    Blocks are stored row-major, in layout order; potential_dim is the number
    of scalar potentials generating the E-fields.
    """

    physics: PhysicsId
    spatial_dim: int
    blocks: tuple
    potential_dim: int
    _offsets: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.spatial_dim not in (2, 3):
            raise LayoutError(f"spatial dimension must be 2 or 3, got {self.spatial_dim}")
        if self.potential_dim < 1:
            raise LayoutError("potential dimension must be at least 1")
        blocks = tuple(self.blocks)
        offsets = {}
        start = 0
        for block in blocks:
            if block.name in offsets:
                raise LayoutError(f"duplicate block name '{block.name}'")
            offsets[block.name] = (start, start + block.count)
            start += block.count
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "_offsets", offsets)

    @property
    def total_dim(self) -> int:
        return sum(block.count for block in self.blocks)

    @property
    def block_names(self) -> list:
        return [block.name for block in self.blocks]

    def block(self, name: str) -> BlockSpec:
        for block in self.blocks:
            if block.name == name:
                return block
        raise LayoutError(f"layout of {self.physics} has no block '{name}'")

    def block_slice(self, name: str) -> slice:
        if name not in self._offsets:
            raise LayoutError(f"layout of {self.physics} has no block '{name}'")
        start, stop = self._offsets[name]
        return slice(start, stop)


@dataclass(frozen=True)
class SpectralPoint:
    """A Fourier mode (k, omega); omega is 0 for static physics."""

    k: tuple
    omega: float = 0.0

    def __post_init__(self):
        k = tuple(float(x) for x in np.ravel(np.asarray(self.k, dtype=float)))
        omega = float(self.omega)
        if not all(math.isfinite(x) for x in k) or not math.isfinite(omega):
            raise LayoutError(f"spectral point must be finite, got k={k}, omega={omega}")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "omega", omega)

    @property
    def wavevector(self) -> np.ndarray:
        return np.array(self.k, dtype=float)

    @property
    def dim(self) -> int:
        return len(self.k)

    @property
    def k_squared(self) -> float:
        return float(np.dot(self.k, self.k))

    @property
    def is_degenerate(self) -> bool:
        return self.omega == 0.0 and not any(self.k)


def make_layout(physics: PhysicsId, spatial_dim: int, blocks: Iterable[tuple], potential_dim: int) -> FieldLayout:
    return FieldLayout(
        physics=physics,
        spatial_dim=spatial_dim,
        blocks=tuple(BlockSpec(name, shape) for name, shape in blocks),
        potential_dim=potential_dim,
    )
