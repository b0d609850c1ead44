# errors.py


class GammaformError(ValueError):
    """Base class for every error raised by the gammaform package."""


class LayoutError(GammaformError):
    """A field, block or lattice does not match the layout it is used with."""


class PhysicsError(GammaformError):
    """Unsupported physics, or an operation that physics does not admit."""


class MaterialError(GammaformError):
    """Invalid material parameters (non-positive density, broken symmetries...)."""


class ConfigError(GammaformError):
    """Run configuration failed to load, parse or validate."""


class DenseCapError(GammaformError):
    """The dense direct solve would exceed the configured unknown cap."""

    def __init__(self, unknowns, cap):
        self.unknowns = unknowns
        self.cap = cap
        super().__init__(
            f"direct solve needs {unknowns} unknowns (N x cells), cap is {cap}; "
            "use the fixed_point method or a coarser grid"
        )


class ResonanceError(GammaformError):
    """The reduced kernel G_f vanishes at a lattice point."""

    def __init__(self, k, omega):
        self.k = float(k)
        self.omega = float(omega)
        super().__init__(f"resonance: G_f = 0 at k={self.k:g}, omega={self.omega:g}")


class RecoveryError(GammaformError):
    """Zero-coupling recovery is undefined at k = 0 or omega = 0."""
