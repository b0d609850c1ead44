# grid.py
"""Periodic grids, grid fields and their Fourier transforms."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import LayoutError
from .models import FieldLayout

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Grid:
    """
    Periodic rectangular grid of cells.

    Args:
        cells: cells per axis, each at least 2.
        cell_size: edge length of a cell.
        omega: frequency shared by every mode of a solve.
    """

    cells: tuple
    cell_size: float = 1.0
    omega: float = 0.0

    def __post_init__(self):
        cells = tuple(int(n) for n in self.cells)
        if not 1 <= len(cells) <= 3 or any(n < 2 for n in cells):
            raise LayoutError(f"grid needs 1 to 3 axes of at least 2 cells, got {self.cells}")
        if not self.cell_size > 0.0:
            raise LayoutError("cell size must be positive")
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "cell_size", float(self.cell_size))
        object.__setattr__(self, "omega", float(self.omega))

    @property
    def dim(self) -> int:
        return len(self.cells)

    @property
    def cell_count(self) -> int:
        return int(np.prod(self.cells))

    @property
    def axes(self) -> tuple:
        return tuple(range(self.dim))

    def wavevectors(self, spatial_dim: int) -> np.ndarray:
        """
        (cell_count, spatial_dim) wavevectors in FFT order.

        Axes the grid lacks get k = 0; the Nyquist component of an even axis
        is set to 0 so real fields stay real under projection.
        """
        if self.dim > spatial_dim:
            raise LayoutError(f"a {self.dim}-d grid cannot carry {spatial_dim}-d physics")
        components = []
        for n in self.cells:
            k = 2.0 * np.pi * np.fft.fftfreq(n, d=self.cell_size)
            if n % 2 == 0:
                k[n // 2] = 0.0
            components.append(k)
        mesh = np.meshgrid(*components, indexing="ij")
        ks = np.zeros((self.cell_count, spatial_dim))
        for axis, values in enumerate(mesh):
            ks[:, axis] = values.reshape(-1)
        return ks


@dataclass(frozen=True, eq=False)
class GridField:
    """Per-cell N-vectors of one layout; values has shape (*cells, N)."""

    grid: Grid
    layout: FieldLayout
    values: np.ndarray
    domain: str = "space"

    def __post_init__(self):
        values = np.asarray(self.values)
        expected = self.grid.cells + (self.layout.total_dim,)
        if values.shape != expected:
            raise LayoutError(f"grid field must have shape {expected}, got {values.shape}")
        if self.domain not in ("space", "fourier"):
            raise LayoutError(f"domain must be 'space' or 'fourier', got '{self.domain}'")
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, grid: Grid, layout: FieldLayout, dtype=float) -> "GridField":
        return cls(grid, layout, np.zeros(grid.cells + (layout.total_dim,), dtype=dtype))

    @classmethod
    def constant(cls, grid: Grid, layout: FieldLayout, vector) -> "GridField":
        vector = np.asarray(vector)
        if vector.shape != (layout.total_dim,):
            raise LayoutError(f"constant field needs a {layout.total_dim}-vector, got {vector.shape}")
        return cls(grid, layout, np.broadcast_to(vector, grid.cells + vector.shape).copy())

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.values)

    def flat(self) -> np.ndarray:
        """(cell_count, N) view in C order."""
        return self.values.reshape(self.grid.cell_count, self.layout.total_dim)

    def with_values(self, values, domain: str = None) -> "GridField":
        return GridField(self.grid, self.layout, values, domain or self.domain)

    def to_fourier(self) -> "GridField":
        if self.domain == "fourier":
            return self
        spectrum = np.fft.fftn(self.values, axes=self.grid.axes, norm="ortho")
        return self.with_values(spectrum, "fourier")

    def to_space(self) -> "GridField":
        if self.domain == "space":
            return self
        values = np.fft.ifftn(self.values, axes=self.grid.axes, norm="ortho")
        return self.with_values(values, "space")

    def mean(self) -> np.ndarray:
        field = self.to_space()
        return field.flat().mean(axis=0)

    def block(self, name: str) -> np.ndarray:
        """(*cells, block count) values of one block."""
        return self.values[..., self.layout.block_slice(name)]

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    def inner(self, other: "GridField") -> complex:
        """Grid inner product: sum over cells of the componentwise inner product."""
        if other.layout != self.layout or other.grid != self.grid:
            raise LayoutError("inner product of fields on different grids or layouts")
        return complex(np.vdot(self.to_space().values, other.to_space().values))

    def real_if_close(self, tol: float = 1e-12) -> "GridField":
        """Drop a negligible imaginary part of a space-domain field."""
        if self.is_real or self.domain != "space":
            return self
        scale = max(1.0, float(np.max(np.abs(self.values), initial=0.0)))
        if np.max(np.abs(self.values.imag), initial=0.0) <= tol * scale:
            return self.with_values(self.values.real.copy())
        return self


def checkerboard(cells) -> np.ndarray:
    """Two-phase map: phase (sum of half-grid indices) mod 2."""
    cells = tuple(int(n) for n in cells)
    index = np.indices(cells)
    halves = [(index[axis] * 2) // n for axis, n in enumerate(cells)]
    return (sum(halves) % 2).astype(int)


def laminate(cells, axis: int = 0) -> np.ndarray:
    """Series laminate: phase 0 on the first half of axis, phase 1 on the second."""
    cells = tuple(int(n) for n in cells)
    index = np.indices(cells)[axis]
    return ((index * 2) // cells[axis]).astype(int)


def homogeneous(cells) -> np.ndarray:
    return np.zeros(tuple(int(n) for n in cells), dtype=int)


def field_header(field: GridField) -> list:
    n = field.layout.total_dim
    if field.is_real:
        return ["cell_index"] + [f"comp_{j}" for j in range(n)]
    columns = ["cell_index"]
    for j in range(n):
        columns += [f"comp_{j}_re", f"comp_{j}_im"]
    return columns


def write_field_csv(field: GridField, path) -> Path:
    """Space-domain field as CSV, one row per cell in C order."""
    field = field.to_space()
    rows = field.flat()
    index = np.arange(rows.shape[0])[:, None]
    if field.is_real:
        table = np.hstack([index, rows])
    else:
        pairs = np.stack([rows.real, rows.imag], axis=-1).reshape(rows.shape[0], -1)
        table = np.hstack([index, pairs])
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    formats = ["%d"] + ["%.17g"] * (table.shape[1] - 1)
    np.savetxt(path, table, delimiter=",", header=",".join(field_header(field)), comments="", fmt=formats)
    logger.debug("wrote %s (%d cells)", path, rows.shape[0])
    return path


def read_field_csv(path, grid: Grid, layout: FieldLayout) -> GridField:
    path = Path(path)
    with path.open() as handle:
        header = handle.readline().strip().split(",")
    table = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    n = layout.total_dim
    if table.shape[0] != grid.cell_count:
        raise LayoutError(f"{path} holds {table.shape[0]} cells, grid has {grid.cell_count}")
    if len(header) == n + 1:
        values = table[:, 1:]
    elif len(header) == 2 * n + 1:
        values = table[:, 1::2] + 1j * table[:, 2::2]
    else:
        raise LayoutError(f"{path} has {len(header) - 1} value columns, layout needs {n} (or {2 * n} complex)")
    return GridField(grid, layout, values.reshape(grid.cells + (n,)))
