"""Half-plane grid and scalar-field containers plus trapezoid quadrature.

The computational box is [-Lx, Lx) x [0, Ly]: periodic in x1 with Nx
points, Ny+1 rows in x2 including both Dirichlet rows j = 0 and j = Ny.
Field arrays have shape (Nx, Ny+1) with x1 along axis 0.

Quadrature is uniform in x1 (periodic trapezoid) and trapezoid in x2
(half-weight on both boundary rows).  With this weighting the discrete
sine/Fourier basis is exactly orthogonal, which later makes the energy
identity hold to roundoff.
"""

from dataclasses import dataclass, field

import numpy as np

__all__ = ["Grid2D", "ScalarField"]


def _is_pow2(n):
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid2D:
    """Uniform periodic-strip grid; lx is the half-width, ly the height."""

    lx: float
    ly: float
    nx: int
    ny: int

    def __post_init__(self):
        if not (self.lx > 0 and self.ly > 0):
            raise ValueError("grid extents must be positive")
        if not (_is_pow2(self.nx) and _is_pow2(self.ny)):
            raise ValueError("nx and ny must be powers of two")
        if self.nx < 16 or self.ny < 16:
            raise ValueError("nx and ny must be at least 16")

    @property
    def dx(self):
        return 2.0 * self.lx / self.nx

    @property
    def dy(self):
        return self.ly / self.ny

    @property
    def x1(self):
        return -self.lx + self.dx * np.arange(self.nx)

    @property
    def x2(self):
        return self.dy * np.arange(self.ny + 1)

    def mesh(self):
        """Coordinate arrays of shape (nx, ny+1)."""
        return np.meshgrid(self.x1, self.x2, indexing="ij")

    @property
    def cell_area(self):
        return self.dx * self.dy

    def weights_x2(self):
        """Trapezoid weights along x2 (half on both Dirichlet rows)."""
        w = np.ones(self.ny + 1)
        w[0] = w[-1] = 0.5
        return w

    def integrate(self, values):
        """Box integral of a sampled integrand."""
        values = np.asarray(values)
        if values.shape != self.shape:
            raise ValueError(f"expected shape {self.shape}, got {values.shape}")
        return self.cell_area * float((values * self.weights_x2()).sum())

    def norm_l2(self, values):
        """L2 norm of a sampled field over the box."""
        return float(np.sqrt(self.integrate(np.asarray(values) ** 2)))

    @property
    def shape(self):
        return (self.nx, self.ny + 1)


@dataclass
class ScalarField:
    """Sampled real field on a Grid2D, shape (nx, ny+1)."""

    grid: Grid2D
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.grid.shape:
            raise ValueError(
                f"values shape {self.values.shape} does not match grid {self.grid.shape}"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field values must be finite")

    @classmethod
    def zeros(cls, grid):
        return cls(grid, np.zeros(grid.shape))

    def copy(self):
        return ScalarField(self.grid, self.values.copy())

    def boundary_rows_max(self):
        """Largest |value| on the two Dirichlet rows."""
        v = self.values
        return float(max(np.abs(v[:, 0]).max(), np.abs(v[:, -1]).max()))

    def integral(self):
        return self.grid.integrate(self.values)

    def norm_l2(self):
        return self.grid.norm_l2(self.values)
