"""Uniform radial grid on [0, R] and the quadratures used by every functional.

Profiles are piecewise linear between nodes. Derivatives live on cell
midpoints (staggered), so the gradient term is integrated exactly. The
zero-order terms use nodal ("lumped") weights built from the weight function
evaluated at the two adjacent cell midpoints::

    w_f[i] = h * (f(r_{i-1/2}) + f(r_{i+1/2})) / 2

which never evaluates 1/r at r = 0 and keeps every zero-order moment a plain
weighted sum of nodal values. The latter is what makes the discrete action
satisfy I(|u|) <= I(u) and P(|u|) = P(u) exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray


@dataclass(frozen=True)
class RadialGrid:
    """Uniform grid r_i = i*h, i = 0..N+1, with h = R/(N+1).

    Attributes:
        R: Outer radius.
        N: Number of interior nodes.
    """

    R: float
    N: int
    h: float = field(init=False)
    r: NDArray = field(init=False, repr=False)
    r_mid: NDArray = field(init=False, repr=False)
    w_r: NDArray = field(init=False, repr=False)
    w_inv_r: NDArray = field(init=False, repr=False)

    def __post_init__(self):
        if not np.isfinite(self.R) or self.R <= 0:
            raise ValueError(f"grid radius must be positive, got R={self.R}")
        if int(self.N) != self.N or self.N < 2:
            raise ValueError(f"grid needs at least 2 interior nodes, got N={self.N}")
        n_cells = int(self.N) + 1
        h = self.R / n_cells
        r = np.arange(n_cells + 1, dtype=float) * h
        r[-1] = self.R
        r_mid = (np.arange(n_cells, dtype=float) + 0.5) * h
        # nodal weights for interior nodes only (endpoints carry u = 0)
        w_r = 0.5 * h * (r_mid[:-1] + r_mid[1:])
        w_inv_r = 0.5 * h * (1.0 / r_mid[:-1] + 1.0 / r_mid[1:])
        for name, value in (("N", int(self.N)), ("h", h), ("r", r), ("r_mid", r_mid),
                            ("w_r", w_r), ("w_inv_r", w_inv_r)):
            if isinstance(value, np.ndarray):
                value.flags.writeable = False
            object.__setattr__(self, name, value)

    @property
    def interior(self) -> NDArray:
        return self.r[1:-1]

    @property
    def size(self) -> int:
        """Total node count N + 2."""
        return self.N + 2


def build_grid(R: float, N: int) -> RadialGrid:
    return RadialGrid(float(R), N)


@dataclass(frozen=True)
class Profile:
    """Nodal values u_0..u_{N+1} of a radial profile with u_0 = u_{N+1} = 0."""

    grid: RadialGrid
    values: NDArray

    def __post_init__(self):
        u = np.array(self.values, dtype=float)
        if u.shape != (self.grid.size,):
            raise ValueError(f"profile needs {self.grid.size} values, got shape {u.shape}")
        if not np.all(np.isfinite(u)):
            raise ValueError("profile values must be finite")
        if u[0] != 0.0 or u[-1] != 0.0:
            raise ValueError("profile must vanish at r=0 and r=R")
        u.flags.writeable = False
        object.__setattr__(self, "values", u)

    @classmethod
    def from_interior(cls, grid: RadialGrid, interior: NDArray) -> "Profile":
        u = np.zeros(grid.size)
        u[1:-1] = interior
        return cls(grid, u)

    @classmethod
    def from_function(cls, grid: RadialGrid, func) -> "Profile":
        """Sample ``func`` at the interior nodes; the endpoints are pinned to zero."""
        return cls.from_interior(grid, np.asarray(func(grid.interior), dtype=float))

    @property
    def interior(self) -> NDArray:
        return self.values[1:-1]

    def __neg__(self) -> "Profile":
        return Profile(self.grid, -self.values)

    def scaled(self, c: float) -> "Profile":
        return Profile(self.grid, c * self.values)

    def abs(self) -> "Profile":
        return Profile(self.grid, np.abs(self.values))


@dataclass(frozen=True)
class Moments:
    m_ru2: float
    m_rur2: float
    m_u2_over_r: float
    m_ru4: float


def derivative_midpoints(grid: RadialGrid, profile: Profile) -> NDArray:
    """Slopes (u_{i+1} - u_i)/h on the N+1 cells."""
    return np.diff(profile.values) / grid.h


def moments(grid: RadialGrid, profile: Profile) -> Moments:
    u = profile.interior
    d = derivative_midpoints(grid, profile)
    u2 = u * u
    return Moments(
        m_ru2=float(grid.w_r @ u2),
        m_rur2=float(grid.h * (grid.r_mid @ (d * d))),
        m_u2_over_r=float(grid.w_inv_r @ u2),
        m_ru4=float(grid.w_r @ (u2 * u2)),
    )


def h_norm_sq(grid: RadialGrid, profile: Profile) -> float:
    """Squared norm int (r u_r^2 + u^2/r) dr."""
    m = moments(grid, profile)
    return m.m_rur2 + m.m_u2_over_r


def stiffness_bands(grid: RadialGrid, mass_coeff: NDArray | float = 0.0) -> NDArray:
    """Symmetric tridiagonal matrix of the form sum (r_mid/h) (du)^2 + sum c_i u_i^2.

    Returned in the upper banded layout used by ``scipy.linalg.solveh_banded``
    (shape ``(2, N)``). ``mass_coeff`` is added to the diagonal.
    """
    k = grid.r_mid / grid.h
    bands = np.zeros((2, grid.N))
    bands[1] = k[:-1] + k[1:] + mass_coeff
    bands[0, 1:] = -k[1:-1]
    return bands
