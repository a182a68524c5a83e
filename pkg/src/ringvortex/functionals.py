"""Action, power, energy and their exact discrete gradients.

All functionals are evaluated on the discrete forms of ``radial_core``:

    I     = 1/2 [ m_rur2 + n^2 m_u2_over_r - int r V u^2 - (s/2) m_ru4 ]
    I_b   = I + (beta/2) m_ru2            (= I + beta/(4 pi) P)
    P     = 2 pi m_ru2
    E     = 1/2 [ m_rur2 + m_u2_over_r + (1/2) m_ru4 ]

Gradients are the exact derivatives of these sums with respect to the
interior nodal values, so the discrete Euler-Lagrange residual is just the
gradient of I_b divided by the cell width.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import cho_solve_banded, cholesky_banded

from .potentials import PotentialSpec, node_values
from .radial_core import Profile, RadialGrid, moments, stiffness_bands


def check_winding(n: int) -> int:
    if int(n) != n:
        raise ValueError(f"winding number must be an integer, got {n}")
    if n == 0:
        raise ValueError("winding number must be nonzero")
    return int(n)


def check_sign(s: int) -> int:
    if s not in (1, -1):
        raise ValueError(f"nonlinearity sign must be +1 or -1, got {s}")
    return int(s)


@dataclass(frozen=True)
class FunctionalValues:
    I: float
    P: float
    E: float
    Ibeta: float | None = None

    def to_dict(self) -> dict:
        return {"I": self.I, "P": self.P, "E": self.E, "Ibeta": self.Ibeta}


class DiscreteAction:
    """The discrete action for fixed (grid, V, n, s, beta), acting on interior arrays.

    ``beta=None`` selects the plain action I; a number selects I_beta. Solvers
    work with this object directly to avoid re-evaluating V on every call.
    """

    def __init__(self, grid: RadialGrid, potential: PotentialSpec | NDArray, n: int,
                 s: int = 1, beta: float | None = None):
        self.grid = grid
        self.n = check_winding(n)
        self.s = check_sign(s)
        self.beta = None if beta is None else float(beta)
        if isinstance(potential, PotentialSpec):
            V = node_values(potential, grid)
        else:
            V = np.asarray(potential, dtype=float)
        self.V = V
        self._n2w = (self.n * self.n) * grid.w_inv_r
        self._wV = grid.w_r * V
        self._wV_beta = self._wV if self.beta is None else self._wV - self.beta * grid.w_r

    def _full(self, u: NDArray) -> NDArray:
        full = np.zeros(self.grid.size)
        full[1:-1] = u
        return full

    def parts(self, u: NDArray) -> tuple[float, float, float]:
        """Quadratic form without potential, int r (V - beta) u^2, and m_ru4."""
        g = self.grid
        d = np.diff(self._full(u)) / g.h
        u2 = u * u
        quad = g.h * (g.r_mid @ (d * d)) + self._n2w @ u2
        return float(quad), float(self._wV_beta @ u2), float(g.w_r @ (u2 * u2))

    def value(self, u: NDArray) -> float:
        quad, pot, quart = self.parts(u)
        return 0.5 * (quad - pot - 0.5 * self.s * quart)

    def grad(self, u: NDArray) -> NDArray:
        g = self.grid
        flux = g.r_mid * (np.diff(self._full(u)) / g.h)
        out = flux[:-1] - flux[1:]
        out += (self._n2w - self._wV_beta) * u
        out -= self.s * g.w_r * (u * u * u)
        return out


class SobolevMetric:
    """Gram matrix of <u,v> = int (r u_r v_r + n^2 uv/r) dr with a cached Cholesky factor.

    Used as the preconditioner by both solvers; for n = +-1 it is exactly the
    H inner product.
    """

    def __init__(self, grid: RadialGrid, n: int, shift: NDArray | float = 0.0):
        self.grid = grid
        self.bands = stiffness_bands(grid, (n * n) * grid.w_inv_r + shift)
        self._chol = cholesky_banded(self.bands)

    def solve(self, g: NDArray) -> NDArray:
        return cho_solve_banded((self._chol, False), g)

    def apply(self, u: NDArray) -> NDArray:
        diag, off = self.bands[1], self.bands[0, 1:]
        out = diag * u
        out[:-1] += off * u[1:]
        out[1:] += off * u[:-1]
        return out


def eval_action(grid: RadialGrid, profile: Profile, potential: PotentialSpec, n: int,
                s: int = 1) -> float:
    return DiscreteAction(grid, potential, n, s).value(profile.interior)


def eval_action_beta(grid: RadialGrid, profile: Profile, potential: PotentialSpec, n: int,
                     beta: float, s: int = 1) -> float:
    return DiscreteAction(grid, potential, n, s, beta).value(profile.interior)


def power(grid: RadialGrid, profile: Profile) -> float:
    return 2.0 * np.pi * moments(grid, profile).m_ru2


def energy(grid: RadialGrid, profile: Profile) -> float:
    m = moments(grid, profile)
    return 0.5 * (m.m_rur2 + m.m_u2_over_r + 0.5 * m.m_ru4)


def evaluate(grid: RadialGrid, profile: Profile, potential: PotentialSpec, n: int,
             s: int = 1, beta: float | None = None) -> FunctionalValues:
    I = eval_action(grid, profile, potential, n, s)
    P = power(grid, profile)
    Ib = None
    if beta is not None:
        Ib = eval_action_beta(grid, profile, potential, n, beta, s)
    return FunctionalValues(I=I, P=P, E=energy(grid, profile), Ibeta=Ib)


def gradient(grid: RadialGrid, profile: Profile, potential: PotentialSpec, n: int,
             s: int = 1, beta: float | None = None) -> NDArray:
    """Exact gradient at the interior nodes of I (``beta=None``) or I_beta."""
    return DiscreteAction(grid, potential, n, s, beta).grad(profile.interior)


def residual_norm(grid: RadialGrid, grad_beta: NDArray) -> float:
    """L2 norm of the residual against dr/r, i.e. the r-weighted norm of the I_beta gradient."""
    return float(np.sqrt(np.sum(grad_beta * grad_beta / grid.w_r)))


def el_residual(grid: RadialGrid, profile: Profile, potential: PotentialSpec, n: int,
                beta: float, s: int = 1) -> tuple[NDArray, float]:
    """Discrete (r u_r)_r - n^2 u/r + r(V + s u^2)u - beta r u at the interior nodes.

    Realized as minus the I_beta gradient divided by h; the returned norm is
    ``residual_norm`` of that gradient.
    """
    g = gradient(grid, profile, potential, n, s, beta)
    return -g / grid.h, residual_norm(grid, g)
