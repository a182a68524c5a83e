"""Power-constrained minimization of the action.

Minimizes I(u) over profiles with P(u) = P0. The propagation constant comes
out as the Lagrange multiplier

    beta = [int (r V u^2 + s r u^4) dr - (n^2 m_u2_over_r + m_rur2)] / m_ru2

evaluated at the final iterate.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .functionals import (
    DiscreteAction,
    FunctionalValues,
    SobolevMetric,
    check_sign,
    check_winding,
    evaluate,
    residual_norm,
)
from .potentials import PotentialSpec
from .radial_core import Profile, RadialGrid, moments

logger = logging.getLogger(__name__)

_EPS = np.finfo(float).eps
ARMIJO = 1e-4
MAX_UNRESOLVED = 200


@dataclass(frozen=True)
class MinimizeOptions:
    max_iters: int = 200_000
    grad_tol: float = 1e-8
    step_init: float = 1.0
    step_shrink: float = 0.5
    enforce_positive: bool | None = None  # None: on for s=+1, off for s=-1

    def __post_init__(self):
        if not self.grad_tol > 0:
            raise ValueError("grad_tol must be positive")
        if not 0 < self.step_shrink < 1:
            raise ValueError("step_shrink must lie in (0, 1)")
        if not self.step_init > 0:
            raise ValueError("step_init must be positive")
        if self.max_iters < 0:
            raise ValueError("max_iters must be nonnegative")


@dataclass(frozen=True)
class MinimizeResult:
    profile: Profile
    beta: float
    values: FunctionalValues
    residual_norm: float
    iterations: int
    converged: bool
    trace: list = field(repr=False)
    notes: tuple = ()


def tent_profile(grid: RadialGrid, b: float) -> Profile:
    """Piecewise-linear tent with apex b at r = a = R/2."""
    if not b > 0:
        raise ValueError("tent height must be positive")
    a = grid.R / 2
    return Profile.from_function(grid, lambda r: (b / a) * np.minimum(r, grid.R - r))


def tent_height_for_power(R: float, P0: float) -> float:
    """b with (4 pi/3) a^2 b^2 = P0, a = R/2."""
    a = R / 2
    return math.sqrt(3.0 * P0 / (4.0 * math.pi)) / a


def project_power(grid: RadialGrid, profile: Profile, P0: float) -> Profile:
    """Rescale onto {P = P0}; exact because P is homogeneous of degree two."""
    if not P0 > 0:
        raise ValueError("target power must be positive")
    P = 2.0 * math.pi * moments(grid, profile).m_ru2
    if P == 0.0:
        raise ValueError("cannot project the zero profile onto a power level")
    return profile.scaled(math.sqrt(P0 / P))


def lagrange_beta(grid: RadialGrid, profile: Profile, potential: PotentialSpec, n: int,
                  s: int = 1) -> float:
    n = check_winding(n)
    s = check_sign(s)
    m = moments(grid, profile)
    if m.m_ru2 == 0.0:
        raise ValueError("multiplier undefined for a zero-power profile")
    act = DiscreteAction(grid, potential, n, s)
    u = profile.interior
    pot = float(act._wV @ (u * u))
    return (pot + s * m.m_ru4 - (n * n * m.m_u2_over_r + m.m_rur2)) / m.m_ru2


def _roundoff(act: DiscreteAction, u: np.ndarray) -> float:
    quad, pot, quart = act.parts(u)
    return 64 * _EPS * (abs(quad) + abs(pot) + abs(quart))


def minimize_constrained(grid: RadialGrid, potential: PotentialSpec, n: int, P0: float,
                         s: int = 1, opts: MinimizeOptions | None = None) -> MinimizeResult:
    """Projected, Sobolev-preconditioned gradient descent on {P = P0}.

    Each iteration takes the I gradient, converts it to a search direction with
    the H_n metric, removes the component that would change the power, and
    backtracks along it with re-projection onto the constraint. For s = +1 the
    iterate is replaced by |u| after each accepted step.
    """
    n = check_winding(n)
    s = check_sign(s)
    opts = opts or MinimizeOptions()
    if not (math.isfinite(P0) and P0 > 0):
        raise ValueError("P0 must be positive and finite")
    positive = (s == 1) if opts.enforce_positive is None else opts.enforce_positive

    notes = []
    if s == 1 and P0 >= 4 * math.pi * abs(n):
        msg = f"P0={P0} >= 4*pi*|n|: outside the constrained-minimization existence regime"
        warnings.warn(msg, stacklevel=2)
        notes.append(msg)

    act = DiscreteAction(grid, potential, n, s)
    metric = SobolevMetric(grid, n)
    W = grid.w_r
    two_pi = 2.0 * math.pi

    def project(v):
        return v * math.sqrt(P0 / (two_pi * (W @ (v * v))))

    u = project(tent_profile(grid, tent_height_for_power(grid.R, P0)).interior)
    I = act.value(u)
    trace = []
    converged = False
    it = 0
    unresolved = 0
    while True:
        g = act.grad(u)
        Wu = W * u
        beta = -(g @ u) / (Wu @ u)
        rnorm = residual_norm(grid, g + beta * Wu)
        trace.append((I, rnorm))
        if rnorm <= opts.grad_tol:
            converged = True
            break
        if it >= opts.max_iters:
            break
        z = metric.solve(g)
        y = metric.solve(Wu)
        d = z - ((Wu @ z) / (Wu @ y)) * y
        slope = float(g @ d)
        lam = opts.step_init
        accepted = False
        while lam > 1e-14:
            trial = project(u - lam * d)
            if positive:
                trial = np.abs(trial)
            I_t = act.value(trial)
            # strict decrease too: a step below rounding would pass Armijo as a no-op
            if I_t <= I - ARMIJO * lam * slope and I_t < I:
                accepted = True
                break
            lam *= opts.step_shrink
        if accepted:
            unresolved = 0
        else:
            # predicted decrease below what I can resolve: take the plain step
            trial = project(u - opts.step_init * d)
            if positive:
                trial = np.abs(trial)
            I_t = act.value(trial)
            unresolved += 1
            if I_t > I + _roundoff(act, u) or unresolved > MAX_UNRESOLVED:
                logger.info("line search stalled at iteration %d (residual %.3e)", it, rnorm)
                break
        u, I = trial, I_t
        it += 1

    profile = Profile.from_interior(grid, u)
    beta = lagrange_beta(grid, profile, potential, n, s)
    values = evaluate(grid, profile, potential, n, s, beta)
    g = act.grad(u)
    rnorm = residual_norm(grid, g + beta * W * u)
    if not converged:
        notes.append(f"not converged after {it} iterations (residual {rnorm:.3e})")
    return MinimizeResult(profile=profile, beta=beta, values=values, residual_norm=rnorm,
                          iterations=it, converged=converged, trace=trace, notes=tuple(notes))


def defocusing_trap(grid: RadialGrid, potential: PotentialSpec, n: int, beta: float,
                    b: float = 1.0, max_iters: int = 10_000, tol: float = 1e-12):
    """Descend the defocusing I_beta from a tent of height ``b`` at prescribed beta.

    For beta >= V0plus the defocusing I_beta is coercive and its only critical
    point is u = 0, so the descent must collapse the profile. Returns the final
    profile and the list of H-norms along the way.
    """
    act = DiscreteAction(grid, potential, n, s=-1, beta=beta)
    metric = SobolevMetric(grid, n)
    u = tent_profile(grid, b).interior
    I = act.value(u)
    norms = []
    for _ in range(max_iters):
        nrm = math.sqrt(max(u @ metric.apply(u), 0.0))
        norms.append(nrm)
        if nrm <= tol:
            break
        g = act.grad(u)
        d = metric.solve(g)
        slope = float(g @ d)
        lam = 1.0
        while lam > 1e-14:
            trial = u - lam * d
            I_t = act.value(trial)
            if I_t <= I - ARMIJO * lam * slope and I_t < I:
                break
            lam *= 0.5
        else:
            break
        u, I = trial, I_t
    return Profile.from_interior(grid, u), norms
