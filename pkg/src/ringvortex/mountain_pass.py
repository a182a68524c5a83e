"""Min-max search for a nontrivial critical point of I_beta at prescribed beta.

The path is a chain of M knots from the zero profile to an endpoint u0 with
I_beta(u0) < 0. Each iteration moves the highest knot downhill and
occasionally smooths the interior knots. The highest knot is kept on the
ridge: after a descent trial it is rescaled to the maximum of I_beta along
its own ray t -> t*v, which for the cubic nonlinearity is available in closed
form. This is what lets the knot slide along the ridge down to the saddle
instead of falling off it.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .constrained_minimizer import ARMIJO, tent_profile
from .functionals import DiscreteAction, SobolevMetric, check_winding, residual_norm
from .potentials import PotentialSpec, node_values, summarize
from .radial_core import Profile, RadialGrid, h_norm_sq

logger = logging.getLogger(__name__)

LN2 = math.log(2.0)
MAX_DOUBLINGS = 60


@dataclass(frozen=True)
class MountainPassOptions:
    M: int = 41
    max_iters: int = 500_000
    grad_tol: float = 1e-6
    step: float = 1.0
    step_shrink: float = 0.5
    retension_every: int = 10

    def __post_init__(self):
        if self.M < 3:
            raise ValueError("path needs at least 3 knots")
        if not self.grad_tol > 0:
            raise ValueError("grad_tol must be positive")
        if not 0 < self.step_shrink < 1:
            raise ValueError("step_shrink must lie in (0, 1)")
        if not self.step > 0:
            raise ValueError("step must be positive")


@dataclass
class PathState:
    knots: np.ndarray  # (M, N) interior values
    values: np.ndarray
    max_index: int = 0

    def update_max(self) -> int:
        self.max_index = int(np.argmax(self.values))  # first occurrence: lowest index
        return self.max_index

    @property
    def max_value(self) -> float:
        return float(self.values[self.max_index])


@dataclass(frozen=True)
class MountainPassResult:
    profile: Profile
    level: float
    residual_norm: float
    iterations: int
    converged: bool
    trace: list = field(repr=False)
    notes: tuple = ()
    path: PathState | None = field(default=None, repr=False)


def endpoint_height_bound(R: float, n: int, beta: float, V0minus: float) -> float:
    """Smallest tent height b for which the closed-form upper bound on I_beta(tent) is <= -1."""
    a = R / 2
    X = 1 + n * n * (2 * LN2 - 1) + (a * a / 3) * (beta + V0minus)
    return math.sqrt(max(10.0 / (a * a) * (X + 1), 0.0))


def choose_endpoint(grid: RadialGrid, potential: PotentialSpec, n: int, beta: float) -> Profile:
    """Tent profile beyond the mountain ridge (I_beta < 0), doubling b until it is."""
    n = check_winding(n)
    summary = summarize(potential, grid)
    b = endpoint_height_bound(grid.R, n, beta, summary.V0minus)
    if b <= 0:
        b = 1.0
    act = DiscreteAction(grid, potential, n, beta=beta)
    for _ in range(MAX_DOUBLINGS + 1):
        u0 = tent_profile(grid, b)
        if act.value(u0.interior) < 0:
            return u0
        b *= 2
    raise RuntimeError(f"no tent endpoint with I_beta < 0 after {MAX_DOUBLINGS} doublings")


def _ray_max(act: DiscreteAction, v: np.ndarray):
    """(t, value) maximizing I_beta(t v) over t > 0, or None when the ray has no interior max."""
    quad, pot, quart = act.parts(v)
    q = quad - pot
    if q <= 0 or quart <= 0:
        return None
    return math.sqrt(q / quart), q * q / (4 * quart)


def initial_path(act: DiscreteAction, u0: np.ndarray, M: int) -> PathState:
    """Straight path t*u0; the knot closest to the continuous path maximum is moved onto it."""
    t = np.linspace(0.0, 1.0, M)
    knots = t[:, None] * u0[None, :]
    ray = _ray_max(act, u0)
    if ray is not None and 0 < ray[0] < 1:
        k = int(np.clip(np.rint(ray[0] * (M - 1)), 1, M - 2))
        knots[k] = ray[0] * u0
    knots[0] = 0.0
    knots[-1] = u0
    values = np.array([act.value(k) for k in knots])
    path = PathState(knots, values)
    path.update_max()
    return path


def _descend_knot(act, metric, u, value, g, opts):
    """One backtracking step for a knot; returns (new knot, new value) or None."""
    d = metric.solve(g)
    slope = float(g @ d)
    lam = opts.step
    while lam > 1e-12 * opts.step:
        ray = _ray_max(act, u - lam * d)
        # strict decrease too: a step below rounding would pass Armijo as a no-op
        if ray is not None and ray[1] <= value - ARMIJO * lam * slope and ray[1] < value:
            return ray[0] * (u - lam * d), ray[1]
        lam *= opts.step_shrink
    # off the ridge the ray maximum can sit above the knot; plain descent still works
    lam = opts.step
    while lam > 1e-12 * opts.step:
        trial = u - lam * d
        tv = act.value(trial)
        if tv <= value - ARMIJO * lam * slope and tv < value:
            return trial, tv
        lam *= opts.step_shrink
    return None


def _retension(act, path: PathState) -> bool:
    k = path.max_index
    old = path.knots
    new = old.copy()
    new[1:-1] = 0.5 * old[1:-1] + 0.25 * (old[:-2] + old[2:])
    new[k] = old[k]
    values = path.values.copy()
    for j in range(1, len(old) - 1):
        if j != k:
            values[j] = act.value(new[j])
    if values.max() > path.max_value + 1e-12:
        return False
    path.knots, path.values = new, values
    path.update_max()
    return True


def mountain_pass_solve(grid: RadialGrid, potential: PotentialSpec, n: int, beta: float,
                        opts: MountainPassOptions | None = None) -> MountainPassResult:
    n = check_winding(n)
    opts = opts or MountainPassOptions()
    notes = []
    summary = summarize(potential, grid)
    if beta < summary.V0plus:
        notes.append(f"beta={beta} < V0plus={summary.V0plus}: outside the mountain-pass "
                     "existence hypothesis")

    act = DiscreteAction(grid, potential, n, s=1, beta=beta)
    V = node_values(potential, grid)
    metric = SobolevMetric(grid, n, grid.w_r * np.maximum(beta - V, 0.0))
    u0 = choose_endpoint(grid, potential, n, beta).interior
    path = initial_path(act, u0, opts.M)

    trace = []
    converged = False
    it = 0
    while True:
        k = path.update_max()
        u = path.knots[k]
        g = act.grad(u)
        gnorm = residual_norm(grid, g)
        trace.append((path.max_value, gnorm, k))
        if gnorm <= opts.grad_tol:
            converged = True
            break
        if it >= opts.max_iters:
            break
        step = _descend_knot(act, metric, u, path.values[k], g, opts)
        if step is None:
            logger.info("mountain pass stalled at iteration %d (gradient %.3e)", it, gnorm)
            break
        path.knots[k], path.values[k] = step
        it += 1
        if opts.retension_every and it % opts.retension_every == 0:
            path.update_max()
            _retension(act, path)

    k = path.update_max()
    profile = Profile.from_interior(grid, path.knots[k].copy())
    rnorm = residual_norm(grid, act.grad(profile.interior))
    if not converged:
        notes.append(f"not converged after {it} iterations (gradient {rnorm:.3e})")
    if h_norm_sq(grid, profile) == 0.0:
        notes.append("path maximum sits at the zero profile")
    return MountainPassResult(profile=profile, level=path.max_value, residual_norm=rnorm,
                              iterations=it, converged=converged, trace=trace,
                              notes=tuple(notes), path=path)


def mp_level_check(c: float, R: float) -> bool:
    """Whether c clears the mountain-ridge lower bound 1/(8 R^2) (1e-9 slack)."""
    return c >= 1.0 / (8.0 * R * R) - 1e-9
