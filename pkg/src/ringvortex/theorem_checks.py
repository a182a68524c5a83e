"""Closed-form bounds, thresholds and identities, and verdicts against solver output."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .functionals import power
from .potentials import PotentialSpec, PotentialSummary, summarize
from .radial_core import Profile, RadialGrid, h_norm_sq

LN2 = math.log(2.0)
# first positive zeros of J0 and J1
BESSEL_J0_ZERO = 2.404825557695773
BESSEL_J1_ZERO = 3.831705970207512
SLACK = 1e-9
CORE_NODES = 8


@dataclass(frozen=True)
class BoundRecord:
    """One verdict. ``required`` records decide the exit status of a solve."""

    name: str
    anchor: str
    inputs: dict
    bound: float | None
    observed: float | None
    verdict: str  # "pass" | "fail" | "n/a"
    required: bool = False
    note: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class BoundReport:
    records: list = field(default_factory=list)

    def add(self, record: BoundRecord) -> BoundRecord:
        self.records.append(record)
        return record

    @property
    def failed(self) -> list:
        return [r for r in self.records if r.required and r.verdict == "fail"]

    @property
    def ok(self) -> bool:
        return not self.failed

    def to_list(self) -> list:
        return [r.to_dict() for r in self.records]


def power_bound_ok(P0: float, n: int) -> bool:
    return P0 < 4 * math.pi * abs(n)


def _beta_lower_bound_p3(P0, R, n, V0minus):
    bracket = V0minus * R * R / 12 + 1 + n * n * (2 * LN2 - 1)
    return 12 / (R * R) * (7 * P0 / (60 * math.pi) - bracket)


def beta_lower_bound(P0: float, R: float, n: int, V0minus: float) -> float:
    """Lower bound on the multiplier of a power-constrained minimizer."""
    if not R > 0:
        raise ValueError("R must be positive")
    value = 7 * P0 / (5 * math.pi * R * R) - V0minus - 12 / (R * R) * (1 + n * n * (2 * LN2 - 1))
    other = _beta_lower_bound_p3(P0, R, n, V0minus)
    if abs(value - other) > 1e-12 * max(abs(value), abs(other), 1.0):
        raise ArithmeticError(f"equivalent bound forms disagree: {value!r} vs {other!r}")
    return value


def beta_negativity_threshold(P0: float, summary: PotentialSummary | float) -> float:
    """|n| above this guarantees beta < 0. ``summary`` may be max r^2 V+ directly."""
    m = summary.max_r2_Vplus if isinstance(summary, PotentialSummary) else float(summary)
    return math.sqrt(P0 * P0 / (4 * math.pi**2) + m)


def nonexistence_verdict(n: int, beta: float, potential: PotentialSpec, grid: RadialGrid,
                         P_observed: float) -> bool:
    """True when no nontrivial solution with this power and beta can exist."""
    if P_observed > 0.5:
        return False
    Vp = summarize(potential, grid).Vplus_nodes
    return bool(np.all(n * n > grid.r**2 * (Vp - beta)))


def defocusing_beta_bound(n: int, R: float, V0plus: float) -> float:
    if not R > 0:
        raise ValueError("R must be positive")
    return -((BESSEL_J0_ZERO**2 + n * n) / (R * R) - V0plus)


def angular_momentum(n: int, P: float) -> float:
    return n * P


@dataclass(frozen=True)
class NonpositiveThresholds:
    beta_negative_guaranteed: bool
    nonexistence: bool


def nonpositive_potential_thresholds(P0: float, n: int, beta: float) -> NonpositiveThresholds:
    """Simplified criteria valid when V+ vanishes identically (caller's responsibility)."""
    return NonpositiveThresholds(
        beta_negative_guaranteed=abs(n) > P0 / (2 * math.pi),
        nonexistence=(P0 <= 0.5 and beta >= 0),
    )


def core_exponent(grid: RadialGrid, profile: Profile, n: int | None = None) -> float | None:
    """Least-squares slope of log u against log r on the first 8 interior nodes.

    Returns None when u is not positive there (slope undefined).
    """
    u = profile.interior[:CORE_NODES]
    if u.size < 2 or np.any(u <= 0):
        return None
    r = grid.interior[:CORE_NODES]
    slope, _ = np.polyfit(np.log(r), np.log(u), 1)
    return float(slope)


def _ge(name, anchor, inputs, bound, observed, required, slack=SLACK):
    if observed >= bound:
        return BoundRecord(name, anchor, inputs, bound, observed, "pass", required)
    if observed >= bound - slack:
        return BoundRecord(name, anchor, inputs, bound, observed, "pass", required,
                           "within slack")
    return BoundRecord(name, anchor, inputs, bound, observed, "fail", required)


def _lt(name, anchor, inputs, bound, observed, required, slack=SLACK):
    if observed < bound:
        return BoundRecord(name, anchor, inputs, bound, observed, "pass", required)
    if observed < bound + slack:
        return BoundRecord(name, anchor, inputs, bound, observed, "pass", required,
                           "within slack")
    return BoundRecord(name, anchor, inputs, bound, observed, "fail", required)


def check_bounds(grid: RadialGrid, potential: PotentialSpec, n: int, s: int = 1,
                 P0: float | None = None, beta: float | None = None) -> BoundReport:
    """Closed-form quantities for a parameter set, with no solve."""
    summary = summarize(potential, grid)
    rep = BoundReport()
    R = grid.R
    if P0 is not None and s == 1:
        ok = power_bound_ok(P0, n)
        rep.add(BoundRecord("power_bound", "P0 < 4*pi*|n|", {"P0": P0, "n": n},
                            4 * math.pi * abs(n), P0, "pass" if ok else "fail"))
        rep.add(BoundRecord("beta_lower_bound", "beta >= lower bound",
                            {"P0": P0, "R": R, "n": n, "V0minus": summary.V0minus},
                            beta_lower_bound(P0, R, n, summary.V0minus), None, "n/a"))
        thr = beta_negativity_threshold(P0, summary)
        rep.add(BoundRecord("beta_negativity_threshold", "|n| > threshold => beta < 0",
                            {"P0": P0, "max_r2_Vplus": summary.max_r2_Vplus}, thr, abs(n),
                            "pass" if abs(n) > thr else "fail"))
        if summary.V0plus == 0.0 and beta is not None:
            t = nonpositive_potential_thresholds(P0, n, beta)
            rep.add(BoundRecord("nonpositive_potential_thresholds", "V+ = 0 simplifications",
                                {"P0": P0, "n": n, "beta": beta}, None, None, "n/a",
                                note=f"beta_negative_guaranteed={t.beta_negative_guaranteed}, "
                                     f"nonexistence={t.nonexistence}"))
    if s == -1:
        rep.add(BoundRecord("defocusing_beta_bound", "beta < -((r0^2+n^2)/R^2 - V0plus)",
                            {"n": n, "R": R, "V0plus": summary.V0plus},
                            defocusing_beta_bound(n, R, summary.V0plus), None, "n/a"))
    if beta is not None and s == 1:
        ok = beta >= summary.V0plus
        rep.add(BoundRecord("mountain_pass_hypothesis", "beta >= V0plus",
                            {"beta": beta, "V0plus": summary.V0plus}, summary.V0plus, beta,
                            "pass" if ok else "fail",
                            note="" if ok else "outside the mountain-pass existence hypothesis"))
        rep.add(BoundRecord("mountain_pass_level_floor", "c >= 1/(8 R^2)", {"R": R},
                            1 / (8 * R * R), None, "n/a"))
        if P0 is not None:
            rep.add(BoundRecord("nonexistence_regime", "P <= 1/2 and n^2 > r^2 (V+ - beta)",
                                {"n": n, "beta": beta, "P": P0}, 0.5, P0,
                                "pass" if nonexistence_verdict(n, beta, potential, grid, P0)
                                else "fail",
                                note="pass means no nontrivial solution can exist here"))
    return rep


def check_minimizer(grid: RadialGrid, potential: PotentialSpec, n: int, s: int, P0: float,
                    result) -> BoundReport:
    """Verdicts for a power-constrained minimization result."""
    summary = summarize(potential, grid)
    rep = BoundReport()
    R = grid.R
    beta = result.beta
    P = result.values.P
    converged = result.converged
    rep.add(BoundRecord("angular_momentum", "L_z = n P", {"n": n, "P": P}, None,
                        angular_momentum(n, P), "pass"))
    if s == 1:
        regime = power_bound_ok(P0, n)
        rep.add(BoundRecord("power_bound", "P0 < 4*pi*|n|", {"P0": P0, "n": n},
                            4 * math.pi * abs(n), P0, "pass" if regime else "fail",
                            note="" if regime else "outside the existence regime; no claims made"))
        req = converged and regime
        rep.add(_ge("beta_lower_bound", "beta >= lower bound",
                    {"P0": P0, "R": R, "n": n, "V0minus": summary.V0minus},
                    beta_lower_bound(P0, R, n, summary.V0minus), beta, req))
        rep.add(_lt("power_below_4pi_n", "P < 4*pi*|n|", {"n": n}, 4 * math.pi * abs(n), P,
                    req))
        thr = beta_negativity_threshold(P0, summary)
        if abs(n) > thr:
            rep.add(_lt("beta_negative", "|n| > threshold => beta < 0",
                        {"P0": P0, "threshold": thr}, 0.0, beta, converged))
        else:
            rep.add(BoundRecord("beta_negative", "|n| > threshold => beta < 0",
                                {"P0": P0, "threshold": thr}, 0.0, beta, "n/a",
                                note="|n| does not exceed the threshold"))
        umin = float(result.profile.interior.min())
        rep.add(BoundRecord("positivity", "u > 0 on (0, R)", {}, 0.0, umin,
                            "pass" if umin > 0 else "fail", req))
    else:
        bound = defocusing_beta_bound(n, R, summary.V0plus)
        rep.add(_lt("defocusing_beta_bound", "beta < -((r0^2+n^2)/R^2 - V0plus)",
                    {"n": n, "R": R, "V0plus": summary.V0plus}, bound, beta, converged))
        rep.add(_lt("defocusing_beta_below_V0plus", "beta >= V0plus forces u = 0",
                    {"V0plus": summary.V0plus}, summary.V0plus, beta, converged))
    nonexist = nonexistence_verdict(n, beta, potential, grid, P)
    nontrivial = h_norm_sq(grid, result.profile) > 0
    rep.add(BoundRecord("nonexistence_regime", "P <= 1/2 and n^2 > r^2 (V+ - beta)",
                        {"n": n, "beta": beta, "P": P}, 0.5, P,
                        "fail" if (nonexist and nontrivial and converged) else "pass",
                        converged and s == 1,
                        "converged nontrivial profile inside the nonexistence regime"
                        if nonexist else ""))
    slope = core_exponent(grid, result.profile, n)
    rep.add(BoundRecord("core_exponent", "u ~ r^|n| near r = 0", {"n": n}, float(abs(n)),
                        slope, "n/a", note="slope undefined" if slope is None else ""))
    return rep


def check_mountain_pass(grid: RadialGrid, potential: PotentialSpec, n: int, beta: float,
                        result) -> BoundReport:
    summary = summarize(potential, grid)
    rep = BoundReport()
    R = grid.R
    hyp = beta >= summary.V0plus
    rep.add(BoundRecord("mountain_pass_hypothesis", "beta >= V0plus",
                        {"beta": beta, "V0plus": summary.V0plus}, summary.V0plus, beta,
                        "pass" if hyp else "fail",
                        note="" if hyp else "outside the mountain-pass existence hypothesis"))
    req = result.converged and hyp
    rep.add(_ge("mountain_pass_level", "c >= 1/(8 R^2)", {"R": R}, 1 / (8 * R * R),
                result.level, req))
    hn = h_norm_sq(grid, result.profile)
    rep.add(BoundRecord("nontrivial", "u != 0", {}, 0.0, hn, "pass" if hn > 0 else "fail", req))
    P = power(grid, result.profile)
    rep.add(BoundRecord("angular_momentum", "L_z = n P", {"n": n, "P": P}, None,
                        angular_momentum(n, P), "pass"))
    nonexist = nonexistence_verdict(n, beta, potential, grid, P)
    rep.add(BoundRecord("nonexistence_regime", "P <= 1/2 and n^2 > r^2 (V+ - beta)",
                        {"n": n, "beta": beta, "P": P}, 0.5, P,
                        "fail" if (nonexist and hn > 0 and result.converged) else "pass",
                        result.converged))
    return rep
