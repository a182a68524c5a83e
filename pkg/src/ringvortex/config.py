"""Run configuration: a flat ``key = value`` text format with line-anchored errors.

Example::

    # ring vortex, focusing, no potential
    mode = minimize
    R = 2
    n = 1
    P0 = 1.0
    potential = constant
    potential.value = -1

Lists (``potential.r``, ``potential.V``, ``sweep.values``) are comma separated.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace

from .potentials import PotentialSpec, summarize
from .radial_core import build_grid

MODES = ("minimize", "mountainpass", "check", "sweep")
SOLVE_MODES = ("minimize", "mountainpass")
SWEEP_PARAMS = ("n", "P0", "beta", "R", "N")


class ConfigError(ValueError):
    pass


_FLOAT_KEYS = {"R", "P0", "beta", "grad_tol", "step_init", "step_shrink",
               "potential.value", "potential.p", "potential.b", "sweep.start", "sweep.stop"}
_INT_KEYS = {"N", "n", "s", "max_iters", "M", "retension_every", "seed", "sweep.count"}
_BOOL_KEYS = {"enforce_positive"}
_STR_KEYS = {"mode", "potential", "sweep.mode", "sweep.param"}
_LIST_KEYS = {"potential.r", "potential.V", "sweep.values"}
KNOWN_KEYS = _FLOAT_KEYS | _INT_KEYS | _BOOL_KEYS | _STR_KEYS | _LIST_KEYS


@dataclass(frozen=True)
class SweepAxis:
    param: str
    values: tuple
    mode: str = "minimize"


@dataclass(frozen=True)
class RunConfig:
    mode: str
    R: float
    n: int
    N: int = 1024
    s: int = 1
    P0: float | None = None
    beta: float | None = None
    potential: PotentialSpec = field(default_factory=PotentialSpec)
    max_iters: int | None = None
    grad_tol: float | None = None
    step_init: float = 1.0
    step_shrink: float = 0.5
    enforce_positive: bool | None = None
    M: int = 41
    retension_every: int = 10
    sweep: SweepAxis | None = None
    seed: int = 0
    warnings: tuple = ()

    @property
    def solve_mode(self) -> str:
        return self.sweep.mode if self.mode == "sweep" else self.mode

    def to_dict(self) -> dict:
        d = asdict(self)
        d["potential"] = self.potential.to_dict()
        d["warnings"] = list(self.warnings)
        if self.sweep is not None:
            d["sweep"] = {"param": self.sweep.param, "values": list(self.sweep.values),
                          "mode": self.sweep.mode}
        return d


def _tokenize(text: str, source: str = "config") -> dict:
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{source}:{lineno}"
        if "=" not in line:
            raise ConfigError(f"{where}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigError(f"{where}: unknown key {key!r}")
        if key in entries:
            raise ConfigError(f"{where}: duplicate key {key!r} (first set at {entries[key][1]})")
        entries[key] = (value, where)
    return entries


def _convert(key: str, value: str, where: str):
    try:
        if key in _FLOAT_KEYS:
            out = float(value)
            if not math.isfinite(out):
                raise ValueError
            return out
        if key in _INT_KEYS:
            f = float(value)
            if not f.is_integer():
                raise ValueError
            return int(f)
        if key in _BOOL_KEYS:
            low = value.lower()
            if low not in ("true", "false", "1", "0", "yes", "no", "on", "off"):
                raise ValueError
            return low in ("true", "1", "yes", "on")
        if key in _LIST_KEYS:
            items = [float(x) for x in value.split(",") if x.strip()]
            if not items or not all(math.isfinite(x) for x in items):
                raise ValueError
            return items
    except ValueError:
        raise ConfigError(f"{where}: invalid value {value!r} for {key!r}") from None
    return value


def _sweep_values(param, vals, start, stop, count, where):
    if vals is not None:
        out = vals
    else:
        if start is None or stop is None or count is None:
            raise ConfigError(f"{where}: sweep needs sweep.values or sweep.start/stop/count")
        if count < 1:
            raise ConfigError(f"{where}: sweep.count must be >= 1")
        out = [start] if count == 1 else [start + (stop - start) * k / (count - 1)
                                          for k in range(count)]
    if param in ("n", "N"):
        if not all(float(v).is_integer() for v in out):
            raise ConfigError(f"{where}: sweep over {param} needs integer values")
        out = [int(v) for v in out]
    return tuple(out)


def parse_config(text: str = "", overrides: dict | None = None, mode: str | None = None,
                 source: str = "config") -> RunConfig:
    """Parse and validate a configuration.

    ``overrides`` (key -> string or number) take precedence over the text;
    ``mode`` comes from the CLI subcommand and must agree with any ``mode`` key.
    """
    entries = _tokenize(text, source)
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in KNOWN_KEYS:
            raise ConfigError(f"command line: unknown key {key!r}")
        entries[key] = (str(value), f"command line --{key}")

    raw = {k: _convert(k, v, where) for k, (v, where) in entries.items()}
    where = {k: w for k, (_, w) in entries.items()}

    def loc(key):
        return where.get(key, source)

    if mode is not None:
        if "mode" in raw and raw["mode"] != mode:
            raise ConfigError(f"{loc('mode')}: mode {raw['mode']!r} conflicts with "
                              f"subcommand {mode!r}")
        raw["mode"] = mode
    if "mode" not in raw:
        raise ConfigError(f"{source}: missing required key 'mode'")
    if raw["mode"] not in MODES:
        raise ConfigError(f"{loc('mode')}: mode must be one of {MODES}")
    for key in ("R", "n"):
        if key not in raw:
            raise ConfigError(f"{source}: missing required key {key!r}")
    if raw["R"] <= 0:
        raise ConfigError(f"{loc('R')}: R must be positive")
    if raw["n"] == 0:
        raise ConfigError(f"{loc('n')}: winding number n must be nonzero")
    if raw.get("N", 1024) < 2:
        raise ConfigError(f"{loc('N')}: N must be >= 2")
    if raw.get("s", 1) not in (1, -1):
        raise ConfigError(f"{loc('s')}: s must be +1 or -1")
    if "P0" in raw and raw["P0"] <= 0:
        raise ConfigError(f"{loc('P0')}: P0 must be positive")
    for key, ok in (("grad_tol", lambda v: v > 0), ("step_init", lambda v: v > 0),
                    ("step_shrink", lambda v: 0 < v < 1), ("M", lambda v: v >= 3),
                    ("max_iters", lambda v: v >= 0), ("retension_every", lambda v: v >= 0)):
        if key in raw and not ok(raw[key]):
            raise ConfigError(f"{loc(key)}: value out of range for {key!r}")

    sweep = None
    solve_mode = raw["mode"]
    if raw["mode"] == "sweep":
        smode = raw.get("sweep.mode", "minimize")
        if smode not in SOLVE_MODES:
            raise ConfigError(f"{loc('sweep.mode')}: sweep.mode must be one of {SOLVE_MODES}")
        param = raw.get("sweep.param")
        if param not in SWEEP_PARAMS:
            raise ConfigError(f"{loc('sweep.param')}: sweep.param must be one of {SWEEP_PARAMS}")
        values = _sweep_values(param, raw.get("sweep.values"), raw.get("sweep.start"),
                               raw.get("sweep.stop"), raw.get("sweep.count"), loc("sweep.param"))
        sweep = SweepAxis(param, values, smode)
        solve_mode = smode
    elif any(k.startswith("sweep.") for k in raw):
        key = next(k for k in raw if k.startswith("sweep."))
        raise ConfigError(f"{loc(key)}: sweep keys are only valid in sweep mode")

    swept = sweep.param if sweep else None
    has_P0 = "P0" in raw or swept == "P0"
    has_beta = "beta" in raw or swept == "beta"
    if solve_mode == "minimize":
        if not has_P0:
            raise ConfigError(f"{source}: minimize needs P0")
        if "beta" in raw:
            raise ConfigError(f"{loc('beta')}: beta is prescribed only in mountainpass mode")
    elif solve_mode == "mountainpass":
        if not has_beta:
            raise ConfigError(f"{source}: mountainpass needs beta")
        if "P0" in raw:
            raise ConfigError(f"{loc('P0')}: P0 is only used in minimize mode")
        if raw.get("s", 1) != 1:
            raise ConfigError(f"{loc('s')}: mountainpass is defined for s = +1 only")
    elif not (has_P0 or has_beta):
        raise ConfigError(f"{source}: check needs P0 or beta")

    potential = _potential(raw, loc)
    warn = []
    grid = build_grid(raw["R"], raw.get("N", 1024))
    try:
        summary = summarize(potential, grid)
    except ValueError as exc:
        raise ConfigError(f"{loc('potential')}: {exc}") from None
    betas = sweep.values if swept == "beta" else ([raw["beta"]] if "beta" in raw else [])
    if solve_mode in ("mountainpass", "check") and any(b < summary.V0plus for b in betas):
        warn.append("beta < V0plus: outside the mountain-pass existence hypothesis")

    return RunConfig(
        mode=raw["mode"], R=raw["R"], n=raw["n"], N=raw.get("N", 1024), s=raw.get("s", 1),
        P0=raw.get("P0"), beta=raw.get("beta"), potential=potential,
        max_iters=raw.get("max_iters"), grad_tol=raw.get("grad_tol"),
        step_init=raw.get("step_init", 1.0), step_shrink=raw.get("step_shrink", 0.5),
        enforce_positive=raw.get("enforce_positive"), M=raw.get("M", 41),
        retension_every=raw.get("retension_every", 10), sweep=sweep, seed=raw.get("seed", 0),
        warnings=tuple(warn),
    )


def _potential(raw: dict, loc) -> PotentialSpec:
    kind = raw.get("potential", "zero")
    needed = {"zero": (), "constant": ("potential.value",),
              "bessel_j1_sq": ("potential.p", "potential.b"),
              "tabulated": ("potential.r", "potential.V")}
    if kind not in needed:
        raise ConfigError(f"{loc('potential')}: unknown potential kind {kind!r}")
    for key in needed[kind]:
        if key not in raw:
            raise ConfigError(f"{loc('potential')}: potential {kind!r} needs {key!r}")
    extra = [k for k in raw if k.startswith("potential.") and k not in needed[kind]]
    if extra:
        raise ConfigError(f"{loc(extra[0])}: {extra[0]!r} does not apply to potential {kind!r}")
    try:
        if kind == "constant":
            return PotentialSpec.constant(raw["potential.value"])
        if kind == "bessel_j1_sq":
            if raw["potential.p"] <= 0 or raw["potential.b"] <= 0:
                raise ValueError("bessel_j1_sq parameters p, b must be positive")
            return PotentialSpec.bessel_j1_sq(raw["potential.p"], raw["potential.b"])
        if kind == "tabulated":
            return PotentialSpec.tabulated(raw["potential.r"], raw["potential.V"])
    except ValueError as exc:
        raise ConfigError(f"{loc('potential')}: {exc}") from None
    return PotentialSpec.zero()


def with_value(config: RunConfig, param: str, value) -> RunConfig:
    """Copy of a sweep config collapsed to one solve at ``param = value``."""
    return replace(config, mode=config.sweep.mode, sweep=None, **{param: value})
