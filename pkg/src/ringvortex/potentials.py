"""External potential V(r) and its positive/negative decomposition."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray
from scipy.special import j1

from .radial_core import RadialGrid

KINDS = ("zero", "constant", "bessel_j1_sq", "tabulated")


@dataclass(frozen=True)
class PotentialSpec:
    """Symbolic description of a radial potential.

    kind is one of ``zero``, ``constant`` (``value``), ``bessel_j1_sq``
    (``p * J1(b r)**2``) or ``tabulated`` (``r_table``, ``v_table``, linearly
    interpolated).
    """

    kind: str = "zero"
    value: float = 0.0
    p: float = 1.0
    b: float = 1.0
    r_table: tuple = field(default=())
    v_table: tuple = field(default=())

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown potential kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "tabulated":
            r_tab = np.asarray(self.r_table, dtype=float)
            v_tab = np.asarray(self.v_table, dtype=float)
            if r_tab.ndim != 1 or r_tab.shape != v_tab.shape or r_tab.size < 2:
                raise ValueError("tabulated potential needs matching r/V tables of length >= 2")
            if np.any(np.diff(r_tab) <= 0):
                raise ValueError("tabulated potential radii must be strictly increasing")
            if not (np.all(np.isfinite(r_tab)) and np.all(np.isfinite(v_tab))):
                raise ValueError("tabulated potential must be finite")
            object.__setattr__(self, "r_table", tuple(float(x) for x in r_tab))
            object.__setattr__(self, "v_table", tuple(float(x) for x in v_tab))
        for name in ("value", "p", "b"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"potential parameter {name} must be finite")

    @classmethod
    def zero(cls) -> "PotentialSpec":
        return cls("zero")

    @classmethod
    def constant(cls, value: float) -> "PotentialSpec":
        return cls("constant", value=float(value))

    @classmethod
    def bessel_j1_sq(cls, p: float, b: float) -> "PotentialSpec":
        return cls("bessel_j1_sq", p=float(p), b=float(b))

    @classmethod
    def tabulated(cls, r_table, v_table) -> "PotentialSpec":
        return cls("tabulated", r_table=tuple(r_table), v_table=tuple(v_table))

    def scaled(self, c: float) -> "PotentialSpec":
        if self.kind == "constant":
            return PotentialSpec.constant(c * self.value)
        if self.kind == "bessel_j1_sq":
            return PotentialSpec.bessel_j1_sq(c * self.p, self.b)
        if self.kind == "tabulated":
            return PotentialSpec.tabulated(self.r_table, [c * v for v in self.v_table])
        return self

    def covers(self, R: float) -> bool:
        if self.kind != "tabulated":
            return True
        return self.r_table[0] <= 0.0 and self.r_table[-1] >= R

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == "constant":
            out["value"] = self.value
        elif self.kind == "bessel_j1_sq":
            out.update(p=self.p, b=self.b)
        elif self.kind == "tabulated":
            out.update(r=list(self.r_table), V=list(self.v_table))
        return out


def _values(spec: PotentialSpec, r: NDArray) -> NDArray:
    if spec.kind == "zero":
        return np.zeros_like(r)
    if spec.kind == "constant":
        return np.full_like(r, spec.value)
    if spec.kind == "bessel_j1_sq":
        return spec.p * j1(spec.b * r) ** 2
    return np.interp(r, spec.r_table, spec.v_table)


def evaluate(spec: PotentialSpec, r, R: float | None = None):
    """V(r). When ``R`` is given, radii outside [0, R] are rejected."""
    r_arr = np.asarray(r, dtype=float)
    upper = R if R is not None else (spec.r_table[-1] if spec.kind == "tabulated" else np.inf)
    if np.any(r_arr < 0) or np.any(r_arr > upper):
        raise ValueError(f"radius outside [0, {upper}]")
    if spec.kind == "tabulated":
        if np.any(r_arr < spec.r_table[0]) or np.any(r_arr > spec.r_table[-1]):
            raise ValueError("radius outside the tabulated range")
    out = _values(spec, r_arr)
    return float(out) if out.ndim == 0 else out


def node_values(spec: PotentialSpec, grid: RadialGrid) -> NDArray:
    """V at the interior nodes of ``grid``."""
    return evaluate(spec, grid.interior, grid.R)


@dataclass(frozen=True)
class PotentialSummary:
    Vplus_nodes: NDArray
    Vminus_nodes: NDArray
    V0plus: float
    V0minus: float
    V0: float
    max_r2_Vplus: float

    def to_dict(self) -> dict:
        return {"V0plus": self.V0plus, "V0minus": self.V0minus, "V0": self.V0,
                "max_r2_Vplus": self.max_r2_Vplus}


def summarize(spec: PotentialSpec, grid: RadialGrid) -> PotentialSummary:
    """Decomposition V = V+ - V- and extrema over all grid nodes (endpoints included)."""
    if not spec.covers(grid.R):
        raise ValueError(f"tabulated potential does not cover [0, {grid.R}]")
    V = evaluate(spec, grid.r, grid.R)
    Vp = np.maximum(V, 0.0)
    Vm = np.maximum(-V, 0.0)
    V0p = float(Vp.max())
    V0m = float(Vm.max())
    return PotentialSummary(
        Vplus_nodes=Vp,
        Vminus_nodes=Vm,
        V0plus=V0p,
        V0minus=V0m,
        V0=max(V0p, V0m),
        max_r2_Vplus=float(np.max(grid.r**2 * Vp)),
    )
