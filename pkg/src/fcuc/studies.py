"""Planning studies: technology equivalence ratios, inverter time-constant
sensitivity, and net-present-value screening of grid-support investments.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .boundary import bisect_min_capacity
from .dynamics import (
    DEFAULT_DROOP,
    DEFAULT_INERTIA_H,
    OnlineMix,
    TechClass,
)
from .scenario import SystemScenario
from .ucmodel import fleet_mix

__all__ = [
    "NpvResult",
    "EquivalenceResult",
    "npv_analysis",
    "equivalence_study",
    "gfm_sensitivity",
    "study_context",
]


@dataclass(frozen=True)
class NpvResult:
    annual_savings: float
    capex: float
    discount_rate: float
    years: int
    annuity_factor: float
    npv: float

    @property
    def pays_back(self) -> bool:
        return self.npv >= 0.0


def npv_analysis(
    annual_savings: float,
    capex: float,
    rate: float = 0.06,
    years: int = 20,
) -> NpvResult:
    """NPV of a constant annual saving against an upfront cost."""
    if rate <= 0:
        raise ValueError("rate must be > 0")
    if years < 1:
        raise ValueError("years must be >= 1")
    annuity = sum((1.0 + rate) ** (-t) for t in range(1, years + 1))
    return NpvResult(
        annual_savings=annual_savings,
        capex=capex,
        discount_rate=rate,
        years=years,
        annuity_factor=annuity,
        npv=annual_savings * annuity - capex,
    )


@dataclass(frozen=True)
class EquivalenceResult:
    tech_a: TechClass
    tech_b: TechClass
    edge_a_mw: float
    edge_b_mw: float
    ratio_b_per_a: float  # MW of b equivalent to 1 MW of a


def study_context(s: SystemScenario, hour: int | None = None) -> OnlineMix:
    """Sweep context for planning studies: committed classes at zero, constant
    classes at rating, class defaults filled in where the scenario has no
    units of a class (so any technology can be swept).
    """
    if hour is None:
        # hour of average demand (closest)
        avg = sum(s.demand) / len(s.demand)
        hour = min(range(1, s.periods + 1), key=lambda t: abs(s.demand[t - 1] - avg))
    mix = fleet_mix(s, hour)
    for cls in TechClass:
        st = mix.tech(cls)
        if st.inertia_h_s == 0.0 and st.online_mw == 0.0:
            mix = replace(
                mix,
                **{
                    cls.value: replace(
                        st,
                        inertia_h_s=DEFAULT_INERTIA_H[cls],
                        droop=DEFAULT_DROOP.get(cls, st.droop),
                    )
                },
            )
    return mix


def equivalence_study(
    s: SystemScenario,
    tech_a: TechClass,
    tech_b: TechClass,
    context: OnlineMix | None = None,
    hi_mw: float = 50000.0,
    tol_mw: float = 1.0,
) -> EquivalenceResult:
    """Per-MW nadir-effect ratio: how many MW of tech_b match 1 MW of tech_a,
    measured as the ratio of bisected minimum stand-alone capacities in a
    fixed context.
    """
    ctx = context if context is not None else study_context(s)
    ctx = ctx.with_capacities({tech_a: 0.0, tech_b: 0.0})
    res_a = bisect_min_capacity(tech_a, ctx, s.limits, 0.0, hi_mw, tol_mw)
    res_b = bisect_min_capacity(tech_b, ctx, s.limits, 0.0, hi_mw, tol_mw)
    if res_a.capacity_mw <= 0:
        raise ValueError(f"{tech_a.value}: degenerate zero edge point")
    return EquivalenceResult(
        tech_a=tech_a,
        tech_b=tech_b,
        edge_a_mw=res_a.capacity_mw,
        edge_b_mw=res_b.capacity_mw,
        ratio_b_per_a=res_b.capacity_mw / res_a.capacity_mw,
    )


def gfm_sensitivity(
    s: SystemScenario,
    time_constants_s: tuple[float, ...] = (0.02, 0.1, 1.0),
    context: OnlineMix | None = None,
    hi_mw: float = 50000.0,
    tol_mw: float = 1.0,
) -> list[tuple[float, EquivalenceResult]]:
    """GFM-vs-SC equivalence re-evaluated for each inverter response lag."""
    if any(tc <= 0 for tc in time_constants_s):
        raise ValueError("time constants must be positive")
    out = []
    base = context if context is not None else study_context(s)
    for tc in time_constants_s:
        ctx = replace(base, dynamics=replace(base.dynamics, gfm_lag_s=tc))
        res = equivalence_study(
            s, TechClass.GFM, TechClass.CONDENSER, context=ctx, hi_mw=hi_mw, tol_mw=tol_mw
        )
        out.append((tc, res))
    return out
