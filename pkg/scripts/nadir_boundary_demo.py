#!/usr/bin/env python3
"""Sweep a two-technology nadir-compliance grid and show the learned cut.

Prints an ASCII map of the compliance boundary ('#' pass, '.' fail, '*' pass
and admitted by the conservative cut) plus the edge points and cut
coefficients for the scenario's first hour.
"""

import argparse
import pathlib
import sys

from fcuc.boundary import (
    SweepAxis,
    SweepSpec,
    find_edge_points,
    fit_hyperplane,
    make_conservative,
    sweep_grid,
)
from fcuc.dynamics import TechClass
from fcuc.scenario import load_scenario
from fcuc.ucmodel import fleet_mix

HERE = pathlib.Path(__file__).resolve().parent


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--scenario", default=str(HERE / "example_scenario.json"))
    ap.add_argument("--hour", type=int, default=1)
    ap.add_argument("--tech-a", default="combined_cycle")
    ap.add_argument("--tech-b", default="hydro_reservoir")
    ap.add_argument("--max-mw", type=float, default=2400.0)
    ap.add_argument("--step-mw", type=float, default=200.0)
    args = ap.parse_args()

    s = load_scenario(args.scenario)
    a, b = TechClass(args.tech_a), TechClass(args.tech_b)
    context = fleet_mix(s, args.hour)
    axes = (
        SweepAxis(a, 0.0, args.max_mw, args.step_mw),
        SweepAxis(b, 0.0, args.max_mw, args.step_mw),
    )
    grid = sweep_grid(SweepSpec(axes, context, s.limits))
    edges = find_edge_points([a, b], context, s.limits, hi_mw=10.0 * args.max_mw)
    cut = make_conservative(fit_hyperplane(edges, context_id=f"hour={args.hour}"), grid)

    print(f"scenario {s.name}, hour {args.hour}, nadir limit {s.limits.nadir_min_hz} Hz")
    print(f"edge points: {a.value} {edges[a]:.0f} MW, {b.value} {edges[b]:.0f} MW")
    print(f"cut: {cut.coeffs[a]:.6f}*{a.value} + {cut.coeffs[b]:.6f}*{b.value}"
          f" >= {cut.intercept:.4f}")
    print()
    print(f"rows: {a.value} 0..{args.max_mw:.0f} MW (top to bottom); "
          f"cols: {b.value} 0..{args.max_mw:.0f} MW")
    vals_a = list(axes[0].values())
    for i in reversed(range(len(vals_a))):
        row = []
        for j in range(grid.nadir_hz.shape[1]):
            caps = {a: vals_a[i], b: list(axes[1].values())[j]}
            if grid.passed[i, j]:
                row.append("*" if cut.satisfied(caps) else "#")
            else:
                row.append(".")
        print(f"{vals_a[i]:7.0f}  " + " ".join(row))
    print("legend: '.' fails nadir, '#' passes, '*' passes and admitted by cut")
    return 0


if __name__ == "__main__":
    sys.exit(main())
