#!/usr/bin/env python3
"""From workload requirements to a heterogeneous technology plan.

Loads the bundled sample profile (seven tasks, L1 and L2 cache levels,
each with data-lifetime bins and a read-rate demand), renders a shmoo of
which macro geometries satisfy each task for one variant, then runs the
planner that assigns the cheapest-leakage feasible technology to every
lifetime bin. One L2 entry needs all three technologies at once.
"""

import argparse
import pathlib

from gcram import VariantName, build_envelopes, load_requirements, select_plan
from gcram.cli import _default_requirements_path
from gcram.dse import emit_plan, shmoo
from gcram.technology import load_default_technology


def render_shmoo(grid, variant):
    tasks = sorted({c.task_id for c in grid.cells})
    sizes = sorted({(c.wz, c.nw) for c in grid.cells})
    print(f"{variant.value} shmoo (rows: task, cols: wz x nw; "
          "'#' workable, '.' not):")
    for t in tasks:
        row = {(c.wz, c.nw): c.workable for c in grid.cells
               if c.task_id == t}
        line = "".join("#" if row[s] else "." for s in sizes)
        print(f"  {t:<24} {line}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--requirements", type=pathlib.Path,
                    default=_default_requirements_path(),
                    help="workload profile JSON")
    args = ap.parse_args()

    tech = load_default_technology()
    reqs = load_requirements(args.requirements)
    print(f"loaded {len(reqs)} requirements "
          f"({len({r.task_id for r in reqs})} tasks)\n")

    # A shmoo asks a stricter question than the planner: can ONE macro of
    # this variant serve every lifetime bin of a task at the full rate?
    render_shmoo(shmoo(reqs, VariantName.SRAM6T, tech), VariantName.SRAM6T)
    print("\nThe planner instead splits a task across technologies per "
          "lifetime bin,\nweighting the rate demand by each bin's traffic "
          "share:")

    envelopes = build_envelopes(tech)
    for v, env in envelopes.items():
        ret = ("static" if env.t_retention_max == float("inf")
               else f"{env.t_retention_min:.1e}..{env.t_retention_max:.1e} s")
        print(f"\n{v.value:>7}: f_op up to {env.f_op_max / 1e9:.2f} GHz, "
              f"retention {ret}")

    plan = select_plan(reqs, envelopes)
    table, _ = emit_plan(plan)
    print("\n" + table)

    tricky = [e for e in plan.entries if len(e.technologies) == 3]
    for e in tricky:
        print(f"\nwhy {e.task_id} {e.cache_level} needs three technologies:")
        for line in e.trace:
            print(f"  {line}")


if __name__ == "__main__":
    main()
