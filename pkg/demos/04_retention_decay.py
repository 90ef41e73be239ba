#!/usr/bin/env python3
"""Storage-node decay curves for the two gain-cell flavors.

Integrates the subthreshold-leakage ODE for the silicon and the
oxide-semiconductor write transistor and prints a crude ASCII plot of the
droop, annotated with the failure time (where the stored level crosses the
retention margin). The OS device's sub-1e-18 A/um off-current stretches
retention by many orders of magnitude; a threshold-voltage shift
(--delta-vt) stretches it further.
"""

import argparse

from gcram import MacroConfig, VariantName
from gcram.charlib import retention_solve
from gcram.technology import load_default_technology

WIDTH = 60


def ascii_plot(trace, label):
    v_hi, v_lo = trace.v_written, trace.v_fail
    print(f"\n{label}: wrote {v_hi:.3f} V, fails below {v_lo:.3f} V "
          f"at t = {trace.failure_time:.3e} s")
    # ten rows sampled uniformly in time up to failure
    n = len(trace.times)
    for i in range(0, n, max(1, n // 10)):
        v = trace.voltages[i]
        frac = (v - v_lo) / (v_hi - v_lo)
        bar = "#" * max(0, min(WIDTH, round(frac * WIDTH)))
        print(f"  t={trace.times[i]:>9.2e}s |{bar:<{WIDTH}}| {v:.3f} V")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--delta-vt", type=float, default=0.0,
                    help="write-transistor threshold shift in volts")
    args = ap.parse_args()

    tech = load_default_technology()
    for variant, label in ((VariantName.SISI_GC, "Si-Si gain cell"),
                           (VariantName.OSSI_GC, "OS-Si gain cell")):
        cfg = MacroConfig(variant, 16, 16)
        trace = retention_solve(cfg, tech, args.delta_vt)
        ascii_plot(trace, label)

    ls_trace = retention_solve(MacroConfig(VariantName.SISI_GC, 16, 16,
                                           ls=True), tech, args.delta_vt)
    print(f"\nSi-Si with level shifter: full-VDD write raises the starting "
          f"level,\nretention {ls_trace.failure_time:.3e} s")


if __name__ == "__main__":
    main()
