#!/usr/bin/env python3
"""Characterize one macro end to end and print the Liberty summary.

Runs timing, bandwidth, leakage, energy, retention, and area for a chosen
configuration, then shows the .lib summary an integration flow would
consume. Try --ls to see the level shifter buy back write headroom (and
read current) at the cost of a second power ring.
"""

import argparse

from gcram import MacroConfig, VariantName, characterize
from gcram.charlib import emit_liberty_summary
from gcram.technology import load_default_technology

VARIANTS = {
    "sisi-gc": VariantName.SISI_GC,
    "ossi-gc": VariantName.OSSI_GC,
    "sram6t": VariantName.SRAM6T,
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--variant", choices=sorted(VARIANTS), default="ossi-gc")
    ap.add_argument("--wz", type=int, default=64)
    ap.add_argument("--nw", type=int, default=64)
    ap.add_argument("--ls", action="store_true")
    args = ap.parse_args()

    tech = load_default_technology()
    cfg = MacroConfig(VARIANTS[args.variant], args.wz, args.nw, ls=args.ls)
    rep = characterize(cfg, tech)

    print(f"config          : {cfg.slug()}")
    print(f"f_read_max      : {rep.f_read_max / 1e9:.3f} GHz")
    print(f"f_write_max     : {rep.f_write_max / 1e9:.3f} GHz")
    print(f"f_op            : {rep.f_op / 1e9:.3f} GHz "
          f"({rep.delay_chain_stages} delay-chain stages)")
    print(f"bandwidth       : {rep.bandwidth_eff / 1e9:.1f} Gb/s")
    print(f"leakage         : {rep.p_leak * 1e6:.3f} uW")
    print(f"access energy   : {rep.e_access * 1e15:.1f} fJ")
    if rep.t_retention == float("inf"):
        print("retention       : static (no refresh)")
    else:
        print(f"retention       : {rep.t_retention:.3e} s")
    print(f"area            : {rep.area.total_area:.0f} um2")

    print("\n--- Liberty summary ---")
    print(emit_liberty_summary(rep, cfg))


if __name__ == "__main__":
    main()
