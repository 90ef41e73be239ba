#!/usr/bin/env python3
"""Generate a small gain-cell macro and inspect its structural views.

Builds a 32x64 Si-Si gain-cell macro, runs the connectivity checker, and
prints the netlist summary plus the first lines of each emitted view
(SPICE, Verilog behavioral model, LEF abstract).
"""

import argparse

from gcram import (MacroConfig, VariantName, connectivity_check,
                   emit_lef_abstract, emit_spice, emit_verilog_model,
                   generate_macro, load_default_technology)
from gcram.floorplan import bank_area


def head(text, n=12):
    return "\n".join(text.splitlines()[:n])


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--wz", type=int, default=32, help="word size (bits)")
    ap.add_argument("--nw", type=int, default=64, help="number of words")
    ap.add_argument("--ls", action="store_true",
                    help="add the write-wordline level shifter")
    args = ap.parse_args()

    tech = load_default_technology()
    cfg = MacroConfig(VariantName.SISI_GC, args.wz, args.nw, ls=args.ls)
    net = generate_macro(cfg, tech)

    print(f"macro     : {net.top}")
    print(f"bitcells  : {net.instance_count('bitcell_sisi')}")
    print(f"subckts   : {len(net.subcircuits)}")
    print(f"devices   : {net.device_count()}")

    report = connectivity_check(net)
    print(f"connectivity: {'PASS' if report.passed else 'FAIL'}")

    area = bank_area(cfg, tech)
    print(f"footprint : {area.width:.1f} x {area.height:.1f} um "
          f"({area.total_area:.0f} um2, {area.rings} power ring(s))")

    print("\n--- SPICE (head) ---")
    print(head(emit_spice(net)))
    print("\n--- Verilog model (head) ---")
    print(head(emit_verilog_model(cfg)))
    print("\n--- LEF abstract (head) ---")
    print(head(emit_lef_abstract(cfg, tech, net)))


if __name__ == "__main__":
    main()
