#!/usr/bin/env python3
"""Where does a gain-cell bank become smaller than SRAM?

Sweeps capacity at a fixed 16-bit word and tabulates total bank area for
the three bitcell variants. Small banks are periphery-dominated, so the
dual-port gain-cell macro starts out larger than single-port SRAM; the
denser array wins as capacity grows. The OS-write variant is smallest
throughout. Also shows the dual-port-equivalent SRAM comparison (2x).
"""

from gcram import MacroConfig, VariantName, load_default_technology
from gcram.floorplan import bank_area, dual_port_sram_equivalent_area

SI, OS, SR = (VariantName.SISI_GC, VariantName.OSSI_GC, VariantName.SRAM6T)


def main():
    tech = load_default_technology()
    print(f"{'capacity':>9} {'Si-Si GC':>10} {'OS-Si GC':>10} "
          f"{'SRAM':>10} {'2p SRAM':>10}  smallest")
    for nw in (32, 64, 128, 256, 512, 1024):
        cells = {v: bank_area(MacroConfig(v, 16, nw), tech).total_area
                 for v in (SI, OS, SR)}
        dp = dual_port_sram_equivalent_area(MacroConfig(SR, 16, nw), tech)
        winner = min(cells, key=cells.get)
        cap = 16 * nw
        label = f"{cap // 1024}Kb" if cap >= 1024 else f"{cap}b"
        print(f"{label:>9} {cells[SI]:>10.0f} {cells[OS]:>10.0f} "
              f"{cells[SR]:>10.0f} {dp:>10.0f}  {winner.value}")
    print("\n(areas in um2; dual-port SRAM is 2x the single-port bank)")


if __name__ == "__main__":
    main()
