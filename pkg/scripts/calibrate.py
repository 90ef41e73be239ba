"""Scratch calibration: print every quantity the acceptance suite pins down,
so default technology constants can be sanity-checked before freezing."""

import math

from gcram import (MacroConfig, VariantName, bank_area, characterize,
                   dual_port_sram_equivalent_area, load_default_technology,
                   retention_solve)
from gcram.dse import DEFAULT_SIZE_GRID, build_envelopes

tech = load_default_technology()
SI, OS, SR = VariantName.SISI_GC, VariantName.OSSI_GC, VariantName.SRAM6T

print("== criterion 1: cell-area ratios ==")
si = tech.variant(SI).cell_area / tech.variant(SR).cell_area
os_ = tech.variant(OS).cell_area / tech.variant(SR).cell_area
print(f"  Si-Si/SRAM = {si:.3f}   OS-Si/SRAM = {os_:.3f}")

print("== criterion 2: bank-area crossover (WZ=16 series) ==")
prev_ratio = None
for nw in (32, 64, 128, 256, 512, 1024):
    cap = 16 * nw
    a_si = bank_area(MacroConfig(SI, 16, nw), tech).total_area
    a_os = bank_area(MacroConfig(OS, 16, nw), tech).total_area
    a_sr = bank_area(MacroConfig(SR, 16, nw), tech).total_area
    ratio = a_si / a_sr
    mono = "" if prev_ratio is None else ("  mono-dec OK" if ratio < prev_ratio
                                          else "  MONO VIOLATION")
    prev_ratio = ratio
    print(f"  {cap:6d} b: Si {a_si:9.1f}  OS {a_os:9.1f}  SRAM {a_sr:9.1f}"
          f"  Si/SRAM {ratio:.3f}{mono}")
d16 = dual_port_sram_equivalent_area(MacroConfig(SR, 16, 64), tech)
g16 = bank_area(MacroConfig(SI, 16, 64), tech).total_area
print(f"  1 Kb dual-port SRAM {d16:.1f} vs Si-Si {g16:.1f} "
      f"(GC smaller: {g16 < d16})")

print("== criterion 3: leakage separation over grid ==")
worst = 0.0
for wz, nw in DEFAULT_SIZE_GRID:
    p_sr = characterize(MacroConfig(SR, wz, nw), tech).p_leak
    for v in (SI, OS):
        for ls in (False, True):
            p = characterize(MacroConfig(v, wz, nw, ls=ls), tech).p_leak
            worst = max(worst, p / p_sr)
print(f"  worst GC/SRAM leakage ratio = {worst:.3e} (need <= 1e-2)")

print("== criterion 4: retention regimes ==")
t_si = retention_solve(MacroConfig(SI, 16, 16), tech).failure_time
t_os = retention_solve(MacroConfig(OS, 16, 16), tech).failure_time
t_os_dvt = retention_solve(MacroConfig(OS, 16, 16), tech, 0.2).failure_time
t_si_ls = retention_solve(MacroConfig(SI, 16, 16, ls=True), tech).failure_time
t_si_max = retention_solve(MacroConfig(SI, 16, 16, ls=True), tech,
                           tech.delta_vt_max).failure_time
print(f"  Si-Si {t_si:.3e}  (need 1e-6..1e-4)")
print(f"  OS-Si {t_os:.3e}  (need >= 1e-3); +0.2V dvt {t_os_dvt:.3e}"
      f" (need >= 10)")
print(f"  Si-Si LS {t_si_ls:.3e}; Si-Si strongest {t_si_max:.3e}")
print(f"  OS >= 10x Si: {t_os >= 10 * t_si}")

print("== criterion 5: LS strict monotonicity ==")
ok = True
for wz, nw in DEFAULT_SIZE_GRID:
    for v in (SI, OS):
        a = characterize(MacroConfig(v, wz, nw, ls=False), tech)
        b = characterize(MacroConfig(v, wz, nw, ls=True), tech)
        if not (b.f_read_max > a.f_read_max and
                b.t_retention > a.t_retention and
                b.area.ring_area > a.area.ring_area):
            ok = False
            print(f"  VIOLATION {v} {wz}x{nw}: f {a.f_read_max:.3e}->"
                  f"{b.f_read_max:.3e}")
print(f"  all strict: {ok}")

print("== criterion 6: organization effect ==")
for cap in (4096, 16384):
    wz41 = int(math.isqrt(4 * cap) // 2 * 2)  # wz:nw = 4:1
    wz41 = 2 ** round(math.log2(math.sqrt(4 * cap)))
    nw41 = cap // wz41
    wz11 = 2 ** round(math.log2(math.sqrt(cap)))
    nw11 = cap // wz11
    r41 = characterize(MacroConfig(SI, wz41, nw41), tech)
    r11 = characterize(MacroConfig(SI, wz11, nw11), tech)
    print(f"  cap {cap}: 4:1 ({wz41}x{nw41}) f_read {r41.f_read_max:.3e} "
          f"N {r41.delay_chain_stages}  vs 1:1 ({wz11}x{nw11}) "
          f"f_read {r11.f_read_max:.3e} N {r11.delay_chain_stages}")

print("== bandwidth ordering at 64x64 ==")
bw_sr = characterize(MacroConfig(SR, 64, 64), tech).bandwidth_eff
bw_si = characterize(MacroConfig(SI, 64, 64), tech).bandwidth_eff
print(f"  SRAM {bw_sr:.3e} vs Si-Si no-LS {bw_si:.3e} "
      f"(SRAM higher: {bw_sr > bw_si})")

print("== envelopes (for sample profile design) ==")
envs = build_envelopes(tech)
for v, e in envs.items():
    print(f"  {v.value:7s} f_op_max {e.f_op_max/1e9:7.3f} GHz  "
          f"t_ret [{e.t_retention_min:.3e}, {e.t_retention_max:.3e}] s  "
          f"leak/bit {e.p_leak_per_bit:.3e}  area/bit {e.area_per_bit:.4f}")
