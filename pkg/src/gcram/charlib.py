"""Macro characterization: timing, bandwidth, leakage, retention.

All delay numbers come from a first-order analytical model (logical-effort
decoder, Elmore wire RC, constant-current bitline and storage-node slewing).
The cycle time is quantized by the controller delay chain: the chain length
is the smallest N with N*fo4 covering the critical path, and the cycle is
(N + guard) * fo4.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .errors import VariantError
from .floorplan import AreaReport, bank_area
from .netgen import MacroConfig
from .technology import (T_REF, TechnologyModel, TransistorModel,
                         bitcell_lookup, drive_current,
                         subthreshold_current)


@dataclass(frozen=True)
class CharReport:
    config: MacroConfig
    f_read_max: float        # Hz
    f_write_max: float       # Hz
    f_op: float              # Hz, min of the two
    bandwidth_eff: float     # bit/s
    p_leak: float            # W
    e_access: float          # J
    t_retention: float       # s, +inf for SRAM
    area: AreaReport
    delay_chain_stages: int

    def to_dict(self) -> dict:
        return {
            "config": self.config.slug(),
            "f_read_max_hz": self.f_read_max,
            "f_write_max_hz": self.f_write_max,
            "f_op_hz": self.f_op,
            "bandwidth_eff_bits_per_s": self.bandwidth_eff,
            "p_leak_w": self.p_leak,
            "e_access_j": self.e_access,
            "t_retention_s": (None if math.isinf(self.t_retention)
                              else self.t_retention),
            "area": self.area.to_dict(),
            "delay_chain_stages": self.delay_chain_stages,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


@dataclass
class RetentionTrace:
    times: list[float]       # s
    voltages: list[float]    # V at the storage node
    failure_time: float      # s, first crossing of written level - margin
    v_written: float
    v_fail: float


# --- delay model --------------------------------------------------------------

def _wire_elmore(length_um: float, load_ff: float, tech: TechnologyModel) -> float:
    r = length_um * tech.wire_r
    c = (length_um * tech.wire_c + load_ff) * 1e-15
    return 0.5 * r * c


def _decoder_delay(rows: int, tech: TechnologyModel) -> float:
    return math.log2(rows) * tech.timing.decoder_fo4_per_bit * tech.timing.fo4


def _bitline_cap_f(rows: int, cell, tech: TechnologyModel) -> float:
    return (rows * cell.c_bl_per_cell +
            rows * cell.pitch_y * tech.wire_c) * 1e-15


def _sn_write_level(cell, tech: TechnologyModel) -> float:
    """Stored "1" level: a threshold drop below VDD unless the write
    wordline is boosted by the level shifter."""
    if cell.has_wwl_level_shifter:
        return tech.vdd
    return tech.vdd - cell.write_tx.vt


def read_delay(config: MacroConfig, tech: TechnologyModel) -> float:
    config.validate()
    cell = bitcell_lookup(tech, config.variant, config.ls)
    rows, cols = config.rows, config.cols
    tm = tech.timing

    t_dec = _decoder_delay(rows, tech)
    wl_load = cols * cell.read_tx.c_gate * cell.read_tx.width
    t_wl = _wire_elmore(cols * cell.pitch_x, wl_load, tech)
    c_bl = _bitline_cap_f(rows, cell, tech)

    if config.is_gain_cell:
        v_sn = _sn_write_level(cell, tech)
        i_read = drive_current(cell.read_tx, v_sn, tech.vdd)
        t_bl = c_bl * tech.sense_margin / i_read
        t_sa = tm.sa_fo4_single_ended * tm.fo4
    else:
        # differential sensing halves the required per-side swing
        i_cell = drive_current(cell.write_tx, tech.vdd, tech.vdd)
        t_bl = c_bl * (tech.sense_margin / 2.0) / i_cell
        t_sa = tm.sa_fo4_differential * tm.fo4
    return t_dec + t_wl + t_bl + t_sa


def write_delay(config: MacroConfig, tech: TechnologyModel) -> float:
    config.validate()
    cell = bitcell_lookup(tech, config.variant, config.ls)
    rows, cols = config.rows, config.cols
    tm = tech.timing

    t_dec = _decoder_delay(rows, tech)
    wl_load = cols * cell.write_tx.c_gate * cell.write_tx.width
    t_wl = _wire_elmore(cols * cell.pitch_x, wl_load, tech)
    c_bl = _bitline_cap_f(rows, cell, tech)

    if config.is_gain_cell:
        t_bl = c_bl * tech.vdd / tech.gc_write_driver_a
        wwl = tech.vdd_boost if config.ls else tech.vdd
        swing = _sn_write_level(cell, tech)
        i_write = drive_current(cell.write_tx, wwl, tech.vdd)
        t_sn = cell.c_sn * 1e-15 * swing / i_write
        return t_dec + t_wl + t_bl + t_sn
    t_bl = c_bl * tech.vdd / tech.sram_write_driver_a
    t_flip = tm.sram_cell_flip_fo4 * tm.fo4
    return t_dec + t_wl + t_bl + t_flip


def _quantize(delay: float, tech: TechnologyModel) -> tuple[int, float]:
    fo4 = tech.timing.fo4
    n = max(1, math.ceil(delay / fo4 - 1e-9))
    f = 1.0 / ((n + tech.timing.guard_stages) * fo4)
    return n, f


def delay_chain_stages(config: MacroConfig,
                       tech: TechnologyModel) -> tuple[int, int]:
    """(read, write) controller delay-chain lengths."""
    n_r, _ = _quantize(read_delay(config, tech), tech)
    n_w, _ = _quantize(write_delay(config, tech), tech)
    return n_r, n_w


def max_frequency(config: MacroConfig,
                  tech: TechnologyModel) -> tuple[float, float, int]:
    """(f_read_max, f_write_max, delay_chain_stages), quantized by the
    controller chain: cycle = (N + guard) * fo4."""
    n_r, f_r = _quantize(read_delay(config, tech), tech)
    n_w, f_w = _quantize(write_delay(config, tech), tech)
    return f_r, f_w, max(n_r, n_w)


def effective_bandwidth(config: MacroConfig, tech: TechnologyModel,
                        f_read_max: float, f_write_max: float) -> float:
    """GC ports run concurrently; the SRAM port is time-shared at `duty`."""
    wz = config.word_size
    if config.is_gain_cell:
        return wz * (f_read_max + f_write_max)
    f_op = min(f_read_max, f_write_max)
    return wz * f_op * tech.sram_port_duty


# --- leakage ------------------------------------------------------------------

def _periphery_gate_count(config: MacroConfig) -> int:
    rows, cols, wz = config.rows, config.cols, config.word_size
    ports = 2 if config.is_gain_cell else 1
    per_bank = ports * rows * (int(math.log2(rows)) + 2) + cols * 6
    return config.num_banks * per_bank + wz * 10 + 40


def leakage_power(config: MacroConfig, tech: TechnologyModel) -> float:
    config.validate()
    cell = bitcell_lookup(tech, config.variant, config.ls)
    cells = config.word_size * config.num_words
    p_periph = _periphery_gate_count(config) * tech.leakage.periphery_gate_w

    if config.is_gain_cell:
        # the cell itself has no VDD-GND path; what leaks is the stored
        # charge (write transistor subthreshold) and the idle read bitline
        v_sn = _sn_write_level(cell, tech)
        i_hold = subthreshold_current(
            cell.write_tx, -v_sn * tech.sn_coupling_kappa, v_sn,
            temperature=tech.temperature)
        p_cells = cells * i_hold * tech.vdd
        p_rbl = (config.num_banks * config.cols *
                 tech.leakage.rbl_leak_a_per_col * tech.vdd)
        return p_periph + p_cells + p_rbl

    pulldown = cell.pulldown_tx or cell.write_tx
    i_cell = tech.leakage.sram_cell_leak_paths * subthreshold_current(
        pulldown, 0.0, tech.vdd, temperature=tech.temperature)
    return p_periph + cells * i_cell * tech.vdd


def access_energy(config: MacroConfig, tech: TechnologyModel) -> float:
    """First-order CV^2 over the nodes toggled by one access."""
    cell = bitcell_lookup(tech, config.variant, config.ls)
    cols, wz = config.cols, config.word_size
    gate = cell.write_tx.c_gate * cell.write_tx.width
    c_wl = (cols * cell.pitch_x * tech.wire_c + cols * gate) * 1e-15
    c_bl = _bitline_cap_f(config.rows, cell, tech)
    c_sa = wz * 2e-15
    wordlines = 2 if config.is_gain_cell else 1
    return (wordlines * c_wl + wz * c_bl + c_sa) * tech.vdd ** 2


# --- retention ----------------------------------------------------------------

def solve_storage_decay(write_tx: TransistorModel, c_sn_ff: float,
                        v_written: float, v_fail: float, kappa: float = 1.0,
                        delta_vt: float = 0.0,
                        temperature: float = T_REF) -> RetentionTrace:
    """Integrate c_sn dV/dt = -I_w(V) from the written level to failure.

    The hold bias is vgs = -kappa*V (WBL held low, gate off) and vds = V.
    Fixed-step RK4 sized from a closed-form estimate of the crossing time
    (saturation term taken as 1), then bisection refinement of the crossing
    to better than 1e-3 relative.
    """
    if not (v_written > v_fail > 0.0):
        raise ValueError("need v_written > v_fail > 0")
    if delta_vt < 0:
        raise ValueError("delta_vt must be non-negative")
    c = c_sn_ff * 1e-15

    def current(v: float) -> float:
        return subthreshold_current(write_tx, -v * kappa, v, delta_vt,
                                    temperature)

    def deriv(v: float) -> float:
        return -current(max(v, 0.0)) / c

    ss_v = (write_tx.ss / 1000.0) * (temperature / T_REF)
    amp = write_tx.i_off_ref * write_tx.width * 10.0 ** (-delta_vt / ss_v)
    try:
        t_est = (c / amp) * (ss_v / (kappa * math.log(10.0))) * \
            (10.0 ** (kappa * v_written / ss_v) -
             10.0 ** (kappa * v_fail / ss_v))
    except OverflowError:
        return RetentionTrace([0.0], [v_written], math.inf, v_written, v_fail)
    if not math.isfinite(t_est) or t_est <= 0:
        return RetentionTrace([0.0], [v_written], math.inf, v_written, v_fail)

    def rk4(t0: float, v0: float, h: float) -> float:
        k1 = deriv(v0)
        k2 = deriv(v0 + 0.5 * h * k1)
        k3 = deriv(v0 + 0.5 * h * k2)
        k4 = deriv(v0 + h * k3)
        return v0 + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)

    h = t_est / 2048.0
    t, v = 0.0, v_written
    times, volts = [0.0], [v_written]
    step = 0
    while True:
        v_next = rk4(t, v, h)
        step += 1
        if v_next <= v_fail:
            break
        t += h
        v = v_next
        if step % 4 == 0 and len(times) < 1024:
            times.append(t)
            volts.append(v)
        if step % 4096 == 0:
            h *= 2.0  # estimate was low; march in coarser decades
        if step > (1 << 20):
            return RetentionTrace(times, volts, math.inf, v_written, v_fail)

    # bisection on the bracketing interval [t, t+h]; V(t) = v is known
    lo, hi = t, t + h
    while (hi - lo) > 1e-4 * max(hi, 1e-300):
        mid = 0.5 * (lo + hi)
        vm = v
        sub = (mid - lo) / 32.0
        tm_ = lo
        for _ in range(32):
            vm = rk4(tm_, vm, sub)
            tm_ += sub
        if vm > v_fail:
            lo, v = mid, vm
        else:
            hi = mid
    failure = 0.5 * (lo + hi)
    times.append(failure)
    volts.append(v_fail)
    return RetentionTrace(times, volts, failure, v_written, v_fail)


def retention_solve(config: MacroConfig, tech: TechnologyModel,
                    delta_vt: float = 0.0) -> RetentionTrace:
    """Worst-case stored-"1" decay for a gain-cell config."""
    config.validate()
    if not config.is_gain_cell:
        raise VariantError("retention is defined for gain-cell variants only")
    cell = bitcell_lookup(tech, config.variant, config.ls)
    v0 = _sn_write_level(cell, tech)
    return solve_storage_decay(
        cell.write_tx, cell.c_sn, v0, v0 - tech.retention_margin,
        kappa=tech.sn_coupling_kappa, delta_vt=delta_vt,
        temperature=tech.temperature)


# --- top-level characterization ----------------------------------------------

def characterize(config: MacroConfig, tech: TechnologyModel,
                 delta_vt: float = 0.0) -> CharReport:
    config.validate()
    f_r, f_w, stages = max_frequency(config, tech)
    if config.is_gain_cell:
        t_ret = retention_solve(config, tech, delta_vt).failure_time
    else:
        t_ret = math.inf
    return CharReport(
        config=config,
        f_read_max=f_r,
        f_write_max=f_w,
        f_op=min(f_r, f_w),
        bandwidth_eff=effective_bandwidth(config, tech, f_r, f_w),
        p_leak=leakage_power(config, tech),
        e_access=access_energy(config, tech),
        t_retention=t_ret,
        area=bank_area(config, tech),
        delay_chain_stages=stages,
    )


def emit_liberty_summary(report: CharReport, config: MacroConfig) -> str:
    """Liberty-style summary: area, leakage, min period; deterministic."""
    name = config.slug().replace("-", "_")
    min_period_ns = 1e9 / report.f_op
    lines = [
        f"library ({name}_lib) {{",
        "  delay_model : table_lookup;",
        "  time_unit : \"1ns\";",
        "  leakage_power_unit : \"1nW\";",
        "  capacitive_load_unit (1, pf);",
        "",
        f"  cell ({name}) {{",
        f"    area : {report.area.total_area:.4f};",
        f"    cell_leakage_power : {report.p_leak * 1e9:.6e};",
        f"    user_attribute_min_period_ns : {min_period_ns:.6f};",
        f"    user_attribute_f_read_max_mhz : {report.f_read_max / 1e6:.3f};",
        f"    user_attribute_f_write_max_mhz : {report.f_write_max / 1e6:.3f};",
    ]
    if config.is_gain_cell:
        lines.append(
            f"    user_attribute_retention_time_s : "
            f"{report.t_retention:.6e};")
    lines += [
        f"    user_attribute_access_energy_fj : {report.e_access * 1e15:.4f};",
        "  }",
        "}",
    ]
    return "\n".join(lines) + "\n"
