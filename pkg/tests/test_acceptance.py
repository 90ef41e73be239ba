"""Acceptance suite: nine numbered criteria, one verdict line each.

Every test prints `CRITERION n: PASS/FAIL ...` outside pytest's capture
(via capsys.disabled) so the verdicts are visible in any run log.  Stated tolerances:
area ratios exact to 3 decimals; retention solver vs closed form within 0.1%
relative; all orderings strict unless noted.  Each criterion also enforces
its runtime budget.
"""

import filecmp
import math
import random
import time

import pytest

from gcram.charlib import characterize, retention_solve, solve_storage_decay
from gcram.cli import _default_requirements_path, main
from gcram.dse import (TECH_PRIORITY, build_envelopes, envelope_feasible,
                       load_requirements, select_plan)
from gcram.errors import InfeasibleError
from gcram.floorplan import bank_area
from gcram.netgen import (Instance, MacroConfig, connectivity_check,
                          emit_spice, generate_macro, isomorphic, parse_spice)
from gcram.technology import (TransistorModel, TxKind, VariantName,
                              load_default_technology)
from planner_oracle import assigned_per_bin, brute_force, random_requirement

SI, OS, SR = VariantName.SISI_GC, VariantName.OSSI_GC, VariantName.SRAM6T

# 16x16 .. 128x128 characterization sweep; 5x5 structural grid adds 256
SWEEP_GRID = [(wz, nw) for wz in (16, 32, 64, 128) for nw in (16, 32, 64, 128)]
STRUCT_GRID = [(wz, nw) for wz in (16, 32, 64, 128, 256)
               for nw in (16, 32, 64, 128, 256)]


@pytest.fixture(scope="module")
def tech():
    return load_default_technology()


def verdict(capsys, n, ok, detail, elapsed, budget):
    status = "PASS" if ok else "FAIL"
    with capsys.disabled():
        print(f"\nCRITERION {n}: {status} - {detail} [{elapsed:.2f}s / "
              f"budget {budget:.0f}s]", flush=True)
    assert ok, f"criterion {n}: {detail}"
    assert elapsed < budget, f"criterion {n} overran: {elapsed:.1f}s"


def test_criterion_1_cell_area_ratios(tech, capsys):
    t0 = time.perf_counter()
    r_si = tech.variant(SI).cell_area / tech.variant(SR).cell_area
    r_os = tech.variant(OS).cell_area / tech.variant(SR).cell_area
    ok = round(r_si, 3) == 0.690 and round(r_os, 3) == 0.350
    verdict(capsys, 1, ok, f"Si-Si/SRAM={r_si:.3f}, OS-Si/SRAM={r_os:.3f}",
            time.perf_counter() - t0, 1.0)


def test_criterion_2_bank_area_crossover(tech, capsys):
    t0 = time.perf_counter()
    ok = True
    notes = []
    for nw, gc_bigger in ((32, True), (128, False), (256, False),
                          (512, False), (1024, False)):
        a_si = bank_area(MacroConfig(SI, 16, nw), tech).total_area
        a_os = bank_area(MacroConfig(OS, 16, nw), tech).total_area
        a_sr = bank_area(MacroConfig(SR, 16, nw), tech).total_area
        ok &= (a_si > a_sr) == gc_bigger
        ok &= a_os < min(a_si, a_sr)
        notes.append(f"{16 * nw // 1024 or 0.5}Kb:{a_si / a_sr:.2f}")
    verdict(capsys, 2, ok, "Si-Si/SRAM ratio " + " ".join(notes) +
            "; OS-Si smallest everywhere", time.perf_counter() - t0, 5.0)


def test_criterion_3_leakage_separation(tech, capsys):
    t0 = time.perf_counter()
    worst = 0.0
    for wz, nw in SWEEP_GRID:
        p_sr = characterize(MacroConfig(SR, wz, nw), tech).p_leak
        for v in (SI, OS):
            for ls in (False, True):
                p = characterize(MacroConfig(v, wz, nw, ls=ls), tech).p_leak
                worst = max(worst, p / p_sr)
    verdict(capsys, 3, worst <= 1e-2, f"worst GC/SRAM leakage ratio {worst:.2e} "
            f"(limit 1e-2)", time.perf_counter() - t0, 5.0)


def test_criterion_4_retention_regimes(tech, capsys):
    t0 = time.perf_counter()
    t_si = retention_solve(MacroConfig(SI, 16, 16), tech).failure_time
    t_os = retention_solve(MacroConfig(OS, 16, 16), tech).failure_time
    t_osv = retention_solve(MacroConfig(OS, 16, 16), tech, 0.2).failure_time
    const = TransistorModel("const", TxKind.SI_NMOS, vt=0.5, ss=1e9,
                            i_off_ref=1e-9, i_on=1.0, width=1.0, c_gate=1.0)
    t_oracle = solve_storage_decay(const, 1.0, 0.5, 0.4).failure_time
    rel = abs(t_oracle - 1e-7) / 1e-7
    ok = (1e-6 <= t_si <= 1e-4) and t_os >= 1e-3 and t_osv >= 10.0 \
        and rel <= 1e-3
    verdict(capsys, 4, ok, f"Si-Si {t_si:.2e}s, OS-Si {t_os:.2e}s, "
            f"OS-Si+0.2V {t_osv:.2e}s, solver-vs-closed-form {rel:.1e}",
            time.perf_counter() - t0, 30.0)


def test_criterion_5_ls_monotonicity(tech, capsys):
    t0 = time.perf_counter()
    ok = True
    for v in (SI, OS):
        for wz, nw in SWEEP_GRID:
            base = characterize(MacroConfig(v, wz, nw), tech)
            ls = characterize(MacroConfig(v, wz, nw, ls=True), tech)
            ok &= ls.f_read_max > base.f_read_max
            ok &= ls.t_retention > base.t_retention
            ok &= ls.area.ring_area > base.area.ring_area
    verdict(capsys, 5, ok, "LS strictly improves f_read_max, t_retention, and "
            "ring_area on all 32 GC grid configs",
            time.perf_counter() - t0, 30.0)


def test_criterion_6_organization_effect(tech, capsys):
    t0 = time.perf_counter()
    ok = True
    step_seen = False
    for cap in (1024, 4096, 16384):
        wz41 = 2 ** round(math.log2(math.sqrt(4 * cap)))
        wz11 = 2 ** round(math.log2(math.sqrt(cap)))
        r41 = characterize(MacroConfig(SI, wz41, cap // wz41), tech)
        r11 = characterize(MacroConfig(SI, wz11, cap // wz11), tech)
        ok &= r41.f_read_max >= r11.f_read_max
        step_seen |= r41.delay_chain_stages != r11.delay_chain_stages
    verdict(capsys, 6, ok and step_seen, "4:1 f_read >= 1:1 at 1/4/16 Kb with a "
            "quantized stage step", time.perf_counter() - t0, 30.0)


def test_criterion_7_netlist_structural_suite(tech, capsys):
    t0 = time.perf_counter()
    ok = True
    cells = {SI: "bitcell_sisi", OS: "bitcell_ossi", SR: "bitcell_sram6t"}
    for v in (SI, OS, SR):
        for wz, nw in STRUCT_GRID:
            cfg = MacroConfig(v, wz, nw)
            net = generate_macro(cfg, tech)
            m = cfg.mux_factor
            ok &= net.instance_count(cells[v]) == wz * nw
            ok &= net.instance_count("dff") == wz
            if v is not SR:
                ok &= net.instance_count("wwl_driver") == nw // m
                ok &= net.instance_count("sense_amp_se") == wz
                ok &= net.instance_count("predischarge") == wz * m
            ok &= connectivity_check(net).passed
            ok &= isomorphic(net, parse_spice(emit_spice(net)))
        # injected faults on one representative config per variant
        net = generate_macro(MacroConfig(v, 16, 16), tech)
        top = net.subcircuits[net.top]
        inst = top.instances[-1]
        top.instances[-1] = Instance(inst.name, inst.subckt,
                                     ("lonely",) + inst.nets[1:])
        ok &= not connectivity_check(net).passed
    verdict(capsys, 7, ok, "75 netlists: counts, connectivity, round-trip, and "
            "fault flagging", time.perf_counter() - t0, 60.0)


def test_criterion_8_planner_oracle(tech, capsys):
    t0 = time.perf_counter()
    envelopes = build_envelopes(tech)
    rng = random.Random(20260824)
    ok = True
    for _ in range(200):
        r = random_requirement(rng)
        expect = brute_force(r, envelopes)
        if expect is None:
            try:
                select_plan([r], envelopes)
                ok = False
            except InfeasibleError:
                pass
            continue
        entry = select_plan([r], envelopes).entries[0]
        got = assigned_per_bin(entry, len(r.lifetime_bins))
        ok &= tuple(got) == expect
        # priority soundness + minimality on every feasible set
        if all(envelope_feasible(envelopes[OS], r, b)[0]
               for b in r.lifetime_bins):
            ok &= entry.technologies == (OS,)
        for v, idxs in entry.assignments:
            ok &= bool(idxs)
            for i in idxs:
                higher = TECH_PRIORITY[:TECH_PRIORITY.index(v)]
                ok &= not any(envelope_feasible(envelopes[h], r,
                                                r.lifetime_bins[i])[0]
                              for h in higher)
    plan = select_plan(load_requirements(_default_requirements_path()),
                       envelopes)
    ok &= len(plan.entries) == 14
    ok &= any(e.technologies == (OS, SI, SR) for e in plan.entries)
    verdict(capsys, 8, ok, "greedy == brute force on 200 random sets; sample "
            "profile gives 7x2 plan with an OS+Si+SRAM entry",
            time.perf_counter() - t0, 60.0)


def test_criterion_9_full_pipeline_determinism(tmp_path, capsys):
    t0 = time.perf_counter()
    argv = ["all", "--variant", "sisi-gc", "--wz", "32", "--nw", "64",
            "--ls"]
    a, b = tmp_path / "a", tmp_path / "b"
    ok = main(argv + ["-o", str(a)]) == 0
    ok &= main(argv + ["-o", str(b)]) == 0
    names = sorted(p.name for p in a.iterdir())
    ok &= names == sorted(p.name for p in b.iterdir()) and bool(names)
    match, mismatch, errors = filecmp.cmpfiles(a, b, names, shallow=False)
    ok &= not mismatch and not errors and len(match) == len(names)
    verdict(capsys, 9, ok, f"`all` pipeline twice: {len(names)} files, all "
            "byte-identical", time.perf_counter() - t0, 120.0)
