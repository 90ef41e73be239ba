import json
import math
import random

import pytest

from gcram.cli import _default_requirements_path
from gcram.dse import (DEFAULT_SIZE_GRID, TECH_PRIORITY, TECH_WEIGHT,
                       CapabilityEnvelope, LifetimeBin, WorkloadRequirement,
                       build_envelopes, emit_plan,
                       envelope_feasible, feasible, load_requirements,
                       select_plan, shmoo)
from gcram.charlib import characterize
from gcram.errors import InfeasibleError, RequirementError
from gcram.netgen import MacroConfig
from gcram.technology import VariantName, load_default_technology
from planner_oracle import brute_force, random_requirement

SI, OS, SR = VariantName.SISI_GC, VariantName.OSSI_GC, VariantName.SRAM6T


@pytest.fixture(scope="module")
def tech():
    return load_default_technology()


@pytest.fixture(scope="module")
def envelopes(tech):
    return build_envelopes(tech)


def req(f_hz, bins, task="t", level="L1", name=None):
    return WorkloadRequirement(task, name or task, level, f_hz,
                               tuple(LifetimeBin(*b) for b in bins))


# --- requirement loading ------------------------------------------------------

class TestLoadRequirements:
    def test_sample_profile_loads(self):
        reqs = load_requirements(_default_requirements_path())
        assert len(reqs) == 14
        assert {r.cache_level for r in reqs} == {"L1", "L2"}
        assert len({r.task_id for r in reqs}) == 7

    def test_shares_must_sum_to_one(self, tmp_path):
        p = tmp_path / "r.json"
        p.write_text(json.dumps([{
            "task_id": "x", "cache_level": "L1", "f_read_req_hz": 1e9,
            "lifetime_bins": [
                {"t_min_s": 1e-6, "t_max_s": 1e-3, "traffic_share": 0.9}]}]))
        with pytest.raises(RequirementError, match="sum"):
            load_requirements(p)

    def test_overlapping_bins_rejected(self, tmp_path):
        p = tmp_path / "r.json"
        p.write_text(json.dumps([{
            "task_id": "x", "cache_level": "L1", "f_read_req_hz": 1e9,
            "lifetime_bins": [
                {"t_min_s": 1e-6, "t_max_s": 1e-3, "traffic_share": 0.5},
                {"t_min_s": 1e-4, "t_max_s": 1e-2, "traffic_share": 0.5}]}]))
        with pytest.raises(RequirementError, match="overlap"):
            load_requirements(p)

    def test_malformed_entry_names_index(self, tmp_path):
        p = tmp_path / "r.json"
        p.write_text(json.dumps([{"task_id": "x"}]))
        with pytest.raises(RequirementError, match="entry 0"):
            load_requirements(p)

    def test_missing_file(self, tmp_path):
        with pytest.raises(RequirementError, match="not found"):
            load_requirements(tmp_path / "none.json")


# --- envelopes ----------------------------------------------------------------

class TestEnvelopes:
    def test_sram_retention_infinite(self, envelopes):
        env = envelopes[SR]
        assert math.isinf(env.t_retention_min)
        assert math.isinf(env.t_retention_max)

    def test_frequency_ordering(self, envelopes):
        assert envelopes[OS].f_op_max < envelopes[SI].f_op_max \
            < envelopes[SR].f_op_max

    def test_os_reaches_ten_seconds(self, envelopes):
        assert envelopes[OS].t_retention_max >= 10.0

    def test_density_and_leakage_favor_gc(self, envelopes):
        assert envelopes[OS].area_per_bit < envelopes[SR].area_per_bit
        assert envelopes[OS].p_leak_per_bit < 1e-2 * envelopes[SR].p_leak_per_bit


# --- feasibility and shmoo ----------------------------------------------------

class TestFeasible:
    def test_vacuous_requirement_workable(self, tech):
        rep = characterize(MacroConfig(SI, 16, 16), tech)
        b = LifetimeBin(1e-9, 1e-6, 1.0)
        ok, tag = feasible(rep, req(1.0, [(1e-9, 1e-6, 1.0)]), b)
        assert ok and tag is None

    def test_frequency_tag(self, tech):
        rep = characterize(MacroConfig(SI, 16, 16), tech)
        b = LifetimeBin(1e-9, 1e-6, 1.0)
        ok, tag = feasible(rep, req(1e15, [(1e-9, 1e-6, 1.0)]), b)
        assert not ok and tag == "frequency"

    def test_retention_tag_and_closed_boundary(self, tech):
        rep = characterize(MacroConfig(SI, 16, 16), tech)
        bad = LifetimeBin(1.0, 100.0, 1.0)
        ok, tag = feasible(rep, req(1.0, [(1.0, 100.0, 1.0)]), bad)
        assert not ok and tag == "retention"
        exact = LifetimeBin(1e-9, rep.t_retention, 1.0)
        ok, _ = feasible(rep, req(1.0, [(1e-9, rep.t_retention, 1.0)]), exact)
        assert ok  # boundary is workable by convention


class TestShmoo:
    def test_all_green_and_all_red_rows(self, tech):
        tasks = [req(1.0, [(1e-9, 1e-6, 1.0)], task="easy"),
                 req(1e15, [(1e-9, 1e-6, 1.0)], task="impossible")]
        grid = shmoo(tasks, SI, tech)
        easy = [c for c in grid.cells if c.task_id.startswith("easy")]
        hard = [c for c in grid.cells if c.task_id.startswith("impossible")]
        assert len(easy) == len(DEFAULT_SIZE_GRID)
        assert all(c.workable for c in easy)
        assert all(not c.workable and c.tag == "frequency" for c in hard)

    def test_organization_split(self, tech):
        # demand between the 4:1 and 1:1 achievable rates at 4 Kb
        f_41 = characterize(MacroConfig(SI, 128, 32), tech).f_op
        f_11 = characterize(MacroConfig(SI, 64, 64), tech).f_op
        assert f_11 < f_41
        demand = 0.5 * (f_11 + f_41)
        task = req(demand, [(1e-9, 1e-6, 1.0)], task="split")
        grid = shmoo([task], SI, tech)
        cell = {(c.wz, c.nw): c for c in grid.cells}
        assert cell[(128, 32)].workable
        assert not cell[(64, 64)].workable

    def test_consistency_with_characterize(self, tech):
        reqs = load_requirements(_default_requirements_path())[:4]
        grid = shmoo(reqs, OS, tech)
        for c in grid.cells:
            r = next(x for x in reqs
                     if f"{x.task_id}:{x.cache_level}" == c.task_id)
            rep = characterize(MacroConfig(OS, c.wz, c.nw), tech)
            expect = all(feasible(rep, r, b)[0] for b in r.lifetime_bins)
            assert c.workable == expect

    def test_outputs_deterministic(self, tech):
        tasks = [req(1e9, [(1e-9, 1e-6, 1.0)])]
        a, b = shmoo(tasks, SI, tech), shmoo(tasks, SI, tech)
        assert a.to_json() == b.to_json()
        assert a.to_csv() == b.to_csv()


# --- planner ------------------------------------------------------------------

class TestPlanner:
    def test_priority_soundness(self, envelopes):
        r = req(1e9, [(1e-9, 1e-6, 0.5), (1e-3, 1.0, 0.5)])
        plan = select_plan([r], envelopes)
        assert plan.entries[0].technologies == (OS,)

    def test_sram_forced_by_frequency(self, envelopes):
        demand = envelopes[SI].f_op_max * 1.5
        r = req(demand, [(1e-9, 1e-6, 1.0)])
        plan = select_plan([r], envelopes)
        assert plan.entries[0].technologies == (SR,)

    def test_infeasible_names_bin_and_constraint(self, envelopes):
        r = req(1e15, [(1e-9, 1e-6, 1.0)])
        with pytest.raises(InfeasibleError) as exc:
            select_plan([r], envelopes)
        assert exc.value.bin_index == 0
        assert exc.value.constraint == "frequency"

    def test_oracle_equivalence_200_random_sets(self, envelopes):
        rng = random.Random(20260824)
        checked = infeasible = 0
        for _ in range(200):
            r = random_requirement(rng)
            r.validate()
            expect = brute_force(r, envelopes)
            if expect is None:
                with pytest.raises(InfeasibleError):
                    select_plan([r], envelopes)
                infeasible += 1
                continue
            plan = select_plan([r], envelopes)
            got = [None] * len(r.lifetime_bins)
            for v, idxs in plan.entries[0].assignments:
                for i in idxs:
                    got[i] = v
            assert tuple(got) == expect
            checked += 1
        assert checked >= 100  # the random family must mostly be feasible
        assert infeasible + checked == 200

    def test_minimality_by_exhaustive_removal(self, envelopes):
        rng = random.Random(7)
        for _ in range(50):
            r = random_requirement(rng)
            expect = brute_force(r, envelopes)
            if expect is None:
                continue
            plan = select_plan([r], envelopes)
            for v, idxs in plan.entries[0].assignments:
                # dropping any member leaves its bins to strictly worse techs
                assert idxs, "assigned technology covers no bin"
                for i in idxs:
                    b = r.lifetime_bins[i]
                    higher = TECH_PRIORITY[:TECH_PRIORITY.index(v)]
                    assert not any(
                        envelope_feasible(envelopes[h], r, b)[0]
                        for h in higher)

    def test_per_bin_monotone_under_weakening(self, envelopes):
        rng = random.Random(99)
        for _ in range(50):
            r = random_requirement(rng)
            if brute_force(r, envelopes) is None:
                continue
            weaker = WorkloadRequirement(
                r.task_id, r.task_name, r.cache_level, r.f_read_req * 0.5,
                tuple(LifetimeBin(b.t_min * 0.5, b.t_max * 0.5,
                                  b.traffic_share)
                      for b in r.lifetime_bins))
            strong = select_plan([r], envelopes).entries[0]
            weak = select_plan([weaker], envelopes).entries[0]

            def per_bin(entry, n):
                out = [None] * n
                for v, idxs in entry.assignments:
                    for i in idxs:
                        out[i] = v
                return out

            n = len(r.lifetime_bins)
            for a, b in zip(per_bin(strong, n), per_bin(weak, n)):
                assert TECH_WEIGHT[b] <= TECH_WEIGHT[a]

    def test_trace_records_eliminations(self, envelopes):
        demand = envelopes[OS].f_op_max * 1.2
        r = req(demand, [(1e-9, 1e-6, 1.0)])
        plan = select_plan([r], envelopes)
        entry = plan.entries[0]
        assert any("OSSiGC eliminated (frequency)" in t for t in entry.trace)


@pytest.fixture(scope="module")
def plan(envelopes):
    reqs = load_requirements(_default_requirements_path())
    return select_plan(reqs, envelopes)


class TestSampleProfilePlan:
    def test_seven_by_two_shape(self, plan):
        assert len(plan.entries) == 14
        tasks = {e.task_id for e in plan.entries}
        assert len(tasks) == 7

    def test_three_technology_entry_present(self, plan):
        combos = {e.technologies for e in plan.entries}
        assert (OS, SI, SR) in combos

    def test_l2_demands_at_least_l1(self, plan):
        reqs = load_requirements(_default_requirements_path())
        by = {(r.task_id, r.cache_level): r for r in reqs}
        for t in {r.task_id for r in reqs}:
            assert by[(t, "L2")].f_read_req > by[(t, "L1")].f_read_req

    def test_emit_plan_table_and_json(self, plan):
        table, payload = emit_plan(plan)
        assert table.count("\n") == 9  # header + rule + 7 rows
        data = json.loads(payload)
        assert len(data) == 14
        assert emit_plan(plan) == emit_plan(plan)

    def test_empty_requirements_ok(self):
        table, payload = emit_plan(select_plan([], {v: CapabilityEnvelope(
            v, 1e9, 0.0, math.inf, 0.0, 0.0) for v in TECH_PRIORITY}))
        assert json.loads(payload) == []
