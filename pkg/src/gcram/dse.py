"""Design-space exploration: workload requirements, capability envelopes,
shmoo feasibility grids, and heterogeneous technology selection.

Selection follows a fixed priority (OS-Si gain cell, then Si-Si gain cell,
then SRAM): denser, lower-leakage technologies are taken first and a lower
priority technology is used only for lifetime bins the better ones cannot
serve.  A bin's frequency demand is its task read frequency scaled by the
bin's traffic share.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .charlib import CharReport, characterize, retention_solve
from .errors import InfeasibleError, RequirementError
from .netgen import MacroConfig
from .technology import TechnologyModel, VariantName

DEFAULT_SIZE_GRID = tuple((wz, nw)
                          for wz in (16, 32, 64, 128)
                          for nw in (16, 32, 64, 128))

TECH_PRIORITY = (VariantName.OSSI_GC, VariantName.SISI_GC, VariantName.SRAM6T)
TECH_WEIGHT = {VariantName.OSSI_GC: 1, VariantName.SISI_GC: 2,
               VariantName.SRAM6T: 3}


@dataclass(frozen=True)
class LifetimeBin:
    t_min: float            # s
    t_max: float            # s
    traffic_share: float    # fraction of accesses with lifetimes in the bin


@dataclass(frozen=True)
class WorkloadRequirement:
    task_id: str
    task_name: str
    cache_level: str        # "L1" | "L2"
    f_read_req: float       # Hz
    lifetime_bins: tuple[LifetimeBin, ...]

    def validate(self):
        where = f"task '{self.task_id}' {self.cache_level}"
        if self.cache_level not in ("L1", "L2"):
            raise RequirementError(f"{where}: cache_level must be L1 or L2")
        if not self.f_read_req > 0:
            raise RequirementError(f"{where}: f_read_req must be positive")
        if not self.lifetime_bins:
            raise RequirementError(f"{where}: needs at least one lifetime bin")
        total = 0.0
        for i, b in enumerate(self.lifetime_bins):
            if not (b.t_min < b.t_max):
                raise RequirementError(
                    f"{where} bin {i}: t_min must be < t_max")
            if not (0.0 <= b.traffic_share <= 1.0):
                raise RequirementError(
                    f"{where} bin {i}: traffic_share outside [0, 1]")
            total += b.traffic_share
        if abs(total - 1.0) > 1e-9:
            raise RequirementError(
                f"{where}: traffic shares sum to {total}, expected 1")
        spans = sorted((b.t_min, b.t_max) for b in self.lifetime_bins)
        for (lo1, hi1), (lo2, _) in zip(spans, spans[1:]):
            if lo2 < hi1:
                raise RequirementError(f"{where}: lifetime bins overlap")


def load_requirements(path: str | Path) -> list[WorkloadRequirement]:
    """Parse and validate a JSON requirement profile."""
    path = Path(path)
    if not path.exists():
        raise RequirementError(f"requirements file not found: {path}")
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise RequirementError(f"{path}: invalid JSON: {exc}") from exc
    if isinstance(raw, dict):
        raw = raw.get("requirements", raw.get("tasks"))
    if not isinstance(raw, list):
        raise RequirementError(
            f"{path}: expected a list (or a 'requirements' key)")
    out = []
    for i, entry in enumerate(raw):
        try:
            bins = tuple(LifetimeBin(float(b["t_min_s"]), float(b["t_max_s"]),
                                     float(b["traffic_share"]))
                         for b in entry["lifetime_bins"])
            req = WorkloadRequirement(
                task_id=str(entry["task_id"]),
                task_name=str(entry.get("task_name", entry["task_id"])),
                cache_level=str(entry["cache_level"]),
                f_read_req=float(entry["f_read_req_hz"]),
                lifetime_bins=bins)
        except (KeyError, TypeError, ValueError) as exc:
            raise RequirementError(
                f"{path}: entry {i} is malformed: {exc!r}") from exc
        req.validate()
        out.append(req)
    return out


# --- capability envelopes -----------------------------------------------------

@dataclass(frozen=True)
class CapabilityEnvelope:
    variant: VariantName
    f_op_max: float          # Hz, best over the size grid (and LS option)
    t_retention_min: float   # s, weakest tuning point
    t_retention_max: float   # s, strongest tuning point (LS + max delta_vt)
    p_leak_per_bit: float    # W, best over the grid
    area_per_bit: float      # um^2, best over the grid


def build_envelope(variant: VariantName, tech: TechnologyModel,
                   size_grid=DEFAULT_SIZE_GRID) -> CapabilityEnvelope:
    gc = variant is not VariantName.SRAM6T
    ls_options = (False, True) if gc else (False,)

    f_best = 0.0
    leak_best = math.inf
    area_best = math.inf
    for wz, nw in size_grid:
        for ls in ls_options:
            cfg = MacroConfig(variant, wz, nw, ls=ls)
            rep = characterize(cfg, tech)
            bits = wz * nw
            f_best = max(f_best, rep.f_op)
            leak_best = min(leak_best, rep.p_leak / bits)
            area_best = min(area_best, rep.area.total_area / bits)

    if gc:
        # retention is geometry independent: sweep only tuning knobs
        any_cfg = MacroConfig(variant, *size_grid[0])
        weak = retention_solve(any_cfg, tech, 0.0).failure_time
        strong_cfg = MacroConfig(variant, *size_grid[0], ls=True)
        strong = retention_solve(strong_cfg, tech,
                                 tech.delta_vt_max).failure_time
        t_min, t_max = weak, strong
    else:
        t_min = t_max = math.inf
    return CapabilityEnvelope(variant, f_best, t_min, t_max,
                              leak_best, area_best)


def build_envelopes(tech: TechnologyModel, size_grid=DEFAULT_SIZE_GRID):
    return {v: build_envelope(v, tech, size_grid) for v in TECH_PRIORITY}


# --- feasibility --------------------------------------------------------------

def feasible(report: CharReport, req: WorkloadRequirement,
             lifetime_bin: LifetimeBin):
    """(workable, failing-tag) for one characterized config against one bin.

    Workable needs the full task read rate and data surviving the bin's
    whole lifetime (closed inequalities; no refresh is modeled).
    """
    if report.f_op < req.f_read_req:
        return False, "frequency"
    if report.t_retention < lifetime_bin.t_max:
        return False, "retention"
    return True, None


def envelope_feasible(env: CapabilityEnvelope, req: WorkloadRequirement,
                      lifetime_bin: LifetimeBin):
    """Bin-level feasibility against a technology envelope; the frequency
    demand is the task read rate scaled by the bin's traffic share."""
    demand = req.f_read_req * lifetime_bin.traffic_share
    if env.f_op_max < demand:
        return False, "frequency"
    if env.t_retention_max < lifetime_bin.t_max:
        return False, "retention"
    return True, None


# --- shmoo grid ---------------------------------------------------------------

@dataclass(frozen=True)
class ShmooCell:
    task_id: str
    wz: int
    nw: int
    workable: bool
    tag: str | None          # failing constraint when red


@dataclass(frozen=True)
class ShmooGrid:
    variant: VariantName
    sizes: tuple[tuple[int, int], ...]
    task_ids: tuple[str, ...]
    cells: tuple[ShmooCell, ...]

    def to_json(self) -> str:
        payload = {
            "variant": self.variant.value,
            "sizes": [list(s) for s in self.sizes],
            "task_ids": list(self.task_ids),
            "cells": [{"task_id": c.task_id, "wz": c.wz, "nw": c.nw,
                       "workable": c.workable, "tag": c.tag}
                      for c in self.cells],
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        lines = ["task_id,wz,nw,workable,tag"]
        for c in self.cells:
            lines.append(f"{c.task_id},{c.wz},{c.nw},"
                         f"{int(c.workable)},{c.tag or ''}")
        return "\n".join(lines) + "\n"


def shmoo(tasks: list[WorkloadRequirement], variant: VariantName,
          tech: TechnologyModel, size_grid=DEFAULT_SIZE_GRID) -> ShmooGrid:
    """Feasibility of every macro size against every task requirement."""
    cells = []
    reports = {size: characterize(MacroConfig(variant, *size), tech)
               for size in size_grid}
    for req in tasks:
        key = f"{req.task_id}:{req.cache_level}"
        for size in size_grid:
            rep = reports[size]
            workable, tag = True, None
            for b in req.lifetime_bins:
                ok, fail = feasible(rep, req, b)
                if not ok:
                    workable, tag = False, fail
                    break
            cells.append(ShmooCell(key, size[0], size[1], workable, tag))
    task_ids = tuple(f"{r.task_id}:{r.cache_level}" for r in tasks)
    return ShmooGrid(variant, tuple(size_grid), task_ids, tuple(cells))


# --- heterogeneous plan selection ---------------------------------------------

@dataclass(frozen=True)
class PlanEntry:
    task_id: str
    task_name: str
    cache_level: str
    # priority-ordered technologies with the bin indices each one covers
    assignments: tuple[tuple[VariantName, tuple[int, ...]], ...]
    trace: tuple[str, ...]   # which constraint eliminated which candidate

    @property
    def technologies(self) -> tuple[VariantName, ...]:
        return tuple(t for t, _ in self.assignments)


@dataclass(frozen=True)
class HeterogeneousPlan:
    entries: tuple[PlanEntry, ...]


def select_plan(requirements: list[WorkloadRequirement],
                envelopes: dict[VariantName, CapabilityEnvelope]
                ) -> HeterogeneousPlan:
    """Greedy per-bin assignment in fixed priority order.

    Each lifetime bin gets the highest-priority feasible technology, so the
    resulting per-requirement set is minimal: every member is the unique
    cheapest cover for at least one bin.
    """
    for v in TECH_PRIORITY:
        if v not in envelopes:
            raise InfeasibleError(f"missing envelope for {v.value}")
    entries = []
    for req in requirements:
        req.validate()
        chosen: dict[VariantName, list[int]] = {}
        trace: list[str] = []
        for i, b in enumerate(req.lifetime_bins):
            pick = None
            for v in TECH_PRIORITY:
                ok, tag = envelope_feasible(envelopes[v], req, b)
                if ok:
                    pick = v
                    break
                trace.append(f"bin {i}: {v.value} eliminated ({tag})")
            if pick is None:
                _, tag = envelope_feasible(envelopes[TECH_PRIORITY[-1]],
                                           req, b)
                raise InfeasibleError(
                    f"task '{req.task_id}' {req.cache_level} bin {i} "
                    f"([{b.t_min:g}, {b.t_max:g}] s) is infeasible for every "
                    f"technology; binding constraint: {tag}",
                    task_id=req.task_id, bin_index=i, constraint=tag)
            chosen.setdefault(pick, []).append(i)
            trace.append(f"bin {i}: assigned {pick.value}")
        assignments = tuple((v, tuple(chosen[v]))
                            for v in TECH_PRIORITY if v in chosen)
        entries.append(PlanEntry(req.task_id, req.task_name, req.cache_level,
                                 assignments, tuple(trace)))
    entries.sort(key=lambda e: (e.task_id, e.cache_level))
    return HeterogeneousPlan(tuple(entries))


_SHORT = {VariantName.OSSI_GC: "OS-Si GC", VariantName.SISI_GC: "Si-Si GC",
          VariantName.SRAM6T: "SRAM"}


def emit_plan(plan: HeterogeneousPlan) -> tuple[str, str]:
    """(human-readable table, machine JSON); deterministic ordering."""
    by_task: dict[str, dict[str, PlanEntry]] = {}
    names: dict[str, str] = {}
    for e in plan.entries:
        by_task.setdefault(e.task_id, {})[e.cache_level] = e
        names[e.task_id] = e.task_name

    def cellof(entry: PlanEntry | None) -> str:
        if entry is None:
            return "-"
        return " + ".join(_SHORT[t] for t in entry.technologies)

    rows = [(tid, names[tid],
             cellof(by_task[tid].get("L1")), cellof(by_task[tid].get("L2")))
            for tid in sorted(by_task)]
    widths = [max(len(r[i]) for r in rows + [("task", "name", "L1", "L2")])
              for i in range(4)]

    def fmt(r):
        return " | ".join(v.ljust(w) for v, w in zip(r, widths))

    table_lines = [fmt(("task", "name", "L1", "L2")),
                   "-+-".join("-" * w for w in widths)]
    table_lines += [fmt(r) for r in rows]
    table = "\n".join(table_lines) + "\n"

    payload = [{
        "task_id": e.task_id,
        "task_name": e.task_name,
        "cache_level": e.cache_level,
        "technologies": [t.value for t in e.technologies],
        "assignments": [{"technology": t.value, "bins": list(bins)}
                        for t, bins in e.assignments],
        "trace": list(e.trace),
    } for e in plan.entries]
    return table, json.dumps(payload, indent=2, sort_keys=True) + "\n"
