"""Command-line front end: gen / char / shmoo / plan / all.

All flows are deterministic: the same argv and input files produce a
byte-identical output tree.  Exit codes: 0 success, 1 validation error,
2 infeasible plan.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import charlib, dse, floorplan, netgen
from .errors import GcramError, InfeasibleError
from .netgen import MacroConfig
from .technology import VariantName, default_technology_path, load_technology

TECH_ENV_VAR = "GCRAM_TECH"

_VARIANT_FLAG = {"sisi-gc": VariantName.SISI_GC,
                 "ossi-gc": VariantName.OSSI_GC,
                 "sram6t": VariantName.SRAM6T}


def _default_requirements_path() -> Path:
    return default_technology_path().parent / "sample_profile.json"


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--tech", metavar="FILE",
                   default=os.environ.get(TECH_ENV_VAR),
                   help=f"technology file (default: ${TECH_ENV_VAR} or the "
                        f"packaged default)")
    p.add_argument("-o", "--out", metavar="DIR", default="out",
                   help="output directory (default: ./out)")


def _add_macro(p: argparse.ArgumentParser):
    p.add_argument("--variant", choices=sorted(_VARIANT_FLAG), required=True)
    p.add_argument("--wz", type=int, required=True, help="word size (bits)")
    p.add_argument("--nw", type=int, required=True, help="number of words")
    p.add_argument("--banks", type=int, default=1)
    p.add_argument("--ls", action="store_true",
                   help="boost the write wordline with a level shifter")
    p.add_argument("--mux", default="auto",
                   help="column mux factor (power of two, or 'auto')")


def _add_requirements(p: argparse.ArgumentParser, required=False):
    p.add_argument("--requirements", metavar="FILE", required=required,
                   default=None,
                   help="workload requirement profile JSON "
                        "(default: packaged sample profile)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gcram",
        description="Gain-cell RAM / SRAM macro compiler and design-space "
                    "explorer")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate netlist, HDL model, and "
                                       "abstract view")
    _add_common(p_gen); _add_macro(p_gen)

    p_char = sub.add_parser("char", help="characterize a macro")
    _add_common(p_char); _add_macro(p_char)

    p_shmoo = sub.add_parser("shmoo", help="feasibility grid over sizes and "
                                           "tasks")
    _add_common(p_shmoo); _add_requirements(p_shmoo)
    p_shmoo.add_argument("--variant", choices=sorted(_VARIANT_FLAG),
                         required=True)

    p_plan = sub.add_parser("plan", help="select per-task technology "
                                         "compositions")
    _add_common(p_plan); _add_requirements(p_plan)

    p_all = sub.add_parser("all", help="gen + char for one macro, then shmoo "
                                       "and plan")
    _add_common(p_all); _add_macro(p_all); _add_requirements(p_all)
    return parser


def _load_tech(args):
    path = args.tech or default_technology_path()
    return load_technology(path)


def _macro_config(args) -> MacroConfig:
    mux = None if args.mux == "auto" else int(args.mux)
    return MacroConfig(variant=_VARIANT_FLAG[args.variant],
                       word_size=args.wz, num_words=args.nw,
                       num_banks=args.banks, ls=args.ls, column_mux=mux)


def _write(outdir: Path, name: str, text: str):
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / name).write_text(text)
    print(f"wrote {outdir / name}")


def _run_gen(args, tech, outdir: Path):
    config = _macro_config(args)
    netlist = netgen.generate_macro(config, tech)
    report = netgen.connectivity_check(netlist)
    slug = config.slug()
    _write(outdir, f"{slug}.sp", netgen.emit_spice(netlist))
    _write(outdir, f"{slug}.v", netgen.emit_verilog_model(config))
    _write(outdir, f"{slug}.lef",
           floorplan.emit_lef_abstract(config, tech, netlist))
    status = "PASS" if report.passed else "FAIL"
    body = [f"connectivity: {status}"]
    body += [f"{rule}: {detail}" for _, rule, detail in report.violations]
    _write(outdir, f"{slug}.connectivity.txt", "\n".join(body) + "\n")


def _run_char(args, tech, outdir: Path):
    config = _macro_config(args)
    report = charlib.characterize(config, tech)
    slug = config.slug()
    _write(outdir, f"{slug}.char.json", report.to_json())
    _write(outdir, f"{slug}.lib",
           charlib.emit_liberty_summary(report, config))


def _run_shmoo(args, tech, outdir: Path):
    reqs = dse.load_requirements(args.requirements or
                                 _default_requirements_path())
    variant = _VARIANT_FLAG[args.variant]
    grid = dse.shmoo(reqs, variant, tech)
    _write(outdir, f"shmoo_{args.variant}.json", grid.to_json())
    _write(outdir, f"shmoo_{args.variant}.csv", grid.to_csv())


def _run_plan(args, tech, outdir: Path):
    reqs = dse.load_requirements(args.requirements or
                                 _default_requirements_path())
    envelopes = dse.build_envelopes(tech)
    plan = dse.select_plan(reqs, envelopes)
    table, payload = dse.emit_plan(plan)
    _write(outdir, "plan.txt", table)
    _write(outdir, "plan.json", payload)
    print(table, end="")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    outdir = Path(args.out)
    try:
        tech = _load_tech(args)
        if args.command == "gen":
            _run_gen(args, tech, outdir)
        elif args.command == "char":
            _run_char(args, tech, outdir)
        elif args.command == "shmoo":
            _run_shmoo(args, tech, outdir)
        elif args.command == "plan":
            _run_plan(args, tech, outdir)
        elif args.command == "all":
            _run_gen(args, tech, outdir)
            _run_char(args, tech, outdir)
            for flag in sorted(_VARIANT_FLAG):
                args.variant = flag
                _run_shmoo(args, tech, outdir)
            _run_plan(args, tech, outdir)
    except InfeasibleError as exc:
        print(f"error: infeasible: {exc}", file=sys.stderr)
        return 2
    except (GcramError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
