"""Memory-macro compiler and design-space explorer for two-transistor
gain-cell RAM (Si-Si and OS-Si) and 6T SRAM.

Modules:
    technology  device/bitcell models and technology-file loading
    netgen      hierarchical netlist generation, SPICE subset, HDL models
    floorplan   bank area model and LEF-style abstracts
    charlib     timing, bandwidth, leakage, and retention characterization
    dse         workload requirements, shmoo grids, technology planning
    cli         command-line front end
"""

from .charlib import (CharReport, RetentionTrace, characterize,
                      retention_solve, solve_storage_decay)
from .dse import (CapabilityEnvelope, HeterogeneousPlan, LifetimeBin,
                  ShmooGrid, WorkloadRequirement, build_envelope,
                  build_envelopes, load_requirements, select_plan, shmoo)
from .errors import (ConfigError, ConnectivityError, GcramError,
                     InfeasibleError, InvariantError, RequirementError,
                     SpiceSyntaxError, TechFileError, UnknownVariantError,
                     VariantError)
from .floorplan import (AreaReport, array_area, bank_area,
                        dual_port_sram_equivalent_area, emit_lef_abstract)
from .netgen import (MacroConfig, Netlist, connectivity_check, emit_spice,
                     emit_verilog_model, generate_macro, isomorphic,
                     parse_spice)
from .technology import (BitcellVariant, TechnologyModel, TransistorModel,
                         VariantName, bitcell_lookup, drive_current,
                         load_default_technology, load_technology,
                         subthreshold_current)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
