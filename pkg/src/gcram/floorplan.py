"""Bank area modeling and abstract physical views.

The floorplan is deliberately coarse: the bitcell array is a rows-by-cols
grid at the cell pitch, all periphery lives in a band under the array, and
power rings wrap the core.  Only the bounding box and pin placement are
meaningful; there is no internal placement or routing.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .errors import ConfigError, VariantError
from .netgen import MacroConfig, Netlist
from .technology import TechnologyModel, VariantName, bitcell_lookup


@dataclass(frozen=True)
class AreaReport:
    array_area: float       # um^2
    periphery_area: float   # um^2 (decoders + drivers + column + DFF + control)
    ring_area: float        # um^2
    total_area: float       # um^2
    width: float            # um, bounding box
    height: float           # um, bounding box
    rings: int

    def to_dict(self) -> dict:
        return {
            "array_area_um2": self.array_area,
            "periphery_area_um2": self.periphery_area,
            "ring_area_um2": self.ring_area,
            "total_area_um2": self.total_area,
            "bbox_width_um": self.width,
            "bbox_height_um": self.height,
            "rings": self.rings,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def array_area(config: MacroConfig, tech: TechnologyModel) -> float:
    """Bitcell array area: cell area times capacity."""
    config.validate()
    cell = bitcell_lookup(tech, config.variant, config.ls)
    return cell.cell_area * config.word_size * config.num_words


def periphery_area(config: MacroConfig, tech: TechnologyModel) -> float:
    """Decoder, driver, column, DFF, and control area.

    Per-port terms scale with rows (decoder additionally with the row
    address width); column circuitry scales with physical columns; data
    DFFs with word size; control is a fixed per-macro cost, doubled for
    the two independent gain-cell controllers.
    """
    config.validate()
    pa = tech.periphery
    rows, cols = config.rows, config.cols
    row_bits = math.log2(rows)

    port = rows * (row_bits * pa.decoder_per_row_bit + pa.driver_per_row)
    if config.is_gain_cell:
        write_port = port
        if config.ls:
            write_port += rows * pa.level_shifter_per_row
        ports = write_port + port          # independent write and read ports
        column = cols * pa.column_gc
        control = 2.0 * pa.control_gc
    else:
        ports = port
        column = cols * pa.column_sram
        control = pa.control_sram
    per_bank = ports + column
    dff = config.word_size * pa.dff_per_bit
    return config.num_banks * per_bank + dff + control


def bank_area(config: MacroConfig, tech: TechnologyModel) -> AreaReport:
    """Full bank area report: array + periphery band + power rings."""
    config.validate()
    cell = bitcell_lookup(tech, config.variant, config.ls)
    pa = tech.periphery

    arr = array_area(config, tech)
    periph = periphery_area(config, tech)

    core_w = config.cols * cell.pitch_x
    array_h = config.num_banks * config.rows * cell.pitch_y
    band_h = periph / core_w
    core_h = array_h + band_h

    rings = 2 if (config.is_gain_cell and config.ls) else 1
    extent = rings * (pa.ring_width + pa.ring_spacing)
    width = core_w + 2.0 * extent
    height = core_h + 2.0 * extent
    ring = width * height - core_w * core_h

    return AreaReport(
        array_area=arr,
        periphery_area=periph,
        ring_area=ring,
        total_area=arr + periph + ring,
        width=width,
        height=height,
        rings=rings,
    )


def dual_port_sram_equivalent_area(config: MacroConfig,
                                   tech: TechnologyModel) -> float:
    """Area of a dual-port SRAM with this capacity: 2x the single-port bank."""
    if config.variant is not VariantName.SRAM6T:
        raise VariantError(
            "dual_port_sram_equivalent_area applies to SRAM6T configs only")
    return 2.0 * bank_area(config, tech).total_area


# --- abstract view ------------------------------------------------------------

_SIDE_OF = {"addr": "LEFT", "din": "LEFT", "dout": "RIGHT",
            "vdd": "TOP", "vref": "TOP", "gnd": "BOTTOM",
            "clk": "BOTTOM", "we": "BOTTOM", "re": "BOTTOM"}


def _pin_side(port: str) -> str:
    for prefix, side in _SIDE_OF.items():
        if port == prefix or port.startswith(prefix):
            return side
    return "BOTTOM"


def abstract_pins(netlist: Netlist, report: AreaReport):
    """Assign each top port a side and an evenly spaced offset."""
    by_side: dict[str, list[str]] = {"LEFT": [], "RIGHT": [],
                                     "TOP": [], "BOTTOM": []}
    for port in netlist.top_ports:
        by_side[_pin_side(port)].append(port)
    pins = []
    for side in ("LEFT", "RIGHT", "TOP", "BOTTOM"):
        names = by_side[side]
        span = report.height if side in ("LEFT", "RIGHT") else report.width
        step = span / (len(names) + 1) if names else 0.0
        for i, name in enumerate(names, start=1):
            pins.append((name, side, round(i * step, 4)))
    return pins


def emit_lef_abstract(config: MacroConfig, tech: TechnologyModel,
                      netlist: Netlist) -> str:
    """LEF-style abstract: bounding box, pins on fixed sides, full-block
    obstruction.  Refuses a netlist whose top cell does not match the config."""
    expected = ("gcram_" if config.is_gain_cell else "sram_") + config.slug()
    if netlist.top != expected:
        raise ConfigError(
            f"netlist top '{netlist.top}' does not match config "
            f"'{config.slug()}'")
    if config.is_gain_cell:
        has_boost = "vdd_boost" in netlist.top_ports
        if has_boost != config.ls:
            raise ConfigError("netlist supply ports disagree with ls flag")

    report = bank_area(config, tech)
    lines = ["VERSION 5.8 ;",
             "BUSBITCHARS \"[]\" ;",
             f"MACRO {netlist.top}",
             "  CLASS BLOCK ;",
             f"  SIZE {report.width:.4f} BY {report.height:.4f} ;",
             "  ORIGIN 0 0 ;"]
    for name, side, offset in abstract_pins(netlist, report):
        direction = "OUTPUT" if name.startswith("dout") else "INPUT"
        if name in ("vdd", "vdd_boost", "gnd"):
            direction = "INOUT"
        lines += [f"  PIN {name}",
                  f"    DIRECTION {direction} ;",
                  f"    SIDE {side} ;",
                  f"    OFFSET {offset:.4f} ;",
                  f"  END {name}"]
    lines += ["  OBS",
              f"    RECT 0 0 {report.width:.4f} {report.height:.4f} ;",
              "  END",
              f"END {netlist.top}",
              "END LIBRARY"]
    return "\n".join(lines) + "\n"


def parse_lef_abstract(text: str) -> dict:
    """Minimal reader for the abstract emitted above."""
    macro = None
    size = None
    pins = []
    current_pin = None
    side = offset = None
    for raw in text.splitlines():
        tokens = raw.split()
        if not tokens:
            continue
        if tokens[0] == "MACRO":
            macro = tokens[1]
        elif tokens[0] == "SIZE":
            size = (float(tokens[1]), float(tokens[3]))
        elif tokens[0] == "PIN":
            current_pin = tokens[1]
        elif tokens[0] == "SIDE" and current_pin is not None:
            side = tokens[1]
        elif tokens[0] == "OFFSET" and current_pin is not None:
            offset = float(tokens[1])
        elif tokens[0] == "END" and current_pin is not None \
                and len(tokens) > 1 and tokens[1] == current_pin:
            pins.append((current_pin, side, offset))
            current_pin = None
    if macro is None or size is None:
        raise ValueError("not a recognizable abstract view")
    return {"macro": macro, "width": size[0], "height": size[1], "pins": pins}
