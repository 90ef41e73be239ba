"""Device and bitcell models loaded from a technology description file.

The technology file is YAML with a versioned header (``format: gcram-tech``,
``version: 1``).  Electrical quantities are stored in the units used by the
file schema (volts, mV/decade, A/um, fF, um, ps) and converted where formulas
need SI.  A loaded :class:`TechnologyModel` is immutable and safe to share
between threads.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

import yaml

from .errors import InvariantError, TechFileError, UnknownVariantError

K_BOLTZMANN = 1.380649e-23
Q_ELECTRON = 1.602176634e-19
T_REF = 300.0  # K, reference for the file's subthreshold-swing values


class TxKind(enum.Enum):
    SI_NMOS = "SiNMOS"
    SI_PMOS = "SiPMOS"
    OS_NMOS = "OSNMOS"


class VariantName(enum.Enum):
    SISI_GC = "SiSiGC"
    OSSI_GC = "OSSiGC"
    SRAM6T = "SRAM6T"


class PortStyle(enum.Enum):
    DUAL_PORT_GC = "DualPortGC"
    SINGLE_PORT_SRAM = "SinglePortSRAM"


OS_OFF_CURRENT_BOUND = 1.0e-18  # A/um
SI_SS_FLOOR = 60.0  # mV/decade at room temperature


@dataclass(frozen=True)
class TransistorModel:
    name: str
    kind: TxKind
    vt: float            # V
    ss: float            # mV/decade at 300 K
    i_off_ref: float     # A/um at vgs=0, vds=vdd
    i_on: float          # A/um at vgs=vds=vdd
    width: float         # um
    c_gate: float        # fF/um

    def validate(self):
        if self.ss <= 0:
            raise InvariantError(
                f"{self.name}: subthreshold swing must be positive, got {self.ss}")
        if self.kind in (TxKind.SI_NMOS, TxKind.SI_PMOS) and self.ss < SI_SS_FLOOR:
            raise InvariantError(
                f"{self.name}: Si device swing {self.ss} mV/dec is below the "
                f"{SI_SS_FLOOR} mV/dec room-temperature limit")
        if self.kind is TxKind.OS_NMOS and self.i_off_ref > OS_OFF_CURRENT_BOUND:
            raise InvariantError(
                f"{self.name}: OS off-current {self.i_off_ref} A/um exceeds the "
                f"{OS_OFF_CURRENT_BOUND} A/um bound")
        if self.i_on <= self.i_off_ref:
            raise InvariantError(f"{self.name}: i_on must exceed i_off_ref")
        if self.width <= 0 or self.c_gate <= 0:
            raise InvariantError(f"{self.name}: width and c_gate must be positive")
        if self.i_off_ref <= 0 or self.i_on <= 0:
            raise InvariantError(f"{self.name}: currents must be positive")


@dataclass(frozen=True)
class BitcellVariant:
    name: VariantName
    write_tx: TransistorModel
    read_tx: TransistorModel
    cell_area: float          # um^2
    c_sn: float               # fF (GC only; unused for SRAM)
    ports: PortStyle
    has_wwl_level_shifter: bool
    read_polarity: str | None  # "ActiveHighRWL" for GC, None for SRAM
    pitch_x: float            # um, bitcell pitch along a wordline
    pitch_y: float            # um, bitcell pitch along a bitline
    c_bl_per_cell: float      # fF of bitline loading per attached cell
    pulldown_tx: TransistorModel | None = None  # SRAM leakage path device
    pullup_tx: TransistorModel | None = None

    @property
    def is_gain_cell(self) -> bool:
        return self.ports is PortStyle.DUAL_PORT_GC

    def validate(self):
        if abs(self.pitch_x * self.pitch_y - self.cell_area) > 1e-9:
            raise InvariantError(
                f"{self.name.value}: pitch_x*pitch_y must equal cell_area")
        if self.is_gain_cell:
            if self.write_tx.kind not in (TxKind.SI_NMOS, TxKind.OS_NMOS):
                raise InvariantError(
                    f"{self.name.value}: gain-cell write transistor must be NMOS")
            if self.read_tx.kind is not TxKind.SI_PMOS:
                raise InvariantError(
                    f"{self.name.value}: gain-cell read transistor must be SiPMOS")
            if self.c_sn <= 0:
                raise InvariantError(
                    f"{self.name.value}: storage-node capacitance must be positive")
            if self.read_polarity != "ActiveHighRWL":
                raise InvariantError(
                    f"{self.name.value}: NMOS-write/PMOS-read cells use an "
                    f"active-high RWL")
        if self.cell_area <= 0 or self.c_bl_per_cell <= 0:
            raise InvariantError(
                f"{self.name.value}: areas and capacitances must be positive")


@dataclass(frozen=True)
class PeripheryAreaModel:
    ring_width: float              # um
    ring_spacing: float            # um
    decoder_per_row_bit: float     # um^2 per row per address bit, per port
    driver_per_row: float          # um^2 per row, per port
    level_shifter_per_row: float   # um^2 per row when WWLLS present
    column_gc: float               # um^2 per column (write drv + predis + SA)
    column_sram: float             # um^2 per column (precharge + diff SA + drv)
    dff_per_bit: float             # um^2 per data bit
    control_gc: float              # um^2 per controller (two per GC macro)
    control_sram: float            # um^2 for the shared controller


@dataclass(frozen=True)
class TimingModel:
    fo4: float                 # s, reference inverter FO4 delay
    guard_stages: int          # extra delay-chain stages for timing margin
    decoder_fo4_per_bit: float
    sa_fo4_single_ended: float
    sa_fo4_differential: float
    sram_cell_flip_fo4: float


@dataclass(frozen=True)
class LeakageModel:
    periphery_gate_w: float    # W per equivalent periphery gate
    rbl_leak_a_per_col: float  # A of idle read-bitline leakage per column
    sram_cell_leak_paths: int  # parallel off-device paths per 6T cell


@dataclass(frozen=True)
class TechnologyModel:
    vdd: float
    vdd_boost: float
    temperature: float         # K
    wire_r: float              # ohm/um
    wire_c: float              # fF/um
    inverter_fo4_delay: float  # ps (as written in the file)
    sense_margin: float        # V
    retention_margin: float    # V
    sn_coupling_kappa: float
    sram_port_duty: float
    gc_write_driver_a: float
    sram_write_driver_a: float
    delta_vt_max: float        # V, retention-tuning sweep limit
    variants: tuple[BitcellVariant, ...]
    timing: TimingModel
    leakage: LeakageModel
    periphery: PeripheryAreaModel
    source: str = field(default="<inline>", compare=False)

    def validate(self):
        if self.vdd_boost < self.vdd:
            raise InvariantError("vdd_boost must be >= vdd")
        if not 0 < self.sense_margin < self.vdd:
            raise InvariantError("sense_margin must lie in (0, vdd)")
        if not 0 < self.retention_margin < self.vdd:
            raise InvariantError("retention_margin must lie in (0, vdd)")
        if self.temperature <= 0:
            raise InvariantError("temperature must be positive")
        if not 0 < self.sram_port_duty <= 1:
            raise InvariantError("sram_port_duty must lie in (0, 1]")
        for v in self.variants:
            v.validate()
            v.write_tx.validate()
            v.read_tx.validate()

    def variant(self, name: VariantName) -> BitcellVariant:
        for v in self.variants:
            if v.name is name:
                return v
        raise UnknownVariantError(f"variant {name.value} not defined in technology")


def v_thermal(temperature: float) -> float:
    """kT/q in volts."""
    return K_BOLTZMANN * temperature / Q_ELECTRON


def subthreshold_current(tx: TransistorModel, vgs: float, vds: float,
                         delta_vt: float = 0.0,
                         temperature: float = T_REF) -> float:
    """Subthreshold drain current in amperes.

    Single-exponential model with a smooth Vds saturation term::

        I = i_off_ref * width * 10**((vgs - delta_vt) / ss_V) * (1 - exp(-vds/vth))

    ``ss_V`` is the swing in V/decade, scaled linearly with temperature from
    its 300 K file value, so heating increases leakage.  ``delta_vt`` shifts
    the threshold additively; +x suppresses current by exactly 10**(x/ss).
    Total on valid models: callers fold polarity so vds >= 0.
    """
    if vds < 0:
        raise ValueError("vds must be non-negative (fold polarity in caller)")
    ss_v = (tx.ss / 1000.0) * (temperature / T_REF)
    exponent = (vgs - delta_vt) / ss_v
    sat = -math.expm1(-vds / v_thermal(temperature))
    return tx.i_off_ref * tx.width * (10.0 ** exponent) * sat


def drive_current(tx: TransistorModel, vgs: float, vdd: float) -> float:
    """Above-threshold drive current in amperes, square-law overdrive scaling
    normalized so that vgs = vdd gives i_on * width."""
    overdrive = vgs - tx.vt
    if overdrive <= 0:
        return 0.0
    ref = vdd - tx.vt
    return tx.i_on * tx.width * (overdrive / ref) ** 2


def bitcell_lookup(tech: TechnologyModel, name: VariantName,
                   ls: bool = False) -> BitcellVariant:
    """Return the variant with the requested level-shifter option.

    SRAM has no write wordline to boost; the flag is ignored with a warning.
    """
    base = tech.variant(name)
    if name is VariantName.SRAM6T:
        if ls:
            import logging
            logging.getLogger(__name__).warning(
                "level-shifter option is not applicable to SRAM6T; ignored")
        return base
    return replace(base, has_wwl_level_shifter=ls)


# --- technology file loading -------------------------------------------------

_KIND_BY_NAME = {k.value: k for k in TxKind}
_VARIANT_KEYS = {
    "sisi_gc": VariantName.SISI_GC,
    "ossi_gc": VariantName.OSSI_GC,
    "sram6t": VariantName.SRAM6T,
}


def _require(mapping, key, where):
    if not isinstance(mapping, dict) or key not in mapping:
        raise TechFileError(f"missing field '{where}.{key}'")
    return mapping[key]


def _number(mapping, key, where):
    val = _require(mapping, key, where)
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise TechFileError(f"field '{where}.{key}' must be a number, got {val!r}")
    return float(val)


def _parse_transistor(name, raw):
    where = f"transistors.{name}"
    kind_name = _require(raw, "kind", where)
    if kind_name not in _KIND_BY_NAME:
        raise TechFileError(
            f"field '{where}.kind' must be one of {sorted(_KIND_BY_NAME)}")
    return TransistorModel(
        name=name,
        kind=_KIND_BY_NAME[kind_name],
        vt=_number(raw, "vt_v", where),
        ss=_number(raw, "ss_mv_dec", where),
        i_off_ref=_number(raw, "i_off_a_per_um", where),
        i_on=_number(raw, "i_on_a_per_um", where),
        width=_number(raw, "width_um", where),
        c_gate=_number(raw, "c_gate_ff_per_um", where),
    )


def _tx_ref(transistors, raw, key, where):
    ref = _require(raw, key, where)
    if ref not in transistors:
        raise TechFileError(f"field '{where}.{key}' references unknown "
                            f"transistor '{ref}'")
    return transistors[ref]


def _parse_variant(key, raw, transistors):
    where = f"variants.{key}"
    name = _VARIANT_KEYS[key]
    if name is VariantName.SRAM6T:
        access = _tx_ref(transistors, raw, "access_tx", where)
        return BitcellVariant(
            name=name,
            write_tx=access,
            read_tx=access,
            cell_area=_number(raw, "cell_area_um2", where),
            c_sn=0.0,
            ports=PortStyle.SINGLE_PORT_SRAM,
            has_wwl_level_shifter=False,
            read_polarity=None,
            pitch_x=_number(raw, "pitch_x_um", where),
            pitch_y=_number(raw, "pitch_y_um", where),
            c_bl_per_cell=_number(raw, "c_bl_ff_per_cell", where),
            pulldown_tx=_tx_ref(transistors, raw, "pulldown_tx", where),
            pullup_tx=_tx_ref(transistors, raw, "pullup_tx", where),
        )
    return BitcellVariant(
        name=name,
        write_tx=_tx_ref(transistors, raw, "write_tx", where),
        read_tx=_tx_ref(transistors, raw, "read_tx", where),
        cell_area=_number(raw, "cell_area_um2", where),
        c_sn=_number(raw, "c_sn_ff", where),
        ports=PortStyle.DUAL_PORT_GC,
        has_wwl_level_shifter=False,
        read_polarity="ActiveHighRWL",
        pitch_x=_number(raw, "pitch_x_um", where),
        pitch_y=_number(raw, "pitch_y_um", where),
        c_bl_per_cell=_number(raw, "c_bl_ff_per_cell", where),
    )


def load_technology(path: str | Path) -> TechnologyModel:
    """Parse and validate a technology description file."""
    path = Path(path)
    if not path.exists():
        raise TechFileError(f"technology file not found: {path}")
    try:
        raw = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        loc = f" at line {mark.line + 1}" if mark is not None else ""
        raise TechFileError(f"{path}: YAML parse error{loc}: {exc}") from exc
    return _build_technology(raw, source=str(path))


def _build_technology(raw, source="<inline>") -> TechnologyModel:
    if not isinstance(raw, dict):
        raise TechFileError("technology file must contain a mapping")
    if raw.get("format") != "gcram-tech":
        raise TechFileError("missing or wrong 'format' header "
                            "(expected 'gcram-tech')")
    if raw.get("version") != 1:
        raise TechFileError(f"unsupported technology file version "
                            f"{raw.get('version')!r} (expected 1)")

    supply = _require(raw, "supply", "")
    env = _require(raw, "environment", "")
    wire = _require(raw, "wire", "")
    timing = _require(raw, "timing", "")
    sensing = _require(raw, "sensing", "")
    drivers = _require(raw, "drivers", "")
    leak = _require(raw, "leakage", "")
    area = _require(raw, "area", "")
    dse = _require(raw, "dse", "")

    raw_txs = _require(raw, "transistors", "")
    transistors = {name: _parse_transistor(name, body)
                   for name, body in raw_txs.items()}

    raw_variants = _require(raw, "variants", "")
    variants = []
    for key in _VARIANT_KEYS:
        if key not in raw_variants:
            raise TechFileError(f"missing field 'variants.{key}'")
        variants.append(_parse_variant(key, raw_variants[key], transistors))

    fo4_ps = _number(timing, "fo4_ps", "timing")
    tech = TechnologyModel(
        vdd=_number(supply, "vdd_v", "supply"),
        vdd_boost=_number(supply, "vdd_boost_v", "supply"),
        temperature=_number(env, "temperature_k", "environment"),
        wire_r=_number(wire, "r_ohm_per_um", "wire"),
        wire_c=_number(wire, "c_ff_per_um", "wire"),
        inverter_fo4_delay=fo4_ps,
        sense_margin=_number(sensing, "sense_margin_v", "sensing"),
        retention_margin=_number(sensing, "retention_margin_v", "sensing"),
        sn_coupling_kappa=_number(sensing, "sn_coupling_kappa", "sensing"),
        sram_port_duty=_number(sensing, "sram_port_duty", "sensing"),
        gc_write_driver_a=_number(drivers, "gc_write_driver_a", "drivers"),
        sram_write_driver_a=_number(drivers, "sram_write_driver_a", "drivers"),
        delta_vt_max=_number(dse, "delta_vt_max_v", "dse"),
        variants=tuple(variants),
        timing=TimingModel(
            fo4=fo4_ps * 1e-12,
            guard_stages=int(_number(timing, "guard_stages", "timing")),
            decoder_fo4_per_bit=_number(timing, "decoder_fo4_per_bit", "timing"),
            sa_fo4_single_ended=_number(timing, "sa_fo4_single_ended", "timing"),
            sa_fo4_differential=_number(timing, "sa_fo4_differential", "timing"),
            sram_cell_flip_fo4=_number(timing, "sram_cell_flip_fo4", "timing"),
        ),
        leakage=LeakageModel(
            periphery_gate_w=_number(leak, "periphery_gate_w", "leakage"),
            rbl_leak_a_per_col=_number(leak, "rbl_leak_a_per_col", "leakage"),
            sram_cell_leak_paths=int(_number(leak, "sram_cell_leak_paths",
                                             "leakage")),
        ),
        periphery=PeripheryAreaModel(
            ring_width=_number(area, "ring_width_um", "area"),
            ring_spacing=_number(area, "ring_spacing_um", "area"),
            decoder_per_row_bit=_number(area, "decoder_um2_per_row_bit", "area"),
            driver_per_row=_number(area, "driver_um2_per_row", "area"),
            level_shifter_per_row=_number(area, "level_shifter_um2_per_row",
                                          "area"),
            column_gc=_number(area, "column_um2_gc", "area"),
            column_sram=_number(area, "column_um2_sram", "area"),
            dff_per_bit=_number(area, "dff_um2_per_bit", "area"),
            control_gc=_number(area, "control_um2_gc", "area"),
            control_sram=_number(area, "control_um2_sram", "area"),
        ),
        source=source,
    )
    tech.validate()
    return tech


def default_technology_path() -> Path:
    return Path(resources.files("gcram.data") / "default.tech.yaml")


def load_default_technology() -> TechnologyModel:
    return load_technology(default_technology_path())
