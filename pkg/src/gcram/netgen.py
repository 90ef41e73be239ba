"""Hierarchical macro netlist generation and structural verification.

The netlist IR is a flat table of subcircuits; each subcircuit holds
primitive devices (M/C/R cards) and instances of other subcircuits.
Generation is a pure function of (config, technology), so repeated calls
yield identical netlists and macros can be generated concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ConfigError, ConnectivityError, SpiceSyntaxError
from .technology import (BitcellVariant, TechnologyModel, VariantName,
                         bitcell_lookup)


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class MacroConfig:
    """User-requested macro: variant, geometry, banking, level shifter."""

    variant: VariantName
    word_size: int
    num_words: int
    num_banks: int = 1
    ls: bool = False
    column_mux: int | None = None  # None selects the auto-square factor

    def validate(self):
        for label, n in (("word_size", self.word_size),
                         ("num_words", self.num_words),
                         ("num_banks", self.num_banks)):
            if not _is_pow2(n):
                raise ConfigError(f"{label} must be a power of two, got {n}")
        if self.word_size * self.num_words < 256:
            raise ConfigError("macro capacity must be at least 256 bits")
        if self.num_words % self.num_banks != 0:
            raise ConfigError("num_words must be divisible by num_banks")
        m = self.mux_factor
        if not _is_pow2(m):
            raise ConfigError(f"column_mux must be a power of two, got {m}")
        if self.num_words % (self.num_banks * m) != 0:
            raise ConfigError("num_words must be divisible by banks * mux")
        if self.rows < 2:
            raise ConfigError("configuration leaves fewer than two rows")

    @property
    def mux_factor(self) -> int:
        if self.column_mux is not None:
            return self.column_mux
        return auto_mux_factor(self.word_size, self.num_words, self.num_banks)

    @property
    def rows(self) -> int:
        return self.num_words // (self.num_banks * self.mux_factor)

    @property
    def cols(self) -> int:
        return self.word_size * self.mux_factor

    @property
    def addr_bits(self) -> int:
        return int(math.log2(self.num_words))

    @property
    def is_gain_cell(self) -> bool:
        return self.variant is not VariantName.SRAM6T

    def slug(self) -> str:
        key = {VariantName.SISI_GC: "sisi-gc",
               VariantName.OSSI_GC: "ossi-gc",
               VariantName.SRAM6T: "sram6t"}[self.variant]
        ls = "-ls" if (self.ls and self.is_gain_cell) else ""
        return (f"{key}{ls}_wz{self.word_size}_nw{self.num_words}"
                f"_b{self.num_banks}_m{self.mux_factor}")


def auto_mux_factor(word_size: int, num_words: int, num_banks: int = 1) -> int:
    """Smallest power of two making |rows - cols| minimal.

    A square array balances wordline and bitline lengths; the 4:1
    word-to-depth organization needs no mux at all.
    """
    best = None
    m = 1
    while num_words % (num_banks * m) == 0 and num_words // (num_banks * m) >= 2:
        rows = num_words // (num_banks * m)
        cols = word_size * m
        skew = abs(rows - cols)
        if best is None or skew < best[0]:
            best = (skew, m)
        m *= 2
    return best[1]


# --- netlist IR ---------------------------------------------------------------

@dataclass
class Device:
    name: str
    dtype: str                 # 'M', 'C', or 'R'
    nets: tuple[str, ...]
    model: str = ""            # model name for M cards, value text for C/R
    params: tuple[tuple[str, str], ...] = ()


@dataclass
class Instance:
    name: str
    subckt: str
    nets: tuple[str, ...]


@dataclass
class Subcircuit:
    name: str
    ports: tuple[str, ...]
    devices: list[Device] = field(default_factory=list)
    instances: list[Instance] = field(default_factory=list)


@dataclass
class Netlist:
    subcircuits: dict[str, Subcircuit]  # insertion-ordered, dependencies first
    top: str
    header: tuple[str, ...] = ()

    @property
    def top_ports(self) -> tuple[str, ...]:
        return self.subcircuits[self.top].ports

    def instance_count(self, target: str) -> int:
        """Number of elaborated instances of `target` under the top cell."""
        memo: dict[str, int] = {}

        def count(name: str) -> int:
            if name == target:
                return 1
            if name in memo:
                return memo[name]
            sub = self.subcircuits.get(name)
            total = 0
            if sub is not None:
                for inst in sub.instances:
                    total += count(inst.subckt)
            memo[name] = total
            return total

        return count(self.top)

    def device_count(self) -> int:
        memo: dict[str, int] = {}

        def count(name: str) -> int:
            if name in memo:
                return memo[name]
            sub = self.subcircuits[name]
            total = len(sub.devices)
            for inst in sub.instances:
                total += count(inst.subckt)
            memo[name] = total
            return total

        return count(self.top)


@dataclass
class ConnectivityReport:
    violations: list[tuple[str, str, str]]  # (net, rule, detail)

    @property
    def passed(self) -> bool:
        return not self.violations


def isomorphic(a: Netlist, b: Netlist) -> bool:
    """Equality up to instance and device ordering inside each subcircuit."""
    if a.top != b.top or set(a.subcircuits) != set(b.subcircuits):
        return False
    for name, sa in a.subcircuits.items():
        sb = b.subcircuits[name]
        if sa.ports != sb.ports:
            return False
        key_d = lambda d: d.name
        key_i = lambda i: i.name
        if sorted(sa.devices, key=key_d) != sorted(sb.devices, key=key_d):
            return False
        if sorted(sa.instances, key=key_i) != sorted(sb.instances, key=key_i):
            return False
    return True


# --- leaf cell builders -------------------------------------------------------

def _mos(name, d, g, s, b, model, w, l=0.04):
    return Device(name, "M", (d, g, s, b), model,
                  ((("W", f"{w:g}U")), ("L", f"{l:g}U")))


def _cap(name, a, b, farads):
    return Device(name, "C", (a, b), f"{farads:.6e}")


class _Library:
    """Collects subcircuits in dependency order, deduplicating by name."""

    def __init__(self, tech: TechnologyModel, cell: BitcellVariant):
        self.tech = tech
        self.cell = cell
        self.subs: dict[str, Subcircuit] = {}
        self.nmos = "nmos_logic"
        self.pmos = "pmos_logic"
        self.wn = 0.12
        self.wp = 0.24

    def add(self, sub: Subcircuit) -> str:
        if sub.name not in self.subs:
            self.subs[sub.name] = sub
        return sub.name

    def inv(self):
        s = Subcircuit("inv", ("a", "y", "vdd", "gnd"))
        s.devices = [_mos("MP", "y", "a", "vdd", "vdd", self.pmos, self.wp),
                     _mos("MN", "y", "a", "gnd", "gnd", self.nmos, self.wn)]
        return self.add(s)

    def nand2(self):
        s = Subcircuit("nand2", ("a", "b", "y", "vdd", "gnd"))
        s.devices = [_mos("MPA", "y", "a", "vdd", "vdd", self.pmos, self.wp),
                     _mos("MPB", "y", "b", "vdd", "vdd", self.pmos, self.wp),
                     _mos("MNA", "y", "a", "mid", "gnd", self.nmos, self.wn),
                     _mos("MNB", "mid", "b", "gnd", "gnd", self.nmos, self.wn)]
        return self.add(s)

    def and2(self):
        self.nand2()
        self.inv()
        s = Subcircuit("and2", ("a", "b", "y", "vdd", "gnd"))
        s.instances = [Instance("XN", "nand2", ("a", "b", "n", "vdd", "gnd")),
                       Instance("XI", "inv", ("n", "y", "vdd", "gnd"))]
        return self.add(s)

    def buf(self, name):
        self.inv()
        s = Subcircuit(name, ("a", "y", "vdd", "gnd"))
        s.instances = [Instance("XI0", "inv", ("a", "m", "vdd", "gnd")),
                       Instance("XI1", "inv", ("m", "y", "vdd", "gnd"))]
        return self.add(s)

    def dff(self):
        self.inv()
        s = Subcircuit("dff", ("d", "q", "clk", "vdd", "gnd"))
        s.devices = [_mos("MNP1", "d", "clk", "n1", "gnd", self.nmos, self.wn),
                     _mos("MNP2", "n1b", "clkb", "n2", "gnd", self.nmos, self.wn)]
        s.instances = [Instance("XCI", "inv", ("clk", "clkb", "vdd", "gnd")),
                       Instance("XM1", "inv", ("n1", "n1b", "vdd", "gnd")),
                       Instance("XM2", "inv", ("n1b", "n1", "vdd", "gnd")),
                       Instance("XS1", "inv", ("n2", "q", "vdd", "gnd")),
                       Instance("XS2", "inv", ("q", "n2", "vdd", "gnd"))]
        return self.add(s)

    def level_shifter(self):
        self.inv()
        s = Subcircuit("level_shifter", ("a", "y", "vdd", "vdd_boost", "gnd"))
        s.devices = [
            _mos("MP1", "n1", "n2", "vdd_boost", "vdd_boost", self.pmos, self.wp),
            _mos("MP2", "n2", "n1", "vdd_boost", "vdd_boost", self.pmos, self.wp),
            _mos("MN1", "n1", "a", "gnd", "gnd", self.nmos, self.wn),
            _mos("MN2", "n2", "ab", "gnd", "gnd", self.nmos, self.wn)]
        s.instances = [Instance("XI", "inv", ("a", "ab", "vdd", "gnd")),
                       Instance("XO", "inv", ("n1", "y", "vdd_boost", "gnd"))]
        return self.add(s)

    def write_driver(self):
        self.nand2()
        self.inv()
        s = Subcircuit("write_driver", ("d", "en", "wbl", "vdd", "gnd"))
        s.instances = [Instance("XN", "nand2", ("d", "en", "nb", "vdd", "gnd")),
                       Instance("XI", "inv", ("nb", "wbl", "vdd", "gnd"))]
        return self.add(s)

    def write_driver_diff(self):
        self.nand2()
        self.inv()
        s = Subcircuit("write_driver_diff",
                       ("d", "en", "bl", "blb", "vdd", "gnd"))
        s.instances = [
            Instance("XDI", "inv", ("d", "db", "vdd", "gnd")),
            Instance("XNT", "nand2", ("d", "en", "nbt", "vdd", "gnd")),
            Instance("XIT", "inv", ("nbt", "bl", "vdd", "gnd")),
            Instance("XNF", "nand2", ("db", "en", "nbf", "vdd", "gnd")),
            Instance("XIF", "inv", ("nbf", "blb", "vdd", "gnd"))]
        return self.add(s)

    def predischarge(self):
        s = Subcircuit("predischarge", ("rbl", "en", "gnd"))
        s.devices = [_mos("MN", "rbl", "en", "gnd", "gnd", self.nmos, self.wn)]
        return self.add(s)

    def precharge(self):
        s = Subcircuit("precharge", ("bl", "blb", "en_b", "vdd"))
        s.devices = [_mos("MP1", "bl", "en_b", "vdd", "vdd", self.pmos, self.wp),
                     _mos("MP2", "blb", "en_b", "vdd", "vdd", self.pmos, self.wp),
                     _mos("MPE", "bl", "en_b", "blb", "vdd", self.pmos, self.wp)]
        return self.add(s)

    def sense_amp_se(self):
        self.inv()
        s = Subcircuit("sense_amp_se",
                       ("rbl", "vref", "en", "dout", "vdd", "gnd"))
        s.devices = [
            _mos("MN1", "n1", "rbl", "tail", "gnd", self.nmos, self.wn),
            _mos("MN2", "n2", "vref", "tail", "gnd", self.nmos, self.wn),
            _mos("MNT", "tail", "en", "gnd", "gnd", self.nmos, self.wn),
            _mos("MP1", "n1", "n2", "vdd", "vdd", self.pmos, self.wp),
            _mos("MP2", "n2", "n1", "vdd", "vdd", self.pmos, self.wp)]
        s.instances = [Instance("XO", "inv", ("n2", "dout", "vdd", "gnd"))]
        return self.add(s)

    def sense_amp_diff(self):
        self.inv()
        s = Subcircuit("sense_amp_diff",
                       ("bl", "blb", "en", "dout", "vdd", "gnd"))
        s.devices = [
            _mos("MN1", "n1", "bl", "tail", "gnd", self.nmos, self.wn),
            _mos("MN2", "n2", "blb", "tail", "gnd", self.nmos, self.wn),
            _mos("MNT", "tail", "en", "gnd", "gnd", self.nmos, self.wn),
            _mos("MP1", "n1", "n2", "vdd", "vdd", self.pmos, self.wp),
            _mos("MP2", "n2", "n1", "vdd", "vdd", self.pmos, self.wp)]
        s.instances = [Instance("XO", "inv", ("n2", "dout", "vdd", "gnd"))]
        return self.add(s)

    def colmux(self, m):
        name = f"colmux{m}"
        ports = tuple(f"in{i}" for i in range(m)) + \
            tuple(f"sel{i}" for i in range(m)) + ("out", "gnd")
        s = Subcircuit(name, ports)
        s.devices = [_mos(f"MN{i}", f"in{i}", f"sel{i}", "out", "gnd",
                          self.nmos, self.wn) for i in range(m)]
        return self.add(s)

    def dec_and(self, a):
        self.inv()
        name = f"dec_and{a}"
        ports = tuple(f"in{i}" for i in range(a)) + ("y", "vdd", "gnd")
        s = Subcircuit(name, ports)
        chain = ["nand"] + [f"m{i}" for i in range(1, a)] + ["gnd"]
        for i in range(a):
            s.devices.append(_mos(f"MP{i}", "nand", f"in{i}", "vdd", "vdd",
                                  self.pmos, self.wp))
            s.devices.append(_mos(f"MN{i}", chain[i], f"in{i}", chain[i + 1],
                                  "gnd", self.nmos, self.wn))
        s.instances = [Instance("XO", "inv", ("nand", "y", "vdd", "gnd"))]
        return self.add(s)

    def row_decoder(self, bits):
        self.dec_and(bits)
        rows = 1 << bits
        name = f"row_decoder_{bits}"
        ports = tuple(f"a{i}" for i in range(bits)) + \
            tuple(f"out{r}" for r in range(rows)) + ("vdd", "gnd")
        s = Subcircuit(name, ports)
        for i in range(bits):
            s.instances.append(Instance(f"XINV{i}", "inv",
                                        (f"a{i}", f"an{i}", "vdd", "gnd")))
        for r in range(rows):
            ins = tuple(f"a{i}" if (r >> i) & 1 else f"an{i}"
                        for i in range(bits))
            s.instances.append(Instance(
                f"XAND{r}", f"dec_and{bits}",
                ins + (f"out{r}", "vdd", "gnd")))
        return self.add(s)

    def data_dff_bank(self, wz):
        self.dff()
        name = f"data_dff_bank{wz}"
        ports = tuple(f"d{i}" for i in range(wz)) + \
            tuple(f"q{i}" for i in range(wz)) + ("clk", "vdd", "gnd")
        s = Subcircuit(name, ports)
        s.instances = [Instance(f"XD{i}", "dff",
                                (f"d{i}", f"q{i}", "clk", "vdd", "gnd"))
                       for i in range(wz)]
        return self.add(s)


def _bus(prefix, n):
    return tuple(f"{prefix}{i}" for i in range(n))


def _delay_chain(sub: Subcircuit, start_net: str, out_net: str, stages: int,
                 prefix="XDLY"):
    """Chain of `stages` inverters from start_net to out_net."""
    prev = start_net
    for i in range(stages):
        nxt = out_net if i == stages - 1 else f"dly{i}"
        sub.instances.append(Instance(f"{prefix}{i}", "inv",
                                      (prev, nxt, "vdd", "gnd")))
        prev = nxt
    if stages == 0:
        # keep the port driven even for a degenerate chain
        sub.instances.append(Instance(f"{prefix}0", "inv",
                                      (start_net, out_net, "vdd", "gnd")))


# --- macro generation ---------------------------------------------------------

def generate_macro(config: MacroConfig, tech: TechnologyModel) -> Netlist:
    """Generate the hierarchical macro netlist for a configuration."""
    config.validate()
    cell = bitcell_lookup(tech, config.variant, config.ls)

    # delay-chain sizing comes from the timing model (import here to keep
    # module load order acyclic)
    from .charlib import delay_chain_stages
    n_read, n_write = delay_chain_stages(config, tech)

    lib = _Library(tech, cell)
    if config.is_gain_cell:
        netlist = _generate_gc(config, tech, cell, lib, n_read, n_write)
    else:
        netlist = _generate_sram(config, tech, cell, lib, n_read, n_write)
    netlist.header = (f"gcram macro netlist: {config.slug()}",
                      f"technology: {tech.source}")
    return netlist


def _gc_bitcell(lib: _Library, cell: BitcellVariant):
    name = "bitcell_sisi" if cell.name is VariantName.SISI_GC else "bitcell_ossi"
    wmodel = "nmos_cell" if cell.name is VariantName.SISI_GC else "os_nmos_cell"
    s = Subcircuit(name, ("wbl", "wwl", "rbl", "rwl", "gnd"))
    s.devices = [
        _mos("MW", "sn", "wwl", "wbl", "gnd", wmodel, cell.write_tx.width),
        _mos("MR", "rbl", "sn", "rwl", "rwl", "pmos_read", cell.read_tx.width),
        _cap("CSN", "sn", "gnd", cell.c_sn * 1e-15)]
    return lib.add(s)


def _generate_gc(config, tech, cell, lib: _Library, n_read, n_write) -> Netlist:
    rows, cols, m = config.rows, config.cols, config.mux_factor
    wz, banks = config.word_size, config.num_banks
    rb = int(math.log2(rows))
    mb = int(math.log2(m)) if m > 1 else 0
    bb = int(math.log2(banks)) if banks > 1 else 0
    supply = ("vdd", "vdd_boost") if config.ls else ("vdd",)

    bitcell = _gc_bitcell(lib, cell)
    lib.inv(); lib.nand2(); lib.write_driver(); lib.predischarge()
    lib.sense_amp_se(); lib.buf("wwl_driver"); lib.buf("rwl_driver")
    if config.ls:
        lib.level_shifter()
    if m > 1:
        lib.colmux(m)
        lib.row_decoder(mb)
    lib.row_decoder(rb)
    if banks > 1:
        lib.row_decoder(bb)
        lib.and2()
    lib.data_dff_bank(wz)

    # bitcell array
    arr = Subcircuit(f"bitcell_array_{rows}x{cols}",
                     _bus("wbl", cols) + _bus("wwl", rows) +
                     _bus("rbl", cols) + _bus("rwl", rows) + ("gnd",))
    for r in range(rows):
        for c in range(cols):
            arr.instances.append(Instance(
                f"XC{r}_{c}", bitcell,
                (f"wbl{c}", f"wwl{r}", f"rbl{c}", f"rwl{r}", "gnd")))
    lib.add(arr)

    # write port address: decoder + enable gating + (LS) + WWL drivers
    wpa = Subcircuit("write_port_address",
                     _bus("a", rb) + ("en",) + _bus("wwl", rows) +
                     supply + ("gnd",))
    wpa.instances.append(Instance(
        "XDEC", f"row_decoder_{rb}",
        _bus("a", rb) + _bus("dec", rows) + ("vdd", "gnd")))
    for r in range(rows):
        wpa.instances.append(Instance(
            f"XG{r}", "nand2", (f"dec{r}", "en", f"ng{r}", "vdd", "gnd")))
        if config.ls:
            wpa.instances.append(Instance(
                f"XLS{r}", "level_shifter",
                (f"ng{r}", f"lsh{r}", "vdd", "vdd_boost", "gnd")))
            wpa.instances.append(Instance(
                f"XD{r}", "wwl_driver",
                (f"lsh{r}", f"wwl{r}", "vdd_boost", "gnd")))
        else:
            wpa.instances.append(Instance(
                f"XD{r}", "wwl_driver", (f"ng{r}", f"wwl{r}", "vdd", "gnd")))
    lib.add(wpa)

    # read port address
    rpa = Subcircuit("read_port_address",
                     _bus("a", rb) + ("en",) + _bus("rwl", rows) +
                     ("vdd", "gnd"))
    rpa.instances.append(Instance(
        "XDEC", f"row_decoder_{rb}",
        _bus("a", rb) + _bus("dec", rows) + ("vdd", "gnd")))
    for r in range(rows):
        rpa.instances.append(Instance(
            f"XG{r}", "nand2", (f"dec{r}", "en", f"ng{r}", "vdd", "gnd")))
        rpa.instances.append(Instance(
            f"XD{r}", "rwl_driver", (f"ng{r}", f"rwl{r}", "vdd", "gnd")))
    lib.add(rpa)

    # write port data: per-column write drivers, column-selected when m > 1
    wpd_ports = _bus("d", wz)
    if m > 1:
        wpd_ports += _bus("sel", m)
    wpd_ports += ("en",) + _bus("wbl", cols) + ("vdd", "gnd")
    wpd = Subcircuit("write_port_data", wpd_ports)
    for c in range(cols):
        bit, sel = c // m, c % m
        if m > 1:
            wpd.instances.append(Instance(
                f"XSG{c}", "nand2",
                (f"sel{sel}", "en", f"nsg{c}", "vdd", "gnd")))
            wpd.instances.append(Instance(
                f"XSI{c}", "inv", (f"nsg{c}", f"ens{c}", "vdd", "gnd")))
            en_net = f"ens{c}"
        else:
            en_net = "en"
        wpd.instances.append(Instance(
            f"XWD{c}", "write_driver",
            (f"d{bit}", en_net, f"wbl{c}", "vdd", "gnd")))
    lib.add(wpd)

    # read port data: predischarge per RBL, column mux, single-ended SAs
    rpd_ports = _bus("rbl", cols)
    if m > 1:
        rpd_ports += _bus("sel", m)
    rpd_ports += ("pd_en", "sa_en", "vref") + _bus("dout", wz) + ("vdd", "gnd")
    rpd = Subcircuit("read_port_data", rpd_ports)
    for c in range(cols):
        rpd.instances.append(Instance(
            f"XPD{c}", "predischarge", (f"rbl{c}", "pd_en", "gnd")))
    for b in range(wz):
        if m > 1:
            ins = tuple(f"rbl{b * m + i}" for i in range(m))
            sels = _bus("sel", m)
            rpd.instances.append(Instance(
                f"XMX{b}", f"colmux{m}", ins + sels + (f"sn{b}", "gnd")))
            sense_in = f"sn{b}"
        else:
            sense_in = f"rbl{b}"
        rpd.instances.append(Instance(
            f"XSA{b}", "sense_amp_se",
            (sense_in, "vref", "sa_en", f"dout{b}", "vdd", "gnd")))
    lib.add(rpd)

    # bank: both ports plus the array
    ab_bank = rb + mb
    bank_ports = (_bus("aw", ab_bank) + _bus("ar", ab_bank) + _bus("d", wz) +
                  _bus("dout", wz) +
                  ("wwl_en", "wdrv_en", "rwl_en", "pd_en", "sa_en", "vref") +
                  supply + ("gnd",))
    bank = Subcircuit("gc_bank", bank_ports)
    bank.instances.append(Instance(
        "XWPA", "write_port_address",
        _bus("aw", rb) + ("wwl_en",) + _bus("wwl", rows) + supply + ("gnd",)))
    bank.instances.append(Instance(
        "XRPA", "read_port_address",
        _bus("ar", rb) + ("rwl_en",) + _bus("rwl", rows) + ("vdd", "gnd")))
    if m > 1:
        bank.instances.append(Instance(
            "XWCD", f"row_decoder_{mb}",
            tuple(f"aw{rb + i}" for i in range(mb)) + _bus("wsel", m) +
            ("vdd", "gnd")))
        bank.instances.append(Instance(
            "XRCD", f"row_decoder_{mb}",
            tuple(f"ar{rb + i}" for i in range(mb)) + _bus("rsel", m) +
            ("vdd", "gnd")))
        wpd_bind = _bus("d", wz) + _bus("wsel", m)
        rpd_sel = _bus("rsel", m)
    else:
        wpd_bind = _bus("d", wz)
        rpd_sel = ()
    bank.instances.append(Instance(
        "XWPD", "write_port_data",
        wpd_bind + ("wdrv_en",) + _bus("wbl", cols) + ("vdd", "gnd")))
    bank.instances.append(Instance(
        "XRPD", "read_port_data",
        _bus("rbl", cols) + rpd_sel +
        ("pd_en", "sa_en", "vref") + _bus("dout", wz) + ("vdd", "gnd")))
    bank.instances.append(Instance(
        "XARR", arr.name,
        _bus("wbl", cols) + _bus("wwl", rows) + _bus("rbl", cols) +
        _bus("rwl", rows) + ("gnd",)))
    lib.add(bank)

    # controllers: the read controller carries the extra inverter that turns
    # the shared enable into an active-high predischarge strobe
    rctl = Subcircuit("read_controller",
                      ("clk", "re", "rwl_en", "pd_en", "sa_en", "vdd", "gnd"))
    rctl.instances.append(Instance(
        "XG", "nand2", ("clk", "re", "nen", "vdd", "gnd")))
    rctl.instances.append(Instance("XE", "inv", ("nen", "rwl_en", "vdd", "gnd")))
    rctl.instances.append(Instance(
        "XPDINV", "inv", ("nen", "pd_en_pre", "vdd", "gnd")))
    rctl.instances.append(Instance(
        "XPDBUF", "inv", ("pd_en_pre", "pd_en_n", "vdd", "gnd")))
    rctl.instances.append(Instance(
        "XPDOUT", "inv", ("pd_en_n", "pd_en", "vdd", "gnd")))
    _delay_chain(rctl, "rwl_en", "sa_en", n_read, prefix="XDLYR")
    lib.add(rctl)

    wctl = Subcircuit("write_controller",
                      ("clk", "we", "wwl_en", "wdrv_en", "vdd", "gnd"))
    wctl.instances.append(Instance(
        "XG", "nand2", ("clk", "we", "nen", "vdd", "gnd")))
    wctl.instances.append(Instance("XE", "inv", ("nen", "wwl_en", "vdd", "gnd")))
    _delay_chain(wctl, "wwl_en", "wdrv_en", n_write, prefix="XDLYW")
    lib.add(wctl)

    # top
    ab = config.addr_bits
    top_ports = (("clk", "we", "re") + _bus("addr_w", ab) + _bus("addr_r", ab) +
                 _bus("din", wz) + _bus("dout", wz) + supply + ("gnd", "vref"))
    top = Subcircuit(f"gcram_{config.slug()}", top_ports)
    top.instances.append(Instance(
        "XDFF", f"data_dff_bank{wz}",
        _bus("din", wz) + _bus("d", wz) + ("clk", "vdd", "gnd")))
    top.instances.append(Instance(
        "XRCTL", "read_controller",
        ("clk", "re", "rwl_en", "pd_en", "sa_en", "vdd", "gnd")))
    top.instances.append(Instance(
        "XWCTL", "write_controller",
        ("clk", "we", "wwl_en", "wdrv_en", "vdd", "gnd")))
    if banks > 1:
        top.instances.append(Instance(
            "XWBD", f"row_decoder_{bb}",
            tuple(f"addr_w{ab_bank + i}" for i in range(bb)) +
            _bus("wbsel", banks) + ("vdd", "gnd")))
        top.instances.append(Instance(
            "XRBD", f"row_decoder_{bb}",
            tuple(f"addr_r{ab_bank + i}" for i in range(bb)) +
            _bus("rbsel", banks) + ("vdd", "gnd")))
    for k in range(banks):
        if banks > 1:
            top.instances.append(Instance(
                f"XWG{k}", "and2",
                ("wwl_en", f"wbsel{k}", f"wwl_en_{k}", "vdd", "gnd")))
            top.instances.append(Instance(
                f"XRG{k}", "and2",
                ("rwl_en", f"rbsel{k}", f"rwl_en_{k}", "vdd", "gnd")))
            wwl_en, rwl_en = f"wwl_en_{k}", f"rwl_en_{k}"
        else:
            wwl_en, rwl_en = "wwl_en", "rwl_en"
        top.instances.append(Instance(
            f"XB{k}", "gc_bank",
            tuple(f"addr_w{i}" for i in range(ab_bank)) +
            tuple(f"addr_r{i}" for i in range(ab_bank)) +
            _bus("d", wz) + _bus("dout", wz) +
            (wwl_en, "wdrv_en", rwl_en, "pd_en", "sa_en", "vref") +
            supply + ("gnd",)))
    lib.add(top)

    return Netlist(subcircuits=lib.subs, top=top.name)


def _generate_sram(config, tech, cell, lib: _Library, n_read, n_write) -> Netlist:
    rows, cols, m = config.rows, config.cols, config.mux_factor
    wz, banks = config.word_size, config.num_banks
    rb = int(math.log2(rows))
    mb = int(math.log2(m)) if m > 1 else 0
    bb = int(math.log2(banks)) if banks > 1 else 0

    lib.inv(); lib.nand2(); lib.write_driver_diff(); lib.precharge()
    lib.sense_amp_diff(); lib.buf("wl_driver")
    if m > 1:
        lib.colmux(m)
        lib.row_decoder(mb)
    lib.row_decoder(rb)
    if banks > 1:
        lib.row_decoder(bb)
        lib.and2()
    lib.data_dff_bank(wz)

    bc = Subcircuit("bitcell_sram6t", ("bl", "blb", "wl", "vdd", "gnd"))
    bc.devices = [
        _mos("MA1", "bl", "wl", "q", "gnd", "nmos_logic", cell.write_tx.width),
        _mos("MA2", "blb", "wl", "qb", "gnd", "nmos_logic", cell.write_tx.width),
        _mos("MPU1", "q", "qb", "vdd", "vdd", "pmos_logic", 0.15),
        _mos("MPD1", "q", "qb", "gnd", "gnd", "nmos_logic", 0.15),
        _mos("MPU2", "qb", "q", "vdd", "vdd", "pmos_logic", 0.15),
        _mos("MPD2", "qb", "q", "gnd", "gnd", "nmos_logic", 0.15)]
    lib.add(bc)

    arr = Subcircuit(f"sram_array_{rows}x{cols}",
                     _bus("bl", cols) + _bus("blb", cols) + _bus("wl", rows) +
                     ("vdd", "gnd"))
    for r in range(rows):
        for c in range(cols):
            arr.instances.append(Instance(
                f"XC{r}_{c}", "bitcell_sram6t",
                (f"bl{c}", f"blb{c}", f"wl{r}", "vdd", "gnd")))
    lib.add(arr)

    spa = Subcircuit("sram_port_address",
                     _bus("a", rb) + ("en",) + _bus("wl", rows) +
                     ("vdd", "gnd"))
    spa.instances.append(Instance(
        "XDEC", f"row_decoder_{rb}",
        _bus("a", rb) + _bus("dec", rows) + ("vdd", "gnd")))
    for r in range(rows):
        spa.instances.append(Instance(
            f"XG{r}", "nand2", (f"dec{r}", "en", f"ng{r}", "vdd", "gnd")))
        spa.instances.append(Instance(
            f"XD{r}", "wl_driver", (f"ng{r}", f"wl{r}", "vdd", "gnd")))
    lib.add(spa)

    spd_ports = _bus("bl", cols) + _bus("blb", cols)
    if m > 1:
        spd_ports += _bus("sel", m)
    spd_ports += (("pc_enb", "sa_en", "wdrv_en") + _bus("d", wz) +
                  _bus("dout", wz) + ("vdd", "gnd"))
    spd = Subcircuit("sram_port_data", spd_ports)
    for c in range(cols):
        bit, sel = c // m, c % m
        spd.instances.append(Instance(
            f"XPC{c}", "precharge", (f"bl{c}", f"blb{c}", "pc_enb", "vdd")))
        if m > 1:
            spd.instances.append(Instance(
                f"XSG{c}", "nand2",
                (f"sel{sel}", "wdrv_en", f"nsg{c}", "vdd", "gnd")))
            spd.instances.append(Instance(
                f"XSI{c}", "inv", (f"nsg{c}", f"ens{c}", "vdd", "gnd")))
            en_net = f"ens{c}"
        else:
            en_net = "wdrv_en"
        spd.instances.append(Instance(
            f"XWD{c}", "write_driver_diff",
            (f"d{bit}", en_net, f"bl{c}", f"blb{c}", "vdd", "gnd")))
    for b in range(wz):
        if m > 1:
            ins_t = tuple(f"bl{b * m + i}" for i in range(m))
            ins_f = tuple(f"blb{b * m + i}" for i in range(m))
            sels = _bus("sel", m)
            spd.instances.append(Instance(
                f"XMXT{b}", f"colmux{m}", ins_t + sels + (f"mbl{b}", "gnd")))
            spd.instances.append(Instance(
                f"XMXF{b}", f"colmux{m}", ins_f + sels + (f"mblb{b}", "gnd")))
            sa_t, sa_f = f"mbl{b}", f"mblb{b}"
        else:
            sa_t, sa_f = f"bl{b}", f"blb{b}"
        spd.instances.append(Instance(
            f"XSA{b}", "sense_amp_diff",
            (sa_t, sa_f, "sa_en", f"dout{b}", "vdd", "gnd")))
    lib.add(spd)

    ab_bank = rb + mb
    bank_ports = (_bus("a", ab_bank) + _bus("d", wz) + _bus("dout", wz) +
                  ("wl_en", "pc_enb", "sa_en", "wdrv_en", "vdd", "gnd"))
    bank = Subcircuit("sram_bank", bank_ports)
    bank.instances.append(Instance(
        "XSPA", "sram_port_address",
        _bus("a", rb) + ("wl_en",) + _bus("wl", rows) + ("vdd", "gnd")))
    if m > 1:
        bank.instances.append(Instance(
            "XCD", f"row_decoder_{mb}",
            tuple(f"a{rb + i}" for i in range(mb)) + _bus("sel", m) +
            ("vdd", "gnd")))
        sel_bind = _bus("sel", m)
    else:
        sel_bind = ()
    bank.instances.append(Instance(
        "XSPD", "sram_port_data",
        _bus("bl", cols) + _bus("blb", cols) + sel_bind +
        ("pc_enb", "sa_en", "wdrv_en") + _bus("d", wz) + _bus("dout", wz) +
        ("vdd", "gnd")))
    bank.instances.append(Instance(
        "XARR", arr.name,
        _bus("bl", cols) + _bus("blb", cols) + _bus("wl", rows) +
        ("vdd", "gnd")))
    lib.add(bank)

    # shared-port controller: precharge enable stays active-low, no extra
    # inverter stage (contrast with the GC read controller)
    ctl = Subcircuit("sram_controller",
                     ("clk", "we", "re", "wl_en", "pc_enb", "sa_en",
                      "wdrv_en", "vdd", "gnd"))
    ctl.instances += [
        Instance("XIW", "inv", ("we", "web", "vdd", "gnd")),
        Instance("XIR", "inv", ("re", "reb", "vdd", "gnd")),
        Instance("XOR", "nand2", ("web", "reb", "en_any", "vdd", "gnd")),
        Instance("XG", "nand2", ("clk", "en_any", "nen", "vdd", "gnd")),
        Instance("XE", "inv", ("nen", "wl_en", "vdd", "gnd")),
        Instance("XPC", "inv", ("wl_en", "pc_enb", "vdd", "gnd")),
        Instance("XWN", "nand2", ("wl_en", "we", "nwd", "vdd", "gnd")),
        Instance("XWE", "inv", ("nwd", "wdrv_en", "vdd", "gnd"))]
    _delay_chain(ctl, "wl_en", "sa_en", max(n_read, n_write), prefix="XDLYS")
    lib.add(ctl)

    ab = config.addr_bits
    top_ports = (("clk", "we", "re") + _bus("addr", ab) + _bus("din", wz) +
                 _bus("dout", wz) + ("vdd", "gnd"))
    top = Subcircuit(f"sram_{config.slug()}", top_ports)
    top.instances.append(Instance(
        "XDFF", f"data_dff_bank{wz}",
        _bus("din", wz) + _bus("d", wz) + ("clk", "vdd", "gnd")))
    top.instances.append(Instance(
        "XCTL", "sram_controller",
        ("clk", "we", "re", "wl_en", "pc_enb", "sa_en", "wdrv_en",
         "vdd", "gnd")))
    if banks > 1:
        top.instances.append(Instance(
            "XBD", f"row_decoder_{bb}",
            tuple(f"addr{ab_bank + i}" for i in range(bb)) +
            _bus("bsel", banks) + ("vdd", "gnd")))
    for k in range(banks):
        if banks > 1:
            top.instances.append(Instance(
                f"XBG{k}", "and2",
                ("wl_en", f"bsel{k}", f"wl_en_{k}", "vdd", "gnd")))
            wl_en = f"wl_en_{k}"
        else:
            wl_en = "wl_en"
        top.instances.append(Instance(
            f"XB{k}", "sram_bank",
            tuple(f"addr{i}" for i in range(ab_bank)) +
            _bus("d", wz) + _bus("dout", wz) +
            (wl_en, "pc_enb", "sa_en", "wdrv_en", "vdd", "gnd")))
    lib.add(top)

    return Netlist(subcircuits=lib.subs, top=top.name)


# --- connectivity check -------------------------------------------------------

_SUPPLY_HIGH = {"vdd", "vdd_boost"}
_SUPPLY_LOW = {"gnd"}


def connectivity_check(netlist: Netlist) -> ConnectivityReport:
    """Structural sanity: floating nets, undriven gates, supply shorts, and
    instance/subcircuit port-count mismatches."""
    violations: list[tuple[str, str, str]] = []
    for sub in netlist.subcircuits.values():
        terminals: dict[str, list[str]] = {}

        def touch(net, kind):
            terminals.setdefault(net, []).append(kind)

        for dev in sub.devices:
            if dev.dtype == "M":
                d, g, s, b = dev.nets
                touch(d, "channel"); touch(g, "gate")
                touch(s, "channel"); touch(b, "bulk")
            else:
                for net in dev.nets:
                    touch(net, "passive")
        for inst in sub.instances:
            target = netlist.subcircuits.get(inst.subckt)
            if target is None:
                violations.append((inst.name, "unknown-subcircuit",
                                   f"{sub.name}: instance {inst.name} "
                                   f"references undefined '{inst.subckt}'"))
                for net in inst.nets:
                    touch(net, "inst")
                continue
            if len(inst.nets) != len(target.ports):
                violations.append((inst.name, "port-mismatch",
                                   f"{sub.name}.{inst.name}: binds "
                                   f"{len(inst.nets)} nets to "
                                   f"{len(target.ports)}-port {target.name}"))
            for net in inst.nets:
                touch(net, "inst")
            bound = dict(zip(target.ports, inst.nets))
            highs = {bound[p] for p in _SUPPLY_HIGH if p in bound}
            lows = {bound[p] for p in _SUPPLY_LOW if p in bound}
            shorted = highs & lows
            for net in sorted(shorted):
                violations.append((net, "supply-short",
                                   f"{sub.name}.{inst.name}: supply and "
                                   f"ground ports tied to net '{net}'"))
        ports = set(sub.ports)
        for net in sorted(terminals):
            kinds = terminals[net]
            if net in ports:
                continue
            if len(kinds) == 1:
                violations.append((net, "floating",
                                   f"{sub.name}: net '{net}' has a single "
                                   f"{kinds[0]} connection"))
            elif all(k == "gate" for k in kinds):
                violations.append((net, "undriven-gate",
                                   f"{sub.name}: net '{net}' connects only "
                                   f"MOS gates"))
    return ConnectivityReport(violations=violations)


# --- SPICE-subset emitter/parser ----------------------------------------------

def emit_spice(netlist: Netlist) -> str:
    """Deterministic subcircuit-style netlist text.

    Refuses to emit a netlist that fails the connectivity check; round-trips
    through :func:`parse_spice` up to instance ordering.
    """
    report = connectivity_check(netlist)
    if not report.passed:
        first = report.violations[0]
        raise ConnectivityError(
            f"refusing to emit: {len(report.violations)} connectivity "
            f"violation(s), first: {first[2]}")
    lines = [f"* {text}" for text in netlist.header]
    for sub in netlist.subcircuits.values():
        lines.append(f".SUBCKT {sub.name} {' '.join(sub.ports)}")
        for dev in sub.devices:
            if dev.dtype == "M":
                params = " ".join(f"{k}={v}" for k, v in dev.params)
                lines.append(f"M{dev.name[1:]} {' '.join(dev.nets)} "
                             f"{dev.model} {params}".rstrip())
            else:
                lines.append(f"{dev.dtype}{dev.name[1:]} "
                             f"{' '.join(dev.nets)} {dev.model}")
        for inst in sub.instances:
            lines.append(f"X{inst.name[1:]} {' '.join(inst.nets)} "
                         f"{inst.subckt}")
        lines.append(f".ENDS {sub.name}")
    lines.append(".END")
    return "\n".join(lines) + "\n"


def parse_spice(text: str) -> Netlist:
    """Parse the emitted SPICE subset back into a netlist."""
    subcircuits: dict[str, Subcircuit] = {}
    header: list[str] = []
    current: Subcircuit | None = None
    current_line = 0
    seen_any = False

    # fold continuation lines
    raw_lines: list[tuple[int, str]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped.startswith("+"):
            if not raw_lines:
                raise SpiceSyntaxError("continuation with no previous card",
                                       lineno)
            prev_no, prev = raw_lines[-1]
            raw_lines[-1] = (prev_no, prev + " " + stripped[1:].strip())
        else:
            raw_lines.append((lineno, stripped))

    for lineno, line in raw_lines:
        if not line:
            continue
        if line.startswith("*"):
            if current is None and not subcircuits:
                header.append(line[1:].strip())
            continue
        seen_any = True
        tokens = line.split()
        card = tokens[0].upper()
        if card == ".SUBCKT":
            if current is not None:
                raise SpiceSyntaxError(
                    f"nested .SUBCKT inside '{current.name}'", lineno)
            if len(tokens) < 2:
                raise SpiceSyntaxError(".SUBCKT requires a name", lineno)
            current = Subcircuit(tokens[1], tuple(tokens[2:]))
            current_line = lineno
        elif card == ".ENDS":
            if current is None:
                raise SpiceSyntaxError(".ENDS outside a subcircuit", lineno)
            subcircuits[current.name] = current
            current = None
        elif card == ".END":
            if current is not None:
                raise SpiceSyntaxError(
                    f"unterminated subcircuit '{current.name}' "
                    f"(opened at line {current_line})", lineno)
        elif current is None:
            raise SpiceSyntaxError(f"card outside subcircuit: {line}", lineno)
        elif line[0].upper() == "X":
            if len(tokens) < 2:
                raise SpiceSyntaxError("instance card too short", lineno)
            current.instances.append(Instance(
                "X" + tokens[0][1:], tokens[-1], tuple(tokens[1:-1])))
        elif line[0].upper() == "M":
            plain = [t for t in tokens[1:] if "=" not in t]
            params = tuple(tuple(t.split("=", 1)) for t in tokens[1:]
                           if "=" in t)
            if len(plain) != 5:
                raise SpiceSyntaxError(
                    "MOS card needs 4 nets and a model", lineno)
            current.devices.append(Device(
                "M" + tokens[0][1:], "M", tuple(plain[:4]), plain[4], params))
        elif line[0].upper() in ("C", "R"):
            if len(tokens) != 4:
                raise SpiceSyntaxError(
                    f"{line[0].upper()} card needs 2 nets and a value", lineno)
            current.devices.append(Device(
                line[0].upper() + tokens[0][1:], line[0].upper(),
                tuple(tokens[1:3]), tokens[3]))
        else:
            raise SpiceSyntaxError(f"unknown card: {line}", lineno)

    if current is not None:
        raise SpiceSyntaxError(
            f"unterminated subcircuit '{current.name}' "
            f"(opened at line {current_line})", current_line)
    if not seen_any or not subcircuits:
        raise SpiceSyntaxError("no subcircuits found", 1)
    top = next(reversed(subcircuits))
    return Netlist(subcircuits=subcircuits, top=top, header=tuple(header))


# --- behavioral HDL model -----------------------------------------------------

def emit_verilog_model(config: MacroConfig) -> str:
    """Behavioral synchronous memory model matching the macro port list.

    Gain-cell macros are dual ported and accept a read and a write in the
    same cycle; a same-address collision returns the incoming write data
    (write-first).  SRAM macros share one address port.
    """
    config.validate()
    wz, nw, ab = config.word_size, config.num_words, config.addr_bits
    name = ("gcram_" if config.is_gain_cell else "sram_") + \
        config.slug().replace("-", "_")
    if config.is_gain_cell:
        return f"""\
// behavioral model for {config.slug()}
module {name} (
    input  wire clk,
    input  wire we,
    input  wire re,
    input  wire [{ab - 1}:0] addr_w,
    input  wire [{ab - 1}:0] addr_r,
    input  wire [{wz - 1}:0] din,
    output reg  [{wz - 1}:0] dout
);
    reg [{wz - 1}:0] mem [0:{nw - 1}];

    always @(posedge clk) begin
        if (we)
            mem[addr_w] <= din;
        if (re)
            dout <= (we && (addr_w == addr_r)) ? din : mem[addr_r];
    end
endmodule
"""
    return f"""\
// behavioral model for {config.slug()}
module {name} (
    input  wire clk,
    input  wire we,
    input  wire re,
    input  wire [{ab - 1}:0] addr,
    input  wire [{wz - 1}:0] din,
    output reg  [{wz - 1}:0] dout
);
    reg [{wz - 1}:0] mem [0:{nw - 1}];

    always @(posedge clk) begin
        if (we)
            mem[addr] <= din;
        else if (re)
            dout <= mem[addr];
    end
endmodule
"""
