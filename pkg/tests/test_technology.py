import math

import pytest
import yaml
from hypothesis import given
from hypothesis import strategies as st

from gcram.errors import InvariantError, TechFileError, UnknownVariantError
from gcram.technology import (OS_OFF_CURRENT_BOUND, T_REF, TransistorModel,
                              TxKind, VariantName, bitcell_lookup,
                              default_technology_path, drive_current,
                              load_default_technology, load_technology,
                              subthreshold_current, v_thermal)


@pytest.fixture(scope="module")
def tech():
    return load_default_technology()


def _tx(**kw):
    base = dict(name="t", kind=TxKind.SI_NMOS, vt=0.5, ss=100.0,
                i_off_ref=1e-9, i_on=1e-4, width=0.1, c_gate=1.0)
    base.update(kw)
    return TransistorModel(**base)


class TestSubthresholdModel:
    def test_off_current_reference_point(self):
        # at vgs = 0 and deep saturation the model returns i_off_ref * width
        tx = _tx()
        i = subthreshold_current(tx, 0.0, 1.0)
        assert i == pytest.approx(tx.i_off_ref * tx.width, rel=1e-9)

    def test_decade_per_ss(self):
        tx = _tx(ss=100.0)
        i0 = subthreshold_current(tx, 0.0, 1.0)
        i1 = subthreshold_current(tx, 0.1, 1.0)
        assert i1 / i0 == pytest.approx(10.0, rel=1e-9)

    def test_delta_vt_suppression_exact(self):
        tx = _tx(ss=120.0)
        i0 = subthreshold_current(tx, -0.2, 1.0)
        i1 = subthreshold_current(tx, -0.2, 1.0, delta_vt=0.24)
        assert i0 / i1 == pytest.approx(100.0, rel=1e-9)

    def test_vds_saturation_term(self):
        tx = _tx()
        vth = v_thermal(T_REF)
        i = subthreshold_current(tx, 0.0, vth)
        assert i == pytest.approx(tx.i_off_ref * tx.width * (1 - math.e ** -1),
                                  rel=1e-9)

    def test_zero_vds_means_zero_current(self):
        assert subthreshold_current(_tx(), 0.3, 0.0) == 0.0

    def test_negative_vds_rejected(self):
        with pytest.raises(ValueError):
            subthreshold_current(_tx(), 0.0, -0.1)

    @given(vgs=st.floats(-1.0, 0.5), dv=st.floats(0.001, 0.3))
    def test_monotone_in_vgs(self, vgs, dv):
        tx = _tx()
        assert subthreshold_current(tx, vgs + dv, 1.0) > \
            subthreshold_current(tx, vgs, 1.0)

    @given(t1=st.floats(250.0, 400.0), dt=st.floats(1.0, 100.0))
    def test_hold_leakage_grows_with_temperature(self, t1, dt):
        # negative-vgs hold bias: hotter device leaks more
        tx = _tx()
        i_cold = subthreshold_current(tx, -0.5, 0.5, temperature=t1)
        i_hot = subthreshold_current(tx, -0.5, 0.5, temperature=t1 + dt)
        assert i_hot > i_cold


class TestDriveCurrent:
    def test_full_gate_drive_is_i_on(self):
        tx = _tx()
        assert drive_current(tx, 1.1, 1.1) == pytest.approx(
            tx.i_on * tx.width, rel=1e-12)

    def test_below_threshold_clamped(self):
        assert drive_current(_tx(vt=0.5), 0.4, 1.1) == 0.0

    def test_boost_exceeds_nominal(self):
        tx = _tx(vt=0.6)
        assert drive_current(tx, 1.4, 1.1) > drive_current(tx, 1.1, 1.1)

    @given(v1=st.floats(0.55, 1.3), dv=st.floats(0.01, 0.5))
    def test_monotone_overdrive(self, v1, dv):
        tx = _tx(vt=0.5)
        assert drive_current(tx, v1 + dv, 1.1) > drive_current(tx, v1, 1.1)


class TestModelInvariants:
    def test_os_off_current_bound_enforced(self):
        tx = _tx(kind=TxKind.OS_NMOS, i_off_ref=10 * OS_OFF_CURRENT_BOUND)
        with pytest.raises(InvariantError):
            tx.validate()

    def test_si_ss_floor(self):
        with pytest.raises(InvariantError):
            _tx(ss=45.0).validate()

    def test_default_tech_validates(self, tech):
        tech.validate()  # should not raise

    def test_gc_cells_are_nmos_write_pmos_read(self, tech):
        for name in (VariantName.SISI_GC, VariantName.OSSI_GC):
            cell = tech.variant(name)
            assert cell.write_tx.kind in (TxKind.SI_NMOS, TxKind.OS_NMOS)
            assert cell.read_tx.kind is TxKind.SI_PMOS
            assert cell.read_polarity == "ActiveHighRWL"

    def test_pitch_product_equals_cell_area(self, tech):
        for v in tech.variants:
            assert v.pitch_x * v.pitch_y == pytest.approx(v.cell_area)


class TestLookup:
    def test_ls_flag_round_trip(self, tech):
        cell = bitcell_lookup(tech, VariantName.SISI_GC, ls=True)
        assert cell.has_wwl_level_shifter
        assert not bitcell_lookup(tech, VariantName.SISI_GC).has_wwl_level_shifter

    def test_sram_ignores_ls_with_warning(self, tech, caplog):
        import logging
        with caplog.at_level(logging.WARNING):
            cell = bitcell_lookup(tech, VariantName.SRAM6T, ls=True)
        assert not cell.has_wwl_level_shifter
        assert any("level-shifter" in r.message for r in caplog.records)

    def test_unknown_variant(self, tech):
        smaller = tech.variants[:2]
        import dataclasses
        t2 = dataclasses.replace(tech, variants=smaller)
        with pytest.raises(UnknownVariantError):
            t2.variant(VariantName.SRAM6T)


class TestLoader:
    def test_missing_file(self, tmp_path):
        with pytest.raises(TechFileError, match="not found"):
            load_technology(tmp_path / "nope.yaml")

    def test_bad_yaml_reports_line(self, tmp_path):
        p = tmp_path / "bad.yaml"
        p.write_text("format: gcram-tech\nversion: 1\nsupply: [unclosed\n")
        with pytest.raises(TechFileError, match="line"):
            load_technology(p)

    def test_wrong_format_header(self, tmp_path):
        p = tmp_path / "t.yaml"
        p.write_text("format: other\nversion: 1\n")
        with pytest.raises(TechFileError, match="format"):
            load_technology(p)

    def test_wrong_version(self, tmp_path):
        p = tmp_path / "t.yaml"
        p.write_text("format: gcram-tech\nversion: 2\n")
        with pytest.raises(TechFileError, match="version"):
            load_technology(p)

    def test_missing_field_names_path(self, tmp_path):
        raw = yaml.safe_load(default_technology_path().read_text())
        del raw["supply"]["vdd_v"]
        p = tmp_path / "t.yaml"
        p.write_text(yaml.safe_dump(raw))
        with pytest.raises(TechFileError, match="supply.vdd_v"):
            load_technology(p)

    def test_non_numeric_field_rejected(self, tmp_path):
        raw = yaml.safe_load(default_technology_path().read_text())
        raw["sensing"]["sense_margin_v"] = "lots"
        p = tmp_path / "t.yaml"
        p.write_text(yaml.safe_dump(raw))
        with pytest.raises(TechFileError, match="sense_margin_v"):
            load_technology(p)

    def test_load_is_deterministic(self):
        assert load_default_technology() == load_default_technology()
