import filecmp
import json

from gcram.cli import main


def run(args, capsys=None):
    code = main(args)
    return code


class TestGen:
    def test_happy_path_writes_four_files(self, tmp_path):
        out = tmp_path / "o"
        assert main(["gen", "--variant", "sisi-gc", "--wz", "32",
                     "--nw", "32", "-o", str(out)]) == 0
        slug = "sisi-gc_wz32_nw32_b1_m1"
        for ext in (".sp", ".v", ".lef", ".connectivity.txt"):
            assert (out / f"{slug}{ext}").exists()
        assert "PASS" in (out / f"{slug}.connectivity.txt").read_text()

    def test_invalid_geometry_exits_one(self, tmp_path, capsys):
        code = main(["gen", "--variant", "sisi-gc", "--wz", "33",
                     "--nw", "32", "-o", str(tmp_path)])
        assert code == 1
        assert capsys.readouterr().err.startswith("error:")

    def test_missing_tech_file_exits_one(self, tmp_path, capsys):
        code = main(["gen", "--tech", str(tmp_path / "no.yaml"),
                     "--variant", "sisi-gc", "--wz", "32", "--nw", "32",
                     "-o", str(tmp_path)])
        assert code == 1
        assert "not found" in capsys.readouterr().err


class TestChar:
    def test_writes_report_and_liberty(self, tmp_path):
        out = tmp_path / "o"
        assert main(["char", "--variant", "ossi-gc", "--wz", "16",
                     "--nw", "64", "--ls", "-o", str(out)]) == 0
        slug = "ossi-gc-ls_wz16_nw64_b1_m2"  # auto-square mux picks 2
        report = json.loads((out / f"{slug}.char.json").read_text())
        assert report["f_op_hz"] > 0
        assert "retention_time" in (out / f"{slug}.lib").read_text()

    def test_sram_ls_warns_but_succeeds(self, tmp_path, caplog):
        import logging
        with caplog.at_level(logging.WARNING):
            code = main(["char", "--variant", "sram6t", "--wz", "32",
                         "--nw", "32", "--ls", "-o", str(tmp_path)])
        assert code == 0
        assert any("level-shifter" in r.message for r in caplog.records)


class TestShmooPlan:
    def test_shmoo_default_profile(self, tmp_path):
        out = tmp_path / "o"
        assert main(["shmoo", "--variant", "sram6t", "-o", str(out)]) == 0
        grid = json.loads((out / "shmoo_sram6t.json").read_text())
        assert len(grid["cells"]) == 14 * 16
        assert (out / "shmoo_sram6t.csv").read_text().startswith("task_id,")

    def test_plan_seven_rows(self, tmp_path, capsys):
        out = tmp_path / "o"
        assert main(["plan", "-o", str(out)]) == 0
        table = (out / "plan.txt").read_text()
        assert table.count("\n") == 9  # header + rule + 7 tasks
        assert "OS-Si GC + Si-Si GC + SRAM" in table

    def test_infeasible_profile_exits_two(self, tmp_path, capsys):
        profile = tmp_path / "r.json"
        profile.write_text(json.dumps([{
            "task_id": "x", "task_name": "x", "cache_level": "L1",
            "f_read_req_hz": 1e15,
            "lifetime_bins": [
                {"t_min_s": 1e-6, "t_max_s": 1e-3, "traffic_share": 1.0}]}]))
        code = main(["plan", "--requirements", str(profile),
                     "-o", str(tmp_path)])
        assert code == 2
        assert "infeasible" in capsys.readouterr().err

    def test_malformed_profile_exits_one(self, tmp_path, capsys):
        profile = tmp_path / "r.json"
        profile.write_text("{not json")
        code = main(["plan", "--requirements", str(profile),
                     "-o", str(tmp_path)])
        assert code == 1


class TestDeterminism:
    def test_identical_argv_identical_tree(self, tmp_path):
        argv = ["all", "--variant", "sisi-gc", "--wz", "16", "--nw", "64"]
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(argv + ["-o", str(a)]) == 0
        assert main(argv + ["-o", str(b)]) == 0
        names = sorted(p.name for p in a.iterdir())
        assert names == sorted(p.name for p in b.iterdir())
        match, mismatch, errors = filecmp.cmpfiles(a, b, names, shallow=False)
        assert mismatch == [] and errors == []
        assert len(match) == len(names) > 0


class TestEnvVar:
    def test_env_var_supplies_tech(self, tmp_path, monkeypatch):
        from gcram.technology import default_technology_path
        alt = tmp_path / "alt.yaml"
        alt.write_text(default_technology_path().read_text())
        monkeypatch.setenv("GCRAM_TECH", str(alt))
        assert main(["char", "--variant", "sisi-gc", "--wz", "32",
                     "--nw", "32", "-o", str(tmp_path / "o")]) == 0
