import json

import pytest

from calindex import cli


@pytest.fixture
def config_a(tmp_path):
    doc = {
        "mu0": 1.0,
        "k0": 1,
        "lines": [{"mu": 0.3, "k": 1}, {"mu": -0.3, "k": -1}],
    }
    path = tmp_path / "config_a.json"
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture
def config_field(tmp_path):
    doc = {
        "mu0": 1.0,
        "k0": 1,
        "lines": [{"mu": 0.3, "k": 1}, {"mu": -0.3, "k": -1}],
        "field": {
            "grid3": 16,
            "gridz": 8,
            "h_fd": 1.0 / 96.0,
            "twist_degree": 1,
            "r1": 0.6,
            "rho_out": 0.45,
        },
    }
    path = tmp_path / "config_field.json"
    path.write_text(json.dumps(doc))
    return str(path)


class TestIndexCommand:
    def test_prints_total(self, config_a, capsys):
        code = cli.main(["index", "--config", config_a, "--t", "0"])
        out = capsys.readouterr().out
        assert code == 0
        assert "index total      -2" in out

    def test_half_shift(self, config_a, capsys):
        code = cli.main(["index", "--config", config_a, "--t", "0.5"])
        out = capsys.readouterr().out
        assert code == 0
        assert "index total      -1" in out

    def test_lattice_hit_exits_2(self, tmp_path, capsys):
        doc = {"mu0": 1.0, "k0": 0, "lines": [{"mu": 2.0, "k": 1}, {"mu": 0.3, "k": -1}]}
        path = tmp_path / "bad_t.json"
        path.write_text(json.dumps(doc))
        code = cli.main(["index", "--config", str(path), "--t", "0"])
        err = capsys.readouterr().err
        assert code == 2
        assert "mu=2.0" in err

    def test_json_output_roundtrips(self, config_a, capsys):
        code = cli.main(["index", "--config", config_a, "--format", "json"])
        out = capsys.readouterr().out
        assert code == 0
        doc = json.loads(out)
        assert doc["total"] == -2
        assert doc["mode_terms"] == {"0": -1}


class TestFredholmCommand:
    def test_fredholm_ok(self, config_a, capsys):
        assert cli.main(["fredholm", "--config", config_a, "--t", "0"]) == 0
        assert "Fredholm" in capsys.readouterr().out

    def test_not_fredholm_at_jump(self, config_a, capsys):
        code = cli.main(["fredholm", "--config", config_a, "--t", "0.3"])
        out = capsys.readouterr().out
        assert code == 2
        assert "NOT Fredholm at t=0.3" in out


class TestEtaCommand:
    def test_eta_bar(self, config_a, capsys):
        assert cli.main(["eta", "--config", config_a, "--t", "0"]) == 0
        assert "eta_bar_lim      0.8" in capsys.readouterr().out


class TestNahmCommand:
    def test_csv_segments(self, config_a, capsys):
        code = cli.main(["nahm", "--config", config_a, "--t-min", "-0.5", "--t-max", "1.5"])
        captured = capsys.readouterr()
        assert code == 0
        rows = captured.out.strip().splitlines()
        assert rows[0] == "t_lo,t_hi,index,rank"
        ranks = [int(r.split(",")[3]) for r in rows[1:]]
        assert ranks == [1, 2, 1, 2, 1]

    def test_trivial_single_rank(self, tmp_path, capsys):
        doc = {"mu0": 1.0, "k0": 1, "lines": [{"mu": 0.5, "k": 0}, {"mu": -0.5, "k": 0}]}
        path = tmp_path / "trivial.json"
        path.write_text(json.dumps(doc))
        code = cli.main(["nahm", "--config", str(path), "--t-min", "0.0", "--t-max", "1.0"])
        rows = capsys.readouterr().out.strip().splitlines()
        assert code == 0
        assert all(int(r.split(",")[3]) == 1 for r in rows[1:])

    def test_empty_range_exits_1(self, config_a, capsys):
        code = cli.main(["nahm", "--config", config_a, "--t-min", "1.0", "--t-max", "1.0"])
        assert code == 1

    def test_plot_emission(self, config_a, tmp_path, capsys):
        plot = tmp_path / "profile.png"
        code = cli.main(
            ["nahm", "--config", config_a, "--t-min", "0", "--t-max", "2", "--plot", str(plot)]
        )
        capsys.readouterr()
        assert code == 0
        assert plot.exists() and plot.stat().st_size > 0

    def test_json_roundtrip_and_determinism(self, config_a, capsys):
        args = ["nahm", "--config", config_a, "--t-min", "-0.5", "--t-max", "1.5",
                "--format", "json"]
        assert cli.main(args) == 0
        first = capsys.readouterr().out
        assert cli.main(args) == 0
        second = capsys.readouterr().out
        assert first == second
        doc = json.loads(first)
        assert [s["rank"] for s in doc["segments"]] == [1, 2, 1, 2, 1]


class TestDegreeCommand:
    def test_degree_two(self, capsys):
        code = cli.main(["degree", "2", "--grid", "32"])
        out = capsys.readouterr().out
        assert code == 0
        assert "rounds to 2" in out


class TestConfigValidation:
    def test_unknown_key_rejected(self, tmp_path, capsys):
        doc = {"mu0": 1.0, "k0": 0, "lines": [{"mu": 0.5, "k": 0}], "extra": 1}
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(doc))
        assert cli.main(["index", "--config", str(path)]) == 1

    def test_chern_sum_rejected(self, tmp_path, capsys):
        doc = {"mu0": 1.0, "k0": 0, "lines": [{"mu": 0.5, "k": 1}]}
        path = tmp_path / "bad_sum.json"
        path.write_text(json.dumps(doc))
        assert cli.main(["index", "--config", str(path)]) == 1

    def test_missing_file(self, capsys):
        assert cli.main(["index", "--config", "/nonexistent.json"]) == 1

    def test_unknown_field_key(self, tmp_path, capsys):
        doc = {
            "mu0": 1.0,
            "k0": 0,
            "lines": [{"mu": 0.5, "k": 0}],
            "field": {"grid3": 16, "bogus": 2},
        }
        path = tmp_path / "bad_field.json"
        path.write_text(json.dumps(doc))
        assert cli.main(["index", "--config", str(path)]) == 1


class TestVerifyCommand:
    def test_identities_only(self, config_a, capsys):
        code = cli.main(["verify", "--config", config_a])
        out = capsys.readouterr().out
        assert code == 0
        assert "eta_identity_1000" in out and "FAIL" not in out

    def test_with_small_field_suite(self, config_field, capsys):
        code = cli.main(["verify", "--config", config_field])
        out = capsys.readouterr().out
        # the coarse grid still passes every check for this data
        assert "ch_4d" in out
        assert code == 0, out


class TestChargeCommand:
    def test_small_grid(self, tmp_path, capsys):
        doc = {
            "mu0": 1.0,
            "k0": 0,
            "lines": [{"mu": 0.3, "k": 1}, {"mu": -0.3, "k": -1}],
            "field": {"grid3": 16, "gridz": 8},
        }
        path = tmp_path / "charge.json"
        path.write_text(json.dumps(doc))
        code = cli.main(["charge", "--config", str(path)])
        out = capsys.readouterr().out
        assert code == 0
        assert "closed form -0.6" in out
