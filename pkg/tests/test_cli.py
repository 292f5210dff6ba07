import csv
import json

import pytest

from app.cli import build_parser, run
from app.cli.arguments import parse_values
from app.cli.errors import EXIT_IO, EXIT_NO_SOLUTION, EXIT_OK, EXIT_VALIDATION
from app.services.report_service import SWEEP_HEADER, manifest_path


def read_rows(path):
    with open(path, newline="", encoding="utf-8") as handle:
        return list(csv.reader(handle))


@pytest.fixture
def small_config(write_config):
    return write_config(
        "small.json",
        r=2, mu=[0.5, 0.5], P=200, K1=3, offsets=[0, 2], alpha=[[0.8, 0.6], [0.6, 0.8]],
        n=40, trials=10, seed=3,
    )


class TestArguments:

    def test_inclusive_ranges(self):
        assert parse_values("5:25:1") == [float(k) for k in range(5, 26)]
        assert parse_values("0:1:0.05")[-1] == 1.0
        assert len(parse_values("0:1:0.05")) == 21
        assert parse_values("0.1,0.2") == [0.1, 0.2]

    @pytest.mark.parametrize("text", ["1:2", "a:b:c", "0:1:0", "3:1:1", ""])
    def test_bad_values(self, text):
        with pytest.raises(ValueError):
            parse_values(text)

    def test_oracle_is_hidden(self):
        help_text = build_parser().format_help()
        assert "oracle" not in help_text
        assert "edge-prob" in help_text


class TestEdgeProb:

    def test_figure1_minimum_class(self, figure1_config, capsys):
        assert run(["edge-prob", "--config", figure1_config(0.2)]) == EXIT_OK
        out = capsys.readouterr().out
        assert "m=1" in out
        assert "K=20,25" in out

    def test_k1_override(self, figure1_config, capsys):
        assert run(["edge-prob", "--config", figure1_config(0.2), "--k1", "22", "--json"]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload['K'] == [22, 27]
        assert payload['at_threshold'] is True

    def test_json_carries_expected_isolated(self, figure1_config, capsys):
        assert run(["edge-prob", "--config", figure1_config(0.2), "--k1", "22", "--json"]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert 0 < payload['expected_isolated'] < 1

    def test_single_class(self, write_config, capsys):
        path = write_config(r=1, mu=[1.0], P=100, K=[10], alpha=[[0.5]], n=50)
        assert run(["edge-prob", "--config", path]) == EXIT_OK
        out = capsys.readouterr().out
        assert "m=1 d=1 s=1" in out
        assert out.count("p_ij:") == 1

    def test_bad_mu_names_the_field(self, write_config, capsys):
        path = write_config(r=2, mu=[0.6, 0.6], P=100, K=[3, 4], alpha=[0.5, 0.5, 0.5, 0.5])
        assert run(["edge-prob", "--config", path]) == EXIT_VALIDATION
        assert "mu" in capsys.readouterr().err

    def test_asymmetric_alpha(self, write_config, capsys):
        path = write_config(r=2, mu=[0.5, 0.5], P=100, K=[3, 4], alpha=[0.5, 0.4, 0.3, 0.5])
        assert run(["edge-prob", "--config", path]) == EXIT_VALIDATION
        assert "symmetric" in capsys.readouterr().err

    def test_both_ring_forms_rejected(self, write_config):
        path = write_config(r=1, mu=[1.0], P=100, K=[3], K1=3, offsets=[0], alpha=[[0.5]])
        assert run(["edge-prob", "--config", path]) == EXIT_VALIDATION

    def test_missing_file(self, tmp_path, capsys):
        assert run(["edge-prob", "--config", str(tmp_path / "absent.json")]) == EXIT_IO
        assert "absent.json" in capsys.readouterr().err


class TestThreshold:

    @pytest.mark.parametrize("alpha12, expected", [(0.2, 22), (0.6, 16)])
    def test_figure1(self, figure1_config, capsys, alpha12, expected):
        assert run(["threshold", "--config", figure1_config(alpha12)]) == EXIT_OK
        assert capsys.readouterr().out.strip() == f"K1*={expected}"

    def test_silent_channel_has_no_solution(self, write_config, capsys):
        path = write_config(r=2, mu=[0.5, 0.5], P=10_000, K1=20, offsets=[0, 5], alpha=[0, 0, 0, 0], n=500)
        assert run(["threshold", "--config", path]) == EXIT_NO_SOLUTION
        assert "no K_1" in capsys.readouterr().err

    def test_offsets_flag(self, figure1_config, capsys):
        assert run(["threshold", "--config", figure1_config(0.2), "--offsets", "0,0"]) == EXIT_OK
        assert capsys.readouterr().out.startswith("K1*=")


class TestSweep:

    def sweep(self, config, out, *extra):
        return run(["sweep", "--config", config, "--axis", "K1", "--values", "3:7:1",
                    "--out", str(out), "--workers", "1", *extra])

    def test_csv_schema_and_manifest(self, small_config, tmp_path):
        out = tmp_path / "k1.csv"
        assert self.sweep(small_config, out) == EXIT_OK
        rows = read_rows(out)
        assert ",".join(rows[0]) == ",".join(SWEEP_HEADER)
        assert rows[0] == ["sweep_value", "n", "trials", "connected_count", "isolated_free_count",
                           "p_connected", "p_isolated_free", "lambda_m", "c_n", "at_threshold"]
        assert [row[0] for row in rows[1:]] == ["3", "4", "5", "6", "7"]
        for row in rows[1:]:
            assert row[1] == "40" and row[2] == "10"
            assert int(row[3]) <= int(row[4])
            assert float(row[5]) <= float(row[6])
            assert len(row[5].split(".")[1]) == 6
            assert row[9] in ("0", "1")
        manifest = json.loads(manifest_path(out).read_text())
        assert manifest['master_seed'] == 3
        assert len(manifest['config_hash']) == 64
        assert manifest['outputs'] == [str(out)]
        assert manifest['created_at'].endswith("+00:00")

    def test_json_output_keeps_expected_isolated(self, small_config, tmp_path):
        out, full = tmp_path / "k1.csv", tmp_path / "k1.json"
        assert self.sweep(small_config, out, "--json-out", str(full)) == EXIT_OK
        payload = json.loads(full.read_text())
        assert payload['axis'] == "K1"
        expected = [row['expected_isolated'] for row in payload['rows']]
        assert len(expected) == 5
        assert all(a > b for a, b in zip(expected, expected[1:]))
        assert "expected_isolated" not in read_rows(out)[0]

    def test_rerun_is_byte_identical(self, small_config, tmp_path):
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        assert self.sweep(small_config, first) == EXIT_OK
        assert run(["sweep", "--config", small_config, "--axis", "K1", "--values", "3:7:1",
                    "--out", str(second), "--workers", "2"]) == EXIT_OK
        assert first.read_bytes() == second.read_bytes()
        hashes = {json.loads(manifest_path(p).read_text())['config_hash'] for p in (first, second)}
        assert len(hashes) == 1

    def test_seed_and_trials_flags(self, small_config, tmp_path):
        out = tmp_path / "seeded.csv"
        assert self.sweep(small_config, out, "--seed", "99", "--trials", "4") == EXIT_OK
        assert all(row[2] == "4" for row in read_rows(out)[1:])
        assert json.loads(manifest_path(out).read_text())['master_seed'] == 99

    def test_entry_axis(self, small_config, tmp_path):
        out = tmp_path / "entry.csv"
        assert run(["sweep", "--config", small_config, "--axis", "alpha_entry", "--entry", "1,2",
                    "--values", "0:0.5:0.25", "--out", str(out), "--workers", "1"]) == EXIT_OK
        assert [row[0] for row in read_rows(out)[1:]] == ["0.000000", "0.250000", "0.500000"]

    def test_out_of_range_value(self, small_config, tmp_path, capsys):
        code = run(["sweep", "--config", small_config, "--axis", "channel_scalar", "--values", "0.5,1.5",
                    "--out", str(tmp_path / "x.csv")])
        assert code == EXIT_VALIDATION
        assert not (tmp_path / "x.csv").exists()

    def test_unwritable_output(self, small_config, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("")
        assert self.sweep(small_config, blocker / "out.csv") == EXIT_IO


class TestFigure:

    def test_figure4_cross_channel_off_never_connects(self, tmp_path):
        assert run(["figure", "--id", "4", "--trials", "5", "--out-dir", str(tmp_path), "--workers", "1"]) == EXIT_OK
        names = sorted(p.name for p in tmp_path.glob("*.csv"))
        assert names == ["figure4_K1_20.csv", "figure4_K1_25.csv", "figure4_K1_30.csv", "figure4_K1_35.csv"]
        for name in names:
            rows = read_rows(tmp_path / name)
            assert len(rows) == 22
            assert rows[1][0] == "0.000000"
            assert rows[1][3] == "0"
            assert rows[1][5] == "0.000000"
            assert manifest_path(tmp_path / name).exists()

    def test_figure1_files(self, tmp_path):
        assert run(["figure", "--id", "1", "--trials", "2", "--out-dir", str(tmp_path), "--workers", "1"]) == EXIT_OK
        for a12 in ("0.2", "0.4", "0.6"):
            rows = read_rows(tmp_path / f"figure1_alpha12_{a12}.csv")
            assert len(rows) == 22
            assert [row[0] for row in rows[1:]] == [str(k) for k in range(5, 26)]

    def test_worker_count_does_not_change_bytes(self, tmp_path):
        one, many = tmp_path / "one", tmp_path / "many"
        for target, workers in ((one, "1"), (many, "4")):
            assert run(["figure", "--id", "1", "--seed", "7", "--trials", "3",
                        "--out-dir", str(target), "--workers", workers]) == EXIT_OK
        for path in sorted(one.glob("*.csv")):
            assert path.read_bytes() == (many / path.name).read_bytes()

    def test_output_dir_from_environment(self, tmp_path, monkeypatch):
        monkeypatch.setenv("KEYGRAPH_OUTPUT_DIR", str(tmp_path / "env"))
        assert run(["figure", "--id", "2", "--trials", "1", "--workers", "1"]) == EXIT_OK
        assert len(list((tmp_path / "env").glob("figure2_*.csv"))) == 3

    def test_unknown_figure(self):
        with pytest.raises(SystemExit) as info:
            run(["figure", "--id", "5"])
        assert info.value.code == 2


class TestCheckScaling:

    def test_example_family(self, tmp_path, capsys):
        out = tmp_path / "scaling.csv"
        assert run(["check-scaling", "--out", str(out)]) == EXIT_OK
        assert "rho_hat=" in capsys.readouterr().out
        rows = read_rows(out)
        c_n = rows[0].index("c_n")
        assert [row[0] for row in rows[1:]] == ["1000", "10000", "100000", "1000000"]
        assert all(float(row[c_n]) > 1 for row in rows[1:])
        assert manifest_path(out).exists()

    def test_grid_with_one_rejected(self):
        assert run(["check-scaling", "--grid", "1,10,100"]) == EXIT_VALIDATION

    def test_fixed_family(self, figure1_config, capsys):
        code = run(["check-scaling", "--family", "fixed", "--config", figure1_config(0.2),
                    "--alpha-min-kind", "inverse-n", "--alpha-min-param", "5", "--grid", "100,1000,10000"])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert "trend edge_floor:" in out and "decreasing" in out
        assert "verdict" not in out

    def test_fixed_family_needs_config(self):
        assert run(["check-scaling", "--family", "fixed"]) == EXIT_VALIDATION


class TestOracle:

    def test_key_prob(self, capsys):
        assert run(["oracle", "key-prob", "--ki", "2", "--kj", "2", "--pool", "5"]) == EXIT_OK
        assert "exhaustive=7/10" in capsys.readouterr().out

    def test_pool_limit(self):
        assert run(["oracle", "key-prob", "--ki", "2", "--kj", "2", "--pool", "20"]) == EXIT_VALIDATION

    def test_components(self, small_config, capsys):
        assert run(["oracle", "components", "--config", small_config, "--trials", "3"]) == EXIT_OK
        assert "mismatches=0" in capsys.readouterr().out

    def test_edge_freq(self, small_config, capsys):
        assert run(["oracle", "edge-freq", "--config", small_config, "--samples", "20000"]) == EXIT_OK
        assert "expected=" in capsys.readouterr().out
