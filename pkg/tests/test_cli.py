import json

import pytest

from lightsqec.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture()
def code3_json(tmp_path, capsys):
    path = tmp_path / "d3.json"
    assert main(["generate-code", "--d", "3", "--out", str(path)]) == 0
    capsys.readouterr()
    return str(path)


class TestGenerateCode:
    def test_d3_has_seven_qubits(self, capsys):
        code, out, _ = run_cli(capsys, "generate-code", "--d", "3")
        assert code == 0
        data = json.loads(out)
        assert data["n_qubits"] == 7
        assert data["H"] == ["1001011", "0101101", "0010111"]
        assert len(data["faces"]) == 3

    def test_byte_identical_reruns(self, capsys):
        _, first, _ = run_cli(capsys, "generate-code", "--d", "5")
        _, second, _ = run_cli(capsys, "generate-code", "--d", "5")
        assert first == second

    def test_bad_distance_is_runtime_error(self, capsys):
        code, _, err = run_cli(capsys, "generate-code", "--d", "4")
        assert code == 2
        assert "error" in err


class TestDecode:
    def test_weight_one_result(self, capsys, code3_json):
        code, out, _ = run_cli(
            capsys, "decode", "--code", code3_json, "--syndrome", "100"
        )
        assert code == 0
        data = json.loads(out)
        assert data["weight"] == 1
        assert data["estimate"] == "1000000"
        assert data["status"] == "optimal"
        assert data["time_us"] >= 0

    def test_oracle_mode(self, capsys, code3_json):
        code, out, _ = run_cli(
            capsys, "decode", "--code", code3_json, "--syndrome", "110", "--oracle"
        )
        assert code == 0
        assert json.loads(out)["estimate"] == "0001000"

    def test_puzzle_mode(self, capsys, tmp_path):
        puzzle = tmp_path / "puzzle.txt"
        puzzle.write_text("2 1\n0 1\n1\n")
        code, out, _ = run_cli(capsys, "decode", "--puzzle", str(puzzle))
        assert code == 0
        assert json.loads(out)["weight"] == 1

    def test_code_and_puzzle_are_mutually_exclusive(self, capsys, code3_json):
        code, _, err = run_cli(
            capsys,
            "decode",
            "--code",
            code3_json,
            "--puzzle",
            "x.txt",
            "--syndrome",
            "100",
        )
        assert code == 1

    def test_missing_syndrome_is_usage_error(self, capsys, code3_json):
        code, _, err = run_cli(capsys, "decode", "--code", code3_json)
        assert code == 1
        assert "syndrome" in err

    def test_missing_file_is_runtime_error(self, capsys):
        code, _, _ = run_cli(
            capsys, "decode", "--code", "missing.json", "--syndrome", "1"
        )
        assert code == 2

    def test_bare_check_matrix_json(self, capsys, tmp_path):
        # Arbitrary H without lattice metadata decodes through the same flag.
        path = tmp_path / "bare.json"
        path.write_text(
            json.dumps({"n_qubits": 7, "H": ["1001011", "0101101", "0010111"]})
        )
        code, out, _ = run_cli(capsys, "decode", "--code", str(path), "--syndrome", "111")
        assert code == 0
        assert json.loads(out)["estimate"] == "0000001"


class TestDistance:
    def test_d3(self, capsys, code3_json):
        code, out, _ = run_cli(capsys, "distance", "--code", code3_json)
        assert code == 0
        assert json.loads(out) == {"distance": 3}


class TestExportWcnf:
    def test_writes_new_format(self, capsys, code3_json, tmp_path):
        out_path = tmp_path / "inst.wcnf"
        code, _, _ = run_cli(
            capsys,
            "export-wcnf",
            "--code",
            code3_json,
            "--syndrome",
            "100",
            "--out",
            str(out_path),
        )
        assert code == 0
        lines = out_path.read_text().splitlines()
        assert any(line.startswith("h ") for line in lines)
        assert sum(line.startswith("1 -") for line in lines) == 7


class TestSimulate:
    def test_zero_noise_gives_zero_ler(self, capsys, tmp_path):
        out_path = tmp_path / "results.csv"
        code, out, _ = run_cli(
            capsys,
            "simulate",
            "--d",
            "3",
            "--p",
            "0",
            "--samples",
            "100",
            "--seed",
            "1",
            "--out",
            str(out_path),
        )
        assert code == 0
        assert "seed=1" in out
        lines = out_path.read_text().splitlines()
        assert lines[0].startswith("distance,p,samples")
        assert lines[1].split(",")[5] == "0.0"

    def test_probability_grid_parsing(self, capsys, tmp_path):
        out_path = tmp_path / "grid.csv"
        code, _, _ = run_cli(
            capsys,
            "simulate",
            "--d",
            "3",
            "--p",
            "0.01:0.03:0.01",
            "--samples",
            "10",
            "--seed",
            "0",
            "--out",
            str(out_path),
        )
        assert code == 0
        rows = out_path.read_text().splitlines()[1:]
        assert [row.split(",")[1] for row in rows] == ["0.01", "0.02", "0.03"]

    def test_reruns_are_identical_up_to_timings(self, capsys, tmp_path):
        # Timing measurements are the one timestamp-like column; everything
        # else must reproduce byte for byte from (flags, seed).
        paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for path in paths:
            assert (
                main(
                    [
                        "simulate",
                        "--d",
                        "3",
                        "--p",
                        "0.05,0.1",
                        "--samples",
                        "200",
                        "--seed",
                        "7",
                        "--out",
                        str(path),
                    ]
                )
                == 0
            )
        capsys.readouterr()

        def strip_timing(path):
            lines = path.read_text().splitlines()
            timing_col = lines[0].split(",").index("mean_decode_us")
            rows = []
            for line in lines:
                cells = line.split(",")
                cells[timing_col] = ""
                rows.append(",".join(cells))
            return rows

        assert strip_timing(paths[0]) == strip_timing(paths[1])

    def test_pheno_mode(self, capsys, tmp_path):
        out_path = tmp_path / "pheno.csv"
        code, _, _ = run_cli(
            capsys,
            "simulate",
            "--d",
            "3",
            "--p",
            "0.01",
            "--samples",
            "50",
            "--noise",
            "pheno",
            "--rounds",
            "2",
            "--seed",
            "3",
            "--out",
            str(out_path),
        )
        assert code == 0

    def test_unknown_flag_is_usage_error(self, capsys):
        code, _, _ = run_cli(capsys, "simulate", "--nope", "1")
        assert code == 1


class TestThresholdFit:
    def test_fit_from_csv(self, capsys, tmp_path):
        from lightsqec.sim import write_csv
        from test_analysis import synthetic_records

        csv_path = tmp_path / "records.csv"
        write_csv(str(csv_path), synthetic_records(noise_seed=4))
        fit_path = tmp_path / "fit.json"
        code, _, _ = run_cli(
            capsys, "threshold-fit", "--in", str(csv_path), "--out", str(fit_path)
        )
        assert code == 0
        fit = json.loads(fit_path.read_text())
        assert set(fit) == {"p_th", "nu", "A", "B", "C", "residual", "n_points"}
        assert abs(fit["p_th"] - 0.10) < 0.005

    def test_missing_input_is_runtime_error(self, capsys):
        code, _, _ = run_cli(capsys, "threshold-fit", "--in", "missing.csv")
        assert code == 2


class TestUsage:
    def test_no_subcommand(self, capsys):
        assert run_cli(capsys)[0] == 1

    def test_unknown_subcommand(self, capsys):
        assert run_cli(capsys, "frobnicate")[0] == 1

    def test_help_exits_zero(self, capsys):
        assert run_cli(capsys, "--help")[0] == 0
