import csv
import io
import json
import math

import pytest

from melnikov_lab.cli import EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, main


def run_cli(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


class TestResonancesCommand:
    def test_inner_n1_table(self, capsys):
        code, out, _ = run_cli(capsys, ["resonances", "--omega", "1.0", "--m-max", "9"])
        assert code == EXIT_OK
        header, rows = parse_csv(out)
        assert header == ["family", "m", "n", "k", "period", "omega_check"]
        assert [int(r[1]) for r in rows] == [2, 3, 4, 5, 6, 7, 8, 9]
        ks = [float(r[3]) for r in rows]
        assert ks == sorted(ks)
        assert all(abs(float(r[5])) <= 1e-9 for r in rows)
        # full precision survives the round trip
        assert all(len(r[3].split("e")[0].rstrip("0")) >= 10 for r in rows)

    def test_empty_result_is_success(self, capsys):
        code, out, _ = run_cli(
            capsys, ["resonances", "--omega", "50.0", "--m-max", "3"]
        )
        assert code == EXIT_OK
        _, rows = parse_csv(out)
        assert rows == []

    def test_json_format(self, capsys):
        code, out, _ = run_cli(
            capsys, ["resonances", "--m-max", "3", "--format", "json"]
        )
        assert code == EXIT_OK
        records = json.loads(out)
        assert all(rec["family"] == "inner" for rec in records)

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "resonances.csv"
        code, out, _ = run_cli(
            capsys, ["resonances", "--m-max", "3", "--out", str(target)]
        )
        assert code == EXIT_OK
        assert out == ""
        header, _ = parse_csv(target.read_text())
        assert header[0] == "family"


class TestMelnikovCommand:
    def test_subharmonic_agreement(self, capsys):
        code, out, err = run_cli(
            capsys,
            [
                "melnikov", "--family", "inner", "--m", "3", "--n", "1",
                "--beta", "1", "--delta", "1", "--theta-points", "8",
            ],
        )
        assert code == EXIT_OK
        header, rows = parse_csv(out)
        assert header == ["theta", "quadrature", "closed_form", "difference"]
        assert len(rows) == 8
        assert all(abs(float(r[3])) <= 1e-8 for r in rows)
        assert "sup |quadrature - closed_form|" in err

    def test_homoclinic_agreement(self, capsys):
        code, out, _ = run_cli(
            capsys,
            [
                "melnikov", "--homoclinic", "--sign", "-1", "--beta", "1",
                "--delta", "1", "--theta-points", "8",
            ],
        )
        assert code == EXIT_OK
        _, rows = parse_csv(out)
        assert all(abs(float(r[3])) <= 1e-8 for r in rows)
        # sign -1 flips the cosine coefficient: theta = 0 below -8*delta
        assert float(rows[0][2]) < -8.0

    def test_unsolvable_resonance_exits_3(self, capsys):
        code, _, err = run_cli(
            capsys, ["melnikov", "--family", "inner", "--m", "1", "--n", "2"]
        )
        assert code == EXIT_NUMERIC
        assert "no resonance" in err

    def test_single_thread_env(self, capsys, monkeypatch):
        monkeypatch.setenv("MELNIKOV_LAB_THREADS", "1")
        code, out, _ = run_cli(
            capsys, ["melnikov", "--m", "3", "--theta-points", "4"]
        )
        assert code == EXIT_OK
        _, rows = parse_csv(out)
        assert len(rows) == 4


class TestContourCommand:
    def test_three_radii_match_closed_form(self, capsys):
        code, out, _ = run_cli(
            capsys,
            [
                "contour", "--family", "rotating+", "--m", "2", "--n", "1",
                "--theta-points", "4",
            ],
        )
        assert code == EXIT_OK
        header, rows = parse_csv(out)
        assert header == [
            "theta", "radius", "re_numeric", "im_numeric", "re_closed", "im_closed",
        ]
        assert len(rows) == 12  # 4 thetas x 3 radii
        assert len({r[1] for r in rows}) == 3
        for r in rows:
            assert abs(float(r[2]) - float(r[4])) <= 1e-8
            assert abs(float(r[3]) - float(r[5])) <= 1e-8


class TestCertifyCommand:
    def test_certificate_document(self, capsys):
        code, out, err = run_cli(
            capsys,
            [
                "certify", "--beta", "1", "--delta", "1", "--m-max", "5",
                "--theta-points", "16",
            ],
        )
        assert code == EXIT_OK
        cert = json.loads(out)
        assert cert["schema"] == "melnikov-cert/1"
        assert cert["prop_4a"]["status"] == "applies"
        assert cert["prop_4b"]["status"] == "applies"
        assert cert["prop_4c"]["status"] == "applies"
        assert not cert["chaos"]["condition_holds"]
        assert "prop 4a: applies" in err

    def test_zero_forcing_is_inconclusive(self, capsys):
        code, out, _ = run_cli(
            capsys,
            [
                "certify", "--beta", "0", "--delta", "1", "--m-max", "5",
                "--theta-points", "16",
            ],
        )
        assert code == EXIT_OK
        cert = json.loads(out)
        assert cert["prop_4a"]["status"] == "applies"
        assert cert["prop_4b"]["status"] == "inconclusive"
        assert cert["prop_4c"]["status"] == "inconclusive"

    def test_zero_damping_chaos(self, capsys):
        code, out, _ = run_cli(
            capsys,
            [
                "certify", "--beta", "1", "--delta", "0", "--m-max", "5",
                "--theta-points", "16",
            ],
        )
        assert code == EXIT_OK
        cert = json.loads(out)
        assert cert["prop_4a"]["status"] == "inconclusive"
        assert cert["prop_4c"]["status"] == "applies"
        assert cert["chaos"]["condition_holds"]


class TestVerifyCommand:
    def test_scaling_document(self, capsys):
        code, out, _ = run_cli(
            capsys,
            [
                "verify", "--family", "inner", "--m", "3", "--n", "1",
                "--beta", "1", "--delta", "0",
                "--eps", "1e-3", "5e-4",
            ],
        )
        assert code == EXIT_OK
        doc = json.loads(out)
        assert doc["simple_zero_hypothesis"]
        assert all(rec["converged"] for rec in doc["results"])
        assert all(rec["residual"] <= 1e-10 for rec in doc["results"])
        assert doc["scaling"]["within_band"]
        assert not doc["scaling"]["hypothesis_violated"]

    def test_explicit_theta0(self, capsys):
        code, out, _ = run_cli(
            capsys,
            [
                "verify", "--m", "3", "--delta", "0",
                "--theta0", str(math.pi / 2.0), "--eps", "1e-3",
            ],
        )
        assert code == EXIT_OK
        doc = json.loads(out)
        assert doc["theta0"] == pytest.approx(math.pi / 2.0)


class TestUsageErrors:
    @pytest.mark.parametrize(
        "argv",
        [
            ["resonances", "--omega", "-1"],
            ["melnikov", "--beta", "-2"],
            ["melnikov", "--m", "2", "--n", "4"],
            ["melnikov", "--m", "0"],
            ["contour", "--theta-points", "0"],
        ],
    )
    def test_bad_arguments_exit_2(self, capsys, argv):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == EXIT_USAGE
        assert "error" in capsys.readouterr().err

    def test_unknown_subcommand(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == EXIT_USAGE
