"""Command-line front-end: verbs, CSV contracts, exit codes, determinism."""
import pytest

from dcf11b import cli, sim, solver
from dcf11b.scenario_io import parse_scenario_file


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def csv_rows(text):
    lines = [l for l in text.strip().splitlines() if l]
    header = lines[0].split(",")
    return header, [line.split(",") for line in lines[1:]]


@pytest.fixture
def default_file(tmp_path, capsys):
    path = tmp_path / "cell.ini"
    code = cli.main(["--dump-defaults", "--out", str(path)])
    capsys.readouterr()
    assert code == 0
    return path


class TestDumpDefaults:
    def test_round_trips_through_parser(self, default_file):
        bundle = parse_scenario_file(default_file)
        assert bundle.scenario.n_stations == 1
        assert bundle.scenario.params.w0 == 32


class TestSolve:
    def test_single_saturated_station_tau(self, capsys, default_file):
        code, out, _ = run_cli(capsys, "solve", "--scenario", str(default_file))
        assert code == 0
        header, rows = csv_rows(out.split("\n\n")[0])
        tau = float(rows[0][header.index("tau")])
        assert tau == pytest.approx(2.0 / 33.0, abs=1e-9)

    def test_preset_matches_api(self, capsys):
        code, out, _ = run_cli(capsys, "solve", "--scenario", "scenario2")
        assert code == 0
        from dcf11b import presets

        scn = presets.scenario2().scenario
        op = solver.solve_operating_point(scn)
        rep = solver.aggregate_throughput(op, scn)
        agg_line = [l for l in out.splitlines() if l.startswith("aggregate_bps,")][0]
        assert float(agg_line.split(",")[1]) == pytest.approx(rep.aggregate_bps, rel=1e-12)

    def test_malformed_file_exits_two_with_line(self, capsys, tmp_path):
        bad = tmp_path / "bad.ini"
        bad.write_text("[station.1]\nrate_class = 4\nwhatever = 1\n")
        code, _, err = run_cli(capsys, "solve", "--scenario", str(bad))
        assert code == 2
        assert "line 3" in err

    def test_missing_file_exits_two(self, capsys):
        code, _, err = run_cli(capsys, "solve", "--scenario", "no-such-file.ini")
        assert code == 2

    def test_unsupported_basic_rate_exits_four(self, capsys, tmp_path):
        f = tmp_path / "phy.ini"
        f.write_text(
            "[network]\nbasic_rate = 5500000.0\n\n"
            "[propagation]\nchannel_model = rayleigh\n\n"
            "[station.1]\nrate_class = 4\nchannel = distance:10\n"
        )
        code, _, err = run_cli(capsys, "solve", "--scenario", str(f))
        assert code == 4
        assert "control modulation" in err


class TestSweep:
    def test_lambda_all_csv_shape_and_determinism(self, capsys):
        args = (
            "sweep", "--scenario", "scenario2", "--axis", "lambda:all",
            "--from", "10", "--to", "100", "--steps", "4",
        )
        code, out1, _ = run_cli(capsys, *args)
        assert code == 0
        code, out2, _ = run_cli(capsys, *args)
        assert out1 == out2
        header, rows = csv_rows(out1)
        assert header[0] == "lambda_pkt_s"
        assert header[-3:] == ["aggregate_bps", "linear_model_bps", "in_region_d"]
        assert len(rows) == 4
        assert all(len(r) == len(header) for r in rows)
        assert float(rows[0][0]) == 10.0 and float(rows[-1][0]) == 100.0

    def test_lambda_single_station_axis(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "sweep", "--scenario", "scenario1", "--axis", "lambda:10",
            "--from", "100", "--to", "8000", "--steps", "3",
        )
        assert code == 0
        header, rows = csv_rows(out)
        aggs = [float(r[header.index("aggregate_bps")]) for r in rows]
        assert aggs[-1] < aggs[0]  # loading the slow station drags the cell

    def test_distance_axis_switches_rate(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "sweep", "--scenario", "scenario3", "--axis", "distance:3",
            "--from", "5", "--to", "60", "--steps", "8",
        )
        assert code == 0
        header, rows = csv_rows(out)
        classes = [int(r[header.index("mover_rate_class")]) for r in rows]
        assert classes[0] == 4
        assert classes[-1] < 4
        assert all(b <= a for a, b in zip(classes, classes[1:]))

    def test_bad_axis_exits_two(self, capsys):
        code, _, err = run_cli(
            capsys,
            "sweep", "--scenario", "scenario2", "--axis", "power:1",
            "--from", "1", "--to", "2", "--steps", "2",
        )
        assert code == 2


class TestSim:
    def test_deviation_column_and_determinism(self, capsys):
        args = (
            "sim", "--scenario", "scenario2", "--seeds", "1", "2",
            "--duration", "5",
        )
        code, out1, _ = run_cli(capsys, *args)
        assert code == 0
        code, out2, _ = run_cli(capsys, *args)
        assert out1 == out2
        header, rows = csv_rows(out1)
        assert header[-1] == "deviation"
        assert rows[-1][0] == "aggregate"
        dev = float(rows[-1][-1])
        assert abs(dev) < 0.25  # short runs, loose sanity bound


class TestCriticalRates:
    def test_published_values_within_two_percent(self, capsys, default_file):
        code, out, _ = run_cli(capsys, "critical-rates", "--scenario", str(default_file))
        assert code == 0
        header, rows = csv_rows(out)
        got = {int(r[0]): float(r[header.index("lambda_c_pkt_s")]) for r in rows}
        published = {1: 107.4, 2: 196.5, 3: 416.3, 4: 612.0}
        for r, want in published.items():
            assert abs(got[r] - want) / want <= 0.02


class TestPhyCurves:
    def test_snr_axis_shape_and_monotonicity(self, capsys, default_file):
        code, out, _ = run_cli(
            capsys,
            "phy-curves", "--scenario", str(default_file),
            "--rate-class", "4", "--channel", "rayleigh",
            "--from", "0", "--to", "30", "--steps", "7",
        )
        assert code == 0
        header, rows = csv_rows(out)
        assert header == ["snr_db", "ber", "fer"]
        bers = [float(r[1]) for r in rows]
        fers = [float(r[2]) for r in rows]
        assert all(0.0 <= v <= 1.0 for v in bers + fers)
        assert all(b <= a for a, b in zip(bers, bers[1:]))
        assert all(b <= a + 1e-12 for a, b in zip(fers, fers[1:]))

    def test_distance_axis(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "phy-curves", "--scenario", "scenario3",
            "--rate-class", "4", "--channel", "awgn", "--axis", "distance",
            "--from", "5", "--to", "40", "--steps", "6",
        )
        assert code == 0
        header, rows = csv_rows(out)
        assert header == ["distance_m", "snr_db", "ber", "fer"]
        fers = [float(r[3]) for r in rows]
        assert all(b >= a - 1e-12 for a, b in zip(fers, fers[1:]))


class TestOutFile:
    def test_out_writes_identical_bytes(self, capsys, tmp_path, default_file):
        code, out, _ = run_cli(capsys, "critical-rates", "--scenario", str(default_file))
        target = tmp_path / "rates.csv"
        code2 = cli.main(
            ["critical-rates", "--scenario", str(default_file), "--out", str(target)]
        )
        capsys.readouterr()
        assert code == code2 == 0
        assert target.read_text() == out
