"""Command-line interface: outputs, exit codes, determinism."""

import json
import math

import pytest

from robin_spectral import cli
from robin_spectral.fem_solver import disk_mesh, save_mesh


def run(capsys, argv):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestZeros:
    def test_three_dimensional_half_pi(self, capsys):
        code, out, _ = run(capsys, ["zeros", "--dim", "3", "--sigma", "1", "--l", "0", "--count", "1"])
        assert code == 0
        row = out.strip().splitlines()[1].split(",")
        assert float(row[1]) == pytest.approx(math.pi / 2.0, abs=1e-7)
        assert abs(float(row[2])) < 1e-10

    def test_planar_value(self, capsys):
        code, out, _ = run(capsys, ["zeros", "--dim", "2", "--sigma", "1", "--count", "1"])
        assert code == 0
        assert float(out.strip().splitlines()[1].split(",")[1]) == pytest.approx(
            1.2558, abs=1e-3
        )

    def test_json_schema(self, capsys):
        code, out, _ = run(
            capsys, ["zeros", "--dim", "2", "--sigma", "2", "--count", "2", "--format", "json"]
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["schema"] == "robin-spectral/1"
        assert len(payload["zeros"]) == 2
        assert payload["zeros"][0]["k"] < payload["zeros"][1]["k"]

    def test_negative_sigma_is_usage_error(self, capsys):
        code, _, err = run(capsys, ["zeros", "--dim", "2", "--sigma", "-1"])
        assert code == 2
        assert "sigma" in err


class TestRatioCurve:
    def test_csv_columns_and_tail(self, capsys):
        code, out, _ = run(
            capsys,
            ["ratio-curve", "--dim", "2", "--sigma-min", "0.01", "--sigma-max", "100",
             "--steps", "33"],
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "sigma,alpha,beta,ratio,dalpha,dbeta"
        last_ratio = float(lines[-1].split(",")[3])
        assert last_ratio == pytest.approx(2.5387, rel=0.03)

    def test_row_at_sigma_one(self, capsys):
        code, out, _ = run(
            capsys,
            ["ratio-curve", "--dim", "2", "--sigma-min", "0.01", "--sigma-max", "100",
             "--steps", "65"],
        )
        assert code == 0
        rows = [line.split(",") for line in out.strip().splitlines()[1:]]
        nearest = min(rows, key=lambda r: abs(float(r[0]) - 1.0))
        assert float(nearest[3]) == pytest.approx(3.66726, abs=1e-4)

    def test_monotone_column(self, capsys):
        code, out, _ = run(capsys, ["ratio-curve", "--dim", "3", "--steps", "16"])
        assert code == 0
        ratios = [float(line.split(",")[3]) for line in out.strip().splitlines()[1:]]
        assert all(a > b for a, b in zip(ratios, ratios[1:]))

    def test_inversion_exits_three(self, capsys, monkeypatch):
        import robin_spectral.ratio_analysis as ra

        original = cli.ratio_curve

        def scrambled(dim, lo, hi, steps):
            pts = original(dim, lo, hi, steps)
            return pts[::-1]

        monkeypatch.setattr(cli, "ratio_curve", scrambled)
        code, _, err = run(capsys, ["ratio-curve", "--dim", "2", "--steps", "8"])
        assert code == 3
        assert "decreasing" in err

    def test_svg_output(self, capsys):
        code, out, _ = run(capsys, ["ratio-curve", "--dim", "2", "--steps", "12", "--format", "svg"])
        assert code == 0
        assert out.startswith("<svg")
        assert "polyline" in out and "stroke-dasharray" in out

    def test_bad_range_exits_two(self, capsys):
        code, _, _ = run(capsys, ["ratio-curve", "--sigma-min", "10", "--sigma-max", "1"])
        assert code == 2


class TestTrial:
    def test_columns_monotone_and_residual(self, capsys):
        code, out, _ = run(capsys, ["trial", "--dim", "2", "--sigma", "1", "--samples", "256"])
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "r,w,q,B"
        assert lines[-1].startswith("# rayleigh_identity_residual = ")
        residual = float(lines[-1].split("=")[1])
        assert residual <= 1e-8
        rows = [list(map(float, line.split(","))) for line in lines[1:-1]]
        w = [r[1] for r in rows]
        b = [r[3] for r in rows]
        assert all(x < y for x, y in zip(w, w[1:]))
        assert all(x > y for x, y in zip(b, b[1:]))

    def test_bad_samples_exits_two(self, capsys):
        code, _, _ = run(capsys, ["trial", "--dim", "2", "--sigma", "1", "--samples", "4"])
        assert code == 2


class TestVerify:
    def test_disk_json(self, capsys):
        code, out, _ = run(capsys, ["verify", "--shape", "disk", "--sigma", "1", "--h", "0.12"])
        assert code == 0
        payload = json.loads(out)
        assert payload["schema"] == "robin-spectral/1"
        assert payload["regime"] == "thm11"
        assert payload["ratio"] == pytest.approx(3.667, abs=2e-2)
        assert payload["bound_holds"] is True
        assert payload["near_equality"] is True
        assert payload["chiti_regime"] in ("dominates", "single_crossing")
        for key in ("mu1", "mu2", "R", "R_tilde", "lemma31_max_violation",
                    "faber_krahn_ok", "eps_discr"):
            assert key in payload

    def test_mesh_file_input(self, capsys, tmp_path):
        path = tmp_path / "disk.txt"
        save_mesh(disk_mesh(0.12), path)
        code, out, _ = run(capsys, ["verify", "--mesh", str(path), "--sigma", "1"])
        assert code == 0
        assert json.loads(out)["bound_holds"] is True

    def test_shape_and_mesh_conflict(self, capsys):
        code, _, err = run(capsys, ["verify", "--shape", "disk", "--mesh", "x", "--sigma", "1"])
        assert code == 2
        assert "exactly one" in err

    def test_bound_violation_exits_four(self, capsys, monkeypatch):
        bundle = None

        def fake_verify_domain(shape, sigma, h):
            nonlocal bundle
            from robin_spectral.fem_solver import verify_domain

            real = verify_domain(shape, sigma, h)
            forced = real.comparison.__class__(
                **{**real.comparison.__dict__, "holds": False}
            )
            bundle = real.__class__(**{**real.__dict__, "comparison": forced})
            return bundle

        monkeypatch.setattr(cli, "verify_domain", fake_verify_domain)
        code, out, _ = run(capsys, ["verify", "--shape", "disk", "--sigma", "1", "--h", "0.2"])
        assert code == 4
        assert json.loads(out)["bound_holds"] is False

    def test_unknown_shape_exits_two(self, capsys):
        code, _, _ = run(capsys, ["verify", "--shape", "heptagon", "--sigma", "1"])
        assert code == 2


class TestSweep:
    def test_square_sweep_decreasing(self, capsys):
        code, out, _ = run(
            capsys,
            ["sweep-boundary-max", "--shape", "square", "--sigmas", "1,10,100", "--h", "0.08"],
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "sigma,u_1pM,u_1M,R,R_tilde"
        values = [float(line.split(",")[1]) for line in lines[1:]]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_disk_radii_agree(self, capsys):
        code, out, _ = run(
            capsys,
            ["sweep-boundary-max", "--shape", "disk", "--sigmas", "1,10", "--h", "0.08"],
        )
        assert code == 0
        for line in out.strip().splitlines()[1:]:
            parts = [float(v) for v in line.split(",")]
            assert parts[4] == pytest.approx(parts[3], rel=0.08)

    def test_empty_sigmas_exits_two(self, capsys):
        code, _, _ = run(capsys, ["sweep-boundary-max", "--shape", "square", "--sigmas", ","])
        assert code == 2


class TestContract:
    def test_deterministic_output(self, capsys):
        argv = ["ratio-curve", "--dim", "2", "--steps", "16"]
        _, first, _ = run(capsys, argv)
        _, second, _ = run(capsys, argv)
        assert first == second

    def test_deterministic_verify(self, capsys):
        argv = ["verify", "--shape", "square", "--sigma", "1", "--h", "0.15"]
        _, first, _ = run(capsys, argv)
        _, second, _ = run(capsys, argv)
        assert first == second

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / "curve.csv"
        code, out, _ = run(capsys, ["ratio-curve", "--steps", "8", "--out", str(path)])
        assert code == 0
        assert out == ""
        assert path.read_text().startswith("sigma,")

    def test_missing_command_exits_two(self, capsys):
        assert run(capsys, [])[0] == 2

    def test_unknown_flag_exits_two(self, capsys):
        assert run(capsys, ["zeros", "--sigma", "1", "--bogus"])[0] == 2
