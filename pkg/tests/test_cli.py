"""End-to-end command-line tests via subprocess.

The golden path mirrors the hand derivation: conjugating y = 2x by
inversion gives y = x/2 on the inverted sample sites, and doing it
twice returns to the original file.  Determinism is asserted as byte
equality, not value closeness.
"""

import json
import subprocess
import sys

import numpy as np
import pytest

from bilip.serialize import load_cloud, load_map


def run_cli(*argv, cwd):
    return subprocess.run(
        [sys.executable, "-m", "bilip.cli", *argv],
        capture_output=True,
        text=True,
        cwd=cwd,
    )


def make_scaling(tmp_path, factor="2", n="40", name="scale.csv"):
    out = run_cli(
        "generate", "scaling", "--lambda", factor, "--n", n, "--output", name,
        cwd=tmp_path,
    )
    assert out.returncode == 0, out.stderr
    return tmp_path / name


class TestGoldenInversion:
    def test_inverted_scaling_is_the_halving_map(self, tmp_path):
        path = make_scaling(tmp_path)
        out = run_cli("invert", str(path), "--output", "inv.csv", cwd=tmp_path)
        assert out.returncode == 0, out.stderr
        m = load_map(tmp_path / "inv.csv")
        x, y = m.domain.points, m.codomain.points
        r = np.linalg.norm(x, axis=1)
        keep = r > 0.0
        residual = np.linalg.norm(y[keep] - x[keep] / 2.0, axis=1) / r[keep]
        assert residual.max() < 1e-10

    def test_invert_twice_returns_to_the_original(self, tmp_path):
        path = make_scaling(tmp_path)
        assert run_cli("invert", str(path), "--output", "inv.csv", cwd=tmp_path).returncode == 0
        assert run_cli("invert", "inv.csv", "--output", "back.csv", cwd=tmp_path).returncode == 0
        original = load_map(path)
        back = load_map(tmp_path / "back.csv")
        scale = np.maximum(np.linalg.norm(original.domain.points, axis=1), 1e-30)
        for side in ("domain", "codomain"):
            a = getattr(original, side).points
            b = getattr(back, side).points
            assert (np.linalg.norm(a - b, axis=1) / scale).max() < 1e-10
        assert back.fixes_origin == original.fixes_origin
        assert back.unbounded_domain == original.unbounded_domain

    def test_origin_violation_exits_3(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x1,x2,y1,y2\n0.0,0.0,5.0,0.0\n1.0,0.0,1.0,0.0\n2.0,0.0,2.0,0.0\n")
        meta = {
            "q1": 2, "q2": 2, "fixes_origin": False, "avoids_origin": False,
            "unbounded_domain": False, "ambient": "Affine",
        }
        (tmp_path / "bad.csv.meta.json").write_text(json.dumps(meta))
        out = run_cli("invert", "bad.csv", "--output", "nope.csv", cwd=tmp_path)
        assert out.returncode == 3
        assert "hypothesis" in out.stderr.lower()

    def test_cloud_inversion(self, tmp_path):
        assert run_cli(
            "generate", "ray", "--dim", "3", "--n", "30", "--output", "ray.csv",
            cwd=tmp_path,
        ).returncode == 0
        assert run_cli("invert", "ray.csv", "--output", "iray.csv", cwd=tmp_path).returncode == 0
        a = load_cloud(tmp_path / "ray.csv")
        b = load_cloud(tmp_path / "iray.csv")
        r = np.linalg.norm(a.points, axis=1)
        expected = a.points / (r**2)[:, None]
        assert np.allclose(b.points, expected, rtol=1e-12, atol=0.0)


class TestDistortion:
    def test_identity_fixture_reports_one(self, tmp_path):
        assert run_cli(
            "generate", "identity", "--n", "50", "--output", "id.csv", cwd=tmp_path
        ).returncode == 0
        out = run_cli("distortion", "id.csv", cwd=tmp_path)
        assert out.returncode == 0
        data = json.loads(out.stdout)
        assert data["bilip_constant"] == 1.0
        assert data["schema"] == 1

    def test_doubling_fixture_reports_two(self, tmp_path):
        path = make_scaling(tmp_path)
        out = run_cli("distortion", str(path), cwd=tmp_path)
        data = json.loads(out.stdout)
        assert data["bilip_constant"] == 2.0
        assert data["L_expand"] == 2.0
        assert data["L_contract"] == 0.5

    def test_shell_restriction_is_reported(self, tmp_path):
        assert run_cli(
            "generate", "radial-shell-1.25", "--n", "80", "--shell", "1:2",
            "--output", "shell.csv", cwd=tmp_path,
        ).returncode == 0
        out = run_cli("distortion", "shell.csv", "--shell", "1:1.5", cwd=tmp_path)
        assert out.returncode == 0
        data = json.loads(out.stdout)
        assert data["shell"] == "1:1.5"
        assert data["pairs_evaluated"] > 0

    def test_report_file_output(self, tmp_path):
        path = make_scaling(tmp_path)
        out = run_cli("distortion", str(path), "--output", "report.json", cwd=tmp_path)
        assert out.returncode == 0
        assert out.stdout == ""
        data = json.loads((tmp_path / "report.json").read_text())
        assert data["bilip_constant"] == 2.0


class TestCones:
    def test_ray_exchange_and_directions_file(self, tmp_path):
        assert run_cli(
            "generate", "spiral", "--n", "90", "--output", "sp.csv", cwd=tmp_path
        ).returncode == 0
        out = run_cli(
            "cones", "sp.csv", "--directions", "dirs.csv", cwd=tmp_path
        )
        assert out.returncode == 0
        data = json.loads(out.stdout)
        assert data["exchange"]["infinity_to_origin"] <= 1e-10
        assert data["exchange"]["origin_to_infinity"] <= 1e-10
        dirs = load_cloud(tmp_path / "dirs.csv")
        assert np.allclose(np.linalg.norm(dirs.points, axis=1), 1.0, atol=1e-12)

    def test_empty_link_band_exits_4(self, tmp_path):
        assert run_cli(
            "generate", "ray", "--n", "30", "--output", "ray.csv", cwd=tmp_path
        ).returncode == 0
        out = run_cli(
            "cones", "ray.csv", "--band", "0.01", "--shell", "100000:1000000",
            cwd=tmp_path,
        )
        assert out.returncode == 4

    def test_band_without_shell_exits_2(self, tmp_path):
        assert run_cli(
            "generate", "ray", "--n", "30", "--output", "ray.csv", cwd=tmp_path
        ).returncode == 0
        out = run_cli("cones", "ray.csv", "--band", "0.1", cwd=tmp_path)
        assert out.returncode == 2


class TestVerifyCommand:
    def test_cone_exchange_suite_passes(self, tmp_path):
        out = run_cli("verify", "cone-exchange", cwd=tmp_path)
        assert out.returncode == 0
        data = json.loads(out.stdout)
        assert data["passed"] is True
        assert data["suites"][0]["suite"] == "cone-exchange"

    def test_renormalized_chart_gate_fails_honestly(self, tmp_path):
        out = run_cli(
            "verify", "identities", "--pairs", "200", "--renormalize-beta",
            cwd=tmp_path,
        )
        assert out.returncode == 1
        assert "renormalized" in out.stderr
        data = json.loads(out.stdout)
        assert data["passed"] is False


class TestDeterminism:
    def test_random_strategy_reports_are_byte_identical(self, tmp_path):
        path = make_scaling(tmp_path)
        args = ("distortion", str(path), "--strategy", "random", "--pairs", "3000", "--seed", "11")
        first = run_cli(*args, cwd=tmp_path)
        second = run_cli(*args, cwd=tmp_path)
        assert first.returncode == second.returncode == 0
        assert first.stdout == second.stdout

    def test_generated_files_are_byte_identical(self, tmp_path):
        args = ("generate", "shear", "--n", "60", "--seed", "5")
        assert run_cli(*args, "--output", "a.csv", cwd=tmp_path).returncode == 0
        assert run_cli(*args, "--output", "b.csv", cwd=tmp_path).returncode == 0
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
        a_meta = (tmp_path / "a.csv.meta.json").read_bytes()
        b_meta = (tmp_path / "b.csv.meta.json").read_bytes()
        assert a_meta == b_meta


class TestUsageErrors:
    def test_unknown_fixture_exits_2(self, tmp_path):
        out = run_cli("generate", "klein-bottle", "--output", "x.csv", cwd=tmp_path)
        assert out.returncode == 2

    def test_malformed_shell_exits_2(self, tmp_path):
        path = make_scaling(tmp_path)
        out = run_cli("distortion", str(path), "--shell", "5", cwd=tmp_path)
        assert out.returncode == 2

    def test_missing_input_exits_2(self, tmp_path):
        out = run_cli("distortion", "ghost.csv", cwd=tmp_path)
        assert out.returncode == 2

    def test_scaling_without_lambda_exits_2(self, tmp_path):
        out = run_cli("generate", "scaling", "--output", "s.csv", cwd=tmp_path)
        assert out.returncode == 2
