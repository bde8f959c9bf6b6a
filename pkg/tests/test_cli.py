import csv
import io
import json
import math
import pathlib
import subprocess
import sys

import numpy as np
import pytest

from optosqueeze.cli import EXIT_INPUT, EXIT_OK, EXIT_PHYSICS, main
from optosqueeze.config import dump_config, load_config

GOLDEN = pathlib.Path(__file__).parent / "golden"


def natural_cfg(tmp_path, name="run.cfg", **values):
    base = dict(omega_m=1.0, C_D=0.3, C_S=0.4, n_thermal=0.0, t_end=10.0, n_points=101)
    base.update(values)
    lines = ['units = "natural"'] + [f"{k} = {json.dumps(v)}" for k, v in base.items()]
    path = tmp_path / name
    path.write_text("\n".join(lines) + "\n")
    return str(path)


def run(tmp_path, *argv):
    out = tmp_path / "out"
    code = main([*argv, "--out", str(out)])
    return code, out


def read_pairs(path):
    with open(path) as fh:
        return {row["key"]: row["value"] for row in csv.DictReader(fh)}


def read_table(path):
    with open(path) as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array(rows[1:], dtype=float)


class TestDerive:
    def test_fig2(self, tmp_path):
        code, out = run(tmp_path, "derive", "--config", "fig2.cfg")
        assert code == EXIT_OK
        d = read_pairs(out / "derive.csv")
        assert d["regime"] == "BoundOscillator"
        assert 5e8 <= abs(float(d["two_C_D_over_omega_m"])) <= 2e10
        assert 2.8 <= float(d["max_abs_kappa"]) <= 5.2

    def test_zero_power(self, tmp_path, fig2_config):
        cfg = fig2_config
        lines = dump_config(cfg).splitlines()
        text = "\n".join(line.split("=")[0] + '= "0 W"' if line.startswith("power_") else line for line in lines)
        p = tmp_path / "dark.cfg"
        p.write_text(text)
        code, out = run(tmp_path, "derive", "--config", str(p))
        assert code == EXIT_OK
        d = read_pairs(out / "derive.csv")
        assert float(d["C_D"]) == 0 and float(d["C_S"]) == 0
        assert float(d["chi"]) == pytest.approx(cfg.omega_m, rel=1e-15)

    def test_json_format(self, tmp_path):
        code, out = run(tmp_path, "derive", "--config", "toy.cfg", "--format", "json")
        assert code == EXIT_OK
        d = json.loads((out / "derive.json").read_text())
        assert d["chi"] == pytest.approx(math.sqrt(1.8), rel=1e-15)

    def test_inverted_is_reported(self, tmp_path):
        code, out = run(tmp_path, "derive", "--config", natural_cfg(tmp_path, C_S=-0.7))
        assert code == EXIT_OK
        assert read_pairs(out / "derive.csv")["regime"] == "InvertedOscillator"


class TestInputErrors:
    def test_missing_file(self, tmp_path):
        assert run(tmp_path, "derive", "--config", str(tmp_path / "nope.cfg"))[0] == EXIT_INPUT

    def test_bad_value(self, tmp_path, capsys):
        assert run(tmp_path, "derive", "--config", natural_cfg(tmp_path, omega_m=-1.0))[0] == EXIT_INPUT
        assert "omega_m" in capsys.readouterr().err

    def test_parse_error(self, tmp_path):
        p = tmp_path / "bad.cfg"
        p.write_text("units = \n")
        assert run(tmp_path, "derive", "--config", str(p))[0] == EXIT_INPUT

    def test_bad_seed(self, tmp_path):
        assert run(tmp_path, "thermal", "--config", "toy.cfg", "--seed", "-3")[0] == EXIT_INPUT

    def test_unknown_subcommand(self):
        with pytest.raises(SystemExit) as exc:
            main(["launch", "--config", "toy.cfg"])
        assert exc.value.code == 2


class TestEvolve:
    def test_free_mirror_limit(self, tmp_path):
        cfg = natural_cfg(tmp_path, C_S=0.0, C_D=0.3, t_end=2 * math.pi, n_points=401)
        code, out = run(tmp_path, "evolve", "--config", cfg)
        assert code == EXIT_OK
        cols, data = read_table(out / "evolve.csv")
        abs_nu = data[:, cols.index("abs_nu")]
        assert abs_nu.max() == pytest.approx(2 * 0.3, rel=1e-12)
        assert np.all(data[:, cols.index("abs_kappa")] == 0)

    def test_no_displacement(self, tmp_path):
        code, out = run(tmp_path, "evolve", "--config", natural_cfg(tmp_path, C_D=0.0))
        cols, data = read_table(out / "evolve.csv")
        assert code == EXIT_OK and np.all(data[:, cols.index("abs_nu")] == 0)

    def test_inverted_refused(self, tmp_path):
        assert run(tmp_path, "evolve", "--config", natural_cfg(tmp_path, C_S=-0.7))[0] == EXIT_PHYSICS

    def test_rerun_byte_identical(self, tmp_path):
        a = tmp_path / "a"
        b = tmp_path / "b"
        assert main(["evolve", "--config", "toy.cfg", "--out", str(a)]) == EXIT_OK
        assert main(["evolve", "--config", "toy.cfg", "--out", str(b)]) == EXIT_OK
        assert (a / "evolve.csv").read_bytes() == (b / "evolve.csv").read_bytes()


class TestOracle:
    def test_toy_passes(self, tmp_path, capsys):
        code, out = run(tmp_path, "oracle", "--config", "toy.cfg")
        assert code == EXIT_OK
        d = read_pairs(out / "oracle.csv")
        assert d["status"] == "PASS"
        assert float(d["max_displacement_residual"]) < 1e-8
        assert (out / "oracle_residuals.csv").exists()

    def test_fig2_refused(self, tmp_path, capsys):
        assert run(tmp_path, "oracle", "--config", "fig2.cfg")[0] == EXIT_PHYSICS
        assert "N/4" in capsys.readouterr().err

    def test_zero_couplings_small_basis(self, tmp_path):
        cfg = natural_cfg(tmp_path, C_D=0.0, C_S=0.0, N_list=[4, 5])
        code, out = run(tmp_path, "oracle", "--config", cfg)
        assert code == EXIT_OK
        assert read_pairs(out / "oracle.csv")["status"] == "PASS"


class TestThermal:
    def test_fig2(self, tmp_path):
        code, out = run(tmp_path, "thermal", "--config", "fig2.cfg")
        assert code == EXIT_OK
        d = read_pairs(out / "thermal.csv")
        assert float(d["n_T"]) == pytest.approx(8.3e5, rel=0.01)
        assert float(d["R"]) == pytest.approx(
            math.sqrt((2 * float(d["n_T"]) + 1) * 15707.963267948966**2 / 6523865851597.3174), rel=1e-6
        )

    def test_ratio_0_15(self, tmp_path):
        C_S = (1 / 0.15**2 - 1) / 2
        code, out = run(tmp_path, "thermal", "--config", natural_cfg(tmp_path, C_S=C_S))
        assert code == EXIT_OK
        d = read_pairs(out / "thermal.csv")
        assert float(d["R"]) == pytest.approx(0.15, rel=1e-12)
        assert float(d["squeezing_db"]) == pytest.approx(8.2, abs=0.05)

    def test_inverted_refused(self, tmp_path):
        assert run(tmp_path, "thermal", "--config", natural_cfg(tmp_path, C_S=-0.6))[0] == EXIT_PHYSICS

    def test_monte_carlo_needs_damping(self, tmp_path):
        cfg = natural_cfg(tmp_path, C_S=0.4, n_trajectories=10, damping=0.0)
        assert run(tmp_path, "thermal", "--config", cfg)[0] == EXIT_PHYSICS

    def test_step_size_refused(self, tmp_path):
        cfg = natural_cfg(tmp_path, C_S=1.5, n_trajectories=10, damping=0.05, dt=0.5, t_final=10.0)
        assert run(tmp_path, "thermal", "--config", cfg)[0] == EXIT_INPUT

    def test_small_monte_carlo_reproducible(self, tmp_path):
        cfg = natural_cfg(tmp_path, C_S=1.5, n_trajectories=200, damping=0.5, dt=0.01, t_final=20.0)
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(["thermal", "--config", cfg, "--out", str(a), "--seed", "9"]) == EXIT_OK
        assert main(["thermal", "--config", cfg, "--out", str(b), "--seed", "9"]) == EXIT_OK
        assert (a / "thermal.csv").read_bytes() == (b / "thermal.csv").read_bytes()
        assert read_pairs(a / "thermal.csv")["mc_seed"] == "9"


class TestFigures:
    def test_golden(self, tmp_path):
        code, out = run(tmp_path, "figures", "--config", "fig2.cfg")
        assert code == EXIT_OK
        for name in ("fig2_displacement.csv", "fig3_squeezing.csv"):
            assert (out / name).read_bytes() == (GOLDEN / name).read_bytes()

    def test_json_matches_csv(self, tmp_path):
        run(tmp_path, "figures", "--config", "toy.cfg")
        main(["figures", "--config", "toy.cfg", "--out", str(tmp_path / "j"), "--format", "json"])
        doc = json.loads((tmp_path / "j" / "fig3_squeezing.json").read_text())
        cols, data = read_table(tmp_path / "out" / "fig3_squeezing.csv")
        assert doc["columns"] == cols
        assert np.array_equal(np.array(doc["rows"]), data)


class TestEntryPoints:
    def test_module(self, tmp_path):
        r = subprocess.run(
            [sys.executable, "-m", "optosqueeze", "derive", "--config", "toy.cfg", "--out", str(tmp_path)],
            capture_output=True,
            text=True,
        )
        assert r.returncode == 0 and "chi" in r.stdout

    def test_help_lists_subcommands(self):
        r = subprocess.run([sys.executable, "-m", "optosqueeze", "--help"], capture_output=True, text=True)
        for name in ("derive", "evolve", "oracle", "thermal", "figures"):
            assert name in r.stdout
