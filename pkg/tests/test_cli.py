import csv

import pytest

from vscpt import cli
from vscpt.errors import SolverError


def _summary(path):
    return dict(line.split("=", 1) for line in path.read_text().splitlines())


def test_backscatter_preset(tmp_path, capsys):
    assert cli.main(["backscatter", "--preset", "fig3", "--out", str(tmp_path)]) == 0
    summary = _summary(tmp_path / "backscatter_summary.txt")
    assert float(summary["reflectivity"]) == pytest.approx(0.30, abs=0.05)
    # the resolved parameter set is echoed
    assert float(summary["param.sample.density"]) == 2e16
    assert float(summary["param.probe.delta_s"]) == 3e6
    assert summary["param.species"] == "rb87"
    rows = list(csv.reader((tmp_path / "backscatter.csv").open()))
    assert rows[0][:3] == ["z_m", "I1_exact_rel", "I2_exact_rel"]
    assert len(rows) == 2002
    assert float(rows[1][2]) == pytest.approx(float(summary["reflectivity"]), rel=1e-14)
    assert "reflectivity=" in capsys.readouterr().out


def test_dephasing_he(tmp_path):
    assert cli.main(["dephasing", "--species", "he4", "--tmax", "10e-6", "--out", str(tmp_path)]) == 0
    rows = list(csv.reader((tmp_path / "dephasing.csv").open()))
    assert rows[0] == ["t_s", "g_he4"]
    assert float(rows[1][1]) == 1.0
    summary = _summary(tmp_path / "dephasing_summary.txt")
    assert float(summary["t_half_s.he4"]) == pytest.approx(2.18e-6, rel=2e-3)


def test_fig4_has_both_species(tmp_path):
    assert cli.main(["dephasing", "--preset", "fig4", "--out", str(tmp_path)]) == 0
    header = (tmp_path / "dephasing.csv").read_text().splitlines()[0]
    assert header == "t_s,g_he4,g_rb87"


def test_dispersion_preset(tmp_path):
    assert cli.main(["dispersion", "--preset", "fig5", "--out", str(tmp_path)]) == 0
    summary = _summary(tmp_path / "dispersion_summary.txt")
    assert float(summary["chi_p_at_pump_s"]) == 0.0
    assert float(summary["param.probe.rabi_p"]) == 1e7


def test_eit_map_preset(tmp_path):
    assert cli.main(["eit-map", "--preset", "fig6", "--nz", "21", "--nt", "201", "--out", str(tmp_path)]) == 0
    summary = _summary(tmp_path / "eit_map_summary.txt")
    assert float(summary["peak_reflected"]) == pytest.approx(0.08, rel=0.3)
    assert float(summary["group_velocity_inside_m_per_s"]) < 0.9 * 299792458.0
    assert float(summary["param.sample.length"]) == 0.1
    assert len((tmp_path / "eit_map.csv").read_text().splitlines()) == 1 + 21 * 201


def test_quantum_preset(tmp_path):
    assert cli.main(["quantum", "--preset", "rb-photon", "--out", str(tmp_path)]) == 0
    summary = _summary(tmp_path / "quantum_summary.txt")
    assert float(summary["concurrence"]) == pytest.approx(1.0, abs=1e-12)
    assert float(summary["norm_out"]) < 1.0


def test_pulse_command(tmp_path):
    args = ["pulse", "--preset", "he-pulse", "--out", str(tmp_path)]
    assert cli.main(args) == 0
    summary = _summary(tmp_path / "pulse_summary.txt")
    assert float(summary["efficiency"]) < 0.01
    assert summary["exited"] == "true"
    assert "efficiency_ideal" in summary


def test_output_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert cli.main(["eit-map", "--preset", "fig6", "--nz", "11", "--nt", "51", "--out", str(out)]) == 0
    for name in ("eit_map.csv", "eit_map_summary.txt"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_precedence_preset_file_flags(tmp_path):
    cfg = tmp_path / "run.yaml"
    cfg.write_text("sample:\n  density: 1.0e+16\n  length: 0.02\n")
    cfg_dict = cli.resolve("backscatter", "fig3", cfg, {"length": 0.03})
    assert cfg_dict["sample"]["density"] == 1e16  # file beats preset
    assert cfg_dict["sample"]["length"] == 0.03  # flag beats file
    assert cfg_dict["probe"]["delta_s"] == 3e6  # preset beats defaults


def test_inline_species(tmp_path):
    cfg = tmp_path / "custom.yaml"
    cfg.write_text(
        "species:\n  name: toy\n  mass: 1.443e-25\n  gamma: 3.61e7\n"
        "  dipole: 1.4e-29\n  omega0: 2.37e15\n  recoil: 2.3e4\n"
    )
    assert cli.main(["backscatter", "--config", str(cfg), "--out", str(tmp_path)]) == 0


@pytest.mark.parametrize(
    "text,needle",
    [
        ("sample:\n  densty: 1\n", "densty"),
        ("command: pulse\n", "command"),
        ("sample: [1, 2\n", "YAML"),
        ("sample:\n  length: -1\n", "length"),
        ("species: xenon\n", "species"),
    ],
)
def test_invalid_config_exits_2(tmp_path, capsys, text, needle):
    cfg = tmp_path / "bad.yaml"
    cfg.write_text(text)
    assert cli.main(["backscatter", "--config", str(cfg), "--out", str(tmp_path)]) == 2
    assert needle in capsys.readouterr().err
    assert not (tmp_path / "backscatter.csv").exists()


def test_missing_inputs_exit_2(tmp_path):
    assert cli.main(["backscatter", "--config", str(tmp_path / "nope.yaml")]) == 2
    assert cli.main(["backscatter", "--preset", "fig9"]) == 2
    assert cli.main(["pulse", "--out", str(tmp_path)]) == 2  # no pulse duration
    assert cli.main(["dispersion", "--rabi-p", "0", "--out", str(tmp_path)]) == 2


def test_solver_error_exits_3(tmp_path, monkeypatch, capsys):
    def boom(cfg):
        raise SolverError("integration diverged")

    monkeypatch.setitem(cli.RUNNERS, "backscatter", boom)
    assert cli.main(["backscatter", "--out", str(tmp_path)]) == 3
    assert "integration diverged" in capsys.readouterr().err
