import math
import subprocess
import sys

import numpy as np
import pytest
from click.testing import CliRunner

from pinem.cli import cli
from pinem.config import ExperimentConfig
from pinem.presets import PRESETS
from pinem.runner import SweepAxis, SweepSpec, read_sweep_csv, run_pipeline, run_sweep
from pinem.wavepacket import Spectrum

PRESET_NAMES = [
    "fig1b", "fig1c", "fig1d", "fig1e", "fig1g", "fig1h",
    "fig2a", "fig2b", "fig2c", "fig2d", "fig2e",
    "fig3b", "fig3c", "fig3e", "fig3f",
    "fig4a", "fig4b", "fig4c", "fig4d",
    "figS1", "figS2", "figS3",
]  # fmt: skip


def invoke(*args):
    return CliRunner().invoke(cli, list(args))


def write_config(path, **kw):
    values = {"sigma_E": 0.3, "photon_energy_eV": 1.55, "g_mag": 1.0, **kw}
    path.write_text("".join(f"{k} = {v}\n" for k, v in values.items()))
    return str(path)


def parse_summary(text):
    return dict(line.split("=", 1) for line in text.strip().splitlines())


def test_presets_listing():
    res = invoke("presets")
    assert res.exit_code == 0
    names = [line.split(":")[0] for line in res.output.splitlines() if not line.startswith(" ")]
    assert names == PRESET_NAMES
    assert sorted(PRESETS) == sorted(PRESET_NAMES)
    for line in res.output.splitlines():
        if not line.startswith(" "):
            assert "Fig." in line


def test_run_writes_outputs(tmp_path):
    cfg = write_config(tmp_path / "c.txt", decoherence="true", L0_cm=0.5)
    out = tmp_path / "out"
    res = invoke("run", "--config", cfg, "--out", str(out))
    assert res.exit_code == 0, res.output
    summary = parse_summary(res.output)
    assert summary["regime"] == "PINEM"
    assert float(summary["g_mag"]) == 1.0
    for name in ("spectrum.csv", "position.csv", "incoherent_spectrum.csv", "summary.txt", "config.txt"):
        assert (out / name).exists()
    assert (out / "spectrum.csv").read_text().startswith("axis_kind,axis,density\n")
    assert (out / "summary.txt").read_text() == res.output
    assert ExperimentConfig.from_file(out / "config.txt").L0_cm == 0.5


def test_zero_field_spectrum_is_initial_gaussian(tmp_path):
    cfg = write_config(tmp_path / "c.txt", g_mag=0)
    res = invoke("run", "--config", cfg, "--out", str(tmp_path / "o"))
    assert res.exit_code == 0
    spec = Spectrum.from_csv(tmp_path / "o" / "spectrum.csv")
    E = spec.axis
    # the energy axis carries the quadratic dispersion; compare in energy
    assert np.trapezoid(spec.density, E) == pytest.approx(1.0, abs=1e-9)
    mean = np.trapezoid(E * spec.density, E)
    sd = math.sqrt(np.trapezoid((E - mean) ** 2 * spec.density, E))
    assert sd == pytest.approx(0.3, rel=1e-6)
    assert abs(float(parse_summary(res.output)["delta_E"])) < 1e-10


def test_set_overrides_file(tmp_path):
    cfg = write_config(tmp_path / "c.txt")
    res = invoke("run", "--config", cfg, "--set", "g_mag=2", "--set", "phi0=pi", "--out", str(tmp_path / "o"))
    assert res.exit_code == 0
    s = parse_summary(res.output)
    assert float(s["g_mag"]) == 2.0
    assert float(s["phi0"]) == pytest.approx(math.pi)


def test_config_overrides_preset(tmp_path):
    path = tmp_path / "c.txt"
    path.write_text("g_mag = 1\n")
    res = invoke("run", "--preset", "fig4a", "--config", str(path), "--out", str(tmp_path / "o"))
    assert res.exit_code == 0, res.output
    s = parse_summary(res.output.split("\n", 1)[1])
    assert float(s["g_mag"]) == 1.0
    assert float(s["sigma_E"]) == 0.3


@pytest.mark.parametrize(
    "extra",
    [
        ("--set", "g_mag=-1"),
        ("--set", "colour=red"),
        ("--set", "wavelength_nm=800", "--set", "photon_energy_eV=1.55"),
        ("--set", "L0_cm=-2"),
        ("--preset", "fig9z"),
    ],
)
def test_config_errors_exit_2(tmp_path, extra):
    cfg = write_config(tmp_path / "c.txt")
    res = invoke("run", "--config", cfg, "--out", str(tmp_path / "o"), *extra)
    assert res.exit_code == 2


def test_missing_config_file_exits_2(tmp_path):
    assert invoke("run", "--config", str(tmp_path / "nope.txt")).exit_code == 2


def test_no_config_is_usage_error():
    assert invoke("run").exit_code == 2


def test_numerical_failure_exits_3(tmp_path):
    cfg = write_config(tmp_path / "c.txt", g_mag=6, grid_half_width=0.02)
    res = invoke("run", "--config", cfg, "--out", str(tmp_path / "o"))
    assert res.exit_code == 3
    assert "error" in res.output


def test_search_failure_exits_3(tmp_path):
    # the width minimum lies near 0.6 cm, outside this range
    cfg = write_config(
        tmp_path / "c.txt", sigma_E=7.8, g_mag=3, phi0="-pi/2", focus_L0_min_cm=1.5, focus_L0_max_cm=3
    )
    assert invoke("run", "--config", cfg, "--out", str(tmp_path / "o")).exit_code == 3


def test_run_is_deterministic(tmp_path):
    cfg = write_config(tmp_path / "c.txt", L0_cm=0.3, LD_cm=0.2)
    for d in ("a", "b"):
        assert invoke("run", "--config", cfg, "--out", str(tmp_path / d)).exit_code == 0
    for name in ("spectrum.csv", "position.csv", "summary.txt"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_sweep_csv_layout(tmp_path):
    cfg = write_config(tmp_path / "c.txt")
    res = invoke(
        "sweep", "--config", cfg, "--out", str(tmp_path),
        "--axis", "g_mag=0:2:3", "--axis", "phi0=0,pi",
        "--observable", "delta_E", "--observable", "spectrum", "--label", "s",
    )  # fmt: skip
    assert res.exit_code == 0, res.output
    header, data = read_sweep_csv(tmp_path / "s_delta_E.csv")
    assert header == ["g_mag", "phi0", "delta_E"]
    assert data[:, :2].tolist() == [[0, 0], [0, math.pi], [1, 0], [1, math.pi], [2, 0], [2, math.pi]]
    gamma0 = 1.55 / 0.6
    expected = 2 * data[:, 0] * 1.55 * np.cos(data[:, 1]) * math.exp(-(gamma0**2) / 2)
    assert np.allclose(data[:, 2], expected, rtol=1e-3, atol=1e-9)
    header, _ = read_sweep_csv(tmp_path / "s_spectrum.csv")
    assert header == ["g_mag", "phi0", "E_eV", "spectrum"]


@pytest.mark.parametrize("axis", ["g_mag=2:1:3", "g_mag=0:1:0", "g_mag=0:1", "nosuch=0:1:3", "g_mag=-1,1"])
def test_bad_sweep_axis_exits_2(tmp_path, axis):
    cfg = write_config(tmp_path / "c.txt")
    assert invoke("sweep", "--config", cfg, "--out", str(tmp_path), "--axis", axis).exit_code == 2


def test_too_many_sweep_points_exits_2(tmp_path):
    cfg = write_config(tmp_path / "c.txt")
    res = invoke("sweep", "--config", cfg, "--out", str(tmp_path), "--axis", "g_mag=0:1:101", "--axis", "phi0=0:1:100")
    assert res.exit_code == 2


def test_three_axes_exit_2(tmp_path):
    cfg = write_config(tmp_path / "c.txt")
    axes = ["--axis", "g_mag=0,1", "--axis", "phi0=0,1", "--axis", "L0_cm=0,1"]
    assert invoke("sweep", "--config", cfg, "--out", str(tmp_path), *axes).exit_code == 2


def test_single_point_sweep_matches_run(tmp_path):
    cfg = ExperimentConfig.from_mapping({"sigma_E": 1.55, "photon_energy_eV": 1.55, "g_mag": 2.0, "L0_cm": 0.1})
    summary = run_pipeline(cfg, out_dir=str(tmp_path / "run"))
    spec = SweepSpec("one", (SweepAxis("g_mag", (2.0,)),), ("spectrum", "delta_E", "width_rms"))
    paths = run_sweep(cfg, spec, out_dir=str(tmp_path))
    _, rows = read_sweep_csv(paths["spectrum"])
    direct = Spectrum.from_csv(tmp_path / "run" / "spectrum.csv")
    assert np.array_equal(rows[:, 1], direct.axis)
    assert np.array_equal(rows[:, 2], direct.density)
    for name in ("delta_E", "width_rms"):
        _, row = read_sweep_csv(paths[name])
        assert row[0, 1] == summary[name]


def test_parallel_sweep_is_identical(tmp_path):
    cfg = write_config(tmp_path / "c.txt")
    args = ["sweep", "--config", cfg, "--axis", "g_mag=0:3:4", "--observable", "delta_E", "--observable", "position"]
    assert invoke(*args, "--out", str(tmp_path / "a")).exit_code == 0
    assert invoke(*args, "--out", str(tmp_path / "b"), "--jobs", "2").exit_code == 0
    for name in ("sweep_delta_E.csv", "sweep_position.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_fig1d_peak_shift(tmp_path):
    res = invoke("run", "--preset", "fig1d", "--out", str(tmp_path))
    assert res.exit_code == 0
    s = parse_summary(res.output.split("\n", 1)[1])
    assert float(s["peak_shift_over_delta_p"]) == pytest.approx(12.0, abs=0.5)


def test_preset_values_match_captions():
    fig2 = PRESETS["fig2a"].config()
    assert (fig2.sigma_E, fig2.g_mag, fig2.photon_energy_eV, fig2.L0_cm) == (7.8, 3.0, 1.55, 0.8)
    assert fig2.phi0 == -math.pi / 2
    fig3 = PRESETS["fig3b"].config()
    assert (fig3.wavelength_nm, fig3.g_mag, fig3.gamma0) == (800.0, 0.3, 0.13)
    fig3f = PRESETS["fig3f"]
    assert [c.LD_cm for _, c in fig3f.run_configs()] == [1.0, 1.8, 4.0]
    assert fig3f.config().sigma_z_um == 1.5
    fig4d = PRESETS["fig4d"].config()
    assert (fig4d.photon_energy_eV, fig4d.L0_cm, fig4d.g_mag, fig4d.sigma_E) == (0.005, 0.23, 10.0, 0.3)
    for p in PRESETS.values():
        p.config().validate()
        for s in p.sweeps:
            s.validate(p.config())


def test_preset_run_with_plot(tmp_path):
    res = invoke("run", "--preset", "fig3f", "--out", str(tmp_path), "--plot")
    assert res.exit_code == 0, res.output
    for label in ("LD_1cm", "LD_1.8cm", "LD_4cm"):
        assert (tmp_path / label / "spectrum.png").exists()
        assert (tmp_path / label / "position.png").exists()
    assert "LD_opt_cm=" in res.output


def test_preset_sweep_with_plot(tmp_path):
    res = invoke("sweep", "--preset", "fig1b", "--out", str(tmp_path), "--plot")
    assert res.exit_code == 0, res.output
    assert (tmp_path / "field_scan_spectrum.csv").exists()
    assert (tmp_path / "field_scan_spectrum.png").exists()


def test_console_entry_point(tmp_path):
    out = subprocess.run(
        [sys.executable, "-m", "pinem.cli", "presets"], capture_output=True, text=True, check=False
    )
    assert out.returncode == 0
    assert out.stdout.startswith("fig1b:")
