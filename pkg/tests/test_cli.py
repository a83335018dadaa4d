"""
End-to-end tests of the command-line runner
"""

import sys
import os

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

import math
from pathlib import Path

import pandas as pd
import pytest

import main as cli
from src.core.errors import DegenerateFaceError, SpecError
from src.core.types import METRICS_COLUMNS
from src.tools.generators import cube
from src.tools.obj_io import load_obj, save_obj

DATA = Path(__file__).parent.parent / "data" / "meshes"


def test_parse_phases():
    assert cli.parse_phases("100:2:2,100:2:1") == [(100, 2, 2), (100, 2, 1)]
    assert cli.parse_phases(" 5:1:0 ") == [(5, 1, 0)]
    with pytest.raises(SpecError):
        cli.parse_phases("5:1")
    with pytest.raises(SpecError):
        cli.parse_phases("a:b:c")


def test_generated_preset_run(tmp_path):
    out = tmp_path / "run"
    code = cli.main([
        "--gen", "cube", "--sub", "2", "--preset", "paper", "--m", "1",
        "--c-rel", "0.0025", "--stride", "50", "--out", str(out), "--quiet",
    ])
    assert code == 0

    snaps = sorted(p.name for p in out.glob("snap_*.obj"))
    assert snaps == [f"snap_{i:06d}.obj" for i in (0, 50, 100, 150, 200)]
    assert (out / "final.obj").exists()
    assert load_obj(out / "final.obj") == load_obj(out / "snap_000200.obj")

    frame = pd.read_csv(out / "metrics.csv")
    assert list(frame.columns) == METRICS_COLUMNS
    assert frame["iter"].tolist() == [0, 50, 100, 150, 200]
    print(frame[["iter", "sphericity", "radius_cv"]])


def test_input_file_with_phases(tmp_path):
    out = tmp_path / "run"
    metrics = tmp_path / "m.csv"
    curvature = tmp_path / "k.csv"
    code = cli.main([
        "--input", str(DATA / "cube.obj"), "--phases", "10:2:2,5:2:1",
        "--c", "0.002", "--stride", "4", "--out", str(out), "--metrics", str(metrics),
        "--dump-curvature", str(curvature), "--verify", "--quiet",
    ])
    assert code == 0
    frame = pd.read_csv(metrics)
    # stride multiples plus the phase boundaries 10 and 15
    assert frame["iter"].tolist() == [0, 4, 8, 10, 12, 15]
    k = pd.read_csv(curvature)
    assert list(k.columns) == ["vertex", "k"]
    assert len(k) == 8


def test_frozen_and_length_weighted_flags(tmp_path):
    code = cli.main([
        "--gen", "dented_sphere", "--sub", "1", "--phases", "6:2:1", "--c-rel", "0.002",
        "--frozen-t", "--vertex-averaging", "length_weighted", "--out", str(tmp_path), "--quiet",
    ])
    assert code == 0
    assert len(pd.read_csv(tmp_path / "metrics.csv")) == 2


def test_runs_are_byte_identical(tmp_path):
    args = ["--gen", "dented_sphere", "--sub", "2", "--noise", "0.1", "--seed", "5",
            "--phases", "20:2:1", "--c-rel", "0.002", "--stride", "10", "--quiet"]
    assert cli.main(args + ["--out", str(tmp_path / "a")]) == 0
    assert cli.main(args + ["--out", str(tmp_path / "b")]) == 0
    for name in ("metrics.csv", "final.obj", "snap_000010.obj"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_missing_input_fails(tmp_path):
    code = cli.main(["--input", str(tmp_path / "nope.obj"), "--out", str(tmp_path), "--quiet"])
    assert code == cli.EXIT_INVALID
    assert not (tmp_path / "metrics.csv").exists()


def test_open_mesh_input_fails(tmp_path):
    path = tmp_path / "open.obj"
    lines = (DATA / "cube.obj").read_text().splitlines()
    path.write_text("\n".join(lines[:-1]) + "\n")
    assert cli.main(["--input", str(path), "--out", str(tmp_path / "out"), "--quiet"]) == cli.EXIT_INVALID


def test_inside_out_input_fails_before_writing(tmp_path):
    path = tmp_path / "inside_out.obj"
    save_obj(cube(1).reversed(), path)
    out = tmp_path / "out"
    code = cli.main(["--input", str(path), "--phases", "2:1:1", "--out", str(out), "--quiet"])
    assert code == cli.EXIT_INVALID
    assert not out.exists()


def test_run_continues_after_surface_turns_inside_out(tmp_path):
    # Net inward moves with a large step collapse the cube through itself by iteration 100
    out = tmp_path / "run"
    code = cli.main([
        "--gen", "cube", "--sub", "1", "--phases", "100:2:1", "--c-rel", "0.02",
        "--stride", "50", "--out", str(out), "--quiet",
    ])
    assert code == 0
    assert (out / "final.obj").exists()

    frame = pd.read_csv(out / "metrics.csv")
    assert frame["iter"].tolist() == [0, 50, 100]
    last = frame.iloc[-1]
    assert last["volume"] < 0
    assert math.isnan(last["sphericity"])
    assert "nan" in (out / "metrics.csv").read_text().splitlines()[-1].split(",")


def test_invalid_parameters_fail(tmp_path):
    out = str(tmp_path)
    assert cli.main(["--gen", "cube", "--c", "-1", "--out", out, "--quiet"]) == cli.EXIT_INVALID
    assert cli.main(["--gen", "cube", "--phases", "3:0:0", "--out", out, "--quiet"]) == cli.EXIT_INVALID
    with pytest.raises(SystemExit):
        cli.main(["--gen", "cube", "--input", "x.obj"])


def test_failure_keeps_partial_outputs(tmp_path, monkeypatch):
    import src.morph.engine as engine_module

    real_step = engine_module.step_outward
    calls = {"n": 0}

    def flaky_step(mesh, adj, c, settings=None):
        calls["n"] += 1
        if calls["n"] == 3:
            raise DegenerateFaceError("Face 0 is degenerate", face=0)
        return real_step(mesh, adj, c, settings)

    monkeypatch.setattr(engine_module, "step_outward", flaky_step)

    config = cli.config_from_args(
        cli.build_parser().parse_args([
            "--gen", "cube", "--sub", "1", "--phases", "4:0:1", "--c", "0.001",
            "--stride", "2", "--out", str(tmp_path),
        ]),
        cli.get_settings(),
    )
    result = cli.MorphRunner().run(config)

    assert result.exit_code == cli.EXIT_RUN_FAILED
    assert result.failed_iteration == 3
    assert [r.iteration for r in result.records] == [0, 2]
    assert pd.read_csv(tmp_path / "metrics.csv")["iter"].tolist() == [0, 2]
    assert (tmp_path / "snap_000002.obj").exists()
    assert not (tmp_path / "final.obj").exists()
