import json

import numpy as np
import pytest

from fixtures import (
    flat_blocked_model,
    flat_parallelogram_model,
    parallelogram_tube_model,
    reference_model,
    reference_model_3col,
    scissor_model,
)
from phedra.cli import main
from phedra.model_io import write_model


@pytest.fixture
def ref_file(tmp_path):
    path = tmp_path / "model.json"
    path.write_text(write_model(reference_model()))
    return str(path)


@pytest.fixture
def ref3_file(tmp_path):
    path = tmp_path / "model3.json"
    path.write_text(write_model(reference_model_3col()))
    return str(path)


def test_validate_ok(ref_file, capsys):
    assert main(["validate", ref_file]) == 0
    assert "ok" in capsys.readouterr().out


def test_validate_failure_exit_two(tmp_path, capsys):
    bad = scissor_model(all_plus=False)
    path = tmp_path / "bad.json"
    path.write_text(write_model(bad))
    assert main(["validate", str(path)]) == 2
    assert "ScissorRequiresAllPlus" in capsys.readouterr().out


def test_validate_schema_error_exit_two(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{"trajectory": []}')
    assert main(["validate", str(path)]) == 2


def test_construct_writes_obj(ref3_file, tmp_path, capsys):
    out = tmp_path / "mesh.obj"
    assert main(["construct", ref3_file, "-o", str(out)]) == 0
    assert out.exists()
    stdout = capsys.readouterr().out
    assert "classification = general" in stdout
    assert "faces = 6" in stdout


def test_construct_axial_flag(ref3_file, tmp_path, capsys):
    out_g = tmp_path / "g.obj"
    out_a = tmp_path / "a.obj"
    main(["construct", ref3_file, "-o", str(out_g)])
    main(["construct", ref3_file, "--axial", "-o", str(out_a)])
    assert out_g.read_bytes() != out_a.read_bytes()


def test_limits_prints_reference_parameter(ref_file, capsys):
    assert main(["limits", ref_file]) == 0
    out = capsys.readouterr().out
    assert "t_* = -1" in out
    assert "t_lambda" in out and "t_mu" in out


def test_deform_inside_interval(ref_file, tmp_path, capsys):
    out = tmp_path / "state.obj"
    assert main(["deform", ref_file, "--t", "0.0", "-o", str(out)]) == 0
    assert out.exists()


def test_deform_outside_interval_exit_three(ref_file, tmp_path, capsys):
    out = tmp_path / "state.obj"
    code = main(["deform", ref_file, "--t", "-2.0", "-o", str(out)])
    assert code == 3
    assert "ComplexBranch" in capsys.readouterr().err


def test_deform_with_flip(ref_file, tmp_path):
    a = tmp_path / "a.obj"
    b = tmp_path / "b.obj"
    main(["deform", ref_file, "--t", "-1.0", "-o", str(a)])
    main(["deform", ref_file, "--t", "-1.0", "--flip-strip", "1", "-o", str(b)])
    assert a.read_bytes() != b.read_bytes()


def test_sweep_writes_frames_and_archive(ref3_file, tmp_path):
    outdir = tmp_path / "frames"
    assert main(["sweep", ref3_file, "--frames", "4", "--out", str(outdir)]) == 0
    archive = json.loads((outdir / "frames.json").read_text())
    assert len(archive["frames"]) == 4
    for fr in archive["frames"]:
        assert (outdir / fr["obj"]).exists()
        assert fr["max_isometry_deviation"] < 1e-8
        assert fr["max_planarity_defect"] < 1e-8


def test_flatcheck_flexes(tmp_path, capsys):
    path = tmp_path / "flat.json"
    path.write_text(write_model(flat_parallelogram_model()))
    assert main(["flatcheck", str(path)]) == 0
    assert "verdict = flexes" in capsys.readouterr().out


def test_flatcheck_blocked(tmp_path, capsys):
    path = tmp_path / "blocked.json"
    path.write_text(write_model(flat_blocked_model()))
    assert main(["flatcheck", str(path)]) == 0
    assert "verdict = blocked" in capsys.readouterr().out


def test_flatcheck_rejects_spatial_model(ref_file, capsys):
    assert main(["flatcheck", ref_file]) == 2
    assert "NotFlat" in capsys.readouterr().err


def test_tube_report(tmp_path, capsys):
    path = tmp_path / "tube.json"
    path.write_text(write_model(parallelogram_tube_model()))
    assert main(["tube", str(path)]) == 0
    out = capsys.readouterr().out
    assert "closed = true" in out
    assert "class = parallelogram" in out


def test_tube_on_open_model(ref_file, capsys):
    assert main(["tube", ref_file]) == 0
    assert "closed = false" in capsys.readouterr().out
