import struct

import numpy as np
import pytest

from identispace.cli import CONFIG_ENV_VAR, RunConfig, load_config_file, main, resolve_config
from identispace.mesh_io import TriangleMesh, write_stl

SMALL = [
    "--lat-ribs", "3", "--long-ribs", "3",
    "--outer-density", "1", "--inner-density", "1",
    "--resolution", "4",
]


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def open_tetra_stl() -> bytes:
    vertices = np.array([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)], float)
    faces = np.array([(0, 2, 1), (0, 1, 3), (0, 3, 2)], np.int32)
    return write_stl(TriangleMesh(vertices, faces))


# --- generate ----------------------------------------------------------------


def test_generate_writes_file_with_size_law(tmp_path, capsys):
    out = tmp_path / "torus.stl"
    code, text, _ = run(["generate", "--surface", "torus", *SMALL, "--output", str(out)], capsys)
    assert code == 0
    data = out.read_bytes()
    n = struct.unpack_from("<I", data, 80)[0]
    assert len(data) == 84 + 50 * n
    assert f"triangles: {n}" in text
    assert "watertight: 56/56" in text


def test_generate_rejects_zero_thickness(tmp_path, capsys):
    code, _, err = run(
        ["generate", "--surface", "klein", "--thickness", "0",
         "--output", str(tmp_path / "x.stl")],
        capsys,
    )
    assert code == 2
    assert "thickness" in err


def test_generate_roman_reports_degenerate_capsules(tmp_path, capsys):
    # pinch circles land on grid columns when lat_ribs is divisible by 4
    out = tmp_path / "roman.stl"
    code, text, _ = run(
        ["generate", "--surface", "roman", "--lat-ribs", "4", "--long-ribs", "4",
         "--outer-density", "1", "--inner-density", "1", "--resolution", "4",
         "--output", str(out)],
        capsys,
    )
    assert code == 0
    line = next(l for l in text.splitlines() if l.startswith("sphere_degenerate_capsules:"))
    assert int(line.split(":")[1]) >= 1


def test_generate_ascii_mode(tmp_path, capsys):
    out = tmp_path / "t.stl"
    code, text, _ = run(
        ["generate", "--surface", "torus", *SMALL, "--ascii", "--output", str(out)],
        capsys,
    )
    assert code == 0
    assert out.read_bytes().startswith(b"solid identispace-forge")


def test_generate_legacy_overshoot_produces_more_capsules(tmp_path, capsys):
    base = tmp_path / "a.stl"
    legacy = tmp_path / "b.stl"
    run(["generate", "--surface", "torus", *SMALL, "--output", str(base)], capsys)
    run(["generate", "--surface", "torus", *SMALL, "--legacy-overshoot",
         "--output", str(legacy)], capsys)
    n_base = struct.unpack_from("<I", base.read_bytes(), 80)[0]
    n_legacy = struct.unpack_from("<I", legacy.read_bytes(), 80)[0]
    assert n_legacy == 2 * n_base  # 112 vs 56 capsules


def test_generate_deterministic(tmp_path, capsys):
    a = tmp_path / "a.stl"
    b = tmp_path / "b.stl"
    args = ["generate", "--surface", "klein", *SMALL]
    assert run([*args, "--output", str(a)], capsys)[0] == 0
    assert run([*args, "--output", str(b)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()


# --- validate ----------------------------------------------------------------


def test_validate_own_output(tmp_path, capsys):
    out = tmp_path / "t.stl"
    run(["generate", "--surface", "torus", *SMALL, "--output", str(out)], capsys)
    code, text, _ = run(["validate", str(out)], capsys)
    assert code == 0
    assert "boundary_edges: 0" in text


def test_validate_truncated_file(tmp_path, capsys):
    out = tmp_path / "t.stl"
    run(["generate", "--surface", "torus", *SMALL, "--output", str(out)], capsys)
    data = out.read_bytes()
    out.write_bytes(data[:-1])
    code, _, err = run(["validate", str(out)], capsys)
    assert code == 2
    assert "mismatch" in err or "truncated" in err


def test_validate_open_surface(tmp_path, capsys):
    path = tmp_path / "open.stl"
    path.write_bytes(open_tetra_stl())
    code, text, _ = run(["validate", str(path)], capsys)
    assert code == 1
    assert "boundary_edges: 3" in text


def test_validate_missing_file(capsys):
    code, _, err = run(["validate", "/nonexistent/file.stl"], capsys)
    assert code == 2


# --- homology ----------------------------------------------------------------


def test_homology_sphere(capsys):
    code, text, _ = run(["homology", "--space", "sphere"], capsys)
    assert code == 0
    assert text.splitlines() == [
        "H_0(sphere) = Z",
        "H_1(sphere) = 0",
        "H_2(sphere) = Z",
    ]


def test_homology_klein_h1(capsys):
    code, text, _ = run(["homology", "--space", "klein", "--dim", "1"], capsys)
    assert code == 0
    assert text.strip() == "H_1(klein) = Z + Z/2"


def test_homology_circle_dim1(capsys):
    code, text, _ = run(["homology", "--space", "circle", "--dim", "1"], capsys)
    assert code == 0
    assert text.strip() == "H_1(circle) = Z"


def test_homology_dim_out_of_range(capsys):
    code, _, err = run(["homology", "--space", "circle", "--dim", "5"], capsys)
    assert code == 2
    assert "--dim" in err


def test_homology_rp2(capsys):
    code, text, _ = run(["homology", "--space", "rp2"], capsys)
    assert code == 0
    assert "H_1(rp2) = Z/2" in text


# --- sample ------------------------------------------------------------------


def test_sample_outputs(capsys):
    assert run(["sample", "--surface", "torus", "0", "0"], capsys)[1].strip() == "40 0 0"
    assert run(["sample", "--surface", "roman", "0", "0"], capsys)[1].strip() == "0 0 0"
    assert run(["sample", "--surface", "klein", "0", "0"], capsys)[1].strip() == "30 2.5 0"


# --- argument handling -------------------------------------------------------


def test_unknown_surface_rejected_by_parser(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["generate", "--surface", "moebius"])
    assert exc.value.code == 2


def test_missing_subcommand_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


# --- config file layering ----------------------------------------------------


def test_config_file_overrides_defaults(tmp_path):
    cfg_path = tmp_path / "run.cfg"
    cfg_path.write_text(
        "# comment line\n"
        "thickness = 2.5\n"
        "lat-ribs = 6   # trailing comment\n"
        "ascii = true\n"
    )
    values = load_config_file(str(cfg_path))
    assert values == {"thickness": 2.5, "lat-ribs": 6, "ascii": True}


def test_unknown_config_key_rejected(tmp_path, capsys):
    cfg_path = tmp_path / "run.cfg"
    cfg_path.write_text("lat_ribs = 6\n")  # keys use hyphens, not underscores
    code, _, err = run(
        ["sample", "--surface", "torus", "--config", str(cfg_path), "0", "0"], capsys
    )
    assert code == 2
    assert "unknown config key" in err


def test_flag_precedence_three_layers(tmp_path, monkeypatch):
    cfg_path = tmp_path / "run.cfg"
    cfg_path.write_text("thickness = 2.0\nlat-ribs = 6\n")
    import argparse

    ns = argparse.Namespace(config=str(cfg_path), thickness=3.0)
    cfg = resolve_config(ns)
    assert cfg.thickness == 3.0  # flag beats config
    assert cfg.lat_ribs == 6  # config beats default
    assert cfg.long_ribs == RunConfig().long_ribs  # default survives


def test_config_env_var(tmp_path, monkeypatch, capsys):
    cfg_path = tmp_path / "env.cfg"
    cfg_path.write_text("outer-radius = 7\ninner-radius = 2\n")
    monkeypatch.setenv(CONFIG_ENV_VAR, str(cfg_path))
    code, text, _ = run(["sample", "--surface", "torus", "0", "0"], capsys)
    assert code == 0
    assert text.strip() == "9 0 0"  # R + r from the env config


def test_explicit_config_beats_env(tmp_path, monkeypatch, capsys):
    env_cfg = tmp_path / "env.cfg"
    env_cfg.write_text("outer-radius = 7\ninner-radius = 2\n")
    flag_cfg = tmp_path / "flag.cfg"
    flag_cfg.write_text("outer-radius = 20\ninner-radius = 5\n")
    monkeypatch.setenv(CONFIG_ENV_VAR, str(env_cfg))
    code, text, _ = run(
        ["sample", "--surface", "torus", "--config", str(flag_cfg), "0", "0"], capsys
    )
    assert code == 0
    assert text.strip() == "25 0 0"


def test_malformed_config_line(tmp_path, capsys):
    cfg_path = tmp_path / "bad.cfg"
    cfg_path.write_text("thickness 2.0\n")
    code, _, err = run(
        ["sample", "--surface", "torus", "--config", str(cfg_path), "0", "0"], capsys
    )
    assert code == 2
    assert "key = value" in err


def test_bad_config_value(tmp_path, capsys):
    cfg_path = tmp_path / "bad.cfg"
    cfg_path.write_text("ascii = maybe\n")
    code, _, err = run(
        ["sample", "--surface", "torus", "--config", str(cfg_path), "0", "0"], capsys
    )
    assert code == 2
