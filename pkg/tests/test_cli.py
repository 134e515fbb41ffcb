import math

import numpy as np
import pytest

from solsurf.cli import main
from solsurf.export import (ConfigError, atomic_write, estimate_curvatures, load_config, mesh_from_files, obj_text,
                            read_obj, read_table)


def run(*argv):
    return main([str(a) for a in argv])


def test_log_graph_curve(tmp_path):
    out = tmp_path / "log.csv"
    th = math.pi / 4
    assert run("curve", "--condition", "cmc", "--const", "H=0", "--y0", 1.0, "--theta0", th,
               "--s-min", -3, "--s-max", 3, "-o", out) == 0
    t = read_table(out)
    assert t.columns == ("s", "y", "z", "theta", "H", "K_ext", "K_int", "kappa1", "kappa2")
    assert np.max(np.abs(t.data["z"] - np.log(t.data["y"]))) < 1e-8
    assert t.metadata["condition"].startswith("cmc")


def test_ratio_single_minimum(tmp_path):
    out = tmp_path / "m3.csv"
    assert run("curve", "--condition", "ratio", "--const", "m=-3", "--s-min", -6, "--s-max", 6, "-o", out) == 0
    t = read_table(out)
    k = int(np.argmin(t.data["z"]))
    assert abs(t.data["s"][k]) < 1e-6
    assert np.all(np.diff(t.data["z"][:k]) < 0) and np.all(np.diff(t.data["z"][k:]) > 0)


def test_empty_range_header_only(tmp_path):
    out = tmp_path / "empty.csv"
    assert run("curve", "--condition", "cmc", "--const", "H=1", "--s-min", 0, "--s-max", 0, "-o", out) == 0
    lines = out.read_text().splitlines()
    assert all(line.startswith("#") for line in lines[:-1])
    assert lines[-1] == "s,y,z,theta,H,K_ext,K_int,kappa1,kappa2"


def test_leaf_mesh(tmp_path):
    obj, att = tmp_path / "leaf.obj", tmp_path / "leaf.csv"
    assert run("surface", "--condition", "cmc", "--const", "H=0", "--z0", 0.25, "--s-min", 0, "--s-max", 1,
               "--samples", 11, "--t-min", 0, "--t-max", 1, "--steps", 11, "--mesh", obj, "--attributes", att) == 0
    verts, faces = read_obj(obj)
    assert verts.shape == (121, 3)
    assert len(faces) == 100
    assert np.all(verts[:, 2] == 0.25)


def test_cmc_mesh_attribute(tmp_path):
    obj, att = tmp_path / "cmc.obj", tmp_path / "cmc.tsv"
    assert run("surface", "--condition", "cmc", "--const", "H=1", "--z0", -0.5, "--s-min", 0, "--s-max", math.pi,
               "--samples", 200, "--steps", 50, "--format", "tsv", "--mesh", obj, "--attributes", att) == 0
    t = read_table(att)
    assert len(t.data["H"]) == 200 * 50
    assert np.max(np.abs(t.data["H"] - 1.0)) < 1e-8


def test_logcosh_entry_mesh(tmp_path):
    obj, att = tmp_path / "lc.obj", tmp_path / "lc.csv"
    assert run("surface", "--entry", "kint.c=-1.graph", "--s-min", -2, "--s-max", 2, "--samples", 40,
               "--steps", 10, "--mesh", obj, "--attributes", att) == 0
    assert np.max(np.abs(read_table(att).data["K_int"] + 1.0)) < 1e-8


def test_mesh_invariance(tmp_path):
    obj, att = tmp_path / "m.obj", tmp_path / "m.csv"
    assert run("surface", "--condition", "cmc", "--const", "H=1", "--z0", -0.5, "--s-min", 0, "--s-max", math.pi,
               "--samples", 200, "--steps", 50, "--mesh", obj, "--attributes", att) == 0
    mesh = mesh_from_files(obj, att)
    moved_obj = atomic_write(tmp_path / "moved.obj", obj_text(mesh.translated("T1", 2.5)))
    moved = mesh_from_files(moved_obj, att)
    assert np.allclose(moved.vertices[..., 0], mesh.vertices[..., 0] + 2.5)
    before, after = estimate_curvatures(mesh), estimate_curvatures(moved)
    for k in ("H", "K_ext", "K_int"):
        assert np.max(np.abs(after[k] - before[k])) < 1e-12
        # vertex-only estimate agrees with the exported attribute
        assert np.max(np.abs(before[k] - mesh.attributes[k][1:-1, 1:-1])) < 1e-3


def test_deterministic_output(tmp_path):
    paths = []
    for name in ("a", "b"):
        obj, att, crv = (tmp_path / f"{name}.{ext}" for ext in ("obj", "att", "csv"))
        args = ["--condition", "kint", "--const", "c=-0.5", "--s-min", -4, "--s-max", 4]
        assert run("curve", *args, "-o", crv) == 0
        assert run("surface", *args, "--steps", 5, "--mesh", obj, "--attributes", att) == 0
        paths.append((obj, att, crv))
    for p, q in zip(*paths):
        assert p.read_bytes() == q.read_bytes()


def test_config_file_and_overrides(tmp_path):
    cfg = tmp_path / "run.yaml"
    cfg.write_text("condition: kint\nconstants: {c: 2.0}\ns_range: [-1, 1]\n"
                   "integrator: {tol: 1.0e-11}\noutputs: {curve: " + str(tmp_path / "cfg.csv") + "}\n")
    assert load_config(cfg).integrator.tol == 1e-11
    assert run("curve", "--config", cfg) == 0
    t = read_table(tmp_path / "cfg.csv")
    assert t.metadata["condition"].startswith("kint")
    assert t.metadata["end"].startswith("SingularEndpoint")
    out = tmp_path / "flag.csv"
    assert run("curve", "--config", cfg, "--condition", "cmc", "--const", "H=1", "-o", out) == 0
    t = read_table(out)
    assert t.metadata["condition"].startswith("cmc")
    assert t.data["s"][-1] == 1.0


def test_bad_config(tmp_path):
    cfg = tmp_path / "bad.yaml"
    cfg.write_text("conditon: cmc\n")
    with pytest.raises(ConfigError):
        load_config(cfg)
    assert run("curve", "--config", cfg) == 2


def test_config_errors_exit_2(tmp_path, capsys):
    assert run("curve", "--condition", "kint", "--const", "H=1", "-o", tmp_path / "x.csv") == 2
    assert run("curve", "--condition", "kint", "-o", tmp_path / "x.csv") == 2
    assert run("classify", "--condition", "lw-kappa", "--const", "a=1", "--const", "b=2", "--const", "c=1") == 2
    assert run("catalog", "--sample", "no.such.entry") == 2
    assert "config error" in capsys.readouterr().err


def test_singular_start_exit_3(tmp_path, capsys):
    assert run("curve", "--condition", "kint", "--const", "c=2", "--theta0", math.pi / 2,
               "-o", tmp_path / "s.csv") == 3
    assert "integration error" in capsys.readouterr().err


def test_step_failure_exit_3(tmp_path):
    cfg = tmp_path / "budget.yaml"
    cfg.write_text("condition: cmc\nconstants: {H: 1}\ns_range: [0, 100]\nintegrator: {max_samples: 10}\n")
    assert run("curve", "--config", cfg, "-o", tmp_path / "b.csv") == 3


def test_verify_suites(capsys):
    assert run("verify", "kernel") == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0].startswith("suite")


def test_verify_flipped_entry(capsys):
    assert run("verify", "kernel", "--flip", 2, 2) == 1
    out = capsys.readouterr().out
    assert "nabla_E2 E2" in out
    assert "fail" in out


def test_classify_check(capsys):
    assert run("classify", "--condition", "ratio", "--const", "m=-1.5", "--s-min", -10, "--s-max", 10, "--check") == 0
    out = capsys.readouterr().out
    assert "ratio.entire_min" in out
    assert "EntireGraph" in out
    assert run("classify", "--condition", "kint", "--const", "c=-0.5") == 2
    assert run("classify", "--condition", "kint", "--const", "c=-0.5", "--theta0", 1.2, "--branch") == 0
    assert "kint.half_line" in capsys.readouterr().out


def test_catalog_list_and_sample(tmp_path, capsys):
    assert run("catalog") == 0
    listing = capsys.readouterr().out
    assert "kint.c=-1.graph" in listing
    out = tmp_path / "entry.csv"
    assert run("catalog", "--sample", "kext.c=0.curve", "-n", 50, "-o", out) == 0
    t = read_table(out)
    assert len(t.data["s"]) == 50
    assert np.allclose(t.data["y"], np.tanh(t.data["s"]), atol=1e-14)


def test_figures(tmp_path, capsys):
    assert run("figures", "--outdir", tmp_path, "--only", "fig3") == 0
    assert (tmp_path / "fig3.png").stat().st_size > 0
    assert sorted(p.name for p in tmp_path.glob("fig3*.csv"))
    assert "fail" not in capsys.readouterr().out
