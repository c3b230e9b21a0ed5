import subprocess
import sys

import pytest

from cubiflip import cli, io
from cubiflip.canonical import canonical_code
from cubiflip.models import cube_sphere, grid_torus, pillow_sphere
from cubiflip.search import InvariantViolation


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, G in [("cube", cube_sphere()), ("pillow", pillow_sphere()), ("t11", grid_torus(1, 1)),
                    ("t22", grid_torus(2, 2))]:
        p = tmp_path / f"{name}.qgm"
        io.save(G, p)
        out[name] = str(p)
    out["dir"] = tmp_path
    return out


def run(capsys, *argv):
    code = cli.main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_model_and_info(capsys, tmp_path):
    path = tmp_path / "c.qgm"
    assert run(capsys, "model", "cube_sphere", "--out", str(path))[0] == 0
    code, out, _ = run(capsys, "info", str(path))
    assert code == 0
    assert out.strip() == "sphere orientable χ=2 V=8 E=12 F=6 b=0"
    code, out, _ = run(capsys, "model", "grid_torus", "2", "3")
    assert out.startswith("qgm 1\ndarts 48\n")


def test_invariant_report(capsys, files):
    code, out, _ = run(capsys, "invariant", files["t11"])
    assert code == 0
    assert out.splitlines() == ["j2=1 j1_zero=false pairings=11", "boundary=none"]


def test_check(capsys, files, tmp_path):
    assert run(capsys, "check", files["cube"])[1].strip() == "ok darts=48"
    bad = tmp_path / "bad.qgm"
    bad.write_text("qgm 1\ndarts 8\na0: 0 1 2 3 4 5 6 7\na1: 1 0 3 2 5 4 7 6\na2: 0 1 2 3 4 5 6 7\n")
    code, out, _ = run(capsys, "check", str(bad))
    assert code == 1 and "violation a0 not fixed-point-free" in out
    bad.write_text("not a map\n")
    code, _, err = run(capsys, "check", str(bad))
    assert code == 1 and "header" in err
    code, _, err = run(capsys, "info", str(tmp_path / "missing.qgm"))
    assert code == 1


def test_curves(capsys, files):
    code, out, _ = run(capsys, "curves", files["cube"])
    assert out.splitlines() == ["circle len=4"] * 3 + ["double_points=6"]
    code, out, _ = run(capsys, "curves", files["cube"], "--dot")
    assert out.startswith("graph arrangement {")


def test_flip_list_and_apply(capsys, files):
    code, out, _ = run(capsys, "flip", "list", files["cube"], "--kind", "b3")
    assert code == 0 and len(out.splitlines()) == 8
    anchor = out.split()[1]
    target = str(files["dir"] / "b3.qgm")
    code, _, _ = run(capsys, "flip", "apply", files["cube"], "--kind", "b3", "--site", anchor, "--out", target)
    assert code == 0 and io.load(target).n_faces == 6
    code, _, err = run(capsys, "flip", "apply", files["cube"], "--kind", "b3")
    assert code == 1


def test_path_and_replay(capsys, files):
    seq = str(files["dir"] / "seq.txt")
    code, _, err = run(capsys, "path", files["pillow"], files["cube"], "--max-faces", "14", "--out", seq)
    assert code == 0 and err.startswith("found")
    end = str(files["dir"] / "end.qgm")
    code, _, _ = run(capsys, "flip", "apply", files["pillow"], "--sequence", seq, "--out", end)
    assert code == 0
    assert canonical_code(io.load(end)) == canonical_code(cube_sphere())


def test_path_exit_codes(capsys, files):
    code, _, err = run(capsys, "path", files["pillow"], files["t22"])
    assert code == 1 and "different surfaces" in err
    code, _, err = run(capsys, "path", files["t22"], files["t22"])
    assert code == 0
    beak = str(files["dir"] / "beak.qgm")
    run(capsys, "model", "beak_sphere", "--out", beak)
    code, _, err = run(capsys, "path", beak, files["pillow"])
    assert code == 1 and "parity" in err
    G = io.load(files["cube"])
    three = files["dir"] / "three.qgm"
    from cubiflip.search import enumerate_cubications
    io.save(enumerate_cubications("sphere", 3)[-1], three)
    code, _, err = run(capsys, "path", beak, str(three), "--max-faces", "3")
    assert code == 2 and err.startswith("exhausted by=max_faces")
    assert G.n_faces == 6


def test_internal_error_exit_code(capsys, files, monkeypatch):
    def boom(*a, **k):
        raise InvariantViolation("watchdog")
    monkeypatch.setattr(cli, "flip_path", boom)
    code, _, err = run(capsys, "path", files["cube"], files["cube"])
    assert code == 3 and "watchdog" in err


def test_diag(capsys, files):
    from cubiflip.flips import hexagon_sites
    site = int(hexagon_sites(grid_torus(2, 2))[0][0])
    code, out, _ = run(capsys, "diag", "slide", files["t22"], "--site", str(site))
    assert code == 0 and io.loads(out).n_faces == 4
    code, _, err = run(capsys, "diag", "rotate", files["cube"], "--site", "0")
    assert code == 1


def test_stabilize(capsys, files):
    code, out, _ = run(capsys, "stabilize", files["cube"], "--dart", "0")
    assert code == 0 and io.loads(out).n_faces == 8
    code, out, _ = run(capsys, "stabilize", files["cube"], "--dart", "0", "--turns", "2")
    assert code == 0 and io.loads(out).n_faces == 10


def test_dual(capsys, files):
    code, out, _ = run(capsys, "dual", files["t22"])
    assert code == 0
    assert canonical_code(io.loads(out)) == canonical_code(grid_torus(2, 2))


def test_census(capsys, files):
    out = files["dir"] / "census.txt"
    code, _, _ = run(capsys, "census", "--surface", "sphere", "--max-faces", "3", "--out", str(out))
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[:3] == ["surface=sphere max_faces=3 boundary=any", "classes_by_F=1:1,2:3,3:7",
                         "classes=11 components=2"]
    code, text, _ = run(capsys, "census", "--surface", "disk", "--max-faces", "2", "--boundary", "4")
    assert code == 0 and "boundary=4" in text.splitlines()[0]
    code, _, err = run(capsys, "census", "--surface", "pretzel", "--max-faces", "2")
    assert code == 1


def test_export(capsys, files):
    code, out, _ = run(capsys, "export", files["cube"], "--dot")
    assert code == 0 and out.count(" -- ") == 12
    code, out, _ = run(capsys, "export", files["cube"], "--dot", "--arrangement")
    assert out.count("shape=point") == 6


def test_seed_is_accepted(capsys, files):
    a = run(capsys, "--seed", "7", "invariant", files["t22"])
    b = run(capsys, "invariant", files["t22"])
    assert a == b


def test_module_entry_point(files):
    res = subprocess.run([sys.executable, "-m", "cubiflip", "info", files["t22"]],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("torus orientable χ=0")
