import csv
import json
import shutil
import subprocess
import sys

import pytest

import corpus
from regcheck import io
from regcheck.cli import main
from regcheck.coons import BoundarySet
from regcheck.geometry import BezierSurface
from regcheck.jacobian import jacobian_coeffs
from regcheck.splines import BSplineVolume, KnotVector


@pytest.fixture
def files(tmp_path, rng):
    def put(name, obj):
        path = tmp_path / name
        io.write_json(path, obj)
        return str(path)

    b = corpus.curved_faces(rng, (2, 2, 2), 0.05)
    faces = dict(b.faces)
    faces["S1"] = BezierSurface(faces["S1"].points + [0.1, 0, 0])
    ks = [KnotVector.uniform(2, 2)] * 3
    good_spline = BSplineVolume.greville_identity(*ks)
    P = good_spline.points.copy()
    P[-2, -1, -1, 0] = 1.3
    return {
        "dir": tmp_path,
        "boundary": put("boundary.json", io.boundary_to_json(b, "cubic")),
        "broken": put("broken.json", io.boundary_to_json(BoundarySet(faces))),
        "regular": put("regular.json", io.volume_to_json(corpus.perturbed_identity(rng, (2, 2, 2), 0.03))),
        "reflected": put("reflected.json", io.volume_to_json(corpus.reflected(rng, (2, 2, 2)))),
        "thin": put("thin.json", io.volume_to_json(corpus.thin_fold(rng, 1e-3))),
        "spline": put("spline.json", io.bspline_to_json(good_spline)),
        "bad_spline": put("bad_spline.json", io.bspline_to_json(BSplineVolume(*ks, P))),
    }


class TestCoons:
    def test_writes_volume(self, files, capsys):
        out = files["dir"] / "coons.json"
        assert main(["coons", files["boundary"], "--bound-check", "rigorous", "-o", str(out)]) == 0
        text = capsys.readouterr().out
        assert "12/12" in text and "blend: cubic" in text and "bound check (rigorous)" in text
        assert io.volume_from_json(io.read_json(out)).degrees == (3, 3, 3)

    def test_blend_override(self, files, capsys):
        out = files["dir"] / "lin.json"
        assert main(["coons", files["boundary"], "--blend", "linear", "-o", str(out)]) == 0
        assert io.volume_from_json(io.read_json(out)).degrees == (2, 2, 2)
        assert main(["coons", files["boundary"], "--blend", "0,0.2,0.8,1", "-o", str(out)]) == 0

    def test_continuity_failure(self, files, capsys):
        out = files["dir"] / "never.json"
        assert main(["coons", files["broken"], "-o", str(out)]) == 2
        err = capsys.readouterr().err
        assert err.count("BAD") == 4 and err.count("OK ") == 8
        assert not out.exists()

    def test_bad_blend(self, files, capsys):
        with pytest.raises(SystemExit) as e:
            main(["coons", files["boundary"], "--blend", "quartic", "-o", "x.json"])
        assert e.value.code == 2


class TestCoeffs:
    @pytest.mark.parametrize("suffix", [".json", ".bin"])
    def test_output(self, files, capsys, suffix):
        out = files["dir"] / f"c{suffix}"
        assert main(["coeffs", files["regular"], "-o", str(out)]) == 0
        ref = jacobian_coeffs(io.volume_from_json(io.read_json(files["regular"])))
        assert io.load_coeffs(out) == ref
        assert repr(ref.min_coeff) in capsys.readouterr().out


class TestVerify:
    def test_regular(self, files, capsys):
        out = files["dir"] / "cert.json"
        assert main(["verify", files["regular"], "-o", str(out)]) == 0
        assert io.load_certificate(out).status == "Regular"

    def test_irregular(self, files, capsys):
        assert main(["verify", files["reflected"]]) == 1
        assert "witness" in capsys.readouterr().out

    def test_undecided(self, files, capsys):
        assert main(["verify", files["thin"], "--max-depth", "2"]) == 3
        assert main(["verify", files["thin"], "--split-rule", "longest", "--max-depth", "12"]) == 0

    def test_bspline(self, files, capsys):
        assert main(["verify", files["spline"]]) == 0
        assert main(["verify", files["bad_spline"]]) == 1
        assert "element" in capsys.readouterr().out

    def test_missing_file(self, files, capsys):
        assert main(["verify", str(files["dir"] / "nope.json")]) == 2

    def test_malformed_file(self, files, capsys):
        p = files["dir"] / "junk.json"
        p.write_text(json.dumps({"degrees": [1, 1, 1], "points": [[0, 0, 0]]}))
        assert main(["verify", str(p)]) == 2
        assert "error" in capsys.readouterr().err


class TestMisc:
    def test_oracle(self, files, capsys):
        assert main(["oracle", files["regular"], "--samples", "11"]) == 0
        err = float(capsys.readouterr().out.split(":")[-1])
        assert err <= 1e-12

    def test_extract(self, files, capsys):
        out = files["dir"] / "els.json"
        assert main(["extract", files["spline"], "-o", str(out)]) == 0
        els = [io.element_from_json(e) for e in io.read_json(out)["elements"]]
        assert len(els) == 8 and els[0].box == ((0.0, 0.5), (0.0, 0.5), (0.0, 0.5))
        assert main(["extract", files["regular"], "-o", str(out)]) == 2

    def test_bench(self, files, capsys):
        out = files["dir"] / "bench.csv"
        assert main(["--threads", "1", "bench", "--degrees", "1..3", "--trials", "3", "--seed", "7", "-o", str(out)]) == 0
        rows = list(csv.reader(out.open()))
        assert rows[0] == ["degree", "num_ctrl_pts", "mean_time_s", "std_dev_s", "local_slope"]
        assert [r[0] for r in rows[1:]] == ["1", "2", "3"] and rows[1][4] == ""
        assert "seed=7" in capsys.readouterr().out

    def test_degree_lists(self, files, capsys):
        assert main(["bench", "--degrees", "2,4", "--trials", "2"]) == 0
        text = capsys.readouterr()
        assert text.out.splitlines()[2].startswith("4,125,")


class TestEntryPoints:
    def test_module(self, files):
        r = subprocess.run([sys.executable, "-m", "regcheck", "verify", files["reflected"]], capture_output=True, text=True)
        assert r.returncode == 1 and "Irregular" in r.stdout

    @pytest.mark.skipif(shutil.which("regcheck") is None, reason="console script not installed")
    def test_console_script(self, files):
        r = subprocess.run(["regcheck", "verify", files["regular"]], capture_output=True, text=True)
        assert r.returncode == 0
