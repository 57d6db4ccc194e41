import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from cubicforms.cli import main
from cubicforms.cubicmap import format_matrix, parse_matrix

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"
GOLDEN = Path(__file__).parent / "golden"


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out=out)
    return code, out.getvalue()


class TestInvariants:
    def test_f0_text(self):
        code, text = run("invariants", DATA / "f0.map")
        assert code == 0
        assert "G1122 = 1\n" in text
        for label in ("1111", "1112", "1212", "1222", "2222"):
            assert f"G{label} = 0\n" in text
        assert "omega[1](z1, z2) = z1^2z2^2\n" in text
        assert "Omega[1]_1122 = 1/6\n" in text
        assert "omega[6](z3, z4) = z3^2z4^2\n" in text

    def test_f0_json(self):
        code, text = run("invariants", DATA / "f0.map", "--json")
        data = json.loads(text)
        assert code == 0
        assert data["determinants"]["G1122"] == "1"
        assert data["forms"][2]["polynomial"] == "z1^2z4^2 + z1z2z3z4 + z2^2z3^2"
        assert data["forms"][3]["components"] == {"1234": "1/24"}

    @pytest.mark.parametrize("name", ["zero.map", "linear.map"])
    def test_no_cubic_part(self, name):
        code, text = run("invariants", DATA / name, "--json")
        data = json.loads(text)
        assert set(data["determinants"].values()) == {"0"}
        assert all(f["polynomial"] == "0" and not f["components"] for f in data["forms"])

    def test_printed_form_option(self, tmp_path):
        m = tmp_path / "g.map"
        m.write_text("y1 = x1^2x2\ny2 = x2^3 + x1x2^2\n")
        _, derived = run("invariants", m, "--json")
        _, printed = run("invariants", m, "--json", "--form", "printed")
        assert json.loads(derived)["forms"][1] != json.loads(printed)["forms"][1]

    def test_missing_file(self, capsys):
        code, _ = run("invariants", DATA / "nope.map")
        assert code == 2
        assert "cannot read" in capsys.readouterr().err

    def test_parse_error_reports_line(self, tmp_path, capsys):
        m = tmp_path / "bad.map"
        m.write_text("y1 = x1\ny2 = x1^4\n")
        assert run("invariants", m)[0] == 2
        assert "line 2" in capsys.readouterr().err


class TestVerify:
    def test_f0(self):
        code, text = run("verify", DATA / "f0.map", "--trials", 10, "--seed", 0)
        assert code == 0
        assert text.rstrip().endswith("80/80 checks passed")

    def test_random_json(self):
        code, text = run("verify", "--random", "--trials", 2, "--json")
        rows = json.loads(text)
        assert code == 0 and len(rows) == 16
        assert set(rows[0]) == {"law", "trial", "seed", "pass"}

    def test_printed_forms_fail(self):
        code, text = run("verify", "--random", "--trials", 2, "--form", "printed")
        assert code == 1
        assert "FAIL" in text and "residual" in text

    @pytest.mark.parametrize("trials", ["0", "-3", "x"])
    def test_bad_trials(self, trials):
        assert run("verify", "--random", "--trials", trials)[0] == 2

    def test_needs_exactly_one_source(self):
        assert run("verify")[0] == 2
        assert run("verify", DATA / "f0.map", "--random")[0] == 2

    def test_deterministic(self):
        a = run("verify", "--random", "--trials", 2, "--seed", 17, "--json")
        b = run("verify", "--random", "--trials", 2, "--seed", 17, "--json")
        assert a == b


class TestCompose:
    def test_right_identity_verbatim(self):
        code, text = run("compose", DATA / "f0.map", DATA / "identity.mat", "--right")
        assert code == 0 and text == "y1 = x1^3\ny2 = x2^3\n"

    def test_right_shear(self):
        _, text = run("compose", DATA / "f0.map", DATA / "shear.mat", "--right")
        assert text == "y1 = x1^3 + 3x1^2x2 + 3x1x2^2 + x2^3\ny2 = x2^3\n"

    def test_left_singular(self, capsys):
        assert run("compose", DATA / "f0.map", DATA / "singular.mat", "--left")[0] == 2
        assert "singular" in capsys.readouterr().err

    def test_right_singular_allowed(self):
        code, text = run("compose", DATA / "f0.map", DATA / "singular.mat", "--right")
        assert code == 0 and text == "y1 = x1^3\ny2 = 0\n"

    def test_side_required(self):
        assert run("compose", DATA / "f0.map", DATA / "shear.mat")[0] == 2

    def test_round_trip(self, tmp_path):
        src = tmp_path / "m.map"
        src.write_text("y1 = 2x1^3 - x1x2^2 + 1/3 x2\ny2 = x1^2x2 + 7\n")
        mat = tmp_path / "t.mat"
        mat.write_text("2 1/3\n-1 5\n")
        inv = tmp_path / "tinv.mat"
        inv.write_text(format_matrix(parse_matrix(mat.read_text()).inverse()))
        _, canonical = run("compose", src, DATA / "identity.mat", "--right")
        mid = tmp_path / "mid.map"
        mid.write_text(run("compose", src, mat, "--right")[1])
        assert run("compose", mid, inv, "--right")[1] == canonical

    def test_left_affine_round_trip(self, tmp_path):
        mid = tmp_path / "mid.map"
        _, canonical = run("compose", DATA / "f0.map", DATA / "identity.mat", "--right")
        mid.write_text(run("compose", DATA / "f0.map", DATA / "affine.mat", "--left")[1])
        inv = tmp_path / "inv.mat"
        inv.write_text(format_matrix(parse_matrix((DATA / "affine.mat").read_text()).inverse()))
        assert run("compose", mid, inv, "--left")[1] == canonical


class TestCheckThm43:
    def test_shear(self):
        code, text = run("check-thm43", DATA / "f0.map", DATA / "shear.mat", "--json")
        rows = json.loads(text)
        assert code == 0
        assert [r["lhs"] for r in rows] == ["0", "0", "1", "0", "1", "1"]
        assert all(r["equal"] and r["lhs"] == r["rhs"] for r in rows)

    def test_zero_matrix(self):
        code, text = run("check-thm43", DATA / "f0.map", DATA / "zero.mat")
        assert code == 0
        body = text.splitlines()[1:]
        assert len(body) == 6
        assert all(line.split()[1:] == ["0", "0", "yes"] for line in body)

    def test_printed_form_mismatch(self, tmp_path):
        m = tmp_path / "g.map"
        m.write_text("y1 = x1x2^2\ny2 = x2^3\n")
        code, text = run("check-thm43", m, DATA / "affine.mat", "--form", "printed")
        assert code == 1 and "NO" in text


class TestDiscrepancies:
    def test_golden_text(self):
        code, text = run("discrepancies")
        assert code == 0
        assert text.encode() == (GOLDEN / "discrepancies.txt").read_bytes()

    def test_golden_json(self):
        _, text = run("discrepancies", "--json")
        assert text.encode() == (GOLDEN / "discrepancies.json").read_bytes()


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "cubicforms", "compose", str(DATA / "f0.map"), str(DATA / "singular.mat"), "--left"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 2
    assert proc.stderr.startswith("cubicforms: error:")
    assert run("no-such-command")[0] == 2
