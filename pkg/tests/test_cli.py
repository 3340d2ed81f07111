import json

import numpy as np
import pytest

from hessval.cli import run
from hessval.convexfun import Quadratic, RadialConeU, dump
from hessval.zetaspace import hat, write_profile


@pytest.fixture
def files(tmp_path):
    dump(RadialConeU(2, 0.5), tmp_path / "cone.json")
    dump(Quadratic([[1.0, 0.2], [0.2, 2.0]]), tmp_path / "q.json")
    write_profile(hat(), tmp_path / "hat.csv")
    return tmp_path


def call(capsys, *argv):
    code = run([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_valuate_cone_closed_form(files, capsys):
    code, out, _ = call(capsys, "valuate", "--fn", files / "cone.json",
                        "--zeta", files / "hat.csv", "--j", 1,
                        "--route", "closed-form")
    assert code == 0
    row = out.strip().splitlines()[-1].split(",")
    assert row[0] == "Z_1"
    assert float(row[1]) == pytest.approx(2.35619449, rel=1e-8)
    assert float(row[2]) == 0.0


def test_valuate_json_and_routes_agree(files, capsys):
    vals = []
    for route in ("quadrature", "moreau"):
        code, out, _ = call(capsys, "valuate", "--fn", files / "q.json",
                            "--zeta", "bump:1.5", "--j", 1, "--route", route,
                            "--json")
        assert code == 0
        vals.append(json.loads(out)["rows"][0]["value"])
    assert vals[0] == pytest.approx(vals[1], rel=1e-8)


def test_output_is_deterministic(files, capsys):
    args = ("measure", "--fn", files / "q.json", "--box=-1:1,-1:1", "--mc",
            "--samples", 20000)
    first = call(capsys, *args)[1]
    assert first == call(capsys, *args)[1]
    assert "# seed=42" in first


def test_seed_environment(files, capsys, monkeypatch):
    monkeypatch.setenv("HESSVAL_SEED", "7")
    out = call(capsys, "measure", "--fn", files / "q.json", "--box=0:1,0:1",
               "--mc", "--samples", 1000, "--j", 0)[1]
    assert "# seed=7" in out


def test_measure_exact_rows(files, capsys):
    code, out, _ = call(capsys, "measure", "--fn", files / "q.json",
                        "--box=-1:1,-1:1", "--j", 2)
    assert code == 0
    row = out.strip().splitlines()[-1]
    assert row.startswith('"-1:1,-1:1",2,')
    assert float(row.split(",")[-2]) == pytest.approx(4 * 1.96)


def test_decompose(files, capsys):
    (files / "v.json").write_text(json.dumps(
        {"terms": [{"j": 1, "zeta": "hat"}, {"j": 2, "zeta": "bump:1.5",
                                             "coef": 2}]}))
    code, out, _ = call(capsys, "decompose", "--fn", files / "q.json",
                        "--valuation", files / "v.json")
    assert code == 0
    rows = {l.split(",")[0]: float(l.split(",")[1])
            for l in out.splitlines() if l.startswith(("Z_", "sum"))}
    assert rows["Z_0"] == pytest.approx(0.0, abs=1e-9)
    assert rows["sum"] == pytest.approx(rows["Z_1"] + rows["Z_2"])


def test_recover_zeta_round_trip(files, capsys):
    cv = files / "cv.csv"
    assert call(capsys, "recover-zeta", "--synthesize-from",
                files / "hat.csv", "--n", 2, "--out", cv)[0] == 0
    code, out, _ = call(capsys, "recover-zeta", "--cone-values", cv, "--n", 2,
                        "--reference", files / "hat.csv")
    assert code == 0
    meta = dict(l[2:].split("=") for l in out.splitlines()
                if l.startswith("# "))
    assert float(meta["sup_gap"]) <= 1e-3
    assert float(meta["limit_gap"]) <= 1e-3


def test_abel_forward(capsys):
    code, out, _ = call(capsys, "abel", "--forward", "--input", "gaussian:6",
                        "--points", "0,1")
    assert code == 0
    vals = [float(l.split(",")[1]) for l in out.splitlines()[-2:]]
    assert vals == pytest.approx(np.sqrt(np.pi) / 2 * np.exp([0.0, -1.0]))


def test_transform_moreau_writes_function(files, capsys):
    out_path = files / "m.json"
    code = call(capsys, "transform", "--fn", files / "q.json", "--op",
                "moreau", "--lambda", 1.0, "--out", out_path)[0]
    assert code == 0
    assert json.loads(out_path.read_text())["type"] == "quadratic"


def test_exit_codes(files, capsys):
    # malformed flags
    assert call(capsys, "valuate", "--fn", files / "q.json")[0] == 64
    assert call(capsys, "frobnicate")[0] == 64
    assert call(capsys, "transform", "--fn", files / "q.json", "--op",
                "moreau")[0] == 64
    # validation error
    assert call(capsys, "valuate", "--fn", files / "q.json", "--zeta", "hat",
                "--j", 5)[0] == 1
    assert call(capsys, "valuate", "--fn", files / "missing.json", "--zeta",
                "hat", "--j", 1)[0] == 1


def test_certification_failure_exit_code(files, capsys):
    t = np.concatenate([[0.0], np.geomspace(1e-6, 1.0, 200)])
    z = np.concatenate([[1.0], t[1:] ** -0.2])
    from hessval.zetaspace import ZetaProfile
    write_profile(ZetaProfile.from_samples(t, z, 1.0), files / "bad.csv")
    assert call(capsys, "recover-zeta", "--cone-values", files / "bad.csv",
                "--n", 2)[0] == 2
