import csv
import io
import json

import numpy as np
import pytest

from equitynet import cli


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        p = tmp_path / name
        p.write_text(json.dumps(obj))
        return str(p)

    return {
        "pair": write("pair.json", {"n": 2, "edges": [[0, 1, 1.0]]}),
        "tri": write("tri.json", {"n": 3, "edges": [[0, 1, 1.0], [0, 2, 0.8], [1, 2, 0.6]]}),
        "circ": write("circ.json", {"n": 10, "matrix": [
            float(i != j and abs(i - j) != 5) for i in range(10) for j in range(10)]}),
        "lin": write("lin.json", {"family": "capped_linear", "alpha": 0.5, "beta": 0.5}),
        "fig": write("fig.json", {"family": "capped_linear", "alpha": 0.9, "beta": 0.1}),
        "half": write("half.json", [0.5, 0.5]),
        "zero": write("zero.json", [0.0, 0.0]),
        "over": write("over.json", [1.0, 0.5]),
        "dir": tmp_path,
    }


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_equilibrium(files, capsys):
    code, out, _ = run(capsys, "equilibrium", "--network", files["pair"], "--model", files["lin"], "--shares", files["half"])
    assert code == 0
    assert json.loads(out)["performance"] == pytest.approx(0.612245, abs=1e-6)
    code, out, _ = run(capsys, "equilibrium", "--network", files["pair"], "--model", files["lin"], "--shares", files["zero"])
    assert code == 0 and json.loads(out)["actions"] == [0.0, 0.0] and json.loads(out)["performance"] == 0.0
    code, _, err = run(capsys, "equilibrium", "--network", files["pair"], "--model", files["lin"], "--shares", files["over"])
    assert code == 2 and "sum" in err


def test_optimize(files, capsys):
    code, out, _ = run(capsys, "optimize", "--network", files["tri"], "--model", files["lin"], "--objective", "sp")
    assert code == 0 and np.allclose(json.loads(out)["shares"], [0.409091, 0.363636, 0.227273], atol=1e-6)
    code, out, _ = run(capsys, "optimize", "--network", files["circ"], "--model", files["lin"])
    data = json.loads(out)
    assert data["c"] == pytest.approx(0.8, abs=1e-12) and len(data["ties"]) > 1
    out_path = files["dir"] / "rp.json"
    code, _, _ = run(capsys, "optimize", "--network", files["pair"], "--model", files["lin"], "--objective", "rp",
                     "--out", str(out_path))
    assert code == 0 and json.loads(out_path.read_text())["s_star"] == pytest.approx(0.5253, abs=1e-4)


def test_input_and_solver_errors(files, capsys):
    code, _, _ = run(capsys, "optimize", "--network", str(files["dir"] / "missing.json"), "--model", files["lin"])
    assert code == 2
    bad = files["dir"] / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "optimize", "--network", str(bad), "--model", files["lin"])[0] == 2
    hot = files["dir"] / "hot.json"
    hot.write_text(json.dumps({"family": "capped_linear", "alpha": 0.9, "beta": 3.0}))
    assert run(capsys, "equilibrium", "--network", files["pair"], "--model", str(hot), "--shares", files["half"])[0] == 3
    with pytest.raises(SystemExit) as exc:
        cli.main(["optimize", "--network", files["pair"], "--model", files["lin"], "--objective", "xx"])
    assert exc.value.code == 2


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_sweep_link(files, capsys, monkeypatch):
    monkeypatch.setenv("EQUITYNET_THREADS", "3")
    argv = ["sweep", "--network", files["tri"], "--model", files["fig"], "--objective", "rp",
            "--param", "link(1,2)", "--range", "0.25:0.79", "--steps", "40"]
    code, out, _ = run(capsys, *argv)
    rows = _rows(out)
    assert code == 0 and len(rows) == 40
    assert list(rows[0]) == ["param", "sigma_0", "sigma_1", "sigma_2", "U_0", "U_1", "U_2", "Y", "c", "s", "active_mask"]
    sigma2 = np.array([float(r["sigma_1"]) for r in rows])
    k = int(np.argmin(sigma2))
    assert 0 < k < len(rows) - 1
    u2 = np.diff([float(r["U_1"]) for r in rows])
    assert np.any(u2 > 0) and np.any(u2 < 0)
    monkeypatch.setenv("EQUITYNET_THREADS", "1")
    assert run(capsys, *argv)[1] == out  # byte-identical regardless of threads


def test_sweep_beta_and_edge_cases(files, capsys):
    code, out, _ = run(capsys, "sweep", "--network", files["pair"], "--model", files["lin"], "--objective", "rp",
                       "--param", "beta", "--range", "0.1:2.0", "--steps", "8")
    s = np.array([float(r["s"]) for r in _rows(out)])
    assert code == 0 and np.all(np.diff(s) > 0)
    code, out, _ = run(capsys, "sweep", "--network", files["pair"], "--model", files["lin"],
                       "--param", "beta", "--range", "0.3:0.3", "--steps", "10")
    assert len(_rows(out)) == 1 and float(_rows(out)[0]["param"]) == 0.3
    code, out, err = run(capsys, "sweep", "--network", files["pair"], "--model", files["lin"],
                         "--param", "link(0,1)", "--range", "0:1", "--steps", "3")
    rows = _rows(out)
    assert code == 0 and rows[0]["Y"] == "nan" and "warning" in err and rows[2]["Y"] != "nan"
    assert run(capsys, "sweep", "--network", files["pair"], "--model", files["lin"],
               "--param", "link(0,5)", "--range", "0:1")[0] == 2
    assert run(capsys, "sweep", "--network", files["pair"], "--model", files["lin"],
               "--param", "beta", "--range", "1:0")[0] == 2


def test_verify_subset(capsys):
    code, out, _ = run(capsys, "verify", "--only", "3,4")
    assert code == 0 and out.count("[PASS]") == 2
