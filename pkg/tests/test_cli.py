import json

import numpy as np
import pytest

from djcm import FieldState, evolve
from djcm.cli import main
from conftest import fig1_params


def run(capsys, *args):
    rc = main(list(args))
    out, err = capsys.readouterr()
    return rc, out, err


def test_pnd_rows(tmp_path, capsys):
    out = tmp_path / "p.csv"
    rc, _, _ = run(capsys, "pnd", "--f", "identity", "--g", "0.5", "--beta", "2", "--omega", "1",
                   "--w1", "100", "--w2", "100", "--t", "1", "--n-max", "20", "-o", str(out))
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "n,p_n" and len(lines) == 22
    assert float(lines[5].split(",")[1]) == pytest.approx(np.exp(-4) * 4**4 / 24, rel=1e-11)


def test_evolve_json_round_trip(tmp_path, capsys):
    out = tmp_path / "s.json"
    assert run(capsys, "evolve", "--t", "0.7", "-o", str(out))[0] == 0
    s = FieldState.from_json(out.read_text())
    ref = evolve(fig1_params(), 0.7)
    assert np.array_equal(s.excited, ref.excited)


def test_witness_time_series(capsys):
    rc, out, _ = run(capsys, "mandel", "--t-start", "0", "--t-stop", "1", "--t-count", "3")
    assert rc == 0
    lines = out.splitlines()
    assert lines[0] == "t,mean_n,q_mandel,d1,s_x,s_p" and len(lines) == 4
    assert lines[1].split(",")[2] == "-0.2"


def test_json_format(capsys):
    rc, out, _ = run(capsys, "squeeze", "--format", "json")
    assert rc == 0 and json.loads(out)[0]["t"] == 1.0


def test_grid_output(capsys):
    rc, out, _ = run(capsys, "husimi", "--n-re", "5", "--n-im", "4")
    assert rc == 0
    lines = out.splitlines()
    assert lines[1] == "# resolution: 5,4" and len(lines) == 6
    rc, out, _ = run(capsys, "wigner", "--n-re", "3", "--n-im", "3", "--long", "--terms", "diagonal")
    assert rc == 0 and out.splitlines()[0] == "re,im,value"


def test_sweep_and_oracle_engine(capsys):
    rc, out, _ = run(capsys, "sweep", "--axis", "time", "--start", "0", "--stop", "0.2", "--count", "2",
                     "--witness", "mandel,d1", "--engine", "oracle", "--dt", "1e-3", "--kinds", "sin")
    assert rc == 0
    rows = out.splitlines()
    assert rows[1] == "time,kind,q_mandel,d1,status" and len(rows) == 4


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# model\nf = identity\nn-max = 3\nbeta = 1\n")
    rc, out, _ = run(capsys, "pnd", "--config", str(cfg))
    assert rc == 0 and len(out.splitlines()) == 5
    assert float(out.splitlines()[1].split(",")[1]) == pytest.approx(np.exp(-1), rel=1e-11)
    rc, out, _ = run(capsys, "pnd", "--config", str(cfg), "--n-max", "1")
    assert rc == 0 and len(out.splitlines()) == 3


@pytest.mark.parametrize(
    "args",
    [
        ["pnd", "--g", "abc"],
        ["nope"],
        [],
        ["sweep", "--axis", "bogus"],
        ["pnd", "--f", "cos"],
        ["pnd", "-o", "/no/such/dir/out.csv"],
        ["mandel", "--t-start", "0"],
    ],
)
def test_argument_errors_exit_2(args, capsys):
    rc, _, err = run(capsys, *args)
    assert rc == 2
    assert "usage" in err or "error" in err


def test_bad_config_key_exit_2(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    assert run(capsys, "pnd", "--config", str(cfg))[0] == 2


def test_numerical_errors_exit_1(capsys):
    rc, _, err = run(capsys, "pnd", "--beta", "80")
    assert rc == 1 and "TruncationTooLarge" in err
    rc, _, err = run(capsys, "evolve", "--f", "poly:0,1e13")
    assert rc == 1 and "MagnitudeOverflow" in err


def test_validate(tmp_path, capsys):
    dump = tmp_path / "traj.csv"
    rc, out, _ = run(capsys, "validate", "--t-end", "0.5", "--dump-manifold", "2", "--dump", str(dump))
    assert rc == 0 and "max deviation" in out
    assert dump.read_text().startswith("t,re_c2,im_c2,re_c1,im_c1")
    rc, _, _ = run(capsys, "validate", "--t-end", "0.5", "--dt", "1e-2", "--tol", "1e-14")
    assert rc == 1
