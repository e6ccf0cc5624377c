import json

import numpy as np
import pytest

from conftest import SWAP, random_system
from polydyn import centrality, design, dynamics, io
from polydyn.cli import RunConfig, main, run


def _files(d):
    return {p.relative_to(d).as_posix(): p.read_bytes() for p in sorted(d.rglob("*")) if p.is_file()}


@pytest.fixture
def system(tmp_path, rng):
    W, a, X0 = random_system(rng, n=7, m=2)
    io.write_matrix(W, tmp_path / "w.csv")
    io.write_vector(a, tmp_path / "a.csv")
    io.write_matrix(X0, tmp_path / "x0.csv")
    return tmp_path, W, a, X0


def _argv(d, *names):
    out = []
    for name in names:
        out += [f"--{name}", str(d / f"{name}.csv")]
    return out


# ---- file formats

@pytest.mark.parametrize("suffix", [".csv", ".json"])
def test_matrix_roundtrip_bit_identical(tmp_path, rng, suffix):
    X = rng.normal(size=(9, 4)) * 10.0 ** rng.integers(-300, 300, size=(9, 4))
    X[0, 0], X[0, 1] = 0.1, 1 / 3
    io.write_matrix(X, tmp_path / f"x{suffix}")
    Y = io.read_matrix(tmp_path / f"x{suffix}")
    assert Y.dtype == X.dtype and np.array_equal(X.view(np.uint64), Y.view(np.uint64))


@pytest.mark.parametrize("suffix", [".csv", ".json"])
def test_vector_roundtrip(tmp_path, rng, suffix):
    v = rng.random(13)
    io.write_vector(v, tmp_path / f"a{suffix}")
    assert np.array_equal(io.read_vector(tmp_path / f"a{suffix}"), v)


def test_json_matrix_forms(tmp_path):
    p = tmp_path / "w.json"
    p.write_text('{"n": 2, "m": 2, "entries": [0, 1, 1, 0]}')
    assert np.array_equal(io.read_matrix(p), SWAP)
    p.write_text('{"entries": [[0, 1], [1, 0]]}')
    assert np.array_equal(io.read_matrix(p), SWAP)
    for bad in ('{"n": 2, "m": 2, "entries": [0, 1, 1]}', '{"entries": [0, 1]}',
                '{"entries": [[0, 1]], "colour": 1}', '{"n": 3, "entries": [[0, 1], [1, 0]]}'):
        p.write_text(bad)
        with pytest.raises(io.FileFormatError):
            io.read_matrix(p)


def test_malformed_csv_reports_line(tmp_path):
    p = tmp_path / "w.csv"
    p.write_text("0,1\n# comment\n\n1,x\n")
    with pytest.raises(io.FileFormatError) as e:
        io.read_matrix(p)
    assert e.value.line == 4 and ":4:" in str(e.value)
    p.write_text("0,1\n1,0,0\n")
    with pytest.raises(io.FileFormatError) as e:
        io.read_matrix(p)
    assert e.value.line == 2


def test_malformed_json_reports_line(tmp_path):
    p = tmp_path / "w.json"
    p.write_text('{"entries":\n [[0, 1],\n [1, 0]\n')
    with pytest.raises(io.FileFormatError) as e:
        io.read_matrix(p)
    assert e.value.line is not None


def test_trajectory_csv(tmp_path):
    traj, _ = dynamics.iterate(SWAP, [0.5, 0.5], [[0.0], [1.0]], record_every=5)
    io.write_trajectory(traj, tmp_path / "t.csv")
    lines = (tmp_path / "t.csv").read_text().splitlines()
    assert lines[0] == "k,node,dim,value"
    assert lines[1] == "0,1,1,0" and lines[2] == "0,2,1,1"
    assert len(lines) == 1 + 2 * len(traj.steps)


# ---- commands

def test_simulate_matches_closed_form(system, capsys):
    d, W, a, X0 = system
    out = d / "run"
    assert main(["simulate", *_argv(d, "w", "a", "x0"), "--tol", "1e-10", "--out", str(out)]) == 0
    summary = capsys.readouterr().out.strip()
    traj, _ = dynamics.iterate(W, a, X0, tol=1e-10)
    assert summary == f"converged k={traj.k} case=strictly-substochastic"
    lim = json.loads((out / "limit.json").read_text())
    X_inf = np.array(lim["X_inf"]["entries"]).reshape(7, 2)
    assert np.abs(X_inf - dynamics.closed_form_limit(W, a, X0).X_inf).max() < 1e-8
    assert np.array_equal(io.read_matrix(out / "X_inf.csv"), X_inf)
    assert (out / "trajectory.csv").read_text().startswith("k,node,dim,value\n")


def test_simulate_periodic_exit_1(tmp_path, capsys):
    io.write_matrix(SWAP, tmp_path / "w.csv")
    io.write_vector([1, 1], tmp_path / "a.csv")
    io.write_matrix([[0], [1]], tmp_path / "x0.csv")
    assert main(["simulate", *_argv(tmp_path, "w", "a", "x0"), "--k-max", "500",
                 "--out", str(tmp_path)]) == 1
    assert "not converged" in capsys.readouterr().out
    lim = json.loads((tmp_path / "limit.json").read_text())
    assert lim["diagnostics"]["converges"] is False


def test_design_damping_outside_hull(tmp_path, capsys):
    io.write_matrix(SWAP, tmp_path / "w.csv")
    io.write_matrix([[0], [1]], tmp_path / "x0.csv")
    io.write_matrix([[0], [2]], tmp_path / "xinf.csv")
    assert main(["design-damping", *_argv(tmp_path, "w", "x0", "xinf"), "--out", str(tmp_path)]) == 1
    rep = json.loads((tmp_path / "feasibility.json").read_text())
    assert rep["feasible"] is False and rep["per_node"][1] == "sign-mismatch"
    assert "node 2 sign-mismatch" in capsys.readouterr().out


def test_design_damping_feasible(tmp_path):
    io.write_matrix(SWAP, tmp_path / "w.csv")
    io.write_matrix([[-1], [2]], tmp_path / "x0.csv")
    io.write_matrix([[0], [1]], tmp_path / "xinf.csv")
    assert main(["design-damping", *_argv(tmp_path, "w", "x0", "xinf"), "--out", str(tmp_path)]) == 0
    assert np.allclose(io.read_vector(tmp_path / "a.csv"), 0.5, atol=1e-12)


def test_commands_are_thin_dispatch(system, capsys):
    d, W, a, X0 = system
    X_inf = dynamics.closed_form_limit(W, a, X0).X_inf
    io.write_matrix(X_inf, d / "xinf.csv")

    assert main(["limit", *_argv(d, "w", "a", "x0"), "--out", str(d / "l")]) == 0
    assert np.array_equal(io.read_matrix(d / "l" / "X_inf.csv"), X_inf)

    assert main(["classify", *_argv(d, "w", "a"), "--out", str(d / "c")]) == 0
    c = json.loads((d / "c" / "classify.json").read_text())
    assert c["case"] == dynamics.classify(W, a).case

    assert main(["design-initial", *_argv(d, "w", "a", "xinf"), "--out", str(d / "di")]) == 0
    assert np.array_equal(io.read_matrix(d / "di" / "X0.csv"), design.solve_initial(W, a, X_inf))

    assert main(["design-family", *_argv(d, "w", "xinf"), "--out", str(d / "df")]) == 0
    assert np.array_equal(io.read_matrix(d / "df" / "X0.csv"), design.unbiased_design(W, X_inf).X0)
    assert main(["design-family", *_argv(d, "w", "a", "xinf"), "--out", str(d / "df2")]) == 0
    assert np.array_equal(io.read_matrix(d / "df2" / "X0.csv"), design.design_family(W, X_inf, a).X0)

    assert main(["centrality", *_argv(d, "w"), "--alpha", "0.7", "--out", str(d / "ca")]) == 0
    assert np.array_equal(io.read_vector(d / "ca" / "centrality.csv"),
                          centrality.alpha_centrality(W, 0.7))
    assert main(["centrality", *_argv(d, "w"), "--out", str(d / "cp")]) == 0
    assert np.array_equal(io.read_vector(d / "cp" / "centrality.csv"), centrality.perron_centrality(W))
    assert main(["centrality", *_argv(d, "w", "a"), "--out", str(d / "cn")]) == 0
    V = dynamics.closed_form_limit(W, a, X0).V
    assert np.array_equal(io.read_vector(d / "cn" / "centrality.csv"), centrality.net_influence(V))
    assert "node" in capsys.readouterr().out


def test_limit_singular_exit_1(tmp_path):
    io.write_matrix(SWAP, tmp_path / "w.csv")
    io.write_vector([1, 1], tmp_path / "a.csv")
    io.write_matrix([[0], [1]], tmp_path / "x0.csv")
    assert main(["limit", *_argv(tmp_path, "w", "a", "x0"), "--out", str(tmp_path)]) == 1
    assert "error" in json.loads((tmp_path / "limit.json").read_text())


def test_json_format_output(system):
    d, W, a, X0 = system
    assert main(["limit", *_argv(d, "w", "a", "x0"), "--format", "json", "--out", str(d / "j")]) == 0
    assert np.array_equal(io.read_matrix(d / "j" / "X_inf.json"),
                          dynamics.closed_form_limit(W, a, X0).X_inf)


# ---- input errors

def test_malformed_input_exit_2(tmp_path, capsys):
    (tmp_path / "w.csv").write_text("0,1\n1,zero\n")
    io.write_vector([0.5, 0.5], tmp_path / "a.csv")
    io.write_matrix([[0], [1]], tmp_path / "x0.csv")
    assert main(["simulate", *_argv(tmp_path, "w", "a", "x0"), "--out", str(tmp_path)]) == 2
    assert "w.csv:2:" in capsys.readouterr().err


def test_missing_file_and_invalid_system_exit_2(tmp_path, capsys):
    assert main(["classify", "--w", str(tmp_path / "nope.csv"), "--a", str(tmp_path / "a.csv")]) == 2
    assert "no such file" in capsys.readouterr().err
    io.write_matrix([[0.9, 0], [0, 1]], tmp_path / "w.csv")
    io.write_vector([0.5, 0.5], tmp_path / "a.csv")
    assert main(["classify", *_argv(tmp_path, "w", "a")]) == 2
    assert "row 1" in capsys.readouterr().err
    assert main(["design-initial", *_argv(tmp_path, "w")]) == 2


def test_config_file_and_unknown_keys(system, capsys):
    d, W, a, X0 = system
    cfg = {"w": str(d / "w.csv"), "a": str(d / "a.csv"), "x0": str(d / "x0.csv"),
           "out": str(d / "cfg"), "tol": 1e-12}
    (d / "cfg.json").write_text(json.dumps(cfg))
    assert main(["simulate", "--config", str(d / "cfg.json")]) == 0
    assert (d / "cfg" / "limit.json").exists()
    cfg["colour"] = "red"
    (d / "cfg.json").write_text(json.dumps(cfg))
    assert main(["simulate", "--config", str(d / "cfg.json")]) == 2
    assert "unknown config keys" in capsys.readouterr().err
    with pytest.raises(Exception):
        RunConfig.from_dict({"command": "simulate", "bogus": 1})


def test_cli_flags_override_config(system):
    d, *_ = system
    (d / "cfg.json").write_text(json.dumps({"out": str(d / "from_cfg")}))
    assert main(["classify", "--config", str(d / "cfg.json"), *_argv(d, "w", "a"),
                 "--out", str(d / "from_flag")]) == 0
    assert (d / "from_flag" / "classify.json").exists()
    assert not (d / "from_cfg").exists()


# ---- scenarios

def test_scenario_cleavage_rerun_bit_identical(tmp_path, capsys):
    assert main(["scenario", "cleavage", "--seed", "7", "--out", str(tmp_path / "r1")]) in (0, 1)
    assert main(["scenario", "cleavage", "--seed", "7", "--out", str(tmp_path / "r2")]) in (0, 1)
    f1, f2 = _files(tmp_path / "r1"), _files(tmp_path / "r2")
    for name in ("W.csv", "a.csv", "X0.csv", "trajectory.csv", "histogram.csv", "limit.json"):
        assert name in f1
    assert f1 == f2
    assert "modes initial=" in capsys.readouterr().out


def test_seed_env_overrides_config(tmp_path, monkeypatch):
    (tmp_path / "cfg.json").write_text(json.dumps({"seed": 1, "n": 8}))
    monkeypatch.setenv("POLYDYN_SEED", "5")
    assert main(["scenario", "random-array", "--config", str(tmp_path / "cfg.json"),
                 "--out", str(tmp_path / "env")]) == 0
    assert json.loads((tmp_path / "env" / "spec.json").read_text())["seed"] == 5
    assert main(["scenario", "random-array", "--config", str(tmp_path / "cfg.json"),
                 "--seed", "9", "--out", str(tmp_path / "flag")]) == 0
    assert json.loads((tmp_path / "flag" / "spec.json").read_text())["seed"] == 9


def test_scenario_params_and_replicas(tmp_path, capsys):
    assert main(["scenario", "two-value-A", "--n", "12", "--param", "a_high=0.9",
                 "--replicas", "3", "--seed", "2", "--out", str(tmp_path)]) == 0
    outs = capsys.readouterr().out.splitlines()
    assert [s.split(":")[0] for s in outs] == ["replica 0", "replica 1", "replica 2"]
    a0 = io.read_vector(tmp_path / "replica_000" / "a.csv")
    assert set(a0.tolist()) == {0.1, 0.9}
    # replica r is the plain run with seed + r
    assert main(["scenario", "two-value-A", "--n", "12", "--param", "a_high=0.9",
                 "--seed", "3", "--out", str(tmp_path / "single")]) == 0
    f1 = _files(tmp_path / "replica_001")
    f2 = _files(tmp_path / "single")
    assert f1 == f2


def test_gnuplot_script(system):
    d, *_ = system
    assert main(["simulate", *_argv(d, "w", "a", "x0"), "--gnuplot-script", "--out", str(d / "g")]) == 0
    text = (d / "g" / "plot.gp").read_text()
    assert "X_inf.csv" in text and "plot" in text


def test_bad_scenario_param_exit_2(tmp_path):
    assert main(["scenario", "cleavage", "--param", "bogus=1", "--out", str(tmp_path)]) == 2
    assert main(["scenario", "polytope", "--m", "3", "--out", str(tmp_path)]) == 2


def test_run_validates_before_computing(tmp_path):
    assert run(RunConfig(command="simulate", w=str(tmp_path / "w.csv"))) == 2
    assert run(RunConfig(command="simulate", format="xml")) == 2
