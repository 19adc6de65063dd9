import json
import subprocess
import sys

import pytest

from wedcs.cli import main

TIGHT_SPEC = {"kind": "tight", "k": 1, "W": 1, "beta_minus": 2}
RANDOM_SPEC = {"kind": "random", "seed": 5, "n": 12, "m": 30, "W": 3,
               "b_min": 1, "b_max": 3}


def _write_spec(tmp_path, spec):
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    return str(path)


def test_gen_build_verify_round_trip(tmp_path, capsys):
    spec = _write_spec(tmp_path, RANDOM_SPEC)
    graph = str(tmp_path / "g.txt")
    built = str(tmp_path / "h.txt")
    assert main(["gen", "--spec", spec, "--out", graph]) == 0
    assert main(["build", graph, "--beta", "6", "--out", built]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["validator"]["clean"]
    assert main(["verify", graph, built, "--beta", "6"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["clean"]


def test_gen_tight_with_reference(tmp_path, capsys):
    spec = _write_spec(tmp_path, TIGHT_SPEC)
    graph = str(tmp_path / "g.txt")
    ref = str(tmp_path / "ref.txt")
    assert main(["gen", "--spec", spec, "--out", graph, "--ref-out", ref]) == 0
    assert main(["verify", graph, ref, "--beta", "4", "--beta-minus", "2"]) == 0
    assert json.loads(capsys.readouterr().out)["clean"]


def test_build_on_tight_instance_is_clean(tmp_path, capsys):
    spec = _write_spec(tmp_path, TIGHT_SPEC)
    graph = str(tmp_path / "g.txt")
    main(["gen", "--spec", spec, "--out", graph])
    assert main(["build", graph, "--beta", "4", "--beta-minus", "2"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["validator"]["clean"]


def test_build_empty_graph(tmp_path, capsys):
    graph = tmp_path / "empty.txt"
    graph.write_text("g 0 0 1\n")
    assert main(["build", str(graph), "--beta", "4"]) == 0
    assert json.loads(capsys.readouterr().out)["edges_kept"] == 0


def test_malformed_line_exits_2(tmp_path, capsys):
    graph = tmp_path / "bad.txt"
    graph.write_text("g 2 1 1\ne 0 x 1\n")
    assert main(["build", str(graph), "--beta", "4"]) == 2
    assert "line 2" in capsys.readouterr().err


def test_verify_reports_upper_violations(tmp_path, capsys):
    # star with all edges kept: center degree 4 > beta = 3
    graph = tmp_path / "g.txt"
    graph.write_text("g 5 4 1\ne 0 1 1\ne 0 2 1\ne 0 3 1\ne 0 4 1\n")
    assert main(["verify", str(graph), str(graph), "--beta", "3", "--beta-minus", "1"]) == 1
    out = json.loads(capsys.readouterr().out)
    assert out["upper_violations"] == [0, 1, 2, 3]


def test_verify_reports_lower_violation_for_empty_subgraph(tmp_path, capsys):
    graph = tmp_path / "g.txt"
    graph.write_text("g 2 1 1\ne 0 1 1\n")
    empty = tmp_path / "h.txt"
    empty.write_text("g 2 0 1\n")
    assert main(["verify", str(graph), str(empty), "--beta", "4", "--beta-minus", "2"]) == 1
    assert json.loads(capsys.readouterr().out)["lower_violations"] == [0]


def test_verify_containment_violation_exits_2(tmp_path, capsys):
    graph = tmp_path / "g.txt"
    graph.write_text("g 2 1 1\ne 0 1 1\n")
    alien = tmp_path / "h.txt"
    alien.write_text("g 2 1 2\ne 0 1 2\n")
    assert main(["verify", str(graph), str(alien), "--beta", "4"]) == 2
    assert "counterpart" in capsys.readouterr().err


def test_stream_small_graph_small_output(tmp_path, capsys):
    spec = _write_spec(tmp_path, {"kind": "random", "seed": 1, "n": 6, "m": 6,
                                  "W": 2, "b_min": 1, "b_max": 2})
    graph = str(tmp_path / "g.txt")
    main(["gen", "--spec", spec, "--out", graph])
    assert main(["stream", graph, "--seeds", "3", "--epsilon", "0.2",
                 "--beta", "6"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["runs"][0]["fallback_used"] == "small_output"
    assert report["runs"][0]["ratio"] == 1.0


def test_stream_requires_seeds(tmp_path, capsys):
    graph = tmp_path / "g.txt"
    graph.write_text("g 2 1 1\ne 0 1 1\n")
    with pytest.raises(SystemExit) as exc:
        main(["stream", str(graph), "--epsilon", "0.2", "--beta", "6"])
    assert exc.value.code == 2


def test_stream_variant3_accepts_parallel_edges(tmp_path, capsys):
    graph = tmp_path / "g.txt"
    graph.write_text("g 2 2 3\ne 0 1 1\ne 0 1 3\n")
    assert main(["stream", str(graph), "--seeds", "0", "--epsilon", "0.2",
                 "--beta", "6", "--variant", "3"]) == 0
    capsys.readouterr()
    # variant 1 refuses the same stream
    assert main(["stream", str(graph), "--seeds", "0", "--epsilon", "0.2",
                 "--beta", "6"]) == 2


def test_gen_build_verify_multicopy(tmp_path, capsys):
    spec = _write_spec(tmp_path, {"kind": "multicopy", "k": 1, "W": 2})
    graph = str(tmp_path / "g.txt")
    built = str(tmp_path / "h.txt")
    assert main(["gen", "--spec", spec, "--out", graph]) == 0
    assert main(["build", graph, "--beta", "6", "--out", built]) == 0
    capsys.readouterr()
    assert main(["verify", graph, built, "--beta", "6"]) == 0
    assert json.loads(capsys.readouterr().out)["clean"]


def test_stream_jobs_do_not_change_output(tmp_path, capsys):
    spec = _write_spec(tmp_path, {"kind": "random", "seed": 3, "n": 10, "m": 18,
                                  "W": 2, "b_min": 1, "b_max": 2})
    graph = str(tmp_path / "g.txt")
    main(["gen", "--spec", spec, "--out", graph])
    args = ["stream", graph, "--seeds", "0-3", "--epsilon", "0.2", "--beta", "6"]
    assert main(args + ["--out", str(tmp_path / "serial")]) == 0
    assert main(args + ["--jobs", "2", "--out", str(tmp_path / "par")]) == 0
    assert (tmp_path / "serial.json").read_bytes() == (tmp_path / "par.json").read_bytes()
    assert (tmp_path / "serial.csv").read_bytes() == (tmp_path / "par.csv").read_bytes()


def test_stream_outputs_are_byte_identical(tmp_path, capsys):
    spec = _write_spec(tmp_path, {"kind": "random", "seed": 2, "n": 10, "m": 20,
                                  "W": 2, "b_min": 1, "b_max": 2})
    graph = str(tmp_path / "g.txt")
    main(["gen", "--spec", spec, "--out", graph])
    args = ["stream", graph, "--seeds", "0-4", "--epsilon", "0.2", "--beta", "6"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b")]) == 0
    for ext in (".json", ".csv"):
        assert (tmp_path / ("a" + ext)).read_bytes() == (tmp_path / ("b" + ext)).read_bytes()
    header = (tmp_path / "a.csv").read_text().splitlines()[0]
    assert header == "seed,ratio,peak_memory,phase1_edges,underfull_collected,fallback,extraction"


def test_stream_fail_below_threshold(tmp_path, capsys):
    graph = tmp_path / "g.txt"
    graph.write_text("g 2 1 1\ne 0 1 1\n")
    assert main(["stream", str(graph), "--seeds", "1", "--epsilon", "0.2",
                 "--beta", "6", "--fail-below", "1.1"]) == 1


def test_stream_ratio_omitted_when_oracle_infeasible(tmp_path, capsys):
    # non-bipartite graph plus a starved oracle budget: ratios become null
    # and the run still completes (greedy extraction); a uniform 5-cycle
    # cannot be closed at the search root by the pruning bound
    graph = tmp_path / "g.txt"
    graph.write_text("g 5 5 2\ne 0 1 2\ne 1 2 2\ne 2 3 2\ne 3 4 2\ne 4 0 2\n")
    assert main(["stream", str(graph), "--seeds", "0", "--epsilon", "0.2",
                 "--beta", "6", "--oracle-budget", "1"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["oracle_weight"] is None
    assert report["runs"][0]["ratio"] is None
    assert report["aggregate"]["ratio_min"] is None


def test_stream_as_is_order(tmp_path, capsys):
    graph = tmp_path / "g.txt"
    graph.write_text("g 3 2 2\ne 0 1 2\ne 1 2 1\n")
    assert main(["stream", str(graph), "--seeds", "as-is", "--epsilon", "0.2",
                 "--beta", "6"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["runs"][0]["prng"] == "as-is"


def test_cli_module_entry_point(tmp_path):
    graph = tmp_path / "g.txt"
    graph.write_text("g 2 1 1\ne 0 1 1\n")
    proc = subprocess.run(
        [sys.executable, "-m", "wedcs.cli", "build", str(graph), "--beta", "4"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["validator"]["clean"]


def test_cli_log_env_var(tmp_path):
    graph = tmp_path / "g.txt"
    graph.write_text("g 2 1 1\ne 0 1 1\n")
    proc = subprocess.run(
        [sys.executable, "-m", "wedcs.cli", "build", str(graph), "--beta", "4"],
        capture_output=True, text=True, env={"EDCS_LOG": "debug", "PATH": "/usr/bin:/bin"})
    assert proc.returncode == 0


@pytest.mark.slow
def test_cli_theorem_params(tmp_path, capsys):
    graph = tmp_path / "g.txt"
    graph.write_text("g 2 1 1\ne 0 1 1\n")
    assert main(["build", str(graph), "--theorem-params", "--epsilon", "0.4"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["params"]["beta"] >= 10**5
    assert report["validator"]["clean"]


def test_cli_w_flag_overrides_cap(tmp_path, capsys):
    graph = tmp_path / "g.txt"
    graph.write_text("g 2 1 2\ne 0 1 2\n")
    assert main(["build", str(graph), "--beta", "6", "--W", "4"]) == 0
    assert json.loads(capsys.readouterr().out)["params"]["W"] == 4
    assert main(["build", str(graph), "--beta", "6", "--W", "1"]) == 2
