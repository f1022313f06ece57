import itertools
import json
import os
import shutil
import subprocess

import jsonschema
import pytest

CLI = os.environ.get("TSOGAME_CLI") or shutil.which("tsogame")
pytestmark = pytest.mark.skipif(CLI is None, reason="tsogame CLI not found")

RIGHTS = ["always", "before", "after", "never"]


def run(*args):
    return subprocess.run([CLI, *map(str, args)], capture_output=True, text=True, check=False)


def programs(root):
    return sorted((root / "tests" / "corpus" / "programs").glob("*.prog"))


def test_solve_exit_codes_and_schema(root, schema):
    verdict = schema("verdict")
    for prog in programs(root):
        r = run("solve", prog, "--semantics", "sc")
        assert r.returncode == 0, r.stderr
        jsonschema.validate(json.loads(r.stdout), verdict)
        for a, b in itertools.product(RIGHTS, RIGHTS):
            r = run("solve", prog, "--policy", f"A={a},B={b}")
            out = json.loads(r.stdout)
            jsonschema.validate(out, verdict)
            assert r.returncode == (1 if out["group"] == "III" else 0)


def test_input_errors_exit_two(root, tmp_path):
    assert run("solve", tmp_path / "missing.prog").returncode == 2
    bad = tmp_path / "bad.prog"
    bad.write_text("domain 0\nvars x\nprocess P\n  state q init\n  q -> q : read y 0\n")
    r = run("solve", bad)
    assert r.returncode == 2 and r.stdout == "" and "line 5" in r.stderr
    assert run("classify", "A=sometimes,B=never").returncode == 2


def test_reach_and_harness_schema(root, schema):
    for prog in programs(root):
        for args in (["sc"], ["tso-bounded", "--capacity", "2"]):
            r = run("reach", args[0], prog, *args[1:])
            assert r.returncode == 0
            jsonschema.validate(json.loads(r.stdout), schema("reach"))
    pcs = root / "tests" / "corpus" / "pcs"
    r = run("harness", pcs / "send_recv.json", pcs / "recv_only.json", "--json", "--jobs", "2")
    assert r.returncode == 0
    report = json.loads(r.stdout)
    jsonschema.validate(report, schema("harness"))
    assert len(report["results"]) == 6


def test_strategy_files_schema(root, schema, tmp_path):
    prog = root / "tests" / "corpus" / "programs" / "write_read.prog"
    assert run("solve", prog, "--policy", "A=always,B=always", "--dump-strategies", tmp_path).returncode == 0
    for player in "AB":
        jsonschema.validate(json.loads((tmp_path / f"strategy_{player}.json").read_text()), schema("strategy"))


def test_dot_output_parses(root):
    pydot = pytest.importorskip("pydot")
    prog = root / "tests" / "corpus" / "programs" / "write_read.prog"
    for args in (["--semantics", "sc"], ["--policy", "A=always,B=never", "--capacity", "1"]):
        r = run("export-dot", prog, *args)
        assert r.returncode == 0
        (graph,) = pydot.graph_from_dot_data(r.stdout)
        assert len(graph.get_nodes()) in (6, 8)
    golden = (root / "tests" / "golden" / "write_read_always_never.dot").read_text()
    (graph,) = pydot.graph_from_dot_data(golden)
    assert len(graph.get_edges()) == 15
