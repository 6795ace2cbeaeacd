import json

import pytest
from hypothesis import given, settings, strategies as st

from conftest import dags
from randdag import io
from randdag.cli import main
from randdag.dag import Dag


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_examples(capsys):
    assert run(capsys, "gen", "--n", "2", "--connected", "--steps", "0", "--format", "edge-list")[1] == "1 2\n"
    assert run(capsys, "gen", "--n", "3", "--steps", "0", "--format", "jsonl")[1] == '{"n":3,"arcs":[]}\n'


def test_gen_is_deterministic(capsys):
    args = ("gen", "--n", "8", "--connected", "--seed", "7", "--steps", "100000")
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


def test_gen_count_graphs_are_individually_reproducible(capsys):
    three = io.loads(run(capsys, "gen", "--n", "5", "--count", "3", "--seed", "4", "--format", "jsonl")[1], "jsonl")
    two = io.loads(run(capsys, "gen", "--n", "5", "--count", "2", "--seed", "4", "--format", "jsonl")[1], "jsonl")
    assert len(three) == 3 and three[:2] == two


def test_gen_single_chain_mode(capsys):
    code, out, _ = run(capsys, "gen", "--n", "4", "--connected", "--count", "5", "--gap", "16", "--burn-in", "100",
                       "--format", "dot")
    graphs = io.loads(out, "dot")
    assert code == 0 and len(graphs) == 5


def test_gen_rejects_bad_constraint(capsys):
    code, _, err = run(capsys, "gen", "--n", "5", "--connected", "--max-arcs", "3")
    assert code == 2 and "max_arcs" in err


def test_gen_requires_n(capsys):
    assert run(capsys, "gen")[0] == 2


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "chain.cfg"
    cfg.write_text("# defaults\nn = 4\nconnected = true\nsteps = 0\n")
    assert run(capsys, "gen", "--config", str(cfg))[1] == "1 2\n2 3\n3 4\n"
    assert run(capsys, "gen", "--config", str(cfg), "--n", "2")[1] == "1 2\n"
    cfg.write_text("colour = red\n")
    assert run(capsys, "gen", "--config", str(cfg), "--n", "2")[0] == 2


def test_verify_exit_codes(capsys):
    assert run(capsys, "verify", "irreducibility", "--n", "2", "--connected", "--no-reversal")[0] == 1
    assert run(capsys, "verify", "irreducibility", "--n", "3", "--connected", "--no-reversal")[0] == 0
    code, out, _ = run(capsys, "verify", "diameter", "--n", "3", "--connected")
    assert code == 0 and "diameter: 4" in out and "bound: 15" in out
    assert run(capsys, "verify", "symmetry", "--n", "6")[0] == 2


def test_verify_json_and_other_checks(capsys):
    code, out, _ = run(capsys, "verify", "symmetry", "--n", "3", "--connected", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["symmetric"] and doc["states"] == 18 and doc["result"] == "PASS"
    code, out, _ = run(capsys, "verify", "convergence", "--n", "3", "--connected", "--json")
    assert code == 0 and json.loads(out)["tv"] < 1e-6
    code, out, _ = run(capsys, "verify", "remark", "--n", "3", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["reversal_off"]["irreducible"]
    assert run(capsys, "verify", "remark", "--n", "2")[0] == 0
    code, out, _ = run(capsys, "verify", "uniformity", "--n", "3", "--connected", "--count", "20000",
                       "--burn-in", "1000", "--gap", "50", "--tol", "0.03", "--json")
    assert code == 0, out


def test_path_roundtrip(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    a.write_text("1 2\n")
    b.write_text("2 1\n")
    code, out, _ = run(capsys, "path", "--from", str(a), "--to", str(b))
    assert code == 0 and out.splitlines()[1:] == ["REV 1 2"]
    code, out, _ = run(capsys, "path", "--from", str(a), "--to", str(a))
    assert out.splitlines()[1:] == []
    a.write_text("1 2\n1 3\n2 3\n3 4\n")
    b.write_text("4 1\n2 1\n3 2\n")
    code, out, _ = run(capsys, "path", "--from", str(a), "--to", str(b))
    cert = tmp_path / "cert.txt"
    cert.write_text(out)
    assert run(capsys, "path", "--replay", str(cert))[0] == 0
    cert.write_text(out.replace("DEL", "ADD", 1))
    assert run(capsys, "path", "--replay", str(cert))[0] == 1


def test_path_input_errors(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    a.write_text("1 2\n")
    b.write_text("1 2\n2 3\n")
    assert run(capsys, "path", "--from", str(a), "--to", str(b))[0] == 2
    b.write_text("# n=3\n1 2\n")
    assert run(capsys, "path", "--from", str(b), "--to", str(b))[0] == 2
    assert run(capsys, "path", "--from", str(a))[0] == 2


@settings(max_examples=100, deadline=None)
@given(st.lists(dags(), min_size=1, max_size=4), st.sampled_from(io.FORMATS))
def test_every_format_roundtrips(graphs, fmt):
    assert io.loads(io.dumps(graphs, fmt), fmt) == graphs


def test_edge_list_header_only_when_needed():
    assert io.to_edge_list(Dag(3, [(1, 3)])) == "1 3\n"
    assert io.to_edge_list(Dag(3, [(1, 2)])) == "# n=3\n1 2\n"
    assert io.parse_edge_list("# n=3\n") == Dag(3)
