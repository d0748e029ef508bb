import json
import subprocess
import sys

from conftest import two_colour_spec
from optrees.cli import main
from optrees.groupoids import (Group, discrete, disjoint_union_groupoids,
                               groupoid_to_doc, one_object)
from optrees.pfunctor import save_spec


def run_cli(args):
    proc = subprocess.run([sys.executable, "-m", "optrees.cli", *args],
                          capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


def test_delta_ladder_table(capsys):
    code = main(["delta", "--functor", "identity", "--tree", "((_))"])
    out = capsys.readouterr().out
    assert code == 0
    assert len(out.strip().splitlines()) == 3


def test_delta_structured(capsys):
    code = main(["delta", "--functor", "identity", "--tree", "((_))",
                 "--format", "structured"])
    out = capsys.readouterr().out
    assert code == 0
    doc = json.loads(out)
    assert doc["schema_version"] == 1
    assert doc["command"] == "delta"
    assert doc["count"] == 3
    for term in doc["terms"]:
        assert set(term) == {"F", "S", "coeff"}


def test_green_constant(capsys):
    code = main(["green", "--functor", "constant"])
    out = capsys.readouterr().out.strip()
    assert code == 0
    assert out == "(c) + _"


def test_aut_command(capsys):
    code = main(["aut", "--functor", "exp", "--max-arity", "3",
                 "--tree", "(n2:(n2:__)(n2:__))"])
    out = capsys.readouterr().out.strip()
    assert code == 0 and out == "8"


def test_enumerate_structured(capsys):
    code = main(["enumerate", "--functor", "binary", "--max-edges", "5",
                 "--format", "structured"])
    doc = json.loads(capsys.readouterr().out)
    assert code == 0
    assert doc["count"] == len(doc["classes"])
    for row in doc["classes"]:
        assert set(row) == {"key", "tree", "aut_order", "root",
                            "leaf_profile", "edges", "nodes"}
        assert row["aut_order"] == 1


def test_enumerate_requires_bound(capsys):
    assert main(["enumerate", "--functor", "binary"]) == 2


def test_verify_fdb_passes(capsys):
    code = main(["verify", "fdb", "--functor", "binary", "--max-edges", "6",
                 "--max-nodes", "4", "--format", "structured"])
    doc = json.loads(capsys.readouterr().out)
    assert code == 0
    assert doc["summary"]["failed"] == 0
    assert doc["summary"]["checked"] > 0
    assert "elapsed" not in json.dumps(doc)


def test_verify_exit_code_contract():
    # the mapping from report outcome to exit status
    from optrees.bialgebra import FdbReport, PairCheck
    from fractions import Fraction
    good = FdbReport("x", 1, 1, None, [], 1, 0, 0, 1, 0)
    bad = FdbReport("x", 1, 1, None,
                    [PairCheck((), "_", Fraction(0), Fraction(1))], 1, 1, 0, 1, 0)
    assert good.passed and not bad.passed


def test_verify_classical_cli(capsys):
    code = main(["verify", "classical", "--max-degree", "4",
                 "--format", "structured"])
    doc = json.loads(capsys.readouterr().out)
    assert code == 0
    assert doc["summary"]["failed"] == 0


def test_verify_phi_cli(capsys):
    code = main(["verify", "phi", "--functor", "stable", "--max-arity", "3",
                 "--max-n", "2", "--max-edges", "6", "--format", "structured"])
    doc = json.loads(capsys.readouterr().out)
    assert code == 0
    assert doc["green_match"] is True


def test_verify_groupoid_cli(capsys):
    code = main(["verify", "groupoid", "--count", "10", "--seed", "3",
                 "--format", "structured"])
    doc = json.loads(capsys.readouterr().out)
    assert code == 0
    assert doc["summary"]["failed"] == 0


def test_spec_file_flow(tmp_path, capsys):
    path = tmp_path / "two.json"
    save_spec(two_colour_spec(), str(path))
    code = main(["enumerate", "--spec-file", str(path), "--max-edges", "3",
                 "--format", "structured"])
    doc = json.loads(capsys.readouterr().out)
    assert code == 0
    assert doc["count"] > 0
    assert main(["enumerate", "--spec-file", str(path), "--functor", "binary",
                 "--max-edges", "3"]) == 2


def test_groupoid_file_flow(tmp_path, capsys):
    g = disjoint_union_groupoids([one_object(Group.cyclic(2)),
                                  discrete([0, 1])]).relabel()[0]
    path = tmp_path / "g.json"
    path.write_text(json.dumps(groupoid_to_doc(g)))
    code = main(["groupoid", "--file", str(path), "--format", "structured"])
    doc = json.loads(capsys.readouterr().out)
    assert code == 0
    assert doc["cardinality"] == "5/2"
    assert doc["objects"] == 3


def test_parse_error_exit_code(capsys):
    assert main(["delta", "--functor", "identity", "--tree", "(("]) == 2
    err = capsys.readouterr().err
    assert "line" in err and "column" in err


def test_usage_error_exit_code():
    assert main(["delta", "--functor", "nosuch", "--tree", "_"]) == 2
    assert main(["nosuchcommand"]) == 2
    assert main(["delta", "--tree", "_"]) == 2  # no spec source


def test_unknown_colour_is_usage_error(capsys):
    assert main(["green", "--functor", "constant",
                 "--root-colour", "zzz"]) == 2
    assert main(["enumerate", "--functor", "constant", "--max-edges", "3",
                 "--leaf-profile", "zzz:1"]) == 2
    assert main(["verify", "fdb", "--functor", "constant",
                 "--rooted", "zzz"]) == 2
    assert "unknown colour" in capsys.readouterr().err


def test_structured_output_byte_identical_across_jobs():
    args = ["verify", "fdb", "--functor", "identity", "--max-edges", "6",
            "--max-nodes", "4", "--format", "structured"]
    runs = [run_cli(args + ["--jobs", str(j)]) for j in (1, 4, 4)]
    for code, _, _ in runs:
        assert code == 0
    outs = {out for _, out, _ in runs}
    assert len(outs) == 1


def test_cli_echoes_canonical_form(capsys):
    # non-canonical child order comes back canonicalised
    code = main(["delta", "--functor", "exp", "--max-arity", "2",
                 "--tree", "(n2:_(n1:_))", "--format", "structured"])
    doc = json.loads(capsys.readouterr().out)
    assert code == 0
    assert doc["tree"] == "(n2:(n1:_)_)"


def test_timings_go_to_stderr():
    code, out, err = run_cli(["green", "--functor", "constant",
                              "--format", "structured"])
    assert code == 0
    assert "elapsed_ms" in err
    assert "elapsed" not in out
