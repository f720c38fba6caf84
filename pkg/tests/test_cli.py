import json

import pytest

from thetadesign.catalogue import parse_catalogue
from thetadesign.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_builtin_file(capsys, data_dir):
    code, out, _ = run(capsys, "verify", str(data_dir / "e10_K20.cat"))
    assert code == 0
    assert out.splitlines()[-1] == "7/7 accepted"


def test_verify_rejects(capsys, tmp_path):
    bad = tmp_path / "bad.cat"
    bad.write_text("entry theta(1,2,7) host K(21)\nact: (0..20 +1)\nblock: 0 1 2 3 4 5 6 7 8\nend\n")
    code, out, _ = run(capsys, "verify", str(bad), "--format", "json")
    assert code == 1
    doc = json.loads(out)
    assert doc["schema"] == 1
    cert = doc["certificates"][0]
    assert cert["verdict"] == "reject" and doc["accepted"] == 0
    assert cert["violation_counts"]["MissingEdge"] == 126


def test_verify_errors(capsys, tmp_path):
    code, _, err = run(capsys, "verify", str(tmp_path / "missing.cat"))
    assert code == 2 and "cannot read" in err
    broken = tmp_path / "broken.cat"
    broken.write_text("entry theta(1,2,7) host K(20)\nblock: 0 1\nend\n")
    code, _, err = run(capsys, "verify", str(broken))
    assert code == 2 and ":2:" in err


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "13")
    assert code == 0
    assert out.splitlines()[-1] == "13 graphs, 4 bipartite"
    code, out, _ = run(capsys, "enumerate", "10", "--format", "json")
    assert len(json.loads(out)["thetas"]) == 7


def test_spectrum(capsys):
    code, out, _ = run(capsys, "spectrum", "1", "2", "7", "--max", "100")
    assert code == 0
    assert out.splitlines()[-1] == "20 admissible orders <= 100, 20 constructed"


def test_construct(capsys, tmp_path):
    code, out, _ = run(capsys, "construct", "1", "2", "7", "--n", "76", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["blocks"] == 285 and doc["verified"]
    dest = tmp_path / "k76.cat"
    code, _, _ = run(capsys, "construct", "1", "2", "7", "--n", "76", "--output", str(dest))
    assert code == 0
    (entry,) = parse_catalogue(dest.read_text())
    assert entry.decomposition.expanded_count == 285
    code, out, _ = run(capsys, "construct", "1", "2", "7", "--n", "76", "--explain")
    assert "PatchCase" in out


def test_construct_outside_spectrum(capsys):
    code, _, err = run(capsys, "construct", "1", "2", "7", "--n", "5")
    assert code == 3 and "fewer than 9 vertices" in err


def test_search(capsys):
    code, out, _ = run(capsys, "search", "1", "2", "7", "--host", "K21", "--act", "+1 mod 21", "--no-save")
    assert code == 0 and "verified" in out
    code, _, _ = run(capsys, "search", "1", "2", "7", "--host", "K21", "--act", "+1 mod 21", "--developed", "2")
    assert code == 2
    code, _, _ = run(capsys, "search", "1", "2", "7", "--host", "K21", "--act", "+1 mod 21", "--restarts", "0")
    assert code == 4


def test_catalogue_list_and_export(capsys, tmp_path):
    code, out, _ = run(capsys, "catalogue", "list", "--theta", "1", "2", "7", "--builtin-only")
    assert code == 0 and "K(20): 19 blocks" in out
    dest = tmp_path / "out.cat"
    code, out, _ = run(capsys, "catalogue", "export", "--theta", "1", "2", "7", "--host", "K(5,10)",
                       "--output", str(dest))
    assert code == 0 and out.startswith("0 entries")
    code, _, _ = run(capsys, "catalogue", "export", "--theta", "1", "2", "7", "--host", "K(20)",
                     "--output", str(dest))
    assert code == 0 and len(parse_catalogue(dest.read_text())) == 1


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as info:
        main(["bogus"])
    assert info.value.code == 2
