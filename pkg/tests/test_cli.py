import json
from pathlib import Path

import pytest

from vertexalg import cli
from vertexalg import models as md
from vertexalg import serialize as io


@pytest.fixture(scope="module")
def tensor_spec(tmp_path_factory):
    path = tmp_path_factory.mktemp("specs") / "tensor2d.json"
    model = md.build_tensor_2d(2)
    doc = io.spec_to_json(2, model.space, model.rep, model.table, "tensor2d")
    path.write_text(io.canonical_dumps(doc))
    return path


def test_spec_round_trip(tensor_spec):
    doc = json.loads(tensor_spec.read_text())
    dim, space, rep, table = io.spec_from_json(doc)
    assert dim == 2
    model = md.build_tensor_2d(2)
    assert space.grades() == model.space.grades()
    assert set(table.blocks) == set(model.table.blocks)
    for key, mat in model.table.blocks.items():
        assert table.blocks[key] == mat
    # byte-identical re-serialization: determinism of the canonical form
    doc2 = io.spec_to_json(dim, space, rep, table, "tensor2d")
    assert io.canonical_dumps(doc) == io.canonical_dumps(doc2)


def test_validate_passes(tensor_spec, capsys):
    code = cli.main(["validate", str(tensor_spec)])
    out = json.loads(capsys.readouterr().out)
    assert code == cli.EXIT_PASS
    assert out["summary"]["fail"] == 0


def test_validate_corrupted_rotation(tensor_spec, tmp_path, capsys):
    doc = json.loads(tensor_spec.read_text())
    # double one rotation block
    block = doc["lie"]["O12"]["2"]
    doc["lie"]["O12"]["2"] = [
        [str(io.Scalar.parse(x) * io.Scalar(2)) for x in row] for row in block
    ]
    bad = tmp_path / "bad.json"
    bad.write_text(io.canonical_dumps(doc))
    code = cli.main(["validate", str(bad)])
    out = json.loads(capsys.readouterr().out)
    assert code == cli.EXIT_FAIL
    by_name = {c["name"]: c for c in out["checks"]}
    assert by_name["bracket_homomorphism"]["status"] == "fail"
    assert by_name["bracket_homomorphism"]["witnesses"]


def test_validate_rejects_empty_file(tmp_path, capsys):
    bad = tmp_path / "empty.json"
    bad.write_text("{}")
    code = cli.main(["validate", str(bad)])
    assert code == cli.EXIT_USAGE
    err = capsys.readouterr().err
    assert "error" in json.loads(err.splitlines()[-1])


def test_reconstruct_and_check(tensor_spec, tmp_path, capsys):
    out = tmp_path / "mud.json"
    code = cli.main(["reconstruct", str(tensor_spec), "--dim", "2", "--out", str(out)])
    assert code == cli.EXIT_PASS
    capsys.readouterr()
    code = cli.main([
        "check", str(out), str(tensor_spec), "--suite", "all", "--dsum-max", "1",
    ])
    body = json.loads(capsys.readouterr().out)
    assert code == cli.EXIT_PASS, body
    assert body["summary"]["fail"] == 0


def test_reconstruct_odd_dimension_is_usage_error(tensor_spec, capsys):
    code = cli.main(["reconstruct", str(tensor_spec), "--dim", "3"])
    assert code == cli.EXIT_USAGE


def test_check_hash_mismatch(tensor_spec, tmp_path, capsys):
    out = tmp_path / "mud.json"
    cli.main(["reconstruct", str(tensor_spec), "--dim", "2", "--out", str(out)])
    capsys.readouterr()
    other = tmp_path / "other.json"
    model = md.build_tensor_2d(1)
    doc = io.spec_to_json(2, model.space, model.rep, model.table, "small")
    other.write_text(io.canonical_dumps(doc))
    code = cli.main(["check", str(out), str(other)])
    assert code == cli.EXIT_USAGE


def test_demo_heisenberg(tmp_path, capsys):
    code = cli.main(["demo", "heisenberg", "--cutoff", "3", "--out", str(tmp_path / "h")])
    assert code == cli.EXIT_PASS
    report = json.loads((tmp_path / "h" / "report.json").read_text())
    assert report["summary"]["fail"] == 0
    assert (tmp_path / "h" / "spec.json").exists()


def test_demo_tensor2d(tmp_path, capsys):
    code = cli.main(["demo", "tensor2d", "--cutoff", "2", "--out", str(tmp_path / "t")])
    assert code == cli.EXIT_PASS
    assert (tmp_path / "t" / "mud.json").exists()


def test_demo_gegenbauer4(tmp_path, capsys):
    code = cli.main(["demo", "gegenbauer4", "--cutoff", "2", "--out", str(tmp_path / "g")])
    assert code == cli.EXIT_PASS
    report = json.loads((tmp_path / "g" / "report.json").read_text())
    names = {c["name"]: c["status"] for c in report["checks"]}
    assert names["evaluation_family"] == "pass"
    assert names["line_extension_gegenbauer"] == "pass"


def test_demo_unknown_name(capsys):
    assert cli.main(["demo", "nosuch"]) == cli.EXIT_USAGE


def test_export_round_trip(tmp_path, capsys):
    out = tmp_path / "h.json"
    code = cli.main(["export", "heisenberg", "--cutoff", "2", "--out", str(out)])
    assert code == cli.EXIT_PASS
    dim, space, rep, table = io.spec_from_json(json.loads(out.read_text()))
    assert dim == 1 and space.dim(4) == 2


def test_mud_round_trip(tensor_spec, tmp_path):
    from vertexalg import reconstruct as rc

    doc = json.loads(tensor_spec.read_text())
    dim, space, rep, table = io.spec_from_json(doc)
    mud = rc.reconstruct_d2(table, rep)
    blob = io.mud_to_json(mud, io.sha256_of(doc))
    mud2 = io.mud_from_json(space, blob)
    assert set(mud2.blocks) == set(mud.blocks)
    for key in mud.blocks:
        assert mud.blocks[key] == mud2.blocks[key]
