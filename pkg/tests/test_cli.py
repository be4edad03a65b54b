import json
from importlib import resources

import jsonschema
import pytest
from referencing import Registry, Resource

from coxfano import __version__
from coxfano.cli import ResultSet, cache_path, format_latex, format_table, main
from coxfano.fixtures import ALL_FIXTURES, SURFACES, TORSION_VARIANTS, dump_fixtures


def schema(name):
    return json.loads(resources.files("coxfano").joinpath("schemas", name).read_text())


def validator():
    ring = schema("ringdata.schema.json")
    registry = Registry().with_resource(ring["$id"], Resource.from_contents(ring))
    return jsonschema.Draft202012Validator(schema("resultset.schema.json"), registry=registry)


def classify_json(capsys, *extra):
    assert main(["classify", "--dim", "2", "--picard-index", *extra]) == 0
    return json.loads(capsys.readouterr().out)


def test_classify_json(capsys):
    out = classify_json(capsys, "4", "--torsion", "nontrivial")
    assert out["count"] == 5 and out["version"] == __version__
    validator().validate(out)
    rs = ResultSet.from_dict(out)
    assert rs.to_dict() == out


def test_classify_empty(capsys):
    out = classify_json(capsys, "5", "--torsion", "nontrivial")
    assert out["count"] == 0 and out["results"] == []


@pytest.mark.parametrize("argv", [
    ["classify", "--dim", "2", "--picard-index", "0"],
    ["classify", "--dim", "-1", "--picard-index", "2"],
    ["classify", "--dim", "2"],
    ["classify", "--dim", "2", "--picard-index", "2", "--format", "xml"],
    ["nonsense"],
])
def test_invalid_flags(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 1


def test_resource_cap(capsys):
    assert main(["classify", "--dim", "2", "--picard-index", "4", "--max-visits", "10"]) == 2
    assert "resource limit" in capsys.readouterr().err


def test_formats_agree(capsys):
    out = classify_json(capsys, "6", "--torsion", "nontrivial")
    rs = ResultSet.from_dict(out)
    table = format_table(rs)
    latex = format_latex(rs)
    rows = [line for line in table.splitlines()[2:] if line.strip()]
    assert len(rows) == out["count"] == latex.count("\\\\\n") - 1
    degrees = [r["invariants"]["degree"] for r in out["results"]]
    for row, deg, res in zip(rows, degrees, out["results"]):
        cols = row.split()
        assert cols[-1] == str(res["invariants"]["gorenstein_index"])
        assert cols[-2] == deg.removesuffix("/1")
    assert "\\frac{2}{3}" in latex and "\\frac{1}{3}" in latex
    assert latex.startswith("\\begin{longtable}")


def test_table_to_file(tmp_path, capsys):
    path = tmp_path / "t.txt"
    assert main(["classify", "--dim", "2", "--picard-index", "4", "--torsion", "nontrivial",
                 "--format", "table", "--out", str(path)]) == 0
    text = path.read_text()
    assert "Z + Z/2 + Z/2" in text and text.count("\n") == 2 + 5


def test_cache(tmp_path, capsys, monkeypatch):
    argv = ["classify", "--dim", "2", "--picard-index", "3", "--cache-dir", str(tmp_path)]
    assert main(argv) == 0
    first = capsys.readouterr().out
    files = list(tmp_path.iterdir())
    assert len(files) == 1 and __version__ in files[0].name
    assert main(argv) == 0
    assert capsys.readouterr().out == first
    # the environment variable is the fallback location
    monkeypatch.setenv("COXFANO_CACHE_DIR", str(tmp_path / "env"))
    assert main(argv[:-2]) == 0
    capsys.readouterr()
    assert len(list((tmp_path / "env").iterdir())) == 1
    # stale versions are ignored
    stale = json.loads(files[0].read_text())
    stale["version"] = "0.0.0"
    stale["results"] = []
    files[0].write_text(json.dumps(stale))
    assert main(argv) == 0
    assert json.loads(capsys.readouterr().out)["count"] == json.loads(first)["count"]


def test_cache_key_depends_on_options(tmp_path):
    a = cache_path(tmp_path, {"d": 2, "mu": 3})
    assert a == cache_path(tmp_path, {"mu": 3, "d": 2})
    assert a != cache_path(tmp_path, {"d": 2, "mu": 4})


def test_ring_schema():
    v = jsonschema.Draft202012Validator(schema("ringdata.schema.json"))
    for f in ALL_FIXTURES:
        v.validate(f.data.to_dict())


def test_verify_embedded(capsys):
    assert main(["verify"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == len(ALL_FIXTURES) == 17
    assert "17/17 fixtures pass" in out


def test_verify_detects_tampering(tmp_path, capsys):
    path = tmp_path / "fx.json"
    dump_fixtures(ALL_FIXTURES, path)
    raw = json.loads(path.read_text())
    raw["fixtures"][0]["expected"]["degree"] = "2/1"
    path.write_text(json.dumps(raw))
    assert main(["verify", "--fixtures", str(path)]) != 0
    out = capsys.readouterr().out
    assert "FAIL surface-1" in out and out.count("PASS") == 16


def test_verify_missing_file(tmp_path, capsys):
    assert main(["verify", "--fixtures", str(tmp_path / "nope.json")]) == 1


def invariants_of(tmp_path, capsys, data_dict):
    path = tmp_path / "ring.json"
    path.write_text(json.dumps(data_dict))
    code = main(["invariants", "--input", str(path)])
    return code, json.loads(capsys.readouterr().out)


def test_invariants_surface_eight(tmp_path, capsys):
    code, out = invariants_of(tmp_path, capsys, SURFACES[7].data.to_dict())
    assert code == 0
    assert (out["picard_index"], out["degree"], out["gorenstein_index"]) == (6, "2/3", 3)
    assert out["minimal_supports"]


def test_invariants_class_group(tmp_path, capsys):
    code, out = invariants_of(tmp_path, capsys, TORSION_VARIANTS[3].data.to_dict())
    assert code == 0
    assert out["class_group"] == {"free_rank": 1, "torsion": [11]}
    assert out["class_group_str"] == "Z + Z/11"


def test_invariants_invalid(tmp_path, capsys):
    d = SURFACES[0].data.to_dict()
    d["weights"][3][0] = 3
    code, out = invariants_of(tmp_path, capsys, d)
    assert code == 3
    assert any(v.startswith("homogeneity") for v in out["violations"])


def test_count(capsys):
    assert main(["count", "--dim-range", "2..2", "--mu-range", "2..6"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert [int(line.split("\t")[2]) for line in lines[1:]] == [1, 1, 5, 0, 4]
    for line in lines[1:]:
        cols = line.split("\t")
        assert int(cols[2]) <= int(cols[4])


def test_count_empty_range(capsys):
    assert main(["count", "--dim-range", "2..1", "--mu-range", "1..3"]) == 0
    assert capsys.readouterr().out.strip().splitlines() == ["d\tmu\tcount\ttoric\tbound\ttoric_bound"]
