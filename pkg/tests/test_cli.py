import io
import json

import pytest

from conecell import fixtures as fx
from conecell.cli import main
from conecell.complexes import ChainComplex
from conecell.equivariant import koszul_resolution, abstract_z2, tate, tate_group
from conecell.fans import ConeSubset
from conecell.io import (
    InputError,
    complex_from_json,
    dumps,
    emit_dot,
    fan_from_json,
    fan_to_json,
    group_from_json,
    group_to_json,
    jsonable,
    load_json,
    periodic_from_json,
    periodic_to_json,
)


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run(*argv, "--json")
    return code, json.loads(text)


def write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(data if isinstance(data, str) else json.dumps(data))
    return str(p)


def test_fixtures_listing_and_export(tmp_path):
    code, data = run_json("fixtures", "--out", str(tmp_path))
    assert code == 0
    names = [f["name"] for f in data["fixtures"]]
    assert names == ["p1", "p2", "orthant", "facet-pair", "tate"]
    assert (tmp_path / "p2.json").exists() and (tmp_path / "tate.json").exists()
    fan, sub = fan_from_json(load_json(tmp_path / "p2.json"))
    assert sub is not None and len(sub) == 6


def test_exit_codes():
    assert run("cellular", "--fan", "p2")[0] == 0
    assert run("compare-2pb", "--fan", "p2")[0] == 0
    assert run("compare-2pb", "--fan", "facet-pair")[0] == 2
    assert run("check-2pc", "--fan", "orthant")[0] == 0
    assert run("check-2pc", "--fan", "p2", "--cover", "maximal")[0] == 0
    assert run("cprime-2na", "--fan", "p2", "--tau", "s12")[0] == 0
    assert run("equivariant", "--periodic", "tate")[0] == 0
    assert run("check-2main-c", "--periodic", "tate")[0] == 0
    assert run("group-cohomology", "--periodic", "tate")[0] == 0
    assert run("cellular", "--fan", "orthant", "--subset", "r1")[0] == 1


def test_cellular_json_values():
    code, data = run_json("cellular", "--fan", "p2")
    assert data["groups"] == {"1": "Z", "2": "Z"}
    code, data = run_json("cech", "--fan", "p1")
    assert data["groups"] == {"0": "Z^2"}


def test_compare_json():
    code, data = run_json("compare-2pb", "--fan", "p2")
    assert data["homology_match"] and data["chain_map_certified"] and data["d"] == 2


def test_validate_with_openness_crosscheck():
    code, data = run_json("validate", "--fan", "p2", "--samples", "200", "--seed", "3")
    assert code == 0
    assert data["support"]["open_in_span"]
    assert data["openness_crosscheck"]["sample_violations"] == 0
    assert data["openness_crosscheck"]["count_violations"] == []


def test_validate_reports_bad_fan(tmp_path):
    bad = {"rank": 2, "cones": [{"id": "a", "rays": [[1, 1]]}, {"id": "b", "rays": [[1, -1]]},
                                {"id": "ab", "rays": [[1, 1], [1, -1]]}]}
    code, data = run_json("validate", "--fan", write(tmp_path, "bad.json", bad))
    assert code == 2
    assert any(v["kind"] == "not_smooth" for v in data["fan"]["issues"])


def test_normalization_warning(tmp_path):
    f = {"rank": 1, "cones": [{"id": "a", "rays": [[3]]}]}
    code, data = run_json("validate", "--fan", write(tmp_path, "w.json", f))
    assert code == 0
    assert data["warnings"] and "normalized" in data["warnings"][0]


def test_parse_and_schema_errors(tmp_path):
    code, data = run_json("cellular", "--fan", write(tmp_path, "broken.json", "{ not json"))
    assert code == 1 and data["error"] == "PARSE_ERROR"
    dup = {"rank": 1, "cones": [{"id": "a", "rays": [[1]]}, {"id": "a", "rays": [[-1]]}]}
    code, data = run_json("cellular", "--fan", write(tmp_path, "dup.json", dup))
    assert code == 1 and data["error"] == "SCHEMA_ERROR"
    missing = {"rank": 1, "cones": [{"rays": [[1]]}]}
    code, data = run_json("cellular", "--fan", write(tmp_path, "missing.json", missing))
    assert code == 1 and data["error"] == "SCHEMA_ERROR"
    code, data = run_json("cellular", "--fan", str(tmp_path / "nope.json"))
    assert code == 1 and data["error"] == "IO_ERROR"
    code, data = run_json("cellular", "--fan", "p2", "--subset", "zz")
    assert code == 1 and data["error"] == "SCHEMA_ERROR"


def test_output_is_byte_identical():
    a = run("check-2main-c", "--periodic", "tate", "--json")[1]
    b = run("check-2main-c", "--periodic", "tate", "--json")[1]
    assert a == b
    a = run("check-2pc", "--fan", "p2", "--json")[1]
    assert a == run("check-2pc", "--fan", "p2", "--json")[1]


def test_table_output():
    code, text = run("compare-2pb", "--fan", "p1")
    assert code == 0 and "homology_match" in text and "True" in text


# ---------------------------------------------------------------------------
# round trips


@pytest.mark.parametrize("name", ["p1", "p2", "orthant", "facet-pair", "cube3", "p1^3"])
def test_fan_round_trip(name):
    fan, sub = fx.load_fixture(name)
    data = fan_to_json(fan, sub)
    fan2, sub2 = fan_from_json(json.loads(dumps(data)))
    assert fan_to_json(fan2, sub2) == data
    assert sub2.members == sub.members


def test_group_round_trip():
    g = tate_group()
    data = group_to_json(g)
    g2 = group_from_json(json.loads(dumps(data)))
    assert group_to_json(g2) == data
    z2 = abstract_z2()
    z2.set_resolution(koszul_resolution(z2))
    assert group_to_json(group_from_json(json.loads(dumps(group_to_json(z2))))) == group_to_json(z2)


def test_periodic_round_trip(tmp_path):
    data = periodic_to_json(tate())
    pf = periodic_from_json(json.loads(dumps(data)))
    assert periodic_to_json(pf) == data
    path = write(tmp_path, "tate.json", dumps(data))
    assert run("check-2main-c", "--periodic", path)[0] == 0


def test_group_override_and_rep(tmp_path):
    g = tate_group()
    gpath = write(tmp_path, "g.json", dumps(group_to_json(g)))
    rpath = write(tmp_path, "sign.json", {"rank": 1, "matrices": [[[-1]]]})
    code, data = run_json("check-2main-c", "--periodic", "tate", "--group", gpath, "--rep", rpath)
    assert code == 0 and data["match"]
    code, data = run_json("group-cohomology", "--group", gpath, "--rep", rpath)
    assert data["cohomology_groups"] == {"1": "Z/2"}
    nores = write(tmp_path, "nores.json", {"rank": 2, "generators": [[[1, 1], [0, 1]]]})
    code, data = run_json("check-2main-c", "--periodic", "tate", "--group", nores)
    assert code == 1 and data["error"] == "NO_RESOLUTION"


def test_complex_round_trip():
    fan, t = fx.p2()
    from conecell.cellular import cocellular
    c = cocellular(t)
    assert complex_from_json(json.loads(dumps(c.to_json()))) == c
    assert ChainComplex.from_json(c.to_json()) == c


def test_subset_round_trip():
    fan, _ = fx.p2()
    sub = ConeSubset(fan, ["s12", "r1", "s13"])
    _, back = fan_from_json(fan_to_json(fan, sub))
    assert back.members == sub.members


def test_big_integers_serialize_as_strings():
    assert jsonable({"x": 2 ** 60, "y": [3]}) == {"x": str(2 ** 60), "y": [3]}
    f = {"rank": 1, "cones": [{"id": "a", "rays": [[str(2 ** 60)]]}]}
    fan, _ = fan_from_json(f)
    assert fan["a"].rays == ((1,),)
    with pytest.raises(InputError):
        fan_from_json({"rank": 1, "cones": [{"id": "a", "rays": [["x"]]}]})


# ---------------------------------------------------------------------------
# DOT


def test_dot_outputs(tmp_path):
    _, t = fx.p2()
    text = emit_dot(t)
    assert text.count("->") == 6 and text.count("label=") == 6
    assert emit_dot(None) == 'digraph "T" {\n}\n'
    p = tmp_path / "w.dot"
    assert run("equivariant", "--periodic", "tate", "--radius", "1", "--dot", str(p))[0] == 0
    text = p.read_text()
    assert text.count("label=") == 5 and text.count("->") == 4
    p2 = tmp_path / "c.dot"
    run("cellular", "--fan", "orthant", "--dot", str(p2))
    assert '"r1" -> "s"' in p2.read_text()


def test_parse_examples(tmp_path):
    run("fixtures", "--out", str(tmp_path))
    fan, sub = fan_from_json(load_json(tmp_path / "p2.json"))
    assert fan.rank == 2 and len(fan) == 7
    fan, _ = fan_from_json({"rank": 2, "cones": [{"id": "a", "rays": [[2, 4]]}]})
    assert fan["a"].rays == ((1, 2),) and fan.warnings
