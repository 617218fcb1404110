import json
import pathlib

import pytest

from qtor.cli import main
from qtor.cohomology import cohomology
from qtor.datafiles import bundled_path
from qtor.ktheory import chern_image
from qtor.serialize import klattice_from_dict, ring_from_dict

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


def mpath(name):
    return str(bundled_path(name + ".json"))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_ok(capsys):
    code, out, err = run(capsys, "validate", mpath("cp2"))
    assert code == 0 and err == ""
    doc = json.loads(out)
    assert doc["ok"] is True
    assert doc["f_vector"] == [3, 3]
    assert doc["h_vector"] == [1, 1, 1]
    assert doc["dim"] == 4


def test_validate_bad_lambda(capsys):
    code, out, err = run(capsys, "validate", str(FIXTURES / "bad_lambda.json"))
    assert code == 2 and out == ""
    doc = json.loads(err)
    assert doc["error"]["code"] == "manifold.NonUnimodular"
    assert "[2, 3]" in doc["error"]["message"]


def test_validate_missing_file(capsys):
    code, _, err = run(capsys, "validate", "/nonexistent/x.json")
    assert code == 2
    assert json.loads(err)["error"]["code"] == "qtor.Input"


def test_missing_field_reported(capsys, tmp_path):
    bad = tmp_path / "m.json"
    bad.write_text(json.dumps({"m": 3, "n": 2, "maximal_faces": [[1, 2]]}))
    code, _, err = run(capsys, "validate", str(bad))
    assert code == 2
    doc = json.loads(err)
    assert doc["error"]["field"] == "lambda"


def test_output_is_deterministic(capsys):
    first = run(capsys, "cohomology", mpath("hirzebruch_1"))
    second = run(capsys, "cohomology", mpath("hirzebruch_1"))
    assert first == second
    assert first[1].endswith("\n")


def test_cohomology_round_trip(capsys, rings):
    _, out, _ = run(capsys, "cohomology", mpath("bott6"))
    assert ring_from_dict(json.loads(out)) == rings["bott6"]


def test_klattice_round_trip(capsys, rings):
    _, out, _ = run(capsys, "klattice", mpath("cp1xcp1"))
    kl = klattice_from_dict(json.loads(out))
    ref = chern_image(rings["cp1xcp1"])
    assert kl.lattice == ref.lattice and kl.ranks == ref.ranks


def test_klattice_degree_cap(capsys):
    _, full, _ = run(capsys, "klattice", mpath("cp3"))
    _, capped, _ = run(capsys, "klattice", mpath("cp3"), "--degree-cap", "4")
    _, cp2_out, _ = run(capsys, "klattice", mpath("cp2"))
    cp2_doc, cap_doc = json.loads(cp2_out), json.loads(capped)
    assert json.loads(full)["ranks"] == [1, 1, 1]
    assert cap_doc["ranks"] == cp2_doc["ranks"]
    assert cap_doc["rows"] == cp2_doc["rows"]


def test_admissible_output(capsys):
    code, out, _ = run(capsys, "admissible", mpath("cp3"))
    assert code == 0
    doc = json.loads(out)
    rows = {(el["degree"], el["index"]): el["row"] for el in doc["elements"]}
    assert rows[(1, 1)] == ["1/1", "1/2", "1/6"]
    assert rows[(2, 1)] == ["0/1", "1/1", "0/1"]
    assert rows[(3, 1)] == ["0/1", "0/1", "1/1"]


def test_einv_report_only(capsys):
    code, out, _ = run(capsys, "einv", str(bundled_path("cp2_cone.json")))
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"] is None
    row, = doc["report"]["rows"]
    assert row["value"] == "1/2" and row["top_flag"] is True


def test_einv_with_prime(capsys):
    code, out, _ = run(capsys, "einv", str(bundled_path("cp2_cone.json")),
                       "--prime", "3")
    assert code == 0
    assert json.loads(out)["verdict"]["status"] == "CertifiedTrivial"

    code, out, _ = run(capsys, "einv", str(bundled_path("nu_cone.json")),
                       "--prime", "3")
    assert code == 0
    doc = json.loads(out)["verdict"]
    assert doc["status"] == "CertifiedNontrivial"
    assert doc["witness"]["value"] == "1/12"

    code, out, _ = run(capsys, "einv", str(bundled_path("threecell_cone.json")),
                       "--prime", "3")
    assert code == 1
    assert json.loads(out)["verdict"]["status"] == "Inconclusive"


def test_einv_bad_primes(capsys):
    code, _, err = run(capsys, "einv", str(bundled_path("cp2_cone.json")),
                       "--prime", "2")
    assert code == 2
    assert json.loads(err)["error"]["code"] == "einvariant.EvenPrime"

    code, _, err = run(capsys, "einv", str(bundled_path("cp2_cone.json")),
                       "--prime", "6")
    assert code == 2


def test_iso_found_and_not(capsys):
    code, out, _ = run(capsys, "iso", mpath("hirzebruch_0"), mpath("hirzebruch_2"))
    assert code == 0
    doc = json.loads(out)
    assert doc["found"] is True and doc["iso"]["matrix"]

    code, out, _ = run(capsys, "iso", mpath("hirzebruch_0"), mpath("hirzebruch_1"))
    assert code == 1
    doc = json.loads(out)
    assert doc == {"bound": 3, "found": False, "reason": "ExhaustedBound"}


def test_verdict_command(capsys):
    code, out, _ = run(capsys, "verdict", mpath("hirzebruch_0"),
                       mpath("hirzebruch_2"), "--prime-cap", "7")
    assert code == 0
    doc = json.loads(out)
    assert sorted(doc) == ["all_primes_from", "dim", "iso", "p2", "primes"]
    assert doc["dim"] == 4
    assert [p["p"] for p in doc["primes"]] == [3, 5, 7]
    assert all(p["status"] == "Certified" for p in doc["primes"])

    code, out, _ = run(capsys, "verdict", mpath("cp2"), mpath("cp1xcp1"))
    assert code == 1
    doc = json.loads(out)
    assert doc["iso"] is None and doc["all_primes_from"] is None


def test_pretty_flag(capsys):
    _, compact, _ = run(capsys, "einv", str(bundled_path("nu_cone.json")))
    _, pretty, _ = run(capsys, "einv", str(bundled_path("nu_cone.json")),
                       "--pretty")
    assert "\n  " in pretty and "\n  " not in compact
    assert json.loads(pretty) == json.loads(compact)


def test_out_file(capsys, tmp_path):
    target = tmp_path / "ring.json"
    code, out, _ = run(capsys, "cohomology", mpath("cp2"), "--out", str(target))
    assert code == 0 and out == ""
    _, direct, _ = run(capsys, "cohomology", mpath("cp2"))
    assert target.read_text() == direct


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["validate"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["cohomology", "x.json", "--frobnicate"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
    capsys.readouterr()
