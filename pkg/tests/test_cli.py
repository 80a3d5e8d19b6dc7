import json
from fractions import Fraction

import pytest

from rainbowlab import cli
from rainbowlab.errors import InputError
from rainbowlab.instances import instance_to_dict, parse_instance, parse_subset, to_text
from rainbowlab.matroids import GroundSet
from rainbowlab.rainbow import CATALOG, load_catalog_instance


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return p


@pytest.mark.parametrize("name", CATALOG)
def test_catalog_roundtrip(name):
    inst = load_catalog_instance(name)
    again = parse_instance(json.loads(to_text(instance_to_dict(inst))))
    assert instance_to_dict(again) == instance_to_dict(inst)
    assert [m.rank_table for m in again.matroids] == [m.rank_table for m in inst.matroids]


def test_subset_syntax():
    g = GroundSet(6)
    assert parse_subset([0, 2], g) == parse_subset("0x5", g) == 5
    for bad in ([0, 0], "0x100", "zz", 3):
        with pytest.raises(InputError):
            parse_subset(bad, g)


def test_instance_errors():
    with pytest.raises(InputError):
        parse_instance({"ground": {"size": 2}, "matroids": [{"kind": "star", "side": 0}]})
    with pytest.raises(InputError):
        parse_instance({"ground": {"size": 2}, "colour": 1})
    with pytest.raises(InputError):
        parse_instance({"ground": {"size": 2}, "k": 0.5})
    with pytest.raises(InputError):
        parse_instance({"matroids": []})


def test_nustar_cube(capsys):
    code, out, _ = run(capsys, "nustar", "cube-2x2x2")
    rep = json.loads(out)
    assert code == 0 and rep["results"]["nu_star"] == rep["results"]["tau_star"] == "2/1"
    code, out, _ = run(capsys, "nustar", "cube-2x2x2", "-W", "", "--format", "terse")
    assert code == 0 and "nu_star=0/1" in out.splitlines()


def test_nustar_hex_and_weights(capsys):
    code, out, _ = run(capsys, "nustar", "k22-stars", "-W", "0x3", "-a", "1,1/2,1,1")
    assert code == 0 and json.loads(out)["results"]["nu_star"] == "1/1"


def test_malformed_file(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    code, _, err = run(capsys, "nustar", p)
    assert code == 2 and "not valid JSON" in err
    code, _, _ = run(capsys, "nustar", tmp_path / "missing.json")
    assert code == 2


def test_rainbow_cube_deterministic(capsys):
    code, first, _ = run(capsys, "rainbow", "cube-2x2x2")
    assert code == 0 and json.loads(first)["results"]["nu_star"] == "2/1"
    _, second, _ = run(capsys, "rainbow", "cube-2x2x2")
    assert first == second


def test_rainbow_invalid_d(tmp_path, capsys):
    data = json.loads(to_text(instance_to_dict(load_catalog_instance("cube-2x2x2"))))
    data["functions"] = data["functions"][:3]
    code, _, err = run(capsys, "rainbow", write(tmp_path, "short.json", data))
    assert code == 2 and "insufficient" in err


def test_rainbow_random(capsys):
    code, out, _ = run(capsys, "rainbow", "--random", "2,2,6", "--seed", "5")
    assert code == 0
    _, again, _ = run(capsys, "rainbow", "--random", "2,2,6", "--seed", "5")
    assert out == again


def test_collapse_and_tamper(tmp_path, capsys):
    code, out, _ = run(capsys, "collapse", "k22-stars", "--out", tmp_path)
    rep = json.loads(out)["results"]
    assert code == 0 and rep["accepted"] and rep["max_collapsor"] <= 2
    cert_path = tmp_path / rep["certificate"]
    code, out, _ = run(capsys, "collapse", "k22-stars", "--verify", cert_path)
    assert code == 0 and json.loads(out)["results"]["accepted"]
    cert = json.loads(cert_path.read_text())
    cert["steps"][1]["facet"] = cert["steps"][0]["facet"]
    tampered = write(tmp_path, "tampered.json", cert)
    code, out, _ = run(capsys, "collapse", "k22-stars", "--verify", tampered)
    res = json.loads(out)["results"]
    assert code == 2 and not res["accepted"] and res["bad_step"] == 1


def test_collapse_cap(capsys):
    code, _, err = run(capsys, "collapse", "cube-2x2x2", "--cap", "4")
    assert code == 2 and "--cap" in err


def test_check_reports(tmp_path, capsys):
    p = write(tmp_path, "interior.json", {"ground": {"size": 3}, "b": [{"kind": "interior", "target": "1"}]})
    code, out, _ = run(capsys, "check", p)
    lines = json.loads(out)["results"]["b_0"]
    assert code == 0 and all(line.endswith("yes") for line in lines)
    p = write(tmp_path, "max.json", {"ground": {"size": 2}, "b": [{"kind": "max", "weights": [1, 2]}]})
    _, out, _ = run(capsys, "check", p)
    assert "decreasing: no witness=[0, 1]" in json.loads(out)["results"]["b_0"]
    table = [0, 0, 0, 1, 0, 1, 1, 2]
    p = write(tmp_path, "rank.json", {"ground": {"size": 3}, "matroids": [{"kind": "explicit", "table": table}]})
    _, out, _ = run(capsys, "check", p)
    assert json.loads(out)["results"]["matroid_0"].startswith("submodularity fails at")


def test_chain_command(tmp_path, capsys):
    tri = write(tmp_path, "tri.json", {"ground": {"size": 3}, "family": [[0], [0, 1], [0, 1, 2]]})
    code, out, _ = run(capsys, "chain", tri)
    assert code == 0 and json.loads(out)["results"]["dimension"] == 3
    open_fam = write(tmp_path, "open.json", {"ground": {"size": 3}, "family": [[0, 1], [1, 2]]})
    code, _, _ = run(capsys, "chain", open_fam)
    assert code == 2
    code, out, _ = run(capsys, "chain", open_fam, "--close")
    assert code == 0 and len(json.loads(out)["results"]["chain"]) == 3


def test_invariant_exit_code(monkeypatch, capsys):
    monkeypatch.setattr(cli, "tau_star", lambda *a: (Fraction(-1), None))
    code, _, err = run(capsys, "nustar", "cube-2x2x2")
    assert code == 3 and "invariant" in err


def test_module_entry_point():
    import subprocess
    import sys

    out = subprocess.run([sys.executable, "-m", "rainbowlab", "nustar", "k22-stars", "--format", "terse"],
                         capture_output=True, text=True, check=True)
    assert "nu_star=2/1" in out.stdout


def test_collapse_creates_missing_out_dir(tmp_path):
    out = tmp_path / "new" / "dir"
    assert cli.main(["collapse", "k22-stars", "--out", str(out), "--format", "terse"]) == 0
    assert len(list(out.glob("certificate-*.json"))) == 1
