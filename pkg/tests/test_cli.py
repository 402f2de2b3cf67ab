import io
import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from weightcx.certificates import verify
from weightcx.cli import run

from conftest import fixture_path

SCHEMA_DIR = Path(__file__).resolve().parents[1] / "src" / "weightcx" / "schema"


def schema(name):
    return json.loads((SCHEMA_DIR / f"{name}.json").read_text())


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def fx(name):
    return fixture_path(name)


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return p


def test_homology_of_degree_five():
    code, out, _ = cli("homology", fx("z_degree5"))
    assert code == 0
    assert json.loads(out)["homology"] == {"5": "Z"}


def test_weight_bounds_degree_five_table():
    code, out, _ = cli("weight-bounds", fx("z_degree5"), "--format", "table")
    assert code == 0
    assert "[-5, -5]" in out


def test_membership_refutation_exit_one(tmp_path):
    cert = tmp_path / "cert.json"
    code, out, _ = cli("weight-bounds", fx("two_term_z4"), "--member", ">=", "1", "--emit-certificate", cert)
    rep = json.loads(out)
    assert code == 1 and rep["member"] is False and rep["obstructed_degree"] == 0
    c = json.loads(cert.read_text())
    jsonschema.validate(c, schema("certificate"))
    assert verify(c)
    code, out, _ = cli("verify", cert)
    assert code == 0 and json.loads(out)["verified"] is True


def test_is_contractible_both_ways(tmp_path):
    code, _, _ = cli("is-contractible", fx("cone_identity"))
    assert code == 0
    code, out, _ = cli("is-contractible", fx("two_term_z4"), "--emit-certificate", "-")
    rep = json.loads(out)
    assert code == 1 and rep["contractible"] is False
    assert verify(rep["certificate"])


def test_detect_periodic():
    code, out, _ = cli("detect", fx("periodic_z4"))
    rep = json.loads(out)
    assert code == 1
    assert all(rep["homology_zero"].values())
    assert rep["membership"] is False
    assert rep["window"] == [-20, 20]


def test_free_replace_and_karoubi():
    code, out, _ = cli("free-replace", fx("z2_module"))
    assert code == 0 and json.loads(out)["weight_bounds"] == "[0, 1]"
    code, out, _ = cli("karoubi-totalize", fx("idempotent_z6"))
    rep = json.loads(out)
    assert code == 1 and rep["split"] is None and rep["match"] is True
    code, out, _ = cli("karoubi-totalize", fx("idempotent_z"))
    assert code == 0 and json.loads(out)["match"] is True


def test_transport_and_hom():
    code, out, _ = cli("transport", fx("z_degree5"), "--functor", "Z->Z/2")
    rep = json.loads(out)
    assert code == 0 and rep["image_bounds"] == "[-5, -5]"
    code, out, _ = cli("hom", fx("z_degree5"), fx("z_degree5"))
    assert code == 0 and json.loads(out)["hom"] == "Z"


def test_postnikov_weight_complex_wss():
    for cmd in ("postnikov", "weight-complex"):
        code, out, _ = cli(cmd, fx("cone_identity"))
        assert code == 0
    code, out, _ = cli("wss", fx("two_term_z4"), fx("two_term_z4"))
    assert code == 0 and json.loads(out)["converges"] is True


def test_weak_homotopy_cli(tmp_path):
    M = json.loads(fx("two_term_z4").read_text())
    ranks = M["ranks"]
    ident = {"source": M, "target": M,
             "components": {str(M["lo"] + k): [["1" if a == b else "0" for b in range(r)] for a in range(r)]
                            for k, r in enumerate(ranks)}}
    zero = {"source": M, "target": M, "components": {}}
    a, b = write(tmp_path, "id.json", ident), write(tmp_path, "zero.json", zero)
    cert = tmp_path / "c.json"
    code, out, _ = cli("weak-homotopy", a, b, "--emit-certificate", cert)
    assert code == 1
    assert verify(json.loads(cert.read_text()))
    code, out, _ = cli("weak-homotopy", a, b, "--lo", "2", "--hi", "5", "--emit-certificate", cert)
    assert code == 0
    assert verify(json.loads(cert.read_text()))


def test_check_axioms_and_harness():
    code, out, _ = cli("check-axioms", "--size", "8", "--ring", "Z/4")
    assert code == 0
    code, out, _ = cli("harness", "--size", "12", "--seed", "2")
    rep = json.loads(out)
    assert code == 0
    jsonschema.validate(rep, schema("harness_report"))
    code, out, _ = cli("harness", "--functor", "Z->F_3", "--size", "5")
    assert code == 1 and "aborted" in json.loads(out)


@pytest.mark.parametrize("cmd", ["weight-bounds", "is-contractible", "weight-complex", "postnikov"])
def test_emitted_certificates_validate(tmp_path, cmd):
    cert = tmp_path / "c.json"
    for name in ("z_degree5", "two_term_z4", "cone_identity"):
        cli(cmd, fx(name), "--emit-certificate", cert)
        c = json.loads(cert.read_text())
        jsonschema.validate(c, schema("certificate"))
        assert verify(c)


def test_fixtures_match_input_schemas():
    pairs = {"z_degree5": "complex", "two_term_z4": "complex", "cone_identity": "complex",
             "periodic_z4": "periodic", "idempotent_z6": "idempotent", "idempotent_z": "idempotent",
             "z2_module": "module_complex"}
    for f, s in pairs.items():
        jsonschema.validate(json.loads(fx(f).read_text()), schema(s))


def test_malformed_json_exit_two(tmp_path):
    p = write(tmp_path, "bad.json", '{"ring": "Z",\n "lo": 0,, }')
    code, out, err = cli("homology", p)
    assert code == 2 and out == ""
    assert "line 2 column" in err


@pytest.mark.parametrize("obj", [
    {"ring": "Z", "lo": 0, "ranks": [1, 1], "diff": []},
    {"ring": "Z/x", "lo": 0, "ranks": [1], "diff": []},
    {"ring": "Z", "lo": 0, "ranks": [1, 1, 1], "diff": [[["1"]], [["1"]]]},
    {"ring": "Z", "lo": 0, "ranks": [1, 2], "diff": [[["1"]]]},
])
def test_bad_inputs_exit_two(tmp_path, obj):
    code, _, err = cli("homology", write(tmp_path, "x.json", obj))
    assert code == 2 and err.startswith("weightcx: error:")


def test_missing_file_and_usage():
    assert cli("homology", "/nonexistent/file.json")[0] == 2
    assert cli("no-such-command")[0] == 2


def test_output_is_deterministic():
    runs = [cli("harness", "--size", "10", "--seed", "4")[1] for _ in range(2)]
    assert runs[0] == runs[1]
    runs = [cli("check-axioms", "--size", "6", "--seed", "9")[1] for _ in range(2)]
    assert runs[0] == runs[1]


def test_console_entry_point_subprocess():
    r = subprocess.run([sys.executable, "-m", "weightcx.cli", "weight-bounds", str(fx("z_degree5"))],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert json.loads(r.stdout)["bounds"] == "[-5, -5]"
