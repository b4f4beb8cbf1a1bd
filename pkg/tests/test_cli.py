import json

import jsonschema
import pytest

from cartanbundles.cli import compile_expr, main
from cartanbundles.errors import SpecError
from cartanbundles.report import REPORT_SCHEMA

SEMIDIRECT = {
    "kind": "custom", "name": "sheared",
    "chart": {"lower": [-1, -1], "upper": [1, 1]},
    "group": {"name": "SO(2)"},
    "coefficients": {"rho": "semidirect_adjoint"},
    "gauge": {"A": [["y", "0"], ["1", "0"], ["0", "1"]]},
}


def write(tmp_path, spec, name="spec.json"):
    p = tmp_path / name
    p.write_text(spec if isinstance(spec, str) else json.dumps(spec))
    return str(p)


def catalog_spec(tmp_path, name, **params):
    return write(tmp_path, {"kind": "catalog", "name": name, "params": params}, name + ".json")


def test_compile_expr():
    f = compile_expr("2*x - (y + 1) * -z", 3)
    assert f([1.0, 2.0, 3.0]) == pytest.approx(11.0)
    assert compile_expr("x1 * x4", 5)([0, 2, 0, 0, 3]) == 6.0
    assert compile_expr(1.5, 2)([0, 0]) == 1.5
    for bad in ("x ** 2", "sin(x)", "w", "x +", "__import__('os')"):
        with pytest.raises(SpecError):
            compile_expr(bad, 2)


def test_check_cartan_exit_codes(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["check", "cartan", catalog_spec(tmp_path, "euclidean"), "--report", str(out)]) == 0
    data = json.loads(out.read_text())
    jsonschema.validate(data, REPORT_SCHEMA)
    assert all(r["verdict"] == "pass" for r in data)
    capsys.readouterr()
    assert main(["check", "cartan", catalog_spec(tmp_path, "connection_counterexample")]) == 1
    assert "ker_theta_vertical" in capsys.readouterr().out


def test_check_pfaffian(tmp_path):
    assert main(["check", "pfaffian", catalog_spec(tmp_path, "riemannian_flat"), "--quiet"]) == 0


def test_invalid_inputs(tmp_path, capsys):
    assert main(["check", "cartan", write(tmp_path, '{"kind": "custom",\n  "chart": }')]) == 2
    err = capsys.readouterr().err
    assert "line 2" in err
    assert main(["check", "cartan", str(tmp_path / "missing.json")]) == 2
    spec = dict(SEMIDIRECT, gauge={"A": [["y ** 2", "0"], ["1", "0"], ["0", "1"]]})
    assert main(["check", "cartan", write(tmp_path, spec)]) == 2
    assert "gauge.A[0][0]" in capsys.readouterr().err
    assert main(["check", "cartan", catalog_spec(tmp_path, "torus")]) == 2
    assert main(["frobnicate"]) == 2


def test_custom_spec_curvature_and_torsion(tmp_path, capsys):
    path = write(tmp_path, SEMIDIRECT)
    assert main(["curvature", path, "--at", "0.2,0.3", "--torsion"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["curvature(d0,d1)"] == pytest.approx([-1.0, -0.3, 0.0], abs=1e-5)
    assert out["torsion(d0,d1)"] == pytest.approx([0.0, -0.3, 0.0], abs=1e-5)
    assert main(["curvature", path, "--at", "3,0"]) == 2


def test_correspond_and_roundtrip(tmp_path, capsys):
    path = catalog_spec(tmp_path, "euclidean")
    for direction in ("to-groupoid", "to-bundle", "gstructure"):
        assert main(["correspond", path, "--direction", direction, "--quiet"]) == 0
    assert main(["correspond", catalog_spec(tmp_path, "sphere2"), "--direction", "gstructure"]) == 2
    assert main(["roundtrip", write(tmp_path, SEMIDIRECT)]) == 0
    assert "max roundtrip residual" in capsys.readouterr().out


def test_catalog_list(capsys):
    assert main(["catalog", "list"]) == 0
    assert "hyperbolic2" in capsys.readouterr().out
