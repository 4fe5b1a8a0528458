"""Canonical serialization, schema diagnostics, and the CLI surface."""

import copy
import json

import numpy as np
import pytest

from starlift.certify import FiniteSubset, QDCertificate, TraceWitness, \
    unital_compression_map
from starlift.cli import cmd_dispatch
from starlift.cpmaps import LinearMapMat, complexify
from starlift.io import (SchemaError, algebra_to_json, anti_to_json,
                         canonical_dumps, cert_from_json, cert_to_json,
                         ideal_from_json, ideal_to_json, map_from_json,
                         map_to_json, matrix_from_json, matrix_to_json,
                         trace_to_json)
from starlift.matrix import op_norm
from starlift.realform import AntiAutomorphism, StarAlgebra
from starlift.sampling import random_matrix
from starlift.tensorexact import IdealPresentation
from starlift.transport import rho_map, sigma_map

ANTI2 = AntiAutomorphism.transpose(2)


@pytest.fixture()
def workdir(tmp_path):
    """Fixture files shared by the CLI tests."""
    files = {}

    def write(name, doc):
        p = tmp_path / name
        p.write_text(canonical_dumps(doc), encoding="ascii")
        files[name] = str(p)
        return str(p)

    transpose = LinearMapMat.from_function(lambda m: np.asarray(m).T, 2, "C")
    write("transpose2.json", map_to_json(transpose))
    idm = LinearMapMat.identity(2)
    write("idmap2.json", map_to_json(idm))
    cert = QDCertificate(StarAlgebra.full_matrix(2),
                         FiniteSubset((np.eye(2), np.array([[0.0, 1.0], [0.0, 0.0]]))),
                         idm, epsilon=1e-6)
    write("id_cert.json", cert_to_json(cert))
    phi = unital_compression_map(np.random.default_rng(4), 2, 3, field="R",
                                 terms=2)
    rng = np.random.default_rng(12)
    subset = FiniteSubset(tuple(rng.standard_normal((2, 2)) for _ in range(4)))
    rcert = QDCertificate(StarAlgebra.full_matrix(2), subset, phi, 9.0,
                          "complex_op", ANTI2)
    write("real_cert.json", cert_to_json(rcert))
    ccert = QDCertificate(StarAlgebra.full_matrix(2), subset,
                          complexify(phi, ANTI2), 9.0, "complex_op", ANTI2)
    write("cx_cert.json", cert_to_json(ccert))
    write("phi.json", anti_to_json(ANTI2))
    write("A2.json", algebra_to_json(StarAlgebra.full_matrix(2)))
    pres = IdealPresentation.from_block_algebra(
        StarAlgebra.block_diagonal([2, 3]), [0])
    write("ideal.json", ideal_to_json(pres))
    write("trace.json", trace_to_json(TraceWitness.normalized_trace(2)))
    write("x.json", matrix_to_json(np.array([[1.0, 2.0 + 1.0j], [0.0, 1.0]])))
    write("F.json", [matrix_to_json(m) for m in subset.elements])
    files["dir"] = str(tmp_path)
    return files


class TestCanonicalJson:
    def test_sorted_keys_and_float_format(self):
        text = canonical_dumps({"b": 0.5, "a": 1.0, "c": [True, None, "x"]})
        assert text == '{"a":1,"b":0.5,"c":[true,null,"x"]}\n'

    def test_seventeen_digit_floats(self):
        third = 1.0 / 3.0
        text = canonical_dumps(third)
        assert float(text) == third

    def test_round_trip_byte_identity(self):
        doc = {"x": [0.1, 2, -1.0 / 3.0], "y": {"z": "s"}, "f": 1e-9}
        text = canonical_dumps(doc)
        assert canonical_dumps(json.loads(text)) == text

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            canonical_dumps(float("nan"))


class TestMatrixSchema:
    def test_round_trip_complex(self):
        m = random_matrix(np.random.default_rng(0), 2, 3)
        doc = matrix_to_json(m)
        back = matrix_from_json(doc)
        assert back.field == "C"
        assert op_norm(back.array - m) < 1e-15

    def test_round_trip_real_compact(self):
        doc = matrix_to_json(np.eye(2))
        assert doc["field"] == "R"
        assert doc["data"] == [1.0, 0.0, 0.0, 1.0]
        back = matrix_from_json(doc)
        assert np.array_equal(back.array, np.eye(2))

    def test_real_accepts_pairs_with_zero_imag(self):
        doc = {"rows": 1, "cols": 1, "field": "R", "data": [[2.0, 0.0]]}
        assert matrix_from_json(doc).array[0, 0] == 2.0

    def test_bad_field(self):
        doc = {"rows": 1, "cols": 1, "field": "Q", "data": [1.0]}
        with pytest.raises(SchemaError, match="field"):
            matrix_from_json(doc)

    def test_wrong_length(self):
        doc = {"rows": 2, "cols": 2, "field": "R", "data": [1.0]}
        with pytest.raises(SchemaError, match="data"):
            matrix_from_json(doc)

    def test_real_rejects_nonzero_imag(self):
        doc = {"rows": 1, "cols": 1, "field": "R", "data": [[1.0, 2.0]]}
        with pytest.raises(SchemaError):
            matrix_from_json(doc)


class TestMapSchema:
    def test_complex_round_trip(self):
        phi = LinearMapMat.from_function(lambda m: np.asarray(m).T, 2, "C")
        back = map_from_json(map_to_json(phi))
        x = random_matrix(np.random.default_rng(1), 2)
        assert op_norm(back.apply(x) - phi.apply(x)) < 1e-14

    def test_real_linear_round_trip(self):
        back = map_from_json(map_to_json(sigma_map(2)))
        assert back.linearity == "R" and back.cod_field == "R"
        x = random_matrix(np.random.default_rng(2), 2)
        assert op_norm(back.apply(x) - sigma_map(2).apply(x)) < 1e-12

    def test_real_domain_round_trip(self):
        back = map_from_json(map_to_json(rho_map(2)))
        assert back.dom_field == "R"
        m = random_matrix(np.random.default_rng(3), 4, field="R")
        assert op_norm(back.apply(m) - rho_map(2).apply(m)) < 1e-12

    def test_image_count_checked(self):
        doc = map_to_json(LinearMapMat.identity(2))
        doc["images"] = doc["images"][:-1]
        with pytest.raises(SchemaError, match="images"):
            map_from_json(doc)

    def test_non_canonical_basis_not_serializable(self):
        phi = LinearMapMat.on_real_form(lambda m: m, ANTI2)
        with pytest.raises(SchemaError):
            map_to_json(phi)


class TestCertSchema:
    def test_round_trip(self, workdir):
        doc = json.load(open(workdir["real_cert.json"]))
        cert = cert_from_json(doc)
        assert cert.epsilon == 9.0
        assert cert.anti is not None
        assert canonical_dumps(cert_to_json(cert)) == \
            open(workdir["real_cert.json"]).read()

    def test_missing_epsilon_named(self, workdir):
        doc = json.load(open(workdir["id_cert.json"]))
        del doc["epsilon"]
        with pytest.raises(SchemaError, match="epsilon"):
            cert_from_json(doc)

    def test_bad_norm_mode(self, workdir):
        doc = json.load(open(workdir["id_cert.json"]))
        doc["norm_mode"] = "spectral"
        with pytest.raises(SchemaError, match="norm_mode"):
            cert_from_json(doc)


class TestIdealSchema:
    def test_round_trip_and_blocks(self, workdir):
        pres = ideal_from_json(json.load(open(workdir["ideal.json"])))
        assert pres.blocks == ((0, 2), (2, 3))
        assert pres.ideal_blocks == (0,)


def _run(argv, capsys):
    code = cmd_dispatch(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestCli:
    def test_lemma_audit_counterexample_exit(self, capsys):
        code, out, _ = _run(["lemma-audit", "--claim", "eqtr1_scale1",
                             "--samples", "100", "--seed", "7"], capsys)
        assert code == 1
        doc = json.loads(out)
        assert doc["report"]["witness"]["ratio"] == 2.0

    def test_lemma_audit_holds_exit(self, capsys):
        code, out, _ = _run(["lemma-audit", "--claim", "eqtr1_scale_half"],
                            capsys)
        assert code == 0

    def test_qd_verify_pass(self, workdir, capsys):
        code, out, _ = _run(["qd-verify", "--cert", workdir["id_cert.json"]],
                            capsys)
        assert code == 0
        doc = json.loads(out)
        assert doc["report"]["max_mult_defect"] == 0.0

    def test_cp_check_transpose_fails(self, workdir, capsys):
        code, out, _ = _run(["cp-check", "--map", workdir["transpose2.json"]],
                            capsys)
        assert code == 1
        assert json.loads(out)["defect"] == -1.0

    def test_cp_check_env_tolerance(self, workdir, capsys, monkeypatch):
        monkeypatch.setenv("STARLIFT_TOL", "10.0")
        code, _, _ = _run(["cp-check", "--map", workdir["transpose2.json"]],
                          capsys)
        assert code == 0

    def test_flag_overrides_env(self, workdir, capsys, monkeypatch):
        monkeypatch.setenv("STARLIFT_TOL", "10.0")
        code, _, _ = _run(["cp-check", "--map", workdir["transpose2.json"],
                           "--tol", "1e-9"], capsys)
        assert code == 1

    def test_transport_identity(self, workdir, capsys):
        code, out, _ = _run(["transport", "--phi-map", workdir["idmap2.json"],
                             "--psi-map", workdir["idmap2.json"]], capsys)
        assert code == 0
        assert json.loads(out)["composition_residual"] < 1e-10

    def test_qd_transport_complexify(self, workdir, capsys):
        code, out, _ = _run(["qd-transport", "--cert", workdir["real_cert.json"],
                             "--direction", "complexify"], capsys)
        assert code == 0
        doc = json.loads(out)
        assert doc["report"]["extra"]["bounds_hold"]
        assert doc["certificate"]["norm_mode"] == "phi_split"

    def test_qd_transport_realify_fixed_and_paper(self, workdir, capsys):
        code, out, _ = _run(["qd-transport", "--cert", workdir["cx_cert.json"],
                             "--direction", "realify"], capsys)
        assert code == 0
        doc = json.loads(out)
        assert doc["report"]["extra"]["bounds_hold"]
        code, out, _ = _run(["qd-transport", "--cert", workdir["cx_cert.json"],
                             "--direction", "realify", "--theta-mode", "paper"],
                            capsys)
        doc = json.loads(out)
        assert doc["certificate"] is None
        assert any("nonlinear theta" in f
                   for f in doc["report"]["extra"]["flags"])

    def test_trace_audit(self, workdir, capsys):
        code, out, _ = _run(["trace-audit", "--cert", workdir["cx_cert.json"],
                             "--trace", workdir["trace.json"],
                             "--phi", workdir["phi.json"]], capsys)
        doc = json.loads(out)
        assert "transport" in doc and "chain" in doc["transport"]

    def test_nuclear_verify(self, workdir, capsys):
        code, out, _ = _run(["nuclear-verify",
                             "--phi-map", workdir["idmap2.json"],
                             "--psi-map", workdir["idmap2.json"],
                             "--set", workdir["F.json"],
                             "--epsilon", "1e-6"], capsys)
        assert code == 0

    def test_fubini_and_exactness(self, workdir, capsys):
        code, out, _ = _run(["fubini", "--algebra", workdir["A2.json"],
                             "--ideal", workdir["ideal.json"]], capsys)
        assert code == 0
        assert json.loads(out)["fubini"]["match"]
        code, out, _ = _run(["exactness", "--algebra", workdir["A2.json"],
                             "--ideal", workdir["ideal.json"]], capsys)
        assert code == 0
        assert json.loads(out)["report"]["ok"]

    def test_realform_check_and_decompose(self, workdir, capsys):
        code, out, _ = _run(["realform", "--phi", workdir["phi.json"],
                             "--matrix", workdir["x.json"]], capsys)
        assert code == 0
        doc = json.loads(out)
        assert doc["check"]["ok"]
        assert doc["decomposition"]["recombine_residual"] < 1e-12

    def test_realform_bad_u_exits_one(self, tmp_path, capsys):
        bad = tmp_path / "bad_phi.json"
        bad.write_text(json.dumps(
            {"u": matrix_to_json(np.diag([2.0, 1.0]))}))
        code, out, _ = _run(["realform", "--phi", str(bad)], capsys)
        assert code == 1
        assert not json.loads(out)["check"]["ok"]

    def test_choi(self, workdir, capsys):
        code, out, _ = _run(["choi", "--map", workdir["transpose2.json"]],
                            capsys)
        assert code == 0
        doc = json.loads(out)
        assert doc["min_eigenvalue"] == pytest.approx(-1.0)

    def test_unknown_subcommand(self, capsys):
        code, _, _ = _run(["frobnicate"], capsys)
        assert code == 2

    def test_unknown_claim(self, capsys):
        code, _, err = _run(["lemma-audit", "--claim", "nope"], capsys)
        assert code == 2
        assert "unknown claim" in err

    def test_schema_error_field(self, workdir, tmp_path, capsys):
        doc = json.load(open(workdir["id_cert.json"]))
        bad = copy.deepcopy(doc)
        bad["F"][0]["field"] = "Q"
        p = tmp_path / "bad.json"
        p.write_text(json.dumps(bad))
        code, _, err = _run(["qd-verify", "--cert", str(p)], capsys)
        assert code == 2
        assert "field" in err

    def test_missing_file(self, capsys):
        code, _, _ = _run(["qd-verify", "--cert", "/nonexistent.json"], capsys)
        assert code == 2

    def test_output_file(self, workdir, tmp_path, capsys):
        out_path = tmp_path / "report.json"
        code, out, _ = _run(["qd-verify", "--cert", workdir["id_cert.json"],
                             "--output", str(out_path)], capsys)
        assert out_path.read_text() == out

    def test_determinism_same_seed(self, workdir, capsys):
        a = _run(["lemma-audit", "--claim", "eta_cp", "--samples", "60",
                  "--seed", "11"], capsys)
        b = _run(["lemma-audit", "--claim", "eta_cp", "--samples", "60",
                  "--seed", "11"], capsys)
        assert a == b
