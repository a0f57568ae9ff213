import copy
import json
import random

import pytest

from kolchin import (
    GF,
    QQ,
    CertificateError,
    Matrix,
    Representation,
    RepFileError,
    check_certificate,
    dumps_representation,
    load_certificate,
    loads_representation,
    make_certificate,
    representation_digest,
)
from kolchin.cli import main
from kolchin.repfile import representation_from_dict, save_representation
from corpus import conjugated_unitriangular_rep, heisenberg

HEIS_DOC = {
    "field": "Q",
    "dim": 3,
    "generators": {
        "a": [[1, 1, 0], [0, 1, 0], [0, 0, 1]],
        "b": [[1, 0, 0], [0, 1, 1], [0, 0, 1]],
    },
}


@pytest.fixture
def heis_file(tmp_path):
    path = tmp_path / "heis.json"
    path.write_text(json.dumps(HEIS_DOC))
    return str(path)


def test_round_trip_bit_exact():
    rng = random.Random(2)
    for rational in (False, True):
        rep = conjugated_unitriangular_rep(rng, 4, 3, rational)
        assert loads_representation(dumps_representation(rep)) == rep
    rep = Representation(GF(7), {"g": Matrix(GF(7), [[1, 3], [0, 5]])})
    assert loads_representation(dumps_representation(rep)) == rep


def test_round_trip_serialisation_idempotent():
    rep = heisenberg()
    text = dumps_representation(rep)
    assert dumps_representation(loads_representation(text)) == text


def test_scalar_strings_and_flat_matrices():
    doc = {
        "field": "Q",
        "dim": 2,
        "generators": {"g": ["1", "-7/2", 0, "1"]},
    }
    rep = representation_from_dict(doc)
    assert rep.generator("g") == Matrix(QQ, [[1, "-7/2"], [0, 1]])


def test_prime_field_scalars_reduced():
    doc = {"field": {"Fp": 5}, "dim": 1, "generators": {"g": [[7]]}}
    rep = representation_from_dict(doc)
    assert rep.generator("g") == Matrix(GF(5), [[2]])


@pytest.mark.parametrize("mutate,message", [
    (lambda d: d.pop("dim"), "missing"),
    (lambda d: d.update(field="R"), "field"),
    (lambda d: d.update(field={"Fp": 4}), "prime"),
    (lambda d: d.update(dim=0), "dim"),
    (lambda d: d.update(generators={}), "generators"),
    (lambda d: d["generators"].update(a=[[1, "1/0", 0], [0, 1, 0], [0, 0, 1]]), "denominator"),
    (lambda d: d["generators"].update(a=[[1, 0], [0, 1]]), "3x3"),
    (lambda d: d["generators"].update(a=[[0, 0, 0], [0, 1, 0], [0, 0, 1]]), "invertible"),
])
def test_parse_errors(mutate, message):
    doc = copy.deepcopy(HEIS_DOC)
    mutate(doc)
    with pytest.raises(RepFileError) as info:
        representation_from_dict(doc)
    assert message.lower() in str(info.value).lower()


def test_json_errors_report_position():
    with pytest.raises(RepFileError) as info:
        loads_representation('{"field": "Q",\n  bad}')
    assert "line 2" in str(info.value)


def test_cli_check_unipotent(heis_file, capsys):
    assert main(["check-unipotent", heis_file]) == 0
    out = capsys.readouterr().out
    assert "a: unipotent, index 2" in out
    assert main(["check-unipotent", heis_file, "--element", "a b a^-1 b^-1"]) == 0


def test_cli_check_unipotent_failure(tmp_path):
    path = tmp_path / "diag.json"
    path.write_text(json.dumps({"field": "Q", "dim": 2,
                                "generators": {"d": [[2, 0], [0, 1]]}}))
    assert main(["check-unipotent", str(path)]) == 2


def test_cli_parse_error_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"field": "Q"')
    assert main(["check-unipotent", str(path)]) == 1
    path.write_text(json.dumps({"field": "Q", "dim": 2,
                                "generators": {"d": [["1/0", 0], [0, 1]]}}))
    assert main(["check-unipotent", str(path)]) == 1


def test_cli_usage_error_exit_code():
    assert main(["kolchin"]) == 1
    assert main(["probe", "whatever.json", "--kind", "nil"]) == 1  # missing file -> parse error


def test_cli_kolchin_certificate(heis_file, tmp_path, capsys):
    cert_path = str(tmp_path / "cert.json")
    assert main(["kolchin", heis_file, "--cert", cert_path]) == 0
    out = capsys.readouterr().out
    assert "degree 3" in out
    assert main(["check-cert", heis_file, cert_path]) == 0
    # identical runs produce byte-identical certificates
    cert_path2 = str(tmp_path / "cert2.json")
    assert main(["kolchin", heis_file, "--cert", cert_path2]) == 0
    with open(cert_path, "rb") as a, open(cert_path2, "rb") as b:
        assert a.read() == b.read()


def test_cli_kolchin_failure_stage(tmp_path, capsys):
    path = tmp_path / "diag.json"
    path.write_text(json.dumps({"field": "Q", "dim": 2,
                                "generators": {"d": [[2, 0], [0, 1]]}}))
    cert = str(tmp_path / "cert.json")
    assert main(["kolchin", str(path), "--cert", cert]) == 2
    assert "stage 2" in capsys.readouterr().out
    assert main(["check-cert", str(path), cert]) == 0


def test_cli_identity_check(heis_file, tmp_path, capsys):
    assert main(["identity-check", heis_file, "--length", "2"]) == 2
    assert "witness" in capsys.readouterr().out
    cert = str(tmp_path / "id.json")
    assert main(["identity-check", heis_file, "--length", "3", "--cert", cert]) == 0
    assert main(["check-cert", heis_file, cert]) == 0
    assert main(["identity-check", heis_file, "--length", "1",
                 "--lift-through-radical", "--cert", cert]) == 0
    assert "lifted bound 3" in capsys.readouterr().out
    assert main(["check-cert", heis_file, cert]) == 0


def test_cli_pi_check(heis_file, tmp_path, capsys):
    cert = str(tmp_path / "pi.json")
    assert main(["pi-check", heis_file, "--max-degree", "6", "--cert", cert]) == 0
    out = capsys.readouterr().out
    assert "dimension: 4" in out
    assert "minimal standard identity degree: 4" in out
    assert main(["check-cert", heis_file, cert]) == 0
    assert main(["pi-check", heis_file, "--max-degree", "2"]) == 3


def test_cli_unipotent_radical(tmp_path, capsys):
    path = tmp_path / "g.json"
    path.write_text(json.dumps({"field": {"Fp": 3}, "dim": 2, "generators": {
        "u": [[1, 1], [0, 1]], "d": [[-1, 0], [0, 1]]}}))
    cert = str(tmp_path / "rad.json")
    assert main(["unipotent-radical", str(path), "--test", "u", "--oracle",
                 "--cert", cert]) == 0
    out = capsys.readouterr().out
    assert "member" in out and "oracle agrees" in out
    assert main(["check-cert", str(path), cert]) == 0
    assert main(["unipotent-radical", str(path), "--test", "d"]) == 2


def test_cli_unipotent_radical_char_too_small(tmp_path):
    path = tmp_path / "f2.json"
    path.write_text(json.dumps({"field": {"Fp": 2}, "dim": 2,
                                "generators": {"u": [[1, 1], [0, 1]]}}))
    assert main(["unipotent-radical", str(path)]) == 3


def test_cli_probe(heis_file, tmp_path, capsys):
    assert main(["probe", heis_file, "--kind", "engel", "--n", "2"]) == 0
    assert "evidence" in capsys.readouterr().out
    cert = str(tmp_path / "probe.json")
    assert main(["probe", heis_file, "--kind", "engel", "--n", "1", "--cert", cert]) == 2
    assert main(["check-cert", heis_file, cert]) == 0
    assert main(["probe", heis_file, "--kind", "nil", "--g", "a", "--x", "b"]) == 0
    assert "nil index 2" in capsys.readouterr().out
    assert main(["probe", heis_file, "--kind", "nil", "--g", "1"]) == 0
    assert main(["probe", heis_file, "--kind", "algebraic", "--g", "a", "--x", "b",
                 "--element-cap", "500"]) == 0
    assert main(["probe", heis_file, "--kind", "nil"]) == 1  # missing --g


def test_cli_probe_inconclusive(tmp_path):
    path = tmp_path / "mix.json"
    path.write_text(json.dumps({"field": "Q", "dim": 2, "generators": {
        "d": [[2, 0], [0, 1]], "t": [[1, 1], [0, 1]]}}))
    assert main(["probe", str(path), "--kind", "nil", "--g", "d", "--x", "t",
                 "--depth-cap", "5"]) == 3
    assert main(["probe", str(path), "--kind", "algebraic", "--g", "d", "--x", "t",
                 "--depth-cap", "4", "--element-cap", "40"]) == 3


def test_certificate_digest_detects_stale_inputs():
    rep = heisenberg()
    other = Representation(QQ, {"a": rep.generator("a")})
    cert = make_certificate("check-unipotent", rep, "unipotent",
                            {"indices": {"a": 2, "b": 2}})
    with pytest.raises(CertificateError):
        check_certificate(other, cert)
    assert representation_digest(rep) != representation_digest(other)


def test_certificate_tampering_detected(tmp_path):
    rep = heisenberg()
    from kolchin.certificates import flag_to_payload, matrix_to_rows
    from kolchin.reps import kolchin_flag

    cert_obj = kolchin_flag(rep)
    payload = {
        "degree": cert_obj.degree,
        "flag": flag_to_payload(cert_obj.flag),
        "base_change": matrix_to_rows(cert_obj.base_change),
    }
    good = make_certificate("kolchin", rep, "unitriangular", payload)
    assert "verified" in check_certificate(rep, good)

    bad = copy.deepcopy(good)
    bad["payload"]["degree"] = 2
    with pytest.raises(CertificateError):
        check_certificate(rep, bad)

    bad = copy.deepcopy(good)
    bad["payload"]["flag"][1] = [["1", "0", "0"]]  # wrong first step
    with pytest.raises(CertificateError):
        check_certificate(rep, bad)

    bad = copy.deepcopy(good)
    bad["payload"]["base_change"][0] = ["0", "0", "0"]
    with pytest.raises(CertificateError):
        check_certificate(rep, bad)


def test_save_and_load(tmp_path):
    rep = heisenberg()
    path = str(tmp_path / "out.json")
    save_representation(path, rep)
    from kolchin import load_representation

    assert load_representation(path) == rep
