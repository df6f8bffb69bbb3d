import json
import os
import subprocess
import sys

import jsonschema
import pytest

from bzeta import cli

REPO = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def _main(capsys, *argv):
    status = cli.main(list(argv))
    out = capsys.readouterr()
    return status, out.out, out.err


def _doc(capsys, *argv):
    status, out, err = _main(capsys, *argv)
    return status, json.loads(out), err


def _validate(doc):
    jsonschema.validate(doc, cli.load_schema("output.json"))


def _c(pair):
    return complex(float(pair["re"]), float(pair["im"]))


ZETA2 = ["eval-zeta", "--s", "2", "--w", "1", "--a", "[1]", "--theta", "[0]"]


def test_eval_zeta_example(capsys):
    status, doc, _ = _doc(capsys, *ZETA2)
    assert status == 0 and doc["status"] == 0
    assert abs(_c(doc["value"]) - 1.6449340668482264) < 1e-7
    _validate(doc)


def test_numbers_are_decimal_strings(capsys):
    _, doc, _ = _doc(capsys, *ZETA2)
    assert isinstance(doc["value"]["re"], str) and isinstance(doc["abs_error_estimate"], str)


def test_params_echo_verbatim(capsys):
    _, doc, _ = _doc(capsys, "eval-L", "--s", "2.5", "--w", '"1+1i"', "--a", "[1]", "--theta", "[0.25]")
    assert doc["input_echo"]["params"] == {"s": 2.5, "w": "1+1i", "a": [1], "theta": [0.25]}
    assert doc["input_echo"]["command"] == "eval-L"


def test_verify_cocycle_example(capsys):
    status, doc, _ = _doc(capsys, "verify-cocycle", "--N", "3", "--trials", "100", "--seed", "7")
    assert status == 0 and doc["verdict"]["passed"]
    assert all(float(r["abs"]) < 1e-10 for r in doc["residuals"])
    _validate(doc)


def test_eval_L_at_pole_exits_2(capsys):
    status, doc, err = _doc(capsys, "eval-L", "--s", "1", "--w", "1", "--a", "[1]", "--theta", "[0]")
    assert status == 2 and doc["status"] == 2
    assert "simple pole" in doc["error"]["message"] and "simple pole" in err
    _validate(doc)


def test_nonconvergence_exits_3(capsys):
    status, doc, _ = _doc(
        capsys, "rho", "--s", "0.9", "--w", "0.5", "--a", "[1]", "--theta", "[0]", "--psi", "3", "--rho_R_max", "30"
    )
    assert status == 3 and doc["error"]["type"] == "ConvergenceError"
    _validate(doc)


def test_schema_errors_exit_4(capsys):
    status, doc, _ = _doc(capsys, "eval-zeta", "--s", "2", "--w", "1")
    assert status == 4 and doc["status"] == 4
    _validate(doc)
    status, _, err = _main(capsys, "eval-zeta", "stray")
    assert status == 4 and "unexpected argument" in err
    status, _, _ = _main(capsys, "eval-zeta", "--s")
    assert status == 4


def test_unknown_command_exits_4(capsys):
    status, doc, _ = _doc(capsys, "no-such-command", "--s", "1")
    assert status == 4 and doc["status"] == 4


def test_run_job_file(tmp_path, capsys):
    job = {"command": "eval-zeta", "params": {"s": 2, "w": 1, "a": [1], "theta": [0]}}
    f = tmp_path / "job.json"
    f.write_text(json.dumps(job))
    status, doc, _ = _doc(capsys, "run", str(f))
    assert status == 0 and abs(_c(doc["value"]) - 1.6449340668482264) < 1e-7
    f.write_text("{not json")
    status, _, _ = _main(capsys, "run", str(f))
    assert status == 4


def test_batch_order_and_malformed_line(tmp_path, capsys):
    lines = [
        json.dumps({"command": "eval-zeta", "s": 2, "w": 1, "a": [1], "theta": [0]}),
        "{this is not json",
        json.dumps({"command": "eval-zeta", "s": 4, "w": 1, "a": [1], "theta": [0]}),
    ]
    f = tmp_path / "jobs.ndjson"
    f.write_text("\n".join(lines) + "\n")
    status, out, err = _main(capsys, "batch", str(f))
    assert status == 0
    docs = [json.loads(x) for x in out.splitlines()]
    assert [d["status"] for d in docs] == [0, 4, 0]
    assert abs(_c(docs[0]["value"]) - 1.6449340668482264) < 1e-7
    assert abs(_c(docs[2]["value"]) - 1.0823232337111382) < 1e-7
    assert "document 2 has status 4" in err
    for d in docs:
        _validate(d)


def test_batch_of_three_in_order(tmp_path, capsys):
    f = tmp_path / "jobs.ndjson"
    f.write_text("\n".join(json.dumps({"command": "eval-zeta", "s": s, "w": 1, "a": [1], "theta": [0]}) for s in (2, 3, 4)))
    _, out, _ = _main(capsys, "batch", str(f))
    docs = [json.loads(x) for x in out.splitlines()]
    assert [d["input_echo"]["params"]["s"] for d in docs] == [2, 3, 4]


def test_batch_parallel_matches_serial(tmp_path, capsys):
    f = tmp_path / "jobs.ndjson"
    f.write_text(
        "\n".join(json.dumps({"command": "eval-zeta", "s": s, "w": 0.5, "a": [1, 2], "theta": [0, 0]}) for s in (2.5, 3, 3.5))
    )
    _, serial, _ = _main(capsys, "batch", str(f))
    _, parallel, _ = _main(capsys, "batch", str(f), "--workers", "2")
    assert serial == parallel


def test_batch_rerun_byte_identical(tmp_path, capsys):
    f = tmp_path / "jobs.ndjson"
    f.write_text(
        json.dumps({"command": "verify-transform", "N": 2, "s": -0.5, "random": 3, "g": "example-2"}) + "\n"
        + json.dumps({"command": "verify-cocycle", "N": 2, "trials": 10}) + "\n"
    )
    _, a, _ = _main(capsys, "batch", str(f), "--seed", "5")
    _, b, _ = _main(capsys, "batch", str(f), "--seed", "5")
    assert a == b


def test_seed_changes_random_suite(capsys):
    _, a, _ = _main(capsys, "verify-cocycle", "--N", "3", "--trials", "5", "--seed", "1")
    _, b, _ = _main(capsys, "verify-cocycle", "--N", "3", "--trials", "5", "--seed", "2")
    _, c, _ = _main(capsys, "verify-cocycle", "--N", "3", "--trials", "5", "--seed", "1")
    assert a == c and a != b


def test_subprocess_determinism():
    args = [sys.executable, "-m", "bzeta", *ZETA2]
    a = subprocess.run(args, capture_output=True, check=True).stdout
    b = subprocess.run(args, capture_output=True, check=True).stdout
    assert a == b and a


def test_runtime_only_with_timing(capsys):
    _, doc, _ = _doc(capsys, *ZETA2)
    assert doc["runtime_ms"] is None
    _, doc, _ = _doc(capsys, *ZETA2, "--timing", "true")
    assert isinstance(doc["runtime_ms"], float)


def test_defaults_command(capsys):
    status, doc, _ = _doc(capsys, "defaults")
    assert status == 0
    assert doc["config"] == cli.DEFAULT_CONFIG
    assert set(doc["commands"]) == set(cli.COMMANDS)


def test_config_precedence(tmp_path, capsys, monkeypatch):
    f = tmp_path / "cfg.json"
    f.write_text(json.dumps({"circle_nodes": 256, "target_tol": 1e-12}))
    _, doc, _ = _doc(capsys, *ZETA2, "--config", str(f))
    assert doc["input_echo"]["config"]["circle_nodes"] == 256
    # flags beat the file
    _, doc, _ = _doc(capsys, *ZETA2, "--config", str(f), "--circle_nodes", "512")
    assert doc["input_echo"]["config"]["circle_nodes"] == 512
    assert doc["input_echo"]["config"]["target_tol"] == 1e-12
    # environment fallback
    monkeypatch.setenv("BZETA_CONFIG", str(f))
    _, doc, _ = _doc(capsys, *ZETA2)
    assert doc["input_echo"]["config"]["circle_nodes"] == 256


def test_job_config_beats_base(capsys):
    job = {"command": "eval-zeta", "params": {"s": 2, "w": 1, "a": [1], "theta": [0]}, "config": {"circle_nodes": 512}}
    doc, status = cli.run(job, {"circle_nodes": 256})
    assert status == 0 and doc["input_echo"]["config"]["circle_nodes"] == 512


def test_bad_config_file_exits_4(tmp_path, capsys):
    f = tmp_path / "cfg.json"
    f.write_text("[1, 2")
    status, _, _ = _main(capsys, *ZETA2, "--config", str(f))
    assert status == 4
    f.write_text(json.dumps({"no_such_key": 1}))
    status, _, _ = _main(capsys, *ZETA2, "--config", str(f))
    assert status == 4


def test_invalid_config_value_exits_2(capsys):
    status, doc, _ = _doc(capsys, *ZETA2, "--circle_nodes", "8")
    assert status == 2 and doc["error"]["type"] == "PreconditionError"


@pytest.mark.parametrize(
    "argv",
    [
        ZETA2,
        ["eval-L", "--s", "-0.5", "--w", "0.5", "--a", '["-1", 2]', "--theta", "[0.2, 0]"],
        ["special-value", "--k", "2", "--w", "0.3", "--a", "[1, 2]", "--theta", "[0, 0.1]"],
        ["residue", "--k", "2", "--w", "0.3", "--a", "[1, 2]", "--theta", "[0, 0]"],
        ["rho", "--point", '"example-2"', "--N", "3", "--s", "-3", "--psi", "1.0471975511965976"],
        ["verify-transform", "--s", "-0.5", "--N", "2", "--random", "2", "--g", '"example-2"'],
        ["fixed-points", "--g", '"example-1"', "--N", "3"],
        ["lambert-ex1", "--N", "3", "--c", "0.5", "--k", "3"],
        ["lambert-ex2", "--N", "2", "--k", "2"],
        ["gamma-product", "--N", "2", "--trunc", "30"],
        ["kronecker", "--point", '"example-2"', "--N", "2", "--g", '"example-2"', "--k", "0"],
        ["classify", "--w", "0.5", "--a", "[-1, 2]", "--theta", "[0, 0]"],
    ],
    ids=lambda a: a[0],
)
def test_every_command_emits_valid_documents(capsys, argv):
    status, doc, _ = _doc(capsys, *argv)
    assert status == 0, doc.get("error")
    _validate(doc)


def test_rationality_verdicts_in_output(capsys):
    _, doc, _ = _doc(capsys, "lambert-ex2", "--N", "2", "--k", "2")
    assert doc["verdict"]["is_near_rational"] and doc["verdict"]["numerators"] == [0, 1, 0, 0]


def test_published_schema_matches_packaged_copy():
    for name in ("job.json", "output.json"):
        with open(os.path.join(REPO, "schema", name)) as fh:
            published = json.load(fh)
        assert published == cli.load_schema(name)
