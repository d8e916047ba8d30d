"""End-to-end command-line behavior, including a loopback proof session."""

import json
import random
import socket
import threading
import time

import pytest

from sdzkp.cli import EXIT_ACCEPT, EXIT_REJECT, EXIT_USAGE, main, make_rng, parse_addr
from sdzkp.instance import load_instance, load_witness, validate_witness


def keygen(tmp_path, *extra):
    args = ["keygen", "--out-dir", str(tmp_path), "--seed", "7"]
    args += list(extra)
    assert main(args) == EXIT_ACCEPT
    return tmp_path / "instance.sdz", tmp_path / "witness.sdw"


def free_port():
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


def test_parse_addr():
    assert parse_addr("127.0.0.1:9000") == ("127.0.0.1", 9000)
    assert parse_addr("[::1]:70") == ("[::1]", 70)
    with pytest.raises(ValueError):
        parse_addr("no-port")
    with pytest.raises(ValueError):
        parse_addr(":123")
    with pytest.raises(ValueError):
        parse_addr("host:notaport")


def test_make_rng(capsys):
    assert isinstance(make_rng(None), random.SystemRandom)
    seeded = make_rng(42)
    assert "WARNING" in capsys.readouterr().err
    assert seeded.random() == random.Random(42).random()


def test_keygen_writes_loadable_pair(tmp_path, capsys):
    inst_path, wit_path = keygen(tmp_path, "--n", "16", "--gens", "3", "--k", "5")
    out = capsys.readouterr().out
    assert "instance.sdz" in out and "witness.sdw" in out
    inst = load_instance(inst_path)
    wit = load_witness(wit_path)
    assert inst.degree == 16 and inst.max_distance == 5
    assert validate_witness(inst, wit.element)


def test_keygen_rejects_impossible_distance(tmp_path, capsys):
    code = main(["keygen", "--out-dir", str(tmp_path), "--k", "1", "--seed", "1"])
    assert code == EXIT_USAGE
    assert "error" in capsys.readouterr().err


def test_unknown_input_files_are_usage_errors(tmp_path):
    missing = str(tmp_path / "nope.sdz")
    assert main(["fs-verify", "--instance", missing, "--proof", missing]) == EXIT_USAGE


def test_fs_prove_and_verify(tmp_path, capsys):
    inst_path, wit_path = keygen(tmp_path)
    proof = tmp_path / "p.sdp"
    code = main([
        "fs-prove", "--instance", str(inst_path), "--witness", str(wit_path),
        "--proof", str(proof), "--rounds", "24", "--context", "unit", "--seed", "9",
    ])
    assert code == EXIT_ACCEPT
    assert proof.exists()
    capsys.readouterr()

    code = main(["fs-verify", "--instance", str(inst_path), "--proof", str(proof), "--context", "unit"])
    assert code == EXIT_ACCEPT
    assert "ACCEPT" in capsys.readouterr().out

    code = main(["fs-verify", "--instance", str(inst_path), "--proof", str(proof), "--context", "other"])
    assert code == EXIT_REJECT
    assert "REJECT" in capsys.readouterr().out


def test_fs_verify_rejects_corrupt_and_truncated(tmp_path, capsys):
    inst_path, wit_path = keygen(tmp_path)
    proof = tmp_path / "p.sdp"
    main([
        "fs-prove", "--instance", str(inst_path), "--witness", str(wit_path),
        "--proof", str(proof), "--rounds", "8", "--seed", "9",
    ])
    data = proof.read_bytes()

    truncated = tmp_path / "t.sdp"
    truncated.write_bytes(data[: len(data) // 2])
    assert main(["fs-verify", "--instance", str(inst_path), "--proof", str(truncated)]) == EXIT_REJECT

    flipped = bytearray(data)
    flipped[len(flipped) // 3] ^= 0x20
    corrupt = tmp_path / "c.sdp"
    corrupt.write_bytes(bytes(flipped))
    assert main(["fs-verify", "--instance", str(inst_path), "--proof", str(corrupt)]) == EXIT_REJECT

    missing = tmp_path / "missing.sdp"
    assert main(["fs-verify", "--instance", str(inst_path), "--proof", str(missing)]) == EXIT_USAGE
    capsys.readouterr()


def test_fs_verify_rejects_wrong_instance(tmp_path, capsys):
    inst_path, wit_path = keygen(tmp_path / "a")
    other_path, _ = keygen(tmp_path / "b", "--seed", "8")
    proof = tmp_path / "p.sdp"
    main([
        "fs-prove", "--instance", str(inst_path), "--witness", str(wit_path),
        "--proof", str(proof), "--rounds", "8", "--seed", "9",
    ])
    assert main(["fs-verify", "--instance", str(other_path), "--proof", str(proof)]) == EXIT_REJECT
    capsys.readouterr()


def test_loopback_interactive_session(tmp_path, capsys):
    inst_path, wit_path = keygen(tmp_path)
    port = free_port()
    result = {}

    def verifier():
        result["code"] = main([
            "verify", "--listen", f"127.0.0.1:{port}", "--instance", str(inst_path),
            "--rounds", "40", "--timeout-ms", "10000", "--seed", "11",
        ])

    th = threading.Thread(target=verifier)
    th.start()
    time.sleep(0.3)
    code = None
    for _ in range(5):
        code = main([
            "prove", "--connect", f"127.0.0.1:{port}", "--instance", str(inst_path),
            "--witness", str(wit_path), "--rounds", "40", "--timeout-ms", "10000", "--seed", "12",
        ])
        if code == EXIT_ACCEPT:
            break
        time.sleep(0.2)
    th.join(15)
    assert code == EXIT_ACCEPT
    assert result["code"] == EXIT_ACCEPT
    assert "ACCEPT" in capsys.readouterr().out


def test_loopback_rejects_wrong_witness(tmp_path, capsys):
    inst_path, _ = keygen(tmp_path / "a")
    other_inst, other_wit = keygen(tmp_path / "b", "--n", "20", "--seed", "8")
    port = free_port()
    result = {}

    def verifier():
        result["code"] = main([
            "verify", "--listen", f"127.0.0.1:{port}", "--instance", str(inst_path),
            "--rounds", "40", "--timeout-ms", "10000", "--seed", "13",
        ])

    th = threading.Thread(target=verifier)
    th.start()
    time.sleep(0.3)
    # prover runs on an instance of a different degree: every response opens
    # tuples of the wrong length, so the first round already fails
    main([
        "prove", "--connect", f"127.0.0.1:{port}", "--instance", str(other_inst),
        "--witness", str(other_wit), "--rounds", "40", "--timeout-ms", "10000", "--seed", "14",
    ])
    th.join(15)
    assert result["code"] == EXIT_REJECT
    assert "REJECT" in capsys.readouterr().out


def test_analyze_completeness(capsys):
    code = main(["analyze", "completeness", "--rounds", "300", "--seed", "21"])
    report = json.loads(capsys.readouterr().out)
    assert code == EXIT_ACCEPT
    assert report["experiment"] == "completeness"
    assert report["statistic"] == 1.0
    assert report["pass"] is True


def test_analyze_soundness(capsys):
    code = main(["analyze", "soundness", "--strategy", "02", "--rounds", "2000", "--seed", "22"])
    report = json.loads(capsys.readouterr().out)
    assert report["experiment"] == "soundness"
    assert 0.6 < report["statistic"] < 0.74
    assert (code == EXIT_ACCEPT) == report["pass"]


def test_analyze_simulator(capsys):
    code = main([
        "analyze", "simulator", "--attempts", "2000", "--runs", "1000",
        "--max-rewinds", "4", "--seed", "23",
    ])
    report = json.loads(capsys.readouterr().out)
    assert report["experiment"] == "simulator"
    assert 0.5 < report["statistic"] < 0.62
    assert report["details"]["abort_rate"] <= 0.1
    assert (code == EXIT_ACCEPT) == report["pass"]


def test_analyze_distribution(capsys):
    code = main([
        "analyze", "distribution", "--samples", "2000", "--seed", "24",
    ])
    report = json.loads(capsys.readouterr().out)
    assert report["experiment"] == "distribution"
    assert set(report) == {"experiment", "samples", "statistic", "p_value", "pass", "details"}
    assert (code == EXIT_ACCEPT) == report["pass"]


def test_cli_requires_subcommand():
    with pytest.raises(SystemExit):
        main([])
    with pytest.raises(SystemExit):
        main(["not-a-command"])
