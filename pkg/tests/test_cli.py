import json
import socket
import subprocess
import sys
import time
import urllib.request

import pytest
from click.testing import CliRunner

from matchkit.cli import main

ALL_COMMANDS = {
    "match", "certify", "conditions", "witness", "scan-property",
    "linear-match", "linear-conditions", "atom",
    "conjecture1", "conjecture2", "chowla-max", "search-unmatchable",
}

Z15 = "Z15 A={5,6,7} B={1,2,3}"
Z4 = "Z4 A={0,2} B={1,2}"
GF16_BAD = "GF(2^4) A=<g*1,g*g^5> B=<g,g^2>"


@pytest.fixture()
def runner():
    return CliRunner()


def test_command_set(runner):
    assert set(main.commands) == ALL_COMMANDS
    assert runner.invoke(main, ["--version"]).exit_code == 0


def test_match_exit_codes(runner):
    ok = runner.invoke(main, ["match", Z15])
    assert ok.exit_code == 0
    assert "matched" in ok.output

    bad = runner.invoke(main, ["match", Z4])
    assert bad.exit_code == 1
    assert "unmatched" in bad.output
    assert "violator" in bad.output

    err = runner.invoke(main, ["match", "Z15 A={5,6,99} B={1,2}"])
    assert err.exit_code == 2
    assert "error" in err.output


def test_certify_prints_matching(runner):
    res = runner.invoke(main, ["certify", Z15])
    assert res.exit_code == 0
    assert "5->3" in res.output


def test_json_output_is_canonical_and_deterministic(runner):
    a = runner.invoke(main, ["match", Z15, "--json"])
    b = runner.invoke(main, ["match", Z15, "--json"])
    assert a.exit_code == b.exit_code == 0
    assert a.output == b.output
    report = json.loads(a.output)
    assert report["schema"] == "matchkit/1"
    assert a.output == json.dumps(report, sort_keys=True, indent=2) + "\n"


def test_out_writes_single_document(runner, tmp_path):
    path = tmp_path / "report.json"
    res = runner.invoke(main, ["match", Z4, "--out", str(path)])
    assert res.exit_code == 1
    on_disk = json.loads(path.read_text())
    assert on_disk["verdict"] == "unmatched"
    assert on_disk["violator"] == {"S": "{0,2}", "V": "{2}"}


def test_out_writes_jsonl_for_scans(runner, tmp_path):
    path = tmp_path / "scan.jsonl"
    res = runner.invoke(main, ["search-unmatchable", "Z4..Z5",
                               "--max-size", "2", "--out", str(path)])
    assert res.exit_code == 1
    lines = [json.loads(l) for l in path.read_text().splitlines()]
    assert len(lines) >= 2
    summary = lines[-1]
    assert summary["kind"] == "scan"
    assert summary["counterexample_count"] == len(lines) - 1
    for row in lines[:-1]:
        assert row["counterexample"]["group"] == "Z4"


def test_conditions_part_flag(runner):
    res = runner.invoke(main, ["conditions", Z15, "--part", "2", "--json"])
    assert res.exit_code == 0
    conds = json.loads(res.output)["conditions"]
    assert conds == [{"part": 2, "holds": True, "evidence": conds[0]["evidence"]}]
    assert runner.invoke(main, ["conditions", Z15, "--part", "9"]).exit_code == 2


def test_witness_command(runner):
    res = runner.invoke(main, ["witness", Z4, "--json",
                               "--min-progression-length", "2"])
    assert res.exit_code == 0
    w = json.loads(res.output)["witness"]
    assert w["classification"] == "quasi_periodic"
    matched = runner.invoke(main, ["witness", Z15])
    assert matched.exit_code == 2


def test_scan_property_command(runner):
    assert runner.invoke(main, ["scan-property", "Z5", "--max-size", "5"]).exit_code == 0
    res = runner.invoke(main, ["scan-property", "Z4", "--max-size", "4"])
    assert res.exit_code == 1
    assert "A={0,2} B={1,2}" in res.output


def test_linear_commands(runner):
    bad = runner.invoke(main, ["linear-match", GF16_BAD, "--json"])
    assert bad.exit_code == 1
    rep = json.loads(bad.output)
    assert rep["verdict"] == "unmatched"
    assert rep["witness"]["atom_degree"] == 2

    ok = runner.invoke(main, ["linear-match", "GF(2^3) A=<1,g> B=<g,g^2>"])
    assert ok.exit_code == 0

    conds = runner.invoke(main, ["linear-conditions",
                                 "GF(2^4) A=<1,g> B=<g,g^2>", "--json"])
    assert conds.exit_code == 0
    assert len(json.loads(conds.output)["conditions"]) == 3

    at = runner.invoke(main, ["atom", "GF(2^4) A=<1,g^5>", "--json"])
    assert at.exit_code == 0
    assert json.loads(at.output)["kappa"] == 0


def test_scan_commands(runner):
    c1 = runner.invoke(main, ["conjecture1", "GF(2^3)", "--dims", "2", "--json"])
    assert c1.exit_code == 0
    assert json.loads(c1.output)["parameters"]["vacuous"] is True

    c2 = runner.invoke(main, ["conjecture2", "GF(2^4)", "--n", "1"])
    assert c2.exit_code == 0

    cm = runner.invoke(main, ["chowla-max", "GF(2^4)", "--json"])
    assert cm.exit_code == 0
    rep = json.loads(cm.output)
    assert rep["value"] == 2 and rep["exhausted"] is True


def test_sampled_scan_deterministic(runner):
    args = ["conjecture2", "GF(2^5)", "--n", "2", "--sampled",
            "--budget", "40", "--seed", "3", "--json"]
    a = runner.invoke(main, args)
    b = runner.invoke(main, args)
    assert a.exit_code == b.exit_code == 0
    assert a.output == b.output
    assert json.loads(a.output)["instances_checked"] == 40


def _free_port() -> int:
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


@pytest.mark.slow
def test_server_mode_parity(runner, tmp_path):
    pytest.importorskip("uvicorn")
    port = _free_port()
    proc = subprocess.Popen(
        [sys.executable, "-m", "uvicorn", "--factory",
         "matchkit.service:create_app", "--port", str(port),
         "--log-level", "error"],
        stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL,
    )
    url = f"http://127.0.0.1:{port}"
    try:
        for _ in range(100):
            if proc.poll() is not None:
                pytest.skip("server process refused to start")
            try:
                with urllib.request.urlopen(url + "/v1/health", timeout=1):
                    break
            except OSError:
                time.sleep(0.1)
        else:
            pytest.skip("server did not come up")
        local = runner.invoke(main, ["match", Z15, "--json"])
        remote = runner.invoke(main, ["match", Z15, "--json", "--server", url])
        assert remote.exit_code == local.exit_code == 0
        assert remote.output == local.output
        remote_bad = runner.invoke(main, ["match", Z4, "--server", url])
        assert remote_bad.exit_code == 1
    finally:
        proc.terminate()
        proc.wait(timeout=10)
