"""
命令行：子命令输出与退出码
"""
import json

import pytest

from lab_core import main, build_parser


def _json_out(capsys):
    return json.loads(capsys.readouterr().out)


def test_table_default_losses(capsys):
    assert main(["table"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "loss_db,e_b1,e_p1,R1,e_b2,e_p2,R2,R_total,note"
    assert lines[1].startswith("0,")
    assert len(lines) > 2


def test_table_bad_input(capsys):
    assert main(["table", "--loss-db", "abc"]) == 1
    assert "error:" in capsys.readouterr().err
    assert main(["table", "--ep-source", "simulated"]) == 1


def test_table_paper_ep_source(capsys):
    assert main(["table", "--ep-source", "paper", "--loss-db", "1.4"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 2
    fields = lines[1].split(",")
    assert fields[0] == "1.4"
    assert fields[2:4] == ["-", "-"]
    assert float(fields[6]) == pytest.approx(0.00114, abs=2e-4)


def test_threshold(capsys):
    assert main(["threshold"]) == 0
    data = _json_out(capsys)
    assert data["model"] == "symmetric-erfc"
    assert data["critical_error"] == pytest.approx(0.110028, abs=1e-5)


def test_rates_without_scoring(capsys):
    assert main(["rates", "--no-score"]) == 0
    data = _json_out(capsys)
    assert "decode_scoring" not in data
    assert "rate_audit" in data


def test_probe_design(capsys):
    assert main(["probe-design", "--cutoff", "1", "--seed", "4"]) == 0
    data = _json_out(capsys)
    assert len(data["alphas"]) == 4
    assert max(data["deficits"]) <= data["eps_max"]


def test_probe_design_impossible(capsys):
    assert main(["probe-design", "--cutoff", "1", "--cond-max", "1.0", "--seed", "4"]) == 1


@pytest.mark.parametrize("name, code", [
    ("lossless.json", 0),
    ("intercept_resend.json", 2),
    ("coherent_probes.json", 3),
])
def test_simulate_exit_codes(capsys, config_dir, name, code):
    assert main(["simulate", "--config", str(config_dir / name)]) == code
    data = _json_out(capsys)
    assert data["exit_code"] == code
    assert "resources" not in data


def test_simulate_writes_transcript(capsys, config_dir, tmp_path):
    out = tmp_path / "transcript.ndjson"
    code = main(["simulate", "--config", str(config_dir / "intercept_resend.json"),
                 "--seed", "8", "--transcript", str(out)])
    assert code == 2
    report = _json_out(capsys)
    messages = [json.loads(line) for line in out.read_text(encoding="utf-8").splitlines()]
    assert messages[0]["kind"] == "permutation"
    assert sum(m["leak"] for m in messages) == report["leaked_bits"]
    assert report["seed"] == 8


def test_simulate_missing_config(capsys, tmp_path):
    assert main(["simulate", "--config", str(tmp_path / "nope.json")]) == 1
    assert "error:" in capsys.readouterr().err


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "embedded constants" in capsys.readouterr().out


def test_parser_requires_command():
    with pytest.raises(SystemExit) as exc:
        build_parser().parse_args([])
    assert exc.value.code == 1


@pytest.mark.parametrize("argv", [
    ["table", "--no-such-flag"],
    ["table", "--ep-source", "published"],
    ["table", "--convention", "half"],
    ["threshold", "--model", "unknown"],
    ["no-such-command"],
])
def test_usage_errors_exit_with_invalid_input_code(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 1
    assert "usage:" in capsys.readouterr().err
