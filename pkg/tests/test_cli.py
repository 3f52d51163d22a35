import json

import pytest

from crewsim.cli import main
from crewsim.config import shipped_config_dir

from .helpers import configs_with_mini, join_both, make_core, make_ready, run_ticks


def test_validate_shipped_corpus(capsys):
    assert main(["validate"]) == 0
    assert "OK:" in capsys.readouterr().out


def test_validate_rejects_broken_dir(tmp_path, capsys):
    (tmp_path / "vehicles").mkdir()
    (tmp_path / "vehicles" / "bad.yaml").write_text('name: "X"\ndesc: "d"\n')
    assert main(["validate", "--config-dir", str(tmp_path)]) == 1
    assert "INVALID" in capsys.readouterr().err


def test_geom_check_passes(capsys):
    assert main(["geom", "check", "--trials", "500", "--seed", "3"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "max position residual" in out


@pytest.mark.parametrize(
    "instrument,row,expected_key,expected",
    [
        ("sus", "5,1,5,1,5,1,5,1,5,1", "score", 100.0),
        ("cohesion", "5,4,5,5", "score", 4.75),
        ("ssq", ",".join(["0"] * 16), "total", 0.0),
        ("ipq", ",".join(["4"] * 14), "involvement", 4.0),
    ],
)
def test_score_instruments(tmp_path, capsys, instrument, row, expected_key, expected):
    path = tmp_path / "r.csv"
    path.write_text(row + "\n")
    assert main(["score", "--instrument", instrument, "--in", str(path)]) == 0
    record = json.loads(capsys.readouterr().out.strip())
    assert record[expected_key] == expected


def test_score_reports_bad_rows(tmp_path, capsys):
    path = tmp_path / "r.csv"
    path.write_text("1,2,3\n")
    assert main(["score", "--instrument", "sus", "--in", str(path)]) == 1
    assert "error" in json.loads(capsys.readouterr().out.strip())


def test_score_skips_header_row(tmp_path, capsys):
    path = tmp_path / "r.csv"
    path.write_text("q1,q2,q3,q4\n5,4,5,5\n")
    assert main(["score", "--instrument", "cohesion", "--in", str(path)]) == 0
    assert json.loads(capsys.readouterr().out.strip())["score"] == 4.75


def test_events_replay_matches_and_detects_divergence(tmp_path, capsys, configs):
    core = make_core(configs, session="main_session")
    join_both(core)
    log = []
    core.log_sink = log.append
    make_ready(core)
    run_ticks(core, 30 * 20 + 5)
    events = [l for l in log if l["type"] == "event"]
    assert len(events) == 10
    good = tmp_path / "events.jsonl"
    good.write_text("".join(json.dumps(e) + "\n" for e in events))
    args = ["events", "replay", "--in", str(good), "--session", "main_session"]
    assert main(args) == 0
    assert "matches" in capsys.readouterr().out

    swapped = events[:]
    swapped[0], swapped[1] = swapped[1], swapped[0]
    bad = tmp_path / "bad.jsonl"
    bad.write_text("".join(json.dumps(e) + "\n" for e in swapped))
    assert main(["events", "replay", "--in", str(bad), "--session", "main_session"]) == 1
    assert "MISMATCH" in capsys.readouterr().err


def test_log_summary(tmp_path, capsys):
    path = tmp_path / "log.jsonl"
    path.write_text(
        json.dumps({"type": "event", "tick": 3, "vehicle": "Crane", "condition": "Normal", "event_id": 1})
        + "\n"
    )
    assert main(["log", "summary", "--in", str(path)]) == 0
    assert json.loads(capsys.readouterr().out)["events_fired"] == 1


def test_bots_run_and_replay_cli(tmp_path, capsys, configs, monkeypatch):
    # keep the CLI path honest end to end on the fast mini session
    import crewsim.cli as cli
    from crewsim.config import ConfigSet

    mini = configs_with_mini(configs)
    monkeypatch.setattr(cli, "load_config_dir", lambda _dir: mini)
    out = tmp_path / "t.jsonl"
    assert main([
        "bots", "run", "--session", "mini_session", "--task", "mini",
        "--budget", "30", "--out", str(out),
    ]) == 0
    assert "outcome=complete" in capsys.readouterr().out
    assert main(["bots", "replay", "--in", str(out)]) == 0
    assert "replay ok" in capsys.readouterr().out
