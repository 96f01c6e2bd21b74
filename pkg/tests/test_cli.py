import io
import json

import pytest

from localmatch.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, [json.loads(line) for line in out.getvalue().splitlines() if line.startswith("{")], err.getvalue()


def test_group_match():
    code, (rep,), _ = call("group", "match", "--group", "Z5", "--A", "1,2", "--B", "1,2")
    assert code == 0 and rep["verdict"] == "true"
    assert rep["certificate"] == {"matching": [[1, 2], [2, 1]]}


def test_group_counterexample():
    code, (rep,), _ = call("group", "counterexample", "--group", "Z4")
    assert code == 0
    assert (rep["certificate"]["A"], rep["certificate"]["B"]) == ([0, 2], [1, 2])


def test_counterexample_for_prime_group_is_usage_error():
    assert call("group", "counterexample", "--group", "Z5")[0] == 2


def test_field_mn():
    code, (rep,), _ = call("field", "mn", "--field", "GF(2^4)")
    assert code == 0
    cert = rep["certificate"]
    assert (cert["nKL"], cert["mKL"], cert["identity_holds"]) == (2, 2, True)


@pytest.mark.parametrize(
    "argv",
    [
        ("group", "match", "--group", "Z4x", "--A", "0", "--B", "1"),
        ("group", "match", "--group", "Z4", "--A", "{0,", "--B", "1"),
        ("field", "match", "--field", "GF(6)", "--A", "<1>", "--B", "<1>"),
        ("field", "match", "--field", "GF(4)", "--A", "<1,t^>", "--B", "<t>"),
        ("group", "frobnicate"),
        ("verify", "c99"),
    ],
)
def test_parse_errors_exit_2(argv):
    code, _, err = call(*argv)
    assert code == 2


def test_position_in_message():
    _, _, err = call("group", "match", "--group", "Z4x", "--A", "0", "--B", "1")
    assert "position 3" in err


def test_resource_exit_3():
    code, _, err = call("field", "thm41", "--field", "GF(2^12)")
    assert code == 3 and "budget" in err


def test_config_flag(tmp_path):
    cfg = tmp_path / "small.cfg"
    cfg.write_text("max_group_order=8\n")
    assert call("group", "sweep", "--group", "Z16", "--config", str(cfg))[0] == 3
    cfg.write_text("bogus=1\n")
    assert call("group", "property", "--group", "Z7", "--config", str(cfg))[0] == 2


@pytest.mark.parametrize(
    "argv, verdict",
    [
        (("group", "local", "--group", "Z4", "--A", "0,2", "--B", "1,2"), "false"),
        (("group", "kneser", "--group", "Z6", "--A", "0,3", "--B", "0,3"), "holds"),
        (("group", "property", "--group", "Z2xZ2"), "false"),
        (("field", "match", "--field", "GF(4)", "--A", "<1>", "--B", "<t>"), "true"),
        (("field", "basis", "--field", "GF(4)", "--A", "<1>", "--B", "<1>"), "false"),
        (("field", "local", "--field", "GF(16)", "--A", "<1, t^2+t>", "--B", "<t^2+t, t>"), "false"),
        (("field", "kneser", "--field", "GF(16)", "--A", "<1, t^2+t>", "--B", "<1, t^2+t>"), "holds"),
        (("field", "transversal", "--field", "GF(4)", "--family", "<1>;<1>"), "false"),
        (("field", "primitive", "--field", "GF(16)", "--B", "<t^2, t^3>"), "true"),
        (("field", "thm41", "--field", "GF(8)"), "holds"),
    ],
)
def test_commands(argv, verdict):
    code, reps, _ = call(*argv)
    assert code == 0 and reps[-1]["verdict"] == verdict


def test_sweep_streams_instances_then_summary():
    code, reps, _ = call("group", "sweep", "--group", "Z4", "--max-size", "2", "--instances")
    assert code == 0
    assert len(reps) == reps[-1]["certificate"]["pairs"] + 1
    assert all(r["command"] == "group sweep" for r in reps)


def test_seed_recorded():
    _, (rep,), _ = call("group", "property", "--group", "Z7", "--seed", "11")
    assert rep["seed"] == 11


def test_csv_and_text():
    out = io.StringIO()
    run(["group", "property", "--group", "Z7", "--format", "csv"], out=out)
    assert out.getvalue().splitlines()[0].startswith("command,")
    out = io.StringIO()
    run(["group", "property", "--group", "Z7", "--format", "text"], out=out)
    assert out.getvalue().startswith("[TRUE ]")


def test_single_check():
    code, (rep,), _ = call("verify", "c02")
    assert code == 0 and rep["command"] == "verify c02"
