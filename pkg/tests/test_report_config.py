import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from localmatch.config import DEFAULT, load_budgets, parse_config
from localmatch.report import VerdictReport, verdict_of

json_values = st.recursive(
    st.none() | st.booleans() | st.integers() | st.text(max_size=8),
    lambda inner: st.lists(inner, max_size=4) | st.dictionaries(st.text(max_size=6), inner, max_size=4),
    max_leaves=12,
)


@given(st.dictionaries(st.text(max_size=6), json_values, max_size=4), json_values, st.sampled_from(["true", "false", "holds", "fails"]))
def test_round_trip(instance, cert, verdict):
    rep = VerdictReport("group match", instance, verdict, cert, 3, 7)
    assert VerdictReport.from_json(rep.to_json()) == rep


def test_json_keys_are_field_names():
    keys = set(json.loads(VerdictReport("x", {}, "true").to_json()))
    assert keys == {"command", "instance", "verdict", "certificate", "elapsed_ms", "seed", "engine_version"}


def test_bad_verdict():
    with pytest.raises(ValueError):
        VerdictReport("x", {}, "maybe")


def test_render_formats():
    rep = VerdictReport("group property", {"group": "Z7"}, "true", {"order": 7})
    csv_text = rep.render("csv", header=True).splitlines()
    assert csv_text[0].startswith("command,instance,verdict")
    assert rep.render("text") == "[TRUE ] group property group=Z7"
    with pytest.raises(ValueError):
        rep.render("xml")


def test_verdict_of():
    assert (verdict_of(True), verdict_of(False, "assert")) == ("true", "fails")


def test_parse_config():
    assert parse_config("# budgets\nmax_group_order = 64\n\nseed=4  # trailing\n") == {"max_group_order": 64, "seed": 4}
    with pytest.raises(ValueError, match="unknown key"):
        parse_config("colour=blue")
    with pytest.raises(ValueError, match="line 1"):
        parse_config("seed")


def test_precedence(tmp_path, monkeypatch):
    cfg = tmp_path / "budgets.cfg"
    cfg.write_text("seed=5\nworkers=3\n")
    assert load_budgets() == DEFAULT
    assert load_budgets(cfg).seed == 5
    assert load_budgets(cfg, seed=9).seed == 9
    assert load_budgets(cfg, seed=None).seed == 5
    monkeypatch.setenv("LOCALMATCH_CONFIG", str(cfg))
    assert load_budgets().workers == 3
