import pytest
from pydantic import ValidationError

from elatlab.config.settings import Settings
from elatlab.core.cache import CacheService
from elatlab.models.reports import CheckInstance, CheckResult, Report, Verdict
from elatlab.services.messages import messages
from elatlab.utils.helpers import format_cycles, format_factorial_product, format_table, fuzzy_match
from elatlab.utils.validators import find_invalid_character, split_list_option, validate_group_spec


def test_settings_defaults():
    s = Settings(_env_file=None)
    assert s.max_order == 64
    assert s.enum_threshold == 10_000
    assert s.bound("max_order") == 64
    assert s.bound("max_order", 12) == 12


def test_settings_read_the_environment(monkeypatch):
    monkeypatch.setenv("ELATLAB_MAX_ORDER", "30")
    monkeypatch.setenv("ELATLAB_LOG_LEVEL", "debug")
    s = Settings(_env_file=None)
    assert s.max_order == 30
    assert s.log_level == "DEBUG"


@pytest.mark.parametrize("field, value", [
    ("max_order", 0),
    ("enum_threshold", -5),
    ("log_level", "chatty"),
    ("report_language", "pt_BR"),
])
def test_settings_reject_bad_values(field, value):
    with pytest.raises(ValidationError):
        Settings(_env_file=None, **{field: value})


def test_cache_counts_hits_and_misses():
    c = CacheService()
    calls = []
    key = c.get_analysis_key("S3", "analysis", 64)
    assert key == "group:S3:analysis:64"
    assert c.get_or_compute(key, lambda: calls.append(1) or "lattice") == "lattice"
    assert c.get_or_compute(key, lambda: calls.append(1) or "other") == "lattice"
    assert len(calls) == 1
    assert (c.hits, c.misses) == (1, 1)
    assert not c.set("none", None)
    c.clear()
    assert c.get(key) is None


def test_messages_format_and_fall_back():
    assert messages.get_text("heading_compare", first="Q8", second="D4") == "Q8 vs D4"
    assert messages.get_text("verdict_divergence-from-paper") == "DIVERGENCE"
    assert messages.get_text("no_such_key") == "no_such_key"
    assert messages.get_text("heading_group") == "Group {spec}"


def test_check_result_overall_verdict():
    def result(*verdicts):
        instances = [CheckInstance(description=str(i), verdict=v) for i, v in enumerate(verdicts)]
        return CheckResult.from_instances("c", "claim", instances)

    assert result(Verdict.PASS, Verdict.DIVERGENCE).overall == Verdict.DIVERGENCE
    assert result(Verdict.DIVERGENCE, Verdict.FAIL).overall == Verdict.FAIL
    assert result(Verdict.PASS, Verdict.SKIPPED).overall == Verdict.PASS
    assert result(Verdict.SKIPPED).vacuous
    assert not result(Verdict.SKIPPED, Verdict.PASS).vacuous


def test_report_json_is_sorted_and_drops_missing_timing():
    report = Report(command="group", inputs={"spec": "S3"}, result={"b": 1, "a": [1, 2]})
    text = report.to_json()
    assert "timing_ms" not in text
    assert text.index('"a"') < text.index('"b"')
    assert Report.from_json(text) == report
    timed = Report(command="group", inputs={}, result={}, timing_ms=1.5)
    assert '"timing_ms": 1.5' in timed.to_json()


def test_formatting_helpers():
    assert format_cycles((1, 0, 3, 2)) == "(0 1)(2 3)"
    assert format_cycles((0, 1, 2)) == "()"
    assert format_factorial_product([23, 3, 0, 1]) == "23! × 3!"
    assert format_factorial_product([0, 1], tail=6) == "6"
    assert format_factorial_product([]) == "1"
    table = format_table(["a", "bb"], [[1, "x"], [22, "yyy"]])
    assert table.splitlines() == ["a   bb", "--  ---", "1   x", "22  yyy"]


def test_fuzzy_match_suggests_catalog_names():
    assert fuzzy_match("s3", ["S3", "S4", "Q8"])[0] == "S3"
    assert fuzzy_match("Dih", ["Dih8", "Dih12", "C4"])[:2] == ["Dih12", "Dih8"]


def test_spec_validators():
    assert validate_group_spec("perm:(0 1),(0 1 2)")
    assert not validate_group_spec("   ")
    assert not validate_group_spec("D4!")
    assert find_invalid_character("D4!") == 2
    assert find_invalid_character("C4xC2") is None
    assert split_list_option("S3, C4,,Q8 ") == ["S3", "C4", "Q8"]
    assert split_list_option("") == []
