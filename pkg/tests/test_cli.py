import json
from datetime import date, timedelta

import pytest

from outcry import InvalidConfig, RunConfig, run_detection
from outcry.cli import main

from test_market import calibrated_returns

SCENARIO = {
    "seed": 42,
    "days": 9,
    "ambient_rate": 100,
    "ambient_days": 7,
    "ambient_entity_rate": 0.0,
    "ambient_topics": [["giftcard", "rewards", "promo"],
                       ["barista", "latte", "espresso"],
                       ["store", "menu", "breakfast"]],
    "vocabulary_noise": 0.05,
    "injected_events": [{
        "start_day": 7,
        "duration_days": 2,
        "peak_rate": 30,
        "term_pool": ["riverside arrest", "store video", "staff callout"],
        "sentiment_range": [-2.0, -1.0],
        "credible_link_count": 2,
        "noncredible_link_count": 1,
    }],
}


@pytest.fixture
def scenario_file(tmp_path):
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(SCENARIO))
    return path


def write_price_csv(path, returns, event_return=None, start=date(2023, 1, 2)):
    """Prices realizing the given return sequence from a base of 100."""
    rows = ["date,close"]
    price = 100.0
    day = start
    rows.append(f"{day.isoformat()},{price!r}")
    for r in returns:
        day += timedelta(days=1)
        price *= 1.0 + r
        rows.append(f"{day.isoformat()},{price!r}")
    if event_return is not None:
        day += timedelta(days=1)
        price *= 1.0 + event_return
        rows.append(f"{day.isoformat()},{price!r}")
    path.write_text("\n".join(rows) + "\n")
    return day  # event (or last) date


class TestRunConfig:
    def test_unknown_key_rejected(self):
        with pytest.raises(InvalidConfig):
            RunConfig.from_dict({"merge_threshold_D": 0.7, "oops": 1})

    def test_external_key_names(self):
        cfg = RunConfig.from_dict({
            "merge_threshold_D": 0.5,
            "min_event_size_N": 7,
            "inactivity_expiry_hours": 24,
            "burst_velocity_threshold": 3.0,
            "rank_weights": [0.5, 0.25, 0.25],
            "news_count_gate": 2,
            "phrases": "acme, acmecorp",
        })
        assert cfg.merge_threshold == 0.5
        assert cfg.min_event_size == 7
        assert cfg.phrases == ["acme", "acmecorp"]

    def test_bad_weights_rejected(self):
        with pytest.raises(InvalidConfig):
            RunConfig.from_dict({"rank_weights": [0.9, 0.9, 0.9]})

    def test_roundtrip_through_as_dict(self):
        cfg = RunConfig(phrases=["acme"], merge_threshold=0.6)
        again = RunConfig.from_dict(cfg.as_dict())
        assert again.merge_threshold == 0.6
        assert again.phrases == ["acme"]


class TestDetectCommand:
    def test_empty_input_gives_empty_report(self, tmp_path, capsys):
        empty = tmp_path / "empty.jsonl"
        empty.write_text("")
        out = tmp_path / "report.json"
        code = main(["detect", "--input", str(empty), "--phrases", "acme",
                     "--out", str(out)])
        assert code == 0
        payload = json.loads(out.read_text())
        assert payload["events"] == []
        assert payload["counters"]["total"] == 0

    def test_unknown_config_key_exits_1_without_output(self, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"phrases": ["acme"], "mystery_knob": 3}))
        out = tmp_path / "report.json"
        stream = tmp_path / "in.jsonl"
        stream.write_text("")
        code = main(["detect", "--config", str(config), "--input", str(stream),
                     "--out", str(out)])
        assert code == 1
        assert not out.exists()

    def test_missing_input_exits_2(self, tmp_path):
        code = main(["detect", "--input", str(tmp_path / "nope.jsonl"),
                     "--phrases", "acme"])
        assert code == 2

    def test_missing_phrases_is_config_error(self, tmp_path):
        stream = tmp_path / "in.jsonl"
        stream.write_text("")
        assert main(["detect", "--input", str(stream)]) == 1

    def test_synthetic_scenario_end_to_end(self, tmp_path, scenario_file):
        stream = tmp_path / "stream.jsonl"
        report = tmp_path / "report.json"
        state = tmp_path / "state.json"
        truth = tmp_path / "truth.json"
        scores = tmp_path / "scores.json"

        assert main(["synth", "--scenario", str(scenario_file),
                     "--out", str(stream), "--truth", str(truth)]) == 0
        assert main(["detect", "--input", str(stream), "--phrases", "acmecorp",
                     "--out", str(report), "--state-out", str(state)]) == 0

        payload = json.loads(report.read_text())
        flagged = [e for e in payload["events"] if e["controversial"]]
        assert len(flagged) == 1
        assert payload["events"][0]["controversial"] is True  # ranked first

        assert main(["evaluate", "--report", str(report), "--state", str(state),
                     "--truth", str(truth), "--out", str(scores)]) == 0
        result = json.loads(scores.read_text())
        assert result["precision"] == 1.0
        assert result["recall"] == 1.0
        assert result["f1"] == 1.0

    def test_reports_are_byte_identical_across_runs(self, tmp_path, scenario_file):
        stream = tmp_path / "stream.jsonl"
        main(["synth", "--scenario", str(scenario_file), "--out", str(stream)])
        r1, r2 = tmp_path / "r1.json", tmp_path / "r2.json"
        for out in (r1, r2):
            assert main(["detect", "--input", str(stream), "--phrases", "acmecorp",
                         "--out", str(out)]) == 0
        assert r1.read_bytes() == r2.read_bytes()

    def test_table_format(self, tmp_path, scenario_file, capsys):
        stream = tmp_path / "stream.jsonl"
        main(["synth", "--scenario", str(scenario_file), "--out", str(stream)])
        code = main(["detect", "--input", str(stream), "--phrases", "acmecorp",
                     "--format", "table"])
        assert code == 0
        out = capsys.readouterr().out
        assert "cluster" in out and "YES" in out

    def test_daily_summaries_present(self, tmp_path, scenario_file):
        stream = tmp_path / "stream.jsonl"
        report = tmp_path / "report.json"
        main(["synth", "--scenario", str(scenario_file), "--out", str(stream)])
        main(["detect", "--input", str(stream), "--phrases", "acmecorp",
              "--out", str(report)])
        payload = json.loads(report.read_text())
        assert len(payload["daily_summaries"]) == 2  # the two event days
        entry = payload["daily_summaries"][-1]
        assert entry["clusters"][0]["top_terms"]
        assert entry["clusters"][0]["mean_sentiment"] < 0


class TestMarketCommand:
    def test_reconstructed_zscore_in_output(self, tmp_path):
        prices = tmp_path / "prices.csv"
        event_day = write_price_csv(prices, calibrated_returns(4.9e-5, 0.0091, 252),
                                    event_return=-0.017)
        out = tmp_path / "market.json"
        code = main(["market", "--prices", str(prices), "--event-date",
                     event_day.isoformat(), "--window-days", "252",
                     "--out", str(out)])
        assert code == 0
        payload = json.loads(out.read_text())
        assert payload["zscore"] == pytest.approx(-1.879, abs=0.02)
        assert payload["stats"]["mean"] == pytest.approx(4.9e-5, abs=1e-6)
        assert payload["stats"]["std"] == pytest.approx(0.0091, abs=1e-6)
        assert payload["event_return"] == pytest.approx(-0.017, abs=1e-9)
        assert len(payload["histogram"]) == 20
        assert sum(b[2] for b in payload["histogram"]) == 252

    def test_two_row_csv_reports_return_but_exits_2(self, tmp_path, capsys):
        prices = tmp_path / "prices.csv"
        event_day = write_price_csv(prices, [-0.017])
        out = tmp_path / "market.json"
        code = main(["market", "--prices", str(prices), "--event-date",
                     event_day.isoformat(), "--out", str(out)])
        assert code == 2
        payload = json.loads(out.read_text())
        assert len(payload["returns"]) == 1
        assert "error" in payload

    def test_missing_file_exits_2(self, tmp_path):
        code = main(["market", "--prices", str(tmp_path / "nope.csv"),
                     "--event-date", "2024-01-05"])
        assert code == 2

    def test_bad_event_date_is_config_error(self, tmp_path):
        prices = tmp_path / "prices.csv"
        write_price_csv(prices, [0.01, -0.01])
        assert main(["market", "--prices", str(prices),
                     "--event-date", "someday"]) == 1

    def test_index_overlay(self, tmp_path):
        prices = tmp_path / "prices.csv"
        index = tmp_path / "index.csv"
        event_day = write_price_csv(prices, [0.01, -0.01, 0.02, 0.0], event_return=-0.017)
        write_price_csv(index, [0.005, -0.002, 0.001, 0.003], event_return=0.001)
        out = tmp_path / "market.json"
        code = main(["market", "--prices", str(prices), "--index", str(index),
                     "--event-date", event_day.isoformat(), "--out", str(out)])
        assert code == 0
        payload = json.loads(out.read_text())
        assert len(payload["index"]["paired_returns"]) == 5


class TestSynthCommand:
    def test_missing_out_is_config_error(self, scenario_file):
        assert main(["synth", "--scenario", str(scenario_file)]) == 1

    def test_seed_change_alters_stream_bytes(self, tmp_path):
        a_cfg = dict(SCENARIO)
        b_cfg = dict(SCENARIO, seed=99)
        pa, pb = tmp_path / "a.json", tmp_path / "b.json"
        pa.write_text(json.dumps(a_cfg))
        pb.write_text(json.dumps(b_cfg))
        sa, sb = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        assert main(["synth", "--scenario", str(pa), "--out", str(sa)]) == 0
        assert main(["synth", "--scenario", str(pb), "--out", str(sb)]) == 0
        assert sa.read_bytes() != sb.read_bytes()

    def test_invalid_scenario_exits_1(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"seed": 1, "days": 1, "whatever": 2}))
        assert main(["synth", "--scenario", str(bad), "--out",
                     str(tmp_path / "s.jsonl")]) == 1


class TestEvaluateCommand:
    def test_missing_detection_output_exits_2(self, tmp_path):
        assert main(["evaluate", "--report", str(tmp_path / "r.json"),
                     "--state", str(tmp_path / "s.json"),
                     "--truth", str(tmp_path / "t.json")]) == 2


class TestPipelineCounters:
    def test_language_filter_and_discards_counted(self, tmp_path):
        lines = [
            json.dumps({"posting_id": "a", "creation_time": "2024-03-01T00:00:00Z",
                        "text": "AcmeCorp: Riverside outage", "language": "en"}),
            json.dumps({"posting_id": "b", "creation_time": "2024-03-01T00:01:00Z",
                        "text": "acmecorp c'est fini", "language": "fr"}),
            json.dumps({"posting_id": "c", "creation_time": "2024-03-01T00:02:00Z",
                        "text": "acmecorp of the and", "language": "en"}),
        ]
        stream = tmp_path / "in.jsonl"
        stream.write_text("\n".join(lines) + "\n")
        cfg = RunConfig(phrases=["acmecorp"])
        result = run_detection(str(stream), cfg)
        assert result.replay_stats.yielded == 3
        assert result.counters["skipped_language"] == 1
        assert result.counters["discarded_empty"] == 1
        assert result.state.admitted == 1
