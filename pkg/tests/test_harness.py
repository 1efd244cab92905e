import csv
import json
import math

import pytest

from mmwmac import (
    ExperimentKind,
    ExperimentSpec,
    channel_utilization,
    run_experiment,
    summarize,
)
from mmwmac.cli import main as cli_main
from mmwmac.csma import CsmaTimings
from mmwmac.harness import SummaryRecord, load_dataset
from mmwmac.seeding import derive_rng, derive_seed


class TestSeeding:
    def test_stable_across_calls(self):
        assert derive_seed(0, "a", 1) == derive_seed(0, "a", 1)

    def test_distinct_keys_distinct_streams(self):
        seen = {derive_seed(0, "a", i) for i in range(100)}
        assert len(seen) == 100

    def test_key_order_matters(self):
        assert derive_seed(0, "a", "b") != derive_seed(0, "b", "a")

    def test_rng_reproducible(self):
        a = derive_rng(5, "x").random(4)
        b = derive_rng(5, "x").random(4)
        assert (a == b).all()


class TestSummaryRecord:
    def test_ci_must_bracket_mean(self):
        with pytest.raises(ValueError):
            SummaryRecord(group=("g",), mean=1.0, std=0.1,
                          ci_low=1.1, ci_high=1.2, n=3)


def _run(spec):
    return run_experiment(spec)


class TestUtilizationExperiment:
    def test_csv_matches_direct_call(self, tmp_path):
        spec = ExperimentSpec(
            kind=ExperimentKind.UTILIZATION_TABLE,
            payload_sizes=(1_000, 10_000),
            output_path=str(tmp_path / "util"),
        )
        csv_path, json_path = _run(spec)
        _, rows = load_dataset(csv_path)
        timings = CsmaTimings.rounded()
        assert len(rows) == 2
        for row in rows:
            direct = channel_utilization(row["payload_bytes"], timings)
            assert row["utilization"] == pytest.approx(direct.utilization)
            assert row["total_delay_us"] == pytest.approx(direct.total_delay_s * 1e6)

    def test_rerun_byte_identical(self, tmp_path):
        spec = ExperimentSpec(
            kind=ExperimentKind.UTILIZATION_TABLE,
            output_path=str(tmp_path / "util"),
        )
        csv_path, json_path = _run(spec)
        first_csv = open(csv_path, "rb").read()
        first_json = open(json_path, "rb").read()
        _run(spec)
        assert open(csv_path, "rb").read() == first_csv
        assert open(json_path, "rb").read() == first_json

    def test_sidecar_holds_resolved_config(self, tmp_path):
        spec = ExperimentSpec(
            kind=ExperimentKind.UTILIZATION_TABLE,
            output_path=str(tmp_path / "util"),
        )
        _, json_path = _run(spec)
        doc = json.loads(open(json_path).read())
        assert doc["kind"] == "utilization-table"
        assert "channel" in doc["resolved"]
        assert "code_version" in doc


class TestCnBackoffExperiment:
    def test_variants_agree_at_zero_blockage(self, tmp_path):
        spec = ExperimentSpec(
            kind=ExperimentKind.CN_BACKOFF,
            blockage_probs=(0.0, 0.05),
            n_devices=10,
            replications=200,
            output_path=str(tmp_path / "cn"),
        )
        csv_path, _ = _run(spec)
        _, rows = load_dataset(csv_path)
        at_zero = {r["variant"]: r for r in rows if r["blockage_prob"] == 0.0}
        assert abs(at_zero["standard"]["mean_backoff_us"]
                   - at_zero["cn"]["mean_backoff_us"]) < 1e-12

    def test_stochastic_experiment_reproducible(self, tmp_path):
        spec = ExperimentSpec(
            kind=ExperimentKind.CN_BACKOFF,
            blockage_probs=(0.02,),
            replications=100,
            output_path=str(tmp_path / "cn"),
        )
        csv_path, _ = _run(spec)
        first = open(csv_path, "rb").read()
        _run(spec)
        assert open(csv_path, "rb").read() == first


class TestCollisionExperiment:
    def test_rows_cover_grid(self, tmp_path):
        spec = ExperimentSpec(
            kind=ExperimentKind.COLLISION_PROBABILITY,
            beamwidths_deg=(25.0, 360.0),
            densities=(0.1, 0.25),
            replications=50,
            output_path=str(tmp_path / "coll"),
        )
        csv_path, _ = _run(spec)
        _, rows = load_dataset(csv_path)
        assert len(rows) == 4
        assert {(r["beamwidth_deg"], r["density"]) for r in rows} \
            == {(25.0, 0.1), (25.0, 0.25), (360.0, 0.1), (360.0, 0.25)}
        for r in rows:
            assert r["ci_low"] <= r["value"] <= r["ci_high"] + 1e-12


class TestSummarize:
    def test_bernoulli_oracle(self, tmp_path):
        path = tmp_path / "data.csv"
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["arm", "value"])
            for i in range(200):
                w.writerow(["a", i % 2])   # mean 0.5
                w.writerow(["b", 1.0])
        records = summarize(str(path), ["arm"], "value")
        by_arm = {r.group[0]: r for r in records}
        assert by_arm["a"].mean == pytest.approx(0.5)
        assert by_arm["a"].ci_low < 0.5 < by_arm["a"].ci_high
        assert by_arm["b"].mean == 1.0
        assert by_arm["b"].std == 0.0
        assert by_arm["b"].n == 200

    def test_unknown_column(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("a,b\n1,2\n")
        with pytest.raises(ValueError):
            summarize(str(path), ["a"], "nope")


class TestCli:
    def test_list_presets(self, capsys):
        assert cli_main(["list-presets"]) == 0
        out = capsys.readouterr().out
        assert "transitional-collision" in out
        assert "cn-backoff" in out

    def test_utilization_subcommand(self, tmp_path, capsys):
        out_stem = str(tmp_path / "util")
        assert cli_main(["utilization-table", "--payload-bytes", "1000,10000",
                         "--out", out_stem]) == 0
        assert (tmp_path / "util.csv").exists()
        assert (tmp_path / "util.config.json").exists()

    def test_config_file_reproduces_run(self, tmp_path):
        out_a = str(tmp_path / "a")
        assert cli_main(["cn-backoff", "--blockage-probs", "0.0,0.02",
                         "--n-devices", "8", "--replications", "50",
                         "--out", out_a]) == 0
        out_b = str(tmp_path / "b")
        assert cli_main(["cn-backoff", "--config", out_a + ".config.json",
                         "--out", out_b]) == 0
        a = open(out_a + ".csv").read()
        b = open(out_b + ".csv").read()
        assert a == b

    def test_summarize_subcommand(self, tmp_path, capsys):
        path = tmp_path / "d.csv"
        path.write_text("g,v\nx,1.0\nx,3.0\n")
        assert cli_main(["summarize", str(path), "--group-by", "g",
                         "--value", "v"]) == 0
        out = capsys.readouterr().out
        assert "2.0" in out

    def test_missing_dataset_is_an_error(self, capsys):
        assert cli_main(["summarize", "no-such-file.csv", "--group-by", "g",
                         "--value", "v"]) == 1

    def test_preset_override(self, tmp_path):
        out_stem = str(tmp_path / "u")
        assert cli_main(["preset", "utilization-table", "--out", out_stem]) == 0
        assert (tmp_path / "u.csv").exists()

    def test_bad_spec_value_is_an_error(self, tmp_path):
        assert cli_main(["cn-backoff", "--replications", "0",
                         "--out", str(tmp_path / "x")]) == 1
