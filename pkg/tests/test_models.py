"""Tests for data models."""

import csv
import json
import math
import os
import tempfile

import pytest

from src.errors import ConfigInvalid
from src.simulation.models import (
    Estimate,
    Readout,
    ReportStore,
    RunReport,
    ScenarioConfig,
    TrialRecord,
    write_trials_csv,
)


class TestScenarioConfig:
    def test_defaults(self):
        cfg = ScenarioConfig("double_mzi").validate()
        assert cfg.measurement_cut == "mid1"
        assert cfg.wants("flips")

    def test_outputs_filter(self):
        cfg = ScenarioConfig("double_well", outputs=("flips",))
        assert cfg.wants("flips")
        assert not cfg.wants("pointer_means")

    @pytest.mark.parametrize(
        "overrides,field",
        [
            ({"trials": 0}, "trials"),
            ({"delta": 0.0}, "delta"),
            ({"g0": math.nan}, "g0"),
            ({"seed": -1}, "seed"),
            ({"seed": 2**64}, "seed"),
            ({"workers": 0}, "workers"),
            ({"repetitions_per_trial": -1}, "repetitions_per_trial"),
            ({"postselect": "up"}, "postselect"),
            ({"cut": "mid"}, "cut"),
        ],
    )
    def test_field_diagnostics(self, overrides, field):
        with pytest.raises(ConfigInvalid) as exc:
            ScenarioConfig("double_mzi", **overrides).validate()
        assert exc.value.field == field

    def test_lattice_steps(self):
        with pytest.raises(ConfigInvalid) as exc:
            ScenarioConfig("lattice_check", sites=8, steps=8).validate()
        assert exc.value.field == "steps"

    def test_echo_leaves_out_workers(self):
        data = ScenarioConfig("double_well", workers=8, outputs=("flips",)).to_dict()
        assert "workers" not in data
        assert data["outputs"] == ["flips"]
        assert data["postselect"] == "R"

    @pytest.mark.parametrize(
        "scenario,label",
        [("double_well", "R"), ("single_mzi", "R"), ("double_mzi", "R"), ("kicked_qubit", "x-")],
    )
    def test_postselect_default_per_scenario(self, scenario, label):
        cfg = ScenarioConfig(scenario).validate()
        assert cfg.selection == label
        assert ScenarioConfig(scenario, postselect="L").selection == "L"

    @pytest.mark.parametrize("label", ["L", "R"])
    def test_kicked_qubit_reads_sigma_x_only(self, label):
        with pytest.raises(ConfigInvalid) as exc:
            ScenarioConfig("kicked_qubit", postselect=label).validate()
        assert exc.value.field == "postselect"
        ScenarioConfig("kicked_qubit", postselect="x+").validate()


class TestEstimate:
    def test_from_samples(self):
        est = Estimate.from_samples([1.0, 2.0, 3.0, 4.0])
        assert est.value == 2.5
        assert est.stderr == pytest.approx(math.sqrt(5.0 / 3.0 / 4.0))
        assert est.samples == 4

    def test_single_sample_has_no_stderr(self):
        assert Estimate.from_samples([0.3]).stderr is None

    def test_from_bernoulli(self):
        est = Estimate.from_bernoulli(25, 100)
        assert est.value == 0.25
        assert est.stderr == pytest.approx(math.sqrt(0.25 * 0.75 / 100))

    def test_within(self):
        est = Estimate(1.0, 0.1, 100)
        assert est.within(1.25)
        assert not est.within(1.35)
        assert Estimate(-1.0, 0.0, 10).within(-1.0)


class TestTrialRecord:
    def test_readings_by_observable(self):
        record = TrialRecord(
            trial_index=3,
            postselected=True,
            readouts=[Readout("mid1", "L1", 0.1), Readout("mid1", "R1", 0.2), Readout("mid1", "L1", -0.3)],
        )
        assert record.readings("L1") == [0.1, -0.3]
        assert record.readings("R2") == []


def sample_report() -> RunReport:
    return RunReport(
        config=ScenarioConfig("double_mzi").to_dict(),
        trials=10,
        postselected_trials=4,
        postselection_rate=Estimate.from_bernoulli(4, 10),
        pointer_means={"R1": Estimate(0.1, 0.01, 4)},
        flips={"rate": Estimate(0.0, 0.0, 10)},
        predictions={"weak_values": {"R1": [1.0, 0.0]}},
    )


class TestReportStore:
    def test_save_and_load(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            filepath = os.path.join(tmpdir, "reports", "run.json")
            store = ReportStore(filepath)
            report = sample_report()

            store.save(report)
            loaded = store.load()

            assert loaded == report
            assert not [name for name in os.listdir(os.path.dirname(filepath)) if name != "run.json"]

    def test_load_missing(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            assert ReportStore(os.path.join(tmpdir, "none.json")).load() is None

    def test_json_is_stable(self):
        report = sample_report()
        text = report.to_json()
        assert text == RunReport.from_dict(json.loads(text)).to_json()
        assert list(json.loads(text)) == [
            "config",
            "trials",
            "postselected_trials",
            "postselection_rate",
            "pointer_means",
            "accumulated_shift",
            "flips",
            "extras",
            "predictions",
        ]

    def test_floats_round_trip_exactly(self):
        report = sample_report()
        report.pointer_means["R1"] = Estimate(0.1 + 0.2, 1 / 3, 4)
        loaded = RunReport.from_dict(json.loads(report.to_json()))
        assert loaded.pointer_means["R1"].value == 0.1 + 0.2
        assert loaded.pointer_means["R1"].stderr == 1 / 3


class TestTrialsCsv:
    def test_rows(self):
        records = [
            TrialRecord(0, True, [Readout("mid1", "L1", 0.5), Readout("mid1", "R1", -0.25)], flips=1),
            TrialRecord(1, False),
        ]
        with tempfile.TemporaryDirectory() as tmpdir:
            filepath = os.path.join(tmpdir, "trials.csv")
            write_trials_csv(records, filepath)
            with open(filepath, newline="") as f:
                rows = list(csv.reader(f))
        assert rows[0] == ["trial_index", "postselected", "flips", "q0"]
        assert rows[1] == ["0", "1", "1", "0.5;-0.25"]
        assert rows[2] == ["1", "0", "0", ""]
