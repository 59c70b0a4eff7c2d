"""End-to-end command-line behavior: exit codes, files, and reruns.

Everything goes through `main(argv)` in process, so the assertions see
exactly what a shell invocation would produce.
"""

import json

import numpy as np
import pytest

from spikescope.cli import (
    EXIT_DATA,
    EXIT_NUMERIC,
    EXIT_OK,
    EXIT_USAGE,
    main,
    read_monitor_csv,
)
from spikescope.indicators import read_gap_csv
from spikescope.netlab import DenseNetSpec, TrainConfig, make_synthetic, monitor_training
from spikescope.schemas import DOCUMENT_NAMES, schema_for
from spikescope.spikecore import read_spike_matrix


def no_nan_loads(text):
    # the JSON emitted by the tool must be strict: no NaN/Infinity tokens
    return json.loads(
        text, parse_constant=lambda tok: pytest.fail(f"non-finite JSON token {tok}")
    )


class TestParserBasics:
    def test_help_exits_clean(self, capsys):
        assert main(["--help"]) == EXIT_OK
        assert "simulate" in capsys.readouterr().out

    def test_unknown_subcommand(self, capsys):
        assert main(["frobnicate"]) == EXIT_USAGE
        capsys.readouterr()

    def test_no_subcommand(self, capsys):
        assert main([]) == EXIT_USAGE
        capsys.readouterr()


class TestSimulate:
    def test_writes_readable_matrix(self, tmp_path):
        out = tmp_path / "sim.csv"
        code = main(
            ["simulate", "--rate", "0.3", "--n", "500", "--nodes", "2",
             "--seed", "1", "--out", str(out)]
        )
        assert code == EXIT_OK
        matrix = read_spike_matrix(out)
        assert matrix.spikes.shape == (500, 2)
        assert matrix.meta.condition == "simulated"
        assert matrix.meta.layer == "poisson"

    def test_rate_zero_writes_silence(self, tmp_path):
        out = tmp_path / "zero.csv"
        main(["simulate", "--rate", "0", "--n", "200", "--seed", "3",
              "--out", str(out)])
        assert not read_spike_matrix(out).spikes.any()

    def test_rate_one_fires_everywhere(self, tmp_path):
        out = tmp_path / "one.csv"
        main(["simulate", "--rate", "1", "--n", "200", "--seed", "3",
              "--out", str(out)])
        assert read_spike_matrix(out).spikes.all()

    def test_same_seed_same_bytes(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            main(["simulate", "--rate", "0.4", "--n", "300", "--nodes", "3",
                  "--seed", "9", "--out", str(out)])
        assert a.read_bytes() == b.read_bytes()

    def test_rate_out_of_range(self, tmp_path, capsys):
        code = main(["simulate", "--rate", "1.5", "--n", "100", "--seed", "1",
                     "--out", str(tmp_path / "x.csv")])
        assert code == EXIT_USAGE
        capsys.readouterr()

    def test_missing_seed_is_usage_error(self, tmp_path, capsys):
        code = main(["simulate", "--rate", "0.5", "--n", "100",
                     "--out", str(tmp_path / "x.csv")])
        assert code == EXIT_USAGE
        assert "seed" in capsys.readouterr().err

    def test_zero_nodes_rejected(self, tmp_path, capsys):
        code = main(["simulate", "--rate", "0.5", "--n", "100", "--nodes", "0",
                     "--seed", "1", "--out", str(tmp_path / "x.csv")])
        assert code == EXIT_USAGE
        capsys.readouterr()

    def test_overwrite_needs_force(self, tmp_path, capsys):
        out = tmp_path / "sim.csv"
        args = ["simulate", "--rate", "0.5", "--n", "100", "--seed", "1",
                "--out", str(out)]
        assert main(args) == EXIT_OK
        assert main(args) == EXIT_DATA
        assert "--force" in capsys.readouterr().err
        assert main(args + ["--force"]) == EXIT_OK

    def test_config_supplies_values_and_flags_win(self, tmp_path):
        ini = tmp_path / "sim.ini"
        ini.write_text(
            "[simulate]\nrate = 0\nn = 150\nseed = 4\n"
            f"out = {tmp_path / 'from_config.csv'}\n"
        )
        assert main(["simulate", "--config", str(ini)]) == EXIT_OK
        assert not read_spike_matrix(tmp_path / "from_config.csv").spikes.any()
        # a flag overrides the same key from the file
        flag_out = tmp_path / "flagged.csv"
        assert main(["simulate", "--config", str(ini), "--rate", "1",
                     "--out", str(flag_out)]) == EXIT_OK
        assert read_spike_matrix(flag_out).spikes.all()

    def test_unknown_config_key_rejected(self, tmp_path, capsys):
        ini = tmp_path / "sim.ini"
        ini.write_text("[simulate]\nrate = 0.5\nn = 10\nseed = 1\n"
                       f"out = {tmp_path / 'y.csv'}\nbogus = 7\n")
        assert main(["simulate", "--config", str(ini)]) == EXIT_USAGE
        assert "bogus" in capsys.readouterr().err

    def test_missing_config_section(self, tmp_path, capsys):
        ini = tmp_path / "sim.ini"
        ini.write_text("[other]\nrate = 0.5\n")
        assert main(["simulate", "--config", str(ini)]) == EXIT_USAGE
        capsys.readouterr()


class TestAnalyze:
    def test_low_rate_simulation_reads_as_poisson(self, tmp_path):
        # sparse trains are the regime where per-window counts behave like
        # Poisson counts, so the dispersion statistic should sit near one
        sim = tmp_path / "sim.csv"
        main(["simulate", "--rate", "0.02", "--n", "20000", "--nodes", "8",
              "--seed", "5", "--out", str(sim)])
        out = tmp_path / "report.json"
        code = main(["analyze", "--trace", str(sim), "--out", str(out)])
        assert code == EXIT_OK
        report = no_nan_loads(out.read_text())
        (block,) = report["traces"]
        fanos = [n["fano"] for n in block["battery"]["nodes"] if n["fano"] is not None]
        assert len(fanos) == 8
        assert 0.9 <= np.mean(fanos) <= 1.1

    def test_dead_layer_is_reported_not_crashed(self, tmp_path):
        sim = tmp_path / "dead.csv"
        main(["simulate", "--rate", "0", "--n", "400", "--nodes", "3",
              "--seed", "2", "--out", str(sim)])
        out = tmp_path / "report.json"
        assert main(["analyze", "--trace", str(sim), "--window", "20",
                     "--out", str(out)]) == EXIT_OK
        report = no_nan_loads(out.read_text())
        (block,) = report["traces"]
        battery = block["battery"]
        assert all(n["fano"] is None for n in battery["nodes"])
        assert battery["layer"]["excluded_node_count"] == 3
        assert battery["layer"]["combined_ljungbox_p"] is None
        assert block["indicators"]["mfr"] == 0.0
        assert block["indicators"]["mf"] is None

    def test_short_trace_reports_indicator_error(self, tmp_path):
        sim = tmp_path / "tiny.csv"
        main(["simulate", "--rate", "0.5", "--n", "30", "--nodes", "2",
              "--seed", "2", "--out", str(sim)])
        out = tmp_path / "report.json"
        assert main(["analyze", "--trace", str(sim), "--out", str(out)]) == EXIT_OK
        (block,) = no_nan_loads(out.read_text())["traces"]
        assert block["indicators"] is None
        assert "indicator_error" in block

    def test_malformed_trace_is_a_data_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("this is not a trace\n1,2,junk\n")
        code = main(["analyze", "--trace", str(bad),
                     "--out", str(tmp_path / "r.json")])
        assert code == EXIT_DATA
        capsys.readouterr()

    def test_missing_trace_is_a_data_error(self, tmp_path, capsys):
        code = main(["analyze", "--trace", str(tmp_path / "nope.csv"),
                     "--out", str(tmp_path / "r.json")])
        assert code == EXIT_DATA
        capsys.readouterr()

    def test_pairwise_symbols(self, tmp_path):
        from spikescope.procsim import simulate
        from spikescope.spikecore import SpikeMatrix, TraceMeta, write_spike_matrix

        def trace(name, condition, split, rate, seed):
            cols = [simulate(rate, 300, [seed, k]).bits for k in range(6)]
            meta = TraceMeta(dataset="synthetic", split=split,
                             condition=condition, layer="hidden_0",
                             threshold=0.0)
            path = tmp_path / name
            write_spike_matrix(SpikeMatrix(np.column_stack(cols), meta), path)
            return str(path)

        paths = [
            trace("gen_train.csv", "Generalize", "train", 0.5, 1),
            trace("gen_test.csv", "Generalize", "test", 0.5, 2),
            trace("rnd_test.csv", "Random", "test", 0.5, 3),
            trace("mem_test.csv", "MemRetrainAll", "test", 0.2, 4),
        ]
        out = tmp_path / "report.json"
        argv = ["analyze", "--window", "20", "--lags", "5", "--out", str(out)]
        for p in paths:
            argv += ["--trace", p]
        assert main(argv) == EXIT_OK
        report = no_nan_loads(out.read_text())
        sim = report["similarity"]
        assert sim["comparisons"] == 6  # default family = pair count
        assert sim["threshold"] == 0.05 / 6
        symbols = {(e["a"].split(" ")[0], e["b"].split(" ")[0]): e["symbol"]
                   for e in sim["pairs"]}
        assert symbols[("gen_train.csv", "gen_test.csv")] == "clubs"
        assert symbols[("gen_train.csv", "rnd_test.csv")] == "hearts"
        assert symbols[("gen_train.csv", "mem_test.csv")] == "spades"
        assert symbols[("rnd_test.csv", "mem_test.csv")] == "diamonds"
        assert "clubs" in sim["legend"]

    def test_threshold_flag_overrides_header(self, tmp_path):
        sim = tmp_path / "sim.csv"
        main(["simulate", "--rate", "0.5", "--n", "400", "--nodes", "2",
              "--seed", "7", "--out", str(sim)])
        out = tmp_path / "report.json"
        # binarizing 0/1 data at threshold 1 kills every spike (strict >)
        assert main(["analyze", "--trace", str(sim), "--threshold", "1",
                     "--window", "20", "--out", str(out)]) == EXIT_OK
        (block,) = no_nan_loads(out.read_text())["traces"]
        assert block["indicators"]["mfr"] == 0.0


MINI_INI = """\
[experiment]
widths = 8
seeds = 1
conditions = Random, Generalize, MemRetrainLast, MemRandomLast, MemRetrainAll
dim = 16
train_per_class = 5
test_per_class = 5
epochs = 2
mem_epochs = 3
batch_size = 16
window = 10
lags = 5
"""


def run_experiment(root, name):
    ini = root / "mini.ini"
    if not ini.exists():
        ini.write_text(MINI_INI)
    out = root / name
    code = main(["experiment", "--config", str(ini), "--out-dir", str(out)])
    assert code == EXIT_OK
    return out


@pytest.fixture(scope="module")
def mini_run(tmp_path_factory):
    return run_experiment(tmp_path_factory.mktemp("mini"), "run")


class TestExperiment:
    def test_layout(self, mini_run):
        assert (mini_run / "accuracy_table.json").exists()
        assert (mini_run / "comparisons.json").exists()
        assert (mini_run / "gap.csv").exists()
        assert (mini_run / "config.json").exists()
        cells = sorted(p.name for p in (mini_run / "cells").iterdir())
        assert cells == [
            "Generalize_w8_s1",
            "MemRandomLast_w8_s1",
            "MemRetrainAll_w8_s1",
            "MemRetrainLast_w8_s1",
            "Random_w8_s1",
        ]
        for cell in cells:
            files = sorted(p.name for p in (mini_run / "cells" / cell).iterdir())
            assert files == [
                "analysis.json",
                "params.bin",
                "run.json",
                "spikes_test.csv",
                "spikes_train.csv",
            ]

    def test_accuracy_table_contents(self, mini_run):
        rows = no_nan_loads((mini_run / "accuracy_table.json").read_text())
        assert len(rows) == 5
        by_cond = {r["condition"]: r for r in rows}
        assert by_cond["Random"]["validation"] is None
        assert by_cond["Generalize"]["validation"] is not None
        assert all(r["width"] == 8 and r["seed"] == 1 for r in rows)

    def test_config_echo_has_no_paths(self, mini_run):
        echo = no_nan_loads((mini_run / "config.json").read_text())
        assert "out_dir" not in echo
        assert echo["widths"] == [8]
        assert echo["conditions"] == [
            "Random",
            "Generalize",
            "MemRetrainLast",
            "MemRandomLast",
            "MemRetrainAll",
        ]

    def test_gap_rows_skip_untrained(self, mini_run):
        rows = read_gap_csv(mini_run / "gap.csv")
        assert len(rows) == 8  # 4 trained conditions x 2 splits
        assert "Random" not in {r["condition"] for r in rows}
        assert {r["split"] for r in rows} == {"train", "test"}

    def test_comparisons_shape(self, mini_run):
        comp = no_nan_loads((mini_run / "comparisons.json").read_text())
        cell = comp["cells"]["w8_s1"]
        assert set(cell["within_condition"]) == {
            "Random",
            "Generalize",
            "MemRetrainLast",
            "MemRandomLast",
            "MemRetrainAll",
        }
        mem_names = {e["memorize_condition"] for e in cell["across_conditions"]}
        assert mem_names == {"MemRetrainLast", "MemRandomLast", "MemRetrainAll"}
        for entry in cell["across_conditions"]:
            pairs = entry["report"]["pairs"]
            assert set(pairs) == {"diamonds", "hearts", "spades"}
            assert entry["report"]["omitted"] == ["clubs"]

    def test_rerun_into_same_dir_needs_force(self, mini_run, tmp_path, capsys):
        ini = tmp_path / "mini.ini"
        ini.write_text(MINI_INI)
        code = main(["experiment", "--config", str(ini),
                     "--out-dir", str(mini_run)])
        assert code == EXIT_DATA
        assert "--force" in capsys.readouterr().err

    def test_rerun_is_byte_identical(self, mini_run, tmp_path_factory):
        other = run_experiment(tmp_path_factory.mktemp("mini2"), "run2")
        names = [
            "accuracy_table.json",
            "comparisons.json",
            "gap.csv",
            "config.json",
        ]
        for name in names:
            assert (other / name).read_bytes() == (mini_run / name).read_bytes()
        for cell in (mini_run / "cells").iterdir():
            twin = other / "cells" / cell.name
            for artifact in cell.iterdir():
                assert (twin / artifact.name).read_bytes() == artifact.read_bytes(), (
                    f"{cell.name}/{artifact.name} differs between reruns"
                )

    def test_unknown_condition(self, tmp_path, capsys):
        ini = tmp_path / "bad.ini"
        ini.write_text(MINI_INI.replace("Random,", "Rondom,"))
        code = main(["experiment", "--config", str(ini),
                     "--out-dir", str(tmp_path / "out")])
        assert code == EXIT_USAGE
        assert "Rondom" in capsys.readouterr().err

    def test_retrain_requires_generalize_in_list(self, tmp_path, capsys):
        ini = tmp_path / "bad.ini"
        ini.write_text(MINI_INI.replace(
            "conditions = Random, Generalize, MemRetrainLast, MemRandomLast, MemRetrainAll",
            "conditions = MemRetrainAll",
        ))
        code = main(["experiment", "--config", str(ini),
                     "--out-dir", str(tmp_path / "out")])
        assert code == EXIT_USAGE
        assert "Generalize" in capsys.readouterr().err

    def test_divergence_maps_to_numeric_exit(self, tmp_path, capsys):
        ini = tmp_path / "diverge.ini"
        ini.write_text(MINI_INI.replace(
            "conditions = Random, Generalize, MemRetrainLast, MemRandomLast, MemRetrainAll",
            "conditions = Generalize",
        ) + "learning_rate = 1e160\n")
        out = tmp_path / "out"
        code = main(["experiment", "--config", str(ini), "--out-dir", str(out)])
        assert code == EXIT_NUMERIC
        err = capsys.readouterr().err
        assert "non-finite loss" in err
        assert "halted at Generalize_w8_s1" in err
        marker = no_nan_loads((out / "INCOMPLETE.json").read_text())
        assert marker["stage"] == "Generalize_w8_s1"
        # a partial directory is not reportable
        assert main(["report", "--run-dir", str(out)]) == EXIT_DATA
        capsys.readouterr()

    def test_completed_run_has_no_incomplete_marker(self, mini_run):
        assert not (mini_run / "INCOMPLETE.json").exists()


class TestMonitor:
    def test_zero_epochs_writes_initial_probe_only(self, tmp_path):
        out = tmp_path / "mon.csv"
        code = main(["monitor", "--width", "8", "--epochs", "0",
                     "--mem-epochs", "0", "--seed", "2", "--out", str(out),
                     "--config", str(self._ini(tmp_path))])
        assert code == EXIT_OK
        rows = read_monitor_csv(out)
        assert len(rows) == 2
        assert all(r["batch"] == 0 and r["phase"] == "generalize" for r in rows)
        assert [r["split"] for r in rows] == ["train", "test"]
        for r in rows:
            assert 0.4 <= r["mfr"] <= 0.6

    def test_csv_round_trip_is_exact(self, tmp_path):
        ini = self._ini(tmp_path)
        out = tmp_path / "mon.csv"
        assert main(["monitor", "--width", "8", "--epochs", "1",
                     "--mem-epochs", "1", "--seed", "4", "--out", str(out),
                     "--config", str(ini)]) == EXIT_OK
        spec = DenseNetSpec((16, 8, 10))
        cfg = TrainConfig(epochs=1, learning_rate=0.1, batch_size=256)
        train = make_synthetic(5, 16, 0.10, 4, split="train")
        test = make_synthetic(5, 16, 0.10, 4, split="test")
        expect = monitor_training(spec, cfg, train, test, seed=4,
                                  probe_size=100, mem_epochs=1)
        assert read_monitor_csv(out) == expect

    def test_phase_flips_at_first_memorize_batch(self, tmp_path):
        # 50 samples -> 45 after the split -> one batch per epoch at 256
        out = tmp_path / "mon.csv"
        assert main(["monitor", "--width", "8", "--epochs", "1",
                     "--mem-epochs", "1", "--seed", "2", "--out", str(out),
                     "--config", str(self._ini(tmp_path))]) == EXIT_OK
        rows = read_monitor_csv(out)
        assert len(rows) == 6
        phases = {r["batch"]: r["phase"] for r in rows}
        assert phases == {0: "generalize", 1: "generalize", 2: "memorize"}

    def test_overwrite_needs_force(self, tmp_path, capsys):
        out = tmp_path / "mon.csv"
        argv = ["monitor", "--width", "8", "--epochs", "0", "--mem-epochs", "0",
                "--seed", "2", "--out", str(out), "--config", str(self._ini(tmp_path))]
        assert main(argv) == EXIT_OK
        assert main(argv) == EXIT_DATA
        capsys.readouterr()

    @staticmethod
    def _ini(tmp_path):
        ini = tmp_path / "mon.ini"
        if not ini.exists():
            ini.write_text(
                "[monitor]\ndim = 16\ntrain_per_class = 5\ntest_per_class = 5\n"
            )
        return ini


class TestSchemas:
    """Every emitted JSON document validates against its bundled schema."""

    @staticmethod
    def _validate(name, document):
        import jsonschema

        schema = schema_for(name)
        jsonschema.Draft202012Validator.check_schema(schema)
        jsonschema.validate(document, schema)

    def test_names_are_closed(self):
        assert "analyze_report" in DOCUMENT_NAMES
        with pytest.raises(KeyError):
            schema_for("nonexistent")

    def test_analyze_report_single_and_multi(self, tmp_path):
        sim_a, sim_b = tmp_path / "a.csv", tmp_path / "b.csv"
        for seed, path in ((1, sim_a), (2, sim_b)):
            main(["simulate", "--rate", "0.4", "--n", "400", "--nodes", "3",
                  "--seed", str(seed), "--out", str(path)])
        single = tmp_path / "single.json"
        main(["analyze", "--trace", str(sim_a), "--window", "20",
              "--out", str(single)])
        self._validate("analyze_report", no_nan_loads(single.read_text()))
        multi = tmp_path / "multi.json"
        main(["analyze", "--trace", str(sim_a), "--trace", str(sim_b),
              "--window", "20", "--out", str(multi)])
        self._validate("analyze_report", no_nan_loads(multi.read_text()))

    def test_experiment_artifacts(self, mini_run):
        self._validate(
            "accuracy_table",
            no_nan_loads((mini_run / "accuracy_table.json").read_text()),
        )
        self._validate(
            "comparisons",
            no_nan_loads((mini_run / "comparisons.json").read_text()),
        )
        self._validate(
            "config_echo",
            no_nan_loads((mini_run / "config.json").read_text()),
        )
        for cell in (mini_run / "cells").iterdir():
            self._validate(
                "run_record", no_nan_loads((cell / "run.json").read_text())
            )
            self._validate(
                "cell_analysis",
                no_nan_loads((cell / "analysis.json").read_text()),
            )

    def test_report_summary(self, mini_run, tmp_path):
        out = tmp_path / "summary.json"
        assert main(["report", "--run-dir", str(mini_run),
                     "--out", str(out)]) == EXIT_OK
        self._validate("report_summary", no_nan_loads(out.read_text()))

    def test_incomplete_marker(self, tmp_path, capsys):
        ini = tmp_path / "diverge.ini"
        ini.write_text(MINI_INI.replace(
            "conditions = Random, Generalize, MemRetrainLast, MemRandomLast, MemRetrainAll",
            "conditions = Generalize",
        ) + "learning_rate = 1e160\n")
        out = tmp_path / "out"
        main(["experiment", "--config", str(ini), "--out-dir", str(out)])
        capsys.readouterr()
        self._validate(
            "incomplete_marker",
            no_nan_loads((out / "INCOMPLETE.json").read_text()),
        )


class TestReport:
    def test_matches_experiment_outputs_exactly(self, mini_run, tmp_path):
        out = tmp_path / "summary.json"
        code = main(["report", "--run-dir", str(mini_run), "--out", str(out)])
        assert code == EXIT_OK
        summary = no_nan_loads(out.read_text())
        assert summary["accuracy_table"] == no_nan_loads(
            (mini_run / "accuracy_table.json").read_text()
        )
        assert summary["comparisons"] == no_nan_loads(
            (mini_run / "comparisons.json").read_text()
        )
        assert summary["gap_rows"] == read_gap_csv(mini_run / "gap.csv")

    def test_stdout_when_no_out(self, mini_run, capsys):
        assert main(["report", "--run-dir", str(mini_run)]) == EXIT_OK
        summary = no_nan_loads(capsys.readouterr().out)
        assert set(summary) == {"accuracy_table", "comparisons", "gap_rows"}

    def test_rejects_non_experiment_dir(self, tmp_path, capsys):
        assert main(["report", "--run-dir", str(tmp_path)]) == EXIT_DATA
        capsys.readouterr()

    def test_out_overwrite_needs_force(self, mini_run, tmp_path, capsys):
        out = tmp_path / "summary.json"
        argv = ["report", "--run-dir", str(mini_run), "--out", str(out)]
        assert main(argv) == EXIT_OK
        assert main(argv) == EXIT_DATA
        capsys.readouterr()
        assert main(argv + ["--force"]) == EXIT_OK
