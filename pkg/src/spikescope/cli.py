"""Command-line front end.

Subcommands: simulate (write a Poisson spike matrix), analyze (run the
assumption battery on trace files), experiment (the condition sweep),
monitor (batch-wise firing-rate tracking), report (regenerate summaries
from stored experiment artifacts).

Parameters come from command-line flags, from an INI manifest given with
--config, or from built-in defaults, in that priority order. Every
stochastic subcommand requires an explicit seed. Outputs never overwrite
existing files unless --force is given. Exit codes: 0 success, 2 usage or
configuration error, 3 missing or malformed data, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from .errors import (
    ArrivalNotReached,
    IdxFormatError,
    InsufficientData,
    NumericalError,
    ParamsFormatError,
    TraceFormatError,
    TrainingDiverged,
    UndefinedStatistic,
)
from .indicators import compare_conditions, layer_indicators, write_gap_csv
from .netlab import (
    Condition,
    DenseNetSpec,
    TrainConfig,
    make_synthetic,
    monitor_training,
    run_condition,
    save_params,
)
from .spikecore import (
    SpikeMatrix,
    TraceMeta,
    binarize,
    read_trace,
    write_spike_matrix,
)
from .stattests import assumption_battery
from . import procsim

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4

_CANONICAL_ORDER = (
    Condition.RANDOM,
    Condition.GENERALIZE,
    Condition.MEM_RETRAIN_LAST,
    Condition.MEM_RANDOM_LAST,
    Condition.MEM_RETRAIN_ALL,
)

_MONITOR_COLUMNS = ("batch", "phase", "split", "mfr")


class UsageError(Exception):
    """Bad flags or manifest contents; exits with code 2."""


_REQUIRED = object()


def _int_list(text):
    return [int(tok) for tok in str(text).split(",") if tok.strip()]


def _str_list(text):
    return [tok.strip() for tok in str(text).split(",") if tok.strip()]


def _load_section(path, section):
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    if not parser.read(path):
        raise UsageError(f"cannot read config file {path}")
    if section not in parser:
        raise UsageError(f"config file {path} has no [{section}] section")
    return dict(parser[section])


def _resolve(args, table):
    """Merge flags over config values over defaults, converting as needed."""
    section = {}
    config_path = getattr(args, "config", None)
    if config_path:
        section = _load_section(config_path, args.command)
    resolved = {}
    for name, (convert, default) in table.items():
        flag_value = getattr(args, name, None)
        if flag_value is not None:
            resolved[name] = flag_value
        elif name in section:
            try:
                resolved[name] = convert(section[name])
            except (TypeError, ValueError) as exc:
                raise UsageError(f"config value {name!r}: {exc}") from None
        elif default is _REQUIRED:
            raise UsageError(
                f"{args.command}: parameter {name!r} is required "
                f"(flag --{name.replace('_', '-')} or config entry)"
            )
        else:
            resolved[name] = default
    unknown = set(section) - set(table)
    if unknown:
        raise UsageError(
            f"config section [{args.command}] has unknown keys: {sorted(unknown)}"
        )
    return resolved


def _json_dump(obj, path):
    path.write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def _check_overwrite(path, force):
    path = Path(path)
    if path.exists() and not force:
        raise FileExistsError(f"{path} exists; pass --force to overwrite")
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _net_spec(dim, width, depth):
    return DenseNetSpec((dim,) + (width,) * depth + (10,))


# ---------------------------------------------------------------- simulate

_SIMULATE_TABLE = {
    "rate": (float, _REQUIRED),
    "n": (int, _REQUIRED),
    "nodes": (int, 1),
    "seed": (int, _REQUIRED),
    "out": (str, _REQUIRED),
}


def cmd_simulate(args):
    p = _resolve(args, _SIMULATE_TABLE)
    if p["nodes"] < 1:
        raise UsageError(f"nodes must be >= 1, got {p['nodes']}")
    out = _check_overwrite(p["out"], args.force)
    columns = [
        procsim.simulate(p["rate"], p["n"], [p["seed"], node]).bits
        for node in range(p["nodes"])
    ]
    matrix = SpikeMatrix(
        np.column_stack(columns),
        TraceMeta(
            dataset="simulation",
            split="full",
            condition="simulated",
            layer="poisson",
            threshold=0.0,
        ),
    )
    write_spike_matrix(matrix, out)
    print(f"wrote {matrix.n_samples}x{matrix.n_nodes} spike matrix to {out}")
    return EXIT_OK


# ----------------------------------------------------------------- analyze

_ANALYZE_TABLE = {
    "trace": (_str_list, _REQUIRED),
    "window": (int, 100),
    "lags": (int, 10),
    "alpha": (float, 0.05),
    "comparisons": (int, None),
    "threshold": (float, None),
    "out": (str, _REQUIRED),
}

_SUIT_RULES = "clubs: same condition train vs test; diamonds: memorize vs random; hearts: generalize vs random; spades: generalize vs memorize"


def _suit_for(meta_a, meta_b):
    conds = {meta_a.condition, meta_b.condition}
    splits = {meta_a.split, meta_b.split}
    if len(conds) == 1 and splits == {"train", "test"}:
        return "clubs"

    def role(condition):
        if condition == "Random":
            return "random"
        if condition == "Generalize":
            return "generalize"
        if condition.startswith("Mem"):
            return "memorize"
        return None

    roles = {role(meta_a.condition), role(meta_b.condition)}
    if roles == {"memorize", "random"}:
        return "diamonds"
    if roles == {"generalize", "random"}:
        return "hearts"
    if roles == {"generalize", "memorize"}:
        return "spades"
    return None


def _battery_block(matrix, window, lags, alpha):
    block = {"battery": assumption_battery(matrix, window=window, lags=lags, alpha=alpha)}
    try:
        block["indicators"] = layer_indicators(matrix, window=window).to_dict()
    except InsufficientData as exc:
        block["indicators"] = None
        block["indicator_error"] = str(exc)
    return block


def cmd_analyze(args):
    p = _resolve(args, _ANALYZE_TABLE)
    out = _check_overwrite(p["out"], args.force)
    matrices = []
    for path in p["trace"]:
        trace = read_trace(path)
        threshold = p["threshold"] if p["threshold"] is not None else trace.meta.threshold
        matrices.append((Path(path).name, binarize(trace, threshold)))

    report = {
        "parameters": {
            "window": p["window"],
            "lags": p["lags"],
            "alpha": p["alpha"],
        },
        "traces": [],
    }
    for name, matrix in matrices:
        block = _battery_block(matrix, p["window"], p["lags"], p["alpha"])
        block["file"] = name
        report["traces"].append(block)

    if len(matrices) > 1:
        pairs = []
        names = [name for name, _ in matrices]
        for i in range(len(matrices)):
            for j in range(i + 1, len(matrices)):
                pairs.append((i, j))
        m = p["comparisons"] if p["comparisons"] is not None else len(pairs)
        if m < 1:
            raise UsageError("comparisons must be >= 1")
        threshold = p["alpha"] / m
        from .stattests import ks_two_sample

        entries = []
        for i, j in pairs:
            fr_a = matrices[i][1].firing_rates()
            fr_b = matrices[j][1].firing_rates()
            res = ks_two_sample(fr_a, fr_b)
            meta_a, meta_b = matrices[i][1].meta, matrices[j][1].meta
            entries.append(
                {
                    "a": f"{names[i]} ({meta_a.condition}:{meta_a.split})",
                    "b": f"{names[j]} ({meta_b.condition}:{meta_b.split})",
                    "symbol": _suit_for(meta_a, meta_b),
                    "statistic": res.statistic,
                    "p_value": res.p_value,
                    "similar": bool(res.p_value > threshold),
                }
            )
        report["similarity"] = {
            "legend": _SUIT_RULES,
            "alpha": p["alpha"],
            "comparisons": m,
            "threshold": threshold,
            "pairs": entries,
        }

    _json_dump(report, out)
    print(f"analyzed {len(matrices)} trace(s) -> {out}")
    return EXIT_OK


# -------------------------------------------------------------- experiment

_EXPERIMENT_TABLE = {
    "widths": (_int_list, _REQUIRED),
    "seeds": (_int_list, _REQUIRED),
    "conditions": (_str_list, [c.value for c in _CANONICAL_ORDER]),
    "depth": (int, 1),
    "dim": (int, 64),
    "spread": (float, 0.10),
    "density": (float, 0.15),
    "train_per_class": (int, 100),
    "test_per_class": (int, 100),
    "epochs": (int, 30),
    "mem_epochs": (int, 600),
    "learning_rate": (float, 0.1),
    "batch_size": (int, 256),
    "validation_fraction": (float, 0.1),
    "window": (int, 100),
    "lags": (int, 10),
    "alpha": (float, 0.05),
    "comparisons": (int, None),
    "threshold": (float, 0.0),
    "out_dir": (str, _REQUIRED),
}


def _parse_conditions(names):
    conditions = []
    for name in names:
        try:
            conditions.append(Condition(name))
        except ValueError:
            valid = ", ".join(c.value for c in _CANONICAL_ORDER)
            raise UsageError(f"unknown condition {name!r}; expected one of {valid}") from None
    ordered = [c for c in _CANONICAL_ORDER if c in conditions]
    needs_gen = [c for c in ordered if c.needs_generalize]
    if needs_gen and Condition.GENERALIZE not in ordered:
        raise UsageError(
            f"{needs_gen[0].value} requires Generalize in the condition list"
        )
    return ordered


def _prepare_out_dir(path, force):
    out_dir = Path(path)
    if out_dir.exists() and any(out_dir.iterdir()) and not force:
        raise FileExistsError(f"{out_dir} is not empty; pass --force to overwrite")
    out_dir.mkdir(parents=True, exist_ok=True)
    return out_dir


def _cell_record(art, width, seed, analysis):
    return {
        "condition": art.condition.value,
        "width": width,
        "seed": seed,
        "accuracies": art.accuracies,
        "indicators": {
            "train": analysis["train"]["indicators"],
            "test": analysis["test"]["indicators"],
        },
    }


def _accuracy_rows(records):
    rows = []
    for rec in sorted(records, key=lambda r: (r["condition"], r["width"], r["seed"])):
        acc = rec["accuracies"]
        rows.append(
            {
                "condition": rec["condition"],
                "width": rec["width"],
                "seed": rec["seed"],
                "train": acc.get("train"),
                "validation": acc.get("validation"),
                "test": acc.get("test"),
            }
        )
    return rows


def _role_of(condition):
    if condition == "Random":
        return "random"
    if condition == "Generalize":
        return "generalize"
    return None


def _comparison_cells(records, alpha, comparisons):
    cells = {}
    by_cell = {}
    for rec in records:
        by_cell.setdefault((rec["width"], rec["seed"]), []).append(rec)
    for (width, seed), cell_records in sorted(by_cell.items()):
        with_both = [
            r
            for r in cell_records
            if r["indicators"]["train"] and r["indicators"]["test"]
        ]
        within = {}
        m_within = comparisons if comparisons is not None else max(1, len(with_both))
        for rec in sorted(with_both, key=lambda r: r["condition"]):
            rep = compare_conditions(
                {
                    "train": rec["indicators"]["train"]["fr_per_node"],
                    "test": rec["indicators"]["test"]["fr_per_node"],
                },
                alpha=alpha,
                comparisons=m_within,
            )
            within[rec["condition"]] = rep.to_dict()

        test_fr = {
            r["condition"]: r["indicators"]["test"]["fr_per_node"]
            for r in cell_records
            if r["indicators"]["test"]
        }
        across = []
        base_roles = {}
        for condition, role in ((c, _role_of(c)) for c in test_fr):
            if role:
                base_roles[role] = test_fr[condition]
        for condition in sorted(test_fr):
            if not condition.startswith("Mem"):
                continue
            roles = dict(base_roles)
            roles["memorize"] = test_fr[condition]
            if len(roles) < 2:
                continue
            rep = compare_conditions(roles, alpha=alpha, comparisons=comparisons)
            across.append(
                {"memorize_condition": condition, "report": rep.to_dict()}
            )
        cells[f"w{width}_s{seed}"] = {
            "within_condition": within,
            "across_conditions": across,
        }
    return {"alpha": alpha, "cells": cells}


def _gap_rows(records):
    rows = []
    for rec in sorted(records, key=lambda r: (r["condition"], r["width"], r["seed"])):
        acc = rec["accuracies"]
        if acc.get("validation") is None:
            continue  # untrained nets have no held-out accuracy to gap against
        gap = acc["train"] - acc["validation"]
        for split in ("train", "test"):
            ind = rec["indicators"][split]
            if ind is None:
                continue
            rows.append(
                {
                    "gap": gap,
                    "mfr": ind["mfr"],
                    "cv_fr_percent": ind["cv_fr_percent"],
                    "mf": ind["mf"],
                    "cv_f_percent": ind["cv_f_percent"],
                    "condition": rec["condition"],
                    "dataset": ind["meta"]["dataset"],
                    "split": split,
                    "width": rec["width"],
                }
            )
    return rows


def cmd_experiment(args):
    p = _resolve(args, _EXPERIMENT_TABLE)
    conditions = _parse_conditions(p["conditions"])
    out_dir = _prepare_out_dir(p["out_dir"], args.force)
    cells_dir = out_dir / "cells"
    cells_dir.mkdir(exist_ok=True)

    cfg_gen = TrainConfig(
        epochs=p["epochs"],
        learning_rate=p["learning_rate"],
        batch_size=p["batch_size"],
        validation_fraction=p["validation_fraction"],
    )
    cfg_mem = dataclasses.replace(cfg_gen, epochs=p["mem_epochs"])

    records = []
    stage = "setup"
    try:
        for width in p["widths"]:
            spec = _net_spec(p["dim"], width, p["depth"])
            for seed in p["seeds"]:
                train_data = make_synthetic(
                    p["train_per_class"], p["dim"], p["spread"], seed,
                    split="train", density=p["density"],
                )
                test_data = make_synthetic(
                    p["test_per_class"], p["dim"], p["spread"], seed,
                    split="test", density=p["density"],
                )
                gen_art = None
                for condition in conditions:
                    stage = f"{condition.value}_w{width}_s{seed}"
                    cfg = cfg_mem if condition.memorizes else cfg_gen
                    art = run_condition(
                        condition, spec, cfg, train_data, test_data, seed,
                        generalize_artifacts=gen_art,
                    )
                    if condition is Condition.GENERALIZE:
                        gen_art = art
                    cell_dir = cells_dir / f"{condition.value}_w{width}_s{seed}"
                    cell_dir.mkdir(exist_ok=True)
                    analysis = {}
                    for split, trace in (("train", art.trace_train), ("test", art.trace_test)):
                        matrix = binarize(trace, p["threshold"])
                        write_spike_matrix(matrix, cell_dir / f"spikes_{split}.csv")
                        analysis[split] = _battery_block(
                            matrix, p["window"], p["lags"], p["alpha"]
                        )
                    save_params(art.params, cell_dir / "params.bin")
                    _json_dump(analysis, cell_dir / "analysis.json")
                    _json_dump(
                        {
                            "condition": condition.value,
                            "width": width,
                            "seed": seed,
                            "accuracies": art.accuracies,
                            "history": art.history,
                        },
                        cell_dir / "run.json",
                    )
                    records.append(_cell_record(art, width, seed, analysis))
                    print(
                        f"cell {condition.value} w={width} s={seed}: "
                        + ", ".join(f"{k}={v:.3f}" for k, v in sorted(art.accuracies.items()))
                    )
    except Exception as exc:
        # leave a machine-readable marker so a partial directory is never
        # mistaken for a finished sweep
        _json_dump({"stage": stage, "error": str(exc)}, out_dir / "INCOMPLETE.json")
        print(f"experiment halted at {stage}", file=sys.stderr)
        raise

    _json_dump(_accuracy_rows(records), out_dir / "accuracy_table.json")
    _json_dump(
        _comparison_cells(records, p["alpha"], p["comparisons"]),
        out_dir / "comparisons.json",
    )
    write_gap_csv(_gap_rows(records), out_dir / "gap.csv")
    echo = {k: v for k, v in sorted(p.items()) if k != "out_dir"}
    echo["conditions"] = [c.value for c in conditions]
    _json_dump(echo, out_dir / "config.json")
    (out_dir / "INCOMPLETE.json").unlink(missing_ok=True)
    print(f"experiment complete: {len(records)} cells -> {out_dir}")
    return EXIT_OK


# ----------------------------------------------------------------- monitor

_MONITOR_TABLE = {
    "width": (int, _REQUIRED),
    "depth": (int, 1),
    "dim": (int, 64),
    "spread": (float, 0.10),
    "density": (float, 0.15),
    "train_per_class": (int, 100),
    "test_per_class": (int, 100),
    "epochs": (int, 10),
    "mem_epochs": (int, None),
    "learning_rate": (float, 0.1),
    "batch_size": (int, 256),
    "validation_fraction": (float, 0.1),
    "probe_size": (int, 100),
    "threshold": (float, 0.0),
    "seed": (int, _REQUIRED),
    "out": (str, _REQUIRED),
}


def cmd_monitor(args):
    p = _resolve(args, _MONITOR_TABLE)
    out = _check_overwrite(p["out"], args.force)
    spec = _net_spec(p["dim"], p["width"], p["depth"])
    cfg = TrainConfig(
        epochs=p["epochs"],
        learning_rate=p["learning_rate"],
        batch_size=p["batch_size"],
        validation_fraction=p["validation_fraction"],
    )
    train_data = make_synthetic(
        p["train_per_class"], p["dim"], p["spread"], p["seed"],
        split="train", density=p["density"],
    )
    test_data = make_synthetic(
        p["test_per_class"], p["dim"], p["spread"], p["seed"],
        split="test", density=p["density"],
    )
    rows = monitor_training(
        spec,
        cfg,
        train_data,
        test_data,
        seed=p["seed"],
        probe_size=p["probe_size"],
        mem_epochs=p["mem_epochs"],
        threshold=p["threshold"],
    )
    with open(out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=_MONITOR_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow({**row, "mfr": repr(row["mfr"])})
    print(f"monitored {len(rows)} probe rows -> {out}")
    return EXIT_OK


def read_monitor_csv(path):
    """Read rows written by the monitor subcommand."""
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            rows.append(
                {
                    "batch": int(row["batch"]),
                    "phase": row["phase"],
                    "split": row["split"],
                    "mfr": float(row["mfr"]),
                }
            )
    return rows


# ------------------------------------------------------------------ report

def cmd_report(args):
    run_dir = Path(args.run_dir)
    marker = run_dir / "INCOMPLETE.json"
    if marker.exists():
        info = json.loads(marker.read_text(encoding="utf-8"))
        raise FileNotFoundError(
            f"{run_dir} holds a partial sweep (halted at "
            f"{info.get('stage', 'unknown')}); rerun the experiment"
        )
    config_path = run_dir / "config.json"
    cells_dir = run_dir / "cells"
    if not config_path.exists() or not cells_dir.is_dir():
        raise FileNotFoundError(
            f"{run_dir} does not look like an experiment output "
            "(config.json and cells/ expected)"
        )
    stored = json.loads(config_path.read_text(encoding="utf-8"))
    records = []
    for cell_dir in sorted(cells_dir.iterdir()):
        run_path = cell_dir / "run.json"
        analysis_path = cell_dir / "analysis.json"
        if not run_path.exists() or not analysis_path.exists():
            raise FileNotFoundError(f"{cell_dir} is missing run.json or analysis.json")
        run = json.loads(run_path.read_text(encoding="utf-8"))
        analysis = json.loads(analysis_path.read_text(encoding="utf-8"))
        records.append(
            {
                "condition": run["condition"],
                "width": run["width"],
                "seed": run["seed"],
                "accuracies": run["accuracies"],
                "indicators": {
                    "train": analysis["train"]["indicators"],
                    "test": analysis["test"]["indicators"],
                },
            }
        )
    if not records:
        raise FileNotFoundError(f"{cells_dir} holds no cell artifacts")
    summary = {
        "accuracy_table": _accuracy_rows(records),
        "comparisons": _comparison_cells(
            records, stored.get("alpha", 0.05), stored.get("comparisons")
        ),
        "gap_rows": _gap_rows(records),
    }
    text = json.dumps(summary, sort_keys=True, indent=2) + "\n"
    if args.out:
        out = _check_overwrite(args.out, args.force)
        out.write_text(text, encoding="utf-8")
        print(f"report for {len(records)} cells -> {out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ------------------------------------------------------------------- main

def _build_parser():
    parser = argparse.ArgumentParser(
        prog="spikescope",
        description="Poisson arrival-process statistics for thresholded activations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="write a simulated Poisson spike matrix")
    p.add_argument("--config", help="INI manifest with a [simulate] section")
    p.add_argument("--rate", type=float, help="firing probability per sample, in [0, 1]")
    p.add_argument("--n", type=int, help="number of samples")
    p.add_argument("--nodes", type=int, help="number of independent trains")
    p.add_argument("--seed", type=int, help="generator seed")
    p.add_argument("--out", help="output CSV path")
    p.add_argument("--force", action="store_true", help="overwrite existing outputs")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analyze", help="run the assumption battery on trace files")
    p.add_argument("--config", help="INI manifest with an [analyze] section")
    p.add_argument(
        "--trace", action="append", help="trace CSV; repeat to compare several"
    )
    p.add_argument("--window", type=int, help="Fano window width (default 100)")
    p.add_argument("--lags", type=int, help="Ljung-Box lags (default 10)")
    p.add_argument("--alpha", type=float, help="significance level (default 0.05)")
    p.add_argument(
        "--comparisons", type=int, help="Bonferroni family size (default: pair count)"
    )
    p.add_argument(
        "--threshold", type=float, help="binarization threshold (default: trace header)"
    )
    p.add_argument("--out", help="output JSON path")
    p.add_argument("--force", action="store_true", help="overwrite existing outputs")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("experiment", help="run the training-condition sweep")
    p.add_argument("--config", required=True, help="INI manifest with an [experiment] section")
    p.add_argument("--out-dir", dest="out_dir", help="output directory")
    p.add_argument("--force", action="store_true", help="overwrite existing outputs")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("monitor", help="track firing rate batch by batch")
    p.add_argument("--config", help="INI manifest with a [monitor] section")
    p.add_argument("--width", type=int, help="hidden layer width")
    p.add_argument("--epochs", type=int, help="generalize-phase epochs")
    p.add_argument("--mem-epochs", dest="mem_epochs", type=int, help="memorize-phase epochs")
    p.add_argument("--probe-size", dest="probe_size", type=int, help="probe samples per split")
    p.add_argument("--seed", type=int, help="run seed")
    p.add_argument("--out", help="output CSV path")
    p.add_argument("--force", action="store_true", help="overwrite existing outputs")
    p.set_defaults(func=cmd_monitor)

    p = sub.add_parser("report", help="rebuild summaries from experiment artifacts")
    p.add_argument("--run-dir", dest="run_dir", required=True, help="experiment output directory")
    p.add_argument("--out", help="output JSON path (default: stdout)")
    p.add_argument("--force", action="store_true", help="overwrite existing outputs")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (
        TraceFormatError,
        IdxFormatError,
        ParamsFormatError,
        InsufficientData,
        UndefinedStatistic,
        ArrivalNotReached,
        FileNotFoundError,
        FileExistsError,
        IsADirectoryError,
        PermissionError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (NumericalError, TrainingDiverged, FloatingPointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
