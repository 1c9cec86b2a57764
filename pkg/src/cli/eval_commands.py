"""
CLI command for poison-fraction sweeps and the protocols built on them.
"""
from pathlib import Path
from typing import List, NamedTuple, Optional

import click
import pandas as pd

from src.cli.checks import InvariantChecks
from src.cli.common import command_errors, config_options, enforce_checks, output_dir
from src.cli.manifest import ManifestRecorder
from src.config.loader import load_config
from src.config.schemas import EvalRunConfig
from src.config.settings import settings
from src.data.dataset import LabeledDataset
from src.data.sources import dataset_input_files, load_datasets
from src.eval.config import ExperimentConfig
from src.eval.protocols import alpha_sweep, lambda_sweep, train_size_sweep
from src.eval.report import AttackReport
from src.eval.sweep import poison_sweep
from src.pgan.model import PganModel, component_paths, load_model
from src.utils.errors import ConfigurationError
from src.utils.io import write_json
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


class SweepRun(NamedTuple):
    """One finished sweep and what it was asked to cover."""

    name: str
    exp: ExperimentConfig
    report: AttackReport
    n_generators: int
    value: Optional[float] = None


def _fraction_runs(cfg: EvalRunConfig, generators: List[PganModel],
                   pool: LabeledDataset, test: Optional[LabeledDataset]) -> List[SweepRun]:
    runs = []
    for attack in cfg.attacks:
        exp = cfg.experiment.model_copy(update={"attack": attack, "label_flip": cfg.label_flip})
        attack_generators = generators if attack == "pgan" else []
        report = poison_sweep(exp, attack_generators, pool, test)
        n_gen = len(attack_generators) if attack == "pgan" else exp.n_generators
        runs.append(SweepRun(attack, exp, report, n_gen))
    return runs


def _protocol_runs(cfg: EvalRunConfig, generators: List[PganModel],
                   pool: LabeledDataset, test: Optional[LabeledDataset]) -> List[SweepRun]:
    exp = cfg.experiment.model_copy(update={"attack": "pgan"})
    if cfg.protocol == "alpha":
        reports = alpha_sweep(pool, cfg.pgan, exp, cfg.alphas, test)
        n_gen = exp.n_generators
    elif cfg.protocol == "lambda":
        reports = lambda_sweep(pool, cfg.pgan, exp, cfg.lambda_primes, test)
        n_gen = exp.n_generators
    else:
        reports = train_size_sweep(pool, generators, exp, cfg.sizes, cfg.size_fraction, test)
        exp = exp.model_copy(update={"fractions": sorted({0.0, cfg.size_fraction})})
        n_gen = len(generators)
    return [
        SweepRun(f"pgan_{cfg.protocol}_{value:g}", exp, report, n_gen, value)
        for value, report in reports.items()
    ]


def _record_run(run: SweepRun, out_dir: Path, pool: LabeledDataset,
                recorder: ManifestRecorder, checks: InvariantChecks) -> List[Path]:
    exp, report = run.exp, run.report
    csv_path = report.to_csv(out_dir / f"report_{run.name}.csv")
    json_path = report.to_json(out_dir / f"report_{run.name}.json")
    recorder.add_output(f"{run.name}_csv", csv_path)
    recorder.add_output(f"{run.name}_json", json_path)
    written = [csv_path, json_path]

    expected = len(exp.fractions) * run.n_generators * exp.n_runs
    checks.check(f"{run.name}: one row per cell", len(report) == expected,
                 f"{len(report)} rows, {expected} expected")
    frame = report.to_frame()
    checks.finite(f"{run.name}: errors finite", frame["error"].values)
    if pool.n_classes == 2 or exp.positive_class is not None:
        checks.finite(f"{run.name}: FPR/FNR populated", frame[["fpr", "fnr"]].values)
    if exp.defense.enabled:
        checks.finite(f"{run.name}: rejection rates populated", frame["reject_genuine"].values)

    poisoned = [f for f in exp.fractions if f > 0.0]
    if 0.0 in exp.fractions and poisoned:
        deltas = {str(f): report.delta(f).to_dict() for f in poisoned}
        delta_path = write_json(deltas, out_dir / f"confusion_delta_{run.name}.json")
        recorder.add_output(f"{run.name}_confusion_delta", delta_path)
        written.append(delta_path)

    click.echo(f"\n{run.name} sweep:")
    for record in report.aggregate().to_dict(orient="records"):
        click.echo(f"  fraction {record['fraction']:.3f}: error {record['error_mean']:.4f} "
                   f"(sd {record['error_std']:.4f})")
    return written


def _protocol_summary(protocol: str, runs: List[SweepRun], out_dir: Path) -> Path:
    frames = []
    for run in runs:
        frame = run.report.aggregate()
        frame.insert(0, protocol, run.value)
        frames.append(frame)
    path = out_dir / f"protocol_{protocol}.csv"
    pd.concat(frames, ignore_index=True).to_csv(path, index=False)
    return path


@click.command('eval')
@config_options
@click.option('--jobs', type=click.IntRange(min=1), help='Parallel sweep cells (default: available cores)')
@click.option('--protocol', type=click.Choice(['fractions', 'alpha', 'lambda', 'size']),
              help='What varies between reports (overrides the config)')
def eval_cmd(config_path, seed, out, set_expressions, jobs, protocol):
    """
    Sweep poison fractions against victims, with or without the defense.

    With --protocol alpha or lambda, generators are trained from the [pgan]
    table for every value of `alphas` / `lambda_primes`; with --protocol size
    the victim's rows per class vary over `sizes` at `size_fraction`.

    Example:
        pgan-poison eval --config configs/eval_mnist_3v5.toml --jobs 4
    """
    with command_errors():
        cfg = load_config(EvalRunConfig, config_path, {
            "experiment.seed": seed,
            "experiment.jobs": jobs,
            "protocol": protocol,
            "out": str(out) if out else None,
        }, set_expressions)
        if jobs is None and "jobs" not in cfg.experiment.model_fields_set:
            cfg.experiment.jobs = max(1, settings.jobs)
        out_dir = output_dir(cfg.out, "eval")

        recorder = ManifestRecorder("eval", cfg.model_dump(mode="json", by_alias=True),
                                    {"experiment": cfg.experiment.seed, "dataset": cfg.dataset.seed})
        if config_path:
            recorder.add_input(config_path)
        for path in dataset_input_files(cfg.dataset):
            recorder.add_input(path)

        generators = []
        if "pgan" in cfg.attacks and cfg.protocol in ("fractions", "size"):
            for path in cfg.generators:
                files = component_paths(path)
                missing = [str(p) for p in files.values() if not p.is_file()]
                if missing:
                    raise ConfigurationError(f"model files not found: {missing}", "generators")
                for file_path in files.values():
                    recorder.add_input(file_path)
                generators.append(load_model(path)[0])

        pool, test = load_datasets(cfg.dataset)
        if cfg.protocol == "fractions":
            runs = _fraction_runs(cfg, generators, pool, test)
        else:
            logger.info(f"Running the {cfg.protocol} protocol over {cfg.protocol_values()}")
            runs = _protocol_runs(cfg, generators, pool, test)

        checks = InvariantChecks()
        written = []
        for run in runs:
            written += _record_run(run, out_dir, pool, recorder, checks)
        if cfg.protocol != "fractions":
            checks.check(f"{cfg.protocol}: one report per value", len(runs) == len(cfg.protocol_values()),
                         f"{len(runs)} reports for {len(cfg.protocol_values())} values")
            summary = _protocol_summary(cfg.protocol, runs, out_dir)
            recorder.add_output(f"protocol_{cfg.protocol}", summary)
            written.append(summary)

        checks.files_exist(written)
        recorder.finish(out_dir, checks.to_list())
    enforce_checks(checks)
