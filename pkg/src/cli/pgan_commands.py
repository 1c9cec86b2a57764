"""
CLI commands for training pGAN and generating poison.
"""
from pathlib import Path

import click
import numpy as np

from src.cli.checks import InvariantChecks
from src.cli.common import command_errors, config_options, enforce_checks, output_dir
from src.cli.manifest import ManifestRecorder
from src.config.loader import load_config
from src.config.schemas import SynthDemoConfig, TrainPganRunConfig
from src.data.sources import dataset_input_files, load_datasets
from src.eval.synthetic_demo import run_synth_demo
from src.pgan.model import component_paths, load_model, save_model
from src.pgan.poison import generate_poison
from src.pgan.trainer import train_pgan
from src.utils.errors import FormatError
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


@click.command('synth-demo')
@config_options
def synth_demo(config_path, seed, out, set_expressions):
    """
    Run the two-Gaussian demonstration for every configured alpha.

    Example:
        pgan-poison synth-demo --config configs/synth_demo.toml
    """
    with command_errors():
        cfg = load_config(SynthDemoConfig, config_path,
                          {"seed": seed, "out": str(out) if out else None}, set_expressions)
        out_dir = output_dir(cfg.out, "synth-demo")
        recorder = ManifestRecorder("synth-demo", cfg.model_dump(mode="json", by_alias=True),
                                    {"seed": cfg.seed})
        if config_path:
            recorder.add_input(config_path)

        click.echo(f"Synthetic demo: alphas {cfg.alphas}, {cfg.pgan.epochs} epochs -> {out_dir}")
        result = run_synth_demo(cfg, out_dir)
        for name, path in result.files.items():
            recorder.add_output(name, path)

        checks = InvariantChecks()
        checks.files_exist(result.files.values())
        checks.check("one outcome per alpha", len(result.outcomes) == len(cfg.alphas))
        frame = result.to_frame()
        checks.finite("metrics finite", frame[["victim_error", "centroid_distance", "match_accuracy"]].values)
        if cfg.check_distribution_match:
            for outcome in result.outcomes:
                if outcome.alpha == 1.0:
                    checks.within("alpha=1 poison matches the genuine distribution",
                                  outcome.match_accuracy, 0.5, cfg.match_tolerance)
        recorder.finish(out_dir, checks.to_list())

        click.echo("\n" + "=" * 50)
        click.echo(f"Clean victim error: {result.clean_error:.4f}")
        for o in result.outcomes:
            click.echo(f"alpha={o.alpha:g}: victim error {o.victim_error:.4f}, "
                       f"distribution-match accuracy {o.match_accuracy:.3f}")
    enforce_checks(checks)


@click.command('train-pgan')
@config_options
def train_pgan_cmd(config_path, seed, out, set_expressions):
    """
    Train a poisoning GAN and save its three networks.

    Example:
        pgan-poison train-pgan --config configs/mnist_3v5.toml --seed 1
    """
    with command_errors():
        cfg = load_config(TrainPganRunConfig, config_path,
                          {"pgan.seed": seed, "out": str(out) if out else None}, set_expressions)
        out_dir = output_dir(cfg.out, "train-pgan")
        recorder = ManifestRecorder("train-pgan", cfg.model_dump(mode="json", by_alias=True),
                                    {"pgan": cfg.pgan.seed, "dataset": cfg.dataset.seed})
        if config_path:
            recorder.add_input(config_path)
        for path in dataset_input_files(cfg.dataset):
            recorder.add_input(path)

        train, _ = load_datasets(cfg.dataset)
        click.echo(f"Training pGAN on {train.n_rows} rows for {cfg.pgan.epochs} epochs")
        model, trace = train_pgan(train, cfg.pgan)
        paths = save_model(model, out_dir / cfg.name, cfg.pgan)
        paths["trace"] = trace.to_jsonl(out_dir / f"{cfg.name}.trace.jsonl")
        for name, path in paths.items():
            recorder.add_output(name, path)

        checks = InvariantChecks()
        checks.files_exist(paths.values())
        checks.check("one trace record per epoch", len(trace) == cfg.pgan.epochs,
                     f"{len(trace)} records for {cfg.pgan.epochs} epochs")
        frame = trace.to_frame()
        checks.finite("trace objectives finite", frame.drop(columns=["epoch"]).values)
        checks.finite("generator parameters finite",
                      np.concatenate([w.ravel() for w in model.generator.weights]))
        recorder.finish(out_dir, checks.to_list())

        click.echo("\n" + "=" * 50)
        click.echo("Training completed!")
        click.echo(f"Model: {component_paths(out_dir / cfg.name)['generator']}")
        if trace.last is not None:
            click.echo(f"Final discriminator accuracy: {trace.last.discriminator_accuracy:.3f}")
    enforce_checks(checks)


@click.command('gen-poison')
@click.argument('model_path', type=click.Path(path_type=Path))
@click.option('--n', 'n_samples', type=click.IntRange(min=0), required=True, help='Samples to generate')
@click.option('--out', 'out_path', type=click.Path(dir_okay=False, path_type=Path), required=True,
              help='CSV file to write')
@click.option('--seed', type=int, default=0, show_default=True, help='Noise seed')
@click.option('--denormalize', is_flag=True, help='Map features back to the raw pixel range')
def gen_poison(model_path, n_samples, out_path, seed, denormalize):
    """
    Draw poison samples from a trained generator into a CSV file.

    MODEL_PATH is the model prefix or any of its .gen/.dis/.clf/.json files.

    Example:
        pgan-poison gen-poison runs/train-pgan/pgan --n 25 --out poison.csv
    """
    with command_errors():
        model, _ = load_model(model_path)
        if denormalize and model.normalization is None:
            raise FormatError("the model was trained on unnormalized data, nothing to denormalize")
        batch = generate_poison(model, n_samples, np.random.default_rng(seed))
        frame = batch.to_frame(model.normalization if denormalize else None)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(out_path, index=False)

        recorder = ManifestRecorder("gen-poison", {
            "model_path": str(model_path), "n": n_samples, "seed": seed, "denormalize": denormalize,
        }, {"seed": seed})
        for path in component_paths(model_path).values():
            recorder.add_input(path)
        recorder.add_output("poison", out_path)

        checks = InvariantChecks()
        checks.files_exist([out_path])
        checks.check("row count", len(frame) == n_samples, f"{len(frame)} rows")
        checks.check("column count", frame.shape[1] == model.n_features + 1, f"{frame.shape[1]} columns")
        checks.finite("samples finite", batch.samples)
        if model.generator.output_activation == "tanh" and not denormalize and n_samples:
            checks.check("tanh samples in [-1, 1]", bool(np.all(np.abs(batch.samples) <= 1.0)))
        recorder.finish(out_path.parent, checks.to_list(), path=out_path.with_suffix(".manifest.json"))
        click.echo(f"Wrote {n_samples} samples with labels {model.poison_values} to {out_path}")
    enforce_checks(checks)
