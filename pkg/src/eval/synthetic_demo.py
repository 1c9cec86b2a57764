"""
Two-Gaussian illustration of the attack: one pGAN per α, a poisoned
logistic victim per α, and the artifacts to plot them.
"""
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List

import numpy as np
import pandas as pd

from src.config.schemas import SynthDemoConfig
from src.data.poisoning import append_poison
from src.data.synthetic import sample_synthetic
from src.eval.metrics import distribution_match_accuracy, evaluate
from src.eval.victim import train_victim
from src.nn.network import MlpNetwork
from src.pgan.poison import generate_poison
from src.pgan.trainer import train_pgan
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


@dataclass
class AlphaOutcome:
    """Metrics of one α."""

    alpha: float
    victim_error: float
    victim_fpr: float
    victim_fnr: float
    centroid_distance: float
    match_accuracy: float
    final_d_accuracy: float
    n_poison: int


@dataclass
class SynthDemoResult:
    """Per-α metrics, the clean reference error and every written file."""

    clean_error: float
    outcomes: List[AlphaOutcome] = field(default_factory=list)
    files: Dict[str, Path] = field(default_factory=dict)

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame([asdict(o) for o in self.outcomes])
        frame["clean_error"] = self.clean_error
        return frame


def _tag(alpha: float) -> str:
    return f"{alpha:g}"


def decision_grid(net: MlpNetwork, points: np.ndarray, size: int, margin: float) -> pd.DataFrame:
    """
    Victim probability of the second class on a regular 2-D grid.

    Args:
        net: Two-feature classifier
        points: Rows whose bounding box (plus ``margin``) the grid covers
        size: Grid points per axis
        margin: Padding around the bounding box

    Returns:
        pd.DataFrame: Columns ``x0``, ``x1``, ``p``
    """
    low = points.min(axis=0) - margin
    high = points.max(axis=0) + margin
    xs = np.linspace(low[0], high[0], size)
    ys = np.linspace(low[1], high[1], size)
    gx, gy = np.meshgrid(xs, ys)
    grid = np.column_stack([gx.ravel(), gy.ravel()])
    out = net.predict(grid)
    p = out[:, 0] if out.shape[1] == 1 else out[:, 1]
    return pd.DataFrame({"x0": grid[:, 0], "x1": grid[:, 1], "p": p})


def run_synth_demo(cfg: SynthDemoConfig, out_dir: Path) -> SynthDemoResult:
    """
    Train pGAN on the mixture for every α and attack a small logistic victim.

    The victim learns from ``victim_per_class`` genuine rows per class plus
    ``n_poison`` appended poison rows; no defense is applied.

    Args:
        cfg: Demo configuration
        out_dir: Directory receiving CSV and JSON-lines artifacts

    Returns:
        SynthDemoResult: Metrics and written paths
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    data_seq, victim_seq, test_seq, clean_seq, *alpha_seqs = np.random.SeedSequence(cfg.seed).spawn(
        4 + len(cfg.alphas)
    )
    n_classes = len(cfg.mixture.means)
    pgan_data = sample_synthetic(cfg.mixture.with_counts([cfg.pgan_per_class] * n_classes),
                                 np.random.default_rng(data_seq))
    victim_data = sample_synthetic(cfg.mixture.with_counts([cfg.victim_per_class] * n_classes),
                                   np.random.default_rng(victim_seq))
    test_data = sample_synthetic(cfg.mixture.with_counts([cfg.test_per_class] * n_classes),
                                 np.random.default_rng(test_seq))

    files: Dict[str, Path] = {}
    genuine_path = out_dir / "genuine.csv"
    genuine = pd.DataFrame(victim_data.features, columns=["x0", "x1"])
    genuine["label"] = victim_data.class_values[victim_data.labels]
    genuine.to_csv(genuine_path, index=False)
    files["genuine"] = genuine_path

    clean_net = train_victim(cfg.victim, victim_data, np.random.default_rng(clean_seq))
    clean_error = evaluate(clean_net, test_data).error
    logger.info(f"Clean logistic victim: test error {clean_error:.4f}")

    result = SynthDemoResult(clean_error=clean_error, files=files)
    for alpha, seq in zip(cfg.alphas, alpha_seqs):
        tag = _tag(alpha)
        pgan_seq, cloud_seq, poison_seq, victim_rng_seq, match_seq = seq.spawn(5)
        pgan_cfg = cfg.pgan.model_copy(update={
            "alpha": float(alpha),
            "seed": int(pgan_seq.generate_state(1)[0]),
        })
        model, trace = train_pgan(pgan_data, pgan_cfg)
        files[f"trace_{tag}"] = trace.to_jsonl(out_dir / f"trace_alpha_{tag}.jsonl")

        cloud = generate_poison(model, cfg.cloud_size, np.random.default_rng(cloud_seq))
        cloud_path = out_dir / f"poison_alpha_{tag}.csv"
        cloud.to_frame().rename(columns={"f0": "x0", "f1": "x1"}).to_csv(cloud_path, index=False)
        files[f"poison_{tag}"] = cloud_path

        poison = generate_poison(model, cfg.n_poison, np.random.default_rng(poison_seq))
        poisoned = append_poison(victim_data, poison)
        victim = train_victim(cfg.victim, poisoned, np.random.default_rng(victim_rng_seq))
        grid = decision_grid(victim, np.vstack([victim_data.features, poison.samples]),
                             cfg.grid_size, cfg.grid_margin)
        grid_path = out_dir / f"boundary_alpha_{tag}.csv"
        grid.to_csv(grid_path, index=False)
        files[f"boundary_{tag}"] = grid_path

        evaluation = evaluate(victim, test_data, model.poison_values[0])
        poison_rows = test_data.rows_of(model.poison_classes)
        genuine_poison_class = test_data.features[poison_rows]
        centroid = float(np.linalg.norm(cloud.samples.mean(axis=0) - genuine_poison_class.mean(axis=0)))
        match = distribution_match_accuracy(
            genuine_poison_class, cloud.samples, np.random.default_rng(match_seq),
            cfg.pgan.discriminator, cfg.match_epochs,
        )
        outcome = AlphaOutcome(
            alpha=float(alpha),
            victim_error=evaluation.error,
            victim_fpr=evaluation.fpr,
            victim_fnr=evaluation.fnr,
            centroid_distance=centroid,
            match_accuracy=match,
            final_d_accuracy=trace.last.discriminator_accuracy if trace.last else float("nan"),
            n_poison=len(poison),
        )
        result.outcomes.append(outcome)
        logger.info(
            f"alpha={alpha:g}: victim error {outcome.victim_error:.4f}, "
            f"centroid distance {centroid:.4f}, distribution-match accuracy {match:.3f}"
        )

    metrics_path = out_dir / "metrics.csv"
    result.to_frame().to_csv(metrics_path, index=False)
    files["metrics"] = metrics_path
    return result
