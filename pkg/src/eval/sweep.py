"""
Poison-fraction sweeps: every (fraction, generator, run) cell is an
independent split, optional filtering, poisoning, victim training and
evaluation.
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.baselines.label_flip import label_flip_nearest
from src.data.dataset import LabeledDataset
from src.data.poisoning import poison_count, substitute_poison
from src.data.splits import split
from src.defense.detector import fit_detectors
from src.defense.filtering import filter_dataset
from src.eval.config import ExperimentConfig
from src.eval.metrics import error_specific_rate, evaluate
from src.eval.report import AttackReport, CellResult
from src.eval.victim import train_victim
from src.pgan.model import PganModel
from src.pgan.poison import generate_poison
from src.utils.errors import ConfigurationError, SweepCellError
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class CellSpec:
    """Coordinates of one sweep cell."""

    fraction_index: int
    fraction: float
    generator_id: int
    run_id: int


def cell_seed(seed: int, cell: CellSpec) -> np.random.SeedSequence:
    """Seed of a cell, derived from the sweep seed and the cell coordinates only."""
    return np.random.SeedSequence([seed, cell.fraction_index, cell.generator_id, cell.run_id])


def _poison(exp: ExperimentConfig, train: LabeledDataset, generator: Optional[PganModel],
            fraction: float, rng: np.random.Generator) -> Tuple[LabeledDataset, int]:
    n = poison_count(fraction, train.n_rows)
    if exp.attack == "none" or n == 0:
        return train, 0
    if exp.attack == "label_flip":
        flip = exp.label_flip
        poisoned, plan = label_flip_nearest(train, flip.source_class, flip.target_class, n)
        return poisoned, plan.n_flips
    # enough rows of every poison class whatever the substitution draws
    batch = generate_poison(generator, n * len(generator.poison_classes), rng)
    return substitute_poison(train, batch, fraction, rng), n


def _positive_class(exp: ExperimentConfig, generator: Optional[PganModel]) -> Optional[int]:
    """Label value FPR/FNR count against: the configured one, else the first poison class or the flip source."""
    if exp.positive_class is not None:
        return exp.positive_class
    if exp.attack == "pgan" and generator is not None:
        return generator.poison_values[0]
    if exp.attack == "label_flip" and exp.label_flip is not None:
        return exp.label_flip.source_class
    return None


def run_cell(
    exp: ExperimentConfig,
    pool: LabeledDataset,
    test: Optional[LabeledDataset],
    generator: Optional[PganModel],
    cell: CellSpec,
) -> CellResult:
    """
    Run one sweep cell.

    Args:
        exp: Sweep configuration
        pool: Rows to split into victim-training and detector-training sets
        test: Held-out test set (drawn from the pool when None)
        generator: Trained model for the pGAN attack
        cell: Cell coordinates

    Returns:
        CellResult: Metrics of the cell
    """
    split_seq, detector_seq, poison_seq, victim_seq = cell_seed(exp.seed, cell).spawn(4)
    split_spec = exp.split.model_copy(update={"seed": int(split_seq.generate_state(1)[0])})
    victim_train, detector_train, test_set = split(pool, split_spec, held_out=test)

    poisoned, n_poison = _poison(exp, victim_train, generator, cell.fraction,
                                 np.random.default_rng(poison_seq))

    reject_genuine = reject_poison = None
    retained = poisoned
    if exp.defense.enabled:
        detectors = fit_detectors(detector_train, exp.defense, np.random.default_rng(detector_seq))
        retained, report = filter_dataset(poisoned, detectors)
        reject_genuine = report.genuine_rejection_rate
        reject_poison = report.poison_rejection_rate

    net = train_victim(exp.victim, retained, np.random.default_rng(victim_seq))
    evaluation = evaluate(net, test_set, _positive_class(exp, generator))
    specific = None
    if exp.error_specific is not None:
        specific = error_specific_rate(net, test_set, *exp.error_specific)

    return CellResult(
        fraction=cell.fraction,
        generator_id=cell.generator_id,
        run_id=cell.run_id,
        evaluation=evaluation,
        n_train=poisoned.n_rows,
        n_poison=n_poison,
        n_retained=retained.n_rows,
        reject_genuine=reject_genuine,
        reject_poison=reject_poison,
        error_specific=specific,
    )


def sweep_cells(exp: ExperimentConfig, n_generators: int) -> List[CellSpec]:
    return [
        CellSpec(f_idx, fraction, gen_id, run_id)
        for f_idx, fraction in enumerate(exp.fractions)
        for gen_id in range(n_generators)
        for run_id in range(exp.n_runs)
    ]


def poison_sweep(
    exp: ExperimentConfig,
    generators: Sequence[PganModel],
    pool: LabeledDataset,
    test: Optional[LabeledDataset] = None,
) -> AttackReport:
    """
    Evaluate an attack over every fraction, generator and run.

    Cells run in a process pool when ``exp.jobs > 1``; a failing cell is
    re-raised as ``SweepCellError`` carrying its coordinates.

    Args:
        exp: Sweep configuration
        generators: Trained models (used by the pGAN attack)
        pool: Rows to split per cell
        test: Fixed test set, or None to split one off the pool

    Returns:
        AttackReport: |fractions| x generators x runs cells
    """
    if exp.attack == "pgan":
        if not generators:
            raise ConfigurationError("the pGAN attack needs at least one trained generator", "generators")
        for gen in generators:
            if gen.n_features != pool.n_features:
                raise ConfigurationError(
                    f"generator emits {gen.n_features} features, data has {pool.n_features}", "generators"
                )
        n_generators = len(generators)
        if n_generators != exp.n_generators:
            logger.warning(f"n_generators is {exp.n_generators} but {n_generators} generators were given")
    else:
        if exp.attack == "label_flip" and exp.label_flip is None:
            raise ConfigurationError("the label_flip attack needs source and target classes", "label_flip")
        n_generators = exp.n_generators

    def generator_of(cell: CellSpec) -> Optional[PganModel]:
        return generators[cell.generator_id] if exp.attack == "pgan" else None

    cells = sweep_cells(exp, n_generators)
    logger.info(
        f"Sweep: attack={exp.attack}, {len(exp.fractions)} fractions x {n_generators} generators "
        f"x {exp.n_runs} runs = {len(cells)} cells, jobs={exp.jobs}"
    )

    results: List[CellResult] = []
    if exp.jobs > 1:
        with ProcessPoolExecutor(max_workers=exp.jobs) as pool_executor:
            futures = [
                pool_executor.submit(run_cell, exp, pool, test, generator_of(cell), cell)
                for cell in cells
            ]
            for cell, future in zip(cells, futures):
                try:
                    results.append(future.result())
                except Exception as e:
                    raise SweepCellError(cell.fraction, cell.generator_id, cell.run_id, e) from e
    else:
        for cell in cells:
            try:
                results.append(run_cell(exp, pool, test, generator_of(cell), cell))
            except Exception as e:
                raise SweepCellError(cell.fraction, cell.generator_id, cell.run_id, e) from e
            logger.debug(f"Cell {cell}: error {results[-1].evaluation.error:.4f}")

    report = AttackReport(results, exp.attack)
    for record in report.aggregate().to_dict(orient="records"):
        logger.info(f"fraction {record['fraction']:.3f}: mean error {record['error_mean']:.4f}")
    return report
