"""
Victim training, metrics and the poisoning experiment protocols.
"""
from src.eval.config import ExperimentConfig, LabelFlipConfig, VictimConfig
from src.eval.metrics import (
    ConfusionDelta,
    EvaluationResult,
    confusion_delta,
    confusion_matrix,
    distribution_match_accuracy,
    error_specific_rate,
    evaluate,
)
from src.eval.report import AttackReport, CellResult
from src.eval.sweep import CellSpec, poison_sweep, run_cell
from src.eval.victim import train_victim

__all__ = [
    "ExperimentConfig",
    "LabelFlipConfig",
    "VictimConfig",
    "ConfusionDelta",
    "EvaluationResult",
    "confusion_delta",
    "confusion_matrix",
    "distribution_match_accuracy",
    "error_specific_rate",
    "evaluate",
    "AttackReport",
    "CellResult",
    "CellSpec",
    "poison_sweep",
    "run_cell",
    "train_victim",
]
