"""
Sweep results: one record per (fraction, generator, run) cell and their
aggregates.
"""
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import pandas as pd

from src.eval.metrics import ConfusionDelta, EvaluationResult, confusion_delta
from src.utils.errors import InputError

CSV_COLUMNS = [
    "fraction", "generator_id", "run_id", "error", "fpr", "fnr", "positive_class",
    "reject_genuine", "reject_poison", "error_specific", "n_train", "n_poison", "n_retained",
]
METRIC_COLUMNS = ["error", "fpr", "fnr", "reject_genuine", "reject_poison", "error_specific"]


@dataclass
class CellResult:
    """Outcome of one sweep cell."""

    fraction: float
    generator_id: int
    run_id: int
    evaluation: EvaluationResult
    n_train: int
    n_poison: int
    n_retained: int
    reject_genuine: Optional[float] = None
    reject_poison: Optional[float] = None
    error_specific: Optional[float] = None

    def row(self) -> Dict[str, Any]:
        return {
            "fraction": self.fraction,
            "generator_id": self.generator_id,
            "run_id": self.run_id,
            "error": self.evaluation.error,
            "fpr": self.evaluation.fpr,
            "fnr": self.evaluation.fnr,
            "positive_class": self.evaluation.positive_class,
            "reject_genuine": self.reject_genuine,
            "reject_poison": self.reject_poison,
            "error_specific": self.error_specific,
            "n_train": self.n_train,
            "n_poison": self.n_poison,
            "n_retained": self.n_retained,
        }


def _clean(value: Any) -> Any:
    if isinstance(value, float) and math.isnan(value):
        return None
    return value


@dataclass
class AttackReport:
    """All cells of a sweep, ordered by fraction, generator and run."""

    cells: List[CellResult] = field(default_factory=list)
    attack: str = "pgan"

    def __len__(self) -> int:
        return len(self.cells)

    @property
    def fractions(self) -> List[float]:
        return sorted({c.fraction for c in self.cells})

    def results(self, fraction: float) -> List[EvaluationResult]:
        return [c.evaluation for c in self.cells if c.fraction == fraction]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([c.row() for c in self.cells], columns=CSV_COLUMNS)

    def aggregate(self) -> pd.DataFrame:
        """Mean and sample standard deviation of every metric per fraction."""
        frame = self.to_frame()
        metrics = frame[["fraction", *METRIC_COLUMNS]].astype(float)
        grouped = metrics.groupby("fraction").agg(["mean", "std"])
        grouped.columns = [f"{name}_{stat}" for name, stat in grouped.columns]
        grouped["n_cells"] = frame.groupby("fraction").size()
        return grouped.reset_index()

    def delta(self, fraction: float, clean_fraction: float = 0.0) -> ConfusionDelta:
        """Confusion change between a poisoned fraction and the clean cells."""
        clean, poisoned = self.results(clean_fraction), self.results(fraction)
        if not clean:
            raise InputError(f"the sweep has no cells at fraction {clean_fraction}")
        return confusion_delta(clean, poisoned)

    def to_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False)
        return path

    def to_dict(self) -> Dict[str, Any]:
        aggregates = [
            {key: _clean(value) for key, value in record.items()}
            for record in self.aggregate().to_dict(orient="records")
        ]
        return {
            "attack": self.attack,
            "n_cells": len(self.cells),
            "aggregates": aggregates,
            "cells": [
                {**{k: _clean(v) for k, v in c.row().items()},
                 "confusion": c.evaluation.confusion.tolist(),
                 "class_values": c.evaluation.class_values}
                for c in self.cells
            ],
        }

    def to_json(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_dict(), indent=2))
        return path
