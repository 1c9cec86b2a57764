"""
Pre-filtering a training set with per-class outlier detectors.
"""
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Mapping, Optional, Tuple

import numpy as np

from src.data.dataset import LabeledDataset
from src.defense.detector import OutlierDetector
from src.utils.errors import ConfigurationError, ShapeError


@dataclass
class ClassFilterCounts:
    """Retained / rejected tallies of one class."""

    retained: int = 0
    rejected: int = 0
    genuine_retained: int = 0
    genuine_rejected: int = 0
    poison_retained: int = 0
    poison_rejected: int = 0

    @property
    def total(self) -> int:
        return self.retained + self.rejected

    @property
    def genuine_rejection_rate(self) -> float:
        n = self.genuine_retained + self.genuine_rejected
        return self.genuine_rejected / n if n else 0.0


@dataclass
class FilterReport:
    """Filtering outcome per class (keyed by label value)."""

    per_class: Dict[int, ClassFilterCounts] = field(default_factory=dict)
    has_ground_truth: bool = False

    def _sum(self, name: str) -> int:
        return sum(getattr(c, name) for c in self.per_class.values())

    @property
    def retained(self) -> int:
        return self._sum("retained")

    @property
    def rejected(self) -> int:
        return self._sum("rejected")

    @property
    def genuine_rejection_rate(self) -> float:
        n = self._sum("genuine_retained") + self._sum("genuine_rejected")
        return self._sum("genuine_rejected") / n if n else 0.0

    @property
    def poison_rejection_rate(self) -> Optional[float]:
        """Fraction of poison rows rejected; None without ground truth or poison."""
        n = self._sum("poison_retained") + self._sum("poison_rejected")
        if not self.has_ground_truth or n == 0:
            return None
        return self._sum("poison_rejected") / n

    def to_dict(self) -> Dict[str, Any]:
        return {
            "retained": self.retained,
            "rejected": self.rejected,
            "genuine_rejection_rate": self.genuine_rejection_rate,
            "poison_rejection_rate": self.poison_rejection_rate,
            "per_class": {
                str(label): {**asdict(c), "genuine_rejection_rate": c.genuine_rejection_rate}
                for label, c in sorted(self.per_class.items())
            },
        }


def filter_dataset(
    dataset: LabeledDataset,
    detectors: Mapping[int, OutlierDetector],
    poison_mask: Optional[np.ndarray] = None,
) -> Tuple[LabeledDataset, FilterReport]:
    """
    Drop every row whose score under its class detector exceeds the threshold.

    Args:
        dataset: Rows to filter
        detectors: Detectors keyed by label value
        poison_mask: Ground truth of poison rows (defaults to the dataset's own mask)

    Returns:
        Tuple[LabeledDataset, FilterReport]: Retained rows and the tallies
    """
    if poison_mask is None:
        poison_mask = dataset.poison_mask
    has_truth = poison_mask is not None
    if has_truth:
        poison_mask = np.asarray(poison_mask, dtype=bool).reshape(-1)
        if poison_mask.shape[0] != dataset.n_rows:
            raise ShapeError("poison mask length differs from the row count")
    else:
        poison_mask = np.zeros(dataset.n_rows, dtype=bool)

    keep = np.zeros(dataset.n_rows, dtype=bool)
    report = FilterReport(has_ground_truth=has_truth)
    for idx in dataset.present_classes():
        value = dataset.value_of_index(int(idx))
        detector = detectors.get(value)
        if detector is None:
            raise ConfigurationError(f"no outlier detector for class {value}", "detectors")
        rows = dataset.rows_of([idx])
        accepted = detector.accepts(dataset.features[rows])
        keep[rows] = accepted
        poison = poison_mask[rows]
        report.per_class[value] = ClassFilterCounts(
            retained=int(accepted.sum()),
            rejected=int((~accepted).sum()),
            genuine_retained=int((accepted & ~poison).sum()),
            genuine_rejected=int((~accepted & ~poison).sum()),
            poison_retained=int((accepted & poison).sum()),
            poison_rejected=int((~accepted & poison).sum()),
        )

    retained = dataset.subset(np.flatnonzero(keep))
    return retained, report
