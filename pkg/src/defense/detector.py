"""
Per-class k-nearest-neighbour outlier detectors.

A detector keeps ``s`` reference points sampled from the trusted rows of
its class. The outlierness of a point is the mean Euclidean distance to its
``k`` nearest reference points, and the threshold is the nearest-rank
``percentile`` of the scores of all trusted rows of the class.
"""
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
from pydantic import BaseModel, Field, model_validator

from src.data.dataset import LabeledDataset
from src.utils.errors import CapacityError, FormatError, InputError, ShapeError
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

SCORE_CHUNK_ROWS = 512


class DefenseConfig(BaseModel):
    """Outlier-detector parameters."""

    enabled: bool = True
    k: int = Field(default=5, ge=1)
    s: int = Field(default=20, ge=1)
    percentile: float = Field(default=0.95, gt=0.0, lt=1.0)

    @model_validator(mode="after")
    def _k_within_s(self) -> "DefenseConfig":
        if self.k > self.s:
            raise ValueError(f"k ({self.k}) must not exceed s ({self.s})")
        return self


def knn_scores(points: np.ndarray, reference: np.ndarray, k: int,
               chunk_rows: int = SCORE_CHUNK_ROWS) -> np.ndarray:
    """
    Mean distance from each point to its k nearest reference points.

    Args:
        points: Rows to score (n x d)
        reference: Reference rows (s x d)
        k: Neighbour count
        chunk_rows: Rows scored per block

    Returns:
        np.ndarray: n scores
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim == 1:
        points = points.reshape(1, -1)
    if points.ndim != 2 or points.shape[1] != reference.shape[1]:
        raise ShapeError(
            f"points of shape {points.shape} do not match reference dimension {reference.shape[1]}"
        )
    scores = np.empty(points.shape[0])
    for start in range(0, points.shape[0], chunk_rows):
        block = points[start:start + chunk_rows]
        diff = block[:, None, :] - reference[None, :, :]
        dist = np.sqrt(np.sum(diff * diff, axis=-1))
        scores[start:start + chunk_rows] = np.sort(dist, axis=1)[:, :k].mean(axis=1)
    return scores


def nearest_rank(scores: np.ndarray, percentile: float) -> float:
    """Empirical percentile without interpolation: the ceil(p*n)-th smallest score."""
    if scores.size == 0:
        raise InputError("no scores to take a percentile of")
    rank = max(1, math.ceil(percentile * scores.size - 1e-9))
    return float(np.sort(scores)[rank - 1])


@dataclass(frozen=True, eq=False)
class OutlierDetector:
    """Immutable detector for one class (``class_label`` is a source label value)."""

    class_label: int
    reference_points: np.ndarray
    k: int
    threshold: float
    percentile: float

    def __post_init__(self):
        ref = np.array(self.reference_points, dtype=np.float64)
        if ref.ndim != 2 or ref.shape[0] == 0:
            raise ShapeError(f"reference points must be a non-empty matrix, got shape {ref.shape}")
        if not 1 <= self.k <= ref.shape[0]:
            raise InputError(f"k must lie in [1, {ref.shape[0]}], got {self.k}")
        if self.threshold < 0:
            raise InputError(f"threshold must be non-negative, got {self.threshold}")
        ref.setflags(write=False)
        object.__setattr__(self, "reference_points", ref)

    @property
    def s(self) -> int:
        return int(self.reference_points.shape[0])

    @property
    def dim(self) -> int:
        return int(self.reference_points.shape[1])

    def score(self, point: Any) -> float:
        """Outlierness of a single point."""
        point = np.asarray(point, dtype=np.float64).reshape(-1)
        if point.shape[0] != self.dim:
            raise ShapeError(f"point has {point.shape[0]} features, detector expects {self.dim}")
        return float(knn_scores(point.reshape(1, -1), self.reference_points, self.k)[0])

    def score_batch(self, points: Any) -> np.ndarray:
        return knn_scores(points, self.reference_points, self.k)

    def accepts(self, points: Any) -> np.ndarray:
        """Retention decision per row: score <= threshold."""
        return self.score_batch(points) <= self.threshold

    def to_dict(self) -> Dict[str, Any]:
        return {
            "class_label": int(self.class_label),
            "k": self.k,
            "s": self.s,
            "percentile": self.percentile,
            "threshold": self.threshold,
            "reference_points": self.reference_points.tolist(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "OutlierDetector":
        try:
            detector = cls(
                class_label=int(data["class_label"]),
                reference_points=np.asarray(data["reference_points"], dtype=np.float64),
                k=int(data["k"]),
                threshold=float(data["threshold"]),
                percentile=float(data["percentile"]),
            )
        except KeyError as e:
            raise FormatError(f"detector record lacks field {e}") from e
        if "s" in data and int(data["s"]) != detector.s:
            raise FormatError(f"detector record says s={data['s']} but holds {detector.s} points")
        return detector


def fit_detector(
    trusted: LabeledDataset,
    class_label: int,
    k: int,
    s: int,
    percentile: float,
    rng: np.random.Generator,
) -> OutlierDetector:
    """
    Fit the detector of one class on trusted data.

    Args:
        trusted: Trusted (clean) rows
        class_label: Source label value of the class
        k: Neighbour count
        s: Reference set size
        percentile: Retention quantile in (0, 1)
        rng: Generator for sampling the reference set

    Returns:
        OutlierDetector: Fitted detector
    """
    if not 0.0 < percentile < 1.0:
        raise InputError(f"percentile must lie in (0, 1), got {percentile}")
    if not 1 <= k <= s:
        raise InputError(f"k must lie in [1, s={s}], got {k}")
    rows = trusted.rows_of([trusted.index_of_value(class_label)])
    if rows.size < s:
        raise CapacityError(f"class {class_label}: {s} reference points requested, {rows.size} trusted rows")

    points = trusted.features[rows]
    reference = points[rng.choice(rows.size, size=s, replace=False)]
    threshold = nearest_rank(knn_scores(points, reference, k), percentile)
    logger.debug(f"Detector for class {class_label}: threshold {threshold:.4f} over {rows.size} rows")
    return OutlierDetector(class_label, reference, k, threshold, percentile)


def fit_detectors(trusted: LabeledDataset, cfg: DefenseConfig,
                  rng: np.random.Generator) -> Dict[int, OutlierDetector]:
    """One detector per class present in the trusted data, keyed by label value."""
    detectors = {}
    for idx in trusted.present_classes():
        value = trusted.value_of_index(int(idx))
        detectors[value] = fit_detector(trusted, value, cfg.k, cfg.s, cfg.percentile, rng)
    return detectors


def save_detectors(detectors: Dict[int, OutlierDetector], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    records = [detectors[label].to_dict() for label in sorted(detectors)]
    path.write_text(json.dumps({"detectors": records}))
    return path


def load_detectors(path: Union[str, Path]) -> Dict[int, OutlierDetector]:
    try:
        payload = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise FormatError(f"{path} is not valid JSON: {e}") from e
    records: Optional[list] = payload.get("detectors") if isinstance(payload, dict) else None
    if records is None:
        raise FormatError(f"{path} holds no detector list")
    detectors = [OutlierDetector.from_dict(r) for r in records]
    return {d.class_label: d for d in detectors}
