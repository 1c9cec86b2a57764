"""
Baseline poisoning attacks.
"""
from src.baselines.label_flip import FlipPlan, label_flip_nearest

__all__ = ["FlipPlan", "label_flip_nearest"]
