"""
Post-run invariant checks reported by every command.
"""
import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union

import numpy as np


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


class InvariantChecks:
    """Ordered list of named pass/fail checks."""

    def __init__(self):
        self.results: List[CheckResult] = []

    def check(self, name: str, condition: bool, detail: str = "") -> bool:
        self.results.append(CheckResult(name, bool(condition), detail))
        return bool(condition)

    def files_exist(self, paths: Iterable[Union[str, Path]]) -> bool:
        missing = [str(p) for p in paths if not Path(p).is_file()]
        return self.check("artifacts written", not missing, f"missing: {missing}" if missing else "")

    def finite(self, name: str, values: Any) -> bool:
        arr = np.asarray([np.nan if v is None else v for v in np.ravel(values)], dtype=np.float64)
        bad = int(np.sum(~np.isfinite(arr)))
        return self.check(name, bad == 0, f"{bad} non-finite values" if bad else "")

    def within(self, name: str, value: float, target: float, tolerance: float) -> bool:
        ok = not math.isnan(value) and abs(value - target) <= tolerance
        return self.check(name, ok, f"{value:.4f} vs {target} ± {tolerance}")

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def first_failure(self) -> Optional[CheckResult]:
        return next((r for r in self.results if not r.passed), None)

    def to_list(self) -> List[Dict[str, Any]]:
        return [asdict(r) for r in self.results]
