"""
Run manifests: what a command ran with and what it wrote.
"""
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, Field

from src.utils.io import sha256_file, write_json

MANIFEST_NAME = "manifest.json"


class RunManifest(BaseModel):
    """Everything needed to reproduce one command invocation."""

    command: str
    config: Dict[str, Any]
    seeds: Dict[str, int] = Field(default_factory=dict)
    inputs: Dict[str, str] = Field(default_factory=dict)
    outputs: Dict[str, str] = Field(default_factory=dict)
    checks: List[Dict[str, Any]] = Field(default_factory=list)
    started_at: str = ""
    duration_seconds: float = 0.0

    def write(self, out_dir: Union[str, Path]) -> Path:
        """Write ``manifest.json`` into an output directory."""
        return self.write_to(Path(out_dir) / MANIFEST_NAME)

    def write_to(self, path: Union[str, Path]) -> Path:
        return write_json(self.model_dump(mode="json"), path)


class ManifestRecorder:
    """Collects inputs and outputs while a command runs."""

    def __init__(self, command: str, config: Dict[str, Any], seeds: Optional[Dict[str, int]] = None):
        self.manifest = RunManifest(
            command=command,
            config=config,
            seeds=seeds or {},
            started_at=datetime.now(timezone.utc).isoformat(),
        )
        self._start = time.monotonic()

    def add_input(self, path: Union[str, Path]) -> None:
        """Record an input file with its SHA-256 digest."""
        self.manifest.inputs[str(path)] = sha256_file(path)

    def add_output(self, name: str, path: Union[str, Path]) -> None:
        self.manifest.outputs[name] = str(path)

    def finish(self, out_dir: Union[str, Path], checks: Optional[List[Dict[str, Any]]] = None,
               path: Optional[Union[str, Path]] = None) -> Path:
        """Stamp the duration and write the manifest (to ``path`` when given)."""
        self.manifest.duration_seconds = time.monotonic() - self._start
        if checks is not None:
            self.manifest.checks = checks
        if path is not None:
            return self.manifest.write_to(path)
        return self.manifest.write(out_dir)
