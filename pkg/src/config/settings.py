"""
Configuration settings using Pydantic.
"""
import os
from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    # Dataset and output locations
    data_dir: Path = Field(default=Path("data"))
    output_dir: Path = Field(default=Path("runs"))

    # Dataset download
    mnist_base_url: str = Field(default="https://ossci-datasets.s3.amazonaws.com/mnist")
    fmnist_base_url: str = Field(
        default="http://fashion-mnist.s3-website.eu-central-1.amazonaws.com"
    )
    download_timeout: float = Field(default=120.0)
    max_retries: int = Field(default=3)
    retry_delay: int = Field(default=1)

    # Sweep parallelism
    jobs: int = Field(default_factory=lambda: os.cpu_count() or 1)

    # Logging
    log_level: str = Field(default="INFO")

    def dataset_dir(self, name: str) -> Path:
        """Get the directory holding the raw files of a named dataset."""
        return self.data_dir / name

    model_config = {
        "env_prefix": "PGAN_",
        "env_file": ".env",
        "env_file_encoding": "utf-8",
        "case_sensitive": False,
    }


# Global settings instance
settings = Settings()
