"""
Download of the MNIST and Fashion-MNIST IDX archives.
"""
from pathlib import Path
from typing import Dict, Optional

import httpx

from src.config.settings import settings
from src.utils.retry import retry_on_http_error
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

IDX_FILES = {
    "train_images": "train-images-idx3-ubyte.gz",
    "train_labels": "train-labels-idx1-ubyte.gz",
    "test_images": "t10k-images-idx3-ubyte.gz",
    "test_labels": "t10k-labels-idx1-ubyte.gz",
}


def base_url_for(name: str) -> str:
    """Default download location of a named dataset."""
    if name == "mnist":
        return settings.mnist_base_url
    if name == "fmnist":
        return settings.fmnist_base_url
    raise ValueError(f"no download location for dataset {name!r}")


class IdxDownloader:
    """Fetch IDX archives into a local directory, skipping cached files."""

    def __init__(self, name: str, target_dir: Optional[Path] = None, base_url: Optional[str] = None):
        """
        Initialize downloader.

        Args:
            name: Dataset name (``mnist`` or ``fmnist``)
            target_dir: Destination (defaults to ``PGAN_DATA_DIR/<name>``)
            base_url: Override for the download location
        """
        self.name = name
        self.base_url = (base_url or base_url_for(name)).rstrip("/")
        self.target_dir = Path(target_dir or settings.dataset_dir(name))
        self.client = httpx.Client(timeout=settings.download_timeout, follow_redirects=True)

    @retry_on_http_error()
    def download_file(self, filename: str) -> Path:
        """
        Download one file unless it is already present.

        Args:
            filename: Archive file name

        Returns:
            Path: Local path
        """
        local_file = self.target_dir / filename
        if local_file.exists():
            logger.info(f"Using cached {local_file}")
            return local_file

        url = f"{self.base_url}/{filename}"
        logger.info(f"Downloading {url}")
        response = self.client.get(url)
        response.raise_for_status()
        self.target_dir.mkdir(parents=True, exist_ok=True)
        local_file.write_bytes(response.content)
        logger.info(f"Downloaded {len(response.content)} bytes to {local_file}")
        return local_file

    def fetch_all(self) -> Dict[str, Path]:
        """Download the four archives of the dataset."""
        try:
            return {key: self.download_file(filename) for key, filename in IDX_FILES.items()}
        finally:
            self.close()

    def close(self):
        """Close HTTP client."""
        self.client.close()
