"""
Retry policy for dataset downloads.
"""
import logging
from typing import Optional

import httpx
from tenacity import (
    before_sleep_log,
    retry,
    retry_if_exception,
    stop_after_attempt,
    wait_exponential,
)

from src.config.settings import settings
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

RETRY_STATUS_CODES = frozenset({408, 429, 500, 502, 503, 504})


def is_transient(error: BaseException) -> bool:
    """Connection failures, timeouts and status codes worth another attempt."""
    if isinstance(error, (httpx.ConnectError, httpx.TimeoutException, httpx.RemoteProtocolError)):
        return True
    if isinstance(error, httpx.HTTPStatusError):
        return error.response.status_code in RETRY_STATUS_CODES
    return False


def retry_on_http_error(attempts: Optional[int] = None):
    """
    Decorator for retrying downloads with exponential backoff.

    Retries on:
    - Connection errors and timeouts
    - 408, 429 and 5xx gateway/server statuses

    Other statuses (a missing archive answers 404) fail on the first attempt.
    The last error is re-raised.

    Args:
        attempts: Maximum attempts (defaults to PGAN_MAX_RETRIES)
    """
    return retry(
        stop=stop_after_attempt(attempts or settings.max_retries),
        wait=wait_exponential(multiplier=settings.retry_delay, min=settings.retry_delay, max=30),
        retry=retry_if_exception(is_transient),
        before_sleep=before_sleep_log(logger, logging.WARNING),
        reraise=True,
    )
