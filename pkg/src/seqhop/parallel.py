"""Worker-count control.

``SEQHOP_THREADS`` caps the thread pool used for embarrassingly parallel
work (file loads, grid sampling). Results are assembled in index order,
so the worker count never changes any output.
"""

from __future__ import annotations

import os

from .errors import ConfigError

ENV_VAR = "SEQHOP_THREADS"


def worker_count() -> int:
    raw = os.environ.get(ENV_VAR)
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{ENV_VAR} must be an integer, got {raw!r}")
    if value < 1:
        raise ConfigError(f"{ENV_VAR} must be >= 1, got {value}")
    return value
