"""Logging setup for jointparse.

Two channels:
  * human-readable stdlib logging (`configure_logging`), one format for the
    library, the CLI and the scripts;
  * line-delimited JSON metrics records (`MetricsWriter`) for training runs,
    one object per epoch, optionally enriched with process memory.
"""
from __future__ import annotations

import json
import logging
import os
import time
from typing import IO, Any, Dict, Optional

try:
    import psutil  # type: ignore
except Exception:  # pragma: no cover
    psutil = None  # type: ignore

LOG_FORMAT = "[%(asctime)s] %(levelname)s %(name)s %(message)s"
_configured = False


def configure_logging(level: Optional[str] = None) -> None:
    """Install the shared log format once; later calls only adjust the level."""
    global _configured
    level_name = (level or os.getenv("JOINTPARSE_LOG_LEVEL", "INFO")).upper()
    numeric = getattr(logging, level_name, logging.INFO)
    if not _configured:
        logging.basicConfig(level=numeric, format=LOG_FORMAT)
        _configured = True
    logging.getLogger().setLevel(numeric)


def _process_memory() -> Dict[str, Any]:
    if not psutil:
        return {}
    try:
        info = psutil.Process(os.getpid()).memory_info()
        return {"rss_bytes": int(info.rss)}
    except Exception:
        return {}


class MetricsWriter:
    """Append JSON-lines records to a file (or any text stream)."""

    def __init__(self, path: Optional[str] = None, stream: Optional[IO[str]] = None) -> None:
        self.path = path
        self._stream = stream
        self._owns = False
        self._start = time.perf_counter()
        if stream is None and path:
            self._stream = open(path, "a", encoding="utf-8")
            self._owns = True

    def write(self, record: Dict[str, Any]) -> Dict[str, Any]:
        full = dict(record)
        full["elapsed_s"] = round(time.perf_counter() - self._start, 3)
        full.update(_process_memory())
        if self._stream is not None:
            self._stream.write(json.dumps(full, ensure_ascii=False, sort_keys=True) + "\n")
            self._stream.flush()
        return full

    def close(self) -> None:
        if self._owns and self._stream is not None:
            self._stream.close()
            self._stream = None

    def __enter__(self) -> "MetricsWriter":
        return self

    def __exit__(self, exc_type: object, exc: object, tb: object) -> None:
        self.close()


__all__ = ["configure_logging", "MetricsWriter", "LOG_FORMAT"]
