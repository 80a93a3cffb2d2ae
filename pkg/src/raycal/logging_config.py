"""Structured logging configuration for raycal commands."""

from __future__ import annotations

import json
import logging
import sys
from datetime import datetime, timezone
from typing import Any, Optional

_EXTRA_FIELDS = ("link_id", "measurement_id", "facet_id", "material", "n_paths")


class JsonFormatter(logging.Formatter):
    """Format log records as JSON lines."""

    def format(self, record: logging.LogRecord) -> str:
        log_entry: dict[str, Any] = {
            "timestamp": datetime.fromtimestamp(record.created, tz=timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }

        for key in _EXTRA_FIELDS:
            val = getattr(record, key, None)
            if val is not None:
                log_entry[key] = val

        if record.exc_info and record.exc_info[1]:
            log_entry["exception"] = self.formatException(record.exc_info)

        return json.dumps(log_entry, default=str)


def setup_logging(level: Optional[str] = None, fmt: Optional[str] = None) -> None:
    """Configure the ``raycal`` logger tree.

    Falls back to RAYCAL_LOG_LEVEL / RAYCAL_LOG_FORMAT when arguments are omitted.
    """
    from raycal.config import Settings

    settings = Settings.from_env()
    level_name = (level or settings.log_level).upper()
    fmt = fmt or settings.log_format

    root = logging.getLogger("raycal")
    root.setLevel(getattr(logging, level_name, logging.INFO))

    handler = logging.StreamHandler(sys.stderr)
    if fmt == "json":
        handler.setFormatter(JsonFormatter())
    else:
        handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s [%(name)s] %(message)s"))

    # Replace our own handler on repeated setup, leave foreign handlers alone
    for existing in list(root.handlers):
        if getattr(existing, "_raycal", False):
            root.removeHandler(existing)
    handler._raycal = True  # type: ignore[attr-defined]
    root.addHandler(handler)
