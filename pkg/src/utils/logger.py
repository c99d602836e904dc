# src/utils/logger.py
from __future__ import annotations

"""Logging
-------
Rich console output plus JSON file logs. Context such as the run id, the
experiment and the resolution lives in a ContextVar, so worker threads of a
parallel sweep each carry their own tags.
"""

import contextlib
import contextvars
import json
import logging
import os
import threading
from datetime import datetime, timezone
from logging.handlers import RotatingFileHandler
from typing import Any, Dict, Iterator, Mapping, Optional

import numpy as np
from rich.console import Console
from rich.logging import RichHandler

from src.utils.config import LogLevel, get_settings


__all__ = [
    "get_logger",
    "get_console",
    "set_log_level",
    "set_color",
    "bind",
    "unbind",
    "bound",
    "current_context",
    "log_with_context",
    "attach_file_logger",
    "detach_file_logger",
]


# ------------- Internal state -------------

_config_lock = threading.Lock()
_configured = False
_console: Optional[Console] = None
_context: contextvars.ContextVar[Mapping[str, Any]] = contextvars.ContextVar("splice_bench_log_context", default={})


def current_context() -> Dict[str, Any]:
    return dict(_context.get())


# ------------- JSON Formatter (for file logs) -------------

def _json_default(obj: Any) -> Any:
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist() if obj.size <= 16 else f"<ndarray shape={obj.shape}>"
    return str(obj)


class JsonFormatter(logging.Formatter):
    """One JSON object per line: ts, level, logger, msg and the bound context."""

    default_time_format = "%Y-%m-%dT%H:%M:%S"

    def format(self, record: logging.LogRecord) -> str:
        payload: Dict[str, Any] = {
            "ts": datetime.fromtimestamp(record.created, tz=timezone.utc).strftime(self.default_time_format),
            "level": record.levelname,
            "logger": record.name,
            "msg": record.getMessage(),
        }
        ctx = getattr(record, "context", None)
        if isinstance(ctx, Mapping):
            payload.update(ctx)
        if record.exc_info:
            payload["exc_info"] = self.formatException(record.exc_info)
        payload["thread"] = record.threadName
        return json.dumps(payload, ensure_ascii=False, default=_json_default)


class ContextAdapter(logging.LoggerAdapter):
    """Merges the bound context (read at call time) with adapter-local keys."""

    def process(self, msg: Any, kwargs: Any):
        ctx = {**_context.get(), **(self.extra or {})}
        extra = dict(kwargs.get("extra") or {})
        extra["context"] = ctx
        kwargs["extra"] = extra
        return msg, kwargs


# ------------- Helpers -------------

_LEVEL_MAP = {
    LogLevel.DEBUG: logging.DEBUG,
    LogLevel.INFO: logging.INFO,
    LogLevel.WARNING: logging.WARNING,
    LogLevel.ERROR: logging.ERROR,
    LogLevel.CRITICAL: logging.CRITICAL,
}


def _make_console(color: bool) -> Console:
    return Console(stderr=True, color_system="auto" if color else None, no_color=not color)


def _ensure_configured() -> None:
    global _configured, _console
    if _configured:
        return

    with _config_lock:
        if _configured:
            return

        settings = get_settings()
        level = _LEVEL_MAP.get(settings.LOG_LEVEL, logging.INFO)

        root = logging.getLogger()
        root.setLevel(level)
        for h in list(root.handlers):
            root.removeHandler(h)

        _console = _make_console(settings.COLORIZED_OUTPUT)
        rich_handler = RichHandler(
            console=_console,
            show_time=True,
            show_path=False,
            rich_tracebacks=True,
            tracebacks_suppress=[np],
            markup=False,
        )
        rich_handler.setFormatter(logging.Formatter("%(message)s"))
        rich_handler.setLevel(level)
        root.addHandler(rich_handler)

        if settings.LOG_TO_FILE:
            settings.LOG_FILE.parent.mkdir(parents=True, exist_ok=True)
            file_handler = RotatingFileHandler(
                filename=str(settings.LOG_FILE),
                maxBytes=5 * 1024 * 1024,
                backupCount=5,
                encoding="utf-8",
                delay=True,
            )
            file_handler.setLevel(level)
            file_handler.setFormatter(JsonFormatter())
            root.addHandler(file_handler)

        _configured = True


def get_logger(name: Optional[str] = None) -> logging.LoggerAdapter:
    _ensure_configured()
    return ContextAdapter(logging.getLogger(name if name else "splice-bench"), {})


def get_console() -> Console:
    """The stderr console shared with the log handler (tables, progress)."""
    _ensure_configured()
    assert _console is not None
    return _console


def set_log_level(level: LogLevel | str) -> None:
    _ensure_configured()
    lvl = level if isinstance(level, str) else level.value
    py_level = getattr(logging, lvl.upper(), logging.INFO)
    logging.getLogger().setLevel(py_level)
    for h in logging.getLogger().handlers:
        h.setLevel(py_level)


def set_color(enabled: bool) -> None:
    """Swap the console of the rich handler for a colored or plain one."""
    global _console
    _ensure_configured()
    _console = _make_console(enabled)
    for h in logging.getLogger().handlers:
        if isinstance(h, RichHandler):
            h.console = _console


# ------------- Context -------------

def bind(**kwargs: Any) -> None:
    """
    Bind context for the current thread of execution, e.g.
    bind(run_id="20261018T120000Z", experiment="poisson-circle-log").
    """
    _context.set({**_context.get(), **kwargs})


def unbind(*keys: str) -> None:
    ctx = dict(_context.get())
    for k in keys:
        ctx.pop(k, None)
    _context.set(ctx)


@contextlib.contextmanager
def bound(**kwargs: Any) -> Iterator[None]:
    token = _context.set({**_context.get(), **kwargs})
    try:
        yield
    finally:
        _context.reset(token)


def log_with_context(logger: logging.LoggerAdapter, **kwargs: Any) -> logging.LoggerAdapter:
    """
    Adapter with extra keys for a scoped section:
        log_n = log_with_context(log, n=256)
        log_n.info("solved")
    """
    return ContextAdapter(logger.logger, {**(logger.extra or {}), **kwargs})


# ------------- Per-experiment file logging -------------

def attach_file_logger(path: os.PathLike | str, level: Optional[int] = None) -> logging.Handler:
    """
    Attach a JSON file handler (the `<id>.log` next to the CSV). Only records
    whose bound `experiment` matches the file's stem, or that carry no
    experiment at all, go to it, so parallel experiments keep separate logs.
    """
    _ensure_configured()
    root = logging.getLogger()
    lvl = level if level is not None else root.level
    p = os.fspath(path)
    os.makedirs(os.path.dirname(p) or ".", exist_ok=True)
    label = os.path.splitext(os.path.basename(p))[0]
    fh = RotatingFileHandler(filename=p, maxBytes=5 * 1024 * 1024, backupCount=3, encoding="utf-8", delay=True)
    fh.setLevel(lvl)
    fh.setFormatter(JsonFormatter())
    fh.addFilter(lambda r: getattr(r, "context", {}).get("experiment", label) == label)
    root.addHandler(fh)
    return fh


def detach_file_logger(handler: logging.Handler) -> None:
    logging.getLogger().removeHandler(handler)
    handler.close()
