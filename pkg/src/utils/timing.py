# src/utils/timing.py
from __future__ import annotations

import functools
import time
from dataclasses import dataclass
from typing import Callable, Optional, ParamSpec, TypeVar

from src.utils.logger import get_logger

P = ParamSpec("P")
T = TypeVar("T")


def now_ms() -> float:
    """Monotonic time in milliseconds."""
    return time.monotonic_ns() / 1_000_000


# ---------------- Stopwatch ----------------

@dataclass
class Stopwatch:
    """Simple stopwatch usable as a context manager."""
    start_ms: Optional[float] = None
    stop_ms: Optional[float] = None

    def start(self) -> "Stopwatch":
        self.start_ms = now_ms()
        self.stop_ms = None
        return self

    def stop(self) -> float:
        self.stop_ms = now_ms()
        return self.elapsed_ms()

    def elapsed_ms(self) -> float:
        if self.start_ms is None:
            return 0.0
        end = self.stop_ms if self.stop_ms is not None else now_ms()
        return max(0.0, end - self.start_ms)

    def __enter__(self) -> "Stopwatch":
        return self.start()

    def __exit__(self, exc_type, exc, tb) -> None:
        self.stop()


def format_elapsed(ms: float) -> str:
    return f"{ms:.0f} ms" if ms < 1000 else f"{ms / 1000:.3f} s"


# ---------------- measure decorator ----------------

def measure(label: str = "", level: str = "DEBUG") -> Callable[[Callable[P, T]], Callable[P, T]]:
    """
    Decorator to log the execution time of a function.
    Example:
        @measure("reconstruct")
        def reconstruct_sdf(...): ...
    """
    level = level.upper()

    def decorator(func: Callable[P, T]) -> Callable[P, T]:
        @functools.wraps(func)
        def wrapper(*args: P.args, **kwargs: P.kwargs) -> T:
            log = get_logger(func.__module__)
            log_fn = getattr(log, level.lower(), log.info)
            with Stopwatch() as sw:
                try:
                    return func(*args, **kwargs)
                finally:
                    log_fn(f"{label or func.__name__} took {format_elapsed(sw.elapsed_ms())}")
        return wrapper
    return decorator
