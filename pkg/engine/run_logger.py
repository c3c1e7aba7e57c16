"""
engine/run_logger.py — Component-scoped logging for classification runs.
Uses loguru; sinks are configured once per process from Settings.
"""

from __future__ import annotations

import sys
import time
from contextlib import contextmanager
from typing import TYPE_CHECKING, Iterator, Optional

from loguru import logger

from config import LOG_DIR, Settings, get_settings

if TYPE_CHECKING:
    from models import Verdict

_CONSOLE_FORMAT = (
    "<green>{time:HH:mm:ss}</green> | "
    "<level>{level:<8}</level> | "
    "<cyan>{extra[component]:<18}</cyan> | "
    "{message}"
)
_FILE_FORMAT = "{time:YYYY-MM-DDTHH:mm:ss.SSS} | {level} | {extra[component]} | {message}"


class RunLogger:
    """Logger bound to one engine component (decider, search, CLI)."""

    _configured: bool = False

    def __init__(self, component: str, settings: Optional[Settings] = None) -> None:
        self.component = component
        if not RunLogger._configured:
            RunLogger.configure(settings or get_settings())
        self._bound = logger.bind(component=component)

    @classmethod
    def configure(cls, settings: Settings) -> None:
        """Replace the loguru sinks: stderr at the configured level, plus a rotating debug file."""
        logger.remove()
        logger.add(sys.stderr, format=_CONSOLE_FORMAT, level=settings.log_level, colorize=True)
        if settings.log_to_file:
            logger.add(
                str(LOG_DIR / "runs_{time:YYYY-MM-DD}.log"),
                format=_FILE_FORMAT,
                level="DEBUG",
                rotation="10 MB",
                retention="7 days",
                encoding="utf-8",
            )
        cls._configured = True

    def debug(self, message: str) -> None:
        self._bound.debug(message)

    def info(self, message: str) -> None:
        self._bound.info(message)

    def warning(self, message: str) -> None:
        self._bound.warning(message)

    def error(self, message: str) -> None:
        self._bound.error(message)

    def action(self, action: str, detail: str = "") -> None:
        self._bound.info(f"ACTION: {action} | {detail}" if detail else f"ACTION: {action}")

    def decision(self, decision: str, reason: str = "") -> None:
        self._bound.info(f"DECISION: {decision} | {reason}" if reason else f"DECISION: {decision}")

    def verdict(self, verdict: "Verdict") -> None:
        """One line per verdict: outcome, deciding clause and any divergence."""
        outcome = "realizable" if verdict.realizable else "not realizable"
        suffix = f" | divergence {verdict.divergence}" if verdict.divergence else ""
        self.decision(f"{verdict.monodromy} {outcome}", f"{verdict.certificate.clause}{suffix}")

    @contextmanager
    def step_start(self, step: str) -> Iterator[None]:
        """Time a step; failures are logged with the elapsed time and re-raised."""
        start = time.perf_counter()
        self._bound.debug(f"STEP START: {step}")
        try:
            yield
        except Exception as exc:
            self._bound.error(f"STEP FAILED: {step} ({time.perf_counter() - start:.2f}s) | {exc}")
            raise
        self._bound.debug(f"STEP DONE: {step} ({time.perf_counter() - start:.2f}s)")
