"""Global work cap for long enumerations, read from ``SUBSTRATA_MAX_STEPS``."""

from __future__ import annotations

import os

DEFAULT_MAX_STEPS = 10 ** 7


class BudgetExceeded(RuntimeError):
    pass


def max_steps() -> int:
    raw = os.environ.get("SUBSTRATA_MAX_STEPS")
    if not raw:
        return DEFAULT_MAX_STEPS
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"SUBSTRATA_MAX_STEPS must be an integer, got {raw!r}")
    if value < 1:
        raise ValueError("SUBSTRATA_MAX_STEPS must be positive")
    return value


def check(size: int, what: str) -> None:
    """Refuse to build an object of ``size`` elementary steps beyond the cap."""
    cap = max_steps()
    if size > cap:
        raise BudgetExceeded(f"{what} needs {size} steps, above the cap of {cap} (SUBSTRATA_MAX_STEPS)")
