"""Structured error type shared by every module.

Each error carries a short machine-readable ``code``, a human message, and the
offending input so the CLI can emit it as JSON.
"""
from __future__ import annotations

from typing import Any


class ArithDataError(ValueError):
    code = "invalid-input"

    def __init__(self, message: str, *, code: str | None = None, data: Any = None):
        super().__init__(message)
        self.message = message
        if code is not None:
            self.code = code
        self.data = data

    def to_dict(self) -> dict:
        out = {"code": self.code, "message": self.message}
        if self.data is not None:
            out["input"] = self.data
        return out


class FieldDivisionError(ArithDataError, ZeroDivisionError):
    code = "division-by-zero"


class PoleError(ArithDataError):
    code = "pole-at-expansion-point"

    def __init__(self, message: str, pole_order: int, **kw):
        super().__init__(message, **kw)
        self.pole_order = pole_order
