"""Engine-wide error type carrying a machine-readable code."""

from __future__ import annotations

from typing import Any


class MetaforgeError(Exception):
    """Raised by engine operations; `code` is one of the documented codes."""

    def __init__(self, code: str, message: str, *, path: str | None = None,
                 issues: list[Any] | None = None):
        super().__init__(message)
        self.code = code
        self.message = message
        self.path = path
        self.issues = issues or []

    def __repr__(self) -> str:  # pragma: no cover
        return f"MetaforgeError({self.code!r}, {self.message!r}, path={self.path!r})"


class GatewayError(MetaforgeError):
    """Authority-gateway failures (upstream, identifier, and source errors)."""
