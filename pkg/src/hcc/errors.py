"""Shared exception types."""

from __future__ import annotations

from typing import Any


class FalsificationError(RuntimeError):
    """A theorem-level invariant failed on a concrete instance.

    This is never raised for bad input; it means the computed data
    contradicts a property the library is supposed to certify.  The
    offending instance travels along in ``payload`` so reports can
    serialize it.
    """

    def __init__(self, message: str, payload: dict[str, Any] | None = None):
        super().__init__(message)
        self.payload = payload or {}
