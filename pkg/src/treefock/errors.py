"""Shared error types."""

from __future__ import annotations


class CapExceeded(RuntimeError):
    """An enumeration, expansion, or tensor product would exceed its cap.

    Raised instead of attempting work whose size estimate is already over
    the configured resource bound; the message names the bound.
    """
