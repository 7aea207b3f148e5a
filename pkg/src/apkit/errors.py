"""Exception type shared by every module."""

from __future__ import annotations


class ProfileError(Exception):
    """An error carrying a stable, machine-readable code.

    ``code`` is one of the upper-case identifiers used across the toolchain
    (``LAYER_MISMATCH``, ``UNKNOWN_CLASS``, ``MALFORMED_JSON`` ...). ``report``
    optionally holds the diagnostics gathered before the failure.
    """

    def __init__(self, code: str, message: str, report=None):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message
        self.report = report
