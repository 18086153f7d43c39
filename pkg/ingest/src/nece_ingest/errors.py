"""Adapter-side error type, on the shared nece error hierarchy."""

from nece.errors import NeceError


class UpstreamError(NeceError):
    """An annotation stage could not produce output for a story."""

    code = "E_UPSTREAM"
