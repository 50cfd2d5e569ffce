"""Shared exception hierarchy for data and pipeline failures."""


class AuditError(Exception):
    """Base class for all data, fitting, and scenario errors."""
