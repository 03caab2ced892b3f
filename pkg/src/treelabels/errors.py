"""Shared exception types for the labeling schemes."""


class SchemeError(ValueError):
    """Input outside a scheme's domain, or incompatible labels."""
