class ParameterError(ValueError):
    """Raised when model or analysis parameters violate their constraints."""


class DataError(ValueError):
    """Raised for malformed or insufficient input data."""
