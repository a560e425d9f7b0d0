class DataError(ValueError):
    """Input data is inconsistent or unparsable (mismatched sizes, bad cells, ...)."""
