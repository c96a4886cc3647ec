"""Event types, result values and configuration schemas."""
