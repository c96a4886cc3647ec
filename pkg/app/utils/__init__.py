"""CSV input and output helpers."""
