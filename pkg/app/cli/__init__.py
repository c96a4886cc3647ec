"""Command-line interface: argument parsing and command handlers."""
