"""Command-line entry point and experiment runners."""
