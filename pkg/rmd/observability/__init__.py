"""Metrics emission for solver runs."""
