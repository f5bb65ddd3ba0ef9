"""Executable oracles for the stationarity and bound results."""
