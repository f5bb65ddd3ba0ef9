"""Iterative RMD solvers sharing one solve contract."""
