"""ReLU matrix decomposition solvers and theory checks."""
