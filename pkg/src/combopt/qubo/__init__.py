from ._kernels import NUMBA_AVAILABLE
from .core import Qubo
from .encode import auto_penalty, kp_to_qubo, mcp_to_qubo, slack_coefficients, tsp_to_qubo
from .sampler import beta_schedule, default_backend, sa_sample

__all__ = [
    "NUMBA_AVAILABLE",
    "Qubo",
    "auto_penalty",
    "beta_schedule",
    "default_backend",
    "kp_to_qubo",
    "mcp_to_qubo",
    "sa_sample",
    "slack_coefficients",
    "tsp_to_qubo",
]
