from .build import BUILDERS, build_kp_model, build_mcp_model, build_tsp_model
from .exact import exact_kp, exact_maxcut, exact_tsp, tsp_enumerate, tsp_held_karp
from .instances import KpInstance, McInstance, TspInstance
from .parsers import (
    emit_kplib,
    emit_maxcut,
    emit_tsplib,
    emit_tsplib_euc2d,
    euc2d_matrix,
    generate_random_maxcut,
    parse_kplib,
    parse_maxcut,
    parse_tsplib,
    triangle_violations,
)

__all__ = [
    "BUILDERS",
    "KpInstance",
    "McInstance",
    "TspInstance",
    "build_kp_model",
    "build_mcp_model",
    "build_tsp_model",
    "emit_kplib",
    "emit_maxcut",
    "emit_tsplib",
    "emit_tsplib_euc2d",
    "euc2d_matrix",
    "exact_kp",
    "exact_maxcut",
    "exact_tsp",
    "generate_random_maxcut",
    "parse_kplib",
    "parse_maxcut",
    "parse_tsplib",
    "triangle_violations",
    "tsp_enumerate",
    "tsp_held_karp",
]
