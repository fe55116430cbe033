"""Knowledge compilation of SMT(LRA) formulas into T-reduced and T-extended d-DNNF/OBDD."""

from ._tkc import (
    Artifact,
    Error,
    ModeViolation,
    OracleBoundExceeded,
    ParseError,
    Problem,
    TimeoutError,
    UnsupportedQuery,
    load_artifact,
)

__all__ = [
    "Artifact",
    "Error",
    "ModeViolation",
    "OracleBoundExceeded",
    "ParseError",
    "Problem",
    "TimeoutError",
    "UnsupportedQuery",
    "load_artifact",
]
