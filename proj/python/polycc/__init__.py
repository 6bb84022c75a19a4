"""Exact convex consensus simulator and verifier.

Rationals travel as strings ("p/q"); traces and verdicts as JSON text.
"""

import json

from ._polycc import (
    ConfigError,
    TraceFormatError,
    compute_t_end,
    convex_hull,
    hausdorff_distance,
    intersect,
    linear_combination,
    optimize_trace,
    run_spec,
    safe_area,
    verify_trace,
)

__all__ = [
    "ConfigError",
    "TraceFormatError",
    "compute_t_end",
    "convex_hull",
    "hausdorff_distance",
    "intersect",
    "linear_combination",
    "optimize_trace",
    "run",
    "run_spec",
    "safe_area",
    "verify_trace",
]


def run(spec, seed=0):
    """Run one seed of an experiment spec (dict or JSON text).

    Returns (trace_jsonl, verdict_dict, ok).
    """
    text = spec if isinstance(spec, str) else json.dumps(spec)
    trace, verdict, ok = run_spec(text, seed)
    return trace, json.loads(verdict), ok
