"""Occupational network and social mobility toolkit."""

from ._stratmob import (
    __version__,
    adjusted_rand_index,
    generate_synth,
    geodesics,
    layout,
    louvain,
    ols,
    project,
    run_pipeline,
    run_stage,
)

__all__ = [
    "__version__",
    "adjusted_rand_index",
    "generate_synth",
    "geodesics",
    "layout",
    "louvain",
    "ols",
    "project",
    "run_pipeline",
    "run_stage",
]
