"""Certified Floquet multipliers for periodic linear delay equations."""

from ._core import (
    FloqcertError,
    InvalidArgument,
    MonodromyMatrix,
    DdeSystem,
    __version__,
    bauer_fike,
    bootstrap_homogeneous,
    build_monodromy,
    certify,
    certify_registry,
    collocation_points,
    diff_matrix,
    fundamental_bound,
    little_l_N,
    little_l_N_norm,
    problem_names,
    registry_dde,
    scalar_dde,
    solve_registry,
    tilde_scale,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
