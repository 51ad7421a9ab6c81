"""Hardness gadget construction, verification and sweeping."""

from .cubic import Bisection, CubicGraph, NotCubic, all_bisections, k4, k33, min_bisection_brute, parse_cubic, q3
from .gadget import (
    GadgetArrangement, GadgetError, GadgetInstance, GadgetReport, ResourceLimitExceeded, SweepResult,
    UnverifiedGadget, build_gadget, canonical_arrangement, gadget_parameters, gadget_to_permutation,
    paths_to_permutation, sweep_max_width, verify_gadget, vertex_count, width_profile,
)
from .grids import build_composed_grid, build_grid

__all__ = [
    "Bisection", "CubicGraph", "GadgetArrangement", "GadgetError", "GadgetInstance", "GadgetReport",
    "NotCubic", "ResourceLimitExceeded", "SweepResult", "UnverifiedGadget", "all_bisections",
    "build_composed_grid", "build_gadget", "build_grid", "canonical_arrangement", "gadget_parameters",
    "gadget_to_permutation", "k33", "k4", "min_bisection_brute", "parse_cubic", "paths_to_permutation",
    "q3", "sweep_max_width", "verify_gadget", "vertex_count", "width_profile",
]
