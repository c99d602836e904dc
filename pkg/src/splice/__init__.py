# src/splice/__init__.py
from src.splice.extrapolation import (
    JumpExtrapolation,
    build_extrapolation,
    canonical_extrapolation,
    jump_operator_apply,
    jumps_of_extrapolation,
)
from src.splice.jumps import JumpSet, required_band_width
from src.splice.operators import (
    inner_splice,
    one_sided_jump,
    outer_splice,
    splice_correction,
    spliced_apply,
    spliced_field,
    spliced_time_derivative,
)
from src.splice.traces import extract_jumps, one_sided_normal_traces, side_trace

__all__ = [
    "JumpSet",
    "JumpExtrapolation",
    "required_band_width",
    "build_extrapolation",
    "canonical_extrapolation",
    "jump_operator_apply",
    "jumps_of_extrapolation",
    "splice_correction",
    "spliced_apply",
    "spliced_field",
    "spliced_time_derivative",
    "inner_splice",
    "outer_splice",
    "one_sided_jump",
    "side_trace",
    "one_sided_normal_traces",
    "extract_jumps",
]
