"""Cellular automata on groups: compressing vector fields, constructive
preimages, MEP/GOE certificates, matching-based correspondences, and GF(2)
linear rules."""

from ._edenca import (
    BudgetError,
    DataError,
    FieldRule,
    Group,
    SlotRule,
    TreeField,
    UsageError,
    build_correspondence,
    build_field_rule,
    build_slot_rule,
    build_tree_field,
    convolve,
    expansion_profile,
    make_group,
    moore_sweep,
    muller_goe_confirmed,
    muller_kernel_scan,
)

__all__ = [
    "BudgetError",
    "DataError",
    "FieldRule",
    "Group",
    "SlotRule",
    "TreeField",
    "UsageError",
    "build_correspondence",
    "build_field_rule",
    "build_slot_rule",
    "build_tree_field",
    "convolve",
    "expansion_profile",
    "make_group",
    "moore_sweep",
    "muller_goe_confirmed",
    "muller_kernel_scan",
]

__version__ = "0.1.0"
