"""Shared limits, sentinels and condition names."""

from __future__ import annotations

from typing import Dict, Tuple

# Marks a source point outside the domain in PartialPerm.img
UNDEFINED = -1

# Points must fit into one 64-bit bitset
MAX_POINTS = 64

# Soft cap on vertex count for enumeration and condition-U checks
DEFAULT_LIMIT = 8

# Rough per-element footprint of an enumerated PartialPerm (object + tuple + set slot)
BYTES_PER_ELEMENT = 240

# Internal generation of isomorphism classes stops here
MAX_GENERATE = 7

GRAPH_FORMATS: Tuple[str, ...] = ("graph6", "edgelist", "json")

# Condition names as they appear in reports, in report order
FULL = "full"
CONDITION_U = "condition_U"
RANK2_DCLASSES = "rank2_dclasses"
RANK2_HCLASSES = "rank2_hclasses_nontrivial"
INVERSE = "inverse"
BOOLEAN = "boolean"
FUNDAMENTAL = "fundamental"
ZERO_MINIMAL_JOINS = "zero_minimal_joins"
HEIGHT2_DCLASSES = "height2_dclasses"
HEIGHT2_HCLASSES = "height2_hclasses_nontrivial"

# Human-readable descriptions for summaries
CONDITION_DESCRIPTIONS: Dict[str, str] = {
    FULL: "contains every partial identity",
    CONDITION_U: "joins of compatible rank-1 sets are members",
    RANK2_DCLASSES: "rank-2 elements form one or two D-classes",
    RANK2_HCLASSES: "rank-2 H-classes are nontrivial",
    INVERSE: "table is an inverse monoid",
    BOOLEAN: "idempotents form a Boolean algebra",
    FUNDAMENTAL: "Munn representation is faithful",
    ZERO_MINIMAL_JOINS: "compatible 0-minimal sets with pairwise joins have a join",
    HEIGHT2_DCLASSES: "height-2 elements form one or two D-classes",
    HEIGHT2_HCLASSES: "height-2 H-classes are nontrivial",
}
