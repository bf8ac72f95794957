"""Recursive zonal equal-area partitions of the sphere and derived point codes."""

from .geometry import cap_area, cap_colatitude, from_cartesian, sphere_area, to_cartesian
from .partition import PartitionSpec, RegionTree, eq_partition
from .points import CodeSet, eq_points
from .lookup import histogram, lookup, lookup_many

__all__ = [
    "CodeSet",
    "PartitionSpec",
    "RegionTree",
    "cap_area",
    "cap_colatitude",
    "eq_partition",
    "eq_points",
    "from_cartesian",
    "histogram",
    "lookup",
    "lookup_many",
    "sphere_area",
    "to_cartesian",
]
