"""Deterministic geocast routing laboratory.

Hierarchical geographic addressing, distance-vector and path-based
geocast forwarding, and a link-usage evaluation harness over real-world
network topologies.
"""

from .geoaddr import BoundingBox, GeoAddress, aggregate, encode_bbox, encode_cell, overlaps, to_hex
from .simengine import ALGORITHMS, DestSpec, ForwardingRecord, SimEngine, make_spec
from .topology import Topology, load_edgelist, load_fixture, load_graphml, shortest_paths

__all__ = [
    "ALGORITHMS",
    "BoundingBox",
    "DestSpec",
    "ForwardingRecord",
    "GeoAddress",
    "SimEngine",
    "Topology",
    "aggregate",
    "encode_bbox",
    "encode_cell",
    "load_edgelist",
    "load_fixture",
    "load_graphml",
    "make_spec",
    "overlaps",
    "shortest_paths",
    "to_hex",
]
