"""Deterministic synchronous packet-forwarding simulator.

A simulation inserts one packet at the source router and runs rounds in
which every router holding a copy applies its forwarding function once
per held copy.  Every emission is one directed link use; the simulation
ends when no router has work left.  Receipts are processed in sorted
order so identical inputs always produce identical records.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass, field

from . import dv_routing, path_routing
from .dv_routing import ENTRY, PacketCtx
from .topology import PathDb, Topology, TopologyError, geo_distance

ALGORITHMS = ("flood", "dv1", "dv2", "dv3", "dv4", "path")


class SimulationError(RuntimeError):
    pass


@dataclass(frozen=True)
class DestSpec:
    """One (source, destination set) experiment input."""

    mode: str
    source: int
    dests: frozenset[int]
    set_id: str


def make_spec(mode: str, source: int, dests) -> DestSpec:
    dests = frozenset(dests)
    if not dests:
        raise SimulationError("destination set is empty")
    if source in dests:
        raise SimulationError("source may not be a destination")
    key = f"{mode}:{source}:{','.join(str(d) for d in sorted(dests))}"
    set_id = hashlib.sha1(key.encode()).hexdigest()[:12]
    return DestSpec(mode, source, dests, set_id)


@dataclass
class ForwardingRecord:
    """Outcome of one simulation: directed link uses and deliveries."""

    algorithm: str
    src: int
    dests: frozenset[int]
    transmissions: list[tuple[int, int]] = field(default_factory=list)
    delivered: set[int] = field(default_factory=set)
    rounds: int = 0

    @property
    def link_usage(self) -> int:
        return len(self.transmissions)


class SimEngine:
    """Converged routing state for one topology, reused across simulations."""

    def __init__(self, topology: Topology):
        self.topology = topology
        self._pathdb: PathDb | None = None
        self._dv_tables = None
        self._path_tables = None

    @property
    def pathdb(self) -> PathDb:
        if self._pathdb is None:
            self._pathdb = PathDb(self.topology)
        return self._pathdb

    @property
    def dv_tables(self):
        if self._dv_tables is None:
            self._dv_tables = dv_routing.build_dv_tables(self.topology)
        return self._dv_tables

    @property
    def path_tables(self):
        if self._path_tables is None:
            self._path_tables = path_routing.distribute_routes(self.topology)
        return self._path_tables

    def simulate(self, algorithm: str, spec: DestSpec) -> ForwardingRecord:
        if algorithm not in ALGORITHMS:
            raise SimulationError(f"unknown algorithm {algorithm!r}")
        record = ForwardingRecord(algorithm, spec.source, spec.dests)
        topo = self.topology
        seen: set[int] = set()
        used_links: set[tuple[int, int]] = set()
        receipts: list[tuple[int, int]] = [(spec.source, ENTRY)]
        max_rounds = 4 * topo.n_nodes

        while receipts:
            record.rounds += 1
            if record.rounds > max_rounds:
                raise SimulationError(
                    f"{topo.name}/{algorithm}: no quiescence after {max_rounds} rounds"
                )
            emissions: list[tuple[int, int]] = []
            for current, prev_hop in sorted(receipts):
                if current in spec.dests:
                    record.delivered.add(current)
                ctx = PacketCtx(spec.source, spec.dests, prev_hop, current)
                targets = self._forward(algorithm, ctx, seen, used_links)
                for nxt in sorted(targets):
                    record.transmissions.append((current, nxt))
                    emissions.append((nxt, current))
            receipts = emissions
        return record

    def _forward(self, algorithm, ctx, seen, used_links):
        current = ctx.current
        if algorithm == "flood":
            out = dv_routing.flood_forward(ctx, current in seen, self.topology)
            seen.add(current)
            # one use per link overall keeps the total at exactly |E|
            targets = []
            for nxt in sorted(out):
                link = (min(current, nxt), max(current, nxt))
                if link not in used_links:
                    used_links.add(link)
                    targets.append(nxt)
            return targets
        if algorithm == "dv1":
            if current in seen:
                return ()
            seen.add(current)
            return dv_routing.dv_forward(1, ctx, self.dv_tables)
        if algorithm in ("dv2", "dv3", "dv4"):
            return dv_routing.dv_forward(int(algorithm[2]), ctx, self.dv_tables)
        return path_routing.next_hop_lookup(self.path_tables[current], ctx)


def simulate(topology: Topology, algorithm: str, spec: DestSpec) -> ForwardingRecord:
    """One-shot convenience wrapper; reuse a SimEngine for many specs."""
    return SimEngine(topology).simulate(algorithm, spec)


def gen_geo_scoped(topology: Topology):
    """Geographically scoped destination sets.

    For every source and every size, every node seeds a set of itself
    plus its geographically nearest nodes, skipping the source while
    picking; duplicate sets for a source are filtered so each (source,
    set) pair appears exactly once.
    """
    if not topology.has_coords():
        raise TopologyError(f"{topology.name}: geo mode needs coordinates on every node")
    nodes = topology.nodes
    for src in nodes:
        emitted: set[frozenset[int]] = set()
        for seed_node in nodes:
            if seed_node == src:
                continue
            others = [n for n in nodes if n not in (src, seed_node)]
            ranked = sorted(others, key=lambda n: (geo_distance(topology, seed_node, n), n))
            for size in range(1, len(nodes)):
                dests = frozenset([seed_node] + ranked[: size - 1])
                if dests in emitted:
                    continue
                emitted.add(dests)
                yield make_spec("geo", src, dests)


def _unrank_combination(pool: list[int], size: int, rank: int) -> list[int]:
    # lexicographic combination of the given rank
    out = []
    start = 0
    for slot in range(size):
        for idx in range(start, len(pool)):
            below = math.comb(len(pool) - idx - 1, size - slot - 1)
            if rank < below:
                out.append(pool[idx])
                start = idx + 1
                break
            rank -= below
    return out


def gen_random(topology: Topology, cap: int, seed: int):
    """Randomly distributed destination sets.

    Per (source, size) stratum: every combination exactly once when the
    stratum holds at most `cap` sets, otherwise `cap` distinct sets
    sampled uniformly with a generator derived from the seed.
    """
    if cap < 1:
        raise SimulationError("cap must be at least 1")
    nodes = topology.nodes
    for src in nodes:
        pool = [n for n in nodes if n != src]
        for size in range(1, len(pool) + 1):
            total = math.comb(len(pool), size)
            if total <= cap:
                ranks = range(total)
            else:
                digest = hashlib.sha256(f"{seed}:{src}:{size}".encode()).digest()
                rng = random.Random(int.from_bytes(digest[:8], "big"))
                ranks = sorted(rng.sample(range(total), cap))
            for rank in ranks:
                dests = frozenset(_unrank_combination(pool, size, rank))
                yield make_spec("random", src, dests)
