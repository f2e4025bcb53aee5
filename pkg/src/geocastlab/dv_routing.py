"""Distance-vector state and the cost-only forwarding rules.

Every router knows the hop count and a deterministic next hop to every
other router.  Four forwarding functions of increasing selectivity turn
that state into geocast forwarding decisions; flooding is the baseline.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .topology import PathDb, Topology

ENTRY = -1  # prev_hop sentinel for the router where a packet enters the network

DV_VARIANTS = (1, 2, 3, 4)


class RoutingError(ValueError):
    pass


@dataclass(frozen=True)
class PacketCtx:
    """A packet as seen by one router: source, destination set, arrival."""

    src: int
    dests: frozenset[int]
    prev_hop: int
    current: int

    def __post_init__(self):
        if not self.dests:
            raise RoutingError("destination set is empty")
        if self.src in self.dests:
            raise RoutingError("source may not be a destination")


@dataclass
class DvTable:
    """Per-router cost and next hop to every other router.

    next_hop is always the lowest-ID neighbor among cost-minimal
    choices, which keeps every table and simulation deterministic.
    """

    owner: int
    cost: dict[int, int] = field(default_factory=dict)
    next_hop: dict[int, int] = field(default_factory=dict)


def build_dv_tables(topology: Topology, return_rounds: bool = False):
    """Converge tables with synchronous Bellman-Ford rounds.

    Each round every router offers last round's vector to all neighbors;
    a receiver adopts a route when it is cheaper, or equally cheap via a
    lower-ID neighbor.  The number of rounds that change any table is at
    most diameter + 1.
    """
    tables = {n: DvTable(owner=n, cost={n: 0}, next_hop={}) for n in topology.nodes}
    rounds = 0
    while True:
        snapshot = {n: dict(tables[n].cost) for n in topology.nodes}
        changed = False
        for n in topology.nodes:
            table = tables[n]
            for v in topology.neighbors(n):  # sorted: lowest ID offers first
                for dest, vcost in snapshot[v].items():
                    if dest == n:
                        continue
                    cand = vcost + 1
                    cur = table.cost.get(dest)
                    if cur is None or cand < cur or (cand == cur and v < table.next_hop[dest]):
                        if cur != cand or table.next_hop.get(dest) != v:
                            changed = True
                        table.cost[dest] = cand
                        table.next_hop[dest] = v
        if not changed:
            break
        rounds += 1
        if rounds > topology.n_nodes + 1:
            raise RoutingError(f"{topology.name}: distance-vector did not converge")
    return (tables, rounds) if return_rounds else tables


def flood_forward(ctx: PacketCtx, seen_before: bool, topology: Topology) -> frozenset[int]:
    """Flooding rule: first receipt goes to every neighbor but the sender."""
    if seen_before:
        return frozenset()
    out = set(topology.neighbors(ctx.current))
    out.discard(ctx.prev_hop)
    return frozenset(out)


def _on_reverse_path(tables: dict[int, DvTable], current: int, prev_hop: int, src: int) -> bool:
    # the previous hop lies on a shortest path from the current router
    # back to the source
    return tables[prev_hop].cost[src] == tables[current].cost[src] - 1


def dv_forward(variant: int, ctx: PacketCtx, tables: dict[int, DvTable]) -> frozenset[int]:
    """Distance-vector forwarding decision for one received packet.

    variant 1: next hop toward every destination, minus the sender.
    variant 2: only packets arriving on a reverse-path link to the source
        are forwarded, and only toward destinations the current router is
        strictly closer to than the previous hop.
    variant 3: additionally the candidate next hop must be strictly
        farther from the source than the current router, otherwise it
        already received the packet along its own reverse path.
    variant 4: variant 3; the lowest-ID tie break is already embedded in
        the tables, so equal-cost choices are never random.

    Entry routers (prev_hop == ENTRY) forward on the next hop toward
    every destination, bypassing all checks.
    """
    if variant not in DV_VARIANTS:
        raise RoutingError(f"unknown distance-vector variant {variant!r}")
    table = tables[ctx.current]
    if ctx.prev_hop == ENTRY:
        return frozenset(table.next_hop[d] for d in ctx.dests if d != ctx.current)

    if variant == 1:
        out = {table.next_hop[d] for d in ctx.dests if d != ctx.current}
        out.discard(ctx.prev_hop)
        return frozenset(out)

    if ctx.current == ctx.src or not _on_reverse_path(tables, ctx.current, ctx.prev_hop, ctx.src):
        return frozenset()
    out = set()
    for dst in ctx.dests:
        if dst == ctx.current:
            continue
        if table.cost[dst] >= tables[ctx.prev_hop].cost[dst]:
            continue
        m = table.next_hop[dst]
        if variant >= 3 and tables[m].cost[ctx.src] <= table.cost[ctx.src]:
            continue
        out.add(m)
    return frozenset(out)


def verify_against_pathdb(tables: dict[int, DvTable], pathdb: PathDb) -> bool:
    """Converged tables must agree with the canonical shortest paths."""
    for n, table in tables.items():
        for m in tables:
            if m == n:
                continue
            if table.cost[m] != pathdb.dist(n, m) or table.next_hop[m] != pathdb.next_hop(n, m):
                return False
    return True
