"""Path-vector route distribution and the path-based forwarding decision.

Routers advertise (area, cost, path) records on every link, BGP-style.
A router keeps one stored path per (advertiser, incoming link), which
gives it up to deg(n) candidate paths per destination: the best one and
the alternates.  When propagating, a router appends its own ID and, if
the best path contains the neighbor it is talking to, substitutes the
best neighbor-free path so both ends learn about alternate routes.

Forwarding compares three reconstructed source-to-destination paths (as
seen by the previous hop, by the candidate next hop, and through the
current router) and only forwards when the current router's branch is
no longer than the alternatives, with equal lengths settled by the
lowest-ID rule at the first point of divergence.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dv_routing import ENTRY, PacketCtx, RoutingError
from .geoaddr import GeoAddress
from .topology import Topology

_INF = 1 << 30


@dataclass(frozen=True)
class Advertisement:
    """One routing record: who is reachable, at what cost, along which path.

    path[0] is the advertising router and path[-1] the neighbor the
    record arrived from; cost == len(path) is the hop count from the
    router holding the record.
    """

    advertiser: int
    cost: int
    path: tuple[int, ...]
    area: GeoAddress | None = None


class PathTable:
    """Per-router, per-link stored paths with best/alternate selection."""

    def __init__(self, owner: int, neighbors: tuple[int, ...]):
        self.owner = owner
        self.neighbors = neighbors
        # (advertiser, incoming link) -> Advertisement
        self.entries: dict[tuple[int, int], Advertisement] = {}

    def _selectable(self, advertiser: int, exclude: int | None = None):
        """Usable entries for an advertiser: loop-free, optionally avoiding a node."""
        for link in self.neighbors:
            adv = self.entries.get((advertiser, link))
            if adv is None or self.owner in adv.path:
                continue
            if exclude is not None and exclude in adv.path:
                continue
            yield link, adv

    def best(self, advertiser: int, exclude: int | None = None) -> tuple[int, Advertisement] | None:
        """Lowest-cost entry; cost ties go to the canonically smallest path.

        Equal-cost paths are ordered by :func:`path_key`, a symmetric
        edge-set comparison every router can compute from the path
        itself.  All routers therefore agree on one canonical path per
        router pair, the canonical path's subpaths are themselves
        canonical, and a forwarding decision reconstructed from stored
        paths matches the route a packet really takes.  A per-hop "pick
        the lowest next-hop ID" tie break does not compose this way and
        lets reconstruction drift from the real route.
        """
        choice = None
        best_key = None
        for link, adv in self._selectable(advertiser, exclude):
            # the key covers the whole route including the final hop here
            key = (adv.cost, path_key(adv.path + (self.owner,)), link)
            if best_key is None or key < best_key:
                best_key = key
                choice = (link, adv)
        return choice

    def next_hop(self, dst: int) -> int:
        if dst == self.owner:
            raise RoutingError(f"router {self.owner}: no next hop to itself")
        choice = self.best(dst)
        if choice is None:
            raise RoutingError(f"router {self.owner}: no route to {dst}")
        return choice[0]

    def path_to(self, neighbor: int, target: int) -> tuple[int, ...]:
        """The neighbor's path to a target, as advertised on that link."""
        if target == neighbor:
            return (neighbor,)
        adv = self.entries.get((target, neighbor))
        if adv is None:
            raise RoutingError(
                f"router {self.owner}: link {neighbor} has no path for {target}"
            )
        return tuple(reversed(adv.path))

    def dump_lines(self) -> list[str]:
        lines = []
        for (advertiser, link), adv in sorted(self.entries.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            path_text = ",".join(str(n) for n in adv.path)
            lines.append(f"{self.owner} {link} {advertiser} {adv.cost} {path_text}")
        return lines


def advertise_on_link(table: PathTable, neighbor: int) -> dict[int, Advertisement]:
    """Records a router transmits to one neighbor.

    The best known path gets the router's own ID appended.  If that path
    contains the neighbor, the best neighbor-free path is substituted;
    when no such alternate exists the containing path is sent anyway and
    the neighbor detects the loop from the path contents.
    """
    out = {table.owner: Advertisement(table.owner, 1, (table.owner,))}
    advertisers = {adv for adv, _ in table.entries} - {table.owner}
    for advertiser in sorted(advertisers):
        choice = table.best(advertiser)
        if choice is None:
            continue
        path = choice[1].path + (table.owner,)
        if neighbor in path:
            alt = table.best(advertiser, exclude=neighbor)
            if alt is not None:
                path = alt[1].path + (table.owner,)
        out[advertiser] = Advertisement(advertiser, len(path), path)
    return out


def distribute_routes(topology: Topology, return_rounds: bool = False):
    """Synchronous advertisement rounds until every table is stable."""
    tables = {n: PathTable(n, topology.neighbors(n)) for n in topology.nodes}
    rounds = 0
    while True:
        messages = {}
        for n in topology.nodes:
            for v in topology.neighbors(n):
                messages[(n, v)] = advertise_on_link(tables[n], v)
        changed = False
        for (sender, receiver), advs in messages.items():
            table = tables[receiver]
            fresh = {(adv.advertiser, sender): adv for adv in advs.values()}
            stale = [key for key in table.entries if key[1] == sender and key not in fresh]
            for key in stale:
                del table.entries[key]
                changed = True
            for key, adv in fresh.items():
                if table.entries.get(key) != adv:
                    table.entries[key] = adv
                    changed = True
        if not changed:
            break
        rounds += 1
        if rounds > 4 * topology.n_nodes:
            raise RoutingError(f"{topology.name}: route distribution did not converge")
    return (tables, rounds) if return_rounds else tables


def concat_paths(p: tuple[int, ...], q: tuple[int, ...], middle: int | None = None) -> tuple[int, ...]:
    """Join two paths.

    Without a middle node the paths must share a router: the join cuts
    both sides at the deepest shared router so the result is a simple
    path again.  With a middle node the result is the concatenation
    through that node, i.e. the walk a packet forwarded by it would
    take.
    """
    if middle is not None:
        # the middle form builds the walk a forwarded packet would take:
        # src..prev_hop, this router, next_hop..dst; nothing collapses
        # except a source-side path that already reaches the router
        if middle in p:
            p = p[: p.index(middle) + 1]
        else:
            p = p + (middle,)
        return p + q
    shared = set(p) & set(q)
    if not shared:
        raise RoutingError(f"paths {p} and {q} do not connect")
    j = max(k for k, node in enumerate(q) if node in shared)
    i = p.index(q[j])
    return p[: i + 1] + q[j + 1 :]


def path_key(path: tuple[int, ...]):
    """Canonical order on equal-length paths: compare edge sets.

    The edges are compared as endpoint pairs, largest first, smaller
    sequence preferred, so the canonical path avoids the highest
    numbered links.  The order is symmetric (reversing a path does not
    change it), additive over shared stretches, and computable by any
    router from the path alone, which is what makes independently
    reconstructed routes agree.
    """
    edges = [(min(a, b), max(a, b)) for a, b in zip(path, path[1:])]
    return tuple(sorted(edges, reverse=True))


def _merged_view(to_src: tuple[int, ...], to_dst: tuple[int, ...]) -> int:
    """Length of a neighbor's source-to-destination view.

    The neighbor's paths to the source and to the destination overlap on
    the stretch both share; dropping the overlap from both sides leaves
    the length of the route joining source and destination.
    """
    src_side = [n for n in to_src if n not in to_dst]
    dst_side = [n for n in to_dst if n not in to_src]
    return len(src_side) + len(dst_side)


def find_dif(table: PathTable, next_hop: int, prev_hop: int, dst: int, src: int) -> bool:
    """Decide whether to forward toward dst via next_hop.

    Compares the source-to-destination route a forwarded packet would
    take (previous hop's path to the source plus the next hop's path to
    the destination) against the routes the previous hop and the next
    hop can see with their own stored paths.  Forward when the previous
    hop's view is no shorter AND either the next hop routes to the
    source through this router, or its view is strictly worse, or the
    views tie and this router's branch is the canonically preferred one.
    """
    owner = table.owner
    nh_src = table.path_to(next_hop, src)
    nh_dst = table.path_to(next_hop, dst)
    ph_src = table.path_to(prev_hop, src)
    ph_dst = table.path_to(prev_hop, dst)

    through_here = len(ph_src) + len(nh_dst)
    if _merged_view(ph_src, ph_dst) < through_here:
        return False
    if owner in nh_src:
        return True
    nh_view = _merged_view(nh_src, nh_dst)
    if nh_view > through_here:
        return True
    if nh_view < through_here:
        return False
    # equal length: forward only when the branch through this router is
    # the canonically preferred route, the same order used to pick next
    # hops, so exactly one branch serves the destination
    mine = concat_paths(tuple(reversed(ph_src)), nh_dst, middle=owner)
    theirs = concat_paths(tuple(reversed(nh_src)), nh_dst)
    return path_key(mine) < path_key(theirs)


def next_hop_lookup(table: PathTable, ctx: PacketCtx) -> frozenset[int]:
    """Per-packet next hops for one router (the lookup algorithm).

    The entry router forwards on the best next hop toward every
    destination; any other router screens each destination through
    find_dif, skipping destinations it serves itself, next hops equal to
    the previous hop, and next hops already selected.
    """
    if table.owner != ctx.current:
        raise RoutingError("packet context does not belong to this table")
    if ctx.prev_hop == ENTRY:
        return frozenset(table.next_hop(d) for d in ctx.dests if d != table.owner)
    result: list[int] = []
    for dst in sorted(ctx.dests):
        if dst == table.owner:
            continue
        nh = table.next_hop(dst)
        if nh == ctx.prev_hop or nh in result:
            continue
        if find_dif(table, nh, ctx.prev_hop, dst, ctx.src):
            result.append(nh)
    return frozenset(result)


def dump_tables(tables: dict[int, PathTable]) -> str:
    """Debug dump: one line per table entry 'owner link advertiser cost path'."""
    lines = []
    for owner in sorted(tables):
        lines.extend(tables[owner].dump_lines())
    return "\n".join(lines) + "\n"
