"""Reference trees: shortest-path tree, KMB heuristic, exact Steiner.

These provide the comparison baselines and the lower-bound oracle for
the forwarding algorithms.  Everything is deterministic: ties fall to
the lowest node/edge identifiers.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .topology import PathDb, Topology


class OracleError(ValueError):
    pass


@dataclass(frozen=True)
class TreeCost:
    """A tree over the topology: its undirected edges and link count."""

    links: int
    edges: frozenset[tuple[int, int]]


def _edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def spt_cost(topology: Topology, src: int, dests, pathdb: PathDb | None = None) -> TreeCost:
    """Union of the canonical shortest paths from src to every destination."""
    dests = set(dests)
    if not dests:
        raise OracleError("destination set is empty")
    pathdb = pathdb or PathDb(topology)
    edges = set()
    for dst in dests:
        path = pathdb.path(src, dst)
        edges.update(_edge(a, b) for a, b in zip(path, path[1:]))
    return TreeCost(len(edges), frozenset(edges))


def _kruskal(nodes, weighted_edges):
    """Deterministic MST: edges taken in (weight, endpoints) order."""
    parent = {n: n for n in nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    chosen = []
    for w, u, v in sorted(weighted_edges):
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            chosen.append((w, u, v))
    return chosen


def steiner_kmb(topology: Topology, terminals, pathdb: PathDb | None = None) -> TreeCost:
    """KMB 2-approximation of the Steiner tree.

    Metric closure over the terminals, MST, expansion of MST edges into
    shortest paths, MST of the expansion, then pruning of non-terminal
    leaves.
    """
    terminals = sorted(set(terminals))
    if len(terminals) < 2:
        raise OracleError("KMB needs at least two terminals")
    pathdb = pathdb or PathDb(topology)

    closure = [(pathdb.dist(u, v), u, v) for u, v in combinations(terminals, 2)]
    mst1 = _kruskal(terminals, closure)

    expanded = set()
    for _, u, v in mst1:
        path = pathdb.path(u, v)
        expanded.update(_edge(a, b) for a, b in zip(path, path[1:]))
    nodes = {n for e in expanded for n in e}
    mst2 = _kruskal(nodes, [(1, u, v) for u, v in sorted(expanded)])

    edges = {_edge(u, v) for _, u, v in mst2}
    term_set = set(terminals)
    while True:
        degree: dict[int, int] = {}
        for u, v in edges:
            degree[u] = degree.get(u, 0) + 1
            degree[v] = degree.get(v, 0) + 1
        leaves = {n for n, d in degree.items() if d == 1 and n not in term_set}
        if not leaves:
            break
        edges = {e for e in edges if not (e[0] in leaves or e[1] in leaves)}
    return TreeCost(len(edges), frozenset(edges))


def steiner_exact(topology: Topology, terminals, pathdb: PathDb | None = None) -> TreeCost:
    """Optimal Steiner tree on small instances.

    Small graphs are solved by searching node supersets of the terminals
    in increasing size (a connected superset of size s spans a tree of
    s - 1 unit edges); larger graphs with few terminals fall back to the
    Dreyfus-Wagner dynamic program.
    """
    terminals = sorted(set(terminals))
    if not terminals:
        raise OracleError("terminal set is empty")
    if len(terminals) == 1:
        return TreeCost(0, frozenset())
    if topology.n_nodes <= 16:
        return _steiner_bruteforce(topology, terminals)
    if len(terminals) <= 6:
        return _steiner_dreyfus_wagner(topology, terminals, pathdb or PathDb(topology))
    raise OracleError(
        f"instance too large for exact Steiner: n={topology.n_nodes}, k={len(terminals)}"
    )


def _spanning_tree(topology: Topology, nodes: set[int]) -> frozenset[tuple[int, int]] | None:
    """BFS spanning tree of the induced subgraph, None when disconnected."""
    start = min(nodes)
    seen = {start}
    edges = set()
    frontier = [start]
    while frontier:
        nxt = []
        for u in frontier:
            for v in topology.neighbors(u):
                if v in nodes and v not in seen:
                    seen.add(v)
                    edges.add(_edge(u, v))
                    nxt.append(v)
        frontier = nxt
    if seen != nodes:
        return None
    return frozenset(edges)


def _steiner_bruteforce(topology: Topology, terminals) -> TreeCost:
    term_set = set(terminals)
    extras = [n for n in topology.nodes if n not in term_set]
    for extra_count in range(len(extras) + 1):
        for combo in combinations(extras, extra_count):
            tree = _spanning_tree(topology, term_set | set(combo))
            if tree is not None:
                return TreeCost(len(tree), tree)
    raise OracleError("terminals are not connected")  # unreachable: graphs are connected


def _steiner_dreyfus_wagner(topology: Topology, terminals, pathdb: PathDb) -> TreeCost:
    nodes = topology.nodes
    k = len(terminals)
    full = (1 << k) - 1
    inf = 1 << 30

    # dp[mask][v]: cost of an optimal tree spanning {terminals in mask} + {v}
    dp = {m: {v: inf for v in nodes} for m in range(1, full + 1)}
    extend_from: dict[tuple[int, int], int] = {}
    merge_split: dict[tuple[int, int], int] = {}
    for i, t in enumerate(terminals):
        for v in nodes:
            dp[1 << i][v] = pathdb.dist(t, v)

    for mask in range(1, full + 1):
        if mask & (mask - 1) == 0:
            continue
        merged = {}
        for v in nodes:
            best, best_sub = inf, 0
            sub = (mask - 1) & mask
            while sub:
                if sub < (mask ^ sub):  # each split once
                    cand = dp[sub][v] + dp[mask ^ sub][v]
                    if cand < best:
                        best, best_sub = cand, sub
                sub = (sub - 1) & mask
            merged[v] = (best, best_sub)
        for v in nodes:
            best, best_u = inf, v
            for u in nodes:
                cand = merged[u][0] + pathdb.dist(u, v)
                if cand < best:
                    best, best_u = cand, u
            dp[mask][v] = best
            extend_from[(mask, v)] = best_u
            merge_split[(mask, v)] = merged[best_u][1]

    root = min(nodes, key=lambda v: (dp[full][v], v))
    edges: set[tuple[int, int]] = set()

    def rebuild(mask, v):
        if mask & (mask - 1) == 0:
            path = pathdb.path(terminals[mask.bit_length() - 1], v)
            edges.update(_edge(a, b) for a, b in zip(path, path[1:]))
            return
        u = extend_from[(mask, v)]
        path = pathdb.path(u, v)
        edges.update(_edge(a, b) for a, b in zip(path, path[1:]))
        sub = merge_split[(mask, v)]
        rebuild(sub, u)
        rebuild(mask ^ sub, u)

    rebuild(full, root)
    return TreeCost(len(edges), frozenset(edges))
