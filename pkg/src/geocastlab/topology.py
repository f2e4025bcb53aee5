"""Network graphs and shortest-path primitives.

Graphs are undirected, connected, unit-cost.  Router identifiers are
integers and all tie-breaking throughout the lab prefers the lowest
identifier, so every derived structure is deterministic.
"""

from __future__ import annotations

import math
from collections import deque
from importlib import resources
from typing import Iterable

import networkx as nx

EARTH_RADIUS_KM = 6371.0088

FIXTURE_NAMES = ("fig7", "fig9", "fig5rd", "loop9")


class TopologyError(ValueError):
    """Graph violates the lab's structural requirements."""


class Topology:
    """Undirected unit-cost graph with optional per-node coordinates."""

    def __init__(
        self,
        name: str,
        edges: Iterable[tuple[int, int]],
        coords: dict[int, tuple[float, float]] | None = None,
        labels: dict[int, str] | None = None,
    ):
        self.name = name
        edge_set = set()
        nodes = set()
        for u, v in edges:
            if u == v:
                continue
            edge_set.add((min(u, v), max(u, v)))
            nodes.update((u, v))
        if not nodes:
            raise TopologyError(f"{name}: empty graph")
        self.nodes: tuple[int, ...] = tuple(sorted(nodes))
        self.edges: tuple[tuple[int, int], ...] = tuple(sorted(edge_set))
        self.coords = dict(coords or {})
        self.labels = dict(labels or {})
        adj: dict[int, list[int]] = {n: [] for n in self.nodes}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        self._adj = {n: tuple(sorted(vs)) for n, vs in adj.items()}
        if not self._connected():
            raise TopologyError(f"{name}: graph is not connected")

    def _connected(self) -> bool:
        seen = {self.nodes[0]}
        queue = deque(seen)
        while queue:
            for v in self._adj[queue.popleft()]:
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        return len(seen) == len(self.nodes)

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def neighbors(self, node: int) -> tuple[int, ...]:
        return self._adj[node]

    def degree(self, node: int) -> int:
        return len(self._adj[node])

    def has_coords(self) -> bool:
        return all(n in self.coords for n in self.nodes)

    def __repr__(self):
        return f"Topology({self.name!r}, n={self.n_nodes}, m={self.n_edges})"


class PathDb:
    """All-pairs hop counts and canonical lowest-ID shortest paths.

    The canonical path from n to m follows, at every step, the lowest-ID
    neighbor that still lies on a shortest path, so ties are broken from
    the source outward.
    """

    def __init__(self, topology: Topology):
        self.topology = topology
        self._dist: dict[int, dict[int, int]] = {}
        for target in topology.nodes:
            self._dist[target] = self._bfs(target)
        self._next: dict[tuple[int, int], int] = {}
        for u in topology.nodes:
            for t in topology.nodes:
                if u == t:
                    continue
                du = self._dist[t][u]
                for v in topology.neighbors(u):  # sorted, first hit is lowest ID
                    if self._dist[t][v] == du - 1:
                        self._next[(u, t)] = v
                        break
        self.diameter = max(max(d.values()) for d in self._dist.values())

    def _bfs(self, target: int) -> dict[int, int]:
        dist = {target: 0}
        queue = deque([target])
        while queue:
            u = queue.popleft()
            for v in self.topology.neighbors(u):
                if v not in dist:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        return dist

    def dist(self, n: int, m: int) -> int:
        return self._dist[m][n]

    def next_hop(self, n: int, m: int) -> int:
        """First hop of the canonical shortest path from n to m."""
        return self._next[(n, m)]

    def path(self, n: int, m: int) -> tuple[int, ...]:
        """Canonical shortest path as a node sequence, path(n, m)[0] == n."""
        out = [n]
        while out[-1] != m:
            out.append(self._next[(out[-1], m)])
        return tuple(out)


def shortest_paths(topology: Topology) -> PathDb:
    return PathDb(topology)


def geo_distance(topology: Topology, a: int, b: int) -> float:
    """Great-circle distance in kilometres between two routers."""
    try:
        lat1, lon1 = topology.coords[a]
        lat2, lon2 = topology.coords[b]
    except KeyError as exc:
        raise TopologyError(f"{topology.name}: node {exc.args[0]} has no coordinates")
    p1, p2 = math.radians(lat1), math.radians(lat2)
    dphi = p2 - p1
    dlmb = math.radians(lon2 - lon1)
    h = math.sin(dphi / 2) ** 2 + math.cos(p1) * math.cos(p2) * math.sin(dlmb / 2) ** 2
    return 2 * EARTH_RADIUS_KM * math.asin(math.sqrt(h))


def load_graphml(data: bytes | str, name: str = "graphml") -> Topology:
    """Load a Topology Zoo style GraphML document.

    Keeps the largest connected component, drops self-loops and parallel
    edges, and renumbers nodes densely (0..n-1) in document order.  The
    original node ids are kept as labels; "Latitude"/"Longitude" node
    attributes become coordinates when present.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    graph = nx.parse_graphml(data)
    graph = nx.Graph(graph)  # undirected, parallel edges collapsed
    graph.remove_edges_from(nx.selfloop_edges(graph))
    if graph.number_of_nodes() == 0:
        raise TopologyError(f"{name}: empty graph")
    order = {node: k for k, node in enumerate(graph.nodes)}
    components = sorted(
        nx.connected_components(graph),
        key=lambda comp: (-len(comp), min(order[n] for n in comp)),
    )
    keep = components[0]
    kept = [n for n in graph.nodes if n in keep]
    if len(kept) < 2:
        raise TopologyError(f"{name}: largest component has no edges")
    renum = {old: new for new, old in enumerate(kept)}
    edges = [(renum[u], renum[v]) for u, v in graph.edges if u in keep and v in keep]
    coords = {}
    labels = {}
    for old, new in renum.items():
        attrs = graph.nodes[old]
        labels[new] = str(attrs.get("label", old))
        if "Latitude" in attrs and "Longitude" in attrs:
            coords[new] = (float(attrs["Latitude"]), float(attrs["Longitude"]))
    return Topology(name, edges, coords=coords, labels=labels)


def load_edgelist(text: str, name: str = "edgelist") -> Topology:
    """Parse the fixture edge-list format.

    One "u v" pair per line; "# coord u lat lon" lines attach
    coordinates; other "#" lines are comments.
    """
    edges = []
    coords = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if parts[:1] == ["coord"]:
                coords[int(parts[1])] = (float(parts[2]), float(parts[3]))
            continue
        u, v = line.split()
        edges.append((int(u), int(v)))
    if not edges:
        raise TopologyError(f"{name}: no edges")
    return Topology(name, edges, coords=coords)


def load_fixture(name: str) -> Topology:
    """Load one of the bundled fixture topologies by name."""
    if name not in FIXTURE_NAMES:
        raise TopologyError(f"unknown fixture {name!r}")
    text = resources.files("geocastlab.data").joinpath(f"{name}.edges").read_text()
    return load_edgelist(text, name=name)


def fixture_topologies() -> list[Topology]:
    return [load_fixture(name) for name in FIXTURE_NAMES]
