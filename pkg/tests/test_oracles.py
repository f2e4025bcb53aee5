import random
from itertools import combinations

import pytest

from geocastlab.oracles import (
    OracleError,
    _steiner_bruteforce,
    _steiner_dreyfus_wagner,
    spt_cost,
    steiner_exact,
    steiner_kmb,
)
from geocastlab.simengine import SimEngine, make_spec
from geocastlab.topology import Topology, shortest_paths
from graphgen import graph_corpus


def edges_form_tree(edges, terminals):
    if not edges:
        return len(terminals) <= 1
    nodes = {n for e in edges for n in e}
    if not terminals <= nodes:
        return False
    if len(edges) != len(nodes) - 1:
        return False
    adj = {n: [] for n in nodes}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = {min(nodes)}
    stack = [min(nodes)]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == nodes


def test_spt_single_destination(fig7, pathdbs):
    db = pathdbs["fig7"]
    for src in fig7.nodes:
        for dst in fig7.nodes:
            if dst != src:
                assert spt_cost(fig7, src, {dst}, db).links == db.dist(src, dst)


def test_spt_fig7_worked_example(fig7, pathdbs):
    tree = spt_cost(fig7, 2, {5, 6}, pathdbs["fig7"])
    assert tree.links == 5
    assert tree.edges == {(2, 3), (3, 5), (1, 2), (1, 4), (4, 6)}


def test_spt_star_graph():
    star = Topology("star", [(1, k) for k in range(2, 8)])
    tree = spt_cost(star, 1, set(range(2, 8)))
    assert tree.links == 6


def test_spt_union_is_tree_on_random_graphs():
    rng = random.Random(5)
    for t in graph_corpus(101, 10, 4, 18):
        db = shortest_paths(t)
        for _ in range(5):
            src = rng.choice(t.nodes)
            k = rng.randint(1, t.n_nodes - 1)
            dests = set(rng.sample([n for n in t.nodes if n != src], k))
            tree = spt_cost(t, src, dests, db)
            assert edges_form_tree(tree.edges, dests | {src})


def test_kmb_two_terminals(fig7, pathdbs):
    assert steiner_kmb(fig7, {2, 6}, pathdbs["fig7"]).links == pathdbs["fig7"].dist(2, 6)


def test_kmb_fig7_triple(fig7, pathdbs):
    # metric closure MST is (2,5)+(5,6) = 4, expanding to 4 distinct unit
    # edges, which is also the exact optimum on this instance
    tree = steiner_kmb(fig7, {2, 5, 6}, pathdbs["fig7"])
    assert tree.links == 4
    assert steiner_exact(fig7, {2, 5, 6}).links == 4


def test_exact_fig9_triple(fig9):
    tree = steiner_exact(fig9, {2, 5, 6})
    assert tree.links == 3
    assert tree.edges == {(2, 5), (4, 5), (4, 6)}


def test_exact_trivial_instances():
    tri = Topology("tri", [(1, 2), (2, 3), (1, 3)])
    assert steiner_exact(tri, {1, 2, 3}).links == 2
    chain = Topology("chain", [(1, 2), (2, 3), (3, 4)])
    assert steiner_exact(chain, set(chain.nodes)).links == 3
    assert steiner_exact(chain, {2}).links == 0


def test_exact_matches_bruteforce_and_dw():
    rng = random.Random(7)
    for t in graph_corpus(103, 10, 5, 10):
        nodes = list(t.nodes)
        for _ in range(4):
            k = rng.randint(2, min(5, len(nodes)))
            terminals = sorted(rng.sample(nodes, k))
            brute = _steiner_bruteforce(t, terminals)
            dw = _steiner_dreyfus_wagner(t, terminals, shortest_paths(t))
            assert brute.links == dw.links, (t.name, terminals)
            assert edges_form_tree(dw.edges, set(terminals))
            assert edges_form_tree(brute.edges, set(terminals))


def test_oracle_orderings(fixtures):
    rng = random.Random(11)
    for t in fixtures + graph_corpus(107, 8, 5, 12):
        db = shortest_paths(t)
        for _ in range(6):
            k = rng.randint(2, min(6, t.n_nodes))
            terminals = set(rng.sample(list(t.nodes), k))
            exact = steiner_exact(t, terminals).links
            kmb = steiner_kmb(t, terminals, db).links
            src = min(terminals)
            spt = spt_cost(t, src, terminals - {src}, db).links
            assert exact <= kmb <= 2 * exact
            assert exact <= spt


def test_spt_matches_path_simulation_on_worked_examples(engines, pathdbs, fig7, fig9):
    for t, src, dests in ((fig7, 2, {5, 6}), (fig9, 2, {5, 6})):
        rec = engines[t.name].simulate("path", make_spec("geo", src, dests))
        assert rec.link_usage == spt_cost(t, src, dests, pathdbs[t.name]).links


def test_exact_rejects_oversized():
    big = Topology("big", [(i, i + 1) for i in range(1, 18)])
    with pytest.raises(OracleError):
        steiner_exact(big, set(range(1, 9)))


def test_exact_accepts_large_graph_with_few_terminals():
    big = Topology("big", [(i, i + 1) for i in range(1, 20)] + [(1, 20)])
    tree = steiner_exact(big, {1, 5, 9})
    assert tree.links == 8
