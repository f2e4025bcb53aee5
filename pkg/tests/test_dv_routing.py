import random

import pytest

from geocastlab.dv_routing import (
    ENTRY,
    DvTable,
    PacketCtx,
    RoutingError,
    build_dv_tables,
    dv_forward,
    flood_forward,
    verify_against_pathdb,
)
from geocastlab.simengine import SimEngine, make_spec
from geocastlab.topology import Topology, shortest_paths
from graphgen import graph_corpus
from reference_dv import ReferenceNet


def test_two_node_tables():
    t = Topology("pair", [(1, 2)])
    tables = build_dv_tables(t)
    assert tables[1].cost[2] == 1 and tables[1].next_hop[2] == 2
    assert tables[2].cost[1] == 1


def test_fig7_costs_and_tie(fig7):
    tables = build_dv_tables(fig7)
    assert tables[4].cost[1] == 1 and tables[4].next_hop[1] == 1
    # equal-cost next hops 4 and 7 toward 6; the lowest ID wins
    assert tables[5].cost[6] == 2 and tables[5].next_hop[6] == 4


def test_tables_match_pathdb_and_round_bound(fixtures):
    graphs = fixtures + graph_corpus(31, 15, 4, 25)
    for t in graphs:
        db = shortest_paths(t)
        tables, rounds = build_dv_tables(t, return_rounds=True)
        assert verify_against_pathdb(tables, db), t.name
        assert rounds <= db.diameter + 1, (t.name, rounds, db.diameter)


def test_flood_forward_rules(fig7):
    # degree-1 style: packet arriving from the only useful neighbor
    t = Topology("spur", [(1, 2)])
    ctx = PacketCtx(3, frozenset({9}), prev_hop=2, current=1)
    assert flood_forward(ctx, seen_before=False, topology=t) == frozenset()
    entry = PacketCtx(4, frozenset({6}), prev_hop=ENTRY, current=4)
    assert flood_forward(entry, seen_before=False, topology=fig7) == frozenset(fig7.neighbors(4))
    assert flood_forward(entry, seen_before=True, topology=fig7) == frozenset()


def test_dv_forward_entry_and_single_destination(fig7):
    tables = build_dv_tables(fig7)
    for variant in (1, 2, 3, 4):
        entry = PacketCtx(2, frozenset({6}), ENTRY, 2)
        assert dv_forward(variant, entry, tables) == {1}
        mid = PacketCtx(2, frozenset({6}), 1, 4)
        assert dv_forward(variant, mid, tables) == {6}


def test_dv_forward_rpf_drop(fig7):
    tables = build_dv_tables(fig7)
    # router 5 hearing from 7 about a packet from source 2: 7 is not on a
    # shortest path from 5 back to 2
    ctx = PacketCtx(2, frozenset({6}), 7, 5)
    for variant in (2, 3, 4):
        assert dv_forward(variant, ctx, tables) == frozenset()
    assert dv_forward(1, ctx, tables) != frozenset()


def test_dv_forward_unknown_variant(fig7):
    tables = build_dv_tables(fig7)
    with pytest.raises(RoutingError):
        dv_forward(5, PacketCtx(2, frozenset({6}), ENTRY, 2), tables)


def test_packet_ctx_validation():
    with pytest.raises(RoutingError):
        PacketCtx(1, frozenset(), ENTRY, 1)
    with pytest.raises(RoutingError):
        PacketCtx(1, frozenset({1, 2}), ENTRY, 1)


def test_simulations_match_reference_oracle(fixtures):
    """Full-simulation link totals equal the brute-force reference's."""
    rng = random.Random(17)
    graphs = fixtures + graph_corpus(41, 30, 4, 22)
    for t in graphs:
        eng = SimEngine(t)
        ref = ReferenceNet(t)
        for _ in range(6):
            src = rng.choice(t.nodes)
            k = rng.randint(1, t.n_nodes - 1)
            dests = frozenset(rng.sample([n for n in t.nodes if n != src], k))
            spec = make_spec("random", src, dests)
            for variant in (1, 2, 3, 4):
                rec = eng.simulate(f"dv{variant}", spec)
                ref_tx, ref_delivered, _ = ref.run_dv(variant, src, dests)
                assert sorted(rec.transmissions) == sorted(ref_tx), (t.name, variant, src, sorted(dests))
                assert rec.delivered >= dests and ref_delivered >= dests
            rec = eng.simulate("flood", spec)
            flood_tx, flood_delivered = ref.run_flood(src, dests)
            assert sorted(rec.transmissions) == sorted(flood_tx)
            assert rec.link_usage == t.n_edges
            assert flood_delivered >= dests


def test_termination_round_bound(fixtures):
    rng = random.Random(19)
    graphs = fixtures + graph_corpus(43, 20, 4, 22)
    for t in graphs:
        db = shortest_paths(t)
        eng = SimEngine(t)
        for _ in range(4):
            src = rng.choice(t.nodes)
            k = rng.randint(1, t.n_nodes - 1)
            dests = frozenset(rng.sample([n for n in t.nodes if n != src], k))
            spec = make_spec("random", src, dests)
            for algo in ("flood", "dv1", "dv2", "dv3", "dv4"):
                rec = eng.simulate(algo, spec)
                assert rec.rounds <= 2 * db.diameter + 2, (t.name, algo)


def test_mean_usage_ordering_dv_chain(fixtures):
    rng = random.Random(23)
    graphs = fixtures + graph_corpus(47, 10, 6, 18)
    totals = {v: 0 for v in (1, 2, 3, 4)}
    for t in graphs:
        eng = SimEngine(t)
        for _ in range(8):
            src = rng.choice(t.nodes)
            k = rng.randint(1, t.n_nodes - 1)
            dests = frozenset(rng.sample([n for n in t.nodes if n != src], k))
            spec = make_spec("random", src, dests)
            for v in totals:
                totals[v] += eng.simulate(f"dv{v}", spec).link_usage
    assert totals[1] >= totals[2] >= totals[3] >= totals[4]
