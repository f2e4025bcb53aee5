import random

import pytest

from geocastlab.dv_routing import ENTRY, PacketCtx, RoutingError
from geocastlab.path_routing import (
    advertise_on_link,
    concat_paths,
    distribute_routes,
    dump_tables,
    find_dif,
    next_hop_lookup,
)
from geocastlab.topology import Topology, shortest_paths
from graphgen import graph_corpus


def test_two_node_loop_advertisement():
    t = Topology("pair", [(1, 2)])
    tables, rounds = distribute_routes(t, return_rounds=True)
    assert rounds == 2
    advs = advertise_on_link(tables[2], 1)
    # no alternate exists, so the looping path goes out and 1 sees itself in it
    assert advs[1].path == (1, 2)
    assert 1 in advs[1].path


def test_fig5rd_route_distribution(fig5rd, engines):
    tables = engines["fig5rd"].path_tables
    # selections for advertiser 1 (the figure's green choices)
    assert tables[2].best(1)[0] == 1 and tables[2].best(1)[1].path == (1,)
    assert tables[3].best(1)[0] == 1
    assert tables[5].best(1)[0] == 2 and tables[5].best(1)[1].path == (1, 2)
    assert tables[6].best(1)[0] == 3 and tables[6].best(1)[1].cost == 2
    assert tables[4].best(1)[0] == 3
    # router 6's advertisement to 3 carries the alternate route
    advs = advertise_on_link(tables[6], 3)
    assert advs[1].path == (1, 2, 5, 6)
    assert advs[1].cost == 4
    # which router 3 keeps as its second-best entry (the figure's red path)
    assert tables[3].entries[(1, 6)].path == (1, 2, 5, 6)


def test_fig7_advertisements_and_best(fig7, engines):
    tables = engines["fig7"].path_tables
    advs = advertise_on_link(tables[3], 5)
    assert advs[6].path == (6, 4, 1, 2, 3)  # 5-free option for destination 6
    assert tables[5].path_to(3, 6) == (3, 2, 1, 4, 6)
    assert tables[5].best(6)[0] == 4  # tie between 4 and 7
    assert tables[5].best(6)[1].cost == 2


def test_distribute_routes_best_paths_are_shortest(fixtures):
    for t in fixtures + graph_corpus(53, 10, 4, 18):
        db = shortest_paths(t)
        tables = distribute_routes(t)
        for n in t.nodes:
            for m in t.nodes:
                if n == m:
                    continue
                link, adv = tables[n].best(m)
                assert adv.cost == db.dist(n, m), (t.name, n, m)
                assert len(set(adv.path)) == len(adv.path)  # loop-free
                assert adv.path[0] == m and adv.path[-1] == link


def test_distribute_routes_fixed_point(fig7):
    tables = distribute_routes(fig7)
    before = dump_tables(tables)
    # one extra synchronous round must change nothing
    messages = {}
    for n in fig7.nodes:
        for v in fig7.neighbors(n):
            messages[(n, v)] = advertise_on_link(tables[n], v)
    for (sender, receiver), advs in messages.items():
        for adv in advs.values():
            assert tables[receiver].entries[(adv.advertiser, sender)] == adv
    assert dump_tables(distribute_routes(fig7)) == before


def test_dump_format(fig5rd):
    tables = distribute_routes(fig5rd)
    lines = dump_tables(tables).splitlines()
    assert all(len(line.split()) == 5 for line in lines)
    assert "3 6 1 4 1,2,5,6" in lines


def test_concat_paths_examples():
    assert concat_paths((2, 1, 4), (4, 6)) == (2, 1, 4, 6)
    assert concat_paths((2, 3), (3, 2, 1, 4, 6)) == (2, 1, 4, 6)
    assert concat_paths((2, 3), (4, 6), middle=5) == (2, 3, 5, 4, 6)
    with pytest.raises(RoutingError):
        concat_paths((1, 2), (3, 4))


def test_find_dif_worked_examples(engines):
    fig7_tables = engines["fig7"].path_tables
    assert find_dif(fig7_tables[5], 4, 3, 6, 2) is False
    fig9_tables = engines["fig9"].path_tables
    assert find_dif(fig9_tables[5], 4, 2, 6, 2) is False
    chain = Topology("chain", [(1, 2), (2, 3)])
    assert find_dif(distribute_routes(chain)[2], 3, 1, 3, 1) is True


def test_find_dif_unknown_paths(fig7, engines):
    table = engines["fig7"].path_tables[5]
    with pytest.raises(RoutingError):
        table.path_to(4, 99)


def test_next_hop_lookup_cases(engines):
    tables = engines["fig7"].path_tables
    # local delivery only
    only_self = PacketCtx(2, frozenset({5}), 3, 5)
    assert next_hop_lookup(tables[5], only_self) == frozenset()
    # entry router fans out on best next hops
    entry = PacketCtx(2, frozenset({5, 6}), ENTRY, 2)
    assert next_hop_lookup(tables[2], entry) == {3, 1}
    # router 5 does not forward toward 4 for the worked example
    mid = PacketCtx(2, frozenset({5, 6}), 3, 5)
    assert next_hop_lookup(tables[5], mid) == frozenset()


def test_lookup_rejects_foreign_table(engines):
    tables = engines["fig7"].path_tables
    with pytest.raises(RoutingError):
        next_hop_lookup(tables[5], PacketCtx(2, frozenset({6}), 3, 4))


def test_tables_deterministic(fig7):
    assert dump_tables(distribute_routes(fig7)) == dump_tables(distribute_routes(fig7))


def test_stored_paths_substitute_neighbor_free(fixtures):
    # an advertised path contains the receiving neighbor only when no
    # neighbor-free alternative exists
    rng = random.Random(59)
    for t in fixtures + graph_corpus(61, 6, 4, 14):
        tables = distribute_routes(t)
        for n in t.nodes:
            for v in t.neighbors(n):
                for advertiser, adv in advertise_on_link(tables[n], v).items():
                    if advertiser in (n, v):
                        continue
                    if v in adv.path:
                        alt = tables[n].best(advertiser, exclude=v)
                        assert alt is None, (t.name, n, v, advertiser)
