import numpy as np
import pytest

from dcnflow.basegraph import parse_edge_list
from dcnflow.metrics import (LinkLoadTable, abt, cost_per_server, histogram,
                             idle_ports)
from dcnflow.routing import gq_dimension_order
from dcnflow.stellar import stellar_transform
from dcnflow.topology import Family


def test_partner_hop_increments_one_channel(gq23):
    sm = gq23.meta.stellar
    table = LinkLoadTable(gq23)
    table.record_flow([0, sm.partner[0]])
    assert table.total() == 1
    assert table.bottleneck() == 1


def test_same_switch_hop_increments_two_channels(gq23):
    sm = gq23.meta.stellar
    t = next(x for x in gq23.servers() if x != 0 and sm.attach[x] == sm.attach[0])
    table = LinkLoadTable(gq23)
    table.record_flow([0, sm.attach[0], t])
    assert table.total() == 2


def test_conservation_on_gq23_all_to_all(gq23):
    table = LinkLoadTable(gq23)
    expected_total = 0
    for s in gq23.servers():
        for t in gq23.servers():
            if s == t:
                continue
            nodes = gq_dimension_order(gq23, s, t)
            table.record_flow(nodes)
            expected_total += len(nodes) - 1  # channels per flow, recounted
    assert table.total() == expected_total
    assert table.bottleneck() == int(table.counts.max())


def test_bottleneck_empty_and_uniform():
    topo, _ = stellar_transform(parse_edge_list("0 1"))
    table = LinkLoadTable(topo)
    assert table.bottleneck() == 0
    for _ in range(5):
        table.record_flow([0, 1])
    assert table.bottleneck() == 5


def test_abt_values_and_errors():
    assert abt(2, 1) == 2
    assert abt(10, 3, bandwidth=2.0) == pytest.approx(60.0)
    with pytest.raises(ValueError):
        abt(10, 0)


def test_abt_monotone_under_added_flows(gq23):
    table = LinkLoadTable(gq23)
    n = gq23.num_servers
    prev = None
    for s in range(6):
        table.record_flow(gq_dimension_order(gq23, s, s + 7))
        val = abt(n, table.bottleneck())
        if prev is not None:
            assert val <= prev
        prev = val


def test_merge_associativity(gq23):
    flows = [(s, t) for s in gq23.servers() for t in gq23.servers() if s != t]
    whole = LinkLoadTable(gq23)
    for s, t in flows:
        whole.record_flow(gq_dimension_order(gq23, s, t))
    for cut in (10, 100, 555):
        a, b = LinkLoadTable(gq23), LinkLoadTable(gq23)
        for s, t in flows[:cut]:
            a.record_flow(gq_dimension_order(gq23, s, t))
        for s, t in flows[cut:]:
            b.record_flow(gq_dimension_order(gq23, s, t))
        a.merge(b)
        assert np.array_equal(a.counts, whole.counts)
        assert a.hop_sum == whole.hop_sum


def test_histogram_all_zero_single_bin(gq23):
    table = LinkLoadTable(gq23)
    hist = histogram(table)
    assert hist.bins == {0: gq23.num_channels}
    assert hist.zero_channels == gq23.num_channels
    assert hist.mean_all == 0.0


def test_histogram_binning_and_means(gq23):
    table = LinkLoadTable(gq23)
    for _ in range(3):
        table.record_flow([0, 1])
    hist = histogram(table, bin_width=2)
    assert hist.bins[2] == 1  # one channel with load 3
    assert hist.zero_channels == gq23.num_channels - 1
    assert hist.mean_used == 3.0
    assert hist.mean_all == pytest.approx(3 / gq23.num_channels)
    with pytest.raises(ValueError):
        histogram(table, bin_width=0)


def test_idle_ports(gq23, ficonn14):
    assert idle_ports(gq23) == 0
    assert idle_ports(ficonn14) == 6


def test_cost_gamma_zero_ratio():
    for rho in (0.01, 0.05, 0.16):
        ratio = cost_per_server(Family.DPILLAR, rho, 0.0, normalize=True)
        assert ratio == pytest.approx((2 * rho + 1) / (rho + 1))


def test_cost_reference_point():
    rho, gamma = 0.05, 0.157143
    assert cost_per_server(Family.DPILLAR, rho, gamma, normalize=True) == \
        pytest.approx(1.10, abs=0.01)
    assert cost_per_server(Family.FICONN, rho, gamma, k=2, normalize=True) == \
        pytest.approx(0.985, abs=0.01)


def test_cost_ordering_everywhere():
    for rho in np.linspace(0.01, 0.16, 16):
        for gamma in np.linspace(0.01, 0.6, 20):
            gq = cost_per_server(Family.GQ_STAR, rho, gamma)
            dp = cost_per_server(Family.DPILLAR, rho, gamma)
            for k in (1, 2, 3, 5):
                fc = cost_per_server(Family.FICONN, rho, gamma, k=k)
                assert fc < gq < dp


def test_cost_requires_k_for_ficonn():
    with pytest.raises(ValueError):
        cost_per_server(Family.FICONN, 0.05, 0.1)
