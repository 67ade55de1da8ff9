import math

import numpy as np
import pytest

from renorm_julia.errors import SizeGuard
from renorm_julia.lattice_oracle import (
    build_lattice,
    coupling_flow,
    decimate_cell,
    exact_logZ,
    verify_decimation,
)


@pytest.mark.parametrize("b,n,sites,bonds", [(3, 1, 5, 6), (2, 2, 12, 16), (2, 0, 2, 1)])
def test_sizes(b, n, sites, bonds):
    g = build_lattice(b, n)
    assert (g.sites, g.n_bonds) == (sites, bonds)


@pytest.mark.parametrize("b", [2, 3, 5, 8])
def test_size_recursions(b):
    prev = build_lattice(b, 0)
    for n in range(1, 4):
        g = build_lattice(b, n)
        assert g.n_bonds == (2 * b) ** n
        assert g.sites == prev.sites + b * (2 * b) ** (n - 1)
        prev = g


def test_connected_and_outer_sites():
    g = build_lattice(3, 2)
    adj = {i: set() for i in range(g.sites)}
    for i, j in g.bonds:
        adj[i].add(j)
        adj[j].add(i)
    seen, stack = {0}, [0]
    while stack:
        for j in adj[stack.pop()] - seen:
            seen.add(j)
            stack.append(j)
    assert len(seen) == g.sites
    # each outer site sits on b branches of each of the b top-level cells
    assert len(adj[0]) == len(adj[1]) == 9


def test_guards():
    with pytest.raises(SizeGuard):
        build_lattice(9, 1)
    with pytest.raises(SizeGuard):
        build_lattice(2, 5)
    with pytest.raises(SizeGuard):
        exact_logZ(build_lattice(4, 2), 0.5)


@pytest.mark.parametrize("K", [-0.4, 0.0, 0.3, 2.0])
def test_single_bond(K):
    assert exact_logZ(build_lattice(2, 0), K) == pytest.approx(math.log(2 * math.exp(K) + 2 * math.exp(-K)), rel=1e-14)


def test_free_spins():
    for b, n in [(2, 1), (3, 1), (2, 2)]:
        g = build_lattice(b, n)
        assert exact_logZ(g, 0.0) == pytest.approx(g.sites * math.log(2), rel=1e-14)


def test_pinned_differs_by_ln2():
    g = build_lattice(2, 2)
    for K in (0.1, 0.9, 3.0):
        assert exact_logZ(g, K) - exact_logZ(g, K, pinned=True) == pytest.approx(math.log(2), abs=1e-12)


def test_large_coupling_is_ground_state():
    g = build_lattice(3, 1)
    K = 40.0
    assert exact_logZ(g, K) == pytest.approx(math.log(2) + K * g.n_bonds, rel=1e-14)


def test_decimation_examples():
    d = decimate_cell(3, 0.0)
    assert d.K_eff == 0.0 and d.log_c == pytest.approx(3 * math.log(2))
    big = decimate_cell(3, 30.0)
    assert big.K_eff == pytest.approx(3 * 30.0 - 1.5 * math.log(2), rel=1e-12)
    d = decimate_cell(2, 0.7)
    lhs = exact_logZ(build_lattice(2, 1), 0.7)
    assert abs(lhs - d.log_c - exact_logZ(build_lattice(2, 0), d.K_eff)) < 1e-12


def test_decimation_single_cell_trace():
    # the defining property, for both outer configurations, by brute force
    b, K = 3, 0.37
    d = decimate_cell(b, K)
    for s1, s2 in [(1, 1), (1, -1)]:
        tr = sum(math.exp(K * (s1 * s + s * s2)) for s in (1, -1)) ** b
        assert math.log(tr) == pytest.approx(d.log_c + d.K_eff * s1 * s2, rel=1e-14)


@pytest.mark.parametrize("b,n,K", [(3, 0, 0.5), (2, 1, 0.8)])
def test_verify_examples(b, n, K):
    assert verify_decimation(b, n, K) < 1e-10


def test_coupling_flow_shape():
    rows = coupling_flow(2, 0.6, 4)
    assert len(rows) == 5 and rows[0][1] == 0.6
    assert rows[1][1] == pytest.approx(decimate_cell(2, 0.6).K_eff)
    assert rows[0][2] == rows[0][3] == pytest.approx(math.exp(-0.6))
