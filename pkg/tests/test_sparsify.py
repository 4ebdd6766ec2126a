import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import all_sides, connected_hypergraphs, oracle_cut_weights
from hypersketch.hypercore import Hyperedge, Hypergraph, InvalidArgumentError, ResourceLimitError, random_hypergraph
from hypersketch.mincut import strong_connectivities
from hypersketch.sparsify import (
    SparsifyParams,
    StreamError,
    edge_probabilities,
    expected_size_bound,
    rho,
    sampling_probability,
    sparsify,
    streaming_sparsify,
    verify_sparsifier,
)


def test_rho_examples():
    assert rho(0.5, 3, 1, 16) == pytest.approx(12 * (3 + 3 * math.log(16)))
    assert rho(0.5, 3, 1, 16) == pytest.approx(135.81, abs=0.005)
    assert rho(1.0, 3, 1, math.e) == pytest.approx(18.0, rel=1e-12)
    assert rho(1.0, 3, 1, math.e, log_offset=3) == pytest.approx(21.0, rel=1e-12)


def test_rho_monotone():
    base = rho(0.4, 3, 1, 10)
    assert rho(0.5, 3, 1, 10) < base
    assert rho(0.4, 4, 1, 10) > base
    assert rho(0.4, 3, 2, 10) > base
    assert rho(0.4, 3, 1, 11) > base


@pytest.mark.parametrize("args", [(0.0, 3, 1, 10), (1.5, 3, 1, 10), (0.5, 1, 1, 10), (0.5, 3, 0.5, 10), (0.5, 3, 1, 1)])
def test_rho_rejects(args):
    with pytest.raises(InvalidArgumentError):
        rho(*args)


def test_sampling_probability():
    assert sampling_probability(100, 0.5, 1, 16, 3) == 1.0
    threshold = rho(0.5, 3, 1, 16)
    assert sampling_probability(threshold, 0.5, 1, 16, 3) == pytest.approx(1.0)
    assert sampling_probability(threshold / 2, 0.5, 1, 16, 3) == 1.0
    p1 = sampling_probability(4 * threshold, 0.5, 1, 16, 3)
    assert p1 == pytest.approx(0.25)
    assert sampling_probability(8 * threshold, 0.5, 1, 16, 3) == pytest.approx(p1 / 2)
    for bad in (0, -1):
        with pytest.raises(InvalidArgumentError):
            sampling_probability(bad, 0.5, 1, 16, 3)


def test_params_validation():
    for eps in (0, 1, -0.2, 1.5):
        with pytest.raises(InvalidArgumentError):
            SparsifyParams(eps)
    with pytest.raises(InvalidArgumentError):
        SparsifyParams(0.5, d=0.5)


def test_all_kept_is_identity(triangle):
    sparse, report = sparsify(triangle, SparsifyParams(0.5))
    assert sparse == triangle
    assert report.edge_count == 3 and report.expected_edge_count == 3.0
    assert verify_sparsifier(triangle, sparse).max_relative_cut_error == 0.0


def test_sparsify_requires_edges():
    with pytest.raises(InvalidArgumentError):
        sparsify(Hypergraph(4), SparsifyParams(0.5))


def _heavy_instance(seed=1):
    # many parallel copies push strengths far above rho, so sampling actually happens
    rng = np.random.default_rng(seed)
    return random_hypergraph(8, 2500, 3, rng)


def test_sampling_is_subhypergraph_and_reweighted():
    H = _heavy_instance()
    params = SparsifyParams(0.5, seed=3)
    k = strong_connectivities(H)
    p = edge_probabilities(H, k, params)
    assert p.min() < 1
    sparse, report = sparsify(H, params, strengths=k)
    assert sparse.n == H.n and 0 < sparse.m < H.m
    original = {e.endpoints for e in H.edges}
    assert all(e.endpoints in original for e in sparse.edges)
    assert all(e.weight >= 1.0 - 1e-12 for e in sparse.edges)
    assert report.edge_count == sparse.m
    assert report.expected_edge_count == pytest.approx(p.sum())


def test_sampling_counter_based_per_edge():
    # edge i is kept iff the i-th uniform of the seeded Philox stream falls below p_i
    H = _heavy_instance(2)
    k = strong_connectivities(H)
    params = SparsifyParams(0.5, seed=8)
    p = edge_probabilities(H, k, params)
    u = np.random.Generator(np.random.Philox(key=8)).random(H.m)
    sparse, _ = sparsify(H, params, strengths=k)
    assert sparse.m == int((u < p).sum())
    kept_w = [e.weight for e in sparse.edges]
    assert np.allclose(kept_w, (H.weight_array / p)[u < p])


def test_sparsify_deterministic():
    H = _heavy_instance()
    a, _ = sparsify(H, SparsifyParams(0.5, seed=4))
    b, _ = sparsify(H, SparsifyParams(0.5, seed=4))
    c, _ = sparsify(H, SparsifyParams(0.5, seed=5))
    assert a == b and a != c


def test_expected_count_monotone_in_epsilon():
    H = _heavy_instance()
    k = strong_connectivities(H)
    counts = [edge_probabilities(H, k, SparsifyParams(eps)).sum() for eps in (0.9, 0.7, 0.5, 0.3)]
    assert counts == sorted(counts)


def test_weighted_probability_uses_weight_ratio():
    H = Hypergraph.from_edges(2, [((0, 1), 1000.0), ((0, 1), 1.0)])
    k = strong_connectivities(H)
    p = edge_probabilities(H, k, SparsifyParams(0.5))
    bound = rho(0.5, 2, 1, 2)
    assert p[0] == pytest.approx(min(1, bound / (1001 / 1000)))
    assert p[1] == pytest.approx(min(1, bound / 1001))


def test_unbiased_fixed_cuts():
    H = _heavy_instance(3)
    k = strong_connectivities(H)
    sides = all_sides(H.n)[[0, 10, 77]]
    truth = oracle_cut_weights(H, sides)
    samples = np.array(
        [oracle_cut_weights(sparsify(H, SparsifyParams(0.5, seed=s), strengths=k)[0], sides) for s in range(1000)]
    )
    se = samples.std(axis=0, ddof=1) / math.sqrt(len(samples))
    assert np.all(se > 0)
    assert np.all(np.abs(samples.mean(axis=0) - truth) <= 3 * se)


def test_verify_identity_and_doubled_edge(two_edge):
    assert verify_sparsifier(two_edge, two_edge).max_relative_cut_error == 0.0
    doubled = Hypergraph.from_edges(4, [((0, 1, 2), 1.0), ((2, 3), 4.0)])
    # the {2,3} edge is the whole of cut {3}: share 1, so the error is exactly 1
    sides = all_sides(4)
    w = oracle_cut_weights(two_edge, sides)
    share = np.array([2.0 if (row[2] != row[3]) else 0.0 for row in sides]) / w
    rep = verify_sparsifier(two_edge, doubled, epsilon=0.5)
    assert rep.max_relative_cut_error == pytest.approx(share.max()) == pytest.approx(1.0)
    assert rep.within_epsilon is False


def test_verify_missing_bridge_is_flagged():
    H = Hypergraph.from_edges(4, [((0, 1), 1.0), ((1, 2), 1.0), ((2, 3), 1.0)])
    H_eps = Hypergraph.from_edges(4, [((0, 1), 1.0), ((2, 3), 1.0)])
    rep = verify_sparsifier(H, H_eps, epsilon=0.99)
    assert rep.max_relative_cut_error == 1.0 and rep.within_epsilon is False


def test_verify_weight_on_empty_cut_is_infinite():
    H = Hypergraph.from_edges(4, [((0, 1), 1.0), ((2, 3), 1.0)])
    H_eps = Hypergraph.from_edges(4, [((0, 1), 1.0), ((1, 2), 1.0), ((2, 3), 1.0)])
    rep = verify_sparsifier(H, H_eps)
    assert rep.max_relative_cut_error == math.inf
    assert rep.to_dict()["max_relative_cut_error"] == "inf"


def test_verify_guards():
    with pytest.raises(ResourceLimitError):
        verify_sparsifier(Hypergraph(21), Hypergraph(21))
    with pytest.raises(InvalidArgumentError):
        verify_sparsifier(Hypergraph(3), Hypergraph(4))


def test_size_bound_formula():
    assert expected_size_bound(12, 3, 0.5) == pytest.approx(3 * 11 * (3 + 3 * math.log(12)) / 0.25)


@settings(max_examples=25, deadline=None)
@given(connected_hypergraphs(min_n=3, max_n=9), st.integers(0, 2**32 - 1), st.sampled_from([0.3, 0.6, 0.9]))
def test_sparsifier_properties(H, seed, eps):
    k = strong_connectivities(H)
    p = edge_probabilities(H, k, SparsifyParams(eps))
    assert np.all((p > 0) & (p <= 1))
    # the size budget rests on sum w_e / k_e <= n - 1
    assert sum(e.weight / ke for e, ke in zip(H.edges, k)) <= H.n - 1 + 1e-9
    sparse, _ = sparsify(H, SparsifyParams(eps, seed=seed), strengths=k)
    assert sparse.n == H.n and sparse.m <= H.m
    assert all(e.weight >= orig_w - 1e-12 for e, orig_w in _matched(H, sparse))


def _matched(H, sparse):
    pool = {}
    for e in H.edges:
        pool.setdefault(e.endpoints, []).append(e.weight)
    for e in sparse.edges:
        yield e, min(pool[e.endpoints])


# ---------------------------------------------------------------- streaming


def _stream(H):
    return [(tuple(e.endpoints), e.weight) for e in H.edges]


def test_short_stream_is_identity():
    H = random_hypergraph(10, 300, 3, np.random.default_rng(0))
    out = streaming_sparsify(_stream(H), 10, SparsifyParams(0.5), r=3)
    assert out == H


def test_stream_deterministic_with_merges():
    H = random_hypergraph(8, 3000, 3, np.random.default_rng(1))
    kw = dict(r=3, block_size=400, levels=1)
    a = streaming_sparsify(_stream(H), 8, SparsifyParams(0.9, seed=2), **kw)
    b = streaming_sparsify(iter(_stream(H)), 8, SparsifyParams(0.9, seed=2), **kw)
    assert a == b
    assert a.m < H.m


def test_stream_merge_quality():
    H = random_hypergraph(8, 3000, 3, np.random.default_rng(1))
    good = 0
    for seed in range(10):
        out = streaming_sparsify(_stream(H), 8, SparsifyParams(0.9, seed=seed), r=3, block_size=400, levels=1)
        assert out.m < H.m
        good += verify_sparsifier(H, out).max_relative_cut_error <= 0.9
    assert good >= 9


def test_stream_n12_m5000():
    H = random_hypergraph(12, 5000, 3, np.random.default_rng(12))
    good = 0
    for seed in range(20):
        out = streaming_sparsify(_stream(H), 12, SparsifyParams(0.5, seed=seed), r=3, expected_edges=5000)
        good += verify_sparsifier(H, out).max_relative_cut_error <= 0.5
    assert good >= 18


def test_stream_errors():
    with pytest.raises(StreamError):
        streaming_sparsify([((0, 5), 1.0)], 4, SparsifyParams(0.5))
    with pytest.raises(StreamError):
        streaming_sparsify([((0, 1, 2), 1.0)], 4, SparsifyParams(0.5), r=2)
    with pytest.raises(StreamError):
        streaming_sparsify([((0, 1), -1.0)], 4, SparsifyParams(0.5))
    with pytest.raises(StreamError):
        streaming_sparsify([((), 1.0)], 4, SparsifyParams(0.5))


def test_stream_accepts_hyperedges():
    edges = [Hyperedge(frozenset({0, 1}), 2.0), Hyperedge(frozenset({1, 2}), 1.0)]
    out = streaming_sparsify(edges, 3, SparsifyParams(0.5))
    assert out == Hypergraph(3, tuple(edges))
