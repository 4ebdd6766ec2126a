import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import all_sides, connected_hypergraphs, oracle_cut_weights
from hypersketch.contract import (
    ContractionState,
    contract_algorithm,
    contract_edge,
    contraction_trials,
    cut_count_bound,
    enumerate_near_min_cuts,
    q_bound,
    sunflower,
)
from hypersketch.hypercore import Cut, Hypergraph, InvalidArgumentError, cut_weight, enumerate_cuts_below
from hypersketch.mincut import min_cut


def test_contract_triangle(triangle):
    s = contract_edge(ContractionState.from_hypergraph(triangle), 0)
    assert s.size == 2
    assert sorted(w for _, w in s.edges) == [1.0, 1.0]
    assert all(ends == {0, 1} for ends, _ in s.edges)
    assert s.blocks == (frozenset({0, 1}), frozenset({2}))


def test_contract_shrinks_cardinality():
    H = Hypergraph.from_edges(5, [((0, 1, 2, 3), 1.0), ((0, 1, 2), 1.0), ((3, 4), 1.0)])
    s = contract_edge(ContractionState.from_hypergraph(H), 1)
    assert s.size == 3
    assert [len(ends) for ends, _ in s.edges] == [2, 2]
    assert s.edges[0][0] == {0, 1}


def test_contract_only_edge_leaves_nothing():
    H = Hypergraph.from_edges(2, [((0, 1), 1.0)])
    s = contract_edge(ContractionState.from_hypergraph(H), 0)
    assert s.size == 1 and s.edges == ()


def test_contract_self_loop_rejected():
    s = ContractionState((frozenset({0}), frozenset({1})), ((frozenset({0}), 1.0),))
    with pytest.raises(InvalidArgumentError):
        contract_edge(s, 0)


@settings(max_examples=40)
@given(connected_hypergraphs(min_n=3, max_n=8), st.data())
def test_contraction_state_invariants(H, data):
    s = ContractionState.from_hypergraph(H)
    while s.edges and s.size > 2:
        before = s.total_weight
        idx = data.draw(st.integers(0, len(s.edges) - 1))
        s = contract_edge(s, idx)
        assert s.total_weight <= before + 1e-12
        assert all(len(ends) >= 2 for ends, _ in s.edges)
        covered = sorted(v for b in s.blocks for v in b)
        assert covered == list(range(H.n))
        # every cut of the contracted graph weighs the same as the cut it induces
        for chosen in ({1}, set(range(1, s.size))):
            if s.size >= 2:
                C = s.induced_cut(chosen)
                assert cut_weight(s.as_hypergraph(), Cut.from_set(s.size, chosen)) == pytest.approx(cut_weight(H, C))


def test_alpha_validation(triangle):
    for bad in (0.5, 0.9, 1.25):
        with pytest.raises(InvalidArgumentError):
            contract_algorithm(triangle, bad, np.random.default_rng(0))
        with pytest.raises(InvalidArgumentError):
            enumerate_near_min_cuts(triangle, bad, 10, 0)


def test_no_contraction_when_small():
    # n = 4 <= alpha*r = 2*2: output is uniform over the 7 nontrivial bipartitions
    H = Hypergraph.from_edges(4, [((0, 1), 1.0), ((1, 2), 1.0), ((2, 3), 1.0)])
    masks = contraction_trials(H, 2, 70_000, seed=3)
    uniq, counts = np.unique(masks, return_counts=True)
    assert len(uniq) == 7
    p = 1 / 7
    sigma = math.sqrt(p * (1 - p) / 70_000)
    assert np.all(np.abs(counts / 70_000 - p) < 4 * sigma)


def test_triangle_karger_frequency(triangle):
    trials = 100_000
    masks = contraction_trials(triangle, 1, trials, seed=0)
    p = 1 / 3
    sigma = math.sqrt(p * (1 - p) / trials)
    for m in (0b010, 0b100, 0b110):
        assert np.mean(masks == m) >= p - 3 * sigma


def test_literal_and_bulk_agree():
    # both implementations of the same process should give matching distributions
    H = Hypergraph.from_edges(
        6, [((0, 1, 2), 2.0), ((2, 3), 1.0), ((3, 4, 5), 3.0), ((0, 5), 1.0), ((1, 4), 1.0)]
    )
    trials = 6000
    rng = np.random.default_rng(9)
    lit = np.array([contract_algorithm(H, 1, rng).canonical_mask for _ in range(trials)])
    bulk = contraction_trials(H, 1, 40_000, seed=9)
    keys = sorted(set(lit.tolist()) | set(bulk.tolist()))
    for k in keys:
        p1, p2 = np.mean(lit == k), np.mean(bulk == k)
        sd = math.sqrt(p2 * (1 - p2) * (1 / trials + 1 / 40_000)) + 1e-4
        assert abs(p1 - p2) < 5 * sd


def test_contract_algorithm_nontrivial_and_deterministic():
    H = Hypergraph.from_edges(7, [((i, (i + 1) % 7, (i + 3) % 7), 1.0) for i in range(7)])
    for seed in range(20):
        a = contract_algorithm(H, 1.5, np.random.default_rng(seed))
        b = contract_algorithm(H, 1.5, np.random.default_rng(seed))
        assert not a.is_trivial and a.side == b.side and a.side[0] is False


def test_contraction_trials_deterministic_and_worker_independent(triangle):
    a = contraction_trials(triangle, 1, 9000, seed=4)
    b = contraction_trials(triangle, 1, 9000, seed=4)
    c = contraction_trials(triangle, 1, 9000, seed=4, workers=2)
    assert np.array_equal(a, b) and np.array_equal(a, c)
    assert not np.array_equal(a, contraction_trials(triangle, 1, 9000, seed=5))


def test_disconnected_remainder_still_cuts():
    H = Hypergraph.from_edges(6, [((0, 1), 1.0), ((2, 3), 1.0), ((4, 5), 1.0)])
    masks = contraction_trials(H, 1, 500, seed=0)
    assert np.all(masks != 0) and np.all(masks & 1 == 0)
    c = contract_algorithm(H, 1, np.random.default_rng(0))
    assert not c.is_trivial


def test_q_bound_examples():
    for n in range(3, 12):
        assert q_bound(n, 2, 1) == pytest.approx(2 / (n * (n - 1)), rel=1e-12)
    assert q_bound(6, 3, 1) == pytest.approx(0.025, rel=1e-12)
    assert q_bound(3, 3, 1) == pytest.approx(1 / 3, rel=1e-12)


def test_q_bound_half_integer_matches_gamma():
    # binom(x, k) through the Gamma function, compared with the falling-factorial form
    for n, r, alpha in [(9, 3, 1.5), (11, 4, 1.5), (14, 3, 2.5), (20, 5, 2)]:
        x = n - alpha * (r - 2)
        k = 2 * alpha
        binom = math.exp(math.lgamma(x + 1) - math.lgamma(k + 1) - math.lgamma(x - k + 1))
        want = (2 * alpha + 1) / (r + 1) / binom / (2 ** (alpha * r - 1) - 1)
        assert q_bound(n, r, alpha) == pytest.approx(want, rel=1e-10)


def test_q_bound_validation():
    with pytest.raises(InvalidArgumentError):
        q_bound(1, 3, 1)
    with pytest.raises(InvalidArgumentError):
        q_bound(6, 1, 1)
    with pytest.raises(InvalidArgumentError):
        q_bound(6, 3, 1.2)


def test_cut_count_bound():
    assert cut_count_bound(10, 2, 1) == 4 * 100
    assert cut_count_bound(10, 2, 1, constant=4) == 1600


def test_enumerate_near_min_cuts_triangle(triangle):
    got = enumerate_near_min_cuts(triangle, 1, 10_000, seed=0)
    want = {c for c, _ in enumerate_cuts_below(triangle, 2)}
    assert got == want and len(got) == 3


def test_sunflower_shape():
    H = sunflower(3, 2, 2)
    assert H.n == 5
    assert sorted(e.weight for e in H.edges) == [0.125] * 6 + [1.0, 1.0]
    big = [e.endpoints for e in H.edges if len(e) == 3]
    assert big[0] & big[1] == {0}
    for r in range(2, 6):
        for m in range(1, 5):
            assert sunflower(r, m, 1.5).n == r * m - m + 1
    with pytest.raises(InvalidArgumentError):
        sunflower(3, 2, 1)


def test_sunflower_min_cut_and_count():
    H = sunflower(3, 2, 2)
    _, w_hat = min_cut(H)
    assert w_hat == pytest.approx(1.25)
    found = enumerate_cuts_below(H, 2 * w_hat)
    assert len(found) >= 2 * (2 ** 2 - 1)
    recovered = enumerate_near_min_cuts(H, 2, 20_000, seed=1)
    assert recovered == {c for c, _ in found}


@settings(max_examples=15, deadline=None)
@given(connected_hypergraphs(min_n=3, max_n=7, max_r=3), st.integers(0, 2**31))
def test_contraction_outputs_are_cuts(H, seed):
    masks = contraction_trials(H, 1, 200, seed)
    assert np.all(masks > 0) and np.all(masks < (1 << H.n) - 1) and np.all(masks & 1 == 0)
    sides = ((masks[:, None] >> np.arange(H.n)) & 1)
    w = oracle_cut_weights(H, sides)
    assert np.all(w >= oracle_cut_weights(H, all_sides(H.n)).min() - 1e-9)


def test_q_bound_monotone_in_n():
    vals = [Fraction(q_bound(n, 3, 1)).limit_denominator(10**12) for n in range(4, 15)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
