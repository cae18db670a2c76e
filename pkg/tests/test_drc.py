from fractions import Fraction
from itertools import combinations

import pytest

from rtlab.drc import (DrcParams, PipelineFailure, average_degree,
                       count_dangerous_sets, drc_feasible, drc_find_set,
                       drc_recheck, extension_count, find_f_witness,
                       find_tkf5_tk4, hyper_drc, recheck_f_witness,
                       recheck_tk4, tk6_constants, tk6_thresholds)
from rtlab.hypergraph import (PartitionedHypergraph, SimpleGraph,
                              complete_uniform, turan_hypergraph)
from rtlab.rng import substream
from rtlab.verifiers import recheck_tk, recheck_tkf_core


def gnp(n, prob, seed):
    rng = substream(seed, "gnp")
    edges = frozenset((a, b) for a in range(n) for b in range(a + 1, n)
                      if rng.random() < prob)
    return SimpleGraph(n, edges)


def dense_random_3u(n, prob, seed):
    rng = substream(seed, "dense3u")
    edges = frozenset(e for e in combinations(range(n), 3)
                      if rng.random() < prob)
    return PartitionedHypergraph(n, 3, edges)


# ---------------------------------------------------------------------------
# feasibility (exact arithmetic)


def test_feasible_worked_example():
    # 50^2/100 - C(100,2) (5/100)^2 = 25 - 12.375 = 12.625 >= 12
    p = DrcParams(a=12, m=5, n=100, r=2, t=2)
    assert drc_feasible(p, 50)
    assert not drc_feasible(DrcParams(a=13, m=5, n=100, r=2, t=2), 50)


def test_feasible_m_equals_n():
    # (m/n)^t = 1: left side <= d^t/n^(t-1) - C(n, r)
    import math
    n, t, r, d = 30, 2, 2, 20
    cap = Fraction(d) ** t / Fraction(n) ** (t - 1) - math.comb(n, r)
    a_ok = int(cap) if cap == int(cap) else int(cap)
    p_bad = DrcParams(a=max(1, a_ok + 1), m=n, n=n, r=r, t=t)
    assert not drc_feasible(p_bad, d)


def test_feasible_complete_graph_exact_boundary():
    import math
    n, t, r, m = 20, 3, 2, 1
    d = Fraction(n - 1)
    bound = d ** t / Fraction(n) ** (t - 1) - math.comb(n, r) * Fraction(m, n) ** t
    floor_a = int(bound)
    assert drc_feasible(DrcParams(a=floor_a, m=m, n=n, r=r, t=t), d)
    assert not drc_feasible(DrcParams(a=floor_a + 1, m=m, n=n, r=r, t=t), d)


def test_feasible_exact_arithmetic_repeatable():
    p = DrcParams(a=12, m=5, n=100, r=2, t=2)
    lhs = Fraction(50) ** 2 / Fraction(100) - 4950 * Fraction(5, 100) ** 2
    assert lhs == Fraction(101, 8)
    assert drc_feasible(p, Fraction(50)) is drc_feasible(p, Fraction(50))


# ---------------------------------------------------------------------------
# set finding


def test_find_set_complete_graph():
    import math
    g = SimpleGraph(20, frozenset(combinations(range(20), 2)))
    p = DrcParams(a=17, m=1, n=20, r=2, t=2)
    assert drc_feasible(p, average_degree(g))
    u = drc_find_set(g, p, seed=1)
    assert u is not None and len(u) >= 17
    assert drc_recheck(g, u, 2, 1)


def test_find_set_rejects_edgeless():
    g = SimpleGraph(10, frozenset())
    with pytest.raises(ValueError):
        drc_find_set(g, DrcParams(a=2, m=1, n=10, r=2, t=2), seed=0)


def test_find_set_gnp_verified():
    g = gnp(200, 0.5, seed=3)
    p = DrcParams(a=6, m=8, n=200, r=2, t=4)
    u = drc_find_set(g, p, seed=3)
    assert u is not None and len(u) >= 6
    assert drc_recheck(g, u, 2, 8)


# ---------------------------------------------------------------------------
# hypergraph form


def test_hyper_drc_rejects_s0():
    h = turan_hypergraph(9, 3, 3)
    with pytest.raises(ValueError):
        hyper_drc(h, 0)


def test_hyper_drc_complete_multipartite():
    h = turan_hypergraph(9, 3, 3)
    for s in (1, 2, 3):
        out = hyper_drc(h, s, seed=s)
        # every transversal pair over parts 1 and 2 survives
        assert len(out.edges) == 9
        assert out.r == 2


def test_hyper_drc_matches_brute_force_links():
    rng = substream(11, "h3p")
    parts = tuple([0] * 12 + [1] * 12 + [2] * 12)
    edges = set()
    for a in range(12):
        for b in range(12, 24):
            for c in range(24, 36):
                if rng.random() < 0.5:
                    edges.add((a, b, c))
    h = PartitionedHypergraph(36, 3, frozenset(edges), parts)
    out = hyper_drc(h, 2, seed=5)
    samples = out.meta["samples"]
    # brute-force oracle: scan all transversal pairs directly
    want = set()
    for b in range(12, 24):
        for c in range(24, 36):
            if all(tuple(sorted((w, b, c))) in h.edges for w in samples):
                want.add((b, c))
    assert out.edges == frozenset(want)


def test_extension_count_and_dangerous_census():
    h = turan_hypergraph(9, 3, 3)
    out = hyper_drc(h, 1, seed=2)
    some_edges = sorted(out.edges)[:2]
    assert extension_count(h, some_edges) == 3
    # complete host: no dangerous sets at beta below 1
    n_bad = count_dangerous_sets(h, out, delta=2, beta=0.5, weight=4)
    assert n_bad == 0


# ---------------------------------------------------------------------------
# witness pipelines


def test_find_f_on_complete_12():
    h = complete_uniform(12, 3)
    p = DrcParams(a=3, m=3, t=2, s=1, codegree_threshold=2, retries=32)
    w = find_f_witness(h, p, seed=1)
    assert recheck_f_witness(h, w)


def test_find_f_fails_on_edgeless():
    h = PartitionedHypergraph(12, 3, frozenset())
    p = DrcParams(a=3, m=3, t=2, s=1, codegree_threshold=2, retries=4)
    with pytest.raises(PipelineFailure) as exc:
        find_f_witness(h, p, seed=1)
    assert exc.value.stage == "cleaning"


def test_find_f_dense_random_with_tk6():
    h = dense_random_3u(30, 0.9, seed=4)
    p = DrcParams(a=4, m=4, t=2, s=2, codegree_threshold=4, retries=64)
    w = find_f_witness(h, p, seed=4)
    assert recheck_f_witness(h, w)
    assert w.tk is not None and recheck_tk(h, w.tk, 6)


def test_find_tkf5_on_complete_12():
    # the 4-core subdivision needs 10 distinct vertices, so 12 suffice
    h = complete_uniform(12, 3)
    tkf5, tk4 = find_tkf5_tk4(h, eps=0.1, codegree_threshold=2, seed=2)
    assert recheck_tkf_core(h, tkf5)
    assert tk4 is not None and recheck_tk4(h, tk4)


def test_find_tkf5_cleaning_wipes_low_codegree():
    # every cross pair has codegree exactly 1 <= threshold
    h = turan_hypergraph(9, 3, 3)
    edges = sorted(h.edges)[:6]
    sparse = PartitionedHypergraph(9, 3, frozenset(edges[:1]), h.part_of)
    with pytest.raises(PipelineFailure) as exc:
        find_tkf5_tk4(sparse, eps=0.05, codegree_threshold=16, seed=1)
    assert exc.value.stage == "cleaning"


def test_find_tkf5_planted_recovery():
    base = turan_hypergraph(61, 3, 3)  # parts 21, 20, 20
    big = base.part_vertices(0)
    rng = substream(7, "plant")
    plant = tuple(sorted(rng.choice(big, 3, replace=False).tolist()))
    h = PartitionedHypergraph(61, 3, frozenset(base.edges | {plant}),
                              base.part_of)
    tkf5, tk4 = find_tkf5_tk4(h, eps=0.2, codegree_threshold=16, seed=7)
    assert set(plant) <= set(tkf5.vertex_map.values())
    assert recheck_tkf_core(h, tkf5)
    assert tk4 is not None and recheck_tk4(h, tk4)


# ---------------------------------------------------------------------------
# asymptotic thresholds


def test_tk6_thresholds_finite_at_huge_n():
    beta, s, eps, threshold = tk6_thresholds(2 ** 1000, 10.0)
    assert 0 < beta < 1
    assert s > 0 and 0 < eps < 1
    assert isinstance(threshold, int) and threshold > 0


def test_tk6_beta_decreasing_in_gamma():
    b1, _, _, _ = tk6_thresholds(10 ** 6, 2.0)
    b2, _, _, _ = tk6_thresholds(10 ** 6, 4.0)
    assert b2 < b1


def test_tk6_constant_chain():
    c = tk6_constants()
    assert c["b"] == 9 * c["c"]
    assert c["c"] == 4 * 3 * 9 * 6 ** 27 * 3 ** 6
