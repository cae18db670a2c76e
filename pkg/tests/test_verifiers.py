import math
from itertools import combinations

import numpy as np
import pytest

from rtlab.hypergraph import (PartitionedHypergraph, SimpleGraph,
                              complete_uniform, turan_hypergraph)
from rtlab.rng import substream
from rtlab.sphere import build_partition
from rtlab.verifiers import (BudgetExceeded, alpha_t, far_pair_matching,
                             find_clique, find_tk, find_tkf_core,
                             hyper_independence, minimal_tkf_bound,
                             recheck_clique, recheck_sparse_pattern,
                             recheck_split_core, recheck_tk,
                             recheck_tkf_core, scan_sparse_patterns,
                             scan_split_core, tree_embedding)


def random_graph(n, p, seed):
    rng = substream(seed, "gnp")
    edges = frozenset((a, b) for a in range(n) for b in range(a + 1, n)
                      if rng.random() < p)
    return SimpleGraph(n, edges)


def random_3uniform(n, p, seed):
    rng = substream(seed, "h3")
    edges = frozenset(e for e in combinations(range(n), 3) if rng.random() < p)
    return PartitionedHypergraph(n, 3, edges)


# ---------------------------------------------------------------------------
# brute-force oracles


def brute_has_clique(g, s):
    adj = g.adjacency_sets()
    return any(all(b in adj[a] for a, b in combinations(sub, 2))
               for sub in combinations(range(g.n), s))


def brute_alpha_t(g, t):
    adj = g.adjacency_masks()
    best = 0
    for mask in range(1 << g.n):
        sub = [v for v in range(g.n) if mask >> v & 1]
        if len(sub) <= best:
            continue
        ok = True
        for cl in combinations(sub, t):
            if all(adj[a] >> b & 1 for a, b in combinations(cl, 2)):
                ok = False
                break
        if ok:
            best = len(sub)
    return best


def brute_hyper_independence(h):
    edge_masks = [sum(1 << v for v in e) for e in h.edges]
    best = 0
    for mask in range(1 << h.n):
        if bin(mask).count("1") <= best:
            continue
        if all(mask & m != m for m in edge_masks):
            best = bin(mask).count("1")
    return best


# ---------------------------------------------------------------------------
# clique search


def test_clique_finds_itself():
    g = SimpleGraph(5, frozenset(combinations(range(5), 2)))
    emb = find_clique(g, 5)
    assert emb is not None and recheck_clique(g, emb)


def test_clique_absent_in_turan_graph():
    # complete (s-1)-partite graph is K_s-free
    s = 4
    parts = [0, 0, 1, 1, 2, 2]
    edges = frozenset((a, b) for a in range(6) for b in range(a + 1, 6)
                      if parts[a] != parts[b])
    assert find_clique(SimpleGraph(6, edges), s) is None


def test_clique_agrees_with_brute_force():
    for seed in range(25):
        g = random_graph(5 + seed % 8, 0.5, seed)
        for s in (3, 4):
            emb = find_clique(g, s)
            assert (emb is not None) == brute_has_clique(g, s), (seed, s)
            if emb is not None:
                assert recheck_clique(g, emb)


def test_clique_budget_exceeded():
    g = random_graph(30, 0.8, 1)
    with pytest.raises(BudgetExceeded):
        find_clique(g, 10, budget=3)


def test_budget_env_var_honored(monkeypatch):
    g = random_graph(30, 0.8, 1)
    monkeypatch.setenv("RTLAB_BUDGET", "3")
    with pytest.raises(BudgetExceeded):
        find_clique(g, 10)
    monkeypatch.setenv("RTLAB_BUDGET", "10000000")
    find_clique(g, 10)


# ---------------------------------------------------------------------------
# K_t-independence


def test_alpha_t_complete_graph():
    g = SimpleGraph(6, frozenset(combinations(range(6), 2)))
    for t in (2, 3, 4):
        assert alpha_t(g, t) == t - 1


def test_alpha_t_edgeless():
    g = SimpleGraph(7, frozenset())
    assert alpha_t(g, 2) == 7
    assert alpha_t(g, 3) == 7


def test_alpha_t_agrees_with_brute_force():
    for seed in range(20):
        g = random_graph(5 + seed % 6, 0.5, seed + 100)
        for t in (2, 3):
            assert alpha_t(g, t) == brute_alpha_t(g, t), (seed, t)


def test_alpha_t_budget_carries_bound():
    g = random_graph(24, 0.2, 2)
    with pytest.raises(BudgetExceeded) as exc:
        alpha_t(g, 2, budget=5)
    assert exc.value.certified is not None


# ---------------------------------------------------------------------------
# hypergraph independence


def test_hyper_independence_edgeless():
    h = PartitionedHypergraph(6, 3, frozenset())
    assert hyper_independence(h) == 6


def test_hyper_independence_complete():
    assert hyper_independence(complete_uniform(7, 3)) == 2


def test_hyper_independence_agrees_with_brute_force():
    for seed in range(20):
        h = random_3uniform(5 + seed % 6, 0.4, seed)
        assert hyper_independence(h) == brute_hyper_independence(h), seed


# ---------------------------------------------------------------------------
# TK / TKF search


def test_tk_in_complete_3uniform():
    # 3 cores + 3 subdivision edges need 3 + 2*3 = 9 vertices
    h = complete_uniform(9, 3)
    emb = find_tk(h, 3)
    assert emb is not None and recheck_tk(h, emb, 3)


def test_tk_absent_in_empty():
    h = PartitionedHypergraph(8, 3, frozenset())
    assert find_tk(h, 3) is None


def test_tk_planted_in_sphere_hypergraph():
    from rtlab.constructions import ConstructionParams, sphere_hypergraph
    p = ConstructionParams(r=3, z=10, alpha=0.3, beta=0.3,
                           epsilon=0.5 * math.sqrt(5), k=5, seed=2)
    part = build_partition(p.k, p.z, p.theta, p.seed, balance_iters=4,
                           diag_samples=2000)
    h = sphere_hypergraph(p, part)
    assert find_tk(h, 4) is None
    # plant a 4-core subdivision on fresh vertex indices via edge insertion
    rng = substream(5, "plant-tk")
    verts = rng.choice(h.n, 10, replace=False).tolist()
    cores, fresh = verts[:4], verts[4:]
    planted = set()
    for i, (a, b) in enumerate(combinations(cores, 2)):
        planted.add(tuple(sorted((a, b, fresh[i]))))
    h2 = PartitionedHypergraph(h.n, 3, frozenset(h.edges | planted), h.part_of)
    emb = find_tk(h2, 4)
    assert emb is not None and recheck_tk(h2, emb, 4)


def test_tkf_core_single_edge():
    h = PartitionedHypergraph(3, 3, frozenset([(0, 1, 2)]))
    emb = find_tkf_core(h, 2)
    assert emb is not None and recheck_tkf_core(h, emb)


def test_tkf_core_in_turan():
    h = turan_hypergraph(12, 4, 3)
    emb = find_tkf_core(h, 4)
    assert emb is not None and recheck_tkf_core(h, emb)
    parts = {h.part_of[v] for v in emb.vertex_map.values()}
    assert len(parts) == 4  # cores must sit in distinct parts


def test_tkf_core_absent_edgeless():
    h = PartitionedHypergraph(4, 3, frozenset())
    assert find_tkf_core(h, 2) is None


# ---------------------------------------------------------------------------
# split-core scan


def test_split_core_hand_built_violation():
    # 4 vertices 2+2 across two parts, all six pairs covered
    parts = (0, 0, 1, 1, 2, 2, 2)
    edges = frozenset([
        (0, 1, 4),   # covers the part-0 pair
        (2, 3, 5),   # covers the part-1 pair
        (0, 2, 6), (0, 3, 6), (1, 2, 6), (1, 3, 6),
    ])
    h = PartitionedHypergraph(7, 3, edges, parts)
    emb = scan_split_core(h)
    assert emb is not None and recheck_split_core(h, emb)


def test_split_core_none_on_single_part():
    h = PartitionedHypergraph(5, 3, frozenset([(0, 1, 2), (1, 2, 3)]),
                              (0,) * 5)
    assert scan_split_core(h) is None


def test_split_core_none_on_sphere_instance():
    from rtlab.constructions import ConstructionParams, sphere_hypergraph
    p = ConstructionParams(r=3, z=14, alpha=0.3, beta=0.3,
                           epsilon=0.5 * math.sqrt(6), k=6, seed=4)
    part = build_partition(p.k, p.z, p.theta, p.seed, balance_iters=4,
                           diag_samples=2000)
    assert scan_split_core(sphere_hypergraph(p, part)) is None


# ---------------------------------------------------------------------------
# sparse patterns


def test_sparse_two_edges_sharing_two_vertices():
    h = PartitionedHypergraph(4, 3, frozenset([(0, 1, 2), (0, 1, 3)]))
    emb = scan_sparse_patterns(h, 3, 9)
    assert emb is not None
    assert recheck_sparse_pattern(h, emb, 3, 9)


def test_sparse_linear_path_clean():
    # loose path: consecutive edges share one vertex; v = 3 + 2(m-1) exactly
    edges = [(0, 1, 2), (2, 3, 4), (4, 5, 6), (6, 7, 8)]
    h = PartitionedHypergraph(9, 3, frozenset(edges))
    assert scan_sparse_patterns(h, 3, 9) is None


def test_sparse_finds_tk33():
    # 3-core subdivision: v=6, m=3; 6 < 3 + 2*2 = 7
    edges = [(0, 1, 3), (0, 2, 4), (1, 2, 5)]
    h = PartitionedHypergraph(6, 3, frozenset(edges))
    emb = scan_sparse_patterns(h, 3, 9)
    assert emb is not None
    assert len(emb.edges_used) == 3


def test_connected_subset_enumeration_matches_brute_force():
    from itertools import combinations as combs
    from rtlab.verifiers import _Counter, connected_edge_subsets

    def brute(edges, max_v):
        out = set()
        for size in range(1, len(edges) + 1):
            for sub in combs(range(len(edges)), size):
                verts = set()
                for i in sub:
                    verts.update(edges[i])
                if len(verts) > max_v:
                    continue
                left, reach = set(sub[1:]), set(edges[sub[0]])
                while True:
                    add = {i for i in left if reach & set(edges[i])}
                    if not add:
                        break
                    for i in add:
                        reach.update(edges[i])
                    left -= add
                if not left:
                    out.add(sub)
        return out

    rng = substream(500, "enum-oracle")
    for trial in range(25):
        n = 5 + trial % 5
        m = 2 + trial % 7
        edges = set()
        while len(edges) < m:
            edges.add(tuple(sorted(rng.choice(n, 3, replace=False).tolist())))
        h = PartitionedHypergraph(n, 3, frozenset(edges))
        got = set()
        for sub, _ in connected_edge_subsets(h, 7, _Counter(10 ** 9),
                                             min_edges=1):
            assert sub not in got
            got.add(sub)
        assert got == brute(h.sorted_edges(), 7)


def test_minimal_tkf_bound_values():
    assert minimal_tkf_bound(3, 3) == 6
    assert minimal_tkf_bound(2, 1) == 2
    with pytest.raises(ValueError):
        minimal_tkf_bound(1, 1)


def test_minimal_tkf_bound_by_exhaustive_generation():
    # every minimal 4-core cover family member on <= 7 vertices obeys the
    # bound; enumerate all candidate edge sets over cores {0,1,2,3} plus
    # up to three extra vertices
    cores = (0, 1, 2, 3)
    core_pairs = list(combinations(cores, 2))
    candidates = [e for e in combinations(range(7), 3)
                  if sum(v in cores for v in e) >= 2]
    checked = 0
    for m in range(2, 7):
        for sub in combinations(candidates, m):
            covered = {pair for pair in core_pairs
                       if any(pair[0] in e and pair[1] in e for e in sub)}
            if len(covered) != len(core_pairs):
                continue
            # minimality: dropping any edge must lose some covered pair
            minimal = True
            for drop in range(m):
                rest = sub[:drop] + sub[drop + 1:]
                cov = {pair for pair in core_pairs
                       if any(pair[0] in e and pair[1] in e for e in rest)}
                if len(cov) == len(core_pairs):
                    minimal = False
                    break
            if not minimal:
                continue
            verts = set()
            for e in sub:
                verts.update(e)
            assert len(verts) <= minimal_tkf_bound(3, m), (sub, m)
            checked += 1
    assert checked > 0


# ---------------------------------------------------------------------------
# far-pair matching and tree embedding


def test_far_matching_shared_point_empty():
    part = build_partition(4, 6, 0.4, seed=3, balance_iters=0,
                           diag_samples=500)
    assert far_pair_matching([0], [0], part, 0.4) == []


def test_far_matching_antipodal_pair():
    reps = np.array([[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]])
    from rtlab.sphere import SpherePartition
    part = SpherePartition(k=2, z=2, reps=reps, domain_diam_bound=0.1, seed=0)
    assert far_pair_matching([0], [1], part, 0.3) == [(0, 1)]


def brute_max_matching(adj_matrix):
    # DP over subsets of the right side
    n_l, n_r = adj_matrix.shape
    best = 0
    # small sizes only: try all injections left -> right
    def rec(li, used):
        nonlocal best
        if li == n_l:
            best = max(best, len(used))
            return
        rec(li + 1, used)
        for rj in range(n_r):
            if rj not in used and adj_matrix[li, rj]:
                rec(li + 1, used | {rj})
    rec(0, frozenset())
    return best


def test_far_matching_matches_oracle():
    part = build_partition(10, 8, 0.4, seed=6, balance_iters=0,
                           diag_samples=500)
    theta = 0.9
    got = far_pair_matching(list(range(4)), list(range(4, 8)), part, theta)
    d = part.distance_matrix()
    adj = np.array([[d[i, j] >= 2 - theta for j in range(4, 8)]
                    for i in range(4)])
    assert len(got) == brute_max_matching(adj)
    for i, j in got:
        assert d[i, j] >= 2 - theta


def test_far_matching_monotone_in_theta():
    part = build_partition(6, 10, 0.4, seed=8, balance_iters=0,
                           diag_samples=500)
    a1, a2 = list(range(5)), list(range(5, 10))
    sizes = [len(far_pair_matching(a1, a2, part, th))
             for th in (0.2, 0.5, 0.9, 1.3)]
    assert sizes == sorted(sizes)


def test_tree_embedding_single_edge():
    reps = np.array([[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]])
    from rtlab.sphere import SpherePartition
    part = SpherePartition(k=2, z=2, reps=reps, domain_diam_bound=0.1, seed=0)
    got = tree_embedding([[0], [1]], [(0, 1)], part, 0.3)
    assert got == {0: 0, 1: 1}


def test_tree_embedding_star_on_antipodal_sets():
    # sets all {p, -p}; star center must map to one pole and leaves to the
    # other
    reps = np.array([[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]])
    from rtlab.sphere import SpherePartition
    part = SpherePartition(k=2, z=2, reps=reps, domain_diam_bound=0.1, seed=0)
    sets = [[0, 1], [0, 1], [0, 1]]
    got = tree_embedding(sets, [(0, 1), (0, 2)], part, 0.3)
    assert got is not None
    center, l1, l2 = got[0], got[1], got[2]
    assert l1 != center and l2 != center
    d = part.distance_matrix()
    for a, b in ((got[0], got[1]), (got[0], got[2])):
        assert d[a, b] >= 2 - 0.3


def test_tree_embedding_postcondition_recheck():
    part = build_partition(8, 14, 0.5, seed=12, balance_iters=0,
                           diag_samples=500)
    theta = 1.1
    sets = [sorted(np.arange(14)[i::3].tolist()) for i in range(3)]
    tree = [(0, 1), (1, 2)]
    got = tree_embedding(sets, tree, part, theta)
    if got is not None:
        d = part.distance_matrix()
        for a, b in tree:
            assert d[got[a], got[b]] >= 2 - theta


def test_tree_embedding_rejects_non_tree():
    part = build_partition(3, 4, 0.4, seed=1, balance_iters=0,
                           diag_samples=500)
    with pytest.raises(ValueError):
        tree_embedding([[0], [1], [2]], [(0, 1)], part, 0.3)


# ---------------------------------------------------------------------------
# density reports


def test_density_report_empty_hypergraph():
    from rtlab.verifiers import density_report
    h = PartitionedHypergraph(0, 3, frozenset(), ())
    rep = density_report(h)
    assert rep.verdict == "holds"
    assert all(r["value"] == 0 for r in rep.rows if r["quantity"] == "edges")


def test_density_report_shadow_double_count():
    from rtlab.constructions import (ConstructionParams, full_construction,
                                     shadow_first_parts)
    from rtlab.verifiers import density_report
    p = ConstructionParams(r=3, z=12, alpha=0.3, beta=0.3,
                           epsilon=0.5 * math.sqrt(5), k=5, seed=5,
                           blowup_t=2, pattern_cap=10)
    h = full_construction(p)
    sh = shadow_first_parts(h, 2)
    rep = density_report(sh)
    assert rep.verdict == "holds"
    dbl = [r for r in rep.rows if r["quantity"] == "block_double_count"]
    assert dbl and dbl[0]["ok"]


def test_density_report_cross_identity_on_full_construction():
    from rtlab.constructions import ConstructionParams, full_construction
    from rtlab.verifiers import density_report
    p = ConstructionParams(r=3, z=10, alpha=0.3, beta=0.3,
                           epsilon=0.5 * math.sqrt(5), k=5, seed=3,
                           blowup_t=2, pattern_cap=10)
    h = full_construction(p)
    rep = density_report(h, p)
    assert rep.verdict == "holds"
    ident = [r for r in rep.rows if r["quantity"] == "cross_blowup_identity"]
    assert ident and ident[0]["ok"] and ident[0]["asserted"]
