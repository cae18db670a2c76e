"""Builders for the extremal constructions.

The two-sided sphere graph (antipodal inside rule, near-orthogonal cross
rule), the r-part tuple-vertex hypergraph, the probabilistic blowup with
sparse-pattern deletion, the fully assembled blown-up construction, shadow
graphs restricted to leading parts, the complete-join corollary graph, and
the exact rational bound/mixing optimization.
"""

import json
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .hypergraph import (PartitionedHypergraph, SimpleGraph, blowup,
                         complete_join, shadow)
from .rng import substream
from .sphere import SQRT2, SpherePartition, build_partition
from .verifiers import (_has_clique_mask, blowup_deletion_condition,
                        find_clique, sparse_pattern_doomed_edges)


# ---------------------------------------------------------------------------
# parameters


@dataclass
class ConstructionParams:
    """Knobs of the construction family.

    theta = epsilon/sqrt(k) and u = ceil(r/2) are derived; a stored theta
    must agree with epsilon/sqrt(k) to 1e-12.  pattern_cap defaults to
    r^3.  All randomness flows from the single seed.
    """

    r: int
    z: int
    alpha: float
    beta: float
    epsilon: float
    k: int
    blowup_t: int = 2
    gamma: float = 0.3
    pattern_cap: int | None = None
    seed: int = 0
    theta: float | None = None
    u: int | None = None
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.r < 2:
            raise ValueError("uniformity r must be >= 2")
        if self.z < 1:
            raise ValueError("partition size z must be >= 1")
        if self.k < 1:
            raise ValueError("sphere dimension k must be >= 1")
        if not 0.0 < self.alpha < 1.0 or not 0.0 < self.beta < 1.0:
            raise ValueError("alpha and beta must lie in (0, 1)")
        if not 0.0 < self.gamma < 1.0:
            raise ValueError("gamma must lie in (0, 1)")
        if self.blowup_t < 1:
            raise ValueError("blowup factor must be >= 1")
        derived = self.epsilon / math.sqrt(self.k)
        if self.theta is None:
            self.theta = derived
        elif abs(self.theta - derived) > 1e-12:
            raise ValueError("theta must equal epsilon/sqrt(k)")
        derived_u = (self.r + 1) // 2
        if self.u is None:
            self.u = derived_u
        elif self.u != derived_u:
            raise ValueError("u must equal ceil(r/2)")
        if self.pattern_cap is None:
            self.pattern_cap = self.r ** 3
        if self.pattern_cap < self.r:
            raise ValueError("pattern cap must be >= r")

    def to_json(self) -> dict:
        out = {
            "r": self.r, "z": self.z, "alpha": self.alpha, "beta": self.beta,
            "epsilon": self.epsilon, "k": self.k, "blowup_t": self.blowup_t,
            "gamma": self.gamma, "pattern_cap": self.pattern_cap,
            "seed": self.seed, "theta": self.theta, "u": self.u,
        }
        out.update(self.extras)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "ConstructionParams":
        known = {"r", "z", "alpha", "beta", "epsilon", "k", "blowup_t",
                 "gamma", "pattern_cap", "seed", "theta", "u"}
        kwargs = {k: v for k, v in data.items() if k in known}
        extras = {k: v for k, v in data.items() if k not in known}
        return cls(extras=extras, **kwargs)

    @classmethod
    def from_file(cls, path: str) -> "ConstructionParams":
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def build_partition(self) -> SpherePartition:
        return build_partition(self.k, self.z, self.theta, self.seed)


# ---------------------------------------------------------------------------
# the two-sided sphere graph


def bollobas_erdos(partition: SpherePartition, epsilon: float, k: int) -> SimpleGraph:
    """Two copies of the partition's point set; inside a side an edge
    joins near-antipodal points (d >= 2 - theta), across the sides an
    edge joins near-orthogonal points (d <= sqrt(2) - theta)."""
    if k != partition.k:
        raise ValueError("dimension does not match the partition")
    theta = epsilon / math.sqrt(k)
    z = partition.z
    d = partition.distance_matrix()
    edges = set()
    for i in range(z):
        for j in range(i + 1, z):
            if d[i, j] >= 2.0 - theta:
                edges.add((i, j))
                edges.add((z + i, z + j))
    for i in range(z):
        for j in range(z):
            if d[i, j] <= SQRT2 - theta:
                edges.add((i, z + j))
    parts = tuple([0] * z + [1] * z)
    return SimpleGraph(2 * z, frozenset(edges), parts)


# ---------------------------------------------------------------------------
# tuple vertices and the r-part hypergraph


def tuple_vertices(partition: SpherePartition, u: int, theta: float) -> list:
    """All ordered u-tuples of rep indices with pairwise distances
    <= sqrt(2) - theta (repeats allowed, d(p,p)=0), in lexicographic
    order."""
    if u < 1:
        raise ValueError("tuple length must be >= 1")
    z = partition.z
    if u == 1:
        return [(i,) for i in range(z)]
    close = partition.distance_matrix() <= SQRT2 - theta
    out = []

    def extend(prefix):
        if len(prefix) == u:
            out.append(tuple(prefix))
            return
        allowed = np.ones(z, dtype=bool)
        for i in prefix:
            allowed &= close[i]
        for j in np.nonzero(allowed)[0]:
            extend(prefix + [int(j)])

    extend([])
    return out


class PartTooLarge(RuntimeError):
    """Exhaustive enumeration refused: tuple-vertex count over the cap."""


def sphere_hypergraph(params: ConstructionParams, partition: SpherePartition,
                      max_part_size: int = 5000,
                      max_cross_assignments: int = 5_000_000,
                      sample_inside: int | None = None) -> PartitionedHypergraph:
    """r parts, each a copy of the tuple vertices.  An r-set inside a part
    is an edge when every pair of its tuples is far in some shared
    coordinate position (d >= 2 - theta); a transversal r-set is an edge
    when every coordinate pair across the tuples is close
    (d <= sqrt(2) - theta).  Both families are enumerated exhaustively;
    `sample_inside` switches the inside family to a uniform sample of
    r-subsets with a count estimate and its CI in meta.
    """
    r, u, theta = params.r, params.u, params.theta
    V = tuple_vertices(partition, u, theta)
    nv = len(V)
    if nv > max_part_size and sample_inside is None:
        raise PartTooLarge(f"{nv} tuple vertices exceed the cap {max_part_size}")
    n = r * nv
    part_of = tuple(p for p in range(r) for _ in range(nv))
    edges: set = set()
    meta = {"tuple_count": nv, "z": partition.z, "theta": theta,
            "r": r, "u": u}
    if nv == 0:
        return PartitionedHypergraph(0, r, frozenset(), (), meta=meta)

    dm = partition.distance_matrix()
    T = np.array(V, dtype=int)

    # tuple-close: all u^2 coordinate pairs within sqrt(2) - theta
    closeM = dm <= SQRT2 - theta
    tclose = np.ones((nv, nv), dtype=bool)
    for j in range(u):
        for m in range(u):
            tclose &= closeM[np.ix_(T[:, j], T[:, m])]

    # tuple-far: some shared coordinate position at distance >= 2 - theta
    farM = dm >= 2.0 - theta
    tfar = np.zeros((nv, nv), dtype=bool)
    for j in range(u):
        tfar |= farM[np.ix_(T[:, j], T[:, j])]
    np.fill_diagonal(tfar, False)

    # inside edges: r-cliques of the far graph, one copy per part
    far_rows = [_mask_of(row) for row in tfar]
    if sample_inside is None:
        inside = _cliques_of_size(far_rows, nv, r)
    else:
        inside = _sampled_far_cliques(tfar, nv, r, sample_inside, params.seed,
                                      meta)
    meta["base_inside_per_part"] = len(inside)
    for p in range(r):
        off = p * nv
        for cl in inside:
            edges.add(tuple(off + a for a in cl))
    meta["base_inside"] = len(inside) * r

    # cross edges: ordered assignments (a_1..a_r), pairwise tuple-close
    close_rows = [_mask_of(row) for row in tclose]
    full = (1 << nv) - 1
    count = 0
    cross_count = 0
    stack = [((), full)]
    while stack:
        chosen, cand = stack.pop()
        if len(chosen) == r:
            edges.add(tuple(p * nv + a for p, a in enumerate(chosen)))
            cross_count += 1
            continue
        m = cand
        while m:
            a = (m & -m).bit_length() - 1
            m &= m - 1
            count += 1
            if count > max_cross_assignments:
                raise PartTooLarge("cross enumeration exceeded the cap")
            stack.append((chosen + (a,), cand & close_rows[a]))
    meta["base_cross"] = cross_count

    return PartitionedHypergraph(n, r, frozenset(edges), part_of, meta=meta)


def _mask_of(row: np.ndarray) -> int:
    """Bitmask int with bit i set iff row[i]."""
    return int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little")


def _sampled_far_cliques(tfar, nv, r, draws, seed, meta):
    """Uniform sample of r-subsets kept when they form a far-clique; the
    total-count estimate and a 95% CI go into meta."""
    rng = substream(seed, "inside-sample")
    hits = []
    seen = set()
    ok_draws = 0
    for _ in range(draws):
        pick = tuple(sorted(rng.choice(nv, size=r, replace=False).tolist()))
        if all(tfar[a, b] for a, b in combinations(pick, 2)):
            ok_draws += 1
            if pick not in seen:
                seen.add(pick)
                hits.append(pick)
    total = math.comb(nv, r)
    phat = ok_draws / draws
    half = 1.96 * math.sqrt(max(phat * (1 - phat), 1e-12) / draws)
    meta["inside_sampled"] = True
    meta["inside_count_estimate"] = phat * total
    meta["inside_count_ci"] = (max(0.0, (phat - half)) * total,
                               (phat + half) * total)
    return hits


def _cliques_of_size(adj_rows: list, n: int, size: int) -> list:
    """All size-cliques of the graph given by bitmask rows, lex order."""
    out = []

    def grow(clique, cand, start_mask):
        if len(clique) == size:
            out.append(tuple(clique))
            return
        m = cand & start_mask
        while m:
            v = (m & -m).bit_length() - 1
            m &= m - 1
            higher = ~((1 << (v + 1)) - 1)
            grow(clique + [v], cand & adj_rows[v], higher)

    grow([], (1 << n) - 1, (1 << n) - 1)
    return out


# ---------------------------------------------------------------------------
# probabilistic blowup with sparse-pattern deletion


def random_blowup(inside: PartitionedHypergraph, t: int, gamma: float,
                  ell: int, seed: int, budget=None) -> PartitionedHypergraph:
    """t-blowup of the given edges, each kept independently with
    probability p = t^(1+gamma-r); then one hyperedge (the
    lexicographically last) is deleted from every connected sub-collection
    with v <= ell vertices and v + (1+gamma-r)(m-1) < r."""
    if t < 1:
        raise ValueError("blowup factor must be >= 1")
    if not 0.0 < gamma < 1.0:
        raise ValueError("gamma must lie in (0, 1)")
    if ell < inside.r:
        raise ValueError("pattern cap must be >= r")
    r = inside.r
    p = float(t) ** (1.0 + gamma - r)
    blown = blowup(inside, t)
    rng = substream(seed, "blowup-keep")
    kept = [e for e in blown.sorted_edges() if rng.random() < p or p >= 1.0]
    sampled = PartitionedHypergraph(blown.n, r, frozenset(kept),
                                    blown.part_of)
    doomed = sparse_pattern_doomed_edges(
        sampled, ell, blowup_deletion_condition(r, gamma), budget)
    final = frozenset(set(kept) - doomed)
    meta = dict(inside.meta, blowup_t=t, keep_probability=p,
                kept_edges=len(kept), deleted_patterns_edges=len(doomed))
    return PartitionedHypergraph(blown.n, r, final, blown.part_of, meta=meta)


# ---------------------------------------------------------------------------
# the full construction


def full_construction(params: ConstructionParams,
                      partition: SpherePartition | None = None,
                      budget=None) -> PartitionedHypergraph:
    """Blow up the sphere hypergraph: every cross edge keeps all t^r
    transversal copies, the inside edges pass through the probabilistic
    blowup with pattern deletion.  Parts become W_i = V_i x [t]."""
    if partition is None:
        partition = params.build_partition()
    base = sphere_hypergraph(params, partition)
    t = params.blowup_t
    cross_h = PartitionedHypergraph(base.n, base.r,
                                    frozenset(base.cross_edges()),
                                    base.part_of)
    inside_h = PartitionedHypergraph(base.n, base.r,
                                     frozenset(base.inside_edges()),
                                     base.part_of)
    cross_blown = blowup(cross_h, t)
    inside_blown = random_blowup(inside_h, t, params.gamma,
                                 params.pattern_cap, params.seed, budget)
    edges = frozenset(cross_blown.edges | inside_blown.edges)
    meta = dict(base.meta)
    meta.update(inside_blown.meta)
    meta["blowup_t"] = t
    meta["part_size_m"] = base.meta["tuple_count"] * t
    return PartitionedHypergraph(cross_blown.n, base.r, edges,
                                 cross_blown.part_of, meta=meta)


def shadow_first_parts(h: PartitionedHypergraph, ell: int) -> SimpleGraph:
    """Shadow graph of the whole hypergraph, induced on the vertices of
    the first ell parts (pairs covered by any hyperedge survive when both
    endpoints are in the leading parts)."""
    parts = h.parts
    if not 1 <= ell <= parts:
        raise ValueError(f"ell must be in [1, {parts}], got {ell}")
    sh = shadow(h)
    keep = [v for v in range(h.n) if 0 <= h.part_of[v] < ell]
    return sh.induced(keep)


# ---------------------------------------------------------------------------
# corollary graph


def maximal_ktfree_graph(n: int, t: int, seed: int = 0) -> SimpleGraph:
    """Random maximal K_{t+1}-free graph: candidate edges in random order,
    inserted whenever no K_{t+1} appears."""
    rng = substream(seed, "ktfree-greedy")
    pairs = list(combinations(range(n), 2))
    rng.shuffle(pairs)
    adj = [0] * n
    edges = set()
    for a, b in pairs:
        if _has_clique_mask(adj, adj[a] & adj[b], t - 1):
            continue
        edges.add((a, b))
        adj[a] |= 1 << b
        adj[b] |= 1 << a
    return SimpleGraph(n, frozenset(edges))


def corollary_graph(g: SimpleGraph, q: int, t: int, inner_provider,
                    mix_a: float = 0.5) -> SimpleGraph:
    """Complete (q-1)-partite graph T with near-equal classes sized from
    the mixing fraction, a checked K_{t+1}-free graph inserted in every
    class, completely joined to g."""
    if q < 2:
        raise ValueError("need q >= 2")
    if not 0.0 < mix_a < 1.0:
        raise ValueError("mixing fraction must lie in (0, 1)")
    total = max(g.n + q - 1, round(g.n / mix_a))
    rest = total - g.n
    base, extra = divmod(rest, q - 1)
    sizes = [base + (1 if i < extra else 0) for i in range(q - 1)]
    t_edges = set()
    offsets = []
    off = 0
    for size in sizes:
        offsets.append(off)
        off += size
    for ci, size in enumerate(sizes):
        inner = inner_provider(size)
        if inner.n != size:
            raise ValueError("inner provider returned a wrong-size graph")
        if find_clique(inner, t + 1) is not None:
            raise ValueError("inner graph is not K_{t+1}-free")
        t_edges.update((offsets[ci] + a, offsets[ci] + b)
                       for a, b in inner.edges)
        for cj in range(ci + 1, q - 1):
            for a in range(size):
                for b in range(sizes[cj]):
                    t_edges.add((offsets[ci] + a, offsets[cj] + b))
    t_graph = SimpleGraph(rest, frozenset(t_edges))
    return complete_join(g, t_graph)


# ---------------------------------------------------------------------------
# exact rational bounds


def theta_lower_bound(t: int, ell: int) -> Fraction:
    """Edge-density floor (1/2)(1 - 1/ell) 2^(-u^2) with u = ceil(t/2)."""
    if not 2 <= ell <= t:
        raise ValueError(f"need 2 <= ell <= t, got ell={ell}, t={t}")
    u = (t + 1) // 2
    return Fraction(1, 2) * (1 - Fraction(1, ell)) / Fraction(2 ** (u * u))


def optimize_a(t: int, ell: int, q: int) -> tuple[Fraction, Fraction]:
    """Exact maximizer over a in (0,1) of
    B a^2 + C(q-1,2) ((1-a)/(q-1))^2 + (1-a) a with B the density floor.

    Returns (a*, value) as exact rationals (vertex of the quadratic,
    clamped into (0,1) with a warning when it falls outside)."""
    if q < 2:
        raise ValueError("need q >= 2")
    b = theta_lower_bound(t, ell)
    # expand: f(a) = A2 a^2 + A1 a + A0
    c_t = Fraction(q - 2, 2 * (q - 1))  # C(q-1,2)/(q-1)^2
    a2 = b + c_t - 1
    a1 = 1 - 2 * c_t
    a0 = c_t
    if a2 >= 0:
        raise AssertionError("quadratic is not concave for these parameters")
    a_star = -a1 / (2 * a2)
    if not 0 < a_star < 1:
        warnings.warn("unconstrained optimum falls outside (0,1); "
                      "returning the better endpoint limit", stacklevel=2)
        f0, f1 = a0, a2 + a1 + a0
        a_star = Fraction(0) if f0 >= f1 else Fraction(1)
    value = a2 * a_star * a_star + a1 * a_star + a0
    return a_star, value
