"""Dependent random choice procedures and witness pipelines.

The graph-form feasibility test is evaluated in exact rational
arithmetic; the set-finding procedures are Las Vegas with bounded
retries, so anything returned has already passed an exhaustive recheck.
The nine-vertex triple-system witness (three part edges plus all 27
cross triples) is assembled by chaining the hypergraph form, the graph
form, and codegree-based freshness arguments.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .hypergraph import (UNPARTITIONED, PartitionedHypergraph, SimpleGraph,
                         clean_low_codegree)
from .rng import substream
from .verifiers import Embedding, contained_edge, recheck_tk

DEFAULT_RETRIES = 64


class PipelineFailure(RuntimeError):
    """A witness pipeline stage failed after all retries."""

    def __init__(self, stage: str, detail: str = ""):
        super().__init__(f"stage '{stage}' failed{': ' + detail if detail else ''}")
        self.stage = stage
        self.detail = detail


@dataclass
class DrcParams:
    """Parameters of the two dependent-random-choice forms.

    Graph form: a, m, n, r, t.  Hypergraph form: s samples, Delta,
    epsilon, beta, part size N, weight cap w.  retries bounds the Las
    Vegas loops; codegree_threshold drives the cleaning pass (16 in the
    asymptotic statements, lower it for desk-scale hosts whose codegrees
    cannot reach 16).
    """

    a: int = 4
    m: int = 4
    n: int | None = None
    r: int = 2
    t: int = 2
    s: int = 2
    Delta: int = 9
    epsilon: float = 0.5
    beta: float = 0.5
    N: int | None = None
    w: int = 6
    retries: int = DEFAULT_RETRIES
    codegree_threshold: int = 16

    @classmethod
    def from_json(cls, data: dict) -> "DrcParams":
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in data.items() if k in known})


# ---------------------------------------------------------------------------
# graph form


def drc_feasible(p: DrcParams, d) -> bool:
    """Exact test of d^t/n^(t-1) - C(n,r) (m/n)^t >= a."""
    if p.n is None or p.n <= 0 or p.t <= 0 or p.r <= 0 or p.m <= 0 or p.a <= 0:
        raise ValueError("all graph-form parameters must be positive")
    d = Fraction(d)
    n, t, r, m, a = p.n, p.t, p.r, p.m, p.a
    lhs = d ** t / Fraction(n) ** (t - 1) - math.comb(n, r) * Fraction(m, n) ** t
    return lhs >= a


def average_degree(g: SimpleGraph) -> Fraction:
    return Fraction(2 * len(g.edges), g.n)


def drc_recheck(g: SimpleGraph, u_set, r: int, m: int) -> bool:
    """Exhaustive check: every r-subset of U has >= m common neighbors."""
    adj = g.adjacency_sets()
    for sub in combinations(sorted(u_set), r):
        common = set.intersection(*(adj[v] for v in sub))
        if len(common) < m:
            return False
    return True


def drc_find_set(g: SimpleGraph, p: DrcParams, seed: int = 0,
                 require_feasible: bool = True) -> set | None:
    """Find U with |U| >= a whose every r-subset has >= m common neighbors.

    Repeats up to p.retries times: sample t vertices with repetition,
    take their common neighborhood, strip vertices of bad r-subsets, and
    return only after the exhaustive recheck passes.  None when the
    retry budget runs out.

    The feasibility inequality guards the existence guarantee; with
    require_feasible=False the Las Vegas search still runs (its output is
    verification-gated either way), only availability is at risk.
    """
    params = DrcParams(**{**p.__dict__, "n": g.n})
    if require_feasible and not drc_feasible(params, average_degree(g)):
        raise ValueError("dependent-random-choice inequality fails for these "
                         "parameters; the guarantee does not apply")
    adj = g.adjacency_sets()
    for trial in range(p.retries):
        rng = substream(seed, "drc-find-set", trial)
        picks = [int(rng.integers(g.n)) for _ in range(p.t)]
        u_set = set.intersection(*(adj[v] for v in picks)) if picks else set()
        while len(u_set) >= p.a:
            bad = _first_bad_subset(adj, u_set, p.r, p.m)
            if bad is None:
                break
            u_set.discard(bad[-1])
        if len(u_set) >= p.a and drc_recheck(g, u_set, p.r, p.m):
            return set(sorted(u_set))
    return None


def _first_bad_subset(adj, u_set, r, m):
    for sub in combinations(sorted(u_set), r):
        common = set.intersection(*(adj[v] for v in sub))
        if len(common) < m:
            return sub
    return None


# ---------------------------------------------------------------------------
# hypergraph form


def hyper_drc(g_r: PartitionedHypergraph, s: int, seed: int = 0) -> PartitionedHypergraph:
    """Sample s vertices (with repetition) from the first part; keep every
    transversal (r-1)-set over the remaining parts whose union with each
    sample is an edge.  Output is (r-1)-uniform on the same vertex ids,
    with the achieved edge count and the reference floor in meta."""
    if s < 1:
        raise ValueError("need at least one sampled vertex")
    r = g_r.r
    if r < 3:
        raise ValueError("hypergraph form needs r >= 3")
    if g_r.parts != r:
        raise ValueError(f"need an {r}-partite input, found {g_r.parts} parts")
    part0 = g_r.part_vertices(0)
    sizes = {len(g_r.part_vertices(p)) for p in range(r)}
    if len(sizes) != 1:
        raise ValueError("parts must have equal size")
    big_n = sizes.pop()
    rng = substream(seed, "hyper-drc", 0)
    samples = [part0[int(rng.integers(len(part0)))] for _ in range(s)]

    links = []
    for w in samples:
        link = set()
        for e in g_r.edges:
            if w in e:
                rest = tuple(v for v in e if v != w)
                if all(g_r.part_of[v] != 0 for v in rest):
                    link.add(rest)
        links.append(link)
    common = set.intersection(*links)
    eps = len([e for e in g_r.edges if g_r.is_cross(e)]) / (big_n ** r)
    floor = 0.5 * eps ** s * big_n ** (r - 1)
    meta = {"samples": samples, "edge_floor": floor, "link_edge_count": len(common)}
    return PartitionedHypergraph(g_r.n, r - 1, frozenset(common),
                                 g_r.part_of, meta=meta)


def extension_count(g_r: PartitionedHypergraph, edge_set) -> int:
    """Number of first-part vertices v with e + v an edge for every e in
    the given set of (r-1)-sets (the dangerous-set statistic)."""
    part0 = g_r.part_vertices(0)
    count = 0
    for v in part0:
        if all(tuple(sorted(e + (v,))) in g_r.edges for e in edge_set):
            count += 1
    return count


def count_dangerous_sets(g_r: PartitionedHypergraph,
                         g_rm1: PartitionedHypergraph, delta: int,
                         beta: float, weight: int,
                         max_enumeration: int = 2_000_000) -> int:
    """Census of dangerous sets of the given weight: subsets of at most
    delta (r-1)-edges spanning exactly `weight` vertices whose common
    first-part extension count is below beta * N.  Desk-scale only."""
    edges = g_rm1.sorted_edges()
    big_n = len(g_r.part_vertices(0))
    bound = beta * big_n
    count = 0
    seen = 0
    for size in range(1, delta + 1):
        for sub in combinations(edges, size):
            seen += 1
            if seen > max_enumeration:
                raise RuntimeError("dangerous-set census too large; "
                                   "reduce the instance")
            verts = set()
            for e in sub:
                verts.update(e)
            if len(verts) != weight:
                continue
            if extension_count(g_r, list(sub)) < bound:
                count += 1
    return count


# ---------------------------------------------------------------------------
# the nine-vertex witness


@dataclass
class FWitness:
    """Three disjoint part edges xs, ys, zs plus all 27 cross triples."""

    xs: tuple
    ys: tuple
    zs: tuple
    edges_used: list = field(default_factory=list)
    tk: Embedding | None = None

    def as_json(self) -> dict:
        return {
            "xs": list(self.xs), "ys": list(self.ys), "zs": list(self.zs),
            "edges_used": [list(e) for e in self.edges_used],
            "tk": self.tk.as_json() if self.tk else None,
        }


def recheck_f_witness(h: PartitionedHypergraph, w: FWitness) -> bool:
    vs = list(w.xs) + list(w.ys) + list(w.zs)
    if len(set(vs)) != 9:
        return False
    needed = [tuple(sorted(w.xs)), tuple(sorted(w.ys)), tuple(sorted(w.zs))]
    needed += [tuple(sorted((x, y, z)))
               for x in w.xs for y in w.ys for z in w.zs]
    return all(e in h.edges for e in needed)


def _balanced_partition(n: int, parts: int, rng) -> tuple:
    order = list(range(n))
    rng.shuffle(order)
    labels = [0] * n
    for i, v in enumerate(order):
        labels[v] = i % parts
    return tuple(labels)


def _three_partite_restriction(h: PartitionedHypergraph, labels) -> PartitionedHypergraph:
    edges = frozenset(e for e in h.edges
                      if len({labels[v] for v in e}) == h.r)
    return PartitionedHypergraph(h.n, h.r, edges, labels)


def find_f_witness(h: PartitionedHypergraph, params: DrcParams,
                   seed: int = 0) -> FWitness:
    """Best-effort pipeline for the nine-vertex witness and its core
    subdivision extension.

    Partition into three classes, keep the cross edges, clean low
    codegrees, run the hypergraph form to get an auxiliary graph on the
    last two classes, run the graph form for a well-connected set U, pick
    the larger side, then locate the three part edges by nested common
    neighborhoods.  Raises PipelineFailure tagged with the first stage
    that failed on the final retry."""
    if h.r != 3:
        raise ValueError("witness pipeline is for 3-uniform hypergraphs")
    has_parts = h.parts == 3 and all(p != UNPARTITIONED for p in h.part_of)
    failure = PipelineFailure("init")
    for trial in range(params.retries):
        if has_parts:
            labels = h.part_of
        else:
            rng = substream(seed, "f-partition", trial)
            labels = _balanced_partition(h.n, 3, rng)
        try:
            return _f_witness_once(h, labels, params, seed, trial)
        except PipelineFailure as exc:
            failure = exc
    raise failure


def _f_witness_once(h, labels, params, seed, trial):
    hp = _three_partite_restriction(h, labels)
    cleaned = clean_low_codegree(hp, params.codegree_threshold)
    if not cleaned.edges:
        raise PipelineFailure("cleaning", "no edges survive the codegree sweep")

    try:
        aux = hyper_drc(cleaned, params.s, seed=seed * 1000003 + trial)
    except ValueError as exc:
        raise PipelineFailure("hyper-drc", str(exc))
    if not aux.edges:
        raise PipelineFailure("hyper-drc", "empty auxiliary graph")

    verts23 = sorted(v for v in range(h.n) if labels[v] in (1, 2))
    index = {v: i for i, v in enumerate(verts23)}
    back = {i: v for v, i in index.items()}
    g = SimpleGraph(len(verts23),
                    frozenset((index[a], index[b]) for a, b in aux.edges))
    # the asymptotic feasibility inequality is vacuous at desk scale, so
    # the pipeline runs the verification-gated search unconditionally
    gp = DrcParams(**{**params.__dict__, "n": g.n, "r": 3})
    u_idx = drc_find_set(g, gp, seed=seed * 7 + trial, require_feasible=False)
    if u_idx is None:
        raise PipelineFailure("drc-set", "no verified set within retries")
    u_host = {back[i] for i in u_idx}

    side3 = {v for v in u_host if labels[v] == 2}
    side2 = {v for v in u_host if labels[v] == 1}
    if len(side3) >= len(side2):
        u_prime, e3_label, e2_label = side3, 2, 1
    else:
        u_prime, e3_label, e2_label = side2, 1, 2

    e3 = contained_edge(h, u_prime)
    if e3 is None:
        raise PipelineFailure("edge-in-set", "no hyperedge inside the chosen side")

    adj = g.adjacency_sets()
    common = set.intersection(*(adj[index[v]] for v in e3))
    common_host = {back[i] for i in common if labels[back[i]] == e2_label}
    e2 = contained_edge(h, common_host)
    if e2 is None:
        raise PipelineFailure("edge-in-neighborhood",
                              "no hyperedge among the common neighbors")

    part1 = [v for v in range(h.n) if labels[v] == 0]
    candidates = [v for v in part1
                  if all(tuple(sorted((v, y, z))) in cleaned.edges
                         for y in e2 for z in e3)]
    e1 = contained_edge(h, candidates)
    if e1 is None:
        raise PipelineFailure("edge-in-extensions",
                              "no hyperedge among the full extensions")

    edges_used = [e1, e2, e3] + [tuple(sorted((x, y, z)))
                                 for x in e1 for y in e2 for z in e3]
    witness = FWitness(xs=e1, ys=e2, zs=e3, edges_used=edges_used)
    if not recheck_f_witness(h, witness):
        raise PipelineFailure("verification", "assembled witness failed recheck")
    witness.tk = _extend_to_tk6(h, witness)
    return witness


def _extend_to_tk6(h: PartitionedHypergraph, w: FWitness) -> Embedding | None:
    """Core subdivision on x1,x2,y1,y2,z1,z2: each core pair gets its own
    hyperedge with a fresh third vertex."""
    cores = [w.xs[0], w.xs[1], w.ys[0], w.ys[1], w.zs[0], w.zs[1]]
    cover: dict = {}
    for e in h.sorted_edges():
        for a, b in combinations(e, 2):
            cover.setdefault((a, b), []).append(e)
    used = set(cores)
    chosen = []
    for a, b in combinations(sorted(cores), 2):
        got = None
        for e in cover.get((a, b), []):
            extras = [v for v in e if v != a and v != b]
            if all(v not in used for v in extras):
                got = e
                break
        if got is None:
            return None
        used.update(v for v in got if v != a and v != b)
        chosen.append(got)
    vm = {i: v for i, v in enumerate(sorted(cores))}
    roles = {i: "core" for i in range(6)}
    nxt = 6
    for e in chosen:
        for v in e:
            if v not in vm.values():
                vm[nxt] = v
                roles[nxt] = "subdivision"
                nxt += 1
    return Embedding(vm, roles, chosen)


# ---------------------------------------------------------------------------
# the five-core and four-core witnesses


def find_tkf5_tk4(h: PartitionedHypergraph, eps: float,
                  codegree_threshold: int = 16,
                  seed: int = 0, retries: int = DEFAULT_RETRIES):
    """Witness extraction by codegree cleaning: find a maximum-codegree
    cross pair (x, y), collect its link Z in the third class, take a
    hyperedge E inside Z; x, y and E give a five-core cover witness, and
    fresh third vertices extend x, y and two of E to a four-core
    subdivision.  Returns (five_core, four_core_or_None); raises
    PipelineFailure when no qualifying pair or no edge in Z exists."""
    if h.r != 3:
        raise ValueError("procedure is for 3-uniform hypergraphs")
    has_parts = h.parts == 3 and all(p != UNPARTITIONED for p in h.part_of)
    failure = PipelineFailure("init")
    for trial in range(retries if not has_parts else 1):
        if has_parts:
            labels = h.part_of
        else:
            labels = _balanced_partition(h.n, 3,
                                         substream(seed, "tkf5-partition", trial))
        try:
            return _tkf5_once(h, labels, eps, codegree_threshold)
        except PipelineFailure as exc:
            failure = exc
    raise failure


def _tkf5_once(h, labels, eps, threshold):
    hp = _three_partite_restriction(h, labels)
    cleaned = clean_low_codegree(hp, threshold)
    if not cleaned.edges:
        raise PipelineFailure("cleaning", "no edges survive the codegree sweep")
    codeg: dict = {}
    for e in cleaned.edges:
        for a, b in combinations(e, 2):
            if labels[a] != labels[b]:
                codeg[(a, b)] = codeg.get((a, b), 0) + 1
    if not codeg:
        raise PipelineFailure("no-qualifying-pair", "no covered cross pair")
    need = eps * h.n
    top = max(codeg.values())
    best = min(p for p in codeg if codeg[p] == top)
    if codeg[best] < need:
        raise PipelineFailure("no-qualifying-pair",
                              f"max codegree {codeg[best]} below eps*n = {need:.1f}")
    x, y = best
    third = ({0, 1, 2} - {labels[x], labels[y]}).pop()
    z_set = sorted(v for e in cleaned.edges if x in e and y in e
                   for v in e if v not in (x, y) and labels[v] == third)
    e_in_z = contained_edge(h, z_set)
    if e_in_z is None:
        raise PipelineFailure("no-edge-in-link", "link set spans no hyperedge")

    cores5 = sorted([x, y, *e_in_z])
    cover_pairs = []
    for a, b in combinations(cores5, 2):
        e = next((ed for ed in cleaned.sorted_edges() if a in ed and b in ed),
                 None)
        if e is None:
            e = next((ed for ed in h.sorted_edges() if a in ed and b in ed),
                     None)
        cover_pairs.append(e)
    tkf5 = Embedding({i: v for i, v in enumerate(cores5)},
                     {i: "core" for i in range(5)}, cover_pairs)
    from .verifiers import recheck_tkf_core
    if not recheck_tkf_core(h, tkf5):
        raise PipelineFailure("verification", "five-core witness failed recheck")

    tk4 = _extend_to_tk4(h, x, y, e_in_z)
    if tk4 is not None and not recheck_tk(h, tk4, 4):
        raise PipelineFailure("verification", "four-core extension failed recheck")
    return tkf5, tk4


def _extend_to_tk4(h, x, y, e_in_z) -> Embedding | None:
    z1, z2, z3 = e_in_z
    cores = [x, y, z1, z2]
    used = set(cores) | {z3}
    chosen = {(z1, z2): e_in_z}  # third vertex z3 is the fresh one
    cover: dict = {}
    for e in h.sorted_edges():
        for a, b in combinations(e, 2):
            cover.setdefault((a, b), []).append(e)
    for pair in combinations(sorted(cores), 2):
        if pair == tuple(sorted((z1, z2))):
            continue
        got = None
        for e in cover.get(pair, []):
            extras = [v for v in e if v not in pair]
            if all(v not in used for v in extras):
                got = e
                break
        if got is None:
            return None
        used.update(got)
        chosen[pair] = got
    vm = {i: v for i, v in enumerate(sorted(cores))}
    roles = {i: "core" for i in range(4)}
    nxt = 4
    edges_used = [chosen[p] for p in combinations(sorted(cores), 2)]
    for e in edges_used:
        for v in e:
            if v not in vm.values():
                vm[nxt] = v
                roles[nxt] = "subdivision"
                nxt += 1
    return Embedding(vm, roles, edges_used)


def recheck_tk4(h: PartitionedHypergraph, emb: Embedding) -> bool:
    return recheck_tk(h, emb, 4)


# ---------------------------------------------------------------------------
# asymptotic thresholds


def _log2_big(n) -> float:
    n = int(n)
    if n <= 0:
        raise ValueError("need a positive integer")
    bl = n.bit_length()
    if bl <= 53:
        return math.log2(n)
    shift = bl - 53
    return math.log2(n >> shift) + shift


def tk6_thresholds(n: int, gamma: float) -> tuple:
    """(beta, s, epsilon, edge_threshold) with the fixed constant chain
    r=3, Delta=9, w=6, c = 4 r Delta w^(r Delta) r^w, b = 9c; logs are
    base 2.  The edge threshold b n^3 2^(-gamma^3/28) + 144 n^2 is
    returned as an exact integer."""
    if n < 2:
        raise ValueError("need n >= 2")
    if gamma <= 0:
        raise ValueError("need gamma > 0")
    r, delta, w = 3, 9, 6
    c = 4 * r * delta * w ** (r * delta) * r ** w
    b = 9 * c
    log_n = _log2_big(n)
    beta = 2.0 ** (-gamma * log_n ** (2.0 / 3.0))
    s = (w + 1) / gamma * log_n ** (1.0 / 3.0)
    epsilon = 2.0 ** (-gamma * gamma * log_n ** (1.0 / 3.0) / 4.0)
    factor = Fraction(2.0 ** (-gamma ** 3 / 28.0))
    threshold = int(factor * b * Fraction(int(n)) ** 3) + 144 * int(n) ** 2
    return beta, s, epsilon, threshold


def tk6_constants() -> dict:
    r, delta, w = 3, 9, 6
    c = 4 * r * delta * w ** (r * delta) * r ** w
    return {"r": r, "Delta": delta, "w": w, "c": c, "b": 9 * c}
