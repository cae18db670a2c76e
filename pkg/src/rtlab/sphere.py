"""Geometry of the k-dimensional unit sphere.

Uniform sampling, Euclidean distances, normalized spherical-cap measures,
the four-point impossibility margin, near-equal-measure point partitions
with implicit Voronoi domains, and a multistart estimator for the largest
t-point spread of a cap union.

Conventions: S^k lives in R^(k+1); the normalized surface measure has
mu(S^k) = 1; a cap is {x : x . center >= s} for a threshold s in [-1, 1].
All inequalities are evaluated in double precision with ties counting as
satisfied.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .rng import substream

SQRT2 = math.sqrt(2.0)


# ---------------------------------------------------------------------------
# points and distances


def sample_uniform_point(k: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform random point on S^k (normalized standard-normal vector)."""
    if k < 1:
        raise ValueError(f"sphere dimension must be >= 1, got {k}")
    v = rng.standard_normal(k + 1)
    return v / np.linalg.norm(v)


def sample_uniform_points(k: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """(count, k+1) array of independent uniform points on S^k."""
    if k < 1:
        raise ValueError(f"sphere dimension must be >= 1, got {k}")
    v = rng.standard_normal((count, k + 1))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def distance(p, q) -> float:
    """Euclidean distance in R^(k+1) between two points of the same sphere."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError(f"dimension mismatch: {p.shape} vs {q.shape}")
    return float(np.linalg.norm(p - q))


def pairwise_distances(points: np.ndarray) -> np.ndarray:
    """Symmetric matrix of Euclidean distances between rows of `points`."""
    g = points @ points.T
    d2 = np.clip(2.0 - 2.0 * g, 0.0, None)
    d = np.sqrt(d2)
    np.fill_diagonal(d, 0.0)
    return d


# ---------------------------------------------------------------------------
# spherical caps


@dataclass
class SphericalCap:
    """Cap {x : x . center >= s}; center must be a unit vector."""

    center: np.ndarray
    s: float

    def __post_init__(self):
        self.center = np.asarray(self.center, dtype=float)
        if abs(np.linalg.norm(self.center) - 1.0) > 1e-12:
            raise ValueError("cap center must lie on the unit sphere")
        if not -1.0 <= self.s <= 1.0:
            raise ValueError(f"cap threshold must be in [-1, 1], got {self.s}")

    @property
    def height(self) -> float:
        return 1.0 - self.s

    @property
    def euclidean_radius(self) -> float:
        # max distance from the center to a cap point; 2h = a^2
        return math.sqrt(2.0 * self.height)

    @property
    def base_diameter(self) -> float:
        # diameter of the (k-1)-sphere where the bounding hyperplane cuts
        return 2.0 * math.sqrt(max(0.0, 1.0 - self.s * self.s))

    def contains(self, x: np.ndarray) -> bool:
        return float(np.dot(x, self.center)) >= self.s

    def margin(self, x: np.ndarray):
        return np.asarray(x, dtype=float) @ self.center - self.s

    def project(self, x: np.ndarray) -> np.ndarray:
        """Nearest cap point: rotate x toward the center up to the rim."""
        x = np.asarray(x, dtype=float)
        c = self.center
        t = float(x @ c)
        if t >= self.s:
            return x
        w = x - t * c
        nw = np.linalg.norm(w)
        if nw < 1e-15:  # x is exactly -center; any rim point is nearest
            w = np.zeros_like(c)
            w[0 if abs(c[0]) < 0.9 else 1] = 1.0
            w -= (w @ c) * c
            nw = np.linalg.norm(w)
        w /= nw
        return self.s * c + math.sqrt(max(0.0, 1.0 - self.s * self.s)) * w


def cap_from_euclidean_radius(center: np.ndarray, a: float) -> SphericalCap:
    """Cap whose points lie within Euclidean distance a of the center (2h = a^2)."""
    return SphericalCap(center, 1.0 - a * a / 2.0)


def cap_from_base_diameter(center: np.ndarray, diam: float) -> SphericalCap:
    """Smaller-than-hemisphere cap whose rim sphere has the given diameter."""
    rho = diam / 2.0
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"cap base diameter must be in [0, 2], got {diam}")
    return SphericalCap(center, math.sqrt(1.0 - rho * rho))


def threshold_for_base_diameter(diam: float) -> float:
    rho = diam / 2.0
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"cap base diameter must be in [0, 2], got {diam}")
    return math.sqrt(1.0 - rho * rho)


# ---------------------------------------------------------------------------
# cap measure by adaptive quadrature

_half_cache: dict[int, float] = {}

_QUAD_OPTS = dict(epsabs=1e-13, epsrel=1e-12, limit=200)


def _density(k: int):
    # surface density along the axis coordinate x = cos(angle): (1-x^2)^((k-2)/2)
    e = (k - 2) / 2.0
    return lambda x: (1.0 - x * x) ** e if abs(x) < 1.0 else 0.0


def _half_integral(k: int) -> float:
    if k not in _half_cache:
        val, _ = integrate.quad(_density(k), 0.0, 1.0, **_QUAD_OPTS)
        _half_cache[k] = val
    return _half_cache[k]


def cap_measure(k: int, s: float) -> float:
    """Normalized measure of the cap {x in S^k : x . c >= s}.

    Computed as the quadrature of the axial surface density over [s, 1],
    normalized by the full-sphere integral.  Strictly decreasing in s,
    with mu(-1) = 1, mu(0) = 1/2, mu(1) = 0.
    """
    if k < 1:
        raise ValueError(f"sphere dimension must be >= 1, got {k}")
    if not -1.0 <= s <= 1.0:
        raise ValueError(f"cap threshold must be in [-1, 1], got {s}")
    half = _half_integral(k)
    if s == 0.0:
        return 0.5
    if s == 1.0:
        return 0.0
    if s == -1.0:
        return 1.0
    f = _density(k)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        if s > 0.0:
            num, _ = integrate.quad(f, s, 1.0, **_QUAD_OPTS)
            return num / (2.0 * half)
        num, _ = integrate.quad(f, s, 0.0, points=[0.0] if k > 400 else None,
                                **_QUAD_OPTS)
        return (num + half) / (2.0 * half)


def cap_intersection_measure_mc(k: int, centers: np.ndarray, s: float,
                                samples: int, rng: np.random.Generator) -> float:
    """Monte Carlo estimate of mu(intersection of caps {x . c_i >= s})."""
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    hits = 0
    batch = 200_000
    left = samples
    while left > 0:
        b = min(batch, left)
        pts = sample_uniform_points(k, b, rng)
        ok = np.all(pts @ centers.T >= s, axis=1)
        hits += int(np.count_nonzero(ok))
        left -= b
    return hits / samples


# ---------------------------------------------------------------------------
# simplex edge length


def simplex_edge_length(t: int) -> float:
    """Edge length sqrt(2t/(t-1)) of the regular t-point simplex in S^k."""
    if t < 2:
        raise ValueError(f"simplex needs t >= 2 points, got {t}")
    return math.sqrt(2.0 * t / (t - 1.0))


# ---------------------------------------------------------------------------
# the (eps, k) search


class InfeasibleSearch(RuntimeError):
    """No (eps, k) within the search caps satisfies the cap properties."""


_P2_SAMPLES = 40_000


def _p1_threshold(eps: float, k: int) -> float:
    # cap of Euclidean radius sqrt(2) - eps/sqrt(k): 2h = a^2, s = 1 - h
    a = SQRT2 - eps / math.sqrt(k)
    return 1.0 - a * a / 2.0


def _p3_threshold(eps: float, k: int) -> float:
    return threshold_for_base_diameter(2.0 - eps / (2.0 * math.sqrt(k)))


def properties_hold(eps: float, alpha: float, beta: float, k: int,
                    t_max: int = 2) -> bool:
    """Numeric check of the three cap properties at a given (eps, k).

    Large-cap floor: the cap of radius sqrt(2) - eps/sqrt(k) has measure
    >= 1/2 - alpha.  Intersection floor: t such caps with pairwise-
    orthogonal centers (the extreme admissible configuration, centers at
    pairwise distance sqrt(2)) keep a Monte Carlo measure >= 2^-t -
    t*alpha, for 2 <= t <= t_max.  Small-cap ceiling: the cap of base
    diameter 2 - eps/(2 sqrt(k)) has measure <= beta.  The working scale
    eps/sqrt(k) is additionally required to stay below 1/4, the regime in
    which the four-point exclusion is available downstream.
    """
    theta = eps / math.sqrt(k)
    if theta >= 0.25:
        return False
    if SQRT2 - theta <= 0:
        return False
    s1 = _p1_threshold(eps, k)
    if cap_measure(k, s1) < 0.5 - alpha:
        return False
    if cap_measure(k, _p3_threshold(eps, k)) > beta:
        return False
    for t in range(2, min(t_max, k + 1) + 1):
        floor = 2.0 ** (-t) - t * alpha
        if floor <= 0.0:
            continue
        centers = np.eye(k + 1)[:t]
        rng = substream(k * 1_000_003 + t, "p2-mc")
        if cap_intersection_measure_mc(k, centers, s1, _P2_SAMPLES, rng) < floor:
            return False
    return True


def find_eps_k(alpha: float, beta: float, t_max: int = 2,
               k_cap: int = 1_000_000) -> tuple[float, int]:
    """Smallest workable (eps, k): eps halved down a ladder, then the
    minimal k located by doubling followed by bisection.

    Raises InfeasibleSearch when no k <= k_cap works for any ladder eps.
    """
    if not (0.0 < alpha < 0.5 and 0.0 < beta < 0.5):
        raise ValueError("alpha and beta must lie in (0, 1/2)")
    eps = 1.0
    for _ in range(24):
        k = _minimal_k(eps, alpha, beta, t_max, k_cap)
        if k is not None:
            return eps, k
        eps /= 2.0
    raise InfeasibleSearch(
        f"no (eps, k) with k <= {k_cap} satisfies the cap properties for "
        f"alpha={alpha}, beta={beta}")


def _minimal_k(eps, alpha, beta, t_max, k_cap):
    ok = lambda k: properties_hold(eps, alpha, beta, k, t_max)
    # doubling phase: first k that works
    k = max(1, math.ceil((4.0 * eps) ** 2))  # below this theta >= 1/4
    lo = 0
    while k <= k_cap and not ok(k):
        lo = k
        k *= 2
    if k > k_cap:
        return None
    # bisection phase: minimal passing k in (lo, k]
    hi = k
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


# ---------------------------------------------------------------------------
# four-point margin


def check_p4(p1, p2, q1, q2, gamma: float) -> float:
    """Violation margin of the four-point configuration.

    margin = min(d(p1,p2) - (2-gamma), d(q1,q2) - (2-gamma),
                 min over cross pairs of (sqrt(2)-gamma) - d(p_i,q_j)).

    A non-negative margin would mean two (2-gamma)-far pairs whose four
    cross distances are all within sqrt(2)-gamma; for gamma in (0, 1/4)
    this never happens on any sphere.
    """
    if not 0.0 < gamma < 0.25:
        raise ValueError(f"gamma must be in (0, 1/4), got {gamma}")
    pts = [np.asarray(v, dtype=float) for v in (p1, p2, q1, q2)]
    dim = pts[0].shape
    if any(v.shape != dim for v in pts):
        raise ValueError("all four points must share a dimension")
    p1, p2, q1, q2 = pts
    far = 2.0 - gamma
    close = SQRT2 - gamma
    cross = max(distance(p, q) for p in (p1, p2) for q in (q1, q2))
    return min(distance(p1, p2) - far, distance(q1, q2) - far, close - cross)


def _margins_vectorized(p1, p2, q1, q2, gamma):
    far = 2.0 - gamma
    close = SQRT2 - gamma
    d = lambda a, b: np.linalg.norm(a - b, axis=1)
    cross = np.maximum.reduce([d(p1, q1), d(p1, q2), d(p2, q1), d(p2, q2)])
    return np.minimum.reduce([d(p1, p2) - far, d(q1, q2) - far, close - cross])


def p4_best_margin(k: int, gamma: float, n_random: int, n_refine: int,
                   seed: int = 0) -> float:
    """Best (largest) margin over random quadruples plus local ascent refinements.

    Vectorized random search; the top starts are refined by coordinate
    ascent on the margin.  Returns the largest margin seen (always
    negative for gamma in (0, 1/4)).
    """
    rng = substream(seed, "p4-search")
    best = -math.inf
    batch = 50_000
    n_batches = max(1, math.ceil(n_random / batch))
    per_batch = max(1, math.ceil(n_refine / n_batches))
    left = n_random
    top: list[tuple[float, np.ndarray]] = []
    while left > 0:
        b = min(batch, left)
        quad = [sample_uniform_points(k, b, rng) for _ in range(4)]
        m = _margins_vectorized(*quad, gamma)
        idx = int(np.argmax(m))
        if m[idx] > best:
            best = float(m[idx])
        for i in np.argsort(m)[-per_batch:]:
            top.append((float(m[i]), np.stack([q[i] for q in quad])))
        left -= b
    top.sort(key=lambda t: -t[0])
    if top and n_refine > 0:
        starts = np.stack([q for _, q in top[:n_refine]])
        refined = _refine_quadruples_batch(starts, gamma, rng)
        best = max(best, refined)
    return best


def _refine_quadruples_batch(quads: np.ndarray, gamma: float,
                             rng: np.random.Generator,
                             rounds: int = 60) -> float:
    """Coordinate ascent on the margin for a whole (N, 4, dim) batch."""
    n, _, dim = quads.shape
    cur = _margins_vectorized(quads[:, 0], quads[:, 1], quads[:, 2],
                              quads[:, 3], gamma)
    step = 0.3
    for rnd in range(rounds):
        for i in range(4):
            for _ in range(4):
                cand = quads[:, i] + step * rng.standard_normal((n, dim))
                cand /= np.linalg.norm(cand, axis=1, keepdims=True)
                cols = [quads[:, j] if j != i else cand for j in range(4)]
                m = _margins_vectorized(*cols, gamma)
                take = m > cur
                quads[take, i] = cand[take]
                cur = np.where(take, m, cur)
        if (rnd + 1) % 8 == 0:
            step *= 0.5
            if step < 1e-5:
                break
    return float(cur.max())


# ---------------------------------------------------------------------------
# partitions


@dataclass
class SpherePartition:
    """z representative points on S^k with implicit Voronoi domains.

    The domains are the Voronoi cells of `reps`; measure balance and
    maximum cell diameter are empirical quantities estimated by Monte
    Carlo at build time (`est_max_diameter`, `diam_within_bound`).
    """

    k: int
    z: int
    reps: np.ndarray
    domain_diam_bound: float
    seed: int
    est_max_diameter: float = field(default=float("nan"))
    diam_within_bound: bool = field(default=True)

    def __post_init__(self):
        self.reps = np.asarray(self.reps, dtype=float)
        if self.reps.shape != (self.z, self.k + 1):
            raise ValueError("reps must be a (z, k+1) array")
        norms = np.linalg.norm(self.reps, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-9):
            raise ValueError("all representatives must lie on the unit sphere")

    def nearest_rep(self, points: np.ndarray) -> np.ndarray:
        """Index of the Voronoi cell owning each point (max inner product)."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return np.argmax(pts @ self.reps.T, axis=1)

    def distance_matrix(self) -> np.ndarray:
        return pairwise_distances(self.reps)


def build_partition(k: int, z: int, theta: float, seed: int,
                    balance_iters: int = 32,
                    diag_samples: int = 20_000) -> SpherePartition:
    """Partition of S^k into z Voronoi domains aiming at diameter <= theta/4.

    Representatives start as i.i.d. uniform points and are then balanced
    by a few Lloyd steps (Monte Carlo cell means re-projected to the
    sphere), which pushes the empirical cell measures toward 1/z.  The
    maximum cell diameter is estimated from sampled cell members; if the
    estimate exceeds theta/4 the partition is still returned, flagged and
    with a warning.  Bit-reproducible for a fixed seed.
    """
    if z < 1:
        raise ValueError(f"domain count must be >= 1, got {z}")
    rng = substream(seed, "partition-reps")
    reps = sample_uniform_points(k, z, rng)
    if z > 1 and balance_iters > 0:
        cloud = sample_uniform_points(k, max(diag_samples, 40 * z),
                                      substream(seed, "partition-lloyd"))
        for _ in range(balance_iters):
            owner = np.argmax(cloud @ reps.T, axis=1)
            for j in range(z):
                members = cloud[owner == j]
                if len(members):
                    m = members.sum(axis=0)
                    nm = np.linalg.norm(m)
                    if nm > 1e-12:
                        reps[j] = m / nm
    est = _estimate_max_cell_diameter(reps, k, seed, diag_samples)
    ok = est <= theta / 4.0 or math.isnan(est)
    part = SpherePartition(k=k, z=z, reps=reps, domain_diam_bound=theta / 4.0,
                           seed=seed, est_max_diameter=est,
                           diam_within_bound=ok)
    if not ok:
        warnings.warn(
            f"estimated max domain diameter {est:.4f} exceeds theta/4 = "
            f"{theta / 4.0:.4f} (k={k}, z={z})", stacklevel=2)
    return part


def _estimate_max_cell_diameter(reps, k, seed, samples):
    if len(reps) == 1:
        return 2.0
    pts = sample_uniform_points(k, samples, substream(seed, "partition-diam"))
    owner = np.argmax(pts @ reps.T, axis=1)
    worst = 0.0
    for j in range(len(reps)):
        members = pts[owner == j]
        if len(members) < 2:
            continue
        if len(members) > 400:
            members = members[:400]
        worst = max(worst, float(pairwise_distances(members).max()))
    return worst


def estimate_domain_measures(part: SpherePartition, samples: int,
                             seed: int = 0) -> np.ndarray:
    """Monte Carlo estimate of the z Voronoi cell measures."""
    pts = sample_uniform_points(part.k, samples, substream(seed, "measure-mc"))
    owner = part.nearest_rep(pts)
    counts = np.bincount(owner, minlength=part.z)
    return counts / samples


def write_partition(part: SpherePartition, path: str) -> None:
    """Text format: header `SPHERE k z seed theta`, then z coordinate lines."""
    with open(path, "w") as fh:
        theta = part.domain_diam_bound * 4.0
        fh.write(f"SPHERE {part.k} {part.z} {part.seed} {theta!r}\n")
        for row in part.reps:
            fh.write(" ".join(f"{c:.17g}" for c in row) + "\n")


def read_partition(path: str) -> SpherePartition:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 5 or header[0] != "SPHERE":
            raise ValueError(f"not a partition file: {path}")
        k, z, seed = int(header[1]), int(header[2]), int(header[3])
        theta = float(header[4])
        reps = np.array([[float(c) for c in fh.readline().split()]
                         for _ in range(z)])
    reps /= np.linalg.norm(reps, axis=1, keepdims=True)
    return SpherePartition(k=k, z=z, reps=reps, domain_diam_bound=theta / 4.0,
                           seed=seed)


# ---------------------------------------------------------------------------
# largest t-point spread of a cap union


def _sample_in_cap(cap: SphericalCap, k: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform point of the cap via inverse-CDF sampling of the axial angle."""
    if cap.s >= 1.0:
        return cap.center.copy()
    grid = np.linspace(cap.s, 1.0, 512)
    dens = (1.0 - np.clip(grid, -1, 1) ** 2) ** ((k - 2) / 2.0)
    cdf = np.concatenate([[0.0], np.cumsum((dens[1:] + dens[:-1]) * np.diff(grid) / 2.0)])
    if cdf[-1] <= 0.0:
        x = 1.0
    else:
        u = rng.uniform(0.0, cdf[-1])
        x = float(np.interp(u, cdf, grid))
    w = rng.standard_normal(k + 1)
    w -= (w @ cap.center) * cap.center
    nw = np.linalg.norm(w)
    if nw < 1e-15:
        return cap.center.copy()
    w /= nw
    return x * cap.center + math.sqrt(max(0.0, 1.0 - x * x)) * w


def _project_to_union(x, caps):
    margins = [float(x @ c.center) - c.s for c in caps]
    i = int(np.argmax(margins))
    if margins[i] >= 0.0:
        return x
    return caps[i].project(x)


def estimate_dt(regions, t: int, samples: int = 4000, seed: int = 0,
                multistarts: int = 40) -> float:
    """Lower estimate of d_t of a union of caps: the largest achievable
    minimum pairwise distance among t points of the union.

    Random multistart over cap assignments followed by coordinate ascent
    with projection back into the union.
    """
    caps = list(regions)
    if not caps:
        raise ValueError("need at least one cap region")
    if t < 2:
        raise ValueError(f"need t >= 2 points, got {t}")
    k = caps[0].center.shape[0] - 1
    rng = substream(seed, "dt-estimate")
    per_start = max(1, samples // max(1, multistarts))
    best = 0.0
    for _ in range(multistarts):
        pts = [_sample_in_cap(caps[int(rng.integers(len(caps)))], k, rng)
               for _ in range(t)]
        # a few random re-draws to pick a decent start
        val = _min_pairwise(pts)
        for _ in range(per_start):
            i = int(rng.integers(t))
            cand = _sample_in_cap(caps[int(rng.integers(len(caps)))], k, rng)
            saved = pts[i]
            pts[i] = cand
            v = _min_pairwise(pts)
            if v >= val:
                val = v
            else:
                pts[i] = saved
        val = _ascend(pts, caps, rng, val)
        best = max(best, val)
    return best


def _min_pairwise(pts) -> float:
    m = math.inf
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            m = min(m, float(np.linalg.norm(pts[i] - pts[j])))
    return m


def _ascend(pts, caps, rng, val, rounds: int = 80):
    t = len(pts)
    dim = pts[0].shape[0]
    step = 0.4
    for _ in range(rounds):
        improved = False
        for i in range(t):
            for _ in range(6):
                cand = pts[i] + step * rng.standard_normal(dim)
                cand /= np.linalg.norm(cand)
                cand = _project_to_union(cand, caps)
                saved = pts[i]
                pts[i] = cand
                v = _min_pairwise(pts)
                if v > val:
                    val = v
                    improved = True
                else:
                    pts[i] = saved
        if not improved:
            step *= 0.5
            if step < 1e-5:
                break
    return val
