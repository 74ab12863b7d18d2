"""From raw data to complexes and itineraries.

Reference flows are integrated with a fixed-step fourth-order Runge-Kutta
scheme. Point clouds are split into clusters whose local dimension is checked
by a singular-value scaling test, triangulated on landmarks, and glued into a
cell complex whose 2-cells are disks inside single clusters.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy.cluster.vq import kmeans2
import networkx as nx
from scipy.spatial import Delaunay, QhullError, cKDTree

from .cellcomplex import Cell, CellComplex
from .errors import (EmptyCharts, InsufficientPoints, LocalDimensionMismatch, NonFiniteState,
                     SchemaError, SeriesTooShort, ValidationError)
from .templex import Digraph, Templex
from .tmv import Itinerary


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    points: np.ndarray  # (n, dim)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        x = np.asarray(self.points, dtype=float)
        if x.ndim == 1:
            x = x[:, None]
        if t.ndim != 1 or len(t) != len(x):
            raise ValidationError("times and points differ in length")
        if len(t) > 1 and np.any(np.diff(t) <= 0):
            raise ValidationError("times must be strictly increasing")
        if not np.all(np.isfinite(x)):
            raise NonFiniteState("trajectory contains non-finite values")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "points", x)

    def __len__(self) -> int:
        return len(self.times)

    @property
    def dim(self) -> int:
        return self.points.shape[1]


# -- flows --------------------------------------------------------------------

# fields work on plain tuples of floats: far cheaper than small numpy arrays
def rossler_field(a: float = 0.2, b: float = 0.2, c: float = 5.7) -> Callable:
    def f(s):
        x, y, z = s
        return (-y - z, x + a * y, b + z * (x - c))
    return f


def lorenz_field(sigma: float = 10.0, rho: float = 28.0, beta: float = 8.0 / 3.0) -> Callable:
    def f(s):
        x, y, z = s
        return (sigma * (y - x), x * (rho - z) - y, x * y - beta * z)
    return f


SYSTEMS = {
    "rossler": (rossler_field, {"a": 0.2, "b": 0.2, "c": 5.7}, (1.0, 1.0, 1.0)),
    "lorenz": (lorenz_field, {"sigma": 10.0, "rho": 28.0, "beta": 8.0 / 3.0}, (1.0, 1.0, 1.0)),
}


# integration settings behind the reference itineraries: long enough for a
# few hundred revolutions, sampled finely enough that no strip is skipped
REFERENCE_RUNS = {
    "rossler": {"t_span": 2000.0, "dt": 0.01, "transient": 200.0, "every": 10},
    "lorenz": {"t_span": 300.0, "dt": 0.005, "transient": 20.0, "every": 2},
}


def rk4(f: Callable, x0, dt: float, n_steps: int) -> np.ndarray:
    """``n_steps`` classical Runge-Kutta steps; returns ``n_steps + 1`` states."""
    x = tuple(float(v) for v in x0)
    out = [x]
    h, h2, h6 = dt, 0.5 * dt, dt / 6.0
    for i in range(n_steps):
        k1 = f(x)
        k2 = f(tuple(a + h2 * b for a, b in zip(x, k1)))
        k3 = f(tuple(a + h2 * b for a, b in zip(x, k2)))
        k4 = f(tuple(a + h * b for a, b in zip(x, k3)))
        x = tuple(a + h6 * (p + 2 * q + 2 * r + s) for a, p, q, r, s in zip(x, k1, k2, k3, k4))
        if not all(math.isfinite(v) for v in x):
            raise NonFiniteState(f"state diverged at step {i + 1} (t={(i + 1) * dt:g})")
        out.append(x)
    return np.array(out)


def simulate(system: str, params: Mapping | None = None, t_span: float | tuple = 100.0,
             dt: float = 0.01, transient: float = 0.0, x0=None, every: int = 1) -> Trajectory:
    """Integrate a reference flow and drop the first ``transient`` time units.

    Args:
        system: ``"rossler"`` or ``"lorenz"``.
        params: overrides of the classical parameter values.
        t_span: recorded duration, or ``(t0, t1)``.
        every: keep one state out of ``every`` steps.
    """
    if system not in SYSTEMS:
        raise ValueError(f"unknown system {system!r}; choose from {sorted(SYSTEMS)}")
    if not dt > 0:
        raise ValueError("dt must be positive")
    if transient < 0:
        raise ValueError("transient must be non-negative")
    make, defaults, start = SYSTEMS[system]
    p = dict(defaults)
    p.update(params or {})
    t0, t1 = (0.0, float(t_span)) if np.isscalar(t_span) else map(float, t_span)
    if t1 <= t0:
        raise ValueError("empty time span")
    skip = int(round(transient / dt))
    n = int(round((t1 - t0) / dt))
    states = rk4(make(**p), start if x0 is None else x0, dt, skip + n)[skip:]
    times = t0 + dt * np.arange(n + 1)
    return Trajectory(times[::every], states[::every])


def delay_embed(series, tau: int, dim: int, dt: float = 1.0) -> Trajectory:
    """Point ``i`` is ``(x[i], x[i+tau], ..., x[i+(dim-1)*tau])``."""
    x = np.asarray(series, dtype=float).ravel()
    if tau < 1 or dim < 1:
        raise ValueError("tau and dim must be positive")
    span = (dim - 1) * tau
    if len(x) <= span:
        raise SeriesTooShort(f"{len(x)} samples cannot be embedded with tau={tau}, dim={dim}")
    n = len(x) - span
    pts = np.stack([x[k * tau: k * tau + n] for k in range(dim)], axis=1)
    return Trajectory(dt * np.arange(n), pts)


def read_trajectory_csv(path) -> Trajectory:
    """Read ``time,x1,...,xn`` rows."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows or not rows[0] or rows[0][0].strip() != "time":
        raise SchemaError("expected header time,x1,...", f"{path}:1")
    try:
        data = np.array([[float(v) for v in r] for r in rows[1:] if r], dtype=float)
    except ValueError as exc:
        raise SchemaError(f"non-numeric value ({exc})", str(path)) from exc
    if data.size == 0:
        raise SchemaError("no samples", str(path))
    return Trajectory(data[:, 0], data[:, 1:])


def write_trajectory_csv(traj: Trajectory, path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["time"] + [f"x{i + 1}" for i in range(traj.dim)])
        for t, x in zip(traj.times, traj.points):
            w.writerow([repr(float(t))] + [repr(float(v)) for v in x])


# -- local charts -------------------------------------------------------------

@dataclass
class LocalChart:
    node: str
    indices: np.ndarray
    barycenter: np.ndarray
    singular_values: np.ndarray
    dimension: int
    slopes: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def to_dict(self) -> dict:
        return {
            "node": self.node,
            "barycenter": [float(v) for v in self.barycenter],
            "singular_values": [float(v) for v in self.singular_values],
            "dimension": int(self.dimension),
            "size": int(len(self.indices)),
        }


def scaling_dimension(points, center=None, sizes=None, threshold: float = 0.75):
    """Local dimension from how singular values grow with neighborhood size.

    Neighborhoods of the ``n`` points nearest to ``center`` are centered and
    decomposed. Along directions the set extends in, the singular values grow
    roughly linearly with ``n`` for a two-dimensional patch, while directions
    of bounded thickness grow like ``sqrt(n)``. The dimension is the number
    of log-log slopes at or above ``threshold``.

    Returns:
        ``(dimension, slopes, singular_values)`` where ``singular_values``
        has one row per neighborhood size.
    """
    X = np.asarray(points, dtype=float)
    n = len(X)
    if n < 8:
        raise InsufficientPoints(f"{n} points are too few for a scaling test")
    if center is None:
        center = X.mean(axis=0)
    order = np.argsort(np.linalg.norm(X - center, axis=1), kind="stable")
    if sizes is None:
        sizes = np.unique(np.geomspace(max(8, n // 16), n, 6).astype(int))
    S = []
    for m in sizes:
        Y = X[order[:m]]
        S.append(np.linalg.svd(Y - Y.mean(axis=0), compute_uv=False))
    S = np.array(S)
    logn = np.log(np.asarray(sizes, dtype=float))
    slopes = np.array([np.polyfit(logn, np.log(np.maximum(S[:, j], 1e-300)), 1)[0] for j in range(S.shape[1])])
    return int(np.sum(slopes >= threshold)), slopes, S


def farthest_point_indices(X: np.ndarray, k: int, start: int = 0) -> np.ndarray:
    """Greedy farthest-point sample, ties broken by lowest index."""
    k = min(k, len(X))
    chosen = [start]
    d = np.linalg.norm(X - X[start], axis=1)
    for _ in range(k - 1):
        i = int(np.argmax(d))
        chosen.append(i)
        d = np.minimum(d, np.linalg.norm(X - X[i], axis=1))
    return np.array(chosen)


def cluster_points(X: np.ndarray, k: int, iterations: int = 50) -> np.ndarray:
    """Deterministic k-means labels (farthest-point initial centroids)."""
    init = X[farthest_point_indices(X, k)]
    _, labels = kmeans2(X, init, iter=iterations, minit="matrix")
    return labels


# -- assignment ---------------------------------------------------------------

@dataclass(frozen=True)
class CellAssignment:
    labels: tuple  # node label or None per sample

    @property
    def assigned_fraction(self) -> float:
        return sum(lab is not None for lab in self.labels) / max(1, len(self.labels))


def assign_cells(traj: Trajectory, charts: Sequence[LocalChart], max_distance: float | None = None) -> CellAssignment:
    """Nearest chart barycenter per sample; farther than ``max_distance`` is unassigned."""
    if not charts:
        raise EmptyCharts("no charts to assign to")
    tree = cKDTree(np.array([c.barycenter for c in charts]))
    dist, idx = tree.query(traj.points)
    labels = tuple(None if (max_distance is not None and d > max_distance) else charts[i].node
                   for d, i in zip(dist, idx))
    return CellAssignment(labels)


def itinerary_from_assignment(traj: Trajectory, assignment: CellAssignment) -> Itinerary:
    keep = [i for i, lab in enumerate(assignment.labels) if lab is not None]
    if not keep:
        raise ValidationError("no sample was assigned to a cell")
    return Itinerary(tuple(traj.times[keep]), tuple(assignment.labels[i] for i in keep))


def debounce(it: Itinerary, min_samples: int = 2) -> Itinerary:
    """Absorb visits shorter than ``min_samples`` samples into the preceding visit.

    Removes the back-and-forth flicker that nearest-cell assignment produces
    along cell boundaries. The first visit is never absorbed.
    """
    if min_samples <= 1:
        return it
    nodes = list(it.nodes)
    runs = []  # [node, first sample, length]
    for i, n in enumerate(nodes):
        if runs and runs[-1][0] == n:
            runs[-1][2] += 1
        else:
            runs.append([n, i, 1])
    kept = []
    for r in runs:
        if kept and (r[2] < min_samples or kept[-1][0] == r[0]):
            kept[-1][2] += r[2]
        else:
            kept.append(r)
    out = []
    for n, _, length in kept:
        out.extend([n] * length)
    return Itinerary(it.times, tuple(out))


def digraph_from_itinerary(it: Itinerary, min_count: int = 1, nodes=None, dominant: bool = False) -> Digraph:
    """Edges between consecutively visited distinct nodes.

    An edge needs ``min_count`` observed transitions; with ``dominant`` it
    must also be seen at least as often as its reverse.
    """
    counts: dict[tuple[str, str], int] = {}
    visits = it.visits()
    for (a, _, _), (b, _, _) in zip(visits, visits[1:]):
        counts[(a, b)] = counts.get((a, b), 0) + 1
    edges = [e for e, c in counts.items()
             if c >= min_count and (not dominant or c >= counts.get((e[1], e[0]), 0))]
    return Digraph(set(it.nodes) | set(nodes or ()), edges)


# -- complex builder ----------------------------------------------------------

def tangent_triangles(X: np.ndarray, L: np.ndarray, neighbors: int = 12, alpha: float = 2.2,
                      min_votes: int = 2, fill_holes: int = 6):
    """Landmark triangulation assembled from local tangent-plane Delaunay stars.

    Around every landmark the nearby samples give a tangent plane; the
    ``neighbors`` closest landmarks are projected onto it and triangulated.
    A triangle is kept when at least ``min_votes`` of its corners' stars
    contain it and none of its sides exceeds ``alpha`` times the typical
    landmark spacing. Boundary loops of at most ``fill_holes`` edges are then
    closed by fans.

    Returns:
        ``(triangles, spacing)``, triangles as sorted landmark index triples.
    """
    m = len(L)
    if m < 4:
        raise InsufficientPoints("at least four landmarks are needed")
    k = min(neighbors, m)
    tl, tx = cKDTree(L), cKDTree(X)
    d, _ = tl.query(L, k=2)
    eps = float(np.median(d[:, 1]))
    votes: dict[tuple[int, int, int], int] = {}
    for i in range(m):
        _, nb = tl.query(L[i], k=k)
        nb = [int(j) for j in nb]
        near = tx.query_ball_point(L[i], 2 * eps)
        pts = X[near] if len(near) >= 3 else L[nb]
        _, _, Vt = np.linalg.svd(pts - pts.mean(axis=0), full_matrices=False)
        P = (L[nb] - L[i]) @ Vt[:2].T
        try:
            simplices = Delaunay(P).simplices
        except QhullError:
            continue
        for s in simplices:
            if 0 not in s:
                continue
            t = tuple(sorted(nb[q] for q in s))
            if all(np.linalg.norm(L[a] - L[b]) <= alpha * eps for a, b in ((t[0], t[1]), (t[1], t[2]), (t[0], t[2]))):
                votes[t] = votes.get(t, 0) + 1
    tris = {t for t, v in votes.items() if v >= min_votes}
    for _ in range(3):
        if not fill_holes:
            break
        use: dict[tuple[int, int], int] = {}
        for t in tris:
            for e in ((t[0], t[1]), (t[1], t[2]), (t[0], t[2])):
                use[e] = use.get(e, 0) + 1
        rim = nx.Graph([e for e, c in use.items() if c == 1])
        added = 0
        for loop in nx.cycle_basis(rim):
            if len(loop) > fill_holes:
                continue
            for q in range(1, len(loop) - 1):
                t = tuple(sorted((loop[0], loop[q], loop[q + 1])))
                if t not in tris:
                    tris.add(t)
                    added += 1
        if not added:
            break
    return sorted(tris), eps


def _link_ok(tris) -> bool:
    # link of a vertex: opposite edges must form one path or one cycle
    adj: dict[int, list[int]] = {}
    for a, b in tris:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    if any(len(v) > 2 for v in adj.values()):
        return False
    start = next(iter(adj))
    seen, stack = {start}, [start]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(adj)


def grow_disks(triangles: Sequence[tuple[int, int, int]], groups: Sequence[int], seeds=None):
    """Cover each group's triangles by disks grown one triangle at a time.

    A triangle joins a disk only if it is glued along boundary edges, keeps
    the Euler characteristic at one and leaves every vertex link a single
    path or cycle. Returns a list of ``(group, [(triangle index, sign)])``
    with signs that orient each disk coherently. Seeds are tried in the
    order given by ``seeds`` (default: index order).
    """
    edge_tris: dict[tuple[int, int], list[int]] = {}
    for ti, t in enumerate(triangles):
        for e in ((t[0], t[1]), (t[1], t[2]), (t[0], t[2])):
            edge_tris.setdefault(e, []).append(ti)
    free = set(range(len(triangles)))
    disks = []
    for seed in (range(len(triangles)) if seeds is None else seeds):
        seed = int(seed)
        if seed not in free:
            continue
        g = groups[seed]
        free.discard(seed)
        members: dict[int, int] = {}
        edge_use: dict[tuple[int, int], int] = {}
        vert_tris: dict[int, list[int]] = {}

        def add(ti, sign):
            members[ti] = sign
            t = triangles[ti]
            for e in ((t[0], t[1]), (t[1], t[2]), (t[0], t[2])):
                edge_use[e] = edge_use.get(e, 0) + 1
            for v in t:
                vert_tris.setdefault(v, []).append(ti)

        add(seed, 1)
        grew = True
        while grew:
            grew = False
            for ti in sorted(members):
                t = triangles[ti]
                for e in ((t[0], t[1]), (t[1], t[2]), (t[0], t[2])):
                    if edge_use.get(e) != 1:
                        continue
                    for cand in edge_tris[e]:
                        if cand not in free or groups[cand] != g:
                            continue
                        c = triangles[cand]
                        cedges = ((c[0], c[1]), (c[1], c[2]), (c[0], c[2]))
                        shared = [x for x in cedges if x in edge_use]
                        if any(edge_use[x] != 1 for x in shared):
                            continue
                        new_v = sum(1 for v in c if v not in vert_tris)
                        if new_v - (3 - len(shared)) + 1 != 0:
                            continue
                        ok = True
                        for v in c:
                            link = [tuple(u for u in triangles[s] if u != v) for s in vert_tris.get(v, [])]
                            link.append(tuple(u for u in c if u != v))
                            if not _link_ok(link):
                                ok = False
                                break
                        if not ok:
                            continue
                        # orient against the neighbour across e
                        sign = -members[ti] * _edge_sign(t, e) * _edge_sign(c, e)
                        free.discard(cand)
                        add(cand, sign)
                        grew = True
        disks.append((g, sorted(members.items())))
    return disks


def _edge_sign(t, e) -> int:
    # coefficient of sorted edge e in the boundary of sorted triangle t = (a, b, c)
    a, b, c = t
    return {(b, c): 1, (a, c): -1, (a, b): 1}[e]


@dataclass
class BramahResult:
    complex: CellComplex
    templex: Templex
    charts: list[LocalChart]
    itinerary: Itinerary
    cluster_of_node: dict[str, int]


def _disks_to_complex(triangles, disks, node_names):
    chains = []
    used_edges, used_verts = set(), set()
    for (g, members), name in zip(disks, node_names):
        net: dict[tuple[int, int], int] = {}
        for ti, s in members:
            t = triangles[ti]
            for e in ((t[1], t[2]), (t[0], t[2]), (t[0], t[1])):
                net[e] = net.get(e, 0) + s * _edge_sign(t, e)
        word = tuple((f"⟨{a},{b}⟩", c) for (a, b), c in sorted(net.items()) if c)
        for (a, b), c in net.items():
            if c:
                used_edges.add((a, b))
                used_verts.update((a, b))
        chains.append(Cell(name, 2, word))
    cells = [Cell(f"⟨{v}⟩", 0) for v in sorted(used_verts)]
    cells += [Cell(f"⟨{a},{b}⟩", 1, ((f"⟨{a}⟩", -1), (f"⟨{b}⟩", 1))) for a, b in sorted(used_edges)]
    return CellComplex(cells + chains)


def build_bramah(traj: Trajectory, target_dim: int = 2, cell_count: int = 8, landmarks: int = 300,
                 min_points: int = 30, alpha: float = 2.2, min_votes: int = 2,
                 fill_holes: int = 6, check_dimension: bool = True,
                 threshold: float = 0.75, min_transitions: int = 1, min_dwell: int = 3,
                 dominant: bool = True) -> BramahResult:
    """Best-effort branched-manifold complex from a sampled trajectory.

    1. k-means splits the samples into ``cell_count`` clusters, each of which
       must pass the local dimension test (``target_dim`` extended directions).
    2. Landmarks (farthest-point sample) are triangulated in local tangent
       planes (see :func:`tangent_triangles`).
    3. Triangles inherit the cluster of their barycenter and are grown into
       disks inside each cluster; every disk becomes a 2-cell and a node.
    4. Samples go to the node of the nearest triangle; after debouncing
       (``min_dwell``) the digraph keeps the observed transitions between
       nodes, optionally only in their dominant direction.
    """
    if target_dim != 2:
        raise NotImplementedError("only two-dimensional complexes are built")
    X = traj.points
    if len(X) < cell_count * min_points:
        raise InsufficientPoints(f"{len(X)} samples for {cell_count} cells of at least {min_points}")
    labels = cluster_points(X, cell_count)
    for c in range(cell_count):
        idx = np.flatnonzero(labels == c)
        if len(idx) < min_points:
            raise InsufficientPoints(f"cluster {c + 1} has {len(idx)} samples (< {min_points})")
        if check_dimension:
            dim, slopes, S = scaling_dimension(X[idx], threshold=threshold)
            if dim != target_dim:
                raise LocalDimensionMismatch(c + 1, S[-1], f"cluster {c + 1}: {dim} extended directions "
                                             f"(slopes {np.round(slopes, 2).tolist()})")
    L_idx = farthest_point_indices(X, landmarks)
    L = X[L_idx]
    triangles, _ = tangent_triangles(X, L, alpha=alpha, min_votes=min_votes, fill_holes=fill_holes)
    if not triangles:
        raise InsufficientPoints("no triangle survived the landmark triangulation")
    centroids = np.array([X[labels == c].mean(axis=0) for c in range(cell_count)])
    bary = np.array([L[list(t)].mean(axis=0) for t in triangles])
    tri_group = cKDTree(centroids).query(bary)[1]
    seed_order = np.argsort(np.linalg.norm(bary - centroids[tri_group], axis=1), kind="stable")
    disks = grow_disks(triangles, tri_group, seed_order)

    per_group: dict[int, int] = {}
    names = []
    for g, _ in disks:
        per_group[g] = per_group.get(g, 0) + 1
    seen: dict[int, int] = {}
    for g, _ in disks:
        seen[g] = seen.get(g, 0) + 1
        names.append(f"{g + 1}" if per_group[g] == 1 else f"{g + 1}.{seen[g]}")
    K = _disks_to_complex(triangles, disks, names)

    tri_node = {}
    for (g, members), name in zip(disks, names):
        for ti, _ in members:
            tri_node[triangles[ti]] = name
    tri_list = list(tri_node)
    tree = cKDTree(np.array([L[list(t)].mean(axis=0) for t in tri_list]))
    nodes = [tri_node[tri_list[int(j)]] for j in tree.query(X)[1]]
    it = debounce(Itinerary(tuple(traj.times), tuple(nodes)), min_dwell)
    G = digraph_from_itinerary(it, min_transitions, nodes=names, dominant=dominant)
    T = Templex(G, K, {n: n for n in names})

    charts = []
    node_arr = np.array(nodes, dtype=object)
    for (g, _), name in zip(disks, names):
        idx = np.flatnonzero(node_arr == name)
        if len(idx) == 0:
            idx = np.flatnonzero(labels == g)
        P = X[idx]
        sv = np.linalg.svd(P - P.mean(axis=0), compute_uv=False) if len(P) > 1 else np.zeros(X.shape[1])
        charts.append(LocalChart(name, idx, P.mean(axis=0), sv, target_dim))
    return BramahResult(K, T, charts, it, {n: g + 1 for (g, _), n in zip(disks, names)})


def save_charts(charts: Sequence[LocalChart], path) -> None:
    Path(path).write_text(json.dumps({"charts": [c.to_dict() for c in charts]}, indent=1) + "\n", encoding="utf-8")


def load_charts(path) -> list[LocalChart]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    try:
        return [LocalChart(str(c["node"]), np.zeros(0, dtype=int), np.asarray(c["barycenter"], dtype=float),
                           np.asarray(c.get("singular_values", []), dtype=float), int(c.get("dimension", 2)))
                for c in data["charts"]]
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad chart entry ({exc})", str(path)) from exc


# -- strip charts for the reference templexes ---------------------------------

def rossler_strip_itinerary(traj: Trajectory, fold_height: float = 12.0) -> Itinerary:
    """Itinerary of a Rössler trajectory on the four cells of the reference templex.

    One revolution around the z axis runs from the joining line (polar angle
    π/2 in the x-y plane) back to it. Its first eighth is cell 1, the next
    eighth cell 2, and the remainder cell 3 for the inner strip or cell 4 for
    the outer, folded strip. A revolution belongs to the outer strip when its
    excursion in z exceeds ``fold_height``; with the classical parameters
    the default sends about three revolutions in ten through the fold.
    """
    x, y, z = traj.points[:, 0], traj.points[:, 1], traj.points[:, 2]
    theta = np.unwrap(np.arctan2(y, x))
    turn = np.floor((theta - np.pi / 2) / (2 * np.pi)).astype(int)
    phase = (theta - np.pi / 2) - 2 * np.pi * turn
    peaks = {k: float(z[turn == k].max()) for k in np.unique(turn)}
    nodes = []
    for k, ph in zip(turn, phase):
        if ph < np.pi / 4:
            nodes.append("1")
        elif ph < np.pi / 2:
            nodes.append("2")
        else:
            nodes.append("4" if peaks[k] > fold_height else "3")
    return Itinerary(tuple(traj.times), tuple(nodes))


def lorenz_strip_itinerary(traj: Trajectory) -> Itinerary:
    """Itinerary of a Lorenz trajectory on the eight cells of the reference templex.

    Successive maxima of z cut the trajectory into loops; the sign of x at a
    maximum tells the wing (left: cells 1-4, right: cells 5-8). Each loop is
    split in thirds by time: cells 1, 2, then 3 if the next loop stays on the
    same wing or 4 if it crosses over (5, 6, 7 or 8 on the right wing).
    """
    x, z = traj.points[:, 0], traj.points[:, 2]
    peaks = np.flatnonzero((z[1:-1] > z[:-2]) & (z[1:-1] >= z[2:])) + 1
    if len(peaks) < 2:
        raise InsufficientPoints("need at least two loops")
    wing = np.where(x[peaks] < 0, 0, 1)  # 0 = left
    n = len(z)
    nodes = [""] * n
    base = (1, 5)
    for i in range(peaks[0]):
        nodes[i] = str(base[wing[0]] + 2)
    for k, p in enumerate(peaks):
        q = peaks[k + 1] if k + 1 < len(peaks) else n
        w = wing[k]
        same = k + 1 >= len(peaks) or wing[k + 1] == w
        third = (q - p) / 3.0
        for i in range(p, q):
            part = int((i - p) // third) if third > 0 else 0
            cell = base[w] + min(part, 1) if part < 2 else base[w] + (2 if same else 3)
            nodes[i] = str(cell)
    return Itinerary(tuple(traj.times), tuple(nodes))
