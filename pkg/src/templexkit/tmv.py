"""Topological modes of variability.

A trajectory's top-cell itinerary is cut at every crossing of a Poincaré
edge. Each piece between two crossings is the stripex of some generatex
class, and that class becomes the label χ(t) on the piece. Pieces that more
than one class could explain take the label of the class the trajectory
resolves into next. Runs of equal labels form the intervals I_k and their
label sequence σ.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

from .errors import ItineraryGap, NoConsistentClass, SchemaError, UnreachableNode, ValidationError, WindowTooLarge
from .genex import GeneratexClass
from .templex import PoincareEdge, Templex, poincare_edges


@dataclass(frozen=True)
class Itinerary:
    """Time-stamped sequence of visited nodes (one sample per time)."""

    times: tuple[float, ...]
    nodes: tuple[str, ...]

    def __post_init__(self):
        times = tuple(float(t) for t in self.times)
        nodes = tuple(str(n) for n in self.nodes)
        if len(times) != len(nodes):
            raise ValidationError("times and nodes differ in length")
        if not times:
            raise ValidationError("empty itinerary")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValidationError("itinerary times must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "nodes", nodes)

    @classmethod
    def from_samples(cls, samples: Iterable[tuple[float, object]]) -> "Itinerary":
        samples = list(samples)
        return cls(tuple(t for t, _ in samples), tuple(n for _, n in samples))

    @property
    def start(self) -> float:
        return self.times[0]

    @property
    def end(self) -> float:
        return self.times[-1]

    def visits(self) -> list[tuple[str, float, float]]:
        """Collapse repeated samples: ``(node, entry time, last sample time)``."""
        out = []
        for t, n in zip(self.times, self.nodes):
            if out and out[-1][0] == n:
                out[-1][2] = t
            else:
                out.append([n, t, t])
        return [tuple(v) for v in out]

    def rescaled(self, factor: float) -> "Itinerary":
        return Itinerary(tuple(t * factor for t in self.times), self.nodes)


def read_itinerary_csv(path) -> Itinerary:
    """Read a ``time,node`` CSV file."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"time", "node"} <= set(reader.fieldnames):
            raise SchemaError("expected columns time,node", f"{path}:1")
        samples = []
        for line, row in enumerate(reader, start=2):
            try:
                samples.append((float(row["time"]), row["node"].strip()))
            except (TypeError, ValueError) as exc:
                raise SchemaError(f"bad row ({exc})", f"{path}:{line}") from exc
    return Itinerary.from_samples(samples)


def write_itinerary_csv(it: Itinerary, path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["time", "node"])
        for t, n in zip(it.times, it.nodes):
            w.writerow([repr(t), n])


# -- decomposition ------------------------------------------------------------

@dataclass(frozen=True)
class Segment:
    start: float
    end: float
    label: int
    path: tuple[str, ...]
    candidates: tuple[int, ...]
    provisional: bool = False


@dataclass(frozen=True)
class Interval:
    start: float
    end: float
    label: int

    @property
    def duration(self) -> float:
        return self.end - self.start


@dataclass
class TmvDecomposition:
    segments: list[Segment]
    intervals: list[Interval]
    labels: tuple[int, ...]  # every class index, for matrix layout
    repaired: list[tuple[str, str, tuple[str, ...]]] = field(default_factory=list)

    @property
    def start(self) -> float:
        return self.intervals[0].start

    @property
    def end(self) -> float:
        return self.intervals[-1].end

    @property
    def sigma(self) -> tuple[int, ...]:
        return tuple(iv.label for iv in self.intervals)

    def chi(self, t: float) -> int:
        """Class label at time ``t`` (intervals are closed on the left)."""
        if t < self.start or t > self.end:
            raise ValueError(f"t={t} outside [{self.start}, {self.end}]")
        starts = [iv.start for iv in self.intervals]
        k = int(np.searchsorted(starts, t, side="right")) - 1
        return self.intervals[k].label

    def step_series(self) -> list[tuple[float, int]]:
        """χ as ``(time, label)`` breakpoints, closed by the end time."""
        pts = [(iv.start, iv.label) for iv in self.intervals]
        pts.append((self.end, self.intervals[-1].label))
        return pts


def _repair(visits, G, repaired):
    out = [visits[0]]
    for nxt in visits[1:]:
        prev = out[-1]
        a, b = prev[0], nxt[0]
        if not G.has_edge(a, b):
            try:
                paths = list(nx.all_shortest_paths(G, a, b))
            except nx.NetworkXNoPath:
                paths = []
            if len(paths) != 1:
                why = "no directed path" if not paths else f"{len(paths)} shortest paths"
                raise ItineraryGap(f"jump {a}→{b} at t={nxt[1]}: {why}")
            inner = paths[0][1:-1]
            t0, t1 = prev[2], nxt[1]
            for i, n in enumerate(inner, start=1):
                t = t0 + (t1 - t0) * i / (len(inner) + 1)
                out.append((n, t, t))
            repaired.append((a, b, tuple(inner)))
        out.append(nxt)
    return out


def _match(path, classes, mode):
    """Classes owning a stripex equal to ``path`` (or with it as prefix/suffix)."""
    path = tuple(path)
    n = len(path)
    hits = []
    for g in classes:
        for s in g.stripexes:
            s = s.nodes
            if mode == "full" and s == path:
                ok = True
            elif mode == "prefix":
                ok = len(s) >= n and s[:n] == path
            elif mode == "suffix":
                ok = len(s) >= n and s[-n:] == path
            else:
                ok = False
            if ok:
                hits.append(g.index)
                break
    return hits


def label_trajectory(itinerary: Itinerary, T: Templex, classes: Sequence[GeneratexClass],
                     pedges: Sequence[PoincareEdge] | None = None) -> TmvDecomposition:
    """Assign a generatex class to every instant of ``itinerary``.

    Jumps between nodes that are not joined by an edge are bridged along the
    unique shortest directed path, with evenly spaced entry times.
    """
    G = T.digraph
    for n in set(itinerary.nodes):
        if not G.has_node(n):
            raise UnreachableNode(f"node {n!r} is not in the digraph")
    if pedges is None:
        pedges = poincare_edges(T)
    pset = {e.pair for e in pedges}
    nontrivial = [g for g in classes if not g.is_trivial]
    labels = tuple(g.index for g in classes)
    repaired = []
    visits = _repair(itinerary.visits(), G.to_networkx(), repaired)
    nodes = [v[0] for v in visits]
    entry = [v[1] for v in visits]
    t_start, t_end = itinerary.start, itinerary.end
    cross = [k for k in range(1, len(nodes)) if (nodes[k - 1], nodes[k]) in pset]

    if not cross:
        seen = set(nodes)
        trivial = [g for g in classes if g.is_trivial and seen <= g.nodes]
        holders = trivial or [g for g in classes if seen <= g.nodes]
        if not holders:
            raise NoConsistentClass(f"no class contains nodes {sorted(seen)} on [{t_start}, {t_end}]")
        lab = holders[0].index
        seg = Segment(t_start, t_end, lab, tuple(nodes), tuple(g.index for g in holders), not trivial)
        return TmvDecomposition([seg], [Interval(t_start, t_end, lab)], labels, repaired)

    # raw pieces: (start, end, path, candidates, kind)
    pieces = []
    if cross[0] > 0:
        path = nodes[:cross[0] + 1]
        pieces.append([t_start, entry[cross[0]], path, _match(path, nontrivial, "suffix"), "lead"])
    for a, b in zip(cross, cross[1:]):
        path = nodes[a:b + 1]
        cand = _match(path, nontrivial, "full")
        if not cand:
            end_edge = (nodes[b - 1], nodes[b])
            cand = [g.index for g in nontrivial
                    if end_edge in g.signature.pairs and set(path) <= g.nodes]
        if not cand:
            raise NoConsistentClass(f"segment {'→'.join(path)} on [{entry[a]}, {entry[b]}] matches no class")
        pieces.append([entry[a], entry[b], path, cand, "full"])
    last = cross[-1]
    path = nodes[last:]
    if len(path) > 1 or entry[last] < t_end:
        pieces.append([entry[last], t_end, path, _match(path, nontrivial, "prefix") if len(path) > 1 else [], "tail"])

    resolved = [p[3][0] if len(p[3]) == 1 else None for p in pieces]
    chosen, provisional = [], []
    for i, p in enumerate(pieces):
        cand = p[3]
        if resolved[i] is not None:
            chosen.append(resolved[i])
            provisional.append(False)
            continue
        ahead = next((resolved[j] for j in range(i + 1, len(pieces)) if resolved[j] is not None), None)
        behind = next((chosen[j] for j in range(i - 1, -1, -1) if not provisional[j]), None)
        if ahead is not None and (not cand or ahead in cand):
            chosen.append(ahead)
            provisional.append(p[4] != "full" and not cand)
        elif behind is not None and (not cand or behind in cand):
            chosen.append(behind)
            provisional.append(p[4] == "tail" or not cand)
        elif cand:
            chosen.append(cand[0])
            provisional.append(True)
        elif ahead is not None or behind is not None:
            chosen.append(ahead if ahead is not None else behind)
            provisional.append(True)
        else:
            raise NoConsistentClass(f"cannot label {'→'.join(p[2])} on [{p[0]}, {p[1]}]")

    segments = [Segment(p[0], p[1], lab, tuple(p[2]), tuple(p[3]), prov)
                for p, lab, prov in zip(pieces, chosen, provisional)]
    intervals = []
    for s in segments:
        if intervals and intervals[-1].label == s.label:
            intervals[-1] = Interval(intervals[-1].start, s.end, s.label)
        else:
            intervals.append(Interval(s.start, s.end, s.label))
    return TmvDecomposition(segments, intervals, labels, repaired)


# -- statistics ---------------------------------------------------------------

@dataclass
class TmvStats:
    counts: dict[int, int]
    totals: dict[int, float]
    means: dict[int, float]
    transitions: dict[tuple[int, int], int]
    duration: float
    n_intervals: int

    def ratio(self, a: int, b: int) -> float:
        return self.means[a] / self.means[b]


def tmv_stats(d: TmvDecomposition) -> TmvStats:
    counts = {i: 0 for i in d.labels}
    totals = {i: 0.0 for i in d.labels}
    for iv in d.intervals:
        counts[iv.label] = counts.get(iv.label, 0) + 1
        totals[iv.label] = totals.get(iv.label, 0.0) + iv.duration
    means = {i: (totals[i] / counts[i] if counts[i] else 0.0) for i in counts}
    trans: dict[tuple[int, int], int] = {}
    for a, b in zip(d.sigma, d.sigma[1:]):
        trans[(a, b)] = trans.get((a, b), 0) + 1
    return TmvStats(counts, totals, means, trans, d.end - d.start, len(d.intervals))


def transition_matrix(d: TmvDecomposition, level: str = "intervals") -> np.ndarray:
    """Counts of label changes; row = from, column = to, in ``d.labels`` order.

    ``level="segments"`` counts stripex-to-stripex steps instead, which keeps
    repeated passes through the same class on the diagonal.
    """
    if level == "intervals":
        seq = d.sigma
    elif level == "segments":
        seq = tuple(s.label for s in d.segments)
    else:
        raise ValueError(f"unknown level {level!r}")
    pos = {lab: i for i, lab in enumerate(d.labels)}
    M = np.zeros((len(d.labels), len(d.labels)), dtype=int)
    for a, b in zip(seq, seq[1:]):
        M[pos[a], pos[b]] += 1
    return M


def adjacent_classes(classes: Sequence[GeneratexClass]) -> set[tuple[int, int]]:
    """Pairs of classes whose cycles share a node (including each class with itself)."""
    out = set()
    for g in classes:
        for h in classes:
            if g.nodes & h.nodes:
                out.add((g.index, h.index))
    return out


# -- tipping ------------------------------------------------------------------

@dataclass
class TippingTimeline:
    windows: list[tuple[float, float, frozenset]]
    events: list[tuple[float, frozenset, frozenset]]

    @property
    def event_times(self) -> list[float]:
        return [t for t, _, _ in self.events]


def active_classes(d: TmvDecomposition, a: float, b: float) -> frozenset:
    return frozenset(iv.label for iv in d.intervals if iv.start < b and iv.end > a)


def tipping_timeline(d: TmvDecomposition, window: float, stride: float) -> TippingTimeline:
    """Slide a window over the record and note when the active class set changes.

    An event is stamped with the start of the first window showing the new set.
    """
    span = d.end - d.start
    if window <= 0 or stride <= 0:
        raise ValueError("window and stride must be positive")
    if window > span * (1 + 1e-12):
        raise WindowTooLarge(f"window {window} exceeds record length {span}")
    windows = []
    k = 0
    while True:
        a = d.start + k * stride
        b = a + window
        if b > d.end + 1e-9 * max(1.0, abs(span)):
            break
        windows.append((a, b, active_classes(d, a, b)))
        k += 1
    events = [(w1[0], w0[2], w1[2]) for w0, w1 in zip(windows, windows[1:]) if w0[2] != w1[2]]
    return TippingTimeline(windows, events)
