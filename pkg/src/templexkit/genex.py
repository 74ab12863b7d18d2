"""Directed path algebra on a templex digraph.

Paths compose by concatenation when the tail of one is the head of the next.
The Poincaré-edge operator contracts a path onto the Poincaré edges it
crosses; elementary cycles with the same contraction form one generatex class.
"""

from __future__ import annotations

import itertools
import os
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import networkx as nx

from .errors import (CycleCapExceeded, DisconnectedSelection, MissingBinding,
                     MixedDimensionSelection, NotComposable, TrivialClass, ValidationError)
from .homology import orientability_report
from .templex import Digraph, PoincareEdge, Templex, natural_key, poincare_edges

DEFAULT_CYCLE_CAP = 10_000
CAP_ENV = "TEMPLEXKIT_CYCLE_CAP"

PRESERVING = "preserving"
REVERSING = "reversing"
UNKNOWN = "unknown"


def _seq_key(nodes: Sequence[str]) -> tuple:
    return tuple(natural_key(n) for n in nodes)


# -- paths --------------------------------------------------------------------

@dataclass(frozen=True)
class DirectedPath:
    """Node sequence ``n0 -> n1 -> ... -> nm`` with ``m >= 1``."""

    nodes: tuple[str, ...]

    def __post_init__(self):
        nodes = tuple(str(n) for n in self.nodes)
        if len(nodes) < 2:
            raise ValidationError("a directed path needs at least one edge")
        object.__setattr__(self, "nodes", nodes)

    @property
    def head(self) -> str:
        return self.nodes[0]

    @property
    def tail(self) -> str:
        return self.nodes[-1]

    @property
    def length(self) -> int:
        return len(self.nodes) - 1

    @property
    def is_closed(self) -> bool:
        return self.nodes[0] == self.nodes[-1]

    def edges(self) -> list[tuple[str, str]]:
        return list(zip(self.nodes, self.nodes[1:]))

    def check(self, G: Digraph) -> "DirectedPath":
        for u, v in self.edges():
            if not G.has_edge(u, v):
                raise ValidationError(f"{u}→{v} is not an edge of the digraph")
        return self

    def __mul__(self, other: "DirectedPath") -> "DirectedPath":
        return concat(self, other)

    def __str__(self) -> str:
        return "→".join(self.nodes)


@dataclass(frozen=True)
class DirectedCycle(DirectedPath):
    """Closed path stored in its canonical rotation.

    The canonical rotation is the one whose open node sequence is smallest
    under natural ordering of the labels.
    """

    def __post_init__(self):
        nodes = [str(n) for n in self.nodes]
        if len(nodes) >= 2 and nodes[0] == nodes[-1]:
            nodes = nodes[:-1]
        if not nodes:
            raise ValidationError("empty cycle")
        best = min(range(len(nodes)), key=lambda i: _seq_key(nodes[i:] + nodes[:i]))
        ring = nodes[best:] + nodes[:best]
        object.__setattr__(self, "nodes", tuple(ring + ring[:1]))

    @property
    def ring(self) -> tuple[str, ...]:
        """Open node sequence (without the repeated start)."""
        return self.nodes[:-1]

    def is_elementary(self) -> bool:
        return len(set(self.ring)) == len(self.ring)

    def rotated_to(self, node: str) -> DirectedPath:
        i = self.ring.index(str(node))
        ring = self.ring[i:] + self.ring[:i]
        return DirectedPath(ring + ring[:1])


def path(*nodes) -> DirectedPath:
    if len(nodes) == 1 and not isinstance(nodes[0], (str, int)):
        nodes = tuple(nodes[0])
    return DirectedPath(tuple(nodes))


def cycle(*nodes) -> DirectedCycle:
    if len(nodes) == 1 and not isinstance(nodes[0], (str, int)):
        nodes = tuple(nodes[0])
    return DirectedCycle(tuple(nodes))


def concat(p: DirectedPath, q: DirectedPath) -> DirectedPath:
    """Product ``p q``: follow ``p``, then ``q``."""
    if p.tail != q.head:
        raise NotComposable(f"cannot follow {p} with {q}: {p.tail} ≠ {q.head}")
    return DirectedPath(p.nodes + q.nodes[1:])


# -- Poincaré-edge operator ---------------------------------------------------

def _rotation_key(pairs):
    return tuple((natural_key(a), natural_key(b)) for a, b in pairs)


@dataclass(frozen=True)
class PSignature:
    """Ordered Poincaré edges crossed by a path.

    Cyclic signatures compare up to rotation; ``edges`` then holds the
    canonical (lexicographically smallest) rotation.
    """

    edges: tuple[PoincareEdge, ...] = ()
    cyclic: bool = False

    def __post_init__(self):
        edges = tuple(self.edges)
        if self.cyclic and edges:
            pairs = [e.pair for e in edges]
            best = min(range(len(pairs)), key=lambda i: _rotation_key(pairs[i:] + pairs[:i]))
            edges = edges[best:] + edges[:best]
        object.__setattr__(self, "edges", edges)

    @property
    def pairs(self) -> tuple[tuple[str, str], ...]:
        return tuple(e.pair for e in self.edges)

    def rotations(self) -> list[tuple[tuple[str, str], ...]]:
        p = self.pairs
        return [p[i:] + p[:i] for i in range(len(p))] or [()]

    def __eq__(self, other) -> bool:
        return isinstance(other, PSignature) and self.pairs == other.pairs and self.cyclic == other.cyclic

    def __hash__(self):
        return hash((self.pairs, self.cyclic))

    def __add__(self, other: "PSignature") -> "PSignature":
        return PSignature(self.edges + other.edges)

    def __len__(self) -> int:
        return len(self.edges)

    def __bool__(self) -> bool:
        return bool(self.edges)

    def __str__(self) -> str:
        return "{" + ", ".join(str(e) for e in self.edges) + "}"


def p_image(p: DirectedPath, edges: Iterable[PoincareEdge]) -> PSignature:
    """Contract ``p`` onto the Poincaré edges it traverses, in order."""
    lookup = {e.pair: e for e in edges}
    hit = tuple(lookup[e] for e in p.edges() if e in lookup)
    return PSignature(hit, cyclic=isinstance(p, DirectedCycle))


# -- cycles and classes -------------------------------------------------------

def cycle_cap(cap: int | None = None) -> int:
    if cap is None:
        cap = int(os.environ.get(CAP_ENV, DEFAULT_CYCLE_CAP))
    if cap <= 0:
        raise ValueError("cycle cap must be positive")
    return cap


def elementary_cycles(G: Digraph, cap: int | None = None) -> list[DirectedCycle]:
    """All node-simple directed cycles, shortest first, then by node sequence."""
    cap = cycle_cap(cap)
    found = []
    for c in nx.simple_cycles(G.to_networkx()):
        found.append(DirectedCycle(tuple(c)))
        if len(found) > cap:
            raise CycleCapExceeded(len(found), cap)
    return sorted(found, key=lambda c: (c.length, _seq_key(c.nodes)))


@dataclass
class GeneratexClass:
    index: int
    signature: PSignature
    representative: DirectedCycle
    members: list[DirectedCycle]
    order: int
    stripexes: list[DirectedPath] = field(default_factory=list)
    orientation: str = UNKNOWN

    @property
    def label(self) -> str:
        return f"G{self.index}"

    @property
    def is_trivial(self) -> bool:
        return self.order == 0

    @property
    def nodes(self) -> set[str]:
        return {n for m in self.members for n in m.ring}

    def edge_set(self) -> set[tuple[str, str]]:
        return set(self.representative.edges())

    def __str__(self) -> str:
        return f"{self.label} = {{{self.representative}}}"


def _order(sig: PSignature) -> int:
    return len({e.ingoing for e in sig.edges})


def stripex_decomposition(g: GeneratexClass) -> list[DirectedPath]:
    """Cut the representative cycle at the outgoing node of each Poincaré edge.

    Re-concatenating the pieces in order gives back the cycle (rotated to
    start at the first cut).
    """
    if g.order == 0:
        raise TrivialClass(f"{g.label} has no Poincaré edge to cut at")
    ring = list(g.representative.ring)
    pos = {pair: i for i, pair in enumerate(zip(ring, ring[1:] + ring[:1]))}
    cuts = sorted({(pos[e.pair] + 1) % len(ring) for e in g.signature.edges})
    pieces = []
    for a, b in zip(cuts, cuts[1:] + [cuts[0] + len(ring)]):
        seq = [ring[i % len(ring)] for i in range(a, b + 1)]
        pieces.append(DirectedPath(tuple(seq)))
    return pieces


def class_subcomplex_cells(g: GeneratexClass, T: Templex) -> list[str]:
    return sorted({T.cell_of(n) for n in g.nodes}, key=natural_key)


def classify_orientation(g: GeneratexClass, T: Templex) -> str:
    """``preserving`` or ``reversing``, from the union of the class's top-cells.

    The union is reoriented from scratch; the class is reversing iff no
    coherent orientation exists.
    """
    if not T.has_complex:
        raise MissingBinding("orientation needs a complex and a node binding")
    cells = class_subcomplex_cells(g, T)
    d = T.complex.dimension
    sub = T.complex.closure((d, c) for c in cells)
    report = orientability_report(sub, top=cells)
    return PRESERVING if report.orientable else REVERSING


def generatex_classes(T: Templex, cap: int | None = None) -> list[GeneratexClass]:
    """Group the elementary cycles of ``T`` by Poincaré signature.

    Classes are numbered from 1 in order of their representative (shortest
    cycle first, ties broken by node sequence); the trivial class, if any,
    comes last.
    """
    cycles = elementary_cycles(T.digraph, cap)
    pe = poincare_edges(T)
    groups: dict[PSignature, list[DirectedCycle]] = {}
    for c in cycles:
        groups.setdefault(p_image(c, pe), []).append(c)
    ordered = sorted(groups.items(), key=lambda kv: (not kv[0], kv[1][0].length, _seq_key(kv[1][0].nodes)))
    classes = []
    for i, (sig, members) in enumerate(ordered, start=1):
        g = GeneratexClass(i, sig, members[0], members, _order(sig))
        if g.order:
            g.stripexes = stripex_decomposition(g)
        if T.has_complex:
            try:
                g.orientation = classify_orientation(g, T)
            except (DisconnectedSelection, MixedDimensionSelection) as exc:
                warnings.warn(f"{g.label}: orientation undetermined ({exc})", stacklevel=2)
        classes.append(g)
    return classes


# -- bonds --------------------------------------------------------------------

def edge_paths(edges: Iterable[tuple[str, str]]) -> list[DirectedPath]:
    """Split an edge set into maximal directed paths (cycles stay closed)."""
    edges = sorted(set(edges), key=lambda e: (natural_key(e[0]), natural_key(e[1])))
    succ: dict[str, list[str]] = {}
    indeg: dict[str, int] = {}
    for u, v in edges:
        succ.setdefault(u, []).append(v)
        indeg[v] = indeg.get(v, 0) + 1
    used = set()
    out = []

    def walk(start):
        seq = [start]
        while True:
            nxt = [v for v in succ.get(seq[-1], []) if (seq[-1], v) not in used]
            if len(nxt) != 1 or (len(seq) > 1 and indeg.get(seq[-1], 0) != 1):
                break
            used.add((seq[-1], nxt[0]))
            seq.append(nxt[0])
            if nxt[0] == start:
                break
        return seq

    starts = [u for u in succ if indeg.get(u, 0) != 1 or len(succ[u]) > 1]
    for u in sorted(starts, key=natural_key):
        for v in succ[u]:
            if (u, v) in used:
                continue
            used.add((u, v))
            seq = [u] + walk(v)
            out.append(DirectedPath(tuple(seq)))
    for u, v in edges:  # leftover pure cycles
        if (u, v) not in used:
            used.add((u, v))
            out.append(DirectedPath(tuple([u] + walk(v))))
    return out


@dataclass(frozen=True)
class Bond:
    """Edge overlap of two or more generatex classes.

    ``shared_edges`` is the intersection of the representative cycles;
    ``exclusive_edges`` keeps only edges used by exactly these classes and no
    other, which is where the class count equals the number of parallel
    edges in the multigraph.
    """

    indices: tuple[int, ...]
    shared_edges: tuple[tuple[str, str], ...]
    exclusive_edges: tuple[tuple[str, str], ...] = ()
    member_edges: tuple[tuple[str, str], ...] | None = None

    @property
    def valence(self) -> int:
        return len(self.indices)

    @property
    def label(self) -> str:
        sep = "," if any(i >= 10 for i in self.indices) else ""
        return "B" + sep.join(str(i) for i in self.indices)

    def shared_paths(self) -> list[DirectedPath]:
        return edge_paths(self.shared_edges)

    def exclusive_paths(self) -> list[DirectedPath]:
        return edge_paths(self.exclusive_edges)

    def __str__(self) -> str:
        paths = ", ".join(str(p) for p in self.shared_paths())
        return f"{self.label} = {{{paths}}} (valence {self.valence})"


def _sorted_edges(edges) -> tuple:
    return tuple(sorted(edges, key=lambda e: (natural_key(e[0]), natural_key(e[1]))))


def bonds(classes: Sequence[GeneratexClass], all_subsets: bool = False) -> list[Bond]:
    """Bonds between nontrivial classes.

    By default one bond is reported per distinct set of classes that some
    edge belongs to (two or more classes). With ``all_subsets`` every index
    subset with a nonempty intersection is reported.
    """
    live = [g for g in classes if not g.is_trivial]
    E = {g.index: g.edge_set() for g in live}
    owners: dict[tuple[str, str], frozenset] = {}
    for i, es in E.items():
        for e in es:
            owners[e] = owners.get(e, frozenset()) | {i}
    if all_subsets:
        index_sets = set()
        for m in range(2, len(live) + 1):
            for S in itertools.combinations(sorted(E), m):
                if set.intersection(*(E[i] for i in S)):
                    index_sets.add(frozenset(S))
    else:
        index_sets = {S for S in owners.values() if len(S) >= 2}
    by_index = {g.index: g for g in live}
    multi = any(len(g.members) > 1 for g in live)
    out = []
    for S in index_sets:
        shared = set.intersection(*(E[i] for i in S))
        exclusive = {e for e, o in owners.items() if o == S}
        member = None
        if multi:
            member_sets = [set(m.edges()) for i in S for m in by_index[i].members]
            member = set.intersection(*member_sets)
            if member != shared:
                warnings.warn(f"bond {sorted(S)}: member cycles share fewer edges than representatives",
                              stacklevel=2)
            member = _sorted_edges(member)
        out.append(Bond(tuple(sorted(S)), _sorted_edges(shared), _sorted_edges(exclusive), member))
    out.sort(key=lambda b: (-b.valence, b.indices))
    return out


# -- multigraph, pushouts ----------------------------------------------------

PALETTE = ("red", "blue", "green3", "magenta", "orange", "gray40", "cyan3", "brown", "purple", "gold3")


@dataclass(frozen=True)
class MultigraphView:
    """Union of representative cycles with one parallel edge per class."""

    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str, int], ...]

    def parallel(self, u, v) -> int:
        return sum(1 for a, b, _ in self.edges if a == str(u) and b == str(v))

    def classes_on(self, u, v) -> list[int]:
        return [i for a, b, i in self.edges if a == str(u) and b == str(v)]

    def to_networkx(self) -> nx.MultiDiGraph:
        G = nx.MultiDiGraph()
        G.add_nodes_from(self.nodes)
        for u, v, i in self.edges:
            G.add_edge(u, v, key=i, generatex=i)
        return G

    def to_dot(self, name: str = "templex") -> str:
        lines = [f'digraph "{name}" {{', "  node [shape=circle];"]
        lines += [f'  "{n}";' for n in self.nodes]
        for u, v, i in self.edges:
            color = PALETTE[(i - 1) % len(PALETTE)]
            lines.append(f'  "{u}" -> "{v}" [color={color}, label="G{i}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def multigraph_view(classes: Sequence[GeneratexClass]) -> MultigraphView:
    nodes, edges = set(), []
    for g in classes:
        nodes.update(g.representative.ring)
        edges.extend((u, v, g.index) for u, v in g.representative.edges())
    edges.sort(key=lambda e: (natural_key(e[0]), natural_key(e[1]), e[2]))
    return MultigraphView(tuple(sorted(nodes, key=natural_key)), tuple(edges))


def pushout_report(bond: Bond, classes: Sequence[GeneratexClass]) -> dict:
    """Describe the gluing of the bonded classes along their common edges.

    One cospan per pair of indices, plus the full cospan when three or more
    classes meet.
    """
    by_index = {g.index: g for g in classes}
    shared = [str(p) for p in bond.shared_paths()]
    names = {i: by_index[i].label if i in by_index else f"G{i}" for i in bond.indices}

    def diagram(idx):
        legs = [f"{bond.label} ↪ {names[i]}" for i in idx]
        glued = f" ⊔_{bond.label} ".join(names[i] for i in idx)
        return {"classes": list(idx), "legs": legs, "pushout": glued}

    report = {
        "bond": bond.label,
        "valence": bond.valence,
        "shared": shared,
        "pairs": [diagram(pair) for pair in itertools.combinations(bond.indices, 2)],
    }
    if bond.valence >= 3:
        report["full"] = diagram(bond.indices)
    return report
