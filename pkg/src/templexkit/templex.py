"""Templexes: a cell complex paired with a digraph on its top-cells.

Nodes are string labels. When a templex carries a complex, ``binding`` maps
every node to the id of the top-cell it stands for; a templex without a
complex ("digraph-only") still supports everything that needs the digraph
alone.
"""

from __future__ import annotations

import json
import re
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

import networkx as nx

from .cellcomplex import CellComplex, complex_from_dict, complex_to_dict, load_complex, top_cells
from .errors import MissingBinding, SchemaError, ValidationError

_DIGITS = re.compile(r"(\d+)")


def natural_key(label) -> tuple:
    """Sort key that orders ``"2"`` before ``"10"`` and ``"γ2"`` before ``"γ10"``."""
    parts = _DIGITS.split(str(label))
    return tuple((0, int(p), "") if p.isdigit() else (1, 0, p) for p in parts if p != "")


def _sorted(labels: Iterable) -> list:
    return sorted(labels, key=natural_key)


class Digraph:
    """Simple directed graph (self-loops allowed, no parallel edges)."""

    __slots__ = ("_nodes", "_edges", "_succ", "_pred")

    def __init__(self, nodes: Iterable = (), edges: Iterable = ()):
        node_set = {str(n) for n in nodes}
        edge_set = set()
        for e in edges:
            u, v = (str(x) for x in e)
            node_set.update((u, v))
            edge_set.add((u, v))
        self._nodes = tuple(_sorted(node_set))
        self._edges = tuple(sorted(edge_set, key=lambda e: (natural_key(e[0]), natural_key(e[1]))))
        self._succ = {n: [] for n in self._nodes}
        self._pred = {n: [] for n in self._nodes}
        for u, v in self._edges:
            self._succ[u].append(v)
            self._pred[v].append(u)

    @property
    def nodes(self) -> tuple[str, ...]:
        return self._nodes

    @property
    def edges(self) -> tuple[tuple[str, str], ...]:
        return self._edges

    def has_node(self, n) -> bool:
        return str(n) in self._succ

    def has_edge(self, u, v) -> bool:
        return str(v) in self._succ.get(str(u), ())

    def successors(self, n) -> list[str]:
        return list(self._succ[str(n)])

    def predecessors(self, n) -> list[str]:
        return list(self._pred[str(n)])

    def in_degree(self, n) -> int:
        return len(self._pred[str(n)])

    def out_degree(self, n) -> int:
        return len(self._succ[str(n)])

    def relabel(self, mapping: Mapping) -> "Digraph":
        m = {str(k): str(v) for k, v in mapping.items()}
        f = lambda n: m.get(n, n)
        return Digraph((f(n) for n in self._nodes), ((f(u), f(v)) for u, v in self._edges))

    def to_networkx(self) -> nx.DiGraph:
        G = nx.DiGraph()
        G.add_nodes_from(self._nodes)
        G.add_edges_from(self._edges)
        return G

    def __len__(self) -> int:
        return len(self._nodes)

    def __eq__(self, other) -> bool:
        return isinstance(other, Digraph) and self._nodes == other._nodes and self._edges == other._edges

    def __hash__(self):
        return hash((self._nodes, self._edges))

    def __repr__(self) -> str:
        return f"Digraph({len(self._nodes)} nodes, {len(self._edges)} edges)"


@dataclass(frozen=True)
class JunctionLocus:
    """Connected set of codimension-1 cells shared by three or more top-cells."""

    cells: tuple[str, ...]
    incident: frozenset
    ingoing: frozenset
    outgoing: frozenset
    kind: str  # joining | splitting | mixed

    def __str__(self) -> str:
        cells = ", ".join(self.cells)
        return (f"{{{cells}}} {self.kind}: in {{{', '.join(_sorted(self.ingoing))}}}"
                f" -> out {{{', '.join(_sorted(self.outgoing))}}}")


@dataclass(frozen=True)
class PoincareEdge:
    ingoing: str
    outgoing: str
    locus: JunctionLocus | None = field(default=None, compare=False, hash=False, repr=False)

    @property
    def pair(self) -> tuple[str, str]:
        return (self.ingoing, self.outgoing)

    def sort_key(self) -> tuple:
        return (natural_key(self.ingoing), natural_key(self.outgoing))

    def __str__(self) -> str:
        return f"⟨{self.ingoing}|{self.outgoing}⟩"


@dataclass(frozen=True)
class Templex:
    """Pair of a cell complex and a digraph on its top-cells.

    ``complex`` and ``binding`` are both ``None`` for digraph-only templexes.
    """

    digraph: Digraph
    complex: CellComplex | None = None
    binding: Mapping[str, str] | None = None

    def __post_init__(self):
        if self.binding is not None:
            object.__setattr__(self, "binding", {str(k): str(v) for k, v in self.binding.items()})
        if self.complex is None or self.binding is None:
            return
        tops = {c.id for c in top_cells(self.complex)}
        nodes = set(self.digraph.nodes)
        if set(self.binding) != nodes:
            missing = _sorted(nodes ^ set(self.binding))
            raise MissingBinding(f"binding does not cover exactly the digraph nodes: {missing}")
        bound = list(self.binding.values())
        if len(set(bound)) != len(bound) or set(bound) != tops:
            raise MissingBinding("binding is not a bijection between nodes and top-cells")

    @property
    def has_complex(self) -> bool:
        return self.complex is not None and self.binding is not None

    def cell_of(self, node) -> str:
        if not self.has_complex:
            raise MissingBinding("templex has no complex binding")
        return self.binding[str(node)]

    def node_of(self, cell_id: str) -> str:
        if not self.has_complex:
            raise MissingBinding("templex has no complex binding")
        for n, c in self.binding.items():
            if c == cell_id:
                return n
        raise KeyError(cell_id)

    def relabel(self, mapping: Mapping) -> "Templex":
        """Rename digraph nodes; the complex is left untouched."""
        m = {str(k): str(v) for k, v in mapping.items()}
        binding = None
        if self.binding is not None:
            binding = {m.get(n, n): c for n, c in self.binding.items()}
        return Templex(self.digraph.relabel(m), self.complex, binding)


def templex_from_complex(K: CellComplex, edges: Iterable, binding: Mapping | None = None) -> Templex:
    """Templex on ``K``; nodes default to the top-cell ids themselves."""
    if binding is None:
        binding = {c.id: c.id for c in top_cells(K)}
    return Templex(Digraph(binding.keys(), edges), K, binding)


# -- junction loci ------------------------------------------------------------

def _junction_cells(K: CellComplex) -> dict[str, set[str]]:
    if K.dimension < 1:
        return {}
    meet: dict[str, set[str]] = {}
    for c in K.cells(K.dimension):
        for face in c.occurrences():
            meet.setdefault(face, set()).add(c.id)
    return {f: s for f, s in meet.items() if len(s) >= 3}


def junction_loci(T: Templex) -> list[JunctionLocus]:
    """Junction loci of a templex with a bound complex.

    Two junction cells belong to the same locus when they share a face and
    are incident to a common top-cell; a node is ingoing at a locus if it
    sends a digraph edge to another incident node, outgoing if it receives
    one.
    """
    if not T.has_complex:
        raise MissingBinding("junction loci need a complex and a node binding")
    K = T.complex
    junction = _junction_cells(K)
    if not junction:
        return []
    d = K.dimension - 1
    ids = list(junction)
    G = nx.Graph()
    G.add_nodes_from(ids)
    faces = {j: set(K.cell(d, j).occurrences()) for j in ids}
    for a_i, a in enumerate(ids):
        for b in ids[a_i + 1:]:
            if faces[a] & faces[b] and junction[a] & junction[b]:
                G.add_edge(a, b)
    cell_to_node = {c: n for n, c in T.binding.items()}
    loci = []
    for comp in nx.connected_components(G):
        cells = tuple(_sorted(comp))
        incident = {cell_to_node[c] for j in comp for c in junction[j]}
        ingoing, outgoing = set(), set()
        for u in incident:
            for v in T.digraph.successors(u):
                if v in incident and v != u:
                    ingoing.add(u)
                    outgoing.add(v)
        idle = incident - ingoing - outgoing
        if idle:
            warnings.warn(f"nodes {_sorted(idle)} meet locus {cells} without crossing it", stacklevel=2)
        if len(outgoing) == 1 and len(ingoing) >= 2:
            kind = "joining"
        elif len(ingoing) == 1 and len(outgoing) >= 2:
            kind = "splitting"
        else:
            kind = "mixed"
        loci.append(JunctionLocus(cells, frozenset(incident), frozenset(ingoing), frozenset(outgoing), kind))
    loci.sort(key=lambda L: natural_key(L.cells[0]))
    return loci


def poincare_edges(T: Templex) -> list[PoincareEdge]:
    """Poincaré edges, sorted by (ingoing, outgoing).

    With a complex, every outgoing node of a locus that is entered from two
    or more incident nodes yields one edge per source. Without one, every
    edge into a node of in-degree at least two is a Poincaré edge.
    """
    out = []
    if T.has_complex:
        for L in junction_loci(T):
            for o in L.outgoing:
                sources = [u for u in T.digraph.predecessors(o) if u in L.incident and u != o]
                if len(sources) >= 2:
                    out.extend(PoincareEdge(u, o, L) for u in sources)
    else:
        G = T.digraph
        for u, v in G.edges:
            if G.in_degree(v) >= 2:
                out.append(PoincareEdge(u, v))
    unique = {}
    for e in out:
        unique.setdefault(e.pair, e)
    return sorted(unique.values(), key=PoincareEdge.sort_key)


# -- JSON ---------------------------------------------------------------------

def templex_to_dict(T: Templex) -> dict:
    data = {
        "complex": complex_to_dict(T.complex) if T.complex is not None else None,
        "nodes": list(T.digraph.nodes),
        "edges": [list(e) for e in T.digraph.edges],
    }
    if T.binding is not None:
        data["binding"] = {n: T.binding[n] for n in _sorted(T.binding)}
    return data


def templex_from_dict(data, base: Path | None = None) -> Templex:
    if not isinstance(data, dict):
        raise SchemaError("templex document must be an object")
    raw = data.get("complex")
    K = None
    try:
        if isinstance(raw, dict):
            K = complex_from_dict(raw)
        elif isinstance(raw, str):
            p = Path(raw)
            if base is not None and not p.is_absolute():
                p = base / p
            K = load_complex(p)
        elif raw is not None:
            raise SchemaError("expected an object, a path or null", "complex")
    except SchemaError as exc:
        if exc.location and exc.location.startswith("complex"):
            raise
        raise SchemaError(str(exc), "complex") from exc
    except ValidationError as exc:
        raise type(exc)(f"complex: {exc}") from exc
    nodes = data.get("nodes", [])
    if not isinstance(nodes, list):
        raise SchemaError("expected a list", "nodes")
    edges = data.get("edges", [])
    if not isinstance(edges, list):
        raise SchemaError("expected a list", "edges")
    for i, e in enumerate(edges):
        if not isinstance(e, (list, tuple)) or len(e) != 2:
            raise SchemaError("edge must be a [source, target] pair", f"edges[{i}]")
    binding = data.get("binding")
    if binding is not None and not isinstance(binding, dict):
        raise SchemaError("expected an object", "binding")
    if K is not None and binding is None:
        binding = {c.id: c.id for c in top_cells(K)}
    try:
        return Templex(Digraph(nodes, edges), K, binding if K is not None else None)
    except MissingBinding as exc:
        raise SchemaError(str(exc), "binding") from exc


def load_templex(path) -> Templex:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON ({exc.msg})", f"{path}:{exc.lineno}") from exc
    try:
        return templex_from_dict(data, base=path.parent)
    except SchemaError as exc:
        if exc.location and str(exc.location).startswith(str(path)):
            raise
        raise SchemaError(exc.args[0], str(path)) from exc
    except ValidationError as exc:
        raise type(exc)(f"{path}: {exc}") from exc


def save_templex(T: Templex, path) -> None:
    Path(path).write_text(json.dumps(templex_to_dict(T), ensure_ascii=False, indent=1) + "\n", encoding="utf-8")
