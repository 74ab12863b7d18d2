"""Reference complexes and templexes.

* Minimal CW models of the classic surfaces (sphere, cylinder, Möbius band,
  torus, Klein bottle).
* Four-cell Rössler and eight-cell Lorenz templexes with the combinatorics of
  their minimal branched-manifold complexes.
* Digraph-only templexes for the speech and wind-driven double-gyre examples,
  given as unions of their generatex cycles.

The same objects ship as JSON under ``templexkit/data``; :func:`load_fixture`
reads those files and :func:`build_fixture` rebuilds them from code.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .cellcomplex import Cell, CellComplex, build_complex, load_complex, save_complex
from .templex import Digraph, Templex, load_templex, save_templex

SURFACES = ("sphere", "cylinder", "mobius", "torus", "klein")
TEMPLEXES = ("rossler", "lorenz", "speech", "gyre")


def _vertex(i) -> str:
    return f"⟨{i}⟩"


def _edge(i, j) -> str:
    return f"⟨{i},{j}⟩"


def polygon_complex(n_vertices: int, edges: list[tuple[int, int]], faces: dict[str, list[int]]) -> CellComplex:
    """Complex whose 2-cells are polygons given as closed vertex loops.

    Each edge ``(i, j)`` is oriented from ``⟨i⟩`` to ``⟨j⟩``; a face walks its
    loop and takes every edge with the sign of the traversal direction.
    """
    cells = [Cell(_vertex(i), 0) for i in range(n_vertices)]
    lookup = {}
    for i, j in edges:
        cells.append(Cell(_edge(i, j), 1, ((_vertex(i), -1), (_vertex(j), 1))))
        lookup[(i, j)] = (_edge(i, j), 1)
        lookup[(j, i)] = (_edge(i, j), -1)
    for name, loop in faces.items():
        word = tuple(lookup[(a, b)] for a, b in zip(loop, loop[1:] + loop[:1]))
        cells.append(Cell(name, 2, word))
    return CellComplex(cells)


# -- classic surfaces --------------------------------------------------------

def sphere() -> CellComplex:
    # two discs glued along an equator loop
    return build_complex([
        Cell("v", 0),
        Cell("e", 1),
        Cell("north", 2, (("e", 1),)),
        Cell("south", 2, (("e", -1),)),
    ])


def cylinder() -> CellComplex:
    # square with one pair of opposite sides identified without twist
    return build_complex([
        Cell("v0", 0), Cell("v1", 0),
        Cell("c0", 1), Cell("c1", 1),
        Cell("s", 1, (("v0", -1), ("v1", 1))),
        Cell("D", 2, (("c0", 1), ("s", 1), ("c1", -1), ("s", -1))),
    ])


def mobius() -> CellComplex:
    # square ABCD with side AD glued to side CB (half twist)
    return build_complex([
        Cell("x", 0), Cell("y", 0),
        Cell("a", 1, (("x", -1), ("y", 1))),
        Cell("b", 1, (("x", -1), ("y", 1))),
        Cell("d", 1, (("y", -1), ("x", 1))),
        Cell("D", 2, (("b", 1), ("a", -1), ("d", -1), ("a", -1))),
    ])


def torus() -> CellComplex:
    return build_complex([
        Cell("v", 0), Cell("a", 1), Cell("b", 1),
        Cell("D", 2, (("a", 1), ("b", 1), ("a", -1), ("b", -1))),
    ])


def klein() -> CellComplex:
    return build_complex([
        Cell("v", 0), Cell("a", 1), Cell("b", 1),
        Cell("D", 2, (("a", 1), ("b", 1), ("a", -1), ("b", 1))),
    ])


def disk() -> CellComplex:
    return polygon_complex(3, [(0, 1), (1, 2), (2, 0)], {"D": [0, 1, 2]})


# -- Rössler and Lorenz ------------------------------------------------------

def rossler_complex() -> CellComplex:
    """Four 2-cells γ1..γ4 with a single junction 1-cell ⟨0,1⟩.

    γ1 and γ2 carry the band; γ2's exit splits into an inner half feeding γ3
    and an outer half feeding γ4. Both return onto ⟨0,1⟩, γ3 directly and γ4
    with a half twist, so {γ1, γ2, γ3} is an annulus and {γ1, γ2, γ4} a Möbius
    band.
    """
    edges = [(0, 1), (2, 3), (0, 2), (1, 3), (2, 4), (3, 5), (4, 6), (6, 5),
             (4, 0), (6, 1), (5, 0)]
    faces = {
        "γ1": [0, 1, 3, 2],
        "γ2": [2, 3, 5, 6, 4],
        "γ3": [4, 6, 1, 0],
        "γ4": [6, 5, 0, 1],
    }
    return polygon_complex(7, edges, faces)


def lorenz_complex() -> CellComplex:
    """Eight 2-cells: left wing γ1..γ4, right wing γ5..γ8.

    Junction 1-cells: ⟨0,1⟩ (γ1, γ3, γ8) and ⟨1,2⟩ (γ4, γ5, γ7), which touch
    at the central 0-cell ⟨1⟩.
    """
    edges = [
        (0, 1), (1, 2),
        (3, 4), (0, 3), (1, 4),                      # γ1
        (5, 7), (7, 6), (3, 5), (4, 6),              # γ2
        (5, 0), (7, 1),                              # γ3
        (6, 2),                                      # γ4
        (8, 9), (1, 8), (2, 9),                      # γ5
        (10, 12), (12, 11), (8, 10), (9, 11),        # γ6
        (12, 1), (11, 2),                            # γ7
        (10, 0),                                     # γ8
    ]
    faces = {
        "γ1": [0, 1, 4, 3],
        "γ2": [3, 4, 6, 7, 5],
        "γ3": [5, 7, 1, 0],
        "γ4": [7, 6, 2, 1],
        "γ5": [1, 2, 9, 8],
        "γ6": [8, 9, 11, 12, 10],
        "γ7": [12, 11, 2, 1],
        "γ8": [10, 12, 1, 0],
    }
    return polygon_complex(13, edges, faces)


# -- templexes ---------------------------------------------------------------

ROSSLER_EDGES = [(1, 2), (2, 3), (2, 4), (3, 1), (4, 1)]
LORENZ_EDGES = [(1, 2), (2, 3), (2, 4), (3, 1), (4, 5), (5, 6), (6, 7), (7, 5), (6, 8), (8, 1)]

SPEECH_CYCLES = [
    [7, 17, 9, 18, 20, 21, 15, 16],
    [7, 17, 9, 10, 11, 13, 14, 15, 16],
    [1, 2, 3, 4, 5, 6, 7, 17, 9, 22, 23, 25, 19, 12],
]

GYRE_CYCLES = [
    [1, 2, 3, 4],
    [1, 2, 3, 5, 6, 17, 18, 19, 20, 21, 22],
    [1, 2, 3, 5, 6, 12, 13],
    [1, 2, 3, 5, 6, 7, 8],
    [1, 2, 3, 5, 6, 9, 10, 11],
    [1, 2, 3, 5, 6, 14, 15, 16],
]


def _numbered_binding(n: int) -> dict[str, str]:
    return {str(i): f"γ{i}" for i in range(1, n + 1)}


def cycles_digraph(cycles) -> Digraph:
    """Union of closed node sequences, parallel edges removed."""
    edges = [(c[i], c[(i + 1) % len(c)]) for c in cycles for i in range(len(c))]
    return Digraph((n for c in cycles for n in c), edges)


def rossler_templex() -> Templex:
    return Templex(Digraph(range(1, 5), ROSSLER_EDGES), rossler_complex(), _numbered_binding(4))


def lorenz_templex() -> Templex:
    return Templex(Digraph(range(1, 9), LORENZ_EDGES), lorenz_complex(), _numbered_binding(8))


def speech_templex() -> Templex:
    return Templex(cycles_digraph(SPEECH_CYCLES))


def gyre_templex() -> Templex:
    return Templex(cycles_digraph(GYRE_CYCLES))


_BUILDERS = {
    "sphere": sphere, "cylinder": cylinder, "mobius": mobius, "torus": torus, "klein": klein,
    "disk": disk,
    "rossler": rossler_templex, "lorenz": lorenz_templex,
    "speech": speech_templex, "gyre": gyre_templex,
}


def build_fixture(name: str):
    """Rebuild a shipped fixture (complex or templex) from code."""
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; choose from {sorted(_BUILDERS)}") from None


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("templexkit") / "data" / f"{name}.json"))


def load_fixture(name: str):
    """Load a shipped fixture file; surfaces give complexes, the rest templexes."""
    path = fixture_path(name)
    if name in TEMPLEXES:
        return load_templex(path)
    return load_complex(path)


def write_fixtures(directory) -> list[Path]:
    """Write every fixture as JSON into ``directory``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, build in _BUILDERS.items():
        obj = build()
        path = directory / f"{name}.json"
        if isinstance(obj, Templex):
            save_templex(obj, path)
        else:
            save_complex(obj, path)
        written.append(path)
    return written
