"""Finite cell complexes with integer incidence coefficients.

A cell is identified by the pair ``(dim, id)``; ids are free-form strings so
complexes can keep labels such as ``"γ1"`` or ``"⟨0,1⟩"``. The boundary of a
cell is an *attaching word*: an ordered list of ``(face id, coefficient)``
pairs. A face may appear more than once, which is how minimal CW models such as
the torus (``a b a⁻¹ b⁻¹``) or the Klein bottle (``a b a⁻¹ b``) are written.
The boundary matrix sums the coefficients of repeated faces.

Complexes are immutable; every transformation returns a new object.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .errors import (
    BoundaryNotClosed,
    DanglingFace,
    DimensionOutOfRange,
    IrregularCell,
    SchemaError,
    ValidationError,
)


@dataclass(frozen=True)
class Cell:
    id: str
    dim: int
    boundary: tuple[tuple[str, int], ...] = ()

    def faces(self) -> dict[str, int]:
        """Net coefficient of every face (repeated occurrences summed)."""
        net: dict[str, int] = {}
        for face, c in self.boundary:
            net[face] = net.get(face, 0) + c
        return net

    def occurrences(self) -> dict[str, int]:
        """Number of times each face is glued in, ignoring signs."""
        occ: dict[str, int] = {}
        for face, c in self.boundary:
            occ[face] = occ.get(face, 0) + abs(c)
        return occ

    def is_regular(self) -> bool:
        seen = set()
        for face, c in self.boundary:
            if abs(c) != 1 or face in seen:
                return False
            seen.add(face)
        return True


@dataclass(frozen=True)
class Chain:
    """An integer chain ``sum n_i σ_i`` in a fixed dimension.

    Zero coefficients are dropped on construction.
    """

    dim: int
    coeffs: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {k: int(v) for k, v in self.coeffs.items() if int(v) != 0}
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    def __add__(self, other: "Chain") -> "Chain":
        if other.dim != self.dim:
            raise ValueError("cannot add chains of different dimension")
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return Chain(self.dim, out)

    def __neg__(self) -> "Chain":
        return Chain(self.dim, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def __rmul__(self, n: int) -> "Chain":
        return Chain(self.dim, {k: n * v for k, v in self.coeffs.items()})

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, v in self.coeffs.items():
            sign = "-" if v < 0 else "+"
            mag = "" if abs(v) == 1 else f"{abs(v)}"
            parts.append(f"{sign} {mag}{k}")
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


class CellComplex:
    """Graded collection of cells, validated on construction (∂∂ = 0)."""

    def __init__(self, cells: Iterable[Cell]):
        by_dim: dict[int, list[Cell]] = defaultdict(list)
        index: dict[int, dict[str, int]] = defaultdict(dict)
        for cell in cells:
            if cell.dim < 0:
                raise ValidationError(f"cell {cell.id!r} has negative dimension")
            if cell.id in index[cell.dim]:
                raise ValidationError(f"duplicate {cell.dim}-cell id {cell.id!r}")
            if cell.dim == 0 and cell.boundary:
                raise ValidationError(f"0-cell {cell.id!r} cannot have a boundary")
            for face, c in cell.boundary:
                if not isinstance(c, (int, np.integer)) or isinstance(c, bool) or c == 0:
                    raise ValidationError(
                        f"cell {cell.id!r}: coefficient of face {face!r} must be a nonzero integer"
                    )
                if face not in index[cell.dim - 1]:
                    raise DanglingFace(
                        f"{cell.dim}-cell {cell.id!r} references missing {cell.dim - 1}-cell {face!r}"
                    )
            index[cell.dim][cell.id] = len(by_dim[cell.dim])
            by_dim[cell.dim].append(cell)
        self._cells = {d: tuple(cs) for d, cs in sorted(by_dim.items())}
        self._index = {d: dict(ix) for d, ix in index.items() if ix}
        self.dimension = max(self._cells) if self._cells else -1
        self._check_closed()

    def _check_closed(self):
        for k in range(2, self.dimension + 1):
            for cell in self._cells.get(k, ()):
                bb: dict[str, int] = defaultdict(int)
                for face, c in cell.faces().items():
                    for ff, cc in self.cell(k - 1, face).faces().items():
                        bb[ff] += c * cc
                bad = {f: v for f, v in bb.items() if v}
                if bad:
                    raise BoundaryNotClosed(
                        f"{k}-cell {cell.id!r}: boundary of its boundary is {dict(sorted(bad.items()))}"
                    )

    # -- access ---------------------------------------------------------
    def cells(self, dim: int) -> tuple[Cell, ...]:
        return self._cells.get(dim, ())

    def ids(self, dim: int) -> list[str]:
        return [c.id for c in self.cells(dim)]

    def cell(self, dim: int, id: str) -> Cell:
        try:
            return self._cells[dim][self._index[dim][id]]
        except KeyError:
            raise KeyError(f"no {dim}-cell {id!r}") from None

    def has_cell(self, dim: int, id: str) -> bool:
        return id in self._index.get(dim, {})

    def all_cells(self) -> list[Cell]:
        return [c for d in sorted(self._cells) for c in self._cells[d]]

    def count(self, dim: int) -> int:
        return len(self._cells.get(dim, ()))

    def __len__(self) -> int:
        return sum(len(cs) for cs in self._cells.values())

    def __repr__(self) -> str:
        counts = ", ".join(f"{d}:{len(cs)}" for d, cs in self._cells.items())
        return f"CellComplex(dim={self.dimension}, cells={{{counts}}})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, CellComplex):
            return NotImplemented
        return self._cells == other._cells

    def cofaces(self, dim: int, id: str) -> list[Cell]:
        """Cells of dimension ``dim + 1`` whose attaching word uses ``(dim, id)``."""
        return [c for c in self.cells(dim + 1) if any(f == id for f, _ in c.boundary)]

    def closure(self, cells: Iterable[tuple[int, str]]) -> "CellComplex":
        """Smallest subcomplex containing the given ``(dim, id)`` cells."""
        keep: set[tuple[int, str]] = set()
        stack = list(cells)
        while stack:
            d, i = stack.pop()
            if (d, i) in keep:
                continue
            keep.add((d, i))
            for face, _ in self.cell(d, i).boundary:
                stack.append((d - 1, face))
        return CellComplex(c for c in self.all_cells() if (c.dim, c.id) in keep)

    def relabel(self, mapping: Mapping[tuple[int, str], str]) -> "CellComplex":
        """Rename cells; ``mapping`` sends ``(dim, old id)`` to a new id."""

        def name(d, i):
            return mapping.get((d, i), i)

        return CellComplex(
            Cell(name(c.dim, c.id), c.dim, tuple((name(c.dim - 1, f), k) for f, k in c.boundary))
            for c in self.all_cells()
        )


def build_complex(entries: Iterable) -> CellComplex:
    """Build and validate a complex from ``Cell`` objects or plain dicts.

    Dict entries look like ``{"id": "γ1", "dim": 2, "boundary": [["e3", 1], ...]}``.
    Cells must be listed bottom-up by dimension.
    """
    cells = []
    for pos, item in enumerate(entries):
        if isinstance(item, Cell):
            cells.append(item)
            continue
        try:
            cid = str(item["id"])
            dim = int(item["dim"])
            boundary = tuple((str(f), int(c)) for f, c in item.get("boundary", ()))
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"malformed cell entry ({exc})", location=f"cells[{pos}]") from None
        cells.append(Cell(cid, dim, boundary))
    return CellComplex(cells)


def boundary_matrix(K: CellComplex, k: int) -> np.ndarray:
    """Integer matrix of ∂_k with rows indexed by (k-1)-cells and columns by k-cells."""
    if k < 1 or k > max(K.dimension, 0):
        raise DimensionOutOfRange(f"boundary_matrix needs 1 <= k <= {K.dimension}, got {k}")
    rows = {cid: i for i, cid in enumerate(K.ids(k - 1))}
    M = np.zeros((K.count(k - 1), K.count(k)), dtype=np.int64)
    for j, cell in enumerate(K.cells(k)):
        for face, c in cell.faces().items():
            M[rows[face], j] += c
    return M


def boundary(K: CellComplex, chain: Chain) -> Chain:
    """Apply ∂ to a chain."""
    if chain.dim == 0:
        return Chain(-1, {})
    out: dict[str, int] = defaultdict(int)
    for cid, n in chain.coeffs.items():
        for face, c in K.cell(chain.dim, cid).faces().items():
            out[face] += n * c
    return Chain(chain.dim - 1, out)


def make_chain(K: CellComplex, dim: int, coeffs: Mapping[str, int]) -> Chain:
    for cid in coeffs:
        if not K.has_cell(dim, cid):
            raise ValidationError(f"chain references missing {dim}-cell {cid!r}")
    return Chain(dim, coeffs)


def chain_from_vector(K: CellComplex, dim: int, vec) -> Chain:
    return Chain(dim, {cid: int(v) for cid, v in zip(K.ids(dim), vec)})


def top_cells(K: CellComplex) -> tuple[Cell, ...]:
    """Cells that are not a face of any higher-dimensional cell."""
    used = {(c.dim - 1, f) for c in K.all_cells() for f, _ in c.boundary}
    return tuple(c for c in K.all_cells() if (c.dim, c.id) not in used)


def reorient(K: CellComplex, dim: int, id: str) -> CellComplex:
    """Flip the orientation of one cell (sign of its boundary and of its cofaces' coefficients)."""
    K.cell(dim, id)
    out = []
    for c in K.all_cells():
        b = c.boundary
        if c.dim == dim and c.id == id:
            b = tuple((f, -k) for f, k in b)
        elif c.dim == dim + 1:
            b = tuple((f, -k if f == id else k) for f, k in b)
        out.append(Cell(c.id, c.dim, b))
    return CellComplex(out)


def _fresh(K: CellComplex, dim: int, base: str) -> str:
    name, n = base, 1
    while K.has_cell(dim, name):
        n += 1
        name = f"{base}{n}"
    return name


def _edge_ends(K: CellComplex, edge: str) -> tuple[str, str]:
    cell = K.cell(1, edge)
    net = cell.faces()
    tail = [v for v, c in net.items() if c == -1]
    head = [v for v, c in net.items() if c == 1]
    if len(net) != 2 or len(tail) != 1 or len(head) != 1:
        raise IrregularCell(f"1-cell {edge!r} does not join two distinct 0-cells")
    return tail[0], head[0]


def _boundary_loop(K: CellComplex, cell: Cell) -> list[tuple[str, int, str, str]]:
    """Order a regular 2-cell boundary into a closed walk of (edge, sign, start, end)."""
    if not cell.is_regular():
        raise IrregularCell(f"2-cell {cell.id!r} has a non-regular attaching word")
    steps = []
    for edge, s in cell.boundary:
        a, b = _edge_ends(K, edge)
        steps.append((edge, s, a, b) if s > 0 else (edge, s, b, a))
    loop = [steps.pop(0)]
    while steps:
        nxt = [i for i, st in enumerate(steps) if st[2] == loop[-1][3]]
        if not nxt:
            raise IrregularCell(f"boundary of 2-cell {cell.id!r} is not a single closed loop")
        loop.append(steps.pop(nxt[0]))
    if loop[-1][3] != loop[0][2]:
        raise IrregularCell(f"boundary of 2-cell {cell.id!r} is not closed")
    return loop


def subdivide_cell(K: CellComplex, dim: int, id: str, cut: tuple[int, int] | None = None) -> CellComplex:
    """Split a cell in two along a new interior face.

    * 1-cell ``e``: a new 0-cell ``e.m`` bisects it into ``e.a`` and ``e.b``.
    * 2-cell ``γ``: a new 1-cell ``γ.cut`` joins two corners of its boundary
      loop, giving ``γ.a`` and ``γ.b``. ``cut`` picks the two corner positions
      along the loop as ordered by the attaching word (default: the first
      corner and the one halfway round).

    Cofaces of the split cell see it replaced by the sum of the two halves,
    so homology is unchanged.
    """
    cell = K.cell(dim, id)
    if dim == 0:
        raise IrregularCell("0-cells cannot be subdivided")
    if dim == 1:
        u, v = _edge_ends(K, id)
        mid, a, b = _fresh(K, 0, f"{id}.m"), _fresh(K, 1, f"{id}.a"), _fresh(K, 1, f"{id}.b")
        replace = {id: [(a, 1), (b, 1)]}
        new_cells = {
            1: [Cell(a, 1, ((u, -1), (mid, 1))), Cell(b, 1, ((mid, -1), (v, 1)))],
        }
        extra_faces = {0: [Cell(mid, 0)]}
    elif dim == 2:
        loop = _boundary_loop(K, cell)
        m = len(loop)
        i, j = cut if cut is not None else (0, m // 2)
        if not (0 <= i < m and 0 <= j < m):
            raise IrregularCell(f"cut positions {cut} outside the boundary loop of length {m}")
        if i > j:
            i, j = j, i
        start, end = loop[i][2], loop[j][2]
        d = _fresh(K, 1, f"{id}.cut")
        a, b = _fresh(K, 2, f"{id}.a"), _fresh(K, 2, f"{id}.b")
        first = [(e, s) for e, s, _, _ in loop[i:j]] + [(d, -1)]
        second = [(d, 1)] + [(e, s) for e, s, _, _ in loop[j:] + loop[:i]]
        if start == end:
            dcell = Cell(d, 1)
        else:
            dcell = Cell(d, 1, ((start, -1), (end, 1)))
        replace = {id: [(a, 1), (b, 1)]}
        new_cells = {2: [Cell(a, 2, tuple(first)), Cell(b, 2, tuple(second))]}
        extra_faces = {1: [dcell]}
    else:
        raise NotImplementedError("subdivision is implemented for 1- and 2-cells")

    out = []
    for c in K.all_cells():
        if c.dim == dim and c.id == id:
            out.extend(new_cells[dim])
            continue
        if c.dim == dim + 1 and any(f == id for f, _ in c.boundary):
            b = []
            for f, k in c.boundary:
                if f == id:
                    halves = replace[id] if k > 0 else replace[id][::-1]
                    b.extend((g, k * s) for g, s in halves)
                else:
                    b.append((f, k))
            c = Cell(c.id, c.dim, tuple(b))
        out.append(c)
    # new lower-dimensional faces go after the existing cells of their dimension
    for fd, fcells in extra_faces.items():
        last = max((n for n, c in enumerate(out) if c.dim == fd), default=-1)
        out[last + 1:last + 1] = fcells
    return CellComplex(out)


# -- JSON -----------------------------------------------------------------

def complex_to_dict(K: CellComplex) -> dict:
    return {
        "cells": [
            {"id": c.id, "dim": c.dim, "boundary": [[f, k] for f, k in c.boundary]}
            for c in K.all_cells()
        ]
    }


def complex_from_dict(data) -> CellComplex:
    if not isinstance(data, dict) or not isinstance(data.get("cells"), list):
        raise SchemaError("expected an object with a 'cells' list", location="$")
    return build_complex(data["cells"])


def load_complex(path) -> CellComplex:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON ({exc.msg})", location=f"{path}:{exc.lineno}") from None
    try:
        return complex_from_dict(data)
    except ValidationError as exc:
        raise type(exc)(f"{Path(path).name}: {exc}") if not isinstance(exc, SchemaError) else exc


def save_complex(K: CellComplex, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(complex_to_dict(K), fh, ensure_ascii=False, indent=1)
        fh.write("\n")
