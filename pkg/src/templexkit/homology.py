"""Integer homology and orientability of cell complexes.

Homology is computed exactly over ℤ with a Smith normal form that tracks the
unimodular transforms, so generators come out as explicit chains.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .cellcomplex import Cell, CellComplex, Chain, boundary_matrix, chain_from_vector, top_cells
from .errors import DimensionOutOfRange, DisconnectedSelection, MixedDimensionSelection


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ M @ V == D`` with ``U``, ``V`` unimodular and ``D`` diagonal.

    The nonzero diagonal entries ``d_1 | d_2 | ...`` are positive. ``U_inv`` and
    ``V_inv`` are the exact integer inverses. All arrays have ``object`` dtype
    (Python integers, no overflow).
    """

    D: np.ndarray
    U: np.ndarray
    V: np.ndarray
    U_inv: np.ndarray
    V_inv: np.ndarray

    @property
    def diagonal(self) -> list[int]:
        n = min(self.D.shape)
        return [int(self.D[i, i]) for i in range(n)]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)

    @property
    def invariant_factors(self) -> list[int]:
        return [d for d in self.diagonal if d != 0]


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(M) -> SmithDecomposition:
    """Smith normal form of an integer matrix.

    Pivots on the smallest nonzero entry (in absolute value) of the remaining
    block to keep coefficients small.
    """
    M = np.asarray(M)
    if M.ndim != 2:
        raise ValueError("smith_normal_form expects a 2-d matrix")
    m, n = M.shape
    A = [[int(x) for x in row] for row in M.tolist()] if m and n else [[0] * n for _ in range(m)]
    U, Ui = _identity(m), _identity(m)
    V, Vi = _identity(n), _identity(n)

    # elementary operations, each applied to A and mirrored on the transforms
    def row_add(dst, src, c):  # row_dst += c * row_src
        A[dst] = [a + c * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]
        for r in Ui:
            r[src] -= c * r[dst]

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]
        for r in Ui:
            r[i], r[j] = r[j], r[i]

    def row_neg(i):
        A[i] = [-a for a in A[i]]
        U[i] = [-a for a in U[i]]
        for r in Ui:
            r[i] = -r[i]

    def col_add(dst, src, c):  # col_dst += c * col_src
        for r in A:
            r[dst] += c * r[src]
        for r in V:
            r[dst] += c * r[src]
        Vi[src] = [a - c * b for a, b in zip(Vi[src], Vi[dst])]

    def col_swap(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    for t in range(min(m, n)):
        pivot = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (pivot is None or abs(A[i][j]) < abs(A[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        while True:
            i, j = pivot
            if i != t:
                row_swap(t, i)
            if j != t:
                col_swap(t, j)
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    row_add(i, t, -(A[i][t] // p))
            for j in range(t + 1, n):
                if A[t][j]:
                    col_add(j, t, -(A[t][j] // p))
            rest = [(i, t) for i in range(t + 1, m) if A[i][t]]
            rest += [(t, j) for j in range(t + 1, n) if A[t][j]]
            if rest:
                pivot = min(rest, key=lambda ij: abs(A[ij[0]][ij[1]]))
                continue
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            row_add(t, bad[0], 1)
            pivot = (t, t)
        if A[t][t] < 0:
            row_neg(t)

    def arr(rows, shape):
        out = np.empty(shape, dtype=object)
        for i, r in enumerate(rows):
            for j, v in enumerate(r):
                out[i, j] = v
        return out

    return SmithDecomposition(
        D=arr(A, (m, n)), U=arr(U, (m, m)), V=arr(V, (n, n)), U_inv=arr(Ui, (m, m)), V_inv=arr(Vi, (n, n))
    )


def _as_object(M) -> np.ndarray:
    M = np.asarray(M)
    out = np.empty(M.shape, dtype=object)
    for idx in np.ndindex(M.shape):
        out[idx] = int(M[idx])
    return out


def invariant_factors(M) -> list[int]:
    """Nonzero Smith invariant factors, without the transforms.

    Unit entries are eliminated first on a sparse copy; whatever survives
    goes through :func:`smith_normal_form`. Much faster than the full
    decomposition on large, sparse boundary matrices.
    """
    M = np.asarray(M)
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for i, j in zip(*np.nonzero(M)):
        rows.setdefault(int(i), {})[int(j)] = int(M[i, j])
        cols.setdefault(int(j), set()).add(int(i))
    ones = 0
    while True:
        best = None
        for j, rs in cols.items():
            for i in rs:
                if abs(rows[i][j]) == 1:
                    cost = (len(rs) - 1) * (len(rows[i]) - 1)
                    if best is None or cost < best[0]:
                        best = (cost, i, j)
                    break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        _, pi, pj = best
        prow = rows.pop(pi)
        p = prow[pj]
        for i in list(cols[pj]):
            if i == pi:
                continue
            r = rows[i]
            c = r[pj] * p  # p = ±1, so r[pj] / p == r[pj] * p
            for j, v in prow.items():
                nv = r.get(j, 0) - c * v
                if nv:
                    if j not in r:
                        cols[j].add(i)
                    r[j] = nv
                else:
                    r.pop(j, None)
                    cols[j].discard(i)
            if not r:
                del rows[i]
        for j in prow:
            cols[j].discard(pi)
            if not cols[j]:
                del cols[j]
        ones += 1
    if not rows:
        return [1] * ones
    ri = sorted(rows)
    ci = sorted(cols)
    rest = np.zeros((len(ri), len(ci)), dtype=object)
    cpos = {j: k for k, j in enumerate(ci)}
    for a, i in enumerate(ri):
        for j, v in rows[i].items():
            rest[a, cpos[j]] = v
    return [1] * ones + smith_normal_form(rest).invariant_factors


@dataclass
class HomologyGroup:
    """H_k ≅ ℤ^betti ⊕ ⨁ ℤ/t for t in ``torsion``."""

    k: int
    betti: int
    torsion: list[int]
    generators: list[Chain] = field(default_factory=list)
    torsion_generators: list[Chain] = field(default_factory=list)

    def __str__(self) -> str:
        parts = []
        if self.betti:
            parts.append("ℤ" if self.betti == 1 else f"ℤ^{self.betti}")
        parts += [f"ℤ/{t}" for t in self.torsion]
        return " ⊕ ".join(parts) if parts else "0"


def _boundary_obj(K: CellComplex, k: int) -> np.ndarray:
    if k < 1 or k > K.dimension:
        return np.empty((K.count(k - 1) if k >= 1 else 0, K.count(k)), dtype=object)
    return _as_object(boundary_matrix(K, k))


def homology_group(K: CellComplex, k: int) -> HomologyGroup:
    """H_k(K; ℤ) with a ℤ-basis of free generators and torsion generators."""
    if k < 0 or k > max(K.dimension, 0):
        raise DimensionOutOfRange(f"homology_group needs 0 <= k <= {K.dimension}, got {k}")
    nk = K.count(k)
    if nk == 0:
        return HomologyGroup(k, 0, [])
    out_map = _boundary_obj(K, k)          # ∂_k : C_k -> C_{k-1}
    in_map = _boundary_obj(K, k + 1)       # ∂_{k+1} : C_{k+1} -> C_k

    # Z_k: trailing columns of V span the kernel of ∂_k
    if out_map.shape[0] and out_map.shape[1]:
        snf = smith_normal_form(out_map)
        r = snf.rank
        V, Vi = snf.V, snf.V_inv
    else:
        r = 0
        V = _as_object(np.identity(nk, dtype=int))
        Vi = V.copy()
    Zb = V[:, r:]
    z = nk - r
    if z == 0:
        return HomologyGroup(k, 0, [])

    # B_k in Z_k coordinates
    if in_map.shape[1]:
        coords = Vi.dot(in_map)
        if any(coords[i, j] != 0 for i in range(r) for j in range(coords.shape[1])):
            raise AssertionError("image of the next boundary is not inside the cycles")
        Bz = coords[r:, :]
        snf2 = smith_normal_form(Bz)
        diag = snf2.diagonal
        basis = Zb.dot(snf2.U_inv)
    else:
        diag = []
        basis = Zb
    rb = sum(1 for d in diag if d)
    free = [chain_from_vector(K, k, basis[:, i]) for i in range(rb, z)]
    tors_idx = [i for i, d in enumerate(diag) if d > 1]
    return HomologyGroup(
        k=k,
        betti=z - rb,
        torsion=[int(diag[i]) for i in tors_idx],
        generators=free,
        torsion_generators=[chain_from_vector(K, k, basis[:, i]) for i in tors_idx],
    )


def homology(K: CellComplex) -> list[HomologyGroup]:
    return [homology_group(K, k) for k in range(max(K.dimension, 0) + 1)]


def homology_ranks(K: CellComplex) -> tuple[tuple[int, ...], tuple[tuple[int, ...], ...]]:
    """Betti numbers and torsion coefficients, without generators.

    ``b_k = n_k - rank ∂_k - rank ∂_{k+1}``; the torsion of ``H_k`` is the
    invariant factors of ``∂_{k+1}`` that exceed one.
    """
    top = max(K.dimension, 0)
    factors = {k: invariant_factors(boundary_matrix(K, k)) if 1 <= k <= K.dimension else []
               for k in range(top + 2)}
    betti, torsion = [], []
    for k in range(top + 1):
        betti.append(K.count(k) - len(factors[k]) - len(factors[k + 1]))
        torsion.append(tuple(int(d) for d in factors[k + 1] if d > 1))
    return tuple(betti), tuple(torsion)


def betti_numbers(K: CellComplex) -> tuple[int, ...]:
    return homology_ranks(K)[0]


@dataclass
class OrientabilityReport:
    """Outcome of propagating a local orientation over a set of top-cells.

    ``chain`` is the orientability chain: the signed sum of the boundaries of
    the selected cells under the propagated orientation. ``interior`` lists the
    faces glued at least twice inside the selection; faces glued three or more
    times are junction faces and take no part in the test.
    """

    orientable: bool
    orientation: dict[str, int] | None = None
    witness: str | None = None
    chain: dict[str, int] = field(default_factory=dict)
    interior: list[str] = field(default_factory=list)


def _face_graph(cells: list[Cell]):
    """Map face id -> list of (cell index, coefficient) unit occurrences."""
    occ: dict[str, list[tuple[int, int]]] = defaultdict(list)
    for n, cell in enumerate(cells):
        for face, c in cell.boundary:
            s = 1 if c > 0 else -1
            occ[face].extend([(n, s)] * abs(c))
    return occ


def orientability_report(K: CellComplex, top: Iterable[str] | None = None,
                         root: str | None = None) -> OrientabilityReport:
    """Check whether a face-connected set of top-cells can be coherently oriented.

    ``top`` selects top-cell ids (default: every cell of the complex's top
    dimension). Orientation signs are propagated breadth-first across faces
    shared by exactly two occurrences; the selection is orientable iff no
    conflict arises, i.e. every such face cancels in the orientability chain.
    Otherwise ``witness`` is the first such face with coefficient ±2.
    """
    if top is None:
        dim = K.dimension
        cells = list(K.cells(dim))
        explicit = False
    else:
        ids = list(dict.fromkeys(top))
        tops = {c.id: c for c in top_cells(K)}
        missing = [i for i in ids if i not in tops]
        if missing:
            raise MixedDimensionSelection(f"not top-cells of the complex: {missing}")
        dims = {tops[i].dim for i in ids}
        if len(dims) > 1:
            raise MixedDimensionSelection(f"selection mixes dimensions {sorted(dims)}")
        cells = [tops[i] for i in ids]
        explicit = True
    if not cells:
        return OrientabilityReport(True, orientation={})
    if cells[0].dim == 0:
        return OrientabilityReport(True, orientation={c.id: 1 for c in cells})

    occ = _face_graph(cells)
    adj: dict[int, list[tuple[int, str]]] = defaultdict(list)
    linked: dict[int, set[int]] = defaultdict(set)
    for face, uses in occ.items():
        owners = {n for n, _ in uses}
        for a in owners:
            linked[a] |= owners - {a}
        if len(uses) == 2:
            (a, _), (b, _) = uses
            if a != b:
                adj[a].append((b, face))
                adj[b].append((a, face))

    # connectivity over any shared face
    seen, todo = {0}, [0]
    while todo:
        for nb in linked[todo.pop()]:
            if nb not in seen:
                seen.add(nb)
                todo.append(nb)
    if len(seen) != len(cells) and explicit:
        raise DisconnectedSelection("selected top-cells are not face-connected")

    order = list(range(len(cells)))
    if root is not None:
        r = next(n for n, c in enumerate(cells) if c.id == root)
        order.remove(r)
        order.insert(0, r)
    sign: dict[int, int] = {}
    for start in order:
        if start in sign:
            continue
        sign[start] = 1
        queue = deque([start])
        while queue:
            a = queue.popleft()
            for b, face in adj[a]:
                if b in sign:
                    continue
                sa = next(s for n, s in occ[face] if n == a)
                sb = next(s for n, s in occ[face] if n == b)
                sign[b] = -sign[a] * sa * sb
                queue.append(b)

    chain: dict[str, int] = defaultdict(int)
    for n, cell in enumerate(cells):
        for face, c in cell.boundary:
            chain[face] += sign[n] * c
    interior = [f for f, uses in occ.items() if len(uses) >= 2]
    witness = next((f for f, uses in occ.items() if len(uses) == 2 and abs(chain[f]) >= 2), None)
    clean = {f: v for f, v in chain.items() if v}
    if witness is None:
        return OrientabilityReport(
            True, orientation={cells[n].id: s for n, s in sorted(sign.items())}, chain=clean, interior=interior
        )
    return OrientabilityReport(False, witness=witness, chain=clean, interior=interior)


@dataclass
class BettiTable:
    betti: tuple[int, ...]
    torsion: tuple[tuple[int, ...], ...]
    orientable: bool

    def row(self, width: int = 3) -> tuple:
        b = tuple(self.betti) + (0,) * max(0, width - len(self.betti))
        return b[:width] + ("Orientable" if self.orientable else "Non-orientable",)


def betti_table(K: CellComplex) -> BettiTable:
    betti, torsion = homology_ranks(K)
    return BettiTable(betti=betti, torsion=torsion, orientable=orientability_report(K).orientable)


def is_boundary(K: CellComplex, chain: Chain) -> bool:
    """True when ``chain`` lies in the image of ∂_{k+1} (exact integer test)."""
    k = chain.dim
    vec = np.array([chain.coeffs.get(c, 0) for c in K.ids(k)], dtype=object)
    if k + 1 > K.dimension or K.count(k + 1) == 0:
        return not any(vec)
    snf = smith_normal_form(_as_object(boundary_matrix(K, k + 1)))
    y = snf.U.dot(vec)
    diag = snf.diagonal
    for i, yi in enumerate(y):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if yi != 0:
                return False
        elif yi % d:
            return False
    return True


def same_class(K: CellComplex, a: Chain, b: Chain) -> bool:
    return is_boundary(K, a - b)
