import json

import numpy as np
import pytest

from templexkit.cellcomplex import (Cell, Chain, CellComplex, boundary, boundary_matrix, build_complex,
                                    complex_from_dict, complex_to_dict, load_complex, make_chain,
                                    reorient, save_complex, subdivide_cell, top_cells)
from templexkit.errors import (BoundaryNotClosed, DanglingFace, DimensionOutOfRange, IrregularCell,
                               SchemaError, ValidationError)
from templexkit.fixtures import SURFACES, TEMPLEXES, build_fixture, disk, load_fixture, torus


def all_complexes():
    out = [build_fixture(n) for n in SURFACES + ("disk",)]
    out += [build_fixture(n).complex for n in ("rossler", "lorenz")]
    return out


def test_dd_zero_on_every_fixture():
    for K in all_complexes():
        for k in range(2, K.dimension + 1):
            assert not (boundary_matrix(K, k - 1) @ boundary_matrix(K, k)).any()


def test_repeated_faces_sum_in_matrix():
    K = torus()
    assert boundary_matrix(K, 2).tolist() == [[0], [0]]
    assert boundary_matrix(K, 1).tolist() == [[0, 0]]


def test_dangling_face_rejected():
    with pytest.raises(DanglingFace):
        CellComplex([Cell("v", 0), Cell("e", 1, (("w", 1),))])


def test_open_boundary_rejected():
    cells = [Cell("a", 0), Cell("b", 0), Cell("e", 1, (("a", -1), ("b", 1))), Cell("D", 2, (("e", 1),))]
    with pytest.raises(BoundaryNotClosed):
        CellComplex(cells)


def test_duplicate_and_bad_coefficients():
    with pytest.raises(ValidationError):
        CellComplex([Cell("v", 0), Cell("v", 0)])
    with pytest.raises(ValidationError):
        CellComplex([Cell("v", 0), Cell("e", 1, (("v", 0),))])


def test_boundary_matrix_range():
    K = disk()
    with pytest.raises(DimensionOutOfRange):
        boundary_matrix(K, 0)
    with pytest.raises(DimensionOutOfRange):
        boundary_matrix(K, 3)


def test_chain_boundary():
    K = disk()
    c = make_chain(K, 2, {"D": 1})
    b = boundary(K, c)
    assert b.dim == 1 and set(b.coeffs) == {"⟨0,1⟩", "⟨1,2⟩", "⟨2,0⟩"}
    assert not boundary(K, b)


def test_chain_arithmetic():
    a = Chain(1, {"x": 2, "y": -1})
    b = Chain(1, {"y": 1})
    assert (a + b).coeffs == {"x": 2}
    assert str(a - b) == "2x - 2y"
    assert not (a - a)
    with pytest.raises(ValueError):
        a + Chain(0, {"v": 1})


def test_top_cells_and_cofaces():
    K = build_fixture("rossler").complex
    assert {c.id for c in top_cells(K)} == {"γ1", "γ2", "γ3", "γ4"}
    assert {c.id for c in K.cofaces(1, "⟨0,1⟩")} == {"γ1", "γ3", "γ4"}


def test_closure_is_subcomplex():
    K = build_fixture("lorenz").complex
    sub = K.closure([(2, "γ1")])
    assert sub.count(2) == 1 and sub.count(1) == 4 and sub.count(0) == 4


def test_reorient_negates_column():
    K = disk()
    M = boundary_matrix(reorient(K, 2, "D"), 2)
    assert (M == -boundary_matrix(K, 2)).all()


def test_relabel_keeps_matrices():
    K = torus()
    R = K.relabel({(1, "a"): "alpha", (2, "D"): "disc"})
    assert R.ids(1) == ["alpha", "b"]
    assert (boundary_matrix(R, 2) == boundary_matrix(K, 2)).all()


def test_subdivide_edge_and_face():
    K = disk()
    K1 = subdivide_cell(K, 1, "⟨0,1⟩")
    assert (K1.count(0), K1.count(1), K1.count(2)) == (4, 4, 1)
    K2 = subdivide_cell(K1, 2, "D")
    assert (K2.count(0), K2.count(1), K2.count(2)) == (4, 5, 2)
    with pytest.raises(IrregularCell):
        subdivide_cell(torus(), 2, "D")


def test_json_round_trip(tmp_path):
    for K in all_complexes():
        assert complex_from_dict(json.loads(json.dumps(complex_to_dict(K)))) == K
    p = tmp_path / "k.json"
    save_complex(torus(), p)
    assert load_complex(p) == torus()


def test_schema_errors(tmp_path):
    with pytest.raises(SchemaError) as e:
        build_complex([{"id": "v"}])
    assert "cells[0]" in str(e.value)
    p = tmp_path / "bad.json"
    p.write_text("{\n  \"cells\": [\n")
    with pytest.raises(SchemaError):
        load_complex(p)


def test_shipped_fixtures_match_builders():
    for name in SURFACES + ("disk",):
        assert load_fixture(name) == build_fixture(name)
    for name in TEMPLEXES:
        T, U = load_fixture(name), build_fixture(name)
        assert T.digraph == U.digraph
        assert (T.complex == U.complex) if U.has_complex else not T.has_complex


def test_boundary_matrix_dtype():
    assert boundary_matrix(disk(), 1).dtype == np.int64
