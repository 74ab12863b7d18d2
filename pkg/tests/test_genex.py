import itertools

import pytest
from hypothesis import given, strategies as st

from templexkit.errors import CycleCapExceeded, NotComposable, TrivialClass, ValidationError
from templexkit.fixtures import build_fixture, cycles_digraph, lorenz_templex, rossler_templex
from templexkit.genex import (DirectedCycle, PSignature, bonds, concat, cycle, edge_paths,
                              elementary_cycles, generatex_classes, multigraph_view, p_image, path,
                              pushout_report, stripex_decomposition)
from templexkit.templex import Digraph, PoincareEdge, Templex, poincare_edges


def brute_cycles(G):
    """Every elementary cycle, by trying all ordered node subsets."""
    out = set()
    nodes = G.nodes
    for k in range(1, len(nodes) + 1):
        for combo in itertools.permutations(nodes, k):
            if all(G.has_edge(a, b) for a, b in zip(combo, combo[1:] + combo[:1])):
                out.add(DirectedCycle(combo))
    return out


digraphs = st.integers(1, 6).flatmap(lambda n: st.lists(
    st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=n * 3).map(
        lambda es: Digraph(range(n), es)))


@given(digraphs)
def test_cycles_match_brute_force(G):
    found = elementary_cycles(G)
    assert len(found) == len(set(found))
    assert set(found) == brute_cycles(G)
    assert all(c.is_elementary() for c in found)


def test_cycle_cap(monkeypatch):
    G = build_fixture("gyre").digraph
    with pytest.raises(CycleCapExceeded):
        elementary_cycles(G, cap=5)
    monkeypatch.setenv("TEMPLEXKIT_CYCLE_CAP", "3")
    with pytest.raises(CycleCapExceeded):
        elementary_cycles(G)
    assert len(elementary_cycles(G, cap=6)) == 6
    with pytest.raises(ValueError):
        elementary_cycles(G, cap=0)


def test_paths_and_concat():
    p, q = path(1, 2, 3), path(3, 1)
    assert str(p * q) == "1→2→3→1" and (p * q).is_closed
    with pytest.raises(NotComposable):
        concat(q, q)
    with pytest.raises(ValidationError):
        path(1)
    with pytest.raises(ValidationError):
        path(1, 4).check(rossler_templex().digraph)


def test_cycle_canonical_rotation():
    assert cycle(3, 1, 2) == cycle(1, 2, 3) == cycle(2, 3, 1, 2)
    assert str(cycle(10, 9, 2)) == "2→10→9→2"
    assert str(cycle(1, 2, 3).rotated_to(3)) == "3→1→2→3"


def test_signature_rotation_and_sum():
    a, b = PoincareEdge("8", "1"), PoincareEdge("4", "5")
    assert PSignature((a, b), cyclic=True) == PSignature((b, a), cyclic=True)
    assert PSignature((a, b)) != PSignature((b, a))
    assert (PSignature((a,)) + PSignature((b,))).pairs == (("8", "1"), ("4", "5"))
    assert str(PSignature((b, a), cyclic=True)) == "{⟨4|5⟩, ⟨8|1⟩}"


def test_p_image_on_lorenz():
    pe = poincare_edges(lorenz_templex())
    assert p_image(path(1, 2, 4, 5, 6), pe).pairs == (("4", "5"),)
    assert p_image(cycle(6, 8, 1, 2, 4, 5), pe).pairs == (("4", "5"), ("8", "1"))
    assert not p_image(path(1, 2, 3), pe)


def test_rossler_classes():
    g1, g2 = generatex_classes(rossler_templex())
    assert str(g1.representative) == "1→2→3→1" and str(g2.representative) == "1→2→4→1"
    assert (g1.orientation, g2.orientation) == ("preserving", "reversing")
    assert g1.order == g2.order == 1 and g1.label == "G1"


def test_lorenz_order_two_class():
    g3 = generatex_classes(lorenz_templex())[2]
    assert g3.order == 2
    assert [str(s) for s in g3.stripexes] == ["1→2→4→5", "5→6→8→1"]
    joined = g3.stripexes[0] * g3.stripexes[1]
    assert DirectedCycle(joined.nodes) == g3.representative


def test_speech_classes_up_to_rotation():
    cls = generatex_classes(build_fixture("speech"))
    assert {c.representative for c in cls} == {
        cycle(7, 17, 9, 18, 20, 21, 15, 16),
        cycle(7, 17, 9, 10, 11, 13, 14, 15, 16),
        cycle(1, 2, 3, 4, 5, 6, 7, 17, 9, 22, 23, 25, 19, 12),
    }
    assert all(c.orientation == "unknown" for c in cls)


def test_trivial_class_last_and_not_cut():
    # a quasiperiodic-like ring plus a separate merge
    G = Digraph([], [(1, 2), (2, 1), (3, 4), (4, 5), (5, 3), (6, 4), (4, 6)])
    cls = generatex_classes(Templex(G))
    assert cls[-1].is_trivial and not any(c.is_trivial for c in cls[:-1])
    with pytest.raises(TrivialClass):
        stripex_decomposition(cls[-1])


def test_members_share_signature():
    G = cycles_digraph([[1, 2, 3], [1, 4, 3], [5, 3], [3, 5, 1]])
    T = Templex(G)
    pe = poincare_edges(T)
    for g in generatex_classes(T):
        assert all(p_image(m, pe) == g.signature for m in g.members)


def test_bonds_reference():
    r = bonds(generatex_classes(rossler_templex()))
    assert [(b.label, [str(p) for p in b.shared_paths()], b.valence) for b in r] == [("B12", ["1→2"], 2)]
    lz = bonds(generatex_classes(lorenz_templex()))
    assert [(b.label, [str(p) for p in b.shared_paths()]) for b in lz] == [("B13", ["1→2"]), ("B23", ["5→6"])]


def test_bonds_speech_shared_and_exclusive():
    cls = generatex_classes(build_fixture("speech"))
    bs = bonds(cls)
    top = bs[0]
    assert top.valence == 3 and [str(p) for p in top.shared_paths()] == ["7→17→9"]
    pair = bs[1]
    assert pair.valence == 2
    assert [str(p) for p in pair.exclusive_paths()] == ["15→16→7"]
    assert [str(p) for p in pair.shared_paths()] == ["15→16→7→17→9"]


def test_bonds_gyre():
    bs = bonds(generatex_classes(build_fixture("gyre")))
    assert [(b.valence, [str(p) for p in b.shared_paths()]) for b in bs] == [
        (6, ["1→2→3"]), (5, ["1→2→3→5→6"])]
    assert bs[0].label == "B123456"


def test_all_subsets_superset():
    cls = generatex_classes(build_fixture("gyre"))
    every = bonds(cls, all_subsets=True)
    assert len(every) == 2 ** 6 - 6 - 1
    assert {b.indices for b in bonds(cls)} <= {b.indices for b in every}


def test_edge_paths():
    assert [str(p) for p in edge_paths([(1, 2), (2, 3), (3, 4)])] == ["1→2→3→4"]
    assert [str(p) for p in edge_paths([(1, 2), (2, 1)])] == ["1→2→1"]
    assert sorted(str(p) for p in edge_paths([(1, 2), (2, 3), (2, 4)])) == ["1→2", "2→3", "2→4"]


def test_multigraph_parallel_counts_match_valence():
    cls = generatex_classes(build_fixture("gyre"))
    mg = multigraph_view(cls)
    assert mg.parallel("1", "2") == 6 and mg.parallel("5", "6") == 5 and mg.parallel("3", "4") == 1
    assert mg.classes_on("3", "4") == [1]
    assert mg.to_networkx().number_of_edges() == len(mg.edges)
    dot = mg.to_dot()
    assert dot.count('"1" -> "2"') == 6 and 'label="G6"' in dot


def test_pushout_report():
    cls = generatex_classes(build_fixture("speech"))
    rep = pushout_report(bonds(cls)[0], cls)
    assert rep["valence"] == 3 and rep["full"] and len(rep["pairs"]) == 3
