"""Property suites: boundary identities, decomposition identities, invariance
under subdivision and relabeling, P-image compatibility and TMV tiling."""

import numpy as np
from hypothesis import given, strategies as st

from oracles import determinantal_factors, random_matrices
from templexkit.cellcomplex import boundary_matrix, subdivide_cell
from templexkit.fixtures import build_fixture
from templexkit.genex import generatex_classes, p_image, path
from templexkit.homology import homology_ranks, smith_normal_form
from templexkit.templex import Digraph, Templex, poincare_edges
from templexkit.tmv import Itinerary, adjacent_classes, label_trajectory

COMPLEXES = ["sphere", "cylinder", "mobius", "torus", "klein", "disk", "rossler", "lorenz"]
TEMPLEXES = ["rossler", "lorenz", "speech", "gyre"]


def complex_of(name):
    obj = build_fixture(name)
    return getattr(obj, "complex", obj)


def dd_zero(K):
    return all(not (boundary_matrix(K, k - 1) @ boundary_matrix(K, k)).any() for k in range(2, K.dimension + 1))


def test_dd_zero_all_fixtures():
    assert all(dd_zero(complex_of(n)) for n in COMPLEXES)


def test_snf_identities_on_200_matrices():
    mats = list(random_matrices(200, seed=11))
    assert len(mats) == 200
    for M in mats:
        S = smith_normal_form(M)
        assert (S.U.dot(np.array(M, dtype=object)).dot(S.V) == S.D).all()
        assert (S.U.dot(S.U_inv) == np.identity(len(M), dtype=int)).all()
        assert (S.V_inv.dot(S.V) == np.identity(len(M[0]), dtype=int)).all()
        f = S.invariant_factors
        assert all(b % a == 0 for a, b in zip(f, f[1:]))
        assert f == determinantal_factors(M)


# -- subdivision ---------------------------------------------------------------

@given(st.sampled_from(["cylinder", "mobius", "disk", "rossler", "lorenz"]), st.data())
def test_homology_invariant_under_random_subdivision(name, data):
    K = complex_of(name)
    before = homology_ranks(K)
    for _ in range(data.draw(st.integers(1, 4))):
        edges = [c.id for c in K.cells(1) if len(c.faces()) == 2]
        faces = [c.id for c in K.cells(2) if c.is_regular()]
        if faces and data.draw(st.booleans()):
            f = data.draw(st.sampled_from(faces))
            m = len(K.cell(2, f).boundary)
            i, j = data.draw(st.lists(st.integers(0, m - 1), min_size=2, max_size=2, unique=True))
            K = subdivide_cell(K, 2, f, cut=(i, j))
        else:
            K = subdivide_cell(K, 1, data.draw(st.sampled_from(edges)))
        assert dd_zero(K)
    assert homology_ranks(K) == before


@given(st.sampled_from(["rossler", "lorenz"]), st.data())
def test_classes_invariant_under_edge_subdivision(name, data):
    # refining the 1-skeleton, junction edges included, leaves top-cells and loci intact
    T = build_fixture(name)
    K = T.complex
    for _ in range(data.draw(st.integers(1, 5))):
        edges = [c.id for c in K.cells(1) if len(c.faces()) == 2]
        K = subdivide_cell(K, 1, data.draw(st.sampled_from(edges)))
    U = Templex(T.digraph, K, T.binding)
    assert [str(e) for e in poincare_edges(U)] == [str(e) for e in poincare_edges(T)]
    assert len(generatex_classes(U)) == len(generatex_classes(T))
    assert [g.orientation for g in generatex_classes(U)] == [g.orientation for g in generatex_classes(T)]


def split_node(G, n):
    """Subdivide top-cell ``n`` along the flow: n.a receives, n.b emits."""
    a, b = f"{n}.a", f"{n}.b"
    edges = [(b if u == n else u, a if v == n else v) for u, v in G.edges]
    return Digraph([m for m in G.nodes if m != n] + [a, b], edges + [(a, b)])


@given(st.sampled_from(TEMPLEXES), st.data())
def test_classes_invariant_under_node_split(name, data):
    G = build_fixture(name).digraph
    base = generatex_classes(Templex(G))
    for _ in range(data.draw(st.integers(1, 3))):
        n = data.draw(st.sampled_from([m for m in G.nodes if G.has_node(m)]))
        G = split_node(G, n)
    split = generatex_classes(Templex(G))
    assert len(split) == len(base)
    assert sorted(g.order for g in split) == sorted(g.order for g in base)


@given(st.sampled_from(TEMPLEXES), st.randoms(use_true_random=False))
def test_classes_invariant_under_relabeling(name, rnd):
    T = build_fixture(name)
    nodes = list(T.digraph.nodes)
    new = [f"n{i}" for i in range(len(nodes))]
    rnd.shuffle(new)
    mapping = dict(zip(nodes, new))
    R = T.relabel(mapping)
    a, b = generatex_classes(T), generatex_classes(R)
    assert len(a) == len(b)
    key = lambda cls, m: sorted(sorted((m.get(u, u), m.get(v, v)) for u, v in g.signature.pairs) for g in cls)
    assert key(a, mapping) == key(b, {})
    assert sorted(g.orientation for g in a) == sorted(g.orientation for g in b)
    if T.has_complex:
        assert homology_ranks(R.complex) == homology_ranks(T.complex)


# -- P-image of products -----------------------------------------------------------

def walks(name, min_len=2, max_len=30):
    G = build_fixture(name).digraph

    @st.composite
    def walk(draw):
        n = draw(st.sampled_from(G.nodes))
        seq = [n]
        for _ in range(draw(st.integers(min_len, max_len))):
            seq.append(draw(st.sampled_from(G.successors(seq[-1]))))
        return seq
    return walk()


@given(st.sampled_from(TEMPLEXES).flatmap(lambda n: st.tuples(st.just(n), walks(n))), st.data())
def test_p_image_of_concat_is_concat_of_images(case, data):
    name, seq = case
    T = build_fixture(name)
    pe = poincare_edges(T)
    k = data.draw(st.integers(1, len(seq) - 2)) if len(seq) > 2 else 1
    p, q = path(seq[:k + 1]), path(seq[k:])
    assert p_image(p * q, pe) == p_image(p, pe) + p_image(q, pe)
    p.check(T.digraph), q.check(T.digraph)


# -- TMV tiling and adjacency --------------------------------------------------------

@st.composite
def itineraries(draw, name):
    G = build_fixture(name).digraph
    node = draw(st.sampled_from(G.nodes))
    samples, t = [], draw(st.floats(-10, 10))
    for _ in range(draw(st.integers(1, 60))):
        for _ in range(draw(st.integers(1, 4))):
            samples.append((t, node))
            t += draw(st.floats(0.01, 2.0))
        node = draw(st.sampled_from(G.successors(node)))
    return Itinerary.from_samples(samples)


@given(st.sampled_from(TEMPLEXES).flatmap(lambda n: st.tuples(st.just(n), itineraries(n))))
def test_tmv_intervals_tile_and_neighbors_touch(case):
    name, it = case
    T = build_fixture(name)
    cls = generatex_classes(T)
    d = label_trajectory(it, T, cls)
    iv = d.intervals
    assert iv[0].start == it.start and iv[-1].end == it.end
    assert all(a.end == b.start for a, b in zip(iv, iv[1:]))
    assert all(x.start <= x.end for x in iv)
    segs = d.segments
    assert segs[0].start == it.start and segs[-1].end == it.end
    assert all(a.end == b.start for a, b in zip(segs, segs[1:]))
    adj = adjacent_classes(cls)
    for a, b in zip(d.sigma, d.sigma[1:]):
        assert a != b and (a, b) in adj
    for t in it.times:
        assert d.chi(t) in d.labels
