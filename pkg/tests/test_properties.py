from fractions import Fraction

import networkx as nx
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from clannish import catalog
from clannish.field import DEFAULT_FIELD as F
from clannish.field import Field
from clannish.foursub import canonical_type
from clannish.fragmentation import certify_fragmentation, planar_fragment, predecessor_closure
from clannish.homs import are_isomorphic, endomorphism_basis
from clannish.hyperfinite import HyperfinitenessWitness, verify_witness, witness
from clannish.inner import LaurentModule
from clannish.linalg import Matrix
from clannish.modules import ModuleRep, build_band_module, build_string_module
from clannish.quivers import coefficient_quiver
from clannish.words import canonical_band, enumerate_bands, enumerate_strings, inverse_word, rotations

KRON = catalog.kronecker()
C5 = catalog.clannish5()
STRINGS = [(p, s) for p in (KRON, C5) for s in enumerate_strings(p, 7)]
BANDS = [(p, b) for p in (KRON, C5) for b in enumerate_bands(p, 8)]
SLOW = settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def modules(draw):
    if draw(st.booleans()):
        p, s = draw(st.sampled_from(STRINGS))
        return build_string_module(p, s, draw(st.sampled_from([0, 1])) if s.symmetric else None, F)
    p, b = draw(st.sampled_from(BANDS))
    if b.symmetric:
        inner = canonical_type(draw(st.sampled_from(["0", "I", "II"])), draw(st.integers(1, 2)), F)
    else:
        inner = LaurentModule.jordan(draw(st.integers(1, 100)), draw(st.integers(1, 3)), F)
    return build_band_module(p, b, inner, F)


def in_span(vecs, target):
    flat = lambda m: [m[i, j] for i in range(m.nrows) for j in range(m.ncols)]
    rows = [flat(v) for v in vecs]
    base = Matrix(rows, F, len(rows[0])).rank()
    return Matrix(rows + [flat(target)], F, len(rows[0])).rank() == base


@SLOW
@given(modules())
def test_end_contains_identity(m):
    basis = endomorphism_basis(m)
    assert basis and in_span(basis, Matrix.identity(m.dim, F))


@SLOW
@given(modules())
def test_relations_hold(m):
    assert m.relation_failures() == []


@SLOW
@given(modules(), st.data())
def test_change_of_basis_invariance(m, data):
    new = []
    for v in m.presentation.vertices:
        labs = m.labels_at(v)
        for i, l in enumerate(labs):
            vec = {l: F.one}
            if i + 1 < len(labs) and data.draw(st.booleans()):
                vec[labs[i + 1]] = F(data.draw(st.integers(1, 100)))
            new.append((f"w_{l}", vec))
    m2 = m.change_basis(new)
    assert m2.dim == m.dim and m2.dim_vector() == m.dim_vector()
    assert m2.satisfies_relations()
    if m.dim <= 8:
        assert are_isomorphic(m, m2)


@SLOW
@given(modules())
def test_quiver_roundtrip(m):
    q = coefficient_quiver(m)
    assert q.to_module(m.presentation, m.field, m.provenance) == m
    assert ModuleRep.from_json(m.to_json()) == m


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(BANDS), st.integers(0, 10), st.booleans())
def test_canonical_band_invariant(pb, k, inv):
    _, b = pb
    w = b.letters
    r = rotations(w)[k % len(w)]
    if inv:
        r = inverse_word(r)
    if not b.symmetric:
        assert canonical_band(r) == w


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 40), st.integers(0, 300), st.integers(0, 10))
def test_closure_complement_successor_closed(n, seed, k):
    g = nx.gn_graph(n, seed=seed).reverse()  # random DAG
    S = list(range(0, n, max(1, k + 1)))[:3]
    c = predecessor_closure(g, S)
    assert set(S) <= set(c.closure) and c.successor_closed
    assert set(predecessor_closure(g, c.closure).closure) == set(c.closure)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3000), st.integers(1, 40), st.booleans())
def test_fragment_paths_cycles(n, k, cyc):
    g = nx.cycle_graph(n) if cyc and n >= 3 else nx.path_graph(n)
    r = planar_fragment(g, Fraction(1, k))
    assert certify_fragmentation(g, r)


@settings(max_examples=15, deadline=None)
@given(st.integers(4, 30), st.integers(4, 30), st.sampled_from([Fraction(1, 2), Fraction(1, 5), Fraction(1, 10)]))
def test_fragment_grids(a, b, eps):
    g = nx.grid_2d_graph(a, b)
    assert certify_fragmentation(g, planar_fragment(g, eps))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=3, max_size=3),
       st.sampled_from([Field(2), Field(7), Field(None)]))
def test_rank_transpose(rows, field):
    m = Matrix(rows, field)
    assert m.rank() == m.transpose().rank()
    if m.is_invertible():
        assert (m @ m.inverse()).is_identity()


@SLOW
@given(modules(), st.sampled_from([Fraction(1, 2), Fraction(1, 5), Fraction(1, 10)]))
def test_witness_roundtrip(m, eps):
    w = witness(m, eps)
    assert verify_witness(m, w)
    back = HyperfinitenessWitness.from_json(w.to_json())
    assert verify_witness(back.module, back)
