import json

import pytest

from clannish.field import QQ, Field
from clannish.foursub import canonical_type
from clannish.inner import InnerModuleError, LaurentModule, ScalarChoice, TwoIdempotentModule
from clannish.linalg import Matrix
from clannish.modules import (ModuleError, ModuleRep, build_band_module, build_string_module, rebuild,
                              rotate_band)
from clannish.quivers import coefficient_quiver
from clannish.words import (BandWord, classify_band, classify_string, enumerate_bands,
                            enumerate_strings, parse_word)


def arrows_of(m):
    return [(a.source, a.target, a.arrow, a.coeff) for a in coefficient_quiver(m).arrows]


def zigzag(kron, F):
    return build_string_module(kron, classify_string(kron, parse_word(kron, "a b- a b-")), None, F)


def test_zigzag_spaces(kron, F):
    m = zigzag(kron, F)
    assert m.dim_vector() == {"1": 2, "2": 3}
    assert m.labels_at("1") == ["v1", "v3"]
    assert m.labels_at("2") == ["v0", "v2", "v4"]
    assert m.satisfies_relations()


def test_trivial_string_is_simple(kron, F):
    m = build_string_module(kron, classify_string(kron, (), "1"), None, F)
    assert m.dim == 1 and all(not cols for cols in m.action.values())


def test_symmetric_string_figure(c5, F):
    s = classify_string(c5, parse_word(c5, "eps* a- b eta* b- a eps*"))
    m = build_string_module(c5, s, 1, F)
    assert arrows_of(m) == [("v0", "v1", "eps", "1"), ("v1", "v1", "eps", "1"), ("v1", "v2", "a", "1"),
                            ("v3", "v2", "b", "1"), ("v3", "v3", "eta", "1")]
    m0 = build_string_module(c5, s, 0, F)
    assert ("v3", "v3", "eta", "1") not in arrows_of(m0)
    with pytest.raises(ModuleError):
        build_string_module(c5, s, None, F)


def test_kronecker_band_j3(kron, F):
    b = BandWord(parse_word(kron, "a b-"))
    m = build_band_module(kron, b, LaurentModule.jordan(F(7), 3, F), F)
    assert m.dim == 6 and m.satisfies_relations()
    got = arrows_of(m)
    assert ("v1_1", "v2_0", "a", "1") in got and ("v2_1", "v3_0", "a", "1") in got
    assert [x for x in got if x[2] == "b"] == [(f"v{i}_1", f"v{i}_0", "b", "1") for i in (1, 2, 3)]
    assert sum(1 for x in got if x[2] == "a") == 5


def test_band_j1(kron, F):
    m = build_band_module(kron, BandWord(parse_word(kron, "a b-")), LaurentModule.jordan(1, 1, F), F)
    assert m.dim_vector() == {"1": 1, "2": 1}
    assert m.matrix("a") == Matrix([[1]], F) == m.matrix("b")


def test_one_loop_symmetric_band_shape(loop1, F):
    phi = Matrix([[0, 0, 0], [1, 1, 0], [1, 0, 1]], F)
    psi = Matrix([[1, 0, 0], [0, 1, 0], [0, 0, 0]], F)
    b = classify_band(loop1, parse_word(loop1, "eps* a- eps* a"))
    m = build_band_module(loop1, b, TwoIdempotentModule(phi, psi), F)
    assert m.dim == 6 and m.satisfies_relations()
    assert m.dim_vector() == {"1": 6}


def test_inner_validation(F):
    with pytest.raises(InnerModuleError):
        LaurentModule(Matrix([[0]], F))
    with pytest.raises(InnerModuleError):
        TwoIdempotentModule(Matrix([[2]], F), Matrix([[1]], F))
    with pytest.raises(InnerModuleError):
        LaurentModule.jordan(0, 2, F)
    with pytest.raises(InnerModuleError):
        ScalarChoice(2)


def test_wrong_inner_kind(kron, loop1, F):
    with pytest.raises(ModuleError):
        build_band_module(kron, BandWord(parse_word(kron, "a b-")), canonical_type("I", 1, F), F)
    b = classify_band(loop1, parse_word(loop1, "eps* a- eps* a"))
    with pytest.raises(ModuleError):
        build_band_module(loop1, b, LaurentModule.jordan(1, 2, F), F)


@pytest.mark.parametrize("name,max_len", [("kronecker", 8), ("clannish5", 8), ("oneloop", 6)])
def test_all_constructors_satisfy_relations(name, max_len, F):
    from clannish import catalog

    p = catalog.load(name)
    for s in enumerate_strings(p, max_len):
        for T in ((0, 1) if s.symmetric else (None,)):
            assert build_string_module(p, s, T, F).relation_failures() == []
    for b in enumerate_bands(p, max_len):
        inners = ([canonical_type(k, 1, F) for k in ("0", "I", "II")] if b.symmetric
                  else [LaurentModule.jordan(3, 2, F), LaurentModule.companion([F(2), F(0), F(1)], 1, F)])
        for inner in inners:
            assert build_band_module(p, b, inner, F).relation_failures() == []


def test_serialization_roundtrip(c5, F):
    b = next(b for b in enumerate_bands(c5, 8) if b.symmetric)
    m = build_band_module(c5, b, canonical_type("0", 2, F), F)
    again = ModuleRep.from_json(m.to_json())
    assert again == m and again.provenance == m.provenance
    assert rebuild(json.loads(json.dumps(m.provenance)), c5, F) == m


def test_rational_field(kron):
    m = build_band_module(kron, BandWord(parse_word(kron, "a b-")), LaurentModule.jordan(QQ.parse("1/2"), 2, QQ), QQ)
    assert m.satisfies_relations()
    assert ModuleRep.from_json(m.to_json()) == m


def test_change_basis(kron, F):
    m = zigzag(kron, F)
    same = m.change_basis([(l, {l: 1}) for l in m.labels])
    assert same.action == m.action
    mixed = m.change_basis([("w0", {"v0": 1, "v2": 1})] + [(l, {l: 1}) for l in m.labels if l != "v0"])
    assert mixed.dim == 5 and mixed.satisfies_relations()
    assert mixed.provenance["base_change"]["vectors"]["w0"] == {"v0": "1", "v2": "1"}
    with pytest.raises(ModuleError):
        m.change_basis([("x", {"v0": 1, "v1": 1})] + [(l, {l: 1}) for l in m.labels[1:]])
    with pytest.raises(ModuleError):
        m.change_basis([("x", {"v0": 1}), ("y", {"v0": 2})] + [(l, {l: 1}) for l in m.labels[2:]])


def test_direct_sum(kron, F):
    m = zigzag(kron, F)
    s = m.direct_sum(m)
    assert s.dim == 10 and s.satisfies_relations()


def test_rotate_band(kron, F):
    b = BandWord(parse_word(kron, "a b-"))
    assert str(rotate_band(b, 1)) == "b- a"


def test_gf2_constructor(kron):
    F2 = Field(2)
    m = build_band_module(kron, BandWord(parse_word(kron, "a b-")), LaurentModule.jordan(1, 2, F2), F2)
    assert m.satisfies_relations()
