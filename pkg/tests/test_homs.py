import pytest

from clannish.field import QQ, Field
from clannish.homs import (are_isomorphic, endomorphism_basis, find_isomorphism, hom_basis,
                           is_indecomposable)
from clannish.inner import LaurentModule, TwoIdempotentModule
from clannish.linalg import Matrix
from clannish.modules import build_band_module, build_string_module
from clannish.words import BandWord, classify_string, parse_word


def string(p, text, F):
    return build_string_module(p, classify_string(p, parse_word(p, text)), None, F)


def band(p, text, inner, F):
    return build_band_module(p, BandWord(parse_word(p, text)), inner, F)


def test_simple_module(kron, F):
    s = build_string_module(kron, classify_string(kron, (), "1"), None, F)
    assert len(endomorphism_basis(s)) == 1 and is_indecomposable(s)


def test_zigzag_indecomposable(kron, F):
    m = string(kron, "a b- a b-", F)
    assert len(endomorphism_basis(m)) == 1
    assert is_indecomposable(m)


def test_sum_is_decomposable(kron, F):
    m = string(kron, "a b- a b-", F)
    s = m.direct_sum(m)
    assert len(endomorphism_basis(s)) >= 4
    assert not is_indecomposable(s)


def test_band_local_but_not_one_dimensional(kron, F):
    m = band(kron, "a b-", LaurentModule.jordan(3, 3, F), F)
    assert len(endomorphism_basis(m)) == 3
    assert is_indecomposable(m)
    assert not is_indecomposable(m.direct_sum(band(kron, "a b-", LaurentModule.jordan(5, 1, F), F)))


def test_irreducible_companion_band(kron, F):
    # T^2 - 2 is irreducible mod 101
    inner = LaurentModule.companion([F(-2), F(0), F(1)], 1, F)
    assert is_indecomposable(band(kron, "a b-", inner, F))


def test_hom_intertwines(kron, F):
    m, n = string(kron, "a b-", F), string(kron, "a b- a b-", F)
    for h in hom_basis(m, n):
        for a in ("a", "b"):
            for b in m.labels:
                lhs = n.apply(a, {t: x for t, x in zip(n.labels, h.column(m.index_of(b))) if x})
                img = m.apply(a, {b: F.one})
                rhs = {}
                for s, c in img.items():
                    for t, x in zip(n.labels, h.column(m.index_of(s))):
                        if x:
                            rhs[t] = rhs.get(t, F.zero) + c * x
                assert lhs == {t: x for t, x in rhs.items() if x}


def test_isomorphism_after_base_change(kron, F):
    m = band(kron, "a b-", LaurentModule.jordan(2, 2, F), F)
    new = [(l, {l: 1}) for l in m.labels]
    new[0] = ("v1_0", {"v1_0": 1, "v2_0": 5})
    m2 = m.change_basis(new)
    assert find_isomorphism(m, m2) is not None
    assert not are_isomorphic(m, band(kron, "a b-", LaurentModule.jordan(3, 2, F), F))


@pytest.mark.parametrize("field", [QQ, Field(2), Field(101)])
def test_three_dim_pair_decomposes(field):
    phi = Matrix([[0, 0, 0], [1, 1, 0], [1, 0, 1]], field)
    psi = Matrix([[1, 0, 0], [0, 1, 0], [0, 0, 0]], field)
    v = TwoIdempotentModule(phi, psi)
    assert len(endomorphism_basis(v)) == 2
    assert not is_indecomposable(v)
    assert not is_indecomposable(TwoIdempotentModule(phi.transpose(), psi))
