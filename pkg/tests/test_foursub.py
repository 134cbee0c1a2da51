import itertools

import pytest

from clannish.field import QQ
from clannish.foursub import (canonical_type, family_member, four_subspace_tree_basis, homogeneous_module,
                              line_module, rcf_tree_subspace, swapped)
from clannish.homs import are_isomorphic, is_indecomposable
from clannish.inner import InnerModuleError, LaurentModule, TwoIdempotentModule
from clannish.linalg import Matrix, companion_matrix
from clannish.quivers import mapping_quiver


def line_check(tb):
    mq = mapping_quiver(tb.trimmed_change, [f"f{i}" for i in tb.kept], [f"e{j}" for j in range(tb.dim)])
    return mq


def test_identity_pair(F):
    tb = four_subspace_tree_basis(TwoIdempotentModule(Matrix.identity(1, F), Matrix.identity(1, F)))
    assert tb.kept == (0,) and tb.edges == ((0, 0),)
    assert tb.B_y == tb.U


def test_three_dim_pair_rejected(F):
    phi = Matrix([[0, 0, 0], [1, 1, 0], [1, 0, 1]], F)
    psi = Matrix([[1, 0, 0], [0, 1, 0], [0, 0, 0]], F)
    with pytest.raises(InnerModuleError):
        four_subspace_tree_basis(TwoIdempotentModule(phi, psi))


@pytest.mark.parametrize("kind,n", list(itertools.product(["0", "I", "II"], range(1, 6))))
def test_canonical_types_give_lines(F, kind, n):
    tb = four_subspace_tree_basis(canonical_type(kind, n, F))
    mq = line_check(tb)
    assert len(mq.edges) == len(tb.kept) + tb.dim - 1
    assert mq.max_degree() <= 2 and mq.is_tree()
    assert tb.is_line()


def test_adapted_bases(F):
    for kind in ("0", "I", "II"):
        mod = canonical_type(kind, 3, F)
        tb = four_subspace_tree_basis(mod)
        for B, types, e in ((tb.B_x, tb.x_types, mod.phi), (tb.B_y, tb.y_types, mod.psi)):
            for j, t in enumerate(types):
                col = B.column(j)
                assert e.apply(col) == ([F.zero] * len(col) if t == 0 else col)


def test_small_families_indecomposable_and_distinct(F):
    mods = [line_module(m, a, b, F) for m in range(1, 5) for a in (0, 1) for b in (0, 1)]
    mods += [canonical_type("0", n, F) for n in (1, 2)] + [homogeneous_module([-2, 0, 1], 1, F)]
    for m in mods:
        assert is_indecomposable(m)
    for x, y in itertools.combinations(mods, 2):
        if x.dim == y.dim:
            assert not are_isomorphic(x, y)


def test_untagged_classification(F):
    for kind in ("0", "I", "II"):
        mod = canonical_type(kind, 2, F)
        plain = TwoIdempotentModule(mod.phi, mod.psi)
        assert not family_member(plain)
        tb = four_subspace_tree_basis(plain)
        assert tb.is_line() and line_check(tb).is_tree()
        sw = four_subspace_tree_basis(swapped(mod))
        assert sw.is_line()


def test_forged_tag_not_trusted(F):
    good = line_module(3, 0, 0, F)
    forged = TwoIdempotentModule(good.phi, good.psi, ("line", 3, 1, 1))
    assert not family_member(forged)
    assert four_subspace_tree_basis(forged).is_line()


def test_homogeneous_needs_irreducible(F):
    with pytest.raises(InnerModuleError):
        homogeneous_module([1, 0, 1], 1, F)  # T^2 + 1 splits mod 101
    with pytest.raises(InnerModuleError):
        homogeneous_module([-1, 1], 1, F)  # p(1) = 0


def test_rcf_dim_one(F):
    r = rcf_tree_subspace(LaurentModule.jordan(4, 1, F))
    assert r.edges == () and r.U.shape == (1, 0)


def test_rcf_cubic(F):
    r = rcf_tree_subspace(LaurentModule.jordan(3, 3, F))
    assert r.edges == ((0, 1), (1, 2))
    restricted = r.companion.submatrix(range(3), range(2))
    mq = mapping_quiver(restricted, ["u1", "u2"], ["v1", "v2", "v3"])
    assert {(a, b) for a, b, _ in mq.edges} == {("u1", "v2"), ("u2", "v3")}
    assert mq.is_forest()


def test_rcf_quadratic_over_q():
    r = rcf_tree_subspace(LaurentModule(companion_matrix([QQ(2), QQ(0), QQ(1)], QQ)))
    assert len(r.edges) == 1


def test_rcf_rejects_split(F):
    with pytest.raises(InnerModuleError):
        rcf_tree_subspace(LaurentModule(Matrix([[2, 0], [0, 3]], F)))
