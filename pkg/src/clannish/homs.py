"""Intertwiners, endomorphism algebras and an indecomposability oracle."""

from __future__ import annotations

import random
from typing import Sequence

from .field import Field
from .inner import LaurentModule, TwoIdempotentModule
from .linalg import Matrix, factor_poly, sparse_nullspace
from .modules import ModuleRep


class HomError(ValueError):
    pass


# An abstract representation: vertex dims and arrows (src, tgt, matrix).
def _as_system(rep) -> tuple[dict[str, int], list[tuple[str, str, str, Matrix]], Field]:
    if isinstance(rep, ModuleRep):
        dims = rep.dim_vector()
        arrows = [(a.id, a.source, a.target, rep.matrix(a.id)) for a in rep.presentation.arrows]
        return dims, arrows, rep.field
    if isinstance(rep, LaurentModule):
        return {"*": rep.dim}, [("phi", "*", "*", rep.phi)], rep.field
    if isinstance(rep, TwoIdempotentModule):
        return {"*": rep.dim}, [("phi", "*", "*", rep.phi), ("psi", "*", "*", rep.psi)], rep.field
    raise TypeError(f"not a representation: {rep!r}")


def _labels(rep) -> dict[str, list[int]]:
    """Positions (in the flat basis order) of the basis vectors at each vertex."""
    if isinstance(rep, ModuleRep):
        out: dict[str, list[int]] = {}
        for i, (_, v) in enumerate(rep.basis):
            out.setdefault(v, []).append(i)
        return out
    return {"*": list(range(rep.dim))}


def hom_basis(M, N) -> list[Matrix]:
    """Basis of Hom(M, N) as dense (dim N x dim M) matrices in the flat bases."""
    dM, arM, F = _as_system(M)
    dN, arN, F2 = _as_system(N)
    if F != F2:
        raise HomError("representations over different fields")
    if [(a, s, t) for a, s, t, _ in arM] != [(a, s, t) for a, s, t, _ in arN]:
        raise HomError("representations of different quivers")
    verts = sorted(set(dM) | set(dN))
    offs = {}
    n = 0
    for v in verts:
        offs[v] = n
        n += dN.get(v, 0) * dM.get(v, 0)

    def var(v, i, j):
        return offs[v] + i * dM[v] + j

    rows = []
    for (_, s, t, Ma), (_, _, _, Na) in zip(arM, arN):
        ms, mt, ns, nt = dM.get(s, 0), dM.get(t, 0), dN.get(s, 0), dN.get(t, 0)
        for i in range(nt):
            for j in range(ms):
                r: dict[int, object] = {}
                # (X_t Ma)[i, j] - (Na X_s)[i, j]
                for k in range(mt):
                    c = Ma[k, j]
                    if c:
                        key = var(t, i, k)
                        r[key] = r.get(key, F.zero) + c
                for k in range(ns):
                    c = Na[i, k]
                    if c:
                        key = var(s, k, j)
                        r[key] = r.get(key, F.zero) - c
                if r:
                    rows.append(r)
    sols = sparse_nullspace(rows, n, F)
    pM, pN = _labels(M), _labels(N)
    dimM = sum(dM.values())
    dimN = sum(dN.values())
    out = []
    for x in sols:
        m = [[F.zero] * dimM for _ in range(dimN)]
        for v in verts:
            if not dM.get(v) or not dN.get(v):
                continue
            for i, gi in enumerate(pN[v]):
                for j, gj in enumerate(pM[v]):
                    m[gi][gj] = x[var(v, i, j)]
        out.append(Matrix(m, F, dimM))
    return out


def endomorphism_basis(M, N=None) -> list[Matrix]:
    """Intertwiners M -> N (N defaults to M)."""
    return hom_basis(M, M if N is None else N)


def _trace(m: Matrix):
    F = m.field
    t = F.zero
    for i in range(m.nrows):
        t = t + m[i, i]
    return t


def _combo(basis: Sequence[Matrix], rng: random.Random) -> Matrix:
    F = basis[0].field
    out = Matrix.zeros(basis[0].nrows, basis[0].ncols, F)
    for b in basis:
        out = out + b.scale(F.random(rng))
    return out


def is_indecomposable(rep, seed: int = 0, tries: int = 60) -> bool:
    """Decide indecomposability from the endomorphism algebra E.

    E is local iff the module is indecomposable.  Semisimple rank is read
    off the trace form (exact in characteristic 0 or above dim M); a random
    element then either splits (two coprime factors give an idempotent) or
    generates E/rad E as a field.
    """
    dims, _, F = _as_system(rep)
    n = sum(dims.values())
    if n == 0:
        return False
    E = endomorphism_basis(rep)
    if len(E) == 1:
        return True
    s = None
    if F.p is None or F.p > n:
        gram = Matrix([[_trace(x @ y) for y in E] for x in E], F)
        s = gram.rank()
        if s == 1:
            return True
    rng = random.Random(seed)
    for _ in range(tries):
        x = _combo(E, rng)
        facs = factor_poly(x.charpoly(), F)
        if len(facs) > 1:
            return False
        if s is not None and len(facs[0][0]) - 1 == s:
            return True
    if s is None:
        # every sampled element was primary: accept as local
        return True
    raise HomError("indecomposability undecided after random sampling")


def find_isomorphism(M, N, seed: int = 0, tries: int = 20) -> Matrix | None:
    """An invertible intertwiner M -> N, or None if none was found."""
    dM, _, _ = _as_system(M)
    dN, _, _ = _as_system(N)
    if {v: d for v, d in dM.items() if d} != {v: d for v, d in dN.items() if d}:
        return None
    H = hom_basis(M, N)
    if not H:
        return None
    rng = random.Random(seed)
    for _ in range(tries):
        x = _combo(H, rng)
        if x.is_invertible():
            return x
    return None


def are_isomorphic(M, N, seed: int = 0) -> bool:
    return find_isomorphism(M, N, seed) is not None
