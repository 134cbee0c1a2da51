"""Tree bases for pairs of idempotents and for invertible operators.

A pair of idempotents (phi, psi) on V is the same thing as a four-subspace
representation with two complementary pairs (ker phi, im phi) and
(ker psi, im psi).  Indecomposables come in two kinds here:

* lines: bases e_1..e_m (phi-adapted) and f_1..f_m (psi-adapted) with
  f_1 = e_1 and f_k = e_{k-1} + e_k, the kernel/image types alternating
  along the line;
* homogeneous: dim 2n, all four subspaces pairwise transversal, governed by
  a companion matrix of p^s with p(0), p(1) != 0.  Dropping the last f
  turns the cyclic mapping quiver into a line.
"""

from __future__ import annotations

from dataclasses import dataclass

from .field import DEFAULT_FIELD, Field
from .homs import find_isomorphism, is_indecomposable
from .inner import InnerModuleError, LaurentModule, TwoIdempotentModule
from .linalg import Matrix, companion_matrix, cyclic_basis, factor_poly, poly_pow


def _diag(entries, F: Field) -> Matrix:
    n = len(entries)
    return Matrix([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], F, n)


def _from_bases(bx: Matrix, xt, by: Matrix, yt, family) -> TwoIdempotentModule:
    F = bx.field
    phi = bx @ _diag(xt, F) @ bx.inverse()
    psi = by @ _diag(yt, F) @ by.inverse()
    return TwoIdempotentModule(phi, psi, family)


def line_module(m: int, e_start: int = 0, f_start: int = 0, field: Field = DEFAULT_FIELD) -> TwoIdempotentModule:
    """The line-shaped indecomposable of dimension m (four per dimension)."""
    if m < 1 or e_start not in (0, 1) or f_start not in (0, 1):
        raise InnerModuleError("line modules need m >= 1 and start types in {0, 1}")
    F = field
    xt = [(e_start + k) % 2 for k in range(m)]
    yt = [(f_start + k) % 2 for k in range(m)]
    cols = []
    for k in range(m):
        c = [F.zero] * m
        c[k] = F.one
        if k:
            c[k - 1] = F.one
        cols.append(c)
    return _from_bases(Matrix.identity(m, F), xt, Matrix.from_columns(cols, m, F), yt,
                       ("line", m, e_start, f_start))


def homogeneous_module(poly, power: int = 1, field: Field = DEFAULT_FIELD) -> TwoIdempotentModule:
    """The homogeneous indecomposable attached to poly^power (poly monic, constant first)."""
    F = field
    poly = [F(c) for c in poly]
    if poly[-1] != F.one:
        raise InnerModuleError("polynomial must be monic")
    facs = factor_poly(poly, F)
    if len(facs) != 1 or facs[0][1] != 1:
        raise InnerModuleError("polynomial must be irreducible")
    if not poly[0] or sum(poly, F.zero) == F.zero:
        raise InnerModuleError("p(0) and p(1) must be nonzero")
    fam = ("homogeneous", tuple(F.fmt(c) for c in poly), power)
    by = _homogeneous_by(fam, F)
    n = by.nrows // 2
    return _from_bases(Matrix.identity(2 * n, F), [0] * n + [1] * n, by, [0] * n + [1] * n, fam)


def _homogeneous_by(fam, F: Field) -> Matrix:
    poly = [F.parse(c) for c in fam[1]]
    C = companion_matrix(poly_pow(poly, fam[2], F), F)
    n = C.nrows
    cols = []
    for i in range(n):
        c = [F.zero] * (2 * n)
        c[i] = c[n + i] = F.one
        cols.append(c)
    for i in range(n):
        c = list(C.column(i)) + [F.zero] * n
        c[n + i] = F.one
        cols.append(c)
    return Matrix.from_columns(cols, 2 * n, F)


def canonical_type(kind: str, n: int, field: Field = DEFAULT_FIELD, poly=None) -> TwoIdempotentModule:
    """Canonical representatives indexed like the classical types.

    ``"0"``: homogeneous of dimension 2n (poly^s with deg = n; default
    (T - 2)^n); ``"I"``/``"II"``: the odd lines of dimension 2n + 1 whose
    kernel/image patterns start equal resp. opposite.
    """
    F = field
    if kind == "0":
        if poly is None:
            return homogeneous_module([-2, 1], n, F)
        return homogeneous_module(poly, n // (len(poly) - 1), F)
    if kind == "I":
        return line_module(2 * n + 1, 0, 0, F)
    if kind == "II":
        return line_module(2 * n + 1, 0, 1, F)
    raise InnerModuleError(f"unknown type {kind!r}")


@dataclass(frozen=True)
class FourSubspaceTreeBasis:
    """Bases of V adapted to phi (B_x) and psi (B_y); U = span of B_y'.

    ``change`` holds the coordinates of B_y in B_x (columns), ``kept`` the
    indices of B_y', ``edges`` the mapping quiver of U -> V as (f, e)
    index pairs.  Types: 0 = kernel, 1 = image.
    """

    kind: str
    B_x: Matrix
    x_types: tuple
    B_y: Matrix
    y_types: tuple
    kept: tuple
    change: Matrix
    edges: tuple

    @property
    def dim(self) -> int:
        return self.B_x.nrows

    @property
    def codim(self) -> int:
        return self.dim - len(self.kept)

    @property
    def trimmed_change(self) -> Matrix:
        return self.change.submatrix(range(self.dim), self.kept)

    @property
    def U(self) -> Matrix:
        return self.B_y.submatrix(range(self.dim), self.kept)

    def is_line(self) -> bool:
        nodes = {("f", i) for i in self.kept} | {("e", j) for j in range(self.dim)}
        adj: dict = {v: set() for v in nodes}
        for i, j in self.edges:
            adj[("f", i)].add(("e", j))
            adj[("e", j)].add(("f", i))
        if len(self.edges) != len(nodes) - 1 or any(len(s) > 2 for s in adj.values()):
            return False
        start = next(iter(nodes))
        seen, stack = {start}, [start]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen == nodes


def _assemble_basis(kind, bx, xt, by, yt, trim: bool) -> FourSubspaceTreeBasis:
    m = bx.nrows
    change = bx.inverse() @ by
    kept = tuple(range(m - 1)) if trim else tuple(range(m))
    edges = tuple((i, j) for i in kept for j in range(m) if change[j, i])
    return FourSubspaceTreeBasis(kind, bx, tuple(xt), by, tuple(yt), kept, change, edges)


def _kernel(m: Matrix) -> list[list]:
    return m.nullspace()


def _image(m: Matrix) -> list[list]:
    return [list(r) for r in m.transpose().rref()[0].rows if any(r)]


def _homogeneous_basis(mod: TwoIdempotentModule):
    """phi/psi-adapted bases when all four subspaces are pairwise transversal."""
    F = mod.field
    m = mod.dim
    if m % 2:
        return None
    n = m // 2
    I = Matrix.identity(m, F)
    phi, psi = mod.phi, mod.psi
    if phi.rank() != n or psi.rank() != n:
        return None
    X0, Y0, Y1 = _kernel(phi), _kernel(psi), _image(psi)
    for a in (phi, I - phi):
        for Y in (Y0, Y1):
            if Matrix.from_columns(Y, m, F).rank() != n or (a @ Matrix.from_columns(Y, m, F)).rank() != n:
                return None
    pi0, pi1 = I - phi, phi
    Q0 = Matrix.from_columns(Y0, m, F)
    Q1 = Matrix.from_columns(Y1, m, F)
    P0, P1 = pi0 @ Q0, pi1 @ Q1

    def B(x):  # X1-part of the Y0 vector over x
        return pi1.apply(Q0.apply(P0.solve(x)))

    def N(x):  # X0-part of the Y1 vector over B x
        return pi0.apply(Q1.apply(P1.solve(B(x))))

    Xm = Matrix.from_columns(X0, m, F)
    # N restricted to X0 in the basis X0
    Nx = Matrix.from_columns([Xm.solve(N(x)) for x in X0], n, F)
    P = cyclic_basis(Nx)
    if P is None:
        return None
    xs = [Xm.apply(c) for c in P.columns()]
    facs = factor_poly(Nx.charpoly(), F)
    if len(facs) != 1:
        return None
    e = xs + [B(x) for x in xs]
    f = [[a + b for a, b in zip(x, B(x))] for x in xs] + [[a + b for a, b in zip(N(x), B(x))] for x in xs]
    return Matrix.from_columns(e, m, F), Matrix.from_columns(f, m, F)


def family_member(mod: TwoIdempotentModule) -> bool:
    """True iff the module's family tag reproduces its matrices exactly."""
    fam = mod.family
    try:
        if fam and fam[0] == "line" and fam[1] == mod.dim:
            ref = line_module(fam[1], fam[2], fam[3], mod.field)
        elif fam and fam[0] == "homogeneous":
            ref = homogeneous_module([mod.field.parse(c) for c in fam[1]], fam[2], mod.field)
        else:
            return False
    except (InnerModuleError, IndexError, TypeError, ValueError):
        return False
    return ref.phi == mod.phi and ref.psi == mod.psi


def four_subspace_tree_basis(mod: TwoIdempotentModule, check: bool = True) -> FourSubspaceTreeBasis:
    """Tree basis for an indecomposable pair of idempotents."""
    F = mod.field
    m = mod.dim
    fam = mod.family if family_member(mod) else ()
    if fam and fam[0] == "line":
        _, _, es, fs = fam
        xt = [(es + k) % 2 for k in range(m)]
        yt = [(fs + k) % 2 for k in range(m)]
        return _assemble_basis("line", Matrix.identity(m, F), xt, _line_f(m, F), yt, False)
    if fam and fam[0] == "homogeneous":
        n = m // 2
        return _assemble_basis("0", Matrix.identity(m, F), [0] * n + [1] * n,
                               _homogeneous_by(fam, F), [0] * n + [1] * n, True)
    if check and not is_indecomposable(mod):
        raise InnerModuleError("two-idempotent module is decomposable")
    n = m // 2
    hom = _homogeneous_basis(mod)
    if hom is not None:
        bx, by = hom
        return _assemble_basis("0", bx, [0] * n + [1] * n, by, [0] * n + [1] * n, True)
    for es in (0, 1):
        for fs in (0, 1):
            L = line_module(m, es, fs, F)
            g = find_isomorphism(L, mod)
            if g is None:
                continue
            xt = [(es + k) % 2 for k in range(m)]
            yt = [(fs + k) % 2 for k in range(m)]
            return _assemble_basis("line", g, xt, g @ _line_f(m, F), yt, False)
    raise InnerModuleError("no tree basis found (module outside the line and homogeneous families)")


def _line_f(m: int, F: Field) -> Matrix:
    return Matrix([[F.one if (i == k or i == k - 1) else F.zero for k in range(m)] for i in range(m)], F, m)


def swapped(mod: TwoIdempotentModule) -> TwoIdempotentModule:
    """The same space with the roles of phi and psi exchanged."""
    return TwoIdempotentModule(mod.psi, mod.phi)


# -- invertible operators --------------------------------------------------------

@dataclass(frozen=True)
class RcfTreeSubspace:
    """Cyclic basis v_1..v_m (columns of ``basis``) with phi v_i = v_{i+1}.

    U = span(v_1..v_{m-1}); edges (i, i+1) record u_i -> v_{i+1}.
    """

    basis: Matrix
    companion: Matrix
    edges: tuple

    @property
    def U(self) -> Matrix:
        m = self.basis.nrows
        return self.basis.submatrix(range(m), range(m - 1))


def rcf_tree_subspace(mod: LaurentModule) -> RcfTreeSubspace:
    if not mod.is_indecomposable():
        raise InnerModuleError("operator is not indecomposable (needs a single primary cyclic block)")
    P = cyclic_basis(mod.phi)
    comp = P.inverse() @ mod.phi @ P
    m = mod.dim
    return RcfTreeSubspace(P, comp, tuple((i, i + 1) for i in range(m - 1)))
