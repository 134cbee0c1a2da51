"""Dense exact matrices, Gaussian elimination and a few normal forms."""

from __future__ import annotations

import random
from typing import Iterable, Sequence

from .field import DEFAULT_FIELD, Field, GFElement


class Matrix:
    """An immutable dense matrix over an exact field.

    ``M[i, j]`` is row ``i``, column ``j``.  Column ``j`` is the image of the
    ``j``-th basis vector, so ``(A @ B)`` means "apply B first".
    """

    __slots__ = ("rows", "field", "nrows", "ncols")

    def __init__(self, rows: Iterable[Sequence], field: Field = DEFAULT_FIELD, ncols: int | None = None):
        self.field = field
        self.rows = tuple(tuple(field(x) for x in r) for r in rows)
        self.nrows = len(self.rows)
        if ncols is None:
            ncols = len(self.rows[0]) if self.rows else 0
        self.ncols = ncols
        for r in self.rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix rows")

    # -- construction -----------------------------------------------------

    @classmethod
    def zeros(cls, nrows: int, ncols: int, field: Field = DEFAULT_FIELD) -> "Matrix":
        return cls([[0] * ncols for _ in range(nrows)], field, ncols)

    @classmethod
    def identity(cls, n: int, field: Field = DEFAULT_FIELD) -> "Matrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], field, n)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int, field: Field = DEFAULT_FIELD) -> "Matrix":
        return cls([[c[i] for c in cols] for i in range(nrows)], field, len(cols))

    @classmethod
    def parse(cls, rows: Sequence[Sequence[str]], field: Field = DEFAULT_FIELD) -> "Matrix":
        return cls([[field.parse(str(x)) for x in r] for r in rows], field)

    def serialize(self) -> list[list[str]]:
        return [[self.field.fmt(x) for x in r] for r in self.rows]

    # -- access -----------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> list:
        return [r[j] for r in self.rows]

    def columns(self) -> list[list]:
        return [self.column(j) for j in range(self.ncols)]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix([[self.rows[i][j] for j in cols] for i in rows], self.field, len(cols))

    def transpose(self) -> "Matrix":
        return Matrix([[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
                      self.field, self.nrows)

    # -- arithmetic -------------------------------------------------------

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        zero = self.field.zero
        p = self.field.p
        if p is not None:
            ocols = [[x.v for x in c] for c in other.columns()]
            out = []
            for r in self.rows:
                nz = [(k, x.v) for k, x in enumerate(r) if x.v]
                out.append([GFElement(sum(x * c[k] for k, x in nz), p) for c in ocols])
            return Matrix(out, self.field, other.ncols)
        ocols = other.columns()
        out = []
        for r in self.rows:
            nz = [(k, x) for k, x in enumerate(r) if x]
            row = []
            for c in ocols:
                s = zero
                for k, x in nz:
                    if c[k]:
                        s = s + x * c[k]
                row.append(s)
            out.append(row)
        return Matrix(out, self.field, other.ncols)

    def apply(self, vec: Sequence) -> list:
        zero = self.field.zero
        p = self.field.p
        if p is not None:
            nz = [(k, self.field(y).v) for k, y in enumerate(vec) if y]
            return [GFElement(sum(r[k].v * y for k, y in nz), p) for r in self.rows]
        out = []
        for r in self.rows:
            s = zero
            for x, y in zip(r, vec):
                if x and y:
                    s = s + x * y
            out.append(s)
        return out

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                      self.field, self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                      self.field, self.ncols)

    def scale(self, c) -> "Matrix":
        return Matrix([[c * a for a in r] for r in self.rows], self.field, self.ncols)

    def __pow__(self, k: int) -> "Matrix":
        if self.nrows != self.ncols:
            raise ValueError("power of a non-square matrix")
        out = Matrix.identity(self.nrows, self.field)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def is_zero(self) -> bool:
        return not any(x for r in self.rows for x in r)

    def is_identity(self) -> bool:
        return self == Matrix.identity(self.nrows, self.field)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(self.field.fmt(x) for x in r) for r in self.rows)
        return f"Matrix[{self.field!r}]({body})"

    # -- elimination ------------------------------------------------------

    def rref(self) -> tuple["Matrix", list[int]]:
        rows = [list(r) for r in self.rows]
        pivots = _rref_inplace(rows, self.ncols)
        return Matrix(rows, self.field, self.ncols), pivots

    def rank(self) -> int:
        rows = [list(r) for r in self.rows]
        return len(_rref_inplace(rows, self.ncols))

    def nullspace(self) -> list[list]:
        """Basis of ``{x : self @ x = 0}`` as a list of column vectors."""
        rows = [list(r) for r in self.rows]
        pivots = _rref_inplace(rows, self.ncols)
        return _nullspace_from_rref(rows, pivots, self.ncols, self.field)

    def inverse(self) -> "Matrix":
        n = self.nrows
        if n != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        one, zero = self.field.one, self.field.zero
        rows = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(self.rows)]
        pivots = _rref_inplace(rows, n)
        if len(pivots) != n:
            raise ZeroDivisionError("matrix is singular")
        return Matrix([r[n:] for r in rows], self.field, n)

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.nrows

    def solve(self, rhs: Sequence) -> list | None:
        """One solution of ``self @ x = rhs`` or None."""
        rows = [list(r) + [b] for r, b in zip(self.rows, rhs)]
        pivots = _rref_inplace(rows, self.ncols + 1)
        if self.ncols in pivots:
            return None
        x = [self.field.zero] * self.ncols
        for i, p in enumerate(pivots):
            x[p] = rows[i][self.ncols]
        return x

    def charpoly(self) -> list:
        """Coefficients (constant term first) of det(T*I - self)."""
        return charpoly(self)


def _prime_of(rows) -> int | None:
    for r in rows:
        for x in r:
            return x.p if isinstance(x, GFElement) else None
    return None


def _rref_inplace(rows: list[list], ncols: int) -> list[int]:
    p = _prime_of(rows)
    if p is not None:
        ints = [[x.v for x in r] for r in rows]
        pivots = _rref_mod_p(ints, ncols, p)
        rows[:] = [[GFElement(x, p) for x in r] for r in ints]
        return pivots
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r >= nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        pr = rows[r]
        nzc = [k for k in range(c, len(pr)) if pr[k]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                ri = rows[i]
                for k in nzc:
                    ri[k] = ri[k] - f * pr[k]
        pivots.append(c)
        r += 1
    return pivots


def _rref_mod_p(rows: list[list[int]], ncols: int, p: int) -> list[int]:
    """The same elimination on residues, which is much faster than field objects."""
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r >= nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        pr = rows[r] = [x * inv % p for x in rows[r]]
        nzc = [k for k in range(c, len(pr)) if pr[k]]
        for i in range(nrows):
            if i != r:
                ri = rows[i]
                f = ri[c] % p
                if f:
                    for k in nzc:
                        ri[k] = (ri[k] - f * pr[k]) % p
        pivots.append(c)
        r += 1
    for row in rows:
        row[:] = [x % p for x in row]
    return pivots


def _nullspace_from_rref(rows, pivots, ncols, field) -> list[list]:
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [field.zero] * ncols
        v[f] = field.one
        for i, p in enumerate(pivots):
            v[p] = -rows[i][f]
        basis.append(v)
    return basis


def rank_of_vectors(vectors: Sequence[Sequence], field: Field) -> int:
    if not vectors:
        return 0
    return Matrix.from_columns(vectors, len(vectors[0]), field).rank()


# -- polynomials (coefficient lists, constant term first) ------------------

def poly_trim(p: list) -> list:
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def poly_mul(p: Sequence, q: Sequence, field: Field) -> list:
    if not p or not q:
        return []
    out = [field.zero] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] = out[i + j] + a * b
    return poly_trim(out)


def poly_pow(p: Sequence, k: int, field: Field) -> list:
    out = [field.one]
    for _ in range(k):
        out = poly_mul(out, p, field)
    return out


def poly_eval_matrix(p: Sequence, m: Matrix) -> Matrix:
    """Horner evaluation of p at a square matrix."""
    n = m.nrows
    out = Matrix.zeros(n, n, m.field)
    ident = Matrix.identity(n, m.field)
    for c in reversed(list(p)):
        out = out @ m + ident.scale(c)
    return out


def charpoly(m: Matrix) -> list:
    """Characteristic polynomial via Hessenberg reduction (any field)."""
    n = m.nrows
    if n != m.ncols:
        raise ValueError("charpoly of a non-square matrix")
    F = m.field
    a = [list(r) for r in m.rows]
    for j in range(n - 2):
        piv = next((i for i in range(j + 1, n) if a[i][j]), None)
        if piv is None:
            continue
        if piv != j + 1:
            a[piv], a[j + 1] = a[j + 1], a[piv]
            for r in a:
                r[piv], r[j + 1] = r[j + 1], r[piv]
        for i in range(j + 2, n):
            if a[i][j]:
                f = a[i][j] / a[j + 1][j]
                for k in range(n):
                    a[i][k] = a[i][k] - f * a[j + 1][k]
                for r in a:
                    r[j + 1] = r[j + 1] + f * r[i]
    # recurrence on leading principal Hessenberg blocks
    polys = [[F.one]]
    for k in range(1, n + 1):
        hk = a[k - 1][k - 1]
        p = poly_mul([-hk, F.one], polys[k - 1], F) or [F.zero]
        prod = F.one
        for i in range(1, k):
            prod = prod * a[k - i][k - i - 1]
            if not prod:
                break
            term = poly_mul([prod * a[k - i - 1][k - 1]], polys[k - i - 1], F)
            p = _poly_sub(p, term, F)
        polys.append(p)
    out = list(polys[n])
    while len(out) < n + 1:
        out.append(F.zero)
    return out


def _poly_sub(p, q, F):
    n = max(len(p), len(q))
    p = list(p) + [F.zero] * (n - len(p))
    q = list(q) + [F.zero] * (n - len(q))
    return [a - b for a, b in zip(p, q)]


def factor_poly(p: Sequence, field: Field) -> list[tuple[list, int]]:
    """Monic irreducible factors with multiplicities (uses sympy)."""
    import sympy

    T = sympy.Symbol("T")
    p = poly_trim(p)
    if field.p is None:
        expr = sum(sympy.Rational(c.numerator, c.denominator) * T**i for i, c in enumerate(p))
        poly = sympy.Poly(expr, T, domain="QQ")
        _, facs = poly.factor_list()
        out = []
        for f, e in facs:
            coeffs = [field(sympy.Rational(c).p) / field(sympy.Rational(c).q) for c in reversed(f.all_coeffs())]
            lead = coeffs[-1]
            out.append(([c / lead for c in coeffs], e))
        return out
    expr = sum(int(c.v) * T**i for i, c in enumerate(p))
    poly = sympy.Poly(expr, T, modulus=field.p)
    _, facs = poly.factor_list()
    out = []
    for f, e in facs:
        coeffs = [field(int(c)) for c in reversed(f.all_coeffs())]
        lead = coeffs[-1]
        out.append(([c / lead for c in coeffs], e))
    return out


# -- normal forms ----------------------------------------------------------

def companion_matrix(poly: Sequence, field: Field = DEFAULT_FIELD) -> Matrix:
    """Companion matrix of a monic polynomial given constant term first.

    Basis vector i is sent to i+1; the last column holds the negated
    coefficients.
    """
    poly = [field(c) for c in poly]
    if not poly or poly[-1] != field.one:
        raise ValueError("companion_matrix needs a monic polynomial")
    m = len(poly) - 1
    if m < 1:
        raise ValueError("polynomial must have positive degree")
    rows = [[field.zero] * m for _ in range(m)]
    for i in range(m - 1):
        rows[i + 1][i] = field.one
    for i in range(m):
        rows[i][m - 1] = -poly[i]
    return Matrix(rows, field, m)


def jordan_block(lam, n: int, field: Field = DEFAULT_FIELD) -> Matrix:
    """Lower Jordan block: e_i -> lam*e_i + e_{i+1}."""
    if n < 1:
        raise ValueError("Jordan block size must be positive")
    lam = field(lam)
    rows = [[field.zero] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = lam
        if i + 1 < n:
            rows[i + 1][i] = field.one
    return Matrix(rows, field, n)


def krylov_matrix(m: Matrix, v: Sequence) -> Matrix:
    cols = [list(v)]
    for _ in range(m.nrows - 1):
        cols.append(m.apply(cols[-1]))
    return Matrix.from_columns(cols, m.nrows, m.field)


def cyclic_basis(m: Matrix, seed: int = 0, tries: int = 200) -> Matrix | None:
    """A matrix P with columns v, mv, m^2 v, ... when m is cyclic, else None.

    Then ``P^{-1} m P`` is the companion matrix of the characteristic
    polynomial.
    """
    n = m.nrows
    F = m.field
    for i in range(n):
        e = [F.one if k == i else F.zero for k in range(n)]
        P = krylov_matrix(m, e)
        if P.is_invertible():
            return P
    rng = random.Random(seed)
    for _ in range(tries):
        v = [F.random(rng) for _ in range(n)]
        P = krylov_matrix(m, v)
        if P.is_invertible():
            return P
    return None


def block_diagonal(blocks: Sequence[Matrix], field: Field) -> Matrix:
    n = sum(b.nrows for b in blocks)
    k = sum(b.ncols for b in blocks)
    rows = [[field.zero] * k for _ in range(n)]
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.nrows):
            for j in range(b.ncols):
                rows[r0 + i][c0 + j] = b[i, j]
        r0 += b.nrows
        c0 += b.ncols
    return Matrix(rows, field, k)


def sparse_nullspace(rows: Iterable[dict], ncols: int, field: Field) -> list[list]:
    """Nullspace basis of a sparse system; rows map column -> coefficient.

    Works on raw residues over GF(p) to avoid per-element object overhead.
    """
    p = field.p
    if p is not None:
        def conv(x):
            return x.v if hasattr(x, "v") else field(x).v

        def inv(x):
            return pow(x, p - 2, p)
    else:
        def conv(x):
            return field(x)

        def inv(x):
            return 1 / x
    pivots: dict[int, dict] = {}
    for raw in rows:
        r = {c: conv(x) for c, x in raw.items()}
        r = {c: x for c, x in r.items() if x}
        for c in [c for c in r if c in pivots]:
            f = r.get(c)
            if not f:
                continue
            for k, y in pivots[c].items():
                v = r.get(k, 0) - f * y
                if p is not None:
                    v %= p
                if v:
                    r[k] = v
                else:
                    r.pop(k, None)
        if not r:
            continue
        c0 = min(r)
        s = inv(r[c0])
        r = {k: (v * s) % p if p is not None else v * s for k, v in r.items()}
        for c, prow in pivots.items():
            f = prow.get(c0)
            if f:
                for k, y in r.items():
                    v = prow.get(k, 0) - f * y
                    if p is not None:
                        v %= p
                    if v:
                        prow[k] = v
                    else:
                        prow.pop(k, None)
        pivots[c0] = r
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for f in free:
        vec = [field.zero] * ncols
        vec[f] = field.one
        for c, prow in pivots.items():
            y = prow.get(f)
            if y:
                vec[c] = field(-y)
        out.append(vec)
    return out
