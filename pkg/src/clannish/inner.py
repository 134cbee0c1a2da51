"""Modules over the auxiliary algebras A_w.

* :class:`LaurentModule` -- a vector space with an invertible operator
  (modules over k[T, T^-1]), used for asymmetric bands.
* :class:`TwoIdempotentModule` -- a vector space with two idempotents
  (modules over k<x, y>/(x^2 - x, y^2 - y)), used for symmetric bands.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .field import DEFAULT_FIELD, Field
from .linalg import Matrix, companion_matrix, factor_poly, jordan_block, poly_pow


class InnerModuleError(ValueError):
    pass


@dataclass(frozen=True)
class LaurentModule:
    phi: Matrix
    label: str = ""

    def __post_init__(self):
        if self.phi.nrows != self.phi.ncols:
            raise InnerModuleError("phi must be square")
        if not self.phi.is_invertible():
            raise InnerModuleError("phi must be invertible")

    @property
    def dim(self) -> int:
        return self.phi.nrows

    @property
    def field(self) -> Field:
        return self.phi.field

    def is_indecomposable(self) -> bool:
        """True iff phi is cyclic with characteristic polynomial p^s, p irreducible."""
        from .linalg import cyclic_basis

        facs = factor_poly(self.phi.charpoly(), self.field)
        return len(facs) == 1 and cyclic_basis(self.phi) is not None

    def to_dict(self) -> dict:
        return {"type": "laurent", "phi": self.phi.serialize(), "label": self.label}

    @classmethod
    def jordan(cls, lam, n: int, field: Field = DEFAULT_FIELD) -> "LaurentModule":
        if field(lam) == field.zero:
            raise InnerModuleError("eigenvalue must be nonzero")
        return cls(jordan_block(lam, n, field), f"J{n}({field.fmt(lam)})")

    @classmethod
    def companion(cls, poly, power: int = 1, field: Field = DEFAULT_FIELD) -> "LaurentModule":
        """Companion matrix of poly^power (poly monic, constant term first)."""
        poly = [field(c) for c in poly]
        if not poly[0]:
            raise InnerModuleError("polynomial T is not allowed (phi must be invertible)")
        return cls(companion_matrix(poly_pow(poly, power, field), field),
                   f"C({','.join(field.fmt(c) for c in poly)})^{power}")


@dataclass(frozen=True)
class TwoIdempotentModule:
    """(V, phi, psi) with phi^2 = phi and psi^2 = psi.

    ``family`` records which canonical family generated the module (if any),
    so the tree basis can be read off without a classification step.
    """

    phi: Matrix
    psi: Matrix
    family: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if self.phi.shape != self.psi.shape or self.phi.nrows != self.phi.ncols:
            raise InnerModuleError("phi and psi must be square of equal size")
        if self.phi @ self.phi != self.phi:
            raise InnerModuleError("phi is not idempotent")
        if self.psi @ self.psi != self.psi:
            raise InnerModuleError("psi is not idempotent")

    @property
    def dim(self) -> int:
        return self.phi.nrows

    @property
    def field(self) -> Field:
        return self.phi.field

    def to_dict(self) -> dict:
        return {"type": "two_idempotent", "phi": self.phi.serialize(), "psi": self.psi.serialize(),
                "family": _plain(self.family)}


def _plain(x):
    """Nested tuples as lists, so the record survives a JSON round trip unchanged."""
    return [_plain(y) for y in x] if isinstance(x, (list, tuple)) else x


@dataclass(frozen=True)
class ScalarChoice:
    """k[T]/(T^2 - T)-module of dimension one: T acts as 0 or 1."""

    T: int

    def __post_init__(self):
        if self.T not in (0, 1):
            raise InnerModuleError("T must act as 0 or 1")

    def to_dict(self) -> dict:
        return {"type": "scalar", "T": self.T}


def inner_from_dict(d: dict, field: Field):
    kind = d.get("type")
    if kind == "laurent":
        return LaurentModule(Matrix.parse(d["phi"], field), d.get("label", ""))
    if kind == "two_idempotent":
        return TwoIdempotentModule(Matrix.parse(d["phi"], field), Matrix.parse(d["psi"], field),
                                   tuple(d.get("family", ())))
    if kind == "scalar":
        return ScalarChoice(int(d["T"]))
    raise InnerModuleError(f"unknown inner module type {kind!r}")
