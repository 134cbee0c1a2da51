"""Submodules spanned by basis subsets, and the codimension-bounded
submodules of band modules with planar (or tree) coefficient quivers."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable

from .foursub import family_member, four_subspace_tree_basis, rcf_tree_subspace, swapped
from .inner import LaurentModule, TwoIdempotentModule, inner_from_dict
from .modules import ModuleError, ModuleRep
from .words import DIRECT, INVERSE, SPECIAL, BandWord, band_direction, format_word, parse_word


class SubmoduleError(ValueError):
    def __init__(self, msg: str, arrow: str | None = None, vector: str | None = None):
        super().__init__(msg)
        self.arrow = arrow
        self.vector = vector


@dataclass(frozen=True)
class SubmoduleWitness:
    parent: ModuleRep
    kept: tuple
    codim: int
    closure: dict = dc_field(default_factory=dict)  # arrow -> True once checked
    notes: dict = dc_field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.kept)

    def submodule(self) -> ModuleRep:
        return restrict(self.parent, self.kept)

    def reverify(self) -> bool:
        try:
            w = verify_submodule(self.parent, self.kept)
        except SubmoduleError:
            return False
        return w.codim == self.codim


def verify_submodule(parent: ModuleRep, subset: Iterable[str]) -> SubmoduleWitness:
    """Check that the span of ``subset`` is closed under every arrow."""
    kept = tuple(subset)
    unknown = [l for l in kept if l not in parent._vertex]
    if unknown:
        raise SubmoduleError(f"unknown basis labels {unknown}")
    ks = set(kept)
    closure = {}
    for a in sorted(parent.action):
        cols = parent.action[a]
        for b in kept:
            bad = [t for t in cols.get(b, {}) if t not in ks]
            if bad:
                raise SubmoduleError(f"{a}·{b} leaves the span (hits {bad[0]})", a, b)
        closure[a] = True
    return SubmoduleWitness(parent, kept, parent.dim - len(ks), closure)


def restrict(parent: ModuleRep, kept: Iterable[str]) -> ModuleRep:
    ks = set(kept)
    basis = [(l, v) for l, v in parent.basis if l in ks]
    action = {a: {b: img for b, img in cols.items() if b in ks} for a, cols in parent.action.items()}
    return ModuleRep(parent.presentation, parent.field, basis, action,
                     {"constructor": "submodule", "parent": parent.provenance})


# -- helpers -------------------------------------------------------------------------

def _band_data(m: ModuleRep):
    prov = m.provenance
    if prov.get("constructor") != "band":
        raise ModuleError("not a band module (constructor tag missing)")
    p = m.presentation
    w = parse_word(p, prov["word"])
    inner = inner_from_dict(prov["inner"], m.field)
    return p, w, bool(prov.get("symmetric")), inner


def _vec_at(m: ModuleRep, labels: list[str], col) -> dict:
    return {l: c for l, c in zip(labels, col) if c}


# -- asymmetric bands ------------------------------------------------------------------

def _source_rotation(w) -> int | None:
    """k such that the band read from w_{k+1} has V_1 as a source."""
    n = len(w)
    dirs = band_direction(w)
    for k in range(n):
        if dirs[k] == DIRECT and dirs[(k + 1) % n] == INVERSE:
            return k
    return None


def _asym_submodule(m: ModuleRep, tag: str) -> SubmoduleWitness:
    p, w, sym, inner = _band_data(m)
    if sym or not isinstance(inner, LaurentModule):
        raise ModuleError("expected an asymmetric band module")
    n, dim = len(w), inner.dim
    k = _source_rotation(w)
    if k is None or n < 2:
        raise ModuleError("presentation not finite-dimensional (no letter pair of opposite direction)")
    rcf = rcf_tree_subspace(inner)
    P = rcf.basis
    phi_inv = inner.phi.inverse()
    new_basis = []
    for jp in range(n):
        j = (jp + k) % n
        G = phi_inv @ P if 1 <= j <= k else P
        labels = [f"v{i}_{j}" for i in range(1, dim + 1)]
        for i in range(dim):
            new_basis.append((f"v{i + 1}_{jp}", _vec_at(m, labels, G.column(i))))
    rot = w[k:] + w[:k]
    parent = m.change_basis(new_basis, {
        "constructor": "band", "word": format_word(rot), "symmetric": False,
        "inner": LaurentModule(rcf.companion, inner.label).to_dict(), "rotation": k})
    dropped = {f"v{dim}_1"}
    kept = [l for l in parent.labels if l not in dropped]
    wit = verify_submodule(parent, kept)
    if wit.codim != 1:
        raise ModuleError("internal: band submodule has codimension != 1")
    return SubmoduleWitness(parent, wit.kept, 1, wit.closure,
                            {"kind": tag, "rotation": k, "replaced": [1], "U_dim": dim - 1})


def band_string_submodule(m: ModuleRep) -> SubmoduleWitness:
    """Codimension-1 submodule of a string-algebra band module; it is a string module."""
    if m.presentation.special:
        raise ModuleError("band_string_submodule needs a presentation without special loops")
    return _asym_submodule(m, "band_string")


def asym_band_planar_submodule(m: ModuleRep) -> SubmoduleWitness:
    """Codimension-1 submodule of an asymmetric (clannish) band module with planar quiver."""
    return _asym_submodule(m, "asym_band")


# -- symmetric bands -------------------------------------------------------------------

def sym_band_planar_submodule(m: ModuleRep, check_inner: bool = True) -> SubmoduleWitness:
    p, w, sym, inner = _band_data(m)
    if not sym or not isinstance(inner, TwoIdempotentModule):
        raise ModuleError("expected a symmetric band module")
    b = BandWord(w, True)
    z = b.z
    n = len(z)
    if n == 0 or all(x.kind == SPECIAL for x in z):
        raise ModuleError("presentation not finite-dimensional (z empty or only special letters)")
    dirs = band_direction(w)[b.half + 2:]
    dim = inner.dim
    options = []
    minus = [j for j in range(1, n + 1) if dirs[j - 1] == INVERSE]
    plus = [j for j in range(1, n + 1) if dirs[j - 1] == DIRECT]
    if minus:
        i0 = minus[0]
        options.append(("left", i0, list(range(0, i0))))
    if plus:
        i1 = plus[-1]
        options.append(("right", i1, list(range(i1, n + 1))))
    best = None
    # a canonical family member is known to be indecomposable, and so is its swap
    check = check_inner and not family_member(inner)
    for side, idx, replaced in options:
        tb = four_subspace_tree_basis(inner if side == "left" else swapped(inner), check=check)
        cost = len(replaced) * tb.codim
        if best is None or cost < best[0]:
            best = (cost, side, idx, replaced, tb)
        if cost == 0:
            break
    cost, side, idx, replaced, tb = best
    # tb.B_y spans the replaced copies, tb.B_x the kept ones (roles swap on the right)
    new_basis = []
    dropped = set()
    for j in range(n + 1):
        labels = [f"v{i}_{j}" for i in range(1, dim + 1)]
        B = tb.B_y if j in replaced else tb.B_x
        for i in range(dim):
            lab = f"v{i + 1}_{j}"
            new_basis.append((lab, _vec_at(m, labels, B.column(i))))
            if j in replaced and i not in tb.kept:
                dropped.add(lab)
    parent = m.change_basis(new_basis, dict(m.provenance, tree_basis={"side": side, "index": idx, "kind": tb.kind}))
    kept = [l for l in parent.labels if l not in dropped]
    wit = verify_submodule(parent, kept)
    return SubmoduleWitness(parent, wit.kept, wit.codim, wit.closure,
                            {"kind": "sym_band", "side": side, "index": idx, "replaced": replaced,
                             "U_dim": len(tb.kept), "tree_type": tb.kind})


def band_submodule(m: ModuleRep, check_inner: bool = True) -> SubmoduleWitness:
    """Dispatch on the band type recorded in the provenance."""
    _, _, sym, _ = _band_data(m)
    if sym:
        return sym_band_planar_submodule(m, check_inner)
    if not m.presentation.special:
        return band_string_submodule(m)
    return asym_band_planar_submodule(m)
