"""Hyperfiniteness witnesses: a large submodule N of M, spanned by a basis
subset, that splits along connected components into small summands."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import networkx as nx

from .algebra import AlgebraPresentation, path_length_bound
from .fragmentation import (Certification, longest_directed_path, max_in_neighbours, planar_fragment,
                            predecessor_closure)
from .modules import ModuleError, ModuleRep
from .quivers import coefficient_quiver
from .submodules import band_submodule, restrict

FORMAT = "clannish-hyperfinite-witness/1"


class WitnessError(ValueError):
    pass


def parse_eps(eps) -> Fraction:
    e = Fraction(eps) if not isinstance(eps, str) else Fraction(eps.strip())
    if not 0 < e < 1:
        raise WitnessError(f"eps must lie strictly between 0 and 1 (got {e})")
    return e


def fmt_frac(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def module_id(m: ModuleRep) -> str:
    blob = json.dumps(m.to_dict(), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


@dataclass
class HyperfinitenessWitness:
    eps: Fraction
    L: int
    module: ModuleRep
    kept: tuple
    summands: tuple
    basis_change: dict | None = None  # parent label -> {module label: coeff string}
    intermediate: dict = dc_field(default_factory=dict)

    @property
    def dim_N(self) -> int:
        return len(self.kept)

    def parent(self) -> ModuleRep:
        return _parent(self.module, self.basis_change)

    def to_dict(self) -> dict:
        return {
            "format": FORMAT,
            "presentation": self.module.presentation.name,
            "module_id": module_id(self.module),
            "provenance": self.module.provenance,
            "eps": fmt_frac(self.eps),
            "L": self.L,
            "dim_M": self.module.dim,
            "dim_N": self.dim_N,
            "kept": list(self.kept),
            "summands": [list(s) for s in self.summands],
            "basis_change": self.basis_change,
            "intermediate": self.intermediate,
            "module": self.module.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_dict(cls, d: dict) -> "HyperfinitenessWitness":
        if d.get("format") != FORMAT:
            raise WitnessError(f"unknown witness format {d.get('format')!r}")
        M = ModuleRep.from_dict(d["module"])
        return cls(Fraction(d["eps"]), int(d["L"]), M, tuple(d["kept"]),
                   tuple(tuple(s) for s in d["summands"]), d.get("basis_change"), d.get("intermediate", {}))

    @classmethod
    def from_json(cls, text: str) -> "HyperfinitenessWitness":
        return cls.from_dict(json.loads(text))


def _parent(M: ModuleRep, change: dict | None) -> ModuleRep:
    if change is None:
        return M
    F = M.field
    vecs = [(lab, {b: F.parse(c) for b, c in vec.items()}) for lab, vec in change.items()]
    return M.change_basis(vecs)


# -- verification ------------------------------------------------------------------------

def verify_witness(M: ModuleRep, w: HyperfinitenessWitness) -> Certification:
    """Re-check a witness against M with linear algebra and graph traversal only."""
    if not 0 < w.eps < 1:
        return Certification(False, "eps")
    if w.module != M:
        return Certification(False, "module mismatch")
    try:
        P = _parent(M, w.basis_change)
    except (ModuleError, KeyError, ValueError) as exc:
        return Certification(False, f"basis: {exc}")
    labels = set(P.labels)
    kept = list(w.kept)
    if len(set(kept)) != len(kept) or not set(kept) <= labels:
        return Certification(False, "kept set")
    flat = [b for s in w.summands for b in s]
    if len(flat) != len(set(flat)) or set(flat) != set(kept):
        return Certification(False, "partition")
    where = {b: i for i, s in enumerate(w.summands) for b in s}
    for a, cols in P.action.items():
        for b in kept:
            for t in cols.get(b, {}):
                if t not in where:
                    return Certification(False, f"submodule: {a}·{b} leaves N")
                if where[t] != where[b]:
                    return Certification(False, f"direct summands: {a}·{b} crosses summands")
    if Fraction(len(kept)) < (1 - w.eps) * M.dim:
        return Certification(False, "dimension")
    for s in w.summands:
        if len(s) > w.L:
            return Certification(False, "summand bound")
    return Certification(True)


# -- the pipeline -------------------------------------------------------------------------

def codim_bound(M: ModuleRep) -> int:
    """H: the codimension allowed for the planar submodule step (0 for strings)."""
    prov = M.provenance
    if prov.get("constructor") != "band":
        return 0
    if prov.get("symmetric"):
        return path_length_bound(M.presentation)
    return 1


def whole_witness(M: ModuleRep, eps: Fraction, reason: str) -> HyperfinitenessWitness:
    return HyperfinitenessWitness(eps, max(1, M.dim), M, tuple(M.labels), (tuple(M.labels),) if M.dim else (),
                                  None, {"method": "whole", "reason": reason})


def witness(M: ModuleRep, eps, H: int | None = None, submodule=None) -> HyperfinitenessWitness:
    """Build a witness for M; ``submodule`` may pass a precomputed band submodule."""
    eps = parse_eps(eps)
    is_band = M.provenance.get("constructor") == "band"
    H = codim_bound(M) if H is None else H
    if M.dim == 0:
        raise WitnessError("zero module")
    if is_band and M.dim <= Fraction(2 * H) / eps:
        return whole_witness(M, eps, "dim M <= 2H/eps")
    inter: dict = {"method": "pipeline", "H": H}
    if is_band:
        W = submodule or band_submodule(M)
        parent, N0 = W.parent, list(W.kept)
        if W.codim > H:
            raise WitnessError(f"band submodule codimension {W.codim} exceeds H = {H}")
        eps1 = eps / 2
        change = W.parent.provenance["base_change"]["vectors"]
        inter["submodule"] = {"codim": W.codim, "dim": len(N0), **{k: v for k, v in W.notes.items()
                                                                   if isinstance(v, (int, str, list))}}
    else:
        parent, N0, eps1, change = M, list(M.labels), eps, None
    N = restrict(parent, N0)
    q = coefficient_quiver(N)
    d = max_in_neighbours(q)
    ell = longest_directed_path(q)
    if ell is None:
        raise WitnessError("coefficient quiver has a directed cycle")
    growth = sum(d ** i for i in range(ell + 1))
    eps_t = eps1 / growth
    frag = planar_fragment(q, min(eps_t, Fraction(1)))
    clos = predecessor_closure(q, frag.removed, ell)
    if not clos.successor_closed:
        raise WitnessError("predecessor closure is not successor-closed")
    gone = set(clos.closure)
    kept = [b for b in N.labels if b not in gone]
    g = q.graph().subgraph(kept)
    order = {b: i for i, b in enumerate(N.labels)}
    comps = sorted((sorted(c, key=order.get) for c in nx.connected_components(g)), key=lambda c: order[c[0]])
    L = frag.C
    if is_band:
        L = max(L, math.floor(Fraction(2 * H) / eps))
    inter.update({
        "eps_prime": fmt_frac(eps1), "d": d, "ell": ell, "growth": growth, "eps_tilde": fmt_frac(eps_t),
        "fragmentation": {"method": frag.method, "C": frag.C, "K": fmt_frac(frag.K), "removed": len(frag.removed)},
        "closure_size": len(gone), "dim_N0": len(N0), "dim_Y": len(kept),
    })
    if is_band:
        bound = M.dim - H - eps / 2 * M.dim
        inter["chain"] = {"dim_M": M.dim, "H": H, "dim_Y": len(kept), "bound": fmt_frac(bound),
                          "holds": Fraction(len(kept)) >= bound}
    return HyperfinitenessWitness(eps, L, M, tuple(kept), tuple(tuple(c) for c in comps), change, inter)


def chain_holds(w: HyperfinitenessWitness) -> bool:
    """dim Y >= dim M - H - (eps/2) dim M >= (1 - eps) dim M, exactly."""
    c = w.intermediate.get("chain")
    if c is None:
        return True
    M = c["dim_M"]
    bound = M - c["H"] - w.eps / 2 * M
    ok = Fraction(c["dim_Y"]) >= bound
    if M > Fraction(2 * c["H"]) / w.eps:
        ok = ok and bound >= (1 - w.eps) * M
    return ok


# -- families ---------------------------------------------------------------------------

@dataclass
class FamilySpec:
    """A finite family: explicit modules, or a generator callable."""

    presentation: AlgebraPresentation
    modules: Sequence[ModuleRep] | None = None
    generator: object = None  # callable returning an iterator of ModuleRep
    description: str = ""
    budget: int | None = None

    def __iter__(self) -> Iterator[ModuleRep]:
        if self.modules is not None:
            yield from self.modules
        elif self.generator is not None:
            yield from self.generator()


@dataclass
class FamilyWitness:
    eps: Fraction
    L: int
    witnesses: list
    complete: bool = True
    bounded_shortcut: bool = False


def family_witness(f: FamilySpec | Iterable[ModuleRep], eps, cache: dict | None = None) -> FamilyWitness:
    """Witnesses for every member with a single uniform L."""
    eps = parse_eps(eps)
    budget = getattr(f, "budget", None)
    mods = []
    complete = True
    for i, M in enumerate(f):
        if budget is not None and i >= budget:
            complete = False
            break
        mods.append(M)
    if not mods:
        return FamilyWitness(eps, 1, [], complete)
    ws = []
    for M in mods:
        sub = None
        if cache is not None and M.provenance.get("constructor") == "band":
            key = id(M)
            if key not in cache:
                cache[key] = band_submodule(M)
            sub = cache[key]
        ws.append(witness(M, eps, submodule=sub))
    return uniform_family(mods, ws, eps, complete)


def uniform_family(mods: Sequence[ModuleRep], ws: list, eps, complete: bool = True) -> FamilyWitness:
    """Raise every witness to the family maximum L; small families use whole modules."""
    eps = parse_eps(eps)
    if not mods:
        return FamilyWitness(eps, 1, [], complete)
    L = max(w.L for w in ws)
    K = max(M.dim for M in mods)
    shortcut = K <= L
    if shortcut:
        ws = [whole_witness(M, eps, "bounded family") for M in mods]
        L = K
    for w in ws:
        w.L = L
    ws = sorted(ws, key=lambda w: module_id(w.module))
    return FamilyWitness(eps, L, ws, complete, shortcut)
