"""Finite-dimensional representations with a labelled basis, and the
string/band module constructors.

Arrow actions are stored sparsely: ``action[arrow][b] = {b': c}`` means
``arrow(b) = sum c * b'``.  That is exactly the coefficient quiver.
"""

from __future__ import annotations

import json
from typing import Iterable, Mapping, Sequence

from .algebra import AlgebraPresentation
from .field import DEFAULT_FIELD, Field, GFElement
from .inner import LaurentModule, ScalarChoice, TwoIdempotentModule, inner_from_dict
from .linalg import Matrix
from .words import (DIRECT, SPECIAL, BandWord, Letter, StringWord, band_direction,
                    format_word, parse_word, string_direction, word_vertices)


class ModuleError(ValueError):
    pass


Vector = dict  # label -> coefficient, zero entries omitted


class ModuleRep:
    def __init__(self, presentation: AlgebraPresentation, field: Field,
                 basis: Sequence[tuple[str, str]], action: Mapping[str, Mapping[str, Mapping[str, object]]],
                 provenance: Mapping | None = None):
        self.presentation = presentation
        self.field = field
        self.basis = tuple((str(l), str(v)) for l, v in basis)
        self._vertex = dict(self.basis)
        if len(self._vertex) != len(self.basis):
            raise ModuleError("duplicate basis label")
        self._index = {l: i for i, (l, _) in enumerate(self.basis)}
        self.action: dict[str, dict[str, dict[str, object]]] = {}
        for a in presentation.arrows:
            cols = {}
            for b, img in action.get(a.id, {}).items():
                img = {t: field(c) for t, c in img.items() if field(c)}
                if not img:
                    continue
                if self._vertex.get(b) != a.source:
                    raise ModuleError(f"arrow {a.id} acts on {b}, which is not at {a.source}")
                for t in img:
                    if self._vertex.get(t) != a.target:
                        raise ModuleError(f"arrow {a.id} maps into {t}, which is not at {a.target}")
                cols[b] = img
            self.action[a.id] = cols
        unknown = set(action) - set(self.action)
        if unknown:
            raise ModuleError(f"actions for unknown arrows {sorted(unknown)}")
        self.provenance = dict(provenance or {})

    # -- basic data -------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def labels(self) -> list[str]:
        return [l for l, _ in self.basis]

    def vertex_of(self, label: str) -> str:
        return self._vertex[label]

    def index_of(self, label: str) -> int:
        return self._index[label]

    def labels_at(self, v: str) -> list[str]:
        return [l for l, w in self.basis if w == v]

    def dim_vector(self) -> dict[str, int]:
        return {v: len(self.labels_at(v)) for v in self.presentation.vertices}

    def apply(self, arrow: str, vec: Mapping[str, object]) -> Vector:
        out: dict[str, object] = {}
        cols = self.action[arrow]
        for b, c in vec.items():
            for t, x in cols.get(b, {}).items():
                out[t] = out.get(t, self.field.zero) + c * x
        return {t: x for t, x in out.items() if x}

    def _apply_residues(self, arrow: str, vec: Mapping[str, object]) -> dict[str, int]:
        """Like :meth:`apply` over GF(p), but on plain integers."""
        p = self.field.p
        out: dict[str, int] = {}
        cols = self.action[arrow]
        for b, c in vec.items():
            for t, x in cols.get(b, {}).items():
                out[t] = out.get(t, 0) + c.v * x.v
        return {t: x % p for t, x in out.items() if x % p}

    def apply_path(self, written: Sequence[str], vec: Mapping[str, object]) -> Vector:
        for a in reversed(written):
            vec = self.apply(a, vec)
        return vec

    def matrix(self, arrow: str) -> Matrix:
        a = self.presentation.arrow(arrow)
        rows, cols = self.labels_at(a.target), self.labels_at(a.source)
        ridx = {l: i for i, l in enumerate(rows)}
        m = [[self.field.zero] * len(cols) for _ in rows]
        for j, b in enumerate(cols):
            for t, x in self.action[arrow].get(b, {}).items():
                m[ridx[t]][j] = x
        return Matrix(m, self.field, len(cols))

    # -- checks -------------------------------------------------------------

    def relation_failures(self) -> list[str]:
        """Relations and special idempotent identities that do not hold."""
        bad = []
        p = self.presentation
        for r in sorted(p.relations):
            start = p.arrow(r[-1]).source
            for b in self.labels_at(start):
                if self.apply_path(r, {b: self.field.one}):
                    bad.append("relation " + "".join(r))
                    break
        for e in sorted(p.special):
            for b in self.labels_at(p.arrow(e).source):
                once = self.apply(e, {b: self.field.one})
                if self.apply(e, once) != once:
                    bad.append(f"{e}^2 != {e}")
                    break
        return bad

    def satisfies_relations(self) -> bool:
        return not self.relation_failures()

    # -- constructions ------------------------------------------------------

    def direct_sum(self, other: "ModuleRep", tags: tuple[str, str] = ("L", "R")) -> "ModuleRep":
        if other.presentation != self.presentation:
            raise ModuleError("direct sum of modules over different presentations")
        basis = [(f"{tags[0]}.{l}", v) for l, v in self.basis] + [(f"{tags[1]}.{l}", v) for l, v in other.basis]
        action = {}
        for a in self.presentation.arrows:
            cols = {}
            for tag, mod in zip(tags, (self, other)):
                for b, img in mod.action[a.id].items():
                    cols[f"{tag}.{b}"] = {f"{tag}.{t}": x for t, x in img.items()}
            action[a.id] = cols
        return ModuleRep(self.presentation, self.field, basis, action,
                         {"constructor": "direct_sum", "parts": [self.provenance, other.provenance]})

    def change_basis(self, new_basis: Sequence[tuple[str, Mapping[str, object]]],
                     provenance: Mapping | None = None) -> "ModuleRep":
        """Re-express the module in a new basis.

        ``new_basis`` lists ``(label, vector)`` with vectors in the current
        coordinates; each vector must live at a single vertex.
        """
        F = self.field
        if len(new_basis) != self.dim:
            raise ModuleError("new basis has the wrong size")
        vecs = {}
        verts = []
        for lab, vec in new_basis:
            vec = {b: F(c) for b, c in vec.items() if F(c)}
            vs = {self._vertex[b] for b in vec}
            if len(vs) != 1:
                raise ModuleError(f"basis vector {lab} is zero or not homogeneous")
            vecs[lab] = vec
            verts.append((lab, vs.pop()))
        coords = _block_inverse(self, vecs, verts)
        action = {}
        for a in self.presentation.arrows:
            cols = {}
            for lab, vec in vecs.items():
                if self._vertex[next(iter(vec))] != a.source:
                    continue
                img = self._apply_residues(a.id, vec) if F.p else self.apply(a.id, vec)
                if img:
                    cols[lab] = coords(img)
            action[a.id] = cols
        prov = dict(provenance or {})
        prov.setdefault("constructor", "base_change")
        prov["base_change"] = {"parent": self.provenance,
                               "vectors": {lab: {b: F.fmt(c) for b, c in vec.items()} for lab, vec in vecs.items()}}
        return ModuleRep(self.presentation, F, verts, action, prov)

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        F = self.field
        return {
            "presentation": self.presentation.name or None,
            "presentation_data": self.presentation.to_dict(),
            "field": F.name,
            "basis": [[l, v] for l, v in self.basis],
            "action": {a: [[b, t, F.fmt(x)] for b, img in sorted(cols.items()) for t, x in sorted(img.items())]
                       for a, cols in sorted(self.action.items())},
            "provenance": self.provenance,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)

    @classmethod
    def from_dict(cls, d: Mapping) -> "ModuleRep":
        F = Field.from_name(d["field"])
        p = AlgebraPresentation.from_dict(d["presentation_data"])
        action: dict = {}
        for a, entries in d["action"].items():
            cols = action.setdefault(a, {})
            for b, t, x in entries:
                cols.setdefault(b, {})[t] = F.parse(x)
        return cls(p, F, [tuple(x) for x in d["basis"]], action, d.get("provenance", {}))

    @classmethod
    def from_json(cls, text: str) -> "ModuleRep":
        return cls.from_dict(json.loads(text))

    def __eq__(self, other) -> bool:
        return (isinstance(other, ModuleRep) and self.presentation == other.presentation
                and self.field == other.field and self.basis == other.basis and self.action == other.action)

    def __repr__(self) -> str:
        tag = self.provenance.get("constructor", "module")
        return f"<ModuleRep {tag} dim={self.dim} {self.dim_vector()}>"


def _block_inverse(mod: ModuleRep, vecs: Mapping[str, Vector], verts):
    """Return a function mapping old-coordinate vectors to new coordinates."""
    F = mod.field
    # connected blocks of the support relation between old and new labels
    parent: dict = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for lab, vec in vecs.items():
        for b in vec:
            parent[find(("new", lab))] = find(("old", b))
    groups: dict = {}
    for lab in vecs:
        groups.setdefault(find(("new", lab)), ([], set()))[0].append(lab)
        for b in vecs[lab]:
            groups[find(("new", lab))][1].add(b)
    inv_of_old: dict[str, tuple] = {}
    for new_labs, olds in groups.values():
        olds = sorted(olds, key=mod.index_of)
        if len(olds) != len(new_labs):
            raise ModuleError("new basis is not a basis (block not square)")
        m = Matrix.from_columns([[vecs[l].get(b, F.zero) for b in olds] for l in new_labs], len(olds), F)
        try:
            inv = m.inverse()
        except ZeroDivisionError:
            raise ModuleError("new basis vectors are linearly dependent") from None
        for j, b in enumerate(olds):
            inv_of_old[b] = (new_labs, inv.column(j))
    covered = set(inv_of_old)
    if covered != set(mod.labels):
        raise ModuleError("new basis does not span the module")

    if F.p:
        p = F.p
        residues = {b: (labs, [x.v for x in col]) for b, (labs, col) in inv_of_old.items()}

        def coords_mod_p(vec: Mapping[str, int]) -> Vector:
            out: dict = {}
            for b, c in vec.items():
                labs, col = residues[b]
                for lab, x in zip(labs, col):
                    if x:
                        out[lab] = out.get(lab, 0) + c * x
            return {k: GFElement(v, p) for k, v in out.items() if v % p}

        return coords_mod_p

    def coords(vec: Mapping[str, object]) -> Vector:
        out: dict = {}
        for b, c in vec.items():
            labs, col = inv_of_old[b]
            for lab, x in zip(labs, col):
                if x:
                    out[lab] = out.get(lab, F.zero) + c * x
        return {k: v for k, v in out.items() if v}

    return coords


# -- the strip builder shared by all constructors --------------------------------

def _assemble(p: AlgebraPresentation, F: Field, spaces: list[tuple[str, list[str]]],
              links: list[tuple[Letter, int, int, str, Matrix | None]],
              loops: list[tuple[str, int, Matrix]], provenance: dict) -> ModuleRep:
    """``spaces[k] = (vertex, labels)``; each link joins spaces ``left``/``right``.

    A link with sign ``+`` maps the right space to the left one (and a
    special letter additionally fixes the left space); sign ``-`` maps left
    to right.  The optional matrix twists the transfer (band seam).
    """
    action: dict[str, dict[str, dict[str, object]]] = {a.id: {} for a in p.arrows}

    def add(arrow, src, tgt, c):
        col = action[arrow].setdefault(src, {})
        col[tgt] = col.get(tgt, F.zero) + c

    for let, left, right, sign, twist in links:
        src, tgt = (right, left) if sign == DIRECT else (left, right)
        slabs, tlabs = spaces[src][1], spaces[tgt][1]
        if twist is None:
            for s, t in zip(slabs, tlabs):
                add(let.arrow, s, t, F.one)
        else:
            for j, s in enumerate(slabs):
                for i, t in enumerate(tlabs):
                    if twist[i, j]:
                        add(let.arrow, s, t, twist[i, j])
        if let.kind == SPECIAL:
            for t in tlabs:
                add(let.arrow, t, t, F.one)
    for arrow, k, mat in loops:
        labs = spaces[k][1]
        for j, s in enumerate(labs):
            for i, t in enumerate(labs):
                if mat[i, j]:
                    add(arrow, s, t, mat[i, j])
    basis = [(l, v) for v, labs in spaces for l in labs]
    return ModuleRep(p, F, basis, action, provenance)


def _sign(let: Letter, d) -> str:
    if let.kind != SPECIAL:
        return let.kind
    if d is None:
        raise ModuleError(f"no direction for special letter {let.token}")
    return d


def build_string_module(p: AlgebraPresentation, s: StringWord, T: int | None = None,
                        field: Field = DEFAULT_FIELD) -> ModuleRep:
    """String module M(s) / S_w(k); symmetric strings need T in {0, 1}."""
    from .words import is_coadmissible, is_valid_word

    if not is_valid_word(p, s.letters):
        raise ModuleError(f"not a word: {s}")
    prov = {"constructor": "string", "word": format_word(s.letters), "vertex": s.vertex}
    if not s.symmetric:
        if not is_coadmissible(p, s.letters, s.vertex):
            raise ModuleError(f"not coadmissible: {s}")
        w = s.letters
        dirs = string_direction(w)
        verts = word_vertices(p, w, s.vertex)
        spaces = [(v, [f"v{j}"]) for j, v in enumerate(verts)]
        links = [(x, j, j + 1, _sign(x, dirs[j]), None) for j, x in enumerate(w)]
        return _assemble(p, field, spaces, links, [], prov)
    if T not in (0, 1):
        raise ModuleError("symmetric strings need T acting as 0 or 1")
    w = s.letters
    z = s.z
    dirs = string_direction(w)
    verts = word_vertices(p, z, w[len(z)].source(p)) if z else [s.center.source(p)]
    spaces = [(v, [f"v{j}"]) for j, v in enumerate(verts)]
    links = [(x, j, j + 1, _sign(x, dirs[j]), None) for j, x in enumerate(z)]
    loops = [(s.center.arrow, len(z), Matrix([[T]], field))]
    prov.update({"symmetric": True, "inner": ScalarChoice(T).to_dict()})
    return _assemble(p, field, spaces, links, loops, prov)


def build_band_module(p: AlgebraPresentation, b: BandWord,
                      inner: LaurentModule | TwoIdempotentModule | Matrix,
                      field: Field | None = None) -> ModuleRep:
    """Band module; the band letters are used in the given rotation."""
    from .words import is_band_word

    if not is_band_word(p, b.letters):
        raise ModuleError(f"not a band: {b}")
    if isinstance(inner, Matrix):
        inner = LaurentModule(inner)
    F = field or inner.field
    if inner.field != F:
        raise ModuleError("inner module lives over a different field")
    prov = {"constructor": "band", "word": format_word(b.letters), "symmetric": b.symmetric,
            "inner": inner.to_dict()}
    m = inner.dim
    w = b.letters
    dirs = band_direction(w)
    if not b.symmetric:
        if not isinstance(inner, LaurentModule):
            raise ModuleError("asymmetric bands take a LaurentModule")
        n = len(w)
        verts = word_vertices(p, w)[:n]
        spaces = [(v, [f"v{i}_{j}" for i in range(1, m + 1)]) for j, v in enumerate(verts)]
        links = []
        for j, x in enumerate(w, start=1):
            sign = _sign(x, dirs[j - 1])
            twist = None
            if j == 1:
                twist = inner.phi if sign == DIRECT else inner.phi.inverse()
            links.append((x, j - 1, j % n, sign, twist))
        return _assemble(p, F, spaces, links, [], prov)
    if not isinstance(inner, TwoIdempotentModule):
        raise ModuleError("symmetric bands take a TwoIdempotentModule")
    n = b.half
    z = b.z
    offset = n + 2
    verts = word_vertices(p, z) if z else [b.g.source(p)]
    spaces = [(v, [f"v{i}_{j}" for i in range(1, m + 1)]) for j, v in enumerate(verts)]
    links = [(x, j, j + 1, _sign(x, dirs[offset + j]), None) for j, x in enumerate(z)]
    loops = [(b.g.arrow, 0, inner.psi), (b.f.arrow, n, inner.phi)]
    return _assemble(p, F, spaces, links, loops, prov)


def rotate_band(b: BandWord, k: int) -> BandWord:
    """The same band read from position k (asymmetric bands only)."""
    if b.symmetric:
        raise ModuleError("symmetric bands keep their f* z^- g* z rotation")
    w = b.letters
    k %= len(w)
    return BandWord(w[k:] + w[:k], False)


def rebuild(d: Mapping, p: AlgebraPresentation, field: Field) -> ModuleRep:
    """Rebuild a module from its provenance record (string/band constructors)."""
    from .words import classify_string

    kind = d.get("constructor")
    if kind == "string":
        w = parse_word(p, d["word"])
        if d.get("symmetric"):
            s = StringWord(w, d["vertex"], True)
            return build_string_module(p, s, d["inner"]["T"], field)
        return build_string_module(p, classify_string(p, w, d["vertex"]) if not w else
                                   StringWord(w, d["vertex"], False), None, field)
    if kind == "band":
        w = parse_word(p, d["word"])
        inner = inner_from_dict(d["inner"], field)
        return build_band_module(p, BandWord(w, bool(d.get("symmetric"))), inner, field)
    raise ModuleError(f"cannot rebuild constructor {kind!r}")


def basis_vectors(mod: ModuleRep, labels: Iterable[str]) -> list[Vector]:
    return [{l: mod.field.one} for l in labels]
