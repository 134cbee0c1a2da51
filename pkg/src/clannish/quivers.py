"""Coefficient quivers, mapping quivers, planarity certificates, DOT export."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

import networkx as nx

from .algebra import AlgebraPresentation
from .field import Field
from .linalg import Matrix
from .modules import ModuleRep


@dataclass(frozen=True)
class QArrow:
    source: str
    target: str
    arrow: str
    coeff: str

    @property
    def is_loop(self) -> bool:
        return self.source == self.target


@dataclass(frozen=True)
class CoefficientQuiver:
    vertices: tuple
    vertex_of: dict = dc_field(compare=False)
    arrows: tuple = ()

    def graph(self) -> nx.Graph:
        """Underlying simple graph: loops dropped, parallel edges merged."""
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from((a.source, a.target) for a in self.arrows if not a.is_loop)
        return g

    def multigraph(self) -> nx.MultiDiGraph:
        g = nx.MultiDiGraph()
        g.add_nodes_from(self.vertices)
        for a in self.arrows:
            g.add_edge(a.source, a.target, arrow=a.arrow, coeff=a.coeff)
        return g

    @property
    def non_loop_arrows(self) -> list[QArrow]:
        return [a for a in self.arrows if not a.is_loop]

    def is_connected(self) -> bool:
        return len(self.vertices) == 0 or nx.is_connected(self.graph())

    def is_tree(self) -> bool:
        """Connected with exactly |V| - 1 non-loop arrows (loops ignored)."""
        if not self.vertices:
            return False
        return self.is_connected() and len(self.non_loop_arrows) == len(self.vertices) - 1

    def degree_stats(self) -> tuple[int, int, int]:
        """(max indegree, max outdegree, max degree); a loop adds one to each of in and out."""
        ind = {v: 0 for v in self.vertices}
        out = {v: 0 for v in self.vertices}
        for a in self.arrows:
            out[a.source] += 1
            ind[a.target] += 1
        deg = {v: ind[v] + out[v] for v in self.vertices}
        if not self.vertices:
            return (0, 0, 0)
        return (max(ind.values()), max(out.values()), max(deg.values()))

    def planarity(self) -> "PlanarityCertificate":
        return planarity(self)

    def to_module(self, presentation: AlgebraPresentation, field: Field, provenance=None) -> ModuleRep:
        action: dict = {}
        for a in self.arrows:
            action.setdefault(a.arrow, {}).setdefault(a.source, {})[a.target] = field.parse(a.coeff)
        basis = [(v, self.vertex_of[v]) for v in self.vertices]
        return ModuleRep(presentation, field, basis, action, provenance)

    def to_dot(self, coefficients: bool = False, name: str = "M") -> str:
        return to_dot(self, coefficients, name)


def coefficient_quiver(m: ModuleRep) -> CoefficientQuiver:
    F = m.field
    arrows = []
    for a in sorted(m.action):
        for b, img in m.action[a].items():
            for t, c in img.items():
                arrows.append(QArrow(b, t, a, F.fmt(c)))
    order = {l: i for i, l in enumerate(m.labels)}
    arrows.sort(key=lambda q: (order[q.source], order[q.target], q.arrow))
    return CoefficientQuiver(tuple(m.labels), dict(m.basis), tuple(arrows))


# -- mapping quivers ---------------------------------------------------------------

@dataclass(frozen=True)
class MappingQuiver:
    left: tuple
    right: tuple
    edges: tuple  # (left label, right label, coefficient)

    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(("L", x) for x in self.left)
        g.add_nodes_from(("R", y) for y in self.right)
        g.add_edges_from((("L", a), ("R", b)) for a, b, _ in self.edges)
        return g

    def is_tree(self) -> bool:
        g = self.graph()
        g.remove_nodes_from([v for v in list(g) if g.degree(v) == 0])
        return g.number_of_nodes() > 0 and nx.is_connected(g) and g.number_of_edges() == g.number_of_nodes() - 1

    def is_forest(self) -> bool:
        return nx.is_forest(self.graph())

    def max_degree(self) -> int:
        g = self.graph()
        return max((d for _, d in g.degree()), default=0)


def mapping_quiver(f: Matrix, B_M: Sequence[str], B_N: Sequence[str]) -> MappingQuiver:
    """Edge b -> b' whenever the b'-coordinate of f(b) is nonzero."""
    if f.shape != (len(B_N), len(B_M)):
        raise ValueError(f"matrix shape {f.shape} does not match bases ({len(B_N)}, {len(B_M)})")
    edges = tuple((B_M[j], B_N[i], f.field.fmt(f[i, j]))
                  for j in range(len(B_M)) for i in range(len(B_N)) if f[i, j])
    return MappingQuiver(tuple(B_M), tuple(B_N), edges)


def is_tree_map(f: Matrix, B_M: Sequence[str], B_N: Sequence[str]) -> bool:
    return mapping_quiver(f, B_M, B_N).is_tree()


# -- planarity ----------------------------------------------------------------------

@dataclass(frozen=True)
class PlanarityCertificate:
    planar: bool
    rotation: dict  # node -> clockwise neighbour list (simple graph)
    loops: tuple = ()  # (node, multiplicity) re-attached after testing
    parallel: tuple = ()  # (u, v, multiplicity) for merged edges
    witness: tuple = ()  # Kuratowski subdivision edges when nonplanar
    witness_kind: str = ""

    def verify(self) -> bool:
        if self.planar:
            return _check_embedding(self.rotation)
        return _check_kuratowski(self.witness) == self.witness_kind != ""


def planarity(q: CoefficientQuiver | nx.Graph) -> PlanarityCertificate:
    if isinstance(q, CoefficientQuiver):
        g = q.graph()
        loops: dict = {}
        par: dict = {}
        for a in q.arrows:
            if a.is_loop:
                loops[a.source] = loops.get(a.source, 0) + 1
            else:
                key = tuple(sorted((a.source, a.target)))
                par[key] = par.get(key, 0) + 1
        loops_t = tuple(sorted(loops.items()))
        par_t = tuple(sorted((u, v, k) for (u, v), k in par.items() if k > 1))
    else:
        g = nx.Graph(q)
        g.remove_edges_from(list(nx.selfloop_edges(g)))
        loops_t, par_t = (), ()
    ok, cert = nx.check_planarity(g, counterexample=True)
    if ok:
        rot = {v: list(cert.neighbors_cw_order(v)) for v in cert.nodes}
        return PlanarityCertificate(True, rot, loops_t, par_t)
    wit = tuple(sorted(tuple(sorted(e, key=str)) for e in cert.edges()))
    return PlanarityCertificate(False, {}, loops_t, par_t, wit, _check_kuratowski(wit))


def _check_embedding(rotation: dict) -> bool:
    """Trace faces of a rotation system and check Euler's formula per component."""
    darts = {(u, v) for u, nbrs in rotation.items() for v in nbrs}
    for u, v in darts:
        if (v, u) not in darts:
            return False
    pos = {u: {v: i for i, v in enumerate(nbrs)} for u, nbrs in rotation.items()}
    seen: set = set()
    faces = 0
    for d in darts:
        if d in seen:
            continue
        faces += 1
        cur = d
        while cur not in seen:
            seen.add(cur)
            u, v = cur
            # next dart: at v, take the neighbour after u in clockwise order
            nbrs = rotation[v]
            w = nbrs[(pos[v][u] + 1) % len(nbrs)]
            cur = (v, w)
    g = nx.Graph()
    g.add_nodes_from(rotation)
    g.add_edges_from(darts)
    V, E = g.number_of_nodes(), g.number_of_edges()
    comps = nx.number_connected_components(g) if V else 0
    isolated = sum(1 for v in g if g.degree(v) == 0)
    # each non-trivial component contributes V - E + F = 2; isolated vertices add no darts
    nontrivial = comps - isolated
    return V - isolated - E + faces == 2 * nontrivial


def _check_kuratowski(edges: Sequence[tuple]) -> str:
    """'K5' or 'K3,3' if the edge set is a subdivision of that graph, else ''."""
    g = nx.Graph()
    g.add_edges_from(edges)
    h = g.copy()
    changed = True
    while changed:
        changed = False
        for v in list(h.nodes):
            if h.degree(v) == 2:
                a, b = list(h.neighbors(v))
                if a != b and not h.has_edge(a, b):
                    h.remove_node(v)
                    h.add_edge(a, b)
                    changed = True
    if h.number_of_nodes() == 5 and h.number_of_edges() == 10:
        return "K5"
    if h.number_of_nodes() == 6 and h.number_of_edges() == 9 and all(d == 3 for _, d in h.degree()):
        if nx.is_connected(h) and nx.is_bipartite(h):
            if all(len(p) == 3 for p in nx.bipartite.sets(h)):
                return "K3,3"
    return ""


# -- DOT ----------------------------------------------------------------------------

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
            "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


def to_dot(q: CoefficientQuiver, coefficients: bool = False, name: str = "M") -> str:
    ids = sorted({a.arrow for a in q.arrows})
    color = {a: _PALETTE[i % len(_PALETTE)] for i, a in enumerate(ids)}
    lines = [f'digraph "{name}" {{']
    for v in sorted(q.vertices):
        lines.append(f'  "{v}" [label="{v}", vertex="{q.vertex_of.get(v, "")}"];')
    for a in sorted(q.arrows, key=lambda a: (a.source, a.target, a.arrow, a.coeff)):
        lab = f"{a.arrow}:{a.coeff}" if coefficients else a.arrow
        lines.append(f'  "{a.source}" -> "{a.target}" [label="{lab}", color="{color[a.arrow]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def parse_dot_edges(text: str) -> list[tuple[str, str, str]]:
    """Read back (source, target, label) triples from :func:`to_dot` output."""
    import re

    pat = re.compile(r'^\s*"([^"]*)"\s*->\s*"([^"]*)"\s*\[label="([^"]*)"')
    return [m.groups() for m in map(pat.match, text.splitlines()) if m]
