"""Fragmenting planar graphs, and predecessor closure of cut sets."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Hashable, Iterable, Sequence

import networkx as nx

from .quivers import CoefficientQuiver, planarity


class FragmentationError(ValueError):
    def __init__(self, msg: str, witness=()):
        super().__init__(msg)
        self.witness = witness


@dataclass(frozen=True)
class FragmentationResult:
    removed: tuple
    components: tuple  # tuple of sorted vertex tuples
    eps: Fraction
    C: int
    n0: int
    method: str
    K: Fraction = Fraction(0)

    @property
    def max_component(self) -> int:
        return max((len(c) for c in self.components), default=0)

    def to_dict(self) -> dict:
        return {"removed": [str(v) for v in self.removed],
                "components": [[str(v) for v in c] for c in self.components],
                "eps": f"{self.eps.numerator}/{self.eps.denominator}", "C": self.C, "n0": self.n0,
                "method": self.method, "K": f"{Fraction(self.K).numerator}/{Fraction(self.K).denominator}"}


class Certification:
    def __init__(self, ok: bool, reason: str = ""):
        self.ok = ok
        self.reason = reason

    def __bool__(self) -> bool:
        return self.ok

    def __repr__(self) -> str:
        return "Certification(ok)" if self.ok else f"Certification(failed: {self.reason})"


def _key(v):
    return (str(type(v)), str(v))


def _components(g: nx.Graph, removed: set) -> tuple:
    h = g.subgraph([v for v in g if v not in removed])
    comps = [tuple(sorted(c, key=_key)) for c in nx.connected_components(h)]
    return tuple(sorted(comps, key=lambda c: (-len(c), _key(c[0]))))


def certify_fragmentation(g: nx.Graph, result: FragmentationResult) -> Certification:
    """Recompute the components of G - X and check both inequalities."""
    X = set(result.removed)
    if not X <= set(g.nodes):
        return Certification(False, "removed set contains unknown vertices")
    n = g.number_of_nodes()
    if Fraction(len(X)) > result.eps * n:
        return Certification(False, f"|X| = {len(X)} exceeds eps*n = {result.eps * n}")
    for c in _components(g, X):
        if len(c) > result.C:
            return Certification(False, f"component containing {c[0]!r} has {len(c)} > C = {result.C} vertices")
    return Certification(True)


# -- path / cycle cutter -------------------------------------------------------------

def _gap(eps: Fraction, cyclic: bool) -> int:
    """Largest allowed run between cuts: every (k+1)-th vertex is removed."""
    t = 2 / eps if cyclic else 1 / eps
    return max(1, math.ceil(t) - 1)


def _order_path(g: nx.Graph, comp) -> tuple[list, bool]:
    sub = g.subgraph(comp)
    ends = [v for v in sub if sub.degree(v) <= 1]
    cyclic = not ends
    start = min(ends or list(sub), key=_key)
    order, prev, cur = [start], None, start
    while True:
        nxt = [w for w in sorted(sub.neighbors(cur), key=_key) if w != prev and w not in order[-2:]]
        if not nxt or nxt[0] == start:
            break
        prev, cur = cur, nxt[0]
        order.append(cur)
    return order, cyclic


def _equidistant(g: nx.Graph, eps: Fraction) -> FragmentationResult:
    comps = list(nx.connected_components(g))
    shapes = [_order_path(g, c) for c in comps]
    cyclic_any = any(cyc for _, cyc in shapes)
    k = _gap(eps, cyclic_any)
    removed = []
    for order, cyc in shapes:
        if len(order) <= k:
            continue
        start = 0 if cyc else k
        removed.extend(order[start::k + 1])
    X = set(removed)
    return FragmentationResult(tuple(sorted(X, key=_key)), _components(g, X), eps, k, k, "equidistant")


# -- planar separators ----------------------------------------------------------------

def _bfs_levels(g: nx.Graph, root) -> list[list]:
    dist = nx.single_source_shortest_path_length(g, root)
    h = max(dist.values())
    levels: list[list] = [[] for _ in range(h + 1)]
    for v, d in dist.items():
        levels[d].append(v)
    return levels


def _balanced(g: nx.Graph, sep: set, limit: float) -> bool:
    return all(len(c) <= limit for c in nx.connected_components(g.subgraph([v for v in g if v not in sep])))


def _cycle_separator(g: nx.Graph, levels: list[list], l0: int, l2: int) -> set | None:
    """Fundamental-cycle separator of the middle levels (LT second phase)."""
    low = [v for i in range(0, l0 + 1) for v in levels[i]] if l0 >= 0 else []
    middle = [v for i in range(l0 + 1, l2) for v in levels[i]]
    if not middle:
        return None
    rho = ("__root__",)
    h = nx.Graph()
    h.add_nodes_from(middle)
    mid = set(middle)
    for u, v in g.subgraph(middle).edges:
        h.add_edge(u, v)
    if low:
        h.add_node(rho)
        for u in levels[l0]:
            for w in g.neighbors(u):
                if w in mid:
                    h.add_edge(rho, w)
        root = rho
    else:
        root = levels[0][0]
    if not nx.is_connected(h):
        return None
    ok, emb = nx.check_planarity(h)
    if not ok:
        return None
    # stellate every face with a weight-0 dummy vertex
    faces = []
    seen = set()
    for u, v in emb.edges():
        if (u, v) in seen:
            continue
        f = emb.traverse_face(u, v, mark_half_edges=seen)
        faces.append(f)
    t = h.copy()
    for i, f in enumerate(faces):
        d = ("__face__", i)
        for v in dict.fromkeys(f):
            t.add_edge(d, v)
    ok, emb2 = nx.check_planarity(t)
    if not ok:
        return None
    weight = {v: (1 if v in mid else 0) for v in t}
    # BFS tree from the root
    parent = {root: None}
    depth = {root: 0}
    q = deque([root])
    while q:
        u = q.popleft()
        for w in emb2.neighbors_cw_order(u):
            if w not in parent:
                parent[w] = u
                depth[w] = depth[u] + 1
                q.append(w)
    tree = {frozenset((u, p)) for u, p in parent.items() if p is not None}
    # faces of the stellated embedding and the cotree
    face_of = {}
    flist = []
    for u, v in emb2.edges():
        if (u, v) in face_of:
            continue
        marked: set = set()
        emb2.traverse_face(u, v, mark_half_edges=marked)
        idx = len(flist)
        flist.append(marked)
        for he in marked:
            face_of[he] = idx
    rep = {}
    for (u, v), fi in face_of.items():
        rep.setdefault(u, fi)
    cot: dict[int, list] = {i: [] for i in range(len(flist))}
    nontree = []
    for u, v in t.edges():
        if frozenset((u, v)) in tree:
            continue
        a, b = face_of[(u, v)], face_of[(v, u)]
        cot[a].append((b, (u, v)))
        cot[b].append((a, (u, v)))
        nontree.append((u, v))
    # root the cotree, Euler tour, subtree sums
    A = [0] * len(flist)
    for v, fi in rep.items():
        A[fi] += weight[v]
    tin, tout, S = {}, {}, A[:]
    par_edge = {}
    order = []
    stack = [(0, None)]
    visited = set()
    clock = 0
    while stack:
        f, pe = stack.pop()
        if f in visited:
            continue
        visited.add(f)
        par_edge[f] = pe
        tin[f] = clock
        clock += 1
        order.append(f)
        for nb, e in cot[f]:
            if nb not in visited:
                stack.append((nb, (f, e)))
    if len(visited) != len(flist):
        return None
    # tout via reverse order sizes
    size = {f: 1 for f in order}
    for f in reversed(order):
        pe = par_edge[f]
        if pe is not None:
            size[pe[0]] += size[f]
            S[pe[0]] += S[f]
    for f in order:
        tout[f] = tin[f] + size[f]
    child_of = {}
    for f, pe in par_edge.items():
        if pe is not None:
            child_of[frozenset(pe[1])] = f
    total = sum(weight.values())
    best = None
    for u, v in nontree:
        c = child_of.get(frozenset((u, v)))
        if c is None:
            continue
        # cycle = tree paths u..lca..v
        pu, pv = [u], [v]
        a, b = u, v
        while depth[a] > depth[b]:
            a = parent[a]
            pu.append(a)
        while depth[b] > depth[a]:
            b = parent[b]
            pv.append(b)
        while a != b:
            a, b = parent[a], parent[b]
            pu.append(a)
            pv.append(b)
        cyc = set(pu) | set(pv)
        wc = sum(weight[x] for x in cyc)
        inside = S[c] - sum(weight[x] for x in cyc if tin[c] <= tin[rep[x]] < tout[c])
        outside = total - wc - inside
        score = (max(inside, outside), wc)
        if best is None or score < best[0]:
            best = (score, cyc)
    if best is None:
        return None
    return {x for x in best[1] if x in mid}


def _separator(g: nx.Graph) -> set:
    n = g.number_of_nodes()
    start = min(g.nodes, key=_key)
    far = _bfs_levels(g, start)[-1]
    root = min(far, key=_key)
    levels = _bfs_levels(g, root)
    cum, l1 = 0, 0
    for i, L in enumerate(levels):
        cum += len(L)
        if cum >= n / 2:
            l1 = i
            break
    limit = 2 * n / 3
    cands = [set(levels[l1])]
    k = sum(len(levels[i]) for i in range(l1 + 1))
    h = len(levels) - 1
    l0 = min(range(-1, l1 + 1), key=lambda l: (len(levels[l]) if l >= 0 else 0) + 2 * (l1 - l))
    l2 = min(range(l1 + 1, h + 2), key=lambda l: (len(levels[l]) if l <= h else 0) + 2 * (l - l1 - 1))
    base = set(levels[l0] if l0 >= 0 else []) | set(levels[l2] if l2 <= h else [])
    middle = sum(len(levels[i]) for i in range(l0 + 1, min(l2, h + 1)))
    if middle <= limit and base:
        cands.append(base)
    else:
        cyc = _cycle_separator(g, levels, l0, min(l2, h + 1))
        if cyc is not None:
            cands.append(base | cyc)
    good = [s for s in cands if s and _balanced(g, s, limit)]
    del k
    return min(good, key=len) if good else cands[0]


class _SeparatorTree:
    """Lazily built recursive separator decomposition; X(C) is monotone in C."""

    def __init__(self, g: nx.Graph):
        self.g = g
        self.kids: dict = {}

    def _split(self, comp: frozenset):
        if comp not in self.kids:
            sub = self.g.subgraph(comp)
            sep = _separator(sub)
            rest = sub.subgraph(comp - sep)
            self.kids[comp] = (sep, [frozenset(c) for c in nx.connected_components(rest)])
        return self.kids[comp]

    def removed(self, C: int) -> set:
        X: set = set()
        work = [frozenset(c) for c in nx.connected_components(self.g)]
        while work:
            comp = work.pop()
            if len(comp) <= C:
                continue
            sep, parts = self._split(comp)
            X |= sep
            work.extend(parts)
        return X


def _recursive_fragment(g: nx.Graph, C: int) -> set:
    return _SeparatorTree(g).removed(C)


def _simple(g) -> nx.Graph:
    if isinstance(g, CoefficientQuiver):
        return g.graph()
    h = nx.Graph(g)
    h.remove_edges_from(list(nx.selfloop_edges(h)))
    return h


_K_SCHEDULE = tuple(
    Fraction(k, 16) for k in (1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64, 96, 128, 192, 256, 384, 512))


def planar_fragment(g, eps, K_schedule: Sequence[int] | None = None) -> FragmentationResult:
    """Remove at most eps*n vertices so that all components are bounded.

    Graphs of maximum degree 2 are cut equidistantly; other planar graphs use
    recursive separators with C = ceil(K^2 / eps^2) for the first K in an
    increasing schedule that certifies.
    """
    eps = Fraction(eps)
    if not 0 < eps <= 1:
        raise FragmentationError("eps must lie in (0, 1]")
    g = _simple(g)
    cert = planarity(g)
    if not cert.planar:
        raise FragmentationError(f"graph is not planar ({cert.witness_kind} subdivision)", cert.witness)
    n = g.number_of_nodes()
    if n == 0:
        return FragmentationResult((), (), eps, 1, 1, "empty")
    if max(d for _, d in g.degree()) <= 2:
        return _equidistant(g, eps)
    biggest = max(len(c) for c in nx.connected_components(g))
    schedule = [Fraction(k) for k in (K_schedule or _K_SCHEDULE)]
    Cs = [max(1, math.ceil(K * K / (eps * eps))) for K in schedule]
    tree = _SeparatorTree(g)
    memo: dict = {}

    def cut(i):
        if i not in memo:
            memo[i] = set() if Cs[i] >= biggest else tree.removed(Cs[i])
        return memo[i]

    # |X(C)| shrinks as C grows, so the first certifying K is found by bisection
    lo, hi = 0, len(schedule)
    while lo < hi:
        mid = (lo + hi) // 2
        if len(cut(mid)) <= eps * n:
            hi = mid
        else:
            lo = mid + 1
    if lo < len(schedule):
        X = cut(lo)
        return FragmentationResult(tuple(sorted(X, key=_key)), _components(g, X), eps, Cs[lo], Cs[lo],
                                   "separator", schedule[lo])
    C = biggest
    return FragmentationResult((), _components(g, set()), eps, C, C, "separator", 0)


# -- predecessor closure ---------------------------------------------------------------

@dataclass(frozen=True)
class ClosedRemovalSet:
    seed: tuple
    closure: tuple
    witness: dict = dc_field(default_factory=dict)  # vertex -> directed path into the seed
    successor_closed: bool = True


def _digraph(q) -> nx.DiGraph:
    if isinstance(q, CoefficientQuiver):
        d = nx.DiGraph()
        d.add_nodes_from(q.vertices)
        d.add_edges_from((a.source, a.target) for a in q.arrows if not a.is_loop)
        return d
    d = nx.DiGraph(q)
    d.remove_edges_from(list(nx.selfloop_edges(d)))
    return d


def predecessor_closure(q, S: Iterable[Hashable], ell: int | None = None) -> ClosedRemovalSet:
    """All vertices with a directed path of length <= ell into S (ell=None: unbounded)."""
    d = _digraph(q)
    seed = tuple(sorted(set(S), key=_key))
    path = {s: [s] for s in seed}
    frontier = list(seed)
    depth = 0
    while frontier and (ell is None or depth < ell):
        nxt = []
        for v in frontier:
            for u in sorted(d.predecessors(v), key=_key):
                if u not in path:
                    path[u] = [u] + path[v]
                    nxt.append(u)
        frontier = nxt
        depth += 1
    closure = set(path)
    closed = all(v not in closure for u, v in d.edges if u not in closure)
    return ClosedRemovalSet(seed, tuple(sorted(closure, key=_key)), path, closed)


def longest_directed_path(q) -> int | None:
    """Length of the longest directed path ignoring loops; None if there is a cycle."""
    d = _digraph(q)
    if not nx.is_directed_acyclic_graph(d):
        return None
    return nx.dag_longest_path_length(d) if d.number_of_nodes() else 0


def max_in_neighbours(q) -> int:
    d = _digraph(q)
    return max((d.in_degree(v) for v in d), default=0)
