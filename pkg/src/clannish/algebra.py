"""Quivers with monomial relations and special idempotent loops.

Paths and relations are written right-to-left like composition: the
relation ``("c", "a")`` is the path "first a, then c".  Internally the
path automaton works in application order.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable


class PresentationError(ValueError):
    """A presentation is structurally malformed."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field_name = field_name


class InfiniteDimensionalError(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    id: str
    source: str
    target: str

    @property
    def is_loop(self) -> bool:
        return self.source == self.target


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise PresentationError("vertices", "duplicate vertex id")
        ids = [a.id for a in self.arrows]
        if len(set(ids)) != len(ids):
            dup = sorted(i for i in ids if ids.count(i) > 1)[0]
            raise PresentationError("arrows", f"duplicate arrow id {dup!r}")
        vs = set(self.vertices)
        for a in self.arrows:
            if a.source not in vs or a.target not in vs:
                raise PresentationError("arrows", f"arrow {a.id!r} references an unknown vertex")

    def arrow(self, aid: str) -> Arrow:
        for a in self.arrows:
            if a.id == aid:
                return a
        raise PresentationError("arrows", f"unknown arrow {aid!r}")

    def starting_at(self, v: str) -> list[Arrow]:
        return [a for a in self.arrows if a.source == v]

    def ending_at(self, v: str) -> list[Arrow]:
        return [a for a in self.arrows if a.target == v]


@dataclass(frozen=True)
class AlgebraPresentation:
    """kQ / (relations + {e^2 - e : e special})."""

    quiver: Quiver
    special: frozenset[str] = frozenset()
    relations: frozenset[tuple[str, ...]] = frozenset()
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "special", frozenset(self.special))
        object.__setattr__(self, "relations", frozenset(tuple(r) for r in self.relations))
        arrows = {a.id: a for a in self.quiver.arrows}
        for s in self.special:
            if s not in arrows:
                raise PresentationError("special", f"unknown arrow {s!r}")
            if not arrows[s].is_loop:
                raise PresentationError("special", f"special arrow {s!r} is not a loop")
        for r in self.relations:
            if len(r) < 2:
                raise PresentationError("relations", f"relation {list(r)} has length < 2")
            for x in r:
                if x not in arrows:
                    raise PresentationError("relations", f"unknown arrow {x!r} in relation {list(r)}")
                if x in self.special:
                    raise PresentationError("relations", f"relation {list(r)} involves special loop {x!r}")
            # written right-to-left: r[i] is applied after r[i+1]
            for left, right in zip(r, r[1:]):
                if arrows[right].target != arrows[left].source:
                    raise PresentationError("relations", f"relation {list(r)} is not a composable path")

    # -- convenience ------------------------------------------------------

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.quiver.vertices

    @property
    def arrows(self) -> tuple[Arrow, ...]:
        return self.quiver.arrows

    @property
    def ordinary(self) -> list[Arrow]:
        return [a for a in self.quiver.arrows if a.id not in self.special]

    def arrow(self, aid: str) -> Arrow:
        return self.quiver.arrow(aid)

    def is_special(self, aid: str) -> bool:
        return aid in self.special

    def specials_at(self, v: str) -> list[str]:
        return sorted(a.id for a in self.quiver.arrows if a.id in self.special and a.source == v)

    def max_relation_length(self) -> int:
        return max((len(r) for r in self.relations), default=2)

    def is_relation(self, written: tuple[str, ...]) -> bool:
        return tuple(written) in self.relations

    def contains_relation(self, written: tuple[str, ...]) -> bool:
        """Whether a written-order path has a relation as a contiguous subpath."""
        w = tuple(written)
        for r in self.relations:
            k = len(r)
            for i in range(len(w) - k + 1):
                if w[i:i + k] == r:
                    return True
        return False

    def without_specials(self) -> "AlgebraPresentation":
        return AlgebraPresentation(self.quiver, frozenset(), self.relations, self.name)

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "vertices": list(self.vertices),
            "arrows": [{"id": a.id, "source": a.source, "target": a.target,
                        "special": a.id in self.special} for a in self.arrows],
            "relations": [list(r) for r in sorted(self.relations)],
        }

    @classmethod
    def from_dict(cls, d: dict, name: str = "") -> "AlgebraPresentation":
        if not isinstance(d, dict):
            raise PresentationError("<root>", "expected a JSON object")
        for key in ("vertices", "arrows"):
            if key not in d:
                raise PresentationError(key, "missing key")
        verts = d["vertices"]
        if not isinstance(verts, list) or not all(isinstance(v, str) for v in verts):
            raise PresentationError("vertices", "expected a list of strings")
        arrows, special = [], set()
        if not isinstance(d["arrows"], list):
            raise PresentationError("arrows", "expected a list")
        for i, a in enumerate(d["arrows"]):
            if not isinstance(a, dict) or not all(k in a for k in ("id", "source", "target")):
                raise PresentationError(f"arrows[{i}]", "needs id, source and target")
            arrows.append(Arrow(str(a["id"]), str(a["source"]), str(a["target"])))
            if a.get("special", False):
                special.add(str(a["id"]))
        rels = d.get("relations", [])
        if not isinstance(rels, list) or not all(isinstance(r, list) for r in rels):
            raise PresentationError("relations", "expected a list of arrow-id lists")
        return cls(Quiver(tuple(verts), tuple(arrows)), frozenset(special),
                   frozenset(tuple(str(x) for x in r) for r in rels), d.get("name", name))

    @classmethod
    def from_json(cls, text: str, name: str = "") -> "AlgebraPresentation":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise PresentationError("<json>", f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
        return cls.from_dict(d, name)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def build(vertices: Iterable[str], arrows: Iterable[tuple[str, str, str]],
          special: Iterable[str] = (), relations: Iterable[Iterable[str]] = (),
          name: str = "") -> AlgebraPresentation:
    """Shorthand: ``build("12", [("a", "1", "2")], relations=[("b", "a")])``."""
    q = Quiver(tuple(vertices), tuple(Arrow(*a) for a in arrows))
    return AlgebraPresentation(q, frozenset(special), frozenset(tuple(r) for r in relations), name)


# -- the nonzero-path automaton ---------------------------------------------

class PathAutomaton:
    """States are the last (r-1) arrows of a nonzero path, in application order.

    A path is nonzero in kQ/(R + R^Sp) iff it has no relation as a subpath
    and no repeated special loop ``ee`` (which reduces to ``e``).
    """

    def __init__(self, p: AlgebraPresentation, arrows: Iterable[str] | None = None):
        self.p = p
        self.allowed = [a.id for a in p.arrows] if arrows is None else list(arrows)
        self.window = max(1, p.max_relation_length() - 1)
        # relations in application order
        self._rels = [tuple(reversed(r)) for r in p.relations]
        self._succ: dict[tuple, list[tuple]] = {}

    def _extends(self, state: tuple[str, ...], y: str) -> tuple | None:
        last = self.p.arrow(state[-1])
        ay = self.p.arrow(y)
        if last.target != ay.source:
            return None
        if y == state[-1] and y in self.p.special:
            return None
        new = state + (y,)
        for r in self._rels:
            if len(r) <= len(new) and new[-len(r):] == r:
                return None
        return new[-self.window:]

    def successors(self, state: tuple[str, ...]) -> list[tuple[str, ...]]:
        if state not in self._succ:
            out = []
            for y in self.allowed:
                nxt = self._extends(state, y)
                if nxt is not None:
                    out.append(nxt)
            self._succ[state] = out
        return self._succ[state]

    def start_states(self) -> list[tuple[str, ...]]:
        return [(a,) for a in self.allowed]

    def find_cycle(self) -> list[str] | None:
        """A cycle of states (as the arrows appended), or None."""
        color: dict[tuple, int] = {}
        parent: dict[tuple, tuple | None] = {}
        for s0 in self.start_states():
            if s0 in color:
                continue
            stack = [(s0, iter(self.successors(s0)))]
            color[s0] = 1
            parent[s0] = None
            while stack:
                s, it = stack[-1]
                nxt = next(it, None)
                if nxt is None:
                    color[s] = 2
                    stack.pop()
                    continue
                c = color.get(nxt, 0)
                if c == 0:
                    color[nxt] = 1
                    parent[nxt] = s
                    stack.append((nxt, iter(self.successors(nxt))))
                elif c == 1:
                    cyc = [s]
                    cur = s
                    while cur != nxt:
                        cur = parent[cur]
                        cyc.append(cur)
                    cyc.reverse()
                    return [st[-1] for st in cyc]
        return None

    def longest_and_count(self) -> tuple[int, int]:
        """(max path length, number of nonzero paths of length >= 1); DAG only."""
        memo: dict[tuple, tuple[int, int]] = {}
        order: list[tuple] = []
        seen: set = set()
        for s0 in self.start_states():
            if s0 in seen:
                continue
            stack = [(s0, False)]
            while stack:
                s, done = stack.pop()
                if done:
                    order.append(s)
                    continue
                if s in seen:
                    continue
                seen.add(s)
                stack.append((s, True))
                for n in self.successors(s):
                    if n not in seen:
                        stack.append((n, False))
        for s in order:
            succ = self.successors(s)
            longest = 1 + max((memo[n][0] for n in succ), default=0)
            count = 1 + sum(memo[n][1] for n in succ)
            memo[s] = (longest, count)
        starts = self.start_states()
        return (max((memo[s][0] for s in starts), default=0),
                sum(memo[s][1] for s in starts))


# -- reports ------------------------------------------------------------------

@dataclass
class AlgebraReport:
    is_string_algebra: bool
    is_clannish: bool
    is_finite_dimensional: bool
    k_dimension: float  # an int, or math.inf
    max_path_length: float
    failed_axioms: list[tuple[str, object]] = field(default_factory=list)

    def summary(self) -> str:
        lines = [
            f"string algebra:      {self.is_string_algebra}",
            f"clannish:            {self.is_clannish}",
            f"finite dimensional:  {self.is_finite_dimensional}",
            f"k-dimension:         {self.k_dimension}",
            f"max path length:     {self.max_path_length}",
        ]
        for tag, wit in self.failed_axioms:
            lines.append(f"FAILED {tag}: {wit}")
        return "\n".join(lines)


def _check_bounded_valency(p: AlgebraPresentation, tag: str) -> list[tuple[str, object]]:
    out = []
    for v in p.vertices:
        if len(p.quiver.starting_at(v)) > 2:
            out.append((tag, {"vertex": v, "direction": "out"}))
        if len(p.quiver.ending_at(v)) > 2:
            out.append((tag, {"vertex": v, "direction": "in"}))
    return out


def _check_unique_continuation(p: AlgebraPresentation, tag: str, arrows: Iterable[str]) -> list[tuple[str, object]]:
    out = []
    for bid in arrows:
        b = p.arrow(bid)
        before = [a.id for a in p.quiver.ending_at(b.source) if (bid, a.id) not in p.relations]
        if len(before) > 1:
            out.append((tag, {"arrow": bid, "side": "before", "pair": (before[0], before[1])}))
        after = [c.id for c in p.quiver.starting_at(b.target) if (c.id, bid) not in p.relations]
        if len(after) > 1:
            out.append((tag, {"arrow": bid, "side": "after", "pair": (after[0], after[1])}))
    return out


def _dimension_data(p: AlgebraPresentation) -> tuple[bool, float, float, list[str] | None]:
    auto = PathAutomaton(p)
    cyc = auto.find_cycle()
    if cyc is not None:
        return False, math.inf, math.inf, cyc
    longest, count = auto.longest_and_count()
    return True, len(p.vertices) + count, longest, None


def _string_axioms(p: AlgebraPresentation) -> list[tuple[str, object]]:
    failed = _check_bounded_valency(p, "S1")
    failed += _check_unique_continuation(p, "S2", [a.id for a in p.arrows])
    cyc = PathAutomaton(p).find_cycle()
    if cyc is not None:
        failed.append(("S3", {"cycle": cyc}))
    return failed


def _clannish_axioms(p: AlgebraPresentation) -> list[tuple[str, object]]:
    failed = []
    for r in sorted(p.relations):
        if r[0] in p.special or r[-1] in p.special:
            failed.append(("C0", {"relation": list(r)}))
        for x, y in zip(r, r[1:]):
            if x == y and x in p.special:
                failed.append(("C0", {"relation": list(r)}))
    failed += _check_bounded_valency(p, "C1")
    failed += _check_unique_continuation(p, "C2", [a.id for a in p.ordinary])
    return failed


def validate_string_algebra(p: AlgebraPresentation) -> AlgebraReport:
    if p.special:
        raise PresentationError("special", "string algebra presentations carry no special loops")
    failed = _string_axioms(p)
    fin, kdim, ell, _ = _dimension_data(p)
    return AlgebraReport(not failed, not _clannish_axioms(p), fin, kdim, ell, failed)


def validate_clannish(p: AlgebraPresentation) -> AlgebraReport:
    failed = _clannish_axioms(p)
    fin, kdim, ell, _ = _dimension_data(p)
    is_string = not p.special and not _string_axioms(p)
    return AlgebraReport(is_string, not failed, fin, kdim, ell, failed)


def path_length_bound(p: AlgebraPresentation) -> int:
    fin, _, ell, cyc = _dimension_data(p)
    if not fin:
        raise InfiniteDimensionalError(f"algebra is infinite dimensional (cycle {cyc})")
    return int(ell)
