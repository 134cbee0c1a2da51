"""Letters, words, strings and bands for string and clannish algebras.

Words are tuples of :class:`Letter`, written left to right with
``s(w_i) = t(w_{i+1})``.  Tokens: ``a`` (direct), ``a-`` (inverse),
``eps*`` (special).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .algebra import AlgebraPresentation, PresentationError

DIRECT, INVERSE, SPECIAL = "+", "-", "*"

# rank used by the direction comparison; END marks "word ran out"
_RANK = {INVERSE: 0, "end": 1, SPECIAL: 2, DIRECT: 3}


class WordError(ValueError):
    pass


@dataclass(frozen=True)
class Letter:
    arrow: str
    kind: str

    def inverse(self) -> "Letter":
        if self.kind == SPECIAL:
            return self
        return Letter(self.arrow, INVERSE if self.kind == DIRECT else DIRECT)

    @property
    def token(self) -> str:
        return {DIRECT: self.arrow, INVERSE: self.arrow + "-", SPECIAL: self.arrow + "*"}[self.kind]

    def sort_key(self) -> tuple[int, str]:
        return (_RANK[self.kind], self.arrow)

    def source(self, p: AlgebraPresentation) -> str:
        a = p.arrow(self.arrow)
        return a.target if self.kind == INVERSE else a.source

    def target(self, p: AlgebraPresentation) -> str:
        a = p.arrow(self.arrow)
        return a.source if self.kind == INVERSE else a.target

    def __repr__(self) -> str:
        return self.token


Word = tuple  # tuple[Letter, ...]


def letter(p: AlgebraPresentation, token: str) -> Letter:
    tok = token.strip()
    if tok.endswith("*"):
        aid, kind = tok[:-1], SPECIAL
    elif tok.endswith("-"):
        aid, kind = tok[:-1], INVERSE
    else:
        aid, kind = tok, DIRECT
    try:
        p.arrow(aid)
    except PresentationError:
        raise WordError(f"unknown arrow in token {token!r}") from None
    if (kind == SPECIAL) != p.is_special(aid):
        if kind == SPECIAL:
            raise WordError(f"{aid!r} is not a special loop")
        raise WordError(f"special loop {aid!r} must be written {aid}*")
    return Letter(aid, kind)


def parse_word(p: AlgebraPresentation, text: str) -> Word:
    return tuple(letter(p, t) for t in text.split())


def format_word(w: Sequence[Letter]) -> str:
    return " ".join(x.token for x in w)


def inverse_word(w: Sequence[Letter]) -> Word:
    return tuple(x.inverse() for x in reversed(w))


def rotations(w: Sequence[Letter]) -> list[Word]:
    w = tuple(w)
    return [w[i:] + w[:i] for i in range(len(w))] if w else [w]


def word_key(w: Sequence[Letter]) -> tuple:
    return tuple(x.sort_key() for x in w)


def _check_letters(p: AlgebraPresentation, w: Sequence[Letter]) -> None:
    for x in w:
        if not isinstance(x, Letter):
            raise WordError(f"not a letter: {x!r}")
        try:
            p.arrow(x.arrow)
        except PresentationError:
            raise WordError(f"unknown arrow {x.arrow!r}") from None
        if (x.kind == SPECIAL) != p.is_special(x.arrow):
            raise WordError(f"letter {x.token} has the wrong kind for arrow {x.arrow!r}")


def is_valid_word(p: AlgebraPresentation, w: Sequence[Letter]) -> bool:
    """Composable, reduced, free of relations and of ``e* e*``."""
    _check_letters(p, w)
    for x, y in zip(w, w[1:]):
        if x.source(p) != y.target(p):
            return False
        if x.inverse() == y:
            return False
    # maximal runs of direct (resp. inverse) letters must avoid relations
    run: list[Letter] = []
    for x in list(w) + [None]:
        if x is not None and run and x.kind == run[-1].kind and x.kind != SPECIAL:
            run.append(x)
            continue
        if len(run) >= 2:
            arrows = tuple(l.arrow for l in run)
            if run[0].kind == INVERSE:
                arrows = tuple(reversed(arrows))
            if p.contains_relation(arrows):
                return False
        run = [x] if x is not None and x.kind != SPECIAL else []
    return True


def word_vertices(p: AlgebraPresentation, w: Sequence[Letter], vertex: str | None = None) -> list[str]:
    """Vertex of each basis vector v_0..v_n of the word's module."""
    if not w:
        if vertex is None:
            raise WordError("the empty word needs a vertex")
        return [vertex]
    return [w[0].target(p)] + [x.source(p) for x in w]


def is_coadmissible(p: AlgebraPresentation, w: Sequence[Letter], vertex: str | None = None) -> bool:
    """Neither ``e* w`` nor ``w e*`` is a word for a special loop e."""
    w = tuple(w)
    verts = word_vertices(p, w, vertex)
    for e in p.specials_at(verts[0]):
        s = Letter(e, SPECIAL)
        if is_valid_word(p, (s,) + w):
            return False
    for e in p.specials_at(verts[-1]):
        s = Letter(e, SPECIAL)
        if is_valid_word(p, w + (s,)):
            return False
    return True


def _is_proper_power(w: Word) -> bool:
    n = len(w)
    for d in range(1, n):
        if n % d == 0 and w[:d] * (n // d) == w:
            return True
    return False


# -- classified words ---------------------------------------------------------

@dataclass(frozen=True)
class StringWord:
    """A string up to ``w ~ w^-``; symmetric ones are stored as ``z f* z^-``."""

    letters: Word
    vertex: str
    symmetric: bool = False

    @property
    def z(self) -> Word:
        if not self.symmetric:
            raise WordError("only symmetric strings have a z part")
        return self.letters[: len(self.letters) // 2]

    @property
    def center(self) -> Letter:
        if not self.symmetric:
            raise WordError("only symmetric strings have a center")
        return self.letters[len(self.letters) // 2]

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return format_word(self.letters) if self.letters else f"1_{self.vertex}"


@dataclass(frozen=True)
class BandWord:
    """A band up to rotation and inversion.

    Symmetric bands are stored in the rotation ``f* z^- g* z``.
    """

    letters: Word
    symmetric: bool = False

    @property
    def half(self) -> int:
        return (len(self.letters) - 2) // 2

    @property
    def f(self) -> Letter:
        return self.letters[0]

    @property
    def g(self) -> Letter:
        return self.letters[self.half + 1]

    @property
    def z(self) -> Word:
        if not self.symmetric:
            raise WordError("only symmetric bands have a z part")
        return self.letters[self.half + 2:]

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return format_word(self.letters)


def canonical_string(w: Sequence[Letter]) -> Word:
    w = tuple(w)
    return min(w, inverse_word(w), key=word_key)


def canonical_band(w: Sequence[Letter]) -> Word:
    w = tuple(w)
    return min(rotations(w) + rotations(inverse_word(w)), key=word_key)


def classify_string(p: AlgebraPresentation, w: Sequence[Letter], vertex: str | None = None) -> StringWord:
    w = tuple(w)
    if not is_valid_word(p, w):
        raise WordError(f"not a word: {format_word(w)}")
    verts = word_vertices(p, w, vertex)
    if not is_coadmissible(p, w, verts[0]):
        raise WordError(f"not coadmissible: {format_word(w) or '1_' + verts[0]}")
    c = canonical_string(w)
    verts = word_vertices(p, c, verts[0])
    symmetric = bool(c) and c == inverse_word(c)
    return StringWord(c, verts[0], symmetric)


def is_band_word(p: AlgebraPresentation, w: Sequence[Letter]) -> bool:
    w = tuple(w)
    if not w:
        return False
    reps = max(2, -(-p.max_relation_length() // len(w)) + 1)
    return is_valid_word(p, w * reps)


def classify_band(p: AlgebraPresentation, w: Sequence[Letter]) -> BandWord:
    w = tuple(w)
    if not is_band_word(p, w):
        raise WordError(f"not a band: {format_word(w)}")
    if _is_proper_power(w):
        raise WordError(f"not primitive: {format_word(w)}")
    inv = inverse_word(w)
    symmetric = inv in rotations(w)
    if not symmetric:
        return BandWord(canonical_band(w), False)
    candidates = []
    for r in rotations(w) + rotations(inv):
        n = (len(r) - 2) // 2
        if len(r) % 2 == 0 and r[0].kind == SPECIAL and r[n + 1].kind == SPECIAL \
                and tuple(r[1:n + 1]) == inverse_word(r[n + 2:]):
            candidates.append(r)
    if not candidates:
        raise WordError(f"symmetric band without special centers: {format_word(w)}")
    return BandWord(min(candidates, key=word_key), True)


# -- direction ----------------------------------------------------------------

def _compare(x: Sequence[Letter], y: Sequence[Letter]) -> int:
    for a, b in zip(x, y):
        ka, kb = a.sort_key(), b.sort_key()
        if ka != kb:
            return -1 if ka < kb else 1
    if len(x) == len(y):
        return 0
    # the shorter word continues with the END marker
    if len(x) < len(y):
        return -1 if _RANK["end"] < _RANK[y[len(x)].kind] else 1
    return 1 if _RANK["end"] < _RANK[x[len(y)].kind] else -1


def _sign(cmp: int) -> str | None:
    return None if cmp == 0 else (DIRECT if cmp < 0 else INVERSE)


def string_direction(w: Sequence[Letter]) -> tuple:
    """Per-letter signs for a linear word; None marks a symmetry center."""
    out = []
    for i, x in enumerate(w):
        if x.kind != SPECIAL:
            out.append(x.kind)
            continue
        left_inv = inverse_word(w[:i])
        right = tuple(w[i + 1:])
        out.append(_sign(_compare(left_inv, right)))
    return tuple(out)


def band_direction(w: Sequence[Letter]) -> tuple:
    """Per-letter signs for a cyclic word, comparing one full period."""
    w = tuple(w)
    n = len(w)
    out = []
    for i, x in enumerate(w):
        if x.kind != SPECIAL:
            out.append(x.kind)
            continue
        left_inv = tuple(w[(i - k) % n].inverse() for k in range(1, n + 1))
        right = tuple(w[(i + k) % n] for k in range(1, n + 1))
        out.append(_sign(_compare(left_inv, right)))
    return tuple(out)


@dataclass(frozen=True)
class DirectionVector:
    signs: tuple

    def __getitem__(self, i):
        return self.signs[i]

    def __len__(self):
        return len(self.signs)

    def __str__(self):
        return "".join(s or "0" for s in self.signs)


def direction(p: AlgebraPresentation, w: StringWord | BandWord) -> DirectionVector:
    if isinstance(w, StringWord):
        return DirectionVector(string_direction(w.letters))
    if isinstance(w, BandWord):
        return DirectionVector(band_direction(w.letters))
    raise TypeError("direction needs a classified StringWord or BandWord")


# -- enumeration --------------------------------------------------------------

def all_letters(p: AlgebraPresentation) -> list[Letter]:
    out = []
    for a in sorted(p.arrows, key=lambda a: a.id):
        if a.id in p.special:
            out.append(Letter(a.id, SPECIAL))
        else:
            out.extend([Letter(a.id, DIRECT), Letter(a.id, INVERSE)])
    return out


def enumerate_words(p: AlgebraPresentation, max_len: int) -> list[Word]:
    """All nonempty words of length <= max_len."""
    letters = all_letters(p)
    out: list[Word] = []
    layer = [(x,) for x in letters]
    length = 1
    while layer and length <= max_len:
        out.extend(layer)
        nxt = []
        for w in layer:
            for x in letters:
                cand = w + (x,)
                if is_valid_word(p, cand):
                    nxt.append(cand)
        layer = nxt
        length += 1
    return out


def enumerate_strings(p: AlgebraPresentation, max_len: int) -> list[StringWord]:
    seen: set = set()
    out: list[StringWord] = []
    for v in sorted(p.vertices):
        if is_coadmissible(p, (), v):
            out.append(StringWord((), v, False))
    for w in enumerate_words(p, max_len):
        if not is_coadmissible(p, w):
            continue
        c = canonical_string(w)
        if c in seen:
            continue
        seen.add(c)
        out.append(classify_string(p, c))
    return out


def enumerate_bands(p: AlgebraPresentation, max_len: int) -> list[BandWord]:
    seen: set = set()
    out: list[BandWord] = []
    for w in enumerate_words(p, max_len):
        if not is_band_word(p, w) or _is_proper_power(w):
            continue
        c = canonical_band(w)
        if c in seen:
            continue
        seen.add(c)
        out.append(classify_band(p, c))
    return out

