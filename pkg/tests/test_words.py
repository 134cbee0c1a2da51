import itertools

import pytest

from clannish.words import (DIRECT, INVERSE, SPECIAL, WordError, all_letters, band_direction,
                            classify_band, classify_string, direction, enumerate_bands,
                            enumerate_strings, format_word, inverse_word, is_coadmissible, is_valid_word,
                            parse_word, rotations, string_direction)


def W(p, text):
    return parse_word(p, text)


def naive_valid(p, w):
    """Independent check: composable, reduced, relation-free in both readings."""
    for x, y in zip(w, w[1:]):
        if x.source(p) != y.target(p) or x.inverse() == y:
            return False
    direct = [x.arrow for x in w]
    for i in range(len(w)):
        for r in p.relations:
            seg = w[i:i + len(r)]
            if len(seg) < len(r):
                continue
            if all(x.kind == DIRECT for x in seg) and tuple(x.arrow for x in seg) == r:
                return False
            if all(x.kind == INVERSE for x in seg) and tuple(x.arrow for x in reversed(seg)) == r:
                return False
    del direct
    return True


def test_parse_format_roundtrip(c5):
    w = W(c5, "eps* a- b eta* b- a eps*")
    assert format_word(w) == "eps* a- b eta* b- a eps*"
    with pytest.raises(WordError):
        W(c5, "zz")
    with pytest.raises(WordError):
        W(c5, "eps")  # special arrow written as ordinary letter


def test_validity_examples(kron, loop1):
    assert is_valid_word(kron, W(kron, "a b- a b-"))
    assert not is_valid_word(kron, W(kron, "a a-"))
    assert not is_valid_word(loop1, W(loop1, "eps* eps*"))
    assert not is_valid_word(loop1, W(loop1, "a a"))


def test_coadmissible(loop1, kron):
    assert is_coadmissible(loop1, W(loop1, "eps* a- eps*"))
    assert not is_coadmissible(loop1, W(loop1, "a"))
    assert is_coadmissible(kron, (), "1")
    assert not is_coadmissible(loop1, (), "1")


def test_classify_strings(c5, loop1, kron):
    s = classify_string(c5, W(c5, "d a eps* a- d-"))
    assert s.symmetric and format_word(s.z) == "d a"
    assert not classify_string(loop1, W(loop1, "eps* a- eps*")).symmetric
    assert not classify_string(kron, W(kron, "a")).symmetric


def test_classify_bands(loop1, kron):
    assert classify_band(loop1, W(loop1, "eps* a- eps* a")).symmetric
    assert not classify_band(loop1, W(loop1, "a eps*")).symmetric
    b = classify_band(kron, W(kron, "a b-"))
    assert not b.symmetric and format_word(b.letters) == "a- b"
    with pytest.raises(WordError):
        classify_band(kron, W(kron, "a b- a b-"))  # proper power


def test_direction_of_direct_letter(kron):
    assert string_direction(W(kron, "a")) == (DIRECT,)
    assert str(direction(kron, classify_string(kron, W(kron, "a b-")))) in ("+-", "-+")


def test_direction_symmetric_string(c5):
    # eps maps v_0 -> v_1 and acts as a loop at v_1; eta is the centre
    w = W(c5, "eps* a- b eta* b- a eps*")
    assert "".join(s or "0" for s in string_direction(w)) == "--+0-++"


def test_direction_symmetric_band(loop1):
    b = classify_band(loop1, W(loop1, "eps* a- eps* a"))
    d = band_direction(b.letters)
    # the two special centres carry the inner idempotents; no other letter is a centre
    assert d[0] is None and d[b.half + 1] is None
    assert None not in d[1:b.half + 1] + d[b.half + 2:]


def test_kronecker_strings_frozen(kron):
    got = {str(s) for s in enumerate_strings(kron, 4)}
    assert got == {"1_1", "1_2", "a-", "b-", "a b-", "a- b", "a- b a-", "b- a b-", "a b- a b-", "a- b a- b"}
    # a(b-a)b- and b-(ab-)a appear (the latter in its canonical orientation)
    assert "a b- a b-" in got and format_word(inverse_word(W(kron, "b- a b- a"))) in got


def test_trivial_strings(kron, c5):
    assert [str(s) for s in enumerate_strings(kron, 0)] == ["1_1", "1_2"]
    # vertices 1, 3, 5 carry special loops, so their trivial words are not coadmissible
    assert [str(s) for s in enumerate_strings(c5, 0)] == ["1_2", "1_4"]


def _brute_bands(p, n):
    letters = all_letters(p)
    classes = set()
    for w in itertools.product(letters, repeat=n):
        if not naive_valid(p, w * 3):
            continue
        if any(n % d == 0 and w[:d] * (n // d) == w for d in range(1, n)):
            continue
        classes.add(frozenset(rotations(w) + rotations(inverse_word(w))))
    return len(classes)


@pytest.mark.parametrize("n", range(1, 7))
def test_kronecker_band_counts(kron, n):
    got = [b for b in enumerate_bands(kron, 6) if len(b) == n]
    assert len(got) == _brute_bands(kron, n)


@pytest.mark.parametrize("n", range(1, 5))
def test_clannish5_band_counts(c5, n):
    got = [b for b in enumerate_bands(c5, 4) if len(b) == n]
    assert len(got) == _brute_bands(c5, n)


def test_symmetric_band_rotation(c5):
    for b in enumerate_bands(c5, 8):
        if b.symmetric:
            w = b.letters
            assert w[0].kind == SPECIAL and w[b.half + 1].kind == SPECIAL
            assert tuple(w[1:b.half + 1]) == inverse_word(b.z)
