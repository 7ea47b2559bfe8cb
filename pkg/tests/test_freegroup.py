import itertools
import math

import pytest
from hypothesis import given, strategies as st

from flagcert.freegroup import (
    GenSet,
    WordError,
    abelianization,
    cyclic_reduce,
    directed_rays,
    inverse,
    is_free_basis,
    is_geodesic,
    is_positive_in,
    is_primitive,
    multiply,
    parse_word,
    positive_alphabets,
    primitive_ray,
    primitive_representatives,
    r_length,
    reduce,
    superbasis,
    word_str,
)

letters = st.sampled_from([1, -1, 2, -2])
words = st.lists(letters, max_size=14).map(tuple)


def naive_reduce(w):
    # repeated deletion of adjacent inverse pairs, a different algorithm from the stack
    w = list(w)
    changed = True
    while changed:
        changed = False
        for i in range(len(w) - 1):
            if w[i] == -w[i + 1]:
                del w[i : i + 2]
                changed = True
                break
    return tuple(w)


def test_reduce_examples():
    assert reduce((1, -1)) == ()
    assert reduce((1, 2, -2, 1)) == (1, 1)
    assert reduce(parse_word("aBba")) == (1, 1)
    assert word_str((1, -2, 2)) == "aBb"


def test_parse_rejects_bad_letters():
    with pytest.raises(WordError):
        parse_word("abc")


@given(words)
def test_reduce_idempotent_and_matches_naive(w):
    r = reduce(w)
    assert reduce(r) == r
    assert r == naive_reduce(w)


@given(words, words)
def test_inverse_and_multiply(u, v):
    assert multiply(u, inverse(u)) == ()
    assert inverse(multiply(u, v)) == multiply(inverse(v), inverse(u))


def test_superbasis_of_standard_basis():
    r1, r2, r3 = superbasis(GenSet.standard())
    assert (r1.first, r1.second) == ((-1,), (2,))
    assert (r2.first, r2.second) == ((-2,), (-2, -1))
    assert (r3.first, r3.second) == ((1, 2), (1,))


@given(st.sampled_from([("a", "b"), ("ab", "b"), ("a", "ba"), ("aab", "ab"), ("A", "bA")]))
def test_superbasis_properties(pair):
    r = GenSet.parse(*pair)
    g1, g2 = r.letters
    g3 = multiply(inverse(g2), inverse(g1))
    assert multiply(g1, g2, g3) == ()
    for s in superbasis(r):
        (p, q), (u, v) = abelianization(s.first), abelianization(s.second)
        assert abs(p * v - q * u) == 1
        assert is_free_basis(s.first, s.second)


def test_genset_rejects_non_basis():
    with pytest.raises(WordError):
        GenSet.parse("aa", "b")
    with pytest.raises(WordError):
        GenSet.parse("ab", "ba")


def test_directed_rays_small():
    rays = list(directed_rays(GenSet.standard(), 2))
    assert sorted(word_str(r.word) for r in rays) == ["aa", "ab", "ba", "bb"]


@pytest.mark.parametrize("pair", [("a", "b"), ("A", "b"), ("ab", "b"), ("B", "BA")])
def test_directed_rays_count_and_geodesic(pair):
    r = GenSet.parse(*pair)
    for length in range(0, 7):
        rays = list(directed_rays(r, length))
        assert len(rays) == 2**length
        for ray in rays:
            assert is_geodesic(r, ray.choices)
            # as abstract words in R the length is the number of steps
            assert r_length(r, ray.choices) == length


def test_r_length_counts_cancellation():
    r = GenSet.standard()
    assert r_length(r, (0, 1)) == 2


def test_cmz_inclusion_and_exclusion():
    reps = primitive_representatives(2, 2)
    assert (1,) in reps
    w = (1, 2, 1, 2, 2)
    assert {w[i:] + w[:i] for i in range(len(w))} & set(reps)
    commutator = (1, 2, -1, -2)
    rotations = {commutator[i:] + commutator[:i] for i in range(4)}
    assert not any(w in rotations for w in primitive_representatives(4, 3))


def test_cmz_counts():
    assert len(primitive_representatives(3, 2, strict=True)) == 72
    assert len(primitive_representatives(3, 2, strict=False)) == 112


def test_non_strict_list_contains_a_non_primitive_word():
    w = cyclic_reduce(parse_word("abababbabb"))
    rotations = {w[i:] + w[:i] for i in range(len(w))}
    assert rotations & set(primitive_representatives(4, 1))
    assert not rotations & set(primitive_representatives(4, 1, strict=True))
    assert not is_primitive(w)


@pytest.mark.parametrize("w,expected", [("a", True), ("ab", True), ("abb", True), ("abAB", False), ("aa", False), ("aabb", False)])
def test_is_primitive_examples(w, expected):
    assert is_primitive(parse_word(w)) == expected


def _cyclically_reduced_words(max_len):
    for n in range(1, max_len + 1):
        for w in itertools.product((1, -1, 2, -2), repeat=n):
            if reduce(w) == w and cyclic_reduce(w) == w:
                yield w


def _has_complement(w):
    # a free basis {w, v} with |v| <= |w| exists for every primitive w
    return any(is_free_basis(w, v) for v in _cyclically_free_candidates(len(w)))


def _cyclically_free_candidates(max_len):
    for n in range(1, max_len + 1):
        for v in itertools.product((1, -1, 2, -2), repeat=n):
            if reduce(v) == v:
                yield v


def test_is_primitive_matches_complement_search():
    for w in _cyclically_reduced_words(5):
        assert is_primitive(w) == _has_complement(w), word_str(w)


@given(st.lists(letters, min_size=1, max_size=12).map(tuple))
def test_primitive_words_have_coprime_abelianization(w):
    if is_primitive(w):
        p, q = abelianization(w)
        assert math.gcd(p, q) == 1


def test_primitive_ray_examples():
    r = primitive_ray((1,), 5)
    assert r.word == (1,) * 5 and r.steps == (1, 2, 3, 4, 5)
    alt = primitive_ray((1, 2), 7)
    assert alt.word == (1, 2, 1, 2, 1, 2, 1)


def test_primitive_ray_prefixes_are_reduced():
    for w in primitive_representatives(4, 3, strict=True):
        ray = primitive_ray(w, 24)
        assert reduce(ray.word) == ray.word


def test_primitive_ray_rejects_empty():
    with pytest.raises(WordError):
        primitive_ray((1, -1), 3)


def test_strict_cmz_words_positive_in_exactly_one_alphabet():
    r = GenSet.standard()
    r1 = superbasis(r)[0]
    alphabets = {"R": r, "R^-1": r.inverse(), "R'": r1, "R'^-1": r1.inverse()}
    for w in primitive_representatives(3, 2, strict=True):
        found = positive_alphabets(w, alphabets)
        if len(w) == 1:
            assert len(found) == 2
        else:
            assert len(found) == 1, word_str(w)


def test_is_positive_in_uses_rotations():
    r = GenSet.standard()
    assert is_positive_in(parse_word("ab"), r)
    assert not is_positive_in(parse_word("aB"), r)
    assert is_positive_in(parse_word("Ab"), superbasis(r)[0])
