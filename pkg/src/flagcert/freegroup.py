"""Words in the free group on a, b; superbases, directed rays and the
normal forms of primitive conjugacy classes.

A word is a tuple of nonzero ints: 1 = a, -1 = a^-1, 2 = b, -2 = b^-1.
Strings use the letters a, A, b, B with capitals for inverses.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

Word = tuple[int, ...]

_TO_CHAR = {1: "a", -1: "A", 2: "b", -2: "B"}
_FROM_CHAR = {v: k for k, v in _TO_CHAR.items()}


class WordError(ValueError):
    """Malformed word or generating set."""


def parse_word(s: str) -> Word:
    try:
        return tuple(_FROM_CHAR[c] for c in s)
    except KeyError as exc:
        raise WordError(f"bad letter {exc.args[0]!r} in {s!r}") from None


def word_str(w: Iterable[int]) -> str:
    return "".join(_TO_CHAR[x] for x in w)


def reduce(w: Iterable[int]) -> Word:
    """Free reduction."""
    out: list[int] = []
    for x in w:
        if x not in _TO_CHAR:
            raise WordError(f"bad letter {x!r}")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def multiply(*words: Sequence[int]) -> Word:
    return reduce(itertools.chain.from_iterable(words))


def power(w: Sequence[int], k: int) -> Word:
    if k < 0:
        return power(inverse(w), -k)
    return reduce(tuple(w) * k)


def cyclic_reduce(w: Sequence[int]) -> Word:
    w = list(reduce(w))
    while len(w) > 1 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def abelianization(w: Sequence[int]) -> tuple[int, int]:
    ea = sum(1 if x == 1 else -1 for x in w if abs(x) == 1)
    eb = sum(1 if x == 2 else -1 for x in w if abs(x) == 2)
    return ea, eb


def is_free_basis(g1: Sequence[int], g2: Sequence[int]) -> bool:
    """Nielsen reduction decides whether {g1, g2} generates F_2."""
    pair = [reduce(g1), reduce(g2)]
    if not pair[0] or not pair[1]:
        return False
    det = abelianization(pair[0])[0] * abelianization(pair[1])[1] - abelianization(pair[0])[1] * abelianization(pair[1])[0]
    if abs(det) != 1:
        return False
    for _ in range(10_000):
        lengths = sorted(len(x) for x in pair)
        if lengths == [1, 1]:
            return {abs(pair[0][0]), abs(pair[1][0])} == {1, 2}
        improved = False
        for i in (0, 1):
            x, y = pair[i], pair[1 - i]
            for cand in (multiply(x, y), multiply(x, inverse(y)), multiply(y, x), multiply(inverse(y), x)):
                if len(cand) < len(x):
                    pair[i] = cand
                    improved = True
                    break
            if improved:
                break
        if not improved:
            return False
    return False


@dataclass(frozen=True)
class GenSet:
    """Ordered generating pair (gamma_1, gamma_2) of F_2."""

    first: Word
    second: Word

    def __post_init__(self):
        if not is_free_basis(self.first, self.second):
            raise WordError(f"{word_str(self.first)}, {word_str(self.second)} is not a free basis")

    @classmethod
    def standard(cls) -> "GenSet":
        return cls((1,), (2,))

    @classmethod
    def parse(cls, a: str, b: str) -> "GenSet":
        return cls(parse_word(a), parse_word(b))

    @property
    def letters(self) -> tuple[Word, Word]:
        return (self.first, self.second)

    def inverse(self) -> "GenSet":
        return GenSet(inverse(self.first), inverse(self.second))

    def __str__(self) -> str:
        return "{" + word_str(self.first) + "," + word_str(self.second) + "}"


def superbasis(r: GenSet) -> tuple[GenSet, GenSet, GenSet]:
    """(R', R'', R''') with gamma_3 = gamma_2^-1 gamma_1^-1:
    R' = {g1^-1, g2}, R'' = {g2^-1, g3}, R''' = {g3^-1, g1}."""
    g1, g2 = r.first, r.second
    g3 = multiply(inverse(g2), inverse(g1))
    return (
        GenSet(inverse(g1), g2),
        GenSet(inverse(g2), g3),
        GenSet(inverse(g3), g1),
    )


# ---------------------------------------------------------------------------
# rays


@dataclass(frozen=True)
class Ray:
    """Rooted ray: the group elements are the prefixes of ``word`` taken at
    ``steps`` (each step appends one generator of the alphabet)."""

    alphabet: str
    choices: tuple[int, ...]  # index into the alphabet's letters per step
    word: Word  # concatenated letters in a, b
    steps: tuple[int, ...]  # prefix lengths in ``word`` after each step

    @property
    def label(self) -> str:
        return "".join(str(c) for c in self.choices)


def ray_from_choices(r: GenSet, choices: Sequence[int], name: str = "") -> Ray:
    word: list[int] = []
    steps = []
    for c in choices:
        word.extend(r.letters[c])
        steps.append(len(word))
    return Ray(name or str(r), tuple(choices), tuple(word), tuple(steps))


def r_length(r: GenSet, choices: Sequence[int]) -> int:
    """Length in the alphabet R u R^-1 of the element spelt by ``choices``.

    R is a free basis, so rewriting the element in R-letters is unique and
    free reduction in those letters gives the word length.
    """
    abstract = reduce(c + 1 for c in choices)  # letters 1, 2 of a free group on R
    return len(abstract)


def directed_rays(r: GenSet, length: int, name: str = "") -> Iterator[Ray]:
    """All R-directed rays of the given length (|R|^L of them)."""
    for choices in itertools.product((0, 1), repeat=length):
        yield ray_from_choices(r, choices, name)


def is_geodesic(r: GenSet, choices: Sequence[int]) -> bool:
    return r_length(r, choices) == len(choices)


# ---------------------------------------------------------------------------
# primitive elements


def _canonical_cyclic(w: Word) -> Word:
    rots = [w[i:] + w[:i] for i in range(len(w))] or [w]
    return min(rots)


def primitive_representatives(k_max: int, l_max: int, strict: bool = False) -> list[Word]:
    """Words g1, and g1 g2^m1 ... g1 g2^mk with m_i in {l, l+1}, 1 <= k <= k_max,
    1 <= l <= l_max, closed under inverting either generator and swapping the
    generators; deduplicated up to cyclic rotation.

    Every primitive conjugacy class has a representative of this shape.  The
    converse fails (e.g. a b a b a b^2 a b^2), so ``strict=True`` keeps only
    the genuinely primitive words.
    """
    base: set[Word] = {(1,)}
    for k in range(1, k_max + 1):
        for l in range(1, l_max + 1):
            for ms in itertools.product((l, l + 1), repeat=k):
                w: list[int] = []
                for m in ms:
                    w.append(1)
                    w.extend([2] * m)
                base.add(tuple(w))
    variants: set[Word] = set()
    for w in base:
        for sa, sb, swap in itertools.product((1, -1), (1, -1), (False, True)):
            def image(x: int) -> int:
                s = sa if abs(x) == 1 else sb
                y = abs(x)
                if swap:
                    y = 3 - y
                return s * y if x > 0 else -s * y
            variants.add(_canonical_cyclic(tuple(image(x) for x in w)))
    out = sorted(variants, key=lambda w: (len(w), w))
    if strict:
        out = [w for w in out if is_primitive(w)]
    return out


def is_primitive(w: Sequence[int]) -> bool:
    """Whether w is part of a free basis of F_2.

    A cyclically reduced primitive word of length >= 2 uses each generator
    with a single sign, one generator only in isolated occurrences and the
    other in runs of lengths l or l+1.  Substituting to remove l from every
    run gives a shorter primitive word, so recursion terminates.
    """
    w = cyclic_reduce(w)
    while True:
        if len(w) == 1:
            return True
        if not w:
            return False
        letters = set(w)
        if any(-x in letters for x in letters) or len({abs(x) for x in letters}) < 2:
            return False
        # rotate so the word starts at the beginning of a run
        i = 0
        while w[i - 1] == w[i]:
            i += 1
            if i == len(w):
                return False
        w = w[i:] + w[:i]
        runs: list[tuple[int, int]] = []
        for x in w:
            if runs and runs[-1][0] == x:
                runs[-1] = (x, runs[-1][1] + 1)
            else:
                runs.append((x, 1))
        by_letter: dict[int, list[int]] = {}
        for x, m in runs:
            by_letter.setdefault(x, []).append(m)
        single = [x for x, ms in by_letter.items() if set(ms) == {1}]
        if not single:
            return False
        s = single[0]
        other = next(x for x in by_letter if x != s)
        ms = by_letter[other]
        l = min(ms)
        if max(ms) > l + 1:
            return False
        # automorphism s -> s * other^-l turns runs of length m into m - l
        new: list[int] = []
        for x, m in runs:
            if x == s:
                new.append(s)
            else:
                new.extend([other] * (m - l))
        w = cyclic_reduce(tuple(new))


def primitive_ray(w: Sequence[int], length: int) -> Ray:
    """First ``length`` letters of the infinite power w^infinity, one letter
    per step, as a ray in the standard alphabet."""
    w = cyclic_reduce(w)
    if not w:
        raise WordError("empty word")
    letters = tuple(w[i % len(w)] for i in range(length))
    return Ray(word_str(w), letters, letters, tuple(range(1, length + 1)))


def is_positive_in(w: Sequence[int], r: GenSet) -> bool:
    """Whether some cyclic rotation of w is a product of gamma_1, gamma_2
    (no inverses) as written letter strings."""
    w = cyclic_reduce(w)
    pieces = r.letters

    def splits(rest: Word) -> bool:
        if not rest:
            return True
        return any(rest[: len(p)] == p and splits(rest[len(p) :]) for p in pieces)

    return any(splits(w[i:] + w[:i]) for i in range(max(len(w), 1)))


def positive_alphabets(w: Sequence[int], alphabets: dict[str, GenSet]) -> list[str]:
    """Names of the alphabets in which w is, up to rotation, a positive word."""
    return [name for name, r in alphabets.items() if is_positive_in(w, r)]
