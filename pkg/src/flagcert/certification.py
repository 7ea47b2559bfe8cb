"""Admissibility of finite sets in PGL(n), separator search and
primitive-stability verdicts for two-generator representations.

A separator is stored as (F', F, H, H').  A set S is admissible for it when,
for every g in S,

* (F', F, gF, gH, H, H') is positive up to switching gF and gH, and
* (g^-1 F', F', F, H, H', g^-1 H') is positive up to switching the two
  outer flags.

Certified verdicts are always re-checked in exact arithmetic with both
positivity deciders.  The search itself runs in floating point and only
proposes rational candidates.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field, asdict
from fractions import Fraction
from typing import Any, Callable, Iterator, Sequence

import numpy as np

from . import __version__
from .dynamics import NotLoxodromic, ProjTransform, classify, fixed_flags, osculating_flag, veronese_transform
from .families import Representation
from .flags import Flag, FlagError
from .freegroup import GenSet, Word, superbasis, word_str, parse_word
from .linalg import LinalgError, Matrix, matrix_from_json, matrix_to_json
from .positivity import (
    PositivityError,
    PositivityVerdict,
    adapted_basis,
    factor_tuple,
    in_domain,
    is_positive_tuple,
    is_positive_tuple_fg,
)

log = logging.getLogger(__name__)

ADMISSIBILITY_READING = "(F',F,gF,gH,H,H') up to switching gF,gH; (g^-1F',F',F,H,H',g^-1H') up to switching the outer pair"


class CertificationError(Exception):
    """Base class for certification failures."""


class WrongDimension(CertificationError, ValueError):
    """The operation is only defined in one dimension."""


class InvalidSeparator(CertificationError, ValueError):
    """The four flags of a separator do not form a positive quadruple."""


class BudgetExhausted(CertificationError):
    """No separator was found within the search budget.  Inconclusive."""


class ReducibleRepresentation(CertificationError, ValueError):
    """Commutator trace 2 in dimension 2."""


@dataclass(frozen=True)
class Budget:
    """Search limits.  All are per call of :func:`construct_separator`."""

    max_push: int = 64
    random_samples: int = 10_000
    eps_halvings: int = 30
    candidates_per_seed: int = 3
    denominator: int = 2**24
    seed: int = 0

    @classmethod
    def from_json(cls, data: dict[str, Any] | None) -> "Budget":
        return cls(**(data or {}))


# ---------------------------------------------------------------------------
# separators and admissibility


@dataclass(frozen=True)
class Separator:
    """Positive quadruple (F', F, H, H')."""

    f_prime: Flag
    f: Flag
    h: Flag
    h_prime: Flag

    @property
    def flags(self) -> tuple[Flag, Flag, Flag, Flag]:
        return (self.f_prime, self.f, self.h, self.h_prime)

    @property
    def exact(self) -> bool:
        return all(x.exact for x in self.flags)

    def in_forward_domain(self, g: Flag, decider=is_positive_tuple) -> bool:
        """G in U(F, H, F')."""
        return in_domain(self.f, self.h, self.f_prime, g, decider, check=False)

    def in_backward_domain(self, g: Flag, decider=is_positive_tuple) -> bool:
        """G in U(H', F', H)."""
        return in_domain(self.h_prime, self.f_prime, self.h, g, decider, check=False)

    def to_json(self) -> dict[str, Any]:
        return {
            "order": ["F'", "F", "H", "H'"],
            "F'": matrix_to_json(self.f_prime.basis),
            "F": matrix_to_json(self.f.basis),
            "H": matrix_to_json(self.h.basis),
            "H'": matrix_to_json(self.h_prime.basis),
        }

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> "Separator":
        return cls(*(Flag(matrix_from_json(data[k])) for k in ("F'", "F", "H", "H'")))


def check_separator(q: Sequence[Flag]) -> bool:
    """Is the quadruple positive according to both deciders?"""
    if len(q) != 4:
        raise ValueError("a separator has four flags")
    first = is_positive_tuple(list(q))
    second = is_positive_tuple_fg(list(q))
    if first.positive != second.positive:
        log.warning("positivity deciders disagree on a quadruple: %s vs %s", first.positive, second.positive)
    return first.positive is True and second.positive is True


@dataclass
class ConditionResult:
    element: int  # index into S
    condition: int  # 1 = forward, 2 = backward
    positive: bool | None
    switch: str | None
    methods: dict[str, bool | None]

    def to_json(self) -> dict[str, Any]:
        return asdict(self)


@dataclass
class AdmissibilityReport:
    """Outcome of :func:`check_admissible`.

    ``verdict`` is "admissible" only when every condition was verified in
    exact arithmetic by both deciders.  A float run that passes everything
    is "inconclusive".
    """

    conditions: list[ConditionResult]
    verdict: str
    backend: str
    reading: str = ADMISSIBILITY_READING

    @property
    def admissible(self) -> bool:
        return self.verdict == "admissible"

    def to_json(self) -> dict[str, Any]:
        return {
            "verdict": self.verdict,
            "backend": self.backend,
            "reading": self.reading,
            "conditions": [c.to_json() for c in self.conditions],
        }


def _dual(flags: list[Flag], both: bool) -> tuple[bool | None, dict[str, bool | None]]:
    first = is_positive_tuple(flags).positive
    methods = {"factorization": first}
    if not both:
        return first, methods
    second = is_positive_tuple_fg(flags).positive
    methods["fock-goncharov"] = second
    if first == second:
        return first, methods
    log.warning("positivity deciders disagree: %s", methods)
    return None, methods


def _either_order(orders: Sequence[tuple[str, list[Flag]]], both: bool) -> tuple[bool | None, str | None, dict]:
    undecided = False
    record: dict[str, Any] = {}
    for name, flags in orders:
        ok, methods = _dual(flags, both)
        record[name] = methods
        if ok:
            return True, name, methods
        undecided = undecided or ok is None
    return (None if undecided else False), None, record


def check_admissible(
    s: Sequence[ProjTransform],
    sep: Separator,
    both_deciders: bool = True,
    stop_early: bool = False,
    validate: bool = True,
) -> AdmissibilityReport:
    """Check both admissibility conditions for every element of ``s``.

    ``stop_early`` and ``validate=False`` exist for the float prefilter of
    the search and never produce an "admissible" verdict.
    """
    if validate:
        valid = check_separator(sep.flags) if both_deciders else bool(is_positive_tuple(list(sep.flags)))
        if not valid:
            raise InvalidSeparator("(F', F, H, H') is not a positive quadruple")
    fp, f, h, hp = sep.flags
    exact = sep.exact and all(g.exact for g in s)
    conditions: list[ConditionResult] = []
    for idx, g in enumerate(s):
        gf, gh = g(f), g(h)
        ok, switch, methods = _either_order(
            [("unswitched", [fp, f, gf, gh, h, hp]), ("switched", [fp, f, gh, gf, h, hp])], both_deciders
        )
        conditions.append(ConditionResult(idx, 1, ok, switch, methods))
        if stop_early and ok is False:
            break
        gi = g.inverse()
        x, y = gi(fp), gi(hp)
        ok, switch, methods = _either_order(
            [("unswitched", [x, fp, f, h, hp, y]), ("switched", [y, fp, f, h, hp, x])], both_deciders
        )
        conditions.append(ConditionResult(idx, 2, ok, switch, methods))
        if stop_early and ok is False:
            break
    if any(c.positive is False for c in conditions):
        verdict = "not-admissible"
    elif all(c.positive for c in conditions) and exact and both_deciders and validate:
        verdict = "admissible"
    else:
        verdict = "inconclusive"
    return AdmissibilityReport(conditions, verdict, "exact" if exact else "float")


def check_chain(s: Sequence[ProjTransform], sep: Separator, seq: Sequence[int]) -> tuple[bool, tuple[bool, ...] | None]:
    """The nested chain (F', F, v_1 F, ..., v_i F, v_i H, ..., v_1 H, H, H')
    for v_j = g_1 ... g_j with g_j = s[seq[j]], positive up to switching
    some of the pairs (v_j F, v_j H).  Returns the switch pattern found."""
    fp, f, h, hp = sep.flags
    v = None
    fs, hs = [], []
    for i in seq:
        v = s[i] if v is None else v @ s[i]
        fs.append(v(f))
        hs.append(v(h))
    for pattern in itertools.product((False, True), repeat=len(seq)):
        left = [hs[j] if sw else fs[j] for j, sw in enumerate(pattern)]
        right = [fs[j] if sw else hs[j] for j, sw in enumerate(pattern)]
        if is_positive_tuple([fp, f, *left, *reversed(right), h, hp]):
            return True, pattern
    return False, None


# ---------------------------------------------------------------------------
# theorem-level sufficient conditions


@dataclass
class TheoremEvidence:
    holds: bool
    reason: str
    switch: str | None = None
    verdict: PositivityVerdict | None = None
    classifications: dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.holds

    def to_json(self) -> dict[str, Any]:
        return {
            "holds": self.holds,
            "reason": self.reason,
            "switch": self.switch,
            "verdict": None if self.verdict is None else self.verdict.to_json(),
            "classifications": self.classifications,
        }


def check_thm_general_n(a: ProjTransform, b: ProjTransform) -> TheoremEvidence:
    """b positive loxodromic, a loxodromic and (b-, a b-, a+, a b+, b+, a-)
    positive up to switching a b- and a b+."""
    ca, cb = classify(a), classify(b)
    cls = {"a": ca.to_json(), "b": cb.to_json()}
    if not ca.loxodromic:
        return TheoremEvidence(False, f"a is not loxodromic: {ca.reason}", classifications=cls)
    if not (cb.loxodromic and cb.positive):
        return TheoremEvidence(False, "b is not positive loxodromic", classifications=cls)
    ap, am = fixed_flags(a)
    bp, bm = fixed_flags(b)
    x, y = a(bm), a(bp)
    for switch, mid in (("unswitched", (x, y)), ("switched", (y, x))):
        v = is_positive_tuple([bm, mid[0], ap, mid[1], bp, am])
        if v.positive:
            return TheoremEvidence(True, "sextuple positive", switch, v, cls)
    return TheoremEvidence(False, "sextuple not positive in either order", None, v, cls)


def check_thm_n3(a: ProjTransform, b: ProjTransform) -> TheoremEvidence:
    """n = 3, a and b positive loxodromic and (b-, a+, b+, a-) positive."""
    if a.n != 3 or b.n != 3:
        raise WrongDimension("this criterion is specific to n = 3")
    ca, cb = classify(a), classify(b)
    cls = {"a": ca.to_json(), "b": cb.to_json()}
    if not (ca.loxodromic and ca.positive and cb.loxodromic and cb.positive):
        return TheoremEvidence(False, "a and b must both be positive loxodromic", classifications=cls)
    ap, am = fixed_flags(a)
    bp, bm = fixed_flags(b)
    v = is_positive_tuple([bm, ap, bp, am])
    return TheoremEvidence(bool(v), "quadruple positive" if v else "quadruple not positive", None, v, cls)


# ---------------------------------------------------------------------------
# float helpers for the search


def _qr_flag(m: np.ndarray) -> Flag:
    # QR keeps the span of every initial block of columns
    q, _ = np.linalg.qr(m)
    return Flag(Matrix.from_numpy(q))


def _push(g: np.ndarray, flag: Flag) -> Flag:
    return _qr_flag(g @ flag.basis.to_numpy())


def _pos(flags: list[Flag]) -> bool:
    return is_positive_tuple(flags).positive is True


def rationalize_flag(flag: Flag, denominator: int = 2**24) -> Flag:
    """Exact flag near a float flag: columns scaled to unit max-norm and
    entries rounded to fractions with bounded denominators."""
    m = flag.basis.to_numpy()
    m = m / np.abs(m).max(axis=0)
    rows = [[Fraction(float(x)).limit_denominator(denominator) for x in r] for r in m]
    return Flag(Matrix(rows, exact=True))


class _Pair:
    """Float shadow of an ordered pair (a, b) with their fixed flags."""

    def __init__(self, a: ProjTransform, b: ProjTransform):
        self.a_t, self.b_t = a, b
        self.a = a.normalized
        self.b = b.normalized
        self.a_inv = np.linalg.inv(self.a)
        self.b_inv = np.linalg.inv(self.b)
        self.ap, self.am = (_qr_flag(x.basis.to_numpy()) for x in fixed_flags(a.to_float()))
        self.bp, self.bm = (_qr_flag(x.basis.to_numpy()) for x in fixed_flags(b.to_float()))

    def inverted(self) -> "_Pair":
        return _Pair(self.a_t.inverse(), self.b_t.inverse())

    def accepts(self, k: Flag) -> bool:
        """Conditions of the K-existence lemmas for a candidate K."""
        try:
            bk, bik = _push(self.b, k), _push(self.b_inv, k)
            if not _pos([self.am, self.bm, bik, k, bk, self.bp]):
                return False
            ak, aik = _push(self.a, k), _push(self.a_inv, k)
            return _pos([self.am, aik, k, ak, self.ap, self.bp]) or _pos([self.am, k, self.ap, ak, self.bp, aik])
        except (LinalgError, FlagError, PositivityError):
            return False


def _sign_patterns(n: int) -> list[list[int]]:
    return [[1, *s] for s in itertools.product((1, -1), repeat=n - 1)]


def _veronese_np(eps: float, n: int) -> np.ndarray:
    return veronese_transform(Matrix([[1.0, eps], [0.0, 1.0]], exact=False), n).to_numpy()


# ---------------------------------------------------------------------------
# candidate generators for K (flags near b_-)

KSource = Callable[[_Pair, Budget, np.random.Generator], Iterator[tuple[Any, Flag]]]


def _power_push_seeds(pair: _Pair) -> list[Flag]:
    n = pair.a.shape[0]
    p = adapted_basis(pair.bm, pair.bp).to_numpy()
    desc = np.eye(n)[:, ::-1]
    seeds = []
    for s in (1.0, 0.5, 2.0):
        x = _veronese_np(s, n)
        for signs in _sign_patterns(n):
            seeds.append(_qr_flag(p @ np.diag(signs) @ x @ desc))
    return seeds


def _power_push(pair: _Pair, budget: Budget, rng) -> Iterator[tuple[Any, Flag]]:
    """K = b^-k K' for seeds K' between b- and b+, k = 0, 1, ..."""
    seeds = _power_push_seeds(pair)
    current = list(seeds)
    for k in range(budget.max_push + 1):
        for i, seed in enumerate(current):
            yield i, seed
        current = [_push(pair.b_inv, f) for f in current]


def _eigenbasis(g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    vals, vecs = np.linalg.eig(g)
    order = np.argsort(-np.abs(vals.real))
    return np.abs(vals.real[order]), vecs.real[:, order]


def _osculating(pair: _Pair, budget: Budget, rng) -> Iterator[tuple[Any, Flag]]:
    """n = 3: osculating flags of a- and b-orbits, following the tangency,
    forward and backward intersection constructions."""
    if pair.a.shape[0] != 3:
        return
    a_t, b_t = ProjTransform(Matrix.from_numpy(pair.a)), ProjTransform(Matrix.from_numpy(pair.b))
    if not (classify(a_t).positive and classify(b_t).positive):
        return
    lam, e = _eigenbasis(pair.a)
    # orient a's eigenbasis so b_-^(1) lies in the positive simplex
    c = np.linalg.solve(e, pair.bm.basis.to_numpy()[:, 0])
    if np.any(np.abs(c) < 1e-12):
        return
    e = e * np.sign(c)
    l12, l23, l13 = (math.log(lam[0] / lam[1]), math.log(lam[1] / lam[2]), math.log(lam[0] / lam[2]))
    # tangency case: the b-orbit through a_+^(1), then pushed by powers of a
    x = pair.ap.basis.to_numpy()[:, 0]
    try:
        base = osculating_flag(b_t, x, 0.0)
    except (ValueError, NotLoxodromic):
        base = None
    for i in range(1, budget.max_push + 1):
        if base is not None:
            yield ("tangent", 0), base
            base = _push(pair.a, base)
        for tag, p, t in (
            ("forward", (1.0, 1.0 / i, 1.0), math.log(i * l13 / l12) / l23 if i * l13 > l12 else 0.0),
            ("backward", (1.0, float(i), 1.0), math.log(i) / l12),
        ):
            try:
                yield (tag, 0), osculating_flag(a_t, e @ np.array(p), t)
            except (ValueError, NotLoxodromic, LinalgError, FlagError):
                continue


def _random(pair: _Pair, budget: Budget, rng) -> Iterator[tuple[Any, Flag]]:
    """Random flags u E near b- in the basis adapted to (b-, b+)."""
    n = pair.a.shape[0]
    p = adapted_basis(pair.bm, pair.bp).to_numpy()
    desc = np.eye(n)[:, ::-1]
    for i in range(budget.random_samples):
        delta = 2.0 ** -(i % 10)
        u = np.eye(n) + delta * np.triu(rng.standard_normal((n, n)), 1)
        yield i, _qr_flag(p @ u @ desc)


# ---------------------------------------------------------------------------
# separator assembly


def _collect(pair: _Pair, source: KSource, budget: Budget, rng, limit: int) -> list[Flag]:
    found: list[Flag] = []
    per_seed: dict[Any, int] = {}
    for key, k in source(pair, budget, rng):
        if per_seed.get(key, 0) >= budget.candidates_per_seed:
            continue
        if pair.accepts(k):
            per_seed[key] = per_seed.get(key, 0) + 1
            found.append(k)
            if len(found) >= limit:
                break
    return found


def _perturbations(pair: _Pair, f2: Flag, h2: Flag, budget: Budget) -> Iterator[tuple[Flag, Flag, Flag, Flag]]:
    """Flags F' < F'' < F and H < H'' < H' in the positive decagon
    (b-, F', F'', F, a+, b+, H, H'', H', a-), at shrinking distances."""
    six = [pair.bm, f2, pair.ap, pair.bp, h2, pair.am]
    if not _pos(six):
        return
    fac = factor_tuple(six)
    q = fac.basis.to_numpy()
    us = [u.to_numpy() for u in fac.unipotents]
    n = q.shape[0]
    desc = np.eye(n)[:, ::-1]
    v_f = us[0]
    v_h = us[0] @ us[1] @ us[2] @ us[3]
    for j in range(1, budget.eps_halvings + 1):
        xp = _veronese_np(2.0**-j, n)
        xm = np.linalg.inv(xp)
        yield tuple(_qr_flag(q @ v @ x @ desc) for v, x in ((v_f, xm), (v_f, xp), (v_h, xm), (v_h, xp)))


def _verify(s: Sequence[ProjTransform], flags: Sequence[Flag], budget: Budget) -> tuple[Separator, AdmissibilityReport] | None:
    try:
        exact = Separator(*(rationalize_flag(f, budget.denominator) for f in flags))
        s_float = [g.to_float() for g in s]
        quick = Separator(*(f.to_float() for f in exact.flags))
        # float verdicts near a sign boundary are indeterminate, so only a
        # definite failure rejects a candidate here
        if is_positive_tuple(list(quick.flags)).positive is False:
            return None
        prefilter = check_admissible(s_float, quick, both_deciders=False, stop_early=True, validate=False)
        if prefilter.verdict == "not-admissible":
            return None
        if not check_separator(exact.flags):
            return None
        report = check_admissible(s, exact)
    except (LinalgError, FlagError, PositivityError, CertificationError):
        return None
    return (exact, report) if report.admissible else None


def _interval_points(s: Sequence[ProjTransform]) -> Iterator[tuple[Flag, Flag, Flag, Flag]]:
    """n = 2: attractors in one arc, repellers in the other, and the four
    separator points placed in the two gaps between the clusters."""
    ang = []
    for g in s:
        plus, minus = fixed_flags(g.to_float())
        for flag, kind in ((plus, "+"), (minus, "-")):
            v = flag.basis.to_numpy()[:, 0]
            ang.append((math.atan2(v[1], v[0]) % math.pi, kind))
    ang.sort()
    kinds = "".join(k for _, k in ang)
    m = len(kinds)
    # rotate so the attractor cluster starts the sequence
    start = next((i for i in range(m) if kinds[i] == "+" and kinds[i - 1] == "-"), None)
    if start is None:
        return
    ang = ang[start:] + [(x + math.pi, k) for x, k in ang[:start]]
    kinds = "".join(k for _, k in ang)
    if kinds != "+" * kinds.count("+") + "-" * kinds.count("-"):
        return
    na = kinds.count("+")
    a_end, r_start, r_end = ang[na - 1][0], ang[na][0], ang[-1][0]
    a_start = ang[0][0] + math.pi
    fracs = (Fraction(1, 2), Fraction(1, 4), Fraction(3, 4), Fraction(1, 8), Fraction(7, 8))

    def point(theta: float) -> Flag:
        c, s_ = math.cos(theta), math.sin(theta)
        return Flag(Matrix.from_numpy([[c, -s_], [s_, c]]))

    for (p1, p2), (q1, q2) in itertools.product(itertools.combinations(sorted(fracs), 2), repeat=2):
        # H, H' between attractors and repellers; F', F between repellers and attractors
        h = a_end + float(p1) * (r_start - a_end)
        hp = a_end + float(p2) * (r_start - a_end)
        fp = r_end + float(q1) * (a_start - r_end)
        f = r_end + float(q2) * (a_start - r_end)
        yield point(fp), point(f), point(h), point(hp)


STRATEGIES = ("osculating", "power-push", "intervals", "random")
_SOURCES: dict[str, KSource] = {"osculating": _osculating, "power-push": _power_push, "random": _random}


@dataclass
class SearchResult:
    separator: Separator
    report: AdmissibilityReport
    strategy: str
    roles: str

    def to_json(self) -> dict[str, Any]:
        return {
            "strategy": self.strategy,
            "roles": self.roles,
            "separator": self.separator.to_json(),
            "admissibility": self.report.to_json(),
        }


def construct_separator(
    a: ProjTransform, b: ProjTransform, strategies: Sequence[str] | None = None, budget: Budget | None = None
) -> SearchResult:
    """Search for a separator of {a, b}, verified exactly before return.

    Raises NotLoxodromic up front and BudgetExhausted when every strategy
    fails; the latter is inconclusive, never a refutation.
    """
    budget = budget or Budget()
    for name, g in (("a", a), ("b", b)):
        c = classify(g)
        if not c.loxodromic:
            raise NotLoxodromic(f"{name} is not loxodromic ({c.reason or 'moduli tie'})")
    s = [a, b]
    if not all(g.exact for g in s):
        s = [ProjTransform(g.matrix.to_exact()) for g in s]
    strategies = list(strategies or STRATEGIES)
    unknown = set(strategies) - set(STRATEGIES)
    if unknown:
        raise ValueError(f"unknown strategies {sorted(unknown)}")
    n = a.n
    roles = []
    if classify(b).positive:
        roles.append(("a,b", a, b))
    if classify(a).positive:
        roles.append(("b,a", b, a))
    if not roles:
        roles = [("a,b", a, b), ("b,a", b, a)]
    for strategy in strategies:
        if strategy == "intervals":
            if n != 2:
                continue
            for flags in _interval_points(s):
                hit = _verify(s, flags, budget)
                if hit:
                    return SearchResult(*hit, strategy, "set")
            continue
        if strategy == "osculating" and n != 3:
            continue
        for label, x, y in roles:
            rng = np.random.default_rng(budget.seed)
            pair = _Pair(x, y)
            inv = pair.inverted()
            limit = 6
            fs = _collect(pair, _SOURCES[strategy], budget, rng, limit)
            if not fs:
                continue
            hs = _collect(inv, _SOURCES[strategy], budget, rng, limit)
            for f2, h2 in itertools.product(fs, hs):
                for flags in _perturbations(pair, f2, h2, budget):
                    hit = _verify(s, flags, budget)
                    if hit:
                        return SearchResult(*hit, strategy, label)
    raise BudgetExhausted("no separator found within budget")


# ---------------------------------------------------------------------------
# weak positivity and primitive stability


@dataclass
class WeakPositivityReport:
    alphabet: str
    generators: tuple[Word, Word]
    status: str  # weakly-positive | refuted | inconclusive
    reason: str = ""
    search: SearchResult | None = None

    @property
    def weakly_positive(self) -> bool:
        return self.status == "weakly-positive"

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "alphabet": self.alphabet,
            "generators": [word_str(w) for w in self.generators],
            "status": self.status,
            "reason": self.reason,
        }
        if self.search is not None:
            out.update(self.search.to_json())
        return out


def weakly_positive(rep: Representation, r: GenSet, budget: Budget | None = None, strategies=None) -> WeakPositivityReport:
    """Try to certify that rho(R) is admissible."""
    images = [rep.evaluate(w) for w in r.letters]
    for w, g in zip(r.letters, images):
        c = classify(g)
        if not c.loxodromic:
            # admissible sets consist of loxodromic elements
            return WeakPositivityReport(str(r), r.letters, "refuted", f"{word_str(w)} is not loxodromic")
    try:
        res = construct_separator(images[0], images[1], strategies, budget)
    except BudgetExhausted as exc:
        return WeakPositivityReport(str(r), r.letters, "inconclusive", str(exc))
    return WeakPositivityReport(str(r), r.letters, "weakly-positive", "", res)


@dataclass
class StabilityVerdict:
    route: str | None
    alphabets: dict[str, WeakPositivityReport]
    verdict: str  # certified | refuted-hypothesis | inconclusive

    @property
    def certified(self) -> bool:
        return self.verdict == "certified"

    def to_json(self) -> dict[str, Any]:
        return {
            "route": self.route,
            "verdict": self.verdict,
            "alphabets": {k: v.to_json() for k, v in self.alphabets.items()},
        }


def primitive_stability_verdict(
    rep: Representation, r: GenSet | None = None, budget: Budget | None = None, strategies=None
) -> StabilityVerdict:
    """Certified iff R and R' are weakly positive, or R', R'' and R''' are.

    Failing both routes is inconclusive: weak positivity is only a
    sufficient condition for primitive stability.
    """
    r = r or GenSet.standard()
    r1, r2, r3 = superbasis(r)
    reports: dict[str, WeakPositivityReport] = {}

    def get(name: str, gens: GenSet) -> WeakPositivityReport:
        if name not in reports:
            reports[name] = weakly_positive(rep, gens, budget, strategies)
        return reports[name]

    if get("R", r).weakly_positive and get("R'", r1).weakly_positive:
        return StabilityVerdict("(R,R')", reports, "certified")
    if all(get(k, g).weakly_positive for k, g in (("R'", r1), ("R''", r2), ("R'''", r3))):
        return StabilityVerdict("(R',R'',R''')", reports, "certified")
    return StabilityVerdict(None, reports, "inconclusive")


# ---------------------------------------------------------------------------
# products of an admissible set


@dataclass
class ProductCheck:
    word: tuple[int, ...]
    loxodromic: bool
    forward: bool
    backward: bool

    @property
    def ok(self) -> bool:
        return self.loxodromic and self.forward and self.backward


def check_products(s: Sequence[ProjTransform], sep: Separator, max_length: int) -> list[ProductCheck]:
    """Every product w of elements of ``s`` up to ``max_length`` factors:
    loxodromic, w+ in the forward and w- in the backward domain.

    Irrational fixed flags are replaced by rational approximations far below
    double precision before the exact domain tests.
    """
    out = []
    for length in range(1, max_length + 1):
        for word in itertools.product(range(len(s)), repeat=length):
            w = s[word[0]]
            for i in word[1:]:
                w = w @ s[i]
            cls = classify(w)
            if not cls.loxodromic:
                out.append(ProductCheck(word, False, False, False))
                continue
            plus, minus = fixed_flags(w)
            out.append(ProductCheck(word, True, sep.in_forward_domain(plus), sep.in_backward_domain(minus)))
    return out


# ---------------------------------------------------------------------------
# dimension two


def _pair_matrices(rep) -> tuple[Matrix, Matrix]:
    if isinstance(rep, Representation):
        return rep.a.matrix, rep.b.matrix
    a, b = rep
    return getattr(a, "matrix", a), getattr(b, "matrix", b)


def kappa_invariant(rep) -> Fraction | float:
    """Trace of [A, B] = A B A^-1 B^-1; independent of the representatives."""
    a, b = _pair_matrices(rep)
    if a.n != 2 or b.n != 2:
        raise WrongDimension("the commutator trace invariant is defined for n = 2")
    c = a @ b @ a.inverse() @ b.inverse()
    return c[0, 0] + c[1, 1]


def classify_n2_case(rep) -> int:
    """Case 1: in PSL_2 with kappa < 2; case 2: not in PSL_2, kappa > 2;
    case 3: not in PSL_2, kappa < 2; case 4: in PSL_2, kappa > 2."""
    a, b = _pair_matrices(rep)
    k = kappa_invariant(rep)
    if k == 2 or (not isinstance(k, Fraction) and abs(k - 2) < 1e-12):
        raise ReducibleRepresentation("commutator trace is 2")
    # the sign of det is well defined on PGL_2
    in_psl = a.det() > 0 and b.det() > 0
    if in_psl:
        return 1 if k < 2 else 4
    return 2 if k > 2 else 3


# ---------------------------------------------------------------------------
# certificates

CERTIFICATE_VERSION = 1


def build_certificate(rep: Representation, verdict: StabilityVerdict) -> dict[str, Any]:
    return {
        "certificate_version": CERTIFICATE_VERSION,
        "tool_version": __version__,
        "backend": "exact",
        "admissibility_reading": ADMISSIBILITY_READING,
        "representation": rep.to_json(),
        "result": verdict.to_json(),
    }


@dataclass
class ReplayResult:
    ok: bool
    mismatches: list[str]


def replay_certificate(cert: dict[str, Any]) -> ReplayResult:
    """Re-run the exact admissibility checks recorded in a certificate."""
    rep = Representation.from_json(cert["representation"])
    mismatches = []
    for name, entry in cert["result"]["alphabets"].items():
        if entry["status"] != "weakly-positive":
            continue
        gens = [parse_word(w) for w in entry["generators"]]
        s = [rep.evaluate(w) for w in gens]
        try:
            sep = Separator.from_json(entry["separator"])
            report = check_admissible(s, sep)
        except (CertificationError, LinalgError, FlagError) as exc:
            mismatches.append(f"{name}: {exc}")
            continue
        if report.to_json() != entry["admissibility"]:
            mismatches.append(f"{name}: admissibility report differs")
    if cert["result"]["verdict"] == "certified" and not cert["result"].get("route"):
        mismatches.append("certified verdict without a route")
    return ReplayResult(not mismatches, mismatches)
