"""Numerical probes: singular value gap growth along rays, linear lower
bounds, distances to flats and contraction of nested domains.

Products along rays are propagated through their exterior powers.  The
largest singular value of the k-th compound is sigma_1 ... sigma_k and
LAPACK returns it to relative precision, so every gap keeps full accuracy
even when the product itself is numerically singular.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Sequence

import numpy as np

from .certification import Separator
from .dynamics import ProjTransform, flat_distance_batch
from .families import Representation
from .flags import Flag, labourie_B
from .freegroup import GenSet, Word, inverse, primitive_ray, primitive_representatives, word_str
from .linalg import Matrix
from .positivity import adapted_basis, is_positive_tuple

RENORM_EVERY = 8
LEVEL_CAP = 2**16  # nodes per level processed at once
EXHAUSTIVE_MAX_LENGTH = 20


def _compounds(m: np.ndarray) -> list[np.ndarray]:
    """Compound matrices of orders 1 .. n-1 (float)."""
    n = m.shape[0]
    mat = Matrix.from_numpy(m)
    return [mat.compound(k).to_numpy() for k in range(1, n)]


def _normalized(g: ProjTransform) -> np.ndarray:
    return g.normalized


@dataclass
class GrowthSeries:
    """gaps[i, k-1] = alpha_k(mu(rho(eta_i))) for i = 0..L."""

    alphabet: str
    ray: str
    gaps: np.ndarray

    @property
    def length(self) -> int:
        return len(self.gaps) - 1

    @property
    def gap_min(self) -> np.ndarray:
        return self.gaps.min(axis=1) if self.gaps.size else np.zeros(len(self.gaps))


@dataclass(frozen=True)
class FitResult:
    kappa: float
    kappa_prime: float

    def holds(self, s: Sequence[float], tol: float = 0.0) -> bool:
        return all(s[i] >= self.kappa * i - self.kappa_prime - tol for i in range(len(s)))


def fit_linear_lower(s) -> FitResult:
    """Endpoint slope kappa = (s_L - s_0) / L clamped at 0, and the smallest
    kappa' with s_i >= kappa i - kappa' on every observed i."""
    s = np.asarray(getattr(s, "gap_min", s), dtype=float)
    if len(s) < 2:
        raise ValueError("need at least two samples")
    length = len(s) - 1
    kappa = max(0.0, float(s[-1] - s[0]) / length)
    kappa_prime = max(0.0, float(np.max(kappa * np.arange(len(s)) - s)))
    return FitResult(kappa, kappa_prime)


def _fit_batch(s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row-wise fit_linear_lower for an array of series (rays x (L+1))."""
    length = s.shape[1] - 1
    kappa = np.maximum(0.0, (s[:, -1] - s[:, 0]) / length)
    kprime = np.maximum(0.0, np.max(kappa[:, None] * np.arange(length + 1)[None, :] - s, axis=1))
    return kappa, kprime


# ---------------------------------------------------------------------------
# batched propagation


class _Kernel:
    """Products of letters tracked through compounds with log offsets.

    The same arithmetic is applied whether nodes come from an exhaustive
    prefix tree or from independently sampled rays, so both modes agree
    bit for bit on shared rays.
    """

    def __init__(self, letters: Sequence[np.ndarray]):
        self.n = letters[0].shape[0]
        self.comp = [_compounds(m) for m in letters]

    def start(self, count: int = 1) -> tuple[list[np.ndarray], np.ndarray]:
        states = [np.broadcast_to(np.eye(c.shape[0]), (count, *c.shape)).copy() for c in self.comp[0]]
        return states, np.zeros((count, self.n - 1))

    def step(self, states, offsets, parents: np.ndarray, letters: np.ndarray, level: int):
        new_states = []
        offsets = offsets[parents].copy()
        for k in range(self.n - 1):
            stacked = np.stack([c[k] for c in self.comp])
            x = np.matmul(states[k][parents], stacked[letters])
            if level % RENORM_EVERY == 0:
                scale = np.abs(x).max(axis=(1, 2))
                x = x / scale[:, None, None]
                offsets[:, k] += np.log(scale)
            new_states.append(x)
        return new_states, offsets

    def gaps(self, states, offsets) -> np.ndarray:
        count = offsets.shape[0]
        partial = np.zeros((count, self.n + 1))
        for k in range(self.n - 1):
            partial[:, k + 1] = offsets[:, k] + np.log(np.linalg.norm(states[k], ord=2, axis=(1, 2)))
        g = 2 * partial[:, 1:-1] - partial[:, :-2] - partial[:, 2:]
        return np.maximum(g, 0.0)


def _letters(rep: Representation, words: Sequence[Word]) -> list[np.ndarray]:
    return [_normalized(rep.evaluate(w)) for w in words]


def gap_growth(rep: Representation, ray, length: int | None = None, alphabet: str = "") -> GrowthSeries:
    """Gap series along one ray.  ``ray`` is a freegroup.Ray (one generator
    of its alphabet per step) or a sequence of signed letters."""
    if hasattr(ray, "word"):
        steps = [ray.word[a:b] for a, b in zip((0, *ray.steps[:-1]), ray.steps)]
        label, alphabet = ray.label, alphabet or ray.alphabet
    else:
        steps = [(x,) for x in ray]
        label = word_str(ray)
    if length is not None:
        if length < 1:
            raise ValueError("length must be at least 1")
        steps = steps[:length]
    uniq = sorted(set(steps))
    kern = _Kernel(_letters(rep, uniq) if uniq else [np.eye(rep.n)])
    states, offsets = kern.start()
    rows = [kern.gaps(states, offsets)[0]]
    for i, s in enumerate(steps, start=1):
        states, offsets = kern.step(states, offsets, np.array([0]), np.array([uniq.index(s)]), i)
        rows.append(kern.gaps(states, offsets)[0])
    return GrowthSeries(alphabet, label, np.array(rows))


def _sampled_gaps(kern: _Kernel, choices: np.ndarray) -> np.ndarray:
    """Gap arrays (rays, L+1, n-1) for independent rays given as letter
    index arrays."""
    count, length = choices.shape
    states, offsets = kern.start(count)
    out = np.zeros((count, length + 1, kern.n - 1))
    out[:, 0] = kern.gaps(states, offsets)
    idx = np.arange(count)
    for i in range(length):
        states, offsets = kern.step(states, offsets, idx, choices[:, i], i + 1)
        out[:, i + 1] = kern.gaps(states, offsets)
    return out


def _tree_levels(kern: _Kernel, states, offsets, depth: int, base: int, first_level: int) -> list[np.ndarray]:
    """Gap arrays for every level of the full tree below the given nodes.

    Node j at level i+1 is child (j mod base) of node (j div base)."""
    levels = [kern.gaps(states, offsets)]
    for i in range(depth):
        count = offsets.shape[0] * base
        parents = np.arange(count) // base
        letters = np.arange(count) % base
        states, offsets = kern.step(states, offsets, parents, letters, first_level + i + 1)
        levels.append(kern.gaps(states, offsets))
    return levels


@dataclass
class AlphabetSummary:
    alphabet: str
    rays: int
    min_kappa: float
    max_kappa_prime: float
    worst_ray: str
    worst: GrowthSeries | None
    kappas: np.ndarray = field(repr=False, default_factory=lambda: np.zeros(0))
    mode: str = "exhaustive"

    def to_json(self) -> dict[str, Any]:
        return {
            "alphabet": self.alphabet,
            "rays": self.rays,
            "mode": self.mode,
            "min_kappa": self.min_kappa,
            "max_kappa_prime": self.max_kappa_prime,
            "worst_ray": self.worst_ray,
        }


def _label(choices: Iterable[int]) -> str:
    return "".join(str(int(c)) for c in choices)


def _summarize(name: str, gaps: np.ndarray, choices: np.ndarray, mode: str) -> AlphabetSummary:
    s = gaps.min(axis=2)
    kappa, kprime = _fit_batch(s)
    worst = int(np.argmin(kappa))
    label = _label(choices[worst])
    return AlphabetSummary(
        name, len(kappa), float(kappa.min()), float(kprime.max()), label, GrowthSeries(name, label, gaps[worst]), kappa, mode
    )


def _exhaustive(kern: _Kernel, name: str, length: int, base: int = 2) -> AlphabetSummary:
    split = 0
    while base ** (length - split) > LEVEL_CAP:
        split += 1
    depth = length - split
    states, offsets = kern.start()
    prefix_levels = [kern.gaps(states, offsets)]
    for i in range(split):
        count = offsets.shape[0] * base
        parents = np.arange(count) // base
        states, offsets = kern.step(states, offsets, parents, np.arange(count) % base, i + 1)
        prefix_levels.append(kern.gaps(states, offsets))
    leaves = base**depth
    leaf = np.arange(leaves)
    suffix = (leaf[:, None] // base ** np.arange(depth - 1, -1, -1)[None, :]) % base
    best: AlphabetSummary | None = None
    kappas = []
    kprime = 0.0
    for node in range(offsets.shape[0]):
        sub_states = [x[node : node + 1] for x in states]
        levels = _tree_levels(kern, sub_states, offsets[node : node + 1], depth, base, split)
        gaps = np.zeros((leaves, length + 1, kern.n - 1))
        for i in range(split + 1):
            gaps[:, i] = prefix_levels[i][node // base ** (split - i)]
        for j, lev in enumerate(levels[1:], start=1):
            gaps[:, split + j] = lev[leaf // base ** (depth - j)]
        prefix = [(node // base ** (split - 1 - i)) % base for i in range(split)]
        choices = np.hstack([np.tile(prefix, (leaves, 1)), suffix]) if split else suffix
        summ = _summarize(name, gaps, choices, "exhaustive")
        kappas.append(summ.kappas)
        kprime = max(kprime, summ.max_kappa_prime)
        if best is None or summ.min_kappa < best.min_kappa:
            best = summ
    assert best is not None
    best.kappas = np.concatenate(kappas)
    best.rays = len(best.kappas)
    best.max_kappa_prime = kprime
    return best


@dataclass
class ProbeReport:
    kind: str
    length: int
    alphabets: list[AlphabetSummary]

    @property
    def min_kappa(self) -> float:
        return min((a.min_kappa for a in self.alphabets), default=float("nan"))

    def to_json(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "length": self.length,
            "min_kappa": self.min_kappa,
            "alphabets": [a.to_json() for a in self.alphabets],
        }


def _alphabet_kernel(rep: Representation, r: GenSet) -> _Kernel:
    return _Kernel(_letters(rep, r.letters))


def directed_anosov_probe(
    rep: Representation,
    r: GenSet | None = None,
    length: int = 16,
    mode: str = "auto",
    samples: int = 4096,
    seed: int = 0,
    threads: int = 1,
) -> ProbeReport:
    """Fitted (kappa, kappa') over all R- and R^-1-directed rays.

    ``mode`` is "exhaustive", "sampled" or "auto" (exhaustive up to length
    20).  Sampled rays use a fixed seed.
    """
    r = r or GenSet.standard()
    if length < 1:
        return ProbeReport("directed-anosov", length, [])
    if mode == "auto":
        mode = "exhaustive" if length <= EXHAUSTIVE_MAX_LENGTH else "sampled"
    jobs = [(str(r), r), (str(r.inverse()), r.inverse())]

    def run(job):
        name, gens = job
        kern = _alphabet_kernel(rep, gens)
        if mode == "exhaustive":
            return _exhaustive(kern, name, length)
        rng = np.random.default_rng(seed)
        choices = rng.integers(0, 2, size=(samples, length))
        return _summarize(name, _sampled_gaps(kern, choices), choices, "sampled")

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = list(pool.map(run, jobs))
    return ProbeReport("directed-anosov", length, results)


def sampled_ray_gaps(rep: Representation, r: GenSet, choices: np.ndarray) -> np.ndarray:
    """Gap arrays for explicit R-directed rays, through the sampled kernel."""
    return _sampled_gaps(_alphabet_kernel(rep, r), np.asarray(choices, dtype=int))


def exhaustive_ray_gaps(rep: Representation, r: GenSet, length: int) -> np.ndarray:
    """Gap arrays for all 2^L rays in lexicographic order of their choices,
    through the prefix-tree kernel."""
    kern = _alphabet_kernel(rep, r)
    states, offsets = kern.start()
    levels = _tree_levels(kern, states, offsets, length, 2, 0)
    leaves = np.arange(2**length)
    return np.stack([lev[leaves // 2 ** (length - i)] for i, lev in enumerate(levels)], axis=1)


# ---------------------------------------------------------------------------
# primitive rays


def primitive_stability_probe(
    rep: Representation, k_max: int = 4, l_max: int = 3, length: int = 24, strict: bool = True
) -> ProbeReport:
    """Fitted kappa over rays w^infinity for the primitive normal forms and
    their inverses, one letter per step."""
    words = primitive_representatives(k_max, l_max, strict=strict)
    words = sorted(set(words) | {inverse(w) for w in words}, key=lambda w: (len(w), w))
    letter_set = (1, -1, 2, -2)
    kern = _Kernel(_letters(rep, [(x,) for x in letter_set]))
    if length < 1:
        return ProbeReport("primitive", length, [])
    rays = [primitive_ray(w, length) for w in words]
    choices = np.array([[letter_set.index(x) for x in ray.word] for ray in rays])
    gaps = _sampled_gaps(kern, choices)
    s = gaps.min(axis=2)
    kappa, kprime = _fit_batch(s)
    worst = int(np.argmin(kappa))
    label = word_str(words[worst])
    summ = AlphabetSummary(
        "primitive", len(rays), float(kappa.min()), float(kprime.max()), label,
        GrowthSeries("primitive", label, gaps[worst]), kappa, "normal-forms",
    )
    return ProbeReport("primitive", length, [summ])


# ---------------------------------------------------------------------------
# distance to flats


def _qr(m: np.ndarray) -> np.ndarray:
    q, r = np.linalg.qr(m)
    return q * np.sign(np.diag(r))


def _attracting_basis(factors: Sequence[np.ndarray], iters: int = 60) -> np.ndarray:
    """Orthonormal basis of the attracting flag of the product of
    ``factors`` (applied right to left as written), by QR iteration that
    re-orthonormalises after every factor."""
    n = factors[0].shape[0]
    q = _qr(np.random.default_rng(1).standard_normal((n, n)))
    for _ in range(iters):
        prev = q
        for m in reversed(factors):
            q = _qr(m @ q)
        if np.max(np.abs(np.abs(np.sum(prev * q, axis=0)) - 1.0)) < 1e-15:
            break
    return q


def _product_flags(factors: Sequence[np.ndarray]) -> tuple[Flag, Flag]:
    plus = _attracting_basis(factors)
    minus = _attracting_basis([np.linalg.inv(m) for m in reversed(factors)])
    return Flag(Matrix.from_numpy(plus)), Flag(Matrix.from_numpy(minus))


@dataclass
class FlatSummary:
    alphabet: str
    rays: int
    sup: float
    first_half_sup: float
    tail_half_sup: float
    stabilized: bool
    profile: np.ndarray = field(repr=False, default_factory=lambda: np.zeros(0))

    def to_json(self) -> dict[str, Any]:
        return {
            "alphabet": self.alphabet,
            "rays": self.rays,
            "sup": self.sup,
            "first_half_sup": self.first_half_sup,
            "tail_half_sup": self.tail_half_sup,
            "stabilized": self.stabilized,
        }


def flat_distances_along(
    rep: Representation, r: GenSet, choices: Sequence[int], base: np.ndarray | None = None
) -> np.ndarray:
    """d(rho(eta_i) o, flat(w+, w-)) for i = 0..L, with w = rho(eta_L).

    rho(eta_i)^-1 w rho(eta_i) is the cyclically rotated word, so its fixed
    flags give the translated flat without forming ill-conditioned
    inverses of long products.  ``base`` moves the basepoint o to base . o.
    """
    mats = _letters(rep, r.letters)
    factors = [mats[c] for c in choices]
    length = len(factors)
    ps = []
    for i in range(length + 1):
        rotated = factors[i:] + factors[:i]
        plus, minus = _product_flags(rotated)
        ps.append(adapted_basis(minus, plus).to_numpy())
    ps = np.array(ps)
    if base is not None:
        ps = np.linalg.solve(base, ps)
    return flat_distance_batch(ps)


@dataclass
class FlatReport:
    length: int
    alphabets: list[FlatSummary]

    @property
    def sup(self) -> float:
        return max((a.sup for a in self.alphabets), default=0.0)

    @property
    def stabilized(self) -> bool:
        return all(a.stabilized for a in self.alphabets)

    def to_json(self) -> dict[str, Any]:
        return {
            "kind": "flat",
            "length": self.length,
            "sup": self.sup,
            "stabilized": self.stabilized,
            "alphabets": [a.to_json() for a in self.alphabets],
        }


def flat_boundedness_probe(
    rep: Representation, r: GenSet | None = None, length: int = 12, rays: int = 64, seed: int = 0
) -> FlatReport:
    """Sup over sampled R- and R^-1-directed rays of the distance from the
    orbit point to the flat of the ray's periodic extension."""
    r = r or GenSet.standard()
    out = []
    if length < 1:
        return FlatReport(length, [])
    for gens in (r, r.inverse()):
        rng = np.random.default_rng(seed)
        choices = rng.integers(0, 2, size=(rays, length))
        prof = np.array([flat_distances_along(rep, gens, c) for c in choices])
        half = (length + 1) // 2
        first, tail = float(prof[:, :half].max()), float(prof[:, half:].max())
        stabilized = tail <= 1.1 * first
        out.append(FlatSummary(str(gens), rays, float(prof.max()), first, tail, stabilized, prof))
    return FlatReport(length, out)


def flat_objective_midpoint_gap(p: np.ndarray, x: np.ndarray, y: np.ndarray) -> float:
    """f((x+y)/2) - (f(x)+f(y))/2 for the flat distance objective; convexity
    means this is never positive."""
    from .dynamics import _flat_objective

    p = p / np.linalg.norm(p, axis=0, keepdims=True)
    fx, fy, fm = (_flat_objective(p[None], z[None])[0] for z in (x, y, (x + y) / 2))
    return float(fm - (fx + fy) / 2)


# ---------------------------------------------------------------------------
# nested domains


@dataclass
class NestedStep:
    step: int
    letter: int
    switched: bool
    b_max: float
    ratio: float | None = None
    bound: float | None = None
    within_bound: bool | None = None
    diameter: float | None = None


@dataclass
class NestedReport:
    depth: int
    sequences: list[tuple[int, ...]]
    steps: list[list[NestedStep]]
    observed_d: float
    predicted_d: float
    exact: bool

    @property
    def d_matches(self) -> bool:
        return math.isclose(self.observed_d, self.predicted_d, rel_tol=1e-9)

    @property
    def ratios_ok(self) -> bool:
        return all(s.within_bound is not False for seq in self.steps for s in seq)

    @property
    def diameters_decreasing(self) -> bool:
        for seq in self.steps:
            d = [s.diameter for s in seq if s.diameter is not None]
            if any(b >= a for a, b in zip(d, d[1:])):
                return False
        return True

    def to_json(self) -> dict[str, Any]:
        return {
            "depth": self.depth,
            "observed_D": self.observed_d,
            "predicted_D": self.predicted_d,
            "D_matches": self.d_matches,
            "ratios_within_bound": self.ratios_ok,
            "diameters_decreasing": self.diameters_decreasing,
            "exact": self.exact,
            "sequences": [list(s) for s in self.sequences],
        }


def _b_max(h: Flag, f: Flag, f2: Flag, h2: Flag) -> Fraction | float:
    n = f.n
    return max(labourie_B(h, f, f2, h2, k) for k in range(1, n))


def _chart(a: Flag):
    """Affine coordinate on P^1 minus the point a^(1)."""
    v = a.basis
    ax, ay = v[0, 0], v[1, 0]

    def coord(p: Flag):
        x, y = p.basis[0, 0], p.basis[1, 0]
        den = ay * x - ax * y  # vanishes exactly at a
        return (ax * x + ay * y) / den

    return coord


def _ratio_within(ratio, d) -> bool:
    """ratio <= sqrt(D) / (1 + sqrt(D)), decided without square roots when
    exact: equivalent to ratio^2 <= D (1 - ratio)^2 with 0 <= ratio < 1."""
    if isinstance(ratio, Fraction) and isinstance(d, Fraction):
        return ratio < 1 and ratio * ratio <= d * (1 - ratio) ** 2
    sd = math.sqrt(float(d))
    return float(ratio) <= sd / (1 + sd) + 1e-9


def _principal_sine(u: Matrix, v: Matrix) -> float:
    qu, _ = np.linalg.qr(u.to_numpy())
    qv, _ = np.linalg.qr(v.to_numpy())
    s = np.linalg.svd(qu.T @ qv, compute_uv=False)
    return float(math.sqrt(max(0.0, 1.0 - float(s.min()) ** 2)))


def nested_domain_probe(
    rep: Representation,
    r: GenSet,
    sep: Separator,
    depth: int = 12,
    sequences: Sequence[Sequence[int]] | None = None,
    samples: int = 16,
    seed: int = 0,
) -> NestedReport:
    """Follow (F_i, H_i) = v_i (F, H), ordered so that (F', F_i, H_i, H') is
    positive, along letter sequences of the alphabet.

    Reports B_k(H_i, F_i, F_{i+1}, H_{i+1}) per step, the single-step
    prediction max over g and k of B_k(H, F, g X, g Y) with (X, Y) the
    positive ordering of (F, H), and in dimension 2 the interval ratios
    against sqrt(D)/(1 + sqrt(D)).
    """
    if depth > 12:
        raise ValueError("depth is limited to 12")
    gens = [rep.evaluate(w) for w in r.letters]
    exact = sep.exact and all(g.exact for g in gens)
    fp, f, h, hp = sep.flags
    if sequences is None:
        rng = np.random.default_rng(seed)
        sequences = [tuple([c] * depth) for c in range(len(gens))]
        sequences += [tuple(int(x) for x in row) for row in rng.integers(0, len(gens), size=(samples, depth))]
    sequences = [tuple(s) for s in sequences]

    def order(x: Flag, y: Flag) -> tuple[Flag, Flag, bool]:
        if is_positive_tuple([fp, x, y, hp]):
            return x, y, False
        return y, x, True

    predicted = []
    for g in gens:
        x, y, _ = order(g(f), g(h))
        predicted.append(_b_max(h, f, x, y))
    chart = _chart(fp) if f.n == 2 else None
    all_steps = []
    observed = None
    for seq in sequences:
        v = None
        cur_f, cur_h = f, h
        steps = []
        for i, c in enumerate(seq, start=1):
            v = gens[c] if v is None else v @ gens[c]
            nf, nh, sw = order(v(f), v(h))
            b = _b_max(cur_h, cur_f, nf, nh)
            step = NestedStep(i, c, sw, float(b))
            observed = b if observed is None else max(observed, b)
            if chart is not None:
                p1, p2, q1, q2 = chart(cur_h), chart(cur_f), chart(nf), chart(nh)
                ratio = abs((q1 - q2) / (p1 - p2))
                step.ratio = float(ratio)
                sd = math.sqrt(float(b))
                step.bound = sd / (1 + sd)
                step.within_bound = _ratio_within(ratio, b)
                step.diameter = float(abs(q1 - q2))
            else:
                step.diameter = max(_principal_sine(nf.subspace(k), nh.subspace(k)) for k in range(1, f.n))
            steps.append(step)
            cur_f, cur_h = nf, nh
        all_steps.append(steps)
    used = sorted({c for seq in sequences for c in seq})
    pred = max(float(predicted[c]) for c in used) if used else float("nan")
    return NestedReport(depth, sequences, all_steps, float(observed) if observed is not None else float("nan"), pred, exact)


# ---------------------------------------------------------------------------
# output


def csv_header(n: int, with_flat: bool = False) -> list[str]:
    cols = ["alphabet", "ray", "i", "gap_min"] + [f"gap_k{k}" for k in range(1, n)]
    return cols + (["flat_dist"] if with_flat else [])


def write_growth_csv(out, n: int, series: Iterable[GrowthSeries], flat: dict[str, np.ndarray] | None = None) -> None:
    """One row per (ray, i).  ``flat`` maps a ray label to distances."""
    w = csv.writer(out, lineterminator="\n")
    w.writerow(csv_header(n, flat is not None))
    for s in series:
        for i, row in enumerate(s.gaps):
            rec = [s.alphabet, s.ray, i, repr(float(row.min()))] + [repr(float(x)) for x in row]
            if flat is not None:
                d = flat.get(s.ray)
                rec.append("" if d is None or i >= len(d) else repr(float(d[i])))
            w.writerow(rec)


def growth_csv_string(n: int, series: Iterable[GrowthSeries]) -> str:
    buf = io.StringIO()
    write_growth_csv(buf, n, series)
    return buf.getvalue()


def svg_line_plot(values: Sequence[float], title: str = "", width: int = 480, height: int = 300) -> str:
    """Single-series line plot of values against their index."""
    pad = 40
    vals = [float(v) for v in values]
    hi = max(vals) if vals else 1.0
    hi = hi if hi > 0 else 1.0
    count = max(len(vals) - 1, 1)

    def xy(i, v):
        x = pad + (width - 2 * pad) * i / count
        y = height - pad - (height - 2 * pad) * v / hi
        return f"{x:.2f},{y:.2f}"

    pts = " ".join(xy(i, v) for i, v in enumerate(vals))
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">\n'
        f'<text x="{pad}" y="20" font-size="12">{title}</text>\n'
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>\n'
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>\n'
        f'<text x="{width - pad}" y="{height - pad + 15}" font-size="10">i = {len(vals) - 1}</text>\n'
        f'<text x="2" y="{pad}" font-size="10">{hi:.3g}</text>\n'
        f'<polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{pts}"/>\n'
        "</svg>\n"
    )
