"""Projective transformations: spectral classification, fixed flags, Cartan
and Jordan projections, distances to flats and the Veronese embedding."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .flags import Flag
from .linalg import (
    ComplexSpectrum,
    LinalgError,
    Matrix,
    ModulusTie,
    SingularMatrix,
    charpoly,
    count_real_roots,
    log_singular_values,
    poly_gcd,
    real_eigen,
    squarefree_part,
)
from .positivity import adapted_basis


class NotLoxodromic(Exception):
    """The transformation has no well-defined attracting/repelling flags."""


class ProjTransform:
    """Element of PGL(n, R) stored through a matrix representative."""

    __slots__ = ("matrix", "__dict__")

    def __init__(self, matrix: Matrix):
        if matrix.exact:
            if matrix.det() == 0:
                raise SingularMatrix("representative is singular")
        elif matrix.rank() < matrix.n:
            raise SingularMatrix("representative is singular")
        self.matrix = matrix

    @classmethod
    def of(cls, rows, exact: bool | None = None) -> "ProjTransform":
        return cls(Matrix(rows, exact))

    @property
    def n(self) -> int:
        return self.matrix.n

    @property
    def exact(self) -> bool:
        return self.matrix.exact

    @cached_property
    def normalized(self) -> np.ndarray:
        """Float representative with |det| = 1."""
        a = self.matrix.to_numpy()
        d = abs(float(self.matrix.det()))
        return a / d ** (1.0 / self.n)

    @cached_property
    def _inverse(self) -> "ProjTransform":
        return ProjTransform(self.matrix.inverse())

    def inverse(self) -> "ProjTransform":
        return self._inverse

    def __matmul__(self, other: "ProjTransform") -> "ProjTransform":
        return ProjTransform(self.matrix @ other.matrix)

    def __pow__(self, k: int) -> "ProjTransform":
        return ProjTransform(self.matrix**k)

    def act(self, flag: Flag) -> Flag:
        return Flag(self.matrix @ flag.basis)

    def __call__(self, flag: Flag) -> Flag:
        return self.act(flag)

    def to_float(self) -> "ProjTransform":
        return ProjTransform(self.matrix.to_float())

    def same_as(self, other: "ProjTransform") -> bool:
        """Equal up to a nonzero scalar."""
        a, b = self.matrix, other.matrix
        if a.shape != b.shape:
            return False
        pairs = [(a[i, j], b[i, j]) for i in range(a.n) for j in range(a.n)]
        ref = next(((x, y) for x, y in pairs if x != 0), None)
        if ref is None:
            return False
        x0, y0 = ref
        if a.exact and b.exact:
            return all(x * y0 == y * x0 for x, y in pairs)
        scale = max(a.max_abs(), 1e-300) * max(b.max_abs(), 1e-300)
        return all(abs(float(x) * float(y0) - float(y) * float(x0)) <= 1e-9 * scale for x, y in pairs)

    def __repr__(self) -> str:
        return f"ProjTransform({self.matrix!r})"


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class Classification:
    loxodromic: bool | None
    positive: bool
    exact: bool
    reason: str = ""

    def to_json(self) -> dict:
        return {"loxodromic": self.loxodromic, "positive": self.positive, "exact": self.exact, "reason": self.reason}


def classify(g: ProjTransform) -> Classification:
    """Loxodromic means real eigenvalues with pairwise distinct moduli;
    positive additionally requires all eigenvalues to share a sign.

    The exact backend decides this from the characteristic polynomial alone:
    it is square-free with n real roots, and shares no root with p(-x).
    """
    m = g.matrix
    n = m.n
    if m.exact:
        p = charpoly(m)
        if len(squarefree_part(p)) - 1 < n:
            return Classification(False, False, True, "repeated eigenvalue")
        if count_real_roots(p) < n:
            return Classification(False, False, True, "non-real eigenvalue")
        minus = [c if i % 2 == 0 else -c for i, c in enumerate(p)]
        if len(poly_gcd(p, minus)) > 1:
            return Classification(False, False, True, "eigenvalues r and -r")
        npos = count_real_roots(p, Fraction(0), None)
        return Classification(True, npos in (0, n), True, "")
    try:
        pairs = real_eigen(m)
    except ComplexSpectrum:
        return Classification(False, False, False, "non-real eigenvalue")
    except ModulusTie:
        return Classification(None, False, False, "eigenvalue moduli within tolerance")
    signs = {v.value > 0 for v in pairs}
    return Classification(True, len(signs) == 1, False, "")


def fixed_flags(g: ProjTransform) -> tuple[Flag, Flag]:
    """Attracting and repelling flags (g_+, g_-) of a loxodromic element.

    For the exact backend the flags are exact when the eigenvalues are
    rational and otherwise rational approximations far below double
    precision.
    """
    try:
        pairs = real_eigen(g.matrix)
    except (ComplexSpectrum, ModulusTie) as exc:
        raise NotLoxodromic(str(exc)) from exc
    vecs = [p.vector for p in pairs]
    exact = g.matrix.exact
    plus = Flag(Matrix.from_columns(vecs, exact))
    minus = Flag(Matrix.from_columns(vecs[::-1], exact))
    return plus, minus


def fixed_flags_are_exact(g: ProjTransform) -> bool:
    if not g.exact:
        return False
    try:
        return all(p.exact for p in real_eigen(g.matrix))
    except LinalgError:
        return False


# ---------------------------------------------------------------------------
# projections and distances


def _as_matrix(g) -> Matrix:
    return g.matrix if isinstance(g, ProjTransform) else g


def cartan(g) -> np.ndarray:
    """Log singular values of the |det| = 1 representative, non-increasing."""
    logs = log_singular_values(_as_matrix(g))
    return logs - logs.mean()


def jordan(g) -> np.ndarray:
    """Log moduli of eigenvalues of the |det| = 1 representative."""
    vals = np.linalg.eigvals(_as_matrix(g).to_numpy())
    logs = np.sort(np.log(np.abs(vals)))[::-1]
    return logs - logs.mean()


def root_gaps(v: Sequence[float]) -> np.ndarray:
    """Simple roots alpha_k(v) = v_k - v_{k+1}."""
    v = np.asarray(v, dtype=float)
    return v[:-1] - v[1:]


def weyl_distance(g, h) -> np.ndarray:
    """Weyl-chamber valued distance between g.o and h.o."""
    gm, hm = _as_matrix(g), _as_matrix(h)
    return cartan(gm.inverse() @ hm)


def log_sv_batch(mats: np.ndarray) -> np.ndarray:
    s = np.linalg.svd(mats, compute_uv=False)
    return np.log(s)


def _zero_sum_basis(n: int) -> np.ndarray:
    # Orthonormal basis of {x : sum x = 0}, as columns.
    a = np.eye(n)[:, :-1] - np.eye(n)[:, 1:]
    q, _ = np.linalg.qr(a)
    return q


GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _flat_objective(p: np.ndarray, x: np.ndarray) -> np.ndarray:
    m = p * np.exp(x)[:, None, :]
    logs = log_sv_batch(m)
    logs = logs - logs.mean(axis=1, keepdims=True)
    return np.sqrt((logs**2).sum(axis=1))


def _golden_batch(fun, lo: np.ndarray, hi: np.ndarray, xtol: float) -> np.ndarray:
    """Vectorised golden-section search; returns the final bracket midpoints."""
    c = hi - GOLDEN * (hi - lo)
    d = lo + GOLDEN * (hi - lo)
    fc, fd = fun(c), fun(d)
    width = float(np.max(hi - lo))
    iters = max(1, int(math.ceil(math.log(max(width, xtol) / xtol) / -math.log(GOLDEN))))
    for _ in range(iters):
        left = fc < fd
        hi = np.where(left, d, hi)
        lo = np.where(left, lo, c)
        new_c = np.where(left, hi - GOLDEN * (hi - lo), d)
        new_d = np.where(left, c, lo + GOLDEN * (hi - lo))
        fp = fun(np.where(left, new_c, new_d))
        fc, fd = np.where(left, fp, fd), np.where(left, fc, fp)
        c, d = new_c, new_d
    return (lo + hi) / 2.0


def flat_distance_batch(p: np.ndarray, tol: float = 1e-6, seeds: int = 3, max_sweeps: int = 100) -> np.ndarray:
    """Distance from the base point to the flat spanned by the columns of
    each P in the batch: min over zero-sum x of |mu(P diag(e^x))|.

    Coordinate descent over an orthonormal basis of the zero-sum subspace
    with a golden-section line search per coordinate.  The objective is
    convex and 1-Lipschitz in x, so a minimiser lies within 2 f(x) of x,
    which bounds every bracket.  Extra seeds guard against slow zig-zags.
    """
    p = np.asarray(p, dtype=float)
    if p.ndim == 2:
        p = p[None]
    batch, n, _ = p.shape
    # Column scaling only reparametrises the flat.
    p = p / np.linalg.norm(p, axis=1, keepdims=True)
    basis = _zero_sum_basis(n)
    rng = np.random.default_rng(0)
    best = np.full(batch, np.inf)
    for seed in range(seeds):
        y = np.zeros((batch, n - 1)) if seed == 0 else rng.normal(scale=0.5 * seed, size=(batch, n - 1))
        fy = _flat_objective(p, y @ basis.T)
        for _ in range(max_sweeps):
            before = fy.copy()
            for j in range(n - 1):

                def along(val, j=j):
                    yy = y.copy()
                    yy[:, j] = val
                    return _flat_objective(p, yy @ basis.T)

                radius = 2.0 * fy + 1e-3
                cand = _golden_batch(along, y[:, j] - radius, y[:, j] + radius, 1e-8)
                fc = along(cand)
                better = fc < fy
                y[:, j] = np.where(better, cand, y[:, j])
                fy = np.where(better, fc, fy)
            if np.max(before - fy) < 1e-3 * tol:
                break
        best = np.minimum(best, fy)
    return best


def flat_distance(f_plus: Flag, f_minus: Flag, base: Matrix | None = None, tol: float = 1e-6) -> float:
    """Distance from the base point (the standard inner product, or its
    image under ``base``) to the flat asymptotic to the transverse pair."""
    p = adapted_basis(f_minus, f_plus)
    if base is not None:
        p = base.inverse() @ p
    return float(flat_distance_batch(p.to_numpy()[None], tol=tol)[0])


# ---------------------------------------------------------------------------
# Veronese embedding


def _poly_mul(a: list, b: list) -> list:
    out = [0 * a[0]] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def veronese_transform(g2, n: int) -> Matrix:
    """Action of a 2x2 matrix on degree n-1 binary forms, in the basis
    f1^(n-1-i) f2^i."""
    m = _as_matrix(g2)
    if m.shape != (2, 2):
        raise ValueError("need a 2x2 matrix")
    a, b = m[0, 0], m[0, 1]
    c, d = m[1, 0], m[1, 1]
    one = Fraction(1) if m.exact else 1.0
    cols = []
    for j in range(n):
        # image of f1^(n-1-j) f2^j; polynomials in f2 with implicit f1
        poly = [one]
        for _ in range(n - 1 - j):
            poly = _poly_mul(poly, [a, c])
        for _ in range(j):
            poly = _poly_mul(poly, [b, d])
        cols.append(poly)
    return Matrix.from_columns(cols, m.exact)


def veronese_flag(x, n: int, exact: bool = True) -> Flag:
    """Osculating flag of the Veronese curve at the point x of RP^1.

    ``x`` is either a scalar s (meaning [s : 1]) or a homogeneous pair.
    """
    if isinstance(x, (tuple, list)):
        x0, x1 = x
        if x1 == 0:
            return Flag.ascending(n, exact)
        s = x0 / x1
    else:
        s = x
    if exact:
        s = Fraction(s)
    shear = Matrix([[1, s], [0, 1]], exact)
    return Flag(veronese_transform(shear, n) @ Flag.descending(n, exact).basis)


def osculating_flag(g: ProjTransform, p: Sequence[float], t: float) -> Flag:
    """Flag of the curve t -> g^t p at time t (n = 3, g positive
    loxodromic): the point, its tangent line and the whole space."""
    if g.n != 3:
        raise ValueError("osculating flags are implemented for n = 3")
    cls = classify(g)
    if not (cls.loxodromic and cls.positive):
        raise NotLoxodromic("need a positive loxodromic element")
    a = g.matrix.to_numpy()
    vals, vecs = np.linalg.eig(a)
    vals, vecs = vals.real, vecs.real
    order = np.argsort(-np.abs(vals))
    lam = np.abs(vals[order])
    e = vecs[:, order]
    c = np.linalg.solve(e, np.asarray(p, dtype=float))
    if np.any(np.abs(c) < 1e-12 * np.abs(c).max()):
        raise ValueError("p lies on an eigenspace sum")
    logs = np.log(lam)
    w = lam**t * c
    xi = e @ w
    d1 = e @ (logs * w)
    d2 = e @ (logs**2 * w)
    return Flag(Matrix.from_columns([xi, d1, d2], exact=False))
