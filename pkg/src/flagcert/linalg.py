"""Dual-backend dense linear algebra for small matrices (n <= 8).

Entries are either all ``Fraction`` (exact backend) or all ``float`` (float
backend).  Exact arithmetic is plain Python; float spectral work goes through
numpy.  Signs are three-valued on the float side: a value inside the tolerance
band is *indeterminate* rather than zero.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

MAX_DIM = 8
# Relative tolerance for float sign decisions.
FLOAT_EPS = 1e-10


class LinalgError(Exception):
    """Base class for linear-algebra failures."""


class DimensionMismatch(LinalgError):
    """Operand shapes are incompatible."""


class SingularMatrix(LinalgError):
    """A matrix that must be invertible is not."""


class ComplexSpectrum(LinalgError):
    """The matrix has a non-real eigenvalue."""


class ModulusTie(LinalgError):
    """Two eigenvalues share a modulus, so the ordering is ambiguous."""


class IllConditioned(LinalgError):
    """A float computation lost too much precision to be trusted."""


class IndeterminateSign(LinalgError):
    """A float quantity is inside the tolerance band around zero."""


def to_fraction(x) -> Fraction:
    """Parse an int, Fraction, float or ``"p/q"`` string exactly."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite entry {x!r}")
        return Fraction(x)
    if isinstance(x, np.integer):
        return Fraction(int(x))
    if isinstance(x, np.floating):
        return Fraction(float(x))
    raise TypeError(f"cannot convert {type(x).__name__} to Fraction")


def fraction_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def sign3(x, eps: float = 0.0) -> int:
    """Sign of ``x``; 0 means exactly zero (exact) or indeterminate (float)."""
    if isinstance(x, Fraction):
        return (x > 0) - (x < 0)
    if abs(x) <= eps:
        return 0
    return 1 if x > 0 else -1


def _is_exact_entry(x) -> bool:
    return isinstance(x, (int, Fraction, str, np.integer)) and not isinstance(x, bool)


class Matrix:
    """Immutable dense matrix with an exact or float backend.

    Rectangular shapes are allowed so that column bases of subspaces can be
    stored as ``n x k`` matrices.
    """

    __slots__ = ("_rows", "exact", "__dict__")

    def __init__(self, rows: Iterable[Iterable], exact: bool | None = None):
        raw = [list(r) for r in rows]
        if not raw:
            raise DimensionMismatch("empty matrix")
        width = len(raw[0])
        if any(len(r) != width for r in raw):
            raise DimensionMismatch("ragged rows")
        if len(raw) > MAX_DIM and width > MAX_DIM:
            raise DimensionMismatch(f"dimension above {MAX_DIM}")
        if exact is None:
            exact = all(_is_exact_entry(x) for r in raw for x in r)
        if exact:
            self._rows = tuple(tuple(to_fraction(x) for x in r) for r in raw)
        else:
            rows_f = tuple(tuple(float(x) for x in r) for r in raw)
            for r in rows_f:
                for x in r:
                    if not math.isfinite(x):
                        raise ValueError("non-finite entry")
            self._rows = rows_f
        self.exact = exact

    # construction -----------------------------------------------------
    @classmethod
    def identity(cls, n: int, exact: bool = True) -> "Matrix":
        one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
        return cls._raw([[one if i == j else zero for j in range(n)] for i in range(n)], exact)

    @classmethod
    def diag(cls, entries: Sequence, exact: bool | None = None) -> "Matrix":
        n = len(entries)
        if exact is None:
            exact = all(_is_exact_entry(x) for x in entries)
        zero = Fraction(0) if exact else 0.0
        return cls([[entries[i] if i == j else zero for j in range(n)] for i in range(n)], exact)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], exact: bool | None = None) -> "Matrix":
        return cls([list(r) for r in zip(*cols)], exact)

    @classmethod
    def from_numpy(cls, arr) -> "Matrix":
        return cls(np.asarray(arr, dtype=float).tolist(), exact=False)

    @classmethod
    def _raw(cls, rows, exact: bool) -> "Matrix":
        m = cls.__new__(cls)
        m._rows = tuple(tuple(r) for r in rows)
        m.exact = exact
        return m

    # basic access -----------------------------------------------------
    @property
    def rows(self) -> tuple:
        return self._rows

    @property
    def shape(self) -> tuple[int, int]:
        return len(self._rows), len(self._rows[0])

    @property
    def n(self) -> int:
        r, c = self.shape
        if r != c:
            raise DimensionMismatch("matrix is not square")
        return r

    def __getitem__(self, idx):
        i, j = idx
        return self._rows[i][j]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self._rows)

    def columns(self, idx: Iterable[int]) -> "Matrix":
        idx = list(idx)
        if not idx:
            raise DimensionMismatch("no columns selected")
        return Matrix._raw([[r[j] for j in idx] for r in self._rows], self.exact)

    def first_columns(self, k: int) -> "Matrix":
        return self.columns(range(k))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix._raw([[self._rows[i][j] for j in cols] for i in rows], self.exact)

    @property
    def T(self) -> "Matrix":
        return Matrix._raw(list(zip(*self._rows)), self.exact)

    def hstack(self, *others: "Matrix") -> "Matrix":
        mats = [self, *others]
        exact = all(m.exact for m in mats)
        if len({m.shape[0] for m in mats}) != 1:
            raise DimensionMismatch("row counts differ")
        mats = [m if m.exact == exact else m.to_float() for m in mats]
        return Matrix._raw([sum((m._rows[i] for m in mats), ()) for i in range(self.shape[0])], exact)

    def to_float(self) -> "Matrix":
        if not self.exact:
            return self
        return Matrix._raw([[float(x) for x in r] for r in self._rows], False)

    def to_exact(self) -> "Matrix":
        if self.exact:
            return self
        return Matrix._raw([[Fraction(x) for x in r] for r in self._rows], True)

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(x) for x in r] for r in self._rows], dtype=float)

    def max_abs(self) -> float:
        return max(abs(float(x)) for r in self._rows for x in r)

    def eps(self) -> float:
        return FLOAT_EPS * max(self.max_abs(), 1e-300)

    # arithmetic -------------------------------------------------------
    def _coerce(self, other: "Matrix") -> tuple["Matrix", "Matrix", bool]:
        exact = self.exact and other.exact
        a = self if self.exact == exact else self.to_float()
        b = other if other.exact == exact else other.to_float()
        return a, b, exact

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        a, b, exact = self._coerce(other)
        if a.shape[1] != b.shape[0]:
            raise DimensionMismatch(f"{a.shape} @ {b.shape}")
        bc = list(zip(*b._rows))
        zero = Fraction(0) if exact else 0.0
        out = [[sum((x * y for x, y in zip(r, c)), zero) for c in bc] for r in a._rows]
        return Matrix._raw(out, exact)

    def __add__(self, other: "Matrix") -> "Matrix":
        a, b, exact = self._coerce(other)
        if a.shape != b.shape:
            raise DimensionMismatch("shapes differ")
        return Matrix._raw([[x + y for x, y in zip(r, s)] for r, s in zip(a._rows, b._rows)], exact)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + other.scale(-1)

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def scale(self, c) -> "Matrix":
        if self.exact and _is_exact_entry(c):
            c = to_fraction(c)
            return Matrix._raw([[c * x for x in r] for r in self._rows], True)
        m = self.to_float()
        c = float(c)
        return Matrix._raw([[c * x for x in r] for r in m._rows], False)

    def apply(self, v: Sequence) -> tuple:
        return tuple(sum(x * y for x, y in zip(r, v)) for r in self._rows)

    def __pow__(self, k: int) -> "Matrix":
        if k < 0:
            return self.inverse() ** (-k)
        result = Matrix.identity(self.n, self.exact)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        if self.exact:
            body = "; ".join(" ".join(fraction_str(x) for x in r) for r in self._rows)
        else:
            body = "; ".join(" ".join(f"{x:.6g}" for x in r) for r in self._rows)
        return f"Matrix[{'exact' if self.exact else 'float'}]({body})"

    # elimination ------------------------------------------------------
    def _eliminate(self):
        """Row-reduce to echelon form.

        Returns (echelon rows, pivot columns, determinant sign/scale factor).
        Float pivoting is partial; exact pivoting takes the first nonzero.
        """
        rows = [list(r) for r in self._rows]
        nr, nc = self.shape
        pivots: list[int] = []
        factor = Fraction(1) if self.exact else 1.0
        tol = 0.0 if self.exact else self.eps()
        r = 0
        for c in range(nc):
            if r >= nr:
                break
            if self.exact:
                piv = next((i for i in range(r, nr) if rows[i][c] != 0), None)
            else:
                piv = max(range(r, nr), key=lambda i: abs(rows[i][c]))
                if abs(rows[piv][c]) <= tol:
                    piv = None
            if piv is None:
                continue
            if piv != r:
                rows[r], rows[piv] = rows[piv], rows[r]
                factor = -factor
            p = rows[r][c]
            for i in range(r + 1, nr):
                if rows[i][c] != 0:
                    f = rows[i][c] / p
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
                    rows[i][c] = 0 * p
            pivots.append(c)
            r += 1
        return rows, pivots, factor

    @cached_property
    def _det(self):
        n = self.n
        if self.exact:
            rows, pivots, factor = self._eliminate()
            if len(pivots) < n:
                return Fraction(0)
            d = factor
            for i in range(n):
                d *= rows[i][i]
            return d
        return float(np.linalg.det(self.to_numpy()))

    def det(self):
        """Determinant in the matrix's backend."""
        return self._det

    def rank(self) -> int:
        if self.exact:
            return len(self._eliminate()[1])
        s = np.linalg.svd(self.to_numpy(), compute_uv=False)
        return int(np.sum(s > FLOAT_EPS * max(s[0], 1e-300)))

    def rref(self):
        """Reduced row echelon form and pivot columns (exact backend)."""
        rows, pivots, _ = self._eliminate()
        rows = rows[: len(pivots)]
        for k in range(len(pivots) - 1, -1, -1):
            c = pivots[k]
            p = rows[k][c]
            rows[k] = [x / p for x in rows[k]]
            for i in range(k):
                f = rows[i][c]
                if f != 0:
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[k])]
        return rows, pivots

    def nullspace(self) -> list[tuple]:
        """Basis of the right kernel."""
        nc = self.shape[1]
        if not self.exact:
            u, s, vt = np.linalg.svd(self.to_numpy())
            tol = FLOAT_EPS * max(s[0] if len(s) else 0.0, 1e-300)
            r = int(np.sum(s > tol))
            return [tuple(float(x) for x in vt[i]) for i in range(r, nc)]
        rows, pivots = self.rref()
        free = [c for c in range(nc) if c not in pivots]
        basis = []
        for f in free:
            v = [Fraction(0)] * nc
            v[f] = Fraction(1)
            for k, c in enumerate(pivots):
                v[c] = -rows[k][f]
            basis.append(tuple(v))
        return basis

    def inverse(self) -> "Matrix":
        n = self.n
        if not self.exact:
            a = self.to_numpy()
            if np.linalg.cond(a) > 1e14:
                raise SingularMatrix("matrix is numerically singular")
            return Matrix.from_numpy(np.linalg.inv(a))
        aug = self.hstack(Matrix.identity(n, True))
        rows, pivots = aug.rref()
        if pivots[:n] != list(range(n)) or len(pivots) < n or pivots[n - 1] != n - 1:
            raise SingularMatrix("matrix is singular")
        return Matrix._raw([r[n:] for r in rows], True)

    def solve(self, b: Sequence) -> tuple:
        """Solve ``self @ x = b`` for square invertible ``self``."""
        n = self.n
        if not self.exact or not all(_is_exact_entry(x) for x in b):
            x = np.linalg.solve(self.to_numpy(), np.asarray([float(v) for v in b]))
            return tuple(float(v) for v in x)
        aug = self.hstack(Matrix.from_columns([[to_fraction(v) for v in b]], True))
        rows, pivots = aug.rref()
        if pivots != list(range(n)):
            raise SingularMatrix("matrix is singular")
        return tuple(r[n] for r in rows)

    def minor(self, rows: Sequence[int], cols: Sequence[int]):
        """Determinant of the submatrix on ``rows`` x ``cols`` (0-based)."""
        if len(rows) != len(cols):
            raise DimensionMismatch("minor needs as many rows as columns")
        if not rows:
            return Fraction(1) if self.exact else 1.0
        return self.submatrix(rows, cols).det()

    def all_minors(self, k: int) -> dict:
        """All k x k minors keyed by (rows, cols), by Laplace recursion."""
        nr, nc = self.shape
        one = Fraction(1) if self.exact else 1.0
        prev: dict = {((), ()): one}
        for size in range(1, k + 1):
            cur = {}
            for rows in itertools.combinations(range(nr), size):
                top, rest = rows[0], rows[1:]
                for cols in itertools.combinations(range(nc), size):
                    total = 0 * one
                    for s, c in enumerate(cols):
                        x = self._rows[top][c]
                        if x != 0:
                            sub = prev[(rest, cols[:s] + cols[s + 1:])]
                            total = total + x * sub if s % 2 == 0 else total - x * sub
                    cur[(rows, cols)] = total
            prev = cur
        return prev

    def compound(self, k: int) -> "Matrix":
        """k-th compound matrix: all k x k minors in lexicographic order."""
        nr, nc = self.shape
        minors = self.all_minors(k)
        rsets = list(itertools.combinations(range(nr), k))
        csets = list(itertools.combinations(range(nc), k))
        return Matrix._raw([[minors[(r, c)] for c in csets] for r in rsets], self.exact)


def stack_columns(*parts: Matrix) -> Matrix:
    """Concatenate column blocks (skipping ``None`` for empty blocks)."""
    parts = [p for p in parts if p is not None]
    if not parts:
        raise DimensionMismatch("nothing to stack")
    return parts[0].hstack(*parts[1:])


# ---------------------------------------------------------------------------
# polynomials over Q (coefficients low -> high)


def _trim(p: list) -> list:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def poly_eval(p: Sequence, x):
    acc = 0 * x
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_deriv(p: Sequence) -> list:
    return _trim([i * p[i] for i in range(1, len(p))] or [Fraction(0)])


def poly_divmod(a: Sequence, b: Sequence) -> tuple[list, list]:
    a = list(a)
    b = _trim(list(b))
    if len(b) == 1 and b[0] == 0:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and any(c != 0 for c in a):
        shift = len(a) - len(b)
        f = a[-1] / b[-1]
        q[shift] = f
        for i, c in enumerate(b):
            a[i + shift] -= f * c
        a.pop()
        _trim(a) if a else a.append(Fraction(0))
    return _trim(q), _trim(a or [Fraction(0)])


def poly_gcd(a: Sequence, b: Sequence) -> list:
    a, b = _trim(list(a)), _trim(list(b))
    while not (len(b) == 1 and b[0] == 0):
        a, b = b, poly_divmod(a, b)[1]
    lead = a[-1]
    return [c / lead for c in a]


def charpoly(m: Matrix) -> list:
    """Coefficients of det(x I - M), low -> high, via Faddeev-LeVerrier."""
    n = m.n
    if not m.exact:
        c = np.poly(m.to_numpy())[::-1]
        return [float(x) for x in c]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    ident = Matrix.identity(n, True)
    mk = ident.scale(0)
    c = Fraction(1)
    for k in range(1, n + 1):
        mk = m @ mk + ident.scale(c)
        prod = m @ mk
        c = -sum(prod[i, i] for i in range(n)) / k
        coeffs[n - k] = c
    return coeffs


def _sturm_chain(p: list) -> list[list]:
    chain = [p, poly_deriv(p)]
    while not (len(chain[-1]) == 1 and chain[-1][0] == 0):
        r = poly_divmod(chain[-2], chain[-1])[1]
        if len(r) == 1 and r[0] == 0:
            break
        chain.append([-c for c in r])
    return chain


def _variations(chain, x) -> int:
    signs = [sign3(poly_eval(p, x)) for p in chain]
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _root_bound(p: list) -> Fraction:
    lead = abs(p[-1])
    return 1 + max((abs(c) / lead for c in p[:-1]), default=Fraction(0))


def squarefree_part(p: list) -> list:
    g = poly_gcd(p, poly_deriv(p))
    return poly_divmod(p, g)[0] if len(g) > 1 else list(p)


def count_real_roots(p: list, lo=None, hi=None) -> int:
    """Number of distinct real roots of p in (lo, hi]; whole line by default."""
    sq = squarefree_part(p)
    chain = _sturm_chain(sq)
    b = _root_bound(sq)
    lo = -b - 1 if lo is None else lo
    hi = b + 1 if hi is None else hi
    return _variations(chain, lo) - _variations(chain, hi)


def real_roots(p: list, width: Fraction = Fraction(1, 2**160)) -> list[tuple[Fraction, bool]]:
    """Isolate and refine the distinct real roots of a rational polynomial.

    Returns (root, exact) pairs sorted increasingly.  Rational roots are found
    exactly; irrational ones are returned as the midpoint of an isolating
    interval narrower than ``width``.
    """
    sq = squarefree_part([to_fraction(c) for c in p])
    if len(sq) == 1:
        return []
    chain = _sturm_chain(sq)
    b = _root_bound(sq) + 1
    out: list[tuple[Fraction, bool]] = []
    stack = [(-b, b)]
    while stack:
        lo, hi = stack.pop()
        cnt = _variations(chain, lo) - _variations(chain, hi)
        if cnt == 0:
            continue
        if cnt > 1:
            mid = (lo + hi) / 2
            stack.extend([(lo, mid), (mid, hi)])
            continue
        out.append(_refine_root(sq, lo, hi, width))
    out.sort()
    return out


def _refine_root(p: list, lo: Fraction, hi: Fraction, width: Fraction) -> tuple[Fraction, bool]:
    # The root lies in (lo, hi]; bisect, trying small-denominator rationals
    # at a few checkpoints so rational eigenvalues come out exact.
    if poly_eval(p, hi) == 0:
        return hi, True
    slo = sign3(poly_eval(p, lo))
    checkpoints = {Fraction(1, 2**20): 10**3, Fraction(1, 2**44): 10**6, Fraction(1, 2**70): 10**10}
    while hi - lo > width:
        for w, d in list(checkpoints.items()):
            if hi - lo <= w:
                del checkpoints[w]
                cand = ((lo + hi) / 2).limit_denominator(d)
                if lo < cand <= hi and poly_eval(p, cand) == 0:
                    return cand, True
        mid = (lo + hi) / 2
        v = poly_eval(p, mid)
        if v == 0:
            return mid, True
        if sign3(v) == slo:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2, False


@dataclass(frozen=True)
class EigenPair:
    value: Fraction | float
    vector: tuple
    exact: bool


def real_eigen(m: Matrix) -> list[EigenPair]:
    """Real eigenpairs ordered by strictly decreasing modulus.

    Raises ComplexSpectrum for a non-real eigenvalue, ModulusTie when two
    eigenvalues share a modulus (including repeated eigenvalues).
    """
    n = m.n
    if m.exact:
        p = charpoly(m)
        sq = squarefree_part(p)
        if len(sq) - 1 < n:
            raise ModulusTie("repeated eigenvalue")
        roots = real_roots(p)
        if len(roots) < n:
            raise ComplexSpectrum("characteristic polynomial has non-real roots")
        minus = [c if i % 2 == 0 else -c for i, c in enumerate(p)]
        g = poly_gcd(p, minus)
        if len(g) > 1:
            raise ModulusTie("eigenvalues r and -r both occur")
        roots.sort(key=lambda rv: -abs(rv[0]))
        out = []
        for value, is_exact in roots:
            shifted = m - Matrix.identity(n, True).scale(value)
            if is_exact:
                ker = shifted.nullspace()
                vec = _normalise_vector(ker[0])
            else:
                vec = _inverse_iteration_exact(shifted)
            out.append(EigenPair(value, vec, is_exact))
        return out
    a = m.to_numpy()
    vals, vecs = np.linalg.eig(a)
    scale = max(np.abs(vals).max(), 1e-300)
    if np.any(np.abs(vals.imag) > 1e-9 * scale):
        raise ComplexSpectrum("non-real eigenvalue")
    vals = vals.real
    order = np.argsort(-np.abs(vals))
    mods = np.abs(vals[order])
    if np.any(np.abs(np.diff(mods)) <= 1e-9 * scale):
        raise ModulusTie("eigenvalue moduli within tolerance")
    out = []
    for idx in order:
        lam = float(vals[idx])
        v = _polish(a, lam, vecs[:, idx].real)
        out.append(EigenPair(lam, tuple(float(x) for x in v), False))
    return out


def _polish(a: np.ndarray, lam: float, v: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    v = v / np.linalg.norm(v)
    for _ in range(3):
        shifted = a - (lam + 1e-14 * max(abs(lam), 1.0)) * np.eye(n)
        try:
            w = np.linalg.solve(shifted, v)
        except np.linalg.LinAlgError:
            break
        v = w / np.linalg.norm(w)
        lam = float(v @ a @ v)
    k = int(np.argmax(np.abs(v)))
    return v / v[k]


def _normalise_vector(v: Sequence[Fraction]) -> tuple:
    k = max(range(len(v)), key=lambda i: abs(v[i]))
    return tuple(x / v[k] for x in v)


def _inverse_iteration_exact(shifted: Matrix) -> tuple:
    # The shift is within 2^-160 of an eigenvalue, so two solves suffice
    # for an eigenvector accurate far beyond double precision.
    n = shifted.n
    v = tuple(Fraction(1 + i, n + 1) for i in range(n))
    for _ in range(2):
        v = shifted.solve(v)
        v = _normalise_vector(v)
        v = tuple(x.limit_denominator(10**45) for x in v)
    return v


# ---------------------------------------------------------------------------
# singular values


def singular_values(m: Matrix) -> np.ndarray:
    """Singular values in non-increasing order with high relative accuracy.

    Each partial product sigma_1...sigma_k is the largest singular value of
    the k-th compound matrix, which LAPACK returns to relative precision, so
    small singular values do not inherit the absolute error of the largest.
    """
    logs = log_singular_values(m)
    return np.exp(logs)


def log_singular_values(m: Matrix) -> np.ndarray:
    n = m.n
    partial = [0.0]
    for k in range(1, n + 1):
        if k == n:
            d = m.det()
            if d == 0:
                raise SingularMatrix("singular matrix")
            partial.append(math.log(abs(float(d))) if not isinstance(d, Fraction) else _log_abs_fraction(d))
            continue
        c = m.compound(k)
        top = np.linalg.norm(c.to_numpy(), 2)
        if top == 0.0:
            raise SingularMatrix("singular matrix")
        partial.append(math.log(top))
    return np.diff(np.array(partial))


def _log_abs_fraction(x: Fraction) -> float:
    x = abs(x)
    return math.log(x.numerator) - math.log(x.denominator)


# ---------------------------------------------------------------------------
# JSON helpers


def matrix_to_json(m: Matrix) -> list:
    if m.exact:
        return [[fraction_str(x) for x in r] for r in m.rows]
    return [[float(x) for x in r] for r in m.rows]


def matrix_from_json(data) -> Matrix:
    if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
        raise ValueError("matrix must be a non-empty list of rows")
    exact = all(isinstance(x, (int, str)) and not isinstance(x, bool) for r in data for x in r)
    return Matrix(data, exact=exact)
