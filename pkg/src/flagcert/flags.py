"""Complete flags, transversality and projective invariants of flag tuples.

A flag is stored through a basis: the k-dimensional subspace is the span of
the first k columns.  Partial subspaces are plain ``n x k`` matrices.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .linalg import DimensionMismatch, Matrix, SingularMatrix, sign3, stack_columns


class FlagError(Exception):
    """Base class for flag-geometry failures."""


class NotTransverse(FlagError):
    """Two flags fail to be transverse."""


class NotInQk(FlagError):
    """A cross ratio is undefined because a sum of subspaces is not direct."""


class NotWellPositioned(FlagError):
    """The configuration for a triple ratio is degenerate."""


class NotGeneralPosition(FlagError):
    """A sum of flag subspaces fails to be direct.

    ``witness`` is the tuple of dimensions that exhibits the failure.
    """

    def __init__(self, message: str, witness: tuple[int, ...] | None = None):
        super().__init__(message)
        self.witness = witness


class Flag:
    """Complete flag in R^n given by an adapted basis."""

    __slots__ = ("basis",)

    def __init__(self, basis: Matrix):
        if basis.shape[0] != basis.shape[1]:
            raise DimensionMismatch("flag basis must be square")
        if basis.exact:
            if basis.det() == 0:
                raise SingularMatrix("flag basis is degenerate")
        elif basis.rank() < basis.n:
            raise SingularMatrix("flag basis is degenerate")
        self.basis = basis

    @classmethod
    def from_vectors(cls, vectors: Sequence[Sequence], exact: bool | None = None) -> "Flag":
        return cls(Matrix.from_columns(vectors, exact))

    @classmethod
    def ascending(cls, n: int, exact: bool = True) -> "Flag":
        """span(e_1), span(e_1, e_2), ..."""
        return cls(Matrix.identity(n, exact))

    @classmethod
    def descending(cls, n: int, exact: bool = True) -> "Flag":
        """span(e_n), span(e_n, e_{n-1}), ..."""
        ident = Matrix.identity(n, exact)
        return cls(ident.columns(range(n - 1, -1, -1)))

    @property
    def n(self) -> int:
        return self.basis.shape[0]

    @property
    def exact(self) -> bool:
        return self.basis.exact

    def subspace(self, k: int) -> Matrix | None:
        """Basis of the k-dimensional member; ``None`` for k = 0."""
        if not 0 <= k <= self.n:
            raise DimensionMismatch(f"no {k}-dimensional member in dimension {self.n}")
        return self.basis.first_columns(k) if k else None

    def vector(self, i: int) -> Matrix:
        """The i-th basis vector (1-based) as an ``n x 1`` matrix."""
        return self.basis.columns([i - 1])

    def act(self, g) -> "Flag":
        m = g.matrix if hasattr(g, "matrix") else g
        return Flag(m @ self.basis)

    def to_float(self) -> "Flag":
        return Flag(self.basis.to_float())

    def to_exact(self) -> "Flag":
        return Flag(self.basis.to_exact())

    def same_as(self, other: "Flag") -> bool:
        """Equality of flags (not bases), exact or to float tolerance."""
        if self.n != other.n:
            return False
        for k in range(1, self.n):
            joint = stack_columns(self.subspace(k), other.subspace(k))
            if joint.rank() != k:
                return False
        return True

    def __repr__(self) -> str:
        return f"Flag({self.basis!r})"


# ---------------------------------------------------------------------------
# transversality and general position


def _nonzero(x, m: Matrix) -> bool:
    """Exact nonzero, or float nonzero outside the tolerance band."""
    if m.exact:
        return x != 0
    scale = max(m.max_abs(), 1e-300) ** m.shape[0]
    return sign3(x, 1e-10 * scale) != 0


def omega(*blocks: Matrix | None) -> Fraction | float:
    """Determinant of the concatenation of column blocks."""
    return stack_columns(*blocks).det()


def _direct(blocks: list[Matrix | None]) -> bool:
    joint = stack_columns(*[b for b in blocks if b is not None]) if any(b is not None for b in blocks) else None
    if joint is None:
        return True
    if joint.shape[1] == joint.shape[0]:
        return _nonzero(joint.det(), joint)
    return joint.rank() == joint.shape[1]


def transverse(f: Flag, g: Flag) -> bool:
    """F^(k) + G^(n-k) = V for every k."""
    n = f.n
    if g.n != n:
        raise DimensionMismatch("flags live in different dimensions")
    return all(_direct([f.subspace(k), g.subspace(n - k)]) for k in range(1, n))


def compositions(total: int, parts: int) -> Iterable[tuple[int, ...]]:
    """All tuples of ``parts`` non-negative integers summing to ``total``."""
    for cuts in itertools.combinations(range(total + parts - 1), parts - 1):
        prev = -1
        out = []
        for c in cuts:
            out.append(c - prev - 1)
            prev = c
        out.append(total + parts - 2 - prev)
        yield tuple(out)


def general_position_witness(flags: Sequence[Flag]) -> tuple[int, ...] | None:
    """A dimension tuple whose flag sum is not direct, or ``None``.

    Checking the tuples summing to n suffices: any smaller tuple extends to
    one summing to n, and a subfamily of an independent family is
    independent.
    """
    n = flags[0].n
    for dims in compositions(n, len(flags)):
        if sum(1 for d in dims if d) < 2:
            continue
        if not _direct([f.subspace(d) for f, d in zip(flags, dims)]):
            return dims
    return None


def general_position(flags: Sequence[Flag], degrees: Sequence[int] | None = None) -> bool:
    """With ``degrees``, whether F_1^(d_1) + ... + F_l^(d_l) is direct;
    without, whether that holds for every choice of degrees."""
    if degrees is None:
        return general_position_witness(flags) is None
    n = flags[0].n
    if len(degrees) != len(flags) or any(d < 0 or d > n for d in degrees) or sum(degrees) > n:
        raise DimensionMismatch(f"degrees {tuple(degrees)} do not fit dimension {n}")
    return _direct([f.subspace(d) for f, d in zip(flags, degrees)])


def require_general_position(flags: Sequence[Flag]) -> None:
    w = general_position_witness(flags)
    if w is not None:
        raise NotGeneralPosition(f"sum of subspaces with dimensions {w} is not direct", w)


# ---------------------------------------------------------------------------
# cross ratios


def cross_ratio(u1: Matrix, u2: Matrix, w1: Matrix, w2: Matrix):
    """C_k(U1, U2, W1, W2) for dim U = n - k and dim W = k.

    The value is the ratio of the determinants of the concatenated bases
    Omega(u2, w2) Omega(u1, w1) / (Omega(u2, w1) Omega(u1, w2)) and does not
    depend on the bases chosen.
    """
    n = u1.shape[0]
    if u1.shape[1] != u2.shape[1] or w1.shape[1] != w2.shape[1] or u1.shape[1] + w1.shape[1] != n:
        raise DimensionMismatch("cross ratio needs dim U + dim W = n")
    a = omega(u2, w2)
    b = omega(u1, w1)
    c = omega(u2, w1)
    d = omega(u1, w2)
    for val, blocks in ((a, (u2, w2)), (b, (u1, w1)), (c, (u2, w1)), (d, (u1, w2))):
        if not _nonzero(val, stack_columns(*blocks)):
            raise NotInQk("a subspace sum in the cross ratio is not direct")
    return (a * b) / (c * d)


def point_cross_ratio(p1, p2, q1, q2):
    """C_1 on the projective line for points in an affine chart."""
    return ((q2 - p2) * (p1 - q1)) / ((q1 - p2) * (p1 - q2))


def labourie_B(f1: Flag, f2: Flag, f3: Flag, f4: Flag, k: int):
    """B_k(F1, F2, F3, F4) = C_k(F1^(n-k), F2^(n-k), F3^(k), F4^(k))."""
    n = f1.n
    if not 1 <= k <= n - 1:
        raise DimensionMismatch(f"k={k} outside 1..{n - 1}")
    return cross_ratio(f1.subspace(n - k), f2.subspace(n - k), f3.subspace(k), f4.subspace(k))


def edge_S(f1: Flag, f2: Flag, f3: Flag, f4: Flag, k: int):
    """Edge invariant: C_1 of two hyperplanes built from F1, F3 against the
    lines of F2 and F4."""
    n = f1.n
    if not 1 <= k <= n - 1:
        raise DimensionMismatch(f"k={k} outside 1..{n - 1}")
    h1 = stack_columns(f1.subspace(k), f3.subspace(n - k - 1))
    h2 = stack_columns(f1.subspace(k - 1), f3.subspace(n - k))
    return cross_ratio(h1, h2, f2.subspace(1), f4.subspace(1))


# ---------------------------------------------------------------------------
# triple ratios


def _omega_wuuu(w: Matrix | None, *vecs: Matrix):
    """Omega(w, v1, v2, v3); in float mode a value below 1e-10 times the
    Hadamard bound counts as degenerate and raises."""
    m = stack_columns(w, *vecs)
    d = m.det()
    if not m.exact:
        bound = float(np.prod(np.linalg.norm(m.to_numpy(), axis=0)))
        if abs(d) <= 1e-10 * bound:
            raise NotWellPositioned("triple ratio has a degenerate factor")
    return d


def _triple_from_vectors(w, up, u):
    """T from a basis w of the common (n-3)-space and chosen vectors."""
    u1p, u2p, u3p = up
    u1, u2, u3 = u
    num = _omega_wuuu(w, u1p, u1, u2p) * _omega_wuuu(w, u2p, u2, u3p) * _omega_wuuu(w, u3p, u3, u1p)
    den = _omega_wuuu(w, u2p, u2, u1p) * _omega_wuuu(w, u3p, u3, u2p) * _omega_wuuu(w, u1p, u1, u3p)
    if den == 0 or num == 0:
        raise NotWellPositioned("triple ratio has a degenerate factor")
    return num / den


def _intersection(*spaces: Matrix) -> Matrix | None:
    """Basis of the intersection of column spaces (exact or float)."""
    current = spaces[0]
    for other in spaces[1:]:
        if current is None:
            return None
        joint = stack_columns(current, other.scale(-1))
        ker = joint.nullspace()
        if not ker:
            return None
        k = current.shape[1]
        vecs = [current.apply(v[:k]) for v in ker]
        current = Matrix.from_columns(vecs, current.exact)
        current = _column_basis(current)
    return current


def _column_basis(m: Matrix) -> Matrix | None:
    """Independent subset of the columns of m."""
    chosen: list[int] = []
    for j in range(m.shape[1]):
        trial = m.columns(chosen + [j])
        if trial.rank() == len(chosen) + 1:
            chosen.append(j)
    return m.columns(chosen) if chosen else None


def _vector_outside(space: Matrix, sub: Matrix | None) -> Matrix:
    """A column of ``space`` not lying in ``sub``."""
    base = 0 if sub is None else sub.shape[1]
    for j in range(space.shape[1]):
        v = space.columns([j])
        trial = v if sub is None else stack_columns(sub, v)
        if trial.rank() == base + 1:
            return v
    raise NotWellPositioned("subspace does not strictly contain its partner")


def triple_ratio(u1: Matrix, u2: Matrix, u3: Matrix, u1p: Matrix, u2p: Matrix, u3p: Matrix):
    """T(U1, U2, U3, U1', U2', U3') for hyperplanes U_i and codimension-2
    subspaces U_i' inside them."""
    n = u1.shape[0]
    if n < 3:
        raise DimensionMismatch("triple ratio needs n >= 3")
    for big, small in ((u1, u1p), (u2, u2p), (u3, u3p)):
        if big.shape[1] != n - 1 or small.shape[1] != n - 2:
            raise DimensionMismatch("need hyperplanes and codimension-2 subspaces")
        if stack_columns(big, small).rank() != n - 1:
            raise NotWellPositioned("U_i' is not contained in U_i")
    w = _intersection(u1, u2, u3) if n > 3 else None
    if n > 3 and (w is None or w.shape[1] != n - 3):
        raise NotWellPositioned("U1, U2, U3 do not meet in dimension n-3")
    for sp in (u1p, u2p, u3p):
        if w is not None and stack_columns(sp, w).rank() != n - 2:
            raise NotWellPositioned("U_i' does not contain the common subspace")
    ups = [_vector_outside(sp, w) for sp in (u1p, u2p, u3p)]
    us = [_vector_outside(big, small) for big, small in ((u1, u1p), (u2, u2p), (u3, u3p))]
    return _triple_from_vectors(w, ups, us)


def triangle_T(f1: Flag, f2: Flag, f3: Flag, j: Sequence[int]):
    """Triangle invariant T_j for positive j with j1 + j2 + j3 = n."""
    n = f1.n
    j = tuple(j)
    if len(j) != 3 or any(x <= 0 for x in j) or sum(j) != n:
        raise DimensionMismatch(f"index {j} must be three positive integers summing to {n}")
    fl = (f1, f2, f3)
    # The common (n-3)-space and the distinguished vectors come straight from
    # the flag bases: U_i' adds the j_i-th vector of F_i, U_i the next one.
    w = stack_columns(*[f.subspace(x - 1) for f, x in zip(fl, j)]) if n > 3 else None
    if w is not None and w.shape[1] != n - 3:
        raise DimensionMismatch("internal: common space has wrong dimension")
    ups = [f.vector(x) for f, x in zip(fl, j)]
    us = [f.vector(x + 1) for f, x in zip(fl, j)]
    return _triple_from_vectors(w, ups, us)


def triangle_indices(n: int) -> list[tuple[int, int, int]]:
    return [j for j in compositions(n, 3) if all(x > 0 for x in j)]


# ---------------------------------------------------------------------------
# refinements of the Labourie cross ratio


def _omega_blocks(flags: Sequence[Flag], dims: Sequence[int]):
    blocks = [f.subspace(d) for f, d in zip(flags, dims)]
    return omega(*blocks)


def D_invariant(f1: Flag, f2: Flag, f3: Flag, f4: Flag, k: Sequence[int]):
    """D_k for k = (k1, k2, k3) with k3 > 0 and k1 + k2 + k3 = n - 1."""
    n = f1.n
    k1, k2, k3 = k
    if k3 <= 0 or min(k1, k2) < 0 or k1 + k2 + k3 != n - 1:
        raise DimensionMismatch(f"bad D index {tuple(k)}")
    num = _omega_blocks((f1, f2, f3), (k1 + 1, k2, k3)) * _omega_blocks((f1, f2, f4), (k1, k2 + 1, k3))
    den = _omega_blocks((f1, f2, f4), (k1 + 1, k2, k3)) * _omega_blocks((f1, f2, f3), (k1, k2 + 1, k3))
    if den == 0 or num == 0:
        raise NotInQk("D invariant has a degenerate factor")
    return num / den


def A_invariant(f1: Flag, f2: Flag, f3: Flag, f4: Flag, j: Sequence[int]):
    """A_j for non-negative j = (j1, j2, j3, j4) with sum n - 2."""
    n = f1.n
    j1, j2, j3, j4 = j
    if min(j) < 0 or sum(j) != n - 2:
        raise DimensionMismatch(f"bad A index {tuple(j)}")
    fl = (f1, f2, f3, f4)
    num = _omega_blocks(fl, (j1 + 1, j2, j3 + 1, j4)) * _omega_blocks(fl, (j1, j2 + 1, j3, j4 + 1))
    den = _omega_blocks(fl, (j1 + 1, j2, j3, j4 + 1)) * _omega_blocks(fl, (j1, j2 + 1, j3 + 1, j4))
    if den == 0 or num == 0:
        raise NotInQk("A invariant has a degenerate factor")
    return num / den


def A_indices_for_B(n: int, k: int) -> list[tuple[int, int, int, int]]:
    """Indices j whose A_j multiply to B_k: j1 + j2 = n-k-1, j3 + j4 = k-1."""
    return [
        (j1, n - k - 1 - j1, j3, k - 1 - j3)
        for j1 in range(n - k)
        for j3 in range(k)
    ]
