"""Total positivity and two independent deciders for positive flag tuples.

The factorization decider writes each inner flag as ``u_1 ... u_i`` applied to
the first flag, in a basis adapted to the first and last flags, and tests the
factors for total positivity.  The invariant decider triangulates the polygon
as a fan at the first vertex and checks signs of triangle and edge invariants.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .flags import (
    Flag,
    FlagError,
    edge_S,
    general_position_witness,
    transverse,
    triangle_T,
    triangle_indices,
)
from .linalg import LinalgError, Matrix, fraction_str, matrix_to_json, sign3


class PositivityError(Exception):
    """Base class for positivity failures."""


class NonTransverseEnds(PositivityError):
    """The first and last flags of a tuple are not transverse."""


class InnerNotTransverseToLast(PositivityError):
    """An inner flag cannot be written as a unipotent image of the first."""


class DomainPrecondition(PositivityError):
    """The flags (F, H, K) defining a domain are not a positive triple."""


@dataclass
class PositivityVerdict:
    """Outcome of a positivity query.

    ``positive`` is ``None`` when a float computation landed inside the
    tolerance band.  A positive factorization verdict carries the unipotent
    factors so the claim can be re-checked.
    """

    positive: bool | None
    method: str
    witness: dict[str, Any] = field(default_factory=dict)
    switch: str | None = None

    def __bool__(self) -> bool:
        return self.positive is True

    @property
    def indeterminate(self) -> bool:
        return self.positive is None

    def to_json(self) -> dict[str, Any]:
        return {
            "positive": self.positive,
            "method": self.method,
            "switch": self.switch,
            "witness": self.witness,
        }


def _scalar_json(x) -> str | float:
    return fraction_str(x) if isinstance(x, Fraction) else float(x)


# ---------------------------------------------------------------------------
# minors of unipotent matrices


def nontrivial_minor_maps(n: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Row/column index sets (0-based) of the minors that are not forced to
    be 0 or 1 on upper unitriangular matrices."""
    if not 2 <= n <= 8:
        raise ValueError("n must lie in 2..8")
    out = []
    for k in range(1, n):
        for rows in itertools.combinations(range(n), k):
            for cols in itertools.combinations(range(n), k):
                if all(j >= i for i, j in zip(rows, cols)) and any(j > i for i, j in zip(rows, cols)):
                    out.append((rows, cols))
    return out


def is_unipotent_upper(u: Matrix) -> bool:
    n = u.n
    tol = 0 if u.exact else u.eps()
    for i in range(n):
        for j in range(n):
            target = 1 if i == j else 0
            if j <= i and abs(u[i, j] - target) > tol:
                return False
    return True


def is_totally_positive(u: Matrix) -> PositivityVerdict:
    """Every non-trivial minor of the unipotent ``u`` is positive."""
    n = u.n
    if not is_unipotent_upper(u):
        raise ValueError("matrix is not upper unitriangular")
    maps = set(nontrivial_minor_maps(n))
    scale = max(u.max_abs(), 1.0)
    undecided = None
    for k in range(1, n):
        minors = u.all_minors(k)
        for (rows, cols), value in minors.items():
            if (rows, cols) not in maps:
                continue
            eps = 0.0 if u.exact else 1e-10 * scale**k
            s = sign3(value, eps)
            if s < 0 or (s == 0 and u.exact):
                return PositivityVerdict(
                    False,
                    "total-positivity",
                    {"kind": "minor", "rows": list(rows), "cols": list(cols), "value": _scalar_json(value)},
                )
            if s == 0 and undecided is None:
                undecided = (rows, cols, value)
    if undecided is not None:
        rows, cols, value = undecided
        return PositivityVerdict(
            None,
            "total-positivity",
            {"kind": "indeterminate-minor", "rows": list(rows), "cols": list(cols), "value": _scalar_json(value)},
        )
    return PositivityVerdict(True, "total-positivity", {"kind": "all-minors-positive"})


# ---------------------------------------------------------------------------
# factorization


@dataclass
class Factorization:
    """Adapted basis and unipotent factors of a flag tuple.

    In the basis ``basis`` the first flag is the descending coordinate flag,
    the last flag is the ascending one and flag i+1 equals
    ``u_1 ... u_i`` applied to the first.
    """

    basis: Matrix
    unipotents: list[Matrix]

    def to_json(self) -> dict[str, Any]:
        return {"basis": matrix_to_json(self.basis), "unipotents": [matrix_to_json(u) for u in self.unipotents]}


def adapted_basis(first: Flag, last: Flag) -> Matrix:
    """Basis (e_1..e_n) with e_k in first^(n-k+1) and last^(k).

    Each e_k is scaled so that its coefficient on the k-th basis vector of
    ``last`` is one, which fixes the basis for a given pair of flag bases.
    """
    n = first.n
    if not transverse(first, last):
        raise NonTransverseEnds("first and last flags are not transverse")
    cols = []
    for k in range(1, n + 1):
        lk = last.subspace(k)
        fk = first.subspace(n - k + 1)
        joint = lk.hstack(fk.scale(-1))
        ker = joint.nullspace()
        if len(ker) != 1:
            raise NonTransverseEnds("intersection of complementary members is not a line")
        c = ker[0][:k]
        if c[k - 1] == 0 or (not lk.exact and abs(c[k - 1]) < 1e-14):
            raise NonTransverseEnds("degenerate intersection line")
        c = [x / c[k - 1] for x in c]
        cols.append(lk.apply(c))
    return Matrix.from_columns(cols, first.exact and last.exact)


def _unipotent_for(g: Matrix) -> Matrix:
    """Upper unitriangular v whose last k columns span the span of the
    first k columns of g, for every k."""
    n = g.n
    cols: list[tuple | None] = [None] * n
    for j in range(n - 1, -1, -1):
        m = n - j
        block = g.submatrix(range(j, n), range(m))
        rhs = [1] + [0] * (m - 1)
        if block.exact:
            if block.det() == 0:
                raise InnerNotTransverseToLast("inner flag is not transverse to the last flag")
        elif abs(block.det()) <= 1e-12 * max(block.max_abs(), 1e-300) ** m:
            raise InnerNotTransverseToLast("inner flag is numerically not transverse to the last flag")
        c = block.solve(rhs)
        cols[j] = g.first_columns(m).apply(c)
    v = Matrix.from_columns(cols, g.exact)
    # clean the forced entries so the matrix is exactly unitriangular
    one, zero = (Fraction(1), Fraction(0)) if v.exact else (1.0, 0.0)
    rows = [[v[i, j] if j > i else (one if i == j else zero) for j in range(n)] for i in range(n)]
    return Matrix(rows, v.exact)


def factor_tuple(flags: Sequence[Flag]) -> Factorization:
    """Adapted basis for (first, last) and the unipotent factors u_1..u_{l-2}.

    The basis is fixed up to the sign of each vector; the signs are chosen so
    that the superdiagonal of u_1 is positive whenever it is nonzero.
    """
    if len(flags) < 3:
        raise ValueError("need at least three flags")
    first, last = flags[0], flags[-1]
    basis = adapted_basis(first, last)
    inv = basis.inverse()
    vs = [_unipotent_for(inv @ f.basis) for f in flags[1:-1]]
    us = [vs[0]] + [vs[i - 1].inverse() @ vs[i] for i in range(1, len(vs))]
    n = first.n
    signs = [1]
    u1 = us[0]
    for k in range(n - 1):
        s = sign3(u1[k, k + 1], 0.0 if u1.exact else u1.eps())
        signs.append(signs[-1] * (s if s != 0 else 1))
    d = Matrix.diag(signs, exact=True)
    if not basis.exact:
        d = d.to_float()
    us = [d @ u @ d for u in us]
    basis = basis @ d
    return Factorization(basis, us)


def is_positive_tuple(flags: Sequence[Flag]) -> PositivityVerdict:
    """Factorization decider."""
    method = "factorization"
    try:
        fac = factor_tuple(flags)
    except (PositivityError, LinalgError, FlagError) as exc:
        return PositivityVerdict(False, method, {"kind": "degenerate", "reason": str(exc)})
    undecided = None
    for i, u in enumerate(fac.unipotents):
        v = is_totally_positive(u)
        if v.positive is False:
            w = dict(v.witness)
            w["factor"] = i + 1
            return PositivityVerdict(False, method, w)
        if v.positive is None and undecided is None:
            undecided = dict(v.witness, factor=i + 1)
    if undecided is not None:
        return PositivityVerdict(None, method, undecided)
    return PositivityVerdict(True, method, {"kind": "factorization", **fac.to_json()})


def is_positive_tuple_fg(flags: Sequence[Flag]) -> PositivityVerdict:
    """Invariant decider on the fan triangulation at the first vertex.

    Positive iff every triangle (1, i, i+1) has all triangle invariants
    positive and every interior edge (1, i) has all edge invariants negative.
    """
    method = "fock-goncharov"
    l = len(flags)
    if l < 3:
        raise ValueError("need at least three flags")
    n = flags[0].n
    exact = all(f.exact for f in flags)
    undecided = None

    def band(value) -> float:
        return 0.0 if exact else 1e-9 * max(abs(float(value)), 1.0)

    for i in range(1, l - 1):
        tri = (flags[0], flags[i], flags[i + 1])
        w = general_position_witness(tri)
        if w is not None:
            return PositivityVerdict(
                False, method, {"kind": "general-position", "triangle": [1, i + 1, i + 2], "dims": list(w)}
            )
        for j in triangle_indices(n):
            try:
                t = triangle_T(*tri, j)
            except (FlagError, LinalgError) as exc:
                return PositivityVerdict(False, method, {"kind": "degenerate", "reason": str(exc)})
            s = sign3(t, 0.0 if exact else 1e-9)
            if s <= 0:
                if s == 0 and not exact:
                    undecided = undecided or {"kind": "indeterminate-triangle", "triangle": [1, i + 1, i + 2]}
                    continue
                return PositivityVerdict(
                    False,
                    method,
                    {"kind": "triangle", "triangle": [1, i + 1, i + 2], "index": list(j), "value": _scalar_json(t)},
                )
    for i in range(2, l - 1):
        quad = (flags[0], flags[i - 1], flags[i], flags[i + 1])
        for k in range(1, n):
            try:
                s_val = edge_S(*quad, k)
            except (FlagError, LinalgError) as exc:
                return PositivityVerdict(False, method, {"kind": "degenerate", "reason": str(exc)})
            s = sign3(s_val, 0.0 if exact else 1e-9)
            if s >= 0:
                if s == 0 and not exact:
                    undecided = undecided or {"kind": "indeterminate-edge", "edge": [1, i + 1]}
                    continue
                return PositivityVerdict(
                    False, method, {"kind": "edge", "edge": [1, i + 1], "k": k, "value": _scalar_json(s_val)}
                )
    if undecided is not None:
        return PositivityVerdict(None, method, undecided)
    return PositivityVerdict(True, method, {"kind": "invariants-positive"})


def positive_up_to_switching(
    prefix: Sequence[Flag], x: Flag, y: Flag, suffix: Sequence[Flag], decider=is_positive_tuple
) -> PositivityVerdict:
    """Is (prefix, X, Y, suffix) or (prefix, Y, X, suffix) positive?"""
    first = decider([*prefix, x, y, *suffix])
    if first.positive:
        first.switch = "unswitched"
        return first
    second = decider([*prefix, y, x, *suffix])
    if second.positive:
        second.switch = "switched"
        return second
    if first.positive is None or second.positive is None:
        return PositivityVerdict(None, first.method, {"unswitched": first.witness, "switched": second.witness})
    return PositivityVerdict(False, first.method, {"unswitched": first.witness, "switched": second.witness})


def in_domain(f: Flag, h: Flag, k: Flag, g: Flag, decider=is_positive_tuple, check: bool = True) -> bool:
    """Is G in the domain of flags between F and H away from K, i.e. is
    (F, G, H, K) positive?

    ``check=False`` skips re-verifying that (F, H, K) is positive, for
    callers that test many G against one domain.
    """
    if check and not decider([f, h, k]):
        raise DomainPrecondition("(F, H, K) is not a positive triple")
    return bool(decider([f, g, h, k]))
