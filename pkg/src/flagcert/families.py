"""Explicit two-generator representations used as worked examples.

Every family returns a :class:`Representation` (images of the free
generators a and b).  Matrices are exact whenever the parameters allow it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Any

from .dynamics import ProjTransform, fixed_flags
from .flags import Flag, triangle_T
from .linalg import Matrix, fraction_str, matrix_to_json, matrix_from_json, to_fraction


@dataclass
class Representation:
    """Images of the free generators a and b."""

    a: ProjTransform
    b: ProjTransform
    name: str = "custom"
    params: dict[str, Any] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.a.n

    @property
    def exact(self) -> bool:
        return self.a.exact and self.b.exact

    def generator(self, letter: int) -> ProjTransform:
        """Image of a signed letter: 1 = a, -1 = a^-1, 2 = b, -2 = b^-1."""
        g = self.a if abs(letter) == 1 else self.b
        return g if letter > 0 else g.inverse()

    def evaluate(self, letters) -> ProjTransform:
        m = Matrix.identity(self.n, self.exact)
        for x in letters:
            m = m @ self.generator(x).matrix
        return ProjTransform(m)

    def to_float(self) -> "Representation":
        return Representation(self.a.to_float(), self.b.to_float(), self.name, dict(self.params))

    def to_json(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "params": {k: (fraction_str(v) if isinstance(v, Fraction) else v) for k, v in self.params.items()},
            "a": matrix_to_json(self.a.matrix),
            "b": matrix_to_json(self.b.matrix),
        }

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> "Representation":
        a = ProjTransform(matrix_from_json(data["a"]))
        b = ProjTransform(matrix_from_json(data["b"]))
        if a.n != b.n:
            raise ValueError("generators act on different dimensions")
        return cls(a, b, data.get("name", "custom"), dict(data.get("params", {})))


def pascal_U(n: int) -> Matrix:
    """Upper triangular Pascal matrix, entry (i, j) = C(j, i) (0-based)."""
    return Matrix([[comb(j, i) if i <= j else 0 for j in range(n)] for i in range(n)])


def pascal_W(n: int) -> Matrix:
    """Signed Pascal matrix, entry (i, j) = (-1)^(i+j) C(j, i)."""
    return Matrix([[(-1) ** (i + j) * comb(j, i) if i <= j else 0 for j in range(n)] for i in range(n)])


def _last_columns_flag(m: Matrix) -> Flag:
    # k-th member spanned by the last k columns
    n = m.n
    return Flag(m.columns(range(n - 1, -1, -1)))


def _from_flags(eigenvalues, plus: Flag, minus: Flag) -> ProjTransform:
    """Diagonalisable element with eigenvalues in decreasing modulus whose
    attracting flag is ``plus`` and repelling flag is ``minus``."""
    n = plus.n
    vecs = []
    for k in range(1, n + 1):
        joint = plus.subspace(k).hstack(minus.subspace(n - k + 1).scale(-1))
        ker = joint.nullspace()
        if len(ker) != 1:
            raise ValueError("flags are not transverse")
        vecs.append(plus.subspace(k).apply(ker[0][:k]))
    exact = plus.exact and minus.exact and all(isinstance(x, (int, Fraction)) for x in eigenvalues)
    p = Matrix.from_columns(vecs, exact)
    d = Matrix.diag(list(eigenvalues), exact)
    return ProjTransform(p @ d @ p.inverse())


def _t_value(t):
    if isinstance(t, float) and not t.is_integer():
        return t
    return to_fraction(t)


def example_641(n: int, t) -> Representation:
    """Pascal family: a_t diagonal with the last entry scaled by 1/t, and b
    with attracting flag spanned by trailing columns of U_n and repelling
    flag spanned by trailing columns of W_n; both eigenvalue ratios 2."""
    if n < 3:
        raise ValueError("family needs n >= 3")
    t = _t_value(t)
    if t == 0:
        raise ValueError("t must be nonzero")
    exact = isinstance(t, Fraction)
    two = Fraction(2) if exact else 2.0
    diag_a = [two ** (n - 1 - i) for i in range(n - 1)] + [two / t]
    a = ProjTransform(Matrix.diag(diag_a, exact))
    b = _from_flags([two ** (n - 1 - i) for i in range(n)], _last_columns_flag(pascal_U(n)), _last_columns_flag(pascal_W(n)))
    if not exact:
        b = b.to_float()
    return Representation(a, b, "641", {"n": n, "t": t})


def example_642(n: int, t) -> Representation:
    """Pascal family with both generators scaled by the exponent t.

    The diagonal of a_t is 2^(t(n-1)/2), 2^(t(n-3)/2), ..., 2^(t(3-n)/2),
    followed by 2^(t(1-n)).  Exact only when 2^(t/2) is rational.
    """
    if n < 3:
        raise ValueError("family needs n >= 3")
    t = _t_value(t)
    half = _exact_power_of_two(Fraction(t) / 2) if isinstance(t, Fraction) else None
    if half is not None:
        diag_a = [half ** (n - 1 - 2 * i) for i in range(n - 1)] + [half ** (2 * (1 - n))]
        eig_b = [half ** (n - 1 - 2 * i) for i in range(n)]
        a = ProjTransform(Matrix.diag(diag_a, True))
        b = _from_flags(eig_b, _last_columns_flag(pascal_U(n)), _last_columns_flag(pascal_W(n)))
    else:
        tf = float(t)
        diag_a = [2.0 ** (tf * (n - 1 - 2 * i) / 2) for i in range(n - 1)] + [2.0 ** (tf * (1 - n))]
        eig_b = [2.0 ** (tf * (n - 1 - 2 * i) / 2) for i in range(n)]
        a = ProjTransform(Matrix.diag(diag_a, False))
        b = _from_flags(eig_b, _last_columns_flag(pascal_U(n)).to_float(), _last_columns_flag(pascal_W(n)).to_float())
    return Representation(a, b, "642", {"n": n, "t": t})


def triangle_641(n: int, t, exact: bool = True):
    """T_(1,1,n-2)(b+, a_t b+, (a_t)+) for the Pascal family."""
    rep = example_641(n, t)
    if not exact:
        rep = rep.to_float()
    b_plus, _ = fixed_flags(rep.b)
    a_plus, _ = fixed_flags(rep.a)
    return triangle_T(b_plus, rep.a(b_plus), a_plus, (1, 1, n - 2))


def _exact_power_of_two(e: Fraction) -> Fraction | None:
    # 2^e is rational exactly when e is an integer
    if e.denominator == 1:
        return Fraction(2) ** int(e)
    return None


def example_643(t) -> Representation:
    """n = 3 family: a = diag(1/2, 1, 2) and b_t with eigenvalues
    proportional to t, 1, 1/2."""
    t = _t_value(t)
    exact = isinstance(t, Fraction)
    rows = [
        [2 * t + 5, -4 * t + 2, 2 * t - 3],
        [-2 * t + 1, 4 * t + 2, -2 * t + 1],
        [2 * t - 3, -4 * t + 2, 2 * t + 5],
    ]
    a = ProjTransform(Matrix.diag([Fraction(1, 2), 1, 2], True) if exact else Matrix.diag([0.5, 1.0, 2.0], False))
    b = ProjTransform(Matrix(rows, exact))
    return Representation(a, b, "643", {"t": t})


def commutator_643(t) -> ProjTransform:
    rep = example_643(t)
    return rep.evaluate([1, 2, -1, -2])


@dataclass(frozen=True)
class RotationAnalysis:
    """Data of the commutator [a, b_t] in the n = 3 family."""

    t: Fraction
    charpoly: tuple[Fraction, ...]  # det(x I - M), low -> high
    linear_coefficient: Fraction  # c in (x - 1)(x^2 + c x + 1)
    discriminant: Fraction
    cos_theta: Fraction | None
    rational_angle: bool | None  # theta / pi rational (None when not elliptic)

    def to_json(self) -> dict[str, Any]:
        return {
            "t": fraction_str(self.t),
            "charpoly": [fraction_str(c) for c in self.charpoly],
            "linear_coefficient": fraction_str(self.linear_coefficient),
            "discriminant": fraction_str(self.discriminant),
            "cos_theta": None if self.cos_theta is None else fraction_str(self.cos_theta),
            "rational_angle": self.rational_angle,
            "discrete_verdict": None if self.rational_angle is None else ("discrete" if self.rational_angle else "non-discrete"),
        }


NIVEN_VALUES = frozenset(Fraction(x) for x in (0, 1, -1, Fraction(1, 2), Fraction(-1, 2)))


def commutator_rotation(t) -> RotationAnalysis:
    """Characteristic polynomial of [a, b_t] and the rotation angle of its
    elliptic part.

    The quadratic factor is x^2 + c x + 1 with
    c = (35 - 306 t + 32 t^2) / (128 t); when c^2 < 4 the rotation angle
    satisfies cos(theta) = -c/2, and theta/pi is rational exactly when
    cos(theta) is one of 0, +-1/2, +-1.
    """
    from .linalg import charpoly

    t = to_fraction(t)
    if t <= 0:
        raise ValueError("t must be positive")
    m = commutator_643(t).matrix
    # normalise to det 1 (the commutator already has det 1)
    p = charpoly(m)
    c = (35 - 306 * t + 32 * t * t) / (128 * t)
    disc = c * c - 4
    cos_theta = -c / 2 if disc < 0 else None
    rational = None if cos_theta is None else cos_theta in NIVEN_VALUES
    return RotationAnalysis(t, tuple(p), c, disc, cos_theta, rational)


def discriminant_closed_form(t) -> Fraction:
    t = to_fraction(t)
    return (1225 - 21420 * t + 30340 * t**2 - 19584 * t**3 + 1024 * t**4) / (16384 * t**2)


def fuchsian_n2() -> Representation:
    """Hyperbolic one-holed-torus type pair in SL(2): a = diag(2, 1/2) and
    its conjugate by a 45-degree rotation.  Axes cross, so the commutator
    trace is below 2."""
    a = ProjTransform(Matrix([[2, 0], [0, Fraction(1, 2)]]))
    b = ProjTransform(Matrix([[Fraction(5, 4), Fraction(3, 4)], [Fraction(3, 4), Fraction(5, 4)]]))
    return Representation(a, b, "fuchsian2", {})


def trivial_rep(n: int) -> Representation:
    ident = ProjTransform(Matrix.identity(n, True))
    return Representation(ident, ident, "trivial", {"n": n})


def reducible_rep() -> Representation:
    """Upper triangular n = 3 representation; a has a repeated eigenvalue
    modulus so rays along a have no growth in the second gap."""
    a = ProjTransform(Matrix.diag([2, 1, 1], True))
    b = ProjTransform(Matrix([[1, 1, 1], [0, 2, 1], [0, 0, Fraction(1, 2)]]))
    return Representation(a, b, "reducible", {})


FAMILIES = {
    "641": example_641,
    "642": example_642,
    "643": example_643,
}


def build_example(name: str, n: int | None = None, t=None) -> Representation:
    """Look up an example family by name."""
    if name in ("641", "642"):
        if n is None or t is None:
            raise ValueError(f"family {name} needs n and t")
        return FAMILIES[name](n, t)
    if name == "643":
        if t is None:
            raise ValueError("family 643 needs t")
        return example_643(t)
    if name == "fuchsian2":
        return fuchsian_n2()
    if name == "trivial":
        return trivial_rep(n or 3)
    if name == "reducible":
        return reducible_rep()
    raise ValueError(f"unknown example {name!r}")
