"""Complexified quaternion (biquaternion) arithmetic.

A biquaternion has four complex coefficients on the units {1, e1, e2, e3}
with the right-handed table e1*e2 = e3, e2*e3 = e1, e3*e1 = e2, ek**2 = -1.
The complex unit i commutes with everything.

Two conjugations are available: quaternionic conjugation (``bar``), which
negates the e1, e2, e3 coefficients, and complex conjugation (``star``),
which conjugates all four coefficients.  Their composition (``bar_star``)
is an involution whose -1/+1 eigenspaces split the algebra into the minus
and plus parts; the minus part carries a real Minkowski-signature inner
product and is where basis fields live.

Everything here is pure and immutable.  Batched array variants of the hot
operations live in :mod:`cqgeom.kernels`.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

__all__ = [
    "Biquaternion",
    "Tolerance",
    "ZeroDivisorError",
    "ZERO",
    "ONE",
    "IM",
    "E1",
    "E2",
    "E3",
    "mul",
    "conjugate",
    "scal_vec_split",
    "pm_split",
    "inner",
    "norm",
    "norm_and_inverse",
    "inverse",
    "exp_vec",
    "commutator",
    "abs_max",
]


class ZeroDivisorError(ArithmeticError):
    """Raised when inverting a biquaternion with vanishing norm.

    The complexified quaternions are not a division algebra: elements such
    as 1 + i*e1 have norm zero and no inverse.
    """


@dataclass(frozen=True)
class Tolerance:
    """Absolute/relative tolerance pair used throughout the toolkit."""

    abs: float = 1e-12
    rel: float = 1e-12

    def __post_init__(self) -> None:
        if not (self.abs >= 0 and self.rel >= 0):
            raise ValueError("tolerances must be finite and >= 0")

    def ok(self, residual: float, scale: float = 1.0) -> bool:
        return residual <= self.abs + self.rel * abs(scale)


DEFAULT_TOL = Tolerance()


def _finite(c: complex) -> bool:
    return cmath.isfinite(c)


class Biquaternion:
    """One element of the complexified quaternions.

    Coefficients ``w, x, y, z`` (on 1, e1, e2, e3) are Python complex
    numbers.  Instances are immutable by convention; all operations return
    new instances.
    """

    __slots__ = ("w", "x", "y", "z")

    def __init__(self, w=0j, x=0j, y=0j, z=0j):
        w, x, y, z = complex(w), complex(x), complex(y), complex(z)
        if not (_finite(w) and _finite(x) and _finite(y) and _finite(z)):
            raise ValueError("non-finite biquaternion coefficient")
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "z", z)

    def __setattr__(self, name, value):
        raise AttributeError("Biquaternion is immutable")

    @property
    def components(self) -> tuple[complex, complex, complex, complex]:
        return (self.w, self.x, self.y, self.z)

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other: "Biquaternion") -> "Biquaternion":
        return Biquaternion(
            self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z
        )

    def __sub__(self, other: "Biquaternion") -> "Biquaternion":
        return Biquaternion(
            self.w - other.w, self.x - other.x, self.y - other.y, self.z - other.z
        )

    def __neg__(self) -> "Biquaternion":
        return Biquaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        if isinstance(other, Biquaternion):
            return mul(self, other)
        c = complex(other)
        return Biquaternion(self.w * c, self.x * c, self.y * c, self.z * c)

    def __rmul__(self, other):
        # Scalars commute with everything; biquaternion*biquaternion goes
        # through __mul__.
        c = complex(other)
        return Biquaternion(self.w * c, self.x * c, self.y * c, self.z * c)

    def __truediv__(self, other):
        c = complex(other)
        return Biquaternion(self.w / c, self.x / c, self.y / c, self.z / c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Biquaternion):
            return NotImplemented
        return self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def __repr__(self) -> str:
        return f"Biquaternion({self.w!r}, {self.x!r}, {self.y!r}, {self.z!r})"

    # -- conjugations and splits --------------------------------------

    def bar(self) -> "Biquaternion":
        """Quaternionic conjugation: negate the e1, e2, e3 coefficients."""
        return Biquaternion(self.w, -self.x, -self.y, -self.z)

    def star(self) -> "Biquaternion":
        """Complex conjugation of all four coefficients."""
        return Biquaternion(
            self.w.conjugate(), self.x.conjugate(), self.y.conjugate(), self.z.conjugate()
        )

    def bar_star(self) -> "Biquaternion":
        """Composition of both conjugations (order-independent)."""
        return Biquaternion(
            self.w.conjugate(),
            -self.x.conjugate(),
            -self.y.conjugate(),
            -self.z.conjugate(),
        )

    def scal(self) -> "Biquaternion":
        return Biquaternion(self.w)

    def vec(self) -> "Biquaternion":
        return Biquaternion(0j, self.x, self.y, self.z)

    def minus_part(self) -> "Biquaternion":
        return (self - self.bar_star()) * 0.5

    def plus_part(self) -> "Biquaternion":
        return (self + self.bar_star()) * 0.5


ZERO = Biquaternion()
ONE = Biquaternion(1)
IM = Biquaternion(1j)
E1 = Biquaternion(0, 1)
E2 = Biquaternion(0, 0, 1)
E3 = Biquaternion(0, 0, 0, 1)


def mul(a: Biquaternion, b: Biquaternion) -> Biquaternion:
    """Biquaternion product under the right-handed unit table."""
    return Biquaternion(
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y + a.y * b.w + a.z * b.x - a.x * b.z,
        a.w * b.z + a.z * b.w + a.x * b.y - a.y * b.x,
    )


def conjugate(a: Biquaternion, kind: str) -> Biquaternion:
    """Apply a named conjugation: 'quaternionic', 'complex' or 'bar-star'."""
    if kind == "quaternionic":
        return a.bar()
    if kind == "complex":
        return a.star()
    if kind == "bar-star":
        return a.bar_star()
    raise ValueError(f"unknown conjugation kind: {kind!r}")


def scal_vec_split(a: Biquaternion) -> tuple[Biquaternion, Biquaternion]:
    """Split into the scalar part (bar-fixed) and vector part (bar-negated)."""
    return a.scal(), a.vec()


def pm_split(a: Biquaternion) -> tuple[Biquaternion, Biquaternion]:
    """Split into the minus and plus eigenparts of the bar-star involution."""
    return a.minus_part(), a.plus_part()


def inner(a: Biquaternion, b: Biquaternion) -> complex:
    """Composition-algebra inner product, 2<a,b> = a*bar(b) + b*bar(a).

    The vector components of that combination vanish identically, so only
    the scalar coefficient is returned.  Complex-bilinear: no conjugation
    of either argument.
    """
    return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z


def norm(a: Biquaternion) -> complex:
    """Multiplicative norm N(a) = a*bar(a), a complex scalar."""
    return a.w * a.w + a.x * a.x + a.y * a.y + a.z * a.z


def norm_and_inverse(
    a: Biquaternion, tol: float = 1e-12
) -> tuple[complex, Biquaternion | None]:
    """Return (N(a), a**-1) or (N(a), None) when a is a zero divisor."""
    n = norm(a)
    if abs(n) <= tol:
        return n, None
    return n, a.bar() / n


def inverse(a: Biquaternion, tol: float = 1e-12) -> Biquaternion:
    """Multiplicative inverse; raises ZeroDivisorError when N(a) ~ 0."""
    n, inv = norm_and_inverse(a, tol)
    if inv is None:
        raise ZeroDivisorError(f"biquaternion has zero norm {n!r}; no inverse")
    return inv


def _cos_sinc(theta2: complex) -> tuple[complex, complex]:
    # cos(theta) and sin(theta)/theta as even functions of theta, so the
    # branch of the complex square root is irrelevant.
    theta = cmath.sqrt(theta2)
    if abs(theta) < 1e-4:
        # Series in theta^2 avoids sin(theta)/theta cancellation.
        c = 1 - theta2 / 2 + theta2 * theta2 / 24
        s = 1 - theta2 / 6 + theta2 * theta2 / 120
        return c, s
    return cmath.cos(theta), cmath.sin(theta) / theta


def exp_vec(q: Biquaternion, tol: float = 1e-12) -> Biquaternion:
    """Exponential of a vector biquaternion.

    With theta**2 = N(q) = -(q*q), exp(q) = cos(theta) + sinc(theta)*q.
    The result L satisfies L*bar(L) = 1, i.e. it is a unit Lorentz element.
    Rejects arguments with a nonzero scalar part.
    """
    if abs(q.w) > tol:
        raise ValueError(f"exp_vec requires a vector argument, got scalar part {q.w!r}")
    theta2 = q.x * q.x + q.y * q.y + q.z * q.z
    c, s = _cos_sinc(theta2)
    return Biquaternion(c, s * q.x, s * q.y, s * q.z)


def commutator(a: Biquaternion, b: Biquaternion) -> Biquaternion:
    """a*b - b*a."""
    return mul(a, b) - mul(b, a)


def abs_max(a: Biquaternion) -> float:
    """Max absolute value over the four complex coefficients."""
    return max(abs(a.w), abs(a.x), abs(a.y), abs(a.z))
