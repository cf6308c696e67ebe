"""Frame-free metric structure.

The basis is a quadruple of minus-part biquaternion fields; the metric is
the matrix of their composition-algebra inner products.  The connection
coefficients are the minimal ones, obtained by demanding that the full
covariant derivative of the basis vanish; they are real, metric-compatible
and in general torsionful.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Mapping, Sequence

import numpy as np

from .algebra import Biquaternion, abs_max, inner
from .fields import FDConfig, partial

__all__ = [
    "BasisError",
    "DegenerateMetricError",
    "RealnessError",
    "BasisField",
    "FrameSample",
    "Species",
    "TensorQuatField",
    "metric_at",
    "dual_basis_at",
    "frame_at",
    "gamma_minimal_at",
    "covariant_derivative_at",
    "torsion",
    "nabla_metric_residual",
    "metric_covariant_residual",
    "component_identity_residual",
    "christoffel_at",
]

DET_TOL = 1e-12
MINUS_PART_TOL = 1e-10
IMAG_TOL = 1e-10


class BasisError(ValueError):
    """Basis field violates the minus-part requirement."""


class DegenerateMetricError(ValueError):
    """Metric determinant vanishes at a queried point."""


class RealnessError(ValueError):
    """An algebraically real quantity came out complex beyond tolerance."""


@dataclass(frozen=True)
class BasisField:
    """The quadruple s_0..s_3 of biquaternion fields, each in the minus part."""

    s: tuple  # 4 callables point -> Biquaternion

    def __post_init__(self) -> None:
        if len(self.s) != 4:
            raise ValueError("basis needs exactly 4 fields")

    def at(self, p) -> list[Biquaternion]:
        return [f(np.asarray(p, dtype=float)) for f in self.s]

    def minus_residual(self, p) -> float:
        """Max magnitude of the plus part over the four basis values."""
        return max(abs_max(v.plus_part()) for v in self.at(p))


@dataclass(frozen=True)
class FrameSample:
    """Basis values, dual basis, metric and inverse metric at one point."""

    point: np.ndarray
    s: list  # s_mu values
    s_up: list  # s^mu values
    g: np.ndarray  # (4, 4) real
    ginv: np.ndarray


def _metric_raw(values: Sequence[Biquaternion]) -> np.ndarray:
    """Complex inner-product matrix <s_mu, s_nu> (exactly symmetric)."""
    g = np.empty((4, 4), dtype=complex)
    for mu in range(4):
        for nu in range(mu, 4):
            v = inner(values[mu], values[nu])
            g[mu, nu] = v
            g[nu, mu] = v
    return g


def metric_at(basis: BasisField, p, *, minus_tol: float = MINUS_PART_TOL,
              imag_tol: float = IMAG_TOL, det_tol: float = DET_TOL) -> np.ndarray:
    """Real symmetric metric g_mn = <s_m, s_n> at p.

    Raises BasisError when the basis leaves the minus part,
    RealnessError when the inner products fail to be real, and
    DegenerateMetricError when |det g| <= det_tol.
    """
    values = basis.at(p)
    scale = max(abs_max(v) for v in values)
    bad = max(abs_max(v.plus_part()) for v in values)
    if bad > minus_tol * (1.0 + scale):
        raise BasisError(f"basis not in the minus part at {p!r} (residual {bad:.3e})")
    gc = _metric_raw(values)
    im = float(np.max(np.abs(gc.imag)))
    if im > imag_tol * (1.0 + float(np.max(np.abs(gc.real)))):
        raise RealnessError(f"metric has imaginary residue {im:.3e} at {p!r}")
    g = gc.real.copy()
    if abs(np.linalg.det(g)) <= det_tol:
        raise DegenerateMetricError(f"metric is degenerate at {p!r}")
    return g


def frame_at(basis: BasisField, p, **tols) -> FrameSample:
    """Basis values with dual basis and both metrics at one point."""
    x = np.asarray(p, dtype=float)
    values = basis.at(x)
    g = metric_at(basis, x, **tols)
    ginv = np.linalg.inv(g)
    s_up = []
    for mu in range(4):
        acc = Biquaternion()
        for nu in range(4):
            acc = acc + values[nu] * ginv[mu, nu]
        s_up.append(acc)
    return FrameSample(point=x, s=values, s_up=s_up, g=g, ginv=ginv)


def dual_basis_at(basis: BasisField, p, **tols) -> list[Biquaternion]:
    """Dual basis s^mu = g^{mn} s_n; obeys <s^m, s_n> = delta."""
    return frame_at(basis, p, **tols).s_up


def _omega_values(omega, p) -> list[Biquaternion]:
    x = np.asarray(p, dtype=float)
    return [w(x) for w in omega.omega]


def basis_covderiv_raw(basis: BasisField, omega, nu: int, rho: int, p,
                       fd: FDConfig) -> Biquaternion:
    """d_rho s_nu + omega_rho s_nu + s_nu bar_star(omega_rho): the quantity
    whose dual-basis components define the minimal connection."""
    x = np.asarray(p, dtype=float)
    ds = partial(basis.s[nu], rho, x, fd)
    w = omega.omega[rho](x)
    s_nu = basis.s[nu](x)
    return ds + w * s_nu + s_nu * w.bar_star()


def gamma_minimal_at(basis: BasisField, omega, p, fd: FDConfig, *,
                     imag_tol: float = IMAG_TOL) -> np.ndarray:
    """Minimal connection coefficients Gamma[mu, nu, rho] at p.

    Gamma^m_{nr} = <s^m, d_r s_n + omega_r s_n + s_n bar_star(omega_r)>;
    real because both arguments of the inner product lie in the minus part.
    """
    x = np.asarray(p, dtype=float)
    frame = frame_at(basis, x)
    wvals = _omega_values(omega, x)
    gamma = np.empty((4, 4, 4))
    for nu in range(4):
        for rho in range(4):
            d = partial(basis.s[nu], rho, x, fd)
            target = d + wvals[rho] * frame.s[nu] + frame.s[nu] * wvals[rho].bar_star()
            scale = 1.0 + abs_max(target)
            for mu in range(4):
                v = inner(frame.s_up[mu], target)
                if abs(v.imag) > imag_tol * scale:
                    raise RealnessError(
                        f"Gamma^{mu}_({nu}{rho}) has imaginary residue {v.imag:.3e}"
                    )
                gamma[mu, nu, rho] = v.real
    return gamma


class Species(Enum):
    """Transformation behavior under local Lorentz maps."""

    L_SPINOR = "L"
    R_SPINOR = "R"
    VECTOR = "vector"
    SCALAR = "scalar"


@dataclass(frozen=True)
class TensorQuatField:
    """A type (m, n) tensor-valued quaternionic field of a given species.

    ``comp`` maps index tuples (m contravariant indices followed by n
    covariant ones) to biquaternion field callables.
    """

    species: Species
    up: int
    down: int
    comp: Mapping[tuple, Callable]

    def __post_init__(self) -> None:
        rank = self.up + self.down
        for key in self.comp:
            if len(key) != rank:
                raise ValueError(f"component key {key!r} does not match rank {rank}")

    @classmethod
    def scalar_like(cls, species: Species, f) -> "TensorQuatField":
        return cls(species=species, up=0, down=0, comp={(): f})


def covariant_derivative_at(f: TensorQuatField, rho: int, omega,
                            gamma: np.ndarray, p, fd: FDConfig) -> dict:
    """Full covariant derivative D_rho of every component of f at p.

    Coordinate coupling: +Gamma on contravariant indices, -Gamma on
    covariant ones.  Species coupling: L-spinors gain omega_rho * f,
    R-spinors f * bar_star(omega_rho), vectors both, scalars neither.
    """
    x = np.asarray(p, dtype=float)
    vals = {key: comp(x) for key, comp in f.comp.items()}
    w = omega.omega[rho](x)
    wbs = w.bar_star()
    out = {}
    for key, comp in f.comp.items():
        d = partial(comp, rho, x, fd)
        for i in range(f.up):
            for tau in range(4):
                other = key[:i] + (tau,) + key[i + 1:]
                d = d + vals[other] * gamma[key[i], tau, rho]
        for j in range(f.up, f.up + f.down):
            for tau in range(4):
                other = key[:j] + (tau,) + key[j + 1:]
                d = d - vals[other] * gamma[tau, key[j], rho]
        v = vals[key]
        if f.species is Species.L_SPINOR:
            d = d + w * v
        elif f.species is Species.R_SPINOR:
            d = d + v * wbs
        elif f.species is Species.VECTOR:
            d = d + w * v + v * wbs
        out[key] = d
    return out


def torsion(gamma: np.ndarray) -> np.ndarray:
    """T^r_{mn} = Gamma^r_{mn} - Gamma^r_{nm}."""
    return gamma - gamma.transpose(0, 2, 1)


def nabla_metric_residual(basis: BasisField, omega, p, fd: FDConfig) -> np.ndarray:
    """nabla_r g_{mn} with the minimal connection; algebraically zero."""
    x = np.asarray(p, dtype=float)
    gamma = gamma_minimal_at(basis, omega, x, fd)
    g = metric_at(basis, x)

    def g_field(q):
        return _metric_raw(basis.at(q)).real

    res = np.empty((4, 4, 4))
    for rho in range(4):
        dg = partial(g_field, rho, x, fd)
        res[:, :, rho] = (
            dg
            - np.einsum("sm,sn->mn", gamma[:, :, rho], g)
            - np.einsum("sn,ms->mn", gamma[:, :, rho], g)
        )
    return res


def metric_covariant_residual(basis: BasisField, omega, p, fd: FDConfig) -> float:
    """|D_r g_{mn} - nabla_r g_{mn}| with D g built from <D s, s> + <s, D s>.

    Both sides vanish for the minimal connection; the check exercises the
    statement that the covariant derivative of the metric reduces to the
    coordinate-covariant one.
    """
    x = np.asarray(p, dtype=float)
    gamma = gamma_minimal_at(basis, omega, x, fd)
    nabla_g = nabla_metric_residual(basis, omega, x, fd)
    svals = basis.at(x)
    ds = {}
    for nu in range(4):
        for rho in range(4):
            d = basis_covderiv_raw(basis, omega, nu, rho, x, fd)
            for mu in range(4):
                d = d - svals[mu] * gamma[mu, nu, rho]
            ds[nu, rho] = d
    worst = 0.0
    for rho in range(4):
        for mu in range(4):
            for nu in range(4):
                dg = inner(ds[mu, rho], svals[nu]) + inner(svals[mu], ds[nu, rho])
                worst = max(worst, abs(dg - nabla_g[mu, nu, rho]))
    return worst


def component_identity_residual(v_components, basis: BasisField, omega, p,
                                fd: FDConfig) -> float:
    """Residual of <s^m, D_r V> = d_r V^m + Gamma^m_{nr} V^n for V = V^n s_n."""
    x = np.asarray(p, dtype=float)
    frame = frame_at(basis, x)
    gamma = gamma_minimal_at(basis, omega, x, fd)

    def v_field(q):
        sv = basis.at(q)
        acc = Biquaternion()
        for mu in range(4):
            acc = acc + sv[mu] * complex(v_components[mu](q))
        return acc

    vvals = np.array([complex(vc(x)) for vc in v_components])
    worst = 0.0
    for rho in range(4):
        w = omega.omega[rho](x)
        v = v_field(x)
        dv = partial(v_field, rho, x, fd) + w * v + v * w.bar_star()
        for mu in range(4):
            lhs = inner(frame.s_up[mu], dv)
            rhs = partial(v_components[mu], rho, x, fd) + gamma[mu, :, rho] @ vvals
            worst = max(worst, abs(lhs - rhs))
    return worst


def christoffel_at(basis: BasisField, p, fd: FDConfig) -> np.ndarray:
    """Standard Christoffel symbols of g_{mn}, as a diagnostic only.

    The minimal connection need not equal these (and generally does not);
    nothing in the toolkit asserts a relation between them.
    """
    x = np.asarray(p, dtype=float)
    g = metric_at(basis, x)
    ginv = np.linalg.inv(g)

    def g_field(q):
        return _metric_raw(basis.at(q)).real

    dg = np.stack([partial(g_field, rho, x, fd) for rho in range(4)], axis=-1)
    # dg[m, n, r] = d_r g_{mn}
    out = np.empty((4, 4, 4))
    for rho in range(4):
        for mu in range(4):
            for nu in range(4):
                acc = 0.0
                for sig in range(4):
                    acc += ginv[rho, sig] * (
                        dg[sig, nu, mu] + dg[mu, sig, nu] - dg[mu, nu, sig]
                    )
                out[rho, mu, nu] = 0.5 * acc
    return out
