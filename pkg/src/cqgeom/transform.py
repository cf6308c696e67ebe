"""Local Lorentz (Sp(1,C)) and U(1) transformation engines.

Lorentz maps are realized as exponentials of vector-part generator
fields, so the unit property (Lambda bar(Lambda) = 1) holds by
construction.  All transformed fields are plain closures over the
original chart; the covariance checks recompute everything on the
primed side from transformed fields -- no shortcut substitution.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .algebra import Biquaternion, ZeroDivisorError, abs_max, exp_vec, inner, norm_and_inverse
from .fields import FDConfig, partial
from .geometry import (
    BasisField,
    Species,
    frame_at,
    gamma_minimal_at,
    metric_at,
)
from .gauge import GaugeConnection

__all__ = [
    "LorentzField",
    "U1Field",
    "CoordinateMap",
    "transform_basis",
    "transform_connection",
    "transform_species",
    "u1_transform",
    "lorentz_metric_residual",
    "lorentz_gamma_residual",
    "species_covariance_residual",
    "u1_spinor_covariance_residual",
    "u1_vector_invariance_residual",
    "unified_reduction_residual",
    "coordinate_gamma_check",
]


@dataclass(frozen=True)
class LorentzField:
    """A unit Lorentz element field Lambda = exp(generator), generator in C x Vec(H)."""

    generator: Callable  # point -> vector Biquaternion

    @classmethod
    def identity(cls) -> "LorentzField":
        return cls(generator=lambda p: Biquaternion())

    @classmethod
    def constant(cls, q: Biquaternion) -> "LorentzField":
        return cls(generator=lambda p: q)

    def __call__(self, p) -> Biquaternion:
        return exp_vec(self.generator(np.asarray(p, dtype=float)))

    def unit_residual(self, p) -> float:
        lam = self(p)
        return abs_max(lam * lam.bar() - Biquaternion(1))


@dataclass(frozen=True)
class U1Field:
    """A real phase field phi; the associated Lorentz element is e^{i phi} 1."""

    phi: Callable  # point -> real

    def angle(self, p) -> float:
        v = complex(self.phi(np.asarray(p, dtype=float)))
        if abs(v.imag) > 1e-12 * (1.0 + abs(v.real)):
            raise ValueError(f"phase field is not real at {p!r}: {v!r}")
        return v.real

    def as_lorentz(self) -> Callable:
        """The scalar map q -> e^{i phi(q)} 1 (unit but not vector-generated)."""
        return lambda q: Biquaternion(cmath.exp(1j * self.angle(q)))


def transform_basis(basis: BasisField, lam: Callable) -> BasisField:
    """s'_mu = Lambda s_mu bar_star(Lambda), pointwise."""

    def make(mu):
        f = basis.s[mu]

        def s_prime(q):
            lv = lam(q)
            return lv * f(q) * lv.bar_star()

        return s_prime

    return BasisField(s=tuple(make(mu) for mu in range(4)))


def transform_connection(conn: GaugeConnection, lam: Callable,
                         fd: FDConfig) -> GaugeConnection:
    """Unified law omega'_mu = Lambda omega_mu Lambda^{-1} - (d_mu Lambda) Lambda^{-1}.

    Lambda^{-1} comes from the multiplicative norm; zero-divisor values
    raise.  d_mu Lambda is taken by finite differences on the realized
    Lambda field, so any smooth Lambda map works.  For unit Lambda the
    inverse is bar(Lambda); for Lambda = e^{i phi} the law reduces to
    omega - i d(phi).
    """

    def make(mu):
        f = conn.omega[mu]

        def w_prime(q):
            lv = lam(q)
            n, inv = norm_and_inverse(lv)
            if inv is None:
                raise ZeroDivisorError(
                    f"Lorentz map has zero norm {n!r} at {q!r}; cannot invert"
                )
            dlam = partial(lam, mu, q, fd)
            return lv * f(q) * inv - dlam * inv

        return w_prime

    return GaugeConnection(omega=tuple(make(mu) for mu in range(4)),
                           coupling=conn.coupling)


def transform_species(f: Callable, species: Species, lam: Callable) -> Callable:
    """Apply the per-species transformation law pointwise to a field."""
    if species is Species.L_SPINOR:
        return lambda q: lam(q) * f(q)
    if species is Species.R_SPINOR:
        return lambda q: f(q) * lam(q).bar_star()
    if species is Species.VECTOR:
        return lambda q: lam(q) * f(q) * lam(q).bar_star()
    if species is Species.SCALAR:
        return f
    raise ValueError(f"unknown species {species!r}")


def u1_transform(conn: GaugeConnection, psi_l: Callable, psi_r: Callable,
                 phi: U1Field, fd: FDConfig):
    """omega' = omega - i d(phi); psi'_L = e^{+i phi} psi_L; psi'_R = e^{-i phi} psi_R."""

    def make_omega(mu):
        f = conn.omega[mu]

        def w_prime(q):
            dphi = partial(lambda r: complex(phi.angle(r)), mu, q, fd)
            return f(q) - Biquaternion(1j * dphi)

        return w_prime

    conn_p = GaugeConnection(omega=tuple(make_omega(mu) for mu in range(4)),
                             coupling=conn.coupling)
    psi_l_p = lambda q: psi_l(q) * cmath.exp(1j * phi.angle(q))
    psi_r_p = lambda q: psi_r(q) * cmath.exp(-1j * phi.angle(q))
    return conn_p, psi_l_p, psi_r_p


# ---------------------------------------------------------------------------
# Covariant derivatives of rank-0 species fields (no coordinate indices)
# ---------------------------------------------------------------------------


def _d_species(f: Callable, species: Species, conn: GaugeConnection, mu: int,
               p, fd: FDConfig) -> Biquaternion:
    x = np.asarray(p, dtype=float)
    d = partial(f, mu, x, fd)
    w = conn.omega[mu](x)
    v = f(x)
    if species is Species.L_SPINOR:
        return d + w * v
    if species is Species.R_SPINOR:
        return d + v * w.bar_star()
    if species is Species.VECTOR:
        return d + w * v + v * w.bar_star()
    return d


# ---------------------------------------------------------------------------
# Residuals
# ---------------------------------------------------------------------------


def lorentz_metric_residual(basis: BasisField, lam: Callable, p) -> float:
    """|g' - g| under s -> Lambda s bar_star(Lambda); exact invariance."""
    g = metric_at(basis, p)
    g_prime = metric_at(transform_basis(basis, lam), p)
    return float(np.max(np.abs(g_prime - g)))


def lorentz_gamma_residual(basis: BasisField, conn: GaugeConnection,
                           lam: Callable, p, fd: FDConfig) -> float:
    """|Gamma' - Gamma| with Gamma' built from the transformed s and omega."""
    gamma = gamma_minimal_at(basis, conn, p, fd)
    basis_p = transform_basis(basis, lam)
    conn_p = transform_connection(conn, lam, fd)
    gamma_p = gamma_minimal_at(basis_p, conn_p, p, fd)
    return float(np.max(np.abs(gamma_p - gamma)))


def species_covariance_residual(f: Callable, species: Species,
                                conn: GaugeConnection, lam: Callable, p,
                                fd: FDConfig) -> float:
    """max_mu |D'_mu f' - law(D_mu f)|, both sides computed independently."""
    x = np.asarray(p, dtype=float)
    f_p = transform_species(f, species, lam)
    conn_p = transform_connection(conn, lam, fd)
    lv = lam(x)
    worst = 0.0
    for mu in range(4):
        primed = _d_species(f_p, species, conn_p, mu, x, fd)
        base = _d_species(f, species, conn, mu, x, fd)
        if species is Species.L_SPINOR:
            expected = lv * base
        elif species is Species.R_SPINOR:
            expected = base * lv.bar_star()
        elif species is Species.VECTOR:
            expected = lv * base * lv.bar_star()
        else:
            expected = base
        worst = max(worst, abs_max(primed - expected))
    return worst


def u1_spinor_covariance_residual(f: Callable, species: Species,
                                  conn: GaugeConnection, phi: U1Field, p,
                                  fd: FDConfig) -> float:
    """max_mu |D'_mu psi' - e^{+-i phi} D_mu psi| under the U(1) laws."""
    x = np.asarray(p, dtype=float)
    if species not in (Species.L_SPINOR, Species.R_SPINOR):
        raise ValueError("U(1) spinor covariance applies to L or R spinors")
    conn_p, psi_l_p, psi_r_p = u1_transform(conn, f, f, phi, fd)
    f_p = psi_l_p if species is Species.L_SPINOR else psi_r_p
    sign = 1.0 if species is Species.L_SPINOR else -1.0
    phase = cmath.exp(sign * 1j * phi.angle(x))
    worst = 0.0
    for mu in range(4):
        primed = _d_species(f_p, species, conn_p, mu, x, fd)
        expected = _d_species(f, species, conn, mu, x, fd) * phase
        worst = max(worst, abs_max(primed - expected))
    return worst


def u1_vector_invariance_residual(v: Callable, conn: GaugeConnection,
                                  phi: U1Field, p, fd: FDConfig) -> float:
    """max_mu |D'_mu V - D_mu V|: U(1) does not touch vector fields."""
    x = np.asarray(p, dtype=float)
    conn_p, _, _ = u1_transform(conn, v, v, phi, fd)
    worst = 0.0
    for mu in range(4):
        primed = _d_species(v, Species.VECTOR, conn_p, mu, x, fd)
        base = _d_species(v, Species.VECTOR, conn, mu, x, fd)
        worst = max(worst, abs_max(primed - base))
    return worst


def unified_reduction_residual(conn: GaugeConnection, phi: U1Field, p,
                               fd: FDConfig) -> float:
    """|transform_connection with Lambda = e^{i phi} minus (omega - i d(phi))|."""
    x = np.asarray(p, dtype=float)
    via_unified = transform_connection(conn, phi.as_lorentz(), fd)
    via_u1, _, _ = u1_transform(conn, lambda q: Biquaternion(1),
                                lambda q: Biquaternion(1), phi, fd)
    worst = 0.0
    for mu in range(4):
        worst = max(worst, abs_max(via_unified.omega[mu](x) - via_u1.omega[mu](x)))
    return worst


# ---------------------------------------------------------------------------
# Coordinate transformations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoordinateMap:
    """x -> x' with a user-supplied Jacobian d x'^mu / d x^nu.

    The Jacobian is cross-checked against finite differences of the
    forward map; the inverse Jacobian comes from pointwise matrix
    inversion, so no root-finding is ever needed.
    """

    forward: tuple  # 4 callables point -> complex (real-valued)
    jacobian: tuple  # 16 callables, row-major J[mu][nu] = d x'^mu / d x^nu
    det_tol: float = 1e-12

    def __post_init__(self) -> None:
        if len(self.forward) != 4 or len(self.jacobian) != 16:
            raise ValueError("coordinate map needs 4 forward and 16 jacobian fields")

    def jacobian_at(self, p) -> np.ndarray:
        x = np.asarray(p, dtype=float)
        j = np.empty((4, 4))
        for mu in range(4):
            for nu in range(4):
                v = complex(self.jacobian[4 * mu + nu](x))
                j[mu, nu] = v.real
        if abs(np.linalg.det(j)) <= self.det_tol:
            raise ValueError(f"coordinate map is singular at {p!r}")
        return j

    def inverse_jacobian_at(self, p) -> np.ndarray:
        return np.linalg.inv(self.jacobian_at(p))

    def fd_jacobian_residual(self, p, fd: FDConfig) -> float:
        """Max |supplied - finite-difference| entry of the Jacobian."""
        x = np.asarray(p, dtype=float)
        j = self.jacobian_at(x)
        worst = 0.0
        for mu in range(4):
            for nu in range(4):
                d = complex(partial(self.forward[mu], nu, x, fd))
                worst = max(worst, abs(d - j[mu, nu]))
        return worst


def _gamma_primed_direct(basis: BasisField, conn: GaugeConnection,
                         cmap: CoordinateMap, p, fd: FDConfig) -> np.ndarray:
    """Gamma' computed from first principles in the primed chart.

    Primed fields are realized as closures over the original chart:
    s'_nu = Jinv^beta_nu s_beta, omega'_rho = Jinv^gamma_rho omega_gamma,
    and the primed partial is the directional derivative
    d'_rho = Jinv^gamma_rho d_gamma.
    """
    x = np.asarray(p, dtype=float)

    def s_prime(nu):
        def f(q):
            jinv = cmap.inverse_jacobian_at(q)
            sv = basis.at(q)
            acc = Biquaternion()
            for beta in range(4):
                acc = acc + sv[beta] * jinv[beta, nu]
            return acc

        return f

    s_prime_fields = [s_prime(nu) for nu in range(4)]
    jinv0 = cmap.inverse_jacobian_at(x)
    wvals = conn.at(x)
    w_prime = []
    for rho in range(4):
        acc = Biquaternion()
        for gamma_i in range(4):
            acc = acc + wvals[gamma_i] * jinv0[gamma_i, rho]
        w_prime.append(acc)

    # Primed frame: values and duals of s'.
    s_vals = [f(x) for f in s_prime_fields]
    g = np.empty((4, 4))
    for a in range(4):
        for b in range(4):
            g[a, b] = inner(s_vals[a], s_vals[b]).real
    ginv = np.linalg.inv(g)
    s_up = []
    for mu in range(4):
        acc = Biquaternion()
        for nu in range(4):
            acc = acc + s_vals[nu] * ginv[mu, nu]
        s_up.append(acc)

    gamma_p = np.empty((4, 4, 4))
    for nu in range(4):
        dparts = [partial(s_prime_fields[nu], g_i, x, fd) for g_i in range(4)]
        for rho in range(4):
            d = Biquaternion()
            for g_i in range(4):
                d = d + dparts[g_i] * jinv0[g_i, rho]
            target = d + w_prime[rho] * s_vals[nu] + s_vals[nu] * w_prime[rho].bar_star()
            for mu in range(4):
                gamma_p[mu, nu, rho] = inner(s_up[mu], target).real
    return gamma_p


def coordinate_gamma_check(basis: BasisField, conn: GaugeConnection,
                           cmap: CoordinateMap, p, fd: FDConfig) -> float:
    """Residual of the inhomogeneous coordinate law for Gamma.

    Gamma'^mu_{nu rho} = J^mu_alpha Jinv^beta_nu Jinv^gamma_rho
    Gamma^alpha_{beta gamma} + J^mu_beta H^beta_{nu rho}, with
    H^beta_{nu rho} = Jinv^gamma_rho d_gamma(Jinv^beta_nu) obtained by
    finite-differencing the inverse Jacobian.  The direct side rebuilds
    Gamma' from the transformed basis and connection.
    """
    x = np.asarray(p, dtype=float)
    gamma = gamma_minimal_at(basis, conn, x, fd)
    j = cmap.jacobian_at(x)
    jinv = np.linalg.inv(j)
    djinv = np.stack([partial(cmap.inverse_jacobian_at, g_i, x, fd)
                      for g_i in range(4)])
    # djinv[gamma, beta, nu] = d_gamma Jinv^beta_nu
    h = np.einsum("gr,gbn->bnr", jinv, djinv)
    predicted = (np.einsum("ma,bn,gr,abg->mnr", j, jinv, jinv, gamma)
                 + np.einsum("mb,bnr->mnr", j, h))
    direct = _gamma_primed_direct(basis, conn, cmap, x, fd)
    return float(np.max(np.abs(direct - predicted)))
