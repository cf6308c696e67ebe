"""Gauge sector: connection condition, field strength, curvature, Lagrangians.

The gauge connection omega is a quadruple of biquaternion fields whose
scalar parts are purely imaginary.  It decomposes as omega = chi + i*g*A
with chi the vector part and A a real covector.  Its curvature Omega
splits accordingly as K + i*g*F.

Conventions frozen here (validated numerically in the test suite):

* ``gamma[mu, nu, rho]`` is Gamma^mu_{nu rho} (derivative index last).
* ``R[mu, nu, rho, sigma]`` is
  R^mu_{nu rho sigma} = d_rho Gamma^mu_{nu sigma} - d_sigma Gamma^mu_{nu rho}
  + Gamma^mu_{tau rho} Gamma^tau_{nu sigma}
  - Gamma^mu_{tau sigma} Gamma^tau_{nu rho}.
* With nabla the coordinate-only covariant derivative (Gamma coupling,
  no omega) and the second nabla coupling only the basis index, the
  commutator identity reads

      [nabla_rho, nabla_sigma] s_nu = -R^lam_{nu rho sigma} s_lam

  exactly -- the torsion completion T^tau_{rho sigma} nabla_tau s_nu
  appears only in the field-strength relation below, where it absorbs
  the difference between Omega built with nabla and with plain partials.
* Field-strength relation (exact under minimality):

      0 = [nabla_rho, nabla_sigma] s_mu + T^tau_{rho sigma} nabla_tau s_mu
          + Omega_{rho sigma} s_mu + s_mu bar_star(Omega_{rho sigma}).

* Einstein-Hilbert-like scalar: the double contraction is frozen as
  L = g^{nu beta} R^mu_{beta nu mu}, which equals
  -2 Re<s^mu bar(s^nu), Omega_{mu nu}> up to a torsion coupling term
  2 Re[T^tau_{mu nu} <s^mu bar(s^nu), omega_tau>] that vanishes whenever
  the torsion or the vector part of omega does.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import Biquaternion, abs_max, commutator, inner
from .fields import FDConfig, partial
from .geometry import BasisField, frame_at, gamma_minimal_at, torsion

__all__ = [
    "DecompositionError",
    "GaugeConnection",
    "StrengthSample",
    "CurvatureSample",
    "EHSample",
    "QuadraticSample",
    "check_omega_condition",
    "decompose_omega",
    "field_strength_at",
    "riemann_at",
    "riemann_commutator_at",
    "strength_relation_residual",
    "lagrangian_eh_at",
    "lagrangian_quadratic_at",
    "f_torsion_residual",
]


class DecompositionError(ValueError):
    """chi + i*g*A decomposition undefined (g = 0 with nonzero scalar part)."""


def _zero_field(p) -> Biquaternion:
    return Biquaternion()


@dataclass(frozen=True)
class GaugeConnection:
    """Four biquaternion connection fields and a real coupling constant."""

    omega: tuple  # 4 callables point -> Biquaternion
    coupling: float = 1.0

    def __post_init__(self) -> None:
        if len(self.omega) != 4:
            raise ValueError("gauge connection needs exactly 4 fields")

    @classmethod
    def zero(cls, coupling: float = 1.0) -> "GaugeConnection":
        return cls(omega=(_zero_field,) * 4, coupling=coupling)

    def at(self, p) -> list[Biquaternion]:
        x = np.asarray(p, dtype=float)
        return [w(x) for w in self.omega]


def check_omega_condition(conn: GaugeConnection, p) -> float:
    """max_mu |Scal(omega_mu + bar_star(omega_mu))| = max_mu 2|Re omega_mu,0|."""
    return max(abs(w.w + w.bar_star().w) for w in conn.at(p))


def decompose_omega(conn: GaugeConnection, p, *, tol: float = 1e-12):
    """Split omega_mu = chi_mu + i*g*A_mu into (chi: 4 vectors, A: 4 reals)."""
    vals = conn.at(p)
    g = conn.coupling
    chi = [w.vec() for w in vals]
    a = np.empty(4)
    for mu, w in enumerate(vals):
        if g == 0:
            if abs(w.w) > tol:
                raise DecompositionError(
                    "coupling is 0 but the connection has a scalar part"
                )
            a[mu] = 0.0
        else:
            a[mu] = w.w.imag / g
    return chi, a


def _chi_field(conn: GaugeConnection, mu: int):
    f = conn.omega[mu]
    return lambda q: f(q).vec()


def _a_field(conn: GaugeConnection, mu: int):
    f = conn.omega[mu]
    g = conn.coupling
    if g == 0:
        return lambda q: 0.0
    return lambda q: f(q).w.imag / g


@dataclass(frozen=True)
class StrengthSample:
    """Field strength Omega with its K (vector) and F (real abelian) parts."""

    point: np.ndarray
    omega: list  # omega[rho][sigma]: Biquaternion, antisymmetric
    k: list  # same layout, vector-valued
    f: np.ndarray  # (4, 4) real antisymmetric
    closure_residual: float  # max |Omega - K - i g F|

    def antisymmetry_residual(self) -> float:
        worst = 0.0
        for r in range(4):
            for s in range(4):
                worst = max(worst, abs_max(self.omega[r][s] + self.omega[s][r]))
        return worst

    def k_vector_residual(self) -> float:
        """Max scalar-part magnitude of K (K should be purely vector)."""
        return max(abs(self.k[r][s].w) for r in range(4) for s in range(4))


def _curl_with_torsion(values, partials, tors):
    """out[r][s] = d_r v_s - d_s v_r + T^t_{rs} v_t for biquaternion values."""
    out = [[None] * 4 for _ in range(4)]
    for r in range(4):
        for s in range(4):
            acc = partials[r][s] - partials[s][r]
            for t in range(4):
                acc = acc + values[t] * tors[t, r, s]
            out[r][s] = acc
    return out


def field_strength_at(conn: GaugeConnection, basis: BasisField, p,
                      fd: FDConfig) -> StrengthSample:
    """Omega_{rs} = nabla_r omega_s - nabla_s omega_r + [omega_r, omega_s].

    nabla couples the coordinate index of omega with the minimal
    connection; the Gamma terms survive antisymmetrization only through
    the torsion, so Omega = curl(omega) + T.omega + [omega, omega].
    K and F are the analogous expressions for chi and A; the closure
    Omega = K + i*g*F is exact and reported as a residual.
    """
    x = np.asarray(p, dtype=float)
    gamma = gamma_minimal_at(basis, conn, x, fd)
    tors = torsion(gamma)
    wvals = conn.at(x)
    dparts = [[partial(conn.omega[s], r, x, fd) for s in range(4)] for r in range(4)]
    omega_rs = _curl_with_torsion(wvals, dparts, tors)
    for r in range(4):
        for s in range(4):
            omega_rs[r][s] = omega_rs[r][s] + commutator(wvals[r], wvals[s])

    chi_fields = [_chi_field(conn, mu) for mu in range(4)]
    chi_vals = [w.vec() for w in wvals]
    dchi = [[partial(chi_fields[s], r, x, fd) for s in range(4)] for r in range(4)]
    k_rs = _curl_with_torsion(chi_vals, dchi, tors)
    for r in range(4):
        for s in range(4):
            k_rs[r][s] = k_rs[r][s] + commutator(chi_vals[r], chi_vals[s])

    g = conn.coupling
    a_fields = [_a_field(conn, mu) for mu in range(4)]
    a_vals = np.array([float(af(x)) for af in a_fields])
    da = np.array([[float(partial(a_fields[s], r, x, fd)) for s in range(4)]
                   for r in range(4)])
    f = da - da.T + np.einsum("trs,t->rs", tors, a_vals)

    worst = 0.0
    for r in range(4):
        for s in range(4):
            recomposed = k_rs[r][s] + Biquaternion(1j * g * f[r, s])
            worst = max(worst, abs_max(omega_rs[r][s] - recomposed))
    return StrengthSample(point=x, omega=omega_rs, k=k_rs, f=f,
                          closure_residual=worst)


@dataclass(frozen=True)
class CurvatureSample:
    point: np.ndarray
    r: np.ndarray  # (4, 4, 4, 4) real, R[mu, nu, rho, sigma]

    def antisymmetry_residual(self) -> float:
        return float(np.max(np.abs(self.r + self.r.transpose(0, 1, 3, 2))))


def riemann_at(basis: BasisField, conn: GaugeConnection, p,
               fd: FDConfig) -> CurvatureSample:
    """Curvature of the minimal connection by finite-differencing Gamma."""
    x = np.asarray(p, dtype=float)
    gamma = gamma_minimal_at(basis, conn, x, fd)

    def gamma_field(q):
        return gamma_minimal_at(basis, conn, q, fd)

    dgamma = np.stack([partial(gamma_field, rho, x, fd) for rho in range(4)])
    # dgamma[rho, mu, nu, sigma] = d_rho Gamma^mu_{nu sigma}
    r = (
        np.einsum("rmns->mnrs", dgamma)
        - np.einsum("smnr->mnrs", dgamma)
        + np.einsum("mtr,tns->mnrs", gamma, gamma)
        - np.einsum("mts,tnr->mnrs", gamma, gamma)
    )
    return CurvatureSample(point=x, r=r)


def _flatten(table) -> np.ndarray:
    out = np.empty((4, 4, 4), dtype=complex)
    for i in range(4):
        for j in range(4):
            out[i, j, :] = table[i][j].components
    return out


def _unflatten(arr: np.ndarray, i: int, j: int) -> Biquaternion:
    return Biquaternion(*arr[i, j, :])


def _coord_cov_basis_table(basis: BasisField, conn: GaugeConnection,
                           fd: FDConfig):
    """Field q -> flattened table of nabla_sigma s_nu (coordinate-only)."""

    def at(q):
        gamma = gamma_minimal_at(basis, conn, q, fd)
        svals = basis.at(q)
        out = np.empty((4, 4, 4), dtype=complex)
        for nu in range(4):
            for sigma in range(4):
                d = partial(basis.s[nu], sigma, q, fd)
                for tau in range(4):
                    d = d - svals[tau] * gamma[tau, nu, sigma]
                out[nu, sigma, :] = d.components
        return out

    return at


def naive_commutator_at(basis: BasisField, conn: GaugeConnection, p,
                        fd: FDConfig):
    """[nabla_rho, nabla_sigma] s_nu, nesting naively: the second nabla
    couples Gamma only to the basis index.

    Returns (comm, cov0, gamma) with comm[nu][rho][sigma] a Biquaternion
    and cov0[nu][sigma] = nabla_sigma s_nu at p.
    """
    x = np.asarray(p, dtype=float)
    gamma = gamma_minimal_at(basis, conn, x, fd)
    cov = _coord_cov_basis_table(basis, conn, fd)
    cov0_arr = cov(x)
    cov0 = [[_unflatten(cov0_arr, nu, sigma) for sigma in range(4)]
            for nu in range(4)]
    dcov = [partial(cov, rho, x, fd) for rho in range(4)]
    comm = [[[None] * 4 for _ in range(4)] for _ in range(4)]
    for nu in range(4):
        for rho in range(4):
            for sigma in range(4):
                acc = (_unflatten(dcov[rho], nu, sigma)
                       - _unflatten(dcov[sigma], nu, rho))
                for tau in range(4):
                    acc = acc - cov0[tau][sigma] * gamma[tau, nu, rho]
                    acc = acc + cov0[tau][rho] * gamma[tau, nu, sigma]
                comm[nu][rho][sigma] = acc
    return comm, cov0, gamma


def riemann_commutator_at(basis: BasisField, conn: GaugeConnection, p,
                          fd: FDConfig) -> np.ndarray:
    """R^mu_{nu rho sigma} = -<s^mu, [nabla_rho, nabla_sigma] s_nu>.

    Independent cross-check of riemann_at: no derivative of Gamma is
    taken, only of the covariant-derivative field itself.  The two
    formulas are algebraically identical; see the module docstring for
    the frozen sign.
    """
    x = np.asarray(p, dtype=float)
    frame = frame_at(basis, x)
    comm, _, _ = naive_commutator_at(basis, conn, x, fd)
    r = np.empty((4, 4, 4, 4))
    for mu in range(4):
        for nu in range(4):
            for rho in range(4):
                for sigma in range(4):
                    r[mu, nu, rho, sigma] = -inner(
                        frame.s_up[mu], comm[nu][rho][sigma]
                    ).real
    return r


def strength_relation_residual(basis: BasisField, conn: GaugeConnection, p,
                               fd: FDConfig) -> float:
    """Residual of the field-strength relation

        0 = [nabla_rho, nabla_sigma] s_mu + T^tau_{rho sigma} nabla_tau s_mu
            + Omega_{rho sigma} s_mu + s_mu bar_star(Omega_{rho sigma}),

    exact under minimality; the residual is pure finite-difference noise.
    """
    x = np.asarray(p, dtype=float)
    svals = basis.at(x)
    comm, cov0, gamma = naive_commutator_at(basis, conn, x, fd)
    tors = torsion(gamma)
    strength = field_strength_at(conn, basis, x, fd)
    worst = 0.0
    for mu in range(4):
        for rho in range(4):
            for sigma in range(4):
                om = strength.omega[rho][sigma]
                lhs = comm[mu][rho][sigma] + om * svals[mu] + svals[mu] * om.bar_star()
                for tau in range(4):
                    lhs = lhs + cov0[mu][tau] * tors[tau, rho, sigma]
                worst = max(worst, abs_max(lhs))
    return worst


@dataclass(frozen=True)
class EHSample:
    """Both evaluations of the curvature-scalar Lagrangian density."""

    via_ricci: float  # g^{nu beta} R^mu_{beta nu mu} from riemann_at
    via_omega: float  # -2 Re<s^mu bar(s^nu), Omega_{mu nu}>
    torsion_coupling: float  # 2 Re[T^tau_{mu nu} <s^mu bar(s^nu), omega_tau>]

    def identity_residual(self) -> float:
        """|via_ricci - via_omega - torsion_coupling|; algebraically zero."""
        return abs(self.via_ricci - self.via_omega - self.torsion_coupling)


def lagrangian_eh_at(basis: BasisField, conn: GaugeConnection, p,
                     fd: FDConfig) -> EHSample:
    """Curvature-scalar density evaluated two independent ways.

    The double contraction g^{nu beta} R^mu_{beta nu mu} (slot
    convention frozen against the via_omega oracle) equals
    -2 Re<s^mu bar(s^nu), Omega_{mu nu}> plus a torsion coupling that
    vanishes whenever the torsion or the vector part of omega does.
    """
    x = np.asarray(p, dtype=float)
    frame = frame_at(basis, x)
    curv = riemann_at(basis, conn, x, fd)
    via_ricci = float(np.einsum("nb,mbnm->", frame.ginv, curv.r))

    strength = field_strength_at(conn, basis, x, fd)
    s_up = frame.s_up
    via_omega = 0.0
    for mu in range(4):
        for nu in range(4):
            m = s_up[mu] * s_up[nu].bar()
            via_omega -= 2.0 * inner(m, strength.omega[mu][nu]).real

    wvals = conn.at(x)
    gamma = gamma_minimal_at(basis, conn, x, fd)
    tors = torsion(gamma)
    coupling = 0.0
    for mu in range(4):
        for nu in range(4):
            m = s_up[mu] * s_up[nu].bar()
            for tau in range(4):
                coupling += 2.0 * tors[tau, mu, nu] * inner(m, wvals[tau]).real
    return EHSample(via_ricci=via_ricci, via_omega=via_omega,
                    torsion_coupling=coupling)


@dataclass(frozen=True)
class QuadraticSample:
    """Re<Omega^{mn}, Omega_{mn}> and its K/F split."""

    total: float
    kk: float  # Re<K^{mn}, K_{mn}>
    ff: float  # F^{mn} F_{mn}
    coupling: float

    def identity_residual(self) -> float:
        """|total - kk + g^2 ff|; algebraic (scalar-vector orthogonality)."""
        return abs(self.total - self.kk + self.coupling**2 * self.ff)


def lagrangian_quadratic_at(basis: BasisField, conn: GaugeConnection, p,
                            fd: FDConfig) -> QuadraticSample:
    """total = Re<Omega^{mn}, Omega_{mn}> = kk - g^2 ff, indices raised by g."""
    x = np.asarray(p, dtype=float)
    frame = frame_at(basis, x)
    strength = field_strength_at(conn, basis, x, fd)
    ginv = frame.ginv

    def raised(table, m, n):
        acc = Biquaternion()
        for r in range(4):
            for s in range(4):
                acc = acc + table[r][s] * (ginv[m, r] * ginv[n, s])
        return acc

    total = 0.0
    kk = 0.0
    for m in range(4):
        for n in range(4):
            total += inner(raised(strength.omega, m, n), strength.omega[m][n]).real
            kk += inner(raised(strength.k, m, n), strength.k[m][n]).real
    f_up = ginv @ strength.f @ ginv.T
    ff = float(np.einsum("mn,mn->", f_up, strength.f))
    return QuadraticSample(total=total, kk=kk, ff=ff, coupling=conn.coupling)


def f_torsion_residual(basis: BasisField, conn: GaugeConnection, p,
                       fd: FDConfig) -> tuple[float, float]:
    """Return (torsion_term_size, residual) for the abelian strength.

    F differs from the plain curl of A by the torsion term
    T^tau_{nu mu}-contracted with A; on a torsion-free background the
    two coincide.  residual = max |F_{mn} - (d_m A_n - d_n A_m) - T^t_{mn} A_t|;
    torsion_term_size = max |T^t_{mn} A_t|.
    """
    x = np.asarray(p, dtype=float)
    strength = field_strength_at(conn, basis, x, fd)
    gamma = gamma_minimal_at(basis, conn, x, fd)
    tors = torsion(gamma)
    a_fields = [_a_field(conn, mu) for mu in range(4)]
    a_vals = np.array([float(af(x)) for af in a_fields])
    da = np.array([[float(partial(a_fields[n], m, x, fd)) for n in range(4)]
                   for m in range(4)])
    curl = da - da.T
    t_term = np.einsum("tmn,t->mn", tors, a_vals)
    residual = float(np.max(np.abs(strength.f - curl - t_term)))
    return float(np.max(np.abs(t_term))), residual
