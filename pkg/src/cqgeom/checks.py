"""Named verification checks and report assembly.

Each check evaluates one residual at one sample point and compares it
against a tolerance (scenario override > per-check default).  Checks
needing a Lorentz map, a U(1) phase, or a coordinate map are skipped
when the scenario does not supply one.

Default spinor/vector probe fields are deterministic smooth functions of
the chart coordinates, shared by every scenario so results are
reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import __version__
from .algebra import Biquaternion, inner
from .fields import partial
from .gauge import (
    check_omega_condition,
    decompose_omega,
    f_torsion_residual,
    field_strength_at,
    lagrangian_eh_at,
    lagrangian_quadratic_at,
    riemann_at,
    riemann_commutator_at,
    strength_relation_residual,
)
from .geometry import (
    component_identity_residual,
    frame_at,
    gamma_minimal_at,
    metric_covariant_residual,
    nabla_metric_residual,
    torsion,
)
from .geometry import Species
from .scenario import Scenario
from .transform import (
    lorentz_gamma_residual,
    lorentz_metric_residual,
    species_covariance_residual,
    u1_spinor_covariance_residual,
    u1_transform,
    u1_vector_invariance_residual,
    unified_reduction_residual,
    coordinate_gamma_check,
)

__all__ = ["CHECKS", "CheckDef", "CheckRecord", "Report", "run_checks",
           "resolve_check_names"]


# ---------------------------------------------------------------------------
# Deterministic probe fields
# ---------------------------------------------------------------------------


def default_psi_l(p) -> Biquaternion:
    t, x, y, z = (float(c) for c in p)
    return Biquaternion(0.3 + 0.1 * math.sin(t), 0.2 + 0.05 * x,
                        0.1 * math.cos(y), 0.04 * z)


def default_psi_r(p) -> Biquaternion:
    t, x, y, z = (float(c) for c in p)
    return Biquaternion(0.25 + 0.08 * math.cos(t), 0.06 * math.sin(x),
                        0.15 + 0.03 * y, 0.05 * math.sin(z))


def default_vector(p) -> Biquaternion:
    t, x, y, z = (float(c) for c in p)
    return Biquaternion(0.2 + 0.07 * math.sin(x), 0.1 + 0.05 * t,
                        0.08 * math.cos(z), 0.12 + 0.04 * y)


# Scalar component functions for the component-identity check.
_DEFAULT_COMPONENTS = (
    lambda p: 0.5 + 0.1 * math.sin(float(p[0])),
    lambda p: 0.3 + 0.05 * float(p[1]),
    lambda p: 0.2 * math.cos(float(p[2])),
    lambda p: 0.1 + 0.04 * float(p[3]),
)


# ---------------------------------------------------------------------------
# Check implementations: (scenario, point) -> residual
# ---------------------------------------------------------------------------


def _basis_minus_part(sc: Scenario, p) -> float:
    return sc.basis.minus_residual(p)


def _metric_real(sc: Scenario, p) -> float:
    values = sc.basis.at(p)
    worst = 0.0
    for mu in range(4):
        for nu in range(4):
            worst = max(worst, abs(inner(values[mu], values[nu]).imag))
    return worst


def _dual_pairing(sc: Scenario, p) -> float:
    frame = frame_at(sc.basis, p)
    worst = 0.0
    for mu in range(4):
        for nu in range(4):
            v = inner(frame.s_up[mu], frame.s[nu])
            worst = max(worst, abs(v - (1.0 if mu == nu else 0.0)))
    return worst


def _omega_admissible(sc: Scenario, p) -> float:
    return check_omega_condition(sc.connection, p)


def _omega_decomposition(sc: Scenario, p) -> float:
    chi, a = decompose_omega(sc.connection, p)
    g = sc.connection.coupling
    worst = 0.0
    for mu, w in enumerate(sc.connection.at(p)):
        rec = chi[mu] + Biquaternion(1j * g * a[mu])
        diff = w - rec
        worst = max(worst, max(abs(diff.w), abs(diff.x), abs(diff.y), abs(diff.z)))
    return worst


def _minimality(sc: Scenario, p) -> float:
    gamma = gamma_minimal_at(sc.basis, sc.connection, p, sc.fd)
    svals = sc.basis.at(p)
    wvals = sc.connection.at(p)
    worst = 0.0
    for nu in range(4):
        for rho in range(4):
            d = partial(sc.basis.s[nu], rho, p, sc.fd)
            d = d + wvals[rho] * svals[nu] + svals[nu] * wvals[rho].bar_star()
            for tau in range(4):
                d = d - svals[tau] * gamma[tau, nu, rho]
            worst = max(worst, max(abs(d.w), abs(d.x), abs(d.y), abs(d.z)))
    return worst


def _nabla_metric(sc: Scenario, p) -> float:
    return float(np.max(np.abs(nabla_metric_residual(sc.basis, sc.connection,
                                                     p, sc.fd))))


def _dg_covariant(sc: Scenario, p) -> float:
    return metric_covariant_residual(sc.basis, sc.connection, p, sc.fd)


def _component_identity(sc: Scenario, p) -> float:
    return component_identity_residual(_DEFAULT_COMPONENTS, sc.basis,
                                       sc.connection, p, sc.fd)


def _torsion_antisymmetry(sc: Scenario, p) -> float:
    t = torsion(gamma_minimal_at(sc.basis, sc.connection, p, sc.fd))
    return float(np.max(np.abs(t + t.transpose(0, 2, 1))))


def _strength_antisymmetry(sc: Scenario, p) -> float:
    return field_strength_at(sc.connection, sc.basis, p,
                             sc.fd).antisymmetry_residual()


def _strength_closure(sc: Scenario, p) -> float:
    return field_strength_at(sc.connection, sc.basis, p, sc.fd).closure_residual


def _k_vector_part(sc: Scenario, p) -> float:
    return field_strength_at(sc.connection, sc.basis, p, sc.fd).k_vector_residual()


def _riemann_antisymmetry(sc: Scenario, p) -> float:
    return riemann_at(sc.basis, sc.connection, p, sc.fd).antisymmetry_residual()


def _riemann_cross_check(sc: Scenario, p) -> float:
    direct = riemann_at(sc.basis, sc.connection, p, sc.fd).r
    oracle = riemann_commutator_at(sc.basis, sc.connection, p, sc.fd)
    return float(np.max(np.abs(direct - oracle)))


def _strength_relation(sc: Scenario, p) -> float:
    return strength_relation_residual(sc.basis, sc.connection, p, sc.fd)


def _f_torsion_term(sc: Scenario, p) -> float:
    _, residual = f_torsion_residual(sc.basis, sc.connection, p, sc.fd)
    return residual


def _lagrangian_eh(sc: Scenario, p) -> float:
    return lagrangian_eh_at(sc.basis, sc.connection, p, sc.fd).identity_residual()


def _lagrangian_quadratic(sc: Scenario, p) -> float:
    return lagrangian_quadratic_at(sc.basis, sc.connection, p,
                                   sc.fd).identity_residual()


def _lorentz_metric(sc: Scenario, p) -> float:
    return lorentz_metric_residual(sc.basis, sc.lorentz, p)


def _lorentz_gamma(sc: Scenario, p) -> float:
    return lorentz_gamma_residual(sc.basis, sc.connection, sc.lorentz, p, sc.fd)


def _lorentz_cov_l(sc: Scenario, p) -> float:
    return species_covariance_residual(default_psi_l, Species.L_SPINOR,
                                       sc.connection, sc.lorentz, p, sc.fd)


def _lorentz_cov_r(sc: Scenario, p) -> float:
    return species_covariance_residual(default_psi_r, Species.R_SPINOR,
                                       sc.connection, sc.lorentz, p, sc.fd)


def _lorentz_cov_v(sc: Scenario, p) -> float:
    return species_covariance_residual(default_vector, Species.VECTOR,
                                       sc.connection, sc.lorentz, p, sc.fd)


def _u1_admissible(sc: Scenario, p) -> float:
    conn_p, _, _ = u1_transform(sc.connection, default_psi_l, default_psi_r,
                                sc.u1, sc.fd)
    return check_omega_condition(conn_p, p)


def _u1_cov_l(sc: Scenario, p) -> float:
    return u1_spinor_covariance_residual(default_psi_l, Species.L_SPINOR,
                                         sc.connection, sc.u1, p, sc.fd)


def _u1_cov_r(sc: Scenario, p) -> float:
    return u1_spinor_covariance_residual(default_psi_r, Species.R_SPINOR,
                                         sc.connection, sc.u1, p, sc.fd)


def _u1_inv_v(sc: Scenario, p) -> float:
    return u1_vector_invariance_residual(default_vector, sc.connection,
                                         sc.u1, p, sc.fd)


def _unified_reduction(sc: Scenario, p) -> float:
    return unified_reduction_residual(sc.connection, sc.u1, p, sc.fd)


def _coordinate_gamma(sc: Scenario, p) -> float:
    return coordinate_gamma_check(sc.basis, sc.connection, sc.coord_map, p,
                                  sc.fd)


def _jacobian_consistency(sc: Scenario, p) -> float:
    return sc.coord_map.fd_jacobian_residual(p, sc.fd)


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckDef:
    name: str
    description: str
    default_tol: float
    func: Callable
    requires: str | None = None  # "lorentz" | "u1" | "map" | None


CHECKS: dict[str, CheckDef] = {}


def _register(name, description, tol, func, requires=None):
    CHECKS[name] = CheckDef(name=name, description=description,
                            default_tol=tol, func=func, requires=requires)


_register("basis_minus_part", "basis fields lie in the minus part",
          1e-12, _basis_minus_part)
_register("metric_real", "metric inner products are real",
          1e-10, _metric_real)
_register("dual_pairing", "dual basis pairs to the identity",
          1e-10, _dual_pairing)
_register("omega_admissible", "connection scalar parts are purely imaginary",
          1e-12, _omega_admissible)
_register("omega_decomposition", "omega = chi + i g A recomposes exactly",
          1e-12, _omega_decomposition)
_register("minimality", "full covariant derivative of the basis vanishes",
          1e-8, _minimality)
_register("nabla_metric", "metric compatibility nabla g = 0",
          1e-8, _nabla_metric)
_register("dg_covariant", "covariant derivative of g equals nabla g",
          1e-8, _dg_covariant)
_register("component_identity", "components of D V match nabla of components",
          1e-7, _component_identity)
_register("torsion_antisymmetry", "torsion is antisymmetric in lower indices",
          1e-13, _torsion_antisymmetry)
_register("strength_antisymmetry", "field strength is antisymmetric",
          1e-13, _strength_antisymmetry)
_register("strength_closure", "Omega = K + i g F",
          1e-12, _strength_closure)
_register("k_vector_part", "K has no scalar part",
          1e-12, _k_vector_part)
_register("riemann_antisymmetry", "curvature antisymmetric in last two slots",
          1e-9, _riemann_antisymmetry)
_register("riemann_cross_check", "Gamma-formula curvature matches commutator form",
          1e-6, _riemann_cross_check)
_register("strength_relation", "field-strength / curvature closure relation",
          1e-7, _strength_relation)
_register("f_torsion_term", "F minus curl(A) equals the torsion term",
          1e-7, _f_torsion_term)
_register("lagrangian_eh", "curvature-scalar density: both evaluations agree",
          1e-6, _lagrangian_eh)
_register("lagrangian_quadratic", "quadratic density splits as kk - g^2 ff",
          1e-10, _lagrangian_quadratic)
_register("lorentz_metric", "metric invariant under the Lorentz map",
          1e-11, _lorentz_metric, requires="lorentz")
_register("lorentz_gamma", "connection coefficients invariant under the Lorentz map",
          1e-8, _lorentz_gamma, requires="lorentz")
_register("lorentz_cov_l", "left spinor covariant derivative transforms covariantly",
          1e-7, _lorentz_cov_l, requires="lorentz")
_register("lorentz_cov_r", "right spinor covariant derivative transforms covariantly",
          1e-7, _lorentz_cov_r, requires="lorentz")
_register("lorentz_cov_v", "vector covariant derivative transforms covariantly",
          1e-7, _lorentz_cov_v, requires="lorentz")
_register("u1_admissible", "U(1)-transformed connection stays admissible",
          1e-12, _u1_admissible, requires="u1")
_register("u1_cov_l", "left spinor U(1) covariance",
          1e-8, _u1_cov_l, requires="u1")
_register("u1_cov_r", "right spinor U(1) covariance",
          1e-8, _u1_cov_r, requires="u1")
_register("u1_inv_v", "vector covariant derivative is U(1)-invariant",
          1e-10, _u1_inv_v, requires="u1")
_register("unified_reduction", "unified Lambda law reduces to the U(1) law",
          1e-10, _unified_reduction, requires="u1")
_register("coordinate_gamma", "connection follows the coordinate-change law",
          1e-6, _coordinate_gamma, requires="map")
_register("jacobian_consistency", "supplied Jacobian matches finite differences",
          1e-6, _jacobian_consistency, requires="map")


# ---------------------------------------------------------------------------
# Running and reporting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckRecord:
    name: str
    point: tuple
    residual: float | None
    tolerance: float
    passed: bool
    error: str | None = None

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "point": [float(c) for c in self.point],
            "residual": self.residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "error": self.error,
        }


@dataclass(frozen=True)
class Report:
    records: tuple
    scenario_echo: dict

    @property
    def total(self) -> int:
        return len(self.records)

    @property
    def failed(self) -> int:
        return sum(1 for r in self.records if not r.passed)

    @property
    def passed(self) -> int:
        return self.total - self.failed

    def to_json(self) -> dict:
        return {
            "tool": {"name": "cqgeom", "version": __version__},
            "scenario": self.scenario_echo,
            "checks": [r.to_json() for r in self.records],
            "summary": {
                "total": self.total,
                "passed": self.passed,
                "failed": self.failed,
            },
        }

    def to_text(self) -> str:
        lines = []
        width = max((len(r.name) for r in self.records), default=10)
        for r in self.records:
            status = "PASS" if r.passed else "FAIL"
            if r.residual is None:
                detail = f"error: {r.error}"
            else:
                detail = f"residual {r.residual:.3e} <= {r.tolerance:.1e}"
                if not r.passed:
                    detail = detail.replace("<=", ">")
            point = "(" + ", ".join(f"{c:+.3f}" for c in r.point) + ")"
            lines.append(f"{status}  {r.name:<{width}}  {point}  {detail}")
        lines.append(
            f"summary: {self.passed}/{self.total} passed, {self.failed} failed"
        )
        return "\n".join(lines)


def resolve_check_names(requested, scenario: Scenario) -> list[str]:
    """Expand 'all' and drop checks whose optional inputs are missing."""
    available = {
        "lorentz": scenario.lorentz is not None,
        "u1": scenario.u1 is not None,
        "map": scenario.coord_map is not None,
    }
    if list(requested) == ["all"]:
        names = [n for n, c in CHECKS.items()
                 if c.requires is None or available[c.requires]]
        return names
    out = []
    for name in requested:
        if name not in CHECKS:
            raise KeyError(f"unknown check {name!r}; see list-checks")
        c = CHECKS[name]
        if c.requires is not None and not available[c.requires]:
            raise KeyError(
                f"check {name!r} needs the [{c.requires}] scenario section"
            )
        out.append(name)
    return out


def _tolerance_for(name: str, scenario: Scenario) -> float:
    if name in scenario.tolerances:
        return scenario.tolerances[name]
    if "*" in scenario.tolerances:
        return scenario.tolerances["*"]
    return CHECKS[name].default_tol


def run_checks(scenario: Scenario) -> Report:
    """Run every requested check at every sample point."""
    names = resolve_check_names(scenario.check_names, scenario)
    records = []
    for name in names:
        check = CHECKS[name]
        tol = _tolerance_for(name, scenario)
        for p in scenario.points:
            point = tuple(float(c) for c in p)
            try:
                residual = float(check.func(scenario, np.asarray(p, dtype=float)))
            except Exception as exc:  # recorded, never aborts the run
                records.append(CheckRecord(name=name, point=point,
                                           residual=None, tolerance=tol,
                                           passed=False,
                                           error=f"{type(exc).__name__}: {exc}"))
                continue
            records.append(CheckRecord(name=name, point=point,
                                       residual=residual, tolerance=tol,
                                       passed=residual <= tol))
    return Report(records=tuple(records), scenario_echo=scenario.echo())
