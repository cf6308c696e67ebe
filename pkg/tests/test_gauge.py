import math

import numpy as np
import pytest

from cqgeom.algebra import E1, E2, E3, IM, Biquaternion, abs_max
from cqgeom.fields import FDConfig
from cqgeom.gauge import (
    DecompositionError,
    GaugeConnection,
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
from cqgeom.geometry import BasisField, gamma_minimal_at, torsion

FD = FDConfig(step=1e-4, order=4)
P = np.array([0.3, 0.2, -0.1, 0.4])

FLAT = BasisField(s=(lambda q: IM, lambda q: E1, lambda q: E2, lambda q: E3))
TORSION_BASIS = BasisField(s=(lambda q: IM, lambda q: E1 + E2 * q[0],
                              lambda q: E2, lambda q: E3))


def const_conn(*vals, coupling=1.0):
    return GaugeConnection(omega=tuple((lambda q, v=v: v) for v in vals),
                           coupling=coupling)


def u1_conn(a_exprs, coupling=1.0):
    """Pure-U(1) connection omega_mu = i g A_mu(q)."""

    def make(a):
        return lambda q: Biquaternion(1j * coupling * a(q))

    return GaugeConnection(omega=tuple(make(a) for a in a_exprs),
                           coupling=coupling)


# chi != 0 and curvature != 0: the stress case for every identity below.
CURVED = GaugeConnection(
    omega=(
        lambda q: E1 * (0.3 * q[0]) + Biquaternion(0.2j * q[1]),
        lambda q: E2 * (0.2 * q[1]) + E3 * (0.1j * q[0]),
        lambda q: Biquaternion(0.25j * q[0]),
        lambda q: E1 * 0.15,
    ),
    coupling=0.5,
)


def test_omega_condition_examples():
    p = np.array([0.7, 0, 0, 0])
    good = GaugeConnection(omega=(lambda q: Biquaternion(1j * q[0]),) * 4)
    assert check_omega_condition(good, p) == 0.0
    vec = const_conn(E1 + IM * E2, E3, Biquaternion(), Biquaternion())
    assert check_omega_condition(vec, p) == 0.0
    bad = const_conn(Biquaternion(1), Biquaternion(), Biquaternion(),
                     Biquaternion())
    assert check_omega_condition(bad, p) == 2.0


def test_decompose_examples():
    conn = const_conn(Biquaternion(0.5j), E3, Biquaternion(), Biquaternion(),
                      coupling=0.25)
    chi, a = decompose_omega(conn, P)
    assert a[0] == 2.0 and a[1] == 0.0
    assert abs_max(chi[0]) == 0.0
    assert chi[1] == E3
    zero = GaugeConnection.zero()
    chi, a = decompose_omega(zero, P)
    assert np.all(a == 0) and all(abs_max(c) == 0 for c in chi)


def test_decompose_zero_coupling_error():
    conn = const_conn(Biquaternion(0.5j), Biquaternion(), Biquaternion(),
                      Biquaternion(), coupling=0.0)
    with pytest.raises(DecompositionError):
        decompose_omega(conn, P)


def test_field_strength_zero():
    st = field_strength_at(GaugeConnection.zero(), FLAT, P, FD)
    assert st.antisymmetry_residual() == 0.0
    assert all(abs_max(st.omega[r][s]) == 0 for r in range(4) for s in range(4))
    assert np.max(np.abs(st.f)) == 0.0


def test_field_strength_u1_oracle():
    # Flat basis, A = (0, t, 0, 0): Gamma = 0 so F_01 = dA_1/dt = 1 and
    # Omega_01 = i g 1 with no vector part.
    g = 0.7
    conn = u1_conn((lambda q: 0.0, lambda q: q[0], lambda q: 0.0,
                    lambda q: 0.0), coupling=g)
    st = field_strength_at(conn, FLAT, P, FD)
    assert abs(st.f[0, 1] - 1.0) < 1e-10
    assert abs_max(st.omega[0][1] - Biquaternion(1j * g)) < 1e-10
    assert st.k_vector_residual() < 1e-12
    assert max(abs_max(st.k[r][s]) for r in range(4) for s in range(4)) < 1e-10
    assert st.closure_residual < 1e-12


def test_field_strength_closure_curved():
    for basis in (FLAT, TORSION_BASIS):
        st = field_strength_at(CURVED, basis, P, FD)
        assert st.closure_residual < 1e-12
        assert st.antisymmetry_residual() < 1e-13
        assert st.k_vector_residual() < 1e-12


def test_riemann_flat_zero():
    curv = riemann_at(FLAT, GaugeConnection.zero(), P, FD)
    assert np.max(np.abs(curv.r)) < 1e-12


def test_riemann_zero_without_omega():
    # With omega = 0 the basis is covariantly constant for Gamma, so the
    # minimal connection is flat regardless of the basis.
    for basis in (TORSION_BASIS,):
        curv = riemann_at(basis, GaugeConnection.zero(), P, FD)
        assert np.max(np.abs(curv.r)) < 1e-8


def test_riemann_antisymmetry_and_cross_check():
    for basis in (FLAT, TORSION_BASIS):
        direct = riemann_at(basis, CURVED, P, FD)
        assert direct.antisymmetry_residual() < 1e-9
        oracle = riemann_commutator_at(basis, CURVED, P, FD)
        assert np.max(np.abs(direct.r - oracle)) < 1e-6
        assert np.max(np.abs(direct.r)) > 1e-2  # genuinely curved


def test_strength_relation():
    for basis in (FLAT, TORSION_BASIS):
        assert strength_relation_residual(basis, CURVED, P, FD) < 1e-7


def test_strength_relation_is_discrete_identity():
    # All terms derive from the same stencil, so the residual stays at
    # roundoff regardless of the step size or order.
    for step in (5e-2, 1e-3):
        for order in (2, 4):
            fd = FDConfig(step=step, order=order)
            r = strength_relation_residual(TORSION_BASIS, CURVED, P, fd)
            assert r < 1e-12


def test_lagrangian_eh_identity():
    # Includes the case where both torsion and the vector part of omega
    # are nonzero, so the explicit torsion coupling term is exercised.
    for basis in (FLAT, TORSION_BASIS):
        eh = lagrangian_eh_at(basis, CURVED, P, FD)
        assert eh.identity_residual() < 1e-6


def test_lagrangian_eh_torsion_coupling_vanishes_for_pure_u1():
    conn = u1_conn((lambda q: q[1], lambda q: q[0], lambda q: 0.0,
                    lambda q: 0.0), coupling=0.5)
    eh = lagrangian_eh_at(TORSION_BASIS, conn, P, FD)
    assert abs(eh.torsion_coupling) < 1e-10
    assert abs(eh.via_ricci - eh.via_omega) < 1e-6


def test_lagrangian_quadratic_hand_oracle():
    # Flat basis, A = (0, t, 0, 0), g = 1: F_01 = 1, ff = -2, kk = 0,
    # total = kk - g^2 ff = 2.
    conn = u1_conn((lambda q: 0.0, lambda q: q[0], lambda q: 0.0,
                    lambda q: 0.0), coupling=1.0)
    quad = lagrangian_quadratic_at(FLAT, conn, P, FD)
    assert abs(quad.ff + 2.0) < 1e-10
    assert abs(quad.kk) < 1e-10
    assert abs(quad.total - 2.0) < 1e-10
    assert quad.identity_residual() < 1e-12


def test_lagrangian_quadratic_identity_random(rng):
    # Random admissible connections: identity is pure algebra.
    for _ in range(5):
        coeffs = rng.normal(size=(4, 4)) * 0.3
        conn = GaugeConnection(
            omega=tuple(
                (lambda q, c=c: Biquaternion(1j * c[0] * q[0],
                                             c[1] * q[1], c[2], c[3] * q[2]))
                for c in coeffs
            ),
            coupling=0.8,
        )
        quad = lagrangian_quadratic_at(FLAT, conn, P, FD)
        assert quad.identity_residual() < 1e-10


def test_f_torsion_term():
    # Torsion basis with A along the mixed direction: F picks up a
    # genuine torsion contribution.
    conn = u1_conn((lambda q: 0.0, lambda q: 0.0, lambda q: q[0],
                    lambda q: 0.0), coupling=0.5)
    p = np.array([0.5, 0.1, -0.2, 0.3])
    term, residual = f_torsion_residual(TORSION_BASIS, conn, p, FD)
    assert term > 1e-3
    assert residual < 1e-7
    gamma = gamma_minimal_at(TORSION_BASIS, conn, p, FD)
    assert np.max(np.abs(torsion(gamma))) > 1e-3


def test_connection_needs_four_fields():
    with pytest.raises(ValueError):
        GaugeConnection(omega=(lambda q: Biquaternion(),) * 3)
