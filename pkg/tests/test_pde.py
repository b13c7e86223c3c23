"""Transport-equation residuals: the computed surfaces satisfy the equation
at second order, while perturbed or merely-bounding surfaces visibly fail."""

import math

import numpy as np
import pytest

from sirtimes import (
    check_boundary_u,
    check_boundary_v,
    check_characteristic_identity,
    pde_residual,
    u_integral,
    v_integral,
)
from sirtimes.errors import DomainError, StencilOutOfDomain


def test_u_surface_satisfies_equation(p23):
    fld = lambda a, b: u_integral(p23, a, b).value
    for x, y in ((2.0, 1.5), (4.5, 2.0), (0.8, 2.0)):
        rep = pde_residual(fld, p23, x, y, 1e-3)
        assert rep.order_estimate is not None
        assert 1.7 <= rep.order_estimate <= 2.3
        small = pde_residual(fld, p23, x, y, 2.5e-4)
        assert abs(small.residual) <= 1e-5


def test_v_surface_satisfies_equation(p33):
    fld = lambda a, b: v_integral(p33, a, b).value
    for x, y in ((3.0, 1.0), (8.0, 2.5)):
        rep = pde_residual(fld, p33, x, y, 1e-3, domain_lower=(p33.rho, 0.0))
        assert rep.order_estimate is not None
        assert 1.7 <= rep.order_estimate <= 2.3
        small = pde_residual(fld, p33, x, y, 2.5e-4, domain_lower=(p33.rho, 0.0))
        assert abs(small.residual) <= 1e-5


def test_lower_bound_surface_fails_equation(p23):
    # the closed-form lower bound ln((x+y)/(rho+mu))/gamma transports the
    # total mass, not the infected count; its residual is y/(x+y) - 1
    w = lambda a, b: math.log((a + b) / 2.5) / 3.0
    rep = pde_residual(w, p23, 4.0, 2.0, 1e-4)
    assert rep.residual == pytest.approx(2.0 / 6.0 - 1.0, rel=1e-4)
    assert abs(rep.residual) > 1e-3


def test_scaled_surface_fails_equation(p23):
    # a 1 percent multiplicative error shifts the residual to ~0.01
    fld = lambda a, b: 1.01 * u_integral(p23, a, b).value
    rep = pde_residual(fld, p23, 4.0, 2.0, 1e-4)
    assert rep.residual == pytest.approx(0.01, abs=1e-4)


def test_shifted_surface_passes_equation(p23):
    # an additive constant is invisible to the first-order equation: the
    # residual alone cannot pin the boundary values, which is why the
    # boundary checks exist separately
    fld = lambda a, b: u_integral(p23, a, b).value
    shifted = lambda a, b: fld(a, b) + 0.01
    r0 = pde_residual(fld, p23, 4.0, 2.0, 1e-4).residual
    r1 = pde_residual(shifted, p23, 4.0, 2.0, 1e-4).residual
    assert abs(r1 - r0) <= 1e-8


def test_stencil_domain_guard(p23):
    fld = lambda a, b: u_integral(p23, a, b).value
    with pytest.raises(StencilOutOfDomain):
        pde_residual(fld, p23, 5e-4, 2.0, 1e-3)
    with pytest.raises(StencilOutOfDomain):
        pde_residual(fld, p23, 2.0, 1.0005, 1e-3)
    with pytest.raises(StencilOutOfDomain):
        pde_residual(fld, p23, 1.5005, 2.0, 1e-3, domain_lower=(1.5, 0.0))


def test_residual_input_validation(p23):
    fld = lambda a, b: u_integral(p23, a, b).value
    with pytest.raises(DomainError):
        pde_residual(fld, p23, 4.0, 2.0, 0.0)
    with pytest.raises(DomainError):
        pde_residual(fld, p23, 4.0, 2.0, math.nan)


def test_boundaries_exactly_zero(p23, p33):
    xs = [float(v) for v in np.linspace(0.0, p23.rho, 10)]
    assert check_boundary_u(p23, xs) == 0.0
    assert check_boundary_v(p33, [0.1, 1.0, 10.0, 1e6]) == 0.0


def test_boundary_input_validation(p23, p33):
    with pytest.raises(DomainError):
        check_boundary_u(p23, [2.0])  # x > rho is not on the boundary
    with pytest.raises(DomainError):
        check_boundary_v(p33, [0.0])


def test_characteristic_identity_both_times(p23, p33):
    assert check_characteristic_identity(p23, 4.0, 2.0, (0.25, 0.5, 0.75), "u") <= 1e-6
    assert check_characteristic_identity(p33, 5.0, 1.0, (0.25, 0.5, 0.75), "v") <= 1e-6


def test_characteristic_identity_validation(p23):
    with pytest.raises(DomainError):
        check_characteristic_identity(p23, 4.0, 2.0, (0.5,), "w")
    with pytest.raises(DomainError):
        check_characteristic_identity(p23, 4.0, 2.0, (1.0,), "u")
    with pytest.raises(DomainError):
        check_characteristic_identity(p23, 1.2, 1.0, (0.5,), "u")  # u = 0 there
