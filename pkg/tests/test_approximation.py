"""Projection/interpolation operators, seminorms, and bound evaluators."""

import math

import numpy as np
import pytest

from fraclag import (
    EvaluationError,
    Expansion,
    FracParams,
    GenParams,
    eval_flf,
    eval_flf_column,
    frac_quadrature,
    gen_interpolate,
    gen_project,
    gen_projection_bound,
    gen_quadrature,
    interpolate,
    interpolation_bound,
    project,
    projection_bound,
    quadrature_error_bound,
    sobolev_seminorms,
    stability_bound,
    weighted_l2_error,
)
from fraclag.approximation import fornberg_weights, mapped_derivative_values
from fraclag.generalized import eval_gflf_column
from fraclag.laguerre import laguerre_norm


def basis_member(params, m):
    return lambda x: eval_flf_column(params, m, x)[m]


class TestProject:
    def test_reproduces_basis_member(self):
        p = FracParams(0.5, 5.0, 1 / 3)
        e = project(basis_member(p, 3), 6, p)
        want = np.zeros(7)
        want[3] = 1.0
        assert np.abs(e.coeffs - want).max() <= 1e-12

    def test_power_gamma_coefficients(self):
        # x^gamma = basis_0 - basis_1 at theta=0, beta=0
        p = FracParams(0.0, 0.0, 0.5)
        e = project(lambda x: np.asarray(x) ** 0.5, 4, p)
        assert np.abs(e.coeffs - [1.0, -1.0, 0, 0, 0]).max() <= 1e-12

    def test_idempotence(self):
        p = FracParams(0.0, 20.0, 1 / 3)
        u = lambda x: np.sin(np.asarray(x) ** (1 / 3))
        e1 = project(u, 12, p)
        e2 = project(e1, 12, p)
        assert np.abs(e1.coeffs - e2.coeffs).max() <= 1e-12

    def test_oversample_guard(self):
        p = FracParams(0.0, 0.0, 0.5)
        with pytest.raises(ValueError):
            project(lambda x: x, 8, p, oversample=15)

    def test_non_finite_named_node(self):
        p = FracParams(0.0, 0.0, 1.0)
        bad = lambda x: np.where(np.asarray(x) > 1.0, np.inf, 1.0)
        with pytest.raises(EvaluationError, match="node"):
            project(bad, 4, p)

    def test_expansion_evaluates(self):
        p = FracParams(0.0, 0.0, 0.5)
        e = Expansion(family="fractional", params=p,
                      coeffs=np.array([1.0, -1.0]))
        assert e(4.0) == pytest.approx(2.0, rel=1e-14)   # x^gamma at 4
        assert e.degree == 1

    def test_expansion_family_validation(self):
        p = FracParams(0.0, 0.0, 0.5)
        with pytest.raises(ValueError):
            Expansion(family="nope", params=p, coeffs=np.zeros(1))
        with pytest.raises(TypeError):
            Expansion(family="generalized", params=p, coeffs=np.zeros(1))


class TestInterpolate:
    def test_reproduction_matches_projection(self):
        p = FracParams(0.0, 20.0, 1 / 3)
        u = basis_member(p, 5)
        ei = interpolate(u, 9, p)
        ep = project(u, 9, p)
        assert np.abs(ei.coeffs - ep.coeffs).max() <= 1e-11

    def test_degree_zero_constant(self):
        p = FracParams(0.0, 5.0, 0.5)
        rule = frac_quadrature(p, 0)
        u = lambda x: np.asarray(x) ** 2 + 1.0
        e = interpolate(u, 0, p)
        assert e.coeffs[0] == pytest.approx(float(u(rule.x_nodes[0])),
                                            rel=1e-14)

    @pytest.mark.parametrize("M", [2, 4, 8])
    def test_nodal_match_small_degrees(self, M):
        # modal reconstruction at remote nodes amplifies roundoff ~e^(y/2);
        # the 1e-10 vector-relative contract is double-precision-feasible
        # for M <= 8
        p = FracParams(0.5, 5.0, 1 / 3)
        u = lambda x: np.exp(-np.asarray(x, float) ** (1 / 3))
        e = interpolate(u, M, p)
        rule = frac_quadrature(p, M)
        uv = u(rule.x_nodes)
        err = np.abs(e(rule.x_nodes) - uv).max()
        assert err <= 1e-10 * np.abs(uv).max()

    @pytest.mark.parametrize("M", [2, 4, 6])
    def test_cardinal_property(self, M):
        # interpolating the j-th Lagrange function recovers e_j nodal data
        p = FracParams(0.0, 8.0, 0.5)
        rule = frac_quadrature(p, M)
        ys = rule.y_nodes
        for j in range(M + 1):
            def ell(x, _j=j):
                y = (p.beta + 1.0) * np.asarray(x, float) ** p.gamma
                num = np.prod([y - ys[r] for r in range(M + 1) if r != _j],
                              axis=0)
                den = np.prod([ys[_j] - ys[r] for r in range(M + 1)
                               if r != _j])
                return num / den
            e = interpolate(ell, M, p)
            got = e(rule.x_nodes)
            want = np.eye(M + 1)[j]
            assert np.abs(got - want).max() <= 1e-10

    def test_lagrange_form_equivalence_off_nodes(self):
        # modal transform == barycentric Lagrange interpolant between nodes
        p = FracParams(0.5, 5.0, 0.5)
        M = 10
        u = lambda x: np.sin(np.asarray(x, float) ** 0.5)
        e = interpolate(u, M, p)
        rule = frac_quadrature(p, M)
        ys = rule.y_nodes
        uv = u(rule.x_nodes)
        xs = np.geomspace(float(rule.x_nodes[0]), float(rule.x_nodes[-1]), 41)
        for x in xs:
            y = (p.beta + 1.0) * x ** p.gamma
            terms = []
            for j in range(M + 1):
                num = np.prod([y - ys[r] for r in range(M + 1) if r != j])
                den = np.prod([ys[j] - ys[r] for r in range(M + 1) if r != j])
                terms.append(uv[j] * num / den)
            lagrange = float(np.sum(terms))
            assert e(x) == pytest.approx(lagrange, rel=1e-8, abs=1e-10)


class TestGeneralizedOperators:
    def test_reproduces_gen_member(self):
        g = GenParams(0.0, 2.0, 0.5, 8.0)
        u = lambda x: eval_gflf_column(g, 2, x)[2]
        e = gen_project(u, 5, g)
        want = np.zeros(6)
        want[2] = 1.0
        assert np.abs(e.coeffs - want).max() <= 1e-11

    def test_sigma_equal_theta_agrees_with_frac(self):
        g = GenParams(1.0, 1.0, 0.5, 4.0)
        u = lambda x: np.exp(-np.asarray(x, float) ** 0.5)
        eg = gen_project(u, 8, g)
        ef = project(u, 8, g.frac)
        assert np.abs(eg.coeffs - ef.coeffs).max() <= 1e-12

    def test_prefactor_times_polynomial_exact(self):
        g = GenParams(0.0, 2.0, 0.5, 8.0)   # eta = -1/2
        u = lambda x: np.asarray(x, float) ** g.eta * (
            2.0 - np.asarray(x, float) ** g.gamma)
        e = gen_project(u, 3, g)
        err = weighted_l2_error(u, e)
        assert err <= 1e-11

    def test_pure_prefactor_member(self):
        g = GenParams(0.0, 2.0, 1.0, 16.0)
        u = lambda x: np.asarray(x, float) ** g.eta
        for M in (1, 8, 24):
            err = weighted_l2_error(u, gen_project(u, M, g))
            assert err <= 1e-11

    def test_gen_interpolate_nodal_match(self):
        # conjugated data for u2 = 1/sqrt(x) is constant; match is limited
        # only by the modal reconstruction conditioning at M=16 (~1e-7 of
        # the nodal scale in double precision)
        g = GenParams(0.0, 2.0, 0.5, 8.0)
        u = lambda x: 1.0 / np.sqrt(np.asarray(x, float))
        e = gen_interpolate(u, 16, g)
        rule = gen_quadrature(g, 16)
        uv = u(rule.x_nodes)
        err = np.abs(e(rule.x_nodes) - uv).max()
        assert err <= 1e-6 * np.abs(uv).max()

    @pytest.mark.parametrize("M", [2, 4, 8])
    def test_gen_interpolate_small_degrees(self, M):
        g = GenParams(2.0, 0.0, 0.5, 16.0)
        u = lambda x: np.sqrt(np.asarray(x, float)) * \
            np.exp(-np.asarray(x, float) ** 0.5)
        e = gen_interpolate(u, M, g)
        rule = gen_quadrature(g, M)
        uv = u(rule.x_nodes)
        assert np.abs(e(rule.x_nodes) - uv).max() <= 1e-10 * np.abs(uv).max()

    def test_gen_interpolate_is_conjugated_frac_interpolant(self):
        g = GenParams(0.0, 2.0, 0.5, 8.0)
        u = lambda x: np.sin(np.asarray(x, float) ** 0.5) / np.asarray(
            x, float) ** 0.5
        eg = gen_interpolate(u, 6, g)
        z = lambda x: np.asarray(x, float) ** (-g.eta) * u(x)
        ef = interpolate(z, 6, g.frac)
        assert np.abs(eg.coeffs - ef.coeffs).max() <= 1e-12

    def test_sigma_equal_theta_interpolate_reduces(self):
        g = GenParams(1.0, 1.0, 0.5, 4.0)
        u = lambda x: np.exp(-np.asarray(x, float) ** 0.5)
        assert np.abs(gen_interpolate(u, 5, g).coeffs
                      - interpolate(u, 5, g.frac).coeffs).max() <= 1e-13


class TestWeightedError:
    def test_exact_representation_is_zero(self):
        p = FracParams(0.0, 20.0, 1 / 3)
        u = basis_member(p, 3)
        e = project(u, 8, p)
        assert weighted_l2_error(u, e) <= 1e-12

    def test_monotone_in_degree(self):
        p = FracParams(0.0, 20.0, 1 / 3)
        u = lambda x: np.sin(np.asarray(x, float) ** (1 / 3))
        errs = [weighted_l2_error(u, project(u, M, p, oversample=256),
                                  oversample=256)
                for M in (4, 8, 16, 32)]
        for a, b in zip(errs, errs[1:]):
            assert b <= a + 1e-12

    def test_spectral_accuracy_matched_scale(self):
        p = FracParams(0.0, 20.0, 1 / 3)
        u = lambda x: np.sin(np.asarray(x, float) ** (1 / 3))
        err = weighted_l2_error(u, project(u, 32, p, oversample=256),
                                oversample=256)
        assert err <= 1e-8
        err40 = weighted_l2_error(u, project(u, 40, p, oversample=256),
                                  oversample=256)
        assert err40 <= 1e-10

    def test_basis_member_error_floor_above_degree(self):
        p = FracParams(0.0, 20.0, 1 / 3)
        u = basis_member(p, 5)
        for M in (5, 9, 17):
            assert weighted_l2_error(u, project(u, M, p)) <= 1e-11


class TestSobolevSeminorms:
    def test_basis_member_closed_form(self):
        # |basis_m|_r^2 = h_{m-r}^(theta+r)
        p = FracParams(1.0, 3.0, 0.5)
        m = 6
        md = [lambda x, _r=r: (-1.0) ** _r * eval_flf_column(
            FracParams(p.theta + _r, p.beta, p.gamma), m - _r, x)[m - _r]
            for r in range(m + 1)]
        rep = sobolev_seminorms(None, 4, p, oversample=200,
                                mapped_derivatives=md)
        for r in range(5):
            want = math.sqrt(laguerre_norm(p.theta + r, m - r))
            assert rep.seminorms[r] == pytest.approx(want, rel=1e-12)
        assert rep.norm ** 2 == pytest.approx(float(np.sum(rep.seminorms ** 2)),
                                              rel=1e-12)

    def test_order_zero_is_plain_norm(self):
        p = FracParams(0.0, 2.0, 0.5)
        u = lambda x: np.exp(-np.asarray(x, float) ** 0.5)
        rep = sobolev_seminorms(u, 0, p, oversample=200, derivatives=[u])
        rule = frac_quadrature(p, 199)
        uv = u(rule.x_nodes)
        want = math.sqrt(float(np.sum(rule.weights * uv ** 2)))
        assert rep.seminorms[0] == pytest.approx(want, rel=1e-13)

    def test_constants_have_zero_higher_seminorms(self):
        p = FracParams(0.0, 2.0, 0.5)
        u = lambda x: np.full_like(np.asarray(x, float), 2.5)
        dz = lambda x: np.zeros_like(np.asarray(x, float))
        rep = sobolev_seminorms(u, 3, p, oversample=100,
                                derivatives=[u, dz, dz, dz])
        assert np.abs(rep.seminorms[1:]).max() == 0.0

    def test_ordinary_derivative_route_matches_mapped(self):
        p = FracParams(0.0, 2.0, 0.5)
        u = lambda x: np.exp(-np.asarray(x, float) ** p.gamma)
        c = 1.0 / (p.beta + 1.0)
        md = [lambda x, _r=r: (-c) ** _r * u(x) for r in range(3)]
        xv = np.asarray
        dv = [u,
              lambda x: -p.gamma * xv(x, float) ** (p.gamma - 1) * u(x),
              lambda x: (-p.gamma * (p.gamma - 1) * xv(x, float) ** (p.gamma - 2)
                         + (p.gamma * xv(x, float) ** (p.gamma - 1)) ** 2) * u(x)]
        ra = sobolev_seminorms(u, 2, p, oversample=200, mapped_derivatives=md)
        ro = sobolev_seminorms(u, 2, p, oversample=200, derivatives=dv)
        assert np.abs(ra.seminorms - ro.seminorms).max() <= \
            1e-12 * ra.seminorms.max()

    def test_fd_default_oracle_rough_agreement(self):
        p = FracParams(0.0, 2.0, 0.5)
        u = lambda x: np.exp(-np.asarray(x, float) ** p.gamma)
        c = 1.0 / (p.beta + 1.0)
        md = [lambda x, _r=r: (-c) ** _r * u(x) for r in range(3)]
        ra = sobolev_seminorms(u, 2, p, oversample=150, mapped_derivatives=md)
        rf = sobolev_seminorms(u, 2, p, oversample=150)
        assert np.abs(ra.seminorms - rf.seminorms).max() <= \
            1e-3 * ra.seminorms.max()

    def test_generalized_variant_conjugates(self):
        # |v|_r for v = x^eta z equals the fractional seminorm of z
        g = GenParams(0.0, 2.0, 0.5, 8.0)
        c = 1.0 / (g.beta + 1.0)
        z = lambda x: np.exp(-np.asarray(x, float) ** g.gamma)
        v = lambda x: np.asarray(x, float) ** g.eta * z(x)
        gmd = [lambda x, _r=r: np.asarray(x, float) ** g.eta * (-c) ** _r * z(x)
               for r in range(3)]
        fmd = [lambda x, _r=r: (-c) ** _r * z(x) for r in range(3)]
        rg = sobolev_seminorms(v, 2, g, oversample=200,
                               mapped_derivatives=gmd)
        rf = sobolev_seminorms(z, 2, g.frac, oversample=200,
                               mapped_derivatives=fmd)
        assert np.abs(rg.seminorms - rf.seminorms).max() <= \
            1e-11 * rf.seminorms.max()

    def test_derivative_stack_length_guard(self):
        p = FracParams(0.0, 2.0, 0.5)
        with pytest.raises(ValueError):
            sobolev_seminorms(lambda x: x, 3, p, derivatives=[lambda x: x])

    def test_generalized_ordinary_derivative_route(self):
        # v = x^eta e^{-x^gamma}: supply ordinary derivatives of v and let
        # the conjugated Leibniz expansion recover the scaled-derivative
        # seminorms computed from the analytic mapped oracle
        g = GenParams(0.0, 2.0, 0.5, 8.0)     # eta = -1/2
        eta, gam = g.eta, g.gamma
        c = 1.0 / (g.beta + 1.0)
        xv = lambda x: np.asarray(x, float)
        z = lambda x: np.exp(-xv(x) ** gam)
        v = lambda x: xv(x) ** eta * z(x)
        dz = lambda x: -gam * xv(x) ** (gam - 1.0) * z(x)
        ddz = lambda x: (-gam * (gam - 1.0) * xv(x) ** (gam - 2.0)
                         + (gam * xv(x) ** (gam - 1.0)) ** 2) * z(x)
        dv = lambda x: eta * xv(x) ** (eta - 1.0) * z(x) \
            + xv(x) ** eta * dz(x)
        ddv = lambda x: (eta * (eta - 1.0) * xv(x) ** (eta - 2.0) * z(x)
                         + 2.0 * eta * xv(x) ** (eta - 1.0) * dz(x)
                         + xv(x) ** eta * ddz(x))
        gmd = [lambda x, _r=r: xv(x) ** eta * (-c) ** _r * z(x)
               for r in range(3)]
        ro = sobolev_seminorms(v, 2, g, oversample=200,
                               derivatives=[v, dv, ddv])
        rm = sobolev_seminorms(v, 2, g, oversample=200,
                               mapped_derivatives=gmd)
        assert np.abs(ro.seminorms - rm.seminorms).max() <= \
            1e-10 * rm.seminorms.max()


class TestMappedDerivativeValues:
    def test_matches_analytic_for_exponential(self):
        p = FracParams(0.0, 4.0, 1 / 3)
        u = lambda x: np.exp(-(p.beta + 1.0) * np.asarray(x, float) ** p.gamma)
        # ordinary derivatives of e^{-(b+1)x^g} up to order 3
        b1, g = p.beta + 1.0, p.gamma
        xv = lambda x: np.asarray(x, float)
        d1 = lambda x: -b1 * g * xv(x) ** (g - 1) * u(x)
        d2 = lambda x: (-b1 * g * (g - 1) * xv(x) ** (g - 2)
                        + (b1 * g) ** 2 * xv(x) ** (2 * g - 2)) * u(x)
        d3 = lambda x: (-b1 * g * (g - 1) * (g - 2) * xv(x) ** (g - 3)
                        + 3 * (b1 * g) ** 2 * (g - 1) * xv(x) ** (2 * g - 3)
                        - (b1 * g) ** 3 * xv(x) ** (3 * g - 3)) * u(x)
        xs = np.array([0.4, 1.3, 3.7])
        for r in range(4):
            got = mapped_derivative_values(p, r, xs, [u, d1, d2, d3])
            want = (-1.0) ** r * u(xs)     # D^r e^{-y} = (-1)^r e^{-y}
            assert np.abs(got - want).max() <= 1e-9 * np.abs(want).max()


class TestFornberg:
    def test_first_derivative_fourth_order(self):
        w = fornberg_weights(np.arange(-2.0, 3.0), 1)
        assert np.allclose(w, [1 / 12, -2 / 3, 0.0, 2 / 3, -1 / 12])

    def test_second_derivative_stencil(self):
        w = fornberg_weights(np.arange(-2.0, 3.0), 2)
        assert np.allclose(w, [-1 / 12, 4 / 3, -5 / 2, 4 / 3, -1 / 12])

    def test_exactness_on_polynomials(self):
        offs = np.arange(-3.0, 4.0) * 0.1
        for k in (1, 2, 3):
            w = fornberg_weights(offs, k)
            # d^k/dx^k of x^k at 0 is k!
            assert float(w @ offs ** k) == pytest.approx(math.factorial(k),
                                                         rel=1e-10)


class TestBounds:
    def test_projection_bound_examples(self):
        assert projection_bound(10, 3, 3, 0.0).value == pytest.approx(1.0)
        b = projection_bound(10, 3, 0, 0.0)
        assert b.value == pytest.approx(1.0 / math.sqrt(990.0), rel=1e-13)
        assert b.constant_included
        assert b.asymptotic_value is not None
        assert b.asymptotic_value >= b.value   # the estimate it majorizes

    def test_projection_bound_monotone_in_mu(self):
        vals = [projection_bound(12, mu, 0, 1.0).value for mu in range(1, 8)]
        for a, b in zip(vals, vals[1:]):
            assert b <= a

    def test_projection_bound_validation(self):
        with pytest.raises(ValueError):
            projection_bound(10, 2, 3, 0.0)

    def test_projection_bound_mu_hat_clamps(self):
        assert projection_bound(3, 9, 0, 0.0).value == \
            projection_bound(3, 4, 0, 0.0).value

    def test_asymptotic_only_for_special_case(self):
        assert projection_bound(10, 3, 1, 0.0).asymptotic_value is None
        assert projection_bound(10, 3, 0, 1.0).asymptotic_value is None
        assert projection_bound(10, 11, 0, 0.0).asymptotic_value is None

    def test_gen_projection_bound_matches(self):
        a = projection_bound(20, 4, 1, 1.5).value
        assert gen_projection_bound(20, 4, 1).value == a
        want = math.sqrt(math.factorial(17) / math.factorial(20))
        assert gen_projection_bound(20, 4, 1).value == pytest.approx(
            want, rel=1e-13)
        assert gen_projection_bound(20, 4, 4).value == pytest.approx(1.0)

    def test_interpolation_bound_example(self):
        b = interpolation_bound(10, 2, 0.0, 1.0, 1.0)
        want = (1.0 / math.sqrt(10.0)) * (1.0 + 2.0 * math.sqrt(math.log(10.0)))
        assert b.value == pytest.approx(want, rel=1e-13)
        assert not b.constant_included

    def test_interpolation_bound_zero_seminorms(self):
        assert interpolation_bound(10, 2, 0.0, 0.0, 0.0).value == 0.0

    def test_interpolation_bound_decreasing_in_M(self):
        vals = [interpolation_bound(M, 2, 0.0, 1.0, 1.0).value
                for M in range(4, 201, 7)]
        for a, b in zip(vals, vals[1:]):
            assert b < a

    def test_interpolation_bound_m_guard(self):
        with pytest.raises(ValueError):
            interpolation_bound(1, 2, 0.0, 1.0, 1.0)

    def test_stability_bound_examples(self):
        assert stability_bound(10, 0.0, 0.0).value == 0.0
        assert stability_bound(100, 1.0, 0.0).value == pytest.approx(0.1)
        assert stability_bound(10, 0.0, 1.0).value == pytest.approx(
            2.0 * math.sqrt(math.log(10.0)), rel=1e-13)

    def test_quadrature_error_bound(self):
        assert quadrature_error_bound(0.0, 0.5) == pytest.approx(0.5)
        assert quadrature_error_bound(3.0, 1.0) == pytest.approx(
            math.sqrt(6.0), rel=1e-14)
        assert quadrature_error_bound(1.0, 0.0) == 0.0
        with pytest.raises(ValueError):
            quadrature_error_bound(-1.5, 1.0)
        with pytest.raises(ValueError):
            quadrature_error_bound(0.0, -0.1)


class TestCommutator:
    def test_norm_identity_on_truncated_expansions(self):
        from fraclag import derivative_coefficient_shift
        th = 0.5
        c = np.array([0.4, -0.9, 0.33, 0.8, -0.21, 0.07, 0.55])
        N = len(c) - 1
        from fraclag.laguerre import laguerre_norms
        h = laguerre_norms(th, N)
        for M in range(1, N):
            full = derivative_coefficient_shift(c)
            trunc = derivative_coefficient_shift(c[:M + 1])
            v1m = full[M]
            diff = np.concatenate([full[:M] - trunc, [v1m]])
            lhs = float(np.sum(h[:M + 1] * diff ** 2))
            rhs = float(np.sum(h[:M + 1])) * v1m ** 2
            assert lhs == pytest.approx(rhs, rel=1e-10)
