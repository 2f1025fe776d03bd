"""Classical Laguerre evaluation, norms, quadrature, derivative identities."""

import math

import numpy as np
import pytest

from fraclag import (
    eval_laguerre,
    eval_laguerre_column,
    gamma_ratio_bound,
    gauss_rule,
    gauss_weights_explicit,
    laguerre_derivative_identities_check,
    laguerre_norm,
)
from fraclag.laguerre import laguerre_norms, recurrence_column


def test_degree_zero_is_one():
    assert eval_laguerre(0.0, 0, 3.7) == 1.0


def test_degree_one_closed_form():
    # L_1(y) = -y + theta + 1
    assert eval_laguerre(1.0, 1, 2.0) == 0.0
    assert eval_laguerre(0.3, 1, 0.7) == pytest.approx(-0.7 + 1.3, abs=1e-15)


def test_degree_two_closed_form():
    # L_2^(0)(y) = (y^2 - 4y + 2)/2
    assert eval_laguerre(0.0, 2, 1.0) == pytest.approx(-0.5, abs=1e-15)
    ys = np.linspace(0.1, 9.0, 7)
    want = (ys ** 2 - 4 * ys + 2) / 2
    got = np.array([eval_laguerre(0.0, 2, y) for y in ys])
    assert np.abs(got - want).max() <= 1e-13 * np.abs(want).max()


def test_column_matches_pointwise():
    col = eval_laguerre_column(0.0, 2, 1.0)
    assert np.allclose(col, [1.0, 0.0, -0.5], atol=1e-15)
    assert np.allclose(eval_laguerre_column(0.0, 1, 0.0), [1.0, 1.0])
    assert np.allclose(eval_laguerre_column(2.0, 1, 1.0), [1.0, 2.0])
    col = eval_laguerre_column(0.7, 9, 2.5)
    for m in range(10):
        assert col[m] == eval_laguerre(0.7, m, 2.5)


def test_column_vectorizes_over_y():
    ys = np.array([0.5, 1.5, 4.0])
    cols = eval_laguerre_column(0.2, 5, ys)
    assert cols.shape == (6, 3)
    for j, y in enumerate(ys):
        assert np.allclose(cols[:, j], eval_laguerre_column(0.2, 5, y))


def test_parameter_validation():
    with pytest.raises(ValueError):
        eval_laguerre(-1.0, 2, 1.0)
    with pytest.raises(ValueError):
        eval_laguerre(0.0, -1, 1.0)
    with pytest.raises(ValueError):
        laguerre_norm(-1.5, 2)
    with pytest.raises(ValueError):
        gauss_rule(0.0, -2)


def test_norm_values():
    assert laguerre_norm(0.0, 5) == pytest.approx(1.0, rel=1e-14)
    assert laguerre_norm(1.0, 2) == pytest.approx(3.0, rel=1e-14)
    # lgamma oracle: Gamma(4.5)/Gamma(4)
    want = math.exp(math.lgamma(4.5) - math.lgamma(4.0))
    assert laguerre_norm(0.5, 3) == pytest.approx(want, rel=1e-14)
    assert laguerre_norm(0.5, 3) == pytest.approx(1.9386213994279078, rel=1e-13)


def test_norm_large_degree_no_overflow():
    v = laguerre_norm(2.5, 400)
    assert math.isfinite(v) and v > 0.0
    assert np.allclose(laguerre_norms(2.5, 5),
                       [laguerre_norm(2.5, m) for m in range(6)])


class TestGaussRule:
    def test_single_node_rule(self):
        rule = gauss_rule(0.0, 0)
        assert rule.nodes == pytest.approx([1.0], abs=1e-14)
        assert rule.weights == pytest.approx([1.0], abs=1e-14)

    def test_two_node_rule_closed_form(self):
        rule = gauss_rule(0.0, 1)
        assert rule.nodes == pytest.approx([2 - math.sqrt(2), 2 + math.sqrt(2)],
                                           rel=1e-14)
        assert rule.weights == pytest.approx(
            [(2 + math.sqrt(2)) / 4, (2 - math.sqrt(2)) / 4], rel=1e-13)

    def test_cubic_moment(self):
        rule = gauss_rule(0.0, 10)
        got = float(np.sum(rule.weights * rule.nodes ** 3))
        assert got == pytest.approx(6.0, rel=1e-13)

    @pytest.mark.parametrize("theta", [-0.5, 0.0, 1.0, 2.5])
    @pytest.mark.parametrize("M", [5, 20, 40])
    def test_moment_exactness(self, theta, M):
        rule = gauss_rule(theta, M)
        for k in range(0, 2 * M + 2, 3):
            exact = math.exp(math.lgamma(k + theta + 1.0))
            got = float(np.sum(rule.weights * rule.nodes ** k))
            assert abs(got - exact) <= 1e-10 * exact

    @pytest.mark.parametrize("theta", [-0.5, 0.0, 2.5, 10.0])
    def test_structure(self, theta):
        rule = gauss_rule(theta, 60)
        assert rule.nodes[0] > 0.0
        assert np.all(np.diff(rule.nodes) > 0.0)
        assert np.all(rule.weights > 0.0)
        assert float(np.sum(rule.weights)) == pytest.approx(
            math.gamma(theta + 1.0), rel=1e-12)

    def test_nodes_are_laguerre_zeros(self):
        theta, M = 0.5, 12
        rule = gauss_rule(theta, M)
        vals = recurrence_column(theta, M + 1, rule.nodes)[M + 1]
        # normalize by neighbor magnitude to make "zero" meaningful
        scale = np.abs(recurrence_column(theta, M, rule.nodes)[M])
        assert np.abs(vals / scale).max() <= 1e-11

    @pytest.mark.parametrize("theta", [-0.5, 0.0, 1.5])
    @pytest.mark.parametrize("M", [3, 9, 15])
    def test_explicit_weight_formula_cross_check(self, theta, M):
        rule = gauss_rule(theta, M)
        explicit = gauss_weights_explicit(theta, M)
        assert np.abs((explicit - rule.weights) / rule.weights).max() <= 1e-11

    def test_caching_returns_identical_object(self):
        assert gauss_rule(0.0, 10) is gauss_rule(0.0, 10)

    def test_rule_arrays_read_only(self):
        rule = gauss_rule(0.0, 10)
        with pytest.raises(ValueError):
            rule.nodes[0] = 0.0


class TestDerivativeIdentities:
    def test_constant_derivative_trivial(self):
        rep = laguerre_derivative_identities_check(0.0, 0, 1.3)
        assert rep.residual_fd <= 1e-9

    def test_report_small_residuals(self):
        rep = laguerre_derivative_identities_check(1.0, 5, 2.0)
        assert rep.residual_connection <= 1e-12
        assert rep.residual_three_term <= 1e-12
        assert rep.residual_fd <= 1e-9
        assert rep.max_residual == max(rep.residual_connection,
                                       rep.residual_three_term,
                                       rep.residual_fd)

    def test_three_term_identity_hand_value(self):
        # y dL_1 = 1*L_1 - (1+theta) L_0 at theta=0, y=3: -3 = (-2) - 1
        assert eval_laguerre(1.0, 0, 3.0) == 1.0
        rep = laguerre_derivative_identities_check(0.0, 1, 3.0)
        assert rep.residual_three_term <= 1e-13

    @pytest.mark.parametrize("theta", [-0.5, 0.0, 2.5])
    @pytest.mark.parametrize("y", [0.4, 2.0, 11.0])
    def test_analytic_identities_hold_to_roundoff(self, theta, y):
        rep = laguerre_derivative_identities_check(theta, 20, y)
        scale = np.abs(recurrence_column(theta, 20, y)).max()
        assert rep.residual_connection <= 1e-12 * max(1.0, scale)
        assert rep.residual_three_term <= 1e-11 * max(1.0, scale)


class TestGammaRatioBound:
    def test_equal_offsets_value(self):
        assert gamma_ratio_bound(10, 0.0, 0.0) == pytest.approx(
            math.exp(1.0 / 108.0), rel=1e-14)

    def test_equal_offsets_dominate_unity(self):
        for kappa in (2, 7, 31):
            for off in (-0.5, 0.0, 1.5):
                if kappa + off <= 1.0:
                    continue
                assert gamma_ratio_bound(kappa, off, off) >= 1.0

    def test_integer_ratio_dominated(self):
        # Gamma(22)/Gamma(20) = 21*20
        assert gamma_ratio_bound(20, 2.0, 0.0) >= 420.0

    def test_preconditions(self):
        with pytest.raises(ValueError):
            gamma_ratio_bound(1, 0.0, 0.0)     # kappa+xi = 1
        with pytest.raises(ValueError):
            gamma_ratio_bound(0, 2.0, 2.0)
        with pytest.raises(ValueError):
            gamma_ratio_bound(2.5, 0.0, 0.0)

    def test_dominates_on_factorial_ratio_family(self):
        # the family the projection estimates consume: xi = 2-mu, zeta = 2
        for kappa in range(1, 101):
            for mu in range(0, min(kappa, 12) + 1):
                bound = gamma_ratio_bound(kappa, 2.0 - mu, 2.0)
                ratio = math.exp(math.lgamma(kappa + 2.0 - mu)
                                 - math.lgamma(kappa + 2.0))
                assert ratio <= bound * (1 + 1e-12)

    def test_known_counterexample_outside_usage_family(self):
        # the exponential-constant estimate is not a universal bound; this
        # pins the known failure so the restricted validity stays documented
        ratio = math.exp(math.lgamma(10.0 - 5.0) - math.lgamma(10.0 - 2.5))
        assert ratio > gamma_ratio_bound(10, -5.0, -2.5)
