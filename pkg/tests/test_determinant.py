"""Determinant routes: closed form, finite-t, regularized, Wronskian, zeta."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from regsing._numutil import NumericalError
from regsing.determinant import (
    DeterminantReport,
    KernelPresentError,
    RootInsideContourError,
    det_wronskian_scalar,
    det_zeta_auto,
    det_zeta_closed_form,
    det_zeta_finite_t,
    det_zeta_regularized,
    zeta_eval,
)
from regsing.eigenfunction import find_spectrum
from regsing.operators import Dirichlet, Robin, diagonal_spec, scalar_spec
from tests.conftest import robin_regular

SQRT_2PI = math.sqrt(2.0 * math.pi)


def cor_robin_formula(nu: float, alpha: float) -> float:
    return SQRT_2PI * (alpha + nu + 0.5) / (math.gamma(1.0 + nu) * 2.0**nu)


def cor_dirichlet_formula(nu: float) -> float:
    return SQRT_2PI / (math.gamma(1.0 + nu) * 2.0**nu)


class TestClosedForm:
    @pytest.mark.parametrize("nu", [0.0, 0.3, 0.5, 0.9])
    @pytest.mark.parametrize("alpha", [0.0, 1.0, -0.2])
    def test_robin_family(self, nu, alpha):
        got = det_zeta_closed_form(robin_regular(nu, alpha))
        assert got.method == "closed_form" and got.kernel_dim_proxy == 0
        assert got.value == pytest.approx(cor_robin_formula(nu, alpha), rel=1e-12)

    @pytest.mark.parametrize("nu", [0.0, 0.3, 0.5, 0.9])
    def test_dirichlet_family(self, nu):
        spec = scalar_spec(nu, Dirichlet(), tip="regular")
        got = det_zeta_closed_form(spec)
        assert got.value == pytest.approx(cor_dirichlet_formula(nu), rel=1e-12)

    def test_dirichlet_half_is_two(self):
        # the classical value for -d2/dx2 on (0,1) with Dirichlet ends
        spec = scalar_spec(0.5, Dirichlet(), tip="regular")
        assert det_zeta_closed_form(spec).value == pytest.approx(2.0, rel=1e-13)

    def test_kernel_redirects(self, kernel_fixture_third):
        with pytest.raises(KernelPresentError):
            det_zeta_closed_form(kernel_fixture_third)

    def test_log_singular_flagged(self):
        # singular-branch rows at nu=0: p(x,y)=1, j0=0 != q0=1; the
        # defect-subtracted number carries the sign of (-2 e^gamma)
        spec = scalar_spec(0.0, Robin(0.3), tip="singular")
        got = det_zeta_closed_form(spec)
        assert got.log_singular is True
        assert got.value > 0.0
        assert got.diagnostics["defect_subtracted_signed"] < 0.0


class TestRegularized:
    def test_third(self, kernel_fixture_third):
        got = det_zeta_regularized(kernel_fixture_third)
        assert got.method == "regularized" and got.kernel_dim_proxy == 1
        assert abs(got.value - 2.0 / 3.0) < 1e-9

    def test_two(self, kernel_fixture_two):
        assert abs(det_zeta_regularized(kernel_fixture_two).value - 2.0) < 1e-9

    def test_sqrt_pi_over_two(self, kernel_fixture_bessel):
        got = det_zeta_regularized(kernel_fixture_bessel)
        assert abs(got.value - math.sqrt(math.pi / 2.0)) < 1e-9

    def test_trivial_kernel_redirects(self):
        with pytest.raises(NumericalError):
            det_zeta_regularized(robin_regular(0.3, 0.0))


class TestFiniteT:
    def test_matches_closed_form_small_t(self):
        spec = robin_regular(0.0, 0.0)
        closed = det_zeta_closed_form(spec).value
        assert closed == pytest.approx(SQRT_2PI / 2.0, rel=1e-13)
        for t in (0.1, 0.3):
            got = det_zeta_finite_t(spec, t).value
            assert abs(got - closed) <= 1e-6 * closed
        v1 = det_zeta_finite_t(spec, 0.1).value
        v2 = det_zeta_finite_t(spec, 0.3).value
        assert abs(v1 - v2) <= 1e-6 * closed

    def test_t_independence_spread(self):
        spec = robin_regular(0.3, 1.0)
        closed = det_zeta_closed_form(spec).value
        values = [det_zeta_finite_t(spec, t).value for t in (0.05, 0.1, 0.2, 0.4)]
        assert (max(values) - min(values)) / closed <= 1e-6

    def test_small_t_converges_to_closed_form(self):
        spec = robin_regular(0.0, 0.0)
        closed = det_zeta_closed_form(spec).value
        near = abs(det_zeta_finite_t(spec, 0.05).value - closed)
        far = abs(det_zeta_finite_t(spec, 0.4).value - closed)
        assert near < far + 1e-8

    def test_root_inside_contour_detected(self):
        # first eigenvalue of the Dirichlet fixture sits at pi
        spec = scalar_spec(0.5, Dirichlet(), tip="regular")
        with pytest.raises(RootInsideContourError):
            det_zeta_finite_t(spec, 4.0)


class TestWronskian:
    def test_examples(self):
        assert det_wronskian_scalar(0.5, Robin(0.0)) == pytest.approx(2.0, rel=1e-14)
        assert det_wronskian_scalar(0.0, Robin(0.0)) == pytest.approx(SQRT_2PI / 2.0, rel=1e-14)
        assert det_wronskian_scalar(2.0, Dirichlet()) == pytest.approx(
            SQRT_2PI / (4.0 * math.gamma(3.0)), rel=1e-14
        )

    def test_kernel_guard(self):
        with pytest.raises(KernelPresentError):
            det_wronskian_scalar(0.5, Robin(-1.0))

    @settings(max_examples=40, deadline=None)
    @given(
        # below nu ~ 1e-4 the lambda = nu^2 - 1/4 representation floors the
        # recoverable order accuracy; stay above it
        nu=st.floats(min_value=1e-4, max_value=0.95),
        alpha=st.floats(min_value=-0.3, max_value=2.0),
    )
    def test_matches_closed_form_inside_core(self, nu, alpha):
        spec = robin_regular(nu, alpha)
        closed = det_zeta_closed_form(spec).value
        oracle = det_wronskian_scalar(nu, Robin(alpha))
        assert abs(closed - oracle) <= 1e-10 * oracle

    @pytest.mark.parametrize("nu", [1.5, 2.0])
    def test_extends_beyond_matrix_core(self, nu):
        # the formula stays valid where the 2q x 2q system does not apply
        assert det_wronskian_scalar(nu, Robin(0.3)) == pytest.approx(
            cor_robin_formula(nu, 0.3), rel=1e-13
        )
        assert det_wronskian_scalar(nu, Dirichlet()) == pytest.approx(
            cor_dirichlet_formula(nu), rel=1e-13
        )


class TestFactorization:
    def test_diagonal_determinant_factorizes(self):
        parts = [
            scalar_spec(0.0, Robin(0.5), tip="regular"),
            scalar_spec(0.6, Robin(0.5), tip="regular"),
        ]
        joint = diagonal_spec(parts)
        lhs = det_zeta_closed_form(joint).value
        rhs = det_zeta_closed_form(parts[0]).value * det_zeta_closed_form(parts[1]).value
        assert abs(lhs - rhs) <= 1e-8 * rhs

    def test_double_log_block(self):
        # q0 = 2: two lambda = -1/4 blocks, both with logarithmic companions
        parts = [
            scalar_spec(0.0, Robin(0.2), tip="regular"),
            scalar_spec(0.0, Robin(0.2), tip="regular"),
        ]
        joint = diagonal_spec(parts)
        assert joint.q0 == 2
        lhs = det_zeta_closed_form(joint).value
        rhs = det_zeta_closed_form(parts[0]).value ** 2
        assert abs(lhs - rhs) <= 1e-10 * rhs


class TestAuto:
    def test_auto_selects_regularized(self, kernel_fixture_third):
        got = det_zeta_auto(kernel_fixture_third)
        assert got.method == "regularized" and abs(got.value - 2.0 / 3.0) < 1e-9

    def test_auto_attaches_cross_checks(self):
        got = det_zeta_auto(robin_regular(0.3, 0.0))
        assert got.method == "closed_form"
        assert got.diagnostics["finite_t_value"] == pytest.approx(got.value, rel=1e-6)
        assert got.diagnostics["wronskian_value"] == pytest.approx(got.value, rel=1e-10)


class TestZeta:
    def test_dirichlet_half_zeta2_series_oracle(self, dirichlet_half):
        # eigenvalues (k pi)^2; oracle sum computed right here
        oracle = float(np.sum((np.arange(1, 4000) * math.pi) ** -4.0))
        sp = find_spectrum(dirichlet_half, 120.0)
        rep = zeta_eval(dirichlet_half, 2.0, spectrum=sp)
        assert abs(rep.direct - oracle) <= 1e-6 * oracle
        assert abs(rep.contour - oracle) <= 1e-4 * oracle

    def test_cross_estimators_s2(self, kernel_fixture_bessel):
        sp = find_spectrum(kernel_fixture_bessel, 120.0)
        rep = zeta_eval(kernel_fixture_bessel, 2.0, spectrum=sp)
        assert abs(rep.direct - rep.contour) <= 1e-4 * abs(rep.contour)

    def test_cross_estimators_s1_reduced(self, kernel_fixture_third):
        # the acceptance suite runs the full 2000-root version
        sp = find_spectrum(kernel_fixture_third, 400.0)
        rep = zeta_eval(kernel_fixture_third, 1.0, spectrum=sp)
        assert abs(rep.direct - rep.contour) <= 1e-3 * abs(rep.contour)

    def test_direct_requires_enough_roots(self, dirichlet_half):
        sp = find_spectrum(dirichlet_half, 40.0)
        with pytest.raises(NumericalError):
            zeta_eval(dirichlet_half, 0.8, spectrum=sp)

    def test_s_domain(self, dirichlet_half):
        with pytest.raises(ValueError):
            zeta_eval(dirichlet_half, 0.5)

    def test_noninteger_s_against_series(self, dirichlet_half):
        s = 1.25
        oracle = float(np.sum((np.arange(1, 200000) * math.pi) ** (-2.0 * s)))
        sp = find_spectrum(dirichlet_half, 120.0)
        rep = zeta_eval(dirichlet_half, s, spectrum=sp)
        assert abs(rep.direct - oracle) <= 2e-6 * oracle
        assert abs(rep.contour - oracle) <= 1e-4 * oracle


def test_report_is_frozen_dataclass():
    rep = DeterminantReport(1.0, "closed_form", 0, False, {})
    with pytest.raises(AttributeError):
        rep.value = 2.0
