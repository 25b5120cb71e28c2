"""Shared oracles and fixture builders for the test suite."""

from __future__ import annotations

import math

import pytest

from regsing.operators import Dirichlet, Robin, diagonal_spec, scalar_spec


def j1_series(x: float) -> float:
    """Minimal ascending series for J_1, kept deliberately independent of
    the package implementation (plain float math, explicit factorials)."""
    total = 0.0
    for k in range(40):
        term = (-1.0) ** k * (x / 2.0) ** (2 * k + 1) / (math.factorial(k) * math.factorial(k + 1))
        total += term
    return total


def bisect_root(f, lo: float, hi: float, iters: int = 200) -> float:
    flo, fhi = f(lo), f(hi)
    assert flo * fhi < 0.0, "bisection oracle needs a sign change"
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if flo * fm <= 0.0:
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


@pytest.fixture(scope="session")
def j1_zeros_oracle():
    """First five positive zeros of J_1 located by bisection on the series."""
    brackets = [(3.0, 4.5), (6.5, 7.5), (9.7, 10.6), (13.0, 13.7), (16.2, 16.8)]
    return [bisect_root(j1_series, a, b) for a, b in brackets]


# canonical operator fixtures -------------------------------------------------

def robin_regular(nu: float, alpha: float):
    """Regular-branch tip rows with a Robin end (the injective family
    for alpha != -nu - 1/2)."""
    return scalar_spec(nu, Robin(alpha), tip="regular")


@pytest.fixture(scope="session")
def kernel_fixture_third():
    """nu = 1/2, regular branch, f'(1) = f(1): det over the nonzero spectrum is 2/3."""
    return scalar_spec(0.5, Robin(-1.0), tip="regular")


@pytest.fixture(scope="session")
def kernel_fixture_two():
    """nu = 1/2, singular branch, f'(1) = 0: determinant 2."""
    return scalar_spec(0.5, Robin(0.0), tip="singular")


@pytest.fixture(scope="session")
def kernel_fixture_bessel():
    """nu = 0, regular branch, f'(1) = f(1)/2: F = mu J_1(mu)."""
    return scalar_spec(0.0, Robin(-0.5), tip="regular")


@pytest.fixture(scope="session")
def dirichlet_half():
    """nu = 1/2 with Dirichlet end: F proportional to sin(mu)/mu, roots k pi."""
    return scalar_spec(0.5, Dirichlet(), tip="regular")


@pytest.fixture(scope="session")
def diagonal_pair():
    """q = 2 diagonal fixture mixing nu = 0 and nu = 0.6 blocks."""
    return diagonal_spec(
        [scalar_spec(0.0, Robin(0.5), tip="regular"), scalar_spec(0.6, Robin(0.5), tip="regular")]
    )
