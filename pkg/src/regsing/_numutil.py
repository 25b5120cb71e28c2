"""Shared numerics: complex quadrature, extrapolation, differencing."""

from __future__ import annotations

from collections.abc import Callable

from scipy.integrate import quad


class NumericalError(RuntimeError):
    """A numerical procedure failed to meet its contract."""


class QuadratureError(NumericalError):
    pass


def quad_complex(
    f: Callable[[float], complex],
    a: float,
    b: float,
    epsabs: float = 1e-12,
    epsrel: float = 1e-10,
    limit: int = 300,
    err_ok: float | None = None,
) -> tuple[complex, float]:
    """Adaptive quadrature of a complex-valued integrand on [a, b].

    ``err_ok`` is an absolute error budget: a quadpack convergence
    complaint is tolerated as long as the reported error estimate stays
    inside it (integrands with large internal cancellation trip the
    roundoff detector long before they lose the digits we need).
    """
    re, re_err, *re_info = quad(
        lambda t: f(t).real, a, b, epsabs=epsabs, epsrel=epsrel, limit=limit, full_output=1
    )
    im, im_err, *im_info = quad(
        lambda t: f(t).imag, a, b, epsabs=epsabs, epsrel=epsrel, limit=limit, full_output=1
    )
    total_err = float(re_err + im_err)
    for info in (re_info, im_info):
        if len(info) > 1:  # quadpack appended an error message
            if err_ok is not None and total_err <= err_ok:
                continue
            raise QuadratureError(f"adaptive quadrature did not converge: {info[-1]}")
    return complex(re, im), total_err


def neville_at_zero(hs: list[float], vs: list[float]) -> tuple[float, float]:
    """Polynomial extrapolation of (h_i, v_i) to h = 0.

    Returns the full-order value and the previous-order value so the
    caller can check convergence between the last two levels.
    """
    n = len(hs)
    tab = [list(vs)]
    for j in range(1, n):
        row = []
        for i in range(n - j):
            num = hs[i] * tab[j - 1][i + 1] - hs[i + j] * tab[j - 1][i]
            row.append(num / (hs[i] - hs[i + j]))
        tab.append(row)
    return tab[-1][0], tab[-2][0]
