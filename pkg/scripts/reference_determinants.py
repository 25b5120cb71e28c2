#!/usr/bin/env python3
"""Print the reference determinant table for the canonical scalar fixtures.

Every row compares the closed form against the finite-t contour identity
and the Wronskian oracle; the kernel rows use the regularized route.
Run from the repository root after `pip install -e .`:

    python scripts/reference_determinants.py
"""

import math

from regsing.determinant import (
    det_wronskian_scalar,
    det_zeta_closed_form,
    det_zeta_finite_t,
    det_zeta_regularized,
)
from regsing.operators import Dirichlet, Robin, scalar_spec


def main() -> None:
    print("kernel-free scalar fixtures (regular tip branch)")
    print(f"{'nu':>5} {'end condition':>16} {'closed form':>18} {'finite-t':>18} {'Wronskian':>18}")
    for nu in (0.0, 0.3, 0.5, 0.9):
        for bc in (Robin(0.0), Robin(1.0), Robin(-0.2), Dirichlet()):
            spec = scalar_spec(nu, bc, tip="regular")
            closed = det_zeta_closed_form(spec).value
            ft = det_zeta_finite_t(spec, 0.1).value
            oracle = det_wronskian_scalar(nu, bc)
            label = "dirichlet" if isinstance(bc, Dirichlet) else f"robin a={bc.alpha:+.1f}"
            print(f"{nu:5.2f} {label:>16} {closed:18.12f} {ft:18.12f} {oracle:18.12f}")

    print("\nzero-mode fixtures (value over the nonzero spectrum)")
    cases = [
        ("nu=1/2, f'(1)=f(1)", scalar_spec(0.5, Robin(-1.0), tip="regular"), 2.0 / 3.0),
        ("nu=1/2, f'(1)=0   ", scalar_spec(0.5, Robin(0.0), tip="singular"), 2.0),
        ("nu=0,   f'(1)=f/2 ", scalar_spec(0.0, Robin(-0.5), tip="regular"), math.sqrt(math.pi / 2)),
    ]
    for label, spec, want in cases:
        got = det_zeta_regularized(spec)
        print(f"  {label}: {got.value:.12f}  (reference {want:.12f}, k0={got.kernel_dim_proxy})")


if __name__ == "__main__":
    main()
