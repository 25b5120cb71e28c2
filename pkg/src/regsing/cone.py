"""de Rham Laplacian with relative boundary conditions on a bounded cone.

The cone is (0, 1] x N with metric dx^2 + x^2 g_N over a closed
n-manifold N, m = n + 1.  The degree-k Laplacian splits off a finite
regular-singular block (present only for |k - m/2| < 2); its
determinant is assembled from the coclosed spectra of N.

Inputs are explicit finite lists: for each degree j the coclosed
eigenvalues of the cross-section Laplacian with multiplicities,
complete below lambda = 4.  Supplying any entry >= 4 certifies that the
scan went far enough; such entries sit outside every contribution
window and never enter a product.

Contribution windows (strict inequalities; nu always >= 0):

    A_k  = { nu = sqrt(lam + (k+1-m/2)^2) : 0 <= lam < 1 - (k+1-m/2)^2 }   from degree k
    A~_k = same with 0 < lam                                               from degree k
    B_k  = { nu = sqrt(lam + (k-m/2)^2)   : 0 < lam < 4 - (k-m/2)^2 }      from degree k-1

and the determinant in degree k is

    k in (m/2-2, m/2):   prod_{A_k} S(nu) * prod_{B_k} P5(nu, k)
    k in (m/2, m/2+2):   prod_{A~_{k-2}} S(nu) (nu + m/2 + 1 - k) * prod_{B_k} P5(nu, k) * P_k
    k = m/2 (m even):    prod_{B_k} P5(nu, k)

with S(nu) = sqrt(2 pi) / (2^nu Gamma(1+nu)), the paired factor
P5(nu, k) = 2 pi (nu - k + m/2) / (2^(2 nu) Gamma(1+nu)^2), and P_k the
harmonic (k-1)-form factor (pi/2)^(d/2), 2^d or (2/3)^d depending on
parity and degree, d = dim H^(k-1)(N).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

from ._numutil import NumericalError
from .determinant import scalar_closed_form_value
from .operators import Dirichlet, Robin
from .special import gamma_fn

_WINDOW_EDGE_TOL = 1e-12


class ConeSpecError(ValueError):
    pass


class IncompleteSpectrumError(NumericalError):
    """A consulted cross-section degree was not supplied up to lambda = 4."""


@dataclass(frozen=True)
class ConeSpec:
    """Cross-section spectral data of N; r is pinned to 1 for assembly."""

    m: int
    ccl_spectra: dict[int, tuple[tuple[float, int], ...]]
    harmonic_dims: dict[int, int]
    r: float = 1.0

    def __post_init__(self):
        if self.m < 2:
            raise ConeSpecError("need dim M = m >= 2")
        if self.r != 1.0:
            raise ConeSpecError(
                "determinant assembly is established for R = 1 only; rescale the cone"
            )
        n = self.m - 1
        spectra: dict[int, tuple[tuple[float, int], ...]] = {}
        for j, entries in self.ccl_spectra.items():
            j = int(j)
            if not (0 <= j <= n):
                raise ConeSpecError(f"cross-section degree {j} outside 0..{n}")
            norm = tuple((float(lam), int(mult)) for lam, mult in entries)
            for lam, mult in norm:
                if lam < 0.0 or mult < 1:
                    raise ConeSpecError(f"bad spectral entry ({lam}, {mult}) in degree {j}")
            if [e[0] for e in norm] != sorted(e[0] for e in norm):
                raise ConeSpecError(f"degree {j} spectrum must be sorted ascending")
            spectra[j] = norm
        dims = {int(j): int(d) for j, d in self.harmonic_dims.items()}
        for j, d in dims.items():
            if d < 0:
                raise ConeSpecError("harmonic dimensions must be >= 0")
            zero_mult = sum(mult for lam, mult in spectra.get(j, ()) if lam == 0.0)
            if zero_mult != d:
                raise ConeSpecError(
                    f"degree {j}: multiplicity of lambda=0 is {zero_mult}, "
                    f"but dim H^{j} = {d}"
                )
        object.__setattr__(self, "ccl_spectra", spectra)
        object.__setattr__(self, "harmonic_dims", dims)

    @property
    def n(self) -> int:
        return self.m - 1

    def degree_entries(self, j: int) -> tuple[tuple[float, int], ...]:
        if j < 0 or j > self.n:
            return ()
        return self.ccl_spectra.get(j, ())

    def harmonic_dim(self, j: int) -> int:
        if j < 0 or j > self.n:
            return 0
        return self.harmonic_dims.get(j, 0)


@dataclass(frozen=True)
class DegreeContribution:
    k: int
    window_active: bool
    a_set: tuple[tuple[float, int], ...]
    a_tilde_km2: tuple[tuple[float, int], ...]
    b_set: tuple[tuple[float, int], ...]
    p_factor: float
    warnings: tuple[str, ...] = ()


def _require_complete(cone: ConeSpec, j: int, bound: float, k: int) -> None:
    """A consulted degree must have been scanned past lambda = 4."""
    if bound <= 0.0 or j < 0 or j > cone.n:
        return
    entries = cone.degree_entries(j)
    top = max((lam for lam, _ in entries), default=-1.0)
    if top < 4.0:
        raise IncompleteSpectrumError(
            f"degree-{k} assembly consults Spec(degree {j}) up to lambda < 4, but the "
            f"largest supplied eigenvalue is {top}; pad with any entry >= 4 to certify "
            "completeness"
        )


def _filter_window(
    entries: tuple[tuple[float, int], ...],
    shift_sq: float,
    upper: float,
    include_zero: bool,
    notes: list[str],
) -> tuple[tuple[float, int], ...]:
    out = []
    for lam, mult in entries:
        if lam == 0.0 and not include_zero:
            continue
        if abs(lam - upper) <= _WINDOW_EDGE_TOL * max(1.0, upper):
            notes.append(
                f"eigenvalue {lam} sits on the window boundary {upper}; excluded "
                "(strict inequality; the boundary case is limit-point)"
            )
            continue
        if lam < upper:
            out.append((math.sqrt(lam + shift_sq), mult))
    return tuple(out)


def _p_base(cone: ConeSpec, k: int) -> float:
    """Per-harmonic-form factor of the degree-(k-1) cohomology block."""
    m, n = cone.m, cone.n
    if m % 2 == 0 and k == m // 2 + 1:
        return math.sqrt(math.pi / 2.0)
    if m % 2 == 1 and k == n // 2 + 1:
        return 2.0
    if m % 2 == 1 and k == n // 2 + 2:
        return 2.0 / 3.0
    return 1.0


def _p_factor(cone: ConeSpec, k: int) -> float:
    return _p_base(cone, k) ** cone.harmonic_dim(k - 1)


def contribution_sets(cone: ConeSpec, k: int) -> DegreeContribution:
    """The nu-multisets A_k, A~_{k-2}, B_k and the harmonic factor P_k.

    Degrees outside 0..m carry no forms and come back inactive, like any
    degree with |k - m/2| >= 2.
    """
    half = cone.m / 2.0
    active = abs(k - half) < 2.0 and 0 <= k <= cone.m
    if not active:
        return DegreeContribution(k, False, (), (), (), 1.0)
    notes: list[str] = []

    a_set: tuple[tuple[float, int], ...] = ()
    if half - 2.0 < k < half:
        shift = (k + 1.0 - half) ** 2
        bound = 1.0 - shift
        _require_complete(cone, k, bound, k)
        a_set = _filter_window(cone.degree_entries(k), shift, bound, True, notes)

    a_tilde: tuple[tuple[float, int], ...] = ()
    if half < k < half + 2.0:
        shift = (k - 1.0 - half) ** 2
        bound = 1.0 - shift
        _require_complete(cone, k - 2, bound, k)
        a_tilde = _filter_window(cone.degree_entries(k - 2), shift, bound, False, notes)

    shift_b = (k - half) ** 2
    bound_b = 4.0 - shift_b
    _require_complete(cone, k - 1, bound_b, k)
    b_set = _filter_window(cone.degree_entries(k - 1), shift_b, bound_b, False, notes)

    for msg in notes:
        warnings.warn(msg, stacklevel=2)
    return DegreeContribution(
        k=k,
        window_active=True,
        a_set=a_set,
        a_tilde_km2=a_tilde,
        b_set=b_set,
        p_factor=_p_factor(cone, k),
        warnings=tuple(notes),
    )


def _paired_factor(nu: float, k: int, m: int) -> float:
    return 2.0 * math.pi * (nu - k + m / 2.0) / (2.0 ** (2.0 * nu) * gamma_fn(1.0 + nu) ** 2)


def cone_determinant(cone: ConeSpec, k: int) -> float:
    """det_zeta of the regular-singular block in degree k (1 when absent)."""
    contrib = contribution_sets(cone, k)
    if not contrib.window_active:
        return 1.0
    m = cone.m
    half = m / 2.0
    value = 1.0
    if half - 2.0 < k < half:
        for nu, mult in contrib.a_set:
            value *= scalar_closed_form_value(nu, Dirichlet()) ** mult
    elif half < k < half + 2.0:
        for nu, mult in contrib.a_tilde_km2:
            value *= scalar_closed_form_value(nu, Robin(half + 1.0 - k)) ** mult
        value *= contrib.p_factor
    # k == half (m even) contributes through B_k only
    for nu, mult in contrib.b_set:
        value *= _paired_factor(nu, k, m) ** mult
    return value


@dataclass(frozen=True)
class ComponentFactor:
    """One itemized factor with its origin."""

    source: str  # harmonic-k | harmonic-km1 | coclosed | exact | paired
    nu: float | None
    multiplicity: int
    value: float


def component_report(cone: ConeSpec, k: int) -> list[ComponentFactor]:
    """Per-component factors; their product equals cone_determinant(k)."""
    contrib = contribution_sets(cone, k)
    if not contrib.window_active:
        return []
    m = cone.m
    half = m / 2.0
    out: list[ComponentFactor] = []
    if half - 2.0 < k < half:
        # A_k splits into the harmonic part (lambda = 0) and coclosed eigenvalues
        nu_h = abs(k + 1.0 - half)
        for nu, mult in contrib.a_set:
            harmonic = abs(nu - nu_h) <= 1e-12 and cone.harmonic_dim(k) == mult
            src = "harmonic-k" if harmonic else "coclosed"
            out.append(
                ComponentFactor(src, nu, mult, scalar_closed_form_value(nu, Dirichlet()))
            )
    elif half < k < half + 2.0:
        d = cone.harmonic_dim(k - 1)
        if d > 0:
            out.append(ComponentFactor("harmonic-km1", None, d, _p_base(cone, k)))
        for nu, mult in contrib.a_tilde_km2:
            out.append(
                ComponentFactor(
                    "exact", nu, mult, scalar_closed_form_value(nu, Robin(half + 1.0 - k))
                )
            )
    for nu, mult in contrib.b_set:
        out.append(ComponentFactor("paired", nu, mult, _paired_factor(nu, k, m)))
    return out


@dataclass(frozen=True)
class RelativeBoundaryData:
    """Conditions induced at x = R on the separated radial parts in degree k.

    The tangential degree-k part is always Dirichlet; the degree-(k-1)
    part is Robin with alpha = -(k-1-n/2)/R.  On the one-eigenvalue
    subcomplex the lower operator gets Dirichlet and the upper one the
    Robin condition f'(R) - ((k+1-n/2)/R) f(R) = 0.
    """

    degree_k: Dirichlet = field(default_factory=Dirichlet)
    degree_km1_alpha: float = 0.0
    subcomplex_lower: Dirichlet = field(default_factory=Dirichlet)
    subcomplex_upper_alpha: float = 0.0


def relative_bc_at_r(k: int, m: int, r: float) -> RelativeBoundaryData:
    if not (0 <= k <= m):
        raise ConeSpecError(f"degree {k} outside 0..{m}")
    if r <= 0.0:
        raise ConeSpecError("need R > 0")
    n = m - 1
    return RelativeBoundaryData(
        degree_km1_alpha=-(k - 1.0 - n / 2.0) / r,
        subcomplex_upper_alpha=-(k + 1.0 - n / 2.0) / r,
    )
