"""Area-measure densities of convex bodies of revolution.

A density s on [-1, 1] of order j in R^n is certified with Firey's conditions
through the moment function G(t) = int_t^1 xi s(xi) (1-xi^2)^((n-3)/2) dxi.
Both G and the margin are reported after division by (1-t^2)^((n-1)/2), so they
have finite, nonzero limits at t = +-1 and the endpoints count as grid points.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import roots_jacobi

from .errors import ContractError, DomainError, ParityError, UnsupportedOrderError
from .legendre import legendre_table, make_basis
from .transforms import TransformCatalog, fourier_multiplier, radon_r12_dim4
from .zonal import EVEN, ZonalProfile, apply, expand, invert

GRID_INTERVALS = 512
STRICTNESS = 1e-9
CENTROID_TOL = 1e-12
BISECTION_TOL = 1e-7

MOMENT = "moment-positivity"
CENTROID = "centroid"
MARGIN = "moment-bound"
POSITIVITY = "positivity"


def firey_grid(intervals: int = GRID_INTERVALS) -> np.ndarray:
    """Chebyshev-Lobatto points cos(i pi / intervals), i = 0..intervals, from 1 down to -1."""
    g = np.cos(np.arange(intervals + 1) * np.pi / intervals)
    g[0], g[-1] = 1.0, -1.0
    if intervals % 2 == 0:
        g[intervals // 2] = 0.0
    return g


@dataclass(frozen=True, eq=False)
class AreaMeasureDensity:
    """Density of the order-j area measure of a body of revolution in R^n."""

    dimension: int
    order: int
    profile: ZonalProfile

    def __post_init__(self):
        n, j = self.dimension, self.order
        if self.profile.dimension != n:
            raise ContractError(f"profile dimension {self.profile.dimension} differs from n={n}")
        if not (1 <= j <= n - 1):
            raise DomainError(f"order must satisfy 1 <= j <= n-1, got j={j}, n={n}")


def _eval(profile, x):
    flat = np.asarray(x, dtype=float).ravel()
    tab = legendre_table(profile.dimension, profile.max_degree, flat)
    return (profile.coefficients @ tab).reshape(np.shape(x))


def _centroid_moment(profile):
    """G(-1) = int_{-1}^1 xi s(xi) (1-xi^2)^a dxi with unnormalized weight."""
    a = (profile.dimension - 3) / 2
    x, w = roots_jacobi(profile.max_degree // 2 + 8, a, a)
    return float(np.dot(w, x * _eval(profile, x)))


class _Moment:
    """G(t) / (1-t^2)^((n-1)/2) for a polynomial profile, vectorized in t."""

    def __init__(self, profile, g_minus1, drop_centroid):
        self.profile = profile
        self.a = (profile.dimension - 3) / 2
        self.even = profile.is_even()
        self.g_minus1 = 0.0 if drop_centroid else g_minus1
        nodes = profile.max_degree // 2 + 32
        self.right = roots_jacobi(nodes, self.a, 0.0)
        self.left = roots_jacobi(nodes, 0.0, self.a)

    def _upper(self, t):
        # t >= 0: integrate over [t, 1] with the (1-xi)^a factor in the rule.
        x, w = self.right
        a = self.a
        xi = t[:, None] + (1.0 - t[:, None]) * (1.0 + x) / 2.0
        vals = (1.0 + xi) ** a * xi * _eval(self.profile, xi)
        return 2.0 ** (-a - 1) * (vals @ w) / (1.0 + t) ** (a + 1)

    def _lower(self, t):
        # t < 0: G(t) = G(-1) - int_{-1}^t, the (1+xi)^a factor in the rule.
        x, w = self.left
        a = self.a
        eta = -1.0 + (1.0 + t[:, None]) * (1.0 + x) / 2.0
        vals = (1.0 - eta) ** a * eta * _eval(self.profile, eta)
        part = 2.0 ** (-a - 1) * (vals @ w) / (1.0 - t) ** (a + 1)
        if self.g_minus1 == 0.0:
            return -part
        with np.errstate(divide="ignore"):
            return self.g_minus1 / (1.0 - t * t) ** (a + 1) - part

    def __call__(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if self.even:
            return self._upper(np.abs(t))
        out = np.empty_like(t)
        up = t >= 0
        out[up] = self._upper(t[up])
        out[~up] = self._lower(t[~up])
        return out


@dataclass(frozen=True, eq=False)
class FireyReport:
    """Outcome of Firey's conditions on a grid, in normalized form.

    g_min_interior is the minimum of G(t)/(1-t^2)^((n-1)/2) and strict_margin
    the minimum of s(t) - (n-1-j) G(t)/(1-t^2)^((n-1)/2), both over the grid
    (endpoints as limits) after local refinement.
    """

    passed: bool
    g_min_interior: float
    g_at_minus1: float
    strict_margin: float
    grid: np.ndarray = field(repr=False)
    g_argmin: float = 0.0
    margin_argmin: float = 0.0
    binding: str = ""
    failures: tuple = ()
    strictness: float = STRICTNESS
    tol: float = CENTROID_TOL
    continuity: str = "automatic (bandlimited profile)"

    def to_text(self) -> str:
        lines = [
            f"firey: {'PASS' if self.passed else 'FAIL'}",
            f"  continuity at +-1: {self.continuity}",
            f"  min G/(1-t^2)^((n-1)/2): {self.g_min_interior:.6e} at t={self.g_argmin:.6f}",
            f"  G(-1): {self.g_at_minus1:.3e} (tol {self.tol:.0e})",
            f"  min margin: {self.strict_margin:.6e} at t={self.margin_argmin:.6f} (strictness {self.strictness:.0e})",
            f"  binding condition: {self.binding}",
        ]
        if self.failures:
            lines.append(f"  failed: {', '.join(self.failures)}")
        return "\n".join(lines)


def _refined_min(func, grid, values):
    """Grid minimum polished by a bounded scalar search; +inf entries are ignored."""
    bad = np.isnan(values) | (values == -np.inf)
    if np.any(bad):
        return -np.inf, float(grid[np.argmax(bad)])
    values = np.where(np.isfinite(values), values, np.inf)
    i = int(np.argmin(values))
    best_t, best_v = float(grid[i]), float(values[i])
    lo = grid[min(i + 1, len(grid) - 1)]
    hi = grid[max(i - 1, 0)]
    if hi > lo and np.isfinite(best_v):
        with np.errstate(all="ignore"):
            res = minimize_scalar(lambda s: float(func(np.array([s]))[0]), bounds=(lo, hi),
                                  method="bounded", options={"xatol": 1e-12})
        if res.success and res.fun < best_v:
            best_t, best_v = float(res.x), float(res.fun)
    return best_v, best_t


def firey_check(d: AreaMeasureDensity, tol: float = CENTROID_TOL, strictness: float = STRICTNESS,
                intervals: int = GRID_INTERVALS) -> FireyReport:
    """Firey's conditions for an order-j density, 1 <= j <= n-2."""
    n, j = d.dimension, d.order
    if j > n - 2:
        raise UnsupportedOrderError(f"Firey's conditions cover 1 <= j <= n-2; got j={j}, n={n}")
    s = d.profile
    g_minus1 = _centroid_moment(s)
    centroid_ok = abs(g_minus1) <= tol
    moment = _Moment(s, g_minus1, centroid_ok)
    grid = firey_grid(intervals)

    def margin(t):
        return _eval(s, t) - (n - 1 - j) * moment(t)

    with np.errstate(all="ignore"):
        g_vals = moment(grid)
        m_vals = margin(grid)
    g_min, g_at = _refined_min(moment, grid, g_vals)
    m_min, m_at = _refined_min(margin, grid, m_vals)

    failures = []
    if not g_min > strictness:
        failures.append(MOMENT)
    if not centroid_ok:
        failures.append(CENTROID)
    if not m_min > strictness:
        failures.append(MARGIN)
    if failures:
        binding = failures[0] if len(failures) == 1 else " and ".join(failures)
    else:
        binding = MOMENT if g_min < m_min else MARGIN
    return FireyReport(not failures, g_min, g_minus1, m_min, grid, g_at, m_at, binding,
                       tuple(failures), strictness, tol)


def moment_function(d: AreaMeasureDensity, t):
    """G(t) = int_t^1 xi s(xi) (1-xi^2)^((n-3)/2) dxi, evaluated by quadrature."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    g_minus1 = _centroid_moment(d.profile)
    moment = _Moment(d.profile, g_minus1, abs(g_minus1) <= CENTROID_TOL)
    a = (d.dimension - 3) / 2
    return moment(t) * (1.0 - t * t) ** (a + 1)


def k_lambda(n: int, j: int, lam: float) -> AreaMeasureDensity:
    """Density 1 + lam P_2^n of the body K_lambda."""
    if not (1 <= j <= n - 2):
        raise DomainError(f"need 1 <= j <= n-2, got n={n}, j={j}")
    profile = ZonalProfile(n, [1.0, 0.0, float(lam)], EVEN, f"K_lambda[{lam:g}]")
    return AreaMeasureDensity(n, j, profile)


def projection_partner(d: AreaMeasureDensity) -> AreaMeasureDensity:
    """Order-(n-j) density ((n-j)/((2 pi)^(n-j) j)) F_{-j} s of the partner body."""
    n, j = d.dimension, d.order
    if not d.profile.is_even():
        raise ParityError("projection_partner needs an even density")
    op = TransformCatalog(n, d.profile.max_degree).fourier(-j)
    scale = (n - j) / ((2 * np.pi) ** (n - j) * j)
    out = apply(op.scaled(scale, f"partner[{j}]"), d.profile)
    return AreaMeasureDensity(n, n - j, out)


@dataclass(frozen=True)
class DensityCertificate:
    """Whether a density is a legitimate area-measure density, and why not."""

    passed: bool
    method: str
    detail: str
    firey: FireyReport | None = None


def certify_density(d: AreaMeasureDensity, strictness: float = STRICTNESS) -> DensityCertificate:
    """Firey's conditions for order <= n-2; positivity and centroid for order n-1."""
    if d.order <= d.dimension - 2:
        rep = firey_check(d, strictness=strictness)
        return DensityCertificate(rep.passed, "firey", rep.binding, rep)
    vals = _eval(d.profile, firey_grid())
    g_minus1 = _centroid_moment(d.profile)
    lo = float(vals.min())
    failures = []
    if not lo > strictness:
        failures.append(POSITIVITY)
    if abs(g_minus1) > CENTROID_TOL:
        failures.append(CENTROID)
    detail = " and ".join(failures) if failures else f"min density {lo:.6e}"
    return DensityCertificate(not failures, "positivity+centroid", detail)


@dataclass(frozen=True)
class LambdaInterval:
    lower: float
    upper: float
    lower_binding: str
    upper_binding: str
    tol: float

    def contains(self, lam: float) -> bool:
        return self.lower < lam < self.upper


def _boundary(passes, start, direction, tol, max_doublings=60):
    """Bisect for the edge of {lam : passes(lam)} starting from a passing point."""
    inside = start
    step = 1.0
    for _ in range(max_doublings):
        probe = start + direction * step
        ok, why = passes(probe)
        if not ok:
            outside, reason = probe, why
            break
        inside = probe
        step *= 2.0
    else:
        return direction * np.inf, "none"
    while abs(outside - inside) > tol:
        mid = (inside + outside) / 2.0
        ok, why = passes(mid)
        if ok:
            inside = mid
        else:
            outside, reason = mid, why
    return (inside + outside) / 2.0, reason


def _interval(passes, tol):
    ok, why = passes(0.0)
    if not ok:
        raise DomainError(f"lambda = 0 does not pass ({why})")
    lo, lo_why = _boundary(passes, 0.0, -1.0, tol)
    hi, hi_why = _boundary(passes, 0.0, 1.0, tol)
    return LambdaInterval(lo, hi, lo_why, hi_why, tol)


def admissible_lambda_range(n: int, j: int, tol: float = BISECTION_TOL) -> LambdaInterval:
    """Open interval of lam for which 1 + lam P_2^n satisfies Firey's conditions."""

    def passes(lam):
        rep = firey_check(k_lambda(n, j, lam))
        return rep.passed, f"K_lambda: {rep.binding}"

    return _interval(passes, tol)


def jproj_membership_lambda(n: int, j: int, tol: float = BISECTION_TOL) -> LambdaInterval:
    """Open interval of lam for which K_lambda is a j-projection body.

    Requires K_lambda and its partner density to be certified.
    """

    def passes(lam):
        d = k_lambda(n, j, lam)
        rep = firey_check(d)
        if not rep.passed:
            return False, f"K_lambda: {rep.binding}"
        cert = certify_density(projection_partner(d))
        return cert.passed, f"partner ({cert.method}): {cert.detail}"

    return _interval(passes, tol)


def lambda_closed_forms(n: int, j: int):
    """Reference intervals (admissible, membership) for the K_lambda family."""
    return (-1.0, j * (n + 1) / (2 * n - j)), (-1.0, j / (n - j))


@dataclass(frozen=True, eq=False)
class IntersectionPartner:
    profile: ZonalProfile
    min_value: float

    @property
    def positive(self) -> bool:
        return bool(self.min_value > 0)


def intersection_partner(rho_j: ZonalProfile, n: int, j: int) -> IntersectionPartner:
    """Profile of rho(M)^(n-j) from rho(D)^j; positivity is reported."""
    if rho_j.dimension != n:
        raise ContractError(f"profile dimension {rho_j.dimension} differs from n={n}")
    if not (1 <= j <= n - 1):
        raise DomainError(f"need 1 <= j <= n-1, got j={j}")
    if not rho_j.is_even():
        raise ParityError("intersection_partner needs an even profile")
    op = TransformCatalog(n, rho_j.max_degree).fourier(-j)
    scale = (n - j) / ((2 * np.pi) ** (n - j) * j)
    out = apply(op.scaled(scale, f"intersection_partner[{j}]"), rho_j)
    return IntersectionPartner(out, float(_eval(out, firey_grid()).min()))


def _check_positive(profile, nodes):
    pts = np.concatenate([firey_grid(), nodes])
    vals = _eval(profile, pts)
    if not np.all(vals > 0):
        raise DomainError(f"profile is not positive (min {vals.min():.3e})")


def p_map(rho: ZonalProfile, j: int, K: int | None = None) -> AreaMeasureDensity:
    """Density rho^j of order j; exact for polynomial rho when K >= j deg(rho)."""
    n = rho.dimension
    if not (1 <= j <= n - 1):
        raise DomainError(f"need 1 <= j <= n-1, got j={j}")
    K = j * rho.max_degree if K is None else K
    basis = make_basis(n, K, max(64, 4 * K, K + j * rho.max_degree))
    _check_positive(rho, basis.nodes)
    vals = rho.samples(basis) ** j
    parity = EVEN if rho.parity == EVEN else None
    return AreaMeasureDensity(n, j, expand(basis, vals, parity, f"P_{j}({rho.name})"))


def i_map(d: AreaMeasureDensity, K: int | None = None) -> ZonalProfile:
    """Radial profile s^(1/j) of the body whose j-th power radial function is s."""
    s = d.profile
    K = s.max_degree if K is None else K
    basis = make_basis(d.dimension, K, max(64, 4 * K, K + s.max_degree))
    _check_positive(s, basis.nodes)
    vals = s.samples(basis) ** (1.0 / d.order)
    parity = EVEN if s.parity == EVEN else None
    return expand(basis, vals, parity, f"I_{d.order}({s.name})")


def counterexample_profile(epsilon: float) -> ZonalProfile:
    """s_eps(t) = 3/2 + eps - 6 t^2 + 8 t^4 in dimension 4, by expansion."""
    basis = make_basis(4, 4)
    return expand(basis, lambda t: 1.5 + epsilon - 6 * t ** 2 + 8 * t ** 4, EVEN, f"s_eps[{epsilon:g}]")


def counterexample_closed_form(xi, epsilon: float = 0.0):
    """(pi/2) R_{1,2} R^{-1} s_eps at |cos(E, e)| = xi, in closed form."""
    xi = np.asarray(xi, dtype=float)
    return 7.5 * np.pi * xi ** 2 * (xi ** 2 - 1) + 1.75 * np.pi + 0.5 * np.pi * epsilon


@dataclass(frozen=True, eq=False)
class CounterexampleCertificate:
    epsilon: float
    firey: FireyReport
    fourier_max_error: float
    self_partner_error: float
    xi: np.ndarray = field(repr=False)
    normalized: np.ndarray = field(repr=False)
    closed_form_max_error: float = 0.0
    min_value: float = 0.0
    argmin_xi: float = 0.0
    tol: float = 1e-12

    @property
    def fourier_ok(self) -> bool:
        return bool(self.fourier_max_error <= self.tol and self.self_partner_error <= self.tol)

    @property
    def negative(self) -> bool:
        return bool(self.min_value < -self.tol)

    @property
    def passed(self) -> bool:
        return bool(self.firey.passed and self.fourier_ok and self.negative)

    def to_text(self) -> str:
        return "\n".join([
            f"counterexample n=4 j=2 epsilon={self.epsilon:g}",
            f"(a) {self.firey.to_text()}",
            f"(b) F_-2 multipliers vs (2pi)^2(-1)^k: max rel err {self.fourier_max_error:.2e}; "
            f"self-partner err {self.self_partner_error:.2e}: {'PASS' if self.fourier_ok else 'FAIL'}",
            f"(c) min (pi/2) R12 R^-1 s = {self.min_value:.12f} at xi = {self.argmin_xi:.12f} "
            f"(closed form err {self.closed_form_max_error:.2e}): "
            f"{'negative, PASS' if self.negative else 'negativity lost, FAIL'}",
            f"certificate: {'PASS' if self.passed else 'FAIL'}",
        ])


def counterexample_n4(epsilon: float, xi_points: int = 50, tol: float = 1e-12) -> CounterexampleCertificate:
    """Certificate that K_eps is a 2-projection body whose dual radial function fails positivity."""
    if not np.isfinite(epsilon) or epsilon < 0:
        raise DomainError(f"epsilon must be >= 0, got {epsilon}")
    s = counterexample_profile(epsilon)
    d = AreaMeasureDensity(4, 2, s)
    firey = firey_check(d)

    f_err = max(abs(fourier_multiplier(4, -2, 2 * k) / ((2 * np.pi) ** 2 * (-1) ** k) - 1) for k in range(9))
    partner = projection_partner(d)
    sp_err = float(np.max(np.abs(partner.profile.coefficients - s.coefficients)))

    radon = TransformCatalog(4, s.max_degree).radon()
    f = apply(invert(radon), s)

    def normalized(x):
        return 0.5 * np.pi * radon_r12_dim4(f, x)

    xi = np.linspace(0.0, 1.0, xi_points)
    vals = normalized(xi)
    cf_err = float(np.max(np.abs(vals - counterexample_closed_form(xi, epsilon))))
    i = int(np.argmin(vals))
    lo, hi = xi[max(i - 1, 0)], xi[min(i + 1, len(xi) - 1)]
    res = minimize_scalar(lambda x: float(normalized(x)), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12})
    m_val, m_at = (float(res.fun), float(res.x)) if res.fun < vals[i] else (float(vals[i]), float(xi[i]))
    return CounterexampleCertificate(epsilon, firey, f_err, sp_err, xi, vals, cf_err, m_val, m_at, tol)
