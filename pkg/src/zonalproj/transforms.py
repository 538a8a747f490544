"""Multiplier operators for the classical zonal transforms on S^{n-1}.

Multipliers use the probability normalization a_k[g] = <g, P_k> / <1, 1> for
the weight (1-t^2)^((n-3)/2). Surface-measure multipliers are |S^{n-1}| times
these; that factor enters where kernels are compared across dimensions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln, roots_legendre

from .errors import ContractError, DomainError
from .legendre import kernel_multiplier, legendre_eval, legendre_table, make_basis
from .oracles import kappa, sphere_area
from .zonal import ALL_DEGREES, EVEN_ONLY, MultiplierOperator

MAX_DEGREE = 32


def _check_degree(k):
    if int(k) != k or k < 0:
        raise DomainError(f"degree must be a nonnegative integer, got {k}")
    if k > MAX_DEGREE:
        raise DomainError(f"degree {k} exceeds the supported maximum {MAX_DEGREE}")


def fourier_multiplier(n: int, p: float, k: int) -> float:
    """Multiplier of the spherical Fourier transform F_p on even degree k."""
    if n < 2:
        raise DomainError(f"dimension must be >= 2, got {n}")
    if not (-n < p < 0):
        raise DomainError(f"p must lie in (-n, 0), got p={p} for n={n}")
    _check_degree(k)
    if k % 2:
        raise ContractError(f"F_p acts on even degrees only, got k={k}")
    log_mag = (n / 2) * np.log(np.pi) + (n + p) * np.log(2.0) + gammaln((k + n + p) / 2) - gammaln((k - p) / 2)
    sign = -1.0 if (k // 2) % 2 else 1.0
    return float(sign * np.exp(log_mag))


def box_multiplier(n: int, k: int) -> float:
    if n < 2:
        raise DomainError(f"dimension must be >= 2, got {n}")
    _check_degree(k)
    return (1 - k) * (k + n - 1) / (n - 1)


def berg_multiplier(n: int, k: int) -> float:
    """Multipliers of the Berg function of S^{n-1}, the inverse of Box_n off degree 1."""
    if n < 2:
        raise DomainError(f"dimension must be >= 2, got {n}")
    _check_degree(k)
    if k == 1:
        return 0.0
    return (n - 1) / ((1 - k) * (k + n - 1))


@lru_cache(maxsize=None)
def _basis_for(n):
    return make_basis(n, MAX_DEGREE)


def cosine_multiplier(n: int, k: int) -> float:
    """a_k^n[|t|], computed by quadrature of the kernel |t|."""
    _check_degree(k)
    if k % 2:
        return 0.0
    return kernel_multiplier(_basis_for(n), np.abs, k, even=True)


def radon_multiplier(n: int, k: int) -> float:
    """Spherical Radon transform multiplier P_k^n(0); zero on odd degrees."""
    _check_degree(k)
    if k % 2:
        return 0.0
    return legendre_eval(n, k, 0.0)


# Berg functions as zonal kernels. The kernel g_m of S^{m-1} is normalized so
# that its multipliers in its own dimension are berg_multiplier(m, k). It is
# evaluated from the Poisson kernel Q(s,t) = (1-s^2)/(1-2st+s^2)^(m/2), whose
# Taylor coefficients in s are N(m,k) P_k^m(t):
#   g_m(t) = (m-1)/m [1 - t - int_0^1 (Q - 1 - m t s)/s^2 ds + int_0^1 s^(m-2) Q ds].

def _berg_poisson(m, t, one_minus_t, panels=48, order=16, depth=30.0):
    x, wx = roots_legendre(order)
    # Substitute s = 1 - c e^v with c = sqrt(2(1-t)), the width of the peak at s = 1.
    c = np.sqrt(2.0 * one_minus_t)[:, None]
    v_hi = np.log(1.0 / c)
    v_lo = np.minimum(v_hi - 1.0, -depth)
    width = (v_hi - v_lo) / panels
    left = v_lo + width * np.arange(panels)[None, :]
    v = (left[:, :, None] + width[:, :, None] * (x + 1.0) / 2.0).reshape(len(t), -1)
    wv = np.repeat((width / 2.0) * np.tile(wx, panels)[None, :], 1, axis=0)
    r = c * np.exp(v)
    jac = r * wv
    s = 1.0 - r
    tt = t[:, None]
    log_base = np.log(r * r + 2.0 * s * one_minus_t[:, None])
    q = r * (2.0 - r) * np.exp(-(m / 2.0) * log_base)
    e = np.expm1(-(m / 2.0) * log_base)
    near = (e - s * s * e - s * s - m * tt * s) / (s * s)
    far = s ** (m - 2) * q
    return (m - 1) / m * (1.0 - t - np.sum(near * jac, axis=1) + np.sum(far * jac, axis=1))


def berg_function(m: int, t, one_minus_t=None):
    """Berg function of S^{m-1} at t, m >= 2. Closed form for m = 2."""
    if m < 2:
        raise DomainError(f"Berg functions need m >= 2, got {m}")
    t = np.atleast_1d(np.asarray(t, dtype=float))
    omt = 1.0 - t if one_minus_t is None else np.atleast_1d(np.asarray(one_minus_t, dtype=float))
    if m == 2:
        return -t / 2.0 + (np.pi - np.arccos(t)) * np.sqrt(omt * (2.0 - omt))
    return _berg_poisson(m, t, omt)


@lru_cache(maxsize=None)
def _tanh_sinh(step=1.0 / 32, cutoff=1e-30):
    """Tanh-sinh rule on (-1, 1) with 1 - |x| >= cutoff, returning x, 1-x, 1+x, w."""
    u_max = np.arcsinh(np.log(2.0 / cutoff) / np.pi)
    h = step * np.arange(-int(u_max / step), int(u_max / step) + 1)
    u = np.pi / 2 * np.sinh(h)
    x = np.tanh(u)
    one_minus = 2.0 / (1.0 + np.exp(2.0 * u))
    one_plus = 2.0 / (1.0 + np.exp(-2.0 * u))
    w = step * np.pi / 2 * np.cosh(h) / np.cosh(u) ** 2
    return x, one_minus, one_plus, w


@lru_cache(maxsize=None)
def _berg_on_grid(m):
    x, one_minus, _, _ = _tanh_sinh()
    vals = berg_function(m, x, one_minus)
    vals.setflags(write=False)
    return vals


@lru_cache(maxsize=None)
def _berg_across(m, n, K):
    x, one_minus, one_plus, w = _tanh_sinh()
    wt = w * (one_minus * one_plus) ** ((n - 3) / 2)
    wt = wt / wt.sum()
    tab = legendre_table(n, K, x)
    out = tab @ (wt * _berg_on_grid(m))
    out.setflags(write=False)
    return out


def berg_multiplier_across(m: int, n: int, k: int) -> float:
    """a_k^n of the Berg function g_m of S^{m-1}, measured on S^{n-1}.

    For m = n this reproduces berg_multiplier(n, k) up to quadrature error.
    """
    if n < 3:
        raise DomainError(f"dimension must be >= 3, got {n}")
    _check_degree(k)
    return float(_berg_across(m, n, MAX_DEGREE)[k])


def q_coefficient(n: int, j: int) -> float:
    """Normalizing constant of the mean-section generating kernel, 2 <= j <= n."""
    if not (2 <= j <= n):
        raise DomainError(f"need 2 <= j <= n, got n={n}, j={j}")
    return ((j - 1) / (2 * np.pi * (n + 1 - j))
            * kappa(j - 1) * kappa(j - 2) * kappa(n - j) / (kappa(j - 3) * kappa(n - 2)))


def mean_section_kernel(n: int, j: int, K: int = 16) -> MultiplierOperator:
    """Multipliers q_{n,j} times the surface-measure multipliers of the Berg kernel of S^{j-1}.

    The Berg kernel is geometrically normalized (divided by |S^{j-1}|) and then
    measured against the surface measure of S^{n-1}. For j = n this reduces to
    q_{n,n} * berg_multiplier(n, k). Degree 1 is set to zero.
    """
    if not (2 <= j <= n):
        raise DomainError(f"mean-section kernel needs 2 <= j <= n, got n={n}, j={j}")
    _check_degree(K)
    q = q_coefficient(n, j)
    a = np.zeros(K + 1)
    for k in range(K + 1):
        if k == 1:
            continue
        if j == n:
            a[k] = q * berg_multiplier(n, k)
        else:
            a[k] = q * sphere_area(n) / sphere_area(j) * berg_multiplier_across(j, n, k)
    return MultiplierOperator(f"mean_section[n={n},j={j}]", n, a, ALL_DEGREES)


def factorization_constant(n: int, j: int) -> float:
    return ((2 * np.pi) ** (n - j) * j * (j + 1) * kappa(j + 1)
            / (4 * (n - j) * n * kappa(n)) / q_coefficient(n, j + 1))


@dataclass(frozen=True)
class FactorizationReport:
    n: int
    j: int
    degrees: tuple
    fourier: tuple
    composite: tuple
    rel_errors: tuple
    max_rel_error: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.max_rel_error <= self.tol)


def verify_fourier_factorization(n: int, j: int, K: int = 12, tol: float = 1e-8) -> FactorizationReport:
    """Compare F_{-j} with const * C_1 * Box_{j+1} on even degrees k <= K.

    Box_{j+1} is taken as the inverse of convolution on S^{n-1} with the
    geometrically normalized Berg kernel of S^j, in surface-measure units.
    """
    if not (1 <= j <= n - 1):
        raise DomainError(f"need 1 <= j <= n-1, got n={n}, j={j}")
    const = factorization_constant(n, j)
    degrees, lhs, rhs, errs = [], [], [], []
    for k in range(0, K + 1, 2):
        f = fourier_multiplier(n, -j, k)
        # |S^{n-1}| cancels between the cosine and the inverted Berg multipliers.
        c = const * cosine_multiplier(n, k) * sphere_area(j + 1) / berg_multiplier_across(j + 1, n, k)
        degrees.append(k)
        lhs.append(f)
        rhs.append(c)
        errs.append(abs(f - c) / abs(f))
    return FactorizationReport(n, j, tuple(degrees), tuple(lhs), tuple(rhs), tuple(errs), max(errs), tol)


def radon_r12_dim4(f, xi, nodes: int = 64):
    """(2/pi) int_0^1 f(xi t) (1-t^2)^(-1/2) dt by Chebyshev-Gauss quadrature.

    ``f`` is a callable or ZonalProfile defined on [0, 1]; ``xi`` may be an array.
    """
    xi_a = np.asarray(xi, dtype=float)
    if np.any(xi_a < 0) or np.any(xi_a > 1):
        raise DomainError("xi must lie in [0, 1]")
    i = np.arange(1, nodes + 1)
    t = np.abs(np.cos((2 * i - 1) * np.pi / (2 * nodes)))
    pts = xi_a[..., None] * t
    vals = np.asarray(f(pts.ravel()), dtype=float).reshape(pts.shape)
    out = vals.mean(axis=-1)
    return float(out) if out.ndim == 0 else out


def _even_op(name, n, K, func):
    _check_degree(K)
    a = np.array([func(k) if k % 2 == 0 else 0.0 for k in range(K + 1)])
    return MultiplierOperator(name, n, a, EVEN_ONLY)


@dataclass(frozen=True)
class TransformCatalog:
    """Operator constructors for a fixed dimension and degree cap."""

    dimension: int
    max_degree: int = 16

    def __post_init__(self):
        if self.dimension < 3:
            raise DomainError(f"dimension must be >= 3, got {self.dimension}")
        _check_degree(self.max_degree)

    def fourier(self, p: float) -> MultiplierOperator:
        n = self.dimension
        return _even_op(f"F[{p:g}]", n, self.max_degree, lambda k: fourier_multiplier(n, p, k))

    def cosine(self) -> MultiplierOperator:
        n = self.dimension
        return _even_op("cosine", n, self.max_degree, lambda k: cosine_multiplier(n, k))

    def radon(self) -> MultiplierOperator:
        n = self.dimension
        return _even_op("radon", n, self.max_degree, lambda k: radon_multiplier(n, k))

    def box(self) -> MultiplierOperator:
        n = self.dimension
        a = [box_multiplier(n, k) for k in range(self.max_degree + 1)]
        return MultiplierOperator("box", n, a, ALL_DEGREES)

    def berg(self) -> MultiplierOperator:
        n = self.dimension
        a = [berg_multiplier(n, k) for k in range(self.max_degree + 1)]
        return MultiplierOperator("berg", n, a, ALL_DEGREES)

    def mean_section(self, j: int) -> MultiplierOperator:
        return mean_section_kernel(self.dimension, j, self.max_degree)

    def projection_body_kernel(self) -> MultiplierOperator:
        """Convolution with |t|/2, the generating kernel of projection bodies."""
        return self.cosine().scaled(0.5, "projection_body_kernel")

    def by_name(self, name: str, p: float | None = None, j: int | None = None) -> MultiplierOperator:
        if name == "fourier":
            if p is None:
                raise ContractError("fourier transform needs p")
            return self.fourier(p)
        if name == "mean-section":
            if j is None:
                raise ContractError("mean-section kernel needs j")
            return self.mean_section(j)
        table = {"cosine": self.cosine, "radon": self.radon, "box": self.box,
                 "berg": self.berg, "projection-body": self.projection_body_kernel}
        if name not in table:
            raise ContractError(f"unknown transform {name!r}")
        return table[name]()


TRANSFORM_NAMES = ("fourier", "cosine", "radon", "box", "berg", "mean-section", "projection-body")


def operator_csv(op: MultiplierOperator) -> str:
    lines = ["degree,multiplier"]
    for k in op.degrees():
        lines.append(f"{k},{float(op.multipliers[k])!r}")
    return "\n".join(lines) + "\n"
