"""Legendre polynomials of dimension n and Gauss rules for their weight.

The weight on [-1, 1] is (1 - t^2)^((n-3)/2), the pushforward of the uniform
probability measure on S^{n-1} under u -> u.e. All quadrature weights are
normalized to sum to one, so integrals below are averages over the sphere.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np
from scipy.special import roots_jacobi

from .errors import DomainError, NumericError

# Slack allowed on |t| <= 1 before an argument counts as out of domain.
_T_SLACK = 1e-12


def _check_dim_degree(n, k):
    if int(n) != n or n < 3:
        raise DomainError(f"dimension must be an integer >= 3, got {n}")
    if int(k) != k or k < 0:
        raise DomainError(f"degree must be a nonnegative integer, got {k}")


def legendre_table(n: int, K: int, t) -> np.ndarray:
    """Values P_k^n(t) for k = 0..K, stacked along the first axis.

    Uses the recurrence (k+n-2) P_{k+1} = (2k+n-2) t P_k - k P_{k-1}.
    n = 2 is accepted here (Chebyshev polynomials) for internal use.
    """
    t = np.asarray(t, dtype=float)
    out = np.empty((K + 1,) + t.shape)
    out[0] = 1.0
    if K >= 1:
        out[1] = t
    for k in range(1, K):
        out[k + 1] = ((2 * k + n - 2) * t * out[k] - k * out[k - 1]) / (k + n - 2)
    return out


def legendre_eval(n: int, k: int, t):
    """P_k^n(t), normalized so that P_k^n(1) = 1. Accepts scalars or arrays."""
    _check_dim_degree(n, k)
    ta = np.asarray(t, dtype=float)
    if np.any(np.abs(ta) > 1 + _T_SLACK) or not np.all(np.isfinite(ta)):
        raise DomainError("legendre_eval requires |t| <= 1")
    vals = legendre_table(n, k, np.clip(ta, -1.0, 1.0))[k]
    return float(vals) if vals.ndim == 0 else vals


def _harmonic_dim(n, k):
    if k < 0:
        return 0
    second = comb(n + k - 3, k - 2) if k >= 2 else 0
    return comb(n + k - 1, k) - second


def harmonic_dim(n: int, k: int) -> int:
    """Dimension of the space of degree-k spherical harmonics on S^{n-1}."""
    _check_dim_degree(n, k)
    return _harmonic_dim(n, k)


@dataclass(frozen=True, eq=False)
class LegendreBasis:
    """Gauss rule for the dimension-n weight together with P_k^n at its nodes.

    ``half_nodes``/``half_weights`` form a Gauss rule on [0, 1] for the same
    weight, used for even kernels that are only piecewise smooth (such as |t|).
    Their weights sum to 1/2.
    """

    dimension: int
    max_degree: int
    nodes: np.ndarray
    weights: np.ndarray
    table: np.ndarray
    half_nodes: np.ndarray
    half_weights: np.ndarray

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    def harmonic_dims(self) -> np.ndarray:
        return np.array([_harmonic_dim(self.dimension, k) for k in range(self.max_degree + 1)], dtype=float)

    def integrate(self, values) -> float:
        """Average of sampled values against the normalized weight."""
        return float(np.dot(self.weights, values))


def _freeze(*arrays):
    for a in arrays:
        a.setflags(write=False)


def make_basis(n: int, K: int, node_count: int | None = None) -> LegendreBasis:
    """Build a LegendreBasis of degree K in dimension n.

    The default node count is max(64, 4K). At least K + 5 nodes are required so
    that polynomials up to degree 2K + 8 are integrated exactly.
    """
    _check_dim_degree(n, K)
    if node_count is None:
        node_count = max(64, 4 * K)
    if node_count < K + 5:
        raise DomainError(f"node_count={node_count} too small for degree {K}; need at least {K + 5}")
    a = (n - 3) / 2
    x, w = roots_jacobi(node_count, a, a)
    total = w.sum()
    # Half-range rule on [0, 1]: Jacobi weight (1-x)^a mapped from [-1, 1],
    # with the smooth factor (1+t)^a folded into the weights.
    xh, wh = roots_jacobi(node_count, a, 0.0)
    th = (1.0 + xh) / 2.0
    wh = wh * 2.0 ** (-a - 1.0) * (1.0 + th) ** a / total
    w = w / total

    diag = dict(n=n, K=K, node_count=node_count, weight_sum=float(total))
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(w)) and np.all(w > 0)):
        raise NumericError(f"Gauss-Jacobi rule produced invalid nodes or weights: {diag}")
    if np.any(np.abs(x) >= 1.0) or np.any(np.diff(x) <= 0):
        raise NumericError(f"Gauss-Jacobi nodes not strictly inside (-1, 1): {diag}")

    table = legendre_table(n, K, x)
    norm_K = float(np.dot(w, table[K] ** 2))
    expect = 1.0 / _harmonic_dim(n, K)
    if abs(norm_K - expect) > 1e-10 or abs(w.sum() - 1.0) > 1e-12:
        diag.update(norm_K=norm_K, expected=expect, weight_total=float(w.sum()))
        raise NumericError(f"quadrature failed its orthogonality self-check: {diag}")

    _freeze(x, w, table, th, wh)
    return LegendreBasis(n, K, x, w, table, th, wh)


def _call_profile(g, t):
    try:
        vals = np.asarray(g(t), dtype=float)
        if vals.shape != t.shape:
            vals = np.broadcast_to(vals, t.shape).astype(float)
    except (TypeError, ValueError):
        vals = np.array([float(g(float(s))) for s in t])
    return vals


def kernel_multiplier(basis: LegendreBasis, g, k: int, even: bool = False) -> float:
    """Funk-Hecke multiplier a_k^n[g] under the probability normalization.

    With ``even=True`` the kernel is assumed even and integrated on [0, 1]
    only, which keeps Gauss accuracy for kernels with a kink at t = 0.
    """
    if k < 0 or k > basis.max_degree:
        raise DomainError(f"degree {k} outside basis range 0..{basis.max_degree}")
    if even:
        if k % 2:
            return 0.0
        t = basis.half_nodes
        vals = _call_profile(g, t)
        if not np.all(np.isfinite(vals)):
            raise NumericError("kernel has non-finite values at quadrature nodes")
        pk = legendre_table(basis.dimension, k, t)[k]
        return float(2.0 * np.dot(basis.half_weights, vals * pk))
    vals = _call_profile(g, basis.nodes)
    if not np.all(np.isfinite(vals)):
        raise NumericError("kernel has non-finite values at quadrature nodes")
    return float(np.dot(basis.weights, vals * basis.table[k]))
