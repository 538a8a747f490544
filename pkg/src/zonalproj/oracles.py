"""Exact projection volumes of balls, ellipsoids and parallelotopes.

Also holds Grassmannian sampling and the direct check of the j-projection
identity vol_j(K|E^perp) = vol_{n-j}(L|E) over random subspaces E.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.special import gammaln

from .errors import ContractError, DomainError

MAX_AMBIENT = 12


def kappa(m: float) -> float:
    """Volume of the m-dimensional unit ball, pi^(m/2) / Gamma(m/2 + 1), for m > -2."""
    if m <= -2:
        raise DomainError(f"kappa needs m > -2, got {m}")
    return float(np.exp((m / 2) * np.log(np.pi) - gammaln(m / 2 + 1)))


def sphere_area(n: int) -> float:
    """Surface area of S^{n-1}, n * kappa_n."""
    return n * kappa(n)


def _as_rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


@dataclass(frozen=True, eq=False)
class Subspace:
    """An m-dimensional subspace of R^n spanned by the orthonormal columns of ``basis``."""

    basis: np.ndarray

    def __post_init__(self):
        b = np.array(self.basis, dtype=float)
        if b.ndim != 2 or b.shape[1] > b.shape[0] or b.shape[1] < 0:
            raise ContractError(f"basis must be an n x m array with m <= n, got shape {b.shape}")
        n, m = b.shape
        if np.max(np.abs(b.T @ b - np.eye(m)), initial=0.0) > 1e-12 * max(1, n):
            raise ContractError("basis columns are not orthonormal")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def ambient(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.T

    @classmethod
    def span(cls, vectors) -> Subspace:
        """Orthonormalize the columns of ``vectors``."""
        v = np.asarray(vectors, dtype=float)
        q, r = np.linalg.qr(v)
        if np.min(np.abs(np.diag(r)), initial=np.inf) < 1e-12:
            raise DomainError("vectors are linearly dependent")
        return cls(q)


def sample_grassmann(n: int, m: int, seed=None) -> Subspace:
    """Uniformly distributed m-subspace of R^n via QR of a Gaussian matrix."""
    if not (1 <= m <= n - 1):
        raise DomainError(f"need 1 <= m <= n-1, got n={n}, m={m}")
    rng = _as_rng(seed)
    while True:
        g = rng.standard_normal((n, m))
        q, r = np.linalg.qr(g)
        d = np.diag(r)
        if np.min(np.abs(d)) > 1e-12:
            return Subspace(q * np.sign(d))


def orth_complement(s: Subspace) -> Subspace:
    n, m = s.basis.shape
    q, _ = np.linalg.qr(s.basis, mode="complete")
    comp = q[:, m:]
    # Remove the residual component along s so the invariant holds to rounding.
    comp = comp - s.basis @ (s.basis.T @ comp)
    comp, _ = np.linalg.qr(comp)
    return Subspace(comp)


BALL = "ball"
ELLIPSOID = "ellipsoid"
PARALLELOTOPE = "parallelotope"
KINDS = (BALL, ELLIPSOID, PARALLELOTOPE)


@dataclass(frozen=True, eq=False)
class BodyOracle:
    """Origin-symmetric body with exactly computable projection volumes.

    ball: ``shape`` is the radius and ``ambient`` the dimension.
    ellipsoid / parallelotope: ``shape`` is a nonsingular n x n matrix A and the
    body is A applied to the unit ball or to the cube [-1/2, 1/2]^n.
    """

    kind: str
    shape: object
    ambient: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ContractError(f"unknown body kind {self.kind!r}")
        if self.kind == BALL:
            r = float(self.shape)
            if not r > 0:
                raise DomainError("ball radius must be positive")
            if self.ambient is None or self.ambient < 1:
                raise ContractError("ball needs an ambient dimension")
            object.__setattr__(self, "shape", r)
            return
        a = np.array(self.shape, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ContractError(f"{self.kind} needs a square matrix, got shape {a.shape}")
        if a.shape[0] > MAX_AMBIENT:
            raise DomainError(f"ambient dimension capped at {MAX_AMBIENT}")
        if abs(np.linalg.det(a)) <= 1e-14 * max(1.0, np.max(np.abs(a))) ** a.shape[0]:
            raise DomainError(f"{self.kind} matrix is singular")
        if self.ambient is not None and self.ambient != a.shape[0]:
            raise ContractError("ambient dimension does not match the matrix")
        a.setflags(write=False)
        object.__setattr__(self, "shape", a)
        object.__setattr__(self, "ambient", a.shape[0])

    @classmethod
    def ball(cls, n: int, radius: float = 1.0) -> BodyOracle:
        return cls(BALL, radius, n)

    @classmethod
    def cube(cls, n: int) -> BodyOracle:
        return cls(PARALLELOTOPE, np.eye(n))

    def matrix(self) -> np.ndarray:
        if self.kind == BALL:
            return self.shape * np.eye(self.ambient)
        return self.shape

    def volume(self) -> float:
        if self.kind == BALL:
            return kappa(self.ambient) * self.shape ** self.ambient
        det = abs(np.linalg.det(self.shape))
        return kappa(self.ambient) * det if self.kind == ELLIPSOID else det

    def linear_image(self, a) -> BodyOracle:
        a = np.asarray(a, dtype=float)
        if a.shape != (self.ambient, self.ambient):
            raise ContractError("matrix does not match the ambient dimension")
        kind = ELLIPSOID if self.kind == BALL else self.kind
        return BodyOracle(kind, a @ self.matrix())

    def scaled(self, c: float) -> BodyOracle:
        if self.kind == BALL:
            return BodyOracle(BALL, abs(c) * self.shape, self.ambient)
        return BodyOracle(self.kind, c * self.shape)


def proj_volume(body: BodyOracle, F: Subspace) -> float:
    """m-dimensional volume of the orthogonal projection of body onto F."""
    if F.ambient != body.ambient:
        raise ContractError(f"subspace lives in R^{F.ambient}, body in R^{body.ambient}")
    m = F.dim
    if m == 0:
        return 1.0
    if body.kind == BALL:
        return kappa(m) * body.shape ** m
    proj = F.basis.T @ body.shape  # m x n: images of the generators in F coordinates
    if body.kind == ELLIPSOID:
        return kappa(m) * float(np.sqrt(max(np.linalg.det(proj @ proj.T), 0.0)))
    total = 0.0
    for cols in combinations(range(body.ambient), m):
        total += abs(np.linalg.det(proj[:, cols]))
    return float(total)


@dataclass(frozen=True)
class PairReport:
    j: int
    samples: int
    seed: object
    tol: float
    relative: bool
    max_error: float
    worst_index: int
    worst_lhs: float
    worst_rhs: float

    @property
    def passed(self) -> bool:
        return bool(self.max_error <= self.tol)

    def to_text(self) -> str:
        mode = "relative" if self.relative else "absolute"
        return "\n".join([
            f"verify-pair j={self.j} samples={self.samples} seed={self.seed}",
            f"max {mode} error: {self.max_error:.3e} (tol {self.tol:.1e})",
            f"worst sample {self.worst_index}: vol_j(K|E^perp)={self.worst_lhs:.15g} "
            f"vol_(n-j)(L|E)={self.worst_rhs:.15g}",
            f"result: {'PASS' if self.passed else 'FAIL'}",
        ])


def verify_pair(K: BodyOracle, L: BodyOracle, j: int, samples: int = 1000, tol: float = 1e-9,
                seed=0, relative: bool = False) -> PairReport:
    """Compare vol_j(K|E^perp) with vol_{n-j}(L|E) over random E of dimension n - j."""
    n = K.ambient
    if L.ambient != n:
        raise ContractError("bodies live in different dimensions")
    if not (1 <= j <= n - 1):
        raise DomainError(f"need 1 <= j <= n-1, got j={j}")
    rng = _as_rng(seed)
    worst = (-1.0, -1, 0.0, 0.0)
    for i in range(samples):
        E = sample_grassmann(n, n - j, rng)
        lhs = proj_volume(K, orth_complement(E))
        rhs = proj_volume(L, E)
        err = abs(lhs - rhs)
        if relative:
            err /= max(abs(lhs), abs(rhs), 1e-300)
        if err > worst[0]:
            worst = (err, i, lhs, rhs)
    seed_repr = seed if not isinstance(seed, np.random.Generator) else "generator"
    return PairReport(j, samples, seed_repr, tol, relative, worst[0], worst[1], worst[2], worst[3])


def gl_transform_pair(A, K: BodyOracle, L: BodyOracle, j: int):
    """(A K, |det A|^(1/(n-j)) A^{-T} L) for a nonsingular A."""
    A = np.asarray(A, dtype=float)
    n = K.ambient
    if A.shape != (n, n):
        raise ContractError(f"A must be {n} x {n}")
    det = np.linalg.det(A)
    if abs(det) <= 1e-14 * max(1.0, np.max(np.abs(A))) ** n:
        raise DomainError("A is singular")
    inv_t = np.linalg.inv(A).T
    return K.linear_image(A), L.linear_image(abs(det) ** (1.0 / (n - j)) * inv_t)


def ball_partner(n: int, j: int, radius: float = 1.0) -> BodyOracle:
    """The ball L with vol_j(rB|E^perp) = vol_{n-j}(L|E)."""
    return BodyOracle.ball(n, (kappa(j) * radius ** j / kappa(n - j)) ** (1.0 / (n - j)))


def ellipsoid_partner(K: BodyOracle, j: int) -> BodyOracle:
    """Partner of AB: the dilate (kappa_j V(K) / (kappa_{n-j} kappa_n))^(1/(n-j)) A^{-T} B."""
    n = K.ambient
    A = K.matrix()
    c = (kappa(j) * K.volume() / (kappa(n - j) * kappa(n))) ** (1.0 / (n - j))
    return BodyOracle(ELLIPSOID, c * np.linalg.inv(A).T)


def parallelotope_partner(K: BodyOracle, j: int) -> BodyOracle:
    """Partner of AW: V(K)^(1/(n-j)) A^{-T} W."""
    if K.kind != PARALLELOTOPE:
        raise ContractError("parallelotope_partner needs a parallelotope")
    n = K.ambient
    return BodyOracle(PARALLELOTOPE, K.volume() ** (1.0 / (n - j)) * np.linalg.inv(K.shape).T)


def vertices(body: BodyOracle) -> np.ndarray:
    """All 2^n vertices of a parallelotope, one per row."""
    if body.kind != PARALLELOTOPE:
        raise ContractError("only parallelotopes have vertices")
    n = body.ambient
    signs = np.array(np.meshgrid(*[[-0.5, 0.5]] * n, indexing="ij")).reshape(n, -1).T
    return signs @ body.shape.T


def mc_projection_volume(body: BodyOracle, F: Subspace, samples: int = 200_000, seed=0):
    """Hit-or-miss estimate of vol(body|F) and its standard error.

    Parallelotopes are tested against the facets of the hull of their projected
    vertices. For an ellipsoid with generator G = F^T A, y lies in the projection
    iff the least-norm solution of G w = y has |w| <= 1. Neither route uses the
    closed projection formulas.
    """
    from scipy.spatial import ConvexHull

    rng = _as_rng(seed)
    m = F.dim
    if body.kind == PARALLELOTOPE:
        pts = vertices(body) @ F.basis
        if m == 1:
            return float(pts.max() - pts.min()), 0.0
        hull = ConvexHull(pts)
        a, b = hull.equations[:, :-1], -hull.equations[:, -1]
        lo, hi = pts.min(axis=0), pts.max(axis=0)

        def inside(y):
            return np.all(y @ a.T <= b, axis=1)
    else:
        gen = F.basis.T @ body.matrix()  # m x n
        hi = np.linalg.norm(gen, axis=1)
        lo = -hi
        if m == 1:
            return float(hi[0] - lo[0]), 0.0
        pinv = np.linalg.pinv(gen)

        def inside(y):
            return np.sum((y @ pinv.T) ** 2, axis=1) <= 1.0
    box = float(np.prod(hi - lo))
    hits = 0
    for start in range(0, samples, 10_000):
        y = lo + (hi - lo) * rng.random((min(10_000, samples - start), m))
        hits += int(np.count_nonzero(inside(y)))
    frac = hits / samples
    return box * frac, box * np.sqrt(frac * (1 - frac) / samples)
