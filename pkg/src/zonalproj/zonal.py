"""Zonal profiles in the Legendre basis and diagonal multiplier operators."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError, DomainError, ParityError, ParseError, SingularOperatorError
from .legendre import LegendreBasis, _harmonic_dim, _call_profile, legendre_table

EVEN = "even"
GENERAL = "general"
EVEN_ONLY = "even-only"
ALL_DEGREES = "all-degrees"

# Odd coefficients below this (relative to the largest coefficient) count as zero.
PARITY_TOL = 1e-12


def _readonly(a):
    a = np.array(a, dtype=float)
    if a.ndim != 1 or a.size == 0:
        raise ContractError("coefficient sequence must be a non-empty 1-d array")
    a.setflags(write=False)
    return a


def _odd_is_zero(c, tol=PARITY_TOL):
    scale = max(1.0, float(np.max(np.abs(c))))
    return bool(np.all(np.abs(c[1::2]) <= tol * scale))


@dataclass(frozen=True, eq=False)
class ZonalProfile:
    """t -> sum_k c_k P_k^n(t), a zonal function on S^{n-1}.

    Coefficients are authoritative; ``samples`` evaluates them on a basis grid.
    ``history`` lists the operators applied so far, oldest first.
    """

    dimension: int
    coefficients: np.ndarray
    parity: str = GENERAL
    name: str = ""
    history: tuple = field(default=())

    def __post_init__(self):
        if int(self.dimension) != self.dimension or self.dimension < 3:
            raise DomainError(f"dimension must be an integer >= 3, got {self.dimension}")
        c = np.array(self.coefficients, dtype=float)
        if self.parity not in (EVEN, GENERAL):
            raise ContractError(f"parity must be 'even' or 'general', got {self.parity!r}")
        if self.parity == EVEN:
            if not _odd_is_zero(c):
                raise ParityError("even profile has nonzero odd-degree coefficients")
            c[1::2] = 0.0
        object.__setattr__(self, "coefficients", _readonly(c))

    @property
    def max_degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, t):
        return synthesize(self, t)

    def samples(self, basis: LegendreBasis) -> np.ndarray:
        K = min(self.max_degree, basis.max_degree)
        if self.max_degree > basis.max_degree:
            tab = legendre_table(self.dimension, self.max_degree, basis.nodes)
            return self.coefficients @ tab
        return self.coefficients[: K + 1] @ basis.table[: K + 1]

    def padded(self, K: int) -> np.ndarray:
        """Coefficients truncated or zero-padded to length K + 1."""
        out = np.zeros(K + 1)
        m = min(K, self.max_degree) + 1
        out[:m] = self.coefficients[:m]
        return out

    def scaled(self, factor: float, name: str | None = None) -> ZonalProfile:
        return ZonalProfile(self.dimension, factor * self.coefficients, self.parity,
                            self.name if name is None else name, self.history)

    def is_even(self) -> bool:
        return self.parity == EVEN or _odd_is_zero(self.coefficients)


@dataclass(frozen=True, eq=False)
class MultiplierOperator:
    """Diagonal operator c_k -> a_k c_k on degree-k Legendre coefficients.

    Even-only operators carry zeros at odd degrees; those entries are never used.
    A composite keeps its factors (outermost first) so that applying it performs
    the same floating-point products as applying the factors one by one.
    """

    name: str
    dimension: int
    multipliers: np.ndarray
    parity_domain: str = ALL_DEGREES
    factors: tuple = field(default=(), repr=False)

    def __post_init__(self):
        if self.parity_domain not in (EVEN_ONLY, ALL_DEGREES):
            raise ContractError(f"unknown parity domain {self.parity_domain!r}")
        a = np.array(self.multipliers, dtype=float)
        if self.parity_domain == EVEN_ONLY:
            a[1::2] = 0.0
        object.__setattr__(self, "multipliers", _readonly(a))

    @property
    def max_degree(self) -> int:
        return len(self.multipliers) - 1

    def degrees(self):
        step = 2 if self.parity_domain == EVEN_ONLY else 1
        return range(0, self.max_degree + 1, step)

    @classmethod
    def identity(cls, n: int, K: int) -> MultiplierOperator:
        return cls("identity", n, np.ones(K + 1))

    def scaled(self, factor: float, name: str | None = None) -> MultiplierOperator:
        return MultiplierOperator(name or f"{factor:g}*{self.name}", self.dimension,
                                  factor * self.multipliers, self.parity_domain)

    def __matmul__(self, other):
        if isinstance(other, MultiplierOperator):
            return compose(self, other)
        if isinstance(other, ZonalProfile):
            return apply(self, other)
        return NotImplemented


def _auto_parity(c, tol=1e-12):
    return EVEN if _odd_is_zero(c, tol) else GENERAL


def expand(basis: LegendreBasis, f, parity: str | None = None, name: str = "") -> ZonalProfile:
    """Legendre coefficients c_k = N(n,k) a_k[f] of a callable or of samples at the basis nodes.

    With ``parity=None`` the parity is detected from the coefficients.
    """
    if callable(f):
        vals = _call_profile(f, basis.nodes)
    else:
        vals = np.asarray(f, dtype=float)
        if vals.shape != basis.nodes.shape:
            raise ContractError(f"expected {basis.node_count} samples, got shape {vals.shape}")
    if not np.all(np.isfinite(vals)):
        raise DomainError("profile has non-finite values at quadrature nodes")
    c = basis.harmonic_dims() * (basis.table @ (basis.weights * vals))
    if parity is None:
        parity = _auto_parity(c)
    elif parity == EVEN:
        if not _odd_is_zero(c, 1e-10):
            raise ParityError("profile requested as even has odd-degree content")
        c[1::2] = 0.0
    return ZonalProfile(basis.dimension, c, parity, name)


def synthesize(profile: ZonalProfile, t):
    """Evaluate sum_k c_k P_k^n(t); scalar in, scalar out."""
    ta = np.asarray(t, dtype=float)
    if np.any(np.abs(ta) > 1 + 1e-12):
        raise DomainError("synthesize requires |t| <= 1")
    tab = legendre_table(profile.dimension, profile.max_degree, np.clip(ta, -1.0, 1.0))
    vals = np.tensordot(profile.coefficients, tab, axes=1)
    return float(vals) if vals.ndim == 0 else vals


def apply(op: MultiplierOperator, f: ZonalProfile) -> ZonalProfile:
    """Coefficientwise product; the operator must cover every degree of f."""
    if op.dimension != f.dimension:
        raise ContractError(f"dimension mismatch: operator n={op.dimension}, profile n={f.dimension}")
    if op.parity_domain == EVEN_ONLY and not f.is_even():
        raise ParityError(f"operator {op.name!r} acts on even profiles only")
    if op.max_degree < f.max_degree:
        raise ContractError(f"operator {op.name!r} has degree {op.max_degree} < profile degree {f.max_degree}")
    c = f.coefficients
    for a in reversed(op.factors or (op.multipliers,)):
        c = a[: f.max_degree + 1] * c
    parity = EVEN if (f.parity == EVEN or op.parity_domain == EVEN_ONLY) else GENERAL
    return ZonalProfile(f.dimension, c, parity, f.name, f.history + (op.name,))


def compose(a: MultiplierOperator, b: MultiplierOperator) -> MultiplierOperator:
    """Operator a after b: entrywise product over the shared degree range."""
    if a.dimension != b.dimension:
        raise ContractError(f"dimension mismatch: {a.dimension} vs {b.dimension}")
    K = min(a.max_degree, b.max_degree)
    domain = EVEN_ONLY if EVEN_ONLY in (a.parity_domain, b.parity_domain) else ALL_DEGREES
    factors = tuple(x[: K + 1] for x in (a.factors or (a.multipliers,)) + (b.factors or (b.multipliers,)))
    return MultiplierOperator(f"{a.name}*{b.name}", a.dimension,
                              a.multipliers[: K + 1] * b.multipliers[: K + 1], domain, factors)


def invert(op: MultiplierOperator, tol: float = 1e-14) -> MultiplierOperator:
    """Reciprocal multipliers on the operator's parity domain."""
    inv = np.zeros(op.max_degree + 1)
    for k in op.degrees():
        a = op.multipliers[k]
        if not np.isfinite(a) or abs(a) <= tol:
            raise SingularOperatorError(f"operator {op.name!r} is singular at degree {k} (a_k = {a:g})", degree=k)
        inv[k] = 1.0 / a
    return MultiplierOperator(f"inv({op.name})", op.dimension, inv, op.parity_domain)


# Text format: optional '# name: ...' comment, a header line 'n K parity',
# then K + 1 whitespace-separated numbers over any number of lines.

def _dump(name, n, values, tag):
    lines = []
    if name:
        lines.append(f"# name: {name}")
    lines.append(f"{n} {len(values) - 1} {tag}")
    lines.extend(repr(float(v)) for v in values)
    return "\n".join(lines) + "\n"


def _load(text, tags, source):
    name = ""
    header = None
    numbers = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("name:"):
                name = body[5:].strip()
            continue
        if header is None:
            parts = line.split()
            if len(parts) != 3:
                raise ParseError(f"header must be 'n K {'|'.join(tags)}', got {line!r}", lineno, source)
            try:
                n, K = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError(f"n and K must be integers, got {line!r}", lineno, source) from None
            if parts[2] not in tags:
                raise ParseError(f"parity must be one of {tags}, got {parts[2]!r}", lineno, source)
            if K < 0:
                raise ParseError("K must be nonnegative", lineno, source)
            header = (n, K, parts[2], lineno)
            continue
        for tok in line.split():
            try:
                numbers.append((float(tok), lineno))
            except ValueError:
                raise ParseError(f"not a number: {tok!r}", lineno, source) from None
    if header is None:
        raise ParseError("missing header line", None, source)
    n, K, tag, hline = header
    if len(numbers) != K + 1:
        last = numbers[-1][1] if numbers else hline
        raise ParseError(f"expected {K + 1} coefficients, found {len(numbers)}", last, source)
    return name, n, np.array([v for v, _ in numbers]), tag, hline


def dumps_profile(profile: ZonalProfile) -> str:
    return _dump(profile.name, profile.dimension, profile.coefficients, profile.parity)


def loads_profile(text: str, source: str | None = None) -> ZonalProfile:
    name, n, c, tag, hline = _load(text, (EVEN, GENERAL), source)
    try:
        return ZonalProfile(n, c, tag, name)
    except (DomainError, ContractError) as exc:
        raise ParseError(str(exc), hline, source) from None


def dumps_operator(op: MultiplierOperator) -> str:
    return _dump(op.name, op.dimension, op.multipliers, op.parity_domain)


def loads_operator(text: str, source: str | None = None) -> MultiplierOperator:
    name, n, a, tag, hline = _load(text, (EVEN_ONLY, ALL_DEGREES), source)
    return MultiplierOperator(name, n, a, tag)
