import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zonalproj.errors import ContractError, ParityError, ParseError, SingularOperatorError
from zonalproj.legendre import make_basis
from zonalproj.transforms import TransformCatalog, fourier_multiplier
from zonalproj.zonal import (
    MultiplierOperator,
    ZonalProfile,
    apply,
    compose,
    dumps_operator,
    dumps_profile,
    expand,
    invert,
    loads_operator,
    loads_profile,
    synthesize,
)

coeffs = st.lists(st.floats(-5, 5, allow_nan=False), min_size=1, max_size=13)


def test_expand_examples():
    b = make_basis(5, 10)
    one = expand(b, lambda t: np.ones_like(t))
    assert one.coefficients[0] == pytest.approx(1.0)
    assert np.allclose(one.coefficients[1:], 0, atol=1e-13)
    assert one.parity == "even"
    p2 = expand(b, lambda t: (5 * t * t - 1) / 4)
    assert np.allclose(p2.coefficients, np.eye(11)[2], atol=1e-13)
    s = expand(make_basis(4, 8), lambda t: 1.5 - 6 * t ** 2 + 8 * t ** 4)
    want = np.zeros(9)
    want[0], want[4] = 1.0, 2.5
    assert np.allclose(s.coefficients, want, atol=1e-12)


def test_synthesize_examples():
    f = ZonalProfile(4, [1.0, 0.0, 0.0])
    assert synthesize(f, 0.3) == 1.0
    g = ZonalProfile(6, [0.0, 0.0, 1.0])
    assert synthesize(g, 1.0) == pytest.approx(1.0)


@settings(max_examples=100, deadline=None)
@given(c=coeffs, n=st.integers(3, 8))
def test_round_trip(c, n):
    f = ZonalProfile(n, c)
    b = make_basis(n, f.max_degree)
    g = expand(b, lambda t: synthesize(f, t), parity="general")
    assert np.allclose(g.coefficients, f.coefficients, atol=1e-10, rtol=0)


def test_truncation_consistency():
    b8, b12 = make_basis(4, 8), make_basis(4, 12)
    f = lambda t: np.exp(t) / (2 + t)
    assert np.allclose(expand(b8, f).coefficients, expand(b12, f).coefficients[:9], atol=1e-10)


def test_parity_enforced():
    with pytest.raises(ParityError):
        ZonalProfile(4, [1.0, 0.5, 0.2], "even")
    with pytest.raises(ParityError):
        expand(make_basis(4, 4), lambda t: t, parity="even")
    op = TransformCatalog(4, 4).radon()
    with pytest.raises(ParityError):
        apply(op, ZonalProfile(4, [1.0, 0.3]))


def test_apply_examples():
    f = ZonalProfile(5, [1.0, 0.4, -2.0, 0.7])
    ident = MultiplierOperator.identity(5, 3)
    assert np.array_equal(apply(ident, f).coefficients, f.coefficients)
    mean = MultiplierOperator("mean", 5, [1.0, 0, 0, 0])
    assert np.array_equal(apply(mean, f).coefficients, [1.0, 0, 0, 0])
    assert apply(mean, f).history == ("mean",)
    with pytest.raises(ContractError):
        apply(MultiplierOperator.identity(4, 3), f)
    with pytest.raises(ContractError):
        apply(MultiplierOperator.identity(5, 2), f)


@settings(max_examples=100, deadline=None)
@given(a=st.lists(st.floats(-3, 3, allow_nan=False), min_size=8, max_size=8),
       b=st.lists(st.floats(-3, 3, allow_nan=False), min_size=8, max_size=8),
       c=st.lists(st.floats(-3, 3, allow_nan=False), min_size=8, max_size=8))
def test_composition_homomorphism(a, b, c):
    A = MultiplierOperator("A", 6, a)
    B = MultiplierOperator("B", 6, b)
    f = ZonalProfile(6, c)
    assert np.array_equal(apply(compose(A, B), f).coefficients, apply(A, apply(B, f)).coefficients)


@settings(max_examples=50, deadline=None)
@given(c=st.lists(st.floats(-3, 3, allow_nan=False), min_size=5, max_size=5))
def test_even_closure(c):
    c = np.array(c)
    c[1::2] = 0
    f = ZonalProfile(5, c, "even")
    for op in (TransformCatalog(5, 4).box(), TransformCatalog(5, 4).fourier(-2)):
        assert apply(op, f).parity == "even"


def test_invert():
    ident = MultiplierOperator.identity(4, 6)
    assert np.array_equal(invert(ident).multipliers, ident.multipliers)
    n, p = 5, -2
    inv = invert(TransformCatalog(n, 10).fourier(p))
    want = [fourier_multiplier(n, -n - p, k) / (2 * np.pi) ** n for k in range(0, 11, 2)]
    assert np.allclose(inv.multipliers[::2], want, rtol=1e-12)
    with pytest.raises(SingularOperatorError) as exc:
        invert(TransformCatalog(4, 6).box())
    assert exc.value.degree == 1


def test_profile_serialization():
    f = ZonalProfile(5, [1.0, 0.0, -0.25, 0.0, 1e-3], "even", "sample")
    g = loads_profile(dumps_profile(f))
    assert g.name == "sample" and g.parity == "even" and g.dimension == 5
    assert np.array_equal(g.coefficients, f.coefficients)
    op = TransformCatalog(4, 6).radon()
    op2 = loads_operator(dumps_operator(op))
    assert np.array_equal(op2.multipliers, op.multipliers) and op2.parity_domain == op.parity_domain


@pytest.mark.parametrize("text,line", [
    ("4 2\n1 0 0\n", 1),
    ("4 2 even\n1 0\nx\n", 3),
    ("4 2 odd\n1 0 0\n", 1),
    ("# comment\n4 3 general\n1 2\n", 3),
    ("4 1 even\n1 0.5\n", 1),
])
def test_profile_parse_errors(text, line):
    with pytest.raises(ParseError) as exc:
        loads_profile(text, "f.txt")
    assert exc.value.line == line
