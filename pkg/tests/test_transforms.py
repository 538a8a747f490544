import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.special import gamma

from zonalproj.errors import ContractError, DomainError
from zonalproj.legendre import legendre_eval
from zonalproj.oracles import kappa
from zonalproj.transforms import (
    TransformCatalog,
    berg_function,
    berg_multiplier,
    berg_multiplier_across,
    box_multiplier,
    cosine_multiplier,
    fourier_multiplier,
    mean_section_kernel,
    operator_csv,
    q_coefficient,
    radon_multiplier,
    radon_r12_dim4,
    verify_fourier_factorization,
    _berg_poisson,
)
from zonalproj.zonal import ZonalProfile, apply

TWO_PI = 2 * np.pi


def fourier_direct(n, p, k):
    """Gamma-ratio multiplier evaluated in extended precision without logarithms."""
    mp.mp.dps = 40
    val = mp.pi ** (mp.mpf(n) / 2) * 2 ** mp.mpf(n + p) * (-1) ** (k // 2)
    return float(val * mp.gamma(mp.mpf(k + n + p) / 2) / mp.gamma(mp.mpf(k - p) / 2))


def test_fourier_dimension_four():
    for k in range(0, 17, 2):
        assert fourier_multiplier(4, -2, k) == pytest.approx(TWO_PI ** 2 * (-1) ** (k // 2), rel=1e-14)


@pytest.mark.parametrize("n,p", [(3, -1), (4, -1.5), (5, -3), (7, -0.5), (6, -5)])
def test_fourier_matches_extended_precision(n, p):
    for k in range(0, 33, 2):
        assert fourier_multiplier(n, p, k) == pytest.approx(fourier_direct(n, p, k), rel=1e-12)


@pytest.mark.parametrize("n", [3, 4, 5, 6, 8])
def test_fourier_inversion(n):
    for p in np.linspace(-n + 0.25, -0.25, 7):
        for k in range(0, 17, 2):
            prod = fourier_multiplier(n, p, k) * fourier_multiplier(n, -n - p, k)
            assert prod == pytest.approx(TWO_PI ** n, rel=1e-12)


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
def test_fourier_ball_constant(n):
    for j in range(1, n):
        lhs = j * fourier_multiplier(n, j - n, 0) / (TWO_PI ** j * (n - j))
        assert lhs == pytest.approx(kappa(n - j) / kappa(j), rel=1e-13)


def test_fourier_errors():
    with pytest.raises(DomainError):
        fourier_multiplier(4, 0.0, 0)
    with pytest.raises(DomainError):
        fourier_multiplier(4, -4.0, 0)
    with pytest.raises(ContractError):
        fourier_multiplier(4, -2, 3)
    with pytest.raises(DomainError):
        fourier_multiplier(4, -2, 34)


def test_box_and_berg():
    for n in range(2, 9):
        assert box_multiplier(n, 0) == 1 and berg_multiplier(n, 0) == 1
        assert box_multiplier(n, 1) == 0 and berg_multiplier(n, 1) == 0
        for k in range(2, 17):
            assert box_multiplier(n, k) * berg_multiplier(n, k) == pytest.approx(1.0, rel=1e-15)
    assert box_multiplier(4, 2) == pytest.approx(-5 / 3)


def test_cosine_values():
    assert cosine_multiplier(3, 0) == pytest.approx(0.5, abs=1e-14)
    assert cosine_multiplier(3, 2) == pytest.approx(1 / 8, abs=1e-14)
    assert all(cosine_multiplier(n, k) == 0.0 for n in (3, 4, 7) for k in (1, 3, 9))
    # n kappa_n (1/2) a_0 equals the half-perimeter of the unit disk.
    assert 3 * kappa(3) * 0.5 * cosine_multiplier(3, 0) == pytest.approx(np.pi, rel=1e-14)


@pytest.mark.parametrize("n", [3, 4, 5, 6, 9])
def test_cosine_degree_zero_closed_form(n):
    want = gamma(n / 2) / (np.sqrt(np.pi) * gamma((n + 1) / 2))
    assert cosine_multiplier(n, 0) == pytest.approx(want, rel=1e-13)


def test_radon():
    assert radon_multiplier(4, 0) == 1.0
    assert radon_multiplier(4, 4) == pytest.approx(0.2, abs=1e-15)
    for n in range(3, 9):
        assert radon_multiplier(n, 2) == pytest.approx(-1 / (n - 1), abs=1e-15)
        for k in range(0, 17, 2):
            assert radon_multiplier(n, k) == legendre_eval(n, k, 0.0)
        assert radon_multiplier(n, 5) == 0.0


def test_berg_circle_closed_form_matches_poisson_route():
    t = np.array([-0.999, -0.7, -0.2, 0.0, 0.3, 0.8, 0.99, 0.9999])
    assert np.allclose(berg_function(2, t), _berg_poisson(2, t, 1 - t), atol=1e-10)


@pytest.mark.parametrize("m", [3, 4, 5, 6, 7])
def test_berg_own_dimension_multipliers(m):
    for k in range(0, 17):
        assert berg_multiplier_across(m, m, k) == pytest.approx(berg_multiplier(m, k), abs=1e-11)


@pytest.mark.parametrize("m,n", [(2, 3), (2, 5), (3, 4), (3, 6), (4, 5), (4, 7), (5, 6)])
def test_berg_across_dimensions_gamma_ratio(m, n):
    # Frozen from the numerical route: a_k^n[g_m] is proportional to
    # Gamma((k-1)/2) Gamma((k+m-1)/2) / (Gamma((k+n+1)/2) Gamma((k+n-m+1)/2)).
    def ratio(k):
        return gamma((k - 1) / 2) * gamma((k + m - 1) / 2) / (gamma((k + n + 1) / 2) * gamma((k + n - m + 1) / 2))

    c = berg_multiplier_across(m, n, 0) / ratio(0)
    for k in range(2, 17):
        assert berg_multiplier_across(m, n, k) == pytest.approx(c * ratio(k), rel=1e-10)
    # Degree 1 vanishes only in the kernel's own dimension.
    if m >= 3:
        assert abs(berg_multiplier_across(m, m, 1)) < 1e-12


def test_q_coefficient():
    for n in range(3, 9):
        assert q_coefficient(n, 2) == pytest.approx(1 / (n - 1), rel=1e-14)
    with pytest.raises(DomainError):
        q_coefficient(4, 1)


@pytest.mark.parametrize("n,j", [(3, 2), (4, 2), (4, 3), (4, 4), (6, 3), (6, 6)])
def test_mean_section_kernel(n, j):
    op = mean_section_kernel(n, j, 8)
    assert op.multipliers[1] == 0.0
    if j == n:
        assert op.multipliers[0] == pytest.approx(q_coefficient(n, n))
        assert op.multipliers[4] == pytest.approx(q_coefficient(n, n) * berg_multiplier(n, 4))
    assert np.all(np.isfinite(op.multipliers))
    with pytest.raises(DomainError):
        mean_section_kernel(n, 1)


@pytest.mark.parametrize("n,j", [(4, 2), (5, 2), (3, 1)])
def test_factorization_examples(n, j):
    rep = verify_fourier_factorization(n, j, 8)
    assert rep.degrees == (0, 2, 4, 6, 8)
    assert rep.max_rel_error <= 1e-8 and rep.passed


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
def test_factorization_all_orders(n):
    for j in range(1, n):
        assert verify_fourier_factorization(n, j, 16).max_rel_error <= 1e-8


def test_radon_r12_dim4():
    assert radon_r12_dim4(lambda x: np.ones_like(x), 0.37) == pytest.approx(1.0, abs=1e-15)
    f = ZonalProfile(4, [1.0, 0, 0, 0, 12.5], "even")
    xi = np.linspace(0, 1, 50)
    want = 7.5 * np.pi * xi ** 2 * (xi ** 2 - 1) + 1.75 * np.pi
    assert np.allclose(0.5 * np.pi * radon_r12_dim4(f, xi), want, atol=1e-12)
    assert radon_r12_dim4(f, 2 ** -0.5) == pytest.approx(-0.25, abs=1e-13)


def test_radon_r12_dim4_against_adaptive_quadrature():
    f = lambda x: np.cos(3 * x) + x ** 2
    for xi in (0.2, 0.6, 1.0):
        ref = 2 / np.pi * quad(lambda t: f(xi * t) / np.sqrt(1 - t * t), 0, 1)[0]
        assert radon_r12_dim4(f, xi, nodes=256) == pytest.approx(ref, abs=1e-5)


even_coeffs = st.lists(st.floats(-2, 2, allow_nan=False), min_size=9, max_size=9).map(
    lambda c: [x if i % 2 == 0 else 0.0 for i, x in enumerate(c)])


@settings(max_examples=60, deadline=None)
@given(c=even_coeffs, n=st.integers(3, 7), data=st.data())
def test_fourier_involution_on_profiles(c, n, data):
    p = -data.draw(st.integers(1, n - 1))
    cat = TransformCatalog(n, 8)
    f = ZonalProfile(n, c, "even")
    g = apply(cat.fourier(-n - p), apply(cat.fourier(p), f))
    assert np.allclose(g.coefficients, TWO_PI ** n * f.coefficients, rtol=1e-8, atol=1e-8 * TWO_PI ** n)


@settings(max_examples=60, deadline=None)
@given(c=st.lists(st.floats(-2, 2, allow_nan=False), min_size=9, max_size=9), n=st.integers(3, 8))
def test_berg_inverts_box(c, n):
    cat = TransformCatalog(n, 8)
    f = ZonalProfile(n, c)
    g = apply(cat.berg(), apply(cat.box(), f))
    want = np.array(c)
    want[1] = 0.0
    assert np.allclose(g.coefficients, want, atol=1e-12)


def test_catalog_and_csv():
    cat = TransformCatalog(4, 6)
    pb = cat.projection_body_kernel()
    assert pb.multipliers[0] == pytest.approx(0.5 * cosine_multiplier(4, 0))
    assert cat.by_name("fourier", p=-2).multipliers[2] == pytest.approx(-TWO_PI ** 2)
    with pytest.raises(ContractError):
        cat.by_name("fourier")
    with pytest.raises(ContractError):
        cat.by_name("nope")
    csv = operator_csv(cat.radon()).splitlines()
    assert csv[0] == "degree,multiplier" and csv[1] == "0,1.0" and csv[3].startswith("4,0.2")
