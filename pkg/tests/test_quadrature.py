import math

import numpy as np
import pytest

from qmoments.core import MomentsError
from qmoments.quadrature import (
    CONVERGENT,
    DIVERGENT_AT_INFINITY,
    DIVERGENT_AT_ORIGIN,
    Domain,
    Envelope,
    UNKNOWN,
    detect_divergence,
    integrate,
    sine_transform,
    sine_transform_batch,
)
from qmoments.rng import SplitMix64


def test_r5_exponential_tail():
    # int_0^inf r^5 e^{-2r} dr = 5!/2^6
    res = integrate(lambda r: r**5 * np.exp(-2.0 * r), Domain.semi_infinite(0.0))
    assert res.converged
    assert res.value == pytest.approx(1.875, rel=1e-12)


def test_gaussian_whole_line():
    res = integrate(lambda x: np.exp(-x * x), Domain.infinite())
    assert res.converged
    assert res.value == pytest.approx(math.sqrt(math.pi), rel=1e-12)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_gamma_oracle(k):
    for n in range(13):
        res = integrate(lambda r: r**n * np.exp(-k * r), Domain.semi_infinite(0.0))
        exact = math.factorial(n) / k ** (n + 1)
        assert res.converged
        assert res.value == pytest.approx(exact, rel=1e-10)


def test_linearity_random():
    rng = SplitMix64(31)
    for _ in range(25):
        a = rng.uniform_in(-3.0, 3.0)
        b = rng.uniform_in(-3.0, 3.0)
        n = rng.integer(0, 4)
        m = rng.integer(0, 4)
        k1 = rng.uniform_in(0.5, 3.0)
        k2 = rng.uniform_in(0.5, 3.0)
        f = lambda r: r**n * np.exp(-k1 * r)
        g = lambda r: r**m * np.exp(-k2 * r)
        d = Domain.semi_infinite(0.0)
        lin = integrate(lambda r: a * f(r) + b * g(r), d)
        sep_f = integrate(f, d)
        sep_g = integrate(g, d)
        combined = a * sep_f.value + b * sep_g.value
        tol = 10.0 * (lin.err_estimate + abs(a) * sep_f.err_estimate + abs(b) * sep_g.err_estimate)
        assert abs(lin.value - combined) <= max(tol, 1e-13)


def test_substitution_invariance():
    # [0, inf) directly vs the manual map r = t/(1-t) on [0, 1)
    f = lambda r: r**3 * np.exp(-1.5 * r)
    direct = integrate(f, Domain.semi_infinite(0.0))

    def mapped(t):
        t = np.asarray(t, dtype=float)
        om = 1.0 - t
        return f(t / om) / om**2

    manual = integrate(mapped, Domain.finite(0.0, 1.0), breakpoints=[0.5])
    assert abs(direct.value - manual.value) <= 10 * (direct.err_estimate + manual.err_estimate) + 1e-14


def test_kink_with_breakpoint():
    c = 0.3
    res = integrate(lambda x: np.abs(x - c) ** 3, Domain.finite(-1.0, 1.0), breakpoints=[c])
    exact = ((1 + c) ** 4 + (1 - c) ** 4) / 4.0
    assert res.value == pytest.approx(exact, rel=1e-12)


def test_shifted_semi_infinite():
    res = integrate(lambda r: np.exp(-(r - 2.0)), Domain.semi_infinite(2.0))
    assert res.value == pytest.approx(1.0, rel=1e-11)


def test_budget_exhaustion_reports_not_converged():
    # near-log singularity with a tiny budget
    res = integrate(
        lambda x: np.abs(x) ** (-0.999), Domain.finite(1e-12, 1.0), max_evals=300,
        rel_tol=1e-12, abs_tol=1e-16,
    )
    assert not res.converged


def test_nan_integrand_fails():
    res = integrate(lambda x: np.where(x > 0.5, np.nan, 1.0), Domain.finite(0.0, 1.0))
    assert res.failed
    assert not res.converged
    with pytest.raises(MomentsError):
        res.require()


def test_detect_divergence_log_origin():
    assert detect_divergence(Envelope(-1.0, ("exp", 2.0))) == DIVERGENT_AT_ORIGIN


def test_detect_divergence_convergent():
    assert detect_divergence(Envelope(2.0, ("exp", 2.0))) == CONVERGENT


def test_detect_divergence_inverse_sixth():
    # r^2 density against r^-6: net power -4 at the origin
    assert detect_divergence(Envelope(2.0 - 6.0, ("exp", 2.0))) == DIVERGENT_AT_ORIGIN


def test_detect_divergence_tail():
    assert detect_divergence(Envelope(0.0, ("power", -0.5))) == DIVERGENT_AT_INFINITY
    assert detect_divergence(Envelope(0.0, ("power", -2.5))) == CONVERGENT


def test_detect_divergence_unknown():
    assert detect_divergence(Envelope(None, ("exp", 1.0))) == UNKNOWN
    assert detect_divergence(Envelope(1.0, None)) == UNKNOWN


def test_envelope_shift():
    env = Envelope(2.0, ("power", -7.0)).shifted(delta_origin=-6.0, delta_tail=2.0)
    assert env.origin_power == -4.0
    assert env.tail == ("power", -5.0)


# --- sine transform ---------------------------------------------------------


def _hydrogen_u(r):
    return 2.0 * np.asarray(r) * np.exp(-np.asarray(r))


def test_sine_transform_hydrogen_closed_form():
    for k in [0.3, 1.0, 4.0, 20.0]:
        w = sine_transform(_hydrogen_u, k, r_max=48.0)
        exact = math.sqrt(2 / math.pi) * 4.0 * k / (1 + k * k) ** 2
        assert w == pytest.approx(exact, rel=1e-9)


def test_sine_transform_normalization():
    # int w(k)^2 dk = 1 when int u^2 dr = 1
    ks_res = integrate(
        lambda k: sine_transform_batch(_hydrogen_u, k, 48.0)[0] ** 2,
        Domain.finite(0.0, 200.0),
        rel_tol=1e-9, abs_tol=1e-13,
    )
    assert ks_res.value == pytest.approx(1.0, abs=1e-8)


def test_sine_transform_zero_frequency():
    assert sine_transform(_hydrogen_u, 0.0, 48.0) == 0.0


def test_sine_transform_gaussian_reciprocal_width():
    # u = N r e^{-r^2/(2 s^2)} maps to w proportional to k e^{-k^2 s^2 / 2}
    s = 1.7
    norm = 1.0 / math.sqrt(0.25 * s**3 * math.sqrt(math.pi) * 2.0)  # int u^2 = 1

    def u(r):
        r = np.asarray(r)
        return norm * r * np.exp(-(r**2) / (2 * s * s))

    w1 = sine_transform(u, 0.8, r_max=20.0 * s)
    w2 = sine_transform(u, 1.6, r_max=20.0 * s)
    expected_ratio = (0.8 / 1.6) * math.exp((-0.8**2 + 1.6**2) * s * s / 2.0)
    assert w1 / w2 == pytest.approx(expected_ratio, rel=1e-9)


def test_sine_transform_batch_matches_scalar():
    ks = np.array([0.5, 2.0, 7.0])
    vals, err = sine_transform_batch(_hydrogen_u, ks, 48.0)
    for k, v in zip(ks, vals):
        assert v == pytest.approx(sine_transform(_hydrogen_u, float(k), 48.0), rel=1e-12)
    assert err < 1e-8


def test_finite_domain_validation():
    with pytest.raises(Exception):
        Domain.finite(2.0, 2.0)
