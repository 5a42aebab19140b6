import cmath
import math
import random

import mpmath as mp
import pytest
from scipy.integrate import quad

from agflab.complexfn import (
    DOUBLE,
    ConvergenceError,
    PoleError,
    PrecisionConfig,
    extended,
    format_cnum,
    gamma,
    hyp1f1,
    log_gamma,
    lower_incomplete_gamma,
    principal_log,
    principal_pow,
)

SQRT_PI = math.sqrt(math.pi)


def test_precision_config_validation():
    with pytest.raises(ValueError):
        PrecisionConfig(tolerance_rel=1e-17)  # below double machine epsilon
    with pytest.raises(ValueError):
        PrecisionConfig(working_digits=0)
    with pytest.raises(ValueError):
        extended(10)
    cfg = extended(30)
    assert cfg.tolerance_rel >= cfg.machine_eps


def test_principal_log_values():
    assert principal_log(1) == 0
    assert abs(principal_log(-1) - math.pi * 1j) < 1e-15
    assert abs(principal_log(math.e) - 1) < 1e-15
    # branch convention: Im in (-pi, pi], including on the cut
    assert principal_log(complex(-2, -0.0)).imag > 0
    with pytest.raises(ValueError):
        principal_log(0)


def test_principal_pow_values():
    assert abs(principal_pow(-1, 2) - 1) < 1e-14
    assert abs(principal_pow(-1, 0.5) - 1j) < 1e-14
    expected = cmath.exp(0.3j * math.pi)
    assert abs(principal_pow(-1, complex(0.3, 0)) - expected) < 1e-14
    assert principal_pow(0, 3) == 0
    with pytest.raises(ValueError):
        principal_pow(0, 0.5)
    with pytest.raises(ValueError):
        principal_pow(0, 0)


def test_gamma_anchor_values():
    assert abs(gamma(5) - 24) < 1e-12
    assert abs(gamma(0.5) - SQRT_PI) < 1e-13
    assert abs(gamma(1.5) - SQRT_PI / 2) < 1e-13


def test_gamma_poles():
    for z in (0, -1, -2, -7):
        with pytest.raises(PoleError):
            gamma(z)
        with pytest.raises(PoleError):
            log_gamma(z)


def test_gamma_accuracy_region():
    # independent reference: mpmath at high precision
    rng = random.Random(20260808)
    bound = 10 * DOUBLE.tolerance_rel
    for _ in range(120):
        z = complex(rng.uniform(-20, 20), rng.uniform(-20, 20))
        if abs(z.imag) < 0.2 and z.real < 0.5:
            continue  # stay clear of the pole row
        ref = complex(mp.gamma(z))
        assert abs(gamma(z) - ref) <= bound * abs(ref)


def test_gamma_functional_equation():
    rng = random.Random(7)
    for _ in range(100):
        z = complex(rng.uniform(-10, 10), rng.uniform(-10, 10))
        if abs(z.imag) < 0.2 and z.real < 1.5:
            continue
        lhs = gamma(z + 1)
        assert abs(lhs - z * gamma(z)) <= DOUBLE.tolerance_rel * abs(lhs)


def test_gamma_reflection():
    rng = random.Random(12)
    for _ in range(60):
        z = complex(rng.uniform(-6, 6), rng.uniform(0.3, 8))
        val = gamma(z) * gamma(1 - z) * cmath.sin(math.pi * z) / math.pi
        assert abs(val - 1) <= 20 * DOUBLE.tolerance_rel


def test_log_gamma_values():
    assert abs(log_gamma(1)) < 1e-13
    assert abs(log_gamma(2)) < 1e-13
    assert abs(log_gamma(11) - math.log(math.factorial(10))) < 1e-12


def test_log_gamma_exp_consistency():
    rng = random.Random(99)
    for _ in range(80):
        z = complex(rng.uniform(-10, 10), rng.uniform(-10, 10))
        if abs(z.imag) < 0.2 and z.real < 0.5:
            continue
        g = gamma(z)
        assert abs(cmath.exp(log_gamma(z)) - g) <= 50 * DOUBLE.tolerance_rel * abs(g)


def test_extended_mode_gamma():
    cfg = extended(30)
    with mp.workdps(45):
        got = gamma(mp.mpf("0.5"), cfg)
        assert abs(got - mp.sqrt(mp.pi)) < mp.mpf("1e-29")
        z = mp.mpc("2.3", "-1.7")
        ref = mp.gamma(z)
        assert abs(gamma(z, cfg) - ref) < mp.mpf("1e-29") * abs(ref)
        # reflection side of the extended path
        z = mp.mpc("-3.3", "0.4")
        ref = mp.gamma(z)
        assert abs(gamma(z, cfg) - ref) < mp.mpf("1e-28") * abs(ref)
        assert abs(mp.exp(log_gamma(z, cfg)) - ref) < mp.mpf("1e-28") * abs(ref)


def test_lower_incomplete_gamma_anchors():
    assert abs(lower_incomplete_gamma(2, -1) - 1) < 1e-12
    assert abs(lower_incomplete_gamma(1, 1) - (1 - 1 / math.e)) < 1e-14
    assert lower_incomplete_gamma(3, 0) == 0


def test_lower_incomplete_gamma_poles():
    for a in (0, -1, -5):
        with pytest.raises(PoleError):
            lower_incomplete_gamma(a, -1)


def test_lower_incomplete_gamma_vs_quadrature():
    # series route against adaptive quadrature of the defining integral
    rng = random.Random(3)
    for _ in range(25):
        a = rng.uniform(1, 5)
        x = rng.uniform(0.05, 3)
        ref, _ = quad(lambda t: t ** (a - 1) * math.exp(-t), 0, x,
                      epsabs=1e-13, epsrel=1e-13)
        got = lower_incomplete_gamma(a, x)
        assert abs(got - ref) < 1e-10
        assert abs(got.imag) < 1e-12


def test_hyp1f1_values():
    assert abs(hyp1f1(2, 2, -1) - math.exp(-1)) < 1e-14
    assert hyp1f1(2, 2, 0) == 1
    # frozen from f(1) = 1 - 2/e = (1/2) 1F1(2; 3; -1)
    assert abs(hyp1f1(2, 3, -1) - (2 - 4 / math.e)) < 1e-13


def test_hyp1f1_pole():
    with pytest.raises(PoleError):
        hyp1f1(2, 0, -1)
    with pytest.raises(PoleError):
        hyp1f1(1.5, -3, 0.5)


def test_hyp1f1_kummer_transformation():
    rng = random.Random(424242)
    count = 0
    while count < 50:
        a = complex(rng.uniform(-4, 4), rng.uniform(-4, 4))
        b = complex(rng.uniform(-4, 4), rng.uniform(-4, 4))
        x = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        if abs(x) > 2:
            continue
        if abs(b.imag) < 0.3 and b.real < 0.5:
            continue  # keep b away from nonpositive integers
        lhs = hyp1f1(a, b, x)
        rhs = cmath.exp(x) * hyp1f1(b - a, b, -x)
        assert abs(lhs - rhs) <= 1e-11 * max(abs(lhs), 1.0)
        count += 1


def test_series_bound_reported():
    tight = PrecisionConfig(series_truncation_bound=3)
    with pytest.raises(ConvergenceError):
        hyp1f1(2, 3, 10.0, tight)


def test_format_cnum():
    assert format_cnum(complex(1.5, 2.25)) == "1.5+2.25i"
    assert format_cnum(complex(1.5, -2.25)) == "1.5-2.25i"
    assert format_cnum(0.25) == "0.25"
    assert format_cnum(complex(0.1234567890123, 0)) == "0.1234567890123"
