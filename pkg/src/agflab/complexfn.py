"""Principal-branch complex special functions at configurable precision.

Double precision (the default) evaluates Gamma through a fixed Lanczos
approximation with reflection for Re z < 1/2; the extended mode (>= 30
significant digits, on mpmath arithmetic) uses a Stirling series with
exact Bernoulli correction terms and argument raising.  The lower
incomplete gamma and the confluent hypergeometric 1F1 are evaluated by
their defining series with a guarded truncation rule.

Poles are reported as typed :class:`PoleError`, never as infinities, so
grid drivers can skip them deterministically.  All functions are pure;
precision travels in an explicit :class:`PrecisionConfig`.  The default
double mode touches no global state; the extended mode raises mpmath's
working precision for the duration of each call, so it is not safe to
interleave with other mpmath users across threads.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

__all__ = [
    "ConvergenceError",
    "DOUBLE",
    "PoleError",
    "PrecisionConfig",
    "extended",
    "format_cnum",
    "gamma",
    "hyp1f1",
    "log_gamma",
    "lower_incomplete_gamma",
    "principal_log",
    "principal_pow",
]

_DOUBLE_EPS = 2.220446049250313e-16


class PoleError(ArithmeticError):
    """Evaluation requested at a pole."""


class ConvergenceError(ArithmeticError):
    """A series failed to satisfy its truncation rule within the bound."""


@dataclass(frozen=True)
class PrecisionConfig:
    """Working precision and series/tolerance policy for one computation."""

    working_digits: int = 15
    series_truncation_bound: int = 400
    tolerance_abs: float = 1e-15
    tolerance_rel: float = 1e-12

    def __post_init__(self):
        if self.working_digits < 1:
            raise ValueError("working_digits must be positive")
        if self.series_truncation_bound < 1:
            raise ValueError("series_truncation_bound must be positive")
        if self.tolerance_abs <= 0 or self.tolerance_rel <= 0:
            raise ValueError("tolerances must be positive")
        if self.tolerance_rel < self.machine_eps:
            raise ValueError(
                "tolerance_rel below machine epsilon of the chosen precision"
            )

    @property
    def machine_eps(self) -> float:
        if self.working_digits <= 16:
            return _DOUBLE_EPS
        return 10.0 ** (1 - self.working_digits)

    @property
    def is_extended(self) -> bool:
        return self.working_digits > 16


DOUBLE = PrecisionConfig()


def extended(digits: int = 30) -> PrecisionConfig:
    """Extended-precision configuration with `digits` significant digits."""
    if digits <= 16:
        raise ValueError("extended mode needs more than 16 digits")
    return PrecisionConfig(
        working_digits=digits,
        series_truncation_bound=40 * digits,
        tolerance_abs=10.0 ** (-digits),
        tolerance_rel=10.0 ** (-(digits - 3)),
    )


# ---------------------------------------------------------------------------
# scalar conversion helpers

def _to_complex(z) -> complex:
    if isinstance(z, Fraction):
        return complex(z.numerator / z.denominator)
    z = complex(z)
    if z.imag == 0.0:
        z = complex(z.real, 0.0)  # normalize -0.0 onto the principal branch
    return z


def _to_mpc(z) -> mp.mpc:
    if isinstance(z, Fraction):
        return mp.mpc(mp.mpf(z.numerator) / z.denominator)
    if isinstance(z, (mp.mpf, mp.mpc)):
        return mp.mpc(z)
    z = complex(z)
    return mp.mpc(z.real, z.imag)


def _nearest_nonpositive_int(z) -> int | None:
    """Index n <= 0 with |z - n| < 1e-12, or None."""
    re = float(mp.re(z)) if isinstance(z, (mp.mpf, mp.mpc)) else complex(z).real
    im = float(mp.im(z)) if isinstance(z, (mp.mpf, mp.mpc)) else complex(z).imag
    n = round(re)
    if n <= 0 and abs(re - n) < 1e-12 and abs(im) < 1e-12:
        return n
    return None


# ---------------------------------------------------------------------------
# elementary principal-branch functions

def principal_log(z, cfg: PrecisionConfig = DOUBLE):
    """Principal log with Im in (-pi, pi]; cut along (-inf, 0]."""
    if cfg.is_extended:
        with mp.workdps(cfg.working_digits + 10):
            w = _to_mpc(z)
            if w == 0:
                raise ValueError("principal log undefined at 0")
            return mp.log(w)
    w = _to_complex(z)
    if w == 0:
        raise ValueError("principal log undefined at 0")
    return cmath.log(w)


def principal_pow(z, w, cfg: PrecisionConfig = DOUBLE):
    """z**w on the principal branch, exp(w * principal_log(z))."""
    if cfg.is_extended:
        with mp.workdps(cfg.working_digits + 10):
            zz, ww = _to_mpc(z), _to_mpc(w)
            if zz == 0:
                return _pow_at_zero(ww)
            return mp.exp(ww * mp.log(zz))
    zz, ww = _to_complex(z), _to_complex(w)
    if zz == 0:
        return _pow_at_zero(ww)
    return cmath.exp(ww * cmath.log(zz))


def _pow_at_zero(w):
    k = _nearest_nonpositive_int(-w)
    if k is not None and k < 0:  # w a positive integer
        return w * 0
    raise ValueError("0**w undefined unless w is a positive integer")


# ---------------------------------------------------------------------------
# Gamma: Lanczos in double precision

_LANCZOS_G = 7.0
_LANCZOS_C0 = 0.99999999999980993
_LANCZOS_P = (
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_LOG_SQRT_TWO_PI = 0.5 * math.log(2.0 * math.pi)


def _lanczos_sum(w: complex) -> complex:
    x = complex(_LANCZOS_C0)
    for i, p in enumerate(_LANCZOS_P):
        x += p / (w + i + 1)
    return x


def _gamma_lanczos(z: complex) -> complex:
    if z.real < 0.5:
        return math.pi / (cmath.sin(math.pi * z) * _gamma_lanczos(1.0 - z))
    w = z - 1.0
    x = _lanczos_sum(w)
    t = w + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (w + 0.5) * cmath.exp(-t) * x


def _lgamma_lanczos(z: complex) -> complex:
    if z.real < 0.5:
        return (
            math.log(math.pi)
            - cmath.log(cmath.sin(math.pi * z))
            - _lgamma_lanczos(1.0 - z)
        )
    w = z - 1.0
    x = _lanczos_sum(w)
    t = w + _LANCZOS_G + 0.5
    return _LOG_SQRT_TWO_PI + (w + 0.5) * cmath.log(t) - t + cmath.log(x)


# ---------------------------------------------------------------------------
# Gamma: Stirling series with exact Bernoulli corrections (extended mode)

_BERNOULLI_CACHE: list[Fraction] = []


def _bernoulli(n: int) -> Fraction:
    """B_n (B_1 = -1/2 convention), exact, by the Akiyama-Tanigawa scheme."""
    global _BERNOULLI_CACHE
    if n >= len(_BERNOULLI_CACHE):
        top = max(n, 2 * len(_BERNOULLI_CACHE), 16)
        row = [Fraction(0)] * (top + 1)
        out = []
        for m in range(top + 1):
            row[m] = Fraction(1, m + 1)
            for j in range(m, 0, -1):
                row[j - 1] = j * (row[j - 1] - row[j])
            out.append(row[0])
        # Akiyama-Tanigawa yields B_1 = +1/2; flip to the B_1 = -1/2 convention
        if top >= 1:
            out[1] = -out[1]
        _BERNOULLI_CACHE = out
    return _BERNOULLI_CACHE[n]


def _lgamma_stirling(z, dps: int):
    """log Gamma for Re z >= 0.5 via argument raising + Stirling series."""
    threshold = max(20.0, 1.2 * dps)
    shift = int(max(0.0, math.ceil(threshold - float(mp.re(z)))))
    w = z + shift
    s = (w - mp.mpf(1) / 2) * mp.log(w) - w + mp.log(2 * mp.pi) / 2
    w2 = w * w
    pw = w
    tiny = mp.mpf(10) ** (-(dps + 8))
    for j in range(1, 2 * dps + 10):
        b = _bernoulli(2 * j)
        term = mp.mpf(b.numerator) / b.denominator / ((2 * j) * (2 * j - 1)) / pw
        s += term
        if abs(term) < tiny:
            break
        pw *= w2
    for i in range(shift):
        s -= mp.log(z + i)
    return s


def _lgamma_mp(z, dps: int):
    if float(mp.re(z)) < 0.5:
        return (
            mp.log(mp.pi)
            - mp.log(mp.sin(mp.pi * z))
            - _lgamma_stirling(1 - z, dps)
        )
    return _lgamma_stirling(z, dps)


# ---------------------------------------------------------------------------
# public Gamma interface

def gamma(z, cfg: PrecisionConfig = DOUBLE):
    """Euler Gamma on the principal branch; poles at 0, -1, -2, ..."""
    n = _nearest_nonpositive_int(z)
    if n is not None:
        raise PoleError(f"gamma pole at z={n}")
    if cfg.is_extended:
        with mp.workdps(cfg.working_digits + 10):
            return mp.exp(_lgamma_mp(_to_mpc(z), cfg.working_digits))
    return _gamma_lanczos(_to_complex(z))


def log_gamma(z, cfg: PrecisionConfig = DOUBLE):
    """A log of Gamma with exp(log_gamma(z)) == gamma(z) to tolerance.

    The branch is continuous on Re z >= 1/2; for Re z < 1/2 the reflection
    formula is applied, which keeps exp-consistency but may shift the
    imaginary part by multiples of 2*pi.
    """
    n = _nearest_nonpositive_int(z)
    if n is not None:
        raise PoleError(f"gamma pole at z={n}")
    if cfg.is_extended:
        with mp.workdps(cfg.working_digits + 10):
            return _lgamma_mp(_to_mpc(z), cfg.working_digits)
    return _lgamma_lanczos(_to_complex(z))


# ---------------------------------------------------------------------------
# lower incomplete gamma and confluent hypergeometric series

def lower_incomplete_gamma(a, x: float = -1.0, cfg: PrecisionConfig = DOUBLE):
    """gamma(a, x) = integral_0^x t^(a-1) e^(-t) dt, principal branch in x.

    Evaluated by the alternating series
    sum_k (-1)^k x^(a+k) / (k! (a+k)), which converges factorially for any
    fixed real x.  For x < 0 the principal power x^a = exp(a(log|x| + i pi))
    is used.  Poles at a in {0, -1, -2, ...}.
    """
    n = _nearest_nonpositive_int(a)
    if n is not None:
        raise PoleError(f"lower incomplete gamma pole at a={n}")
    if cfg.is_extended:
        with mp.workdps(cfg.working_digits + 10):
            aa = _to_mpc(a)
            xx = mp.mpf(x)
            if xx == 0:
                return mp.mpc(0)
            xa = mp.exp(aa * (mp.log(abs(xx)) + (mp.pi * 1j if xx < 0 else 0)))
            return xa * _incgamma_tail(aa, xx, cfg, one=mp.mpf(1))
    aa = _to_complex(a)
    if x == 0:
        return 0j
    xa = cmath.exp(aa * (math.log(abs(x)) + (math.pi * 1j if x < 0 else 0.0)))
    return xa * _incgamma_tail(aa, x, cfg, one=1.0)


def _incgamma_tail(a, x, cfg: PrecisionConfig, one):
    # sum_k (-x)^k / k! / (a + k)  with the 3-consecutive-small-terms rule
    term = one
    total = term / a
    small = 0
    for k in range(1, cfg.series_truncation_bound):
        term = term * (-x) / k
        piece = term / (a + k)
        total += piece
        if abs(piece) < cfg.tolerance_abs * max(abs(total), cfg.tolerance_abs):
            small += 1
            if small >= 3:
                return total
        else:
            small = 0
    raise ConvergenceError("incomplete gamma series did not converge")


def hyp1f1(a, b, x, cfg: PrecisionConfig = DOUBLE):
    """Confluent hypergeometric 1F1(a; b; x) by its defining series.

    Truncates once the term magnitude stays below
    tolerance_abs * |partial sum| for 3 consecutive terms; b must avoid
    the nonpositive integers.
    """
    n = _nearest_nonpositive_int(b)
    if n is not None:
        raise PoleError(f"hyp1f1 pole at b={n}")
    if cfg.is_extended:
        with mp.workdps(cfg.working_digits + 10):
            return _hyp1f1_series(_to_mpc(a), _to_mpc(b), _to_mpc(x), cfg)
    return _hyp1f1_series(_to_complex(a), _to_complex(b), _to_complex(x), cfg)


def _hyp1f1_series(a, b, x, cfg: PrecisionConfig):
    term = a / a  # one of the right type
    total = term
    small = 0
    for k in range(cfg.series_truncation_bound):
        term = term * (a + k) / (b + k) * x / (k + 1)
        total += term
        if abs(term) < cfg.tolerance_abs * max(abs(total), cfg.tolerance_abs):
            small += 1
            if small >= 3:
                return total
        else:
            small = 0
    raise ConvergenceError("1F1 series did not converge within the bound")


# ---------------------------------------------------------------------------

def format_cnum(z, cfg: PrecisionConfig = DOUBLE) -> str:
    """Render a complex value as 're+imi' / 're-imi' at working precision."""
    d = cfg.working_digits
    if isinstance(z, (mp.mpf, mp.mpc)):
        re, im = float(mp.re(z)), float(mp.im(z))
        if cfg.is_extended:
            re_s = mp.nstr(mp.re(z), d)
            im_s = mp.nstr(abs(mp.im(z)), d)
            if im == 0.0:
                return re_s
            return f"{re_s}{'+' if im >= 0 else '-'}{im_s}i"
    else:
        zc = complex(z)
        re, im = zc.real, zc.imag
    if im == 0.0:
        return f"{re:.{d}g}"
    return f"{re:.{d}g}{'+' if im >= 0 else '-'}{abs(im):.{d}g}i"
