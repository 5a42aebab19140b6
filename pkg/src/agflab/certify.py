"""Certificates tying the recurrences to their generating-function ODEs.

The D-finite vertex of each holonomic triangle is verified as an exact
power-series identity: the series is built from the recurrence in big
rationals, the ODE is multiplied through by x to clear the 1/x
coefficient, and every coefficient of the residual must vanish exactly,
with no floating tolerance.  The singular-coefficient integrals behind
the connection constants (I_m, J_m, L_m) are evaluated by adaptive
quadrature and chained through their recurrences as floating
cross-checks, and the transfer from generating-function singularities to
coefficient growth is probed directly on the sequences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from scipy.integrate import quad

from .agf import f_eval, g_eval
from .holonomic import CoefficientPole, iter_sequence, mirror_e, mirror_pi

__all__ = [
    "OdeCheckResult",
    "PowerSeries",
    "QuadratureResult",
    "identity_chain_e",
    "identity_chain_pi",
    "ode_series_check_e",
    "ode_series_check_gamma",
    "ode_series_check_pi",
    "quad_I",
    "quad_J",
    "quad_L",
    "transfer_check",
    "u_series",
    "v_series",
    "w_series",
]


# ---------------------------------------------------------------------------
# exact truncated power series

class PowerSeries:
    """Truncated power series with exact rational coefficients.

    ``order`` is the truncation order: coefficients of x^0 .. x^order are
    meaningful.  ``exact=True`` marks honest polynomials (no truncation),
    which lets products against truncated series keep the right validity
    order.
    """

    __slots__ = ("coefficients", "order", "exact")

    def __init__(self, coefficients, order: int | None = None, exact: bool = False):
        coeffs = [Fraction(c) for c in coefficients]
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise ValueError("order must be nonnegative")
        coeffs = coeffs[: order + 1]
        coeffs.extend([Fraction(0)] * (order + 1 - len(coeffs)))
        self.coefficients = coeffs
        self.order = order
        self.exact = exact

    @staticmethod
    def poly(*coefficients) -> "PowerSeries":
        return PowerSeries(list(coefficients), exact=True)

    @staticmethod
    def exp_series(c, order: int) -> "PowerSeries":
        """Series of exp(c x) through the given order."""
        c = Fraction(c)
        out = [Fraction(1)]
        for k in range(1, order + 1):
            out.append(out[-1] * c / k)
        return PowerSeries(out, order)

    @staticmethod
    def binomial_series(exponent, order: int) -> "PowerSeries":
        """Series of (1 - x)^exponent through the given order."""
        a = Fraction(exponent)
        out = [Fraction(1)]
        for k in range(1, order + 1):
            out.append(out[-1] * (a - k + 1) / k * -1)
        return PowerSeries(out, order)

    def min_degree(self) -> int:
        for i, c in enumerate(self.coefficients):
            if c != 0:
                return i
        return self.order + 1

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        order = self._combine_order(other)
        n = order + 1
        a = self.coefficients[:n] + [Fraction(0)] * (n - len(self.coefficients))
        b = other.coefficients[:n] + [Fraction(0)] * (n - len(other.coefficients))
        return PowerSeries([x + y for x, y in zip(a, b)], order,
                           exact=self.exact and other.exact)

    def __neg__(self) -> "PowerSeries":
        return PowerSeries([-c for c in self.coefficients], self.order, self.exact)

    def __sub__(self, other: "PowerSeries") -> "PowerSeries":
        return self + (-other)

    def _combine_order(self, other: "PowerSeries") -> int:
        if self.exact and other.exact:
            return max(self.order, other.order)
        if self.exact:
            return other.order
        if other.exact:
            return self.order
        return min(self.order, other.order)

    def __mul__(self, other: "PowerSeries") -> "PowerSeries":
        if self.exact and other.exact:
            order = self.order + other.order
        elif self.exact:
            order = other.order + self.min_degree()
        elif other.exact:
            order = self.order + other.min_degree()
        else:
            order = min(self.order, other.order)
        out = [Fraction(0)] * (order + 1)
        for i, c in enumerate(self.coefficients):
            if c == 0:
                continue
            for j, d in enumerate(other.coefficients):
                if d != 0 and i + j <= order:
                    out[i + j] += c * d
        return PowerSeries(out, order, exact=self.exact and other.exact)

    def scale(self, c) -> "PowerSeries":
        c = Fraction(c)
        return PowerSeries([c * x for x in self.coefficients], self.order, self.exact)

    def differentiate(self) -> "PowerSeries":
        if self.order == 0:
            return PowerSeries([0], 0, self.exact)
        out = [k * self.coefficients[k] for k in range(1, self.order + 1)]
        return PowerSeries(out, self.order - 1, self.exact)

    def shift(self, k: int) -> "PowerSeries":
        """Multiply by x^k; negative k requires the low coefficients to vanish."""
        if k >= 0:
            return PowerSeries([Fraction(0)] * k + self.coefficients,
                               self.order + k, self.exact)
        if any(c != 0 for c in self.coefficients[:-k]):
            raise ValueError(f"series not divisible by x^{-k}")
        return PowerSeries(self.coefficients[-k:], self.order + k, self.exact)

    def divide_unit(self, den: "PowerSeries") -> "PowerSeries":
        """Divide by a series with nonzero constant term."""
        if den.coefficients[0] == 0:
            raise ZeroDivisionError("divisor must be a unit (nonzero constant term)")
        order = self.order if den.exact else min(self.order, den.order)
        d0 = den.coefficients[0]
        out = []
        for j in range(order + 1):
            acc = self.coefficients[j] if j < len(self.coefficients) else Fraction(0)
            for i in range(1, min(j, len(den.coefficients) - 1) + 1):
                acc -= den.coefficients[i] * out[j - i]
            out.append(acc / d0)
        return PowerSeries(out, order, exact=False)

    def first_nonzero(self) -> int | None:
        for i, c in enumerate(self.coefficients):
            if c != 0:
                return i
        return None

    def __eq__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        n = min(self.order, other.order) + 1
        return self.coefficients[:n] == other.coefficients[:n]

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coefficients[:6])
        return f"PowerSeries([{head}, ...], order={self.order})"


# ---------------------------------------------------------------------------
# series from the built-in recurrences

def u_series(m, order: int) -> PowerSeries:
    """Generating-series coefficients of the e-world sequence, exactly."""
    coeffs = [Fraction(0)] * (order + 1)
    for n, v in iter_sequence(mirror_e(Fraction(m)), n_max=max(order, 3)):
        if n <= order:
            coeffs[n] = v
    return PowerSeries(coeffs, order)


def v_series(m, order: int) -> PowerSeries:
    """Generating-series coefficients of the pi-world sequence, exactly."""
    coeffs = [Fraction(0)] * (order + 1)
    for n, v in iter_sequence(mirror_pi(Fraction(m)), n_max=max(order, 3)):
        if n <= order:
            coeffs[n] = v
    return PowerSeries(coeffs, order)


def w_series(z, order: int) -> PowerSeries:
    """Coefficients of the Gamma-triangle series: w_1 = 1 and
    w_{n+1} = (n+1)/(n+z) w_n (this is z * n!/(z)_n termwise)."""
    zq = Fraction(z)
    coeffs = [Fraction(0)] * (order + 1)
    w = Fraction(1)
    if order >= 1:
        coeffs[1] = w
    for n in range(1, order):
        if n + zq == 0:
            raise CoefficientPole(n, "n+z")
        w = w * (n + 1) / (n + zq)
        coeffs[n + 1] = w
    return PowerSeries(coeffs, order)


# ---------------------------------------------------------------------------
# ODE certificates (bit-exact coefficient checks)

@dataclass(frozen=True)
class OdeCheckResult:
    check: str
    param: object
    order: int
    passed: bool
    first_failure: int | None

    def to_report(self) -> dict:
        return {
            "check": self.check,
            "params": {"param": str(self.param), "order": self.order},
            "pass": self.passed,
            "max_deviation": 0.0 if self.passed else 1.0,
            "details": []
            if self.passed
            else [f"first nonzero residual coefficient at x^{self.first_failure}"],
        }


def _residual_result(check: str, param, order: int, residual: PowerSeries
                     ) -> OdeCheckResult:
    bad = residual.first_nonzero()
    return OdeCheckResult(check, param, order, bad is None, bad)


def ode_series_check_e(m: int, order: int, coeffs: PowerSeries | None = None
                       ) -> OdeCheckResult:
    """Verify x(1-x)U' - U(x^2 + (m-1)x + (2-m)) - m x^2 = 0 exactly.

    U is built from the e-world recurrence unless an explicit series is
    supplied (the seam used by mutation tests).
    """
    if order < 10:
        raise ValueError("order must be at least 10")
    U = coeffs if coeffs is not None else u_series(m, order)
    residual = (
        PowerSeries.poly(0, 1, -1) * U.differentiate()
        - U * PowerSeries.poly(2 - m, m - 1, 1)
        - PowerSeries.poly(0, 0, m)
    )
    return _residual_result("ode_certificate_e", m, order, residual)


def ode_series_check_pi(m: int, order: int, coeffs: PowerSeries | None = None
                        ) -> OdeCheckResult:
    """Verify x(1-x^2)V' + V(m-2 - x - m x^2) - m x^2 = 0 exactly."""
    if order < 10:
        raise ValueError("order must be at least 10")
    V = coeffs if coeffs is not None else v_series(m, order)
    residual = (
        PowerSeries.poly(0, 1, 0, -1) * V.differentiate()
        + V * PowerSeries.poly(m - 2, -1, -m)
        - PowerSeries.poly(0, 0, m)
    )
    return _residual_result("ode_certificate_pi", m, order, residual)


def ode_series_check_gamma(z, order: int, coeffs: PowerSeries | None = None
                           ) -> OdeCheckResult:
    """Verify x(1-x)W' + (z-1-x)W - z x = 0 exactly for rational z."""
    if order < 10:
        raise ValueError("order must be at least 10")
    zq = Fraction(z)
    W = coeffs if coeffs is not None else w_series(zq, order)
    residual = (
        PowerSeries.poly(0, 1, -1) * W.differentiate()
        + W * PowerSeries.poly(zq - 1, -1)
        - PowerSeries.poly(0, zq)
    )
    return _residual_result("ode_certificate_gamma", zq, order, residual)


# ---------------------------------------------------------------------------
# quadrature of the singular-coefficient integrals

@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    subdivisions: int


def _quad(f, a: float, b: float) -> QuadratureResult:
    value, err, info = quad(f, a, b, epsabs=1e-13, epsrel=1e-13,
                            limit=200, full_output=True)[:3]
    return QuadratureResult(value, err, int(info["last"]))


def quad_I(m) -> QuadratureResult:
    """I_m = integral_0^1 t^m e^t dt (recurrence I_m = e - m I_{m-1})."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    return _quad(lambda t: t**m * math.exp(t), 0.0, 1.0)


def quad_J(m: int) -> QuadratureResult:
    """J_m = 1 at m = 0, else integral_0^1 m t^(m-1) (1-t) e^t dt."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m == 0:
        return QuadratureResult(1.0, 0.0, 0)
    return _quad(lambda t: m * t ** (m - 1) * (1.0 - t) * math.exp(t), 0.0, 1.0)


def quad_L(m: int) -> QuadratureResult:
    """L_m = 1 at m = 0, else integral_0^1 m t^(m-1) sqrt((1-t)/(1+t)) dt.

    The substitution t = 1 - s^2 removes the square-root endpoint
    singularity: the integrand becomes 2 m s^2 (1-s^2)^(m-1)/sqrt(2-s^2).
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m == 0:
        return QuadratureResult(1.0, 0.0, 0)
    return _quad(
        lambda s: 2.0 * m * s * s * (1.0 - s * s) ** (m - 1)
        / math.sqrt(2.0 - s * s),
        0.0,
        1.0,
    )


# ---------------------------------------------------------------------------
# identity chains and transfer checks

def identity_chain_e(m_max: int, tol: float = 1e-9) -> dict:
    """Quadrature cross-checks: J_m = I_{m+1}, J_{m+1} = e - (m+2) J_m,
    and the step identity f(m+2) = (m+2)[f(m) - f(m+1)] with f = J/e."""
    if m_max < 2:
        raise ValueError("m_max must be at least 2")
    I = [quad_I(m).value for m in range(m_max + 2)]
    J = [quad_J(m).value for m in range(m_max + 1)]
    details = []
    worst = 0.0
    for m in range(m_max + 1):
        dev_ji = abs(J[m] - I[m + 1])
        dev_jrec = (
            abs(J[m + 1] - (math.e - (m + 2) * J[m])) if m + 1 <= m_max else 0.0
        )
        f_m, f_m1 = J[m] / math.e, J[m + 1] / math.e if m + 1 <= m_max else None
        dev_f = 0.0
        if m + 2 <= m_max:
            f_m2 = J[m + 2] / math.e
            dev_f = abs(f_m2 - (m + 2) * (f_m - f_m1))
        worst = max(worst, dev_ji, dev_jrec, dev_f)
        details.append(
            {"m": m, "J": J[m], "J_vs_I": dev_ji, "J_rec": dev_jrec,
             "f_discrete": dev_f}
        )
    return {
        "check": "identity_chain_e",
        "params": {"m_max": m_max, "tolerance": tol},
        "pass": worst <= tol,
        "max_deviation": worst,
        "details": details,
    }


def identity_chain_pi(m_max: int, tol: float = 1e-9) -> dict:
    """Quadrature cross-checks: L_{m+2} = L_m - L_{m+1}/(m+1) and
    g(m) = sqrt(2/pi) L_m against the Gamma-ratio evaluation."""
    if m_max < 2:
        raise ValueError("m_max must be at least 2")
    L = [quad_L(m).value for m in range(m_max + 1)]
    details = []
    worst = 0.0
    for m in range(m_max + 1):
        dev_rec = 0.0
        if m + 2 <= m_max:
            dev_rec = abs(L[m + 2] - (L[m] - L[m + 1] / (m + 1)))
        g_quad = math.sqrt(2 / math.pi) * L[m]
        dev_g = abs(g_quad - g_eval(m).real)
        worst = max(worst, dev_rec, dev_g)
        details.append({"m": m, "L": L[m], "L_rec": dev_rec, "g_match": dev_g})
    return {
        "check": "identity_chain_pi",
        "params": {"m_max": m_max, "tolerance": tol},
        "pass": worst <= tol,
        "max_deviation": worst,
        "details": details,
    }


def transfer_check(world: str, m: int, n: int) -> float:
    """Relative deviation of u_n from its singular-expansion prediction.

    world 'e': |u_n(m)/(f(m) n) - 1|; world 'pi': |v_n(m)/(g(m) sqrt(n)) - 1|.
    """
    if n < 10**3:
        raise ValueError("transfer check needs n >= 1000")
    if world == "e":
        rec, predict = mirror_e(m), f_eval(m).real * n
    elif world == "pi":
        rec, predict = mirror_pi(m), g_eval(m).real * math.sqrt(n)
    else:
        raise ValueError("world must be 'e' or 'pi'")
    last = None
    for _, v in iter_sequence(rec, None, n, digits=15):
        last = v
    return abs(last / predict - 1.0)
