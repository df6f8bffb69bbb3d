"""Branch-aware elementary functions, the complex gamma function and
truncated Laurent-series arithmetic.

Everything here works in IEEE double precision.  ``PrecisionConfig``
carries the tolerances that the rest of the package uses for
comparisons; it never changes the arithmetic itself.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DomainError,
    PoleError,
    PreconditionError,
    SeriesDivisionError,
    TruncationError,
)

TWO_PI = 2.0 * math.pi
TWO_PI_I = 2j * math.pi


@dataclass(frozen=True)
class PrecisionConfig:
    """Working precision and comparison tolerances.

    ``working_digits`` controls how many significant digits are written
    when numbers are serialized; double precision carries at most 17.
    """

    working_digits: int = 17
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10

    def __post_init__(self):
        if int(self.working_digits) != self.working_digits or self.working_digits < 15:
            raise PreconditionError("working_digits must be an integer >= 15")
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise PreconditionError("abs_tol and rel_tol must be positive")

    @property
    def output_digits(self) -> int:
        return min(int(self.working_digits), 17)

    def to_dict(self) -> dict:
        return {
            "working_digits": self.working_digits,
            "abs_tol": self.abs_tol,
            "rel_tol": self.rel_tol,
        }


DEFAULT_PRECISION = PrecisionConfig()


# ---------------------------------------------------------------------------
# elementary functions


def e2pi(z: complex) -> complex:
    """Return exp(2*pi*i*z).

    The real part of ``z`` is reduced modulo 1 first, so that large real
    arguments keep full accuracy.
    """
    z = complex(z)
    x = z.real - math.floor(z.real)
    ph = TWO_PI * x
    mag = math.exp(-TWO_PI * z.imag)
    return complex(mag * math.cos(ph), mag * math.sin(ph))


def principal_arg(z: complex) -> float:
    """Argument of ``z`` in (-pi, pi]; a signed zero imaginary part on the
    negative real axis is mapped to +pi."""
    t = math.atan2(z.imag, z.real)
    if t == -math.pi:
        t = math.pi
    return t


def principal_arg_array(z: np.ndarray) -> np.ndarray:
    t = np.angle(z)
    return np.where(t == -np.pi, np.pi, t)


class Branch(enum.Enum):
    """Argument windows for complex powers."""

    PRINCIPAL = "principal"  # Arg in (-pi, pi]
    HANKEL = "hankel"  # Arg supplied explicitly by the caller, in [0, 2pi]


def _is_positive_integer(s: complex) -> bool:
    return s.imag == 0 and s.real > 0 and s.real == math.floor(s.real)


def cpow(z: complex, s: complex, branch: Branch = Branch.PRINCIPAL, arg: float | None = None) -> complex:
    """Complex power exp(s*(log|z| + i*Arg(z))) on an explicit branch.

    With ``Branch.HANKEL`` the argument of ``z`` is not inferred; the caller
    passes ``arg`` in [0, 2*pi], which must be consistent with ``z`` modulo
    2*pi.
    """
    z = complex(z)
    s = complex(s)
    if z == 0:
        if _is_positive_integer(s):
            return 0j
        raise DomainError("cpow: zero base requires a positive integer exponent")
    if branch is Branch.PRINCIPAL:
        if arg is not None:
            raise PreconditionError("cpow: the principal branch takes no explicit argument")
        t = principal_arg(z)
    elif branch is Branch.HANKEL:
        if arg is None:
            raise PreconditionError("cpow: the Hankel branch needs an explicit argument")
        if not (0.0 <= arg <= TWO_PI):
            raise PreconditionError("cpow: Hankel argument must lie in [0, 2*pi]")
        tz = principal_arg(z)
        if abs(cmath.exp(1j * (arg - tz)) - 1) > 1e-8:
            raise PreconditionError("cpow: supplied argument is inconsistent with z")
        t = float(arg)
    else:  # pragma: no cover - enum exhausts the cases
        raise PreconditionError(f"unknown branch {branch!r}")
    return cmath.exp(s * complex(math.log(abs(z)), t))


def cpow_principal_array(z: np.ndarray, s: complex) -> np.ndarray:
    """Vectorised principal power for nonzero ``z``."""
    z = np.asarray(z, dtype=complex)
    logz = np.log(np.abs(z)) + 1j * principal_arg_array(z)
    return np.exp(complex(s) * logz)


def sinpi(z: complex) -> complex:
    """sin(pi*z), exact zero at integers and accurate near them."""
    z = complex(z)
    n = round(z.real)
    r = complex(z.real - n, z.imag)
    v = cmath.sin(math.pi * r)
    return -v if n % 2 else v


# ---------------------------------------------------------------------------
# gamma function
#
# Lanczos approximation with g = 7 and nine coefficients (the widely
# published set); relative error stays near 1e-15 for Re(s) >= 1/2.
# The reflection formula covers the rest of the plane.

_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(TWO_PI)


def _is_nonpositive_integer(s: complex) -> bool:
    return s.imag == 0 and s.real <= 0 and s.real == math.floor(s.real)


def _lanczos(z: complex) -> complex:
    # valid for Re(z) >= 1/2
    z = z - 1
    x = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        x += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _SQRT_2PI * cmath.exp((z + 0.5) * cmath.log(t) - t) * x


def gamma(s: complex) -> complex:
    """Complex gamma function.

    Raises ``PoleError`` at the non-positive integers.
    """
    s = complex(s)
    if _is_nonpositive_integer(s):
        raise PoleError(f"gamma has a pole at {s.real:g}")
    if s.real < 0.5:
        return math.pi / (sinpi(s) * _lanczos(1 - s))
    return _lanczos(s)


def rgamma(s: complex) -> complex:
    """Reciprocal gamma 1/Gamma(s), an entire function (zero at the poles of gamma)."""
    s = complex(s)
    if _is_nonpositive_integer(s):
        return 0j
    if s.real < 0.5:
        return sinpi(s) * _lanczos(1 - s) / math.pi
    return 1.0 / _lanczos(s)


# ---------------------------------------------------------------------------
# truncated Laurent series


@dataclass(eq=False)
class TruncatedLaurentSeries:
    """Finite Laurent expansion sum_k c_k u^k with known coefficients for
    ``min_exponent <= k <= truncation_order``.

    Coefficients above ``truncation_order`` are unknown, not zero.
    """

    min_exponent: int
    coefficients: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.min_exponent = int(self.min_exponent)
        self.coefficients = np.array(self.coefficients, dtype=complex).ravel()
        if self.coefficients.size == 0:
            raise PreconditionError("a truncated series needs at least one coefficient")

    # constructors -------------------------------------------------------
    @classmethod
    def from_function(cls, coef: Callable[[int], complex], order: int, min_exponent: int = 0):
        return cls(min_exponent, [coef(k) for k in range(min_exponent, order + 1)])

    @classmethod
    def monomial(cls, k: int, order: int, c: complex = 1.0):
        """c*u^k, known exactly up to ``order`` (>= k)."""
        if order < k:
            raise PreconditionError("order below the monomial degree")
        co = np.zeros(order - k + 1, dtype=complex)
        co[0] = c
        return cls(k, co)

    @classmethod
    def constant(cls, c: complex, order: int):
        return cls.monomial(0, order, c)

    @classmethod
    def exp_linear(cls, c: complex, order: int):
        """exp(c*u) up to u^order."""
        co = np.empty(order + 1, dtype=complex)
        co[0] = 1.0
        for n in range(1, order + 1):
            co[n] = co[n - 1] * c / n
        return cls(0, co)

    @classmethod
    def binomial(cls, beta: complex, x: complex, order: int):
        """(1 + x*u)^beta on the branch equal to 1 at u = 0."""
        co = np.empty(order + 1, dtype=complex)
        co[0] = 1.0
        for n in range(1, order + 1):
            co[n] = co[n - 1] * (beta - n + 1) / n * x
        return cls(0, co)

    # basic properties -------------------------------------------------------
    @property
    def truncation_order(self) -> int:
        return self.min_exponent + self.coefficients.size - 1

    def __len__(self) -> int:
        return self.coefficients.size

    def __repr__(self) -> str:
        return (
            f"TruncatedLaurentSeries(min_exponent={self.min_exponent}, "
            f"truncation_order={self.truncation_order})"
        )

    def coeff(self, k: int) -> complex:
        """Coefficient of u^k (zero below ``min_exponent``)."""
        if k > self.truncation_order:
            raise TruncationError(
                f"coefficient u^{k} requested beyond truncation order {self.truncation_order}"
            )
        if k < self.min_exponent:
            return 0j
        return complex(self.coefficients[k - self.min_exponent])

    def truncate(self, order: int) -> "TruncatedLaurentSeries":
        if order > self.truncation_order:
            raise TruncationError("cannot extend a truncated series")
        if order < self.min_exponent:
            raise TruncationError("truncation below the leading exponent")
        return TruncatedLaurentSeries(self.min_exponent, self.coefficients[: order - self.min_exponent + 1])

    def shift(self, k: int) -> "TruncatedLaurentSeries":
        """Multiply by u^k."""
        return TruncatedLaurentSeries(self.min_exponent + k, self.coefficients.copy())

    def scale(self, c: complex) -> "TruncatedLaurentSeries":
        return TruncatedLaurentSeries(self.min_exponent, self.coefficients * c)

    def normalized(self, tol: float = 0.0) -> "TruncatedLaurentSeries":
        """Drop leading coefficients of magnitude <= tol (keeps at least one)."""
        co = self.coefficients
        i = 0
        while i < co.size - 1 and abs(co[i]) <= tol:
            i += 1
        return TruncatedLaurentSeries(self.min_exponent + i, co[i:])

    # arithmetic -------------------------------------------------------------
    def _aligned(self, other, order):
        lo = min(self.min_exponent, other.min_exponent)
        out = []
        for x in (self, other):
            v = np.zeros(order - lo + 1, dtype=complex)
            v[x.min_exponent - lo : x.min_exponent - lo + x.coefficients.size] = x.coefficients[
                : order - x.min_exponent + 1
            ]
            out.append(v)
        return lo, out[0], out[1]

    def __add__(self, other):
        if not isinstance(other, TruncatedLaurentSeries):
            other = TruncatedLaurentSeries.constant(other, max(self.truncation_order, 0))
        order = min(self.truncation_order, other.truncation_order)
        lo, x, y = self._aligned(other, order)
        return TruncatedLaurentSeries(lo, x + y)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1.0)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncatedLaurentSeries):
            return self.scale(complex(other))
        m = self.min_exponent + other.min_exponent
        order = min(
            self.truncation_order + other.min_exponent,
            other.truncation_order + self.min_exponent,
        )
        n = order - m + 1
        prod = np.convolve(self.coefficients[:n], other.coefficients[:n])[:n]
        return TruncatedLaurentSeries(m, prod)

    __rmul__ = __mul__

    def reciprocal(self, tol: float = 0.0) -> "TruncatedLaurentSeries":
        b = self.normalized(tol)
        b0 = b.coefficients[0]
        if abs(b0) <= tol or b0 == 0:
            raise SeriesDivisionError("division by a series with vanishing leading coefficient")
        n = b.coefficients.size
        c = np.empty(n, dtype=complex)
        c[0] = 1.0 / b0
        bc = b.coefficients
        for k in range(1, n):
            c[k] = -np.dot(bc[1 : k + 1], c[k - 1 :: -1][:k]) / b0
        return TruncatedLaurentSeries(-b.min_exponent, c)

    def __truediv__(self, other):
        if not isinstance(other, TruncatedLaurentSeries):
            other = complex(other)
            if other == 0:
                raise SeriesDivisionError("division of a series by zero")
            return self.scale(1.0 / other)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * complex(other)

    def exp(self) -> "TruncatedLaurentSeries":
        """exp of a regular series (no negative exponents)."""
        if self.min_exponent < 0 and np.any(self.coefficients[: -self.min_exponent] != 0):
            raise PreconditionError("exp is only defined for regular series")
        order = self.truncation_order
        if order < 0:
            raise TruncationError("series carries no regular coefficients")
        f = np.array([self.coeff(k) for k in range(0, order + 1)], dtype=complex)
        g = np.empty(order + 1, dtype=complex)
        g[0] = cmath.exp(f[0])
        j = np.arange(1, order + 1)
        for n in range(1, order + 1):
            g[n] = np.dot(j[:n] * f[1 : n + 1], g[n - 1 :: -1][:n]) / n
        return TruncatedLaurentSeries(0, g)


def series_mul(x: TruncatedLaurentSeries, y: TruncatedLaurentSeries) -> TruncatedLaurentSeries:
    return x * y


def series_div(
    x: TruncatedLaurentSeries, y: TruncatedLaurentSeries, cfg: PrecisionConfig = DEFAULT_PRECISION
) -> TruncatedLaurentSeries:
    """x / y; the divisor's lowest nonzero coefficient must exceed abs_tol."""
    return x * y.reciprocal(cfg.abs_tol)


def exp_of_regular_series(f: TruncatedLaurentSeries) -> TruncatedLaurentSeries:
    return f.exp()


def extract_coeff(f: TruncatedLaurentSeries, k: int) -> complex:
    return f.coeff(k)


def product(series: Sequence[TruncatedLaurentSeries]) -> TruncatedLaurentSeries:
    out = series[0]
    for s in series[1:]:
        out = out * s
    return out
