"""Direct evaluations: the kernel F_N, the defining Dirichlet series,
generalized Bernoulli polynomials and Laurent data of F_N at u = 0.

The kernel is

    F_N(u; w, a, theta) = exp(-u w) prod_l (1 - e(theta_l) exp(-u a_l))^{-1},

and its Laurent coefficients at the origin give the special values and
residues of the continued zeta function.
"""
from __future__ import annotations

import math
import warnings
from functools import lru_cache
from typing import Sequence

import numpy as np

from .domain import (
    DomainPoint,
    in_D_tilde,
    in_T_plus,
    is_zero,
    near_integer,
    require_good_domain,
)
from .errors import ConvergenceError, DomainError, IllConditionedWarning, PoleError, PreconditionError, TruncationError
from .numeric import (
    DEFAULT_PRECISION,
    TWO_PI_I,
    PrecisionConfig,
    TruncatedLaurentSeries as TLS,
    cpow_principal_array,
    e2pi,
    principal_arg,
)
from .result import EvalResult


def twist(theta: float, cfg: PrecisionConfig = DEFAULT_PRECISION) -> complex:
    """e(theta), snapped to exactly 1 when theta is within abs_tol of an integer."""
    return 1.0 + 0j if near_integer(theta, cfg) else e2pi(theta)


# ---------------------------------------------------------------------------
# the kernel F_N


def f_values(u, p: DomainPoint, cfg: PrecisionConfig = DEFAULT_PRECISION, check: bool = False) -> np.ndarray:
    """Vectorised F_N(u, p).

    A factor whose exponential exp(-u a_l) is large is rewritten as
    -xi^{-1} exp(u a_l) / (1 - xi^{-1} exp(u a_l)), and the exp(u a_l)
    part is folded into the leading exponential, so nothing overflows
    when F itself is of moderate size.
    """
    u = np.asarray(u, dtype=complex)
    expo = -u * p.w
    fac = np.ones_like(u)
    mind = np.full(u.shape, np.inf)
    for x, th in zip(p.a, p.theta):
        xi = twist(th, cfg)
        # log xi with the twist reduced to [-1/2, 1/2], so that expm1 keeps
        # full relative accuracy in 1 - xi e^z near the pole at u = 0
        log_xi = 0j if xi == 1 else TWO_PI_I * (th - round(th))
        if is_zero(x, cfg):
            d = -np.expm1(log_xi)
            fac = fac / d
            mind = np.minimum(mind, abs(d))
            continue
        z = -u * x
        big = z.real > 0
        zz = np.where(big, -z - log_xi, z + log_xi)
        d = -np.expm1(zz)
        mind = np.minimum(mind, np.abs(d))
        fac = fac * np.where(big, -1.0 / xi, 1.0) / d
        expo = expo + np.where(big, -z, 0.0)
    if check and np.any(mind < cfg.abs_tol):
        raise PoleError("F_N evaluated too close to a pole")
    return np.exp(expo) * fac


def f_test(u: complex, p: DomainPoint, cfg: PrecisionConfig = DEFAULT_PRECISION) -> complex:
    """F_N(u, w, a, theta) at a single point; raises PoleError near a pole."""
    require_good_domain(p, cfg)
    return complex(f_values(np.array([complex(u)]), p, cfg, check=True)[0])


# ---------------------------------------------------------------------------
# Dirichlet series


@lru_cache(maxsize=None)
def _compositions(n: int, N: int) -> np.ndarray:
    """All m in N^N with |m|_1 = n, in lexicographic order."""
    if N == 1:
        return np.array([[n]], dtype=np.int64)
    parts = []
    for first in range(n, -1, -1):
        rest = _compositions(n - first, N - 1)
        parts.append(np.hstack([np.full((rest.shape[0], 1), first, dtype=np.int64), rest]))
    return np.vstack(parts)


def compositions(n: int, N: int) -> np.ndarray:
    if n < 0:
        return np.zeros((0, N), dtype=np.int64)
    return _compositions(n, N)


def zeta_tail_bound(s: complex, p: DomainPoint, M: int) -> float:
    """Bound for sum_{|m|_1 > M} |(w + m.a)^{-s}|, valid for Re s > N on T+.

    Uses |w + m.a| >= r |m|_1 with r = min Re a_l, |z^{-s}| <= |z|^{-Re s}
    exp(|Im s| phi) with phi the largest |arg| among w and the a_l, the
    layer count C(n+N-1, N-1) <= (N n)^{N-1}/(N-1)!, and the integral test.
    """
    N = p.N
    sig = s.real
    r = min(x.real for x in p.a)
    phi = max(abs(principal_arg(z)) for z in (p.w,) + p.a)
    const = math.exp(abs(s.imag) * phi) * r ** (-sig) * N ** (N - 1) / math.factorial(N - 1)
    return const * M ** (N - sig) / (sig - N)


def zeta_series(
    s: complex,
    p: DomainPoint,
    max_index: int = 2000,
    cfg: PrecisionConfig = DEFAULT_PRECISION,
    require_certified: bool = False,
) -> EvalResult:
    """Partial sum of sum_m e(m.theta) (w + m.a)^{-s} over |m|_1 <= max_index.

    Layers of constant |m|_1 are added in ascending order.  The result
    carries the certified tail bound as its error estimate; ``meta
    ['certified']`` says whether that bound meets rel_tol.
    """
    s = complex(s)
    if not s.real > p.N:
        raise PreconditionError(f"the series needs Re(s) > N = {p.N}")
    if not in_T_plus(p, cfg):
        raise DomainError("the series needs Re(w) > 0 and Re(a_l) > 0")
    a = p.a_array
    th = p.theta_array
    total = 0j
    for n in range(max_index + 1):
        m = compositions(n, p.N)
        z = p.w + m @ a
        terms = cpow_principal_array(z, -s)
        if np.any(th != 0):
            terms = terms * np.exp(2j * np.pi * (m @ th))
        total += complex(np.sum(terms))
    err = zeta_tail_bound(s, p, max(max_index, 1))
    certified = err <= cfg.rel_tol * abs(total)
    if require_certified and not certified:
        raise ConvergenceError(f"tail bound {err:.3g} does not certify rel_tol at max_index={max_index}")
    return EvalResult(
        total,
        err,
        "series",
        {"max_index": max_index, "order": "ascending |m|_1 layers", "certified": bool(certified)},
    )


# ---------------------------------------------------------------------------
# generalized Bernoulli polynomials


def bernoulli_series(z: complex, xi: complex, order: int, cfg: PrecisionConfig = DEFAULT_PRECISION) -> TLS:
    """Series of t e^{zt} / (xi e^t - 1), known at least through t^order."""
    xi = complex(xi)
    if xi == 0:
        raise PreconditionError("xi must be nonzero")
    if xi != 1 and abs(xi - 1) < 1e3 * cfg.abs_tol:
        warnings.warn(
            "xi is within 1e3*abs_tol of 1; the generating function is ill conditioned",
            IllConditionedWarning,
            stacklevel=2,
        )
    ez = TLS.exp_linear(z, order)
    if xi == 1:
        # (e^t - 1)/t = sum t^j/(j+1)!
        den = TLS.from_function(lambda j: 1.0 / math.factorial(j + 1), order)
        return ez / den
    # t / (xi e^t - 1) is known one order beyond the denominator
    den = TLS.exp_linear(1.0, order).scale(xi) - 1.0
    return ez.shift(1) / den


def bernoulli_gen(n: int, z: complex, xi: complex, order: int | None = None, cfg: PrecisionConfig = DEFAULT_PRECISION) -> complex:
    """B_n(z, xi): n! times the t^n coefficient of t e^{zt}/(xi e^t - 1)."""
    if n < 0:
        raise PreconditionError("n must be non-negative")
    if order is None:
        order = n
    if n > order:
        raise TruncationError(f"B_{n} needs series order >= {n}, configured {order}")
    return bernoulli_series(z, xi, order, cfg).coeff(n) * math.factorial(n)


# ---------------------------------------------------------------------------
# Laurent expansion of F_N at u = 0


def pole_order_at_zero(p: DomainPoint, cfg: PrecisionConfig = DEFAULT_PRECISION) -> int:
    return sum(1 for x, t in zip(p.a, p.theta) if not is_zero(x, cfg) and near_integer(t, cfg))


def laurent_series_F(p: DomainPoint, order: int, cfg: PrecisionConfig = DEFAULT_PRECISION) -> TLS:
    """Laurent series of F_N(u, p) at u = 0, known through u^order."""
    require_good_domain(p, cfg)
    P = pole_order_at_zero(p, cfg)
    K = max(order + P, 0)
    out = TLS.exp_linear(-p.w, K)
    for x, th in zip(p.a, p.theta):
        xi = twist(th, cfg)
        if is_zero(x, cfg):
            out = out * (1.0 / (1.0 - xi))
        elif xi == 1:
            # (1 - e^{-ua})/u = sum_j -(-a)^{j+1}/(j+1)! u^j
            q = TLS.from_function(lambda j: -((-x) ** (j + 1)) / math.factorial(j + 1), K)
            out = out * q.reciprocal().shift(-1)
        else:
            den = TLS.exp_linear(-x, K).scale(-xi)
            den.coefficients[0] = -np.expm1(TWO_PI_I * (th - round(th)))
            out = out * den.reciprocal()
    return out


def laurent_coeff_F(p: DomainPoint, k: int, cfg: PrecisionConfig = DEFAULT_PRECISION) -> complex:
    """Coefficient of u^{-k} in the Laurent expansion of F_N at u = 0."""
    require_good_domain(p, cfg)
    if k > pole_order_at_zero(p, cfg):
        return 0j
    return laurent_series_F(p, -k, cfg).coeff(-k)


def special_value(p: DomainPoint, k: int, cfg: PrecisionConfig = DEFAULT_PRECISION) -> complex:
    """The value at s = -k <= 0: (-1)^k k! coeff(F_N, u^k)."""
    if k < 0:
        raise PreconditionError("special values are taken at s = -k with k >= 0")
    if not in_D_tilde(p, cfg):
        raise DomainError("special values need pi(p) in the cone")
    return (-1) ** k * math.factorial(k) * laurent_coeff_F(p, -k, cfg)


def residue_at_integer(p: DomainPoint, k: int, cfg: PrecisionConfig = DEFAULT_PRECISION) -> complex:
    """Residue at s = k in {1, ..., N}: coeff(F_N, u^{-k}) / (k-1)!."""
    if not 1 <= k <= p.N:
        raise PreconditionError(f"poles sit at s = 1, ..., {p.N}")
    if not in_D_tilde(p, cfg):
        raise DomainError("residues need pi(p) in the cone")
    return laurent_coeff_F(p, k, cfg) / math.factorial(k - 1)


# ---------------------------------------------------------------------------
# closed forms for the two worked constructions


def coeff_structured(setup: str, N: int, c: float | None, k: int, cfg: PrecisionConfig = DEFAULT_PRECISION) -> complex:
    """coeff(F_N(u, delta), u^{-k}) from the Bernoulli-polynomial sums.

    ``example-1``: delta = (0, (eta, ..., eta^{N-1}, 1), (c, ..., c)), eta = e(1/N), N odd;
        (-1)^{N-k} sum_{|n|=N-k} eta^{n_1 + 2 n_2 + ... + N n_N} prod B_{n_l}(0, e(c))/n_l!.
    ``example-2``: delta = ((1-eta)^{-1}, (1, eta, ..., eta^{N-1}), 0), eta = e(1/2N);
        (-1)^{N-k} eta^{(1-N)N/2} sum_{|n|=N-k} eta^{n_2 + 2 n_3 + ...}
        prod B_{n_l}(eta^{1-l} w/N, 1)/n_l!.
    """
    deg = N - k
    if setup == "example-1":
        if N < 3 or N % 2 == 0:
            raise PreconditionError("example-1 needs odd N >= 3")
        if c is None or not 0 <= c < 1:
            raise PreconditionError("example-1 needs c in [0, 1)")
        if deg < 0:
            return 0j
        eta = e2pi(1.0 / N)
        xi = twist(c, cfg)
        B = bernoulli_series(0.0, xi, deg, cfg)
        tables = [np.array([B.coeff(n) for n in range(deg + 1)])] * N
        weights = [eta ** (l + 1) for l in range(N)]
        prefactor = (-1) ** deg
    elif setup == "example-2":
        if N < 2:
            raise PreconditionError("example-2 needs N >= 2")
        if deg < 0:
            return 0j
        eta = e2pi(1.0 / (2 * N))
        w = 1.0 / (1.0 - eta)
        tables = []
        for l in range(N):
            B = bernoulli_series(eta ** (-l) * w / N, 1.0, deg, cfg)
            tables.append(np.array([B.coeff(n) for n in range(deg + 1)]))
        weights = [eta**l for l in range(N)]
        prefactor = (-1) ** deg * eta ** ((1 - N) * N // 2)
    else:
        raise PreconditionError(f"unknown setup {setup!r}")
    # the tables hold B_n(.)/n!; sum over compositions n of N - k
    n = compositions(deg, N)
    total = 0j
    for row in n:
        term = 1.0 + 0j
        for l, nl in enumerate(row):
            term *= tables[l][nl] * weights[l] ** int(nl)
        total += term
    return complex(prefactor * total)
