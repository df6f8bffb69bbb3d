"""Lambert-type series at fixed points, the multiple gamma product, the
Kronecker limit cases and numerical rationality detection."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .contour import (
    DEFAULT_QUADRATURE,
    QuadratureConfig,
    ResidualReport,
    L_extended,
    _report,
    rho,
)
from .domain import DomainPoint, in_D_tilde_Cstar
from .errors import CaseAmbiguityError, NotFixedError, PreconditionError, TruncationError
from .evaluator import laurent_coeff_F, residue_at_integer, special_value
from .group import (
    GroupElement,
    example1_point,
    example2_point,
    fixed_residual,
    is_fixed,
    j_factor,
    psi_angle,
)
from .numeric import DEFAULT_PRECISION, PrecisionConfig, e2pi
from .result import EvalResult

TWO_PI_I = 2j * math.pi


# ---------------------------------------------------------------------------
# rationality


@dataclass(frozen=True)
class RationalityVerdict:
    """z ~ sum_j (numerators[j]/denominator) basis[j].

    ``numerator`` is the first coefficient's numerator, which is the whole
    answer for the basis {1}.
    """

    is_near_rational: bool
    numerator: int
    denominator: int
    residual: float
    numerators: tuple = ()
    basis: tuple = ()

    def to_dict(self) -> dict:
        return {
            "is_near_rational": self.is_near_rational,
            "numerator": self.numerator,
            "denominator": self.denominator,
            "residual": self.residual,
            "numerators": list(self.numerators),
            "basis": list(self.basis),
        }


def _real_subbasis(basis: list, tol: float = 1e-9) -> list:
    """Indices of at most two elements of ``basis`` independent over R."""
    idx: list = []
    for j, b in enumerate(basis):
        if abs(b) <= tol:
            continue
        if not idx:
            idx.append(j)
            continue
        b0 = basis[idx[0]]
        if abs((b * b0.conjugate()).imag) > tol * abs(b) * abs(b0):
            idx.append(j)
            break
    return idx


def detect_rational(
    z: complex,
    denom_bound: int,
    basis: list | None = None,
    cfg: PrecisionConfig = DEFAULT_PRECISION,
) -> RationalityVerdict:
    """Look for z in the Q-span of ``basis`` with a common denominator at most
    ``denom_bound``.

    The real and imaginary parts give two real equations, so at most two
    basis elements independent over R are used; the others are given zero
    coefficients.  Each real coefficient is rounded by continued fractions
    and the verdict is positive only when the reconstruction residual is
    below abs_tol times the common denominator.
    """
    if denom_bound < 1:
        raise PreconditionError("denom_bound must be a positive integer")
    basis = [complex(b) for b in (basis or [1.0])]
    z = complex(z)
    idx = _real_subbasis(basis)
    if not idx:
        raise PreconditionError("basis has no nonzero element")
    if len(idx) == 1:
        b = basis[idx[0]]
        x = [(z * b.conjugate()).real / abs(b) ** 2]
    else:
        b0, b1 = basis[idx[0]], basis[idx[1]]
        A = np.array([[b0.real, b1.real], [b0.imag, b1.imag]])
        x = list(np.linalg.solve(A, np.array([z.real, z.imag])))
    fr = [Fraction(float(v)).limit_denominator(denom_bound) for v in x]
    den = 1
    for f in fr:
        den = den * f.denominator // math.gcd(den, f.denominator)
    nums = [0] * len(basis)
    for j, f in zip(idx, fr):
        nums[j] = f.numerator * (den // f.denominator)
    approx = sum(n * b for n, b in zip(nums, basis)) / den
    residual = abs(z - approx)
    ok = den <= denom_bound and residual < cfg.abs_tol * den
    return RationalityVerdict(ok, nums[idx[0]], den, residual, tuple(nums), tuple(basis))


def cyclotomic_basis(n: int, count: int | None = None) -> list:
    """Powers 1, zeta, zeta^2, ... of zeta = e(1/n)."""
    z = e2pi(1.0 / n)
    return [z**j for j in range(count if count is not None else n)]


# ---------------------------------------------------------------------------
# stable pieces of the Lambert summands


def _log1m_exp(z: np.ndarray) -> np.ndarray:
    """log(1 - exp(z)) modulo 2 pi i, safe for large |Re z|."""
    z = np.asarray(z, dtype=complex)
    big = z.real > 0
    zs = np.where(big, -z, z)
    base = np.log1p(-np.exp(zs))
    return np.where(big, z + 1j * np.pi + base, base)


def _log_power(v: np.ndarray, n: int) -> np.ndarray:
    """log(v^n) modulo 2 pi i for real nonzero v and integer n."""
    return n * np.log(np.abs(v)) + np.where((v < 0) & (n % 2 != 0), 1j * np.pi, 0.0)


def _doubling_sum(partial, M0: int, tol: float, M_max: int, what: str):
    """Evaluate ``partial(M)`` for M0, 2 M0, ... until two values agree."""
    M = M0
    prev = partial(M)
    while True:
        if 2 * M > M_max:
            raise TruncationError(f"{what}: tail not certified below truncation {M_max}")
        cur = partial(2 * M)
        diff = abs(cur - prev)
        if diff <= tol * max(1.0, abs(cur)):
            return cur, diff, 2 * M
        prev = cur
        M *= 2


def _ex1_terms(N: int, c: float, k: int, m: np.ndarray) -> np.ndarray:
    eta = e2pi(1.0 / N)
    v = m + c
    lg = _log_power(v, k - 1)
    for l in range(1, N):
        lg = lg - _log1m_exp(TWO_PI_I * (c - v * eta**l))
    return np.exp(lg)


def _ex1_check(N: int, c: float, k: int) -> None:
    if N < 3 or N % 2 == 0:
        raise PreconditionError("N must be an odd integer >= 3")
    if not 0 <= c < 1:
        raise PreconditionError("c must lie in [0, 1)")
    if k % N != 0:
        raise PreconditionError("k must be a multiple of N")


def _ex1_index(M: int, c: float) -> np.ndarray:
    m = np.arange(-M, M + 1, dtype=float)
    return m[np.abs(m + c) > 1e-12]


def lambert_ex1(
    N: int,
    c: float,
    k: int,
    M: int = 40,
    target_tol: float = 1e-13,
    M_max: int = 1 << 14,
    cfg: PrecisionConfig = DEFAULT_PRECISION,
) -> EvalResult:
    """(2 pi i)^{k-1} sum_{m+c != 0} (m+c)^{k-1} / prod_{l<N} (1 - e(c - (m+c) eta^l)),
    eta = e(1/N), summed over |m| <= M with M doubled until stable.

    ``meta['closed_form']`` is -coeff(F_N(u, delta), u^{-k})/N at the fixed
    point delta of R_sigma M_eta.
    """
    _ex1_check(N, c, k)

    def partial(MM):
        return complex(np.sum(_ex1_terms(N, c, k, _ex1_index(MM, c))))

    S, diff, Mu = _doubling_sum(partial, M, target_tol, M_max, "lambert_ex1")
    pref = TWO_PI_I ** (k - 1)
    value = pref * S
    closed = -laurent_coeff_F(example1_point(N, c), k, cfg) / N
    err = abs(pref) * (diff + 1e-15 * max(1.0, abs(S)))
    meta = {"M": Mu, "closed_form": closed, "closed_form_residual": abs(value - closed), "raw_sum": S}
    return EvalResult(value, err, "lambert-series", meta)


def example1_rho_series(N: int, c: float, k: int, M: int = 40, target_tol: float = 1e-13) -> complex:
    """rho^{2 pi/N}(k, delta) for Example 1 data from its explicit simple-pole series:

    -(2 pi i)^k [eta^{-k floor(N/4)} sum_{m+c>0} + eta^{-k floor(3N/4)} sum_{m+c<0}].
    """
    if N < 3 or N % 2 == 0:
        raise PreconditionError("N must be an odd integer >= 3")
    eta = e2pi(1.0 / N)

    def partial(MM):
        m = _ex1_index(MM, c)
        t = _ex1_terms(N, c, k, m)
        pos = complex(np.sum(t[m + c > 0]))
        neg = complex(np.sum(t[m + c < 0]))
        return eta ** (-k * (N // 4)) * pos + eta ** (-k * ((3 * N) // 4)) * neg

    S, _, _ = _doubling_sum(partial, M, target_tol, 1 << 14, "example1_rho_series")
    return -(TWO_PI_I**k) * S


def _ex2_w(N: int) -> tuple:
    eta = e2pi(1.0 / (2 * N))
    return eta, 1.0 / (1.0 - eta)


def _ex2_terms(N: int, k: int, m: np.ndarray) -> np.ndarray:
    eta, w = _ex2_w(N)
    lg = -TWO_PI_I * m * w + _log_power(m, k - 1)
    for l in range(1, N):
        lg = lg - _log1m_exp(-TWO_PI_I * m * eta**l)
    return np.exp(lg)


def lambert_ex2(
    N: int,
    k: int,
    M: int = 40,
    target_tol: float = 1e-13,
    M_max: int = 1 << 14,
    cfg: PrecisionConfig = DEFAULT_PRECISION,
) -> EvalResult:
    """(2 pi i)^{k-1} sum_{m>=1} e(-m w) m^{k-1} / prod_{l<N} (1 - e(-m eta^l)),
    eta = e(1/2N), w = 1/(1 - eta).

    ``meta['closed_form']`` is -coeff(F_N(u, delta), u^{-k})/(2N).
    """
    if N < 2:
        raise PreconditionError("N must be at least 2")
    if (k - N) % (2 * N) != 0:
        raise PreconditionError("k must be congruent to N modulo 2N")

    def partial(MM):
        return complex(np.sum(_ex2_terms(N, k, np.arange(1, MM + 1, dtype=float))))

    S, diff, Mu = _doubling_sum(partial, M, target_tol, M_max, "lambert_ex2")
    pref = TWO_PI_I ** (k - 1)
    value = pref * S
    closed = -laurent_coeff_F(example2_point(N), k, cfg) / (2 * N)
    err = abs(pref) * (diff + 1e-15 * max(1.0, abs(S)))
    meta = {"M": Mu, "closed_form": closed, "closed_form_residual": abs(value - closed), "raw_sum": S}
    return EvalResult(value, err, "lambert-series", meta)


def example2_rho_series(N: int, k: int, M: int = 40, target_tol: float = 1e-13) -> complex:
    """rho^{pi/N}(k, delta) for Example 2 data from its explicit series
    -(2 pi i)^k eta^{(N-k) floor(N/2)} sum_{m>=1} e(-m w) m^{k-1}/prod(1 - e(-m eta^l))."""
    eta, _ = _ex2_w(N)

    def partial(MM):
        return complex(np.sum(_ex2_terms(N, k, np.arange(1, MM + 1, dtype=float))))

    S, _, _ = _doubling_sum(partial, M, target_tol, 1 << 14, "example2_rho_series")
    return -(TWO_PI_I**k) * eta ** ((N - k) * (N // 2)) * S


def lambert_ex2_twosided(
    N: int, k: int, M: int = 40, target_tol: float = 1e-13, M_max: int = 1 << 14
) -> EvalResult:
    """sum_{m != 0} m^{k-1} / prod_{l<N} (1 - e(-m eta^{2l})), eta = e(1/2N)."""
    if N < 3 or N % 2 == 0:
        raise PreconditionError("N must be an odd integer >= 3")
    if k % (2 * N) != 0:
        raise PreconditionError("k must be a multiple of 2N")
    eta = e2pi(1.0 / (2 * N))

    def partial(MM):
        m = np.arange(-MM, MM + 1, dtype=float)
        m = m[m != 0]
        lg = _log_power(m, k - 1)
        for l in range(1, N):
            lg = lg - _log1m_exp(-TWO_PI_I * m * eta ** (2 * l))
        return complex(np.sum(np.exp(lg)))

    S, diff, Mu = _doubling_sum(partial, M, target_tol, M_max, "lambert_ex2_twosided")
    return EvalResult(S, diff + 1e-15 * max(1.0, abs(S)), "lambert-series", {"M": Mu})


def example2_chain(
    N: int,
    k: int,
    q: QuadratureConfig = DEFAULT_QUADRATURE,
    cfg: PrecisionConfig = DEFAULT_PRECISION,
) -> ResidualReport:
    """rho^{2 pi/N}(k, 0, (1, eta^2, ..., eta^{2(N-1)}), 0) against
    (-1)^{(N+1)/2} (eta^k - 1) rho^{pi/N}(k, delta), both summed directly.

    The sign is J of T_Lambda with Lambda the odd indices of {1, ..., N},
    so |Lambda| = (N+1)/2.  ``parts`` also carries the comparison with the
    factor (-1)^{(N-1)/2}, which differs by an overall sign.
    """
    if N < 3 or N % 2 == 0:
        raise PreconditionError("N must be an odd integer >= 3")
    eta = e2pi(1.0 / (2 * N))
    p = DomainPoint.make(0.0, [eta ** (2 * l) for l in range(N)], [0.0] * N)
    left = rho(k, p, 2 * math.pi / N, q=q, cfg=cfg)
    right = rho(k, example2_point(N), math.pi / N, q=q, cfg=cfg)
    base = (eta**k - 1) * right.value
    rhs = (-1) ** ((N + 1) // 2) * base
    alt = (-1) ** ((N - 1) // 2) * base
    parts = {
        "rho_2pi_N": left.value,
        "rho_pi_N": right.value,
        "rhs_sign_N_minus_1": alt,
        "residual_sign_N_minus_1": abs(left.value - alt),
        "err_rho_2pi_N": left.abs_error_estimate,
        "err_rho_pi_N": right.abs_error_estimate,
    }
    return _report(left.value, rhs, parts)


# ---------------------------------------------------------------------------
# multiple gamma product


def gamma_point(N: int) -> DomainPoint:
    """gamma = (v, b, 0) with b = (eta^{floor(N/2)+1-N}, ..., eta^{floor(N/2)}), v = Tr(b)/2."""
    eta = e2pi(1.0 / (2 * N))
    b = [eta ** (N // 2 + 1 - N + j) for j in range(N)]
    return DomainPoint.make(sum(b) / 2, b, [0.0] * N)


def gamma_product(
    N: int,
    trunc: int = 60,
    cross_check: bool = False,
    q: QuadratureConfig = DEFAULT_QUADRATURE,
    cfg: PrecisionConfig = DEFAULT_PRECISION,
    h: float = 1e-4,
) -> EvalResult:
    """prod_{n in {0..trunc}^{N-1}} (1 - e(-w) e((1+n_1) eta + ... + (1+n_{N-1}) eta^{N-1}))^{1/2}.

    The square root is exp(1/2 sum log) with principal logs; every factor
    has |e(-w) e(...)| < 1 so no logarithm meets its cut.  With
    ``cross_check`` the value is compared with exp(L'(0, gamma)) from a
    central difference of L_extended.
    """
    if N < 2:
        raise PreconditionError("N must be at least 2")
    if trunc < 0:
        raise PreconditionError("trunc must be nonnegative")
    eta, w = _ex2_w(N)
    etas = np.array([eta**l for l in range(1, N)])
    grids = np.meshgrid(*([np.arange(trunc + 1, dtype=float)] * (N - 1)), indexing="ij")
    nn = np.stack([g.ravel() for g in grids], axis=1) + 1.0
    x = -TWO_PI_I * w + TWO_PI_I * (nn @ etas)
    mags = np.exp(x.real)
    if np.any(mags >= 1):
        raise PreconditionError("a factor reaches the branch cut of the logarithm")
    logsum = complex(np.sum(np.log1p(-np.exp(x))))
    value = cmath.exp(0.5 * logsum)
    # geometric tail: any index beyond trunc
    q0 = math.exp(2 * math.pi * (w.imag - float(np.sum(etas.imag))))
    r = np.exp(-2 * math.pi * etas.imag)
    tail = 0.0
    for l in range(N - 1):
        others = np.prod([1.0 / (1 - r[j]) for j in range(N - 1) if j != l])
        tail += q0 * r[l] ** (trunc + 1) / (1 - r[l]) * others
    # |log(1-x)| <= |x|/(1-|x|) and the half power
    err = abs(value) * (0.5 * tail / (1 - q0) + 1e-15 * max(1.0, abs(logsum)))
    meta = {"trunc": trunc, "factors": int(nn.shape[0]), "max_factor_modulus": float(mags.max()), "tail_bound": tail}
    if cross_check:
        g = gamma_point(N)
        lp = (L_extended(h, g, q, cfg).value - L_extended(-h, g, q, cfg).value) / (2 * h)
        ref = cmath.exp(lp)
        meta.update(
            {
                "L_prime_0": lp,
                "exp_L_prime_0": ref,
                "cross_check_residual": abs(value - ref),
                "other_sign_residual": abs(-value - ref),
                "reciprocal_residual": abs(1 / value - ref),
            }
        )
    return EvalResult(value, err, "gamma-product", meta)


# ---------------------------------------------------------------------------
# Kronecker limit cases


@dataclass
class KroneckerCase:
    case: str
    quantity: str
    J: complex
    parts: dict = field(default_factory=dict)


def _is_one(J: complex, k: int, cfg: PrecisionConfig) -> bool:
    d = abs(J - 1)
    if d <= 64 * 2.220446049250313e-16 * (1 + abs(k)):
        return True
    if d < 10 * cfg.abs_tol:
        raise CaseAmbiguityError(f"|J_g(k) - 1| = {d:.3g} is too small to decide the case")
    return False


def derivative_L(
    s: float,
    p: DomainPoint,
    h: float = 1e-4,
    q: QuadratureConfig = DEFAULT_QUADRATURE,
    cfg: PrecisionConfig = DEFAULT_PRECISION,
) -> complex:
    """Central difference (L(s+h) - L(s-h))/(2h)."""
    return (L_extended(s + h, p, q, cfg).value - L_extended(s - h, p, q, cfg).value) / (2 * h)


def kronecker_limit(
    g: GroupElement,
    p: DomainPoint,
    k: int,
    q: QuadratureConfig = DEFAULT_QUADRATURE,
    cfg: PrecisionConfig = DEFAULT_PRECISION,
    h: float = 1e-4,
) -> EvalResult:
    """The rho-side predicted at a fixed point of g, for integer s = k.

    Returns rho^psi(k) in cases (i), (ii), (iii), (vi), the residue of
    rho^psi at s = k in case (iv) and d/ds rho^psi at s = k in case (v);
    ``meta['quantity']`` says which.
    """
    k = int(k)
    if not is_fixed(g, p, cfg):
        raise NotFixedError(f"point is not fixed by g (residual {fixed_residual(g, p):.3g})")
    if not in_D_tilde_Cstar(p, cfg):
        raise PreconditionError("the fixed point must lie in D~C*")
    N = p.N
    J = j_factor(g, k, p.theta)
    one = _is_one(J, k, cfg)
    log_alpha = complex(math.log(abs(g.alpha)), psi_angle(g))
    parts: dict = {"J": J, "log_alpha": log_alpha}
    err = 0.0
    if k <= 0:
        fac = (-1) ** k / math.factorial(-k)
        if one:
            case, quantity = "i", "rho"
            Lk = special_value(p, -k, cfg)
            parts["L"] = Lk
            value = fac * log_alpha * Lk
        else:
            case, quantity = "ii", "rho"
            d = derivative_L(float(k), p, h, q, cfg)
            parts["L_prime"] = d
            parts["L"] = special_value(p, -k, cfg)
            value = fac * (1 / J - 1) * d
            err = abs(fac * (1 / J - 1)) * h * h
    elif k <= N:
        res = residue_at_integer(p, k, cfg)
        parts["residue_L"] = res
        if one:
            case, quantity = "iii", "rho"
            value = math.factorial(k - 1) * log_alpha * res
        else:
            case, quantity = "iv", "rho_residue"
            value = math.factorial(k - 1) * (1 / J - 1) * res
    else:
        r = L_extended(complex(k), p, q, cfg)
        parts["L"] = r.value
        err = r.abs_error_estimate * math.factorial(k - 1) * 2
        if one:
            case, quantity = "v", "rho_derivative"
            value = math.factorial(k - 1) * log_alpha * r.value
        else:
            case, quantity = "vi", "rho"
            value = math.factorial(k - 1) * (1 / J - 1) * r.value
    meta = {"case": case, "quantity": quantity, **parts}
    return EvalResult(complex(value), err + 1e-15 * abs(value), "kronecker", meta)
