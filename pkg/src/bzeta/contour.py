"""Hankel-contour evaluation of the continued zeta function, its principal
value on the boundary of the domain, pole enumeration and the residue
series rho.

For p in D_N the continuation is

    L(s, p) = 1/(Gamma(s)(e(s)-1)) * int_{C(eps)} F_N(u, p) u^{s-1} du,

with C(eps) running in from +infinity along Arg u = 0, once around |u| = eps
with Arg increasing from 0 to 2*pi, and back out along Arg u = 2*pi.  The
two passes along the ray combine into (e(s)-1) int_eps^inf.  For the
circle we expand F_N = sum_k c_k u^k on |u| = eps (FFT of trapezoid
samples) and integrate term by term:

    int_{|u|=eps} u^{k+s-1} du = eps^{k+s} (e(s)-1)/(k+s),

so that

    L(s, p) = [int_eps^inf F u^{s-1} du + sum_k c_k eps^{k+s}/(k+s)] / Gamma(s).

The factor e(s)-1 cancels exactly; integer s needs no special care except
s = -k, where 1/(Gamma(s)(k+s)) has the limit (-1)^k k!, and s in
{1, ..., N}, where the function has its poles.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .domain import (
    DomainPoint,
    in_D_N,
    in_D_psi,
    in_D_tilde,
    in_D_tilde_Cstar,
    is_punctured_imaginary,
    is_zero,
    near_integer,
    negative_cone_indices,
    pi_projection,
    require_good_domain,
    trace,
    zero_indices,
)
from .errors import ConvergenceError, DomainError, PreconditionError
from .evaluator import f_values, laurent_coeff_F, twist
from .group import GroupElement, act, compose, j_factor, psi_angle
from .numeric import (
    DEFAULT_PRECISION,
    PrecisionConfig,
    TruncatedLaurentSeries as TLS,
    cpow,
    e2pi,
    principal_arg,
    rgamma,
)
from .result import EvalResult


@dataclass(frozen=True)
class QuadratureConfig:
    """Discretisation of the Hankel contour.

    ``cutoff_T`` of ``None`` lets the ray length be chosen from the decay
    of the integrand; ``epsilon`` of ``None`` uses the automatic circle
    radius.
    """

    circle_nodes: int = 128
    line_panels: int = 24
    cutoff_T: float | None = None
    target_tol: float = 1e-13
    gl_order: int = 16
    max_panels: int = 40000
    epsilon: float | None = None
    rho_R_max: float = 4000.0

    def __post_init__(self):
        if self.circle_nodes < 64:
            raise PreconditionError("circle_nodes must be at least 64")
        if self.target_tol <= 0:
            raise PreconditionError("target_tol must be positive")
        if self.cutoff_T is not None and self.epsilon is not None and self.cutoff_T <= self.epsilon:
            raise PreconditionError("cutoff_T must exceed epsilon")

    def to_dict(self) -> dict:
        return {
            "circle_nodes": self.circle_nodes,
            "line_panels": self.line_panels,
            "cutoff_T": self.cutoff_T,
            "target_tol": self.target_tol,
            "gl_order": self.gl_order,
            "max_panels": self.max_panels,
            "epsilon": self.epsilon,
            "rho_R_max": self.rho_R_max,
        }


DEFAULT_QUADRATURE = QuadratureConfig()


@dataclass(frozen=True)
class Pole:
    """A nonzero pole u0 of F_N with the (l, m) pairs that place a pole there."""

    u0: complex
    order: int
    contributors: tuple

    def to_dict(self) -> dict:
        return {
            "u0": self.u0,
            "order": self.order,
            "contributors": [[l + 1, m] for l, m in self.contributors],
        }


# ---------------------------------------------------------------------------
# helpers


def _check_not_pole_of_L(s: complex, N: int) -> None:
    for k in range(1, N + 1):
        if abs(s - k) < 1e-9:
            raise PreconditionError(
                f"s = {k} is a simple pole of the continued function "
                f"(simple poles at s = {', '.join(str(j) for j in range(1, N + 1))}); "
                "use residue_at_integer instead"
            )


def _nonpositive_integer(s: complex) -> int | None:
    if s.imag == 0 and s.real <= 0 and s.real == math.floor(s.real):
        return int(-s.real)
    return None


def _min_nonzero_distance(theta: float, cfg: PrecisionConfig) -> float:
    if near_integer(theta, cfg):
        return 1.0
    f = theta - math.floor(theta)
    return min(f, 1.0 - f)


def epsilon_select(p: DomainPoint, cfg: PrecisionConfig = DEFAULT_PRECISION) -> float:
    """Half the smallest modulus of a nonzero pole of F_N (1 without poles)."""
    require_good_domain(p, cfg)
    mods = [
        2 * math.pi * _min_nonzero_distance(t, cfg) / abs(x)
        for x, t in zip(p.a, p.theta)
        if not is_zero(x, cfg)
    ]
    return 0.5 * min(mods) if mods else 1.0


def hankel_epsilon(p: DomainPoint, cfg: PrecisionConfig = DEFAULT_PRECISION) -> float:
    """Circle radius used by hankel_L: epsilon_select, shrunk to 1/|w| when
    |w| is large so that exp(-u w) stays of moderate size on the circle."""
    eps = epsilon_select(p, cfg)
    if abs(p.w) > 0:
        eps = min(eps, 1.0 / abs(p.w))
    return eps


@lru_cache(maxsize=8)
def _gauss_legendre(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _flip(p: DomainPoint, Lambda: frozenset) -> DomainPoint:
    """T_Lambda p."""
    a = list(p.a)
    th = list(p.theta)
    w = p.w - trace(a, Lambda)
    for l in Lambda:
        a[l] = -a[l]
        th[l] = -th[l]
    return DomainPoint(w, tuple(a), tuple(th))


# ---------------------------------------------------------------------------
# ray and circle pieces


def _integrand(u: np.ndarray, p: DomainPoint, s: complex, cfg: PrecisionConfig) -> np.ndarray:
    return f_values(u, p, cfg) * np.exp((s - 1) * np.log(u))


def _ray_cutoff(p: DomainPoint, s: complex, eps: float, tol: float, cfg: PrecisionConfig) -> tuple:
    kappa = pi_projection(p, cfg).real
    T = eps + max(4.0, (36.0 + max(s.real, 0.0) * 2) / kappa)
    for _ in range(60):
        v = abs(_integrand(np.array([T, 1.1 * T], dtype=complex), p, s, cfg))
        tail = max(v[0], v[1]) * 2.0 / kappa
        if tail < tol / 10 and v[1] <= v[0]:
            return T, tail
        T *= 1.5
    raise ConvergenceError("could not find a ray cutoff where the integrand has decayed")


def ray_integral(
    p: DomainPoint, s: complex, eps: float, q: QuadratureConfig, cfg: PrecisionConfig, tol: float
) -> tuple:
    """int_eps^T F_N(u) u^{s-1} du by adaptive panel Gauss-Legendre.

    Returns (value, error estimate, meta).
    """
    if q.cutoff_T is not None:
        T = float(q.cutoff_T)
        if T <= eps:
            raise PreconditionError("cutoff_T must exceed epsilon")
        kappa = pi_projection(p, cfg).real
        tail = float(abs(_integrand(np.array([T + 0j]), p, s, cfg)[0])) * 2.0 / kappa
    else:
        T, tail = _ray_cutoff(p, s, eps, tol, cfg)
    # geometric panels from eps up to 1, then uniform ones
    edges = [eps]
    while edges[-1] * 2 < min(1.0, T):
        edges.append(edges[-1] * 2)
    rest = np.linspace(edges[-1], T, max(q.line_panels, int(math.ceil(T - edges[-1])) + 1) + 1)
    edges = np.concatenate([np.array(edges[:-1]), rest])
    lo = edges[:-1]
    hi = edges[1:]
    x, wts = _gauss_legendre(q.gl_order)
    length = T - eps
    total = 0j
    err = 0.0
    npanels = 0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        # whole panel and its two halves
        nodes_w = mid[:, None] + half[:, None] * x[None, :]
        nodes_l = (lo + 0.5 * half)[:, None] + 0.5 * half[:, None] * x[None, :]
        nodes_r = (mid + 0.5 * half)[:, None] + 0.5 * half[:, None] * x[None, :]
        allnodes = np.concatenate([nodes_w, nodes_l, nodes_r], axis=1).astype(complex)
        vals = _integrand(allnodes.ravel(), p, s, cfg).reshape(allnodes.shape)
        n = len(x)
        iw = half * (vals[:, :n] @ wts)
        ih = 0.5 * half * (vals[:, n : 2 * n] @ wts + vals[:, 2 * n :] @ wts)
        diff = np.abs(iw - ih)
        # roundoff floor: a panel cannot resolve below a few ulps of int |f|
        floor = 64 * np.finfo(float).eps * half * (np.abs(vals[:, :n]) @ wts)
        allowed = np.maximum(tol * (hi - lo) / length, floor) + 1e-300
        ok = diff <= allowed
        total += complex(np.sum(ih[ok]))
        err += float(np.sum(np.maximum(diff[ok], floor[ok])))
        npanels += int(np.count_nonzero(ok))
        bad = ~ok
        if not np.any(bad):
            break
        if npanels + 2 * int(np.count_nonzero(bad)) > q.max_panels:
            raise ConvergenceError("ray quadrature exceeded the panel budget")
        blo, bhi = lo[bad], hi[bad]
        bmid = 0.5 * (blo + bhi)
        lo = np.concatenate([blo, bmid])
        hi = np.concatenate([bmid, bhi])
        order = np.argsort(lo)
        lo, hi = lo[order], hi[order]
    else:
        raise ConvergenceError("ray quadrature did not converge")
    return total, err + tail, {"T": T, "panels": npanels, "tail_bound": tail}


def circle_coefficients(p: DomainPoint, eps: float, M: int, cfg: PrecisionConfig) -> np.ndarray:
    """g_k = c_k eps^k for k in range(-M//2 + 1, M//2 + 1), from M trapezoid nodes.

    Returns an array indexed so that entry j holds k = j - (M//2 - 1).
    """
    j = np.arange(M)
    u = eps * np.exp(2j * np.pi * j / M)
    g = np.fft.fft(f_values(u, p, cfg)) / M
    ks = np.arange(-M // 2 + 1, M // 2 + 1)
    return ks, g[ks % M]


def _circle_sum(ks: np.ndarray, g: np.ndarray, s: complex, eps: float, N: int) -> tuple:
    """eps^s sum_k g_k/(k+s) over k >= -N, the sum of term magnitudes and
    the rounding noise of the sum (FFT noise amplified by 1/|k+s|)."""
    sel = ks >= -N
    kk = ks[sel]
    gg = g[sel]
    inv = 1 / np.abs(kk + s)
    terms = gg / (kk + s)
    scale = abs(cmath.exp(s * math.log(eps)))
    noise = 8 * np.finfo(float).eps * float(np.sum(np.abs(g))) * float(np.sum(inv))
    return (
        cmath.exp(s * math.log(eps)) * complex(np.sum(terms)),
        scale * float(np.sum(np.abs(terms))),
        scale * noise,
    )


def hankel_L(
    s: complex,
    p: DomainPoint,
    q: QuadratureConfig = DEFAULT_QUADRATURE,
    cfg: PrecisionConfig = DEFAULT_PRECISION,
    epsilon: float | None = None,
) -> EvalResult:
    """The Hankel-contour continuation at a point of D_N."""
    s = complex(s)
    require_good_domain(p, cfg)
    _check_not_pole_of_L(s, p.N)
    if not in_D_N(p, cfg):
        raise DomainError("hankel_L needs p in D_N: pi(p) in the open half plane and no imaginary a_l")
    eps = epsilon if epsilon is not None else (q.epsilon if q.epsilon is not None else hankel_epsilon(p, cfg))
    if not 0 < eps <= epsilon_select(p, cfg) * (1 + 1e-12):
        raise PreconditionError("epsilon must lie in (0, epsilon_select(p)]")
    # circle: Laurent coefficients by FFT, doubled until stable
    M = q.circle_nodes
    k0 = _nonpositive_integer(s)
    prev = None
    for _ in range(5):
        ks, g = circle_coefficients(p, eps, M, cfg)
        if k0 is not None:
            idx = int(np.nonzero(ks == k0)[0][0])
            cur = (-1) ** k0 * math.factorial(k0) * complex(g[idx]) * eps ** (-k0)
            mag = abs(cur)
            noise = 0.0
        else:
            cur, mag, noise = _circle_sum(ks, g, s, eps, p.N)
        if prev is not None and abs(cur - prev) <= max(q.target_tol * max(1.0, mag), 2 * noise):
            break
        prev = cur
        M *= 2
    else:
        raise ConvergenceError("circle quadrature did not converge under node doubling")
    circle_err = max(abs(cur - prev), noise)
    meta = {"epsilon": eps, "circle_nodes": M, "branch": "Arg 0 on the ray, 0..2pi on the circle"}
    if k0 is not None:
        # 1/Gamma vanishes and kills the ray; the circle term carries the limit
        err = circle_err + 1e-15 * mag
        meta.update({"ray": "not needed at s = -k"})
        return EvalResult(cur, err, "hankel", meta)
    tol = q.target_tol * max(1.0, mag)
    ray, ray_err, ray_meta = ray_integral(p, s, eps, q, cfg, tol)
    meta.update(ray_meta)
    rg = rgamma(s)
    value = rg * (ray + cur)
    err = abs(rg) * (ray_err + circle_err + 4e-16 * (mag + abs(ray)) * 10)
    return EvalResult(value, err, "hankel", meta)


# ---------------------------------------------------------------------------
# principal value on D~_N


def rotation_limit_angle(p: DomainPoint, cfg: PrecisionConfig = DEFAULT_PRECISION) -> float:
    """omega_0 > 0 such that M_{e^{i w}} p, -omega_0 <= w < 0, stays in one
    component of D_N: min(pi/8, half the angular gap to the imaginary axis)."""
    gap = math.pi / 4
    for x in p.a:
        if is_zero(x, cfg) or is_punctured_imaginary(x, cfg):
            continue
        d = abs(abs(principal_arg(x)) - math.pi / 2)
        gap = min(gap, d)
    pi_v = pi_projection(p, cfg)
    if pi_v.real > cfg.abs_tol:
        gap = min(gap, principal_arg(pi_v) + math.pi / 2)
    return min(math.pi / 8, 0.5 * gap)


def L_extended(
    s: complex,
    p: DomainPoint,
    q: QuadratureConfig = DEFAULT_QUADRATURE,
    cfg: PrecisionConfig = DEFAULT_PRECISION,
    levels: int = 3,
) -> EvalResult:
    """The continued function on D~_N.

    On D_N the point is first moved by T_Lambda, Lambda = a^{-1}[-C], which
    lands in Re w, Re a_l > 0 up to vanishing a_l; the value picks up the
    factor (-1)^{|Lambda|} e(-Tr(theta, Lambda)).

    Elsewhere in D~_N the principal value lim_{omega -> 0-} L(s, M_{e^{i omega}} p)
    is needed.  On the ladder omega_j = -omega_0/2^j no pole of F_N crosses
    the ray, so L(s, M_{e^{i omega}} p) = e^{-i omega s} K with K the limit;
    each rung gives K exactly and the rungs must agree.
    """
    s = complex(s)
    require_good_domain(p, cfg)
    _check_not_pole_of_L(s, p.N)
    if not in_D_tilde(p, cfg):
        raise DomainError("L_extended needs pi(p) in the cone C")
    if in_D_N(p, cfg):
        Lam = negative_cone_indices(p.a, cfg) - zero_indices(p.a, cfg)
        pref = (-1) ** len(Lam) * e2pi(-trace(list(p.theta), Lam))
        r = hankel_L(s, _flip(p, Lam), q, cfg)
        r.meta["reduction_Lambda"] = sorted(i + 1 for i in Lam)
        return EvalResult(pref * r.value, r.abs_error_estimate, r.method, r.meta)
    om0 = rotation_limit_angle(p, cfg)
    vals = []
    for j in range(levels):
        om = -om0 / 2**j
        x = p.rotated(complex(math.cos(om), math.sin(om)))
        if not in_D_N(x, cfg):
            raise DomainError("rotated point left D_N; the rotation ladder is not admissible")
        r = L_extended(s, x, q, cfg)
        vals.append((cmath.exp(1j * om * s) * r.value, r.abs_error_estimate * abs(cmath.exp(1j * om * s)), om))
    base = vals[0][0]
    spread = max(abs(v[0] - base) for v in vals)
    budget = max(v[1] for v in vals) * 10 + q.target_tol * max(1.0, abs(base)) * 100
    if spread > budget:
        raise ConvergenceError(
            f"rotated values do not stabilise: spread {spread:.3g} exceeds {budget:.3g}"
        )
    meta = {"omega_ladder": [v[2] for v in vals], "ladder_spread": spread, "principal_value": True}
    return EvalResult(base, vals[0][1] + spread, "hankel", meta)


# ---------------------------------------------------------------------------
# poles and residues


def _in_sector(t: float, psi: float, tol: float) -> bool:
    if t < -math.pi + tol:
        t = math.pi
    if psi > 0:
        if abs(t) <= tol:
            return True
        return 0 <= t < psi - tol
    if abs(t - psi) <= tol and psi > -math.pi:
        return True
    return psi <= t < -tol


def enumerate_poles(
    p: DomainPoint, psi: float, R: float, cfg: PrecisionConfig = DEFAULT_PRECISION
) -> list:
    """Nonzero poles of F_N with modulus below R and argument in [0, psi)
    (psi > 0) or [psi, 0) (psi < 0), merged when they coincide."""
    require_good_domain(p, cfg)
    if psi == 0:
        raise PreconditionError("psi must be nonzero")
    raw = []
    for l, (x, th) in enumerate(zip(p.a, p.theta)):
        if is_zero(x, cfg):
            continue
        X = R * abs(x) / (2 * math.pi)
        for m in range(math.ceil(-X - th) - 1, math.floor(X - th) + 2):
            v = m + th
            if abs(v) <= cfg.abs_tol:
                continue
            u = 2j * math.pi * v / x
            if abs(u) >= R:
                continue
            if _in_sector(principal_arg(u), psi, cfg.abs_tol):
                raw.append((abs(u), u, l, m))
    raw.sort(key=lambda r: r[0])
    groups: list = []
    for mod, u, l, m in raw:
        placed = False
        for g in reversed(groups):
            if mod - g["mod"] > cfg.abs_tol * (1 + mod):
                break
            if abs(u - g["u0"]) <= cfg.abs_tol * (1 + mod):
                g["contrib"].append((l, m))
                placed = True
                break
        if not placed:
            groups.append({"mod": mod, "u0": u, "contrib": [(l, m)]})
    poles = [Pole(g["u0"], len(g["contrib"]), tuple(sorted(g["contrib"]))) for g in groups]
    poles.sort(key=lambda P: (abs(P.u0), _sector_arg(P.u0)))
    return poles


def _sector_arg(u: complex) -> float:
    t = principal_arg(u)
    return t


def _check_pole(p: DomainPoint, pole: Pole, cfg: PrecisionConfig) -> None:
    if pole.order != len(pole.contributors) or pole.order < 1:
        raise PreconditionError("inconsistent pole descriptor: order differs from contributors")
    for l, m in pole.contributors:
        if not 0 <= l < p.N or is_zero(p.a[l], cfg):
            raise PreconditionError("inconsistent pole descriptor: bad coordinate")
        u = 2j * math.pi * (m + p.theta[l]) / p.a[l]
        if abs(u - pole.u0) > cfg.abs_tol * (1 + abs(pole.u0)):
            raise PreconditionError("inconsistent pole descriptor: location mismatch")


def residue_at(p: DomainPoint, s: complex, pole: Pole, cfg: PrecisionConfig = DEFAULT_PRECISION) -> complex:
    """Res_{u = u0} F_N(u, p) u^{s-1}, with u^{s-1} on the principal branch."""
    _check_pole(p, pole, cfg)
    s = complex(s)
    u0 = pole.u0
    contrib = {l for l, _ in pole.contributors}
    if pole.order == 1:
        (l,) = contrib
        others = [j for j in range(p.N) if j != l]
        if others:
            rest = DomainPoint(p.w, tuple(p.a[j] for j in others), tuple(p.theta[j] for j in others))
            G = complex(f_values(np.array([u0]), rest, cfg)[0])
        else:
            G = cmath.exp(-u0 * p.w)
        return cpow(u0, s - 1) * G / p.a[l]
    return _residue_series(p, s, u0, contrib, pole.order, cfg)


def _residue_series(p, s, u0, contrib, r, cfg) -> complex:
    K = r + 2
    w_eff = p.w
    series = []
    const = 1.0 + 0j
    for j, (x, th) in enumerate(zip(p.a, p.theta)):
        xi = twist(th, cfg)
        if is_zero(x, cfg):
            const /= 1.0 - xi
        elif j in contrib:
            # 1/(1 - exp(-t a)) = (1/t) * [ (1 - exp(-t a))/t ]^{-1}
            qs = TLS.from_function(lambda n: -((-x) ** (n + 1)) / math.factorial(n + 1), K)
            series.append(qs.reciprocal().shift(-1))
        elif (-u0 * x).real > 0:
            # -xi^{-1} e^{u a}/(1 - xi^{-1} e^{u a}); e^{u a} joins the exponential
            w_eff = w_eff - x
            c = cmath.exp(u0 * x) / xi
            den = 1.0 - TLS.exp_linear(x, K).scale(c)
            series.append(den.reciprocal().scale(-1.0 / xi))
        else:
            c = xi * cmath.exp(-u0 * x)
            den = 1.0 - TLS.exp_linear(-x, K).scale(c)
            series.append(den.reciprocal())
    const *= cmath.exp(-u0 * w_eff)
    series.append(TLS.exp_linear(-w_eff, K))
    series.append(TLS.binomial(s - 1, 1.0 / u0, K))
    prod = series[0]
    for t in series[1:]:
        prod = prod * t
    return const * cpow(u0, s - 1) * prod.coeff(-1)


def rho(
    s: complex,
    p: DomainPoint,
    psi: float,
    R_max: float | None = None,
    q: QuadratureConfig = DEFAULT_QUADRATURE,
    cfg: PrecisionConfig = DEFAULT_PRECISION,
) -> EvalResult:
    """sgn(-psi) 2 pi i lim_R sum_{u0 in P_psi, |u0| < R} Res(F_N u^{s-1}).

    Poles are added in order of modulus, each same-modulus group as one
    term; R is doubled until the partial sums agree to target_tol.
    """
    s = complex(s)
    psi = float(psi)
    if psi == 0:
        return EvalResult(0j, 0.0, "residue-series", {"poles": 0})
    if not s.real < 1:
        raise PreconditionError("the residue series is summed directly only for Re(s) < 1")
    if not in_D_psi(p, psi, tilde=True, cfg=cfg):
        raise DomainError("rho needs p in D~_N(psi)")
    R_max = q.rho_R_max if R_max is None else float(R_max)
    amax = max((abs(x) for x in p.a if not is_zero(x, cfg)), default=1.0)
    amin = min((abs(x) for x in p.a if not is_zero(x, cfg)), default=1.0)
    R = min(R_max, 16 * math.pi / amin + 2 * math.pi / amax)
    seen = 0
    partial = 0j
    sums = []
    cache: dict = {}
    npoles = 0
    while True:
        poles = enumerate_poles(p, psi, R, cfg) if R > 0 else []
        # poles are sorted by modulus; residues of poles already summed are reused
        total = 0j
        grp = 0j
        last_mod = None
        for P in poles:
            key = (round(P.u0.real, 9), round(P.u0.imag, 9))
            if key not in cache:
                cache[key] = residue_at(p, s, P, cfg)
            m = abs(P.u0)
            if last_mod is not None and m - last_mod > cfg.abs_tol * (1 + m):
                total += grp
                grp = 0j
            grp += cache[key]
            last_mod = m
        total += grp
        if not cmath.isfinite(total):
            raise ConvergenceError("residue series diverged (non-finite partial sum)")
        npoles = len(poles)
        sums.append((R, total))
        if len(sums) >= 2:
            diff = abs(sums[-1][1] - sums[-2][1])
            if diff <= q.target_tol * 10 * max(1.0, abs(total)):
                break
        if R >= R_max:
            diff = abs(sums[-1][1] - sums[-2][1]) if len(sums) >= 2 else float("inf")
            raise ConvergenceError(
                f"residue series tail not certified at R_max = {R_max:g} (last change {diff:.3g})"
            )
        R = min(2 * R, R_max)
    factor = (-1.0 if psi > 0 else 1.0) * 2j * math.pi
    value = factor * total
    err = 2 * math.pi * (diff + 1e-15 * max(1.0, abs(total)))
    return EvalResult(value, err, "residue-series", {"poles": npoles, "R": R, "psi": psi})


# ---------------------------------------------------------------------------
# verification of the transformation identities


@dataclass
class ResidualReport:
    lhs: complex
    rhs: complex
    abs_residual: float
    rel_residual: float
    parts: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "abs_residual": self.abs_residual,
            "rel_residual": self.rel_residual,
            "parts": self.parts,
        }


def _report(lhs: complex, rhs: complex, parts: dict) -> ResidualReport:
    r = abs(lhs - rhs)
    return ResidualReport(lhs, rhs, r, r / max(abs(lhs), abs(rhs), 1e-300), parts)


def verify_transform(
    g: GroupElement,
    p: DomainPoint,
    s: complex,
    q: QuadratureConfig = DEFAULT_QUADRATURE,
    cfg: PrecisionConfig = DEFAULT_PRECISION,
) -> ResidualReport:
    """Compare L(s, g p) with J_g(s, theta) [L(s, p) + rho^psi(s, p)/Gamma(s)]."""
    s = complex(s)
    if not in_D_tilde_Cstar(p, cfg):
        raise DomainError("the transformation formula needs p in D~C*")
    gp = act(g, p)
    left = L_extended(s, gp, q, cfg)
    base = L_extended(s, p, q, cfg)
    psi = psi_angle(g)
    rh = rho(s, p, psi, q=q, cfg=cfg)
    J = j_factor(g, s, p.theta)
    rg = rgamma(s)
    rhs = J * (base.value + rh.value * rg)
    parts = {
        "L_gp": left.value,
        "L_p": base.value,
        "rho": rh.value,
        "J": J,
        "psi": psi,
        "err_L_gp": left.abs_error_estimate,
        "err_L_p": base.abs_error_estimate,
        "err_rho": rh.abs_error_estimate,
        "poles": rh.meta.get("poles", 0),
    }
    return _report(left.value, rhs, parts)


def rho_relation_check(
    g: GroupElement,
    h: GroupElement,
    p: DomainPoint,
    k: int,
    q: QuadratureConfig = DEFAULT_QUADRATURE,
    cfg: PrecisionConfig = DEFAULT_PRECISION,
) -> ResidualReport:
    """rho^{psi_g}(k, h p) against
    J_h(k, theta)[rho^{psi_gh}(k, p) - rho^{psi_h}(k, p)
                  + i (psi_g + psi_h - psi_gh) coeff(F_N(u, p), u^{-k})].

    The last term is the limit s -> k of
    (1 - e^{-i s (psi_g + psi_h - psi_gh)}) Gamma(s) L(s, p); it is nonzero
    only when the angles wrap.  ``parts['rhs_without_2pi_i']`` carries the
    variant with (psi_g + psi_h - psi_gh)/(2 pi) in place of i (...).
    """
    if k > 0:
        raise PreconditionError("the relation is checked by direct summation, which needs k <= 0")
    gh = compose(g, h)
    pg, ph, pgh = psi_angle(g), psi_angle(h), psi_angle(gh)
    lhs = rho(k, act(h, p), pg, q=q, cfg=cfg).value
    r_gh = rho(k, p, pgh, q=q, cfg=cfg).value
    r_h = rho(k, p, ph, q=q, cfg=cfg).value
    c = laurent_coeff_F(p, k, cfg)
    wrap = (pg + ph - pgh) / (2 * math.pi)
    J = j_factor(h, k, p.theta)
    rhs = J * (r_gh - r_h + 2j * math.pi * wrap * c)
    alt = J * (r_gh - r_h + wrap * c)
    parts = {"rho_gh": r_gh, "rho_h": r_h, "coeff": c, "wrap": wrap, "J_h": J, "rhs_without_2pi_i": alt}
    return _report(lhs, rhs, parts)
