"""Parameter triples (w, a, theta) and the domain predicates built on the
cone C = {Re z > 0} u i*R_+.

Indices are 0-based throughout the Python API; the CLI converts to and
from the 1-based notation of its JSON documents.

The hierarchy of sets, from smallest to largest:

* ``T+``:  Re w > 0 and Re a_l > 0 for all l (the series converges).
* ``D_N``: pi(p) in the open half plane and no a_l on the punctured
  imaginary axis (the Hankel integral is defined directly).
* ``D~_N``: pi(p) in C (principal values via a one-sided rotation limit).
* ``D~C*``: pi(M_alpha p) in C for every alpha in C* (where the
  transformation formula holds for every alpha).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, DomainError, PreconditionError
from .numeric import DEFAULT_PRECISION, PrecisionConfig, principal_arg

Subset = frozenset


@dataclass(frozen=True)
class DomainPoint:
    """The argument (w, a, theta) of the zeta function after s."""

    w: complex
    a: tuple
    theta: tuple

    def __post_init__(self):
        a = tuple(complex(x) for x in self.a)
        th = tuple(float(x) for x in self.theta)
        if len(a) == 0:
            raise DimensionError("a DomainPoint needs N >= 1 coordinates")
        if len(a) != len(th):
            raise DimensionError(f"a has {len(a)} coordinates but theta has {len(th)}")
        object.__setattr__(self, "w", complex(self.w))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "theta", th)

    @classmethod
    def make(cls, w, a, theta=None) -> "DomainPoint":
        a = tuple(np.atleast_1d(np.asarray(a, dtype=complex)).tolist())
        if theta is None:
            theta = (0.0,) * len(a)
        return cls(w, a, tuple(np.atleast_1d(np.asarray(theta, dtype=float)).tolist()))

    @property
    def N(self) -> int:
        return len(self.a)

    @property
    def a_array(self) -> np.ndarray:
        return np.array(self.a, dtype=complex)

    @property
    def theta_array(self) -> np.ndarray:
        return np.array(self.theta, dtype=float)

    def replace(self, **kw) -> "DomainPoint":
        return replace(self, **kw)

    def rotated(self, alpha: complex) -> "DomainPoint":
        """M_alpha p = (alpha*w, alpha*a, theta)."""
        alpha = complex(alpha)
        return DomainPoint(alpha * self.w, tuple(alpha * x for x in self.a), self.theta)

    def to_dict(self) -> dict:
        return {"w": self.w, "a": list(self.a), "theta": list(self.theta)}

    def max_abs_diff(self, other: "DomainPoint") -> float:
        if other.N != self.N:
            raise DimensionError("dimension mismatch")
        d = [abs(self.w - other.w)]
        d += [abs(x - y) for x, y in zip(self.a, other.a)]
        d += [abs(x - y) for x, y in zip(self.theta, other.theta)]
        return max(d)


def polytope_point(a: Sequence[complex], x: Sequence[float], theta: Sequence[float] | None = None) -> DomainPoint:
    """The point (x.a, a, theta); for x in [0,1]^N off the vertices it lies in D~C*."""
    a = np.asarray(a, dtype=complex)
    x = np.asarray(x, dtype=float)
    if a.shape != x.shape:
        raise DimensionError("a and x must have the same length")
    return DomainPoint.make(complex(np.dot(x, a)), a, theta)


@dataclass(frozen=True)
class MembershipReport:
    in_D_N: bool
    in_T_plus: bool
    in_D_tilde: bool
    in_D_tilde_Cstar: bool
    component_Lambda: frozenset | None
    pi_value: complex

    def to_dict(self) -> dict:
        return {
            "in_D_N": self.in_D_N,
            "in_T_plus": self.in_T_plus,
            "in_D_tilde": self.in_D_tilde,
            "in_D_tilde_Cstar": self.in_D_tilde_Cstar,
            "component_Lambda": None if self.component_Lambda is None else sorted(self.component_Lambda),
            "pi_value": self.pi_value,
        }


# ---------------------------------------------------------------------------
# elementary predicates


def in_cone(z: complex, cfg: PrecisionConfig = DEFAULT_PRECISION) -> bool:
    """Membership in C: Re z > 0, or z on the positive imaginary axis."""
    z = complex(z)
    tol = cfg.abs_tol
    if z.real > tol:
        return True
    return abs(z.real) <= tol and z.imag > tol


def in_open_half_plane(z: complex, cfg: PrecisionConfig = DEFAULT_PRECISION) -> bool:
    return complex(z).real > cfg.abs_tol


def is_zero(z: complex, cfg: PrecisionConfig = DEFAULT_PRECISION) -> bool:
    return abs(complex(z)) <= cfg.abs_tol


def is_punctured_imaginary(z: complex, cfg: PrecisionConfig = DEFAULT_PRECISION) -> bool:
    z = complex(z)
    return abs(z.real) <= cfg.abs_tol and abs(z.imag) > cfg.abs_tol


def near_integer(x: float, cfg: PrecisionConfig = DEFAULT_PRECISION) -> bool:
    return abs(x - round(x)) <= cfg.abs_tol


def _check_subset(Lambda: Iterable[int], N: int) -> frozenset:
    L = frozenset(int(i) for i in Lambda)
    for i in L:
        if not 0 <= i < N:
            raise DimensionError(f"index {i} outside range(0, {N})")
    return L


def trace(v: Sequence, Lambda: Iterable[int]):
    """Sum of the coordinates of ``v`` indexed by ``Lambda`` (0 on the empty set)."""
    L = _check_subset(Lambda, len(v))
    total = 0
    for i in sorted(L):
        total = total + v[i]
    return total


def in_good_domain(p: DomainPoint, cfg: PrecisionConfig = DEFAULT_PRECISION) -> bool:
    """Every vanishing a_l comes with a non-integer theta_l."""
    return all(not (is_zero(x, cfg) and near_integer(t, cfg)) for x, t in zip(p.a, p.theta))


def require_good_domain(p: DomainPoint, cfg: PrecisionConfig = DEFAULT_PRECISION) -> None:
    if not in_good_domain(p, cfg):
        raise DomainError("a coordinate with a_l = 0 needs theta_l outside the integers")


def negative_cone_indices(a: Sequence[complex], cfg: PrecisionConfig = DEFAULT_PRECISION) -> frozenset:
    """The set of l with a_l in -C."""
    return frozenset(i for i, x in enumerate(a) if in_cone(-complex(x), cfg))


def zero_indices(a: Sequence[complex], cfg: PrecisionConfig = DEFAULT_PRECISION) -> frozenset:
    return frozenset(i for i, x in enumerate(a) if is_zero(x, cfg))


def pi_projection(p: DomainPoint, cfg: PrecisionConfig = DEFAULT_PRECISION) -> complex:
    """pi(p) = w minus the sum of the a_l lying in -C."""
    return p.w - trace(p.a, negative_cone_indices(p.a, cfg))


def _increasing_complement(N: int, Lambda: frozenset) -> list:
    return [i for i in range(N) if i not in Lambda]


def pi_lambda(p: DomainPoint, Lambda: Iterable[int], cfg: PrecisionConfig = DEFAULT_PRECISION):
    """Projection that removes the coordinates in ``Lambda``.

    Returns ``p`` itself for the empty set, the complex number pi(p) when
    ``Lambda`` is everything, and otherwise the point
    (w - Tr(a, Lambda & a^{-1}[-C]), a without Lambda, theta without Lambda).
    """
    L = _check_subset(Lambda, p.N)
    if not L:
        return p
    if len(L) == p.N:
        return pi_projection(p, cfg)
    neg = negative_cone_indices(p.a, cfg)
    keep = _increasing_complement(p.N, L)
    return DomainPoint(
        p.w - trace(p.a, L & neg),
        tuple(p.a[i] for i in keep),
        tuple(p.theta[i] for i in keep),
    )


def increasing_bijection(N: int, Lambda: Iterable[int]) -> list:
    """phi: range(N - |Lambda|) -> range(N) minus Lambda, strictly increasing."""
    L = _check_subset(Lambda, N)
    return _increasing_complement(N, L)


# ---------------------------------------------------------------------------
# membership in the domain hierarchy


def in_T_plus(p: DomainPoint, cfg: PrecisionConfig = DEFAULT_PRECISION) -> bool:
    return in_open_half_plane(p.w, cfg) and all(in_open_half_plane(x, cfg) for x in p.a)


def in_D_N(p: DomainPoint, cfg: PrecisionConfig = DEFAULT_PRECISION) -> bool:
    if any(is_punctured_imaginary(x, cfg) for x in p.a):
        return False
    return in_open_half_plane(pi_projection(p, cfg), cfg)


def in_D_tilde(p: DomainPoint, cfg: PrecisionConfig = DEFAULT_PRECISION) -> bool:
    return in_cone(pi_projection(p, cfg), cfg)


def _wrap(t: float) -> float:
    """Reduce an angle to (-pi, pi]."""
    t = math.fmod(t + math.pi, 2 * math.pi)
    if t <= 0:
        t += 2 * math.pi
    return t - math.pi


def critical_angles(a: Sequence[complex], cfg: PrecisionConfig = DEFAULT_PRECISION) -> list:
    """Angles t in (-pi, pi] where some e^{it} a_l lies on the imaginary axis."""
    out = set()
    for x in a:
        if is_zero(x, cfg):
            continue
        th = principal_arg(complex(x))
        out.add(_wrap(math.pi / 2 - th))
        out.add(_wrap(-math.pi / 2 - th))
    return sorted(out)


def _pi_rotated(p: DomainPoint, t: float, cfg: PrecisionConfig) -> complex:
    return pi_projection(p.rotated(complex(math.cos(t), math.sin(t))), cfg)


def _arc_constant(p: DomainPoint, t: float, cfg: PrecisionConfig) -> complex:
    """v(t) = e^{-it} pi(M_{e^{it}} p), constant between critical angles."""
    e = complex(math.cos(t), math.sin(t))
    neg = negative_cone_indices([e * x for x in p.a], cfg)
    return p.w - trace(p.a, neg)


def cone_sweep(
    p: DomainPoint,
    t0: float,
    t1: float,
    include_start: bool = True,
    include_end: bool = True,
    cfg: PrecisionConfig = DEFAULT_PRECISION,
) -> bool:
    """Whether pi(M_{e^{it}} p) lies in C for every t between t0 and t1.

    The interval is decomposed at the critical angles.  Each critical angle
    (and each included endpoint) is checked directly; on every open arc in
    between, v(t) is constant and the arc {e^{it} v} is compared with the
    half-open window of arguments (-pi/2, pi/2].
    """
    if t1 < t0:
        raise PreconditionError("cone_sweep expects t0 <= t1")
    length = t1 - t0
    if length > 2 * math.pi + 1e-12:
        raise PreconditionError("cone_sweep covers at most a full turn")
    cuts = []
    for c in critical_angles(p.a, cfg):
        for shift in (-2 * math.pi, 0.0, 2 * math.pi):
            x = c + shift
            if t0 < x < t1:
                cuts.append(x)
    cuts = sorted(set(cuts))
    checks = list(cuts)
    if include_start:
        checks.append(t0)
    if include_end:
        checks.append(t1)
    for t in checks:
        if not in_cone(_pi_rotated(p, t, cfg), cfg):
            return False
    nodes = [t0] + cuts + [t1]
    for lo, hi in zip(nodes[:-1], nodes[1:]):
        if hi - lo <= 0:
            continue
        v = _arc_constant(p, 0.5 * (lo + hi), cfg)
        if abs(v) <= cfg.abs_tol:
            return False
        if hi - lo > math.pi + 1e-12:
            return False
        ang_tol = cfg.abs_tol / abs(v)
        left = -math.pi / 2 - principal_arg(v)
        d = math.fmod(lo - left, 2 * math.pi)
        if d < 0:
            d += 2 * math.pi
        if d > 2 * math.pi - ang_tol:
            d = 0.0
        if d + (hi - lo) > math.pi + ang_tol:
            return False
    return True


def in_D_tilde_Cstar(p: DomainPoint, cfg: PrecisionConfig = DEFAULT_PRECISION) -> bool:
    """pi(M_alpha p) in C for every nonzero alpha (only arg(alpha) matters)."""
    return cone_sweep(p, -math.pi, math.pi, True, True, cfg)


def in_D_psi(p: DomainPoint, psi: float, tilde: bool = False, cfg: PrecisionConfig = DEFAULT_PRECISION) -> bool:
    """Membership in the strict set D_N(psi), or with ``tilde`` in D~_N(psi).

    The strict set asks for p and M_{e^{i psi}} p in D_N and pi(M_{e^{it}} p)
    in C for t strictly between 0 and psi; the tilde set asks only for the
    cone condition, on the closed range.
    """
    psi = float(psi)
    if not -math.pi - 1e-15 <= psi <= math.pi + 1e-15:
        raise PreconditionError("psi must lie in [-pi, pi]")
    lo, hi = (0.0, psi) if psi >= 0 else (psi, 0.0)
    if tilde:
        if psi == 0:
            return in_D_tilde(p, cfg)
        return cone_sweep(p, lo, hi, True, True, cfg)
    if not in_D_N(p, cfg):
        return False
    if psi == 0:
        return True
    if not in_D_N(p.rotated(complex(math.cos(psi), math.sin(psi))), cfg):
        return False
    return cone_sweep(p, lo, hi, False, False, cfg)


def component(p: DomainPoint, cfg: PrecisionConfig = DEFAULT_PRECISION) -> frozenset | None:
    """Lambda with p in the component where a^{-1}[-C] = Lambda, if defined."""
    if not in_D_N(p, cfg):
        return None
    if any(is_zero(x, cfg) or is_punctured_imaginary(x, cfg) for x in p.a):
        return None
    return negative_cone_indices(p.a, cfg)


def classify(p: DomainPoint, cfg: PrecisionConfig = DEFAULT_PRECISION) -> MembershipReport:
    require_good_domain(p, cfg)
    return MembershipReport(
        in_D_N=in_D_N(p, cfg),
        in_T_plus=in_T_plus(p, cfg),
        in_D_tilde=in_D_tilde(p, cfg),
        in_D_tilde_Cstar=in_D_tilde_Cstar(p, cfg),
        component_Lambda=component(p, cfg),
        pi_value=pi_projection(p, cfg),
    )


def sample_pol_point(
    N: int,
    rng: np.random.Generator,
    avoid: Sequence[float] = (),
    margin: float = 0.2,
    cfg: PrecisionConfig = DEFAULT_PRECISION,
    max_tries: int = 10000,
) -> DomainPoint:
    """A random point (x.a, a, theta) of the polytope set inside D~C*.

    a_l has modulus in [0.6, 1.8], x_l lies in [0.15, 0.85] and theta_l in
    [0, 1).  Every critical angle of a stays at least ``margin`` from 0 and
    from each angle in ``avoid`` (mod 2 pi), so neither p nor the rotated
    points M_{e^{i t}} p, t in ``avoid``, have an a_l near the imaginary axis.
    """
    targets = [0.0] + [float(t) for t in avoid]
    for _ in range(max_tries):
        a = rng.uniform(0.6, 1.8, N) * np.exp(1j * rng.uniform(-math.pi, math.pi, N))
        x = rng.uniform(0.15, 0.85, N)
        th = rng.uniform(0.0, 1.0, N)
        if any(abs(_wrap(c - t)) < margin for c in critical_angles(list(a), cfg) for t in targets):
            continue
        p = DomainPoint.make(complex(np.dot(x, a)), a, th)
        if in_D_tilde_Cstar(p, cfg):
            return p
    raise PreconditionError("could not sample a point with the requested margin")
