"""The group G_N of sign flips T_Lambda, permutations R_sigma and scalings
M_alpha, stored in the canonical form g = T_Lambda R_sigma M_alpha.

A permutation is a tuple ``sigma`` with ``sigma[i]`` the image of ``i``
(0-based).  Applying g means applying M_alpha first, then R_sigma, then
T_Lambda:

    M_alpha(w, a, th)  = (alpha w, alpha a, th)
    R_sigma(w, a, th)  = (w, a r(sigma), th r(sigma)),  (a r(sigma))_l = a_{sigma^{-1}(l)}
    T_Lambda(w, a, th) = (w - Tr(a, Lambda), a d(Lambda), th d(Lambda))

where d(Lambda) negates the coordinates in Lambda.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .domain import DomainPoint, is_zero, near_integer, trace
from .errors import DimensionError, PreconditionError
from .numeric import DEFAULT_PRECISION, PrecisionConfig, e2pi, principal_arg


def _check_perm(sigma: Sequence[int]) -> tuple:
    s = tuple(int(i) for i in sigma)
    if sorted(s) != list(range(len(s))):
        raise PreconditionError(f"{list(sigma)} is not a permutation of range({len(s)})")
    return s


def perm_compose(s1: tuple, s2: tuple) -> tuple:
    """(s1 s2)(i) = s1(s2(i))."""
    return tuple(s1[j] for j in s2)


def perm_inverse(s: tuple) -> tuple:
    inv = [0] * len(s)
    for i, j in enumerate(s):
        inv[j] = i
    return tuple(inv)


def cycle_perm(N: int) -> tuple:
    """The N-cycle l -> l+1 (mod N), written (1 2 ... N) in 1-based notation."""
    return tuple((i + 1) % N for i in range(N))


def perm_cycles(s: tuple) -> list:
    """Cycle decomposition; each cycle is listed as c0 -> c1 -> ... with s(c_j) = c_{j+1}."""
    seen = set()
    out = []
    for start in range(len(s)):
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        j = s[start]
        while j != start:
            cyc.append(j)
            seen.add(j)
            j = s[j]
        out.append(cyc)
    return out


@dataclass(frozen=True)
class GroupElement:
    """g = T_Lambda R_sigma M_alpha acting on N-dimensional triples."""

    N: int
    Lambda: frozenset = frozenset()
    sigma: tuple = None  # type: ignore[assignment]
    alpha: complex = 1.0

    def __post_init__(self):
        N = int(self.N)
        if N < 1:
            raise DimensionError("N must be positive")
        sigma = tuple(range(N)) if self.sigma is None else _check_perm(self.sigma)
        if len(sigma) != N:
            raise DimensionError("permutation length differs from N")
        L = frozenset(int(i) for i in self.Lambda)
        if any(not 0 <= i < N for i in L):
            raise DimensionError("Lambda must be a subset of range(N)")
        alpha = complex(self.alpha)
        if alpha == 0:
            raise PreconditionError("alpha must be nonzero")
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "Lambda", L)
        object.__setattr__(self, "alpha", alpha)

    # named constructors -------------------------------------------------
    @classmethod
    def identity(cls, N: int) -> "GroupElement":
        return cls(N)

    @classmethod
    def T(cls, N: int, Lambda: Iterable[int]) -> "GroupElement":
        return cls(N, frozenset(Lambda))

    @classmethod
    def R(cls, sigma: Sequence[int]) -> "GroupElement":
        return cls(len(sigma), frozenset(), tuple(sigma))

    @classmethod
    def M(cls, N: int, alpha: complex) -> "GroupElement":
        return cls(N, frozenset(), None, alpha)

    # algebra ------------------------------------------------------------
    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return compose(self, other)

    def is_identity(self, tol: float = 0.0) -> bool:
        return not self.Lambda and self.sigma == tuple(range(self.N)) and abs(self.alpha - 1) <= tol

    def equals(self, other: "GroupElement", tol: float = 0.0) -> bool:
        return (
            self.N == other.N
            and self.Lambda == other.Lambda
            and self.sigma == other.sigma
            and abs(self.alpha - other.alpha) <= tol
        )

    @property
    def psi(self) -> float:
        return psi_angle(self)

    def matrix(self) -> np.ndarray:
        """A = r(sigma) d(Lambda) for row vectors: (v A)_l = +-v_{sigma^{-1}(l)}."""
        A = np.zeros((self.N, self.N))
        for i in range(self.N):
            l = self.sigma[i]
            A[i, l] = -1.0 if l in self.Lambda else 1.0
        return A

    def to_dict(self) -> dict:
        """1-based JSON form: Lambda as a sorted list, sigma in image notation."""
        return {
            "N": self.N,
            "Lambda": sorted(i + 1 for i in self.Lambda),
            "sigma": [i + 1 for i in self.sigma],
            "alpha": self.alpha,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GroupElement":
        sigma = d.get("sigma")
        N = int(d.get("N", len(sigma) if sigma else 0))
        return cls(
            N,
            frozenset(int(i) - 1 for i in d.get("Lambda", [])),
            None if sigma is None else tuple(int(i) - 1 for i in sigma),
            d.get("alpha", 1.0),
        )


def compose(g1: GroupElement, g2: GroupElement) -> GroupElement:
    """g1 g2 = T_{L1 ^ s1(L2)} R_{s1 s2} M_{a1 a2}."""
    if g1.N != g2.N:
        raise DimensionError("cannot compose elements of different dimension")
    image = frozenset(g1.sigma[i] for i in g2.Lambda)
    return GroupElement(
        g1.N,
        g1.Lambda ^ image,
        perm_compose(g1.sigma, g2.sigma),
        g1.alpha * g2.alpha,
    )


def inverse(g: GroupElement) -> GroupElement:
    """T_{s^{-1}(L)} R_{s^{-1}} M_{1/alpha}."""
    sinv = perm_inverse(g.sigma)
    return GroupElement(g.N, frozenset(sinv[i] for i in g.Lambda), sinv, 1.0 / g.alpha)


def act(g: GroupElement, p: DomainPoint) -> DomainPoint:
    if g.N != p.N:
        raise DimensionError("group element and point have different dimensions")
    sinv = perm_inverse(g.sigma)
    a = [g.alpha * p.a[sinv[l]] for l in range(g.N)]
    th = [p.theta[sinv[l]] for l in range(g.N)]
    w = g.alpha * p.w - trace(a, g.Lambda)
    for l in g.Lambda:
        a[l] = -a[l]
        th[l] = -th[l]
    return DomainPoint(w, tuple(a), tuple(th))


def j_factor(g: GroupElement, s: complex, theta: Sequence[float]) -> complex:
    """J_g(s, theta) = (-1)^{|Lambda|} e(Tr(theta, sigma^{-1}[Lambda])) alpha^{-s}.

    alpha^{-s} uses the principal branch.  For integer ``s`` the power is
    formed by repeated multiplication, so exact roots of unity stay exact
    to rounding.
    """
    if len(theta) != g.N:
        raise DimensionError("theta has the wrong length")
    tr = 0.0
    for i in range(g.N):
        if g.sigma[i] in g.Lambda:
            tr += theta[i]
    sign = -1.0 if len(g.Lambda) % 2 else 1.0
    s = complex(s)
    if s.imag == 0 and s.real == math.floor(s.real) and abs(s.real) <= 64:
        k = int(s.real)
        apow = g.alpha ** (-k)
    else:
        apow = cmath.exp(-s * complex(math.log(abs(g.alpha)), principal_arg(g.alpha)))
    return sign * e2pi(tr) * apow


def psi_angle(g: GroupElement) -> float:
    """Principal argument of alpha, in (-pi, pi]."""
    return principal_arg(g.alpha)


def is_fixed(g: GroupElement, p: DomainPoint, cfg: PrecisionConfig = DEFAULT_PRECISION) -> bool:
    return fixed_residual(g, p) <= cfg.abs_tol


def fixed_residual(g: GroupElement, p: DomainPoint) -> float:
    """max |g(p) - p| over all coordinates."""
    return act(g, p).max_abs_diff(p)


def all_elements(N: int, alphas: Sequence[complex] = (1.0,)) -> list:
    """Every T_Lambda R_sigma M_alpha with alpha from ``alphas``."""
    out = []
    subsets = [frozenset(c) for r in range(N + 1) for c in itertools.combinations(range(N), r)]
    for L in subsets:
        for s in itertools.permutations(range(N)):
            for al in alphas:
                out.append(GroupElement(N, L, s, al))
    return out


# ---------------------------------------------------------------------------
# fixed points


@dataclass
class FixedPointSpace:
    """Fixed triples of g: w by ``w_rule``, a in span(a_basis), theta in span(theta_basis).

    ``case_tag`` is ``"empty"`` when no fixed triple satisfies the
    requirement that vanishing a_l come with non-integer theta_l.
    """

    case_tag: str
    a_basis: list = field(default_factory=list)
    theta_basis: list = field(default_factory=list)
    w_rule: str = "free"
    g: GroupElement | None = None

    def w_for(self, a: Sequence[complex]) -> complex | None:
        if self.w_rule == "half-trace":
            return 0.5 * complex(np.sum(np.asarray(a, dtype=complex)))
        return None

    def contains(self, p: DomainPoint, cfg: PrecisionConfig = DEFAULT_PRECISION) -> bool:
        """Whether p's a and theta lie in the spans (and w obeys the rule)."""

        def in_span(v, basis):
            v = np.asarray(v, dtype=complex)
            if not basis:
                return bool(np.max(np.abs(v)) <= cfg.abs_tol)
            B = np.array(basis, dtype=complex).T
            c, *_ = np.linalg.lstsq(B, v, rcond=None)
            return bool(np.max(np.abs(B @ c - v)) <= cfg.abs_tol * max(1.0, np.max(np.abs(v))))

        ok = in_span(p.a, self.a_basis) and in_span(p.theta, self.theta_basis)
        if self.w_rule == "half-trace":
            ok = ok and abs(p.w - self.w_for(p.a)) <= cfg.abs_tol
        return ok

    def sample(self, rng: np.random.Generator) -> DomainPoint:
        """A random fixed triple valid in the good domain."""
        if self.case_tag == "empty" or self.g is None:
            raise PreconditionError("the fixed-point space has no admissible points")
        N = self.g.N
        a = np.zeros(N, dtype=complex)
        for b in self.a_basis:
            a += complex(rng.normal(), rng.normal()) * np.asarray(b)
        th = np.zeros(N)
        for b in self.theta_basis:
            th += rng.uniform(0.1, 0.4) * np.asarray(b, dtype=float)
        # vanishing a_l need non-integer theta_l; scale away from integers
        w = self.w_for(a)
        if w is None:
            w = complex(rng.normal(), rng.normal())
        return DomainPoint(w, tuple(a), tuple(th))

    def to_dict(self) -> dict:
        return {
            "case_tag": self.case_tag,
            "a_basis": [list(map(complex, b)) for b in self.a_basis],
            "theta_basis": [list(map(float, b)) for b in self.theta_basis],
            "w_rule": self.w_rule,
        }


def eigenbasis(g: GroupElement, lam: complex, tol: float = 1e-12) -> list:
    """Basis of {v : v A = lam v} for the signed permutation matrix A of g.

    On a cycle c0 -> c1 -> ... -> c_{L-1} of sigma the equation reads
    lam v_{c_{j+1}} = eps_{c_{j+1}} v_{c_j}, where eps_l = -1 for l in Lambda.
    A cycle contributes one eigenvector exactly when lam^L equals the
    product of its signs.
    """
    lam = complex(lam)
    out = []
    for cyc in perm_cycles(g.sigma):
        L = len(cyc)
        eps = [(-1.0 if l in g.Lambda else 1.0) for l in cyc]
        prod = float(np.prod(eps))
        if abs(lam**L - prod) > tol:
            continue
        v = np.zeros(g.N, dtype=complex)
        v[cyc[0]] = 1.0
        for j in range(L - 1):
            v[cyc[j + 1]] = eps[j + 1] * v[cyc[j]] / lam
        out.append(v)
    return out


def _restrict_trace_zero(basis: list, Lambda: frozenset, tol: float) -> list:
    f = [complex(sum(v[i] for i in Lambda)) for v in basis]
    if all(abs(x) <= tol for x in f):
        return basis
    piv = max(range(len(basis)), key=lambda i: abs(f[i]))
    return [v - (f[i] / f[piv]) * basis[piv] for i, v in enumerate(basis) if i != piv]


def fixed_point_space(g: GroupElement, cfg: PrecisionConfig = DEFAULT_PRECISION) -> FixedPointSpace:
    """Fixed triples of g, computed from the cycle structure of sigma.

    alpha = 1: w is free, a in E_1[A] with Tr(a, Lambda) = 0, theta in E_1[A].
    alpha != 1: w = Tr(a)/2, a in E_{1/alpha}[A], theta in E_1[A].
    """
    tol = 1e-12
    th_basis = [np.real(v) for v in eigenbasis(g, 1.0, tol)]
    if abs(g.alpha - 1) <= tol:
        a_basis = _restrict_trace_zero(eigenbasis(g, 1.0, tol), g.Lambda, tol)
        tag, rule = "alpha-equals-one", "free"
    else:
        a_basis = eigenbasis(g, 1.0 / g.alpha, 1e-9)
        tag, rule = "alpha-not-one", "half-trace"
    # coordinates where every admissible a vanishes need theta_l off the integers,
    # which requires some theta basis vector to be nonzero there
    a_support = {i for v in a_basis for i in range(g.N) if abs(v[i]) > tol}
    th_support = {i for v in th_basis for i in range(g.N) if abs(v[i]) > tol}
    if not set(range(g.N)) - a_support <= th_support:
        tag = "empty"
    return FixedPointSpace(tag, a_basis, th_basis, rule, g)


# ---------------------------------------------------------------------------
# the two worked constructions


def example1_element(N: int) -> GroupElement:
    """R_sigma M_eta with sigma the N-cycle and eta = e(1/N), N odd."""
    if N < 3 or N % 2 == 0:
        raise PreconditionError("the rotation example needs odd N >= 3")
    return GroupElement(N, frozenset(), cycle_perm(N), e2pi(1.0 / N))


def example1_point(N: int, c: float) -> DomainPoint:
    """(0, (eta, eta^2, ..., eta^{N-1}, 1), (c, ..., c)), fixed by example1_element."""
    if N < 3 or N % 2 == 0:
        raise PreconditionError("the rotation example needs odd N >= 3")
    if not 0 <= c < 1:
        raise PreconditionError("c must lie in [0, 1)")
    a = tuple(e2pi(((l + 1) % N) / N) for l in range(N))
    return DomainPoint(0.0, a, (float(c),) * N)


def example2_element(N: int) -> GroupElement:
    """T_{1} R_sigma M_eta with eta = e(1/2N)."""
    if N < 2:
        raise PreconditionError("the flip-rotation example needs N >= 2")
    return GroupElement(N, frozenset({0}), cycle_perm(N), e2pi(1.0 / (2 * N)))


def example2_point(N: int) -> DomainPoint:
    """((1 - eta)^{-1}, (1, eta, ..., eta^{N-1}), 0), fixed by example2_element."""
    if N < 2:
        raise PreconditionError("the flip-rotation example needs N >= 2")
    eta = e2pi(1.0 / (2 * N))
    a = tuple(e2pi(l / (2 * N)) for l in range(N))
    return DomainPoint(1.0 / (1.0 - eta), a, (0.0,) * N)
