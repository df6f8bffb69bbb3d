import cmath
import math

import mpmath as mp
import numpy as np
import pytest
from conftest import as_complex

from bzeta.contour import epsilon_select
from bzeta.domain import DomainPoint
from bzeta.errors import ConvergenceError, DomainError, PoleError, PreconditionError, TruncationError
from bzeta.evaluator import (
    bernoulli_gen,
    coeff_structured,
    f_test,
    laurent_coeff_F,
    residue_at_integer,
    special_value,
    zeta_series,
)
from bzeta.group import GroupElement, act, example1_point, example2_point
from bzeta.domain import trace
from bzeta.numeric import e2pi


def _random_T_plus(N, rng, theta=True):
    a = rng.uniform(0.5, 2.0, N) * np.exp(1j * rng.uniform(-1.2, 1.2, N))
    w = rng.uniform(0.4, 2.0) * cmath.exp(1j * rng.uniform(-1.2, 1.2))
    th = rng.uniform(0, 1, N) if theta else np.zeros(N)
    return DomainPoint.make(w, a, th)


def test_f_test_examples():
    p = DomainPoint.make(0, [1], [0])
    assert abs(f_test(1, p) - 1 / (1 - math.exp(-1))) < 1e-15
    assert abs(f_test(1, p) - 1.5819767068693265) < 1e-15
    with pytest.raises(PoleError):
        f_test(1j * math.pi, DomainPoint.make(0, [2], [0]))


def test_f_test_against_mpmath():
    rng = np.random.default_rng(20)
    for _ in range(20):
        p = _random_T_plus(3, rng)
        u = complex(*rng.normal(size=2))
        ref = mp.exp(-u * p.w)
        for x, t in zip(p.a, p.theta):
            ref /= 1 - mp.expjpi(2 * t) * mp.exp(-u * x)
        assert abs(f_test(u, p) - complex(ref)) < 1e-13 * abs(complex(ref))


def test_f_test_large_exponentials_do_not_overflow():
    p = DomainPoint.make(0.2, [1, 1], [0.3, 0.6])
    v = f_test(-100.0, p)
    ref = mp.exp(20) / ((1 - mp.expjpi(0.6) * mp.exp(100)) * (1 - mp.expjpi(1.2) * mp.exp(100)))
    assert abs(v - complex(ref)) < 1e-12 * abs(complex(ref))


def test_zeta_series_examples():
    p = DomainPoint.make(1, [1], [0])
    assert abs(zeta_series(2, p).value - math.pi**2 / 6) < 1e-3
    r = zeta_series(4, p)
    assert abs(r.value - math.pi**4 / 90) < 1e-10
    alt = zeta_series(2, DomainPoint.make(1, [1], [0.5]))
    assert abs(alt.value - math.pi**2 / 12) < 1e-6


def test_zeta_series_error_is_honest():
    rng = np.random.default_rng(21)
    for i in range(30):
        N = 1 + i % 3
        p = _random_T_plus(N, rng)
        s = N + 1.5 + rng.uniform(0, 2) + 1j * rng.uniform(-1, 1)
        M = {1: 400, 2: 80, 3: 30}[N]
        a = zeta_series(s, p, M)
        b = zeta_series(s, p, 2 * M)
        assert abs(a.value - b.value) <= a.abs_error_estimate


def test_zeta_series_matches_oracles(oracle_values):
    for row in oracle_values["lerch"]:
        s = as_complex(row["s"])
        if s.real <= 1:
            continue
        v = zeta_series(s, DomainPoint.make(row["w"], [1], [row["theta"]]), 20000)
        assert abs(v.value - as_complex(row["value"])) <= max(v.abs_error_estimate, 1e-12)


def test_zeta_series_preconditions():
    p = DomainPoint.make(1, [1, 1])
    with pytest.raises(PreconditionError):
        zeta_series(2, p)
    with pytest.raises(DomainError):
        zeta_series(3, DomainPoint.make(1, [-1, 1]))
    with pytest.raises(ConvergenceError):
        zeta_series(1.5, DomainPoint.make(1, [1]), 5, require_certified=True)


def test_bernoulli_examples():
    for z in (0.0, 0.3, 1 + 2j):
        assert abs(bernoulli_gen(1, z, 1) - (z - 0.5)) < 1e-15
        for xi in (2.0, 1j, e2pi(0.3)):
            assert bernoulli_gen(0, z, xi) == 0
            assert abs(bernoulli_gen(1, z, xi) - 1 / (xi - 1)) < 1e-14
    with pytest.raises(TruncationError):
        bernoulli_gen(5, 0.0, 1.0, order=3)


def test_bernoulli_classical_polynomials():
    for n in range(12):
        for z in (0.0, 0.25, 1.7):
            assert abs(bernoulli_gen(n, z, 1) - float(mp.bernpoly(n, z))) < 1e-11 * max(1, abs(float(mp.bernpoly(n, z))))


def test_bernoulli_twisted_against_mpmath():
    xi = e2pi(0.3)
    z = 0.4 + 0.1j
    co = mp.taylor(lambda t: t * mp.exp(z * t) / (xi * mp.exp(t) - 1), 0, 8)
    for n in range(9):
        assert abs(bernoulli_gen(n, z, xi) - complex(co[n] * mp.factorial(n))) < 1e-12


def test_laurent_examples():
    for w in (0.0, 0.7, 2 + 1j):
        p = DomainPoint.make(w, [1], [0])
        assert abs(laurent_coeff_F(p, 1) - 1) < 1e-15
        assert abs(laurent_coeff_F(p, 0) - (0.5 - w)) < 1e-15
        assert laurent_coeff_F(p, 2) == 0
    p = DomainPoint.make(0.8, [0], [0.5])
    assert abs(laurent_coeff_F(p, 0) - 0.5) < 1e-15


def test_laurent_against_mpmath():
    rng = np.random.default_rng(22)
    for _ in range(6):
        p = _random_T_plus(3, rng)
        th = list(p.theta)
        th[0] = 0.0
        th[2] = 0.0
        p = p.replace(theta=tuple(th))
        with mp.workdps(40):
            def G(t):
                out = mp.exp(-t * p.w) * t**2
                for x, tt in zip(p.a, p.theta):
                    out /= 1 - mp.expjpi(2 * tt) * mp.exp(-t * x)
                return out
            co = mp.taylor(G, 0, 8, method="quad", radius=epsilon_select(p) / 2)
        for j in range(8):
            k = 2 - j  # coefficient of u^{j-2}
            ref = complex(co[j])
            assert abs(laurent_coeff_F(p, k) - ref) < 1e-11 * max(1, abs(ref))


def test_special_values_hurwitz():
    for w in (0.3, 1.0, 2.5 + 0.5j):
        p = DomainPoint.make(w, [1], [0])
        assert abs(special_value(p, 0) - (0.5 - w)) < 1e-15
        assert abs(special_value(p, 1) + (w * w - w + 1 / 6) / 2) < 1e-14
        for k in range(2, 8):
            ref = -complex(mp.bernpoly(k + 1, w)) / (k + 1)
            assert abs(special_value(p, k) - ref) < 1e-12 * max(1, abs(ref))


def test_special_value_T_lambda_transformation():
    rng = np.random.default_rng(23)
    for _ in range(20):
        p = _random_T_plus(3, rng)
        L = frozenset(int(i) for i in np.nonzero(rng.integers(0, 2, 3))[0])
        q = act(GroupElement.T(3, L), p)
        fac = (-1) ** len(L) * e2pi(trace(list(p.theta), L))
        for k in range(5):
            lhs, rhs = special_value(q, k), fac * special_value(p, k)
            assert abs(lhs - rhs) < 1e-10 * max(1, abs(rhs))


def test_special_value_requires_cone():
    with pytest.raises(DomainError):
        special_value(DomainPoint.make(-1, [1]), 0)
    with pytest.raises(PreconditionError):
        special_value(DomainPoint.make(1, [1]), -1)


def test_residue_at_integer_examples():
    assert abs(residue_at_integer(DomainPoint.make(0.4, [1], [0]), 1) - 1) < 1e-15
    assert abs(residue_at_integer(DomainPoint.make(0.4, [2], [0]), 1) - 0.5) < 1e-15
    p = DomainPoint.make(1, [1, 2], [0.3, 0.6])
    assert residue_at_integer(p, 1) == 0 and residue_at_integer(p, 2) == 0
    # zeta_2(s, w, (1, 1)) = zeta(s-1, w) + (1-w) zeta(s, w): residues 1 at s=2, 1-w at s=1
    q = DomainPoint.make(0.6, [1, 1], [0, 0])
    assert abs(residue_at_integer(q, 2) - 1) < 1e-14
    assert abs(residue_at_integer(q, 1) - 0.4) < 1e-14
    with pytest.raises(PreconditionError):
        residue_at_integer(q, 3)


def test_coeff_structured_matches_laurent():
    count = 0
    for N in (3, 5):
        for c in (0.0, 1 / 3, 0.5, 0.2):
            for k in (N, N - 1, N - 3, 0, -N, N + 1):
                v = coeff_structured("example-1", N, c, k)
                ref = laurent_coeff_F(example1_point(N, c), k)
                assert abs(v - ref) < 1e-9 * max(1, abs(ref))
                count += 1
    for N in (2, 3, 4):
        for k in (N, N - 2, 0, -N, N + 2):
            v = coeff_structured("example-2", N, None, k)
            ref = laurent_coeff_F(example2_point(N), k)
            assert abs(v - ref) < 1e-9 * max(1, abs(ref))
            count += 1
    assert count >= 20
    assert coeff_structured("example-1", 3, 0.0, 4) == 0


def test_coeff_structured_example1_rational_for_c_zero():
    from fractions import Fraction

    for k in (0, 3, -3, 6):
        v = coeff_structured("example-1", 3, 0.0, k)
        assert abs(v.imag) < 1e-7
        fr = Fraction(v.real).limit_denominator(10**6)
        assert abs(float(fr) - v.real) < 1e-10 * fr.denominator


def test_coeff_structured_errors():
    with pytest.raises(PreconditionError):
        coeff_structured("example-1", 4, 0.0, 1)
    with pytest.raises(PreconditionError):
        coeff_structured("example-3", 3, 0.0, 1)
