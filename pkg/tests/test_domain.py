import itertools
import math

import numpy as np
import pytest

from bzeta.domain import (
    DomainPoint,
    classify,
    in_cone,
    in_D_N,
    in_D_psi,
    in_D_tilde,
    in_D_tilde_Cstar,
    in_T_plus,
    increasing_bijection,
    pi_lambda,
    pi_projection,
    polytope_point,
    sample_pol_point,
    trace,
)
from bzeta.errors import DimensionError, PreconditionError
from bzeta.group import GroupElement, act


def test_in_cone_examples():
    assert in_cone(1)
    assert in_cone(2j)
    assert not in_cone(-1)
    assert not in_cone(-2j)
    assert not in_cone(0)


def test_trace_examples():
    assert trace([1, 2, 3], {0, 2}) == 4
    assert trace([1, 2, 3], set()) == 0
    assert trace([1j, -1j], {0, 1}) == 0
    with pytest.raises(DimensionError):
        trace([1, 2], {2})


def test_trace_set_identities():
    rng = np.random.default_rng(3)
    subsets = [set(c) for r in range(5) for c in itertools.combinations(range(4), r)]
    for _ in range(20):
        v = [int(x) for x in rng.integers(-50, 50, 4)]
        for A in subsets:
            for B in subsets:
                assert trace(v, A - B) == trace(v, A) - trace(v, A & B)
                assert trace(v, A | B) == trace(v, A) + trace(v, B) - trace(v, A & B)


def test_pi_projection_examples():
    assert pi_projection(DomainPoint.make(5, [1, 2])) == 5
    assert pi_projection(DomainPoint.make(0, [-1, 1])) == 1
    assert pi_projection(DomainPoint.make(1, [-2j])) == 1 + 2j


def test_pi_lambda_examples():
    p = DomainPoint.make(0, [-1, 3], [0.2, 0.7])
    assert pi_lambda(p, set()) is p
    assert pi_lambda(p, {0, 1}) == pi_projection(p)
    q = pi_lambda(p, {0})
    assert q.w == 1 and q.a == (3,) and q.theta == (0.7,)


def test_pi_lambda_composition():
    rng = np.random.default_rng(4)
    N = 4
    for _ in range(30):
        a = rng.normal(size=N) + 1j * rng.normal(size=N)
        p = DomainPoint.make(complex(*rng.normal(size=2)), a, rng.uniform(0, 1, N))
        for r in range(1, N):
            for Lam in itertools.combinations(range(N), r):
                Lam = set(Lam)
                phi = increasing_bijection(N, Lam)
                inner = pi_lambda(p, Lam)
                for r2 in range(0, N - r + 1):
                    for lam in itertools.combinations(range(N - r), r2):
                        lhs = pi_lambda(inner, set(lam))
                        rhs = pi_lambda(p, {phi[i] for i in lam} | Lam)
                        if isinstance(lhs, DomainPoint):
                            assert lhs.max_abs_diff(rhs) < 1e-14
                        else:
                            assert abs(lhs - rhs) < 1e-14


def test_classify_examples():
    r = classify(DomainPoint.make(1, [1, 1], [0, 0]))
    assert r.in_T_plus and r.in_D_N and r.component_Lambda == frozenset()
    r = classify(DomainPoint.make(0.5, [-1, 2], [0, 0]))
    assert r.pi_value == 1.5 and r.in_D_N and r.component_Lambda == frozenset({0})
    assert not r.in_T_plus
    r = classify(polytope_point([1, 1j], [0.4, 0.6], [0, 0.3]))
    assert r.in_D_tilde_Cstar


def test_imaginary_coordinates_leave_D_N():
    p = DomainPoint.make(1 + 0.5j, [1j])
    assert not in_D_N(p)
    assert in_D_tilde(p)


def test_hierarchy_on_random_points():
    rng = np.random.default_rng(5)
    count = 0
    for _ in range(10_000):
        N = int(rng.integers(1, 4))
        a = rng.normal(size=N) + 1j * rng.normal(size=N)
        p = DomainPoint.make(complex(*rng.normal(size=2)), a, rng.uniform(0, 1, N))
        if in_T_plus(p):
            count += 1
            assert in_D_N(p) and in_D_tilde(p)
        if in_D_N(p):
            assert in_D_tilde(p)
    assert count > 100


def test_polytope_points_lie_in_D_tilde_Cstar():
    rng = np.random.default_rng(6)
    for _ in range(200):
        N = int(rng.integers(1, 4))
        a = rng.uniform(0.3, 2, N) * np.exp(1j * rng.uniform(-math.pi, math.pi, N))
        x = rng.uniform(0.01, 0.99, N)
        assert in_D_tilde_Cstar(polytope_point(a, x, rng.uniform(0, 1, N)))


def test_vertex_of_the_cube_is_not_enough():
    # x = (1, 0): w = a_1 and rotating a_1 onto -C empties the cone condition
    assert not in_D_tilde_Cstar(polytope_point([1, 1j], [1, 0]))


def test_pi_invariance_under_finite_group():
    rng = np.random.default_rng(7)
    N = 3
    for _ in range(40):
        a = rng.normal(size=N) + 1j * rng.normal(size=N)
        p = DomainPoint.make(complex(*rng.normal(size=2)), a, rng.uniform(0, 1, N))
        for r in range(N + 1):
            for Lam in itertools.combinations(range(N), r):
                for sigma in itertools.permutations(range(N)):
                    g = GroupElement(N, frozenset(Lam), sigma, 1.0)
                    assert abs(pi_projection(act(g, p)) - pi_projection(p)) < 1e-12


def test_in_D_psi_examples():
    rng = np.random.default_rng(8)
    for _ in range(30):
        N = int(rng.integers(1, 4))
        a = rng.normal(size=N) + 1j * rng.normal(size=N)
        p = DomainPoint.make(complex(*rng.normal(size=2)), a, rng.uniform(0, 1, N))
        assert in_D_psi(p, 0.0) == in_D_N(p)
    q = sample_pol_point(2, rng)
    for psi in np.linspace(-math.pi, math.pi, 13):
        assert in_D_psi(q, psi, tilde=True)
    p = DomainPoint.make(1, [1], [0])
    # the sweep to i keeps pi in the cone; the end point has a on the imaginary axis
    assert in_D_psi(p, math.pi / 2, tilde=True)
    assert not in_D_psi(p, math.pi / 2)
    assert in_D_psi(p, math.pi / 3)
    with pytest.raises(PreconditionError):
        in_D_psi(p, 4.0)


def test_sample_pol_point_respects_margin():
    rng = np.random.default_rng(9)
    for _ in range(20):
        p = sample_pol_point(2, rng, avoid=[math.pi / 6])
        assert in_D_tilde_Cstar(p)
        assert in_D_N(p)
        assert all(0 <= t < 1 for t in p.theta)


def test_domain_point_validation():
    with pytest.raises(DimensionError):
        DomainPoint.make(1, [1, 2], [0])
    p = DomainPoint.make(1, [1, 2])
    assert p.theta == (0.0, 0.0)
    assert p.to_dict()["a"] == [1, 2]
