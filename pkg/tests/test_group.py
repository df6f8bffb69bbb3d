import cmath
import itertools
import math

import numpy as np
import pytest

from bzeta.domain import DomainPoint, in_good_domain
from bzeta.errors import DimensionError, PreconditionError
from bzeta.evaluator import f_values, twist
from bzeta.group import (
    GroupElement,
    act,
    all_elements,
    compose,
    example1_element,
    example1_point,
    example2_element,
    example2_point,
    fixed_point_space,
    inverse,
    is_fixed,
    j_factor,
    psi_angle,
)
from bzeta.numeric import e2pi
from bzeta.domain import trace

ALPHAS = (1.0, 1j, e2pi(1 / 3))


def _random_point(N, rng):
    a = rng.normal(size=N) + 1j * rng.normal(size=N)
    return DomainPoint.make(complex(*rng.normal(size=2)), a, rng.uniform(0, 1, N))


def test_compose_examples():
    T = GroupElement.T(3, {0, 2})
    assert compose(T, T).is_identity()
    s = (1, 2, 0)
    R = GroupElement.R(s)
    conj = compose(compose(R, GroupElement.T(3, {0})), inverse(R))
    assert conj.equals(GroupElement.T(3, {s[0]}))
    assert compose(GroupElement.M(2, 2), GroupElement.M(2, 3)).equals(GroupElement.M(2, 6))
    with pytest.raises(DimensionError):
        compose(GroupElement.identity(2), GroupElement.identity(3))


def test_inverse_examples():
    assert inverse(GroupElement.identity(3)).is_identity()
    T = GroupElement.T(2, {0})
    assert inverse(T).equals(T)
    g = GroupElement(2, frozenset(), (1, 0), 1j)
    gi = inverse(g)
    assert gi.equals(GroupElement(2, frozenset(), (1, 0), -1j), tol=1e-15)
    assert compose(g, gi).is_identity(tol=1e-15)


def test_act_examples():
    p = DomainPoint.make(0.3 + 1j, [2 - 1j, 0.5j], [0.1, 0.7])
    q = act(GroupElement.T(2, {0}), p)
    assert q.w == p.w - p.a[0] and q.a == (-p.a[0], p.a[1]) and q.theta == (-0.1, 0.7)
    al = cmath.exp(0.4j)
    q = act(GroupElement.M(2, al), p)
    assert q.max_abs_diff(DomainPoint.make(al * p.w, [al * x for x in p.a], p.theta)) < 1e-15
    q = act(GroupElement.R((1, 0)), p)
    assert q.a == (p.a[1], p.a[0]) and q.theta == (0.7, 0.1) and q.w == p.w


def test_group_laws_exhaustive():
    rng = np.random.default_rng(10)
    for N in (1, 2, 3):
        elems = all_elements(N, ALPHAS)
        assert len(elems) == 2**N * math.factorial(N) * 3
        p = _random_point(N, rng)
        sample = [elems[i] for i in rng.choice(len(elems), size=min(len(elems), 12), replace=False)]
        for g in elems:
            assert compose(g, inverse(g)).is_identity(tol=1e-15)
            for h in sample:
                gh = compose(g, h)
                assert act(gh, p).max_abs_diff(act(g, act(h, p))) < 1e-13
                for k in sample[:4]:
                    assert compose(gh, k).equals(compose(g, compose(h, k)), tol=1e-15)


def test_cocycle_random_pairs():
    rng = np.random.default_rng(11)
    elems = all_elements(3, ALPHAS)
    for _ in range(200):
        g, h = (elems[i] for i in rng.integers(0, len(elems), 2))
        p = _random_point(3, rng)
        hp = act(h, p)
        for k in range(-6, 7):
            lhs = j_factor(compose(g, h), k, p.theta)
            rhs = j_factor(g, k, hp.theta) * j_factor(h, k, p.theta)
            assert abs(lhs - rhs) < 1e-9
        s = complex(*rng.normal(size=2))
        # away from integers the cocycle holds up to the branch of alpha^{-s}
        if abs(psi_angle(g) + psi_angle(h)) < math.pi:
            lhs = j_factor(compose(g, h), s, p.theta)
            rhs = j_factor(g, s, hp.theta) * j_factor(h, s, p.theta)
            assert abs(lhs - rhs) < 1e-9 * max(1, abs(lhs))


def test_j_factor_examples():
    rng = np.random.default_rng(12)
    th = rng.uniform(0, 1, 3)
    assert j_factor(GroupElement.identity(3), 0.3 + 2j, th) == 1
    for r in range(4):
        for L in itertools.combinations(range(3), r):
            assert j_factor(GroupElement.T(3, L), 1.7, [0, 0, 0]) == (-1) ** len(L)
    for N in (2, 3, 4):
        g = example2_element(N)
        eta = e2pi(1 / (2 * N))
        for k in range(-3 * N, 3 * N + 1):
            J = j_factor(g, k, [0.0] * N)
            assert abs(J + eta ** (-k)) < 1e-12
            assert (abs(J - 1) < 1e-12) == ((k - N) % (2 * N) == 0)


def test_psi_angle_examples():
    assert psi_angle(GroupElement.M(2, 1)) == 0
    assert abs(psi_angle(GroupElement.M(5, e2pi(1 / 5))) - 2 * math.pi / 5) < 1e-15
    assert psi_angle(GroupElement.M(2, -1)) == math.pi
    assert psi_angle(GroupElement.M(2, complex(-1, -0.0))) == math.pi


def test_kernel_equivariance():
    rng = np.random.default_rng(13)
    N = 3
    for _ in range(10):
        p = _random_point(N, rng)
        u = 0.3 * (rng.normal(size=50) + 1j * rng.normal(size=50))
        base = f_values(u, p)
        al = cmath.exp(1j * rng.uniform(-3, 3)) * rng.uniform(0.5, 2)
        np.testing.assert_allclose(f_values(u, act(GroupElement.M(N, al), p)), f_values(al * u, p), rtol=1e-10)
        sigma = tuple(rng.permutation(N))
        np.testing.assert_allclose(f_values(u, act(GroupElement.R(sigma), p)), base, rtol=1e-10)
        L = frozenset(int(i) for i in np.nonzero(rng.integers(0, 2, N))[0])
        fac = (-1) ** len(L) * e2pi(trace(list(p.theta), L))
        np.testing.assert_allclose(f_values(u, act(GroupElement.T(N, L), p)), fac * base, rtol=1e-10)


def test_is_fixed_examples():
    rng = np.random.default_rng(14)
    p = _random_point(3, rng)
    assert is_fixed(GroupElement.identity(3), p)
    assert is_fixed(example1_element(3), example1_point(3, 0.25))
    assert not is_fixed(GroupElement.M(3, 2), p)


def test_fixed_point_space_identity():
    space = fixed_point_space(GroupElement.identity(3))
    assert space.case_tag == "alpha-equals-one" and space.w_rule == "free"
    assert np.linalg.matrix_rank(np.array(space.a_basis)) == 3
    assert np.linalg.matrix_rank(np.array(space.theta_basis)) == 3


def test_fixed_point_space_examples():
    for N in (3, 5, 7):
        g = example1_element(N)
        space = fixed_point_space(g)
        for c in (0.0, 1 / 3, 0.5):
            d = example1_point(N, c)
            assert is_fixed(g, d) and space.contains(d)
            assert abs(space.w_for(d.a)) < 1e-14
    for N in (2, 3, 4):
        g = example2_element(N)
        space = fixed_point_space(g)
        d = example2_point(N)
        assert is_fixed(g, d) and space.contains(d)
        eta = e2pi(1 / (2 * N))
        assert abs(d.w - 1 / (1 - eta)) < 1e-15


def test_fixed_point_sampling_and_perturbation():
    rng = np.random.default_rng(15)
    for g in all_elements(3, ALPHAS):
        space = fixed_point_space(g)
        if space.case_tag == "empty":
            with pytest.raises(PreconditionError):
                space.sample(rng)
            continue
        for _ in range(3):
            p = space.sample(rng)
            assert is_fixed(g, p)
            if g.is_identity():
                continue
            da = 0.1 * (rng.normal(size=3) + 1j * rng.normal(size=3))
            q = DomainPoint(p.w + 0.1 + 0.05j, tuple(np.array(p.a) + da), tuple(np.array(p.theta) + [0.1, 0.2, 0.3]))
            assert not is_fixed(g, q)


def test_alpha_one_fixed_points_have_even_flips_and_zero_trace():
    rng = np.random.default_rng(16)
    for g in all_elements(3, (1.0,)):
        space = fixed_point_space(g)
        if space.case_tag == "empty":
            continue
        for _ in range(5):
            p = space.sample(rng)
            if not in_good_domain(p):
                continue
            assert is_fixed(g, p)
            # J_g at a fixed point with alpha = 1 is |Lambda| parity times e(Tr(theta, pre-image))
            tr = trace(list(p.theta), {i for i in range(3) if g.sigma[i] in g.Lambda})
            assert abs(twist(tr) * (-1) ** len(g.Lambda) - j_factor(g, 0, p.theta)) < 1e-12


def test_group_element_validation_and_dict_round_trip():
    with pytest.raises(PreconditionError):
        GroupElement(2, frozenset(), None, 0)
    with pytest.raises(DimensionError):
        GroupElement(2, frozenset({2}))
    g = GroupElement(3, frozenset({1}), (2, 0, 1), 1j)
    d = g.to_dict()
    assert d["Lambda"] == [2] and d["sigma"] == [3, 1, 2]
    assert GroupElement.from_dict(d).equals(g)
