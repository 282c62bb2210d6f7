import math

import numpy as np
import pytest

from classm import (
    BadParams,
    JetPoint,
    OutOfDomain,
    SymmetricMatrix,
    arctan_monotone,
    eig_sum,
    identity_monotone,
    inf_laplace,
    inf_laplace_homog,
    k_hessian,
    linear_uniform,
    make_operator,
    odd_root_monotone,
    operator_from_json,
    p_laplace,
    p_laplace_homog,
    sqrt_gradient,
    unit_jet,
)
from classm.operators import MonotoneFunction
from conftest import brute_sk, random_orthogonal, random_symmetric


def all_catalog_instances():
    return [
        linear_uniform(1.0),
        linear_uniform(0.5, sigma=np.eye(3), b=[1.0, 0.0, -1.0], c=0.25),
        p_laplace(1), p_laplace(1.5), p_laplace(2), p_laplace(4),
        p_laplace_homog(4),
        inf_laplace(), inf_laplace_homog(),
        k_hessian(2),
        eig_sum(identity_monotone()), eig_sum(odd_root_monotone(3)),
        eig_sum(arctan_monotone()),
        sqrt_gradient(),
    ]


class TestFrozenValues:
    def test_p2_is_negative_trace(self, rng):
        op = p_laplace(2)
        for _ in range(10):
            x = random_symmetric(rng, 3)
            w = JetPoint(rng.normal(size=3), 0.0, rng.normal(size=3))
            assert abs(op.evaluate(w, x) + x.trace()) < 1e-12

    def test_monge_ampere_product(self):
        assert k_hessian(3).evaluate(unit_jet(3), SymmetricMatrix.diagonal([1, 2, 3])) == -6.0

    def test_odd_root_sum(self):
        # hand oracle: cbrt(-8) = -2 and cbrt(27) = 3, so the sum is 1
        op = eig_sum(odd_root_monotone(3))
        assert abs(op.evaluate(unit_jet(2), SymmetricMatrix.diagonal([-8.0, 27.0])) + 1.0) < 1e-12

    def test_p4_hand_value(self):
        # -(tr + 2 <X e1, e1>) = -(3 + 4) with X = diag(2, 1), |nu| = 1
        assert p_laplace(4).evaluate(unit_jet(2), SymmetricMatrix.diagonal([2.0, 1.0])) == -7.0

    def test_p_laplace_nullspace_gap(self):
        # F_p(nu, X) - F_p(nu, Y) = |nu|^(p-2) l for Y = diag(0, l), nu = c e1
        for p in (1.5, 3.0, 4.0):
            for c in (0.25, 2.0):
                op = p_laplace(p)
                w = JetPoint([0.0, 0.0], 0.0, [c, 0.0])
                x = SymmetricMatrix.zero(2)
                y = SymmetricMatrix.diagonal([0.0, 7.0])
                gap = op.evaluate(w, x) - op.evaluate(w, y)
                assert abs(gap - c ** (p - 2) * 7.0) < 1e-10 * max(1.0, c ** (p - 2) * 7.0)

    def test_inf_laplace_spike_constant(self):
        op = inf_laplace()
        for c in (0.0, -5.0, -1e6):
            x = SymmetricMatrix.diagonal([1.0, 0.0, c])
            assert op.evaluate(unit_jet(3), x) == -1.0

    def test_p1_constant_value(self):
        op = p_laplace(1)
        for n in (2, 3, 4, 5):
            w = unit_jet(n, axis=n - 1)
            for c in (0.0, -1.0, -1e3):
                x = SymmetricMatrix.diagonal([1.0] * (n - 1) + [c])
                assert op.evaluate(w, x) == -(n - 1)

    def test_k_hessian_double_spike(self):
        # N = 3, k = 2: S_2(-n, -n, 1) = n^2 - 2n, checked against enumeration
        op = k_hessian(2)
        for n in (1, 5, 12):
            vals = [-n, -n, 1]
            assert brute_sk(vals, 2) == n * n - 2 * n
            x = SymmetricMatrix.diagonal(vals)
            if n >= 1:  # outside the cone; evaluate via the raw formula path
                with pytest.raises(OutOfDomain):
                    op.evaluate(unit_jet(3), x)

    def test_sqrt_gradient(self):
        op = sqrt_gradient()
        w = JetPoint([0.0, 0.0], 0.0, [4.0, 0.0])
        assert op.evaluate(w, SymmetricMatrix.diagonal([1.0, 2.0])) == -(3.0 + 2.0)

    def test_linear_uniform_full_formula(self):
        op = linear_uniform(1.0, sigma=np.eye(2), b=[1.0, 0.0], c=2.0)
        w = JetPoint([0.0, 0.0], 3.0, [2.0, 0.0])
        # -tr(2I * I) + b.nu + c r = -4 + 2 + 6
        assert op.evaluate(w, SymmetricMatrix.identity(2)) == 4.0


class TestDomains:
    def test_p_laplace_refuses_zero_gradient(self):
        w = JetPoint(np.zeros(2), 0.0, np.zeros(2))
        for op in (p_laplace(1.5), p_laplace(4), p_laplace_homog(3), inf_laplace_homog()):
            with pytest.raises(OutOfDomain):
                op.evaluate(w, SymmetricMatrix.identity(2))

    def test_p_laplace_refuses_tiny_gradient(self):
        w = JetPoint(np.zeros(2), 0.0, np.array([1e-13, 0.0]))
        with pytest.raises(OutOfDomain):
            p_laplace(1.5).evaluate(w, SymmetricMatrix.identity(2))

    def test_inf_laplace_accepts_zero_gradient(self):
        w = JetPoint(np.zeros(2), 0.0, np.zeros(2))
        assert inf_laplace().evaluate(w, SymmetricMatrix.identity(2)) == 0.0

    def test_k_hessian_cone_gate(self):
        op = k_hessian(2)
        assert op.evaluate(unit_jet(3), SymmetricMatrix.identity(3)) == -3.0
        with pytest.raises(OutOfDomain):
            op.evaluate(unit_jet(3), SymmetricMatrix.diagonal([-5.0, -5.0, 1.0]))

    def test_k_hessian_dimension_check_at_evaluation(self):
        op = k_hessian(3)
        with pytest.raises(BadParams):
            op.evaluate(unit_jet(2), SymmetricMatrix.identity(2))


class TestBadParams:
    def test_rejections(self):
        with pytest.raises(BadParams):
            p_laplace(0.5)
        with pytest.raises(BadParams):
            linear_uniform(0.0)
        with pytest.raises(BadParams):
            linear_uniform(1.0, sigma=-np.eye(2))
        with pytest.raises(BadParams):
            k_hessian(0)
        with pytest.raises(BadParams):
            odd_root_monotone(4)
        with pytest.raises(BadParams):
            odd_root_monotone(1)
        with pytest.raises(BadParams):
            eig_sum("not a monotone function")
        with pytest.raises(BadParams):
            make_operator("unknown_family")

    def test_monotone_validation(self):
        with pytest.raises(BadParams):
            MonotoneFunction("decreasing", lambda t: -t)
        with pytest.raises(BadParams):
            MonotoneFunction("bad inverse", lambda t: t, inverse=lambda s: s + 1.0)


class TestJson:
    def test_round_trips(self):
        assert operator_from_json({"family": "p_laplace", "p": 4}).name == "p_laplace(p=4)"
        assert operator_from_json({"family": "k_hessian", "k": 2}).name == "k_hessian(k=2)"
        assert operator_from_json({"family": "eig_sum", "h": "identity"}).name == "eig_sum(identity)"
        assert operator_from_json(
            {"family": "eig_sum", "h": "odd_root", "d": 5}).name == "eig_sum(odd_root(5))"
        assert operator_from_json({"family": "inf_laplace"}).name == "inf_laplace"
        op = operator_from_json({"family": "linear_uniform", "theta": 2.0,
                                 "sigma": [[1.0, 0.0], [0.0, 1.0]], "b": [0.0, 1.0], "c": 0.5})
        assert op.family == "linear_uniform"

    def test_errors(self):
        with pytest.raises(BadParams):
            operator_from_json({"p": 4})
        with pytest.raises(BadParams):
            operator_from_json({"family": "p_laplace", "q": 4})
        with pytest.raises(BadParams):
            operator_from_json({"family": "eig_sum", "h": "tanh"})
        with pytest.raises(BadParams):
            operator_from_json({"family": "eig_sum", "h": "odd_root"})
        with pytest.raises(BadParams):
            operator_from_json([1, 2, 3])


class TestMonotoneFunctions:
    def test_inverse_round_trip(self):
        h = odd_root_monotone(3)
        for t in (-27.0, -1.0, 0.0, 0.5, 64.0):
            assert abs(h.inverse(h.forward(t)) - t) <= 1e-9 * max(1.0, abs(t))

    def test_arctan_is_bounded(self):
        h = arctan_monotone()
        assert not h.unbounded
        assert h.bounded_below == -math.pi / 2
        assert h.bounded_above == math.pi / 2

    def test_identity_unbounded(self):
        assert identity_monotone().unbounded


class TestEllipticityAndInvariance:
    def test_degenerate_ellipticity_statistical(self, rng):
        for op in all_catalog_instances():
            checked = 0
            while checked < 150:
                w = JetPoint(rng.uniform(-1, 1, 3), float(rng.uniform(-1, 1)),
                             rng.uniform(-1, 1, 3))
                x = random_symmetric(rng, 3)
                if not op.in_domain(w, x):
                    continue
                y = SymmetricMatrix(x.entries + (lambda p: p.T @ p)(rng.uniform(-1, 1, (3, 3))))
                if not op.in_domain(w, y):
                    continue
                checked += 1
                assert op.evaluate(w, x) >= op.evaluate(w, y) - 1e-8, op.name

    def test_orthogonal_invariance_of_spectral_operators(self, rng):
        for op in (k_hessian(2), eig_sum(identity_monotone()), eig_sum(odd_root_monotone(3))):
            checked = 0
            while checked < 50:
                x = random_symmetric(rng, 3)
                w = unit_jet(3)
                if not op.in_domain(w, x):
                    continue
                checked += 1
                q = random_orthogonal(rng, 3)
                rotated = SymmetricMatrix(q @ x.entries @ q.T)
                assert abs(op.evaluate(w, x) - op.evaluate(w, rotated)) <= 1e-8

    def test_homogeneous_scaling(self, rng):
        op = inf_laplace_homog()
        for _ in range(50):
            x = random_symmetric(rng, 3)
            nu = rng.uniform(-1, 1, 3)
            if np.linalg.norm(nu) < 1e-3:
                continue
            w1 = JetPoint(np.zeros(3), 0.0, nu)
            for s in (2.0, -3.0, 0.125):
                w2 = JetPoint(np.zeros(3), 0.0, s * nu)
                assert abs(op.evaluate(w1, x) - op.evaluate(w2, x)) <= 1e-10

    def test_matrix_continuity(self, rng):
        for op in (p_laplace(3), eig_sum(odd_root_monotone(3)), inf_laplace()):
            w = unit_jet(3)
            x = random_symmetric(rng, 3)
            direction = random_symmetric(rng, 3).entries
            base = op.evaluate(w, x)
            deltas = [1e-2, 1e-4, 1e-6]
            diffs = [abs(op.evaluate(w, SymmetricMatrix(x.entries + d * direction)) - base)
                     for d in deltas]
            assert diffs[-1] <= diffs[0] + 1e-12
            assert diffs[-1] <= 1e-3
