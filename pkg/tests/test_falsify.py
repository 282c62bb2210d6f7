import json
import math

import pytest

from classm import (
    BadParams,
    Certificate,
    ClassMWitness,
    OperatorDescriptor,
    PassReport,
    SampleConfig,
    SamplingExhausted,
    arctan_monotone,
    check_class_m,
    check_class_u,
    check_degenerate_ellipticity,
    class_u_constant,
    class_u_to_class_m,
    counterexample,
    eig_sum,
    identity_monotone,
    inf_laplace,
    linear_uniform,
    p_laplace,
    unit_jet,
    witness_p_laplace,
)
from classm.errors import BadArgument
from conftest import brute_sk


def small_cfg(seed=11, trials=300, dim=3):
    return SampleConfig(seed=seed, trials=trials, dim=dim)


def anti_elliptic():
    return OperatorDescriptor(
        name="anti_elliptic", family="test", params={},
        in_domain=lambda w, x: True,
        raw_evaluate=lambda w, x: x.trace(),
    )


class TestSampleConfig:
    def test_validation(self):
        with pytest.raises(BadArgument):
            SampleConfig(seed=-1)
        with pytest.raises(BadArgument):
            SampleConfig(seed=0, trials=0)
        with pytest.raises(BadArgument):
            SampleConfig(seed=0, scale=0.0)
        with pytest.raises(BadArgument):
            SampleConfig(seed=0, dim=0)


class TestEllipticity:
    def test_identity_sum_passes(self):
        rep = check_degenerate_ellipticity(eig_sum(identity_monotone()), small_cfg())
        assert isinstance(rep, PassReport)
        assert rep.trials == 300

    def test_inf_laplace_passes(self):
        assert isinstance(check_degenerate_ellipticity(inf_laplace(), small_cfg()), PassReport)

    def test_broken_operator_certified(self):
        cert = check_degenerate_ellipticity(anti_elliptic(), small_cfg())
        assert isinstance(cert, Certificate)
        assert cert.kind == "ellipticity.violation"
        assert cert.margin > 1e-8
        cert.reverify()

    def test_determinism(self):
        a = check_degenerate_ellipticity(anti_elliptic(), small_cfg(seed=42))
        b = check_degenerate_ellipticity(anti_elliptic(), small_cfg(seed=42))
        assert a.to_json_obj() == b.to_json_obj()
        c = check_degenerate_ellipticity(anti_elliptic(), small_cfg(seed=43))
        assert c.to_json_obj() != a.to_json_obj()

    def test_sampling_exhausted(self):
        never = OperatorDescriptor(
            name="nowhere", family="test", params={},
            in_domain=lambda w, x: False, raw_evaluate=lambda w, x: 0.0)
        with pytest.raises(SamplingExhausted):
            check_degenerate_ellipticity(never, SampleConfig(seed=1, trials=1))


class TestClassU:
    def test_linear_passes_with_theta(self):
        rep = check_class_u(linear_uniform(1.5), class_u_constant(1.5), small_cfg())
        assert isinstance(rep, PassReport)
        assert rep.probes > 0

    def test_identity_witness_on_trace(self):
        rep = check_class_u(eig_sum(identity_monotone()), class_u_constant(1.0), small_cfg())
        assert isinstance(rep, PassReport)

    def test_p_laplace_fails_via_nullspace_probe(self):
        cert = check_class_u(p_laplace(4), class_u_constant(1.0, 0.5), small_cfg())
        assert isinstance(cert, Certificate)
        assert cert.kind == "class_u.violation"
        cert.reverify()
        # the probe puts nu in the nullspace of M - B
        assert cert.witnesses["B"].trace() == 0.0

    def test_p_below_2_fails_too(self):
        cert = check_class_u(p_laplace(1.5), class_u_constant(2.0), small_cfg())
        assert isinstance(cert, Certificate)
        cert.reverify()

    def test_too_large_lambda_fails_even_for_laplacian(self):
        cert = check_class_u(eig_sum(identity_monotone()), class_u_constant(3.0), small_cfg())
        assert isinstance(cert, Certificate)


class TestClassM:
    def test_p_laplace_witness_passes(self):
        om = unit_jet(3)
        g1, g2 = witness_p_laplace(3, om)
        rep = check_class_m(p_laplace(3), g1, g2, small_cfg())
        assert isinstance(rep, PassReport)

    def test_embedded_witness_passes(self):
        op = eig_sum(identity_monotone())
        g1, g2 = class_u_to_class_m(op, class_u_constant(1.0), unit_jet(3))
        rep = check_class_m(op, g1, g2, small_cfg())
        assert isinstance(rep, PassReport)

    def test_inf_laplace_candidate_dies_on_ladder(self):
        g1 = ClassMWitness(name="naive", which="g1", eval_fn=lambda t, m: t,
                           inv_at_zero_fn=lambda m: 0.0)
        g2 = ClassMWitness(name="naive", which="g2", eval_fn=lambda t, m: t,
                           inv_at_zero_fn=lambda m: 0.0)
        cert = check_class_m(inf_laplace(), g1, g2, small_cfg())
        assert isinstance(cert, Certificate)
        assert cert.kind == "class_m.condition3"
        cert.reverify()
        # the killing probe is the spike diag(1, 0, ..., 0, c): -F = 1 constant
        assert cert.inequality_values["neg_F"] == 1.0

    def test_bounded_h_candidate_dies_on_scalar_ladder(self):
        op = eig_sum(arctan_monotone())
        g1 = ClassMWitness(name="cand", which="g1", eval_fn=lambda t, m: t)
        g2 = ClassMWitness(name="cand", which="g2", eval_fn=lambda t, m: t)
        cert = check_class_m(op, g1, g2, small_cfg())
        assert isinstance(cert, Certificate)
        assert cert.kind == "class_m.condition3"
        # bounded value: N arctan(-c) stays above -3 pi / 2
        assert cert.inequality_values["neg_F"] >= -3 * math.pi / 2

    def test_condition1_nonmonotone_certified(self):
        op = eig_sum(identity_monotone())
        bad1 = ClassMWitness(name="bad", which="g1", eval_fn=lambda t, m: -t)
        _, g2 = class_u_to_class_m(op, class_u_constant(1.0), unit_jet(3))
        cert = check_class_m(op, bad1, g2, small_cfg())
        assert isinstance(cert, Certificate)
        assert cert.kind == "class_m.condition1"
        cert.reverify()

    def test_condition1_bounded_eval_certified(self):
        op = eig_sum(identity_monotone())
        flat = ClassMWitness(name="flat", which="g1",
                             eval_fn=lambda t, m: math.tanh(t),
                             inv_at_zero_fn=lambda m: 0.0)
        _, g2 = class_u_to_class_m(op, class_u_constant(1.0), unit_jet(3))
        cert = check_class_m(op, flat, g2, small_cfg())
        assert isinstance(cert, Certificate)
        assert cert.kind == "class_m.condition1"

    def test_condition2_discontinuous_inverse_certified(self):
        op = eig_sum(identity_monotone())
        _, g2 = class_u_to_class_m(op, class_u_constant(1.0), unit_jet(3))
        jumpy = ClassMWitness(
            name="jumpy", which="g1",
            eval_fn=lambda t, m: t,
            inv_at_zero_fn=lambda m: 50.0 * math.sin(1e8 * float(m.entries[0, 0])),
        )
        cert = check_class_m(op, jumpy, g2, small_cfg(seed=5))
        assert isinstance(cert, Certificate)
        assert cert.kind in ("class_m.condition1", "class_m.condition2")

    def test_determinism(self):
        om = unit_jet(3)
        g1, g2 = witness_p_laplace(4, om)
        a = check_class_m(p_laplace(4), g1, g2, small_cfg(seed=9))
        b = check_class_m(p_laplace(4), g1, g2, small_cfg(seed=9))
        assert a.to_json_obj() == b.to_json_obj()


class TestCounterexamples:
    def test_inf_laplace_values(self):
        cert = counterexample("inf_laplace", dim=2, c=-1e6)
        assert cert.inequality_values["neg_F_constant"] == 1.0
        assert cert.inequality_values["lambda1_at_cmin"] == -1e6
        assert cert.margin == 1.0 + 1e6
        cert.reverify()

    def test_inf_laplace_homogeneous(self):
        cert = counterexample("inf_laplace", dim=3, c=-10.0, homogeneous=True)
        assert cert.inequality_values["neg_F_constant"] == 1.0
        cert.reverify()

    def test_k_hessian_exact_grid(self):
        cert = counterexample("k_hessian", dim=3, k=2, n=5)
        first = cert.inequality_values["grid"][0]
        assert first["neg_F"] == 15 and first["lambda1"] == -5
        cert.reverify()

    def test_k_hessian_matches_bruteforce_small_sweep(self):
        for dim in (2, 3, 4):
            for k in range(2, dim + 1):
                for n in (1, 3, 10):
                    vals = [-n, -n] + [1] * (dim - 2)
                    formula = (math.comb(dim - 2, k - 2) * n * n
                               - 2 * math.comb(dim - 2, k - 1) * n
                               + math.comb(dim - 2, k))
                    assert brute_sk(vals, k) == formula

    def test_p1_laplace_values(self):
        cert = counterexample("p1_laplace", dim=4, c=-100.0)
        assert cert.inequality_values["neg_F_constant"] == 3.0
        assert all(row["neg_F"] == 3.0 for row in cert.inequality_values["grid"])
        cert.reverify()

    def test_power_not_u_finds_n(self):
        for d in (3, 5):
            cert = counterexample("power_not_u", d=d, dim=2, lam=1.0, h_const=0.0)
            assert cert.kind == "class_u.violation"
            assert cert.margin > 1e-8
            cert.reverify()

    def test_power_not_u_small_lambda_needs_larger_n(self):
        small = counterexample("power_not_u", d=3, dim=2, lam=0.01)
        big = counterexample("power_not_u", d=3, dim=2, lam=100.0)
        assert small.witnesses["n"] > big.witnesses["n"]

    def test_p_laplace_not_u_both_regimes(self):
        for p in (4.0, 1.5, 1.0, 10.0):
            cert = counterexample("p_laplace_not_u", p=p, dim=2, lam=1.0, h_const=-2.0)
            assert cert.margin > 1e-8
            cert.reverify()

    def test_p_laplace_not_u_rejects_p2(self):
        with pytest.raises(BadParams):
            counterexample("p_laplace_not_u", p=2.0)

    def test_bounded_h_certificate(self):
        cert = counterexample("bounded_h", dim=3)
        rows = cert.inequality_values["grid"]
        floor = cert.inequality_values["bound"]
        assert all(row["neg_F"] >= floor for row in rows)
        assert rows[-1]["extreme_eigenvalue"] < -1e9
        cert.reverify()

    def test_bounded_h_rejects_unbounded(self):
        with pytest.raises(BadParams):
            counterexample("bounded_h", dim=2, h=identity_monotone())

    def test_bad_params(self):
        with pytest.raises(BadParams):
            counterexample("nope")
        with pytest.raises(BadParams):
            counterexample("k_hessian", dim=3, k=4)
        with pytest.raises(BadParams):
            counterexample("k_hessian", dim=1, k=1)
        with pytest.raises(BadParams):
            counterexample("inf_laplace", dim=1)
        with pytest.raises(BadParams):
            counterexample("inf_laplace", dim=2, c=1.0)
        with pytest.raises(BadParams):
            counterexample("power_not_u", d=3, dim=2, lam=-1.0)
        with pytest.raises(BadParams):
            counterexample("k_hessian", bogus=1)

    def test_certificates_serialize(self):
        for name, params in (("inf_laplace", {"dim": 2}),
                             ("k_hessian", {"dim": 3, "k": 2, "n": 5}),
                             ("p1_laplace", {"dim": 3}),
                             ("power_not_u", {"d": 3, "dim": 2}),
                             ("p_laplace_not_u", {"p": 4.0, "dim": 2}),
                             ("bounded_h", {"dim": 2})):
            obj = counterexample(name, **params).to_json_obj()
            text = json.dumps(obj, sort_keys=True)
            assert json.loads(text) == obj
