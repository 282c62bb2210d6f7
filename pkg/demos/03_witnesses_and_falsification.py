"""Membership witnesses and the falsification side.

For operators with a uniform-ellipticity gap the (lambda, H) pair embeds
into the per-side witness pair (g1, g2); the p-Laplacian only has the weaker
per-side pair, and several classics have none at all. Every negative claim
comes with a concrete, re-checkable certificate.
"""

from classm import (
    Certificate,
    PassReport,
    SampleConfig,
    SymmetricMatrix,
    arctan_monotone,
    check_class_m,
    check_class_u,
    class_u_constant,
    class_u_to_class_m,
    counterexample,
    eig_sum,
    identity_monotone,
    linear_uniform,
    p_laplace,
    theorem_lower_bounds,
    unit_jet,
    witness_eig_sum,
    witness_p_laplace,
)

cfg = SampleConfig(seed=7, trials=2000, dim=3)
omega = unit_jet(3)

# 1. The linear operator has the uniform gap with lambda = theta, H = 0.
lin = linear_uniform(1.0)
report = check_class_u(lin, class_u_constant(1.0), cfg)
print("linear_uniform vs the uniform gap:", type(report).__name__,
      f"({report.trials} trials, {report.probes} adversarial probes)")

# 2. The p-Laplacian fails the gap: put nu in the nullspace of Y - X.
cert = check_class_u(p_laplace(4), class_u_constant(1.0, 0.5), cfg)
assert isinstance(cert, Certificate)
print("p_laplace(4) vs the same gap:  violation, margin", round(cert.margin, 6))
print("   probe:", cert.description)

# 3. But it does carry the weaker per-side witnesses for p > 1.
g1, g2 = witness_p_laplace(4, omega)
result = check_class_m(p_laplace(4), g1, g2, cfg)
print("p_laplace(4) witness pair:     ", type(result).__name__, "(conditions 1-4)")
eye = SymmetricMatrix.identity(3)
bounds = theorem_lower_bounds(g1, g2, eye, eye)
print("   lower bounds at E = D = I:", bounds.lower_X, "I <= X,",
      bounds.lower_negY, "I <= -Y   (coefficient N + p - 3 = 4)")

# 4. The embedding route gives the same machinery for gap operators.
g1e, g2e = class_u_to_class_m(lin, class_u_constant(1.0), omega)
print("embedded Laplacian bound at I: ", theorem_lower_bounds(g1e, g2e, eye, eye).lower_X,
      "  ((H + F(I))/lambda + lambda_1 = -3 + 1)")
print()

# 5. The counterexample gallery: each certificate re-verifies from its own data.
print("counterexample gallery")
for name, params, story in (
    ("inf_laplace", {"dim": 2, "c": -1e6},
     "-F stays 1 while lambda_1 dives"),
    ("k_hessian", {"dim": 3, "k": 2, "n": 5},
     "binomial value grows like n^2 while lambda_1 = -n"),
    ("p1_laplace", {"dim": 4, "c": -1e6},
     "-F_1 = N - 1 frozen for every c <= 0"),
    ("power_not_u", {"d": 3, "dim": 2, "lam": 1.0},
     "gap needs lam*n but F only moves n^(1/3)"),
    ("p_laplace_not_u", {"p": 1.5, "dim": 2, "lam": 1.0},
     "the p < 2 prefactor regime fails the gap too"),
    ("bounded_h", {"dim": 3},
     "N arctan(c) is bounded below; no bijection can follow it"),
):
    cert = counterexample(name, **params)
    cert.reverify()
    print(f"  {name:<18} margin {cert.margin:>14.6g}   {story}")
print()

# 6. arctan vs odd roots: bounded H has no witness pair, unbounded H does.
try:
    witness_eig_sum(arctan_monotone())
except Exception as exc:
    print("witness_eig_sum(arctan):", exc)
gid1, gid2 = witness_eig_sum(identity_monotone())
print("witness_eig_sum(identity):",
      type(check_class_m(eig_sum(identity_monotone()), gid1, gid2, cfg)).__name__)
