"""Tour of the operator catalog.

Every operator is a descriptor with a domain predicate and an evaluation
F(omega, X); evaluation refuses out-of-domain input instead of guessing.
"""

import numpy as np

from classm import (
    JetPoint,
    OutOfDomain,
    SymmetricMatrix,
    arctan_monotone,
    eig_sum,
    identity_monotone,
    inf_laplace,
    k_hessian,
    linear_uniform,
    odd_root_monotone,
    operator_from_json,
    p_laplace,
    sqrt_gradient,
    unit_jet,
)

w2 = unit_jet(2)          # omega = (0, 0, e1)
w3 = unit_jet(3)

print("p_laplace(2) is the Laplacian: F(e1, diag(3, 4)) =",
      p_laplace(2).evaluate(w2, SymmetricMatrix.diagonal([3.0, 4.0])))
print("p_laplace(4) on diag(2, 1):   ", p_laplace(4).evaluate(w2, SymmetricMatrix.diagonal([2.0, 1.0])),
      " (-(tr + 2<Xe1,e1>) = -(3 + 4))")
print("k_hessian(3) = Monge-Ampere:   F(diag(1,2,3)) =",
      k_hessian(3).evaluate(w3, SymmetricMatrix.diagonal([1.0, 2.0, 3.0])))
print("eig_sum(cbrt) on diag(-8,27): ",
      eig_sum(odd_root_monotone(3)).evaluate(w2, SymmetricMatrix.diagonal([-8.0, 27.0])),
      " (-(-2 + 3))")
print("inf_laplace on diag(1,0,-9):  ",
      inf_laplace().evaluate(w3, SymmetricMatrix.diagonal([1.0, 0.0, -9.0])),
      " (only the e1 slot matters)")
print("sqrt_gradient, |nu| = 4:      ",
      sqrt_gradient().evaluate(JetPoint([0.0, 0.0], 0.0, [4.0, 0.0]),
                               SymmetricMatrix.diagonal([1.0, 2.0])))
lin = linear_uniform(1.0, sigma=np.eye(2), b=[1.0, 0.0], c=2.0)
print("linear_uniform with a = I + I:",
      lin.evaluate(JetPoint([0.0, 0.0], 3.0, [2.0, 0.0]), SymmetricMatrix.identity(2)))
print()

# Domains: gradient-singular operators refuse nu = 0, the k-Hessian refuses
# matrices outside its cone.
try:
    p_laplace(4).evaluate(JetPoint(np.zeros(2), 0.0, np.zeros(2)), SymmetricMatrix.identity(2))
except OutOfDomain as exc:
    print("p_laplace at nu = 0:", exc)
try:
    k_hessian(2).evaluate(w3, SymmetricMatrix.diagonal([-5.0, -5.0, 1.0]))
except OutOfDomain as exc:
    print("k_hessian outside Gamma_2-bar:", exc)
print()

# Degenerate ellipticity in one picture: adding a PSD matrix never raises F.
rng = np.random.default_rng(0)
op = eig_sum(identity_monotone())
x = SymmetricMatrix([[0.3, -0.2], [-0.2, -0.5]])
p = rng.uniform(-1, 1, (2, 2))
y = SymmetricMatrix(x.entries + p.T @ p)
print("F(X) =", op.evaluate(w2, x), ">= F(Y) =", op.evaluate(w2, y), "for X <= Y")
print()

# Operators parse from JSON specs (the CLI uses the same codec).
for spec in ('{"family": "p_laplace", "p": 4}',
             '{"family": "eig_sum", "h": "odd_root", "d": 5}',
             '{"family": "k_hessian", "k": 2}'):
    import json
    print("from JSON:", spec, "->", operator_from_json(json.loads(spec)).name)

print()
print("arctan eigenvalue sum (the bounded one, more on that in demo 03):",
      eig_sum(arctan_monotone()).evaluate(w2, SymmetricMatrix.identity(2)))
