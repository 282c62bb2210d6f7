"""Tour of the symmetric-matrix kernel.

Eigendecomposition with the deterministic Jacobi solver, the Loewner order,
elementary symmetric polynomials with the cone test, block assembly, and the
bit-exact text/JSON formats.
"""

import json

import numpy as np

from classm import (
    SymmetricMatrix,
    block_compose,
    block_extract,
    eigen_decompose,
    elementary_symmetric,
    format_matrix_text,
    gamma_k_member,
    loewner_leq,
    matrix_to_json_obj,
    operator_norm,
    parse_matrix_text,
)

x = SymmetricMatrix([[2.0, 1.0], [1.0, 2.0]])
spec = eigen_decompose(x)
print("X =", x.entries.tolist())
print("eigenvalues (ascending):", spec.eigenvalues.tolist())
print("eigenvectors (columns): ", spec.eigenvectors.tolist())
recon = spec.eigenvectors @ np.diag(spec.eigenvalues) @ spec.eigenvectors.T
print("reconstruction error:   ", float(np.max(np.abs(recon - x.entries))))
print("operator norm:          ", operator_norm(x))
print()

# The Loewner order: X <= Y iff Y - X is positive semi-definite.
zero = SymmetricMatrix.zero(2)
spread = SymmetricMatrix.diagonal([0.0, 5.0])
print("diag(0,0) <= diag(0,5):", loewner_leq(zero, spread))
indef = SymmetricMatrix([[0.0, 2.0], [2.0, 0.0]])
print("[[0,2],[2,0]] <= I:    ", loewner_leq(indef, SymmetricMatrix.identity(2)),
      " (the difference has an eigenvalue -1)")
print()

# Elementary symmetric polynomials and the cone the k-Hessian lives on.
vals = [-5, -5, 1]
print("S_2(-5, -5, 1) =", elementary_symmetric(2, vals), " (25 - 5 - 5)")
spiky = SymmetricMatrix.diagonal(vals)
print("diag(-5,-5,1) in Gamma_2-bar:", gamma_k_member(spiky, 2),
      " (S_1 = -9 already fails)")
print("identity in Gamma_3-bar:     ", gamma_k_member(SymmetricMatrix.identity(3), 3))
print()

# 2N x 2N block assembly, the shape the two-sided inequality lives on.
alpha = 1.0
eye = np.eye(2)
blocks = block_compose(SymmetricMatrix(alpha * eye), -alpha * eye, SymmetricMatrix(alpha * eye))
a = blocks.assemble()
print("A = [[aI, -aI], [-aI, aI]]:")
print(a.entries)
e, b, d = block_extract(a)
print("round trip recovers E:", np.array_equal(e.entries, alpha * eye))
print()

# Text and JSON formats round-trip bit exactly.
text = format_matrix_text(x)
print("text format:")
print(text, end="")
print("text round trip exact:", parse_matrix_text(text) == x)
print("JSON:", json.dumps(matrix_to_json_obj(x)))
