"""Dense symmetric-matrix kernel.

Everything here is desk scale: dense storage, dimensions up to 16, and a
deterministic cyclic Jacobi eigensolver (no LAPACK nondeterminism, no
external solver dependency). The module provides

  * ``SymmetricMatrix`` / ``Spectrum`` / ``BlockMatrix2N`` value types,
  * the Loewner partial order test ``loewner_leq``,
  * the operator norm (max absolute eigenvalue),
  * elementary symmetric polynomials and the Gamma_k cone membership test,
  * 2Nx2N block assembly and extraction,
  * text and JSON matrix formats that round-trip bit exactly.

All values are immutable after construction and safe to share across
threads; every function is a pure function of its inputs.
"""

from __future__ import annotations

import math
import os

import numpy as np

from .errors import BadArgument, DimMismatch, InvalidMatrix, ToolkitError

# Construction rejects inputs whose raw asymmetry exceeds this fraction of
# the largest entry; below the threshold we silently symmetrize.
ASYMMETRY_REL_TOL = 1e-8

DEFAULT_LOEWNER_TOL = 1e-9
GAMMA_CONE_TOL = 1e-9

_JACOBI_MAX_SWEEPS = 30
_JACOBI_REL_OFF = 1e-12


def default_loewner_tol() -> float:
    """Default absolute tolerance on lambda_1 of a difference matrix.

    The environment variable ``ELLIPTIC_TOL`` overrides the built-in 1e-9.
    """
    raw = os.environ.get("ELLIPTIC_TOL")
    if raw is None:
        return DEFAULT_LOEWNER_TOL
    try:
        tol = float(raw)
    except ValueError as exc:
        raise BadArgument(f"ELLIPTIC_TOL is not a number: {raw!r}") from exc
    if tol < 0.0:
        raise BadArgument(f"ELLIPTIC_TOL must be >= 0, got {tol}")
    return tol


class Spectrum:
    """Ordered eigensystem of a symmetric matrix.

    ``eigenvalues`` are sorted ascending; ``eigenvectors`` holds the matching
    orthonormal eigenvectors as columns, each with its largest-magnitude
    component made positive so the decomposition is reproducible.
    """

    __slots__ = ("eigenvalues", "eigenvectors")

    def __init__(self, eigenvalues, eigenvectors):
        evals = np.asarray(eigenvalues, dtype=float)
        evecs = np.asarray(eigenvectors, dtype=float)
        evals.setflags(write=False)
        evecs.setflags(write=False)
        self.eigenvalues = evals
        self.eigenvectors = evecs

    def __repr__(self):
        return f"Spectrum(eigenvalues={self.eigenvalues.tolist()})"


class SymmetricMatrix:
    """Immutable dense symmetric N x N matrix.

    Construction symmetrizes via (M + M^T)/2 and records the raw asymmetry;
    inputs with asymmetry above ``ASYMMETRY_REL_TOL * max|entry|`` or any
    non-finite entry are rejected. The stored array is read only and exactly
    symmetric. Eigenvalues and the full spectrum are computed lazily and
    cached, which is safe because the value never changes.
    """

    __slots__ = ("dim", "entries", "asymmetry", "_evals", "_spectrum")

    def __init__(self, entries):
        arr = np.asarray(entries, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise InvalidMatrix(f"expected a nonempty square matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InvalidMatrix("matrix entries must be finite")
        asym = float(np.max(np.abs(arr - arr.T)))
        scale = float(np.max(np.abs(arr)))
        if asym > ASYMMETRY_REL_TOL * scale:
            raise InvalidMatrix(
                f"asymmetry {asym:.3e} exceeds {ASYMMETRY_REL_TOL:.0e} * max|entry| = "
                f"{ASYMMETRY_REL_TOL * scale:.3e}"
            )
        sym = (arr + arr.T) / 2.0
        sym.setflags(write=False)
        self.dim = int(arr.shape[0])
        self.entries = sym
        self.asymmetry = asym
        self._evals = None
        self._spectrum = None

    @classmethod
    def identity(cls, n: int) -> "SymmetricMatrix":
        return cls(np.eye(n))

    @classmethod
    def zero(cls, n: int) -> "SymmetricMatrix":
        return cls(np.zeros((n, n)))

    @classmethod
    def diagonal(cls, values) -> "SymmetricMatrix":
        return cls(np.diag(np.asarray(values, dtype=float)))

    def scaled(self, factor: float) -> "SymmetricMatrix":
        return SymmetricMatrix(self.entries * float(factor))

    def negated(self) -> "SymmetricMatrix":
        return SymmetricMatrix(-self.entries)

    def plus(self, other: "SymmetricMatrix") -> "SymmetricMatrix":
        if other.dim != self.dim:
            raise DimMismatch(f"cannot add {self.dim}x{self.dim} and {other.dim}x{other.dim}")
        return SymmetricMatrix(self.entries + other.entries)

    def trace(self) -> float:
        return float(np.trace(self.entries))

    def eigenvalues(self) -> np.ndarray:
        """Ascending eigenvalues (cached; vectors are not accumulated)."""
        if self._spectrum is not None:
            return self._spectrum.eigenvalues
        if self._evals is None:
            diag, _ = _jacobi(self.entries, want_vectors=False)
            evals = np.array(sorted(diag), dtype=float)
            evals.setflags(write=False)
            self._evals = evals
        return self._evals

    def spectrum(self) -> Spectrum:
        """Full cached eigendecomposition; see :func:`eigen_decompose`."""
        if self._spectrum is None:
            diag, q = _jacobi(self.entries, want_vectors=True)
            order = sorted(range(self.dim), key=diag.__getitem__)
            evals = [diag[i] for i in order]
            vecs = np.array([[q[i][j] for j in order] for i in range(self.dim)], dtype=float)
            for col in range(self.dim):
                pivot = int(np.argmax(np.abs(vecs[:, col])))
                if vecs[pivot, col] < 0.0:
                    vecs[:, col] = -vecs[:, col]
            self._spectrum = Spectrum(np.array(evals, dtype=float), vecs)
        return self._spectrum

    def __eq__(self, other):
        if not isinstance(other, SymmetricMatrix):
            return NotImplemented
        return self.dim == other.dim and bool(np.array_equal(self.entries, other.entries))

    def __hash__(self):
        return hash((self.dim, self.entries.tobytes()))

    def __repr__(self):
        return f"SymmetricMatrix(dim={self.dim}, entries={self.entries.tolist()})"


def _jacobi(matrix: np.ndarray, want_vectors: bool):
    """Cyclic Jacobi sweeps on plain Python floats.

    Rotates (p, q) pairs in fixed row order until the off-diagonal Frobenius
    norm drops below 1e-12 times the Frobenius norm of the input, capped at
    30 sweeps. Pure sequential scalar arithmetic keeps the result bit
    deterministic for identical input. Returns (diagonal, vectors or None);
    the vectors are rows of a list-of-lists whose columns are eigenvectors.
    """
    a = [[float(v) for v in row] for row in matrix]
    n = len(a)
    q = None
    if want_vectors:
        q = [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]
    fro = math.sqrt(sum(a[i][j] * a[i][j] for i in range(n) for j in range(n)))
    thresh = _JACOBI_REL_OFF * fro
    converged = False
    for _ in range(_JACOBI_MAX_SWEEPS):
        off = math.sqrt(2.0 * sum(a[i][j] * a[i][j] for i in range(n) for j in range(i + 1, n)))
        if off <= thresh:
            converged = True
            break
        for p in range(n - 1):
            ap = a[p]
            for r in range(p + 1, n):
                apq = ap[r]
                if apq == 0.0:
                    continue
                ar = a[r]
                theta = (ar[r] - ap[p]) / (2.0 * apq)
                if abs(theta) > 1e154:  # avoid theta**2 overflow; limit of the exact formula
                    t = 0.5 / theta
                elif theta >= 0.0:
                    t = 1.0 / (theta + math.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                ap[p] -= t * apq
                ar[r] += t * apq
                ap[r] = 0.0
                ar[p] = 0.0
                for i in range(n):
                    if i == p or i == r:
                        continue
                    ai = a[i]
                    aip = ai[p]
                    air = ai[r]
                    ai[p] = c * aip - s * air
                    ai[r] = s * aip + c * air
                    ap[i] = ai[p]
                    ar[i] = ai[r]
                if q is not None:
                    for i in range(n):
                        qi = q[i]
                        qip = qi[p]
                        qir = qi[r]
                        qi[p] = c * qip - s * qir
                        qi[r] = s * qip + c * qir
    else:
        off = math.sqrt(2.0 * sum(a[i][j] * a[i][j] for i in range(n) for j in range(i + 1, n)))
        converged = off <= thresh
    if not converged:
        raise ToolkitError(f"Jacobi eigensolver failed to converge in {_JACOBI_MAX_SWEEPS} sweeps")
    return [a[i][i] for i in range(n)], q


def eigen_decompose(x: SymmetricMatrix) -> Spectrum:
    """Deterministic eigendecomposition, eigenvalues ascending.

    Ties are kept in stable (diagonal) order and each eigenvector's
    largest-magnitude component is made positive, so identical input yields
    an identical Spectrum.
    """
    if not isinstance(x, SymmetricMatrix):
        raise InvalidMatrix("eigen_decompose expects a SymmetricMatrix")
    return x.spectrum()


def operator_norm(x: SymmetricMatrix) -> float:
    """max_j |lambda_j(x)|."""
    evals = x.eigenvalues()
    return float(max(abs(evals[0]), abs(evals[-1])))


def loewner_leq(x: SymmetricMatrix, y: SymmetricMatrix, tol: float | None = None) -> bool:
    """True iff x <= y in the Loewner order, i.e. lambda_1(y - x) >= -tol."""
    if x.dim != y.dim:
        raise DimMismatch(f"Loewner comparison of {x.dim}x{x.dim} against {y.dim}x{y.dim}")
    if tol is None:
        tol = default_loewner_tol()
    if tol < 0.0:
        raise BadArgument(f"tolerance must be >= 0, got {tol}")
    diff = SymmetricMatrix(y.entries - x.entries)
    return float(diff.eigenvalues()[0]) >= -tol


def elementary_symmetric(k: int, values) -> float:
    """k-th elementary symmetric polynomial of the entries of ``values``.

    Uses the standard one-pass recurrence e_j <- e_j + x * e_{j-1} (j counted
    down), which performs only the additions the definition itself requires:
    it is exact for integer inputs and adds no cancellation beyond what the
    data forces. Python scalars are kept as given, so integer input stays in
    exact integer arithmetic.
    """
    vals = list(values)
    n = len(vals)
    if not isinstance(k, int) or k < 1 or k > n:
        raise BadArgument(f"k must be an integer in 1..{n}, got {k!r}")
    e = [0] * (k + 1)
    e[0] = 1
    for x in vals:
        for j in range(k, 0, -1):
            e[j] = e[j] + x * e[j - 1]
    return e[k]


def elementary_symmetric_prefix(values, kmax: int) -> list:
    """[S_1, ..., S_kmax] of ``values`` in one recurrence pass."""
    vals = list(values)
    n = len(vals)
    if not isinstance(kmax, int) or kmax < 1 or kmax > n:
        raise BadArgument(f"kmax must be an integer in 1..{n}, got {kmax!r}")
    e = [0] * (kmax + 1)
    e[0] = 1
    for x in vals:
        for j in range(kmax, 0, -1):
            e[j] = e[j] + x * e[j - 1]
    return e[1:]


def gamma_k_member(x: SymmetricMatrix, k: int, tol: float = GAMMA_CONE_TOL) -> bool:
    """Membership of lambda(x) in the closed cone Gamma_k-bar.

    True iff S_j(lambda(x)) >= -tol for every j = 1..k. This is the closure
    of the open cone where all the S_j are positive, which is the admissible
    domain of the k-Hessian operator.
    """
    if not isinstance(k, int) or k < 1 or k > x.dim:
        raise BadArgument(f"k must be an integer in 1..{x.dim}, got {k!r}")
    if tol < 0.0:
        raise BadArgument(f"tolerance must be >= 0, got {tol}")
    sums = elementary_symmetric_prefix(x.eigenvalues().tolist(), k)
    return all(s >= -tol for s in sums)


class BlockMatrix2N:
    """2N x 2N symmetric matrix [[E, B], [B^T, D]] kept as its blocks.

    E and D are symmetric N x N; B is a general N x N array. The assembled
    matrix is symmetric by construction.
    """

    __slots__ = ("E", "B", "D", "_assembled")

    def __init__(self, e: SymmetricMatrix, b, d: SymmetricMatrix):
        barr = np.asarray(b, dtype=float)
        if e.dim != d.dim:
            raise DimMismatch(f"E is {e.dim}x{e.dim} but D is {d.dim}x{d.dim}")
        if barr.shape != (e.dim, e.dim):
            raise DimMismatch(f"B must be {e.dim}x{e.dim}, got shape {barr.shape}")
        if not np.all(np.isfinite(barr)):
            raise InvalidMatrix("B entries must be finite")
        barr = barr.copy()
        barr.setflags(write=False)
        self.E = e
        self.B = barr
        self.D = d
        self._assembled = None

    @property
    def dim_half(self) -> int:
        return self.E.dim

    def assemble(self) -> SymmetricMatrix:
        if self._assembled is None:
            n = self.E.dim
            full = np.zeros((2 * n, 2 * n))
            full[:n, :n] = self.E.entries
            full[:n, n:] = self.B
            full[n:, :n] = self.B.T
            full[n:, n:] = self.D.entries
            self._assembled = SymmetricMatrix(full)
        return self._assembled

    def __repr__(self):
        return f"BlockMatrix2N(dim_half={self.dim_half})"


def block_compose(e: SymmetricMatrix, b, d: SymmetricMatrix) -> BlockMatrix2N:
    """Assemble blocks (E, B, D) into the 2N x 2N value [[E, B], [B^T, D]]."""
    return BlockMatrix2N(e, b, d)


def block_extract(a2n: SymmetricMatrix) -> tuple[SymmetricMatrix, np.ndarray, SymmetricMatrix]:
    """Split a 2N x 2N symmetric matrix into its (E, B, D) blocks."""
    if a2n.dim % 2 != 0:
        raise DimMismatch(f"block extraction needs an even dimension, got {a2n.dim}")
    n = a2n.dim // 2
    e = SymmetricMatrix(a2n.entries[:n, :n])
    b = a2n.entries[:n, n:].copy()
    b.setflags(write=False)
    d = SymmetricMatrix(a2n.entries[n:, n:])
    return e, b, d


# ---------------------------------------------------------------------------
# Matrix text / JSON formats. Writers emit repr(float), the shortest decimal
# that parses back to the exact same double, so read -> write -> read is bit
# exact for any decimal input of up to 17 significant digits.
# ---------------------------------------------------------------------------

def format_matrix_text(x: SymmetricMatrix) -> str:
    """First line N, then N rows of N whitespace-separated decimals."""
    lines = [str(x.dim)]
    for row in x.entries:
        lines.append(" ".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def parse_matrix_text(text: str) -> SymmetricMatrix:
    tokens_by_line = [line.split() for line in text.splitlines() if line.strip()]
    if not tokens_by_line:
        raise InvalidMatrix("empty matrix text")
    head = tokens_by_line[0]
    if len(head) != 1:
        raise InvalidMatrix(f"first line must be the dimension alone, got {head!r}")
    try:
        n = int(head[0])
    except ValueError as exc:
        raise InvalidMatrix(f"bad dimension {head[0]!r}") from exc
    if n < 1:
        raise InvalidMatrix(f"dimension must be positive, got {n}")
    rows = tokens_by_line[1:]
    if len(rows) != n:
        raise InvalidMatrix(f"expected {n} rows, got {len(rows)}")
    data = []
    for row in rows:
        if len(row) != n:
            raise InvalidMatrix(f"expected {n} entries per row, got {len(row)}")
        try:
            data.append([float(tok) for tok in row])
        except ValueError as exc:
            raise InvalidMatrix(f"bad entry in row {row!r}") from exc
    return SymmetricMatrix(np.array(data))


def matrix_to_json_obj(x: SymmetricMatrix) -> dict:
    return {"dim": x.dim, "rows": [[float(v) for v in row] for row in x.entries]}


def matrix_from_json_obj(obj) -> SymmetricMatrix:
    if not isinstance(obj, dict) or set(obj.keys()) != {"dim", "rows"}:
        raise InvalidMatrix(f"matrix JSON must have exactly the keys dim and rows, got {obj!r}")
    n = obj["dim"]
    rows = obj["rows"]
    if not isinstance(n, int) or n < 1:
        raise InvalidMatrix(f"dim must be a positive integer, got {n!r}")
    if not isinstance(rows, list) or len(rows) != n or any(len(r) != n for r in rows):
        raise InvalidMatrix(f"rows must be an {n}x{n} nested list")
    return SymmetricMatrix(np.array(rows, dtype=float))
