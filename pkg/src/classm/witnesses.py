"""Class U and Class M witness objects and the two lower-bound routes.

A Class U witness is a pair (lambda, H) strengthening degenerate ellipticity
by a lambda tr(M - B) + H(omega) gap. A Class M witness is one side g_i of
the weaker, per-side bound machinery: an increasing bijection t -> g_i(t, M)
whose zero crossing g_i(-, M)^{-1}(0), scaled onto the identity, bounds the
limit matrices of the improved two-sided block inequality.

Shipped witness families (all with closed-form inverse-at-zero):

  class_u_to_class_m   embeds any (lambda, H) pair as a (g1, g2) pair
  witness_p_laplace    the p-Laplace pair, separate branches for p >= 2
                       and 1 < p < 2
  witness_eig_sum      the eigenvalue-sum pair for H unbounded both ways

Every witness captures its jet point at construction; build a new witness to
change omega. Witness objects are immutable and evaluation is pure.

Note on signs: the embedding's g2 here is
    g2(t, M) = lambda t + lambda lambda_1(M) + H(omega) - F(omega, -M),
with a plus on lambda_1(M). That sign is forced by condition 4 (via
tr Y + tr M >= lambda_N(Y) + lambda_1(M) for -M <= Y) and it is the version
under which the direct corollary formulas below agree with
theorem_lower_bounds exactly. Similarly the eigenvalue-sum g2 sums
H(lambda_j(-M)) over j = 1..N-1, i.e. the N-1 smallest such values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import BadArgument, BadParams, DimMismatch, NotInClassM, OutOfDomain, ToolkitError
from .operators import GRAD_NORM_FLOOR, JetPoint, MonotoneFunction, OperatorDescriptor
from .symmat import SymmetricMatrix

BISECT_BRACKET = 1e9
BISECT_TOL = 1e-10


@dataclass(frozen=True)
class ClassUWitness:
    """A uniform-ellipticity witness: lambda > 0 and a locally bounded H(omega)."""

    lam: float
    H: Callable[[JetPoint], float]
    name: str = "class_u"

    def __post_init__(self):
        if not (math.isfinite(self.lam) and self.lam > 0.0):
            raise BadParams(f"lambda must be finite and > 0, got {self.lam}")


def class_u_constant(lam: float, h_const: float = 0.0) -> ClassUWitness:
    """Witness with constant H; the common case (H == 0 for linear operators)."""
    h_const = float(h_const)
    return ClassUWitness(float(lam), lambda _w: h_const,
                         name=f"class_u(lam={lam:g}, H={h_const:g})")


@dataclass(frozen=True)
class ClassMWitness:
    """One side (g1 or g2) of a Class M witness pair.

    ``eval_fn(t, M)`` must be an increasing bijection of R in t for each M in
    the domain; ``inv_at_zero_fn`` is its zero crossing in closed form, or
    None to fall back on bisection over [-1e9, 1e9] at tolerance 1e-10.
    ``domain_S`` restricts the matrices the witness is defined on (default:
    all of S(N)). ``context`` records the jet point the witness was built at.
    """

    name: str
    which: str
    eval_fn: Callable[[float, SymmetricMatrix], float] = field(repr=False)
    inv_at_zero_fn: Optional[Callable[[SymmetricMatrix], float]] = field(default=None, repr=False)
    domain_S: Callable[[SymmetricMatrix], bool] = field(default=lambda m: True, repr=False)
    context: Optional[JetPoint] = None

    def __post_init__(self):
        if self.which not in ("g1", "g2"):
            raise BadParams(f"which must be 'g1' or 'g2', got {self.which!r}")

    def _gate(self, m: SymmetricMatrix):
        if not self.domain_S(m):
            raise OutOfDomain(f"{self.name}: matrix is outside this witness's domain")

    def evaluate(self, t: float, m: SymmetricMatrix) -> float:
        self._gate(m)
        return float(self.eval_fn(float(t), m))

    def inv_at_zero(self, m: SymmetricMatrix) -> float:
        self._gate(m)
        if self.inv_at_zero_fn is not None:
            return float(self.inv_at_zero_fn(m))
        return bisect_inverse_at_zero(self.eval_fn, m)


def bisect_inverse_at_zero(eval_fn, m: SymmetricMatrix,
                           bracket: float = BISECT_BRACKET, tol: float = BISECT_TOL) -> float:
    """Zero crossing of t -> eval_fn(t, m) by bisection on [-bracket, bracket]."""
    lo, hi = -bracket, bracket
    flo, fhi = eval_fn(lo, m), eval_fn(hi, m)
    if flo > 0.0 or fhi < 0.0:
        raise BadArgument(
            f"no sign change on [{-bracket:g}, {bracket:g}]: f(lo)={flo:g}, f(hi)={fhi:g}"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if eval_fn(mid, m) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def class_u_to_class_m(op: OperatorDescriptor, w: ClassUWitness,
                       omega: JetPoint) -> tuple[ClassMWitness, ClassMWitness]:
    """Embed a Class U witness as a Class M pair at the given jet point.

      g1(t, M) = lam t - lam lambda_1(M) - H(omega) - F(omega, M)
      g2(t, M) = lam t + lam lambda_1(M) + H(omega) - F(omega, -M)

    with zero crossings
      g1(-, M)^{-1}(0) = (H(omega) + F(omega, M)) / lam + lambda_1(M)
      g2(-, M)^{-1}(0) = (F(omega, -M) - H(omega)) / lam - lambda_1(M).

    Matrices outside op's domain raise OutOfDomain when either member is
    evaluated (the witness domain is exactly where F itself is defined).
    """
    lam = w.lam
    h_val = float(w.H(omega))

    def g1_eval(t, m):
        return lam * t - lam * float(m.eigenvalues()[0]) - h_val - op.evaluate(omega, m)

    def g1_inv(m):
        return (h_val + op.evaluate(omega, m)) / lam + float(m.eigenvalues()[0])

    def g2_eval(t, m):
        return lam * t + lam * float(m.eigenvalues()[0]) + h_val - op.evaluate(omega, m.negated())

    def g2_inv(m):
        return (op.evaluate(omega, m.negated()) - h_val) / lam - float(m.eigenvalues()[0])

    g1 = ClassMWitness(
        name=f"class_u_g1[{op.name}]", which="g1", eval_fn=g1_eval, inv_at_zero_fn=g1_inv,
        domain_S=lambda m: op.in_domain(omega, m), context=omega,
    )
    g2 = ClassMWitness(
        name=f"class_u_g2[{op.name}]", which="g2", eval_fn=g2_eval, inv_at_zero_fn=g2_inv,
        domain_S=lambda m: op.in_domain(omega, m.negated()), context=omega,
    )
    return g1, g2


def witness_p_laplace(p: float, omega: JetPoint,
                      homogeneous: bool = False) -> tuple[ClassMWitness, ClassMWitness]:
    """The p-Laplace witness pair at omega; exists iff p is in (1, inf).

    For p >= 2:
      g1(t, M) = |nu|^(p-2) [t + (N+p-3) lambda_N(M)],   inverse at zero
      -(N+p-3) lambda_N(M), and g2 the mirrored pair with +(N+p-3) lambda_N(M).
    For 1 < p < 2 the slope is (p-1) and the coefficient (N-1), giving
      -(N-1)/(p-1) lambda_N(M).

    With ``homogeneous`` the |nu|^(p-2) prefactor is dropped, which leaves
    every inverse at zero unchanged.
    """
    p = float(p)
    if not math.isfinite(p) or p <= 1.0:
        raise NotInClassM(f"the p-Laplace operator has a witness pair iff 1 < p < inf, got p={p}")
    nn = float(np.linalg.norm(omega.nu))
    if nn < GRAD_NORM_FLOOR:
        raise OutOfDomain("p-Laplace witnesses need a nonzero gradient slot")
    n = omega.dim
    coef = 1.0 if homogeneous else nn ** (p - 2.0)
    if p >= 2.0:
        slope, kappa = 1.0, float(n + p - 3.0)
    else:
        slope, kappa = p - 1.0, float(n - 1)

    def domain(m):
        if m.dim != n:
            raise DimMismatch(f"witness built for dim {n}, got a {m.dim}x{m.dim} matrix")
        return True

    def make(which, sign):
        def g_eval(t, m):
            return coef * (slope * t + sign * kappa * float(m.eigenvalues()[-1]))

        def g_inv(m):
            return -sign * (kappa / slope) * float(m.eigenvalues()[-1])

        tag = "homog_" if homogeneous else ""
        return ClassMWitness(name=f"p_laplace_{tag}{which}(p={p:g})", which=which,
                             eval_fn=g_eval, inv_at_zero_fn=g_inv, domain_S=domain,
                             context=omega)

    return make("g1", +1.0), make("g2", -1.0)


def witness_eig_sum(h: MonotoneFunction) -> tuple[ClassMWitness, ClassMWitness]:
    """The eigenvalue-sum witness pair; exists iff H is unbounded both ways.

      g1(t, M) = H(t) + sum_{j=2}^{N} H(lambda_j(M))
      g2(t, M) = H(t) + sum_{j=1}^{N-1} H(lambda_j(-M))

    so g1(-, M)^{-1}(0) = H^{-1}(-sum_{j>=2} H(lambda_j(M))) and likewise for
    g2. Context-free: the operator never reads the jet point.
    """
    if not isinstance(h, MonotoneFunction):
        raise BadParams("witness_eig_sum expects a MonotoneFunction")
    if not h.unbounded:
        raise NotInClassM(
            f"eig_sum({h.name}) has a witness pair iff H is unbounded above and below"
        )

    def tail_sum_g1(m):
        evals = m.eigenvalues()
        return sum(h.forward(float(v)) for v in evals[1:])

    def tail_sum_g2(m):
        neg_evals = sorted(-float(v) for v in m.eigenvalues())
        return sum(h.forward(v) for v in neg_evals[:-1])

    g1 = ClassMWitness(
        name=f"eig_sum_g1({h.name})", which="g1",
        eval_fn=lambda t, m: h.forward(t) + tail_sum_g1(m),
        inv_at_zero_fn=lambda m: h.inverse(-tail_sum_g1(m)),
    )
    g2 = ClassMWitness(
        name=f"eig_sum_g2({h.name})", which="g2",
        eval_fn=lambda t, m: h.forward(t) + tail_sum_g2(m),
        inv_at_zero_fn=lambda m: h.inverse(-tail_sum_g2(m)),
    )
    return g1, g2


@dataclass(frozen=True)
class BoundReport:
    """Scalar lower bounds c with cI <= X and cI <= -Y, plus diagnostics.

    ``upper_block_ok`` records the Loewner check diag(X, -Y) <= A when the
    full pipeline ran it; bound-only routes leave it True and note
    ``block_checked: False`` in the details.
    """

    lower_X: float
    lower_negY: float
    upper_block_ok: bool
    witness: str
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (math.isfinite(self.lower_X) and math.isfinite(self.lower_negY)):
            raise ToolkitError("bound report scalars must be finite")

    def to_json_obj(self) -> dict:
        return {
            "type": "bound_report",
            "lower_X": self.lower_X,
            "lower_negY": self.lower_negY,
            "upper_block_ok": self.upper_block_ok,
            "witness": self.witness,
            "details": self.details,
        }


def auto_witness_pair(op: OperatorDescriptor, omega_x: JetPoint, omega_y: JetPoint,
                      lam: Optional[float] = None,
                      h_const: float = 0.0) -> tuple[ClassMWitness, ClassMWitness]:
    """Canonical witness pair for a catalog operator.

    p-Laplace families get their dedicated pair (g1 at omega_x, g2 at
    omega_y); eigenvalue sums get theirs; linear_uniform and sqrt_gradient go
    through the Class U embedding (lam defaults to theta, resp. 1). Any other
    operator uses the embedding when ``lam`` is given and otherwise raises
    NotInClassM, as do the families with no witness pair at all.
    """
    fam = op.family
    if fam in ("p_laplace", "p_laplace_homog"):
        homog = fam == "p_laplace_homog"
        g1 = witness_p_laplace(op.params["p"], omega_x, homogeneous=homog)[0]
        g2 = witness_p_laplace(op.params["p"], omega_y, homogeneous=homog)[1]
        return g1, g2
    if fam == "eig_sum":
        return witness_eig_sum(op.params["h"])
    if lam is None and fam == "linear_uniform":
        lam = op.params["theta"]
    if lam is None and fam == "sqrt_gradient":
        lam = 1.0
    if lam is not None:
        w = class_u_constant(lam, h_const)
        g1 = class_u_to_class_m(op, w, omega_x)[0]
        g2 = class_u_to_class_m(op, w, omega_y)[1]
        return g1, g2
    raise NotInClassM(f"no shipped witness pair for {op.name}")


def theorem_lower_bounds(g1: ClassMWitness, g2: ClassMWitness,
                         e: SymmetricMatrix, d: SymmetricMatrix) -> BoundReport:
    """Bounds from the witness route: g1(-, E)^{-1}(0) I <= X and
    -[g2(-, D)^{-1}(0)] I <= -Y."""
    lower_x = g1.inv_at_zero(e)
    lower_neg_y = -g2.inv_at_zero(d)
    return BoundReport(
        lower_X=lower_x,
        lower_negY=lower_neg_y,
        upper_block_ok=True,
        witness=f"{g1.name} / {g2.name}",
        details={"route": "theorem", "block_checked": False,
                 "lambda_min_E": float(e.eigenvalues()[0]),
                 "lambda_max_D": float(d.eigenvalues()[-1])},
    )


def corollary_bounds(op: OperatorDescriptor, w: ClassUWitness,
                     wx: JetPoint, wy: JetPoint,
                     e: SymmetricMatrix, d: SymmetricMatrix) -> BoundReport:
    """Direct bounds for Class U operators:

      lower_X    = (H(wx) + F(wx, E)) / lam + lambda_1(E)
      lower_negY = (H(wy) - F(wy, -D)) / lam - lambda_N(-D)

    Equal (exactly, not just numerically) to theorem_lower_bounds applied to
    the class_u_to_class_m pair built at wx and wy.
    """
    lam = w.lam
    neg_d = d.negated()
    lower_x = (float(w.H(wx)) + op.evaluate(wx, e)) / lam + float(e.eigenvalues()[0])
    lower_neg_y = (float(w.H(wy)) - op.evaluate(wy, neg_d)) / lam - float(neg_d.eigenvalues()[-1])
    return BoundReport(
        lower_X=lower_x,
        lower_negY=lower_neg_y,
        upper_block_ok=True,
        witness=f"{w.name}[{op.name}]",
        details={"route": "corollary", "block_checked": False, "lam": lam},
    )
