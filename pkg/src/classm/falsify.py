"""Property checking and counterexample reproduction with certificates.

Three seeded checkers sample the defining inequalities of degenerate
ellipticity, the uniform-ellipticity gap, and the four per-side witness
conditions. Each checker first walks a deterministic ladder of adversarial
probes (the constructions that actually break non-members: gradients in the
nullspace of Y - X, spike matrices diag(1, 0, ..., 0, c), the double-spike
diag(-n, -n, 1, ..., 1), and scalar ladders c I vs 0) and then runs seeded
random trials. Trials are enumerated deterministically (probes first, then
random indices with per-index generator streams), so identical configs give
identical reports regardless of how trials would be scheduled.

`counterexample` reproduces the named deterministic constructions and emits
a Certificate. Certificates are self-verifying: `reverify()` recomputes the
stored margin from the stored objects. Divergence-style certificates state
literal facts only (a value stays constant or bounded while an extreme
eigenvalue runs away); the step from such a fact to "no witness exists" is a
one-line argument recorded in the certificate description, not something a
finite test can quantify over.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import BadArgument, BadParams, SamplingExhausted, ToolkitError
from .operators import (
    JetPoint,
    MonotoneFunction,
    OperatorDescriptor,
    arctan_monotone,
    eig_sum,
    inf_laplace,
    inf_laplace_homog,
    odd_root_monotone,
    p_laplace,
    unit_jet,
)
from .symmat import SymmetricMatrix, elementary_symmetric, matrix_to_json_obj
from .witnesses import ClassMWitness, ClassUWitness

# A sampled inequality must fail by more than this to count as a violation;
# smaller discrepancies are numerical noise.
VIOLATION_MARGIN = 1e-8

RESAMPLE_CAP = 100_000

_LADDER_EXPONENTS = range(0, 41)

_COND1_GRID = (-1e6, -1e4, -1e2, -1.0, -1e-2, 0.0, 1e-2, 1.0, 1e2, 1e4, 1e6)

# Random-trial stream tags; deterministic probes use no randomness at all.
_PHASE_TRIALS = 1
_PHASE_COND1 = 2
_PHASE_COND2 = 3


@dataclass(frozen=True)
class SampleConfig:
    seed: int
    trials: int = 10_000
    scale: float = 1.0
    dim: int = 3

    def __post_init__(self):
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise BadArgument(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if self.trials < 1:
            raise BadArgument(f"trials must be >= 1, got {self.trials}")
        if not self.scale > 0.0:
            raise BadArgument(f"scale must be > 0, got {self.scale}")
        if self.dim < 1:
            raise BadArgument(f"dim must be >= 1, got {self.dim}")

    def to_json_obj(self) -> dict:
        return {"seed": self.seed, "trials": self.trials, "scale": self.scale, "dim": self.dim}


@dataclass(frozen=True)
class PassReport:
    kind: str
    trials: int
    probes: int
    config: dict
    details: dict = field(default_factory=dict)

    def to_json_obj(self) -> dict:
        return {"type": "pass_report", "kind": self.kind, "trials": self.trials,
                "probes": self.probes, "config": self.config, "details": self.details}


@dataclass(frozen=True)
class Certificate:
    """A concrete, re-checkable instance demonstrating a claim.

    ``witnesses`` holds the matrices/vectors/scalars involved;
    ``inequality_values`` the two sides; ``margin`` the demonstrated gap.
    ``reverify()`` recomputes the margin from the stored objects and must
    reproduce it to 1e-10.
    """

    kind: str
    witnesses: dict
    inequality_values: dict
    margin: float
    trial_index: Optional[int] = None
    description: str = ""
    recheck: Optional[Callable[[], float]] = field(default=None, repr=False, compare=False)

    def reverify(self) -> float:
        if self.recheck is None:
            raise ToolkitError(f"certificate {self.kind} carries no recheck closure")
        value = float(self.recheck())
        if abs(value - self.margin) > 1e-10:
            raise ToolkitError(
                f"certificate {self.kind} failed reverification: stored {self.margin!r}, "
                f"recomputed {value!r}"
            )
        return value

    def to_json_obj(self) -> dict:
        return {
            "type": "certificate",
            "kind": self.kind,
            "witnesses": {k: _jsonable(v) for k, v in self.witnesses.items()},
            "inequality_values": {k: _jsonable(v) for k, v in self.inequality_values.items()},
            "margin": self.margin,
            "trial_index": self.trial_index,
            "description": self.description,
        }


def _jsonable(value):
    if isinstance(value, SymmetricMatrix):
        return matrix_to_json_obj(value)
    if isinstance(value, JetPoint):
        return {"x": [float(v) for v in value.x], "r": value.r,
                "nu": [float(v) for v in value.nu]}
    if isinstance(value, MonotoneFunction):
        return value.name
    if isinstance(value, np.ndarray):
        return [float(v) for v in value]
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    return value


def _rng(seed: int, phase: int, index: int) -> np.random.Generator:
    return np.random.default_rng((seed, phase, index))


def _sym_draw(rng, n: int, scale: float) -> SymmetricMatrix:
    raw = rng.uniform(-scale, scale, (n, n))
    return SymmetricMatrix((raw + raw.T) / 2.0)


def _psd_draw(rng, n: int, scale: float) -> np.ndarray:
    p = rng.uniform(-scale, scale, (n, n))
    return p.T @ p


def _jet_draw(rng, n: int, scale: float) -> JetPoint:
    x = rng.uniform(-scale, scale, n)
    r = float(rng.uniform(-scale, scale))
    for _ in range(64):
        nu = rng.uniform(-scale, scale, n)
        if float(np.linalg.norm(nu)) >= 1e-6:
            return JetPoint(x, r, nu)
    raise SamplingExhausted("could not draw a usable gradient slot")


def _spike_low(n: int, c: float) -> SymmetricMatrix:
    """diag(1, 0, ..., 0, c)."""
    return SymmetricMatrix.diagonal([1.0] + [0.0] * (n - 2) + [c])


def _double_spike(n: int, m: float) -> SymmetricMatrix:
    """diag(-m, -m, 1, ..., 1)."""
    return SymmetricMatrix.diagonal([-m, -m] + [1.0] * (n - 2))


def _ones_tail(n: int, c: float) -> SymmetricMatrix:
    """diag(1, ..., 1, c)."""
    return SymmetricMatrix.diagonal([1.0] * (n - 1) + [c])


# ---------------------------------------------------------------------------
# Degenerate ellipticity
# ---------------------------------------------------------------------------

def check_degenerate_ellipticity(op: OperatorDescriptor, cfg: SampleConfig):
    """Sample (omega, X, Y = X + P^T P) in the domain and test F(X) >= F(Y).

    Returns a PassReport, or the Certificate of the first (smallest trial
    index) violation beyond VIOLATION_MARGIN. Domain-violating draws are
    redrawn, up to RESAMPLE_CAP attempts per trial.
    """
    for idx in range(cfg.trials):
        rng = _rng(cfg.seed, _PHASE_TRIALS, idx)
        for _attempt in range(RESAMPLE_CAP):
            omega = _jet_draw(rng, cfg.dim, cfg.scale)
            x = _sym_draw(rng, cfg.dim, cfg.scale)
            if not op.in_domain(omega, x):
                continue
            y = SymmetricMatrix(x.entries + _psd_draw(rng, cfg.dim, cfg.scale))
            if not op.in_domain(omega, y):
                continue
            break
        else:
            raise SamplingExhausted(
                f"{op.name}: no admissible (omega, X, Y) in {RESAMPLE_CAP} draws"
            )
        fx = op.evaluate(omega, x)
        fy = op.evaluate(omega, y)
        if fx < fy - VIOLATION_MARGIN:
            return Certificate(
                kind="ellipticity.violation",
                witnesses={"omega": omega, "X": x, "Y": y, "operator": op.name},
                inequality_values={"F_X": fx, "F_Y": fy},
                margin=fy - fx,
                trial_index=idx,
                description="X <= Y but F(omega, X) < F(omega, Y); "
                            "degenerate ellipticity requires F(omega, X) >= F(omega, Y)",
                recheck=lambda: op.evaluate(omega, y) - op.evaluate(omega, x),
            )
    return PassReport(
        kind="degenerate_ellipticity", trials=cfg.trials, probes=0,
        config=cfg.to_json_obj(), details={"operator": op.name},
    )


# ---------------------------------------------------------------------------
# Class U
# ---------------------------------------------------------------------------

def _class_u_probes(cfg: SampleConfig):
    """Deterministic (omega, B, M) probes aimed at the uniform gap.

    The decisive direction puts nu in the nullspace of M - B: with B = 0 and
    M supported away from nu, F(B) - F(M) collapses while tr(M - B) keeps
    growing. Gradient magnitudes sweep 2^-20 .. 2^20 to cover both p > 2 and
    p < 2 prefactor regimes.
    """
    n = cfg.dim
    probes = []
    axes = [0, n - 1] if n >= 2 else [0]
    zero = SymmetricMatrix.zero(n)
    for cexp in (-20, -10, 0, 10, 20):
        c = 2.0 ** cexp
        for axis in axes:
            base = unit_jet(n, axis=axis)
            omega = JetPoint(base.x, base.r, base.nu * c)
            for lexp in (0, 10, 20, 40):
                ell = 2.0 ** lexp
                shapes = [SymmetricMatrix(ell * np.eye(n))]
                if n >= 2:
                    tail = np.zeros(n)
                    tail[-1 if axis == 0 else 0] = ell
                    shapes.append(SymmetricMatrix.diagonal(tail))
                for m in shapes:
                    probes.append((omega, zero, m))
    return probes


def check_class_u(op: OperatorDescriptor, w: ClassUWitness, cfg: SampleConfig):
    """Check F(omega, B) - F(omega, M) >= lam tr(M - B) + H(omega) on B <= M.

    Walks the deterministic probe ladder first, then samples random ordered
    pairs (B = M - P^T P). Returns PassReport or the first violation as a
    Certificate.
    """
    probes = _class_u_probes(cfg)

    def run_one(omega, b, m, index):
        if not (op.in_domain(omega, b) and op.in_domain(omega, m)):
            return None
        lhs = op.evaluate(omega, b) - op.evaluate(omega, m)
        rhs = w.lam * (m.trace() - b.trace()) + float(w.H(omega))
        if lhs < rhs - VIOLATION_MARGIN:
            return Certificate(
                kind="class_u.violation",
                witnesses={"omega": omega, "B": b, "M": m, "lam": w.lam,
                           "H_omega": float(w.H(omega)), "operator": op.name},
                inequality_values={"F_B_minus_F_M": lhs, "gap_required": rhs},
                margin=rhs - lhs,
                trial_index=index,
                description="B <= M but the uniform-ellipticity gap "
                            "lam tr(M - B) + H(omega) is not met",
                recheck=lambda: (w.lam * (m.trace() - b.trace()) + float(w.H(omega)))
                                - (op.evaluate(omega, b) - op.evaluate(omega, m)),
            )
        return None

    for index, (omega, b, m) in enumerate(probes):
        cert = run_one(omega, b, m, index)
        if cert is not None:
            return cert

    base = len(probes)
    for idx in range(cfg.trials):
        rng = _rng(cfg.seed, _PHASE_TRIALS, idx)
        for _attempt in range(RESAMPLE_CAP):
            omega = _jet_draw(rng, cfg.dim, cfg.scale)
            m = _sym_draw(rng, cfg.dim, cfg.scale)
            b = SymmetricMatrix(m.entries - _psd_draw(rng, cfg.dim, cfg.scale))
            if op.in_domain(omega, b) and op.in_domain(omega, m):
                break
        else:
            raise SamplingExhausted(f"{op.name}: no admissible (B, M) in {RESAMPLE_CAP} draws")
        cert = run_one(omega, b, m, base + idx)
        if cert is not None:
            return cert
    return PassReport(
        kind="class_u", trials=cfg.trials, probes=base,
        config=cfg.to_json_obj(),
        details={"operator": op.name, "witness": w.name},
    )


# ---------------------------------------------------------------------------
# Class M (conditions 1 to 4)
# ---------------------------------------------------------------------------

def _witness_omega(g: ClassMWitness, cfg: SampleConfig) -> JetPoint:
    if g.context is not None:
        if g.context.dim != cfg.dim:
            raise BadArgument(
                f"witness context dim {g.context.dim} does not match config dim {cfg.dim}"
            )
        return g.context
    return unit_jet(cfg.dim)


def _in_domain_s(g: ClassMWitness, m: SymmetricMatrix) -> bool:
    try:
        return bool(g.domain_S(m))
    except BadParams:
        return False


def check_class_m(op: OperatorDescriptor, g1: ClassMWitness, g2: ClassMWitness,
                  cfg: SampleConfig):
    """Check witness conditions 1 to 4 for (g1, g2) against the operator.

    Condition 1: monotone bijection of t on a log grid spanning +-1e6, with a
    growth probe at the ends. Condition 2: continuity of M -> g(-, M)^{-1}(0)
    under shrinking perturbations (a Hoelder-tolerant two-scale test).
    Conditions 3 and 4: the per-side inequalities, first on a deterministic
    divergence ladder (lambda_1 walking to -infinity along the constructions
    that break non-members) and then on random ordered pairs. Returns a
    PassReport or the first violation as a Certificate naming the condition.
    """
    omega1 = _witness_omega(g1, cfg)
    omega2 = _witness_omega(g2, cfg)
    n = cfg.dim
    probe_count = 0

    # Condition 1 on sampled matrices.
    for i in range(min(32, cfg.trials)):
        rng = _rng(cfg.seed, _PHASE_COND1, i)
        m = _sym_draw(rng, n, cfg.scale)
        for g in (g1, g2):
            if not _in_domain_s(g, m):
                continue
            probe_count += 1
            vals = [g.evaluate(t, m) for t in _COND1_GRID]
            for pos in range(len(vals) - 1):
                if not vals[pos + 1] > vals[pos]:
                    ta, tb = _COND1_GRID[pos], _COND1_GRID[pos + 1]
                    return Certificate(
                        kind="class_m.condition1",
                        witnesses={"witness": g.name, "M": m, "t_lo": ta, "t_hi": tb},
                        inequality_values={"g_lo": vals[pos], "g_hi": vals[pos + 1]},
                        margin=vals[pos] - vals[pos + 1],
                        description=f"t -> {g.which}(t, M) is not strictly increasing "
                                    f"between t = {ta:g} and t = {tb:g}",
                        recheck=lambda g=g, m=m, ta=ta, tb=tb:
                            g.evaluate(ta, m) - g.evaluate(tb, m),
                    )
            lo_gap = abs(vals[1] - vals[0])
            hi_gap = abs(vals[-1] - vals[-2])
            if lo_gap <= 1e-6 * (1.0 + abs(vals[1])) or hi_gap <= 1e-6 * (1.0 + abs(vals[-2])):
                return Certificate(
                    kind="class_m.condition1",
                    witnesses={"witness": g.name, "M": m},
                    inequality_values={"low_end_gap": lo_gap, "high_end_gap": hi_gap},
                    margin=min(lo_gap, hi_gap),
                    description=f"{g.which}(t, M) shows no growth between the 1e4 and 1e6 "
                                "grid ends; an increasing bijection of R must keep growing",
                    recheck=lambda g=g, m=m: min(
                        abs(g.evaluate(_COND1_GRID[1], m) - g.evaluate(_COND1_GRID[0], m)),
                        abs(g.evaluate(_COND1_GRID[-1], m) - g.evaluate(_COND1_GRID[-2], m))),
                )

    # Condition 2: two-scale continuity probe for the inverse at zero. The
    # fine perturbation is 1000x smaller; a continuous (even merely Hoelder)
    # map settles well below 0.75x the coarse response, a jump does not.
    for i in range(min(16, cfg.trials)):
        rng = _rng(cfg.seed, _PHASE_COND2, i)
        m = _sym_draw(rng, n, cfg.scale)
        direction = _sym_draw(rng, n, 1.0)
        dscale = float(np.max(np.abs(direction.entries)))
        if dscale == 0.0:
            continue
        direction = direction.scaled(1.0 / dscale)
        for g in (g1, g2):
            coarse = SymmetricMatrix(m.entries + 1e-2 * direction.entries)
            fine = SymmetricMatrix(m.entries + 1e-5 * direction.entries)
            if not (_in_domain_s(g, m) and _in_domain_s(g, coarse) and _in_domain_s(g, fine)):
                continue
            probe_count += 1
            base = g.inv_at_zero(m)
            d_coarse = abs(g.inv_at_zero(coarse) - base)
            d_fine = abs(g.inv_at_zero(fine) - base)
            if d_fine > max(0.75 * d_coarse, 1e-7):
                return Certificate(
                    kind="class_m.condition2",
                    witnesses={"witness": g.name, "M": m, "direction": direction},
                    inequality_values={"response_coarse": d_coarse, "response_fine": d_fine},
                    margin=d_fine - 0.75 * d_coarse,
                    description="M -> g(-, M)^{-1}(0) did not settle under a 1000x smaller "
                                "perturbation; the map looks discontinuous at M",
                    recheck=lambda g=g, m=m, coarse=coarse, fine=fine:
                        abs(g.inv_at_zero(fine) - g.inv_at_zero(m))
                        - 0.75 * abs(g.inv_at_zero(coarse) - g.inv_at_zero(m)),
                )

    def cond3_check(x, m, index):
        if not (_in_domain_s(g1, m) and op.in_domain(omega1, x)):
            return None
        lhs = -op.evaluate(omega1, x)
        rhs = g1.evaluate(float(x.eigenvalues()[0]), m)
        if lhs > rhs + VIOLATION_MARGIN:
            return Certificate(
                kind="class_m.condition3",
                witnesses={"omega": omega1, "X": x, "M": m,
                           "operator": op.name, "witness": g1.name},
                inequality_values={"neg_F": lhs, "g1_at_lambda1": rhs},
                margin=lhs - rhs,
                trial_index=index,
                description="X <= M but -F(omega, X) > g1(lambda_1(X), M)",
                recheck=lambda: (-op.evaluate(omega1, x)
                                 - g1.evaluate(float(x.eigenvalues()[0]), m)),
            )
        return None

    def cond4_check(y, m, index):
        if not (_in_domain_s(g2, m) and op.in_domain(omega2, y)):
            return None
        lhs = -op.evaluate(omega2, y)
        rhs = g2.evaluate(float(y.eigenvalues()[-1]), m)
        if lhs < rhs - VIOLATION_MARGIN:
            return Certificate(
                kind="class_m.condition4",
                witnesses={"omega": omega2, "Y": y, "M": m,
                           "operator": op.name, "witness": g2.name},
                inequality_values={"neg_F": lhs, "g2_at_lambdaN": rhs},
                margin=rhs - lhs,
                trial_index=index,
                description="-Y <= M but -F(omega, Y) < g2(lambda_N(Y), M)",
                recheck=lambda: (g2.evaluate(float(y.eigenvalues()[-1]), m)
                                 - (-op.evaluate(omega2, y))),
            )
        return None

    # Deterministic divergence ladder: lambda_1(X) walks to -infinity along
    # fixed constructions while each pair stays ordered (X <= M exactly).
    identity = SymmetricMatrix.identity(n)
    zero = SymmetricMatrix.zero(n)
    for j in _LADDER_EXPONENTS:
        c = 2.0 ** j
        ladder = [(SymmetricMatrix(-c * np.eye(n)), zero)]
        if n >= 2:
            ladder.append((_spike_low(n, -c), identity))
            ladder.append((_double_spike(n, c), identity))
            ladder.append((_ones_tail(n, -c), identity))
        for x, m in ladder:
            probe_count += 1
            cert = cond3_check(x, m, None)
            if cert is not None:
                return cert
            cert = cond4_check(x.negated(), m, None)
            if cert is not None:
                return cert

    # Random ordered pairs for conditions 3 and 4.
    for idx in range(cfg.trials):
        rng = _rng(cfg.seed, _PHASE_TRIALS, idx)
        for _attempt in range(RESAMPLE_CAP):
            m = _sym_draw(rng, n, cfg.scale)
            x = SymmetricMatrix(m.entries - _psd_draw(rng, n, cfg.scale))
            if _in_domain_s(g1, m) and op.in_domain(omega1, x):
                break
        else:
            raise SamplingExhausted("no admissible (X, M) pair for condition 3")
        cert = cond3_check(x, m, idx)
        if cert is not None:
            return cert
        for _attempt in range(RESAMPLE_CAP):
            y = SymmetricMatrix(_psd_draw(rng, n, cfg.scale) - m.entries)
            if _in_domain_s(g2, m) and op.in_domain(omega2, y):
                break
            m = _sym_draw(rng, n, cfg.scale)
        else:
            raise SamplingExhausted("no admissible (Y, M) pair for condition 4")
        cert = cond4_check(y, m, idx)
        if cert is not None:
            return cert

    return PassReport(
        kind="class_m", trials=cfg.trials, probes=probe_count,
        config=cfg.to_json_obj(),
        details={"operator": op.name, "g1": g1.name, "g2": g2.name},
    )


# ---------------------------------------------------------------------------
# Deterministic counterexample catalog
# ---------------------------------------------------------------------------

def _cert_inf_laplace(dim: int = 2, c: float = -1e6, homogeneous: bool = False) -> Certificate:
    if dim < 2:
        raise BadParams("the spike construction needs dim >= 2")
    if c > 0.0:
        raise BadParams(f"c must be <= 0, got {c}")
    op = inf_laplace_homog() if homogeneous else inf_laplace()
    omega = unit_jet(dim)
    grid = sorted({0.0, -1.0, -1e3, float(c)}, reverse=True)
    rows = []
    for cval in grid:
        x = _spike_low(dim, cval)
        value = -op.evaluate(omega, x)
        if value != 1.0:
            raise ToolkitError(f"expected -F = 1 exactly, got {value!r}")
        rows.append({"c": cval, "neg_F": value, "lambda1": float(x.eigenvalues()[0])})
    x_last = _spike_low(dim, grid[-1])
    return Certificate(
        kind="counterexample.inf_laplace",
        witnesses={"omega": omega, "X_at_cmin": x_last, "M": SymmetricMatrix.identity(dim)},
        inequality_values={"neg_F_constant": 1.0, "lambda1_at_cmin": grid[-1], "grid": rows},
        margin=1.0 - grid[-1],
        description="-F(e1, diag(1, 0, ..., 0, c)) = 1 for every c <= 0 while lambda_1 = c "
                    "runs to -infinity; any increasing bijection g1(., I) eventually drops "
                    "below 1, so condition 3 cannot hold",
        recheck=lambda: -op.evaluate(omega, x_last) - float(x_last.eigenvalues()[0]),
    )


def _sk_bruteforce(values, k: int):
    """Subset-enumeration oracle for S_k; exact on integer input."""
    from itertools import combinations

    total = 0
    for combo in combinations(values, k):
        prod = 1
        for v in combo:
            prod = prod * v
        total += prod
    return total


def _khessian_formula(n: int, k: int, m: int) -> int:
    return (math.comb(n - 2, k - 2) * m * m
            - 2 * math.comb(n - 2, k - 1) * m
            + math.comb(n - 2, k))


def _cert_k_hessian(dim: int = 3, k: int = 2, n: int = 5) -> Certificate:
    if dim < 2 or not (2 <= k <= dim):
        raise BadParams(f"need dim >= 2 and 2 <= k <= dim, got dim={dim}, k={k}")
    if not isinstance(n, int) or n < 1:
        raise BadParams(f"n must be a positive integer, got {n!r}")
    rows = []
    for step in range(5):
        nn = n * 2**step
        vals = [-nn, -nn] + [1] * (dim - 2)
        recurrence = elementary_symmetric(k, vals)
        brute = _sk_bruteforce(vals, k)
        formula = _khessian_formula(dim, k, nn)
        if not (recurrence == brute == formula):
            raise ToolkitError(
                f"S_{k} mismatch at n={nn}: recurrence {recurrence}, brute {brute}, "
                f"binomial {formula}"
            )
        rows.append({"n": nn, "neg_F": formula, "lambda1": -nn})
    n_last = n * 2**4
    x_last = _double_spike(dim, float(n_last))
    return Certificate(
        kind="counterexample.k_hessian",
        witnesses={"X_at_nmax": x_last, "M": SymmetricMatrix.identity(dim),
                   "k": k, "n": n},
        inequality_values={"grid": rows,
                           "neg_F_at_nmax": float(_khessian_formula(dim, k, n_last)),
                           "lambda1_at_nmax": float(-n_last)},
        margin=float(_khessian_formula(dim, k, n_last) + n_last),
        description="-F_k(diag(-n, -n, 1, ..., 1)) = C(N-2,k-2) n^2 - 2 C(N-2,k-1) n + "
                    "C(N-2,k) grows to +infinity while lambda_1 = -n runs to -infinity, so "
                    "no increasing bijection can dominate it along the ladder; the binomial "
                    "value is cross-checked against exact subset enumeration",
        recheck=lambda: float(_sk_bruteforce([-n_last, -n_last] + [1] * (dim - 2), k)
                              + n_last),
    )


def _cert_p1_laplace(dim: int = 4, c: float = -100.0) -> Certificate:
    if dim < 2:
        raise BadParams("need dim >= 2")
    if c > 0.0:
        raise BadParams(f"c must be <= 0, got {c}")
    op = p_laplace(1)
    omega = unit_jet(dim, axis=dim - 1)
    grid = sorted({0.0, -1.0, -1e3, float(c)}, reverse=True)
    rows = []
    expected = float(dim - 1)
    for cval in grid:
        x = _ones_tail(dim, cval)
        value = -op.evaluate(omega, x)
        if value != expected:
            raise ToolkitError(f"expected -F_1 = {expected} exactly, got {value!r}")
        rows.append({"c": cval, "neg_F": value, "lambda1": min(cval, 1.0)})
    x_last = _ones_tail(dim, grid[-1])
    return Certificate(
        kind="counterexample.p1_laplace",
        witnesses={"omega": omega, "X_at_cmin": x_last, "M": SymmetricMatrix.identity(dim)},
        inequality_values={"neg_F_constant": expected, "lambda1_at_cmin": grid[-1],
                           "grid": rows},
        margin=expected - grid[-1],
        description="-F_1(e_N, diag(1, ..., 1, c)) = (N-1+c) - c = N-1 for every c <= 0 "
                    "while lambda_1 = c runs to -infinity; as with the inf-Laplacian this "
                    "contradicts condition 3 for any candidate g1",
        recheck=lambda: -op.evaluate(omega, x_last) - grid[-1],
    )


def _cert_power_not_u(d: int = 3, dim: int = 2, lam: float = 1.0,
                      h_const: float = 0.0) -> Certificate:
    if dim < 2:
        raise BadParams("need dim >= 2")
    if not lam > 0.0:
        raise BadParams(f"lam must be > 0, got {lam}")
    op = eig_sum(odd_root_monotone(d))
    omega = unit_jet(dim)
    zero = SymmetricMatrix.zero(dim)
    k_const = float(h_const)
    for j in range(0, 120):
        n = 2.0 ** j
        x = SymmetricMatrix.diagonal([-n] + [-1.0 / n] * (dim - 1))
        lhs = op.evaluate(omega, x) - op.evaluate(omega, zero)
        rhs = lam * (zero.trace() - x.trace()) + k_const
        if lhs < rhs - max(VIOLATION_MARGIN, 1e-8 * abs(rhs)):
            return Certificate(
                kind="class_u.violation",
                witnesses={"omega": omega, "B": x, "M": zero, "lam": lam,
                           "H_omega": k_const, "operator": op.name, "n": n},
                inequality_values={"F_B_minus_F_M": lhs, "gap_required": rhs},
                margin=rhs - lhs,
                description=f"X_n = -diag(n, 1/n, ..., 1/n) with n = {n:g}: the gap "
                            "lam tr(-X_n) + K grows like lam n but F(X_n) - F(0) only like "
                            "n^(1/d), so the uniform-ellipticity inequality fails",
                recheck=lambda: (lam * (zero.trace() - x.trace()) + k_const)
                                - (op.evaluate(omega, x) - op.evaluate(omega, zero)),
            )
    raise ToolkitError("no violating n found below 2^120; lam may be denormal")


def _cert_p_laplace_not_u(p: float = 4.0, dim: int = 2, lam: float = 1.0,
                          h_const: float = 0.0) -> Certificate:
    p = float(p)
    if p == 2.0:
        raise BadParams("p = 2 is the Laplacian, which is uniformly elliptic")
    if p < 1.0:
        raise BadParams(f"p must be >= 1, got {p}")
    if dim < 2:
        raise BadParams("need dim >= 2")
    if not lam > 0.0:
        raise BadParams(f"lam must be > 0, got {lam}")
    op = p_laplace(p)
    # |c|^(p-2) = lam/2 < lam puts nu in the flat regime; nu = c e1 then lies
    # in the nullspace of Y - X for Y supported on the last axis.
    c = (lam / 2.0) ** (1.0 / (p - 2.0))
    if not (math.isfinite(c) and c >= 1e-10):
        raise BadParams(f"cannot realize |c|^(p-2) = lam/2 for p={p}, lam={lam}")
    base = unit_jet(dim)
    omega = JetPoint(base.x, base.r, base.nu * c)
    h_val = float(h_const)
    ell = 2.0 * (abs(h_val) + 1.0) / lam + 1.0
    tail = np.zeros(dim)
    tail[-1] = ell
    y = SymmetricMatrix.diagonal(tail)
    x = SymmetricMatrix.zero(dim)
    lhs = op.evaluate(omega, x) - op.evaluate(omega, y)
    rhs = lam * (y.trace() - x.trace()) + h_val
    if not lhs < rhs - VIOLATION_MARGIN:
        raise ToolkitError("construction failed to violate the gap; should be impossible")
    return Certificate(
        kind="class_u.violation",
        witnesses={"omega": omega, "B": x, "M": y, "lam": lam, "H_omega": h_val,
                   "operator": op.name, "c": c, "l": ell},
        inequality_values={"F_B_minus_F_M": lhs, "gap_required": rhs},
        margin=rhs - lhs,
        description="nu = c e1 sits in the nullspace of Y = diag(0, ..., 0, l), so "
                    "F_p(nu, 0) - F_p(nu, Y) = |nu|^(p-2) l, while the required gap is "
                    "lam l + H; with |c|^(p-2) = lam/2 and l large the gap wins",
        recheck=lambda: (lam * (y.trace() - x.trace()) + h_val)
                        - (op.evaluate(omega, x) - op.evaluate(omega, y)),
    )


def _cert_bounded_h(dim: int = 3, h: MonotoneFunction | None = None,
                    steps: int = 40) -> Certificate:
    if h is None:
        h = arctan_monotone()
    below = h.bounded_below is not None
    above = h.bounded_above is not None
    if not (below or above):
        raise BadParams(f"{h.name} is unbounded both ways; there is nothing to certify")
    op = eig_sum(h)
    omega = unit_jet(dim)
    # Work on whichever side H saturates: -F_H(c I) = N H(c) stays on one
    # side of the floor/ceiling while the matching extreme eigenvalue c runs
    # away, which starves condition 3 (below) or condition 4 (above).
    sign = -1.0 if below else 1.0
    bound = dim * (h.bounded_below if below else h.bounded_above)
    rows = []
    for j in range(0, steps + 1, max(1, steps // 8)):
        cmag = 2.0 ** j
        x = SymmetricMatrix(sign * cmag * np.eye(dim))
        value = -op.evaluate(omega, x)
        ok = value >= bound if below else value <= bound
        if not ok:
            raise ToolkitError("bounded H escaped its own bound; broken MonotoneFunction")
        rows.append({"c": sign * cmag, "neg_F": value,
                     "extreme_eigenvalue": sign * cmag})
    c_last = sign * 2.0 ** steps
    x_last = SymmetricMatrix(c_last * np.eye(dim))
    value_last = -op.evaluate(omega, x_last)
    return Certificate(
        kind="counterexample.bounded_h",
        witnesses={"X_at_extreme": x_last, "M": SymmetricMatrix.zero(dim), "H": h,
                   "bound": bound, "side": "below" if below else "above"},
        inequality_values={"grid": rows, "neg_F_at_extreme": value_last,
                           "bound": bound, "extreme_eigenvalue": c_last},
        margin=abs(value_last - c_last),
        description=f"-F_H(c I) = N H(c) stays {'above' if below else 'below'} "
                    f"{bound:g} while the extreme eigenvalue c runs to "
                    f"{'-' if below else '+'}infinity; an increasing bijection evaluated "
                    "there must diverge, so no witness pair can satisfy conditions 3 and 4",
        recheck=lambda: abs(-op.evaluate(omega, x_last) - c_last),
    )


_COUNTEREXAMPLES = {
    "inf_laplace": _cert_inf_laplace,
    "k_hessian": _cert_k_hessian,
    "p1_laplace": _cert_p1_laplace,
    "power_not_u": _cert_power_not_u,
    "p_laplace_not_u": _cert_p_laplace_not_u,
    "bounded_h": _cert_bounded_h,
}


def counterexample(name: str, **params) -> Certificate:
    """Reproduce a named deterministic construction as a Certificate.

    Names: inf_laplace, k_hessian, p1_laplace, power_not_u, p_laplace_not_u,
    bounded_h. BadParams on dimensionally invalid parameters.
    """
    ctor = _COUNTEREXAMPLES.get(name)
    if ctor is None:
        raise BadParams(f"unknown counterexample {name!r}; known: {sorted(_COUNTEREXAMPLES)}")
    try:
        return ctor(**params)
    except TypeError as exc:
        raise BadParams(f"bad parameters for counterexample {name!r}: {exc}") from exc
