"""Catalog of degenerate elliptic operators as uniform descriptor objects.

Each descriptor bundles a domain predicate over (jet point, matrix) with an
evaluation F(omega, X). Shipped families:

  linear_uniform      F = -tr(a(x) X) + b(x).nu + c(x) r,  a(x) = sigma(x) + theta I
  p_laplace           F_p(nu, X) = -|nu|^(p-2) [tr X + (p-2) <X nu/|nu|, nu/|nu|>]
  p_laplace_homog     the same bracket without the |nu|^(p-2) prefactor
  inf_laplace         F(nu, X) = -<X nu, nu>
  inf_laplace_homog   F(nu, X) = -<X nu, nu> / <nu, nu>
  k_hessian           F_k(X) = -S_k(lambda(X)) on the Gamma_k-bar cone
  eig_sum             F_H(X) = -sum_j H(lambda_j(X)) for strictly increasing H
  sqrt_gradient       F(nu, X) = -tr X - |nu|^(1/2)

Descriptors are immutable; coefficient callbacks must be pure, so concurrent
evaluation is safe. Evaluation refuses out-of-domain input instead of
extrapolating (the p-Laplace prefactor has no continuous extension at
nu = 0, so |nu| below 1e-12 is treated as zero).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Optional

import numpy as np

from .errors import BadParams, OutOfDomain, ToolkitError
from .symmat import GAMMA_CONE_TOL, SymmetricMatrix, elementary_symmetric, gamma_k_member

GRAD_NORM_FLOOR = 1e-12

_MONOTONE_GRID = (-1e6, -1e3, -10.0, -1.0, -1e-3, -1e-6, 0.0, 1e-6, 1e-3, 1.0, 10.0, 1e3, 1e6)


@dataclass(frozen=True)
class JetPoint:
    """The non-matrix slots omega = (x, r, nu) of an operator argument.

    ``x`` is the base point, ``r`` the solution-value slot, ``nu`` the
    gradient slot; x and nu live in the same R^N.
    """

    x: np.ndarray
    r: float
    nu: np.ndarray

    def __post_init__(self):
        x = np.atleast_1d(np.asarray(self.x, dtype=float))
        nu = np.atleast_1d(np.asarray(self.nu, dtype=float))
        if x.ndim != 1 or nu.ndim != 1 or x.shape != nu.shape:
            raise BadParams(f"x and nu must be vectors of equal length, got {x.shape} and {nu.shape}")
        r = float(self.r)
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(nu)) and math.isfinite(r)):
            raise BadParams("jet point components must be finite")
        x.setflags(write=False)
        nu.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "nu", nu)

    @property
    def dim(self) -> int:
        return int(self.x.shape[0])


def unit_jet(dim: int, axis: int = 0, r: float = 0.0) -> JetPoint:
    """Jet point at the origin with nu = e_axis; handy default for checks."""
    nu = np.zeros(dim)
    nu[axis] = 1.0
    return JetPoint(np.zeros(dim), r, nu)


@dataclass(frozen=True)
class MonotoneFunction:
    """A strictly increasing H: R -> R, with its inverse when H is onto R.

    ``inverse`` is present exactly when H is a bijection of R (unbounded both
    ways); ``bounded_below`` / ``bounded_above`` record bounds when they
    exist. Construction samples strict monotonicity on a fixed grid and, when
    the inverse is present, checks inverse(forward(t)) = t to 1e-9 there.
    """

    name: str
    forward: Callable[[float], float]
    inverse: Optional[Callable[[float], float]] = None
    bounded_below: Optional[float] = None
    bounded_above: Optional[float] = None

    def __post_init__(self):
        prev = None
        for t in _MONOTONE_GRID:
            val = self.forward(t)
            if not math.isfinite(val):
                raise BadParams(f"{self.name}: forward({t}) is not finite")
            if prev is not None and not val > prev:
                raise BadParams(f"{self.name}: not strictly increasing at t={t}")
            prev = val
            if self.inverse is not None:
                back = self.inverse(val)
                if abs(back - t) > 1e-9 * max(1.0, abs(t)):
                    raise BadParams(f"{self.name}: inverse(forward({t})) = {back}, expected {t}")

    @property
    def unbounded(self) -> bool:
        return self.inverse is not None and self.bounded_below is None and self.bounded_above is None


def identity_monotone() -> MonotoneFunction:
    return MonotoneFunction("identity", lambda t: t, inverse=lambda s: s)


def odd_root_monotone(d: int) -> MonotoneFunction:
    """t -> sign(t) |t|^(1/d), the real d-th root for odd d >= 3."""
    if not isinstance(d, int) or d < 3 or d % 2 == 0:
        raise BadParams(f"d must be an odd integer >= 3, got {d!r}")
    return MonotoneFunction(
        f"odd_root({d})",
        lambda t: math.copysign(abs(t) ** (1.0 / d), t),
        inverse=lambda s: math.copysign(abs(s) ** d, s),
    )


def arctan_monotone() -> MonotoneFunction:
    return MonotoneFunction(
        "arctan", math.atan, bounded_below=-math.pi / 2, bounded_above=math.pi / 2
    )


@dataclass(frozen=True)
class OperatorDescriptor:
    """One catalog entry: a name, its parameters, a domain predicate, and F.

    ``in_domain(w, X)`` guards ``evaluate``; evaluate raises OutOfDomain
    rather than silently computing outside the domain. F is continuous in the
    matrix entry on the domain (verified statistically by the test suite).
    """

    name: str
    family: str
    params: Mapping[str, Any]
    in_domain: Callable[[JetPoint, SymmetricMatrix], bool] = field(repr=False)
    raw_evaluate: Callable[[JetPoint, SymmetricMatrix], float] = field(repr=False)

    def evaluate(self, w: JetPoint, x: SymmetricMatrix) -> float:
        if not self.in_domain(w, x):
            raise OutOfDomain(f"{self.name}: ({w!r}, matrix dim {x.dim}) is outside the domain")
        val = float(self.raw_evaluate(w, x))
        if not math.isfinite(val):
            raise ToolkitError(f"{self.name}: evaluation produced a non-finite value")
        return val


def evaluate(op: OperatorDescriptor, w: JetPoint, x: SymmetricMatrix) -> float:
    """Domain-checked evaluation F(omega, X); OutOfDomain on violation."""
    return op.evaluate(w, x)


def _grad_norm(w: JetPoint) -> float:
    return float(np.linalg.norm(w.nu))


def _as_constant_matrix_callback(value, what: str):
    if callable(value):
        return value, False
    arr = value.entries if isinstance(value, SymmetricMatrix) else np.asarray(value, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise BadParams(f"{what} must be a square matrix, got shape {arr.shape}")
    const = SymmetricMatrix(arr)
    return (lambda _x: const), True


def _check_psd_sample(mat: SymmetricMatrix, what: str):
    if mat.eigenvalues()[0] < -1e-9:
        raise BadParams(f"{what} sample is not positive semi-definite")


def linear_uniform(theta: float, sigma=None, b=None, c=None) -> OperatorDescriptor:
    """Uniformly elliptic linear operator with a(x) = sigma(x) + theta I.

    ``sigma``, ``b`` and ``c`` may be constants (matrix, vector, scalar) or
    pure callbacks of x; omitted coefficients default to zero. Constant sigma
    is PSD-checked up front, callback sigma at every evaluation.
    """
    theta = float(theta)
    if not theta > 0.0:
        raise BadParams(f"theta must be > 0, got {theta}")

    sigma_cb = None
    sigma_const = False
    if sigma is not None:
        sigma_cb, sigma_const = _as_constant_matrix_callback(sigma, "sigma")
        if sigma_const:
            _check_psd_sample(sigma_cb(None), "sigma")
    if b is not None and not callable(b):
        b_arr = np.asarray(b, dtype=float)
        b_cb = lambda _x: b_arr
    else:
        b_cb = b
    if c is not None and not callable(c):
        c_val = float(c)
        c_cb = lambda _x: c_val
    else:
        c_cb = c

    def raw(w: JetPoint, x_mat: SymmetricMatrix) -> float:
        a = theta * np.eye(x_mat.dim)
        if sigma_cb is not None:
            s = sigma_cb(w.x)
            s = s if isinstance(s, SymmetricMatrix) else SymmetricMatrix(np.asarray(s, dtype=float))
            if s.dim != x_mat.dim:
                raise BadParams(f"sigma(x) has dim {s.dim}, matrix has dim {x_mat.dim}")
            if not sigma_const:
                _check_psd_sample(s, "sigma(x)")
            a = a + s.entries
        val = -float(np.trace(a @ x_mat.entries))
        if b_cb is not None:
            val += float(np.dot(np.asarray(b_cb(w.x), dtype=float), w.nu))
        if c_cb is not None:
            val += float(c_cb(w.x)) * w.r
        return val

    params = {"theta": theta, "sigma": "0" if sigma is None else "set",
              "b": "0" if b is None else "set", "c": "0" if c is None else "set"}
    return OperatorDescriptor(
        name=f"linear_uniform(theta={theta:g})",
        family="linear_uniform",
        params=params,
        in_domain=lambda w, x_mat: True,
        raw_evaluate=raw,
    )


def p_laplace(p: float) -> OperatorDescriptor:
    """F_p(nu, X) = -|nu|^(p-2) [tr X + (p-2) <X nu/|nu|, nu/|nu|>], nu != 0."""
    p = float(p)
    if not p >= 1.0:
        raise BadParams(f"p must be >= 1, got {p}")

    def raw(w: JetPoint, x_mat: SymmetricMatrix) -> float:
        nn = _grad_norm(w)
        unit = w.nu / nn
        proj = float(unit @ x_mat.entries @ unit)
        return -(nn ** (p - 2.0)) * (x_mat.trace() + (p - 2.0) * proj)

    return OperatorDescriptor(
        name=f"p_laplace(p={p:g})",
        family="p_laplace",
        params={"p": p},
        in_domain=lambda w, x_mat: _grad_norm(w) >= GRAD_NORM_FLOOR,
        raw_evaluate=raw,
    )


def p_laplace_homog(p: float) -> OperatorDescriptor:
    """The p-Laplace bracket without its |nu|^(p-2) prefactor; nu != 0."""
    p = float(p)
    if not p >= 1.0:
        raise BadParams(f"p must be >= 1, got {p}")

    def raw(w: JetPoint, x_mat: SymmetricMatrix) -> float:
        nn = _grad_norm(w)
        unit = w.nu / nn
        proj = float(unit @ x_mat.entries @ unit)
        return -(x_mat.trace() + (p - 2.0) * proj)

    return OperatorDescriptor(
        name=f"p_laplace_homog(p={p:g})",
        family="p_laplace_homog",
        params={"p": p},
        in_domain=lambda w, x_mat: _grad_norm(w) >= GRAD_NORM_FLOOR,
        raw_evaluate=raw,
    )


def inf_laplace() -> OperatorDescriptor:
    """F(nu, X) = -<X nu, nu>; defined for every nu."""
    return OperatorDescriptor(
        name="inf_laplace",
        family="inf_laplace",
        params={},
        in_domain=lambda w, x_mat: True,
        raw_evaluate=lambda w, x_mat: -float(w.nu @ x_mat.entries @ w.nu),
    )


def inf_laplace_homog() -> OperatorDescriptor:
    """F(nu, X) = -<X nu, nu> / <nu, nu>; nu != 0."""

    def raw(w: JetPoint, x_mat: SymmetricMatrix) -> float:
        return -float(w.nu @ x_mat.entries @ w.nu) / float(w.nu @ w.nu)

    return OperatorDescriptor(
        name="inf_laplace_homog",
        family="inf_laplace_homog",
        params={},
        in_domain=lambda w, x_mat: _grad_norm(w) >= GRAD_NORM_FLOOR,
        raw_evaluate=raw,
    )


def k_hessian(k: int) -> OperatorDescriptor:
    """F_k(X) = -S_k(lambda(X)), restricted to the closed cone Gamma_k-bar.

    k >= 1 is validated here; k <= N is validated against the matrix at
    evaluation time since descriptors are dimension generic.
    """
    if not isinstance(k, int) or k < 1:
        raise BadParams(f"k must be an integer >= 1, got {k!r}")

    def in_domain(w: JetPoint, x_mat: SymmetricMatrix) -> bool:
        if k > x_mat.dim:
            raise BadParams(f"k_hessian(k={k}) applied to a {x_mat.dim}x{x_mat.dim} matrix")
        return gamma_k_member(x_mat, k, GAMMA_CONE_TOL)

    def raw(w: JetPoint, x_mat: SymmetricMatrix) -> float:
        return -float(elementary_symmetric(k, x_mat.eigenvalues().tolist()))

    return OperatorDescriptor(
        name=f"k_hessian(k={k})",
        family="k_hessian",
        params={"k": k},
        in_domain=in_domain,
        raw_evaluate=raw,
    )


def eig_sum(h: MonotoneFunction) -> OperatorDescriptor:
    """F_H(X) = -sum_j H(lambda_j(X)) for strictly increasing H."""
    if not isinstance(h, MonotoneFunction):
        raise BadParams("eig_sum expects a MonotoneFunction")

    def raw(w: JetPoint, x_mat: SymmetricMatrix) -> float:
        return -sum(h.forward(float(lam)) for lam in x_mat.eigenvalues())

    return OperatorDescriptor(
        name=f"eig_sum({h.name})",
        family="eig_sum",
        params={"h": h},
        in_domain=lambda w, x_mat: True,
        raw_evaluate=raw,
    )


def sqrt_gradient() -> OperatorDescriptor:
    """F(nu, X) = -tr X - |nu|^(1/2); elliptic but without a comparison principle."""
    return OperatorDescriptor(
        name="sqrt_gradient",
        family="sqrt_gradient",
        params={},
        in_domain=lambda w, x_mat: True,
        raw_evaluate=lambda w, x_mat: -x_mat.trace() - math.sqrt(_grad_norm(w)),
    )


_FAMILIES = {
    "linear_uniform": linear_uniform,
    "p_laplace": p_laplace,
    "p_laplace_homog": p_laplace_homog,
    "inf_laplace": inf_laplace,
    "inf_laplace_homog": inf_laplace_homog,
    "k_hessian": k_hessian,
    "eig_sum": eig_sum,
    "sqrt_gradient": sqrt_gradient,
}


def make_operator(family: str, **params) -> OperatorDescriptor:
    """Construct a catalog operator by family name; BadParams on bad input."""
    ctor = _FAMILIES.get(family)
    if ctor is None:
        raise BadParams(f"unknown operator family {family!r}; known: {sorted(_FAMILIES)}")
    return ctor(**params)


_MONOTONE_BY_NAME = {
    "identity": identity_monotone,
    "arctan": arctan_monotone,
}


def operator_from_json(spec) -> OperatorDescriptor:
    """Build an operator from its JSON description.

    Field names per family:
      {"family": "linear_uniform", "theta": t, "sigma": [[...]]?, "b": [...]?, "c": s?}
      {"family": "p_laplace", "p": p}            {"family": "p_laplace_homog", "p": p}
      {"family": "inf_laplace"}                  {"family": "inf_laplace_homog"}
      {"family": "k_hessian", "k": k}
      {"family": "eig_sum", "h": "identity" | "arctan" | "odd_root", "d": d?}
      {"family": "sqrt_gradient"}
    """
    if not isinstance(spec, dict):
        raise BadParams(f"operator spec must be a JSON object, got {type(spec).__name__}")
    spec = dict(spec)
    family = spec.pop("family", None)
    if family is None:
        raise BadParams("operator spec is missing the 'family' field")
    if family == "eig_sum":
        hname = spec.pop("h", None)
        if hname == "odd_root":
            d = spec.pop("d", None)
            if d is None:
                raise BadParams("eig_sum with h='odd_root' needs an odd integer field 'd'")
            h = odd_root_monotone(int(d))
        elif hname in _MONOTONE_BY_NAME:
            h = _MONOTONE_BY_NAME[hname]()
        else:
            raise BadParams(f"unknown monotone function {hname!r}; known: "
                            f"{sorted(_MONOTONE_BY_NAME) + ['odd_root']}")
        if spec:
            raise BadParams(f"unexpected fields for eig_sum: {sorted(spec)}")
        return eig_sum(h)
    if family == "k_hessian" and "k" in spec:
        spec["k"] = int(spec["k"])
    try:
        return make_operator(family, **spec)
    except TypeError as exc:
        raise BadParams(f"bad fields for family {family!r}: {exc}") from exc


def catalog() -> list[dict]:
    """Machine-readable listing of the shipped families and their JSON fields."""
    return [
        {"family": "linear_uniform", "fields": {"theta": "required, > 0",
                                                "sigma": "optional PSD matrix rows",
                                                "b": "optional vector", "c": "optional scalar"},
         "domain": "all (omega, X)"},
        {"family": "p_laplace", "fields": {"p": "required, >= 1"}, "domain": "nu != 0"},
        {"family": "p_laplace_homog", "fields": {"p": "required, >= 1"}, "domain": "nu != 0"},
        {"family": "inf_laplace", "fields": {}, "domain": "all (omega, X)"},
        {"family": "inf_laplace_homog", "fields": {}, "domain": "nu != 0"},
        {"family": "k_hessian", "fields": {"k": "required integer, 1 <= k <= N"},
         "domain": "lambda(X) in closed Gamma_k cone"},
        {"family": "eig_sum", "fields": {"h": "identity | arctan | odd_root",
                                         "d": "odd integer >= 3 when h = odd_root"},
         "domain": "all (omega, X)"},
        {"family": "sqrt_gradient", "fields": {}, "domain": "all (omega, X)"},
    ]
