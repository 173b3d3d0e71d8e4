"""Self-concordant objective machinery.

An objective enters the solvers through the :class:`ScOracle` call surface:
value, gradient, Hessian-vector product, domain membership, and the
curvature parameter ``M``.  This module provides the scalar curvature
functions, local norms, the duality-gap computation against a feasible
set's linear oracle, and the Bregman divergence.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels

GAP_SLACK = 1e-12


class DomainError(ValueError):
    """A point lies outside the objective's open domain."""


class InvariantError(RuntimeError):
    """A numeric invariant failed badly enough to indicate a bug."""


class ScOracle:
    """Evaluation interface for a self-concordant objective.

    Subclasses set ``dim`` (ambient dimension) and ``M`` (curvature
    parameter) and implement the four methods.  ``value`` returns ``+inf``
    outside the domain so that line-search probes are cheap to reject;
    ``gradient`` and ``hess_vec`` are only defined on the domain and raise
    :class:`DomainError` elsewhere.  Instances are immutable after
    construction and safe for concurrent read-only use.
    """

    dim: int
    M: float

    def value(self, x):
        raise NotImplementedError

    def gradient(self, x):
        raise NotImplementedError

    def hess_vec(self, x, u):
        raise NotImplementedError

    def in_domain(self, x):
        raise NotImplementedError


@dataclass
class GapResult:
    """Linear-oracle target and duality gap at a feasible point.

    ``e`` is the scaled local distance (M/2)*||target - x||_x that controls
    how far a step may go while provably staying inside the domain.
    """

    target: np.ndarray
    gap: float
    e: float
    lmo_value: float


def omega(t):
    """t - ln(1+t) for t > -1; the lower curvature profile."""
    if not t > -1.0:
        raise DomainError(f"omega requires t > -1, got {t}")
    return float(_kernels.omega(float(t)))


def omega_star(t):
    """-t - ln(1-t) for t < 1; the upper curvature profile."""
    if not t < 1.0:
        raise DomainError(f"omega_star requires t < 1, got {t}")
    return float(_kernels.omega_star(float(t)))


def local_norm(oracle, x, u):
    """Hessian-induced norm sqrt(<hess_vec(x,u), u>) at x."""
    if not oracle.in_domain(x):
        raise DomainError("local_norm: point outside the objective domain")
    q = float(np.dot(oracle.hess_vec(x, u), u))
    if q < 0.0:
        if q < -1e-12 * (1.0 + float(np.dot(u, u))):
            raise InvariantError(f"negative Hessian quadratic form: {q}")
        q = 0.0
    return float(np.sqrt(q))


def dist_like(oracle, x, y):
    """Scaled local distance (M/2)*||y - x||_x."""
    return 0.5 * oracle.M * local_norm(oracle, x, np.asarray(y) - np.asarray(x))


def gap_and_target(oracle, feasible_set, x):
    """Duality gap, linear-oracle target, and local step bound at x.

    Requires x feasible and inside the domain.  The raw gap may round to a
    tiny negative number; anything below -1e-12 indicates a broken linear
    oracle and raises :class:`InvariantError`.
    """
    if not oracle.in_domain(x):
        raise DomainError("gap_and_target: point outside the objective domain")
    if not feasible_set.contains(x):
        raise ValueError("gap_and_target: point outside the feasible set")
    g = oracle.gradient(x)
    target = feasible_set.lmo(g)
    lmo_value = float(np.dot(g, target))
    gap_raw = float(np.dot(g, x)) - lmo_value
    if gap_raw < -GAP_SLACK:
        raise InvariantError(f"negative duality gap {gap_raw}: broken linear oracle?")
    return GapResult(
        target=target,
        gap=max(gap_raw, 0.0),
        e=dist_like(oracle, x, target),
        lmo_value=lmo_value,
    )


def bregman(oracle, y, x):
    """Bregman divergence f(y) - f(x) - <grad f(x), y - x> (both points in-domain)."""
    if not oracle.in_domain(x):
        raise DomainError("bregman: base point outside the objective domain")
    if not oracle.in_domain(y):
        raise DomainError("bregman: argument outside the objective domain")
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    return float(oracle.value(y) - oracle.value(x) - np.dot(oracle.gradient(x), y - x))
