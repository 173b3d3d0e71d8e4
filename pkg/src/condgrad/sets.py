"""Compact convex feasible sets with exact linear minimization oracles.

Three set families cover the benchmark problems: the unit simplex, the
l1-ball of radius R, and the nonnegative orthant intersected with an
l1-ball.  Ties in every vertex argmin break toward the lowest index so
that runs are fully deterministic.
"""

import numpy as np

CONTAINS_TOL = 1e-9


def _check_finite(c):
    c = np.asarray(c, dtype=float)
    if not np.all(np.isfinite(c)):
        raise ValueError("linear oracle input has non-finite entries")
    return c


def lmo_simplex(c):
    """Vertex e_i of the unit simplex minimizing <c, .>, lowest-index ties."""
    c = _check_finite(c)
    out = np.zeros_like(c)
    out[int(np.argmin(c))] = 1.0
    return out


def lmo_l1ball(c, radius):
    """Vertex +-R*e_i of the l1-ball minimizing <c, .>.

    The winning coordinate has maximal |c_i| (lowest-index ties) and the
    sign opposes c_i, with sign(0) treated as +1.
    """
    c = _check_finite(c)
    if radius <= 0:
        raise ValueError("l1-ball radius must be positive")
    i = int(np.argmax(np.abs(c)))
    out = np.zeros_like(c)
    out[i] = -radius if c[i] > 0 else radius
    # c[i] == 0 only when c == 0: sign(0) = +1 gives -R * e_i
    if c[i] == 0.0:
        out[i] = -radius
    return out


def lmo_nonneg_l1(c, radius):
    """Argmin of <c, .> over {x >= 0, |x|_1 <= R}: the origin or R*e_i."""
    c = _check_finite(c)
    if radius <= 0:
        raise ValueError("l1-ball radius must be positive")
    i = int(np.argmin(c))
    out = np.zeros_like(c)
    if c[i] < 0.0:
        out[i] = radius
    return out


class FeasibleSet:
    """Common surface: lmo, contains, diameter, vertices, start_point."""

    dim: int
    kind: str

    def lmo(self, c):
        raise NotImplementedError

    def contains(self, x, tol=CONTAINS_TOL):
        raise NotImplementedError

    @property
    def diameter(self):
        raise NotImplementedError

    def vertices(self):
        raise NotImplementedError

    def start_point(self):
        raise NotImplementedError


class Simplex(FeasibleSet):
    """Unit simplex {x >= 0, sum x = 1}."""

    kind = "simplex"

    def __init__(self, dim):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        self.dim = int(dim)

    def lmo(self, c):
        return lmo_simplex(c)

    def contains(self, x, tol=CONTAINS_TOL):
        x = np.asarray(x, dtype=float)
        return (
            x.shape == (self.dim,)
            and bool(np.all(x >= -tol))
            and abs(float(np.sum(x)) - 1.0) <= tol
        )

    @property
    def diameter(self):
        return float(np.sqrt(2.0)) if self.dim > 1 else 0.0

    def vertices(self):
        return [v for v in np.eye(self.dim)]

    def start_point(self):
        return np.full(self.dim, 1.0 / self.dim)


class L1Ball(FeasibleSet):
    """l1-ball {|x|_1 <= R}."""

    kind = "l1_ball"

    def __init__(self, dim, radius):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        if radius <= 0:
            raise ValueError("radius must be positive")
        self.dim = int(dim)
        self.radius = float(radius)

    def lmo(self, c):
        return lmo_l1ball(c, self.radius)

    def contains(self, x, tol=CONTAINS_TOL):
        x = np.asarray(x, dtype=float)
        return x.shape == (self.dim,) and float(np.sum(np.abs(x))) <= self.radius + tol

    @property
    def diameter(self):
        return 2.0 * self.radius

    def vertices(self):
        eye = np.eye(self.dim)
        return [self.radius * v for v in eye] + [-self.radius * v for v in eye]

    def start_point(self):
        return np.zeros(self.dim)


class NonnegL1Ball(FeasibleSet):
    """Nonnegative orthant cut with an l1-ball: {x >= 0, |x|_1 <= R}."""

    kind = "nonneg_l1"

    def __init__(self, dim, radius):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        if radius <= 0:
            raise ValueError("radius must be positive")
        self.dim = int(dim)
        self.radius = float(radius)

    def lmo(self, c):
        return lmo_nonneg_l1(c, self.radius)

    def contains(self, x, tol=CONTAINS_TOL):
        x = np.asarray(x, dtype=float)
        return (
            x.shape == (self.dim,)
            and bool(np.all(x >= -tol))
            and float(np.sum(x)) <= self.radius + tol
        )

    @property
    def diameter(self):
        # farthest vertex pair is R*e_i, R*e_j; the origin is closer
        return float(np.sqrt(2.0)) * self.radius if self.dim > 1 else self.radius

    def vertices(self):
        return [np.zeros(self.dim)] + [self.radius * v for v in np.eye(self.dim)]

    def start_point(self):
        # strictly interior so barrier-type objectives are finite at the start
        return np.full(self.dim, self.radius / (2.0 * self.dim))
