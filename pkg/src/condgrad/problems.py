"""Benchmark problem oracles and data ingestion.

Three self-concordant families: log-utility allocation over the simplex,
count-data (Poisson-likelihood) recovery over the nonnegative l1-ball,
and l1-constrained regularized logistic regression.  All oracles follow
the generalized-linear-model structure, so Hessian-vector products cost
the same as a gradient and never materialize a matrix.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels, rng
from .core import DomainError, ScOracle
from .sets import L1Ball, NonnegL1Ball, Simplex

PORTFOLIO_CLAMP = 0.01
DEFAULT_RADIUS = 10.0


class PortfolioOracle(ScOracle):
    """f(x) = -sum_t ln(r_t . x) over rows of a positive returns matrix."""

    def __init__(self, returns):
        returns = np.ascontiguousarray(returns, dtype=float)
        if returns.ndim != 2:
            raise ValueError("returns must be a T x n matrix")
        if not np.all(returns > 0.0):
            raise ValueError("returns matrix must be strictly positive")
        self.returns = returns
        self.dim = returns.shape[1]
        self.M = 2.0

    def value(self, x):
        return float(_kernels.log_utility_value(self.returns, np.asarray(x, dtype=float)))

    def gradient(self, x):
        x = np.asarray(x, dtype=float)
        if not self.in_domain(x):
            raise DomainError("gradient: point outside the objective domain")
        return _kernels.log_utility_grad(self.returns, x)

    def hess_vec(self, x, u):
        x = np.asarray(x, dtype=float)
        if not self.in_domain(x):
            raise DomainError("hess_vec: point outside the objective domain")
        return _kernels.log_utility_hessvec(self.returns, x, np.asarray(u, dtype=float))

    def in_domain(self, x):
        return _kernels.log_utility_min_dot(self.returns, np.asarray(x, dtype=float)) > 0.0


class PoissonOracle(ScOracle):
    """f(x) = sum_i w_i . x - sum_i y_i ln(w_i . x) for counts y >= 0."""

    def __init__(self, weights, counts):
        weights = np.ascontiguousarray(weights, dtype=float)
        counts = np.ascontiguousarray(counts, dtype=float)
        if weights.ndim != 2 or counts.shape != (weights.shape[0],):
            raise ValueError("weights must be m x n with one count per row")
        if np.any(weights < 0.0):
            raise ValueError("weights must be nonnegative")
        if np.any(counts < 0.0) or np.any(counts != np.floor(counts)):
            raise ValueError("counts must be nonnegative integers")
        pos = counts > 0
        if np.any(~np.any(weights[pos] > 0.0, axis=1)):
            raise ValueError("every row with a positive count needs a positive entry")
        self.weights = weights
        self.counts = counts
        self.dim = weights.shape[1]
        # linear objective when every count is zero; curvature then vacuous
        self.M = float(np.max(2.0 / np.sqrt(counts[pos]))) if np.any(pos) else 2.0

    def value(self, x):
        return float(_kernels.poisson_value(self.weights, self.counts, np.asarray(x, dtype=float)))

    def gradient(self, x):
        x = np.asarray(x, dtype=float)
        if not self.in_domain(x):
            raise DomainError("gradient: point outside the objective domain")
        return _kernels.poisson_grad(self.weights, self.counts, x)

    def hess_vec(self, x, u):
        x = np.asarray(x, dtype=float)
        if not self.in_domain(x):
            raise DomainError("hess_vec: point outside the objective domain")
        return _kernels.poisson_hessvec(self.weights, self.counts, x, np.asarray(u, dtype=float))

    def in_domain(self, x):
        return _kernels.poisson_min_dot(self.weights, self.counts, np.asarray(x, dtype=float)) > 0.0


class LogisticOracle(ScOracle):
    """(1/N) sum_i log(1 + exp(-y_i (phi_i . x + mu))) + (gamma/2)|x|^2."""

    def __init__(self, features, labels, mu=0.0, gamma=None):
        features = np.ascontiguousarray(features, dtype=float)
        labels = np.ascontiguousarray(labels, dtype=float)
        if features.ndim != 2 or labels.shape != (features.shape[0],):
            raise ValueError("features must be N x n with one label per row")
        if gamma is None:
            gamma = 1.0 / features.shape[0]
        if not gamma > 0:
            raise ValueError("gamma must be positive")
        self.features = features
        self.labels = labels
        self.mu = float(mu)
        self.gamma = float(gamma)
        self.dim = features.shape[1]
        self.M = float(np.max(np.linalg.norm(features, axis=1)) / np.sqrt(gamma))

    def value(self, x):
        return float(
            _kernels.logistic_value(self.features, self.labels, self.mu, self.gamma, np.asarray(x, dtype=float))
        )

    def gradient(self, x):
        return _kernels.logistic_grad(self.features, self.labels, self.mu, self.gamma, np.asarray(x, dtype=float))

    def hess_vec(self, x, u):
        return _kernels.logistic_hessvec(
            self.features, self.labels, self.mu, self.gamma, np.asarray(x, dtype=float), np.asarray(u, dtype=float)
        )

    def in_domain(self, x):
        return True


@dataclass
class PortfolioProblem:
    returns: np.ndarray
    oracle: PortfolioOracle
    feasible_set: Simplex


@dataclass
class PoissonProblem:
    weights: np.ndarray
    counts: np.ndarray
    radius: float
    oracle: PoissonOracle
    feasible_set: NonnegL1Ball


@dataclass
class LogisticProblem:
    features: np.ndarray
    labels: np.ndarray
    mu: float
    gamma: float
    radius: float
    oracle: LogisticOracle
    feasible_set: L1Ball


def portfolio_oracle(returns):
    return PortfolioOracle(returns)


def portfolio_problem(returns):
    oracle = PortfolioOracle(returns)
    return PortfolioProblem(oracle.returns, oracle, Simplex(oracle.dim))


def poisson_oracle(weights, counts, radius=DEFAULT_RADIUS):
    oracle = PoissonOracle(weights, counts)
    problem = PoissonProblem(
        oracle.weights, oracle.counts, float(radius), oracle, NonnegL1Ball(oracle.dim, radius)
    )
    # the canonical interior start must give a finite objective
    if not oracle.in_domain(problem.feasible_set.start_point()):
        raise ValueError("count rows leave the canonical start outside the domain")
    return problem


def logistic_oracle(features, labels, mu=0.0, gamma=None, radius=DEFAULT_RADIUS):
    oracle = LogisticOracle(features, labels, mu=mu, gamma=gamma)
    return LogisticProblem(
        oracle.features,
        oracle.labels,
        oracle.mu,
        oracle.gamma,
        float(radius),
        oracle,
        L1Ball(oracle.dim, radius),
    )


def gen_portfolio_data(T, n, seed):
    """Synthetic price-ratio matrix: 1 + 0.1 * N(0,1), clamped at 0.01.

    Entries come row-major from the counter stream of `seed`, so equal
    (T, n, seed) always reproduce the same matrix bit for bit.  The
    clamp keeps the log-utility objective defined unconditionally; it
    fires with probability ~ Phi(-10) per entry.
    """
    if T < 1 or n < 1:
        raise ValueError("matrix dimensions must be positive")
    z = rng.normals(seed, T * n)
    return np.maximum(1.0 + 0.1 * z, PORTFOLIO_CLAMP).reshape(T, n)


class ParseError(ValueError):
    pass


def parse_libsvm(stream):
    """Parse sparse `<label> <idx>:<val> ...` lines into dense rows.

    `stream` is an iterable of lines (an open file works).  Indices are
    1-based and must be strictly ascending within a line; blank lines
    and lines starting with '#' are skipped.  Returns (features, labels)
    with features dense N x n, n the largest index seen.
    """
    if isinstance(stream, str):
        stream = stream.splitlines()
    rows = []
    labels = []
    width = 0
    for lineno, line in enumerate(stream, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        try:
            labels.append(float(tokens[0]))
        except ValueError:
            raise ParseError(f"line {lineno}: bad label {tokens[0]!r}") from None
        entries = []
        prev = 0
        for tok in tokens[1:]:
            idx_s, _, val_s = tok.partition(":")
            try:
                idx = int(idx_s)
                val = float(val_s)
            except ValueError:
                raise ParseError(f"line {lineno}: bad feature token {tok!r}") from None
            if idx <= 0:
                raise ParseError(f"line {lineno}: index {idx} must be positive")
            if idx <= prev:
                raise ParseError(f"line {lineno}: indices must be strictly ascending")
            entries.append((idx - 1, val))
            prev = idx
        rows.append(entries)
        width = max(width, prev)
    features = np.zeros((len(rows), width))
    for i, entries in enumerate(rows):
        for j, val in entries:
            features[i, j] = val
    return features, np.asarray(labels)


def format_libsvm(features, labels):
    """Serialize dense rows back to the sparse text format (nonzeros only)."""
    features = np.asarray(features, dtype=float)
    labels = np.asarray(labels, dtype=float)
    lines = []
    for row, label in zip(features, labels):
        parts = ["%+g" % label]
        for j in np.nonzero(row)[0]:
            parts.append(f"{j + 1}:{format(row[j], '.17g')}")
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def save_returns_csv(path, returns, seed):
    """Write a synthetic returns matrix: header line `T,n,seed`, then rows."""
    returns = np.asarray(returns, dtype=float)
    with open(path, "w") as fh:
        fh.write(f"{returns.shape[0]},{returns.shape[1]},{seed}\n")
        for row in returns:
            fh.write(",".join(format(v, ".17g") for v in row) + "\n")


def load_returns_csv(path):
    """Read back a returns matrix; returns (matrix, seed)."""
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        if len(header) != 3:
            raise ValueError("returns CSV must start with a `T,n,seed` line")
        T, n, seed = int(header[0]), int(header[1]), int(header[2])
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if data.shape != (T, n):
        raise ValueError(f"returns CSV body {data.shape} does not match header ({T}, {n})")
    return data, seed


def gen_binary_design(m, n, density, seed):
    """Synthetic 0/1 design matrix with at least one active column per row."""
    u = rng.uniforms(seed, m * n).reshape(m, n)
    w = (u < density).astype(float)
    for i in range(m):
        if not np.any(w[i] > 0.0):
            w[i, i % n] = 1.0
    return w


def gen_logistic_data(N, n, seed):
    """Synthetic classification data: normal features, separator labels."""
    feats = rng.normals(seed, N * n).reshape(N, n)
    plane = rng.normals(seed + 1, n)
    margins = feats @ plane
    labels = np.where(margins >= 0.0, 1.0, -1.0)
    return feats, labels
