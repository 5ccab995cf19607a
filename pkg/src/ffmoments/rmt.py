"""Haar-random unitary matrices, mixed power traces and weighted matrix integrals.

Everything downstream of sampling works with eigenvalues only.  Arrays of
eigenvalues have shape (samples, N).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import NearSingularWeight
from .estimate import Method, MomentEstimate
from .partitions import Partition, partitions_of

N_BATCHES = 50
SINGULAR_TOL = 1e-12


@dataclass(frozen=True)
class EigenSample:
    eigenvalues: tuple

    @property
    def N(self) -> int:
        return len(self.eigenvalues)

    def array(self) -> np.ndarray:
        return np.asarray(self.eigenvalues, dtype=complex)


def haar_eigenvalues(N: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Eigenvalues of ``size`` independent Haar unitaries of dimension N.

    QR of a complex Ginibre matrix, with the phases of diag(R) moved into Q so
    that Q is exactly Haar distributed.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    Z = (rng.standard_normal((size, N, N)) + 1j * rng.standard_normal((size, N, N))) / math.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R, axis1=1, axis2=2)
    Q = Q * (d / np.abs(d))[:, None, :]
    if N == 1:
        return Q[:, :, 0]
    return np.linalg.eigvals(Q)


def haar_unitary(N: int, seed: int) -> EigenSample:
    x = haar_eigenvalues(N, 1, np.random.default_rng(seed))[0]
    return EigenSample(tuple(complex(v) for v in x))


def _as_array(s) -> np.ndarray:
    if isinstance(s, EigenSample):
        return s.array()[None, :]
    x = np.asarray(s, dtype=complex)
    return x[None, :] if x.ndim == 1 else x


def power_traces(x: np.ndarray, k_max: int) -> np.ndarray:
    """Tr(U^j) for j = 1..k_max; shape (samples, k_max)."""
    x = _as_array(x)
    out = np.empty((x.shape[0], k_max), dtype=complex)
    p = np.ones_like(x)
    for j in range(k_max):
        p = p * x
        out[:, j] = p.sum(axis=1)
    return out


def p_lambda_from_traces(traces: np.ndarray, lam: Partition) -> np.ndarray:
    out = np.ones(traces.shape[0], dtype=complex)
    for j, m in enumerate(lam.mult, start=1):
        if m:
            out = out * traces[:, j - 1] ** m
    return out


def p_lambda(s, lam: Partition):
    """P_lambda = prod_j Tr(U^j)^{lambda_j}; a scalar for one sample, an array for a batch."""
    x = _as_array(s)
    vals = p_lambda_from_traces(power_traces(x, max(lam.max_part, 1)), lam)
    return complex(vals[0]) if isinstance(s, EigenSample) or np.ndim(s) == 1 else vals


# ---------------------------------------------------------------------------
# weights


@dataclass(frozen=True)
class WeightSpec:
    """prod over index tuples i_1..i_r of (1 - x_{i_1}...x_{i_r})^{(-1)^{r+1}}.

    Consecutive indices satisfy i_j <= i_{j+1} for j in J and i_j < i_{j+1}
    otherwise.  J empty is omega_r; r = 2, J = {1} is the orthogonal weight.
    """

    r: int
    J: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "J", frozenset(self.J))
        if self.r < 1 or any(not 1 <= j <= self.r - 1 for j in self.J):
            raise ValueError(f"invalid weight parameters r={self.r}, J={set(self.J)}")

    @classmethod
    def omega(cls, r: int) -> "WeightSpec":
        return cls(r, frozenset())

    @classmethod
    def orthogonal(cls) -> "WeightSpec":
        return cls(2, frozenset({1}))

    @classmethod
    def general(cls, r: int, J) -> "WeightSpec":
        return cls(r, frozenset(J))

    @property
    def exponent(self) -> int:
        return (-1) ** (self.r + 1)

    @property
    def kind(self) -> str:
        if not self.J:
            return f"omega:{self.r}"
        if self.r == 2:
            return "orth"
        return f"wj:{self.r}:{'+'.join(map(str, sorted(self.J)))}"


@lru_cache(maxsize=64)
def index_tuples(N: int, w: WeightSpec) -> np.ndarray:
    rows = []
    for t in itertools.product(range(N), repeat=w.r):
        if all((t[j] <= t[j + 1]) if (j + 1) in w.J else (t[j] < t[j + 1]) for j in range(w.r - 1)):
            rows.append(t)
    return np.array(rows, dtype=np.int64).reshape(-1, w.r)


def weight_products(x: np.ndarray, w: WeightSpec) -> np.ndarray:
    """y_t = x_{i_1}...x_{i_r} for every admissible index tuple t; shape (samples, tuples)."""
    x = _as_array(x)
    idx = index_tuples(x.shape[1], w)
    y = np.ones((x.shape[0], idx.shape[0]), dtype=complex)
    for c in range(w.r):
        y = y * x[:, idx[:, c]]
    return y


def singular_mask(x: np.ndarray, w: WeightSpec) -> np.ndarray:
    if w.exponent > 0:
        return np.zeros(_as_array(x).shape[0], dtype=bool)
    return (np.abs(1 - weight_products(x, w)) < SINGULAR_TOL).any(axis=1)


def weight_values(x: np.ndarray, w: WeightSpec) -> np.ndarray:
    y = weight_products(x, w)
    prod = np.prod(1 - y, axis=1)
    return prod if w.exponent > 0 else 1 / prod


def weight_eval(s, w: WeightSpec) -> complex:
    """The weight at one eigenvalue sample; NearSingularWeight if a negative-exponent factor vanishes."""
    x = _as_array(s)
    if singular_mask(x, w)[0]:
        raise NearSingularWeight("NearSingularWeight: a factor 1 - x_i...x_j is numerically zero")
    return complex(weight_values(x, w)[0])


def weight_degree_component(x: np.ndarray, w: WeightSpec, m: int) -> np.ndarray:
    """Homogeneous degree-m part (in the eigenvalues) of the weight's power series.

    With y_t the tuple products, prod_t (1 - y_t)^{+1} has degree-rK part
    (-1)^K e_K(y) and prod_t (1 - y_t)^{-1} has degree-rK part h_K(y).
    """
    x = _as_array(x)
    if m % w.r:
        return np.zeros(x.shape[0], dtype=complex)
    K = m // w.r
    y = weight_products(x, w)
    power = [np.full(x.shape[0], y.shape[1], dtype=complex)]
    yp = np.ones_like(y)
    for _ in range(K):
        yp = yp * y
        power.append(yp.sum(axis=1))
    sym = [np.ones(x.shape[0], dtype=complex)]
    for k in range(1, K + 1):
        if w.exponent < 0:  # complete homogeneous: k h_k = sum_i p_i h_{k-i}
            acc = sum(power[i] * sym[k - i] for i in range(1, k + 1))
        else:  # elementary: k e_k = sum_i (-1)^{i-1} p_i e_{k-i}
            acc = sum((-1) ** (i - 1) * power[i] * sym[k - i] for i in range(1, k + 1))
        sym.append(acc / k)
    return sym[K] if w.exponent < 0 else (-1) ** K * sym[K]


# ---------------------------------------------------------------------------
# exact oracles


def z_lambda(lam: Partition) -> int:
    return math.prod(j**m * math.factorial(m) for j, m in enumerate(lam.mult, start=1))


def g_moment(j: int, lam_j: int) -> int:
    if j < 1 or lam_j < 0:
        raise ValueError("need j >= 1 and lambda_j >= 0")
    if j % 2 == 1:
        if lam_j % 2 == 1:
            return 0
        v = Fraction(j, 2) ** (lam_j // 2) * Fraction(math.factorial(lam_j), math.factorial(lam_j // 2))
    else:
        v = sum(
            math.comb(lam_j, 2 * k) * Fraction(j, 2) ** k * Fraction(math.factorial(2 * k), math.factorial(k))
            for k in range(lam_j // 2 + 1)
        )
    assert v.denominator == 1
    return int(v)


def symplectic_moment(lam: Partition) -> int:
    return math.prod((-1) ** ((j - 1) * m) * g_moment(j, m) for j, m in enumerate(lam.mult, start=1))


def orthogonal_moment(lam: Partition) -> int:
    return math.prod(g_moment(j, m) for j, m in enumerate(lam.mult, start=1))


# ---------------------------------------------------------------------------
# Monte Carlo


def _batch_rng(seed: int, b: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(b,)))


def _resolve_estimator(weight, estimator):
    if estimator not in ("auto", "plain", "rotation"):
        raise ValueError(f"unknown estimator {estimator!r}")
    if weight is None:
        return "plain"
    if estimator == "auto":
        return "rotation" if weight.exponent < 0 else "plain"
    return estimator


def _sample_batch(N, size, rng, weight, check_singular):
    x = haar_eigenvalues(N, size, rng)
    resampled = 0
    if check_singular:
        bad = singular_mask(x, weight)
        while bad.any():
            resampled += int(bad.sum())
            x[bad] = haar_eigenvalues(N, int(bad.sum()), rng)
            bad = singular_mask(x, weight)
    return x, resampled


def mc_weighted_integrals(N: int, lams, weight: WeightSpec | None = None, conj_mu: Partition | None = None,
                          samples: int = 100_000, seed: int = 0, estimator: str = "auto") -> list:
    """MC estimates of the integral over U(N) of P_lambda times conj(weight, or P_mu, or 1), for several lambda.

    The samples are split into 50 batches, batch b drawn from
    SeedSequence(seed, spawn_key=(b,)); the standard error comes from the
    spread of the batch means.  With ``estimator="rotation"`` the conjugated
    weight is replaced by its homogeneous component of degree |lambda|, which
    has the same Haar average (the integrand is averaged over the rotations
    U -> e^{i theta} U) and stays bounded when the weight has a negative
    exponent.
    """
    if weight is not None and conj_mu is not None:
        raise ValueError("weight and conj_mu are mutually exclusive")
    if samples < N_BATCHES:
        raise ValueError(f"need at least {N_BATCHES} samples")
    lams = list(lams)
    mode = _resolve_estimator(weight, estimator)
    sizes = [samples // N_BATCHES + (1 if b < samples % N_BATCHES else 0) for b in range(N_BATCHES)]
    k_max = max([lam.max_part for lam in lams] + [conj_mu.max_part if conj_mu else 0, 1])
    means = np.zeros((N_BATCHES, len(lams)), dtype=complex)
    resampled = 0
    for b, size in enumerate(sizes):
        x, extra = _sample_batch(N, size, _batch_rng(seed, b), weight, weight is not None and mode == "plain" and weight.exponent < 0)
        resampled += extra
        tr = power_traces(x, k_max)
        if mode == "plain":
            if weight is not None:
                other = np.conj(weight_values(x, weight))
            elif conj_mu is not None:
                other = np.conj(p_lambda_from_traces(tr, conj_mu))
            else:
                other = 1.0
        components = {}
        for i, lam in enumerate(lams):
            vals = p_lambda_from_traces(tr, lam)
            if mode == "rotation":
                m = lam.size
                if m not in components:
                    components[m] = np.conj(weight_degree_component(x, weight, m))
                vals = vals * components[m]
            else:
                vals = vals * other
            means[b, i] = vals.mean()
    out = []
    for i, lam in enumerate(lams):
        mb = means[:, i]
        value = mb.mean()
        stderr = float(np.sqrt(np.sum(np.abs(mb - value) ** 2) / (N_BATCHES - 1) / N_BATCHES))
        params = {"N": N, "lambda": str(lam), "weight": weight.kind if weight else None,
                  "mu": str(conj_mu) if conj_mu is not None else None, "seed": seed, "estimator": mode,
                  "batches": N_BATCHES, "resampled": resampled}
        out.append(MomentEstimate(complex(value), samples, Method.MonteCarlo, params, stderr))
    return out


def mc_weighted_integral(N: int, lam: Partition, weight: WeightSpec | None = None, conj_mu: Partition | None = None,
                         samples: int = 100_000, seed: int = 0, estimator: str = "auto") -> MomentEstimate:
    return mc_weighted_integrals(N, [lam], weight, conj_mu, samples, seed, estimator)[0]


# ---------------------------------------------------------------------------
# identity checks


def partition_weight(mu: Partition) -> Fraction:
    """w(mu) = prod_k (-1)^{mu_k} / (k^{mu_k} mu_k!)."""
    out = Fraction(1)
    for k, m in enumerate(mu.mult, start=1):
        out *= Fraction((-1) ** m, k**m * math.factorial(m))
    return out


def _signed_elementary(x: np.ndarray, r: int) -> np.ndarray:
    """Coefficient of z^r in prod_i (1 - x_i z), by expanding the product factor by factor."""
    coeffs = np.zeros((x.shape[0], r + 1), dtype=complex)
    coeffs[:, 0] = 1
    for i in range(x.shape[1]):
        coeffs[:, 1:] = coeffs[:, 1:] - x[:, i: i + 1] * coeffs[:, :-1]
    return coeffs[:, r]


def elem_symmetric_identity_check(s, r: int):
    """(sum_{mu |- r} w(mu) P_mu, coefficient of z^r in prod (1 - x_i z)) at the given sample(s)."""
    x = _as_array(s)
    tr = power_traces(x, r)
    lhs = sum(float(partition_weight(mu)) * p_lambda_from_traces(tr, mu) for mu in partitions_of(r))
    rhs = _signed_elementary(x, r)
    if isinstance(s, EigenSample) or np.ndim(s) == 1:
        return complex(lhs[0]), complex(rhs[0])
    return lhs, rhs


def _truncated_series_weight(x: np.ndarray, r: int, D: int) -> np.ndarray:
    """exp(sum_j (1/j) sum_{mu |- r} w(mu) P_mu(x^j)) expanded and truncated at total degree D."""
    n = x.shape[0]
    S = np.zeros((n, D + 1), dtype=complex)
    for j in range(1, D // r + 1):
        tr = power_traces(x**j, r)
        inner = sum(float(partition_weight(mu)) * p_lambda_from_traces(tr, mu) for mu in partitions_of(r))
        S[:, j * r] += inner / j
    E = np.zeros((n, D + 1), dtype=complex)
    E[:, 0] = 1
    for m in range(1, D + 1):
        E[:, m] = sum(k * S[:, k] * E[:, m - k] for k in range(1, m + 1)) / m
    return E.sum(axis=1)


@dataclass(frozen=True)
class ReconstructionReport:
    N: int
    r: int
    radius: float
    max_deviation: dict  # truncation degree -> max |closed form - series| over samples


def weight_reconstruction_check(N: int, r: int, degrees=(4, 6, 8), samples: int = 100, seed: int = 0,
                                radius: float = 0.5, eigenvalues: np.ndarray | None = None) -> ReconstructionReport:
    """Compare omega_r with its exponential-of-power-sums series truncated at each degree D.

    The eigenvalues are scaled by ``radius`` < 1, inside the disc where the
    series converges, so the deviation decays like radius^D.
    """
    if max(degrees) > 8:
        raise ValueError("truncation degree must be <= 8")
    x = haar_eigenvalues(N, samples, np.random.default_rng(seed)) if eigenvalues is None else _as_array(eigenvalues)
    x = radius * x
    w = WeightSpec.omega(r)
    closed = weight_values(x, w)
    dev = {D: float(np.max(np.abs(closed - _truncated_series_weight(x, r, D)))) for D in degrees}
    return ReconstructionReport(N, r, radius, dev)
