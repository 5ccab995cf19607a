"""Family averages of normalized mixed power traces, and their exact main/error term split.

Write lambda = (n_1, ..., n_l).  Expanding every trace with the trace formula
turns the normalized moment into a sum over tuples of primes (P_1, ..., P_l)
with deg P_j | n_j:

    <q^{(r-2)|lambda|/(2r)} P_lambda> = (-1)^l q^{-|lambda|/r}
        * sum_tuples prod_j deg P_j * <chi_G(prod_j P_j^{n_j / deg P_j})>.

Tuples whose product is an r-th power form the main term, the rest the error
term.  The family averages of chi_G(F) are computed exactly, either by
enumerating the family or from the generating function

    sum_N sum_{G in H_r(N)} chi_F(G) u^N
        = L(u, chi_F) (1 - q u^r) prod_{P | F} 1 / (1 - u^{r deg P}),

and converted between chi_G(F) and chi_F(G) by reciprocity.
"""

from __future__ import annotations

import itertools
import math
import warnings
from fractions import Fraction

import numpy as np
from sympy import divisors

from .characters import combine_exponents, count_by_exponent, exponent_matrix, reciprocity_shift
from .errors import EmptyFamily, TooLarge
from .estimate import Method, MomentEstimate
from .partitions import Partition
from .polyring import (
    Poly,
    canonical_weights,
    count_family,
    count_family_coprime,
    factor,
    family_array,
    irreducible_array,
    monic_coeff_array,
    prime_count,
    with_leading_one,
)
from .sweep import CHUNK, counts_to_traces, family_trace_counts

MAX_LAMBDA_SIZE = 12
MAX_TUPLES = 2_000_000
ENUMERATION_LIMIT = 2_000_000


def normalization_exponent(r: int, lam: Partition) -> Fraction:
    """Exponent e of the normalization q^e = q^{(r-2)|lambda|/(2r)}."""
    return Fraction((r - 2) * lam.size, 2 * r)


def _params(ctx, N, lam, **extra):
    out = {"q": ctx.q, "r": ctx.r, "N": N, "lambda": str(lam)}
    out.update(extra)
    return out


def _check_range(ctx, N, lam):
    r = ctx.r
    if lam.size * (2 * r - 2) >= r * N:
        warnings.warn(
            f"|lambda| = {lam.size} is outside |lambda| < rN/(2r-2) = {Fraction(r * N, 2 * r - 2)}; "
            "the finite-q value is still computed",
            RuntimeWarning,
            stacklevel=3,
        )


# ---------------------------------------------------------------------------
# empirical moments


def empirical_moments(ctx, N: int, lams, jobs: int = 1) -> list:
    """Exact family averages of q^{(r-2)|lambda|/(2r)} P_lambda(Theta_G) over H_r(N), one sweep for all lambda."""
    lams = list(lams)
    if N < 1:
        raise ValueError("N must be >= 1")
    size = count_family(ctx, N)
    if size == 0:
        raise EmptyFamily("EmptyFamily")
    for lam in lams:
        _check_range(ctx, N, lam)
    k_max = max([lam.max_part for lam in lams] + [1])
    traces = counts_to_traces(ctx, family_trace_counts(ctx, N, k_max, jobs))
    out = []
    for lam in lams:
        vals = np.ones(size, dtype=complex)
        for j, m in enumerate(lam.mult, start=1):
            if m:
                vals = vals * traces[:, j - 1] ** m
        expo = normalization_exponent(ctx.r, lam)
        value = complex(vals.mean()) * ctx.q ** float(expo) if lam.size else complex(vals.mean())
        out.append(MomentEstimate(value, size, Method.FamilyEnumeration,
                                  _params(ctx, N, lam, normalization_exponent=str(expo))))
    return out


def empirical_moment(ctx, N: int, lam: Partition, jobs: int = 1) -> MomentEstimate:
    return empirical_moments(ctx, N, [lam], jobs)[0]


# ---------------------------------------------------------------------------
# tuple sums


def tuple_classes(ctx, lam: Partition) -> dict:
    """Group prime tuples by F(P_j) = prod_j P_j^{n_j/deg P_j}.

    Keys are sorted tuples ((d, i, e), ...): prime number i of degree d (index
    into the irreducible table) with total exponent e.  Values are the summed
    weights prod_j deg P_j.
    """
    if lam.size > MAX_LAMBDA_SIZE:
        raise TooLarge(f"TooLarge: |lambda| = {lam.size} > {MAX_LAMBDA_SIZE}")
    q = ctx.q
    options = []
    for n in lam.parts:
        options.append([(d, i, n // d) for d in divisors(n) for i in range(prime_count(q, d))])
    if math.prod(len(o) for o in options) > MAX_TUPLES:
        raise TooLarge(f"TooLarge: {math.prod(len(o) for o in options)} prime tuples for lambda={lam}")
    classes = {}
    for combo in itertools.product(*options):
        exps = {}
        weight = 1
        for d, i, e in combo:
            exps[(d, i)] = exps.get((d, i), 0) + e
            weight *= d
        key = tuple(sorted((d, i, e) for (d, i), e in exps.items()))
        classes[key] = classes.get(key, 0) + weight
    return classes


def is_rth_power_key(key, r: int) -> bool:
    return all(e % r == 0 for _, _, e in key)


def key_degree(key) -> int:
    return sum(d * e for d, _, e in key)


def key_poly(q: int, key) -> Poly:
    out = Poly.one(q)
    for d, i, e in key:
        out = out * Poly.monic_from_low(irreducible_array(q, d)[i], q) ** e
    return out


def _prime_index(P: Poly) -> int:
    q, d = P.q, P.deg
    w = canonical_weights(q, d)
    keys = irreducible_array(q, d) @ w
    pos = int(np.searchsorted(keys, int(np.dot(P.low(), w))))
    assert pos < len(keys) and int(keys[pos]) == int(np.dot(P.low(), w))
    return pos


def key_of(F: Poly) -> tuple:
    return tuple(sorted((p.deg, _prime_index(p), e) for p, e in factor(F).factors))


# character sums sum_{G in H_r(N)} chi_F(G), returned as complex numbers


def _character_sums_enumerate(ctx, N: int, keys) -> dict:
    r = ctx.r
    keys = list(keys)
    needed = {}
    for key in keys:
        for d, i, _ in key:
            needed.setdefault(d, set()).add(i)
    sums = {key: np.zeros(r, dtype=np.int64) for key in keys}
    total = count_family(ctx, N)
    for start in range(0, total, CHUNK):
        rows = with_leading_one(family_array(ctx, N, start, start + CHUNK))
        E = {}
        for d, idx in needed.items():
            if 4 * len(idx) >= prime_count(ctx.q, d):
                full = exponent_matrix(ctx, rows, d)
                E[d] = {i: full[i] for i in idx}
            else:
                order = sorted(idx)
                sub = exponent_matrix(ctx, rows, d, irreducible_array(ctx.q, d)[order])
                E[d] = dict(zip(order, sub))
        for key in keys:
            if not key:
                sums[key][0] += rows.shape[0]
                continue
            exps = combine_exponents(np.array([E[d][i] for d, i, _ in key]), [e for _, _, e in key], r)
            sums[key] += count_by_exponent(exps, r)
    roots = ctx.roots_of_unity
    return {key: complex(v @ roots) for key, v in sums.items()}


def _series_base(ctx, N: int, key) -> list:
    """Coefficients of (1 - q u^r) prod_{P in key} 1/(1 - u^{r deg P}) up to u^N."""
    q, r = ctx.q, ctx.r
    b = [0] * (N + 1)
    b[0] = 1
    if r <= N:
        b[r] = -q
    for d, _, _ in key:
        step = r * d
        for m in range(step, N + 1):
            b[m] += b[m - step]
    return b


_SINGLE_PRIME_CACHE = {}


def _single_prime_counts(ctx, d: int, m: int) -> np.ndarray:
    """counts[i, k] = #{monic A of degree m : chi_{P_i}(A) = exp(2 pi i k/r)}, P_i of degree d, m < d."""
    cache_key = (ctx.q, ctx.r, ctx.allow_weak, d, m)
    if cache_key not in _SINGLE_PRIME_CACHE:
        rows = with_leading_one(monic_coeff_array(ctx.q, m)) if m else np.ones((1, 1), dtype=np.int64)
        _SINGLE_PRIME_CACHE[cache_key] = count_by_exponent(exponent_matrix(ctx, rows, d), ctx.r, axis=1)
    return _SINGLE_PRIME_CACHE[cache_key]


def _l_coefficients(ctx, key, m_max: int) -> list:
    """Coefficients c_0..c_{m_max} of L(u, chi_F) for F described by ``key``."""
    q, r = ctx.q, ctx.r
    roots = ctx.roots_of_unity
    if is_rth_power_key(key, r):
        # trivial character modulo rad F: zeta(u) prod (1 - u^{deg P})
        c = [q**m for m in range(m_max + 1)]
        for d, _, _ in key:
            for m in range(m_max, d - 1, -1):
                c[m] -= c[m - d]
        return [complex(v) for v in c]
    D = sum(d for d, _, _ in key)
    coeffs = [0j] * (m_max + 1)
    for m in range(min(D - 1, m_max) + 1):
        if len(key) == 1:
            d, i, e = key[0]
            counts = _single_prime_counts(ctx, d, m)[i]
            coeffs[m] = complex(sum(counts[k] * roots[(k * e) % r] for k in range(r)))
            continue
        rows = with_leading_one(monic_coeff_array(q, m)) if m else np.ones((1, 1), dtype=np.int64)
        exps = [exponent_matrix(ctx, rows, d, irreducible_array(q, d)[[i]])[0] for d, i, _ in key]
        combined = combine_exponents(np.array(exps), [e for _, _, e in key], r)
        coeffs[m] = complex(count_by_exponent(combined, r) @ roots)
    return coeffs


def _character_sums_series(ctx, N: int, keys) -> dict:
    out = {}
    for key in keys:
        base = _series_base(ctx, N, key)
        c = _l_coefficients(ctx, key, N)
        out[key] = sum(c[m] * base[N - m] for m in range(N + 1))
    return out


def _resolve_route(ctx, N, route):
    if route not in ("auto", "enumerate", "series"):
        raise ValueError(f"unknown route {route!r}")
    if route == "auto":
        return "enumerate" if ctx.q**N <= ENUMERATION_LIMIT else "series"
    return route


def character_sums(ctx, N: int, keys, route: str = "auto") -> dict:
    """sum_{G in H_r(N)} chi_F(G) for every F described by a key."""
    keys = list(dict.fromkeys(keys))
    if _resolve_route(ctx, N, route) == "enumerate":
        return _character_sums_enumerate(ctx, N, keys)
    return _character_sums_series(ctx, N, keys)


def family_character_sum(ctx, N: int, F: Poly, route: str = "auto") -> complex:
    """sum over G in H_r(N) of chi_F(G) = prod_{P^e || F} (G/P)_r^e, for any monic F."""
    if not F.is_monic():
        raise ValueError("F must be monic")
    key = key_of(F) if F.deg > 0 else ()
    return character_sums(ctx, N, [key], route)[key]


def coprime_average(ctx, N: int, F: Poly) -> Fraction:
    """|H_r(N; F)| / |H_r(N)| exactly."""
    return Fraction(count_family_coprime(ctx, N, F), count_family(ctx, N))


# ---------------------------------------------------------------------------
# main and error terms


def _split_sums(ctx, N: int, lam: Partition, route: str):
    """Exact (main, error) tuple sums sum_tuples prod deg P_j <chi_G(F(P_j))>, before the prefactor."""
    classes = tuple_classes(ctx, lam)
    route = _resolve_route(ctx, N, route)
    sums = character_sums(ctx, N, list(classes), route)
    size = count_family(ctx, N)
    main, err = Fraction(0), 0j
    for key, weight in classes.items():
        shift = reciprocity_shift(ctx, key_degree(key), N)
        s = sums[key] * complex(ctx.roots_of_unity[shift])
        if is_rth_power_key(key, ctx.r):
            count = round(s.real)
            assert abs(s - count) < 1e-6, "r-th power characters must give integer counts"
            main += weight * Fraction(count, size)
        else:
            err += weight * s / size
    return main, err, size, route


def _prefactor(ctx, lam):
    return (-1) ** lam.length * ctx.q ** (-lam.size / ctx.r)


def split_moment(ctx, N: int, lam: Partition, route: str = "auto"):
    """(main term, error term) estimates from one tuple enumeration."""
    main, err, size, route = _split_sums(ctx, N, lam, route)
    pre = _prefactor(ctx, lam)
    mt = MomentEstimate(complex(pre * float(main)), size, Method.MainTermFiniteQ,
                        _params(ctx, N, lam, route=route, exact_sum=str(main)))
    et = MomentEstimate(complex(pre * err), size, Method.ErrorTermFiniteQ, _params(ctx, N, lam, route=route))
    return mt, et


def main_term_finite(ctx, N: int, lam: Partition, route: str = "auto") -> MomentEstimate:
    return split_moment(ctx, N, lam, route)[0]


def error_term_finite(ctx, N: int, lam: Partition, route: str = "auto") -> MomentEstimate:
    return split_moment(ctx, N, lam, route)[1]


def main_term_tuple_count(ctx, lam: Partition) -> MomentEstimate:
    """The N-free main term (-1)^l q^{-|lambda|/r} sum over r-th-power tuples of prod deg P_j."""
    classes = tuple_classes(ctx, lam)
    total = sum(w for key, w in classes.items() if is_rth_power_key(key, ctx.r))
    return MomentEstimate(complex(_prefactor(ctx, lam) * total), 0, Method.MainTermFiniteQ,
                          {"q": ctx.q, "r": ctx.r, "lambda": str(lam), "tuple_weight": total})
