"""Power residue symbols, Dirichlet characters of order r, L-polynomials and Frobenius traces.

Character values are r-th roots of unity, so internally a value is stored as
its exponent k in Z/r (meaning exp(2 pi i k / r)), with -1 standing for 0.
Sums of character values are kept as integer count vectors over Z/r and only
turned into complex numbers at the end.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np
from sympy import divisors

from .errors import NotPowerFree, NotPrime, SingularSeries
from .finite_field import FieldContext, mu_r_index
from .polyring import (
    Poly,
    canonical_weights,
    factor,
    irreducible_array,
    monic_coeff_array,
    powers_of_T_mod,
    powmod,
    with_leading_one,
)

# Residue tables (one row per prime, one column per residue class) are used
# when they have at most this many entries; otherwise norms are computed directly.
TABLE_LIMIT = 30_000_000
# Upper bound on the size of temporary (primes x polys x degree) arrays.
CHUNK_ELEMENTS = 6_000_000


def _is_tabulated_prime(P: Poly) -> bool | None:
    """Membership of P in the cached irreducible table, or None when the table would be too big."""
    q, d = P.q, P.deg
    if q**d > 2_000_000:
        return None
    table = irreducible_array(q, d)
    key = int(np.dot(P.low(), canonical_weights(q, d)))
    keys = table @ canonical_weights(q, d)
    pos = int(np.searchsorted(keys, key))
    return pos < len(keys) and int(keys[pos]) == key


def residue_exponent(ctx: FieldContext, F: Poly, P: Poly) -> int:
    """Exponent k with (F/P)_r = exp(2 pi i k / r), or -1 when P divides F."""
    if not P.is_monic() or P.deg < 1 or _is_tabulated_prime(P) is False:
        raise NotPrime(f"NotPrime: {P}")
    if (F % P).is_zero():
        return -1
    c = powmod(F, (ctx.q**P.deg - 1) // ctx.r, P)
    if c.deg != 0:
        raise NotPrime(f"NotPrime: {P} (residue power is not a scalar)")
    try:
        return mu_r_index(ctx, c.coeffs[0])
    except ValueError:
        raise NotPrime(f"NotPrime: {P} (residue power is not an r-th root of unity)") from None


def residue_symbol(ctx: FieldContext, F: Poly, P: Poly) -> complex:
    """(F/P)_r as a complex number: F^((q^deg P - 1)/r) mod P, embedded in the unit circle."""
    k = residue_exponent(ctx, F, P)
    return 0j if k < 0 else complex(ctx.roots_of_unity[k])


# ---------------------------------------------------------------------------
# vectorized residue symbols


def _mulmod(a, b, W2, q):
    """Products of residues a, b (..., d) modulo primes whose powers T^0..T^{2d-2} are W2."""
    d = a.shape[-1]
    conv = np.zeros(a.shape[:-1] + (2 * d - 1,), dtype=np.float64)
    for j in range(d):
        conv[..., j: j + d] += a[..., j: j + 1] * b
    conv %= q
    return np.matmul(conv, W2) % q


def _frobenius_data(q: int, primes_low: np.ndarray):
    d = primes_low.shape[1]
    W = powers_of_T_mod(q, primes_low, max(2 * d - 2, (d - 1) * q)).astype(np.float64)
    frob = W[:, [j * q for j in range(d)], :]  # row j = T^{jq} mod P
    return W[:, : 2 * d - 1, :], frob


def _norm_exponents(ctx: FieldContext, residues: np.ndarray, primes_low: np.ndarray, W2=None, frob=None):
    """Exponents of chi_P on residues (numP, M, d) via the norm map to F_q.

    (a/P)_r = Norm(a)^((q-1)/r) with Norm(a) = prod_i a^(q^i), and a -> a^q is
    linear over F_q, so everything reduces to small matrix products.
    """
    q, r = ctx.q, ctx.r
    d = primes_low.shape[1]
    if W2 is None:
        W2, frob = _frobenius_data(q, primes_low)
    a = residues.astype(np.float64)
    prod, cur = a, a
    for _ in range(d - 1):
        cur = np.matmul(cur, frob) % q
        prod = _mulmod(prod, cur, W2, q)
    prod = prod.astype(np.int64)
    nonzero = residues.any(axis=-1)
    if d > 1 and prod[..., 1:][nonzero].any():
        raise NotPrime("NotPrime: norm is not a scalar; some modulus is reducible")
    out = np.where(nonzero, ctx.dlog[prod[..., 0]] % r, -1)
    return out.astype(np.int8)


@functools.lru_cache(maxsize=32)
def residue_table(ctx: FieldContext, d: int) -> np.ndarray:
    """table[p, i]: exponent of chi_P on the residue with canonical index i, for every prime P of degree d."""
    q = ctx.q
    primes = irreducible_array(q, d)
    residues = monic_coeff_array(q, d)  # every residue class of degree < d
    W2, frob = _frobenius_data(q, primes)
    table = np.empty((primes.shape[0], q**d), dtype=np.int8)
    step = max(1, CHUNK_ELEMENTS // (q**d * d))
    for s in range(0, primes.shape[0], step):
        sl = slice(s, s + step)
        res = np.broadcast_to(residues, (len(primes[sl]),) + residues.shape)
        table[sl] = _norm_exponents(ctx, res, primes[sl], W2[sl], frob[sl])
    table.setflags(write=False)
    return table


@functools.lru_cache(maxsize=32)
def _reduction_data(q: int, d: int, n: int):
    primes = irreducible_array(q, d)
    return powers_of_T_mod(q, primes, n).astype(np.float64)


def exponent_matrix(ctx: FieldContext, polys_full: np.ndarray, d: int, primes_low: np.ndarray | None = None) -> np.ndarray:
    """Exponents of chi_P(F) for each prime P of degree d (rows) and polynomial F (columns).

    ``polys_full`` holds full coefficient rows (constant term first).  With
    ``primes_low`` omitted, all monic irreducibles of degree d are used.
    Entries are in 0..r-1, or -1 where P divides F.
    """
    q = ctx.q
    polys = np.asarray(polys_full, dtype=np.float64)
    M, n1 = polys.shape
    all_primes = primes_low is None
    if all_primes:
        primes_low = irreducible_array(q, d)
        W = _reduction_data(q, d, n1 - 1)
    else:
        primes_low = np.asarray(primes_low, dtype=np.int64).reshape(-1, d)
        W = powers_of_T_mod(q, primes_low, n1 - 1).astype(np.float64)
    numP = primes_low.shape[0]
    out = np.empty((numP, M), dtype=np.int8)
    use_table = all_primes and numP * q**d <= TABLE_LIMIT
    if use_table:
        table = residue_table(ctx, d)
        weights = canonical_weights(q, d).astype(np.float64)
    else:
        W2, frob = _frobenius_data(q, primes_low)
    pstep = max(1, CHUNK_ELEMENTS // max(1, M * d))
    mstep = max(1, CHUNK_ELEMENTS // (min(numP, pstep) * d))
    for ps in range(0, numP, pstep):
        psl = slice(ps, ps + pstep)
        for ms in range(0, M, mstep):
            msl = slice(ms, ms + mstep)
            res = np.matmul(polys[None, msl, :], W[psl]) % q
            if use_table:
                idx = (res @ weights).astype(np.int64)
                out[psl, msl] = np.take_along_axis(table[psl], idx, axis=1)
            else:
                out[psl, msl] = _norm_exponents(ctx, res, primes_low[psl], W2[psl], frob[psl])
    return out


def combine_exponents(exps: np.ndarray, powers, r: int) -> np.ndarray:
    """Exponent of prod_i chi_i^{powers_i} from per-factor exponents (rows of ``exps``)."""
    total = np.zeros(exps.shape[1:], dtype=np.int64)
    dead = np.zeros(exps.shape[1:], dtype=bool)
    for row, e in zip(exps, powers):
        dead |= row < 0
        total += np.where(row < 0, 0, row.astype(np.int64) * e)
    return np.where(dead, -1, total % r)


def count_by_exponent(exps: np.ndarray, r: int, weights=None, axis=0) -> np.ndarray:
    """Integer counts of each exponent value 0..r-1 along ``axis`` (exponent -1 dropped)."""
    exps = np.moveaxis(exps, axis, -1)
    out = np.empty(exps.shape[:-1] + (r,), dtype=np.int64)
    for k in range(r):
        hit = exps == k
        out[..., k] = hit.sum(axis=-1) if weights is None else (hit * weights).sum(axis=-1)
    return out


# ---------------------------------------------------------------------------
# characters


class Character:
    """The character chi_G(F) = prod_{P^e || G} (F/P)_r^e attached to an r-th-power-free modulus G."""

    def __init__(self, ctx: FieldContext, modulus: Poly):
        if not modulus.is_monic():
            raise ValueError("modulus must be monic")
        self.ctx = ctx
        self.modulus = modulus
        self.modulus_factors = factor(modulus)
        for p, e in self.modulus_factors.factors:
            if e >= ctx.r:
                raise NotPowerFree(f"NotPowerFree: {p}^{e} divides the modulus")

    @property
    def degree(self) -> int:
        return self.modulus.deg

    def is_trivial(self) -> bool:
        return self.modulus.deg == 0

    def exponent(self, F: Poly) -> int:
        total = 0
        for p, e in self.modulus_factors.factors:
            k = residue_exponent(self.ctx, F, p)
            if k < 0:
                return -1
            total += k * e
        return total % self.ctx.r

    def exponents(self, polys_full: np.ndarray) -> np.ndarray:
        """Vectorized exponents of chi_G on full coefficient rows."""
        polys_full = np.asarray(polys_full, dtype=np.int64)
        rows, powers = [], []
        for p, e in self.modulus_factors.factors:
            rows.append(exponent_matrix(self.ctx, polys_full, p.deg, np.array([p.low()]))[0])
            powers.append(e)
        if not rows:
            return np.zeros(polys_full.shape[0], dtype=np.int64)
        return combine_exponents(np.array(rows), powers, self.ctx.r)

    def __call__(self, F: Poly) -> complex:
        return chi(self, F)

    def __repr__(self):
        return f"Character(q={self.ctx.q}, r={self.ctx.r}, modulus={self.modulus})"


def chi(char: Character, F: Poly) -> complex:
    k = char.exponent(F)
    return 0j if k < 0 else complex(char.ctx.roots_of_unity[k])


def reciprocity_shift(ctx: FieldContext, deg_a: int, deg_b: int) -> int:
    """Exponent offset s with chi_A(B) = chi_B(A) * exp(2 pi i s / r) for monic coprime A, B.

    The sign is (-1)^{((q-1)/r) deg A deg B}; it is trivial whenever q = 1 mod 2r.
    """
    if ((ctx.q - 1) // ctx.r * deg_a * deg_b) % 2:
        return ctx.r // 2
    return 0


# ---------------------------------------------------------------------------
# L-polynomial and traces


def l_poly_counts(char: Character) -> np.ndarray:
    """counts[m, k] = #{monic F of degree m : chi_G(F) = exp(2 pi i k / r)}, m = 0..deg G."""
    q, r = char.ctx.q, char.ctx.r
    out = np.zeros((char.degree + 1, r), dtype=np.int64)
    out[0, 0] = 1
    for m in range(1, char.degree + 1):
        polys = with_leading_one(monic_coeff_array(q, m))
        out[m] = count_by_exponent(char.exponents(polys), r)
    return out


def l_poly(char: Character) -> list:
    """Coefficients c_0..c_{deg G} of L(u, chi_G); trailing zeros are kept."""
    counts = l_poly_counts(char)
    return [complex(v) for v in counts @ char.ctx.roots_of_unity]


@dataclass(frozen=True)
class LPolyReport:
    degree: int
    root_moduli: tuple
    coefficients: tuple


def l_poly_report(char: Character, tol: float = 1e-9) -> LPolyReport:
    """Observed degree of L(u, chi_G) and the moduli of its roots in u."""
    coeffs = l_poly(char)
    deg = max((m for m, c in enumerate(coeffs) if abs(c) > tol), default=0)
    roots = np.roots(coeffs[: deg + 1][::-1]) if deg else np.array([])
    return LPolyReport(deg, tuple(sorted(float(abs(z)) for z in roots)), tuple(coeffs))


@dataclass(frozen=True)
class TraceVector:
    """traces[n-1] = Tr(Theta_G^n) for n = 1..k_max."""

    traces: tuple
    modulus: Poly
    q: int
    r: int

    def __getitem__(self, n: int) -> complex:
        return self.traces[n - 1]

    def __len__(self):
        return len(self.traces)

    def p_lambda(self, lam) -> complex:
        out = 1 + 0j
        for j, m in enumerate(lam.mult, start=1):
            if m:
                out *= self.traces[j - 1] ** m
        return out


def _prime_power_exponents(char: Character, d: int) -> np.ndarray:
    q = char.ctx.q
    return char.exponents(with_leading_one(irreducible_array(q, d)))


def trace_counts(char: Character, n: int) -> np.ndarray:
    """Integer vector c with sum_{deg P | n} deg P * chi_G(P^{n/deg P}) = sum_k c_k exp(2 pi i k/r)."""
    r = char.ctx.r
    out = np.zeros(r, dtype=np.int64)
    for d in divisors(n):
        e = _prime_power_exponents(char, d)
        e = np.where(e < 0, -1, (e * (n // d)) % r)
        out += d * count_by_exponent(e, r)
    return out


def trace_frobenius(char: Character, n: int) -> complex:
    """Tr(Theta_G^n) = -q^{-n/2} sum_{deg P | n} deg P chi_G(P^{n/deg P})."""
    if n < 1:
        raise ValueError("n must be >= 1")
    s = complex(trace_counts(char, n) @ char.ctx.roots_of_unity)
    return -s / char.ctx.q ** (n / 2)


def trace_vector(char: Character, k_max: int) -> TraceVector:
    return TraceVector(tuple(trace_frobenius(char, n) for n in range(1, k_max + 1)), char.modulus, char.ctx.q, char.ctx.r)


def traces_via_newton(lp, n_max: int, q: int) -> list:
    """Tr(Theta^n), n = 1..n_max, from L(u) = det(1 - sqrt(q) u Theta) by Newton's identities."""
    c = [complex(x) for x in lp]
    if not c or abs(c[0] - 1) > 1e-12:
        raise SingularSeries("SingularSeries: constant term of the L-polynomial must be 1")
    coef = lambda i: c[i] if i < len(c) else 0j  # noqa: E731
    p = [0j] * (n_max + 1)
    for n in range(1, n_max + 1):
        p[n] = -n * coef(n) - sum(coef(i) * p[n - i] for i in range(1, n))
    return [p[n] / q ** (n / 2) for n in range(1, n_max + 1)]
