"""Polynomials over a prime field F_q.

Scalar arithmetic lives on :class:`Poly` (coefficient tuples, lowest degree
first).  Anything that touches many polynomials at once -- irreducible tables,
the r-th-power-free family, coprimality filters -- works on integer numpy
arrays whose rows hold the non-leading coefficients of monic polynomials.

Canonical order everywhere is degree-major, then lexicographic in the
coefficients starting from the constant term.  For monic polynomials of a
fixed degree n this is the order of the integer ``sum(c_i * q**(n-1-i))``,
which we call the canonical index.
"""

from __future__ import annotations

import functools
import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np
from sympy import divisors, mobius

from .errors import DivideByZeroPoly, TooLarge

# Largest q**d for which an irreducible table may be built.
MAX_TABLE_SIZE = 50_000_000


def _field_size(ctx_or_q) -> int:
    return ctx_or_q if isinstance(ctx_or_q, int) else ctx_or_q.q


class Poly:
    """Element of F_q[T]; ``coeffs[i]`` is the coefficient of T^i."""

    __slots__ = ("q", "coeffs")

    def __init__(self, coeffs, q: int):
        c = [int(a) % q for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.q = q
        self.coeffs = tuple(c)

    @classmethod
    def T(cls, q: int) -> "Poly":
        return cls((0, 1), q)

    @classmethod
    def one(cls, q: int) -> "Poly":
        return cls((1,), q)

    @classmethod
    def monic_from_low(cls, low, q: int) -> "Poly":
        """Monic polynomial of degree len(low) with the given lower coefficients."""
        return cls(tuple(int(a) for a in low) + (1,), q)

    @property
    def deg(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return self.lc == 1

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def monic(self) -> "Poly":
        if self.is_zero():
            raise DivideByZeroPoly("the zero polynomial has no monic associate")
        inv = pow(self.lc, -1, self.q)
        return Poly([a * inv for a in self.coeffs], self.q)

    def low(self) -> tuple:
        """Non-leading coefficients of a monic polynomial."""
        return self.coeffs[:-1]

    def sort_key(self):
        return (self.deg, self.coeffs)

    def norm(self) -> int:
        """|F| = q^deg F."""
        return self.q ** self.deg

    def _other(self, other):
        if isinstance(other, Poly):
            if other.q != self.q:
                raise ValueError("polynomials over different fields")
            return other
        return Poly((int(other),), self.q)

    def __add__(self, other):
        other = self._other(other)
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return Poly([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)], self.q)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-a for a in self.coeffs], self.q)

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        other = self._other(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly((), self.q)
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Poly(out, self.q)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result, base = Poly.one(self.q), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other):
        return divrem(self, self._other(other))

    def __floordiv__(self, other):
        return divrem(self, self._other(other))[0]

    def __mod__(self, other):
        return divrem(self, self._other(other))[1]

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.q == other.q and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == Poly((other,), self.q).coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.q, self.coeffs))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __call__(self, x: int) -> int:
        acc = 0
        for a in reversed(self.coeffs):
            acc = (acc * x + a) % self.q
        return acc

    def __repr__(self):
        if not self.coeffs:
            return f"Poly(0 mod {self.q})"
        terms = []
        for i in range(self.deg, -1, -1):
            a = self.coeffs[i]
            if not a:
                continue
            mono = "" if i == 0 else ("T" if i == 1 else f"T^{i}")
            if not mono:
                terms.append(str(a))
            else:
                terms.append(mono if a == 1 else f"{a}*{mono}")
        return f"Poly({' + '.join(terms)} mod {self.q})"


def divrem(a: Poly, b: Poly):
    if b.is_zero():
        raise DivideByZeroPoly("DivideByZeroPoly")
    q = a.q
    rem = list(a.coeffs)
    db = b.deg
    if len(rem) - 1 < db:
        return Poly((), q), a
    inv = pow(b.lc, -1, q)
    quo = [0] * (len(rem) - db)
    bc = b.coeffs
    for i in range(len(rem) - 1, db - 1, -1):
        c = rem[i] * inv % q
        if c:
            quo[i - db] = c
            for j in range(db + 1):
                rem[i - db + j] = (rem[i - db + j] - c * bc[j]) % q
    return Poly(quo, q), Poly(rem[:db], q)


def gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd (the zero polynomial only when both inputs vanish)."""
    while not b.is_zero():
        a, b = b, a % b
    return a if a.is_zero() else a.monic()


def powmod(f: Poly, e: int, p: Poly) -> Poly:
    result = Poly.one(f.q) % p
    base = f % p
    while e:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


# ---------------------------------------------------------------------------
# array helpers


@functools.lru_cache(maxsize=16)
def monic_coeff_array(q: int, n: int) -> np.ndarray:
    """Rows = lower coefficients (c_0..c_{n-1}) of every monic degree-n polynomial, canonical order."""
    if q**n > MAX_TABLE_SIZE:
        raise TooLarge(f"TooLarge: {q}^{n} monic polynomials")
    idx = np.arange(q**n, dtype=np.int64)
    out = np.empty((q**n, n), dtype=np.int64)
    for i in range(n):
        out[:, i] = (idx // q ** (n - 1 - i)) % q
    out.setflags(write=False)
    return out


def canonical_weights(q: int, n: int) -> np.ndarray:
    return np.array([q ** (n - 1 - i) for i in range(n)], dtype=np.int64)


def with_leading_one(low: np.ndarray) -> np.ndarray:
    return np.concatenate([low, np.ones((low.shape[0], 1), dtype=low.dtype)], axis=1)


def powers_of_T_mod(q: int, primes_low: np.ndarray, n: int) -> np.ndarray:
    """W[p, i] = coefficients of T^i mod P_p for i = 0..n; primes share one degree d."""
    num, d = primes_low.shape
    W = np.zeros((num, n + 1, d), dtype=np.int64)
    v = np.zeros((num, d), dtype=np.int64)
    for i in range(n + 1):
        if i < d:
            v = np.zeros((num, d), dtype=np.int64)
            v[:, i] = 1
        else:
            top = v[:, d - 1:d]
            shifted = np.zeros_like(v)
            shifted[:, 1:] = v[:, :-1]
            v = (shifted - top * primes_low) % q
        W[:, i] = v
    return W


def reduce_mod_primes(q: int, polys_full: np.ndarray, primes_low: np.ndarray, W=None) -> np.ndarray:
    """Residues of each polynomial row modulo each prime: shape (num_primes, num_polys, d)."""
    n = polys_full.shape[1] - 1
    if W is None or W.shape[1] < n + 1:
        W = powers_of_T_mod(q, primes_low, n)
    return np.matmul(polys_full[None, :, :], W[:, : n + 1, :]) % q


def poly_to_full(p: Poly, n: int | None = None) -> np.ndarray:
    n = p.deg if n is None else n
    out = np.zeros(n + 1, dtype=np.int64)
    out[: len(p.coeffs)] = p.coeffs
    return out


# ---------------------------------------------------------------------------
# irreducible tables


def cache_dir() -> Path:
    return Path(os.environ.get("FFM_CACHE", "./.ffm_cache"))


def _cache_path(q: int, d: int) -> Path:
    return cache_dir() / f"irr_q{q}_d{d}.bin"


def _read_cache(path: Path, d: int):
    try:
        raw = path.read_bytes()
    except OSError:
        return None
    if len(raw) < 4:
        return None
    count = int(np.frombuffer(raw[:4], dtype="<u4")[0])
    if len(raw) != 4 + count * d:
        return None
    return np.frombuffer(raw[4:], dtype=np.uint8).reshape(count, d).astype(np.int64)


def _write_cache(path: Path, table: np.ndarray) -> None:
    if table.shape[0] and table.max() > 255:
        return
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(f".tmp{os.getpid()}")
        tmp.write_bytes(np.array([table.shape[0]], dtype="<u4").tobytes() + table.astype(np.uint8).tobytes())
        os.replace(tmp, path)
    except OSError:
        pass


def _sieve_irreducibles(q: int, d: int) -> np.ndarray:
    if d == 1:
        return np.arange(q, dtype=np.int64).reshape(q, 1)
    reducible = np.zeros(q**d, dtype=bool)
    weights = canonical_weights(q, d)
    for k in range(1, d // 2 + 1):
        B = with_leading_one(monic_coeff_array(q, d - k))
        for a in irreducible_array(q, k):
            a_full = np.append(a, 1)
            prod = np.zeros((B.shape[0], d + 1), dtype=np.int64)
            for j, aj in enumerate(a_full):
                if aj:
                    prod[:, j: j + d - k + 1] += aj * B
            reducible[(prod[:, :d] % q) @ weights] = True
    idx = np.flatnonzero(~reducible)
    return np.stack([(idx // q ** (d - 1 - i)) % q for i in range(d)], axis=1).astype(np.int64)


@functools.lru_cache(maxsize=64)
def irreducible_array(q: int, d: int) -> np.ndarray:
    """Lower coefficients of all monic irreducibles of degree d, canonical order.

    Backed by the on-disk cache ``$FFM_CACHE/irr_q<q>_d<d>.bin``.
    """
    if d < 1:
        raise ValueError("degree must be >= 1")
    if q**d > MAX_TABLE_SIZE:
        raise TooLarge(f"TooLarge: irreducible table for q={q}, d={d}")
    path = _cache_path(q, d)
    table = _read_cache(path, d)
    if table is None or table.shape[0] != prime_count(q, d):
        table = _sieve_irreducibles(q, d)
        _write_cache(path, table)
    table.setflags(write=False)
    return table


def irreducibles(ctx, d: int) -> list:
    q = _field_size(ctx)
    return [Poly.monic_from_low(row, q) for row in irreducible_array(q, d)]


def prime_count(ctx, d: int) -> int:
    """Number of monic irreducibles of degree d, by Moebius inversion of sum_{e|d} e*pi(e) = q^d."""
    q = _field_size(ctx)
    total = sum(int(mobius(e)) * q ** (d // e) for e in divisors(d))
    return total // d


def prime_power_sum(ctx, k: int, n: int) -> int:
    """Sum of deg(P)^k over monic primes P with deg(P) | n."""
    return sum(d**k * prime_count(ctx, d) for d in divisors(n))


# ---------------------------------------------------------------------------
# factorization


@dataclass(frozen=True)
class Factorization:
    factors: tuple  # ((prime Poly, exponent), ...) canonical order
    unit: int

    def expand(self, q: int) -> Poly:
        out = Poly((self.unit,), q)
        for p, e in self.factors:
            out = out * p**e
        return out

    def primes(self) -> list:
        return [p for p, _ in self.factors]

    def __len__(self):
        return len(self.factors)


def _divisors_among(g: Poly, d: int) -> list:
    """Monic irreducibles of degree d that divide g (trial division against the table)."""
    q = g.q
    table = irreducible_array(q, d)
    R = reduce_mod_primes(q, poly_to_full(g)[None, :], table)[:, 0, :]
    hits = np.flatnonzero(~R.any(axis=1))
    return [Poly.monic_from_low(table[i], q) for i in hits]


def factor(F: Poly) -> Factorization:
    """Canonical factorization by trial division against the cached irreducible tables.

    A distinct-degree gcd prunes the degrees that contribute nothing, so only
    degrees that actually occur are trial-divided.
    """
    if F.is_zero():
        raise DivideByZeroPoly("cannot factor the zero polynomial")
    q = F.q
    unit = F.lc
    f = F.monic()
    found = []
    T = Poly.T(q)
    d = 1
    while 2 * d <= f.deg:
        g = gcd(f, powmod(T, q**d, f) - T)
        if g.deg >= d:
            candidates = [g] if g.deg == d else _divisors_among(g, d)
            for p in candidates:
                e = 0
                while True:
                    quo, rem = divrem(f, p)
                    if not rem.is_zero():
                        break
                    f, e = quo, e + 1
                found.append((p, e))
        d += 1
    if f.deg >= 1:
        found.append((f, 1))
    found.sort(key=lambda pe: pe[0].sort_key())
    return Factorization(tuple(found), unit)


def is_irreducible(P: Poly) -> bool:
    if P.deg < 1:
        return False
    fac = factor(P)
    return len(fac) == 1 and fac.factors[0][1] == 1


def is_power_free(F: Poly, r: int) -> bool:
    return all(e < r for _, e in factor(F).factors)


def is_rth_power(F: Poly, r: int) -> bool:
    return F.is_monic() and all(e % r == 0 for _, e in factor(F).factors)


def von_mangoldt(F: Poly) -> int:
    if F.deg < 1:
        return 0
    fac = factor(F)
    return fac.factors[0][0].deg if len(fac) == 1 else 0


def euler_phi(F: Poly) -> int:
    out = 1
    for p, e in factor(F).factors:
        out *= (p.norm() - 1) * p.norm() ** (e - 1)
    return out


def num_divisors(F: Poly) -> int:
    out = 1
    for _, e in factor(F).factors:
        out *= e + 1
    return out


# ---------------------------------------------------------------------------
# the r-th power free family H_r(N)


def family_size_formula(q: int, r: int, N: int) -> int:
    return q**N if N < r else q**N - q ** (N + 1 - r)


@functools.lru_cache(maxsize=16)
def family_mask(q: int, r: int, N: int) -> np.ndarray:
    """Boolean mask over canonical indices of monic degree-N polynomials: True iff r-th power free.

    Sieves out the multiples P^r * B of every prime P with r*deg P <= N.
    """
    mask = np.ones(q**N, dtype=bool)
    weights = canonical_weights(q, N)
    for d in range(1, N // r + 1):
        m = N - r * d
        B = with_leading_one(monic_coeff_array(q, m)) if m else np.ones((1, 1), dtype=np.int64)
        for low in irreducible_array(q, d):
            pr = (Poly.monic_from_low(low, q) ** r).coeffs
            prod = np.zeros((B.shape[0], N + 1), dtype=np.int64)
            for j, c in enumerate(pr):
                if c:
                    prod[:, j: j + m + 1] += c * B
            mask[(prod[:, :N] % q) @ weights] = False
    mask.setflags(write=False)
    return mask


def family_indices(ctx, N: int) -> np.ndarray:
    return np.flatnonzero(family_mask(ctx.q, ctx.r, N))


def family_array(ctx, N: int, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Lower coefficients of the members of H_r(N) with family position in [start, stop)."""
    q = ctx.q
    idx = family_indices(ctx, N)[start:stop]
    return np.stack([(idx // q ** (N - 1 - i)) % q for i in range(N)], axis=1).astype(np.int64) if N else np.zeros((len(idx), 0), np.int64)


def count_family(ctx, N: int) -> int:
    return int(family_mask(ctx.q, ctx.r, N).sum())


def enumerate_family(ctx, N: int, start: int = 0, stop: int | None = None):
    """Stream the monic r-th-power-free polynomials of degree N in canonical order.

    ``start``/``stop`` select a contiguous slice of the family so sweeps can be
    split across workers.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    q = ctx.q
    idx = family_indices(ctx, N)[start:stop]
    for i in idx:
        i = int(i)
        yield Poly.monic_from_low([(i // q ** (N - 1 - k)) % q for k in range(N)], q)


def enumerate_family_by_factoring(ctx, N: int):
    """Reference enumeration: all monic degree-N polynomials, filtered by factorization."""
    q = ctx.q
    for low in itertools.product(range(q), repeat=N):
        G = Poly.monic_from_low(low, q)
        if is_power_free(G, ctx.r):
            yield G


def count_family_coprime(ctx, N: int, F: Poly) -> int:
    """|H_r(N; F)|: members of the family coprime to F, by filtered enumeration."""
    q = ctx.q
    fam = with_leading_one(family_array(ctx, N))
    keep = np.ones(fam.shape[0], dtype=bool)
    if F.deg >= 1:
        for p, _ in factor(F).factors:
            R = reduce_mod_primes(q, fam, np.array([p.low()], dtype=np.int64))[0]
            keep &= R.any(axis=1)
    return int(keep.sum())


def coprime_count_prediction(ctx, N: int, F: Poly) -> Fraction:
    """phi(F)/|F| * prod_{P|F} (1 + 1/(|P|^r - 1)) * (q^N - q^{N+1-r})."""
    q, r = ctx.q, ctx.r
    out = Fraction(q**N - q ** (N + 1 - r)) if N >= r else Fraction(q**N)
    if F.deg >= 1:
        for p, _ in factor(F).factors:
            size = p.norm()
            out *= Fraction(size - 1, size) * (1 + Fraction(1, size**r - 1))
    return out
