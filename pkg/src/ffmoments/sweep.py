"""Vectorized sweeps over the family H_r(N).

For a family member G and a prime P the trace formula needs chi_G(P).  By
reciprocity this is chi_P(G) up to an explicit sign, and chi_P(G) only depends
on G mod P, so one residue computation per (P, G) pair serves every power n.
The family is processed in fixed chunks of canonical positions; all
accumulations are integer counts, so results do not depend on the number of
worker processes.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .characters import count_by_exponent, exponent_matrix, reciprocity_shift
from .polyring import count_family, family_array, with_leading_one

CHUNK = 4096


def family_prime_exponents(ctx, rows_full: np.ndarray, N: int, d: int) -> np.ndarray:
    """Exponents of chi_G(P) for every prime P of degree d (rows) and G in ``rows_full`` (columns)."""
    E = exponent_matrix(ctx, rows_full, d)
    shift = reciprocity_shift(ctx, d, N)
    if shift:
        E = np.where(E < 0, -1, (E + shift) % ctx.r).astype(np.int8)
    return E


def trace_counts_block(ctx, N: int, k_max: int, start: int, stop: int) -> np.ndarray:
    """counts[g, n-1, k] for family positions start..stop-1.

    Tr(Theta_G^n) = -q^{-n/2} sum_k counts[g, n-1, k] exp(2 pi i k / r).
    """
    r = ctx.r
    rows = with_leading_one(family_array(ctx, N, start, stop))
    counts = np.zeros((rows.shape[0], k_max, r), dtype=np.int64)
    for d in range(1, k_max + 1):
        E = family_prime_exponents(ctx, rows, N, d)
        for n in range(d, k_max + 1, d):
            e = E if n == d else np.where(E < 0, -1, (E.astype(np.int64) * (n // d)) % r)
            counts[:, n - 1, :] += d * count_by_exponent(e, r, axis=0)
    return counts


def _blocks(total: int, chunk: int):
    return [(s, min(s + chunk, total)) for s in range(0, total, chunk)]


def _block_task(args):
    ctx, N, k_max, start, stop = args
    return trace_counts_block(ctx, N, k_max, start, stop)


def family_trace_counts(ctx, N: int, k_max: int, jobs: int = 1, chunk: int = CHUNK) -> np.ndarray:
    """Integer trace counts for the whole family, shape (|H_r(N)|, k_max, r)."""
    total = count_family(ctx, N)
    blocks = _blocks(total, chunk)
    if jobs > 1 and len(blocks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_block_task, [(ctx, N, k_max, s, e) for s, e in blocks]))
    else:
        parts = [trace_counts_block(ctx, N, k_max, s, e) for s, e in blocks]
    if not parts:
        return np.zeros((0, k_max, ctx.r), dtype=np.int64)
    return np.concatenate(parts, axis=0)


def counts_to_traces(ctx, counts: np.ndarray) -> np.ndarray:
    """Complex traces (|family|, k_max) from integer counts."""
    k_max = counts.shape[1]
    scale = -np.array([ctx.q ** (-n / 2) for n in range(1, k_max + 1)])
    return (counts @ ctx.roots_of_unity) * scale


def family_traces(ctx, N: int, k_max: int, jobs: int = 1) -> np.ndarray:
    return counts_to_traces(ctx, family_trace_counts(ctx, N, k_max, jobs))
