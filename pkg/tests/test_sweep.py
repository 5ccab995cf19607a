import numpy as np
import pytest

from ffmoments import make_context
from ffmoments import characters as ch
from ffmoments import polyring as pr
from ffmoments.sweep import family_trace_counts, family_traces


@pytest.mark.parametrize("q,r,N,k", [(5, 2, 3, 3), (7, 3, 4, 4), (7, 2, 3, 3)])
def test_sweep_matches_character_route(q, r, N, k):
    # sweep uses reciprocity chi_G(P) = chi_P(G) * sign; the reference evaluates chi_G directly
    ctx = make_context(q, r, allow_weak=(q - 1) % (2 * r) != 0)
    traces = family_traces(ctx, N, k)
    family = list(pr.enumerate_family(ctx, N))
    assert traces.shape == (len(family), k)
    for i in range(0, len(family), max(1, len(family) // 40)):
        chi = ch.Character(ctx, family[i])
        for n in range(1, k + 1):
            assert abs(traces[i, n - 1] - ch.trace_frobenius(chi, n)) < 1e-9


def test_sweep_jobs_and_chunking_agree():
    ctx = make_context(7, 3)
    base = family_trace_counts(ctx, 4, 3)
    assert np.array_equal(base, family_trace_counts(ctx, 4, 3, chunk=333))
    assert np.array_equal(base, family_trace_counts(ctx, 4, 3, jobs=2, chunk=500))
