import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ffmoments import BadInput, DecompTuple, Partition, TypeMismatch
from ffmoments import partitions as pt
from ffmoments.rmt import symplectic_moment

L = Partition.from_parts


def D(entries, r):
    return DecompTuple.from_dict({(j, L(mu)): a for (j, mu), a in entries.items()}, r)


def test_partition_basics():
    lam = L((1, 2, 2, 2, 2))
    assert lam.size == 9 and lam.length == 5 and lam.max_part == 2
    assert lam.multiplicity(2) == 4 and lam.multiplicity(5) == 0
    assert L((1, 1, 1)).scale(2) == L((2, 2, 2))
    assert L((1, 2)) * L((2, 2, 2)) == lam
    assert L((1,)) ** 3 == L((1, 1, 1))
    assert Partition.parse("1,2,2") == L((2, 1, 2))
    assert Partition.parse("") == Partition(())
    with pytest.raises(BadInput):
        Partition.parse("1,x")
    with pytest.raises(ValueError):
        L((0,))


def _pentagonal_p(n):
    p = [1] + [0] * n
    for m in range(1, n + 1):
        k, total = 1, 0
        while True:
            g1, g2 = k * (3 * k - 1) // 2, k * (3 * k + 1) // 2
            if g1 > m:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[m - g1] + (sign * p[m - g2] if g2 <= m else 0)
            k += 1
        p[m] = total
    return p[n]


def test_partitions_of_examples():
    assert pt.partitions_of(2) == [L((1, 1)), L((2,))]
    assert set(pt.partitions_of(3)) == {L((1, 1, 1)), L((1, 2)), L((3,))}
    assert len(pt.partitions_of(5)) == 7
    for n in range(1, 12):
        assert len(pt.partitions_of(n)) == _pentagonal_p(n)


def test_decomposition_examples():
    got = set(pt.decompositions(L((2, 2)), 2))
    assert got == {D({(2, (1, 1)): 1}, 2), D({(1, (2,)): 2}, 2)}
    assert pt.decompositions(L((1,)), 3) == []
    assert D({(1, (1, 2)): 1, (2, (1, 1, 1)): 1}, 3) in pt.decompositions(L((1, 2, 2, 2, 2)), 3)


def test_count_type_examples():
    lam = L((1, 2, 2, 2, 2))
    a = D({(1, (1, 2)): 1, (2, (1, 1, 1)): 1}, 3)
    assert pt.count_type(lam, a) == 4 == pt.brute_force_type_count(lam, a)
    assert pt.count_type(L((2, 2)), D({(1, (2,)): 2}, 2)) == 1
    assert pt.brute_force_type_count(L((2, 2)), D({(1, (2,)): 2}, 2)) == 1
    assert pt.brute_force_type_count(L((2, 2)), D({(2, (1, 1)): 1}, 2)) == 1
    for r in (2, 3, 5):
        assert pt.count_type(L((r,)), D({(1, (r,)): 1}, r)) == 1
        assert pt.brute_force_type_count(L((r,)), D({(1, (r,)): 1}, r)) == 1
    with pytest.raises(TypeMismatch):
        pt.count_type(L((3,)), a)


def test_four_admissible_pairs():
    lam = L((1, 2, 2, 2, 2))
    pairs = [p for p in pt.admissible_set_partitions(lam, 3) if len(p) == 2]
    assert len(pairs) == 4
    for blocks in pairs:
        sizes = sorted(len(b) for b in blocks)
        assert sizes == [2, 3] and any(1 in b for b in blocks if len(b) == 2)


def test_set_partitions_bell_numbers():
    bell = [1, 1, 2, 5, 15, 52, 203, 877]
    for n, b in enumerate(bell):
        assert sum(1 for _ in pt.set_partitions(n)) == b


def test_block_conditions():
    assert pt.is_minimal((2, 2), 2)  # one degree-2 prime used twice
    assert not pt.is_minimal_raw((2, 2), 2)
    assert pt.scale_divides_parts((1, 2), 3) and not pt.scale_divides_parts((1, 1, 4), 3)
    assert pt.block_type((2, 2, 2), 3) == (2, L((1, 1, 1)))


@pytest.mark.parametrize("m,r", [((1, 1, 1), 3), ((1, 2, 1, 2, 3), 3), ((2,) * 6, 3), ((1, 3, 4, 5, 2, 6, 3), 4)])
def test_min_block_bound(m, r):
    J = pt.min_block_bound_check(m, r)
    assert 1 <= len(J) <= r
    assert sum(m[j - 1] for j in J) % r == 0
    if len(m) <= r:
        assert J == frozenset(range(1, len(m) + 1))


@settings(max_examples=200)
@given(st.integers(2, 6).flatmap(lambda r: st.tuples(st.just(r), st.lists(st.integers(1, 20), min_size=r + 1, max_size=12))))
def test_min_block_bound_property(args):
    r, m = args
    m[-1] += (-sum(m)) % r
    J = pt.min_block_bound_check(m, r)
    assert len(J) <= r and sum(m[j - 1] for j in J) % r == 0


def test_min_block_bound_bad_sum():
    with pytest.raises(BadInput):
        pt.min_block_bound_check((1, 1), 3)


def test_limit_examples():
    assert pt.limit_moment(L((3,)), 3) == -1
    assert pt.limit_moment(L((2,)), 2) == -1
    assert pt.limit_moment(L((1,)), 2) == 0
    assert pt.limit_moment(Partition(()), 3) == 1
    assert pt.limit_moment_subsets(L((3,)), 3) == -1


@pytest.mark.parametrize("r", [2, 3, 4])
def test_closed_form_counts_and_limit_routes(r):
    for lam in pt.partitions_up_to(8, 6):
        counts = pt.brute_force_type_counts(lam, r)
        decs = pt.decompositions(lam, r)
        assert set(counts) <= set(decs)
        for a in decs:
            assert a.partition() == lam
            assert pt.count_type(lam, a) == counts.get(a, 0)
        assert pt.limit_moment(lam, r) == pt.limit_moment_subsets(lam, r)
        assert (pt.limit_moment(lam, r) != 0) == pt.in_generated_set(lam, r)


def test_symplectic_bridge():
    for lam in pt.partitions_up_to(8):
        assert pt.limit_moment(lam, 2) == symplectic_moment(lam)


def test_decompositions_brute_enumeration():
    # enumerate multisets of scaled partitions directly
    r = 3
    pieces = [(j, mu) for j in (1, 2, 3) for mu in pt.partitions_of(r)]
    for lam in pt.partitions_up_to(9, 6):
        expected = set()
        for k in range(0, 4):
            for combo in itertools.combinations_with_replacement(pieces, k):
                out = Partition(())
                for j, mu in combo:
                    out = out * mu.scale(j)
                if out == lam:
                    entries = {}
                    for c in combo:
                        entries[c] = entries.get(c, 0) + 1
                    expected.add(DecompTuple.from_dict(entries, r))
        assert set(pt.decompositions(lam, r)) == expected


def test_limit_is_fraction_with_sign():
    for lam in pt.partitions_up_to(9):
        v = pt.limit_moment(lam, 3)
        assert isinstance(v, Fraction)
        if v:
            assert math.copysign(1, v) == (-1) ** lam.length


@pytest.mark.parametrize("r", [2, 3, 4])
def test_admissible_block_shapes(r):
    for lam in pt.partitions_up_to(9, 7):
        parts = lam.parts
        for blocks in pt.admissible_set_partitions(lam, r):
            for b in blocks:
                ns = [parts[i - 1] for i in b]
                assert len(ns) <= r
                j, mu = pt.block_type(ns, r)
                assert mu.size == r and sorted(ns) == sorted(j * m for m in mu.parts)


@pytest.mark.parametrize("r", [2, 3])
def test_limit_routes_up_to_ten(r):
    for lam in pt.partitions_up_to(10):
        assert pt.limit_moment(lam, r) == pt.limit_moment_subsets(lam, r)


@pytest.mark.parametrize("r", [2, 3, 4])
def test_membership_two_enumerations(r):
    # decomposition search vs admissible set partitions
    for lam in pt.partitions_up_to(10, 7):
        assert bool(pt.decompositions(lam, r)) == bool(pt.admissible_set_partitions(lam, r))
