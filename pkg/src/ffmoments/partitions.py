"""Integer partitions, decompositions into scaled partitions of r, and set-partition counts.

A partition is stored by multiplicities: ``Partition((2, 0, 1))`` is 1^2 3^1,
i.e. the parts (1, 1, 3).  All combinatorial values are exact (ints and
Fractions).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import BadInput, TooLarge, TypeMismatch

MAX_BRUTE_LENGTH = 10


@dataclass(frozen=True, order=True)
class Partition:
    mult: tuple = ()

    def __post_init__(self):
        m = tuple(int(x) for x in self.mult)
        if any(x < 0 for x in m):
            raise ValueError("multiplicities must be nonnegative")
        while m and m[-1] == 0:
            m = m[:-1]
        object.__setattr__(self, "mult", m)

    @classmethod
    def from_parts(cls, parts) -> "Partition":
        parts = [int(p) for p in parts]
        if any(p < 1 for p in parts):
            raise ValueError("parts must be positive integers")
        mult = [0] * (max(parts) if parts else 0)
        for p in parts:
            mult[p - 1] += 1
        return cls(tuple(mult))

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Comma-separated parts, e.g. "1,2,2"; the empty string is the empty partition."""
        text = text.strip().strip("()")
        if not text:
            return cls(())
        try:
            return cls.from_parts(int(t) for t in text.split(","))
        except ValueError as exc:
            raise BadInput(f"bad partition literal {text!r}: {exc}") from None

    @property
    def size(self) -> int:
        return sum(j * m for j, m in enumerate(self.mult, start=1))

    @property
    def length(self) -> int:
        return sum(self.mult)

    @property
    def parts(self) -> tuple:
        """Parts in increasing order: (n_1, ..., n_l)."""
        return tuple(j for j, m in enumerate(self.mult, start=1) for _ in range(m))

    @property
    def max_part(self) -> int:
        return len(self.mult)

    def multiplicity(self, j: int) -> int:
        return self.mult[j - 1] if 0 < j <= len(self.mult) else 0

    def __mul__(self, other: "Partition") -> "Partition":
        n = max(len(self.mult), len(other.mult))
        a = self.mult + (0,) * (n - len(self.mult))
        b = other.mult + (0,) * (n - len(other.mult))
        return Partition(tuple(x + y for x, y in zip(a, b)))

    def __pow__(self, a: int) -> "Partition":
        if a < 0:
            raise ValueError("negative power of a partition")
        return Partition(tuple(a * x for x in self.mult))

    def scale(self, j: int) -> "Partition":
        """j*lambda: every part k becomes j*k."""
        if j < 1:
            raise ValueError("scale factor must be >= 1")
        return Partition.from_parts(j * p for p in self.parts)

    def __str__(self):
        return "(" + ",".join(map(str, self.parts)) + ")"

    def __repr__(self):
        return f"Partition{self}"


EMPTY = Partition(())


@lru_cache(maxsize=None)
def _partitions_desc(n: int, largest: int) -> tuple:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions_desc(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def partitions_of(r: int) -> list:
    """All partitions of r, ordered lexicographically by increasing part lists: (1,1,1), (1,2), (3)."""
    if r < 1:
        raise ValueError("r must be >= 1")
    parts = sorted(tuple(sorted(p)) for p in _partitions_desc(r, r))
    return [Partition.from_parts(p) for p in parts]


# ---------------------------------------------------------------------------
# decompositions lambda = prod_{j, mu} (j mu)^{a_{j mu}}


@dataclass(frozen=True)
class DecompTuple:
    """Nonzero multiplicities a_{j mu}, keyed by (j, mu) with mu a partition of r."""

    entries: tuple  # (((j, mu), a), ...) in canonical order
    r: int

    @classmethod
    def from_dict(cls, entries: dict, r: int) -> "DecompTuple":
        for (j, mu), a in entries.items():
            if mu.size != r:
                raise ValueError(f"{mu} is not a partition of {r}")
        items = sorted(((k, a) for k, a in entries.items() if a), key=lambda kv: (kv[0][0], kv[0][1].parts))
        return cls(tuple(items), r)

    def as_dict(self) -> dict:
        return dict(self.entries)

    def partition(self) -> Partition:
        out = EMPTY
        for (j, mu), a in self.entries:
            out = out * mu.scale(j) ** a
        return out

    def __str__(self):
        return "{" + ", ".join(f"a[{j},{mu}]={a}" for (j, mu), a in self.entries) + "}"


def decompositions(lam: Partition, r: int) -> list:
    """All tuples (a_{j mu}) with lambda(a) = lambda; empty iff lambda is not generated by partitions of r."""
    if r < 2:
        raise ValueError("r must be >= 2")
    if lam.size % r:
        return []
    keys = [(j, mu) for j in range(1, lam.size // r + 1) for mu in partitions_of(r)]
    vecs = []
    width = lam.max_part
    for j, mu in keys:
        s = mu.scale(j).mult
        vecs.append(s + (0,) * (width - len(s)) if len(s) <= width else None)
    target = lam.mult
    out = []

    def rec(i, remaining, chosen):
        if not any(remaining):
            out.append(DecompTuple.from_dict(dict(chosen), r))
            return
        if i == len(keys):
            return
        vec = vecs[i]
        if vec is None:
            rec(i + 1, remaining, chosen)
            return
        amax = min((rem // v for rem, v in zip(remaining, vec) if v), default=0)
        for a in range(amax + 1):
            rem = tuple(x - a * v for x, v in zip(remaining, vec))
            rec(i + 1, rem, chosen + ([(keys[i], a)] if a else []))

    rec(0, target, [])
    return out


def in_generated_set(lam: Partition, r: int) -> bool:
    return bool(decompositions(lam, r))


def count_type(lam: Partition, a: DecompTuple) -> int:
    """Closed-form number of set partitions of type a: prod_j lambda_j! / prod (a! prod_k (mu_k!)^a)."""
    if a.partition() != lam:
        raise TypeMismatch(f"TypeMismatch: {a} builds {a.partition()}, not {lam}")
    num = math.prod(math.factorial(m) for m in lam.mult)
    den = 1
    for (_, mu), k in a.entries:
        den *= math.factorial(k) * math.prod(math.factorial(m) for m in mu.mult) ** k
    assert num % den == 0
    return num // den


def limit_moment(lam: Partition, r: int) -> Fraction:
    """Combinatorial q -> infinity limit of the normalized moment, summed over decompositions."""
    pre = math.prod((-1) ** m * math.factorial(m) for m in lam.mult)
    total = Fraction(0)
    for a in decompositions(lam, r):
        term = Fraction(1)
        for (j, mu), k in a.entries:
            base = Fraction(j ** (mu.length - 1), math.prod(math.factorial(m) for m in mu.mult))
            term *= base**k / math.factorial(k)
        total += term
    return pre * total


# ---------------------------------------------------------------------------
# set partitions and the block conditions


def set_partitions(n: int):
    """Set partitions of {0..n-1} via restricted growth strings; blocks sorted by smallest element."""
    if n == 0:
        yield ()
        return
    rgs = [0] * n

    def rec(i, top):
        if i == n:
            blocks = [[] for _ in range(top + 1)]
            for k, b in enumerate(rgs):
                blocks[b].append(k)
            yield tuple(tuple(b) for b in blocks)
            return
        for b in range(top + 2):
            rgs[i] = b
            yield from rec(i + 1, max(top, b))

    rgs[0] = 0
    yield from rec(1, 0)


def sum_divisible(ns, r: int) -> bool:
    """The block sum N_i is divisible by r."""
    return sum(ns) % r == 0


def block_gcd(ns, r: int) -> int:
    """g_i = gcd(N_i / r, gcd of the block's parts)."""
    return math.gcd(sum(ns) // r, *ns)


def is_minimal(ns, r: int) -> bool:
    """Minimality: no proper nonempty sub-block has sum(n / g_i) divisible by r.

    Parts are measured in units of g_i, the largest degree a common prime can
    have; this is the form under which blocks such as {2, 2} for r = 2 (one
    prime of degree 2 used twice) are kept.  See ``is_minimal_raw`` for the version
    on the raw parts.
    """
    if not sum_divisible(ns, r):
        return False
    g = block_gcd(ns, r)
    if g == 0:
        return False
    scaled = [n // g for n in ns]
    return _no_zero_subsum(scaled, r)


def is_minimal_raw(ns, r: int) -> bool:
    """Minimality measured on the raw parts: no proper nonempty sub-block with sum divisible by r."""
    return _no_zero_subsum(list(ns), r)


def _no_zero_subsum(ns, r):
    k = len(ns)
    for size in range(1, k):
        for sub in itertools.combinations(ns, size):
            if sum(sub) % r == 0:
                return False
    return True


def scale_divides_parts(ns, r: int) -> bool:
    """g_i = N_i / r, i.e. N_i / r divides every part of the block."""
    if not sum_divisible(ns, r) or not ns:
        return False
    return block_gcd(ns, r) == sum(ns) // r


def block_ok(ns, r: int) -> bool:
    return sum_divisible(ns, r) and is_minimal(ns, r) and scale_divides_parts(ns, r)


def block_type(ns, r: int):
    """(j, mu) for a block where N_i / r divides every part: j = N_i / r and mu = {n / j}."""
    j = sum(ns) // r
    return j, Partition.from_parts(n // j for n in ns)


def _block_table(parts, r):
    """Per block bitmask: None if the block is not admissible, else its (j, mu) type."""
    n = len(parts)
    table = {}
    for mask in range(1, 1 << n):
        ns = [parts[i] for i in range(n) if mask >> i & 1]
        table[mask] = block_type(ns, r) if block_ok(ns, r) else None
    return table


def _admissible_partitions(lam: Partition, r: int):
    """Yield (blocks, types) for set partitions of {1..l} whose blocks are all admissible."""
    parts = lam.parts
    if len(parts) > MAX_BRUTE_LENGTH:
        raise TooLarge(f"TooLarge: length {len(parts)} > {MAX_BRUTE_LENGTH}")
    table = _block_table(parts, r)
    for blocks in set_partitions(len(parts)):
        types = []
        for b in blocks:
            t = table[sum(1 << i for i in b)]
            if t is None:
                break
            types.append(t)
        else:
            yield blocks, types


def brute_force_type_counts(lam: Partition, r: int) -> dict:
    """Map DecompTuple -> number of admissible set partitions of that type."""
    counts = {}
    for _, types in _admissible_partitions(lam, r):
        entries = {}
        for t in types:
            entries[t] = entries.get(t, 0) + 1
        key = DecompTuple.from_dict(entries, r)
        counts[key] = counts.get(key, 0) + 1
    return counts


def brute_force_type_count(lam: Partition, a: DecompTuple) -> int:
    return brute_force_type_counts(lam, a.r).get(a, 0)


def admissible_set_partitions(lam: Partition, r: int) -> list:
    """Admissible set partitions as tuples of 1-based index blocks."""
    return [tuple(tuple(i + 1 for i in b) for b in blocks) for blocks, _ in _admissible_partitions(lam, r)]


def limit_moment_subsets(lam: Partition, r: int) -> Fraction:
    """(-1)^l * sum over admissible set partitions of prod_i (N_i / r)^{|J_i| - 1}."""
    parts = lam.parts
    total = 0
    for blocks, _ in _admissible_partitions(lam, r):
        term = 1
        for b in blocks:
            term *= (sum(parts[i] for i in b) // r) ** (len(b) - 1)
        total += term
    return Fraction((-1) ** len(parts) * total)


def min_block_bound_check(m, r: int) -> frozenset:
    """A set J of 1-based indices, |J| <= r, with sum_{j in J} m_j divisible by r (pigeonhole on prefix sums)."""
    m = [int(x) for x in m]
    if sum(m) % r:
        raise BadInput(f"BadInput: sum {sum(m)} is not divisible by {r}")
    if len(m) <= r:
        return frozenset(range(1, len(m) + 1))
    seen = {}
    s = 0
    for i in range(1, r + 2):
        s = (s + m[i - 1]) % r
        if s in seen:
            return frozenset(range(seen[s] + 1, i + 1))
        seen[s] = i
    raise AssertionError("pigeonhole failed")  # unreachable


def partitions_up_to(size: int, max_length: int | None = None):
    """Every partition with |lambda| <= size (and length <= max_length), empty partition first."""
    for n in range(size + 1):
        for p in sorted(tuple(sorted(x)) for x in _partitions_desc(n, n)):
            if max_length is None or len(p) <= max_length:
                yield Partition.from_parts(p)
