"""Prime field F_q, its discrete logarithm, and the embedding of F_q^* into the unit circle."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sympy import isprime, primitive_root

from .errors import BadCongruence, NotPrime, ZeroElement


@dataclass(frozen=True)
class FieldContext:
    """Immutable description of F_q together with the character order r.

    ``dlog[a]`` is the discrete log of ``a`` to base ``g`` (``-1`` for ``a = 0``),
    and ``unity_table[a] = exp(2 pi i dlog[a] / (q - 1))``.
    """

    q: int
    r: int
    g: int
    allow_weak: bool = False
    dlog: np.ndarray = field(repr=False, compare=False, default=None)
    unity_table: np.ndarray = field(repr=False, compare=False, default=None)

    @property
    def strict(self) -> bool:
        return (self.q - 1) % (2 * self.r) == 0

    @property
    def roots_of_unity(self) -> np.ndarray:
        """exp(2 pi i k / r) for k = 0..r-1; character values are indexed by k."""
        return _roots_of_unity(self.r)

    def __reduce__(self):
        return (make_context, (self.q, self.r, self.allow_weak))


def _roots_of_unity(r):
    k = np.arange(r)
    w = np.exp(2j * np.pi * k / r)
    w[0] = 1.0
    if r % 2 == 0:
        w[r // 2] = -1.0
    return w


def make_context(q: int, r: int, allow_weak: bool = False) -> FieldContext:
    """Validate (q, r) and precompute the discrete-log table of F_q^*.

    The primitive root is the smallest positive one, so every complex character
    value is reproducible across runs.
    """
    if q < 3 or not isprime(q):
        raise NotPrime(f"NotPrime: q={q}")
    if r < 2:
        raise ValueError(f"character order must be >= 2, got r={r}")
    modulus = r if allow_weak else 2 * r
    if (q - 1) % modulus:
        raise BadCongruence(q, r, modulus)
    g = int(primitive_root(q))
    dlog = np.full(q, -1, dtype=np.int64)
    a = 1
    for k in range(q - 1):
        dlog[a] = k
        a = a * g % q
    table = np.zeros(q, dtype=complex)
    table[1:] = np.exp(2j * np.pi * dlog[1:] / (q - 1))
    table[1] = 1.0
    dlog.setflags(write=False)
    table.setflags(write=False)
    return FieldContext(q, r, g, allow_weak, dlog, table)


def embed_unity(ctx: FieldContext, a) -> complex:
    a = int(a) % ctx.q
    if a == 0:
        raise ZeroElement("ZeroElement: 0 has no image on the unit circle")
    return complex(ctx.unity_table[a])


def discrete_log(ctx: FieldContext, a) -> int:
    a = int(a) % ctx.q
    if a == 0:
        raise ZeroElement("ZeroElement: discrete log of 0")
    return int(ctx.dlog[a])


def mu_r_index(ctx: FieldContext, a) -> int:
    """Return k with embed_unity(a) = exp(2 pi i k / r), for a an r-th root of unity in F_q."""
    k = discrete_log(ctx, a)
    step = (ctx.q - 1) // ctx.r
    if k % step:
        raise ValueError(f"{a} is not an r-th root of unity in F_{ctx.q}")
    return k // step


@dataclass(frozen=True)
class FieldElement:
    value: int
    q: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.q)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.q != self.q:
                raise ValueError("elements of different fields")
            return other.value
        return int(other)

    def __add__(self, other):
        return FieldElement(self.value + self._coerce(other), self.q)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.value - self._coerce(other), self.q)

    def __rsub__(self, other):
        return FieldElement(self._coerce(other) - self.value, self.q)

    def __mul__(self, other):
        return FieldElement(self.value * self._coerce(other), self.q)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value, self.q)

    def inverse(self) -> "FieldElement":
        if self.value == 0:
            raise ZeroDivisionError("inverse of 0 in F_q")
        return FieldElement(pow(self.value, -1, self.q), self.q)

    def __truediv__(self, other):
        return self * FieldElement(self._coerce(other), self.q).inverse()

    def __rtruediv__(self, other):
        return FieldElement(self._coerce(other), self.q) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return FieldElement(pow(self.value, e, self.q), self.q)

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.q == other.q and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.q
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.q))

