"""Exact dyadic rationals, standard dyadic intervals and partitions of [0, 1].

Values are immutable. Numerators are kept inside the signed 64-bit range and
exponents are capped at 62; anything beyond raises ``DyadicOverflowError``
instead of silently growing.
"""
from __future__ import annotations

import bisect
import re
from dataclasses import dataclass
from functools import cached_property, total_ordering
from typing import Iterable, Sequence

from .errors import DyadicOverflowError, PreconditionError

MAX_EXPONENT = 62
_INT64_MAX = 2**63 - 1


def _check_exponent(n: int) -> None:
    if n > MAX_EXPONENT:
        raise DyadicOverflowError(f"dyadic exponent {n} exceeds {MAX_EXPONENT}")


@total_ordering
@dataclass(frozen=True, init=False)
class DyadicRational:
    """The number ``numerator / 2**exponent`` in lowest terms."""

    numerator: int
    exponent: int

    def __init__(self, numerator: int, exponent: int = 0):
        numerator, exponent = int(numerator), int(exponent)
        if exponent < 0:
            numerator <<= -exponent
            exponent = 0
        if numerator == 0:
            exponent = 0
        elif exponent > 0:
            shift = min((numerator & -numerator).bit_length() - 1, exponent)
            numerator >>= shift
            exponent -= shift
        _check_exponent(exponent)
        if abs(numerator) > _INT64_MAX:
            raise DyadicOverflowError(f"dyadic numerator {numerator} exceeds 64 bits")
        object.__setattr__(self, "numerator", numerator)
        object.__setattr__(self, "exponent", exponent)

    @classmethod
    def coerce(cls, value) -> "DyadicRational":
        if isinstance(value, DyadicRational):
            return value
        if isinstance(value, int):
            return cls(value, 0)
        if isinstance(value, str):
            return parse_dyadic(value)
        raise TypeError(f"cannot interpret {value!r} as a dyadic rational")

    def _aligned(self, other: "DyadicRational") -> tuple[int, int, int]:
        n = max(self.exponent, other.exponent)
        return (
            self.numerator << (n - self.exponent),
            other.numerator << (n - other.exponent),
            n,
        )

    def __add__(self, other):
        if not isinstance(other, (DyadicRational, int)):
            return NotImplemented
        a, b, n = self._aligned(DyadicRational.coerce(other))
        return DyadicRational(a + b, n)

    __radd__ = __add__

    def __neg__(self):
        return DyadicRational(-self.numerator, self.exponent)

    def __sub__(self, other):
        if not isinstance(other, (DyadicRational, int)):
            return NotImplemented
        return self + (-DyadicRational.coerce(other))

    def __rsub__(self, other):
        return DyadicRational.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, (DyadicRational, int)):
            return NotImplemented
        other = DyadicRational.coerce(other)
        return DyadicRational(
            self.numerator * other.numerator, self.exponent + other.exponent
        )

    __rmul__ = __mul__

    def scale_pow2(self, k: int) -> "DyadicRational":
        """Multiply by ``2**k`` (k may be negative)."""
        return DyadicRational(self.numerator, self.exponent - k)

    def __abs__(self):
        return DyadicRational(abs(self.numerator), self.exponent)

    def __eq__(self, other):
        if isinstance(other, int):
            other = DyadicRational(other)
        if not isinstance(other, DyadicRational):
            return NotImplemented
        return (self.numerator, self.exponent) == (other.numerator, other.exponent)

    def __hash__(self):
        return hash((self.numerator, self.exponent))

    def __lt__(self, other):
        if isinstance(other, int):
            other = DyadicRational(other)
        if not isinstance(other, DyadicRational):
            return NotImplemented
        a, b, _ = self._aligned(other)
        return a < b

    def __float__(self):
        return self.numerator / 2.0**self.exponent

    def __str__(self):
        if self.exponent == 0:
            return str(self.numerator)
        return f"{self.numerator}/{2**self.exponent}"

    def __repr__(self):
        return f"DyadicRational({self})"


_DYADIC_RE = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(?:(\d+)|2\^(\d+)))?\s*$")


def parse_dyadic(text: str) -> DyadicRational:
    """Parse ``"p"``, ``"p/q"`` (q a power of two) or ``"p/2^n"``."""
    m = _DYADIC_RE.match(text)
    if not m:
        raise PreconditionError(f"not a dyadic rational: {text!r}")
    num = int(m.group(1))
    if m.group(3) is not None:
        return DyadicRational(num, int(m.group(3)))
    if m.group(2) is None:
        return DyadicRational(num)
    den = int(m.group(2))
    if den <= 0 or den & (den - 1):
        raise PreconditionError(f"denominator of {text!r} is not a power of two")
    return DyadicRational(num, den.bit_length() - 1)


ZERO = DyadicRational(0)
ONE = DyadicRational(1)


@dataclass(frozen=True, order=True)
class StandardDyadicInterval:
    """The interval ``[p/2^n, (p+1)/2^n]``."""

    n: int
    p: int

    def __post_init__(self):
        _check_exponent(self.n)
        if self.n < 0 or not 0 <= self.p < 2**self.n:
            raise PreconditionError(f"invalid standard dyadic interval p={self.p}, n={self.n}")

    @property
    def left(self) -> DyadicRational:
        return DyadicRational(self.p, self.n)

    @property
    def right(self) -> DyadicRational:
        return DyadicRational(self.p + 1, self.n)

    @property
    def length(self) -> DyadicRational:
        return DyadicRational(1, self.n)

    @property
    def midpoint(self) -> DyadicRational:
        return DyadicRational(2 * self.p + 1, self.n + 1)

    def children(self) -> tuple["StandardDyadicInterval", "StandardDyadicInterval"]:
        return (
            StandardDyadicInterval(self.n + 1, 2 * self.p),
            StandardDyadicInterval(self.n + 1, 2 * self.p + 1),
        )

    def parent(self) -> "StandardDyadicInterval":
        if self.n == 0:
            raise PreconditionError("[0,1] has no parent")
        return StandardDyadicInterval(self.n - 1, self.p // 2)

    def contains(self, other: "StandardDyadicInterval") -> bool:
        """True if ``other`` is a (not necessarily proper) subinterval."""
        return other.n >= self.n and other.p >> (other.n - self.n) == self.p

    def contains_point(self, t: DyadicRational) -> bool:
        """Half-open membership ``left <= t < right``."""
        return self.left <= t < self.right

    def __str__(self):
        return f"[{self.left},{self.right}]"

    def __repr__(self):
        return f"StandardDyadicInterval{self}"

    @classmethod
    def from_endpoints(cls, a, b) -> "StandardDyadicInterval":
        a, b = DyadicRational.coerce(a), DyadicRational.coerce(b)
        if not is_standard(a, b):
            raise PreconditionError(f"[{a},{b}] is not a standard dyadic interval")
        length = b - a
        n = length.exponent
        return cls(n, a.numerator << (n - a.exponent))


def is_standard(a, b) -> bool:
    """True iff ``a = p/2^n`` and ``b = (p+1)/2^n`` for integers p, n."""
    a, b = DyadicRational.coerce(a), DyadicRational.coerce(b)
    if not (ZERO <= a < b <= ONE):
        raise PreconditionError(f"need 0 <= a < b <= 1, got a={a}, b={b}")
    length = b - a
    if length.numerator != 1:
        return False
    # a must be an integer multiple of the length
    return a.exponent <= length.exponent


def _left_key(iv: StandardDyadicInterval) -> int:
    return iv.p << (MAX_EXPONENT - iv.n)


@dataclass(frozen=True)
class DyadicPartition:
    """A tiling of [0, 1] by standard dyadic intervals, ordered left to right."""

    intervals: tuple[StandardDyadicInterval, ...]

    def __init__(self, intervals: Iterable[StandardDyadicInterval]):
        ivs = tuple(sorted(intervals, key=_left_key))
        if not ivs:
            raise PreconditionError("a partition needs at least one interval")
        # integer endpoints in units of 2^-MAX_EXPONENT
        pos = 0
        for iv in ivs:
            if iv.p << (MAX_EXPONENT - iv.n) != pos:
                raise PreconditionError(f"interval {iv} does not continue the tiling")
            pos += 1 << (MAX_EXPONENT - iv.n)
        if pos != 1 << MAX_EXPONENT:
            raise PreconditionError("partition must end at 1")
        object.__setattr__(self, "intervals", ivs)

    @classmethod
    def trivial(cls) -> "DyadicPartition":
        return cls([StandardDyadicInterval(0, 0)])

    @classmethod
    def uniform(cls, depth: int) -> "DyadicPartition":
        _check_exponent(depth)
        return cls(StandardDyadicInterval(depth, p) for p in range(2**depth))

    @classmethod
    def from_breakpoints(cls, points: Sequence) -> "DyadicPartition":
        """Build from the sorted endpoint list ``[0, ..., 1]``."""
        pts = [DyadicRational.coerce(x) for x in points]
        if len(pts) < 2:
            raise PreconditionError("need at least the endpoints 0 and 1")
        return cls(StandardDyadicInterval.from_endpoints(a, b) for a, b in zip(pts, pts[1:]))

    def breakpoints(self) -> list[DyadicRational]:
        return [iv.left for iv in self.intervals] + [ONE]

    def midpoints(self) -> list[DyadicRational]:
        return [iv.midpoint for iv in self.intervals]

    @property
    def depth(self) -> int:
        return max(iv.n for iv in self.intervals)

    def index_of(self, iv: StandardDyadicInterval) -> int:
        return self.intervals.index(iv)

    @cached_property
    def _left_keys(self) -> list[int]:
        return [_left_key(iv) for iv in self.intervals]

    def locate(self, t) -> int:
        """Index of the interval containing ``t``, using half-open intervals on [0, 1)."""
        t = DyadicRational.coerce(t)
        if not ZERO <= t < ONE:
            raise PreconditionError(f"{t} is not in [0, 1)")
        key = t.numerator << (MAX_EXPONENT - t.exponent)
        return bisect.bisect_right(self._left_keys, key) - 1

    def __len__(self):
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def __getitem__(self, i):
        return self.intervals[i]

    def __str__(self):
        return "{" + ",".join(str(iv) for iv in self.intervals) + "}"


def refines(coarse: DyadicPartition, fine: DyadicPartition) -> bool:
    """``coarse ⪯ fine``: every coarse interval is a union of fine intervals."""
    fine_points = set(fine.breakpoints())
    return all(x in fine_points for x in coarse.breakpoints())


def common_refinement(a: DyadicPartition, b: DyadicPartition) -> DyadicPartition:
    """Coarsest partition refining both ``a`` and ``b``.

    Two standard intervals are nested or interior-disjoint, so the union of
    the breakpoint sets always cuts [0, 1] into standard intervals.
    """
    if a == b:
        return a
    points = sorted(set(a.breakpoints()) | set(b.breakpoints()))
    return DyadicPartition.from_breakpoints(points)


def sub_partition(iv: StandardDyadicInterval, fine: DyadicPartition) -> list[StandardDyadicInterval]:
    """The intervals of ``fine`` lying inside ``iv``, in order."""
    return [j for j in fine.intervals if iv.contains(j)]
