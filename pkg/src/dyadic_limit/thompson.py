"""Elements of Thompson's group T as pairs of standard dyadic partitions.

An element maps the i-th interval of ``domain`` affinely and
orientation-preservingly onto interval ``(i + offset) % N`` of ``range``.
Slopes are automatically powers of two. Elements are kept in reduced form:
sibling domain intervals whose images are sibling range intervals (in the
same order) are merged until no such pair remains.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable

from .dyadic import (
    ONE,
    ZERO,
    DyadicPartition,
    DyadicRational,
    StandardDyadicInterval,
    common_refinement,
)
from .errors import PreconditionError

Piece = tuple[StandardDyadicInterval, StandardDyadicInterval]


def _push(dom: StandardDyadicInterval, img: StandardDyadicInterval,
          sub: StandardDyadicInterval) -> StandardDyadicInterval:
    # affine image of the standard subinterval ``sub`` of ``dom``
    delta = sub.n - dom.n
    rel = sub.p - (dom.p << delta)
    return StandardDyadicInterval(img.n + delta, (img.p << delta) + rel)


@dataclass(frozen=True)
class ThompsonElement:
    domain: DyadicPartition
    range: DyadicPartition
    offset: int = 0

    def __post_init__(self):
        if len(self.domain) != len(self.range):
            raise PreconditionError("domain and range must have the same number of intervals")
        if not 0 <= self.offset < len(self.domain):
            raise PreconditionError(f"offset {self.offset} out of range for {len(self.domain)} pieces")

    @classmethod
    def identity(cls) -> "ThompsonElement":
        return cls(DyadicPartition.trivial(), DyadicPartition.trivial(), 0)

    def pieces(self) -> list[Piece]:
        n = len(self.domain)
        return [(self.domain[i], self.range[(i + self.offset) % n]) for i in range(n)]

    @classmethod
    def from_pieces(cls, pieces: Iterable[Piece]) -> "ThompsonElement":
        """Reduced element from (domain interval, image interval) pairs."""
        pieces = _reduce(sorted(pieces, key=lambda pc: pc[0].left))
        domain = DyadicPartition(d for d, _ in pieces)
        rng = DyadicPartition(r for _, r in pieces)
        offset = rng.index_of(pieces[0][1])
        f = cls(domain, rng, offset)
        if f.pieces() != pieces:
            raise PreconditionError("pieces do not define an orientation-preserving circle map")
        return f

    def is_identity(self) -> bool:
        return self == ThompsonElement.identity()

    def __matmul__(self, other: "ThompsonElement") -> "ThompsonElement":
        return compose(self, other)


def _reduce(pieces: list[Piece]) -> list[Piece]:
    pieces = list(pieces)
    changed = True
    while changed:
        changed = False
        out: list[Piece] = []
        i = 0
        while i < len(pieces):
            if i + 1 < len(pieces):
                (d0, r0), (d1, r1) = pieces[i], pieces[i + 1]
                if (d0.n == d1.n and d0.p % 2 == 0 and d1.p == d0.p + 1
                        and r0.n == r1.n and r0.p % 2 == 0 and r1.p == r0.p + 1):
                    out.append((d0.parent(), r0.parent()))
                    i += 2
                    changed = True
                    continue
            out.append(pieces[i])
            i += 1
        pieces = out
    return pieces


def rotation(k: int) -> ThompsonElement:
    """Rotation ``t -> t + 2**-k mod 1`` on the uniform depth-k partition."""
    if k < 1:
        raise PreconditionError("rotation index k must be >= 1")
    part = DyadicPartition.uniform(k)
    return ThompsonElement(part, part, 1)


def _find_piece(f: ThompsonElement, t: DyadicRational) -> Piece:
    i = f.domain.locate(t)
    return f.domain[i], f.range[(i + f.offset) % len(f.domain)]


def evaluate(f: ThompsonElement, t) -> DyadicRational:
    """Exact image of ``t`` in [0, 1)."""
    t = DyadicRational.coerce(t)
    dom, img = _find_piece(f, t)
    return img.left + (t - dom.left).scale_pow2(dom.n - img.n)


def image_interval(f: ThompsonElement, iv: StandardDyadicInterval) -> StandardDyadicInterval:
    """Image of a standard interval lying inside one domain piece of ``f``."""
    for dom, img in f.pieces():
        if dom.contains(iv):
            return _push(dom, img, iv)
    raise PreconditionError(f"{iv} is not contained in a single piece of the domain")


def inverse(f: ThompsonElement) -> ThompsonElement:
    n = len(f.domain)
    return ThompsonElement(f.range, f.domain, (-f.offset) % n)


def compose(f: ThompsonElement, g: ThompsonElement) -> ThompsonElement:
    """Return ``f ∘ g``."""
    mid = common_refinement(g.range, f.domain)
    pieces: list[Piece] = []
    for dom, img in g.pieces():
        for k in mid:
            if img.contains(k):
                pieces.append((_push(img, dom, k), image_interval(f, k)))
    return ThompsonElement.from_pieces(pieces)


def refine_for(f: ThompsonElement, partition: DyadicPartition) -> DyadicPartition:
    """Coarsest refinement of ``partition`` on which ``f`` is affine per interval.

    Its image under ``f`` is again a standard dyadic partition.
    """
    return common_refinement(partition, f.domain)


def image_partition(f: ThompsonElement, partition: DyadicPartition) -> list[StandardDyadicInterval]:
    """Images of the intervals of ``partition`` in order; requires f affine on each."""
    return [image_interval(f, iv) for iv in partition]


def circle_distance_to_identity(f: ThompsonElement) -> DyadicRational:
    """``sup_t d(f(t), t)`` for the circle metric ``d(x, y) = min(|x-y|, 1-|x-y|)``.

    On each piece the lifted displacement is affine; the circle distance of an
    affine function peaks at an endpoint or wherever it crosses 1/2 mod 1.
    """
    pieces = f.pieces()
    e = max(max(dom.n, img.n) for dom, img in pieces)
    if e == 0:
        return ZERO
    # exact integer arithmetic in units of 2^-e
    unit, half = 1 << e, 1 << (e - 1)
    best = 0
    for dom, img in pieces:
        g0 = (img.p << (e - img.n)) - (dom.p << (e - dom.n))
        g1 = ((img.p + 1) << (e - img.n)) - ((dom.p + 1) << (e - dom.n))
        lo, hi = min(g0, g1), max(g0, g1)
        if -((half - lo) // unit) * unit + half <= hi:
            return DyadicRational(1, 1)
        for g in (g0, g1):
            frac = g % unit
            best = max(best, min(frac, unit - frac))
    return DyadicRational(best, e)


def random_partition(rng: random.Random, max_depth: int, size: int | None = None) -> DyadicPartition:
    """Random partition of depth <= ``max_depth`` with ``size`` intervals if given."""
    if size is None:
        size = rng.randint(1, 2**max_depth)
    if not 1 <= size <= 2**max_depth:
        raise PreconditionError(f"cannot fit {size} intervals at depth {max_depth}")
    leaves = [StandardDyadicInterval(0, 0)]
    while len(leaves) < size:
        candidates = [i for i, iv in enumerate(leaves) if iv.n < max_depth]
        i = rng.choice(candidates)
        leaves[i:i + 1] = list(leaves[i].children())
    return DyadicPartition(leaves)


def random_element(rng: random.Random, max_depth: int = 5) -> ThompsonElement:
    """Random element whose (unreduced) partitions have depth <= ``max_depth``."""
    size = rng.randint(1, 2**max_depth)
    dom = random_partition(rng, max_depth, size)
    ran = random_partition(rng, max_depth, size)
    offset = rng.randrange(size)
    return ThompsonElement.from_pieces(ThompsonElement(dom, ran, offset).pieces())
