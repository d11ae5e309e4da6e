"""Finite-scale representatives of the semicontinuous limit.

A state at scale ``I`` lives in ``(C^d)^{⊗|I|}`` with one tensor factor per
interval of ``I``, ordered by left endpoint. Fine-graining replaces the
factor on an interval by ``V`` applied to it, giving one factor on each half
(left half = first output leg of ``V``).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dyadic import DyadicPartition, StandardDyadicInterval, common_refinement, refines
from .errors import PreconditionError, SizeLimitError
from .linalg import Isometry
from .thompson import ThompsonElement, image_partition, inverse, refine_for, rotation

MAX_DIMENSION = 2**24


def check_size(d: int, sites: int, limit: int = MAX_DIMENSION) -> None:
    if d**sites > limit:
        raise SizeLimitError(f"Hilbert space dimension {d}^{sites} exceeds {limit}")


@dataclass(frozen=True, eq=False)
class ScaleState:
    partition: DyadicPartition
    vector: np.ndarray
    d: int

    def __post_init__(self):
        v = np.asarray(self.vector, dtype=complex).reshape(-1)
        if v.size != self.d ** len(self.partition):
            raise PreconditionError(
                f"vector has {v.size} entries, expected {self.d}^{len(self.partition)}"
            )
        if not np.all(np.isfinite(v)):
            raise PreconditionError("state has non-finite amplitudes")
        object.__setattr__(self, "vector", v)

    @classmethod
    def coarse(cls, psi, d: int | None = None) -> "ScaleState":
        """The class of ``(trivial partition, psi)``."""
        psi = np.asarray(psi, dtype=complex)
        return cls(DyadicPartition.trivial(), psi, d or psi.size)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))

    def tensor(self) -> np.ndarray:
        return self.vector.reshape((self.d,) * len(self.partition))


def _fine_grain(tensor: np.ndarray, sites: list[StandardDyadicInterval],
                target: DyadicPartition, V: Isometry) -> np.ndarray:
    # tensor axes 0..len(sites)-1 are the sites; any trailing axes ride along
    targets = set(target.intervals)
    vt = V.tensor
    sites = list(sites)
    pos = 0
    while pos < len(sites):
        iv = sites[pos]
        if iv in targets:
            pos += 1
            continue
        out = np.tensordot(vt, tensor, axes=([2], [pos]))
        tensor = np.moveaxis(out, [0, 1], [pos, pos + 1])
        sites[pos:pos + 1] = list(iv.children())
    return tensor


def tree_isometry(V: Isometry, partition: DyadicPartition, limit: int = MAX_DIMENSION) -> np.ndarray:
    """``ι_I^V`` as a ``d^|I| × d`` matrix: V at every internal node of the tree of I."""
    d = V.d
    check_size(d, len(partition), limit)
    t = _fine_grain(np.eye(d, dtype=complex), [StandardDyadicInterval(0, 0)], partition, V)
    return t.reshape(d ** len(partition), d)


def refine_state(s: ScaleState, target: DyadicPartition, V: Isometry,
                 limit: int = MAX_DIMENSION) -> ScaleState:
    """Apply the forest of per-interval trees taking ``H_I`` to ``H_target``."""
    if V.d != s.d:
        raise PreconditionError("state and isometry have different site dimensions")
    if not refines(s.partition, target):
        raise PreconditionError(f"{target} does not refine {s.partition}")
    if target == s.partition:
        return s
    check_size(s.d, len(target), limit)
    t = _fine_grain(s.tensor(), list(s.partition), target, V)
    return ScaleState(target, t.reshape(-1), s.d)


def inner_product(s1: ScaleState, s2: ScaleState, V: Isometry, scale: DyadicPartition | None = None,
                  limit: int = MAX_DIMENSION) -> complex:
    """``<s1, s2>`` after fine-graining both to a common scale (conjugate-linear in s1).

    ``scale`` defaults to the coarsest common refinement; any finer choice
    gives the same value.
    """
    if s1.d != s2.d:
        raise PreconditionError("states have different site dimensions")
    k = common_refinement(s1.partition, s2.partition)
    if scale is not None:
        if not refines(k, scale):
            raise PreconditionError("scale must refine both partitions")
        k = scale
    a = refine_state(s1, k, V, limit)
    b = refine_state(s2, k, V, limit)
    return complex(np.vdot(a.vector, b.vector))


def apply_thompson(f: ThompsonElement, s: ScaleState, V: Isometry,
                   limit: int = MAX_DIMENSION) -> ScaleState:
    """Representative of ``ρ^V(f)[s]``: refine until f maps the scale to a
    standard partition, then move the factor on each interval K to f(K)."""
    fine = refine_for(f, s.partition)
    s = refine_state(s, fine, V, limit)
    images = image_partition(f, fine)
    out_part = DyadicPartition(images)
    perm = [0] * len(images)
    for j, img in enumerate(images):
        perm[out_part.index_of(img)] = j
    t = np.transpose(s.tensor(), perm)
    return ScaleState(out_part, t.reshape(-1), s.d)


def cyclic_shift(tensor: np.ndarray, steps: int) -> np.ndarray:
    """Move the content of site j to site ``(j + steps) mod N``."""
    n = tensor.ndim
    perm = [(j - steps) % n for j in range(n)]
    return np.transpose(tensor, perm)


def rotation_matrix_element(V: Isometry, phi, psi, k: int, direction: int = -1,
                            limit: int = MAX_DIMENSION) -> complex:
    """Brute-force ``<Φ, ρ^V(f_k^direction) Ψ>`` for Φ, Ψ the classes of (trivial, φ/ψ).

    Both states are fine-grained to the uniform depth-k scale and the second
    one is shifted cyclically by one site. ``direction=+1`` is the rotation
    ``t -> t + 2^-k``, which moves site contents forward; ``direction=-1`` is
    its inverse, the orientation in which ``transfer_matrix_element`` uses
    ``x`` and ``R`` built from ``V`` itself.
    """
    if k < 1:
        raise PreconditionError("k must be >= 1")
    if direction not in (1, -1):
        raise PreconditionError("direction must be +1 or -1")
    d = V.d
    check_size(d, 2**k, limit)
    part = DyadicPartition.uniform(k)
    w = tree_isometry(V, part, limit)
    a = w @ np.asarray(phi, dtype=complex)
    b = (w @ np.asarray(psi, dtype=complex)).reshape((d,) * 2**k)
    b = cyclic_shift(b, direction).reshape(-1)
    return complex(np.vdot(a, b))


def rotation_matrix_element_via_action(V: Isometry, phi, psi, k: int, direction: int = -1,
                                       limit: int = MAX_DIMENSION) -> complex:
    """Same quantity as ``rotation_matrix_element``, routed through ``apply_thompson``."""
    f = rotation(k) if direction == 1 else inverse(rotation(k))
    s_psi = ScaleState.coarse(psi, V.d)
    moved = apply_thompson(f, s_psi, V, limit)
    return inner_product(ScaleState.coarse(phi, V.d), moved, V, limit=limit)
