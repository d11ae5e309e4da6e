"""Small dense complex linear algebra.

Tensor factors are ordered left to right with the leftmost factor the
slowest-varying index, matching ``numpy.kron`` and C-order reshapes.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError, SizeLimitError

MAX_KRON_ENTRIES = 10**7


@dataclass(frozen=True)
class Tolerances:
    spectrum: float = 1e-10
    isometry: float = 1e-12
    eigen_one: float = 1e-9
    condition: float = 1e-9
    underflow: float = 1e-300


DEFAULT_TOL = Tolerances()


def _finite(m: np.ndarray, what: str = "matrix") -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if not np.all(np.isfinite(m)):
        raise PreconditionError(f"{what} has non-finite entries")
    return m


def operator_norm(m) -> float:
    """Largest singular value."""
    m = _finite(m)
    if m.size == 0:
        return 0.0
    return float(np.linalg.svd(np.atleast_2d(m), compute_uv=False)[0])


def trace_norm(m) -> float:
    m = _finite(m)
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def is_hermitian(m, tol: float = DEFAULT_TOL.spectrum) -> bool:
    m = np.asarray(m)
    return m.shape[0] == m.shape[1] and np.max(np.abs(m - m.conj().T), initial=0.0) <= tol


def hermitian_eigensystem(m, tol: float = DEFAULT_TOL.spectrum) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvectors (as columns)."""
    m = _finite(m)
    if m.ndim != 2 or not is_hermitian(m, tol):
        raise PreconditionError("matrix is not Hermitian")
    evals, evecs = np.linalg.eigh((m + m.conj().T) / 2)
    return evals, evecs


def kron(*mats) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        m = _finite(np.atleast_2d(m))
        if out.size * m.size > MAX_KRON_ENTRIES:
            raise SizeLimitError(
                f"Kronecker product with {out.size * m.size} entries exceeds {MAX_KRON_ENTRIES}"
            )
        out = np.kron(out, m)
    return out


def swap(d: int) -> np.ndarray:
    """The flip ``|a,b> -> |b,a>`` on C^d ⊗ C^d."""
    return np.eye(d * d).reshape(d, d, d, d).transpose(1, 0, 2, 3).reshape(d * d, d * d)


@dataclass(frozen=True, eq=False)
class Isometry:
    """``V: C^d -> C^d ⊗ C^d`` stored as a d² × d matrix.

    The first output factor feeds the left child in tree contractions.
    """

    matrix: np.ndarray
    tol: float = field(default=DEFAULT_TOL.isometry, repr=False)

    def __post_init__(self):
        m = _finite(self.matrix, "isometry")
        d = m.shape[1] if m.ndim == 2 else 0
        if m.ndim != 2 or d < 1 or m.shape[0] != d * d:
            raise PreconditionError(f"isometry must have shape (d², d), got {m.shape}")
        err = np.max(np.abs(m.conj().T @ m - np.eye(d)))
        if err > self.tol:
            raise PreconditionError(f"V†V deviates from the identity by {err:.3e}")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def d(self) -> int:
        return self.matrix.shape[1]

    @property
    def projector(self) -> np.ndarray:
        return self.matrix @ self.matrix.conj().T

    @property
    def tensor(self) -> np.ndarray:
        """``V[a, b, c]`` with (a, b) the output legs and c the input."""
        return self.matrix.reshape(self.d, self.d, self.d)

    def mirrored(self) -> "Isometry":
        """``SWAP · V``: the same isometry with its output legs exchanged."""
        return Isometry(swap(self.d) @ self.matrix, self.tol)

    def __eq__(self, other):
        return isinstance(other, Isometry) and np.array_equal(self.matrix, other.matrix)

    __hash__ = None


def haar_unitary_columns(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """First ``cols`` columns of a Haar-random unitary on C^rows.

    QR of a complex Ginibre matrix with the phases of diag(R) moved into Q, so
    that the factorization is unique and the result is Haar distributed.
    """
    z = (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def haar_isometry(d: int, seed: int) -> Isometry:
    if not 2 <= d <= 8:
        raise PreconditionError(f"d must lie in [2, 8], got {d}")
    rng = np.random.default_rng(seed)
    return Isometry(haar_unitary_columns(d * d, d, rng))


def random_unit_vector(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)
