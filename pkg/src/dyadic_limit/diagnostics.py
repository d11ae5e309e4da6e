"""Continuity diagnostics for the Thompson-group action built from an isometry V.

With ``P = V V†`` and ``𝒱 = range(P)``:

* ``x = (I⊗V†)(V⊗I)`` and ``R(z) = (I⊗V†)(z⊗I)(I⊗z)(V⊗I)``;
* ``Γ_P = (P⊗I)(I⊗P)(P⊗I)``, whose eigenvalue-1 space is ``(𝒱⊗C^d) ∩ (C^d⊗𝒱)``;
* the rotation matrix element ``M_k = Tr(R^{k-1}(x) A(φ, ψ))`` with
  ``A(φ, ψ) = SWAP (I ⊗ |ψ><φ|)``.

The wiring of ``A`` was fixed against the brute-force contraction in
:func:`dyadic_limit.ttn.rotation_matrix_element`. With V's first output leg
on the left child, the formula above is the element for the rotation that
moves site contents backwards (``direction=-1``). The forward rotation is
the spatial mirror image and is obtained with ``V.mirrored()`` in place of V.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import PreconditionError
from .linalg import (
    DEFAULT_TOL,
    Isometry,
    Tolerances,
    hermitian_eigensystem,
    operator_norm,
    swap,
    trace_norm,
)


def _eye(d: int) -> np.ndarray:
    return np.eye(d, dtype=complex)


def x_operator(V: Isometry) -> np.ndarray:
    d = V.d
    return np.kron(_eye(d), V.matrix.conj().T) @ np.kron(V.matrix, _eye(d))


def renorm_map(z: np.ndarray, V: Isometry) -> np.ndarray:
    d = V.d
    z = np.asarray(z, dtype=complex)
    if z.shape != (d * d, d * d):
        raise PreconditionError(f"R expects a {d*d}x{d*d} operator, got {z.shape}")
    eye = _eye(d)
    return (np.kron(eye, V.matrix.conj().T) @ np.kron(z, eye)
            @ np.kron(eye, z) @ np.kron(V.matrix, eye))


def renorm_iterates(V: Isometry, kmax: int, tol: Tolerances = DEFAULT_TOL):
    """Yield ``(k, R^k(x), underflowed)`` for k = 0..kmax.

    Once the norm drops below ``tol.underflow`` the iterate is replaced by the
    exact zero operator (R(0) = 0) and flagged.
    """
    z = x_operator(V)
    flagged = False
    for k in range(kmax + 1):
        if not flagged and operator_norm(z) < tol.underflow:
            flagged = True
        if flagged:
            z = np.zeros_like(z)
        yield k, z, flagged
        if k < kmax and not flagged:
            z = renorm_map(z, V)


@dataclass
class DecaySeries:
    norms: list[float]
    underflow_at: int | None = None

    def bounds(self) -> list[float]:
        """The closed-form bound ``|x|^(2^k)``."""
        s0 = self.norms[0]
        return [s0 ** (2**k) for k in range(len(self.norms))]


def decay_series(V: Isometry, kmax: int, tol: Tolerances = DEFAULT_TOL) -> DecaySeries:
    """Norms ``|R^k(x)|`` for k = 0..kmax."""
    if not 0 <= kmax <= 12:
        raise PreconditionError("kmax must lie in [0, 12]")
    norms, under = [], None
    for k, z, flagged in renorm_iterates(V, kmax, tol):
        if flagged and under is None:
            under = k
        norms.append(0.0 if flagged else operator_norm(z))
    return DecaySeries(norms, under)


def _require_projector(P: np.ndarray, tol: float) -> None:
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        raise PreconditionError("projector must be square")
    if np.max(np.abs(P - P.conj().T), initial=0.0) > tol or np.max(np.abs(P @ P - P), initial=0.0) > tol:
        raise PreconditionError("input is not an orthogonal projector")


def gamma_operator(P, d: int, tol: float = DEFAULT_TOL.spectrum) -> np.ndarray:
    P = np.asarray(P, dtype=complex)
    if P.shape != (d * d, d * d):
        raise PreconditionError(f"projector must be {d*d}x{d*d}")
    _require_projector(P, tol)
    p1 = np.kron(P, _eye(d))
    p2 = np.kron(_eye(d), P)
    g = p1 @ p2 @ p1
    return (g + g.conj().T) / 2


def pair_projector_product(V: Isometry) -> np.ndarray:
    """``(I⊗P)(P⊗I)``, the operator whose norm certifies the intersection condition."""
    d, P = V.d, V.projector
    return np.kron(_eye(d), P) @ np.kron(P, _eye(d))


def gamma_spectrum(V: Isometry) -> tuple[np.ndarray, np.ndarray]:
    return hermitian_eigensystem(gamma_operator(V.projector, V.d))


def intersection_dimension(V: Isometry, tol: Tolerances = DEFAULT_TOL) -> int:
    """``dim((𝒱⊗C^d) ∩ (C^d⊗𝒱))`` as the multiplicity of eigenvalue 1 of Γ_P."""
    evals, _ = gamma_spectrum(V)
    return int(np.sum(evals >= 1 - tol.eigen_one))


def intersection_dimension_via_sum(V: Isometry, tol: Tolerances = DEFAULT_TOL) -> int:
    """Same dimension from ``ker(2I - P⊗I - I⊗P)``; w is in both spaces iff it is fixed by both projectors."""
    d, P = V.d, V.projector
    s = 2 * np.eye(d**3) - np.kron(P, _eye(d)) - np.kron(_eye(d), P)
    evals, _ = hermitian_eigensystem(s)
    return int(np.sum(evals <= tol.eigen_one))


def intersection_vectors(V: Isometry, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (columns) of the intersection space."""
    evals, evecs = gamma_spectrum(V)
    return evecs[:, evals >= 1 - tol.eigen_one]


def genericity_polynomial(V: Isometry) -> float:
    """``det(I - Γ_P)``; vanishes exactly when the intersection is nontrivial."""
    evals, _ = gamma_spectrum(V)
    return float(np.prod(1.0 - evals))


def discontinuity_certificate(V: Isometry, tol: Tolerances = DEFAULT_TOL) -> tuple[bool, float]:
    """``(holds, margin)`` with ``margin = 1 - |(I⊗P)(P⊗I)|``.

    ``holds`` means the intersection condition is met with a margin, so the
    decay argument applies. ``False`` is inconclusive, not a proof of continuity.
    """
    margin = 1.0 - operator_norm(pair_projector_product(V))
    return margin > tol.condition, margin


def boundary_operator(phi, psi, V: Isometry | None = None) -> np.ndarray:
    """``A(φ, ψ) = SWAP (I ⊗ |ψ><φ|)``; linear in ψ, antilinear in φ."""
    phi = np.asarray(phi, dtype=complex).reshape(-1)
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    d = psi.size
    if phi.size != d or (V is not None and V.d != d):
        raise PreconditionError("state dimensions do not match")
    return swap(d) @ np.kron(_eye(d), np.outer(psi, phi.conj()))


def transfer_matrix_element(V: Isometry, phi, psi, k: int, direction: int = -1,
                            tol: Tolerances = DEFAULT_TOL) -> complex:
    """``Tr(R^{k-1}(x) A(φ, ψ))``; cost linear in k."""
    return transfer_series(V, phi, psi, k, direction, tol)[-1]


def transfer_series(V: Isometry, phi, psi, kmax: int, direction: int = -1,
                    tol: Tolerances = DEFAULT_TOL) -> list[complex]:
    """``[M_1, ..., M_kmax]`` from one pass over the R iterates."""
    if kmax < 1:
        raise PreconditionError("k must be >= 1")
    if direction not in (1, -1):
        raise PreconditionError("direction must be +1 or -1")
    W = V if direction == -1 else V.mirrored()
    A = boundary_operator(phi, psi, W)
    return [complex(np.trace(z @ A)) for _, z, _ in renorm_iterates(W, kmax - 1, tol)]


def hoelder_bounds(V: Isometry, phi, psi, kmax: int, direction: int = -1,
                   tol: Tolerances = DEFAULT_TOL) -> list[float]:
    """``|R^{k-1}(x)| · |A|_1`` for k = 1..kmax, bounding ``|M_k|``."""
    W = V if direction == -1 else V.mirrored()
    a1 = trace_norm(boundary_operator(phi, psi, W))
    return [0.0 if flagged else operator_norm(z) * a1
            for _, z, flagged in renorm_iterates(W, kmax - 1, tol)]


def onset_index(values, threshold: float = 1e-6) -> int | None:
    """Smallest k (1-based) with ``|M_j| < threshold`` for every j >= k in the series."""
    k_star = None
    for k in range(len(values), 0, -1):
        if abs(values[k - 1]) < threshold:
            k_star = k
        else:
            break
    return k_star


@dataclass
class DiagnosticsReport:
    d: int
    source: str
    norm_x: float
    norm_gamma: float
    norm_pair: float
    intersection_dim: int
    genericity_det: float
    condition_holds: bool
    certificate: bool
    margin: float
    decay_series: list[tuple[int, float]] = field(default_factory=list)
    decay_underflow_at: int | None = None
    melement_series: list[tuple[int, complex]] = field(default_factory=list)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["decay_series"] = [[k, v] for k, v in self.decay_series]
        out["melement_series"] = [[k, [m.real, m.imag]] for k, m in self.melement_series]
        return out


def diagnose(V: Isometry, source: str = "", kmax: int = 6, phi=None, psi=None,
             tol: Tolerances = DEFAULT_TOL) -> DiagnosticsReport:
    """Run every diagnostic on ``V``.

    The matrix-element series uses ``φ = ψ = e_0`` unless given, so that
    ``<Φ, Ψ> = 1``.
    """
    d = V.d
    e0 = np.zeros(d, dtype=complex)
    e0[0] = 1.0
    phi = e0 if phi is None else phi
    psi = e0 if psi is None else psi
    evals, _ = gamma_spectrum(V)
    norm_gamma = float(evals[-1])
    inter = int(np.sum(evals >= 1 - tol.eigen_one))
    cert, margin = discontinuity_certificate(V, tol)
    series = decay_series(V, kmax, tol)
    mel = transfer_series(V, phi, psi, kmax + 1, tol=tol)
    return DiagnosticsReport(
        d=d,
        source=source,
        norm_x=series.norms[0],
        norm_gamma=norm_gamma,
        norm_pair=1.0 - margin,
        intersection_dim=inter,
        genericity_det=float(np.prod(1.0 - evals)),
        condition_holds=norm_gamma < 1 - tol.condition,
        certificate=cert,
        margin=margin,
        decay_series=list(enumerate(series.norms)),
        decay_underflow_at=series.underflow_at,
        melement_series=[(k, m) for k, m in enumerate(mel, start=1)],
    )
