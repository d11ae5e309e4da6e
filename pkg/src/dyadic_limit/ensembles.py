"""Explicit isometries and Haar-ensemble scans."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .diagnostics import DiagnosticsReport, diagnose
from .errors import PreconditionError
from .linalg import DEFAULT_TOL, Isometry, Tolerances, haar_isometry, operator_norm

THREADS_ENV = "DYADIC_LIMIT_THREADS"


def generalized_paulis(d: int) -> tuple[np.ndarray, np.ndarray]:
    """``X|j> = |j+1 mod d>`` and ``Z|j> = ω^j |j>`` with ``ω = exp(2πi/d)``."""
    X = np.roll(np.eye(d, dtype=complex), 1, axis=0)
    Z = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    return X, Z


def stabilizer_operator(d: int) -> np.ndarray:
    X, Z = generalized_paulis(d)
    return np.kron(X, Z)


def pauli_stabilizer_isometry(d: int) -> Isometry:
    """Isometry onto the +1 eigenspace of ``S = X ⊗ Z``.

    ``S|a,b> = ω^b |a+1,b>``, so for each b the vector
    ``Σ_a ω^{ab} |a,b> / √d`` is fixed by S. These d vectors form column b.
    """
    if d < 2:
        raise PreconditionError("d must be >= 2")
    omega = np.exp(2j * np.pi / d)
    V = np.zeros((d * d, d), dtype=complex)
    for b in range(d):
        for a in range(d):
            V[a * d + b, b] = omega ** ((a * b) % d) / np.sqrt(d)
    return Isometry(V)


# basis order (|1>, |0>, |-1>)
SPIN1_LABELS = (1, 0, -1)


def _ket(*ms: int) -> np.ndarray:
    v = np.ones(1, dtype=complex)
    for m in ms:
        e = np.zeros(3, dtype=complex)
        e[SPIN1_LABELS.index(m)] = 1.0
        v = np.kron(v, e)
    return v


def spin1_generators() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(J_x, J_y, J_z)`` for spin 1 with ħ = 1."""
    jp = np.zeros((3, 3), dtype=complex)
    jp[0, 1] = jp[1, 2] = np.sqrt(2)
    jm = jp.conj().T
    return (jp + jm) / 2, (jp - jm) / 2j, np.diag([1.0, 0.0, -1.0]).astype(complex)


def spin1_rotation(theta: float, axis: str = "y") -> np.ndarray:
    jx, jy, jz = spin1_generators()
    gen = {"x": jx, "y": jy, "z": jz}[axis]
    return expm(1j * theta * gen)


def so3_isometry() -> Isometry:
    """Spin-1 → antisymmetric part of 1 ⊗ 1, with the signs fixed as

    |1> -> (|1,0> - |0,1>)/√2, |0> -> (|1,-1> - |-1,1>)/√2,
    |-1> -> (|0,-1> - |-1,0>)/√2.
    """
    cols = [
        (_ket(1, 0) - _ket(0, 1)) / np.sqrt(2),
        (_ket(1, -1) - _ket(-1, 1)) / np.sqrt(2),
        (_ket(0, -1) - _ket(-1, 0)) / np.sqrt(2),
    ]
    return Isometry(np.stack(cols, axis=1))


def so3_intersection_vector() -> np.ndarray:
    """Normalized totally antisymmetric vector spanning the SO(3) intersection."""
    v = (-_ket(-1, 0, 1) + _ket(-1, 1, 0) + _ket(0, -1, 1)
         - _ket(0, 1, -1) - _ket(1, -1, 0) + _ket(1, 0, -1))
    return v / np.linalg.norm(v)


def check_symmetry(V: Isometry, U, tol: float = DEFAULT_TOL.spectrum) -> float:
    """``|V - (U⊗U) V U†|``; zero iff V intertwines U with U⊗U."""
    U = np.asarray(U, dtype=complex)
    if U.shape != (V.d, V.d) or np.max(np.abs(U.conj().T @ U - np.eye(V.d))) > tol:
        raise PreconditionError("U must be a unitary on C^d")
    return operator_norm(V.matrix - np.kron(U, U) @ V.matrix @ U.conj().T)


@dataclass
class EnsembleConfig:
    d: int
    num_samples: int
    base_seed: int = 0
    kmax: int = 6
    tolerances: Tolerances = field(default_factory=Tolerances)

    def __post_init__(self):
        if self.num_samples < 1:
            raise PreconditionError("num_samples must be >= 1")
        if not 2 <= self.d <= 8:
            raise PreconditionError("d must lie in [2, 8]")

    @property
    def seeds(self) -> list[int]:
        return list(range(self.base_seed, self.base_seed + self.num_samples))


def _threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def genericity_scan(cfg: EnsembleConfig) -> list[DiagnosticsReport]:
    """Diagnose one Haar isometry per seed; reports come back ordered by seed."""

    def one(seed: int) -> DiagnosticsReport:
        return diagnose(haar_isometry(cfg.d, seed), f"haar:d={cfg.d}:seed={seed}",
                        kmax=cfg.kmax, tol=cfg.tolerances)

    workers = _threads()
    if workers == 1:
        return [one(s) for s in cfg.seeds]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, cfg.seeds))


def scan_summary(reports: list[DiagnosticsReport]) -> dict:
    return {
        "samples": len(reports),
        "failures": sum(not r.condition_holds for r in reports),
        "min_margin": min(r.margin for r in reports),
        "min_genericity_det": min(r.genericity_det for r in reports),
        "max_intersection_dim": max(r.intersection_dim for r in reports),
    }
