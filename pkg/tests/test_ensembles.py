import numpy as np
import pytest

from dyadic_limit import diagnostics as D
from dyadic_limit.ensembles import (
    EnsembleConfig,
    check_symmetry,
    generalized_paulis,
    genericity_scan,
    pauli_stabilizer_isometry,
    scan_summary,
    so3_intersection_vector,
    so3_isometry,
    spin1_generators,
    spin1_rotation,
    stabilizer_operator,
)
from dyadic_limit.errors import PreconditionError
from dyadic_limit.linalg import Isometry, haar_isometry, haar_unitary_columns, operator_norm, swap


class TestStabilizer:
    @pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
    def test_fixed_by_s(self, d):
        V = pauli_stabilizer_isometry(d)
        S = stabilizer_operator(d)
        assert np.max(np.abs(S @ V.matrix - V.matrix)) <= 1e-12

    @pytest.mark.parametrize("d", [2, 3, 5])
    def test_image_is_whole_eigenspace(self, d):
        S = stabilizer_operator(d)
        # projector onto the +1 eigenspace of the unitary S, by averaging its powers
        proj = sum(np.linalg.matrix_power(S, m) for m in range(d)) / d
        assert np.linalg.matrix_rank(proj, tol=1e-8) == d
        np.testing.assert_allclose(pauli_stabilizer_isometry(d).projector, proj, atol=1e-12)

    def test_d2_basis(self):
        V = pauli_stabilizer_isometry(2).matrix
        e = np.eye(2)
        k = lambda a, b: np.kron(e[a], e[b])
        np.testing.assert_allclose(V[:, 0], (k(0, 0) + k(1, 0)) / np.sqrt(2), atol=1e-15)
        np.testing.assert_allclose(V[:, 1], (k(0, 1) - k(1, 1)) / np.sqrt(2), atol=1e-15)

    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_s1_s2_do_not_commute(self, d):
        S = stabilizer_operator(d)
        s1, s2 = np.kron(S, np.eye(d)), np.kron(np.eye(d), S)
        assert operator_norm(s1 @ s2 - s2 @ s1) > 0.1

    def test_paulis(self):
        X, Z = generalized_paulis(3)
        omega = np.exp(2j * np.pi / 3)
        np.testing.assert_allclose(Z @ X, omega * X @ Z, atol=1e-14)

    def test_diagnostics_depend_only_on_projector(self, nprng):
        V = pauli_stabilizer_isometry(3)
        U = haar_unitary_columns(3, 3, nprng)
        W = Isometry(V.matrix @ U)
        np.testing.assert_allclose(W.projector, V.projector, atol=1e-12)
        assert D.intersection_dimension(W) == 0
        assert D.genericity_polynomial(W) == pytest.approx(D.genericity_polynomial(V), rel=1e-9)
        assert D.discontinuity_certificate(W)[1] == pytest.approx(D.discontinuity_certificate(V)[1], abs=1e-12)

    def test_invalid(self):
        with pytest.raises(PreconditionError):
            pauli_stabilizer_isometry(1)


class TestSO3:
    def test_isometry_exact(self):
        V = so3_isometry()
        assert np.max(np.abs(V.matrix.conj().T @ V.matrix - np.eye(3))) <= 1e-15
        assert set(np.round(np.abs(V.matrix).ravel(), 12)) <= {0.0, round(1 / np.sqrt(2), 12)}

    def test_antisymmetric(self, nprng):
        V = so3_isometry()
        psi = nprng.standard_normal(3) + 1j * nprng.standard_normal(3)
        np.testing.assert_allclose(swap(3) @ V.matrix @ psi, -(V.matrix @ psi), atol=1e-15)

    def test_intersection_vector(self):
        V = so3_isometry()
        vecs = D.intersection_vectors(V)
        assert vecs.shape == (27, 1)
        fidelity = abs(np.vdot(vecs[:, 0], so3_intersection_vector())) ** 2
        assert fidelity >= 1 - 1e-10

    def test_intersection_vector_in_both_spaces(self):
        V, w = so3_isometry(), so3_intersection_vector()
        P = V.projector
        np.testing.assert_allclose(np.kron(P, np.eye(3)) @ w, w, atol=1e-14)
        np.testing.assert_allclose(np.kron(np.eye(3), P) @ w, w, atol=1e-14)

    def test_generators(self):
        jx, jy, jz = spin1_generators()
        np.testing.assert_allclose(jx @ jy - jy @ jx, 1j * jz, atol=1e-14)
        np.testing.assert_allclose(jx @ jx + jy @ jy + jz @ jz, 2 * np.eye(3), atol=1e-14)

    @pytest.mark.parametrize("theta", [0.1, 0.7, 2.0, np.pi])
    @pytest.mark.parametrize("axis", ["x", "y", "z"])
    def test_equivariant(self, theta, axis):
        V, U = so3_isometry(), spin1_rotation(theta, axis)
        assert check_symmetry(V, U) <= 1e-10
        P = V.projector
        UU = np.kron(U, U)
        assert operator_norm(P @ UU - UU @ P) <= 1e-10


class TestCheckSymmetry:
    def test_identity(self):
        assert check_symmetry(haar_isometry(3, 0), np.eye(3)) == 0.0

    def test_generic_positive(self, nprng):
        V = haar_isometry(3, 1)
        U = haar_unitary_columns(3, 3, nprng)
        assert check_symmetry(V, U) > 1e-3

    def test_rejects_non_unitary(self):
        with pytest.raises(PreconditionError):
            check_symmetry(so3_isometry(), 2 * np.eye(3))


class TestScan:
    def test_d2(self):
        reports = genericity_scan(EnsembleConfig(d=2, num_samples=100, kmax=3))
        assert scan_summary(reports)["failures"] == 0

    def test_d3(self):
        reports = genericity_scan(EnsembleConfig(d=3, num_samples=100, kmax=3))
        summary = scan_summary(reports)
        assert summary["failures"] == 0
        assert summary["min_genericity_det"] > 0
        assert summary["max_intersection_dim"] == 0

    def test_reproducible_and_order_independent(self, monkeypatch):
        cfg = EnsembleConfig(d=2, num_samples=12, base_seed=40, kmax=4)
        serial = [r.to_dict() for r in genericity_scan(cfg)]
        assert serial == [r.to_dict() for r in genericity_scan(cfg)]
        monkeypatch.setenv("DYADIC_LIMIT_THREADS", "4")
        assert serial == [r.to_dict() for r in genericity_scan(cfg)]
        assert [r["source"] for r in serial] == [f"haar:d=2:seed={s}" for s in range(40, 52)]

    def test_config_validation(self):
        with pytest.raises(PreconditionError):
            EnsembleConfig(d=2, num_samples=0)
        with pytest.raises(PreconditionError):
            EnsembleConfig(d=9, num_samples=1)
