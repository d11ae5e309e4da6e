"""Acceptance suite: one test per criterion, each printing a PASS/FAIL verdict line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines inline; they are
also repeated in the terminal summary.
"""
import random
import time
from contextlib import contextmanager

import numpy as np

from conftest import record_acceptance
from dyadic_limit.dyadic import DyadicPartition, DyadicRational, common_refinement, refines
from dyadic_limit.diagnostics import (
    boundary_operator,
    decay_series,
    discontinuity_certificate,
    gamma_spectrum,
    genericity_polynomial,
    hoelder_bounds,
    intersection_dimension,
    onset_index,
    pair_projector_product,
    transfer_series,
    x_operator,
)
from dyadic_limit.ensembles import (
    pauli_stabilizer_isometry,
    so3_intersection_vector,
    so3_isometry,
    stabilizer_operator,
)
from dyadic_limit.linalg import haar_isometry, operator_norm, trace_norm
from dyadic_limit.thompson import (
    ThompsonElement,
    circle_distance_to_identity,
    compose,
    evaluate,
    image_partition,
    inverse,
    random_element,
    random_partition,
    refine_for,
    rotation,
)
from dyadic_limit.ttn import (
    ScaleState,
    apply_thompson,
    inner_product,
    refine_state,
    rotation_matrix_element,
)



@contextmanager
def criterion(number: int, title: str, limit: float):
    """Time a criterion body and record its verdict; failures still propagate."""
    details: list[str] = []
    start = time.perf_counter()
    ok = False
    try:
        yield details
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        in_time = elapsed < limit
        verdict = "PASS" if ok and in_time else "FAIL"
        extra = f" [{'; '.join(details)}]" if details else ""
        record_acceptance(f"{verdict} criterion {number}: {title} ({elapsed:.2f}s, limit {limit:.0f}s){extra}")
    assert in_time, f"criterion {number} took {elapsed:.2f}s (limit {limit}s)"


def test_criterion_1_transfer_formula():
    with criterion(1, "transfer formula agrees with brute force", 30) as info:
        worst = 0.0
        for d, seeds, kmax in ((2, 20, 4), (3, 10, 3)):
            for seed in range(seeds):
                V = haar_isometry(d, seed)
                rng = np.random.default_rng(1000 + seed)
                phi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
                psi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
                phi, psi = phi / np.linalg.norm(phi), psi / np.linalg.norm(psi)
                transfer = transfer_series(V, phi, psi, kmax)
                for k in range(1, kmax + 1):
                    worst = max(worst, abs(transfer[k - 1] - rotation_matrix_element(V, phi, psi, k)))
        info.append(f"max deviation {worst:.2e}")
        assert worst <= 1e-9


def test_criterion_2_doubly_exponential_decay():
    with criterion(2, "doubly exponential decay of the renormalized x", 60) as info:
        violations = 0
        for d in (2, 3, 4):
            for seed in range(50):
                series = decay_series(haar_isometry(d, seed), 6)
                n = series.norms
                for k in range(7):
                    if n[k] > n[0] ** (2**k) * (1 + 1e-9):
                        violations += 1
                    if k < 6 and n[k + 1] > n[k] ** 2 * (1 + 1e-10):
                        violations += 1
        info.append(f"{violations} violations over 150 isometries")
        assert violations == 0


def test_criterion_3_genericity():
    with criterion(3, "Haar isometries satisfy the intersection condition", 60) as info:
        bad = []
        min_margin = np.inf
        for d in (2, 3, 4):
            for seed in range(100):
                V = haar_isometry(d, seed)
                margin = 1 - operator_norm(pair_projector_product(V))
                min_margin = min(min_margin, margin)
                if intersection_dimension(V) != 0 or genericity_polynomial(V) <= 0 or margin < 1e-4:
                    bad.append(f"d={d} seed={seed} margin={margin:.3e}")
        info.append(f"min margin {min_margin:.3e}")
        if bad:
            info.append("violations: " + ", ".join(bad))
        assert not bad


def test_criterion_4_so3_example():
    with criterion(4, "SO(3) isometry has a one-dimensional intersection", 5) as info:
        V = so3_isometry()
        assert intersection_dimension(V) == 1
        values, vectors = gamma_spectrum(V)
        top = vectors[:, np.argmax(values)]
        fidelity = abs(np.vdot(so3_intersection_vector(), top)) ** 2
        norm_x = operator_norm(x_operator(V))
        cert, _ = discontinuity_certificate(V)
        info.append(f"1 - fidelity = {1 - fidelity:.1e}, |x| - 1 = {norm_x - 1:.1e}")
        assert fidelity >= 1 - 1e-10
        assert abs(norm_x - 1) <= 1e-10
        assert cert is False


def test_criterion_5_stabilizer_example():
    with criterion(5, "Pauli stabilizer isometries certify discontinuity", 5) as info:
        for d in (2, 3, 5):
            S = stabilizer_operator(d)
            fixed_dim = d * d - np.linalg.matrix_rank(S - np.eye(d * d), tol=1e-9)
            V = pauli_stabilizer_isometry(d)
            np.testing.assert_allclose(S @ V.matrix, V.matrix, atol=1e-12)
            cert, margin = discontinuity_certificate(V)
            info.append(f"d={d} margin {margin:.3f}")
            assert fixed_dim == d
            assert intersection_dimension(V) == 0
            assert cert is True


def _grid(*maps: ThompsonElement) -> list[DyadicRational]:
    # Every breakpoint plus every piece midpoint of the given maps. Piecewise-affine
    # maps that agree on all of these agree everywhere, so the check is exact.
    points = set()
    for f in maps:
        points.update(bp for bp in f.domain.breakpoints() if bp < 1)
        points.update(f.domain.midpoints())
    return sorted(points)


def test_criterion_6_thompson_algebra():
    with criterion(6, "Thompson group laws, rotation distances and refine_for postconditions", 30):
        rng = random.Random(6)
        ident = ThompsonElement.identity()
        elements = [random_element(rng, 5) for _ in range(1000)]
        for i, f in enumerate(elements):
            g, h = elements[(i + 1) % 1000], elements[(i + 7) % 1000]
            assert compose(f, ident) == f and compose(ident, f) == f
            assert compose(f, inverse(f)).is_identity() and compose(inverse(f), f).is_identity()
            lhs, rhs = compose(f, compose(g, h)), compose(compose(f, g), h)
            assert lhs == rhs
            f_inv = inverse(f)
            for t in _grid(lhs, rhs, f, g, h):
                assert evaluate(lhs, t) == evaluate(rhs, t) == evaluate(f, evaluate(g, evaluate(h, t)))
                assert evaluate(f_inv, evaluate(f, t)) == t
        for k in range(1, 21):
            assert circle_distance_to_identity(rotation(k)) == DyadicRational(1, k)
        for _ in range(500):
            f, part = random_element(rng, 5), random_partition(rng, 5)
            J = refine_for(f, part)
            assert refines(part, J) and refines(f.domain, J)
            images = image_partition(f, J)
            assert all(any(iv.contains(img) for iv in f.range) for img in images)
            DyadicPartition(images)  # raises unless the images tile the circle
            assert J == common_refinement(part, f.domain)


def test_criterion_7_representation_consistency():
    with criterion(7, "the Thompson action is a unitary representation", 60) as info:
        prng, nrng = random.Random(7), np.random.default_rng(7)
        worst = [0.0, 0.0, 0.0]

        def state():
            part = random_partition(prng, 3)
            v = nrng.standard_normal(2 ** len(part)) + 1j * nrng.standard_normal(2 ** len(part))
            return ScaleState(part, v / np.linalg.norm(v), 2)

        for trial in range(40):
            V = haar_isometry(2, trial)
            f, g = random_element(prng, 3), random_element(prng, 3)
            s, t = state(), state()
            lhs = inner_product(t, apply_thompson(compose(f, g), s, V), V)
            rhs = inner_product(t, apply_thompson(f, apply_thompson(g, s, V), V), V)
            worst[0] = max(worst[0], abs(lhs - rhs))
            before = inner_product(s, t, V)
            after = inner_product(apply_thompson(f, s, V), apply_thompson(f, t, V), V)
            worst[1] = max(worst[1], abs(before - after))
            base = common_refinement(s.partition, t.partition)
            finer = common_refinement(base, random_partition(prng, 3))
            alt = inner_product(refine_state(s, finer, V), refine_state(t, finer, V), V, scale=finer)
            worst[2] = max(worst[2], abs(inner_product(s, t, V, scale=base) - alt))
        info.append("homomorphism {:.1e}, unitarity {:.1e}, scale {:.1e}".format(*worst))
        assert worst[0] <= 1e-10 and worst[1] <= 1e-11 and worst[2] <= 1e-11


def test_criterion_8_weak_discontinuity():
    with criterion(8, "rotation matrix elements vanish while rotations converge", 10) as info:
        V = haar_isometry(2, 0)
        norm_x = operator_norm(x_operator(V))
        assert norm_x <= 1 - 1e-4
        e0 = np.array([1.0, 0.0])
        overlap = inner_product(ScaleState.coarse(e0), ScaleState.coarse(e0), V)
        assert abs(overlap - 1) <= 1e-12
        series = transfer_series(V, e0, e0, 30)
        bounds = hoelder_bounds(V, e0, e0, 30)
        assert abs(trace_norm(boundary_operator(e0, e0, V)) - 2) <= 1e-12
        assert all(abs(m) <= b * (1 + 1e-9) + 1e-300 for m, b in zip(series, bounds))
        k_star = onset_index(series)
        distances = [circle_distance_to_identity(rotation(k)) for k in range(1, 11)]
        assert all(b < a for a, b in zip(distances, distances[1:]))
        info.append(f"|x| = {norm_x:.4f}, k* = {k_star}, |M_1| = {abs(series[0]):.3e}")
        assert k_star is not None
        assert all(abs(m) < 1e-6 for m in series[k_star - 1:])
