import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_state
from gaussnc.covariance import (
    purity_check,
    squeezed_thermal,
    thermal,
    to_quadrature,
    twin_beam,
    validate_physical,
    product,
)
from gaussnc.errors import DimensionMismatchError, MalformedStateError, ParameterRangeError
from gaussnc.invariants import entanglement_invariant, gni_two_mode, simon_invariants
from gaussnc.passive import (
    PassiveUnitary,
    apply,
    apply_quadrature,
    beam_splitter,
    compose,
    haar_random,
    identity,
    network_from_json,
    orthosymplectic,
    phase_shifter,
)


def unitarity_residual(u):
    return np.max(np.abs(u.U.conj().T @ u.U - np.eye(u.n)))


class TestBeamSplitter:
    def test_full_transmission_is_identity(self):
        np.testing.assert_array_equal(beam_splitter(2, 0, 1, 1.0).U, np.eye(2))

    def test_balanced_kills_twin_beam_entanglement(self):
        for B_p in (0.5, 1.0, 4.0):
            out = apply(beam_splitter(2, 0, 1, 0.5), twin_beam(B_p))
            assert entanglement_invariant(out) == pytest.approx(0, abs=1e-12)

    def test_unitary_random(self, rng):
        for _ in range(100):
            u = beam_splitter(3, 0, 2, rng.uniform(0, 1), rng.uniform(-np.pi, np.pi))
            assert unitarity_residual(u) < 1e-12

    def test_embedding(self):
        u = beam_splitter(3, 2, 0, 0.25, 0.0)
        np.testing.assert_allclose(u.U, [[0.5, 0, -math.sqrt(0.75)],
                                         [0, 1, 0],
                                         [math.sqrt(0.75), 0, 0.5]])

    @pytest.mark.parametrize("T", [-0.1, 1.1])
    def test_bad_transmissivity(self, T):
        with pytest.raises(ParameterRangeError):
            beam_splitter(2, 0, 1, T)

    def test_same_mode(self):
        with pytest.raises(ValueError):
            beam_splitter(2, 1, 1, 0.5)


class TestPhaseShifter:
    def test_zero_is_identity(self):
        np.testing.assert_array_equal(phase_shifter(2, 1, 0.0).U, np.eye(2))

    def test_pi_leaves_C_unchanged(self):
        s = squeezed_thermal(0.3, 0.7, 0.4)
        out = apply(phase_shifter(1, 0, math.pi), s)
        assert out.C[0] == pytest.approx(s.C[0], abs=1e-14)

    def test_rotates_C_by_twice_theta(self):
        s = squeezed_thermal(0.3, 0.7, 0.4)
        out = apply(phase_shifter(1, 0, 0.3), s)
        assert out.C[0] == pytest.approx(s.C[0] * np.exp(0.6j), abs=1e-14)

    def test_lni_invariant(self, rng):
        s = random_state(rng, 2)
        for theta in rng.uniform(0, 2 * np.pi, size=10):
            out = apply(phase_shifter(2, 0, theta), s)
            assert gni_two_mode(out).LNI1 == pytest.approx(gni_two_mode(s).LNI1, abs=1e-10)


class TestCompose:
    def test_identity(self):
        x = beam_splitter(2, 0, 1, 0.3, 0.2)
        np.testing.assert_allclose(compose(x, identity(2)).U, x.U)

    def test_inverse(self):
        x = beam_splitter(2, 0, 1, 0.3, 0.2)
        np.testing.assert_allclose(compose(x, x.inverse()).U, np.eye(2), atol=1e-15)

    def test_associative(self, rng):
        for _ in range(20):
            a, b, c = (haar_random(3, rng) for _ in range(3))
            np.testing.assert_allclose(compose(compose(a, b), c).U, compose(a, compose(b, c)).U,
                                       atol=1e-12)

    def test_order_b_first(self, rng):
        a, b = haar_random(2, rng), haar_random(2, rng)
        s = random_state(rng, 2)
        assert apply(compose(a, b), s).allclose(apply(a, apply(b, s)), atol=1e-12)
        assert (a @ b @ s).allclose(apply(a, apply(b, s)), atol=1e-12)

    def test_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            compose(identity(2), identity(3))


class TestHaar:
    def test_unitary(self):
        for seed in range(50):
            assert unitarity_residual(haar_random(3, seed)) < 1e-10

    def test_deterministic(self):
        assert haar_random(3, 1234).U.tobytes() == haar_random(3, 1234).U.tobytes()
        assert haar_random(3, 1234).U.tobytes() != haar_random(3, 1235).U.tobytes()

    @pytest.mark.parametrize("n", [2, 3])
    def test_first_moment(self, n):
        rng = np.random.default_rng(7)
        k = 10_000
        x = np.array([abs(haar_random(n, rng).U[0, 0]) ** 2 for _ in range(k)])
        # |U11|^2 ~ Beta(1, n-1): variance (n-1) / (n^2 (n+1))
        sigma = math.sqrt((n - 1) / (n * n * (n + 1)) / k)
        assert abs(x.mean() - 1 / n) < 3 * sigma

    def test_phase_fix_makes_distribution_haar(self):
        # without the phase correction the diagonal of Q is biased towards the
        # positive real axis; with it E[U11] vanishes
        rng = np.random.default_rng(11)
        z = np.array([haar_random(2, rng).U[0, 0] for _ in range(10_000)])
        assert abs(z.mean()) < 4 * math.sqrt(0.5 / 10_000)


class TestApply:
    def test_twin_beam_at_bs(self):
        for B_p, T in [(1.0, 0.3), (2.5, 0.8), (0.4, 0.5)]:
            out = apply(beam_splitter(2, 0, 1, T), twin_beam(B_p))
            d = math.sqrt(B_p * (B_p + 1))
            assert out.C[0] == pytest.approx(2 * math.sqrt(T * (1 - T)) * d)
            assert out.D(0, 1) == pytest.approx((2 * T - 1) * d)
            assert out.Dbar(0, 1) == pytest.approx(0, abs=1e-15)
            np.testing.assert_allclose(out.B, [B_p, B_p])

    def test_identity(self, rng):
        s = random_state(rng, 3)
        assert apply(identity(3), s).allclose(s, atol=1e-15)

    def test_purity_preserved(self, rng):
        s = random_state(rng, 2, pure=True)
        for _ in range(10):
            assert purity_check(apply(haar_random(2, rng), s))

    def test_photon_number_and_physicality(self, rng):
        for _ in range(100):
            n = int(rng.integers(2, 4))
            s = random_state(rng, n)
            out = apply(haar_random(n, rng), s)
            assert out.B.sum() == pytest.approx(s.B.sum(), rel=1e-10)
            assert validate_physical(out).physical

    def test_global_simon_invariants(self, rng):
        for _ in range(100):
            s = random_state(rng, 2)
            si, so = simon_invariants(s), simon_invariants(apply(haar_random(2, rng), s))
            assert so["IS4"] == pytest.approx(si["IS4"], rel=1e-9)
            assert so["DeltaS"] == pytest.approx(si["DeltaS"], rel=1e-9)

    def test_matches_orthosymplectic_conjugation(self, rng):
        for _ in range(50):
            n = int(rng.integers(1, 4))
            s, u = random_state(rng, n), haar_random(n, rng)
            S = orthosymplectic(u)
            np.testing.assert_allclose(S @ S.T, np.eye(2 * n), atol=1e-12)
            om = np.kron(np.eye(n), [[0, 1], [-1, 0]])
            np.testing.assert_allclose(S @ om @ S.T, om, atol=1e-12)
            np.testing.assert_allclose(to_quadrature(apply(u, s)).sigma,
                                       apply_quadrature(u, to_quadrature(s)).sigma, atol=1e-10)

    def test_phase_independence(self):
        ref = gni_two_mode(apply(beam_splitter(2, 0, 1, 0.3), twin_beam(1.2)))
        for phi in np.linspace(-np.pi, np.pi, 9):
            r = gni_two_mode(apply(beam_splitter(2, 0, 1, 0.3, phi), twin_beam(1.2)))
            for key in ("LNI1", "LNI2", "EI", "GNI"):
                assert getattr(r, key) == pytest.approx(getattr(ref, key), abs=1e-10)

    def test_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            apply(identity(3), twin_beam(1))


def test_rejects_non_unitary():
    with pytest.raises(ValueError):
        PassiveUnitary([[1.0, 0.1], [0.0, 1.0]])


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2 ** 63 - 1), B=st.floats(0, 4), r=st.floats(-1.2, 1.2),
       phi=st.floats(0, 6.3))
def test_apply_preserves_trace_and_physicality(seed, B, r, phi):
    s = product(squeezed_thermal(B, r, phi), thermal(B / 2), squeezed_thermal(0, r / 2, 0))
    out = apply(haar_random(3, seed), s)
    assert out.B.sum() == pytest.approx(s.B.sum(), rel=1e-10, abs=1e-12)
    assert validate_physical(out).physical


class TestNetworkJson:
    def test_example_network(self):
        u = network_from_json([{"bs": {"modes": [1, 2], "T": 0.7, "phase": 0}},
                               {"ps": {"mode": 2, "theta": 1.57}}], 2)
        expected = compose(phase_shifter(2, 1, 1.57), beam_splitter(2, 0, 1, 0.7))
        np.testing.assert_allclose(u.U, expected.U)

    def test_elements_wrapper_and_unitary(self):
        u = network_from_json({"elements": [{"unitary": {"U": [[0, 1], [1, 0]]}}]}, 2)
        np.testing.assert_allclose(u.U, [[0, 1], [1, 0]])

    def test_empty_is_identity(self):
        np.testing.assert_array_equal(network_from_json([], 3).U, np.eye(3))

    @pytest.mark.parametrize("obj", [
        {"bs": 1}, [{"xx": {}}], [{"bs": {"modes": [1], "T": 0.5}}],
        [{"bs": {"modes": [1, 2], "T": 1.5}}], [{"ps": {"mode": 1}}],
        [{"unitary": {"U": [[1, 1], [0, 1]]}}],
    ])
    def test_malformed(self, obj):
        with pytest.raises(MalformedStateError):
            network_from_json(obj, 2)

    def test_mode_out_of_range(self):
        with pytest.raises(DimensionMismatchError):
            network_from_json([{"bs": {"modes": [1, 3], "T": 0.5}}], 2)
