"""Exponential and momentum-norm preparation states."""

import math

import numpy as np
import pytest

from pwqpe.crystal import unit_cell_from_bohr
from pwqpe.hamiltonian import CapExceededError
from pwqpe.statesim import (
    amplified_success,
    exponential_state,
    momentum_state,
    momentum_state_success_amplitude,
    momentum_success_probability,
)


@pytest.fixture(scope="module")
def ortho_cell():
    return unit_cell_from_bohr(2.0, 2.5, 3.0)


class TestExponentialState:
    def test_np2_single_amplitude(self):
        state, success = exponential_state(2)
        assert success == 0.5
        assert np.allclose(state.amplitudes, [math.sqrt(0.5)])

    def test_np3_amplitudes(self):
        state, success = exponential_state(3)
        assert success == 0.75
        assert np.allclose(state.amplitudes, [0.5, math.sqrt(2.0) / 2.0])
        assert state.layout.dims == (2,)

    @pytest.mark.parametrize("n_p", [2, 3, 4, 6, 8])
    def test_norm_squared_equals_success(self, n_p):
        state, success = exponential_state(n_p)
        assert state.norm**2 == pytest.approx(success, rel=1e-14)
        assert state.success_prob == success
        assert success == (2 ** (n_p - 1) - 1) / 2 ** (n_p - 1)

    def test_consecutive_ratio_is_sqrt_two(self):
        state, _ = exponential_state(6)
        ratios = state.amplitudes[1:] / state.amplitudes[:-1]
        assert np.allclose(ratios, math.sqrt(2.0))

    @pytest.mark.parametrize("n_p", [0, 1])
    def test_too_small(self, n_p):
        with pytest.raises(ValueError):
            exponential_state(n_p)


class TestAmplifiedSuccess:
    def test_zero_rounds_identity(self):
        for p in np.linspace(0.01, 1.0, 25):
            assert amplified_success(float(p), 0) == pytest.approx(float(p), rel=1e-13)

    def test_quarter_reaches_certainty(self):
        # sin(3 asin(1/2))^2 = sin(pi/2)^2 = 1.
        assert amplified_success(0.25, 1) == pytest.approx(1.0, abs=1e-15)

    def test_single_round_anchor(self):
        value = amplified_success(0.2398, 1)
        assert value == pytest.approx(0.9987345406720001, rel=1e-12)
        assert value == pytest.approx(0.9987, abs=1e-3)

    def test_certain_input_stays_certain(self):
        for rounds in range(4):
            assert amplified_success(1.0, rounds) == pytest.approx(1.0, abs=1e-12)

    def test_invalid_probability(self):
        with pytest.raises(ValueError):
            amplified_success(0.0, 1)
        with pytest.raises(ValueError):
            amplified_success(1.2, 1)

    def test_negative_rounds(self):
        with pytest.raises(ValueError):
            amplified_success(0.5, -1)


class TestSuccessAmplitude:
    def test_unit_transfer_anchor(self):
        # mu = 2, count = M, amplitude = sqrt(M / (M * 16 * 16)) = 1/16.
        assert momentum_state_success_amplitude(2, 64, (1, 0, 0)) == pytest.approx(
            0.0625, abs=1e-15
        )

    def test_sign_invariance(self):
        for nu in [(1, 2, 0), (3, 0, 1), (2, 2, 2)]:
            base = momentum_state_success_amplitude(3, 256, nu)
            flipped = momentum_state_success_amplitude(3, 256, tuple(-x for x in nu))
            assert base == flipped

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            momentum_state_success_amplitude(2, 64, (0, 0, 0))

    def test_out_of_box_rejected(self):
        with pytest.raises(ValueError):
            momentum_state_success_amplitude(2, 64, (4, 0, 0))

    def test_ceiling_proportionality_bound(self):
        # amp / ideal - 1 is pinned in [0, ||nu||^2 / (2 M 4^(mu-2))].
        n_p, m_param = 3, 1024
        side = 2**n_p - 1
        for x in range(-side, side + 1):
            for y in range(-side, side + 1):
                for z in range(-side, side + 1):
                    if x == 0 and y == 0 and z == 0:
                        continue
                    norm_sq = x * x + y * y + z * z
                    mu = max(abs(x), abs(y), abs(z)).bit_length() + 1
                    amp = momentum_state_success_amplitude(n_p, m_param, (x, y, z))
                    ideal = 1.0 / (4.0 * math.sqrt(norm_sq * 2 ** (n_p + 2)))
                    excess = amp / ideal - 1.0
                    assert excess >= -1e-12
                    assert excess <= norm_sq / (2.0 * m_param * 4 ** (mu - 2)) + 1e-12


class TestSuccessProbability:
    def test_np2_m64_frozen(self):
        assert momentum_success_probability(2, 64) == pytest.approx(
            0.178985595703125, rel=1e-13
        )

    def test_np3_m64_frozen(self):
        assert momentum_success_probability(3, 64) == pytest.approx(
            0.21180343627929688, rel=1e-13
        )

    def test_large_grid_value(self):
        p_nu = momentum_success_probability(8, 2**12)
        assert p_nu == pytest.approx(0.23890849355484534, rel=1e-12)
        assert abs(p_nu - 0.2398) < 0.005

    def test_cubic_cell_matches_no_cell(self):
        cube = unit_cell_from_bohr(5.0, 5.0, 5.0)
        assert momentum_success_probability(3, 128, cube) == pytest.approx(
            momentum_success_probability(3, 128), rel=1e-13
        )

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            momentum_success_probability(1, 64)
        with pytest.raises(ValueError):
            momentum_success_probability(3, 48)
        with pytest.raises(ValueError):
            momentum_success_probability(3, 2)


class TestMomentumState:
    @pytest.mark.parametrize("n_p", [2, 3])
    @pytest.mark.parametrize("use_cell", [False, True])
    def test_three_route_consistency(self, n_p, use_cell, ortho_cell):
        cell = ortho_cell if use_cell else None
        state, p_state = momentum_state(n_p, 64, cell)
        # The mu register has no index for the never-prepared box, so the
        # represented mass stops short of 1 by exactly 2^(-n_p).
        assert state.norm**2 == pytest.approx(1.0 - 2.0**-n_p, abs=1e-12)
        assert state.success_prob == p_state
        assert p_state == pytest.approx(
            momentum_success_probability(n_p, 64, cell), rel=1e-12
        )
        side = 2**n_p - 1
        total = 0.0
        for x in range(-side, side + 1):
            for y in range(-side, side + 1):
                for z in range(-side, side + 1):
                    if x == 0 and y == 0 and z == 0:
                        continue
                    total += (
                        momentum_state_success_amplitude(n_p, 64, (x, y, z), cell) ** 2
                    )
        assert total == pytest.approx(p_state, rel=1e-12)

    def test_register_layout(self):
        state, _ = momentum_state(2, 64)
        assert state.layout.names == ("mu", "nu_x", "nu_y", "nu_z", "m")
        assert state.layout.dims == (2, 8, 8, 8, 64)

    def test_mu_marginal_matches_box_masses(self):
        state, _ = momentum_state(3, 64)
        # Box index i encodes mu = i + 2, whose box holds mass 2^(mu-n_p-2).
        for i in range(3):
            expected = 2.0 ** ((i + 2) - 3 - 2)
            assert state.register_probability("mu", i) == pytest.approx(
                expected, abs=1e-12
            )

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            momentum_state(1, 64)
        with pytest.raises(ValueError):
            momentum_state(2, 96)

    def test_cap(self):
        with pytest.raises(CapExceededError):
            momentum_state(4, 4096)
        with pytest.raises(CapExceededError):
            momentum_state(2, 64, cap=100)
