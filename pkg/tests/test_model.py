import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fluxcap.errors import InvalidParameterError, InvalidParityError
from fluxcap.model import (
    BareParams,
    ParityBlockParams,
    block_excitation_gaps,
    build_even_block,
    build_full_hamiltonian,
    build_odd_block,
    parity_energy,
)

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)


def params(e_m1=0.0, t_l1=0j, t_r1=0j, e_d=0.0, delta_e_d=0.0, parity=+1):
    return ParityBlockParams(
        e_m1=e_m1, t_l1=t_l1, t_r1=t_r1, e_d=e_d, delta_e_d=delta_e_d, parity=parity
    )


class TestEvenBlock:
    def test_all_couplings_off(self):
        assert np.array_equal(build_even_block(params()), np.zeros((2, 2)))

    def test_diagonal_case(self):
        h = build_even_block(params(e_m1=1.0, e_d=2.0))
        assert np.array_equal(h, np.diag([-1.0, 3.0]))

    def test_hand_substitution_negative_parity(self):
        # E_M1=1, t_L1=t_R1=1, E_D=0, P=-1: diagonal (+1, -1), off-diagonals cancel
        h = build_even_block(params(e_m1=1.0, t_l1=1.0, t_r1=1.0, parity=-1))
        assert np.allclose(h, [[1.0, 0.0], [0.0, -1.0]])

    def test_rejects_nonfinite(self):
        with pytest.raises(InvalidParameterError):
            params(e_m1=math.inf)


class TestOddBlock:
    def test_all_zero(self):
        assert np.array_equal(build_odd_block(params()), np.zeros((2, 2)))

    def test_diagonal_case(self):
        h = build_odd_block(params(e_m1=1.0))
        assert np.array_equal(h, np.diag([1.0, -1.0]))

    def test_equal_hoppings_cancel_off_diagonal(self):
        h = build_odd_block(params(t_l1=1.0, t_r1=1.0))
        assert h[0, 1] == 0 and h[1, 0] == 0


class TestFullHamiltonian:
    def test_zero_params(self):
        assert np.array_equal(build_full_hamiltonian(params()), np.zeros((4, 4)))

    def test_corner_blocks_vanish(self):
        h = build_full_hamiltonian(params(e_m1=2.0, t_l1=1 + 2j, t_r1=0.5j, e_d=3.0))
        assert np.array_equal(h[:2, 2:], np.zeros((2, 2)))
        assert np.array_equal(h[2:, :2], np.zeros((2, 2)))

    def test_spectrum_is_union_of_block_spectra(self):
        # oracle: dense eigensolve of the blocks
        p = params(e_m1=1.5, t_l1=0.7 - 0.2j, t_r1=1.1 + 0.4j, e_d=2.3, delta_e_d=0.1)
        expected = np.sort(
            np.concatenate(
                [np.linalg.eigvalsh(build_even_block(p)), np.linalg.eigvalsh(build_odd_block(p))]
            )
        )
        assert np.allclose(np.sort(np.linalg.eigvalsh(build_full_hamiltonian(p))), expected)


@given(finite, finite, finite, finite, finite, finite, st.sampled_from([-1, +1]))
def test_blocks_are_hermitian(e_m1, tl_re, tl_im, tr_re, tr_im, e_d, parity):
    p = params(
        e_m1=e_m1,
        t_l1=complex(tl_re, tl_im),
        t_r1=complex(tr_re, tr_im),
        e_d=e_d,
        parity=parity,
    )
    for h in (build_even_block(p), build_odd_block(p)):
        assert np.array_equal(h, h.conj().T)


def test_block_gap_matches_doubled_hybridization_closed_form():
    # 2x2 algebra: gap = sqrt((E_D + 2*Z*E_M1*P)^2 + 4|t_L1 + Z*P*t_R1|^2)
    p = params(e_m1=1.3, t_l1=0.8 + 0.1j, t_r1=0.4 - 0.6j, e_d=2.7, delta_e_d=0.05)
    even, odd = block_excitation_gaps(p)
    assert even == pytest.approx(parity_energy(p.e_d, 2 * p.e_m1, p.t_l1 + p.t_r1, +1).value)
    assert odd == pytest.approx(parity_energy(p.e_d, 2 * p.e_m1, p.t_l1 - p.t_r1, -1).value)


class TestParityEnergy:
    def test_zero(self):
        assert parity_energy(0.0, 0.0, 0j, +1).value == 0.0

    def test_detuning_minus_hybridization(self):
        assert parity_energy(3.0, 1.0, 0j, -1).value == pytest.approx(2.0)

    def test_invalid_parity(self):
        with pytest.raises(InvalidParityError):
            parity_energy(1.0, 1.0, 0j, 0)
        with pytest.raises(InvalidParityError):
            parity_energy(1.0, 1.0, 0j, 2)

    @given(finite, st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False))
    def test_parity_symmetric_at_zero_detuning(self, e_m, t):
        plus = parity_energy(0.0, e_m, t, +1).value
        minus = parity_energy(0.0, e_m, t, -1).value
        assert plus == minus

    @given(finite, finite, st.floats(min_value=0, max_value=1e5), st.floats(min_value=0, max_value=1e5))
    def test_nondecreasing_in_hopping_magnitude(self, e_d, e_m, t1, t2):
        lo, hi = sorted([t1, t2])
        assert parity_energy(e_d, e_m, lo, +1).value <= parity_energy(e_d, e_m, hi, +1).value

    @given(finite, finite, st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False))
    def test_nonnegative(self, e_d, e_m, t):
        assert parity_energy(e_d, e_m, t, -1).value >= 0.0


def test_bare_params_carry_three_mode_inputs():
    bare = BareParams(e_m=1.0, delta_1=0.5, delta_2=-0.5, t_m1=0.3 + 0.1j, t_12=0.2j)
    assert bare.e_m == 1.0
    with pytest.raises(InvalidParameterError):
        BareParams(e_m=math.nan, delta_1=0.0, delta_2=0.0, t_m1=0j, t_12=0j)
