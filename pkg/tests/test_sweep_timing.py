from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from beam_misalignment.ssb_schedule import all_grids, effective_start_symbols
from beam_misalignment.sweep_timing import (
    TAU_SS_ALLOWED,
    SweepRequest,
    sweep_period,
    sweep_time_closed_form,
    sweep_time_oracle,
    t_ss_window_symbols,
)
from beam_misalignment.tdd_frames import Pattern, TddPattern

GRIDS = all_grids()
F_A = effective_start_symbols("F", "a", "dl")
D_A = effective_start_symbols("D", "a", "dl")


def both(n, grid, tau=20):
    req = SweepRequest(n, grid, tau)
    return sweep_time_closed_form(req), sweep_time_oracle(req)


def test_full_case_f_burst_set():
    cf, orc = both(64, F_A)
    assert cf == orc
    # last SSB starts at symbol 443 and occupies 443..446
    assert cf.sweep_symbols == 447
    assert cf.t_sweep_exact == Fraction(447, 448)
    assert cf.tau_sweep_ms == 20 and cf.n_sweep_sets == 1


def test_case_f_one_ssb_past_the_set():
    cf, orc = both(65, F_A)
    assert cf == orc
    assert cf.t_sweep_exact == 20 + Fraction(6, 448)
    assert cf.t_sweep_ms == pytest.approx(20.0134, abs=1e-4)
    assert cf.tau_sweep_ms == 40 and cf.n_sweep_sets == 2


def test_case_d_single_ssb():
    cf, orc = both(1, D_A)
    assert cf == orc
    assert cf.sweep_symbols_r == 8
    assert cf.t_sweep_r_ms == pytest.approx(8 * 0.125 / 14)
    assert cf.t_sweep_r_ms == pytest.approx(0.0714, abs=1e-4)


def test_case_g_two_full_sets():
    grid = effective_start_symbols("G", "b", "dl")
    cf, orc = both(128, grid)
    assert cf == orc
    assert cf.t_sweep_c_ms == 20.0
    assert cf.residual_ssbs == 64 and cf.n_complete_sets == 1


@pytest.mark.parametrize("grid", GRIDS, ids=lambda g: g.label)
@pytest.mark.parametrize("k", [1, 2, 5])
def test_exact_multiple_leaves_full_last_set(grid, k):
    t = sweep_time_closed_form(SweepRequest(grid.l_eff * k, grid, 20))
    assert t.residual_ssbs == grid.l_eff
    assert t.n_complete_sets == k - 1


@pytest.mark.parametrize(
    "t,tau,expected",
    [(1.0, 20, (20, 1)), (20.0134, 20, (40, 2)), (5, 5, (5, 1)), (Fraction(447, 448), 20, (20, 1))],
)
def test_sweep_period(t, tau, expected):
    assert sweep_period(t, tau) == expected


def test_sweep_period_rejects_zero():
    with pytest.raises(ValueError):
        sweep_period(0, 20)


def test_request_validation():
    with pytest.raises(ValueError):
        SweepRequest(0, F_A, 20)
    with pytest.raises(ValueError):
        SweepRequest(10, F_A, 15)


@pytest.mark.parametrize("grid", GRIDS, ids=lambda g: g.label)
def test_equivalence_and_shape(grid):
    prev = None
    window = t_ss_window_symbols(grid)
    set_symbols = 20 * grid.numerology.symbols_per_ms
    for n in range(1, 3 * grid.l_eff + 2):
        cf, orc = both(n, grid)
        assert cf == orc, n
        assert cf.sweep_symbols_c + cf.sweep_symbols_r == cf.sweep_symbols
        assert 0 < cf.sweep_symbols_r < window
        assert cf.tau_sweep_ms % 20 == 0 and cf.tau_sweep_ms >= cf.t_sweep_ms
        assert cf.tau_sweep_ms == cf.n_sweep_sets * 20
        if prev is not None:
            if (n - 1) % grid.l_eff == 0:
                # crossing into a new burst set: wait out the rest of the period
                jump = set_symbols - prev.sweep_symbols_r + cf.sweep_symbols_r
                assert cf.sweep_symbols - prev.sweep_symbols == jump
            else:
                assert cf.sweep_symbols - prev.sweep_symbols >= 1
        prev = cf


@pytest.mark.parametrize("grid", all_grids(ssb_per_slot=1), ids=lambda g: g.label)
def test_equivalence_one_ssb_per_slot(grid):
    for n in range(1, 2 * grid.l_eff + 2):
        cf, orc = both(n, grid)
        assert cf == orc, n


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(GRIDS), st.integers(1, 2000), st.sampled_from(TAU_SS_ALLOWED))
def test_equivalence_any_tau(grid, n, tau):
    cf, orc = both(n, grid, tau)
    assert cf == orc


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(GRIDS), st.integers(1, 1000))
def test_shortest_periodicity_minimises_tau_sweep(grid, n):
    taus = {tau: sweep_time_closed_form(SweepRequest(n, grid, tau)).tau_sweep_ms for tau in TAU_SS_ALLOWED}
    assert taus[5] == min(taus.values())


def test_closed_form_rejects_partially_filled_slots():
    grid = effective_start_symbols("D", TddPattern(Pattern.B), "dl+s", symbol_level_special=True)
    with pytest.raises(ValueError):
        sweep_time_closed_form(SweepRequest(10, grid, 20))
    # the oracle still walks the list
    assert sweep_time_oracle(SweepRequest(51, grid, 20)).residual_ssbs == 51
