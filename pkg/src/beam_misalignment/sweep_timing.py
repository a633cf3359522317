"""Beam-sweep duration over SS burst sets.

Two independent routes compute the same integer symbol counts:

* :func:`sweep_time_closed_form` follows the segment/gap indicator algebra
  (cumulative capacities, residual allocation per segment, last-segment
  indicator, slot-parity dependent start symbols).
* :func:`sweep_time_oracle` walks the effective start-symbol list directly.

Everything is counted in symbols at the grid's numerology; milliseconds are
derived on output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real

from .ssb_schedule import SYMBOLS_PER_SSB, T_SS_MS, SsbCase, SsbGrid
from .tdd_frames import SYMBOLS_PER_SLOT

TAU_SS_ALLOWED = (5, 10, 20, 40, 80, 160)


@dataclass(frozen=True)
class SweepRequest:
    n_ssb_req: int
    grid: SsbGrid
    tau_ss_ms: int = 20

    def __post_init__(self) -> None:
        if int(self.n_ssb_req) != self.n_ssb_req or self.n_ssb_req < 1:
            raise ValueError(f"n_ssb_req must be a positive integer, got {self.n_ssb_req}")
        if self.tau_ss_ms not in TAU_SS_ALLOWED:
            raise ValueError(f"tau_ss_ms must be one of {TAU_SS_ALLOWED}, got {self.tau_ss_ms}")

    @property
    def numerology(self):
        return self.grid.numerology


@dataclass(frozen=True)
class SweepTiming:
    """Sweep duration split into complete burst sets and the residual set.

    Only integer symbol counts are stored; equality between two timings is
    therefore exact.
    """

    n_ssb_req: int
    tau_ss_ms: int
    symbols_per_ms: int
    n_complete_sets: int
    residual_ssbs: int
    sweep_symbols_c: int
    sweep_symbols_r: int

    @property
    def sweep_symbols(self) -> int:
        return self.sweep_symbols_c + self.sweep_symbols_r

    @property
    def t_sweep_exact(self) -> Fraction:
        return Fraction(self.sweep_symbols, self.symbols_per_ms)

    @property
    def t_sweep_c_ms(self) -> float:
        return self.sweep_symbols_c / self.symbols_per_ms

    @property
    def t_sweep_r_ms(self) -> float:
        return self.sweep_symbols_r / self.symbols_per_ms

    @property
    def t_sweep_ms(self) -> float:
        return self.sweep_symbols / self.symbols_per_ms

    @property
    def n_sweep_sets(self) -> int:
        return sweep_period(self.t_sweep_exact, self.tau_ss_ms)[1]

    @property
    def tau_sweep_ms(self) -> int:
        return self.n_sweep_sets * self.tau_ss_ms


def sweep_period(t_sweep_ms: Real, tau_ss_ms: Real) -> tuple[Real, int]:
    """Round a sweep duration up to whole SS burst periods.

    Returns ``(tau_sweep_ms, n_sweep_sets)``.
    """
    if t_sweep_ms <= 0:
        raise ValueError("t_sweep_ms must be positive")
    ratio = Fraction(t_sweep_ms) / Fraction(tau_ss_ms)
    n = math.ceil(ratio)
    return n * tau_ss_ms, n


def _start_first(case: SsbCase, slot: int) -> int:
    if case is SsbCase.D:
        return 4 if slot % 2 == 0 else 2
    return 2


def _start_last(case: SsbCase, slot: int, ssb_per_slot: int) -> int:
    if ssb_per_slot == 1:
        return _start_first(case, slot)
    if case is SsbCase.D:
        return 8 if slot % 2 == 0 else 6
    return 9


def sweep_time_closed_form(req: SweepRequest) -> SweepTiming:
    grid = req.grid
    if not grid.uniform_slots:
        raise ValueError(f"grid {grid.label} has partially filled SSB slots; closed form does not apply")
    if grid.segments[0].first_slot != 0:
        raise ValueError(f"grid {grid.label} does not start at slot 0")

    n_req = req.n_ssb_req
    k = grid.ssb_per_slot
    n_ss = len(grid.segments)
    cap = [0] + [seg.capacity for seg in grid.segments]
    gap = [0] + [seg.gap_slots for seg in grid.segments]
    cum = [0] * (n_ss + 1)
    for n in range(1, n_ss + 1):
        cum[n] = cum[n - 1] + cap[n]
    total = cum[n_ss]

    n_c = math.ceil(Fraction(n_req, total)) - 1
    n_r = n_req - n_c * total
    r = [0] + [min(cap[n], max(0, n_r - cum[n - 1])) for n in range(1, n_ss + 1)]

    def i1(n: int) -> int:
        if n > n_ss:
            return 0
        return 1 if r[n] > 0 else 0

    def i2(n: int) -> int:
        return i1(n) - i1(n + 1)

    symbols_r = 0
    for n in range(1, n_ss + 1):
        if not i1(n):
            continue
        last = i2(n)
        lam = (1 - last) * (r[n] // k * SYMBOLS_PER_SLOT + gap[n] * SYMBOLS_PER_SLOT)
        tail = 0
        if last:
            last_slot = math.ceil(Fraction(r[n], k) - 1) + sum(
                gap[n - j] + Fraction(r[n - j], k) for j in range(1, n + 1)
            )
            last_slot = int(last_slot)
            if r[n] % k == 0:
                n_minus = SYMBOLS_PER_SLOT - (_start_last(grid.case, last_slot, k) + SYMBOLS_PER_SSB)
                tail = r[n] // k * SYMBOLS_PER_SLOT - n_minus
            else:
                n_plus = _start_first(grid.case, last_slot) + SYMBOLS_PER_SSB
                tail = r[n] // k * SYMBOLS_PER_SLOT + n_plus
        symbols_r += lam + last * tail

    spm = grid.numerology.symbols_per_ms
    return SweepTiming(
        n_ssb_req=n_req,
        tau_ss_ms=req.tau_ss_ms,
        symbols_per_ms=spm,
        n_complete_sets=n_c,
        residual_ssbs=n_r,
        sweep_symbols_c=n_c * req.tau_ss_ms * spm,
        sweep_symbols_r=symbols_r,
    )


def sweep_time_oracle(req: SweepRequest) -> SweepTiming:
    """Place SSB ``i`` at position ``(i-1) mod L`` of burst set ``(i-1) // L``."""
    starts = req.grid.start_symbols
    per_set = len(starts)
    n_req = req.n_ssb_req
    spm = 14 * 2**req.grid.case.numerology.mu

    last_set, last_pos = divmod(n_req - 1, per_set)
    return SweepTiming(
        n_ssb_req=n_req,
        tau_ss_ms=req.tau_ss_ms,
        symbols_per_ms=spm,
        n_complete_sets=last_set,
        residual_ssbs=last_pos + 1,
        sweep_symbols_c=last_set * req.tau_ss_ms * spm,
        sweep_symbols_r=starts[last_pos] + 4,
    )


def sweep_timing(grid: SsbGrid, n_ssb_req: int, tau_ss_ms: int = 20) -> SweepTiming:
    """Closed-form timing for ``n_ssb_req`` SSBs on ``grid``."""
    return sweep_time_closed_form(SweepRequest(n_ssb_req, grid, tau_ss_ms))


def t_ss_window_symbols(grid: SsbGrid) -> int:
    return T_SS_MS * grid.numerology.symbols_per_ms
