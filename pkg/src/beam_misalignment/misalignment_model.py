"""Misalignment rates, durations, time fractions and average beamforming gain.

Times are in milliseconds unless a name says otherwise; rates are per second.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

from .ssb_schedule import SYMBOLS_PER_SSB, T_SS_MS, SlotFilter, SsbCase, SsbGrid, effective_start_symbols
from .sweep_timing import SweepTiming, sweep_timing
from .tdd_frames import Pattern, TddPattern, dl_symbols_in_window

DEFAULT_ISD_M = 100.0
ISD_RELATIONS = ("linear", "squared")


def density_from_isd(d_isd_m: float, relation: str = "linear") -> float:
    """BS density (per m^2) for an inter-site distance.

    ``relation="linear"`` evaluates ``4 / (pi * d)`` with ``d`` in metres, the
    form behind the reference fraction and gain curves.
    ``relation="squared"`` is the dimensionally consistent ``4 / (pi * d**2)``.
    """
    if d_isd_m <= 0:
        raise ValueError("inter-site distance must be positive")
    if relation == "linear":
        return 4.0 / (math.pi * d_isd_m)
    if relation == "squared":
        return 4.0 / (math.pi * d_isd_m**2)
    raise ValueError(f"unknown ISD relation {relation!r}; expected one of {ISD_RELATIONS}")


def misalignment_rate(n_beam: int, lam: float, v: float) -> float:
    """Poisson misalignment rate ``N * sqrt(lambda) * v / pi`` in events/s."""
    return n_beam * math.sqrt(lam) * v / math.pi


def misalignment_prob(beta_per_s: float, tau_s: float) -> float:
    """Probability of at least one misalignment event within ``tau_s`` seconds."""
    if tau_s < 0:
        raise ValueError("observation period must be non-negative")
    return -math.expm1(-beta_per_s * tau_s)


def expected_t_next(tau_sweep_ms: float) -> float:
    if tau_sweep_ms <= 0:
        raise ValueError("tau_sweep_ms must be positive")
    return tau_sweep_ms / 2


def expected_t_last(n_sweep_sets: int, t_ss_ms: float, t_sweep_r_ms: float) -> float:
    if n_sweep_sets < 1:
        raise ValueError("n_sweep_sets must be >= 1")
    return (1 - 1 / n_sweep_sets) * t_ss_ms + t_sweep_r_ms / n_sweep_sets


def expected_t_m(timing: SweepTiming, t_proc_ms: float, t_ss_ms: float = T_SS_MS) -> float:
    """Mean misalignment duration: wait for next sweep, finish it, process."""
    return (
        expected_t_next(timing.tau_sweep_ms)
        + expected_t_last(timing.n_sweep_sets, t_ss_ms, timing.t_sweep_r_ms)
        + t_proc_ms
    )


def overlap_duration(e_t_bs_ms: float, e_t_ue_ms: float) -> float:
    """Mean length of an overlapping BS+UE misalignment.

    Uses ``E[T_bs] + E[T_ue^2] / (2 E[T_bs])`` with the UE duration taken as
    uniform on ``[0, 2 E[T_ue]]`` (second moment ``4/3 E[T_ue]^2``), which
    gives ``5/3 E[T]`` for equal means.
    """
    if e_t_bs_ms <= 0 or e_t_ue_ms < 0:
        raise ValueError("durations must be positive")
    second_moment = 4.0 / 3.0 * e_t_ue_ms**2
    return e_t_bs_ms + second_moment / (2 * e_t_bs_ms)


class GammaValue(NamedTuple):
    value: float
    valid: bool


def gamma_fraction(beta_per_s: float, e_t_m_ms: float) -> GammaValue:
    """Little's-law misalignment fraction; flagged invalid above 1, never clamped."""
    if beta_per_s < 0 or e_t_m_ms < 0:
        raise ValueError("rate and duration must be non-negative")
    g = beta_per_s * e_t_m_ms / 1000.0
    return GammaValue(g, g <= 1.0)


def gamma_total(gamma_bs: float, gamma_ue: float) -> float:
    for g in (gamma_bs, gamma_ue):
        if not 0.0 <= g <= 1.0:
            raise ValueError(f"misalignment fraction {g} outside [0, 1]")
    return gamma_bs + gamma_ue - gamma_bs * gamma_ue


class Weights(NamedTuple):
    p_b: float
    p_u: float
    p_bu: float


NO_MISALIGNMENT = Weights(0.0, 0.0, 0.0)


def weights(gamma_bs: float, gamma_ue: float) -> Weights:
    """Share of misaligned time that is BS-only, UE-only or joint.

    Returns :data:`NO_MISALIGNMENT` (all zeros) when neither side misaligns.
    """
    total = gamma_total(gamma_bs, gamma_ue)
    if total == 0.0:
        return NO_MISALIGNMENT
    return Weights(
        gamma_bs * (1 - gamma_ue) / total,
        gamma_ue * (1 - gamma_bs) / total,
        gamma_bs * gamma_ue / total,
    )


def overall_duration(w: Weights, e_t_bs_ms: float, e_t_ue_ms: float, e_t_bu_ms: float) -> float:
    return w.p_b * e_t_bs_ms + w.p_u * e_t_ue_ms + w.p_bu * e_t_bu_ms


def side_gain(gamma: float, n_beam: int) -> float:
    """Time-averaged sectored antenna gain, main lobe ``N`` and side lobe ``1/N``."""
    return (1 - gamma) * n_beam + gamma / n_beam


@dataclass(frozen=True)
class Scenario:
    """Deployment, mobility and beam-management parameters.

    Give at most one of ``d_isd_m`` and ``lambda_bs_per_m2``; with neither,
    an ISD of 100 m is used.
    """

    d_isd_m: float | None = None
    lambda_bs_per_m2: float | None = None
    isd_relation: str = "linear"
    v_mps: float = 2.0
    n_beam_bs: int = 16
    n_beam_ue: int = 4
    tau_ss_ms: int = 20
    t_proc_ms: float = 1.0
    t_ss_ms: float = T_SS_MS
    case: SsbCase = SsbCase.D
    pattern: TddPattern = field(default_factory=lambda: TddPattern(Pattern.A))
    slot_filter: SlotFilter = SlotFilter.DL_ONLY
    ssb_per_slot: int = 2

    def __post_init__(self) -> None:
        if self.d_isd_m is not None and self.lambda_bs_per_m2 is not None:
            raise ValueError("give either d_isd_m or lambda_bs_per_m2, not both")
        if self.isd_relation not in ISD_RELATIONS:
            raise ValueError(f"isd_relation must be one of {ISD_RELATIONS}")
        if self.v_mps < 0 or self.t_proc_ms < 0:
            raise ValueError("speed and processing time must be non-negative")
        if self.n_beam_bs < 1 or self.n_beam_ue < 1:
            raise ValueError("beam counts must be >= 1")
        object.__setattr__(self, "case", SsbCase(self.case))
        object.__setattr__(self, "slot_filter", SlotFilter(self.slot_filter))
        if not isinstance(self.pattern, TddPattern):
            object.__setattr__(self, "pattern", TddPattern(Pattern(self.pattern)))

    @property
    def density(self) -> float:
        if self.lambda_bs_per_m2 is not None:
            return self.lambda_bs_per_m2
        return density_from_isd(self.d_isd_m or DEFAULT_ISD_M, self.isd_relation)

    @property
    def n_ssb_req(self) -> int:
        return self.n_beam_bs * self.n_beam_ue

    @property
    def beta_bs(self) -> float:
        return misalignment_rate(self.n_beam_bs, self.density, self.v_mps)

    @property
    def beta_ue(self) -> float:
        return misalignment_rate(self.n_beam_ue, self.density, self.v_mps)

    def grid(self) -> SsbGrid:
        return _grid(self.case, self.pattern, self.slot_filter, self.ssb_per_slot)

    def timing(self) -> SweepTiming:
        return sweep_timing(self.grid(), self.n_ssb_req, self.tau_ss_ms)


_GRID_CACHE: dict = {}


def _grid(case, pattern, slot_filter, ssb_per_slot) -> SsbGrid:
    key = (case, pattern, slot_filter, ssb_per_slot)
    if key not in _GRID_CACHE:
        _GRID_CACHE[key] = effective_start_symbols(case, pattern, slot_filter, ssb_per_slot)
    return _GRID_CACHE[key]


def ssb_overhead(scenario: Scenario, timing: SweepTiming | None = None) -> float:
    """SSB symbols per sweep over the DL symbols available in one sweep period.

    Special-slot DL symbols count towards the denominator only when the slot
    filter admits the special slot.
    """
    timing = timing or scenario.timing()
    num = scenario.case.numerology
    n_slots = timing.tau_sweep_ms * num.slots_per_ms
    include_special = scenario.slot_filter is SlotFilter.DL_AND_SPECIAL
    dl_symbols = dl_symbols_in_window(scenario.pattern, num, n_slots, include_special)
    return timing.n_ssb_req * SYMBOLS_PER_SSB / dl_symbols


@dataclass(frozen=True)
class SideMetrics:
    side: str
    beta_per_s: float
    e_t_m_ms: float
    gamma: float

    @property
    def valid(self) -> bool:
        return self.gamma <= 1.0


@dataclass(frozen=True)
class MisalignmentReport:
    scenario: Scenario
    timing: SweepTiming
    bs: SideMetrics
    ue: SideMetrics
    e_t_bu_ms: float
    gamma_total: float
    p_b: float
    p_u: float
    p_bu: float
    big_gamma_ms: float
    eta_oh: float
    e_gain: float

    @property
    def valid(self) -> bool:
        return self.bs.valid and self.ue.valid


def average_gain(scenario: Scenario) -> MisalignmentReport:
    """Run the full analytic chain for one scenario.

    Per-side fractions above 1 are reported as computed and flag the report
    invalid; the total fraction, weights and gain use them saturated at 1.
    """
    timing = scenario.timing()
    e_t_m = expected_t_m(timing, scenario.t_proc_ms, scenario.t_ss_ms)
    beta_bs, beta_ue = scenario.beta_bs, scenario.beta_ue
    g_bs = gamma_fraction(beta_bs, e_t_m).value
    g_ue = gamma_fraction(beta_ue, e_t_m).value
    s_bs, s_ue = min(g_bs, 1.0), min(g_ue, 1.0)

    e_bu = overlap_duration(e_t_m, e_t_m)
    w = weights(s_bs, s_ue)
    big_gamma = overall_duration(w, e_t_m, e_t_m, e_bu)
    eta = ssb_overhead(scenario, timing)
    gain = (1 - eta) * side_gain(s_bs, scenario.n_beam_bs) * side_gain(s_ue, scenario.n_beam_ue)

    return MisalignmentReport(
        scenario=scenario,
        timing=timing,
        bs=SideMetrics("BS", beta_bs, e_t_m, g_bs),
        ue=SideMetrics("UE", beta_ue, e_t_m, g_ue),
        e_t_bu_ms=e_bu,
        gamma_total=gamma_total(s_bs, s_ue),
        p_b=w.p_b,
        p_u=w.p_u,
        p_bu=w.p_bu,
        big_gamma_ms=big_gamma,
        eta_oh=eta,
        e_gain=gain,
    )
