"""Monte-Carlo cross-checks of the analytic misalignment model.

Each replication owns one ``SeedSequence`` child, split into four streams
(BS arrivals, UE arrivals, BS durations, UE durations), so results depend
only on ``(seed, replications)`` and never on evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .misalignment_model import Scenario, average_gain, expected_t_m, ssb_overhead
from .ssb_schedule import T_SS_MS
from .sweep_timing import SweepTiming


@dataclass(frozen=True)
class SimConfig:
    scenario: Scenario
    horizon_s: float = 2000.0
    seed: int = 42
    replications: int = 10

    def __post_init__(self) -> None:
        if self.horizon_s <= 0:
            raise ValueError("horizon_s must be positive")
        if self.replications < 1:
            raise ValueError("replications must be >= 1")


@dataclass(frozen=True)
class SimEstimate:
    metric: str
    mean: float
    standard_error: float
    n_samples: int
    seed: int


def horizon_for_events(scenario: Scenario, min_events: float = 1e4, replications: int = 1) -> float:
    """Per-replication horizon (s) so that all replications together expect
    ``min_events`` misalignment arrivals over both sides."""
    rate = scenario.beta_bs + scenario.beta_ue
    if rate <= 0:
        return 1.0
    return min_events / (rate * replications)


def sample_t_m(
    timing: SweepTiming,
    t_proc_ms: float,
    rng: np.random.Generator,
    size: int | None = None,
    t_ss_ms: float = T_SS_MS,
) -> np.ndarray | float:
    """Draw misalignment durations (ms) from the sweep timing model."""
    n = timing.n_sweep_sets
    t_next = rng.uniform(0.0, timing.tau_sweep_ms, size)
    full_set = rng.random(size) < 1 - 1 / n
    t_last = np.where(full_set, t_ss_ms, timing.t_sweep_r_ms)
    out = t_next + t_last + t_proc_ms
    return float(out) if size is None else out


def _estimate(metric: str, values: list[float], seed: int) -> SimEstimate:
    arr = np.asarray(values, dtype=float)
    se = float(arr.std(ddof=1) / math.sqrt(arr.size)) if arr.size > 1 else math.nan
    return SimEstimate(metric, float(arr.mean()), se, int(arr.size), seed)


def _side_intervals(
    rate_per_s: float,
    horizon_s: float,
    arrival_rng: np.random.Generator,
    duration_rng: np.random.Generator,
    timing: SweepTiming,
    t_proc_ms: float,
    t_ss_ms: float,
) -> list[tuple[float, float]]:
    """Misalignment intervals (s) of one side; arrivals while misaligned are absorbed."""
    if rate_per_s <= 0:
        return []
    count = arrival_rng.poisson(rate_per_s * horizon_s)
    arrivals = np.sort(arrival_rng.uniform(0.0, horizon_s, count))
    durations = sample_t_m(timing, t_proc_ms, duration_rng, count, t_ss_ms) / 1000.0
    intervals = []
    end = -math.inf
    for t, d in zip(arrivals.tolist(), durations.tolist()):
        if t < end:
            continue
        end = t + d
        intervals.append((t, end))
    return intervals


def _covered(intervals: list[tuple[float, float]], horizon_s: float) -> float:
    return sum(min(b, horizon_s) - a for a, b in intervals)


def _union(a: list[tuple[float, float]], b: list[tuple[float, float]]) -> list[tuple[float, float]]:
    merged: list[list[float]] = []
    for s, e in sorted(a + b):
        if merged and s <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], e)
        else:
            merged.append([s, e])
    return [(s, e) for s, e in merged]


@dataclass(frozen=True)
class _Replication:
    gamma_bs: float
    gamma_ue: float
    gamma_total: float
    big_gamma_ms: float
    n_union: int
    gain: float


def _replicate(cfg: SimConfig, seq: np.random.SeedSequence, timing: SweepTiming, eta: float) -> _Replication:
    sc = cfg.scenario
    arr_bs, arr_ue, dur_bs, dur_ue = (np.random.default_rng(s) for s in seq.spawn(4))
    h = cfg.horizon_s
    bs = _side_intervals(sc.beta_bs, h, arr_bs, dur_bs, timing, sc.t_proc_ms, sc.t_ss_ms)
    ue = _side_intervals(sc.beta_ue, h, arr_ue, dur_ue, timing, sc.t_proc_ms, sc.t_ss_ms)
    union = _union(bs, ue)

    f_bs, f_ue, f_any = (_covered(x, h) / h for x in (bs, ue, union))
    f_both = f_bs + f_ue - f_any
    nb, nu = sc.n_beam_bs, sc.n_beam_ue
    gain = (1 - eta) * (
        (1 - f_any) * nb * nu
        + (f_bs - f_both) * nu / nb
        + (f_ue - f_both) * nb / nu
        + f_both / (nb * nu)
    )
    lengths = [e - s for s, e in union]
    mean_len = 1000.0 * sum(lengths) / len(lengths) if lengths else 0.0
    return _Replication(f_bs, f_ue, f_any, mean_len, len(lengths), gain)


def _run(cfg: SimConfig) -> list[_Replication]:
    timing = cfg.scenario.timing()
    eta = ssb_overhead(cfg.scenario, timing)
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.replications)
    return [_replicate(cfg, s, timing, eta) for s in children]


_METRICS = (
    ("gamma_bs", "gamma_bs"),
    ("gamma_ue", "gamma_ue"),
    ("gamma_total", "gamma_total"),
    ("big_gamma", "big_gamma_ms"),
    ("e_gain", "gain"),
)


def _collect(cfg: SimConfig, reps: list[_Replication], names) -> dict[str, SimEstimate]:
    attrs = dict(_METRICS)
    return {n: _estimate(n, [getattr(r, attrs[n]) for r in reps], cfg.seed) for n in names}


def simulate_fractions(cfg: SimConfig) -> dict[str, SimEstimate]:
    """Estimate per-side and union misalignment fractions and mean episode length.

    ``big_gamma`` is the mean length (ms) of maximal intervals during which at
    least one side is misaligned; it is 0 when no episode occurs.
    """
    return _collect(cfg, _run(cfg), ("gamma_bs", "gamma_ue", "gamma_total", "big_gamma"))


def simulate_gain(cfg: SimConfig) -> SimEstimate:
    """Time-averaged ``(1 - eta) * g_bs(t) * g_ue(t)`` over the simulated horizon."""
    return _collect(cfg, _run(cfg), ("e_gain",))["e_gain"]


def simulate_all(cfg: SimConfig) -> dict[str, SimEstimate]:
    return _collect(cfg, _run(cfg), [n for n, _ in _METRICS])


def simulate_overlap_factor(
    e_t_m_ms: float, n_samples: int = 10**6, seed: int = 0, delta_ms: float | None = None
) -> SimEstimate:
    """Mean of ``max(T, delta + T) / T`` for a deterministic duration ``T``.

    ``delta`` is the offset of the second misalignment inside the first,
    uniform on ``[0, T]`` unless pinned with ``delta_ms``.
    """
    if n_samples < 10**4:
        raise ValueError("n_samples must be >= 1e4")
    if e_t_m_ms <= 0:
        raise ValueError("e_t_m_ms must be positive")
    rng = np.random.default_rng(seed)
    t = e_t_m_ms
    delta = rng.uniform(0.0, t, n_samples) if delta_ms is None else np.full(n_samples, float(delta_ms))
    ratio = np.maximum(t, delta + t) / t
    return SimEstimate(
        "overlap_factor",
        float(ratio.mean()),
        float(ratio.std(ddof=1) / math.sqrt(n_samples)),
        n_samples,
        seed,
    )


def analytic_values(scenario: Scenario) -> dict[str, float]:
    rep = average_gain(scenario)
    return {
        "gamma_bs": rep.bs.gamma,
        "gamma_ue": rep.ue.gamma,
        "gamma_total": rep.gamma_total,
        "big_gamma": rep.big_gamma_ms,
        "e_gain": rep.e_gain,
    }


def expected_duration_ms(scenario: Scenario) -> float:
    return expected_t_m(scenario.timing(), scenario.t_proc_ms, scenario.t_ss_ms)
