"""Command-line front end.

Subcommands::

    table1          effective SSB counts per case / TDD pattern / slot filter
    sweep-curve     T_sweep and tau_sweep against the number of requested SSBs
    duration-curve  metric rows (Gamma, fractions, overhead, gain) over an axis
    fraction-curve  same rows, for the misalignment-fraction figure
    gain-curve      same rows, for the average-gain figure
    grid-dump       effective start symbols and segment/gap decomposition
    validate        closed-form vs symbol-walk sweep times, exact to the symbol
    simulate        analytic vs Monte-Carlo comparison with z-scores

Scenario values come from built-in defaults, then an optional ``--config``
file of ``key = value`` lines, then command-line flags (flags win).
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import replace
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .misalignment_model import Scenario, average_gain
from .montecarlo_sim import SimConfig, analytic_values, horizon_for_events, simulate_all
from .ssb_schedule import SlotFilter, SsbCase, agnostic_start_symbols, effective_start_symbols
from .sweep_timing import SweepRequest, SweepTiming, sweep_time_closed_form, sweep_time_oracle
from .tdd_frames import SYMBOLS_PER_SLOT, Pattern, TddPattern

# config-file key / flag dest -> (Scenario field, parser)
SCENARIO_KEYS: dict[str, tuple[str, Callable]] = {
    "case": ("case", lambda s: SsbCase(s.upper())),
    "pattern": ("pattern", lambda s: Pattern(s.lower())),
    "filter": ("slot_filter", lambda s: SlotFilter(s.lower())),
    "isd": ("d_isd_m", float),
    "density": ("lambda_bs_per_m2", float),
    "isd_relation": ("isd_relation", str),
    "speed": ("v_mps", float),
    "nbs": ("n_beam_bs", int),
    "nue": ("n_beam_ue", int),
    "tau_ss": ("tau_ss_ms", int),
    "tproc": ("t_proc_ms", float),
    "ssb_per_slot": ("ssb_per_slot", int),
    "split": ("special_split", lambda s: tuple(int(x) for x in s.split(","))),
}
AXES = ("nbs", "nue", "speed", "isd", "tau_ss", "tproc")
METRIC_COLUMNS = ("big_gamma_ms", "gamma_bs", "gamma_ue", "gamma_total", "eta_oh", "e_gain", "valid")
SIM_GATED = ("gamma_bs", "gamma_ue", "gamma_total", "e_gain")


class CliError(Exception):
    pass


def fmt(x) -> str:
    """Locale-independent CSV cell: ints verbatim, floats to 6 significant digits."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        return format(x, ".6g")
    return str(x)


def write_csv(header: Sequence[str], rows: Iterable[Sequence], out) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(x) for x in row])


def parse_int_range(spec: str) -> list[int]:
    """``"1:128"`` (inclusive), ``"1:128:8"`` or ``"1,2,4"``."""
    out: list[int] = []
    for part in spec.split(","):
        part = part.strip()
        if ":" in part:
            bits = [int(b) for b in part.split(":")]
            lo, hi = bits[0], bits[1]
            step = bits[2] if len(bits) > 2 else 1
            out.extend(range(lo, hi + 1, step))
        elif part:
            out.append(int(part))
    if not out:
        raise CliError(f"empty range {spec!r}")
    return out


def parse_values(spec: str) -> list[float]:
    if ":" in spec:
        return [float(v) for v in parse_int_range(spec)]
    return [float(v) for v in spec.split(",") if v.strip()]


def read_config(path: str | Path) -> dict[str, str]:
    cfg: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in SCENARIO_KEYS and key not in ("seed", "axis", "values"):
            raise CliError(f"{path}:{lineno}: unknown key {key!r}")
        cfg[key] = value
    return cfg


def build_scenario(settings: dict[str, str]) -> Scenario:
    fields: dict = {}
    split = None
    for key, raw in settings.items():
        if key not in SCENARIO_KEYS or raw is None:
            continue
        name, conv = SCENARIO_KEYS[key]
        try:
            value = conv(raw)
        except ValueError as exc:
            raise CliError(f"bad value for {key}: {raw!r}") from exc
        if name == "special_split":
            split = value
        else:
            fields[name] = value
    pattern = fields.pop("pattern", Pattern.A)
    try:
        return Scenario(pattern=TddPattern(pattern, split), **fields)
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def _settings(args: argparse.Namespace) -> dict[str, str]:
    merged: dict[str, str] = {}
    if getattr(args, "config", None):
        merged.update(read_config(args.config))
    for key in list(SCENARIO_KEYS) + ["seed"]:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = str(value)
    return merged


def _grid_from_label(label: str, ssb_per_slot: int = 2):
    parts = label.split("/")
    if len(parts) != 3:
        raise CliError(f"config {label!r} must look like D/a/dl")
    try:
        return effective_start_symbols(SsbCase(parts[0].upper()), Pattern(parts[1].lower()), SlotFilter(parts[2].lower()), ssb_per_slot)
    except ValueError as exc:
        raise CliError(f"invalid config {label!r}: {exc}") from exc


ALL_CONFIGS = [f"{c.value}/{p.value}/{f.value}" for c in SsbCase for p in Pattern for f in SlotFilter]


# ---------------------------------------------------------------- commands


def cmd_table1(out) -> int:
    rows = []
    for case in SsbCase:
        for pattern in Pattern:
            counts = [effective_start_symbols(case, pattern, f).l_eff for f in SlotFilter]
            rows.append([case.value, case.numerology.scs_khz, len(agnostic_start_symbols(case)), pattern.value, *counts])
    write_csv(["case", "scs_khz", "l_ssb", "pattern", "l_eff_dl", "l_eff_dl_s"], rows, out)
    return 0


def cmd_sweep_curve(configs: Sequence[str], n_req: Sequence[int], tau_ss_ms: int, out) -> int:
    if not n_req:
        raise CliError("n_req range is empty")
    if min(n_req) < 1:
        raise CliError("n_req must be >= 1")
    rows = []
    for label in configs:
        grid = _grid_from_label(label)
        for n in n_req:
            t = sweep_time_closed_form(SweepRequest(n, grid, tau_ss_ms))
            rows.append([grid.case.value, grid.pattern.variant.value, grid.slot_filter.value, n, t.t_sweep_ms, t.tau_sweep_ms, t.n_sweep_sets])
    write_csv(["case", "pattern", "filter", "n_req", "t_sweep_ms", "tau_sweep_ms", "n_sweep_sets"], rows, out)
    return 0


def _apply_axis(base: Scenario, axis: str, value: float) -> Scenario:
    name, conv = SCENARIO_KEYS[axis]
    if conv is int:
        if value != int(value):
            raise CliError(f"axis {axis} needs integer values, got {value}")
        value = int(value)
    if name == "d_isd_m":
        return replace(base, d_isd_m=value, lambda_bs_per_m2=None)
    return replace(base, **{name: value})


def metric_rows(base: Scenario, axis: str, values: Sequence[float], db: bool = False) -> list[list]:
    if axis not in AXES:
        raise CliError(f"axis must be one of {AXES}")
    rows = []
    for v in values:
        try:
            rep = average_gain(_apply_axis(base, axis, v))
        except ValueError as exc:
            raise CliError(f"{axis}={v}: {exc}") from exc
        gain = 10 * math.log10(rep.e_gain) if db else rep.e_gain
        axis_value = int(v) if float(v).is_integer() else v
        rows.append([axis_value, rep.big_gamma_ms, rep.bs.gamma, rep.ue.gamma, rep.gamma_total, rep.eta_oh, gain, rep.valid])
    return rows


def cmd_metric_curves(base: Scenario, axis: str, values: Sequence[float], out, db: bool = False) -> int:
    header = [axis, *METRIC_COLUMNS]
    if db:
        header[header.index("e_gain")] = "e_gain_db"
    write_csv(header, metric_rows(base, axis, values, db), out)
    return 0


def cmd_grid_dump(label: str, ssb_per_slot: int, out) -> int:
    grid = _grid_from_label(label, ssb_per_slot)
    rows = [["ssb", i, s, s // SYMBOLS_PER_SLOT, "", "", ""] for i, s in enumerate(grid.start_symbols, 1)]
    rows += [["segment", n, "", seg.first_slot, seg.n_slots, seg.capacity, seg.gap_slots] for n, seg in enumerate(grid.segments, 1)]
    write_csv(["record", "index", "start_symbol", "slot", "n_slots", "capacity", "gap_slots"], rows, out)
    return 0


def validate_equivalence(
    n_req_max: int,
    tau_ss_ms: int = 20,
    closed_form: Callable[[SweepRequest], SweepTiming] = sweep_time_closed_form,
    oracle: Callable[[SweepRequest], SweepTiming] = sweep_time_oracle,
) -> tuple[int, list[tuple[str, int, SweepTiming, SweepTiming]]]:
    """Return ``(n_checks, mismatches)`` over all twelve grids and ``1..n_req_max``."""
    if n_req_max < 1:
        raise CliError("n_req_max must be >= 1")
    checks, bad = 0, []
    for label in ALL_CONFIGS:
        grid = _grid_from_label(label)
        for n in range(1, n_req_max + 1):
            req = SweepRequest(n, grid, tau_ss_ms)
            a, b = closed_form(req), oracle(req)
            checks += 1
            if a != b:
                bad.append((label, n, a, b))
    return checks, bad


def cmd_validate(n_req_max: int, out, closed_form=sweep_time_closed_form) -> int:
    checks, bad = validate_equivalence(n_req_max, closed_form=closed_form)
    by_config: dict[str, int] = {}
    for label, *_ in bad:
        by_config[label] = by_config.get(label, 0) + 1
    for label in ALL_CONFIGS:
        status = "FAIL" if label in by_config else "PASS"
        out.write(f"{status} {label} n_req=1..{n_req_max} mismatches={by_config.get(label, 0)}\n")
    if bad:
        label, n, a, b = bad[0]
        out.write(f"first mismatch: {label} n_req={n}\n")
        for field in ("n_complete_sets", "residual_ssbs", "sweep_symbols_c", "sweep_symbols_r"):
            x, y = getattr(a, field), getattr(b, field)
            mark = "  " if x == y else "!="
            out.write(f"  {mark} {field}: closed_form={x} oracle={y}\n")
        out.write(f"FAIL {len(bad)}/{checks} checks\n")
        return 1
    out.write(f"PASS {checks}/{checks} checks\n")
    return 0


def simulation_rows(cfg: SimConfig) -> list[list]:
    analytic = analytic_values(cfg.scenario)
    rows = []
    for name, est in simulate_all(cfg).items():
        a = analytic[name]
        diff = est.mean - a
        se = est.standard_error
        if se > 0:
            z = diff / se
        else:
            z = 0.0 if diff == 0 else math.copysign(math.inf, diff)
        rows.append([name, a, est.mean, se, z, cfg.seed])
    return rows


def cmd_simulate(cfg: SimConfig, out, z_max: float = 4.0) -> int:
    rows = simulation_rows(cfg)
    write_csv(["metric", "analytic", "simulated", "stderr", "z_score", "seed"], rows, out)
    failed = [r[0] for r in rows if r[0] in SIM_GATED and not abs(r[4]) <= z_max]
    return 1 if failed else 0


# ---------------------------------------------------------------- parser


def _scenario_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("scenario")
    g.add_argument("--config", help="key = value file with scenario defaults")
    g.add_argument("--case", choices=["D", "F", "G"])
    g.add_argument("--pattern", choices=["a", "b"])
    g.add_argument("--filter", choices=["dl", "dl+s"])
    g.add_argument("--split", help="pattern b special slot DL,GP,UL symbols (6,4,4 or 4,6,4)")
    g.add_argument("--isd", type=float, help="inter-site distance in m (default 100)")
    g.add_argument("--isd-relation", dest="isd_relation", choices=["linear", "squared"])
    g.add_argument("--density", type=float, help="BS density per m^2 (instead of --isd)")
    g.add_argument("--speed", type=float, help="UE speed in m/s")
    g.add_argument("--nbs", type=int, help="number of BS beams")
    g.add_argument("--nue", type=int, help="number of UE beams")
    g.add_argument("--tau-ss", dest="tau_ss", type=int, help="SS burst set periodicity in ms")
    g.add_argument("--tproc", type=float, help="processing time in ms")
    g.add_argument("--ssb-per-slot", dest="ssb_per_slot", type=int, choices=[1, 2])
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output CSV path (default stdout)")
    p.add_argument("--db", action="store_true", help="report gain columns in dB")
    return p


def create_parser() -> argparse.ArgumentParser:
    common = _scenario_flags()
    parser = argparse.ArgumentParser(prog="beammis", description="Beam misalignment analytics for mmWave NR")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("table1", parents=[common], help="effective SSB counts per configuration")

    p = sub.add_parser("sweep-curve", parents=[common], help="sweep time vs requested SSBs")
    p.add_argument("--configs", default=",".join(ALL_CONFIGS), help="comma list like D/a/dl,F/a/dl")
    p.add_argument("--n-req", dest="n_req", default="1:512")

    for name in ("duration-curve", "fraction-curve", "gain-curve"):
        p = sub.add_parser(name, parents=[common], help="metric rows over a parameter axis")
        p.add_argument("--axis", choices=AXES)
        p.add_argument("--values", help="e.g. 1:128 or 1,2,4,8")

    p = sub.add_parser("grid-dump", parents=[common], help="dump an effective SSB grid")

    p = sub.add_parser("validate", parents=[common], help="closed form vs oracle equivalence")
    p.add_argument("--n-req-max", dest="n_req_max", type=int, default=512)

    p = sub.add_parser("simulate", parents=[common], help="analytic vs Monte-Carlo")
    p.add_argument("--horizon", type=float, help="seconds per replication (default: 1e4 expected events in total)")
    p.add_argument("--replications", type=int, default=10)
    p.add_argument("--z-max", dest="z_max", type=float, default=4.0)
    return parser


def run(argv: Sequence[str] | None = None, out=None) -> int:
    args = create_parser().parse_args(argv)
    settings = _settings(args)
    buf = io.StringIO()
    scenario = build_scenario(settings)

    if args.command == "table1":
        code = cmd_table1(buf)
    elif args.command == "sweep-curve":
        configs = [c.strip() for c in args.configs.split(",") if c.strip()]
        code = cmd_sweep_curve(configs, parse_int_range(args.n_req), scenario.tau_ss_ms, buf)
    elif args.command in ("duration-curve", "fraction-curve", "gain-curve"):
        cfg = read_config(args.config) if args.config else {}
        axis = args.axis or cfg.get("axis", "nbs")
        values = parse_values(args.values or cfg.get("values", "1:128"))
        code = cmd_metric_curves(scenario, axis, values, buf, db=args.db)
    elif args.command == "grid-dump":
        label = f"{scenario.case.value}/{scenario.pattern.variant.value}/{scenario.slot_filter.value}"
        code = cmd_grid_dump(label, scenario.ssb_per_slot, buf)
    elif args.command == "validate":
        code = cmd_validate(args.n_req_max, buf)
    elif args.command == "simulate":
        seed = int(settings.get("seed", 42))
        horizon = args.horizon or horizon_for_events(scenario, 1e4, args.replications)
        code = cmd_simulate(SimConfig(scenario, horizon, seed, args.replications), buf, args.z_max)
    else:  # pragma: no cover - argparse rejects unknown commands
        raise CliError(args.command)

    text = buf.getvalue()
    if args.out:
        Path(args.out).write_text(text)
    else:
        (out or sys.stdout).write(text)
    return code


def main(argv: Sequence[str] | None = None) -> None:
    try:
        code = run(argv)
    except CliError as exc:
        print(f"beammis: error: {exc}", file=sys.stderr)
        code = 2
    sys.exit(code)


if __name__ == "__main__":
    main()
