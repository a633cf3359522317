"""Candidate SSB start symbols for cases D, F and G, and their TDD-filtered grids.

Start symbols are counted from the first symbol of the SS burst set
half-frame (first half of the radio frame).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import groupby

from .tdd_frames import SYMBOLS_PER_SLOT, Numerology, Pattern, SlotRole, TddPattern, slot_role

SYMBOLS_PER_SSB = 4
T_SS_MS = 5


class SsbCase(Enum):
    D = "D"
    F = "F"
    G = "G"

    @property
    def numerology(self) -> Numerology:
        return Numerology({"D": 3, "F": 5, "G": 6}[self.value])


class SlotFilter(Enum):
    DL_ONLY = "dl"
    DL_AND_SPECIAL = "dl+s"

    def admits(self, role: SlotRole) -> bool:
        if role is SlotRole.DL:
            return True
        return role is SlotRole.S and self is SlotFilter.DL_AND_SPECIAL


# (within-period offsets, period in symbols, admissible period indices)
_GENERATORS = {
    SsbCase.D: ((4, 8, 16, 20), 28, tuple(n for n in range(19) if n % 5 != 4)),
    SsbCase.F: ((2, 9), 14, tuple(range(32))),
    SsbCase.G: ((2, 9), 14, tuple(range(32))),
}


@dataclass(frozen=True)
class Segment:
    """A maximal run of SSB-carrying slots followed by its SSB-free gap."""

    first_slot: int
    n_slots: int
    capacity: int
    gap_slots: int


@dataclass(frozen=True)
class SsbGrid:
    case: SsbCase
    pattern: TddPattern
    slot_filter: SlotFilter
    start_symbols: tuple[int, ...]
    segments: tuple[Segment, ...]
    ssb_per_slot: int = 2
    symbols_per_ssb: int = SYMBOLS_PER_SSB

    @property
    def numerology(self) -> Numerology:
        return self.case.numerology

    @property
    def l_eff(self) -> int:
        return len(self.start_symbols)

    @property
    def window_slots(self) -> int:
        return T_SS_MS * self.numerology.slots_per_ms

    @property
    def uniform_slots(self) -> bool:
        """True when every SSB-carrying slot holds exactly ``ssb_per_slot`` SSBs."""
        return all(seg.capacity == seg.n_slots * self.ssb_per_slot for seg in self.segments)

    @property
    def label(self) -> str:
        return f"{self.case.value}/{self.pattern.variant.value}/{self.slot_filter.value}"


def agnostic_start_symbols(case: SsbCase | str) -> tuple[int, ...]:
    case = SsbCase(case)
    offsets, period, indices = _GENERATORS[case]
    return tuple(sorted(off + period * n for n in indices for off in offsets))


def _ssb_admitted(
    start: int, pattern: TddPattern, num: Numerology, slot_filter: SlotFilter, symbol_level_special: bool
) -> bool:
    for sym in range(start, start + SYMBOLS_PER_SSB):
        role = slot_role(pattern, num, sym // SYMBOLS_PER_SLOT)
        if not slot_filter.admits(role):
            return False
        if symbol_level_special and role is SlotRole.S and sym % SYMBOLS_PER_SLOT >= pattern.special_dl_symbols:
            return False
    return True


def effective_start_symbols(
    case: SsbCase | str,
    pattern: TddPattern | Pattern | str,
    slot_filter: SlotFilter | str = SlotFilter.DL_ONLY,
    ssb_per_slot: int = 2,
    symbol_level_special: bool = False,
) -> SsbGrid:
    """Filter the agnostic start symbols against the TDD slot roles of ``pattern``.

    An SSB is kept when all four of its symbols fall in slots whose role the
    filter admits. With ``symbol_level_special`` an SSB in the special slot
    must also sit inside that slot's DL symbols (not used for the standard
    counts). ``ssb_per_slot=1`` keeps only the first SSB of each slot.
    """
    case = SsbCase(case)
    if not isinstance(pattern, TddPattern):
        pattern = TddPattern(Pattern(pattern))
    slot_filter = SlotFilter(slot_filter)
    if ssb_per_slot not in (1, 2):
        raise ValueError("ssb_per_slot must be 1 or 2")
    num = case.numerology

    kept = [
        s
        for s in agnostic_start_symbols(case)
        if _ssb_admitted(s, pattern, num, slot_filter, symbol_level_special)
    ]
    if ssb_per_slot == 1:
        kept = [next(grp) for _, grp in groupby(kept, key=lambda s: s // SYMBOLS_PER_SLOT)]
    if not kept:
        raise ValueError(f"no SSB fits case {case.value} with pattern {pattern.variant.value}")

    grid = SsbGrid(case, pattern, slot_filter, tuple(kept), (), ssb_per_slot)
    object.__setattr__(grid, "segments", tuple(_build_segments(grid)))
    return grid


def _build_segments(grid: SsbGrid) -> list[Segment]:
    per_slot: dict[int, int] = {}
    for s in grid.start_symbols:
        slot = s // SYMBOLS_PER_SLOT
        per_slot[slot] = per_slot.get(slot, 0) + 1
    slots = sorted(per_slot)

    runs: list[list[int]] = []
    for slot in slots:
        if runs and slot == runs[-1][-1] + 1:
            runs[-1].append(slot)
        else:
            runs.append([slot])

    segments = []
    for i, run in enumerate(runs):
        nxt = runs[i + 1][0] if i + 1 < len(runs) else grid.window_slots
        segments.append(
            Segment(
                first_slot=run[0],
                n_slots=len(run),
                capacity=sum(per_slot[s] for s in run),
                gap_slots=nxt - run[-1] - 1,
            )
        )
    return segments


def segmentation(grid: SsbGrid) -> list[tuple[int, int]]:
    """``(capacity, gap_slots)`` per burst segment, in slot order."""
    return [(seg.capacity, seg.gap_slots) for seg in grid.segments]


def cumulative_capacity(grid: SsbGrid) -> list[int]:
    """Cumulative capacities ``C(0), C(1), ..., C(N_SS)`` with ``C(0) = 0``."""
    out = [0]
    for seg in grid.segments:
        out.append(out[-1] + seg.capacity)
    return out


def all_grids(ssb_per_slot: int = 2) -> list[SsbGrid]:
    """The twelve case x pattern x filter grids, in table order."""
    return [
        effective_start_symbols(case, pattern, flt, ssb_per_slot=ssb_per_slot)
        for case in SsbCase
        for pattern in Pattern
        for flt in SlotFilter
    ]
