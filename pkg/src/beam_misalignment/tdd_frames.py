"""Harmonized TDD frame structures (patterns a and b) at NR numerologies 1..6.

Both patterns are scaled proportionally from their 30 kHz layouts
(``DDDSU`` for a, ``DDDSUUDDD`` collapsed to one DL run for b), so each
period is a single run of DL slots, one special slot, then UL slots.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import NamedTuple

SYMBOLS_PER_SLOT = 14
MU_RANGE = range(1, 7)


class SlotRole(Enum):
    DL = "D"
    S = "S"
    UL = "U"


class Pattern(Enum):
    A = "a"
    B = "b"


_DEFAULT_SPLIT = {Pattern.A: (10, 2, 2), Pattern.B: (6, 4, 4)}
_ALLOWED_SPLITS = {Pattern.A: {(10, 2, 2)}, Pattern.B: {(6, 4, 4), (4, 6, 4)}}


@dataclass(frozen=True)
class Numerology:
    mu: int

    def __post_init__(self) -> None:
        if self.mu not in MU_RANGE:
            raise ValueError(f"numerology mu must be in 1..6, got {self.mu}")

    @property
    def scs_khz(self) -> int:
        return 15 * 2**self.mu

    @property
    def slots_per_ms(self) -> int:
        return 2**self.mu

    @property
    def slot_duration_ms(self) -> Fraction:
        return Fraction(1, 2**self.mu)

    @property
    def symbols_per_slot(self) -> int:
        return SYMBOLS_PER_SLOT

    @property
    def symbols_per_ms(self) -> int:
        return SYMBOLS_PER_SLOT * 2**self.mu

    @property
    def symbol_duration_ms(self) -> Fraction:
        return Fraction(1, self.symbols_per_ms)


@dataclass(frozen=True)
class TddPattern:
    """A CEPT TDD pattern with its special-slot DL:GP:UL symbol split."""

    variant: Pattern
    special_split: tuple[int, int, int] | None = None

    def __post_init__(self) -> None:
        variant = Pattern(self.variant)
        object.__setattr__(self, "variant", variant)
        split = self.special_split or _DEFAULT_SPLIT[variant]
        split = tuple(int(x) for x in split)
        if split not in _ALLOWED_SPLITS[variant]:
            raise ValueError(f"special split {split} not defined for pattern {variant.value}")
        object.__setattr__(self, "special_split", split)

    @property
    def period_ms(self) -> Fraction:
        return Fraction(5, 2) if self.variant is Pattern.A else Fraction(5)

    @property
    def special_dl_symbols(self) -> int:
        return self.special_split[0]


class SlotCounts(NamedTuple):
    dl: int
    s: int
    ul: int
    total: int


def _as_pattern(pattern: TddPattern | Pattern | str) -> TddPattern:
    if isinstance(pattern, TddPattern):
        return pattern
    return TddPattern(Pattern(pattern))


def _as_numerology(num: Numerology | int) -> Numerology:
    return num if isinstance(num, Numerology) else Numerology(int(num))


def slot_counts(pattern: TddPattern | Pattern | str, num: Numerology | int) -> SlotCounts:
    """DL, special, UL and total slot counts in one TDD period."""
    pattern = _as_pattern(pattern)
    mu = _as_numerology(num).mu
    if pattern.variant is Pattern.A:
        dl, ul, total = 2 ** (mu + 1) - 1, 2 ** (mu - 1), 5 * 2 ** (mu - 1)
    else:
        dl, ul, total = 2 ** (mu + 2) - 1, 2**mu, 5 * 2**mu
    return SlotCounts(dl, 1, ul, total)


def slot_role(pattern: TddPattern | Pattern | str, num: Numerology | int, slot_index: int) -> SlotRole:
    if slot_index < 0:
        raise ValueError("slot_index must be non-negative")
    counts = slot_counts(pattern, num)
    k = slot_index % counts.total
    if k < counts.dl:
        return SlotRole.DL
    if k == counts.dl:
        return SlotRole.S
    return SlotRole.UL


def dl_symbols_per_period(
    pattern: TddPattern | Pattern | str, num: Numerology | int, include_special_dl: bool
) -> int:
    pattern = _as_pattern(pattern)
    n = slot_counts(pattern, num).dl * SYMBOLS_PER_SLOT
    if include_special_dl:
        n += pattern.special_dl_symbols
    return n


def dl_symbols_in_window(
    pattern: TddPattern | Pattern | str,
    num: Numerology | int,
    n_slots: int,
    include_special_dl: bool,
) -> int:
    """Count DL symbols in slots ``0 .. n_slots-1``, walking slot roles."""
    pattern = _as_pattern(pattern)
    num = _as_numerology(num)
    counts = slot_counts(pattern, num)
    full, rem = divmod(n_slots, counts.total)
    total = full * dl_symbols_per_period(pattern, num, include_special_dl)
    for k in range(rem):
        role = slot_role(pattern, num, k)
        if role is SlotRole.DL:
            total += SYMBOLS_PER_SLOT
        elif role is SlotRole.S and include_special_dl:
            total += pattern.special_dl_symbols
    return total
