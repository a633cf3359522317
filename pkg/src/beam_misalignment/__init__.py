"""Beam misalignment analytics for 3GPP mmWave NR with analog beamforming."""

from .misalignment_model import MisalignmentReport, Scenario, average_gain
from .ssb_schedule import SlotFilter, SsbCase, SsbGrid, agnostic_start_symbols, effective_start_symbols
from .sweep_timing import SweepRequest, SweepTiming, sweep_time_closed_form, sweep_time_oracle
from .tdd_frames import Numerology, Pattern, SlotRole, TddPattern

__all__ = [
    "MisalignmentReport",
    "Numerology",
    "Pattern",
    "Scenario",
    "SlotFilter",
    "SlotRole",
    "SsbCase",
    "SsbGrid",
    "SweepRequest",
    "SweepTiming",
    "TddPattern",
    "agnostic_start_symbols",
    "average_gain",
    "effective_start_symbols",
    "sweep_time_closed_form",
    "sweep_time_oracle",
]
