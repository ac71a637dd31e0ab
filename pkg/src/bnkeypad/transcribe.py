"""Multi-tap keystroke traces and typing-cost metrics.

A unit sitting at slot n of a key takes n presses of that key. Two
consecutive units on the same key jam: the second press run cannot begin
until a timeout (or cursor move) separates it from the first, so the jam
count is the direct measure of that friction. KSPC (keystrokes per
character) and the flexibility-weighted expected cost per unit quantify
raw typing effort.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import fsum
from typing import Mapping, Sequence

from .bn_text import GraphemeUnit
from .ergonomics import KEYPAD_KEYS, ErgonomicModel, key_cost
from .errors import CorruptTraceError, UntypableUnitError
from .layout import Layout


@dataclass(frozen=True)
class KeystrokeTrace:
    """Press sequence with unit alignments.

    ``boundaries`` aligns each typed unit (by its position in the input
    sequence) with the half-open press range that produced it.
    ``jam_positions`` holds indices b such that boundaries b and b+1 used
    the same key. ``skipped_positions`` lists input positions dropped by
    skip_untypable.
    """

    presses: tuple[str, ...]
    boundaries: tuple[tuple[int, tuple[int, int]], ...]
    jam_positions: tuple[int, ...]
    skipped_positions: tuple[int, ...] = ()


@dataclass(frozen=True)
class EvaluationReport:
    """Typing metrics for one (text, layout, model) combination."""

    kspc: float
    expected_cost: float
    jam_rate: float
    per_key_load: Mapping[str, float]
    unit_count: int
    press_count: int


def transcribe(units: Sequence[GraphemeUnit], layout: Layout,
               skip_untypable: bool = False) -> KeystrokeTrace:
    """Multi-tap keystroke trace for a unit sequence under a layout.

    Raises :class:`UntypableUnitError` for units absent from the layout
    unless ``skip_untypable`` downgrades them to a skip record.
    """
    presses: list[str] = []
    boundaries: list[tuple[int, tuple[int, int]]] = []
    jams: list[int] = []
    skipped: list[int] = []
    prev_key: str | None = None
    for pos, unit in enumerate(units):
        spot = layout.position(unit)
        if spot is None:
            if skip_untypable:
                skipped.append(pos)
                continue
            raise UntypableUnitError(unit, pos)
        key, taps = spot
        start = len(presses)
        presses.extend([key] * taps)
        if prev_key == key:
            jams.append(len(boundaries) - 1)
        boundaries.append((pos, (start, start + taps)))
        prev_key = key
    return KeystrokeTrace(tuple(presses), tuple(boundaries), tuple(jams), tuple(skipped))


def decode(trace: KeystrokeTrace, layout: Layout) -> list[GraphemeUnit]:
    """Recover the typed unit sequence from a trace (inverse of transcribe)."""
    out: list[GraphemeUnit] = []
    for pos, (start, end) in trace.boundaries:
        if not 0 <= start < end <= len(trace.presses):
            raise CorruptTraceError(f"press range {start}..{end} out of bounds")
        run = trace.presses[start:end]
        key = run[0]
        if any(k != key for k in run):
            raise CorruptTraceError(f"press range {start}..{end} mixes keys")
        taps = end - start
        slot_list = layout.slots.get(key, ())
        if taps > len(slot_list):
            raise CorruptTraceError(f"key {key} has no slot {taps}")
        out.append(slot_list[taps - 1])
    return out


def evaluate(units: Sequence[GraphemeUnit], layout: Layout, model: ErgonomicModel,
             skip_untypable: bool = False) -> EvaluationReport:
    """KSPC, expected per-unit cost, jam rate, and per-key load."""
    trace = transcribe(units, layout, skip_untypable=skip_untypable)
    unit_count = len(trace.boundaries)
    press_count = len(trace.presses)

    cost_terms = []
    for _pos, (start, end) in trace.boundaries:
        key = trace.presses[start]
        cost_terms.append((end - start) * key_cost(model, key))

    kspc = press_count / unit_count if unit_count else 1.0
    expected_cost = fsum(cost_terms) / unit_count if unit_count else 0.0
    jam_rate = len(trace.jam_positions) / max(1, unit_count - 1)
    press_by_key = Counter(trace.presses)
    per_key_load = {
        key: (press_by_key.get(key, 0) / press_count if press_count else 0.0)
        for key in KEYPAD_KEYS
    }
    return EvaluationReport(kspc, expected_cost, jam_rate, per_key_load,
                            unit_count, press_count)
