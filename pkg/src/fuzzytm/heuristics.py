"""Empirical hyperparameter suggestions used for CLI defaults.

T is approximated as sqrt(clauses_per_class / 2 * LF) for multiclass models
and sqrt(clauses_per_class * LF) for binary ones; the sweet spot can drift by
a factor of two either way, so a [T/2, 2T] range is attached. The specificity
carried over from a tuned standard Tsetlin Machine is roughly squared.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import MODE_BINARY, MODE_MULTICLASS


@dataclass(frozen=True)
class HyperSuggestion:
    T: int
    T_range: tuple[int, int]
    S_hint: float | None
    notes: str


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def suggest_T(clauses_per_class: int, lf: int, mode: str,
              chosen_T: int | None = None) -> HyperSuggestion:
    if clauses_per_class < 1 or lf < 1:
        raise ValueError("clauses_per_class and LF must be >= 1")
    if mode == MODE_MULTICLASS:
        approx = math.sqrt(clauses_per_class / 2.0 * lf)
    elif mode == MODE_BINARY:
        approx = math.sqrt(clauses_per_class * lf)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    t = max(1, _round_half_up(approx))
    lo, hi = max(1, t // 2), 2 * t
    notes = ""
    if chosen_T is not None and not lo <= chosen_T <= hi:
        notes = (f"chosen T={chosen_T} lies outside the suggested range "
                 f"[{lo}, {hi}]")
    return HyperSuggestion(T=t, T_range=(lo, hi), S_hint=None, notes=notes)


def suggest_S(s_standard_tm: float) -> float:
    if s_standard_tm <= 1:
        raise ValueError(f"standard-TM S must be > 1, got {s_standard_tm}")
    return s_standard_tm ** 2
