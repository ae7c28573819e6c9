"""Fuzzy clause evaluation with proportional voting, and class-sum aggregation.

A clause starts its vote count at min(LF, literal_count) (LF when empty or
oversized) and loses one vote per failed literal, clamped at zero. A clause
with zero votes has failed entirely. During training an empty clause votes LF;
at inference it votes 0 so untrained clauses cannot dominate predictions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bits import BitSample
from .model import Clause, ClauseBank


@dataclass(frozen=True)
class ClauseVote:
    votes: int
    failed_count: int
    effective_limit: int

    @property
    def failed(self) -> bool:
        return self.votes == 0


@dataclass(frozen=True)
class ClassSum:
    raw: int
    clamped: int


def effective_limit(literal_count: int, lf: int) -> int:
    if literal_count == 0 or literal_count > lf:
        return lf
    return literal_count


def evaluate_clause(clause: Clause, sample: BitSample, lf: int,
                    training: bool = False) -> ClauseVote:
    if 2 * sample.width != clause.num_literal_slots:
        raise ValueError(
            f"sample width {sample.width} does not match clause over "
            f"{clause.num_literal_slots} literals"
        )
    literals = sample.literals()
    failed = int(np.count_nonzero(clause.include_mask & ~literals))
    lc = clause.literal_count
    limit = effective_limit(lc, lf)
    if lc == 0 and not training:
        return ClauseVote(votes=0, failed_count=failed, effective_limit=limit)
    return ClauseVote(votes=max(0, limit - failed), failed_count=failed,
                      effective_limit=limit)


def clause_failed(vote: ClauseVote) -> bool:
    return vote.votes == 0


def evaluate_bank(bank: ClauseBank, sample: BitSample,
                  training: bool = False) -> list[ClauseVote]:
    """Evaluate every clause in a bank against one sample (vectorized)."""
    if sample.width != bank.feature_count:
        raise ValueError(
            f"sample width {sample.width} does not match bank F={bank.feature_count}"
        )
    literals = sample.literals()
    failed = (bank.include & ~literals).sum(axis=1)
    counts = bank.include.sum(axis=1)
    lf = bank.hyper.LF
    votes = []
    for lc, f in zip(counts.tolist(), failed.tolist()):
        limit = effective_limit(lc, lf)
        if lc == 0 and not training:
            votes.append(ClauseVote(votes=0, failed_count=f, effective_limit=limit))
        else:
            votes.append(ClauseVote(votes=max(0, limit - f), failed_count=f,
                                    effective_limit=limit))
    return votes


def class_sum(bank: ClauseBank, sample: BitSample,
              training: bool = False) -> ClassSum:
    votes = evaluate_bank(bank, sample, training=training)
    raw = sum(int(bank.polarity[i]) * v.votes for i, v in enumerate(votes))
    t = bank.hyper.T
    return ClassSum(raw=raw, clamped=min(t, max(-t, raw)))
