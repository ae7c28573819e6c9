"""Feedback rules and the per-sample / per-epoch training loops.

Type Ia is deterministic and gated by the clause-size cap L; Type Ib keeps the
only stochastic element (per-automaton decrement with probability 1/S); Type II
is the classic include-the-false-literal rule. Class updates follow the
(T -/+ clamped_sum) / 2T resource-allocation schedule, with one sampled
negative class in multiclass mode.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .bits import BitSample
from .clause_eval import evaluate_bank
from .model import (MODE_BINARY, Clause, ClauseBank, Model, sync_include_mask)

FALSE_ACTIONS = ("decrement", "noop")


@dataclass
class FeedbackConfig:
    type_ia_false_action: str = "decrement"
    rng_seed: int = 42

    def __post_init__(self):
        if self.type_ia_false_action not in FALSE_ACTIONS:
            raise ValueError(
                f"type_ia_false_action must be one of {FALSE_ACTIONS}"
            )


@dataclass
class EpochReport:
    epoch: int
    train_accuracy: float
    test_accuracy: float | None
    wall_time: float

    def csv_line(self) -> str:
        test = "" if self.test_accuracy is None else f"{self.test_accuracy:.6f}"
        return f"{self.epoch},{self.train_accuracy:.6f},{test},{self.wall_time:.4f}"


def type_ia_feedback(clause: Clause, literals: np.ndarray, L: int,
                     config: FeedbackConfig) -> Clause:
    """Reinforce a succeeding clause. True literals strengthen; new inclusions
    are blocked once literal_count >= L (already-included literals still
    reinforce at the cap). False literals decrement or no-op per config."""
    states = clause.states
    include = clause.include_mask
    gate_open = clause.literal_count < L
    up = literals & (include if not gate_open else np.ones_like(include))
    np.add(states, 1, out=states, where=up & (states < 255))
    if config.type_ia_false_action == "decrement":
        down = ~literals
        np.subtract(states, 1, out=states, where=down & (states > 0))
    return sync_include_mask(clause)


def type_ib_feedback(clause: Clause, S: float, rng: np.random.Generator) -> Clause:
    """Stochastic forgetting on a failed clause: each automaton decrements
    with probability 1/S."""
    if S < 1:
        raise ValueError(f"S must be >= 1, got {S}")
    states = clause.states
    hit = rng.random(states.shape[0]) < (1.0 / S)
    np.subtract(states, 1, out=states, where=hit & (states > 0))
    return sync_include_mask(clause)


def type_ii_feedback(clause: Clause, literals: np.ndarray) -> Clause:
    """Push currently-excluded false literals toward inclusion, forcing the
    clause to fail on similar future inputs. Deterministic, not L-gated."""
    states = clause.states
    target = ~clause.include_mask & ~literals
    np.add(states, 1, out=states, where=target & (states < 255))
    return sync_include_mask(clause)


def _feed_bank(bank: ClauseBank, sample: BitSample, literals: np.ndarray,
               as_target: bool, config: FeedbackConfig,
               rng: np.random.Generator) -> None:
    """Apply one feedback round to a bank playing the target or negative role."""
    h = bank.hyper
    votes = evaluate_bank(bank, sample, training=True)
    raw = sum(int(bank.polarity[i]) * v.votes for i, v in enumerate(votes))
    clamped = min(h.T, max(-h.T, raw))
    if as_target:
        p = (h.T - clamped) / (2.0 * h.T)
    else:
        p = (h.T + clamped) / (2.0 * h.T)
    for i in range(bank.n_clauses):
        if rng.random() >= p:
            continue
        clause = bank.clause(i)
        positive_role = (clause.polarity > 0) == as_target
        if positive_role:
            if votes[i].votes > 0:
                type_ia_feedback(clause, literals, h.L, config)
            else:
                type_ib_feedback(clause, h.S, rng)
        else:
            if votes[i].votes > 0:
                type_ii_feedback(clause, literals)


def update_on_sample(model: Model, sample: BitSample, label: int,
                     config: FeedbackConfig, rng: np.random.Generator) -> Model:
    if model.mode == MODE_BINARY:
        if label not in (0, 1):
            raise ValueError(f"binary label out of range: {label}")
        literals = sample.literals()
        # The shared bank plays target for label 1, negative for label 0.
        _feed_bank(model.banks[0], sample, literals, label == 1, config, rng)
        return model
    if not 0 <= label < model.classes:
        raise ValueError(f"label out of range: {label}")
    literals = sample.literals()
    _feed_bank(model.banks[label], sample, literals, True, config, rng)
    if model.classes > 1:
        other = int(rng.integers(model.classes - 1))
        if other >= label:
            other += 1
        _feed_bank(model.banks[other], sample, literals, False, config, rng)
    return model


def fit(model: Model, dataset, epochs: int, config: FeedbackConfig,
        eval_dataset=None, log_stream=None,
        progress: bool = False) -> tuple[Model, list[EpochReport]]:
    """Train for a number of epochs over a BitDataset, shuffled per epoch.

    Emits one EpochReport per epoch; with log_stream set, writes
    `epoch,train_acc,test_acc,seconds` CSV lines as epochs finish.
    """
    from .inference import pack_model, predict_batch

    if dataset.n_samples == 0:
        raise ValueError("empty dataset")
    if dataset.feature_count != model.feature_count:
        raise ValueError(
            f"dataset F={dataset.feature_count} does not match model "
            f"F={model.feature_count}"
        )
    rng = np.random.default_rng(config.rng_seed)
    reports: list[EpochReport] = []
    for epoch in range(1, epochs + 1):
        start = time.perf_counter()
        order = rng.permutation(dataset.n_samples)
        for idx in order:
            update_on_sample(model, dataset.sample(int(idx)),
                             int(dataset.labels[idx]), config, rng)
        elapsed = time.perf_counter() - start
        packed = pack_model(model)
        train_labels, _ = predict_batch(packed, dataset, repetitions=1, warmup=0)
        train_acc = float(np.mean(train_labels == dataset.labels))
        test_acc = None
        if eval_dataset is not None:
            test_labels, _ = predict_batch(packed, eval_dataset,
                                           repetitions=1, warmup=0)
            test_acc = float(np.mean(test_labels == eval_dataset.labels))
        report = EpochReport(epoch=epoch, train_accuracy=train_acc,
                             test_accuracy=test_acc, wall_time=elapsed)
        reports.append(report)
        if log_stream is not None:
            log_stream.write(report.csv_line() + "\n")
            log_stream.flush()
        if progress:
            print(report.csv_line(), flush=True)
    return model, reports
