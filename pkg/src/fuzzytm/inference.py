"""Bit-packed batch inference.

Each clause is packed into two include masks (positive and negated literal
halves). A clause's failed-literal count against a packed sample is just
popcount(include_pos & ~sample) + popcount(include_neg & sample); the vote is
the precomputed effective limit minus that count, clamped at zero. This
reproduces the scalar evaluator exactly with two popcounts per clause and no
per-literal branches.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bits import BitSample, pack_bits, words_per_row
from .clause_eval import effective_limit
from .dataset_io import BitDataset
from .model import MODE_BINARY, Model


@dataclass
class ThroughputReport:
    predictions_per_second: float
    bytes_per_second: float
    batch_size: int
    threads: int

    def csv_line(self) -> str:
        return (f"{self.predictions_per_second:.1f},{self.bytes_per_second:.1f},"
                f"{self.batch_size},{self.threads}")


@dataclass
class PackedBank:
    include_pos: np.ndarray   # (C, W) uint64
    include_neg: np.ndarray   # (C, W) uint64
    effective_limit: np.ndarray  # (C,) int64
    polarity: np.ndarray      # (C,) int64
    empty: np.ndarray         # (C,) bool; empty clauses vote 0 at inference


@dataclass
class PackedModel:
    mode: str
    feature_count: int
    classes: int
    banks: list[PackedBank]


def pack_model(model: Model) -> PackedModel:
    f_bits = model.feature_count
    banks = []
    for bank in model.banks:
        inc = bank.include
        counts = inc.sum(axis=1)
        lf = bank.hyper.LF
        banks.append(PackedBank(
            include_pos=pack_bits(inc[:, :f_bits], f_bits),
            include_neg=pack_bits(inc[:, f_bits:], f_bits),
            effective_limit=np.array(
                [effective_limit(int(c), lf) for c in counts], dtype=np.int64),
            polarity=bank.polarity.astype(np.int64),
            empty=(counts == 0),
        ))
    return PackedModel(mode=model.mode, feature_count=f_bits,
                       classes=model.classes, banks=banks)


def failed_count(include_pos: np.ndarray, include_neg: np.ndarray,
                 sample_words: np.ndarray) -> int:
    """Failed literals of one packed clause against one packed sample."""
    return int(np.bitwise_count(include_pos & ~sample_words).sum()
               + np.bitwise_count(include_neg & sample_words).sum())


def _bank_sums(bank: PackedBank, samples: np.ndarray) -> np.ndarray:
    """Raw class sums of one bank over a (N, W) packed sample matrix."""
    neg_samples = ~samples
    sums = np.zeros(samples.shape[0], dtype=np.int64)
    for c in range(bank.include_pos.shape[0]):
        if bank.empty[c]:
            continue
        failed = (np.bitwise_count(samples & bank.include_neg[c]).sum(axis=1)
                  + np.bitwise_count(neg_samples & bank.include_pos[c]).sum(axis=1))
        votes = np.maximum(bank.effective_limit[c] - failed.astype(np.int64), 0)
        sums += bank.polarity[c] * votes
    return sums


def _predict_rows(packed: PackedModel, samples: np.ndarray) -> np.ndarray:
    if packed.mode == MODE_BINARY:
        return (_bank_sums(packed.banks[0], samples) >= 0).astype(np.int64)
    sums = np.stack([_bank_sums(b, samples) for b in packed.banks], axis=1)
    return np.argmax(sums, axis=1)  # argmax takes the lowest class id on ties


def predict(model, sample: BitSample) -> int:
    """Predict one sample from either a Model or a PackedModel."""
    if isinstance(model, Model):
        model = pack_model(model)
    if sample.width != model.feature_count:
        raise ValueError(
            f"sample width {sample.width} does not match model F={model.feature_count}"
        )
    return int(_predict_rows(model, sample.words[None, :])[0])


def predict_batch(packed: PackedModel, dataset: BitDataset, threads: int = 1,
                  repetitions: int = 3, warmup: int = 1
                  ) -> tuple[np.ndarray, ThroughputReport]:
    """Predict a whole container; throughput is the median over timed reps."""
    if dataset.feature_count != packed.feature_count:
        raise ValueError(
            f"dataset F={dataset.feature_count} does not match model "
            f"F={packed.feature_count}"
        )
    samples = dataset.samples
    n = samples.shape[0]

    def run() -> np.ndarray:
        if threads <= 1 or n < threads:
            return _predict_rows(packed, samples)
        shards = np.array_split(np.arange(n), threads)
        out = np.empty(n, dtype=np.int64)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [(idx, pool.submit(_predict_rows, packed, samples[idx]))
                       for idx in shards]
            for idx, fut in futures:
                out[idx] = fut.result()
        return out

    for _ in range(warmup):
        run()
    labels = None
    times = []
    for _ in range(max(1, repetitions)):
        start = time.perf_counter()
        labels = run()
        times.append(time.perf_counter() - start)
    elapsed = float(np.median(times))
    pps = n / elapsed if elapsed > 0 else float("inf")
    report = ThroughputReport(
        predictions_per_second=pps,
        bytes_per_second=pps * packed.feature_count / 8.0,
        batch_size=n,
        threads=threads,
    )
    return labels, report
