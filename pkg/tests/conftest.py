import os
from pathlib import Path

import numpy as np
import pytest

from fuzzytm import BitSample, ClauseBank, Hyperparameters


def data_root() -> Path:
    return Path(os.environ.get("FUZZYTM_DATA_DIR", Path(__file__).parent.parent / "data"))


def imdb_root():
    root = data_root() / "aclImdb"
    return root if (root / "train" / "pos").is_dir() else None


def fmnist_paths():
    root = data_root() / "fashion-mnist"
    names = ["train-images-idx3-ubyte", "train-labels-idx1-ubyte",
             "t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte"]
    out = []
    for n in names:
        plain, gz = root / n, root / (n + ".gz")
        if plain.exists():
            out.append(plain)
        elif gz.exists():
            out.append(gz)
        else:
            return None
    return out


def make_bank(feature_count, n_clauses=2, T=10, S=10.0, L=100, LF=8):
    hyper = Hyperparameters(T=T, S=S, L=L, LF=LF, clauses_per_class=n_clauses)
    return ClauseBank(0, n_clauses, feature_count, hyper)


def set_includes(clause, positions):
    """Force the given literal positions to be included (state 128), rest 127."""
    clause.states[:] = 127
    for j in positions:
        clause.states[j] = 128
    clause.include_mask[:] = clause.states >= 128
    return clause


def random_clause(rng, feature_count, include_prob=0.3):
    from fuzzytm import sync_include_mask
    bank = make_bank(feature_count)
    clause = bank.clause(0)
    clause.states[:] = rng.integers(0, 256, size=2 * feature_count)
    # bias toward the requested include density
    sparse = rng.random(2 * feature_count) >= include_prob
    clause.states[sparse & (clause.states >= 128)] = 127
    sync_include_mask(clause)
    return clause


def random_sample(rng, feature_count):
    return BitSample.from_bools(rng.random(feature_count) < 0.5)


def oracle_evaluate(include, literals, lf, training):
    """Independent per-literal scalar oracle for fuzzy clause evaluation."""
    lc = sum(1 for b in include if b)
    failed = sum(1 for j in range(len(include)) if include[j] and not literals[j])
    limit = lf if (lc == 0 or lc > lf) else lc
    if lc == 0 and not training:
        return 0, failed, limit
    return max(0, limit - failed), failed, limit


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
