"""Named experiment presets exposed through the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import MODE_BINARY, MODE_MULTICLASS, Hyperparameters


@dataclass(frozen=True)
class Preset:
    name: str
    mode: str
    classes: int
    hyper: Hyperparameters
    epochs: int
    booleanizer: dict = field(default_factory=dict)


PRESETS = {
    "imdb-binary-1c": Preset(
        name="imdb-binary-1c",
        mode=MODE_BINARY,
        classes=2,
        hyper=Hyperparameters(T=18, S=1000.0, L=64, LF=64, clauses_per_class=1),
        epochs=1000,
        booleanizer={"kind": "text", "vocab_size": 40000, "max_ngram": 4,
                     "feature_count": 12800},
    ),
    "imdb-optimal-200c": Preset(
        name="imdb-optimal-200c",
        mode=MODE_MULTICLASS,
        classes=2,
        hyper=Hyperparameters(T=32, S=2000.0, L=100, LF=10, clauses_per_class=200),
        epochs=200,
        booleanizer={"kind": "text", "vocab_size": 65535, "max_ngram": 4,
                     "feature_count": 70000},
    ),
    "fmnist-tiny": Preset(
        name="fmnist-tiny",
        mode=MODE_MULTICLASS,
        classes=10,
        hyper=Hyperparameters(T=80, S=1000.0, L=1200, LF=1200, clauses_per_class=2),
        epochs=1000,
        booleanizer={"kind": "image", "bits_per_map": 8},
    ),
    "fmnist-small": Preset(
        name="fmnist-small",
        mode=MODE_MULTICLASS,
        classes=10,
        hyper=Hyperparameters(T=100, S=700.0, L=200, LF=200, clauses_per_class=20),
        epochs=1000,
        booleanizer={"kind": "image", "bits_per_map": 8},
    ),
}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(
            f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}"
        ) from None
