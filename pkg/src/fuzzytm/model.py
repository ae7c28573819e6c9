"""Model state: automaton layouts, clause banks, include-mask cache, serialization.

Each Tsetlin Automaton is one byte with 256 states. States >= 128 mean the
literal is included; states saturate at 0 and 255. Fresh automata start at 127,
the weakest exclude state next to the decision boundary.
"""

from __future__ import annotations

import json
import struct
import zlib
from dataclasses import dataclass, field

import numpy as np

INCLUDE_THRESHOLD = 128
INITIAL_STATE = 127
STATE_MIN = 0
STATE_MAX = 255

MODEL_MAGIC = b"FZTM"
MODEL_VERSION = 1

MODE_BINARY = "binary"
MODE_MULTICLASS = "multiclass"
_MODE_CODES = {MODE_BINARY: 0, MODE_MULTICLASS: 1}
_CODE_MODES = {v: k for k, v in _MODE_CODES.items()}


class ModelFormatError(ValueError):
    """Raised for bad magic, version mismatch, truncation or checksum failure."""


@dataclass
class Hyperparameters:
    T: int
    S: float
    L: int
    LF: int
    clauses_per_class: int

    def validate(self, feature_count: int | None = None) -> None:
        if self.T < 1:
            raise ValueError(f"T must be a positive integer, got {self.T}")
        if self.S < 1:
            raise ValueError(f"S must be >= 1, got {self.S}")
        if self.L < 1:
            raise ValueError(f"L must be >= 1, got {self.L}")
        if self.LF < 1:
            raise ValueError(f"LF must be >= 1, got {self.LF}")
        if self.clauses_per_class < 1:
            raise ValueError(f"clauses_per_class must be >= 1, got {self.clauses_per_class}")
        if feature_count is not None and self.LF > 2 * feature_count:
            raise ValueError(
                f"LF={self.LF} exceeds the literal universe 2*F={2 * feature_count}"
            )

    @property
    def decrement_probability(self) -> float:
        return 1.0 / self.S


class Clause:
    """A view of one clause: automaton states over 2F literals plus a polarity.

    `include_mask` is a cache of states >= 128 and must be resynchronized after
    every feedback application (sync_include_mask).
    """

    __slots__ = ("states", "include_mask", "polarity")

    def __init__(self, states: np.ndarray, include_mask: np.ndarray, polarity: int):
        self.states = states
        self.include_mask = include_mask
        self.polarity = polarity

    @property
    def literal_count(self) -> int:
        return int(self.include_mask.sum())

    @property
    def num_literal_slots(self) -> int:
        return self.states.shape[0]


def sync_include_mask(clause: Clause) -> Clause:
    np.greater_equal(clause.states, INCLUDE_THRESHOLD, out=clause.include_mask)
    return clause


class ClauseBank:
    """All clauses belonging to one class (or the shared bank in binary mode)."""

    def __init__(self, class_id: int, n_clauses: int, feature_count: int,
                 hyper: Hyperparameters):
        if n_clauses != 1 and n_clauses % 2 != 0:
            raise ValueError("clause count must be 1 or even (polarity halving)")
        self.class_id = class_id
        self.feature_count = feature_count
        self.hyper = hyper
        self.states = np.full((n_clauses, 2 * feature_count), INITIAL_STATE, dtype=np.uint8)
        self.include = np.zeros((n_clauses, 2 * feature_count), dtype=bool)
        self.polarity = np.ones(n_clauses, dtype=np.int8)
        if n_clauses > 1:
            self.polarity[n_clauses // 2:] = -1

    @property
    def n_clauses(self) -> int:
        return self.states.shape[0]

    def clause(self, i: int) -> Clause:
        return Clause(self.states[i], self.include[i], int(self.polarity[i]))

    def clauses(self):
        for i in range(self.n_clauses):
            yield self.clause(i)

    def sync_all_masks(self) -> None:
        np.greater_equal(self.states, INCLUDE_THRESHOLD, out=self.include)


@dataclass
class Model:
    mode: str
    feature_count: int
    classes: int
    hyper: Hyperparameters
    banks: list[ClauseBank] = field(default_factory=list)
    booleanizer_descriptor: dict | None = None
    seed: int = 0

    @property
    def total_clauses(self) -> int:
        return sum(b.n_clauses for b in self.banks)

    @property
    def state_matrix_bytes(self) -> int:
        return self.total_clauses * 2 * self.feature_count

    def state_bytes(self) -> bytes:
        return b"".join(b.states.tobytes() for b in self.banks)


def new_model(mode: str, feature_count: int, classes: int,
              hyper: Hyperparameters, seed: int = 0) -> Model:
    if mode not in _MODE_CODES:
        raise ValueError(f"unknown mode {mode!r}")
    if feature_count < 1:
        raise ValueError("feature_count must be >= 1")
    if classes < 2:
        raise ValueError("need at least 2 classes")
    if mode == MODE_BINARY and classes != 2:
        raise ValueError("binary mode requires exactly 2 classes")
    hyper.validate(feature_count)
    model = Model(mode=mode, feature_count=feature_count, classes=classes,
                  hyper=hyper, seed=seed)
    if mode == MODE_BINARY:
        # One shared bank; +1 clauses vote for class 1, -1 for class 0.
        model.banks = [ClauseBank(0, 2 * hyper.clauses_per_class, feature_count, hyper)]
    else:
        model.banks = [ClauseBank(c, hyper.clauses_per_class, feature_count, hyper)
                       for c in range(classes)]
    return model


# Serialization: fixed little-endian header, JSON booleanizer blob, raw state
# matrix, trailing CRC32 over everything before it.

_HEADER_FMT = "<4sIBIIIIdIII"


def save_model(model: Model, path) -> None:
    desc = b""
    if model.booleanizer_descriptor is not None:
        desc = json.dumps(model.booleanizer_descriptor, sort_keys=True).encode("utf-8")
    h = model.hyper
    header = struct.pack(
        _HEADER_FMT, MODEL_MAGIC, MODEL_VERSION, _MODE_CODES[model.mode],
        model.feature_count, model.classes, h.T, h.L, float(h.S), h.LF,
        h.clauses_per_class, len(desc),
    )
    payload = header + desc + model.state_bytes()
    with open(path, "wb") as f:
        f.write(payload)
        f.write(struct.pack("<I", zlib.crc32(payload)))


def load_model(path) -> Model:
    with open(path, "rb") as f:
        blob = f.read()
    hsize = struct.calcsize(_HEADER_FMT)
    if len(blob) < hsize + 4:
        raise ModelFormatError("truncated model file")
    body, (crc,) = blob[:-4], struct.unpack("<I", blob[-4:])
    if zlib.crc32(body) != crc:
        raise ModelFormatError("checksum failure")
    (magic, version, mode_code, feature_count, classes, T, L, S, LF,
     clauses_per_class, desc_len) = struct.unpack(_HEADER_FMT, body[:hsize])
    if magic != MODEL_MAGIC:
        raise ModelFormatError("bad magic")
    if version != MODEL_VERSION:
        raise ModelFormatError(f"unsupported version {version}")
    if mode_code not in _CODE_MODES:
        raise ModelFormatError(f"unknown mode code {mode_code}")
    offset = hsize
    desc = None
    if desc_len:
        desc = json.loads(body[offset:offset + desc_len].decode("utf-8"))
    offset += desc_len
    hyper = Hyperparameters(T=T, S=S, L=L, LF=LF, clauses_per_class=clauses_per_class)
    model = new_model(_CODE_MODES[mode_code], feature_count, classes, hyper)
    model.booleanizer_descriptor = desc
    expected = model.state_matrix_bytes
    states = body[offset:]
    if len(states) != expected:
        raise ModelFormatError(
            f"state matrix size mismatch: expected {expected} bytes, got {len(states)}"
        )
    pos = 0
    for bank in model.banks:
        n = bank.states.size
        bank.states[...] = np.frombuffer(
            states, dtype=np.uint8, count=n, offset=pos
        ).reshape(bank.states.shape)
        pos += n
        bank.sync_all_masks()
    return model
