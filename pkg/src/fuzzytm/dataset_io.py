"""Dataset loading: IDX image/label files, the IMDb review directory layout,
and the packed bit-dataset container shared by training and inference.

Container layout (little-endian): magic, version, N, F, classes; N int32
labels; N rows of 64-bit-aligned packed bits; trailing CRC32 of everything
before it. Row padding bits are zero.
"""

from __future__ import annotations

import gzip
import struct
import zlib
from pathlib import Path

import numpy as np

from .bits import BitSample, pack_bits, words_per_row

CONTAINER_MAGIC = b"FZDS"
CONTAINER_VERSION = 1

IDX_IMAGE_MAGIC = 0x00000803
IDX_LABEL_MAGIC = 0x00000801


class DatasetFormatError(ValueError):
    """Raised for malformed IDX or container files."""


class BitDataset:
    """Row-major packed bit matrix (N rows, F bits) with integer labels."""

    def __init__(self, samples: np.ndarray, labels: np.ndarray, feature_count: int,
                 classes: int):
        samples = np.ascontiguousarray(samples, dtype=np.uint64)
        labels = np.asarray(labels, dtype=np.int64)
        if samples.ndim != 2 or samples.shape[1] != words_per_row(feature_count):
            raise ValueError("samples must be (N, words_per_row(F)) uint64")
        if labels.shape != (samples.shape[0],):
            raise ValueError("labels length must match sample count")
        if labels.size and (labels.min() < 0 or labels.max() >= classes):
            raise ValueError("labels must lie in [0, classes)")
        self.samples = samples
        self.labels = labels
        self.feature_count = feature_count
        self.classes = classes

    @property
    def n_samples(self) -> int:
        return self.samples.shape[0]

    def sample(self, i: int) -> BitSample:
        return BitSample(self.samples[i], self.feature_count)

    @classmethod
    def from_bools(cls, bools: np.ndarray, labels, classes: int) -> "BitDataset":
        arr = np.asarray(bools, dtype=bool)
        return cls(pack_bits(arr), labels, arr.shape[1], classes)

    @classmethod
    def from_bit_samples(cls, samples: list[BitSample], labels,
                         classes: int) -> "BitDataset":
        if not samples:
            raise ValueError("empty sample list")
        width = samples[0].width
        mat = np.stack([s.words for s in samples])
        return cls(mat, labels, width, classes)


def _read_exact(f, n: int, what: str) -> bytes:
    data = f.read(n)
    if len(data) != n:
        raise DatasetFormatError(f"truncated {what}")
    return data


def _open_maybe_gz(path):
    path = Path(path)
    if path.suffix == ".gz":
        return gzip.open(path, "rb")
    return open(path, "rb")


def load_idx(images_path, labels_path) -> tuple[np.ndarray, np.ndarray]:
    """Parse big-endian IDX image/label files (gzip transparently supported)."""
    with _open_maybe_gz(images_path) as f:
        magic, count, rows, cols = struct.unpack(">IIII", _read_exact(f, 16, "IDX header"))
        if magic != IDX_IMAGE_MAGIC:
            raise DatasetFormatError(f"bad IDX image magic 0x{magic:08x}")
        raw = _read_exact(f, count * rows * cols, "IDX image payload")
        images = np.frombuffer(raw, dtype=np.uint8).reshape(count, rows, cols)
    with _open_maybe_gz(labels_path) as f:
        magic, n_labels = struct.unpack(">II", _read_exact(f, 8, "IDX label header"))
        if magic != IDX_LABEL_MAGIC:
            raise DatasetFormatError(f"bad IDX label magic 0x{magic:08x}")
        labels = np.frombuffer(_read_exact(f, n_labels, "IDX label payload"),
                               dtype=np.uint8).copy()
    if count != n_labels:
        raise DatasetFormatError(
            f"image/label count mismatch: {count} images vs {n_labels} labels"
        )
    return images, labels


def load_imdb_dir(root) -> dict:
    """Load the aclImdb directory layout; returns train/test docs and labels.

    File ordering is stable (sorted by name within each pos/neg directory,
    neg before pos) so repeated loads are identical.
    """
    root = Path(root)
    out = {}
    for split in ("train", "test"):
        docs, labels = [], []
        for label, sub in ((0, "neg"), (1, "pos")):
            d = root / split / sub
            if not d.is_dir():
                raise DatasetFormatError(f"missing directory {d}")
            files = sorted(d.iterdir(), key=lambda p: p.name)
            if not files:
                raise DatasetFormatError(f"empty directory {d}")
            for path in files:
                docs.append(path.read_text(encoding="utf-8", errors="replace"))
                labels.append(label)
        out[split] = (docs, labels)
    return out


_CONTAINER_HEADER = "<4sIQQI"


def write_container(dataset: BitDataset, path) -> None:
    header = struct.pack(_CONTAINER_HEADER, CONTAINER_MAGIC, CONTAINER_VERSION,
                         dataset.n_samples, dataset.feature_count, dataset.classes)
    labels = dataset.labels.astype("<i4").tobytes()
    payload = dataset.samples.astype("<u8").tobytes()
    body = header + labels + payload
    with open(path, "wb") as f:
        f.write(body)
        f.write(struct.pack("<I", zlib.crc32(body)))


def read_container(path) -> BitDataset:
    with open(path, "rb") as f:
        blob = f.read()
    hsize = struct.calcsize(_CONTAINER_HEADER)
    if len(blob) < hsize + 4:
        raise DatasetFormatError("truncated container")
    body, (crc,) = blob[:-4], struct.unpack("<I", blob[-4:])
    if zlib.crc32(body) != crc:
        raise DatasetFormatError("checksum failure")
    magic, version, n, f_bits, classes = struct.unpack(_CONTAINER_HEADER, body[:hsize])
    if magic != CONTAINER_MAGIC:
        raise DatasetFormatError("bad magic")
    if version != CONTAINER_VERSION:
        raise DatasetFormatError(f"unsupported container version {version}")
    nwords = words_per_row(f_bits)
    expect = hsize + n * 4 + n * nwords * 8
    if len(body) != expect:
        raise DatasetFormatError(
            f"container size mismatch: expected {expect} bytes, got {len(body)}"
        )
    labels = np.frombuffer(body, dtype="<i4", count=n, offset=hsize).astype(np.int64)
    samples = np.frombuffer(body, dtype="<u8", count=n * nwords,
                            offset=hsize + n * 4).reshape(n, nwords)
    return BitDataset(samples.copy(), labels, f_bits, classes)
