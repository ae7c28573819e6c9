"""Booleanization pipelines: n-gram presence bits for text, fixed-kernel
convolution plus histogram thresholding (thermometer encoding) for images.

Both pipelines are deterministic: vocabulary and feature selection break ties
lexicographically, image thresholds come from equally spaced quantiles of the
pooled fit-set histogram. Specs round-trip through plain dicts so they can be
embedded in the model file.
"""

from __future__ import annotations

import re
from collections import Counter

import numpy as np
from scipy.ndimage import correlate

from .bits import BitSample, pack_bits

_TOKEN_RE = re.compile(r"[^0-9a-z]+")


def tokenize(text: str) -> list[str]:
    return [t for t in _TOKEN_RE.split(text.lower()) if t]


class TextBooleanizer:
    """Presence bits for the top document-frequency n-grams of a corpus."""

    kind = "text"

    def __init__(self, vocab_size: int, max_ngram: int, feature_count: int):
        if vocab_size < 1 or max_ngram < 1 or feature_count < 1:
            raise ValueError("vocab_size, max_ngram, feature_count must be >= 1")
        self.vocab_size = vocab_size
        self.max_ngram = max_ngram
        self.feature_count = feature_count
        self.features: list[tuple[str, ...]] | None = None
        self._index: dict[tuple[str, ...], int] | None = None

    @property
    def fitted(self) -> bool:
        return self.features is not None

    def fit(self, corpus) -> "TextBooleanizer":
        docs = [tokenize(doc) for doc in corpus]
        if not docs:
            raise ValueError("empty corpus")
        unigram_df = Counter()
        for tokens in docs:
            unigram_df.update(set(tokens))
        vocab = set(
            tok for tok, _ in sorted(unigram_df.items(),
                                     key=lambda kv: (-kv[1], kv[0]))[:self.vocab_size]
        )
        ngram_df = Counter()
        for tokens in docs:
            seen = set()
            for n in range(1, self.max_ngram + 1):
                for i in range(len(tokens) - n + 1):
                    gram = tuple(tokens[i:i + n])
                    if all(t in vocab for t in gram):
                        seen.add(gram)
            ngram_df.update(seen)
        if len(ngram_df) < self.feature_count:
            raise ValueError(
                f"corpus yields only {len(ngram_df)} candidate n-grams, "
                f"need {self.feature_count}"
            )
        ranked = sorted(ngram_df.items(), key=lambda kv: (-kv[1], kv[0]))
        self.features = [gram for gram, _ in ranked[:self.feature_count]]
        self._index = {g: j for j, g in enumerate(self.features)}
        return self

    def transform(self, document: str) -> BitSample:
        if not self.fitted:
            raise ValueError("booleanizer is not fitted")
        tokens = tokenize(document)
        bits = np.zeros(self.feature_count, dtype=bool)
        index = self._index
        for n in range(1, self.max_ngram + 1):
            for i in range(len(tokens) - n + 1):
                j = index.get(tuple(tokens[i:i + n]))
                if j is not None:
                    bits[j] = True
        return BitSample.from_bools(bits)

    def to_dict(self) -> dict:
        if not self.fitted:
            raise ValueError("booleanizer is not fitted")
        return {
            "kind": self.kind,
            "vocab_size": self.vocab_size,
            "max_ngram": self.max_ngram,
            "feature_count": self.feature_count,
            "features": [" ".join(g) for g in self.features],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TextBooleanizer":
        spec = cls(d["vocab_size"], d["max_ngram"], d["feature_count"])
        spec.features = [tuple(s.split(" ")) for s in d["features"]]
        spec._index = {g: j for j, g in enumerate(spec.features)}
        return spec


def sobel_x() -> np.ndarray:
    return np.array([[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]], dtype=np.float64)


def sobel_y() -> np.ndarray:
    return sobel_x().T.copy()


def log_kernel(size: int, sigma: float) -> np.ndarray:
    """Laplacian-of-Gaussian kernel, zero-sum normalized."""
    half = size // 2
    y, x = np.mgrid[-half:half + 1, -half:half + 1].astype(np.float64)
    r2 = x * x + y * y
    k = (r2 - 2 * sigma ** 2) / sigma ** 4 * np.exp(-r2 / (2 * sigma ** 2))
    return k - k.mean()


def default_kernels() -> list[np.ndarray | None]:
    """Raw map (None) plus edge-detection kernels at 3x3, 5x5, 7x7."""
    return [None, sobel_x(), sobel_y(), log_kernel(5, 1.0), log_kernel(7, 1.4)]


class ImageBooleanizer:
    """Thermometer encoding of fixed-kernel feature maps.

    Each map is convolved with zero padding; thresholds are equally spaced
    quantiles of the pooled fit-set histogram; bit (map, pixel, t) is 1 iff
    the convolved value is strictly greater than threshold t.
    """

    kind = "image"

    def __init__(self, kernels: list[np.ndarray | None] | None = None,
                 bits_per_map: int = 8):
        if bits_per_map < 1:
            raise ValueError("bits_per_map must be >= 1")
        self.kernels = default_kernels() if kernels is None else kernels
        self.bits_per_map = bits_per_map
        self.thresholds: list[np.ndarray] | None = None
        self.image_shape: tuple[int, int] | None = None

    @property
    def fitted(self) -> bool:
        return self.thresholds is not None

    @property
    def feature_count(self) -> int:
        if self.image_shape is None:
            raise ValueError("booleanizer is not fitted")
        h, w = self.image_shape
        return len(self.kernels) * h * w * self.bits_per_map

    def _apply_kernel(self, image: np.ndarray, kernel) -> np.ndarray:
        if kernel is None:
            return image.astype(np.float64)
        return correlate(image.astype(np.float64), kernel,
                         mode="constant", cval=0.0)

    def fit(self, images) -> "ImageBooleanizer":
        images = np.asarray(images)
        if images.ndim != 3 or images.shape[0] == 0:
            raise ValueError("expected a nonempty (N, H, W) image stack")
        self.image_shape = images.shape[1:]
        qs = np.arange(1, self.bits_per_map + 1) / (self.bits_per_map + 1)
        self.thresholds = []
        for kernel in self.kernels:
            pooled = np.stack([self._apply_kernel(img, kernel) for img in images])
            self.thresholds.append(np.quantile(pooled.ravel(), qs))
        return self

    def transform(self, image: np.ndarray) -> BitSample:
        if not self.fitted:
            raise ValueError("booleanizer is not fitted")
        image = np.asarray(image)
        if image.shape != self.image_shape:
            raise ValueError(
                f"image shape {image.shape} does not match fitted {self.image_shape}"
            )
        parts = []
        for kernel, th in zip(self.kernels, self.thresholds):
            fmap = self._apply_kernel(image, kernel).ravel()
            # pixel-major, threshold-minor: 1s form a prefix per pixel
            parts.append(fmap[:, None] > th[None, :])
        bits = np.concatenate([p.ravel() for p in parts])
        return BitSample(pack_bits(bits), bits.shape[0])

    def to_dict(self) -> dict:
        if not self.fitted:
            raise ValueError("booleanizer is not fitted")
        return {
            "kind": self.kind,
            "bits_per_map": self.bits_per_map,
            "image_shape": list(self.image_shape),
            "kernels": [None if k is None else np.asarray(k).tolist()
                        for k in self.kernels],
            "thresholds": [t.tolist() for t in self.thresholds],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ImageBooleanizer":
        kernels = [None if k is None else np.asarray(k, dtype=np.float64)
                   for k in d["kernels"]]
        spec = cls(kernels=kernels, bits_per_map=d["bits_per_map"])
        spec.image_shape = tuple(d["image_shape"])
        spec.thresholds = [np.asarray(t, dtype=np.float64) for t in d["thresholds"]]
        return spec


def booleanizer_from_dict(d: dict):
    if d["kind"] == "text":
        return TextBooleanizer.from_dict(d)
    if d["kind"] == "image":
        return ImageBooleanizer.from_dict(d)
    raise ValueError(f"unknown booleanizer kind {d['kind']!r}")
