"""Streaming ingestion: token streams -> histograms -> fingerprints.

The histogram (symbol -> count) is the sufficient statistic of a sample; the
fingerprint (multiplicity j -> number of symbols seen exactly j times) is a
further summary and is the only thing any estimator in this package consumes.
Everything here runs in one pass with memory proportional to the number of
distinct symbols, never to the sample size.
"""

from __future__ import annotations

import io
import math
from collections import Counter
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Mapping, Sequence, Union

import numpy as np

from .errors import (
    DecodeError,
    EmptyInputError,
    FingerprintFormatError,
    ParameterError,
)

TokenSource = Union[str, bytes, IO, Iterable[str]]


@dataclass(frozen=True)
class TokenizerConfig:
    """Whitespace tokenizer settings: lowercase and drop punctuation by default."""

    case_fold: bool = True
    strip_punctuation: bool = True


@dataclass(frozen=True)
class Histogram:
    """Occurrence counts per symbol.

    ``counts`` maps a symbol (string token or integer id, anything hashable)
    to its positive occurrence count; ``n`` is the total sample size.
    """

    counts: Mapping
    n: int

    def __post_init__(self):
        total = 0
        for sym, c in self.counts.items():
            if c < 1 or c != int(c):
                raise ParameterError(f"histogram count for {sym!r} must be a positive integer, got {c!r}")
            total += c
        if total != self.n:
            raise ParameterError(f"histogram counts sum to {total}, expected n={self.n}")

    @property
    def distinct(self) -> int:
        return len(self.counts)


@dataclass(frozen=True)
class Fingerprint:
    """Multiplicity profile: ``h[j]`` symbols were observed exactly j times."""

    h: Mapping[int, int]
    n: int

    def __post_init__(self):
        total = 0
        for j, c in self.h.items():
            if j < 1 or j != int(j):
                raise ParameterError(f"multiplicity {j!r} must be a positive integer")
            if c < 1 or c != int(c):
                raise ParameterError(f"fingerprint count h_{j} must be a positive integer, got {c!r}")
            total += j * c
        if total != self.n:
            raise ParameterError(f"fingerprint implies {total} samples, expected n={self.n}")

    @property
    def distinct(self) -> int:
        """Number of distinct observed symbols."""
        return sum(self.h.values())

    def get(self, j: int, default: int = 0) -> int:
        return self.h.get(j, default)

    def items(self):
        return self.h.items()


def _iter_decoded_lines(source: TokenSource, encoding: str) -> Iterator[str]:
    if isinstance(source, str):
        yield from source.splitlines()
        return
    if isinstance(source, bytes):
        try:
            yield from source.decode(encoding).splitlines()
        except UnicodeDecodeError as exc:
            raise DecodeError(
                f"invalid {encoding} byte at offset {exc.start}: {exc.reason}",
                byte_offset=exc.start,
            ) from exc
        return
    if isinstance(source, io.TextIOBase):
        yield from source
        return
    if hasattr(source, "read"):
        # binary stream: decode line by line, tracking the absolute byte offset
        offset = 0
        for raw in source:
            try:
                yield raw.decode(encoding)
            except UnicodeDecodeError as exc:
                raise DecodeError(
                    f"invalid {encoding} byte at offset {offset + exc.start}: {exc.reason}",
                    byte_offset=offset + exc.start,
                ) from exc
            offset += len(raw)
        return
    # fall back: already an iterable of text lines
    yield from source


def tokenize(
    source: TokenSource,
    cfg: TokenizerConfig = TokenizerConfig(),
    encoding: str = "utf-8",
) -> Iterator[str]:
    """Split text into tokens on whitespace, one streaming pass.

    Tokens are lowercased when ``cfg.case_fold`` and stripped of every
    character that is not a letter or digit when ``cfg.strip_punctuation``;
    tokens that become empty are dropped.  ``source`` may be a string, raw
    bytes, an open (text or binary) file, or an iterable of lines.  Invalid
    bytes raise :class:`DecodeError` carrying the byte offset.
    """
    for line in _iter_decoded_lines(source, encoding):
        if cfg.case_fold:
            line = line.lower()
        for tok in line.split():
            if cfg.strip_punctuation and not tok.isalnum():
                tok = "".join(ch for ch in tok if ch.isalnum())
                if not tok:
                    continue
            yield tok


def build_histogram(tokens: Iterable) -> Histogram:
    """Count occurrences of each symbol in one pass."""
    counts = Counter(tokens)
    return Histogram(counts=counts, n=counts.total())


def fingerprint_of(hist: Histogram) -> Fingerprint:
    """Tally how many symbols occur exactly j times, for each j."""
    h = Counter(hist.counts.values())
    return Fingerprint(h=dict(h), n=hist.n)


def fingerprint_from_counts(counts: np.ndarray) -> Fingerprint:
    """Fingerprint straight from a dense count vector (zeros ignored)."""
    nz = counts[counts > 0]
    if nz.size == 0:
        return Fingerprint(h={}, n=0)
    mult, num = np.unique(nz, return_counts=True)
    n = int(np.dot(mult, num))
    return Fingerprint(h=dict(zip(mult.tolist(), num.tolist())), n=n)


def read_fingerprint_file(path) -> Fingerprint:
    """Parse a ``j h_j`` fingerprint file.

    One ``j h_j`` pair per line (ASCII decimal, whitespace separated), ``j``
    strictly increasing, ``h_j >= 1``.  Lines starting with ``#`` and blank
    lines are ignored.  Malformed content raises
    :class:`FingerprintFormatError` with the offending line number.
    """
    h: dict[int, int] = {}
    prev_j = 0
    with open(path, "r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, start=1):
            body = line.strip()
            if not body or body.startswith("#"):
                continue
            parts = body.split()
            if len(parts) != 2:
                raise FingerprintFormatError(
                    f"{path}:{lineno}: expected 'j h_j', got {body!r}", line_number=lineno
                )
            try:
                j, hj = int(parts[0]), int(parts[1])
            except ValueError as exc:
                raise FingerprintFormatError(
                    f"{path}:{lineno}: non-integer field in {body!r}", line_number=lineno
                ) from exc
            if j == prev_j:
                raise FingerprintFormatError(
                    f"{path}:{lineno}: duplicate multiplicity j={j}", line_number=lineno
                )
            if j < prev_j:
                raise FingerprintFormatError(
                    f"{path}:{lineno}: multiplicities must be strictly increasing "
                    f"(j={j} after {prev_j})",
                    line_number=lineno,
                )
            if j < 1 or hj < 1:
                raise FingerprintFormatError(
                    f"{path}:{lineno}: j and h_j must be >= 1, got j={j} h_j={hj}",
                    line_number=lineno,
                )
            h[j] = hj
            prev_j = j
    n = sum(j * c for j, c in h.items())
    return Fingerprint(h=h, n=n)


def write_fingerprint_file(fp: Fingerprint, path) -> None:
    """Write ``j h_j`` lines in ascending j; inverse of :func:`read_fingerprint_file`."""
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        for j in sorted(fp.h):
            fh.write(f"{j} {fp.h[j]}\n")


def resample(units: Sequence, fraction: float, seed: int) -> list:
    """Draw ``ceil(fraction * len(units))`` units uniformly with replacement.

    A unit is either a single token (word resampling) or a sequence of tokens
    (paragraph resampling); drawn sequences are concatenated in draw order.
    Deterministic for a fixed seed.
    """
    if len(units) == 0:
        raise EmptyInputError("cannot resample from an empty corpus")
    if not 0.0 < fraction <= 1.0:
        raise ParameterError(f"fraction must be in (0, 1], got {fraction}")
    m = math.ceil(fraction * len(units))
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    out: list = []
    for i in rng.integers(0, len(units), size=m):
        unit = units[int(i)]
        if isinstance(unit, (list, tuple)):
            out.extend(unit)
        else:
            out.append(unit)
    return out


def split_paragraphs(text: str) -> list[str]:
    """Split raw text into blank-line separated paragraphs."""
    paras = [p for p in text.split("\n\n") if p.strip()]
    return paras
