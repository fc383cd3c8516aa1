"""Alphabets, strings, sources and the zero-order information measures.

All logarithms are base 2, so every quantity is in bits.
"""

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

from sstlab.errors import SSTError


@dataclass(frozen=True)
class Alphabet:
    """An ordered set of single-character symbols; index order is significant."""

    symbols: Tuple[str, ...]

    def __post_init__(self):
        syms = tuple(self.symbols)
        object.__setattr__(self, "symbols", syms)
        if len(syms) < 2:
            raise SSTError("alphabet needs at least 2 symbols")
        if len(set(syms)) != len(syms):
            raise SSTError("alphabet symbols must be distinct")
        for s in syms:
            if not isinstance(s, str) or len(s) != 1 or not s.isprintable() or s.isspace():
                raise SSTError(f"invalid alphabet symbol {s!r}")

    @classmethod
    def from_string(cls, text: str) -> "Alphabet":
        return cls(tuple(text))

    @property
    def q(self) -> int:
        return len(self.symbols)

    def index(self, symbol: str) -> int:
        try:
            return self.symbols.index(symbol)
        except ValueError:
            raise SSTError(f"symbol {symbol!r} not in alphabet {''.join(self.symbols)!r}") from None

    def parse(self, text: str) -> "SymbolString":
        return SymbolString(self, tuple(self.index(ch) for ch in text))

    def format(self, indices: Iterable[int]) -> str:
        return "".join(self.symbols[i] for i in indices)

    def __str__(self):
        return "".join(self.symbols)


@dataclass(frozen=True)
class SymbolString:
    alphabet: Alphabet
    indices: Tuple[int, ...]

    def __post_init__(self):
        idx = tuple(self.indices)
        object.__setattr__(self, "indices", idx)
        q = self.alphabet.q
        for i in idx:
            if not 0 <= i < q:
                raise SSTError(f"symbol index {i} outside [0, {q})")

    def __len__(self):
        return len(self.indices)

    def __str__(self):
        return self.alphabet.format(self.indices)

    def counts(self) -> Tuple[int, ...]:
        c = Counter(self.indices)
        return tuple(c.get(a, 0) for a in range(self.alphabet.q))


@dataclass(frozen=True)
class SourceModel:
    alphabet: Alphabet
    probabilities: Tuple[float, ...]

    def __post_init__(self):
        p = tuple(float(x) for x in self.probabilities)
        object.__setattr__(self, "probabilities", p)
        if len(p) != self.alphabet.q:
            raise SSTError("one probability per alphabet symbol required")
        if any(x < 0 or not math.isfinite(x) for x in p):
            raise SSTError("probabilities must be finite and non-negative")
        if abs(math.fsum(p) - 1.0) > 1e-12:
            raise SSTError("probabilities must sum to 1")

    @classmethod
    def uniform(cls, alphabet: Alphabet) -> "SourceModel":
        return cls(alphabet, (1.0 / alphabet.q,) * alphabet.q)

    @property
    def is_uniform(self) -> bool:
        return len(set(self.probabilities)) == 1


def counts_info(counts: Sequence[int]) -> float:
    """Information content shared by every string with this count vector.

    Summed over the sorted counts so that permuted count vectors give
    bit-identical floats.
    """
    m = sum(counts)
    if m == 0:
        raise SSTError("information content is undefined for empty string")
    return math.fsum(c * math.log2(m / c) for c in sorted(counts) if c)


def information_content(s: SymbolString) -> float:
    """I(s) = -sum_j log2 p(s_j), with p the symbol frequencies within s."""
    if len(s) == 0:
        raise SSTError("information content is undefined for empty string")
    return counts_info(s.counts())


def empirical_entropy(s: SymbolString) -> float:
    """Zero-order empirical entropy H0(s), in bits per symbol."""
    n = len(s)
    if n == 0:
        raise SSTError("empirical entropy is undefined for empty string")
    return max(0.0, -math.fsum((c / n) * math.log2(c / n) for c in s.counts() if c))


def source_shannon_entropy(m: SourceModel) -> float:
    return max(0.0, -math.fsum(p * math.log2(p) for p in m.probabilities if p > 0))


def string_probability(s: SymbolString, m: SourceModel) -> float:
    if s.alphabet != m.alphabet:
        raise SSTError("string and source use different alphabets")
    if m.is_uniform:
        return float(m.alphabet.q) ** -len(s)
    return math.prod(m.probabilities[i] for i in s.indices)
