"""Canonical Huffman codes and codelength accounting for symbol strings."""

import heapq
import math
from collections import Counter
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from sstlab.core import SymbolString
from sstlab.errors import SSTError


@dataclass(frozen=True)
class PrefixCode:
    """Codeword per token index; codewords are strings of '0'/'1'."""

    tokens: Tuple[Tuple[int, str], ...]

    @property
    def codewords(self) -> List[str]:
        return [c for _, c in sorted(self.tokens)]

    @property
    def lengths(self) -> List[int]:
        return [len(c) for c in self.codewords]

    def expected_length(self, weights: Sequence[float]) -> float:
        total = math.fsum(weights)
        return math.fsum(w * n for w, n in zip(weights, self.lengths)) / total

    def kraft_sum(self) -> float:
        return math.fsum(2.0 ** -n for n in self.lengths)

    def is_prefix_free(self) -> bool:
        words = sorted(self.codewords)
        # in sorted order a prefix sits immediately before some extension of it
        return all(not b.startswith(a) for a, b in zip(words, words[1:]))


def huffman_lengths(weights: Sequence[float]) -> List[int]:
    if not weights:
        raise SSTError("huffman code needs at least one weight")
    if any(not (w > 0) or not math.isfinite(w) for w in weights):
        raise SSTError("huffman weights must be positive and finite")
    n = len(weights)
    if n == 1:
        return [1]
    # ties resolved by (weight, creation order) over weight-sorted tokens, so
    # the length assigned to each weight does not depend on input order
    order = sorted(range(n), key=lambda i: (weights[i], i))
    heap = [(weights[i], seq, [i]) for seq, i in enumerate(order)]
    heapq.heapify(heap)
    lengths = [0] * n
    seq = n
    while len(heap) > 1:
        w1, _, a = heapq.heappop(heap)
        w2, _, b = heapq.heappop(heap)
        for i in a + b:
            lengths[i] += 1
        heapq.heappush(heap, (w1 + w2, seq, a + b))
        seq += 1
    return lengths


def canonical_code(lengths: Sequence[int]) -> PrefixCode:
    """Assign canonical codewords in (length, token index) order."""
    code = 0
    prev = 0
    out = []
    for n, tok in sorted((n, i) for i, n in enumerate(lengths)):
        code <<= n - prev
        out.append((tok, format(code, f"0{n}b")))
        code += 1
        prev = n
    return PrefixCode(tuple(sorted(out)))


def build_huffman(weights: Sequence[float]) -> PrefixCode:
    return canonical_code(huffman_lengths(weights))


def table_field_bits(q: int, gram: int) -> int:
    """Width of one entry of the serialized code-length table.

    ceil(log2(gram * ceil(log2(q**gram)) + 1)) bits per possible gram.
    """
    per_gram = (q ** gram - 1).bit_length()  # ceil(log2(q**gram)) for q**gram >= 2
    return (gram * per_gram).bit_length()  # ceil(log2(x + 1))


def table_overhead_bits(q: int, gram: int) -> int:
    return q ** gram * table_field_bits(q, gram)


def grams(s: SymbolString, gram: int, pad: str = "strict") -> List[Tuple[int, ...]]:
    if gram < 1:
        raise SSTError("gram must be >= 1")
    idx = list(s.indices)
    extra = -len(idx) % gram
    if extra:
        if pad == "strict":
            raise SSTError(f"length {len(idx)} is not divisible by gram {gram}")
        if pad != "repeat-last":
            raise SSTError(f"unknown pad policy {pad!r}")
        if not idx:
            raise SSTError("cannot pad an empty string")
        idx.extend([idx[-1]] * extra)
    return [tuple(idx[i:i + gram]) for i in range(0, len(idx), gram)]


def code_length(
    s: SymbolString, gram: int = 1, overhead: str = "none", pad: str = "strict"
) -> int:
    """Bits needed to Huffman-code ``s`` as non-overlapping gram blocks.

    ``overhead="table"`` adds a fixed-width code-length table with one entry
    for every possible gram (see ``table_field_bits``).
    """
    if overhead not in ("none", "table"):
        raise SSTError(f"unknown overhead policy {overhead!r}")
    blocks = grams(s, gram, pad)
    if not blocks:
        raise SSTError("cannot code an empty string")
    freq = Counter(blocks)
    symbols = sorted(freq)
    lengths = huffman_lengths([freq[b] for b in symbols])
    bits = sum(freq[b] * n for b, n in zip(symbols, lengths))
    if overhead == "table":
        width = table_field_bits(s.alphabet.q, gram)
        if max(lengths) >= 1 << width:
            raise SSTError(f"code length {max(lengths)} does not fit a {width}-bit table field")
        bits += table_overhead_bits(s.alphabet.q, gram)
    return bits
