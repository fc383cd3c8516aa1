"""Exact combinatorics over composition classes.

A composition class is the set of all strings of length M sharing one
symbol-count vector.  Every member has the same information content, so
lowest-information selection can be done class by class instead of string
by string.  Members of a class are addressed by their lexicographic rank,
which lets a selection take a contiguous rank range of a class (a slab)
without listing the strings.
"""

import math
import random
from dataclasses import dataclass
from itertools import groupby
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from sstlab.core import counts_info
from sstlab.errors import InsufficientStrings, SSTError

MAX_ALPHABET = 16


@dataclass(frozen=True, order=True)
class CompositionClass:
    counts: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if any(c < 0 for c in self.counts):
            raise SSTError("class counts must be non-negative")

    @property
    def length(self) -> int:
        return sum(self.counts)

    @property
    def q(self) -> int:
        return len(self.counts)

    @property
    def multiplicity(self) -> int:
        return class_multiplicity(self)

    @property
    def info(self) -> float:
        return class_info(self)

    @property
    def tie_key(self) -> int:
        """prod c^c over the counts.

        For a fixed length M, I = M log2 M - log2(prod c^c), so a larger key
        means strictly lower information content and equal keys mean equal
        information content.
        """
        return math.prod(c ** c for c in self.counts if c)


def _compositions(m: int, q: int) -> Iterator[Tuple[int, ...]]:
    if q == 1:
        yield (m,)
        return
    for c in range(m + 1):
        for rest in _compositions(m - c, q - 1):
            yield (c,) + rest


def enumerate_classes(m: int, q) -> List[CompositionClass]:
    """All count vectors of length m over q symbols, ascending lexicographically.

    ``q`` may be an int or anything with a ``q`` attribute (an Alphabet).
    """
    q = getattr(q, "q", q)
    if m < 0:
        raise SSTError("length must be non-negative")
    if not 2 <= q <= MAX_ALPHABET:
        raise SSTError(f"alphabet size must be in [2, {MAX_ALPHABET}]")
    return [CompositionClass(c) for c in _compositions(m, q)]


def class_multiplicity(c: CompositionClass) -> int:
    # exact big-integer arithmetic; no wraparound is possible
    result = 1
    placed = 0
    for k in c.counts:
        placed += k
        result *= math.comb(placed, k)
    return result


def class_info(c: CompositionClass) -> float:
    if c.length == 0:
        raise SSTError("information content is undefined for empty string")
    return counts_info(c.counts)


def classes_tie(a: CompositionClass, b: CompositionClass) -> bool:
    if a.length != b.length:
        raise SSTError("can only compare classes of equal length")
    return a.tie_key == b.tie_key


def rank_in_class(indices: Sequence[int], q: int) -> int:
    """Lexicographic rank of a string among the permutations of its own multiset."""
    counts = [0] * q
    for i in indices:
        counts[i] += 1
    remaining = len(indices)
    rank = 0
    for sym in indices:
        # number of arrangements of what is left: remaining! / prod counts!
        total = _multinomial(counts, remaining)
        for a in range(sym):
            if counts[a]:
                rank += total * counts[a] // remaining
        counts[sym] -= 1
        remaining -= 1
    return rank


def unrank_in_class(counts: Sequence[int], rank: int) -> Tuple[int, ...]:
    counts = list(counts)
    remaining = sum(counts)
    total = _multinomial(counts, remaining)
    if not 0 <= rank < total:
        raise SSTError(f"rank {rank} outside class of size {total}")
    out = []
    while remaining:
        for a, c in enumerate(counts):
            if not c:
                continue
            block = total * c // remaining
            if rank < block:
                out.append(a)
                counts[a] -= 1
                remaining -= 1
                total = block
                break
            rank -= block
    return tuple(out)


def _multinomial(counts: Sequence[int], n: int) -> int:
    result = math.factorial(n)
    for c in counts:
        result //= math.factorial(c)
    return result


def _next_permutation(seq: List[int]) -> bool:
    i = len(seq) - 2
    while i >= 0 and seq[i] >= seq[i + 1]:
        i -= 1
    if i < 0:
        return False
    j = len(seq) - 1
    while seq[j] <= seq[i]:
        j -= 1
    seq[i], seq[j] = seq[j], seq[i]
    seq[i + 1:] = reversed(seq[i + 1:])
    return True


@dataclass(frozen=True)
class ClassSlab:
    """Members of ``cls`` with lexicographic rank in [offset, offset + taken)."""

    cls: CompositionClass
    taken: int
    offset: int = 0

    def __post_init__(self):
        if self.taken < 1 or self.offset < 0:
            raise SSTError("slab must take at least one string")
        if self.offset + self.taken > self.cls.multiplicity:
            raise SSTError("slab exceeds class multiplicity")

    def __contains__(self, indices) -> bool:
        indices = tuple(indices)
        if len(indices) != self.cls.length:
            return False
        counts = [0] * self.cls.q
        for i in indices:
            if not 0 <= i < self.cls.q:
                return False
            counts[i] += 1
        if tuple(counts) != self.cls.counts:
            return False
        return self.offset <= rank_in_class(indices, self.cls.q) < self.offset + self.taken

    def members(self) -> Iterator[Tuple[int, ...]]:
        seq = list(unrank_in_class(self.cls.counts, self.offset))
        for k in range(self.taken):
            if k:
                _next_permutation(seq)
            yield tuple(seq)

    def member(self, k: int) -> Tuple[int, ...]:
        return unrank_in_class(self.cls.counts, self.offset + k)


@dataclass(frozen=True)
class SlabSet:
    length: int
    slabs: Tuple[ClassSlab, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "slabs", tuple(self.slabs))
        seen = set()
        for s in self.slabs:
            if s.cls.length != self.length:
                raise SSTError("slab length differs from slab set length")
            if s.cls in seen:
                raise SSTError("duplicate class in slab set")
            seen.add(s.cls)

    @classmethod
    def full(cls, m: int, q: int) -> "SlabSet":
        return cls(m, tuple(ClassSlab(c, c.multiplicity) for c in enumerate_classes(m, q)))

    @property
    def cardinality(self) -> int:
        return sum(s.taken for s in self.slabs)

    def __len__(self):
        return self.cardinality

    def __contains__(self, indices) -> bool:
        return any(indices in s for s in self.slabs)

    def by_class(self) -> Dict[CompositionClass, ClassSlab]:
        return {s.cls: s for s in self.slabs}

    def members(self) -> Iterator[Tuple[int, ...]]:
        for s in self.slabs:
            yield from s.members()

    def member(self, k: int) -> Tuple[int, ...]:
        for s in self.slabs:
            if k < s.taken:
                return s.member(k)
            k -= s.taken
        raise IndexError("slab set index out of range")

    def info_multiset(self) -> List[Tuple[float, int]]:
        return [(s.cls.info, s.taken) for s in self.slabs]


def split_lowest_info(
    available: SlabSet, target: int, tie_rng: Optional[random.Random] = None
) -> Tuple[SlabSet, SlabSet]:
    """Split ``available`` into its ``target`` lowest-information strings and the rest.

    Classes are consumed in ascending information content.  Tied classes go
    in ascending count-vector order, unless ``tie_rng`` is given, in which
    case tied classes are shuffled (a debug aid for tie-break invariance).
    Within a class, strings are taken in ascending lexicographic rank.
    """
    if target < 0:
        raise SSTError("target must be non-negative")
    if target > available.cardinality:
        raise InsufficientStrings(
            f"insufficient strings: need {target}, only {available.cardinality} available"
        )
    order = sorted(available.slabs, key=lambda s: (-s.cls.tie_key, s.cls.counts))
    if tie_rng is not None:
        shuffled = []
        for _, group in groupby(order, key=lambda s: s.cls.tie_key):
            group = list(group)
            tie_rng.shuffle(group)
            shuffled.extend(group)
        order = shuffled

    chosen, rest = [], []
    need = target
    for slab in order:
        take = min(need, slab.taken)
        if take:
            chosen.append(ClassSlab(slab.cls, take, slab.offset))
            need -= take
        if slab.taken > take:
            rest.append(ClassSlab(slab.cls, slab.taken - take, slab.offset + take))
    rest.sort(key=lambda s: s.cls.counts)
    return SlabSet(available.length, chosen), SlabSet(available.length, rest)


def select_lowest_info(
    available: SlabSet, target: int, tie_rng: Optional[random.Random] = None
) -> SlabSet:
    return split_lowest_info(available, target, tie_rng)[0]
