"""Error detection through codeword-image membership.

A stage's encoder emits only strings in its image; a received word outside
the image is a detected error.  Pure positive orders leave holes in every
written length, mixed orders fill them with residual codewords.
"""

import json
import math
import random
from dataclasses import asdict, dataclass
from itertools import combinations, product
from typing import Dict, Iterator, Optional, Tuple

from sstlab.core import SymbolString
from sstlab.errors import GuardExceeded, SSTError
from sstlab.shaping import Codebook, StageLedger

EXHAUSTIVE_GUARD = 10 ** 7


@dataclass(frozen=True)
class ErrorModel:
    """Exactly ``t`` substitutions at uniformly chosen distinct positions."""

    t: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.t < 1:
            raise SSTError("error model needs t >= 1 substitutions")
        if not 0 <= self.seed < 2 ** 64:
            raise SSTError("seed must be an unsigned 64-bit integer")

    def corrupt(self, word: Tuple[int, ...], q: int, rng: random.Random) -> Tuple[int, ...]:
        if self.t > len(word):
            raise SSTError(f"cannot substitute {self.t} symbols in a word of length {len(word)}")
        out = list(word)
        for pos in rng.sample(range(len(word)), self.t):
            # uniform over the q-1 other symbols
            r = rng.randrange(q - 1)
            out[pos] = r if r < out[pos] else r + 1
        return tuple(out)


@dataclass(frozen=True)
class DetectionReport:
    trials: int
    detected: int
    mode: str
    decoder_knowledge: str = "stage_known"

    @property
    def rate(self) -> float:
        return self.detected / self.trials if self.trials else 0.0

    def to_json(self, cb: Optional[Codebook] = None, em: Optional[ErrorModel] = None) -> dict:
        doc = {}
        if cb is not None:
            doc.update(config=cb.config.spec(), N=cb.n)
        if em is not None:
            doc.update(t=em.t, seed=em.seed)
        doc.update(mode=self.mode, trials=self.trials, detected=self.detected, rate=self.rate)
        return doc


def is_valid_codeword(y, cb: Codebook) -> bool:
    indices = y.indices if isinstance(y, SymbolString) else tuple(y)
    if isinstance(y, SymbolString) and y.alphabet != cb.alphabet:
        return False
    return cb.contains(indices)


def neighbors(word: Tuple[int, ...], q: int, t: int) -> Iterator[Tuple[int, ...]]:
    """Every word at Hamming distance exactly t."""
    for positions in combinations(range(len(word)), t):
        for shifts in product(range(1, q), repeat=t):
            out = list(word)
            for pos, d in zip(positions, shifts):
                out[pos] = (out[pos] + d) % q
            yield tuple(out)


def _neighbor_count(length: int, q: int, t: int) -> int:
    return math.comb(length, t) * (q - 1) ** t


def detection_rate(
    cb: Codebook, em: ErrorModel, mode: str = "exhaustive", trials: int = 10000,
    guard: int = EXHAUSTIVE_GUARD,
) -> DetectionReport:
    q = cb.alphabet.q
    if mode == "exhaustive":
        total = sum(
            branch.cardinality * _neighbor_count(branch.length, q, em.t) for branch in cb.branches
        )
        if total > guard:
            raise GuardExceeded(
                f"exhaustive sweep needs {total} checks, above {guard}; use sampled mode"
            )
        detected = checked = 0
        for word in cb.image():
            for bad in neighbors(word, q, em.t):
                checked += 1
                detected += not cb.contains(bad)
        return DetectionReport(checked, detected, "exhaustive")
    if mode != "sampled":
        raise SSTError(f"unknown detection mode {mode!r}")
    rng = random.Random(em.seed)
    detected = checked = 0
    for _ in range(trials):
        word = _sample_codeword(cb, rng)
        if len(word) < em.t:
            continue
        checked += 1
        detected += not cb.contains(em.corrupt(word, q, rng))
    return DetectionReport(checked, detected, "sampled")


def _sample_codeword(cb: Codebook, rng: random.Random) -> Tuple[int, ...]:
    k = rng.randrange(cb.image_size)
    for branch in cb.branches:
        if k < branch.cardinality:
            return branch.member(k)
        k -= branch.cardinality
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class CoverageRow:
    length: int
    used_by_positive: int
    used_by_negative: int
    unused: int


def coverage_census(ledger: StageLedger) -> Dict[int, CoverageRow]:
    """Per-length count of strings emitted by positive and negative branches.

    Covers lengths 1 .. max_stage + k_pos.  Lengths with ``unused == 0`` have
    no zero-probability words left to flag errors with.
    """
    q = ledger.alphabet.q
    out = {}
    for m in range(1, ledger.max_stage + ledger.config.k_pos + 1):
        pos = ledger.positive_written.get(m)
        neg = ledger.negative_drained.get(m)
        n_pos = pos.cardinality if pos is not None else 0
        n_neg = neg.cardinality if neg is not None else 0
        if pos is not None and neg is not None:
            a, b = pos.by_class(), neg.by_class()
            for cls in a.keys() & b.keys():
                sa, sb = a[cls], b[cls]
                if sa.offset < sb.offset + sb.taken and sb.offset < sa.offset + sa.taken:
                    raise SSTError(f"length {m}: positive and negative branches overlap")
        out[m] = CoverageRow(m, n_pos, n_neg, q ** m - n_pos - n_neg)
    return out


def drained_lengths(ledger: StageLedger):
    """Lengths that have been both written and drained within the ledger's stages."""
    if not ledger.config.is_mixed:
        return []
    return list(range(1, ledger.max_stage + ledger.config.k_neg + 1))


def pooled_detection_rate(ledger: StageLedger, em: ErrorModel, max_length: Optional[int] = None):
    """Exhaustive detection when the decoder knows only the received length.

    Every codeword of every stage with length <= ``max_length`` (default:
    the drained lengths of a mixed ledger, else all emitted lengths) is
    corrupted in all possible ways; a corruption counts as detected only if
    no stage of the ledger emits it.
    """
    if max_length is None:
        drained = drained_lengths(ledger)
        max_length = drained[-1] if drained else ledger.max_stage + ledger.config.k_pos
    q = ledger.alphabet.q
    checked = detected = 0
    for table in (ledger.positive_written, ledger.negative_drained):
        for m, slabs in sorted(table.items()):
            if m > max_length or m < em.t:
                continue
            if slabs.cardinality * _neighbor_count(m, q, em.t) > EXHAUSTIVE_GUARD:
                raise GuardExceeded(f"pooled sweep at length {m} is too large")
            for word in slabs.members():
                for bad in neighbors(word, q, em.t):
                    checked += 1
                    detected += not ledger.is_used(bad)
    return DetectionReport(checked, detected, "exhaustive", decoder_knowledge="length_only")


def report_json(report: DetectionReport, cb: Codebook, em: ErrorModel) -> str:
    return json.dumps(report.to_json(cb, em), sort_keys=False)


def census_json(census: Dict[int, CoverageRow]) -> list:
    return [asdict(row) for _, row in sorted(census.items())]
