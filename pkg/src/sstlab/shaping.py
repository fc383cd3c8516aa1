"""Stage ledgers and per-stage bijections for pure and mixed shaping orders.

A configuration ``(k_pos, k_neg)`` maps strings of length N either to
length N + k_pos (long branch) or, once N > |k_neg|, also to length
N + k_neg (short branch).  Short-branch codewords are residuals: strings
of that length that no earlier long branch used.

Two residual policies are supported:

``chained``
    Residuals are whatever the mixed ledger itself left unused, so every
    length that has been both written and drained is covered exactly once.
``pure``
    The short branch at stage N takes the strings of length N + k_neg that
    a pure ``k_pos`` transform at its own stage leaves unused.  Coverage is
    not total, but this is the construction that reproduces the published
    mixed-order averages.
"""

import json
import math
import random
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Optional, Tuple

from sstlab.composition import ClassSlab, CompositionClass, SlabSet, split_lowest_info
from sstlab.core import Alphabet, SymbolString, counts_info
from sstlab.errors import ConfigError, GuardExceeded, InvalidCodeword, SSTError

FORMAT_VERSION = 1
ORDERING_RULE = "canonical-v1"
MATERIALIZE_GUARD = 10 ** 7
# class-arithmetic guard: number of composition classes at the longest length
CLASS_GUARD = 2 * 10 ** 6
RESIDUAL_POLICIES = ("chained", "pure")


@dataclass(frozen=True)
class ShapingConfig:
    k_pos: int = 0
    k_neg: int = 0

    def __post_init__(self):
        if self.k_pos < 0:
            raise ConfigError("k_pos must be >= 0")
        if self.k_neg > 0:
            raise ConfigError("k_neg must be <= 0")
        if self.k_neg < 0 and self.k_pos == 0:
            raise ConfigError("negative order requires positive companion")

    @classmethod
    def parse(cls, spec: str) -> "ShapingConfig":
        """Parse ``K`` (pure, K >= 0) or ``kpos,kneg``."""
        parts = [p.strip() for p in spec.strip().split(",")]
        try:
            values = [int(p) for p in parts]
        except ValueError:
            raise ConfigError(f"bad config spec {spec!r}") from None
        if len(values) == 1:
            if values[0] < 0:
                raise ConfigError("a negative order needs a positive companion, e.g. '1,-2'")
            return cls(values[0], 0)
        if len(values) == 2:
            return cls(values[0], values[1])
        raise ConfigError(f"bad config spec {spec!r}")

    @property
    def is_identity(self) -> bool:
        return self.k_pos == 0 and self.k_neg == 0

    @property
    def is_mixed(self) -> bool:
        return self.k_neg < 0

    def is_mixed_stage(self, n: int) -> bool:
        return self.is_mixed and n > -self.k_neg

    def spec(self) -> str:
        return f"{self.k_pos},{self.k_neg}" if self.is_mixed else str(self.k_pos)

    def __str__(self):
        return self.spec()


@dataclass(frozen=True)
class Stage:
    n: int
    long: SlabSet
    short: Optional[SlabSet] = None

    @property
    def short_size(self) -> int:
        return self.short.cardinality if self.short is not None else 0

    @property
    def long_size(self) -> int:
        return self.long.cardinality


@dataclass
class StageLedger:
    config: ShapingConfig
    alphabet: Alphabet
    max_stage: int
    residual_policy: str = "chained"
    stages: Dict[int, Stage] = field(default_factory=dict)
    # strings of length M left over after the positive write at that length
    residual: Dict[int, SlabSet] = field(default_factory=dict)
    positive_written: Dict[int, SlabSet] = field(default_factory=dict)
    negative_drained: Dict[int, SlabSet] = field(default_factory=dict)

    def u(self, n: int) -> int:
        return self.stages[n].long_size

    def short_size(self, n: int) -> int:
        return self.stages[n].short_size

    def is_used(self, indices) -> bool:
        """True when some stage of the ledger emits this string as a codeword."""
        m = len(indices)
        for table in (self.positive_written, self.negative_drained):
            slabs = table.get(m)
            if slabs is not None and indices in slabs:
                return True
        return False


def _check_guard(config: ShapingConfig, q: int, max_stage: int) -> None:
    longest = max_stage + config.k_pos
    n_classes = math.comb(longest + q - 1, q - 1)
    if n_classes > CLASS_GUARD:
        raise GuardExceeded(
            f"length {longest} over {q} symbols has {n_classes} classes, above the limit {CLASS_GUARD}"
        )


def _pure_residual(m: int, q: int, k_pos: int) -> SlabSet:
    """Strings of length m a pure k_pos transform never uses as codewords."""
    full = SlabSet.full(m, q)
    if m - k_pos < 1:
        return full
    return split_lowest_info(full, q ** (m - k_pos))[1]


def build_ledger(
    config: ShapingConfig,
    alphabet: Alphabet,
    max_stage: int,
    residual_policy: str = "chained",
    tie_rng: Optional[random.Random] = None,
) -> StageLedger:
    if max_stage < 1:
        raise SSTError("max_stage must be >= 1")
    if residual_policy not in RESIDUAL_POLICIES:
        raise SSTError(f"unknown residual policy {residual_policy!r}")
    q = alphabet.q
    _check_guard(config, q, max_stage)
    ledger = StageLedger(config, alphabet, max_stage, residual_policy)

    def residual_of(m: int) -> SlabSet:
        if residual_policy == "pure":
            return _pure_residual(m, q, config.k_pos)
        if m not in ledger.residual:
            # never written by a positive branch: every string is available
            ledger.residual[m] = SlabSet.full(m, q)
        return ledger.residual[m]

    for n in range(1, max_stage + 1):
        short = None
        if config.is_mixed_stage(n):
            short = residual_of(n + config.k_neg)
            ledger.negative_drained[n + config.k_neg] = short
        target = q ** n - (short.cardinality if short is not None else 0)
        if target <= 0:
            raise SSTError(f"stage {n} has no room for a long branch")
        m = n + config.k_pos
        long, rest = split_lowest_info(SlabSet.full(m, q), target, tie_rng)
        ledger.positive_written[m] = long
        if residual_policy == "chained":
            ledger.residual[m] = rest
        else:
            ledger.residual[m] = _pure_residual(m, q, config.k_pos)
        ledger.stages[n] = Stage(n, long, short)
    return ledger


def _codomain_key(indices: Tuple[int, ...], q: int):
    counts = [0] * q
    for i in indices:
        counts[i] += 1
    return (counts_info(counts), len(indices), indices)


@dataclass
class Codebook:
    config: ShapingConfig
    alphabet: Alphabet
    n: int
    long_branch: SlabSet
    short_branch: Optional[SlabSet] = None
    residual_policy: str = "chained"
    ordering_rule: str = ORDERING_RULE
    pairs: Optional[List[Tuple[Tuple[int, ...], Tuple[int, ...]]]] = None
    _enc: Optional[dict] = field(default=None, repr=False, compare=False)
    _dec: Optional[dict] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        total = self.long_branch.cardinality
        if self.short_branch is not None:
            total += self.short_branch.cardinality
        if total != self.alphabet.q ** self.n:
            raise SSTError(f"branches hold {total} strings, stage needs {self.alphabet.q ** self.n}")
        if self.pairs is not None:
            self._index(self.pairs)

    @property
    def image_size(self) -> int:
        return self.alphabet.q ** self.n

    @property
    def branches(self) -> List[SlabSet]:
        out = [self.long_branch]
        if self.short_branch is not None:
            out.append(self.short_branch)
        return out

    def contains(self, indices) -> bool:
        indices = tuple(indices)
        for branch in self.branches:
            if branch.length == len(indices):
                return indices in branch
        return False

    def image(self):
        for branch in self.branches:
            yield from branch.members()

    def materialize(self, guard: int = MATERIALIZE_GUARD) -> "Codebook":
        if self.pairs is not None:
            return self
        if self.image_size > guard:
            raise GuardExceeded(
                f"materializing {self.image_size} strings exceeds the guard of {guard}; "
                "use the class-arithmetic paths"
            )
        q = self.alphabet.q
        domain = sorted(
            _product(q, self.n), key=lambda x: (counts_info(_counts(x, q)), x)
        )
        codomain = sorted(self.image(), key=lambda y: _codomain_key(y, q))
        pairs = list(zip(domain, codomain))
        self._index(pairs)
        self.pairs = pairs
        return self

    def _index(self, pairs) -> None:
        enc = dict(pairs)
        dec = {y: x for x, y in pairs}
        if len(enc) != len(pairs) or len(dec) != len(pairs) or len(pairs) != self.image_size:
            raise SSTError("codebook pairing is not a bijection")
        self._enc, self._dec = enc, dec

    def encode_indices(self, x: Tuple[int, ...]) -> Tuple[int, ...]:
        self.materialize()
        try:
            return self._enc[tuple(x)]
        except KeyError:
            raise SSTError("string is not in the codebook domain") from None

    def decode_indices(self, y: Tuple[int, ...]) -> Tuple[int, ...]:
        self.materialize()
        try:
            return self._dec[tuple(y)]
        except KeyError:
            raise InvalidCodeword(f"invalid codeword {self.alphabet.format(y)!r}") from None

    def to_json(self) -> dict:
        doc = {
            "format_version": FORMAT_VERSION,
            "alphabet": str(self.alphabet),
            "N": self.n,
            "k_pos": self.config.k_pos,
            "k_neg": self.config.k_neg,
            "ordering_rule": self.ordering_rule,
            "residual_policy": self.residual_policy,
            "long_branch": _slabs_to_json(self.long_branch),
            "short_branch": (
                _slabs_to_json(self.short_branch) if self.short_branch is not None else None
            ),
        }
        if self.pairs is not None:
            fmt = self.alphabet.format
            doc["pairs"] = [[fmt(x), fmt(y)] for x, y in self.pairs]
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "Codebook":
        if doc.get("format_version") != FORMAT_VERSION:
            raise SSTError(f"unsupported codebook format {doc.get('format_version')!r}")
        if doc.get("ordering_rule") != ORDERING_RULE:
            raise SSTError(f"unsupported ordering rule {doc.get('ordering_rule')!r}")
        alphabet = Alphabet.from_string(doc["alphabet"])
        config = ShapingConfig(doc["k_pos"], doc["k_neg"])
        n = doc["N"]
        long_branch = _slabs_from_json(n + config.k_pos, doc["long_branch"])
        short_branch = None
        if doc.get("short_branch") is not None:
            short_branch = _slabs_from_json(n + config.k_neg, doc["short_branch"])
        pairs = None
        if doc.get("pairs") is not None:
            pairs = [
                (alphabet.parse(x).indices, alphabet.parse(y).indices) for x, y in doc["pairs"]
            ]
        return cls(
            config, alphabet, n, long_branch, short_branch,
            residual_policy=doc.get("residual_policy", "chained"), pairs=pairs,
        )

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(self.to_json(), fh, indent=1)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "Codebook":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


def _slabs_to_json(slabs: SlabSet) -> list:
    return [{"counts": list(s.cls.counts), "offset": s.offset, "taken": s.taken} for s in slabs.slabs]


def _slabs_from_json(length: int, items: list) -> SlabSet:
    return SlabSet(
        length,
        tuple(
            ClassSlab(CompositionClass(tuple(d["counts"])), d["taken"], d.get("offset", 0))
            for d in items
        ),
    )


def _counts(x, q):
    counts = [0] * q
    for i in x:
        counts[i] += 1
    return counts


def _product(q: int, n: int):
    return product(range(q), repeat=n)


def build_codebook(
    config: ShapingConfig,
    alphabet: Alphabet,
    n: int,
    materialize: bool = False,
    residual_policy: str = "chained",
    guard: int = MATERIALIZE_GUARD,
    tie_rng: Optional[random.Random] = None,
) -> Codebook:
    if n < 1:
        raise SSTError("stage N must be >= 1")
    if materialize and alphabet.q ** n > guard:
        raise GuardExceeded(f"q^N = {alphabet.q ** n} exceeds the materialization guard of {guard}")
    if config.is_identity:
        cb = Codebook(config, alphabet, n, SlabSet.full(n, alphabet.q), None, residual_policy)
    else:
        ledger = build_ledger(config, alphabet, n, residual_policy, tie_rng)
        stage = ledger.stages[n]
        cb = Codebook(config, alphabet, n, stage.long, stage.short, residual_policy)
    if materialize:
        cb.materialize(guard)
    return cb


def _check_string(s: SymbolString, cb: Codebook) -> None:
    if s.alphabet != cb.alphabet:
        raise SSTError("string alphabet differs from codebook alphabet")


def encode(x: SymbolString, cb: Codebook) -> SymbolString:
    _check_string(x, cb)
    if len(x) != cb.n:
        raise SSTError(f"codebook is for length {cb.n}, got length {len(x)}")
    if cb.config.is_identity:
        return x
    return SymbolString(cb.alphabet, cb.encode_indices(x.indices))


def decode(y: SymbolString, cb: Codebook) -> SymbolString:
    _check_string(y, cb)
    if cb.config.is_identity:
        if len(y) != cb.n:
            raise InvalidCodeword(f"invalid codeword {str(y)!r}")
        return y
    if not cb.contains(y.indices):
        raise InvalidCodeword(f"invalid codeword {str(y)!r}")
    return SymbolString(cb.alphabet, cb.decode_indices(y.indices))


def codomain_info_multiset(cb: Codebook) -> List[Tuple[float, int]]:
    """(information content, count) per class slab across both branches, long branch first."""
    out = []
    for branch in cb.branches:
        out.extend(branch.info_multiset())
    return out
