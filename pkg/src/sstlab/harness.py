"""Experiment drivers: average information tables, config sweeps, coding cost."""

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal
from itertools import product
from typing import Dict, List, Optional, Sequence

from sstlab import __version__
from sstlab.coding import code_length
from sstlab.composition import enumerate_classes
from sstlab.core import Alphabet, SourceModel, SymbolString, counts_info
from sstlab.errors import SSTError
from sstlab.shaping import (
    MATERIALIZE_GUARD,
    ORDERING_RULE,
    ShapingConfig,
    build_codebook,
    codomain_info_multiset,
)

CSV_HEADER = ("k_pos", "k_neg", "avg_info_y_bits")


def check_config(config: ShapingConfig, n: int) -> None:
    if n < 1:
        raise SSTError("N must be >= 1")
    if config.is_mixed and n <= -config.k_neg:
        raise SSTError(f"mixed config {config} needs N > {-config.k_neg}, got N = {n}")


def average_info_y(
    alphabet: Alphabet,
    n: int,
    config: ShapingConfig,
    source: Optional[SourceModel] = None,
    residual_policy: str = "chained",
    guard: int = MATERIALIZE_GUARD,
) -> float:
    """Mean information content of the codeword of a source string of length n.

    Uniform sources are averaged over class slabs without listing any
    string; other sources pair strings through the materialized codebook.
    """
    check_config(config, n)
    source = source or SourceModel.uniform(alphabet)
    if source.alphabet != alphabet:
        raise SSTError("source alphabet differs")
    cb = build_codebook(config, alphabet, n, residual_policy=residual_policy)
    if source.is_uniform:
        total = math.fsum(info * count for info, count in codomain_info_multiset(cb))
        return total / alphabet.q ** n
    cb.materialize(guard)
    p = source.probabilities
    terms = []
    for x, y in cb.pairs:
        prob = math.prod(p[i] for i in x)
        if prob:
            terms.append(prob * counts_info(_counts(y, alphabet.q)))
    return math.fsum(terms)


def average_info_x(alphabet: Alphabet, n: int) -> float:
    """Mean information content over all q^n strings (uniform source)."""
    q = alphabet.q
    return math.fsum(c.info * c.multiplicity for c in enumerate_classes(n, q)) / q ** n


def _counts(x, q):
    counts = [0] * q
    for i in x:
        counts[i] += 1
    return counts


@dataclass
class ExperimentRow:
    config: ShapingConfig
    avg_info_y: Optional[float] = None
    avg_info_x: Optional[float] = None
    expected: Optional[float] = None
    error: Optional[str] = None

    @property
    def delta(self) -> Optional[float]:
        if self.avg_info_y is None or self.avg_info_x is None:
            return None
        return self.avg_info_y - self.avg_info_x

    def deviation(self) -> Optional[float]:
        """|round-half-even(avg_info_y, 3) - expected|, when both exist."""
        if self.expected is None or self.avg_info_y is None:
            return None
        return abs(float(round3(self.avg_info_y)) - self.expected)


def round3(value: float) -> Decimal:
    return Decimal(repr(value)).quantize(Decimal("0.001"), rounding=ROUND_HALF_EVEN)


@dataclass
class TableReport:
    alphabet: Alphabet
    n: int
    rows: List[ExperimentRow]
    source: str = "uniform"
    residual_policy: str = "chained"
    tol: Optional[float] = None
    tool_version: str = __version__
    ordering_rule: str = ORDERING_RULE

    def failures(self) -> List[ExperimentRow]:
        if self.tol is None:
            return [r for r in self.rows if r.error]
        return [
            r for r in self.rows
            if r.error or (r.expected is not None and r.deviation() > self.tol + 1e-12)
        ]

    @property
    def passed(self) -> bool:
        return not self.failures()

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.rows:
            value = "" if r.avg_info_y is None else f"{r.avg_info_y:.6f}"
            w.writerow((r.config.k_pos, r.config.k_neg, value))
        return buf.getvalue()

    def to_json(self) -> dict:
        rows = []
        for r in self.rows:
            row = {
                "k_pos": r.config.k_pos,
                "k_neg": r.config.k_neg,
                "avg_info_y": r.avg_info_y,
                "avg_info_x": r.avg_info_x,
                "delta": r.delta,
            }
            if r.expected is not None:
                row["expected"] = r.expected
                row["deviation"] = r.deviation()
                row["pass"] = r.deviation() <= self.tol + 1e-12
            if r.error:
                row["error"] = r.error
            rows.append(row)
        return {
            "alphabet": str(self.alphabet),
            "N": self.n,
            "source": self.source,
            "residual_policy": self.residual_policy,
            "ordering_rule": self.ordering_rule,
            "tool_version": self.tool_version,
            "tol": self.tol,
            "rows": rows,
        }


def _row_task(args):
    symbols, n, spec, policy = args
    alphabet = Alphabet.from_string(symbols)
    config = ShapingConfig.parse(spec)
    try:
        return average_info_y(alphabet, n, config, residual_policy=policy), None
    except SSTError as exc:
        return None, str(exc)


def run_table(
    alphabet: Alphabet,
    n: int,
    configs: Sequence[ShapingConfig],
    expected: Optional[Dict[ShapingConfig, float]] = None,
    tol: Optional[float] = None,
    residual_policy: str = "chained",
    workers: int = 1,
) -> TableReport:
    if len(set(configs)) != len(configs):
        raise SSTError("table configs must be distinct")
    tasks = [(str(alphabet), n, c.spec(), residual_policy) for c in configs]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_row_task, tasks))
    else:
        results = [_row_task(t) for t in tasks]
    avg_x = average_info_x(alphabet, n)
    rows = []
    for config, (value, err) in zip(configs, results):
        exp = expected.get(config) if expected else None
        rows.append(ExperimentRow(config, value, avg_x if err is None else None, exp, err))
    if expected and tol is None:
        tol = 0.0
    return TableReport(alphabet, n, rows, residual_policy=residual_policy, tol=tol)


def read_expected_csv(text: str) -> Dict[ShapingConfig, float]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_HEADER:
        raise SSTError(f"expected CSV header {','.join(CSV_HEADER)}")
    return {
        ShapingConfig(int(r["k_pos"]), int(r["k_neg"])): float(r["avg_info_y_bits"])
        for r in reader
    }


def parse_configs(text: str) -> List[ShapingConfig]:
    return [ShapingConfig.parse(s) for s in text.split(";") if s.strip()]


def sweep_configs(
    alphabet: Alphabet,
    n: int,
    k_pos_range: Sequence[int],
    k_neg_range: Sequence[int],
    source: Optional[SourceModel] = None,
    residual_policy: str = "chained",
) -> List[ExperimentRow]:
    """Every valid (k_pos, k_neg) pair in the ranges, best (lowest average) first.

    Pairs that are not valid configurations (a negative order without a
    positive one) or not valid for this N are skipped.
    """
    if not k_pos_range or not k_neg_range:
        raise SSTError("sweep ranges must be nonempty")
    avg_x = average_info_x(alphabet, n)
    rows = []
    for kp, kn in product(k_pos_range, k_neg_range):
        if kn < 0 and kp == 0:
            continue
        config = ShapingConfig(kp, kn)
        if config.is_mixed and n <= -kn:
            continue
        value = average_info_y(alphabet, n, config, source, residual_policy)
        rows.append(ExperimentRow(config, value, avg_x))
    rows.sort(key=lambda r: (r.avg_info_y, r.config.k_pos, r.config.k_neg))
    return rows


@dataclass
class CodingCostReport:
    config: ShapingConfig
    n: int
    gram: int
    overhead: str
    avg_nh0_x: float
    avg_info_y: float
    avg_huffman_bits_y: float
    avg_symbols_y: float
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "config": self.config.spec(),
            "N": self.n,
            "gram": self.gram,
            "overhead": self.overhead,
            "avg_nh0_x": self.avg_nh0_x,
            "avg_info_y": self.avg_info_y,
            "avg_huffman_bits_y": self.avg_huffman_bits_y,
            "avg_symbols_y": self.avg_symbols_y,
        }


def coding_cost_report(
    alphabet: Alphabet,
    n: int,
    config: ShapingConfig,
    gram: int = 1,
    overhead: str = "none",
    pad: str = "strict",
    residual_policy: str = "chained",
    guard: int = MATERIALIZE_GUARD,
) -> CodingCostReport:
    """Side-by-side averages over a uniform source; no verdict is drawn."""
    check_config(config, n)
    q = alphabet.q
    if q ** n > guard:
        raise SSTError(f"q^N = {q ** n} exceeds the guard of {guard}")
    cb = build_codebook(config, alphabet, n, residual_policy=residual_policy)
    total = q ** n
    huff, info, syms = [], [], []
    for y in cb.image():
        s = SymbolString(alphabet, y)
        huff.append(code_length(s, gram, overhead, pad))
        info.append(counts_info(_counts(y, q)))
        syms.append(len(y))
    return CodingCostReport(
        config, n, gram, overhead,
        avg_nh0_x=average_info_x(alphabet, n),
        avg_info_y=math.fsum(info) / total,
        avg_huffman_bits_y=sum(huff) / total,
        avg_symbols_y=sum(syms) / total,
    )


def dumps(doc) -> str:
    return json.dumps(doc, indent=1) + "\n"
