"""Set-shaping transforms with mixed positive/negative shaping orders."""

from sstlab.core import (
    Alphabet,
    SourceModel,
    SymbolString,
    empirical_entropy,
    information_content,
    source_shannon_entropy,
    string_probability,
)
from sstlab.shaping import (
    Codebook,
    ShapingConfig,
    StageLedger,
    build_codebook,
    build_ledger,
    codomain_info_multiset,
    decode,
    encode,
)

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "Codebook",
    "ShapingConfig",
    "SourceModel",
    "StageLedger",
    "SymbolString",
    "build_codebook",
    "build_ledger",
    "codomain_info_multiset",
    "decode",
    "empirical_entropy",
    "encode",
    "information_content",
    "source_shannon_entropy",
    "string_probability",
]
