import math
import random
from itertools import product

import pytest
from hypothesis import given, strategies as st

from sstlab import (
    Alphabet,
    SourceModel,
    SymbolString,
    empirical_entropy,
    information_content,
    source_shannon_entropy,
    string_probability,
)
from sstlab.errors import SSTError

# 2*log2(3/2) + log2(3), evaluated with mpmath at 40 digits
INFO_001 = 2.7548875021634685


class TestAlphabet:
    def test_order_is_observable(self, ternary):
        assert ternary.q == 3
        assert [ternary.index(s) for s in "012"] == [0, 1, 2]
        assert str(ternary.parse("210")) == "210"

    @pytest.mark.parametrize("symbols", ["0", "00", "0 1", ""])
    def test_rejects_bad_alphabets(self, symbols):
        with pytest.raises(SSTError):
            Alphabet.from_string(symbols)

    def test_unknown_symbol(self, binary):
        with pytest.raises(SSTError):
            binary.parse("012")

    def test_index_range_checked(self, binary):
        with pytest.raises(SSTError):
            SymbolString(binary, (0, 2))


class TestInformationContent:
    @pytest.mark.parametrize("text, expected", [("000", 0.0), ("0011", 4.0), ("001", INFO_001)])
    def test_examples(self, binary, text, expected):
        assert information_content(binary.parse(text)) == pytest.approx(expected, abs=1e-12)

    def test_empty_string_is_an_error(self, binary):
        with pytest.raises(SSTError, match="undefined for empty string"):
            information_content(binary.parse(""))
        with pytest.raises(SSTError):
            empirical_entropy(binary.parse(""))

    @pytest.mark.parametrize("text, expected", [("0101", 1.0), ("0000", 0.0), ("001", INFO_001 / 3)])
    def test_empirical_entropy(self, binary, text, expected):
        assert empirical_entropy(binary.parse(text)) == pytest.approx(expected, abs=1e-12)


strings = st.integers(2, 5).flatmap(
    lambda q: st.lists(st.integers(0, q - 1), min_size=1, max_size=40).map(lambda xs: (q, xs))
)


@given(strings)
def test_info_is_length_times_entropy(case):
    q, xs = case
    s = SymbolString(Alphabet(tuple("abcde"[:q])), tuple(xs))
    assert information_content(s) == pytest.approx(len(s) * empirical_entropy(s), abs=1e-12)
    assert 0.0 <= empirical_entropy(s) <= math.log2(q) + 1e-12


@given(strings, st.randoms(use_true_random=False))
def test_info_depends_only_on_counts(case, rnd):
    q, xs = case
    alphabet = Alphabet(tuple("abcde"[:q]))
    shuffled = list(xs)
    rnd.shuffle(shuffled)
    a = information_content(SymbolString(alphabet, tuple(xs)))
    b = information_content(SymbolString(alphabet, tuple(shuffled)))
    assert a == pytest.approx(b, abs=1e-12)


class TestSource:
    @pytest.mark.parametrize(
        "symbols, probs, expected",
        [("012", None, math.log2(3)), ("01", (0.5, 0.5), 1.0), ("01", (1.0, 0.0), 0.0)],
    )
    def test_shannon_entropy(self, symbols, probs, expected):
        alphabet = Alphabet.from_string(symbols)
        m = SourceModel.uniform(alphabet) if probs is None else SourceModel(alphabet, probs)
        assert source_shannon_entropy(m) == pytest.approx(expected, abs=1e-12)

    def test_probabilities_validated(self, binary):
        with pytest.raises(SSTError):
            SourceModel(binary, (0.6, 0.6))
        with pytest.raises(SSTError):
            SourceModel(binary, (1.5, -0.5))

    def test_uniform_ternary_string(self, ternary):
        s = ternary.parse("0120120120")
        p = string_probability(s, SourceModel.uniform(ternary))
        assert p == 3.0 ** -10
        assert p == pytest.approx(1.6935e-5, rel=1e-4)

    def test_product_of_symbol_probabilities(self, binary):
        assert string_probability(binary.parse("01"), SourceModel(binary, (1.0, 0.0))) == 0.0
        assert string_probability(binary.parse("01"), SourceModel(binary, (0.25, 0.75))) == 0.1875

    def test_alphabet_mismatch(self, binary, ternary):
        with pytest.raises(SSTError):
            string_probability(binary.parse("01"), SourceModel.uniform(ternary))

    @pytest.mark.parametrize("q, n", [(q, n) for q in (2, 3) for n in range(1, 9)])
    def test_probabilities_sum_to_one(self, q, n):
        alphabet = Alphabet(tuple("012"[:q]))
        rng = random.Random(q * 100 + n)
        w = [rng.random() + 0.01 for _ in range(q)]
        m = SourceModel(alphabet, tuple(x / sum(w) for x in w))
        total = math.fsum(
            string_probability(SymbolString(alphabet, s), m) for s in product(range(q), repeat=n)
        )
        assert total == pytest.approx(1.0, abs=1e-9)
