"""Brute-force references that work on explicit strings, never on classes."""

import math
from functools import lru_cache
from collections import Counter
from itertools import combinations, product


def all_strings(m, q):
    return list(product(range(q), repeat=m))


def string_info(s):
    """-sum_j log2(count(s_j) / N), literally one term per position."""
    n = len(s)
    c = Counter(s)
    return math.fsum(-math.log2(c[a] / n) for a in s)


def counts_of(s, q):
    c = Counter(s)
    return tuple(c[a] for a in range(q))


def selection_key(s, q):
    # same tie rule as the library: I, then count vector, then the string
    return (round(string_info(s), 9), counts_of(s, q), s)


@lru_cache(maxsize=None)
def _ranked(m, q):
    return tuple(sorted(all_strings(m, q), key=lambda s: selection_key(s, q)))


def brute_ledger(q, max_stage, k_pos, k_neg, policy="chained"):
    """{stage: (short strings, long strings)} plus the chained residual per length."""
    residual = {}
    stages = {}
    for n in range(1, max_stage + 1):
        short = []
        if k_neg < 0 and n > -k_neg:
            m = n + k_neg
            if policy == "chained":
                short = residual.get(m, all_strings(m, q))
            else:
                ranked = _ranked(m, q)
                short = list(ranked[q ** (m - k_pos):] if m - k_pos >= 1 else ranked)
        target = q ** n - len(short)
        ranked = _ranked(n + k_pos, q)
        stages[n] = (list(short), list(ranked[:target]))
        residual[n + k_pos] = list(ranked[target:])
    return stages, residual


def brute_average(q, n, k_pos, k_neg, policy="chained"):
    short, long = brute_ledger(q, n, k_pos, k_neg, policy)[0][n]
    return math.fsum(string_info(y) for y in short + long) / q ** n


def optimal_prefix_cost(weights):
    """Minimum expected length over every prefix-free codeword set (<= 4 tokens)."""
    n = len(weights)
    if n == 1:
        return float(weights[0]), [1]
    # an optimal code is a full binary tree, so no codeword is longer than n - 1
    words = [
        "".join(bits) for length in range(1, n) for bits in product("01", repeat=length)
    ]
    desc = sorted(weights, reverse=True)
    best = None
    for chosen in combinations(words, n):
        if any(a != b and b.startswith(a) for a in chosen for b in chosen):
            continue
        lengths = sorted(len(w) for w in chosen)
        cost = sum(w * l for w, l in zip(desc, lengths))
        if best is None or cost < best[0] - 1e-15:
            best = (cost, lengths)
    return best
