"""Independent escape-recursion oracle for the variable-order Markov model.

Counts are gathered by direct substring enumeration and predictions are
computed by the literal recursive definition in exact rational arithmetic,
so the oracle shares no code path (and no floating-point evaluation order)
with the production model.
"""

from __future__ import annotations

from fractions import Fraction


def oracle_counts(sequences, max_order: int) -> dict:
    counts: dict[tuple, dict[int, int]] = {}
    for seq in sequences:
        seq = list(seq)
        for t in range(len(seq)):
            for k in range(min(t, max_order) + 1):
                ctx = tuple(seq[t - k : t])
                counts.setdefault(ctx, {})
                counts[ctx][seq[t]] = counts[ctx].get(seq[t], 0) + 1
    return counts


def oracle_predict(
    counts: dict, context, max_order: int, alphabet_size: int
) -> list[Fraction]:
    """P(symbol | context) by recursive escape blending, exact rationals.

    Each level mixes its relative counts with an escape mass of
    distinct/(total+distinct) passed to the next shorter context; levels
    with no counts pass everything through; the base case is uniform.
    """
    context = tuple(context)

    def level(k: int) -> list[Fraction]:
        if k < 0:
            return [Fraction(1, alphabet_size)] * alphabet_size
        ctx = context[len(context) - k :] if k else ()
        by_symbol = counts.get(ctx)
        if not by_symbol:
            return level(k - 1)
        total = sum(by_symbol.values())
        distinct = len(by_symbol)
        escape = Fraction(distinct, total + distinct)
        lower = level(k - 1)
        return [
            Fraction(by_symbol.get(s, 0), total + distinct) + escape * lower[s]
            for s in range(alphabet_size)
        ]

    return level(min(len(context), max_order))
