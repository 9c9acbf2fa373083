"""Variable-order Markov prediction over small discrete alphabets.

A :class:`ContextTreeModel` keeps symbol counts for every context of length
0..max_order it has seen.  Prediction blends all stored context levels,
longest first: each level contributes its count-based probabilities scaled
by the weight that survived the levels above it, and passes an escape mass
of ``distinct/(total + distinct)`` down to the next shorter context.  The
recursion bottoms out in the uniform distribution, so every prediction has
full support.  No exclusion is applied when escaping.

Counts update online: observing a symbol increments the counts of every
context suffix of the running history, so repeated updates over a stream
equal one update over the concatenated stream.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Sequence

import numpy as np

__all__ = [
    "ContextTreeModel",
    "add_segment_contribution",
    "cross_entropy",
    "entropy",
    "accuracy",
    "mixture_predict",
    "model_to_json",
    "model_from_json",
]


class ContextTreeModel:
    """Count-based variable-order Markov model with escape fallback."""

    __slots__ = ("max_order", "alphabet_size", "_counts", "_history")

    def __init__(self, max_order: int, alphabet_size: int):
        if max_order < 0:
            raise ValueError("max_order must be >= 0")
        if alphabet_size < 2:
            raise ValueError("alphabet_size must be >= 2")
        self.max_order = max_order
        self.alphabet_size = alphabet_size
        self._counts: dict[tuple[int, ...], dict[int, int]] = {}
        self._history: list[int] = []

    # -- training ---------------------------------------------------------

    def _check_symbol(self, symbol: int) -> None:
        if not 0 <= symbol < self.alphabet_size:
            raise ValueError(
                f"symbol {symbol} outside alphabet of size {self.alphabet_size}"
            )

    def update(self, sequence: Iterable[int]) -> None:
        """Observe symbols, continuing from the current running history."""
        hist = self._history
        counts = self._counts
        for symbol in sequence:
            self._check_symbol(symbol)
            for k in range(min(len(hist), self.max_order) + 1):
                ctx = tuple(hist[len(hist) - k :])
                by_symbol = counts.get(ctx)
                if by_symbol is None:
                    by_symbol = counts[ctx] = {}
                by_symbol[symbol] = by_symbol.get(symbol, 0) + 1
            hist.append(symbol)
            if len(hist) > self.max_order:
                del hist[0]

    def reset_context(self) -> None:
        """Forget the running history (a sequence boundary), not the counts."""
        self._history.clear()

    def add_sequence(self, sequence: Iterable[int]) -> None:
        """Train on one standalone sequence (fresh context)."""
        self.reset_context()
        self.update(sequence)

    def forget_sequence(self, sequence: Sequence[int]) -> None:
        """Remove exactly the counts `add_sequence(sequence)` contributed."""
        counts = self._counts
        seq = list(sequence)
        for t, symbol in enumerate(seq):
            self._check_symbol(symbol)
            for k in range(min(t, self.max_order) + 1):
                ctx = tuple(seq[t - k : t])
                by_symbol = counts.get(ctx)
                if by_symbol is None or symbol not in by_symbol:
                    raise ValueError("cannot forget counts that were never added")
                by_symbol[symbol] -= 1
                if by_symbol[symbol] == 0:
                    del by_symbol[symbol]
                    if not by_symbol:
                        del counts[ctx]

    # -- inspection --------------------------------------------------------

    @property
    def history(self) -> tuple[int, ...]:
        return tuple(self._history)

    @property
    def num_contexts(self) -> int:
        return len(self._counts)

    def total_observations(self) -> int:
        return sum(self._counts.get((), {}).values()) if self._counts else 0

    def context_counts(self, context: Sequence[int]) -> dict[int, int]:
        return dict(self._counts.get(tuple(context), {}))

    def copy(self) -> "ContextTreeModel":
        clone = ContextTreeModel(self.max_order, self.alphabet_size)
        clone._counts = {ctx: dict(m) for ctx, m in self._counts.items()}
        clone._history = list(self._history)
        return clone

    # -- prediction ---------------------------------------------------------

    def _level(
        self, ctx: tuple[int, ...], exclude: "ContextTreeModel | None"
    ) -> dict[int, int]:
        stored = self._counts.get(ctx)
        if not stored:
            return {}
        if exclude is None:
            return stored
        removed = exclude._counts.get(ctx)
        if not removed:
            return stored
        eff = {}
        for symbol, count in stored.items():
            remaining = count - removed.get(symbol, 0)
            if remaining < 0:
                raise ValueError("exclusion counts exceed model counts")
            if remaining > 0:
                eff[symbol] = remaining
        return eff

    def predict(
        self,
        context: Sequence[int] = (),
        exclude: "ContextTreeModel | None" = None,
    ) -> np.ndarray:
        """Predictive distribution over the alphabet after ``context``.

        ``exclude`` subtracts another model's counts level by level before
        blending; it is how held-out material is removed without copying.
        """
        probs = np.zeros(self.alphabet_size)
        ctx = tuple(context)[max(0, len(context) - self.max_order) :]
        weight = 1.0
        for k in range(len(ctx), -1, -1):
            level = self._level(ctx[len(ctx) - k :], exclude)
            if not level:
                continue  # unseen or fully excluded context: escape with mass 1
            total = sum(level.values())
            distinct = len(level)
            denom = total + distinct
            for symbol, count in level.items():
                probs[symbol] += weight * count / denom
            weight *= distinct / denom
        probs += weight / self.alphabet_size
        return probs


def add_segment_contribution(
    model: ContextTreeModel, sequence: Sequence[int], start: int, end: int
) -> None:
    """Add the counts positions [start, end) contribute when ``sequence`` is
    trained with a fresh context.

    Subtracting such a contribution from a trained model (via ``exclude`` in
    :meth:`ContextTreeModel.predict`) removes exactly those positions'
    evidence, which is how test material is held out.
    """
    counts = model._counts
    for t in range(start, end):
        symbol = sequence[t]
        model._check_symbol(symbol)
        for k in range(min(t, model.max_order) + 1):
            ctx = tuple(sequence[t - k : t])
            by_symbol = counts.get(ctx)
            if by_symbol is None:
                by_symbol = counts[ctx] = {}
            by_symbol[symbol] = by_symbol.get(symbol, 0) + 1


def entropy(distribution: np.ndarray) -> float:
    """Shannon entropy in bits."""
    p = np.asarray(distribution, dtype=float)
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum())


def cross_entropy(
    model: ContextTreeModel,
    sequence: Sequence[int],
    online: bool = False,
    per_symbol: bool = False,
):
    """Mean (or per-symbol) -log2 probability the model assigns to a sequence.

    The context starts from the model's running history.  With ``online``
    the model is updated after each prediction, so it learns the sequence
    as it scores it.
    """
    bits = np.empty(len(sequence))
    ctx = list(model.history)
    for i, symbol in enumerate(sequence):
        p = model.predict(ctx)
        bits[i] = -np.log2(p[symbol])
        if online:
            model.update([symbol])
            ctx = list(model.history)
        else:
            ctx.append(symbol)
            if len(ctx) > model.max_order:
                del ctx[0]
    if per_symbol:
        return bits
    return float(bits.mean()) if len(bits) else 0.0


def accuracy(model: ContextTreeModel, sequence: Sequence[int]) -> float:
    """Fraction of symbols matching the argmax prediction (no updating).

    Argmax ties break toward the lowest symbol index.
    """
    if not len(sequence):
        return 0.0
    ctx = list(model.history)
    hits = 0
    for symbol in sequence:
        if int(np.argmax(model.predict(ctx))) == symbol:
            hits += 1
        ctx.append(symbol)
        if len(ctx) > model.max_order:
            del ctx[0]
    return hits / len(sequence)


def mixture_predict(
    fg: ContextTreeModel,
    bg: ContextTreeModel,
    context: Sequence[int],
    lam: float,
) -> np.ndarray:
    """Blend foreground and background predictions: lam*fg + (1-lam)*bg."""
    if fg.alphabet_size != bg.alphabet_size:
        raise ValueError("mixture requires a shared alphabet")
    if not 0.0 <= lam <= 1.0:
        raise ValueError("lambda must be within [0, 1]")
    if lam == 1.0:
        return fg.predict(context)
    if lam == 0.0:
        return bg.predict(context)
    return lam * fg.predict(context) + (1.0 - lam) * bg.predict(context)


_SNAPSHOT_VERSION = 1


def model_to_json(model: ContextTreeModel) -> str:
    """Serialize counts to a versioned JSON snapshot (history not included)."""
    contexts = {
        ",".join(map(str, ctx)): {str(s): c for s, c in sorted(m.items())}
        for ctx, m in sorted(model._counts.items())
    }
    return json.dumps(
        {
            "format": "melstruct-context-tree",
            "version": _SNAPSHOT_VERSION,
            "max_order": model.max_order,
            "alphabet_size": model.alphabet_size,
            "contexts": contexts,
        },
        sort_keys=True,
        separators=(",", ":"),
    )


def model_from_json(text: str) -> ContextTreeModel:
    data = json.loads(text)
    if data.get("format") != "melstruct-context-tree":
        raise ValueError("not a context-tree snapshot")
    if data.get("version") != _SNAPSHOT_VERSION:
        raise ValueError(f"unsupported snapshot version {data.get('version')}")
    model = ContextTreeModel(data["max_order"], data["alphabet_size"])
    for ctx_str, by_symbol in data["contexts"].items():
        ctx = tuple(int(s) for s in ctx_str.split(",")) if ctx_str else ()
        model._counts[ctx] = {int(s): int(c) for s, c in by_symbol.items()}
    return model
