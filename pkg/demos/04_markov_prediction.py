#!/usr/bin/env python3
"""Variable-order Markov prediction: escape fallback, learning curves, mixtures.

The model keeps counts for every context up to its maximum order and blends
all levels at prediction time, passing escape mass distinct/(total+distinct)
down to shorter contexts and bottoming out in the uniform distribution.
"""

import numpy as np

from melstruct.markov import (
    ContextTreeModel,
    cross_entropy,
    entropy,
    mixture_predict,
)

model = ContextTreeModel(max_order=2, alphabet_size=12)
print("empty model predicts uniformly:", model.predict([0, 4])[:3], "...")

# A strict alternation becomes nearly deterministic once counts accumulate.
model = ContextTreeModel(max_order=2, alphabet_size=12)
bits = cross_entropy(model, [0, 7] * 100, online=True, per_symbol=True)
print(f"\nonline learning of a two-note alternation:")
print(f"  first 10 symbols:  {bits[:10].mean():.3f} bits/symbol")
print(f"  last 100 symbols:  {bits[-100:].mean():.5f} bits/symbol")

# Smoothing keeps every continuation possible.
model = ContextTreeModel(max_order=2, alphabet_size=4)
model.add_sequence([0, 0, 0, 0, 0])
p = model.predict([0])
print(f"\nafter only zeros, P(1|0) is still positive: {p[1]:.4f}")
print(f"prediction entropy: {entropy(p):.3f} bits")

# Foreground/background mixture.
fg = ContextTreeModel(max_order=1, alphabet_size=12)
fg.add_sequence([0, 4, 7, 4] * 20)  # the song itself
bg = ContextTreeModel(max_order=1, alphabet_size=12)
for degrees in ([0, 2, 4, 5], [7, 9, 11, 0], [4, 5, 7, 9]):
    bg.add_sequence(degrees * 10)  # everything else
context = [7]
for lam in (0.0, 0.5, 1.0):
    p = mixture_predict(fg, bg, context, lam)
    print(f"lambda={lam:.1f}: P(4|7)={p[4]:.3f}  P(9|7)={p[9]:.3f}")
