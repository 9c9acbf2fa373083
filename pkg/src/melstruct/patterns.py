"""Half-note pattern encoding and vocabulary statistics.

The rhythmic unit is the half-note window: 8 sixteenth slots.  An onset
pattern is the 8-bit mask of slots carrying a note onset, with slot 0
always set (an initial onset is assumed), which leaves exactly 128 legal
masks.  A pitch pattern is the tuple of scale degrees sounding at the
slots of the window's onset pattern; a window in which nothing sounds at
all yields the single rest sentinel.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from collections.abc import Hashable, Iterable, Mapping, Sequence

import numpy as np
from scipy import stats

from .errors import MelstructError
from .song import Song, SongStructure, TICKS_PER_HALF_NOTE, TICKS_PER_MEASURE

REST = -1  # pitch-pattern sentinel for "nothing sounding"

ONSET_PATTERN_COUNT = 128

# Measure-level rhythm-repetition shapes singled out in corpus reporting.
LISTED_RHYTHM_FORMS = frozenset({"abab", "aabbaabb", "aba", "abababa"})


def _check_window_range(start_tick: int, end_tick: int) -> None:
    if start_tick % TICKS_PER_HALF_NOTE or end_tick % TICKS_PER_HALF_NOTE:
        raise ValueError(
            f"range [{start_tick}, {end_tick}) is not aligned to half-note boundaries"
        )
    if end_tick < start_tick:
        raise ValueError("empty or negative range")


def encode_onset_patterns(
    song: Song, start_tick: int = 0, end_tick: int | None = None
) -> list[int]:
    """Onset masks for every half-note window of a tick range."""
    if end_tick is None:
        end_tick = song.total_ticks
    _check_window_range(start_tick, end_tick)
    masks = [1] * ((end_tick - start_tick) // TICKS_PER_HALF_NOTE)
    for note in song.notes:
        if start_tick <= note.onset < end_tick:
            offset = note.onset - start_tick
            masks[offset // TICKS_PER_HALF_NOTE] |= 1 << (offset % TICKS_PER_HALF_NOTE)
    return masks


def encode_pitch_patterns(
    song: Song, start_tick: int = 0, end_tick: int | None = None
) -> list[tuple[int, ...]]:
    """Degree tuples at the onset slots of every half-note window.

    Slot 0 reports whatever is sounding at the window start: a note onset,
    a note carried over from earlier, or the rest sentinel.
    """
    if end_tick is None:
        end_tick = song.total_ticks
    _check_window_range(start_tick, end_tick)
    masks = encode_onset_patterns(song, start_tick, end_tick)
    degree_at_onset: dict[int, int] = {}
    for note in song.notes:
        degree_at_onset[note.onset] = (note.pitch - song.tonic_pc) % 12

    def sounding_degree(tick: int) -> int:
        for note in song.notes:
            if note.onset <= tick < note.end:
                return (note.pitch - song.tonic_pc) % 12
            if note.onset > tick:
                break
        return REST

    patterns: list[tuple[int, ...]] = []
    for w, mask in enumerate(masks):
        window_start = start_tick + w * TICKS_PER_HALF_NOTE
        if mask == 1 and sounding_degree(window_start) == REST:
            patterns.append((REST,))
            continue
        degrees = []
        for slot in range(8):
            if mask & (1 << slot):
                tick = window_start + slot
                if tick in degree_at_onset:
                    degrees.append(degree_at_onset[tick])
                else:  # the assumed slot-0 onset: carried-over pitch or rest
                    degrees.append(sounding_degree(tick))
        patterns.append(tuple(degrees))
    return patterns


def measure_is_empty(song: Song, measure: int) -> bool:
    """True when no note sounds anywhere in the measure."""
    start = measure * TICKS_PER_MEASURE
    end = start + TICKS_PER_MEASURE
    for note in song.notes:
        if note.onset < end and note.end > start:
            return False
        if note.onset >= end:
            break
    return True


def melodic_phrase_patterns(
    song: Song,
    structure: SongStructure,
    kind: str = "onset",
    drop_empty_measures: bool = True,
) -> list[list[Hashable]]:
    """Pattern sequence per melodic phrase, dropping fully-empty measures."""
    if kind not in ("onset", "pitch"):
        raise ValueError(f"kind must be 'onset' or 'pitch', got {kind!r}")
    sequences: list[list[Hashable]] = []
    for label in structure.labels:
        if not label.is_melodic:
            continue
        patterns: list[Hashable] = []
        for measure in range(label.start_measure, label.end_measure):
            if drop_empty_measures and measure_is_empty(song, measure):
                continue
            start = measure * TICKS_PER_MEASURE
            if kind == "onset":
                patterns.extend(encode_onset_patterns(song, start, start + TICKS_PER_MEASURE))
            else:
                patterns.extend(encode_pitch_patterns(song, start, start + TICKS_PER_MEASURE))
        sequences.append(patterns)
    return sequences


def distinct_and_unique(sequence: Sequence[Hashable]) -> tuple[int, int]:
    """(number of distinct patterns, number occurring exactly once)."""
    counts = Counter(sequence)
    return len(counts), sum(1 for c in counts.values() if c == 1)


@dataclass(frozen=True, slots=True)
class CurvePoint:
    length: float
    mean_distinct: float
    mean_unique: float
    n_samples: int


@dataclass(frozen=True)
class VocabularyCurve:
    points: tuple[CurvePoint, ...]

    def to_dict(self) -> dict:
        return {
            "points": [
                {
                    "length": p.length,
                    "mean_distinct": p.mean_distinct,
                    "mean_unique": p.mean_unique,
                    "n_samples": p.n_samples,
                }
                for p in self.points
            ]
        }


def vocabulary_curve(
    sequences: Iterable[Sequence[Hashable]], min_samples: int = 20
) -> VocabularyCurve:
    """Mean distinct/unique pattern counts, grouped by sequence length.

    Lengths observed fewer than ``min_samples`` times are dropped so the
    reported means are stable.
    """
    by_length: dict[int, list[tuple[int, int]]] = {}
    for seq in sequences:
        if not len(seq):
            continue
        by_length.setdefault(len(seq), []).append(distinct_and_unique(seq))
    points = []
    for length in sorted(by_length):
        rows = by_length[length]
        if len(rows) < min_samples:
            continue
        points.append(
            CurvePoint(
                length=float(length),
                mean_distinct=float(np.mean([r[0] for r in rows])),
                mean_unique=float(np.mean([r[1] for r in rows])),
                n_samples=len(rows),
            )
        )
    return VocabularyCurve(points=tuple(points))


def empirical_distribution(sequences: Iterable[Sequence[Hashable]]) -> dict[Hashable, float]:
    """Relative frequency of each pattern over all sequences."""
    counts: Counter = Counter()
    for seq in sequences:
        counts.update(seq)
    total = sum(counts.values())
    if total == 0:
        return {}
    return {pattern: count / total for pattern, count in counts.items()}


def sample_baseline_phrases(
    dist: Mapping[Hashable, float], length: int, count: int, seed: int
) -> list[tuple[Hashable, ...]]:
    """Phrases built by drawing each pattern i.i.d. from ``dist``.

    Deterministic for a given seed.  Patterns are ordered by their sort key
    before sampling so dict ordering cannot leak into the draw.
    """
    if not dist:
        raise MelstructError("cannot sample from an empty pattern distribution")
    if count < 1:
        raise ValueError("count must be >= 1")
    if length < 1:
        raise ValueError("length must be >= 1")
    support = sorted(dist.keys())
    weights = np.array([dist[p] for p in support], dtype=float)
    if weights.min() < 0 or not math.isclose(weights.sum(), 1.0, abs_tol=1e-6):
        raise ValueError("distribution must be non-negative and sum to 1")
    weights = weights / weights.sum()
    rng = np.random.default_rng(seed)
    draws = rng.choice(len(support), size=(count, length), p=weights)
    return [tuple(support[i] for i in row) for row in draws]


def expected_distinct_uniform(support_size: int, length: int) -> float:
    """Closed-form E[distinct] for i.i.d. uniform draws: m(1-(1-1/m)^L)."""
    m = support_size
    return m * (1.0 - (1.0 - 1.0 / m) ** length)


@dataclass(frozen=True, slots=True)
class RhythmForm:
    form: str
    all_same: bool
    listed_form: bool

    @property
    def other(self) -> bool:
        return not (self.all_same or self.listed_form)


def rhythm_form(measure_tokens: Sequence[Hashable]) -> RhythmForm:
    """Canonical measure-repetition form string ("abab", "aabb", ...).

    Measures share a letter iff their rhythm tokens are identical; the first
    new letter is always the next unused alphabet letter.
    """
    if not len(measure_tokens):
        raise ValueError("need at least one measure")
    letters: dict[Hashable, str] = {}
    form = []
    for token in measure_tokens:
        if token not in letters:
            letters[token] = chr(ord("a") + len(letters))
        form.append(letters[token])
    form_str = "".join(form)
    all_same = len(letters) == 1
    return RhythmForm(
        form=form_str,
        all_same=all_same,
        listed_form=form_str in LISTED_RHYTHM_FORMS,
    )


def measure_rhythm_tokens(song: Song, start_measure: int, length_measures: int) -> list[tuple[int, int]]:
    """Per-measure rhythm token: the pair of half-note onset masks."""
    tokens = []
    for measure in range(start_measure, start_measure + length_measures):
        start = measure * TICKS_PER_MEASURE
        masks = encode_onset_patterns(song, start, start + TICKS_PER_MEASURE)
        tokens.append((masks[0], masks[1]))
    return tokens


def count_significance(sample_a: Sequence[float], sample_b: Sequence[float]) -> float:
    """Two-sided Mann-Whitney U p-value for two count samples.

    Degenerate inputs (all values equal, or identical samples) carry no
    evidence and return 1.0.
    """
    a = list(sample_a)
    b = list(sample_b)
    if not a or not b:
        raise ValueError("both samples must be non-empty")
    if len(set(a) | set(b)) <= 1:
        return 1.0
    if sorted(a) == sorted(b):
        return 1.0
    result = stats.mannwhitneyu(a, b, alternative="two-sided")
    p = float(result.pvalue)
    if math.isnan(p):
        return 1.0
    return p
