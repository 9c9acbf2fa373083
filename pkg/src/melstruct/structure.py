"""Phrase-level structure: extraction, sections, repetition over time.

Extraction tiles a song left to right into phrases of 4..16 measures
(multiples of 4, longest match first).  A candidate span becomes a phrase
when an approximate repetition of it exists elsewhere in the song; spans
with no repetition fall back to 4-measure unique phrases.  Segments that
are nearly empty of notes are labeled non-melodic (lowercase).

Phrase similarity is a weighted edit distance over per-measure feature
tokens (onset bitmask plus degree sequence); substituting one measure for
another costs one minus their token similarity, so ornament-level changes
stay cheap while unrelated measures cost a full edit.
"""

from __future__ import annotations

from dataclasses import dataclass
from collections.abc import Sequence

import numpy as np

from .song import (
    PhraseLabel,
    Section,
    Song,
    SongStructure,
    TICKS_PER_MEASURE,
    UNIQUE_LETTERS,
)

DEFAULT_SIM_THRESHOLD = 0.75
MIN_PHRASE_MEASURES = 4
MAX_PHRASE_MEASURES = 16

# Fewer melody notes per measure than this marks a segment non-melodic.
MELODIC_DENSITY = 0.5

MeasureToken = tuple[int, tuple[int, ...]]


def measure_features(song: Song) -> list[MeasureToken]:
    """Per-measure token: (16-bit onset mask, tuple of scale degrees)."""
    masks = [0] * song.num_measures
    degrees: list[list[int]] = [[] for _ in range(song.num_measures)]
    for note in song.notes:
        measure = note.onset // TICKS_PER_MEASURE
        masks[measure] |= 1 << (note.onset % TICKS_PER_MEASURE)
        degrees[measure].append((note.pitch - song.tonic_pc) % 12)
    return [(masks[m], tuple(degrees[m])) for m in range(song.num_measures)]


def _levenshtein(a: Sequence, b: Sequence) -> int:
    if not a:
        return len(b)
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, xa in enumerate(a, start=1):
        cur = [i]
        for j, xb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[-1] + 1, prev[j - 1] + (xa != xb)))
        prev = cur
    return prev[-1]


def token_similarity(a: MeasureToken, b: MeasureToken) -> float:
    """Similarity of two measures in [0, 1]: rhythm and pitch, equally weighted."""
    mask_a, deg_a = a
    mask_b, deg_b = b
    onset_sim = 1.0 - bin(mask_a ^ mask_b).count("1") / 16.0
    degree_sim = 1.0 - _levenshtein(deg_a, deg_b) / max(len(deg_a), len(deg_b), 1)
    return 0.5 * (onset_sim + degree_sim)


def token_sim_matrix(tokens: Sequence[MeasureToken]) -> np.ndarray:
    """All-pairs measure similarity, computed once per song."""
    n = len(tokens)
    sim = np.ones((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            s = token_similarity(tokens[i], tokens[j])
            sim[i, j] = sim[j, i] = s
    return sim


def _segment_similarity_cached(
    sim: np.ndarray, a0: int, la: int, b0: int, lb: int
) -> float:
    if la == 0 and lb == 0:
        return 1.0
    prev = np.arange(lb + 1, dtype=float)
    for i in range(1, la + 1):
        cur = np.empty(lb + 1)
        cur[0] = i
        row = sim[a0 + i - 1]
        for j in range(1, lb + 1):
            sub = prev[j - 1] + 1.0 - row[b0 + j - 1]
            best = prev[j] + 1.0
            if cur[j - 1] + 1.0 < best:
                best = cur[j - 1] + 1.0
            if sub < best:
                best = sub
            cur[j] = best
        prev = cur
    return 1.0 - float(prev[lb]) / max(la, lb)


def segment_similarity(
    tokens_a: Sequence[MeasureToken], tokens_b: Sequence[MeasureToken]
) -> float:
    """One minus the normalized weighted edit distance between measure runs.

    Insertions and deletions cost 1; substitution costs 1 - token_similarity.
    """
    tokens = list(tokens_a) + list(tokens_b)
    sim = token_sim_matrix(tokens)
    return _segment_similarity_cached(sim, 0, len(tokens_a), len(tokens_a), len(tokens_b))


def _segment_note_count(song: Song, start_measure: int, length: int) -> int:
    start = start_measure * TICKS_PER_MEASURE
    end = (start_measure + length) * TICKS_PER_MEASURE
    return sum(1 for n in song.notes if start <= n.onset < end)


def _has_match(sim: np.ndarray, start: int, length: int, threshold: float) -> bool:
    num_measures = sim.shape[0]
    for other in range(0, num_measures - length + 1):
        if abs(other - start) < length:
            continue  # overlapping placements are not repetitions
        if _segment_similarity_cached(sim, start, length, other, length) >= threshold:
            return True
    return False


def extract_phrases(
    song: Song,
    min_len: int = MIN_PHRASE_MEASURES,
    sim_threshold: float = DEFAULT_SIM_THRESHOLD,
) -> SongStructure:
    """Tile a song into phrases by approximate-repetition search."""
    tokens = measure_features(song)
    sim = token_sim_matrix(tokens)
    num_measures = song.num_measures
    candidate_lengths = sorted(
        range(min_len, MAX_PHRASE_MEASURES + 1, min_len), reverse=True
    )

    # Pass 1: choose segment boundaries, longest repeating candidate first.
    spans: list[tuple[int, int]] = []  # (start_measure, length)
    pos = 0
    while pos < num_measures:
        remaining = num_measures - pos
        chosen = None
        for length in candidate_lengths:
            if length > remaining:
                continue
            if _has_match(sim, pos, length, sim_threshold):
                chosen = length
                break
        if chosen is None:
            chosen = min(min_len, remaining)
        spans.append((pos, chosen))
        pos += chosen

    # Pass 2: classify segments and group them by pairwise similarity.
    melodic = [
        _segment_note_count(song, start, length) >= MELODIC_DENSITY * length
        for start, length in spans
    ]
    group_of = _group_segments(sim, spans, melodic, sim_threshold)
    letters = _assign_letters(spans, melodic, group_of)

    labels = tuple(
        PhraseLabel(letter=letters[i], length_measures=length, start_measure=start)
        for i, (start, length) in enumerate(spans)
    )
    return SongStructure(song_id=song.id, labels=labels)


def _group_segments(
    sim: np.ndarray,
    spans: list[tuple[int, int]],
    melodic: list[bool],
    threshold: float,
) -> list[int]:
    """Group index per segment: joins the first earlier segment that matches."""
    group_of = list(range(len(spans)))
    for i in range(len(spans)):
        si, li = spans[i]
        for j in range(i):
            if melodic[i] != melodic[j] or group_of[j] != j:
                continue  # only match group representatives of the same class
            sj, lj = spans[j]
            if _segment_similarity_cached(sim, si, li, sj, lj) >= threshold:
                group_of[i] = j
                break
    return group_of


def _assign_letters(
    spans: list[tuple[int, int]], melodic: list[bool], group_of: list[int]
) -> list[str]:
    repeated_pool = [c for c in "ABCDEFGHIJKLMNOPQRSTUVWZY" if c not in UNIQUE_LETTERS]
    unique_pool = ["X", "Y", "Z"] + [c for c in "WVUTSRQPONMLKJIHGFEDCBA"]
    letters = [""] * len(spans)
    assigned: dict[int, str] = {}
    used_repeated = 0
    used_unique: set[str] = set()
    group_sizes = {g: sum(1 for x in group_of if x == g) for g in set(group_of)}
    for i in range(len(spans)):
        group = group_of[i]
        if group in assigned:
            letters[i] = assigned[group]
            continue
        if group_sizes[group] > 1:
            letter = repeated_pool[used_repeated % len(repeated_pool)]
            used_repeated += 1
        else:
            letter = next(
                (c for c in unique_pool if c not in used_unique and c not in assigned.values()),
                "X",
            )
            used_unique.add(letter)
        if not melodic[i]:
            letter = letter.lower()
        assigned[group] = letter
        letters[i] = letter
    return letters


def derive_sections(structure: SongStructure) -> list[Section]:
    """Maximal runs of melodic, repeated phrases."""
    sections: list[Section] = []
    run: list[PhraseLabel] = []
    for i, label in enumerate(structure.labels):
        if label.is_melodic and not structure.is_unique_phrase(i):
            run.append(label)
        elif run:
            sections.append(_close_run(run))
            run = []
    if run:
        sections.append(_close_run(run))
    return sections


def _close_run(run: list[PhraseLabel]) -> Section:
    return Section(
        start_measure=run[0].start_measure,
        length_measures=run[-1].end_measure - run[0].start_measure,
        phrase_letters=tuple(lab.letter for lab in run),
    )


def _repeating_measure_flags(structure: SongStructure) -> np.ndarray:
    """Per-measure flag: inside a phrase whose letter occurred earlier."""
    flags = np.zeros(structure.num_measures, dtype=bool)
    seen: set[str] = set()
    for i, label in enumerate(structure.labels):
        repeating = label.letter in seen and label.letter not in UNIQUE_LETTERS
        if repeating:
            flags[label.start_measure : label.end_measure] = True
        seen.add(label.letter)
    return flags


@dataclass(frozen=True)
class RepetitionTimeline:
    num_bins: int
    fraction_repeating: tuple[float, ...]

    def to_dict(self) -> dict:
        return {
            "num_bins": self.num_bins,
            "fraction_repeating": list(self.fraction_repeating),
        }


def repetition_timeline(
    corpus: Sequence[SongStructure], num_bins: int
) -> RepetitionTimeline:
    """Fraction of corpus time that is phrase repetition, per normalized bin.

    Each song contributes, per bin, the fraction of that bin's span lying
    inside a phrase whose letter already occurred earlier in the song; the
    timeline is the mean over songs.
    """
    if num_bins < 2:
        raise ValueError("num_bins must be >= 2")
    if not corpus:
        raise ValueError("corpus must contain at least one structure")
    totals = np.zeros(num_bins)
    for structure in corpus:
        flags = _repeating_measure_flags(structure).astype(float)
        num_measures = structure.num_measures
        # integrate the piecewise-constant flag over each normalized bin
        edges = np.linspace(0.0, num_measures, num_bins + 1)
        cumulative = np.concatenate([[0.0], np.cumsum(flags)])
        def integral(x: float) -> float:
            idx = int(np.floor(x))
            if idx >= num_measures:
                return float(cumulative[-1])
            return float(cumulative[idx] + flags[idx] * (x - idx))
        for b in range(num_bins):
            span = edges[b + 1] - edges[b]
            totals[b] += (integral(edges[b + 1]) - integral(edges[b])) / span
    fractions = totals / len(corpus)
    return RepetitionTimeline(
        num_bins=num_bins, fraction_repeating=tuple(float(f) for f in fractions)
    )


def repeat_latency_stats(corpus: Sequence[SongStructure]) -> dict[str, float]:
    """How soon repeated phrases come back.

    immediate_repeat_fraction: among melodic phrase occurrences that recur
    later, the fraction whose next occurrence starts right where they end.
    within_quarter_fraction: among first occurrences of repeated melodic
    letters, the fraction whose first repeat starts within a quarter of the
    song after the introduction ends.
    """
    immediate = 0
    immediate_total = 0
    quarter = 0
    quarter_total = 0
    for structure in corpus:
        melodic = [
            (i, lab)
            for i, lab in enumerate(structure.labels)
            if lab.is_melodic and not structure.is_unique_phrase(i)
        ]
        for pos, (i, lab) in enumerate(melodic):
            nxt = next(
                (other for _, other in melodic[pos + 1 :] if other.letter == lab.letter),
                None,
            )
            if nxt is None:
                continue
            immediate_total += 1
            if nxt.start_measure == lab.end_measure:
                immediate += 1
        first_seen: set[str] = set()
        for pos, (i, lab) in enumerate(melodic):
            if lab.letter in first_seen:
                continue
            first_seen.add(lab.letter)
            nxt = next(
                (other for _, other in melodic[pos + 1 :] if other.letter == lab.letter),
                None,
            )
            if nxt is None:
                continue
            quarter_total += 1
            if nxt.start_measure - lab.end_measure <= structure.num_measures / 4.0:
                quarter += 1
    return {
        "immediate_repeat_fraction": immediate / immediate_total if immediate_total else 0.0,
        "within_quarter_fraction": quarter / quarter_total if quarter_total else 0.0,
    }


def novelty_ratio(structure: SongStructure) -> float:
    """Fraction of the song that is first-occurrence material.

    First occurrences of melodic letters are new; unique phrases are new;
    non-melodic phrases are new unless their letter repeats an earlier
    non-melodic phrase.
    """
    new_measures = 0
    seen: set[str] = set()
    for i, label in enumerate(structure.labels):
        is_new = structure.is_unique_phrase(i) or label.letter not in seen
        if is_new:
            new_measures += label.length_measures
        seen.add(label.letter)
    return new_measures / structure.num_measures
