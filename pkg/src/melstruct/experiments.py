"""Corpus-level repetition and predictability experiments.

Every function takes a corpus: a list of (Song, SongStructure) pairs.  The
corpus is processed in song-id order and all randomness flows from the
config seed, so a given corpus and config always produce the same numbers.

Foreground models are trained on the song under analysis, background models
on every other song in the corpus.  Held-out material is never copied out
of a model; instead the exact counts the held-out positions contributed are
subtracted at prediction time, which makes holdout hygiene auditable.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from collections.abc import Sequence

import numpy as np

from . import patterns
from .markov import ContextTreeModel, add_segment_contribution, cross_entropy, entropy
from .song import (
    Song,
    SongStructure,
    TICKS_PER_HALF_NOTE,
    TICKS_PER_MEASURE,
    UNIQUE_LETTERS,
    to_degree_sequence,
)
from .structure import (
    derive_sections,
    measure_features,
    novelty_ratio,
    repeat_latency_stats,
    repetition_timeline,
    token_sim_matrix,
    _segment_similarity_cached,
)

DEGREE_ALPHABET = 12
TEST_PREFIX_NOTES = 8


class StructuralPosition(enum.Enum):
    SECTION_START = "section_start"
    PHRASE_START = "phrase_start"
    PHRASE_MIDDLE = "phrase_middle"
    PHRASE_END = "phrase_end"
    SECTION_END = "section_end"


SWEEP_VARIANTS = ("include_duplicates", "holdout_repeats")


@dataclass(frozen=True)
class ExperimentConfig:
    max_order_fg: int = 8
    max_order_bg: int = 2
    lambda_grid: tuple[float, ...] = tuple(round(0.1 * i, 1) for i in range(11))
    num_bins: int = 20
    seed: int = 0
    sim_threshold: float = 0.75
    min_phrase_samples: int = 20
    baseline_samples: int = 1000
    song_length_bin_width: int = 8

    def __post_init__(self):
        if not all(0.0 <= lam <= 1.0 for lam in self.lambda_grid):
            raise ValueError("lambda grid values must lie in [0, 1]")
        if self.num_bins < 2:
            raise ValueError("num_bins must be >= 2")

    def to_dict(self) -> dict:
        return {
            "max_order_fg": self.max_order_fg,
            "max_order_bg": self.max_order_bg,
            "lambda_grid": list(self.lambda_grid),
            "num_bins": self.num_bins,
            "seed": self.seed,
            "sim_threshold": self.sim_threshold,
            "min_phrase_samples": self.min_phrase_samples,
            "baseline_samples": self.baseline_samples,
            "song_length_bin_width": self.song_length_bin_width,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        kwargs = dict(data)
        if "lambda_grid" in kwargs:
            kwargs["lambda_grid"] = tuple(float(x) for x in kwargs["lambda_grid"])
        return cls(**kwargs)


Corpus = Sequence[tuple[Song, SongStructure]]


def _sorted_corpus(corpus: Corpus) -> list[tuple[Song, SongStructure]]:
    if not corpus:
        raise ValueError("corpus is empty")
    return sorted(corpus, key=lambda pair: pair[0].id)


def _note_phrase_indices(song: Song, structure: SongStructure) -> list[int]:
    out = []
    phrase_i = 0
    labels = structure.labels
    for note in song.notes:
        while note.onset >= labels[phrase_i].end_tick:
            phrase_i += 1
        out.append(phrase_i)
    return out


def note_positions(song: Song, structure: SongStructure) -> list[StructuralPosition]:
    """Structural position of every note; section extremes take precedence."""
    sections = derive_sections(structure)
    section_start_phrases = set()
    section_end_phrases = set()
    for section in sections:
        section_start_phrases.add(structure.phrase_at_measure(section.start_measure))
        section_end_phrases.add(structure.phrase_at_measure(section.end_measure - 1))
    positions = []
    for note, phrase_i in zip(song.notes, _note_phrase_indices(song, structure)):
        lab = structure.labels[phrase_i]
        in_first = note.onset < lab.start_tick + TICKS_PER_HALF_NOTE
        in_last = note.onset >= lab.end_tick - TICKS_PER_HALF_NOTE
        if in_first and phrase_i in section_start_phrases:
            positions.append(StructuralPosition.SECTION_START)
        elif in_last and phrase_i in section_end_phrases:
            positions.append(StructuralPosition.SECTION_END)
        elif in_first:
            positions.append(StructuralPosition.PHRASE_START)
        elif in_last:
            positions.append(StructuralPosition.PHRASE_END)
        else:
            positions.append(StructuralPosition.PHRASE_MIDDLE)
    return positions


@dataclass(frozen=True)
class BinnedCurve:
    num_bins: int
    means: tuple[float | None, ...]
    counts: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "num_bins": self.num_bins,
            "means": list(self.means),
            "counts": list(self.counts),
        }


def _binned(values: list[tuple[float, float]], num_bins: int) -> BinnedCurve:
    sums = np.zeros(num_bins)
    counts = np.zeros(num_bins, dtype=int)
    for rel, value in values:
        b = min(int(rel * num_bins), num_bins - 1)
        sums[b] += value
        counts[b] += 1
    means = tuple(
        float(sums[b] / counts[b]) if counts[b] else None for b in range(num_bins)
    )
    return BinnedCurve(num_bins=num_bins, means=means, counts=tuple(int(c) for c in counts))


def _online_note_bits(song: Song, max_order: int) -> np.ndarray:
    model = ContextTreeModel(max_order, DEGREE_ALPHABET)
    return cross_entropy(model, to_degree_sequence(song), online=True, per_symbol=True)


def within_phrase_curve(corpus: Corpus, config: ExperimentConfig = ExperimentConfig()) -> BinnedCurve:
    """Online prediction cost binned by a note's position inside its phrase.

    One fresh foreground model per song learns the song as it scores it;
    only notes inside melodic phrases are binned.
    """
    values: list[tuple[float, float]] = []
    for song, structure in _sorted_corpus(corpus):
        bits = _online_note_bits(song, config.max_order_fg)
        for note, phrase_i, b in zip(
            song.notes, _note_phrase_indices(song, structure), bits
        ):
            lab = structure.labels[phrase_i]
            if not lab.is_melodic:
                continue
            rel = (note.onset - lab.start_tick) / (lab.end_tick - lab.start_tick)
            values.append((rel, float(b)))
    return _binned(values, config.num_bins)


def over_song_curve(corpus: Corpus, config: ExperimentConfig = ExperimentConfig()) -> BinnedCurve:
    """Online prediction cost binned by normalized position in the song."""
    values: list[tuple[float, float]] = []
    for song, structure in _sorted_corpus(corpus):
        bits = _online_note_bits(song, config.max_order_fg)
        total = song.total_ticks
        for note, b in zip(song.notes, bits):
            values.append((note.onset / total, float(b)))
    return _binned(values, config.num_bins)


def held_out_phrase_indices(
    song: Song, structure: SongStructure, sim_threshold: float
) -> set[int]:
    """Phrases that repeat or resemble earlier material.

    A phrase is held out when it shares a letter with an earlier phrase, or
    when it is unique-lettered but its measures are similar (at the phrase
    similarity threshold) to some earlier phrase.
    """
    held: set[int] = set()
    tokens = measure_features(song)
    sim = token_sim_matrix(tokens)
    seen: set[str] = set()
    labels = structure.labels
    for i, lab in enumerate(labels):
        if lab.letter in seen and lab.letter not in UNIQUE_LETTERS:
            held.add(i)
        elif structure.is_unique_phrase(i):
            for j in range(i):
                if (
                    _segment_similarity_cached(
                        sim,
                        lab.start_measure,
                        lab.length_measures,
                        labels[j].start_measure,
                        labels[j].length_measures,
                    )
                    >= sim_threshold
                ):
                    held.add(i)
                    break
        seen.add(lab.letter)
    return held


def _phrase_note_spans(song: Song, structure: SongStructure) -> list[tuple[int, int]]:
    """Per phrase: the [start, end) range of note indices it contains."""
    note_phrases = _note_phrase_indices(song, structure)
    spans = [(0, 0)] * len(structure.labels)
    for phrase_i in range(len(structure.labels)):
        idxs = [t for t, p in enumerate(note_phrases) if p == phrase_i]
        spans[phrase_i] = (idxs[0], idxs[-1] + 1) if idxs else (0, 0)
    return spans


@dataclass
class _SongModels:
    """Per-song prediction state shared by the sweep and position analyses."""

    seq: tuple[int, ...]
    bg_contrib: ContextTreeModel  # this song's contribution to the background
    fg_full: ContextTreeModel  # trained on the whole song
    fg_kept: ContextTreeModel  # trained per phrase, repeats held out
    kept_phrases: set[int]
    phrase_spans: list[tuple[int, int]]


def _build_song_models(
    song: Song, structure: SongStructure, config: ExperimentConfig
) -> _SongModels:
    seq = to_degree_sequence(song)
    bg_contrib = ContextTreeModel(config.max_order_bg, DEGREE_ALPHABET)
    bg_contrib.add_sequence(seq)
    fg_full = ContextTreeModel(config.max_order_fg, DEGREE_ALPHABET)
    fg_full.add_sequence(seq)
    held = held_out_phrase_indices(song, structure, config.sim_threshold)
    kept = {i for i in range(len(structure.labels)) if i not in held}
    spans = _phrase_note_spans(song, structure)
    fg_kept = ContextTreeModel(config.max_order_fg, DEGREE_ALPHABET)
    for phrase_i in sorted(kept):
        lo, hi = spans[phrase_i]
        if hi > lo:
            fg_kept.add_sequence(seq[lo:hi])
    return _SongModels(
        seq=seq,
        bg_contrib=bg_contrib,
        fg_full=fg_full,
        fg_kept=fg_kept,
        kept_phrases=kept,
        phrase_spans=spans,
    )


def _train_background(corpus: Corpus, config: ExperimentConfig) -> ContextTreeModel:
    bg = ContextTreeModel(config.max_order_bg, DEGREE_ALPHABET)
    for song, _ in corpus:
        bg.add_sequence(to_degree_sequence(song))
    return bg


def fg_bg_sweep(
    corpus: Corpus,
    variant: str,
    config: ExperimentConfig = ExperimentConfig(),
) -> list[dict]:
    """Foreground/background mixture metrics on 8-note phrase prefixes.

    Tests the first 8 notes of each melodic phrase (shorter phrases are
    tested whole).  "include_duplicates" trains the foreground on the whole
    song minus the tested notes; "holdout_repeats" removes repeated and
    similar phrases from foreground training and tests only the remaining
    phrases.  The background is trained on every other song.  Models are
    not updated while a prefix is being tested.
    """
    if variant not in SWEEP_VARIANTS:
        raise ValueError(f"variant must be one of {SWEEP_VARIANTS}, got {variant!r}")
    ordered = _sorted_corpus(corpus)
    bg_all = _train_background(ordered, config)
    lambdas = list(config.lambda_grid)
    ent_sums = np.zeros(len(lambdas))
    ce_sums = np.zeros(len(lambdas))
    hit_sums = np.zeros(len(lambdas))
    n_tested = 0

    for song, structure in ordered:
        models = _build_song_models(song, structure, config)
        seq = models.seq
        for phrase_i, lab in enumerate(structure.labels):
            if not lab.is_melodic:
                continue
            if variant == "holdout_repeats" and phrase_i not in models.kept_phrases:
                continue
            lo, hi = models.phrase_spans[phrase_i]
            if hi == lo:
                continue
            hi = min(hi, lo + TEST_PREFIX_NOTES)
            if variant == "include_duplicates":
                fg_model = models.fg_full
                exclusion = ContextTreeModel(config.max_order_fg, DEGREE_ALPHABET)
                add_segment_contribution(exclusion, seq, lo, hi)
            else:
                fg_model = models.fg_kept
                phrase_lo, phrase_hi = models.phrase_spans[phrase_i]
                phrase_seq = seq[phrase_lo:phrase_hi]
                exclusion = ContextTreeModel(config.max_order_fg, DEGREE_ALPHABET)
                add_segment_contribution(exclusion, phrase_seq, 0, hi - lo)
            for t in range(lo, hi):
                ctx = seq[max(0, t - config.max_order_fg) : t]
                p_fg = fg_model.predict(ctx, exclude=exclusion)
                p_bg = bg_all.predict(ctx, exclude=models.bg_contrib)
                symbol = seq[t]
                for li, lam in enumerate(lambdas):
                    p = lam * p_fg + (1.0 - lam) * p_bg
                    ent_sums[li] += entropy(p)
                    ce_sums[li] += -np.log2(p[symbol])
                    hit_sums[li] += 1.0 if int(np.argmax(p)) == symbol else 0.0
                n_tested += 1

    rows = []
    for li, lam in enumerate(lambdas):
        rows.append(
            {
                "lambda": float(lam),
                "entropy": float(ent_sums[li] / n_tested) if n_tested else None,
                "cross_entropy": float(ce_sums[li] / n_tested) if n_tested else None,
                "accuracy": float(hit_sums[li] / n_tested) if n_tested else None,
                "n_notes": n_tested,
            }
        )
    return rows


def positional_cross_entropy(
    corpus: Corpus, config: ExperimentConfig = ExperimentConfig()
) -> dict:
    """Mean prediction cost per structural position, background and foreground.

    The background model (low order) is trained on all other songs and
    scores every note.  The foreground model (high order) is trained on the
    song with repeated phrases held out and scores notes in tiled 8-note
    windows, each window's own count contributions subtracted first.
    """
    ordered = _sorted_corpus(corpus)
    bg_all = _train_background(ordered, config)
    sums = {
        kind: {pos: 0.0 for pos in StructuralPosition} for kind in ("background", "foreground")
    }
    counts = {
        kind: {pos: 0 for pos in StructuralPosition} for kind in ("background", "foreground")
    }
    totals = {"background": 0.0, "foreground": 0.0}
    total_notes = 0

    for song, structure in ordered:
        models = _build_song_models(song, structure, config)
        seq = models.seq
        positions = note_positions(song, structure)
        total_notes += len(seq)

        for t, symbol in enumerate(seq):
            ctx = seq[max(0, t - config.max_order_bg) : t]
            p = bg_all.predict(ctx, exclude=models.bg_contrib)
            bits = -float(np.log2(p[symbol]))
            sums["background"][positions[t]] += bits
            counts["background"][positions[t]] += 1
            totals["background"] += bits

        kept_spans = [
            models.phrase_spans[i]
            for i in sorted(models.kept_phrases)
            if models.phrase_spans[i][1] > models.phrase_spans[i][0]
        ]
        for w_start in range(0, len(seq), TEST_PREFIX_NOTES):
            w_end = min(len(seq), w_start + TEST_PREFIX_NOTES)
            exclusion = ContextTreeModel(config.max_order_fg, DEGREE_ALPHABET)
            for lo, hi in kept_spans:
                ov_lo, ov_hi = max(lo, w_start), min(hi, w_end)
                if ov_lo < ov_hi:
                    add_segment_contribution(
                        exclusion, seq[lo:hi], ov_lo - lo, ov_hi - lo
                    )
            for t in range(w_start, w_end):
                ctx = seq[max(0, t - config.max_order_fg) : t]
                p = models.fg_kept.predict(ctx, exclude=exclusion)
                bits = -float(np.log2(p[seq[t]]))
                sums["foreground"][positions[t]] += bits
                counts["foreground"][positions[t]] += 1
                totals["foreground"] += bits

    result: dict = {}
    for kind in ("background", "foreground"):
        result[kind] = {
            pos.value: (sums[kind][pos] / counts[kind][pos]) if counts[kind][pos] else None
            for pos in StructuralPosition
        }
        result[f"{kind}_mean_bits"] = totals[kind] / total_notes if total_notes else None
    result["note_counts"] = {
        pos.value: counts["background"][pos] for pos in StructuralPosition
    }
    return result


def phrase_position_pitch_stats(corpus: Corpus) -> dict:
    """Scale-degree statistics at phrase starts, middles and ends."""
    hists = {key: np.zeros(DEGREE_ALPHABET) for key in ("start", "middle", "end")}
    for song, structure in _sorted_corpus(corpus):
        degrees = to_degree_sequence(song)
        for note, phrase_i, degree in zip(
            song.notes, _note_phrase_indices(song, structure), degrees
        ):
            lab = structure.labels[phrase_i]
            if not lab.is_melodic:
                continue
            if note.onset < lab.start_tick + TICKS_PER_HALF_NOTE:
                key = "start"
            elif note.onset >= lab.end_tick - TICKS_PER_HALF_NOTE:
                key = "end"
            else:
                key = "middle"
            hists[key][degree] += 1
    out = {}
    for key, hist in hists.items():
        total = hist.sum()
        if total == 0:
            out[key] = {"histogram": [0] * DEGREE_ALPHABET, "entropy_bits": None, "tonic_probability": None}
            continue
        probs = hist / total
        out[key] = {
            "histogram": [int(c) for c in hist],
            "entropy_bits": entropy(probs),
            "tonic_probability": float(probs[0]),
        }
    return out


def _song_onset_sequence(song: Song, structure: SongStructure) -> list[int]:
    """Onset patterns over melodic-phrase measures, skipping empty measures."""
    seq: list[int] = []
    for lab in structure.labels:
        if not lab.is_melodic:
            continue
        for measure in range(lab.start_measure, lab.end_measure):
            if patterns.measure_is_empty(song, measure):
                continue
            start = measure * TICKS_PER_MEASURE
            seq.extend(patterns.encode_onset_patterns(song, start, start + TICKS_PER_MEASURE))
    return seq


def song_vocabulary_curve(
    corpus: Corpus, config: ExperimentConfig = ExperimentConfig()
) -> dict:
    """Onset-pattern vocabulary per song as a function of song length.

    Song length counts half-note windows of melodic-phrase material after
    dropping empty measures.  A seeded random baseline draws patterns
    i.i.d. from the corpus distribution at each bin's mean length.
    """
    ordered = _sorted_corpus(corpus)
    per_song = {}
    sequences = []
    for song, structure in ordered:
        seq = _song_onset_sequence(song, structure)
        if seq:
            sequences.append(seq)
        distinct, unique = patterns.distinct_and_unique(seq)
        per_song[song.id] = {"length": len(seq), "distinct": distinct, "unique": unique}

    width = config.song_length_bin_width
    by_bin: dict[int, list[str]] = {}
    for song_id, row in per_song.items():
        if row["length"] == 0:
            continue
        by_bin.setdefault(row["length"] // width, []).append(song_id)

    dist = patterns.empirical_distribution(sequences)
    real_points = []
    baseline_points = []
    for bin_idx in sorted(by_bin):
        ids = by_bin[bin_idx]
        lengths = [per_song[i]["length"] for i in ids]
        mean_length = float(np.mean(lengths))
        real_points.append(
            {
                "length": mean_length,
                "mean_distinct": float(np.mean([per_song[i]["distinct"] for i in ids])),
                "mean_unique": float(np.mean([per_song[i]["unique"] for i in ids])),
                "n_samples": len(ids),
            }
        )
        if dist:
            drawn = patterns.sample_baseline_phrases(
                dist,
                max(1, int(round(mean_length))),
                config.baseline_samples,
                seed=_derive_seed(config.seed, 2, bin_idx),
            )
            stats = [patterns.distinct_and_unique(s) for s in drawn]
            baseline_points.append(
                {
                    "length": mean_length,
                    "mean_distinct": float(np.mean([s[0] for s in stats])),
                    "mean_unique": float(np.mean([s[1] for s in stats])),
                    "n_samples": len(drawn),
                }
            )
    return {
        "real": {"points": real_points},
        "baseline": {"points": baseline_points},
        "per_song": per_song,
    }


def _derive_seed(seed: int, stream: int, index: int) -> int:
    # stable per-use-site seeds derived from the single run seed
    return int(np.random.SeedSequence([seed, stream, index]).generate_state(1)[0])


def phrase_vocabulary(
    corpus: Corpus, kind: str, config: ExperimentConfig = ExperimentConfig()
) -> dict:
    """Within-phrase vocabulary curves with a matched random baseline."""
    ordered = _sorted_corpus(corpus)
    sequences = []
    for song, structure in ordered:
        sequences.extend(patterns.melodic_phrase_patterns(song, structure, kind=kind))
    real = patterns.vocabulary_curve(sequences, min_samples=config.min_phrase_samples)
    dist = patterns.empirical_distribution(sequences)
    baseline_points = []
    stream = 0 if kind == "onset" else 1
    for point in real.points:
        drawn = patterns.sample_baseline_phrases(
            dist,
            int(point.length),
            config.baseline_samples,
            seed=_derive_seed(config.seed, stream, int(point.length)),
        )
        stats = [patterns.distinct_and_unique(s) for s in drawn]
        baseline_points.append(
            {
                "length": point.length,
                "mean_distinct": float(np.mean([s[0] for s in stats])),
                "mean_unique": float(np.mean([s[1] for s in stats])),
                "n_samples": len(drawn),
            }
        )
    return {"real": real.to_dict(), "baseline": {"points": baseline_points}}


def rhythm_form_stats(corpus: Corpus) -> dict:
    """Corpus fractions of all-same and listed measure-repetition forms."""
    n = 0
    all_same = 0
    listed = 0
    for song, structure in _sorted_corpus(corpus):
        for lab in structure.labels:
            if not lab.is_melodic:
                continue
            tokens = patterns.measure_rhythm_tokens(song, lab.start_measure, lab.length_measures)
            form = patterns.rhythm_form(tokens)
            n += 1
            all_same += form.all_same
            listed += form.listed_form
    return {
        "n_phrases": n,
        "all_same_fraction": all_same / n if n else None,
        "listed_form_fraction": listed / n if n else None,
    }


def onset_pattern_stats(corpus: Corpus) -> dict:
    """Distinct half-note onset patterns over all non-empty measures."""
    seen: set[int] = set()
    total = 0
    for song, _ in _sorted_corpus(corpus):
        for measure in range(song.num_measures):
            if patterns.measure_is_empty(song, measure):
                continue
            start = measure * TICKS_PER_MEASURE
            masks = patterns.encode_onset_patterns(song, start, start + TICKS_PER_MEASURE)
            seen.update(masks)
            total += len(masks)
    return {"distinct_patterns": len(seen), "total_windows": total}


def analyze_corpus(corpus: Corpus, config: ExperimentConfig = ExperimentConfig()) -> dict:
    """Every corpus metric in one JSON-compatible dictionary."""
    ordered = _sorted_corpus(corpus)
    structures = [structure for _, structure in ordered]
    over_song = over_song_curve(ordered, config)
    novelty = {song.id: novelty_ratio(structure) for song, structure in ordered}
    novelty_values = list(novelty.values())
    in_band = sum(1 for v in novelty_values if 0.15 <= v <= 0.35)
    from .ingest.labels import render_labels

    return {
        "corpus": {
            "num_songs": len(ordered),
            "num_notes": sum(len(song.notes) for song, _ in ordered),
        },
        "onset_pattern_stats": onset_pattern_stats(ordered),
        "phrase_vocabulary": {
            "onset": phrase_vocabulary(ordered, "onset", config),
            "pitch": phrase_vocabulary(ordered, "pitch", config),
        },
        "rhythm_forms": rhythm_form_stats(ordered),
        "within_phrase_curve": within_phrase_curve(ordered, config).to_dict(),
        "over_song_curve": {
            **over_song.to_dict(),
            "bins_below_one_bit": [
                bool(m is not None and m < 1.0) for m in over_song.means
            ],
        },
        "repetition_timeline": repetition_timeline(structures, config.num_bins).to_dict(),
        "repeat_latency": repeat_latency_stats(structures),
        "novelty": {
            "per_song": novelty,
            "mean": float(np.mean(novelty_values)),
            "fraction_in_15_35": in_band / len(novelty_values),
        },
        "fg_bg_sweep": {
            variant: fg_bg_sweep(ordered, variant, config) for variant in SWEEP_VARIANTS
        },
        "positional_cross_entropy": positional_cross_entropy(ordered, config),
        "phrase_position_pitch_stats": phrase_position_pitch_stats(ordered),
        "song_vocabulary": song_vocabulary_curve(ordered, config),
        "per_song": {
            song.id: {
                "num_measures": song.num_measures,
                "num_notes": len(song.notes),
                "tonic_pc": song.tonic_pc,
                "mode": song.mode,
                "structure": render_labels(structure),
                "novelty_ratio": novelty[song.id],
            }
            for song, structure in ordered
        },
    }


def _flatten_scalars(data, prefix: str = "") -> dict[str, float]:
    flat: dict[str, float] = {}
    if isinstance(data, dict):
        for key in sorted(data):
            flat.update(_flatten_scalars(data[key], f"{prefix}{key}."))
    elif isinstance(data, (int, float)) and not isinstance(data, bool):
        flat[prefix[:-1]] = float(data)
    return flat


def compare_corpora(
    reference: Corpus, generated: Corpus, config: ExperimentConfig = ExperimentConfig()
) -> dict:
    """Run the full battery on both corpora and report deltas.

    Vocabulary significance compares per-song distinct onset-pattern counts
    and per-phrase distinct pitch-pattern counts between the corpora.
    """
    ref_report = analyze_corpus(reference, config)
    gen_report = analyze_corpus(generated, config)

    ref_flat = _flatten_scalars(ref_report)
    gen_flat = _flatten_scalars(gen_report)
    deltas = {
        key: gen_flat[key] - ref_flat[key]
        for key in sorted(set(ref_flat) & set(gen_flat))
        if not key.startswith("per_song.")
    }

    def song_counts(report: dict) -> list[int]:
        return [
            row["distinct"]
            for _, row in sorted(report["song_vocabulary"]["per_song"].items())
        ]

    def phrase_counts(corpus: Corpus) -> list[int]:
        counts = []
        for song, structure in _sorted_corpus(corpus):
            for seq in patterns.melodic_phrase_patterns(song, structure, kind="pitch"):
                if seq:
                    counts.append(patterns.distinct_and_unique(seq)[0])
        return counts

    significance = {
        "song_onset_vocabulary_p": patterns.count_significance(
            song_counts(ref_report), song_counts(gen_report)
        ),
        "phrase_pitch_vocabulary_p": patterns.count_significance(
            phrase_counts(reference), phrase_counts(generated)
        ),
    }
    return {
        "reference": ref_report,
        "generated": gen_report,
        "deltas": deltas,
        "significance": significance,
    }
