import itertools
import math

import numpy as np
import pytest

from melstruct.errors import MelstructError
from melstruct.patterns import (
    REST,
    count_significance,
    distinct_and_unique,
    empirical_distribution,
    encode_onset_patterns,
    encode_pitch_patterns,
    expected_distinct_uniform,
    measure_is_empty,
    measure_rhythm_tokens,
    melodic_phrase_patterns,
    rhythm_form,
    sample_baseline_phrases,
    vocabulary_curve,
)
from melstruct.song import Song
from melstruct.ingest.labels import parse_labels
from helpers import make_song, measure_block


def test_four_quarter_notes():
    song = make_song(measure_block(0, [(0, 60), (4, 62), (8, 64), (12, 65)]), 1)
    assert encode_onset_patterns(song) == [0b00010001, 0b00010001]


def test_whole_note_assumed_onset():
    song = make_song([(0, 16, 60)], 1)
    assert encode_onset_patterns(song) == [0b00000001, 0b00000001]
    assert encode_pitch_patterns(song) == [(0,), (0,)]


def test_unaligned_range_rejected():
    song = make_song([(0, 16, 60)], 1)
    with pytest.raises(ValueError):
        encode_onset_patterns(song, 4, 12)
    with pytest.raises(ValueError):
        encode_pitch_patterns(song, 0, 12)


def test_exhaustive_windows_emit_only_legal_masks():
    seen = set()
    for bits in range(256):
        notes = [(slot, 1, 60) for slot in range(8) if bits & (1 << slot)]
        song = make_song(notes, 1)
        mask = encode_onset_patterns(song, 0, 8)[0]
        assert mask & 1, f"bit 0 clear for input {bits:08b}"
        assert mask == bits | 1
        seen.add(mask)
    assert len(seen) == 128


def test_mask_roundtrip_lossless():
    for mask in range(1, 256, 2):
        slots = [s for s in range(8) if mask & (1 << s)]
        rebuilt = 0
        for s in slots:
            rebuilt |= 1 << s
        assert rebuilt == mask


def test_pitch_patterns_half_notes():
    song = make_song([(0, 8, 60), (8, 8, 67)], 1, tonic_pc=0)
    assert encode_pitch_patterns(song) == [(0,), (7,)]


def test_pitch_pattern_rest_sentinel():
    song = make_song([(0, 8, 60)], 1)
    assert encode_pitch_patterns(song) == [(0,), (REST,)]


def test_pitch_pattern_carried_note_fills_slot_zero():
    song = make_song([(4, 8, 64), (12, 4, 60)], 1, tonic_pc=0)
    # second window starts at tick 8 while the E is still sounding
    patterns = encode_pitch_patterns(song)
    assert patterns[0] == (REST, 4)
    assert patterns[1] == (4, 0)


def test_pitch_pattern_length_matches_popcount():
    rng = np.random.default_rng(23)
    for _ in range(100):
        notes = []
        onsets = sorted(rng.choice(32, size=int(rng.integers(1, 10)), replace=False))
        for i, onset in enumerate(onsets):
            limit = onsets[i + 1] - onset if i + 1 < len(onsets) else 32 - onset
            notes.append((int(onset), int(rng.integers(1, limit + 1)), int(rng.integers(50, 80))))
        song = make_song(notes, 2)
        masks = encode_onset_patterns(song)
        pitch = encode_pitch_patterns(song)
        for mask, degrees in zip(masks, pitch):
            if degrees == (REST,):
                assert mask == 1
            else:
                assert len(degrees) == bin(mask).count("1")


def test_measure_is_empty_considers_sustain():
    song = make_song([(0, 32, 60)], 3)
    assert not measure_is_empty(song, 0)
    assert not measure_is_empty(song, 1)  # sustained into
    assert measure_is_empty(song, 2)


def test_melodic_phrase_patterns_drop_empty_measures():
    notes = measure_block(0, [(0, 60), (8, 62)]) + measure_block(2, [(0, 64), (8, 65)])
    song = make_song(notes, 4)
    structure = parse_labels("A4", song)
    sequences = melodic_phrase_patterns(song, structure, kind="onset")
    assert len(sequences) == 1
    assert len(sequences[0]) == 4  # measures 1 and 3 are empty, dropped


def test_distinct_and_unique():
    assert distinct_and_unique(["p", "p", "p", "p"]) == (1, 0)
    assert distinct_and_unique(["a", "b", "c", "d"]) == (4, 4)
    assert distinct_and_unique(["a", "b", "a"]) == (2, 1)


def test_unique_never_decreases_when_removing_duplicate():
    rng = np.random.default_rng(5)
    for _ in range(200):
        seq = rng.integers(0, 6, size=int(rng.integers(2, 20))).tolist()
        counts = {s: seq.count(s) for s in set(seq)}
        dupes = [s for s, c in counts.items() if c >= 2]
        if not dupes:
            continue
        shorter = list(seq)
        shorter.remove(dupes[0])
        _, unique_before = distinct_and_unique(seq)
        _, unique_after = distinct_and_unique(shorter)
        assert unique_after >= unique_before


def test_vocabulary_curve_invariant_and_grouping():
    sequences = [["p", "q", "p", "q"]] * 25 + [["a", "b", "c"]] * 25
    curve = vocabulary_curve(sequences, min_samples=20)
    lengths = [p.length for p in curve.points]
    assert lengths == [3.0, 4.0]
    for point in curve.points:
        assert point.mean_unique <= point.mean_distinct <= point.length
    assert curve.points[0].mean_distinct == 3.0
    assert curve.points[1].mean_distinct == 2.0
    assert curve.points[1].mean_unique == 0.0


def test_vocabulary_curve_min_samples_filter():
    curve = vocabulary_curve([["a", "b"]] * 5, min_samples=20)
    assert curve.points == ()


def test_baseline_sampler_deterministic_and_degenerate():
    dist = {("p",): 1.0}
    assert sample_baseline_phrases(dist, 6, 1, 0) == [(("p",),) * 6]
    uniform = {i: 1 / 16 for i in range(16)}
    a = sample_baseline_phrases(uniform, 8, 50, seed=123)
    b = sample_baseline_phrases(uniform, 8, 50, seed=123)
    assert a == b
    c = sample_baseline_phrases(uniform, 8, 50, seed=124)
    assert a != c


def test_baseline_empty_distribution_errors():
    with pytest.raises(MelstructError):
        sample_baseline_phrases({}, 4, 1, 0)


def test_expected_distinct_closed_form_against_simulation():
    dist = {i: 1 / 128 for i in range(128)}
    drawn = sample_baseline_phrases(dist, 16, 10000, seed=7)
    mean_distinct = float(np.mean([distinct_and_unique(s)[0] for s in drawn]))
    assert mean_distinct == pytest.approx(expected_distinct_uniform(128, 16), abs=0.1)


def test_expected_distinct_increasing_in_length():
    values = [expected_distinct_uniform(10, L) for L in range(1, 30)]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_empirical_distribution_sums_to_one():
    dist = empirical_distribution([[1, 1, 2], [2, 3]])
    assert sum(dist.values()) == pytest.approx(1.0)
    assert dist[1] == pytest.approx(0.4)


def test_rhythm_form_canonical():
    assert rhythm_form(["r"] * 4).form == "aaaa"
    assert rhythm_form(["r"] * 4).all_same
    form = rhythm_form(["x", "y", "x", "y"])
    assert form.form == "abab" and form.listed_form
    # canonicalization: first new token is always the next letter
    assert rhythm_form(["z", "y", "z", "y"]).form == "abab"
    assert rhythm_form(["p", "q", "p"]).form == "aba"
    assert rhythm_form(["a", "b", "c", "d"]).other


def test_measure_rhythm_tokens():
    song = make_song(
        measure_block(0, [(0, 60), (8, 62)]) + measure_block(1, [(0, 64), (8, 65)]), 2
    )
    tokens = measure_rhythm_tokens(song, 0, 2)
    assert tokens[0] == tokens[1] == (1, 1)


def test_significance_identical_samples():
    assert count_significance([1, 2, 3], [1, 2, 3]) == 1.0
    assert count_significance([5] * 10, [5] * 10) == 1.0


def test_significance_complete_separation():
    assert count_significance([3] * 200, [9] * 200) < 1e-5


def test_significance_small_fixture_exact():
    # oracle: exact enumeration over all rank assignments of {1,2,3} vs {4,5,6}
    a, b = [1, 2, 3], [4, 5, 6]
    observed_u = sum(1 for x in a for y in b if x > y) + 0.5 * sum(
        1 for x in a for y in b if x == y
    )
    pooled = a + b
    us = []
    for combo in itertools.combinations(range(6), 3):
        xs = [pooled[i] for i in combo]
        ys = [pooled[i] for i in range(6) if i not in combo]
        us.append(sum(1 for x in xs for y in ys if x > y))
    mean_u = 4.5
    extreme = sum(1 for u in us if abs(u - mean_u) >= abs(observed_u - mean_u))
    expected = extreme / len(us)
    assert expected == pytest.approx(0.1)
    assert count_significance(a, b) == pytest.approx(expected)


def test_significance_empty_sample_errors():
    with pytest.raises(ValueError):
        count_significance([], [1])
