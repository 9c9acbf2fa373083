import json

import numpy as np
import pytest

from melstruct.song import NoteEvent, Song, song_from_dict, song_to_dict, to_degree_sequence
from helpers import make_song


def test_note_event_validation():
    with pytest.raises(ValueError):
        NoteEvent(-1, 4, 60)
    with pytest.raises(ValueError):
        NoteEvent(0, 0, 60)
    with pytest.raises(ValueError):
        NoteEvent(0, 4, 128)


def test_song_rejects_non_monotonic_onsets():
    with pytest.raises(ValueError):
        make_song([(0, 4, 60), (0, 4, 62)], 1)


def test_song_rejects_overflowing_note():
    with pytest.raises(ValueError):
        make_song([(12, 8, 60)], 1)


def test_song_rejects_bad_mode_and_tonic():
    with pytest.raises(ValueError):
        make_song([(0, 4, 60)], 1, tonic_pc=12)
    with pytest.raises(ValueError):
        make_song([(0, 4, 60)], 1, mode="dorian")


def test_degree_sequence_examples():
    song = make_song([(0, 4, 60), (4, 4, 64), (8, 4, 67)], 1, tonic_pc=0)
    assert to_degree_sequence(song) == (0, 4, 7)
    song = make_song([(0, 4, 57), (4, 4, 69)], 1, tonic_pc=9)
    assert to_degree_sequence(song) == (0, 0)
    song = make_song([(0, 4, 66)], 1, tonic_pc=7)
    assert to_degree_sequence(song) == (11,)


def test_json_roundtrip_exact():
    song = make_song(
        [(0, 4, 60), (6, 2, 72), (8, 8, 55)], 2, tonic_pc=5, mode="minor", song_id="abc"
    )
    data = song_to_dict(song)
    assert json.loads(json.dumps(data)) == data
    assert song_from_dict(data) == song


def test_json_roundtrip_fuzzed():
    rng = np.random.default_rng(3)
    for _ in range(200):
        num_measures = int(rng.integers(1, 9))
        total = num_measures * 16
        onsets = sorted(rng.choice(total, size=min(total, int(rng.integers(1, 20))), replace=False))
        notes = []
        for i, onset in enumerate(onsets):
            limit = onsets[i + 1] - onset if i + 1 < len(onsets) else total - onset
            notes.append(
                (int(onset), int(rng.integers(1, limit + 1)), int(rng.integers(0, 128)))
            )
        song = make_song(
            notes,
            num_measures,
            tonic_pc=int(rng.integers(0, 12)),
            mode=("major", "minor")[int(rng.integers(0, 2))],
        )
        assert song_from_dict(song_to_dict(song)) == song
