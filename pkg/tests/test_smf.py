import struct

import pytest

from melstruct.errors import ParseError, UnsupportedInputError
from melstruct.ingest import parse_midi
from melstruct.ingest.quantize import quantize_tick
from melstruct.song import NoteEvent
from helpers import (
    key_signature,
    note_off,
    note_on,
    simple_melody_track,
    smf_bytes,
    time_signature,
    track_chunk,
    track_name,
)


def test_single_quarter_note():
    track = simple_melody_track([(0, 480, 60)])
    song = parse_midi(smf_bytes([track], fmt=0), song_id="s")
    assert song.notes == (NoteEvent(0, 4, 60),)
    assert song.num_measures == 1


def test_off_grid_onset_rounds_to_nearest():
    track = simple_melody_track([(475, 480, 60)])
    song = parse_midi(smf_bytes([track], fmt=0))
    assert song.notes[0].onset == 4


def test_quantize_rounding_table():
    # PPQ 480: one sixteenth = 120 ticks; halves round up
    table = {0: 0, 59: 0, 60: 1, 119: 1, 120: 1, 179: 1, 180: 2, 475: 4, 480: 4}
    for tick, expected in table.items():
        assert quantize_tick(tick, 480, 4) == expected, tick


def test_quantization_idempotent_on_grid_aligned_input():
    notes = [(0, 480, 60), (480, 240, 62), (720, 240, 64), (960, 960, 65)]
    track = simple_melody_track(notes)
    song = parse_midi(smf_bytes([track], fmt=0))
    assert [(n.onset, n.duration, n.pitch) for n in song.notes] == [
        (0, 4, 60),
        (4, 2, 62),
        (6, 2, 64),
        (8, 8, 65),
    ]


def test_sub_sixteenth_note_clamps_to_one_tick():
    track = simple_melody_track([(0, 30, 60), (480, 480, 62)])
    song = parse_midi(smf_bytes([track], fmt=0))
    assert song.notes[0].duration == 1


def test_non_44_time_signature_rejected():
    track = track_chunk(
        [(0, time_signature(3, 4)), (0, note_on(60)), (480, note_off(60))]
    )
    with pytest.raises(UnsupportedInputError):
        parse_midi(smf_bytes([track], fmt=0))


def test_44_time_signature_accepted():
    track = track_chunk(
        [(0, time_signature(4, 4)), (0, note_on(60)), (480, note_off(60))]
    )
    assert parse_midi(smf_bytes([track], fmt=0)).num_measures == 1


def test_malformed_header_has_byte_offset():
    with pytest.raises(ParseError) as info:
        parse_midi(b"MThd" + b"\x00" * 10)
    assert info.value.offset == 4
    with pytest.raises(ParseError):
        parse_midi(b"RIFF" + b"\x00" * 20)


def test_truncated_track_reports_offset():
    good = simple_melody_track([(0, 480, 60)])
    truncated = smf_bytes([good], fmt=0)[:-3]
    with pytest.raises(ParseError):
        parse_midi(truncated)


def test_smpte_division_rejected():
    header = b"MThd" + struct.pack(">IHHH", 6, 0, 1, 0xE250)
    with pytest.raises(UnsupportedInputError):
        parse_midi(header + simple_melody_track([(0, 480, 60)]))


def test_named_track_hint_wins():
    melody = simple_melody_track([(i * 480, 480, 72) for i in range(10)], name="MELODY")
    bass = simple_melody_track([(i * 480, 480, 36) for i in range(10)], name="BASS")
    song = parse_midi(smf_bytes([bass, melody]))
    assert song.notes[0].pitch == 72


def test_track_hint_case_insensitive():
    melody = simple_melody_track([(i * 480, 480, 72) for i in range(10)], name="Melody")
    other = simple_melody_track([(i * 480, 480, 80) for i in range(10)], name="LEAD")
    song = parse_midi(smf_bytes([other, melody]), track_hint="melody")
    assert song.notes[0].pitch == 72


def test_fallback_highest_mean_pitch():
    low = simple_melody_track([(i * 480, 480, 40) for i in range(10)], name="PIANO")
    high = simple_melody_track([(i * 480, 480, 80) for i in range(10)], name="LEAD")
    song = parse_midi(smf_bytes([low, high]))
    assert song.notes[0].pitch == 80


def test_fallback_requires_eight_notes():
    # three tracks, none named MELODY, none with >= 8 notes
    tiny1 = simple_melody_track([(0, 480, 90)], name="A")
    tiny2 = simple_melody_track([(0, 480, 40)], name="B")
    tiny3 = simple_melody_track([(0, 480, 60)], name="C")
    with pytest.raises(UnsupportedInputError):
        parse_midi(smf_bytes([tiny1, tiny2, tiny3]))


def test_single_track_with_notes_is_accepted_even_if_short():
    track = simple_melody_track([(0, 480, 60)], name="WHATEVER")
    assert len(parse_midi(smf_bytes([track], fmt=0)).notes) == 1


def test_no_notes_at_all_rejected():
    track = track_chunk([(0, track_name("MELODY"))])
    with pytest.raises(UnsupportedInputError):
        parse_midi(smf_bytes([track], fmt=0))


def test_simultaneous_onsets_keep_higher_pitch():
    events = [
        (0, note_on(60)),
        (0, note_on(64)),
        (480, note_off(60)),
        (0, note_off(64)),
    ]
    song = parse_midi(smf_bytes([track_chunk(events)], fmt=0))
    assert len(song.notes) == 1
    assert song.notes[0].pitch == 64


def test_overlapping_notes_truncated_at_next_onset():
    events = [
        (0, note_on(60)),
        (960, note_on(62)),  # 60 still sounding
        (0, note_off(60)),
        (480, note_off(62)),
    ]
    song = parse_midi(smf_bytes([track_chunk(events)], fmt=0))
    assert [(n.onset, n.duration) for n in song.notes] == [(0, 8), (8, 4)]


def test_running_status():
    events = [
        (0, bytes([0x90, 60, 64])),
        (480, bytes([60, 0])),  # running status note-on velocity 0 = off
        (0, bytes([62, 64])),
        (480, bytes([62, 0])),
    ]
    song = parse_midi(smf_bytes([track_chunk(events)], fmt=0))
    assert [n.pitch for n in song.notes] == [60, 62]


def test_key_signature_used_for_tonic():
    track = track_chunk(
        [(0, key_signature(1)), (0, note_on(60)), (480, note_off(60))]
    )
    song = parse_midi(smf_bytes([track], fmt=0))
    assert (song.tonic_pc, song.mode) == (7, "major")
    track = track_chunk(
        [(0, key_signature(0, minor=True)), (0, note_on(60)), (480, note_off(60))]
    )
    song = parse_midi(smf_bytes([track], fmt=0))
    assert (song.tonic_pc, song.mode) == (9, "minor")


def test_format_2_rejected():
    track = simple_melody_track([(0, 480, 60)])
    with pytest.raises(UnsupportedInputError):
        parse_midi(smf_bytes([track], fmt=2))


def test_note_count_preserved_across_quantization():
    # clustered short notes must not vanish
    notes = [(i * 100, 90, 60 + i % 5) for i in range(12)]
    track = simple_melody_track(notes)
    song = parse_midi(smf_bytes([track], fmt=0))
    assert len(song.notes) >= 10  # same-onset collisions may drop a note
    assert all(n.duration >= 1 for n in song.notes)


def test_max_note_end_within_measures():
    notes = [(0, 480, 60), (480 * 7, 480, 62)]
    song = parse_midi(smf_bytes([simple_melody_track(notes)], fmt=0))
    assert max(n.end for n in song.notes) <= song.num_measures * 16
