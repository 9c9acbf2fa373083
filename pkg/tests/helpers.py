"""Shared test fixtures: tiny SMF writer and song builders."""

from __future__ import annotations

import struct

from melstruct.song import NoteEvent, Song

# --- minimal SMF writer (tests only) ---------------------------------------


def vlq(value: int) -> bytes:
    out = [value & 0x7F]
    value >>= 7
    while value:
        out.append((value & 0x7F) | 0x80)
        value >>= 7
    return bytes(reversed(out))


def meta(meta_type: int, payload: bytes) -> bytes:
    return bytes([0xFF, meta_type]) + vlq(len(payload)) + payload


def track_name(name: str) -> bytes:
    return meta(0x03, name.encode())


def time_signature(numerator: int, denominator: int) -> bytes:
    log2_den = denominator.bit_length() - 1
    return meta(0x58, bytes([numerator, log2_den, 24, 8]))


def key_signature(sf: int, minor: bool = False) -> bytes:
    return meta(0x59, struct.pack(">bB", sf, 1 if minor else 0))


def note_on(pitch: int, velocity: int = 64, channel: int = 0) -> bytes:
    return bytes([0x90 | channel, pitch, velocity])


def note_off(pitch: int, channel: int = 0) -> bytes:
    return bytes([0x80 | channel, pitch, 0])


def track_chunk(events: list[tuple[int, bytes]]) -> bytes:
    data = b"".join(vlq(delta) + event for delta, event in events)
    data += vlq(0) + meta(0x2F, b"")
    return b"MTrk" + struct.pack(">I", len(data)) + data


def smf_bytes(tracks: list[bytes], fmt: int = 1, ppq: int = 480) -> bytes:
    return b"MThd" + struct.pack(">IHHH", 6, fmt, len(tracks), ppq) + b"".join(tracks)


def simple_melody_track(
    notes: list[tuple[int, int, int]], name: str | None = None, ppq: int = 480
) -> bytes:
    """Track from (onset_tick, duration_ticks, pitch) triples, already sorted."""
    events: list[tuple[int, bytes]] = []
    if name is not None:
        events.append((0, track_name(name)))
    now = 0
    for onset, duration, pitch in notes:
        events.append((onset - now, note_on(pitch)))
        events.append((duration, note_off(pitch)))
        now = onset + duration
    return track_chunk(events)


# --- song builders -----------------------------------------------------------


def make_song(
    notes: list[tuple[int, int, int]],
    num_measures: int,
    tonic_pc: int = 0,
    mode: str = "major",
    song_id: str = "test",
) -> Song:
    return Song(
        id=song_id,
        notes=tuple(NoteEvent(*n) for n in sorted(notes)),
        num_measures=num_measures,
        tonic_pc=tonic_pc,
        mode=mode,
    )


def measure_block(measure: int, slots_pitches: list[tuple[int, int]]) -> list[tuple[int, int, int]]:
    """Notes filling one measure: (slot, pitch) pairs, durations to next onset."""
    notes = []
    slots = [s for s, _ in slots_pitches]
    for i, (slot, pitch) in enumerate(slots_pitches):
        nxt = slots[i + 1] if i + 1 < len(slots) else 16
        notes.append((measure * 16 + slot, nxt - slot, pitch))
    return notes
