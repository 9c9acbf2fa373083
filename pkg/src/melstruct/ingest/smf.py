"""Standard MIDI File (format 0/1) melody ingestion.

Only the subset needed to pull a quantized melody line out of a pop-song
MIDI file is implemented: header/track framing, running status, note on/off
pairing, and the meta events that matter (track name, time signature, key
signature).  Tempo events are parsed and ignored; the sixteenth grid is
defined by pulses per quarter note, which tempo does not affect.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

from ..errors import ParseError, UnsupportedInputError
from ..song import Song, TICKS_PER_MEASURE
from .key import key_signature_to_tonic
from .quantize import notes_to_song

_HEADER = struct.Struct(">4sIHHH")

DEFAULT_TRACK_HINT = "MELODY"
MIN_FALLBACK_NOTES = 8


@dataclass
class _RawTrack:
    name: str = ""
    # (onset_tick, duration_ticks, pitch) in raw PPQ ticks
    notes: list[tuple[int, int, int]] = field(default_factory=list)


def _read_varlen(data: bytes, pos: int) -> tuple[int, int]:
    value = 0
    for _ in range(4):
        if pos >= len(data):
            raise ParseError("truncated variable-length quantity", offset=pos)
        byte = data[pos]
        pos += 1
        value = (value << 7) | (byte & 0x7F)
        if not byte & 0x80:
            return value, pos
    raise ParseError("variable-length quantity longer than 4 bytes", offset=pos)


def _decode_name(raw: bytes) -> str:
    try:
        return raw.decode("utf-8").strip()
    except UnicodeDecodeError:
        return raw.decode("latin-1").strip()


class _TrackReader:
    """Walks one MTrk chunk, collecting notes and the meta events we use."""

    def __init__(self, data: bytes, base_offset: int):
        self.data = data
        self.base = base_offset
        self.track = _RawTrack()
        self.time_signatures: list[tuple[int, int]] = []
        self.key_signature: tuple[int, str] | None = None

    def _fail(self, message: str, pos: int):
        raise ParseError(message, offset=self.base + pos)

    def run(self) -> None:
        data = self.data
        pos = 0
        tick = 0
        running_status: int | None = None
        open_notes: dict[int, list[int]] = {}

        while pos < len(data):
            delta, pos = _read_varlen(data, pos)
            tick += delta
            if pos >= len(data):
                self._fail("event status byte missing", pos)
            status = data[pos]
            if status & 0x80:
                pos += 1
                if status < 0xF0:
                    running_status = status
            else:
                if running_status is None:
                    self._fail(f"data byte 0x{status:02x} with no running status", pos)
                status = running_status

            kind = status & 0xF0
            if kind in (0x80, 0x90):  # note off / note on
                if pos + 2 > len(data):
                    self._fail("truncated note event", pos)
                pitch, velocity = data[pos], data[pos + 1]
                pos += 2
                if kind == 0x90 and velocity > 0:
                    open_notes.setdefault(pitch, []).append(tick)
                else:
                    starts = open_notes.get(pitch)
                    if starts:
                        start = starts.pop(0)
                        if tick > start:
                            self.track.notes.append((start, tick - start, pitch))
            elif kind in (0xA0, 0xB0, 0xE0):  # aftertouch, controller, pitch bend
                pos += 2
            elif kind in (0xC0, 0xD0):  # program change, channel pressure
                pos += 1
            elif status == 0xFF:  # meta
                if pos >= len(data):
                    self._fail("truncated meta event", pos)
                meta_type = data[pos]
                pos += 1
                length, pos = _read_varlen(data, pos)
                if pos + length > len(data):
                    self._fail("meta event data runs past end of track", pos)
                payload = data[pos : pos + length]
                pos += length
                if meta_type == 0x03:
                    self.track.name = _decode_name(payload)
                elif meta_type == 0x58 and length >= 2:
                    self.time_signatures.append((payload[0], 1 << payload[1]))
                elif meta_type == 0x59 and length >= 2:
                    sf = struct.unpack(">b", payload[0:1])[0]
                    mode = "minor" if payload[1] == 1 else "major"
                    self.key_signature = (sf, mode)
                elif meta_type == 0x2F:
                    break  # end of track
            elif status in (0xF0, 0xF7):  # sysex
                length, pos = _read_varlen(data, pos)
                pos += length
                if pos > len(data):
                    self._fail("sysex data runs past end of track", pos)
            else:
                self._fail(f"unknown status byte 0x{status:02x}", pos)

        # Close notes left hanging at end of track.
        for pitch, starts in open_notes.items():
            for start in starts:
                if tick > start:
                    self.track.notes.append((start, tick - start, pitch))


def parse_midi(
    data: bytes,
    track_hint: str | None = DEFAULT_TRACK_HINT,
    song_id: str = "song",
) -> Song:
    """Parse an SMF byte stream into a quantized melody Song.

    The melody track is the one whose name matches ``track_hint``
    (case-insensitive); if none matches, the track with the highest mean
    pitch among tracks with at least 8 notes is used.  Files that declare a
    time signature other than 4/4 are rejected.
    """
    if len(data) < 14:
        raise ParseError("file too short for an SMF header", offset=0)
    magic, header_len, fmt, ntracks, division = _HEADER.unpack(data[:14])
    if magic != b"MThd":
        raise ParseError("missing MThd magic", offset=0)
    if header_len < 6:
        raise ParseError(f"bad header length {header_len}", offset=4)
    if fmt not in (0, 1):
        raise UnsupportedInputError(f"SMF format {fmt} not supported (only 0 and 1)")
    if division & 0x8000:
        raise UnsupportedInputError("SMPTE time division not supported")
    if division == 0:
        raise ParseError("zero ticks-per-quarter division", offset=12)

    pos = 8 + header_len
    tracks: list[_RawTrack] = []
    time_signatures: list[tuple[int, int]] = []
    key_signature: tuple[int, str] | None = None
    for _ in range(ntracks):
        if pos + 8 > len(data):
            raise ParseError("expected MTrk chunk header", offset=pos)
        if data[pos : pos + 4] != b"MTrk":
            raise ParseError("missing MTrk magic", offset=pos)
        (length,) = struct.unpack(">I", data[pos + 4 : pos + 8])
        start = pos + 8
        end = start + length
        if end > len(data):
            raise ParseError("track data runs past end of file", offset=pos + 4)
        reader = _TrackReader(data[start:end], start)
        reader.run()
        tracks.append(reader.track)
        time_signatures.extend(reader.time_signatures)
        if key_signature is None:
            key_signature = reader.key_signature
        pos = end

    for num, den in time_signatures:
        if (num, den) != (4, 4):
            raise UnsupportedInputError(f"time signature {num}/{den} is not 4/4")

    melody = _select_melody_track(tracks, track_hint)
    notated = None
    if key_signature is not None:
        notated = (key_signature_to_tonic(key_signature[0], key_signature[1]), key_signature[1])
    return notes_to_song(melody.notes, division, song_id, notated_key=notated)


def _select_melody_track(tracks: list[_RawTrack], track_hint: str | None) -> _RawTrack:
    if track_hint:
        wanted = track_hint.strip().lower()
        for track in tracks:
            if track.name.lower() == wanted and track.notes:
                return track
    candidates = [t for t in tracks if len(t.notes) >= MIN_FALLBACK_NOTES]
    if not candidates:
        # Single-track files get the benefit of the doubt if they have notes.
        with_notes = [t for t in tracks if t.notes]
        if len(with_notes) == 1:
            return with_notes[0]
        raise UnsupportedInputError("no candidate melody track found")
    return max(candidates, key=lambda t: sum(n[2] for n in t.notes) / len(t.notes))
