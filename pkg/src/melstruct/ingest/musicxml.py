"""MusicXML (uncompressed score-partwise) melody ingestion.

Reads the first part of a score-partwise document: pitches, durations,
rests, chords, ties, backup/forward cursor moves, the key signature and the
time signature.  Grace notes carry no duration and are skipped.  Positions
are tracked as exact fractions of a sixteenth until the final rounding, so
odd ``divisions`` values do not accumulate error.

Pickup (incomplete) measures are laid out from the start of their measure
slot; the fixed 16-ticks-per-measure grid is assumed throughout.
"""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from fractions import Fraction

from ..errors import ParseError, UnsupportedInputError
from ..song import Song, TICKS_PER_MEASURE
from .key import key_signature_to_tonic
from .quantize import enforce_monophony

_STEP_SEMITONES = {"C": 0, "D": 2, "E": 4, "F": 5, "G": 7, "A": 9, "B": 11}


@dataclass
class _FracNote:
    onset: Fraction  # sixteenths from song start
    duration: Fraction
    pitch: int
    tie_start: bool
    tie_stop: bool


def _text(elem: ET.Element | None) -> str | None:
    if elem is None or elem.text is None:
        return None
    return elem.text.strip()


def _pitch_to_midi(note: ET.Element) -> int | None:
    pitch = note.find("pitch")
    if pitch is None:
        return None
    step = _text(pitch.find("step"))
    octave = _text(pitch.find("octave"))
    if step is None or octave is None:
        raise ParseError("pitch element missing step or octave")
    alter = _text(pitch.find("alter"))
    midi = (int(octave) + 1) * 12 + _STEP_SEMITONES[step.upper()]
    if alter is not None:
        midi += int(round(float(alter)))
    return midi


def _round_half_up(x: Fraction) -> int:
    return math.floor(x + Fraction(1, 2))


def parse_musicxml(data: bytes | str, song_id: str = "song") -> Song:
    """Parse an uncompressed score-partwise document into a Song."""
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise ParseError(f"unparseable MusicXML: {exc}") from exc
    if root.tag != "score-partwise":
        raise UnsupportedInputError(
            f"only score-partwise documents are supported, got <{root.tag}>"
        )
    part = root.find("part")
    if part is None:
        raise UnsupportedInputError("document has no part element")

    divisions: int | None = None
    notated_key: tuple[int, str] | None = None
    frac_notes: list[_FracNote] = []
    measures = part.findall("measure")

    for measure_idx, measure in enumerate(measures):
        measure_start = Fraction(measure_idx * TICKS_PER_MEASURE)
        cursor = Fraction(0)  # divisions units from measure start
        last_onset_div: Fraction | None = None
        for elem in measure:
            if elem.tag == "attributes":
                div_text = _text(elem.find("divisions"))
                if div_text is not None:
                    divisions = int(div_text)
                    if divisions < 1:
                        raise ParseError(f"bad divisions value {divisions}")
                time = elem.find("time")
                if time is not None:
                    beats = _text(time.find("beats"))
                    beat_type = _text(time.find("beat-type"))
                    if beats is not None and (beats, beat_type) != ("4", "4"):
                        raise UnsupportedInputError(
                            f"time signature {beats}/{beat_type} is not 4/4"
                        )
                key = elem.find("key")
                if key is not None and notated_key is None:
                    fifths_text = _text(key.find("fifths"))
                    if fifths_text is not None:
                        mode = _text(key.find("mode")) or "major"
                        if mode not in ("major", "minor"):
                            mode = "major"
                        notated_key = (
                            key_signature_to_tonic(int(fifths_text), mode),
                            mode,
                        )
            elif elem.tag in ("backup", "forward"):
                dur_text = _text(elem.find("duration"))
                if dur_text is None:
                    raise ParseError(f"{elem.tag} element missing duration")
                if divisions is None:
                    raise UnsupportedInputError("no divisions declared before durations")
                delta = Fraction(int(dur_text))
                cursor += -delta if elem.tag == "backup" else delta
            elif elem.tag == "note":
                if elem.find("grace") is not None:
                    continue
                dur_text = _text(elem.find("duration"))
                if dur_text is None:
                    raise ParseError("note element missing duration")
                if divisions is None:
                    raise UnsupportedInputError("no divisions declared before durations")
                dur_div = Fraction(int(dur_text))
                is_chord = elem.find("chord") is not None
                if is_chord and last_onset_div is not None:
                    onset_div = last_onset_div
                else:
                    onset_div = cursor
                    cursor += dur_div
                    last_onset_div = onset_div
                if elem.find("rest") is not None:
                    continue
                midi = _pitch_to_midi(elem)
                if midi is None:
                    raise ParseError("unpitched non-rest note")
                ties = {t.get("type") for t in elem.findall("tie")}
                to_sixteenths = Fraction(4, divisions)
                frac_notes.append(
                    _FracNote(
                        onset=measure_start + onset_div * to_sixteenths,
                        duration=dur_div * to_sixteenths,
                        pitch=midi,
                        tie_start="start" in ties,
                        tie_stop="stop" in ties,
                    )
                )

    merged = _merge_ties(frac_notes)
    quantized: list[tuple[int, int, int]] = []
    for note in merged:
        q_on = _round_half_up(note.onset)
        q_end = _round_half_up(note.onset + note.duration)
        quantized.append((q_on, q_end - q_on, note.pitch))
    notes = enforce_monophony(quantized) if quantized else []

    num_measures = max(1, len(measures))
    if notes:
        last_end = max(n.end for n in notes)
        num_measures = max(num_measures, -(-last_end // TICKS_PER_MEASURE))

    if notated_key is not None:
        tonic_pc, mode = notated_key
    elif notes:
        from .key import resolve_tonic_from_notes

        tonic_pc, mode = resolve_tonic_from_notes(notes)
    else:
        tonic_pc, mode = 0, "major"  # note-less document, nothing to infer from

    return Song(
        id=song_id,
        notes=tuple(notes),
        num_measures=num_measures,
        tonic_pc=tonic_pc,
        mode=mode,
    )


def _merge_ties(notes: list[_FracNote]) -> list[_FracNote]:
    """Join tie chains (same pitch, abutting spans) into single notes."""
    notes = sorted(notes, key=lambda n: (n.onset, -n.pitch))
    merged: list[_FracNote] = []
    for note in notes:
        if merged and note.tie_stop:
            prev = merged[-1]
            if (
                prev.tie_start
                and prev.pitch == note.pitch
                and prev.onset + prev.duration == note.onset
            ):
                merged[-1] = _FracNote(
                    onset=prev.onset,
                    duration=prev.duration + note.duration,
                    pitch=prev.pitch,
                    tie_start=note.tie_start,
                    tie_stop=prev.tie_stop,
                )
                continue
        merged.append(note)
    return merged
