"""Grid quantization and monophony enforcement shared by all parsers."""

from __future__ import annotations

from ..errors import UnsupportedInputError
from ..song import NoteEvent, Song, TICKS_PER_MEASURE
from .key import resolve_tonic_from_notes


def quantize_tick(tick: int, ticks_per_sixteenth_num: int, ticks_per_sixteenth_den: int = 1) -> int:
    """Round a raw tick to the nearest sixteenth index, halves rounding up.

    The grid step is ``ticks_per_sixteenth_num / ticks_per_sixteenth_den``
    raw ticks, kept rational so MusicXML divisions that do not divide 4
    evenly stay exact.
    """
    num = ticks_per_sixteenth_num
    den = ticks_per_sixteenth_den
    # round-half-up of tick*den/num in integer arithmetic
    return (2 * tick * den + num) // (2 * num)


def enforce_monophony(notes: list[tuple[int, int, int]]) -> list[NoteEvent]:
    """Turn quantized (onset, duration, pitch) triples into a monophonic line.

    Simultaneous onsets keep the highest pitch; an earlier note overlapping a
    later onset is truncated at that onset.  Zero durations clamp to one tick
    before overlap resolution so note counts survive quantization.
    """
    cleaned = [(onset, max(1, dur), pitch) for onset, dur, pitch in notes]
    cleaned.sort(key=lambda n: (n[0], -n[2]))
    deduped: list[tuple[int, int, int]] = []
    for onset, dur, pitch in cleaned:
        if deduped and deduped[-1][0] == onset:
            continue  # lower pitch at the same onset
        deduped.append((onset, dur, pitch))
    result: list[NoteEvent] = []
    for i, (onset, dur, pitch) in enumerate(deduped):
        if i + 1 < len(deduped):
            dur = min(dur, deduped[i + 1][0] - onset)
        result.append(NoteEvent(onset=onset, duration=dur, pitch=pitch))
    return result


def notes_to_song(
    raw_notes: list[tuple[int, int, int]],
    ppq: int,
    song_id: str,
    notated_key: tuple[int, str] | None = None,
    min_measures: int = 1,
) -> Song:
    """Quantize raw PPQ-tick notes and assemble a Song.

    ``raw_notes`` are (onset_tick, duration_ticks, midi_pitch).  Onset and
    end are rounded to the sixteenth grid independently, so a note's
    quantized duration is the span between its rounded endpoints.
    """
    if not raw_notes:
        raise UnsupportedInputError("melody track contains no notes")
    quantized = []
    for onset, dur, pitch in raw_notes:
        q_on = quantize_tick(onset, ppq, 4)
        q_end = quantize_tick(onset + dur, ppq, 4)
        quantized.append((q_on, q_end - q_on, pitch))
    notes = enforce_monophony(quantized)
    last_end = max(n.end for n in notes)
    num_measures = max(min_measures, -(-last_end // TICKS_PER_MEASURE))
    tonic_pc, mode = resolve_tonic_from_notes(notes, notated=notated_key)
    return Song(
        id=song_id,
        notes=tuple(notes),
        num_measures=num_measures,
        tonic_pc=tonic_pc,
        mode=mode,
    )
