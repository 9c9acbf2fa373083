"""Canonical melody representation.

All melstruct analyses operate on :class:`Song`: a monophonic melody whose
note onsets and durations sit on a sixteenth-note grid, in 4/4 time, with a
resolved tonic.  One measure is 16 grid ticks, one half note 8.

Phrase structure is a :class:`SongStructure`: a list of letter labels that
tile the song measure-for-measure.  Uppercase letters are melodic phrases,
lowercase are non-melodic (intro/outro/bridge style) material.  The letters
``X``/``x`` are reserved for phrases that repeat nothing else in the song.
"""

from __future__ import annotations

from dataclasses import dataclass, field

TICKS_PER_MEASURE = 16
TICKS_PER_HALF_NOTE = 8

MODES = ("major", "minor")

# Letters reserved for phrases that are not repetitions of anything.
UNIQUE_LETTERS = frozenset("Xx")


@dataclass(frozen=True, slots=True, order=True)
class NoteEvent:
    """One melody note on the sixteenth grid."""

    onset: int
    duration: int
    pitch: int

    def __post_init__(self):
        if self.onset < 0:
            raise ValueError(f"onset must be >= 0, got {self.onset}")
        if self.duration < 1:
            raise ValueError(f"duration must be >= 1, got {self.duration}")
        if not 0 <= self.pitch <= 127:
            raise ValueError(f"pitch must be a MIDI pitch 0..127, got {self.pitch}")

    @property
    def end(self) -> int:
        return self.onset + self.duration


@dataclass(frozen=True)
class Song:
    """A quantized monophonic melody in 4/4 with a resolved tonic."""

    id: str
    notes: tuple[NoteEvent, ...]
    num_measures: int
    tonic_pc: int
    mode: str
    ticks_per_measure: int = TICKS_PER_MEASURE

    def __post_init__(self):
        object.__setattr__(self, "notes", tuple(self.notes))
        if self.ticks_per_measure != TICKS_PER_MEASURE:
            raise ValueError("only 4/4 songs (16 sixteenths per measure) are supported")
        if self.num_measures < 1:
            raise ValueError("num_measures must be >= 1")
        if not 0 <= self.tonic_pc <= 11:
            raise ValueError(f"tonic_pc must be 0..11, got {self.tonic_pc}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        total = self.num_measures * TICKS_PER_MEASURE
        prev_onset = -1
        for note in self.notes:
            if note.onset <= prev_onset:
                raise ValueError("notes must be strictly ascending by onset (monophonic)")
            if note.end > total:
                raise ValueError(
                    f"note ending at tick {note.end} exceeds song length {total}"
                )
            prev_onset = note.onset

    @property
    def total_ticks(self) -> int:
        return self.num_measures * TICKS_PER_MEASURE


def to_degree_sequence(song: Song) -> tuple[int, ...]:
    """Map each note to its scale degree: pitch class relative to the tonic.

    The alphabet is the 12 octave-folded pitch classes; order follows note
    order.
    """
    return tuple((note.pitch - song.tonic_pc) % 12 for note in song.notes)


def song_to_dict(song: Song) -> dict:
    """Canonical JSON-compatible form of a song."""
    return {
        "id": song.id,
        "tonic_pc": song.tonic_pc,
        "mode": song.mode,
        "num_measures": song.num_measures,
        "notes": [[n.onset, n.duration, n.pitch] for n in song.notes],
    }


def song_from_dict(data: dict) -> Song:
    notes = tuple(NoteEvent(o, d, p) for o, d, p in data["notes"])
    return Song(
        id=data["id"],
        notes=notes,
        num_measures=data["num_measures"],
        tonic_pc=data["tonic_pc"],
        mode=data["mode"],
    )


@dataclass(frozen=True, slots=True)
class PhraseLabel:
    """One labeled phrase: a letter plus a measure span."""

    letter: str
    length_measures: int
    start_measure: int

    def __post_init__(self):
        if len(self.letter) != 1 or not self.letter.isalpha():
            raise ValueError(f"phrase letter must be a single letter, got {self.letter!r}")
        if self.length_measures < 1:
            raise ValueError("phrase length must be >= 1 measure")
        if self.start_measure < 0:
            raise ValueError("phrase start must be >= 0")

    @property
    def end_measure(self) -> int:
        return self.start_measure + self.length_measures

    @property
    def is_melodic(self) -> bool:
        return self.letter.isupper()

    @property
    def start_tick(self) -> int:
        return self.start_measure * TICKS_PER_MEASURE

    @property
    def end_tick(self) -> int:
        return self.end_measure * TICKS_PER_MEASURE


@dataclass(frozen=True)
class SongStructure:
    """A tiling sequence of labeled phrases for one song."""

    song_id: str
    labels: tuple[PhraseLabel, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if not self.labels:
            raise ValueError("a structure needs at least one phrase")
        pos = self.labels[0].start_measure
        if pos != 0:
            raise ValueError("first phrase must start at measure 0")
        for lab in self.labels:
            if lab.start_measure != pos:
                raise ValueError(
                    f"phrase {lab.letter!r} starts at {lab.start_measure}, expected {pos}"
                )
            pos = lab.end_measure

    @property
    def num_measures(self) -> int:
        return self.labels[-1].end_measure

    def letter_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for lab in self.labels:
            counts[lab.letter] = counts.get(lab.letter, 0) + 1
        return counts

    def is_unique_phrase(self, index: int) -> bool:
        """True if the phrase repeats nothing else in the song.

        ``X``/``x`` phrases are unique by reservation even if the letter is
        reused after the single-letter alphabet runs out.
        """
        letter = self.labels[index].letter
        if letter in UNIQUE_LETTERS:
            return True
        return self.letter_counts()[letter] == 1

    def phrase_at_measure(self, measure: int) -> int:
        """Index of the phrase containing a measure."""
        if not 0 <= measure < self.num_measures:
            raise IndexError(f"measure {measure} outside structure")
        for i, lab in enumerate(self.labels):
            if lab.start_measure <= measure < lab.end_measure:
                return i
        raise AssertionError("unreachable: labels tile the song")

    def phrase_at_tick(self, tick: int) -> int:
        return self.phrase_at_measure(tick // TICKS_PER_MEASURE)


@dataclass(frozen=True, slots=True)
class Section:
    """A maximal run of repeated melodic phrases."""

    start_measure: int
    length_measures: int
    phrase_letters: tuple[str, ...]

    @property
    def end_measure(self) -> int:
        return self.start_measure + self.length_measures
