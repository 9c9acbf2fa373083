"""Phrase-label strings: the compact "i4A8A8B8B8o4" structure notation.

Each token is one letter followed by a decimal measure count.  Uppercase
letters are melodic phrases, lowercase non-melodic.  Tokens tile the song
in order.
"""

from __future__ import annotations

import re

from ..errors import LabelMismatchError, ParseError
from ..song import PhraseLabel, Song, SongStructure

_TOKEN = re.compile(r"([A-Za-z])(\d+)")


def parse_label_string(text: str, song_id: str = "") -> SongStructure:
    """Parse a label string into a structure without checking song length."""
    text = text.strip()
    if not text:
        raise ParseError("empty label string")
    labels = []
    pos = 0
    start = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            raise ParseError(
                f"illegal label syntax at position {pos}: {text[pos:pos + 8]!r}"
            )
        letter, length = match.group(1), int(match.group(2))
        if length < 1:
            raise ParseError(f"zero-length phrase {letter!r} at position {pos}")
        labels.append(PhraseLabel(letter=letter, length_measures=length, start_measure=start))
        start += length
        pos = match.end()
    return SongStructure(song_id=song_id, labels=tuple(labels))


def parse_labels(text: str, song: Song) -> SongStructure:
    """Parse a label string and verify it tiles the song exactly."""
    structure = parse_label_string(text, song_id=song.id)
    if structure.num_measures != song.num_measures:
        raise LabelMismatchError(
            f"labels cover {structure.num_measures} measures but song "
            f"{song.id!r} has {song.num_measures}"
        )
    return structure


def render_labels(structure: SongStructure) -> str:
    """Inverse of parse_label_string."""
    return "".join(f"{lab.letter}{lab.length_measures}" for lab in structure.labels)


def read_label_file(text: str) -> dict[str, str]:
    """Parse a label file: one "<song_id><TAB><label string>" line per song."""
    out: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.rstrip("\n")
        if not line.strip():
            continue
        if "\t" not in line:
            raise ParseError(f"label file line {lineno} has no tab separator")
        song_id, label_string = line.split("\t", 1)
        out[song_id.strip()] = label_string.strip()
    return out
